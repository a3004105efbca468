"""Print the Hilbert series of B(V) for a config and check it is palindromic."""

import argparse
import time

from _common import ROOT, load


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("config", nargs="?", default=str(ROOT / "configs/zeta9.cfg"))
    ap.add_argument("--order")
    args = ap.parse_args()
    t0 = time.time()
    s = load(args.config, order_override=args.order)
    H = s.stratification.final_system()
    dim = H.dimension()
    hs = H.hilbert_series(H.certificate.top_degree)
    print(f"order {s.order}  dim {dim.value}  exact {dim.exact}  top degree {len(hs) - 1}")
    print(f"palindromic {hs == hs[::-1]}  peak {max(hs)}  [{time.time() - t0:.1f} s]")
    for k, c in enumerate(hs):
        print(f"{k:3d} {c}")


if __name__ == "__main__":
    main()
