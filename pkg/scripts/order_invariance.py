"""Complete B(V) under both letter precedences and compare dimensions and Hilbert series."""

import argparse
import time

from _common import ROOT, load


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("config", nargs="?", default=str(ROOT / "configs/zeta9.cfg"))
    args = ap.parse_args()
    series = {}
    for order in ("x2>x1", "x1>x2"):
        t0 = time.time()
        H = load(args.config, order_override=order).stratification.final_system()
        series[order] = H.hilbert_series(H.certificate.top_degree)
        print(f"{order}: dim {H.dimension().value}, rules {len(H.rules)} [{time.time() - t0:.1f} s]")
    a, b = series.values()
    print("same Hilbert series:", a == b)


if __name__ == "__main__":
    main()
