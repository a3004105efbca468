"""Build the liftings for every 0/1 value of the admissible parameters and report dimensions."""

import argparse
import itertools
import time

from _common import ROOT, load
from nichols_lift.lifting import admissibility, build_lifting


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("config", nargs="?", default=str(ROOT / "configs/zeta9.cfg"))
    ap.add_argument("--values", default="0,1")
    args = ap.parse_args()
    vals = [int(v) for v in args.values.split(",")]
    s = load(args.config)
    S = s.stratification
    P = admissibility(S)
    for slot in P.slots:
        print(f"{slot.name:20s} {slot.reason}")
    free = [slot.name for slot in P.slots if slot.admissible]
    for combo in itertools.product(vals, repeat=len(free)):
        t0 = time.time()
        L = build_lifting(P.assign(dict(zip(free, combo))), S)
        print(f"{dict(zip(free, combo))}: dim {L.dimension} passed {L.passed} [{time.time() - t0:.1f} s]")


if __name__ == "__main__":
    main()
