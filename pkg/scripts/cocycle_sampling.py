"""Sample triples of basis elements and check the cocycle axioms of the section."""

import argparse
import random
import time

from _common import ROOT, load
from nichols_lift.algebra import SmashElement
from nichols_lift.lifting import Section, admissibility, build_cleft, check_cocycle


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("config", nargs="?", default=str(ROOT / "configs/zeta9.cfg"))
    ap.add_argument("--lambda", dest="lam", default="x1^18=1,x12^18=1", help="relation=value,...")
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--max-degree", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    s = load(args.config)
    S = s.stratification
    d = s.datum
    values = {k: int(v) for k, v in (kv.split("=") for kv in args.lam.split(","))}
    t0 = time.time()
    A = build_cleft(S, admissibility(S).assign(values))
    H = S.final_system()
    sec = Section(A.system, H)
    print(f"cleft object built [{time.time() - t0:.1f} s]")
    rng = random.Random(args.seed)
    words = [w for lv in H.normal_words(args.max_degree) for w in lv]
    elems = list(d.group.elements())

    def pick():
        g = rng.choice(elems) if rng.random() < 0.25 else d.group.identity()
        return SmashElement.monomial(d, rng.choice(words), g)

    t0 = time.time()
    rep = check_cocycle(sec, [(pick(), pick(), pick()) for _ in range(args.samples)])
    print(f"samples {rep.samples} normalized {rep.normalized} identity {rep.cocycle_identity} [{time.time() - t0:.1f} s]")
    for f in rep.failures[:5]:
        print("  ", f)


if __name__ == "__main__":
    main()
