"""Classify the extensions of V(n) by V(m) over a range of instances.

Prints one line per branch: the branch equations, its label and, for the two
indecomposable families, the isomorphism witness with m1(n) / m2(n).

    python scripts/reproduce_classification.py --max-n 6
"""

import argparse
import json
import time
from dataclasses import dataclass

from leibniz_bimod.sl2ext import classify


@dataclass
class Config:
    max_n: int = 6
    seed: int = 0
    json_out: str | None = None


def instances(max_n):
    for n in range(max_n + 1):
        for m in range(n + 1):
            yield n, m


def main(cfg: Config):
    dump = []
    for n, m in instances(cfg.max_n):
        t = time.perf_counter()
        rep = classify(n, m, seed=cfg.seed)
        dt = time.perf_counter() - t
        print(f"V({n}) + V({m})  ell={rep.problem.ell}  linear dim={rep.linear_stage.dim}  {dt:.2f}s")
        for b in rep.branches:
            fixed = ", ".join(f"{v}={p}" for v, p in b.branch.fixed) or "-"
            extra = ""
            if b.iso_witness is not None:
                extra = f"  iso (a, b) = ({', '.join(map(str, b.iso_witness))})"
            elif b.split_witness:
                extra = "  summand dims " + "+".join(str(s.dim) for s in b.split_witness)
            print(f"    {b.label:10s} [{fixed}]{extra}")
        dump.append(rep.to_json())
    if cfg.json_out:
        with open(cfg.json_out, "w") as fh:
            json.dump(dump, fh, indent=1)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json-out")
    a = ap.parse_args()
    main(Config(a.max_n, a.seed, a.json_out))
