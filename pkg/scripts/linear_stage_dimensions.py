"""Dimension of the linear stage against the Clebsch-Gordan count.

Solutions of the linear equations are sl2-maps V(2) -> End(V(n) + V(m))
(one per left-multiplication pattern), so the dimension should equal the
number of copies of V(2) in End(V(n) + V(m)).

    python scripts/linear_stage_dimensions.py --max-n 8
"""

import argparse
from dataclasses import dataclass

from leibniz_bimod.sl2ext import ExtensionProblem, assemble_linear_stage


@dataclass
class Config:
    max_n: int = 8


def copies_of_adjoint(a, b):
    # V(a) (x) V(b) = V(|a-b|) + V(|a-b|+2) + ... + V(a+b)
    return int(abs(a - b) <= 2 <= a + b and (a + b) % 2 == 0)


def main(cfg: Config):
    print(f"{'n':>3} {'m':>3} {'ell':>5} {'dim':>4} {'CG':>4}")
    bad = 0
    for n in range(cfg.max_n + 1):
        for m in range(n + 1):
            dim = assemble_linear_stage(ExtensionProblem(n, m)).dim
            cg = sum(copies_of_adjoint(a, b) for a in (n, m) for b in (n, m))
            bad += dim != cg
            print(f"{n:>3} {m:>3} {str(ExtensionProblem(n, m).ell):>5} {dim:>4} {cg:>4}")
    print("mismatches:", bad)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=8)
    main(Config(ap.parse_args().max_n))
