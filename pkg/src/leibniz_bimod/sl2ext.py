"""Leibniz sl2-bimodule structures on V (+) W with V, W simple right modules.

The right action is fixed to irrep(n) (+) irrep(m).  The unknowns are the
3*(n+m+2)^2 entries of the left action matrices.  Axiom (2) is linear in
them; its solution space is parametrized by the f-action coefficients

    phi11: v_1 in <f, v_0>        phi12: w_{1-ell} in <f, v_0>
    phi21: v_{1+ell} in <f, w_0>  phi22: w_1 in <f, w_0>

(only those that exist for the given n, m).  Axiom (3) then gives quadratic
equations in these parameters, which are case-split and each branch is
classified by decomposing a representative bimodule.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import Subspace, sl2
from .bimodule import Bimodule, antisymmetric_from_right, check_axioms
from .decompose import DECOMPOSABLE, decompose, schur_iso_check
from .exactlin import (
    ZERO,
    AffineSolutionSpace,
    Matrix,
    inverse,
    lin_comb,
    rank,
    scalar,
    sparse_nullspace,
    unit_vector,
)
from .polysolve import Polynomial, PolySystem, SolutionBranch, case_split_solve

E, F, H = 0, 1, 2
ELEMENTS = ("e", "f", "h")
DEFAULT_BOUND = 24
PHI = ("phi11", "phi12", "phi21", "phi22")


class ExtensionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# right modules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IrrepSpec:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("highest weight must be nonnegative")


def irrep(spec: IrrepSpec | int) -> tuple[Matrix, Matrix, Matrix]:
    """(R_e, R_f, R_h) on x_0..x_n: x_k h = (n-2k) x_k, x_k f = x_{k+1},
    x_k e = -k(n+1-k) x_{k-1}."""
    n = spec.n if isinstance(spec, IrrepSpec) else IrrepSpec(spec).n
    d = n + 1
    re = [[ZERO] * d for _ in range(d)]
    rf = [[ZERO] * d for _ in range(d)]
    for k in range(d):
        if k >= 1:
            re[k - 1][k] = Fraction(-k * (n + 1 - k))
        if k + 1 < d:
            rf[k + 1][k] = Fraction(1)
    rh = Matrix.diagonal([n - 2 * k for k in range(d)])
    return Matrix(d, d, re), Matrix(d, d, rf), rh


def right_sum(n: int, m: int) -> tuple[Matrix, Matrix, Matrix]:
    a, b = irrep(n), irrep(m)
    return tuple(Matrix.block_diagonal(x, y) for x, y in zip(a, b))


def basis_names(n: int, m: int) -> tuple[str, ...]:
    return tuple(f"v{i}" for i in range(n + 1)) + tuple(f"w{j}" for j in range(m + 1))


def antisymmetric_irrep(n: int) -> Bimodule:
    return antisymmetric_from_right(sl2(), irrep(n), tuple(f"x{k}" for k in range(n + 1)))


# ---------------------------------------------------------------------------
# problem and linear stage
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtensionProblem:
    n: int
    m: int
    swapped: bool = False

    def __post_init__(self):
        if not (self.n >= self.m >= 0):
            raise ExtensionError("need n >= m >= 0")

    @classmethod
    def make(cls, n: int, m: int) -> "ExtensionProblem":
        if n < 0 or m < 0:
            raise ExtensionError("highest weights must be nonnegative")
        return cls(n, m, False) if n >= m else cls(m, n, True)

    @property
    def ell(self) -> Fraction:
        return Fraction(self.n - self.m, 2)

    @property
    def ell_integral(self) -> bool:
        return self.ell.denominator == 1

    @property
    def size(self) -> int:
        return self.n + self.m + 2

    @property
    def basis_names(self) -> tuple[str, ...]:
        return basis_names(self.n, self.m)

    def v(self, i: int) -> int | None:
        return i if 0 <= i <= self.n else None

    def w(self, j: int) -> int | None:
        return self.n + 1 + j if 0 <= j <= self.m else None

    def weight(self, k: int) -> int:
        return self.n - 2 * k if k <= self.n else self.m - 2 * (k - self.n - 1)

    def unknown(self, x: int, target: int, source: int) -> int:
        d = self.size
        return x * d * d + target * d + source

    @property
    def num_unknowns(self) -> int:
        return 3 * self.size ** 2

    @property
    def coefficient_labels(self) -> tuple[str, ...]:
        names = self.basis_names
        return tuple(f"<{ELEMENTS[x]},{names[s]}>:{names[t]}"
                     for x in range(3) for t in range(self.size) for s in range(self.size))

    def right(self) -> tuple[Matrix, Matrix, Matrix]:
        return right_sum(self.n, self.m)

    def left_from_vector(self, vec: Sequence[Fraction]) -> tuple[Matrix, Matrix, Matrix]:
        d = self.size
        return tuple(Matrix(d, d, [vec[x * d * d + t * d: x * d * d + (t + 1) * d] for t in range(d)])
                     for x in range(3))

    def bimodule(self, vec: Sequence[Fraction]) -> Bimodule:
        return Bimodule(sl2(), self.size, self.left_from_vector(vec), self.right(), self.basis_names)

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "ell": str(self.ell), "swapped": self.swapped,
                "num_unknowns": self.num_unknowns}


def linear_stage_rows(p: ExtensionProblem) -> list[dict[int, Fraction]]:
    """Axiom (2), L_x R_y - R_y L_x + L_[x,y] = 0, one row per matrix entry.

    Rows are ordered by (x, y, column, row)."""
    a = sl2()
    d = p.size
    R = p.right()
    rows = []
    for x in range(3):
        for y in range(3):
            Ry = R[y]
            for c in range(d):
                for r in range(d):
                    row: dict[int, Fraction] = {}

                    def put(k, val):
                        row[k] = row.get(k, ZERO) + val

                    for k in range(d):
                        if Ry[k, c]:
                            put(p.unknown(x, r, k), Ry[k, c])
                        if Ry[r, k]:
                            put(p.unknown(x, k, c), -Ry[r, k])
                    for z in range(3):
                        cz = a.c[x][y][z]
                        if cz:
                            put(p.unknown(z, r, c), cz)
                    row = {k: v for k, v in row.items() if v}
                    if row:
                        rows.append(row)
    return rows


def linear_stage_matrix(p: ExtensionProblem) -> Matrix:
    rows = linear_stage_rows(p)
    dense = [[ZERO] * p.num_unknowns for _ in rows]
    for r, row in zip(dense, rows):
        for k, v in row.items():
            r[k] = v
    return Matrix(len(rows), p.num_unknowns, dense)


def phi_functionals(p: ExtensionProblem) -> list[tuple[str, int]]:
    """(name, unknown index) for the f-action parameters that exist."""
    out = []
    v0, w0 = p.v(0), p.w(0)
    cand = [("phi11", v0, p.v(1))]
    if p.ell_integral:
        ell = int(p.ell)
        cand.append(("phi12", v0, p.w(1 - ell)))
        cand.append(("phi21", w0, p.v(1 + ell)))
    cand.append(("phi22", w0, p.w(1)))
    for name, src, tgt in cand:
        if src is not None and tgt is not None:
            out.append((name, p.unknown(F, tgt, src)))
    return out


@dataclass(frozen=True)
class LinearStage:
    problem: ExtensionProblem
    rows: tuple  # sparse rows {unknown: coefficient}
    solution: AffineSolutionSpace

    @property
    def dim(self) -> int:
        return self.solution.dim

    def matrix(self) -> Matrix:
        return linear_stage_matrix(self.problem)


def assemble_linear_stage(p: ExtensionProblem) -> LinearStage:
    rows = linear_stage_rows(p)
    basis = sparse_nullspace(rows, p.num_unknowns)
    names = tuple(f"p{k}" for k in range(len(basis)))
    if basis:
        # rebase so that the coordinates are the phi parameters
        chosen, picked = [], []
        for name, idx in phi_functionals(p):
            trial = picked + [[b[idx] for b in basis]]
            if rank(Matrix(len(trial), len(basis), trial)) == len(trial):
                picked, chosen = trial, chosen + [name]
        if len(chosen) == len(basis):
            phi_b = Matrix(len(basis), len(basis), picked)
            inv = inverse(phi_b)
            basis = [lin_comb(inv.col(k), basis, p.num_unknowns) for k in range(len(basis))]
            names = tuple(chosen)
    zero = tuple([ZERO] * p.num_unknowns)
    return LinearStage(p, tuple(rows), AffineSolutionSpace(zero, tuple(basis), names))


@dataclass(frozen=True)
class SparsityReport:
    ok: bool
    violations: tuple  # (basis index, label)
    cross_entries: int

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [list(v) for v in self.violations],
                "cross_entries": self.cross_entries}


def verify_sparsity_pattern(p: ExtensionProblem, sol: AffineSolutionSpace) -> SparsityReport:
    """L_e raises the right weight by 2, L_f lowers it by 2, L_h keeps it."""
    shift = {E: 2, F: -2, H: 0}
    d = p.size
    labels = p.coefficient_labels
    bad, cross = [], 0
    for b, vec in enumerate(sol.basis):
        for x in range(3):
            for t in range(d):
                for s in range(d):
                    k = p.unknown(x, t, s)
                    if not vec[k]:
                        continue
                    if p.weight(t) - p.weight(s) != shift[x]:
                        bad.append((b, labels[k]))
                    if (t <= p.n) != (s <= p.n):
                        cross += 1
    return SparsityReport(not bad, tuple(bad), cross)


# ---------------------------------------------------------------------------
# quadratic stage
# ---------------------------------------------------------------------------

def left_polynomials(stage: LinearStage) -> list[list[list[Polynomial]]]:
    """L_x as matrices of linear polynomials in the parameters."""
    p = stage.problem
    vs = stage.solution.variable_names
    d = p.size
    k = len(vs)
    mats = []
    for x in range(3):
        rows = []
        for t in range(d):
            row = []
            for s in range(d):
                idx = p.unknown(x, t, s)
                terms = {}
                for j, b in enumerate(stage.solution.basis):
                    if b[idx]:
                        e = [0] * k
                        e[j] = 1
                        terms[tuple(e)] = b[idx]
                row.append(Polynomial(vs, terms))
            rows.append(row)
        mats.append(rows)
    return mats


def assemble_quadratic_stage(p: ExtensionProblem, sol: AffineSolutionSpace) -> PolySystem:
    """Axiom (3), L_x L_y - L_[x,y] + R_y L_x = 0, in the parameters of ``sol``.

    Entries are collected by (x, y, column, row), made monic and deduplicated
    keeping the first occurrence."""
    a = sl2()
    vs = sol.variable_names
    kk = len(vs)
    if kk == 0:
        return PolySystem(vs, ())
    d = p.size
    R = p.right()
    B = [p.left_from_vector(b) for b in sol.basis]  # B[k][x]
    polys = []
    for x in range(3):
        for y in range(3):
            quad = {}
            for i in range(kk):
                for j in range(kk):
                    prod = B[i][x] @ B[j][y]
                    if not prod.is_zero():
                        e = [0] * kk
                        e[i] += 1
                        e[j] += 1
                        quad[(i, j)] = (tuple(e), prod)
            lin = []
            for i in range(kk):
                mat = R[y] @ B[i][x]
                for z in range(3):
                    if a.c[x][y][z]:
                        mat = mat - B[i][z].scale(a.c[x][y][z])
                e = [0] * kk
                e[i] = 1
                lin.append((tuple(e), mat))
            for c in range(d):
                for r in range(d):
                    terms = {}
                    for exps, mat in list(quad.values()) + lin:
                        v = mat[r, c]
                        if v:
                            terms[exps] = terms.get(exps, ZERO) + v
                    poly = Polynomial(vs, terms)
                    if not poly.is_zero():
                        polys.append(poly)
    return PolySystem(vs, tuple(polys)).normalized()


# ---------------------------------------------------------------------------
# closed-form families and the two indecomposables
# ---------------------------------------------------------------------------

def _left_from_table(n: int, m: int, entries) -> Bimodule:
    """``entries`` yields (x, source index, target index, coefficient); indices
    out of range are dropped (v_i = 0, w_j = 0 outside the basis)."""
    p = ExtensionProblem(n, m)
    d = p.size
    mats = [[[ZERO] * d for _ in range(d)] for _ in range(3)]
    for x, src, tgt, coeff in entries:
        if src is None or tgt is None or not coeff:
            continue
        mats[x][tgt][src] += scalar(coeff)
    left = tuple(Matrix(d, d, mm) for mm in mats)
    return Bimodule(sl2(), d, left, p.right(), p.basis_names)


def family_case(n: int, m: int) -> str:
    diff = n - m
    if diff == 0:
        return "0"
    if diff == 2:
        return "1"
    return "ge2"


def prop_family(case: str, n: int, m: int, params: Sequence) -> Bimodule:
    """Left action from the closed-form tables.

    case "0" (n = m) and "1" (n = m + 2) take (phi11, phi12, phi21, phi22);
    case "ge2" (n - m >= 4, or odd) takes (phi11, phi22).
    """
    params = [scalar(x) for x in params]
    p = ExtensionProblem(n, m)
    v, w = p.v, p.w
    if case == "0":
        if n != m or len(params) != 4:
            raise ExtensionError("case '0' needs n = m and four parameters")
        a11, a12, a21, a22 = params

        def gen():
            for src, (c1, c2) in ((v, (a11, a12)), (w, (a21, a22))):
                for i in range(n + 1):
                    yield H, src(i), v(i), (n - 2 * i) * c1
                    yield H, src(i), w(i), (n - 2 * i) * c2
                    yield F, src(i), v(i + 1), c1
                    yield F, src(i), w(i + 1), c2
                    yield E, src(i), v(i - 1), -i * (n - i + 1) * c1
                    yield E, src(i), w(i - 1), -i * (n - i + 1) * c2
        return _left_from_table(n, m, gen())
    if case == "1":
        if n != m + 2 or len(params) != 4:
            raise ExtensionError("case '1' needs n = m + 2 and four parameters")
        a11, a12, a21, a22 = params

        def gen():
            for i in range(n + 1):
                yield H, v(i), v(i), (n - 2 * i) * a11
                yield H, v(i), w(i - 1), -2 * i * a12
                yield F, v(i), v(i + 1), a11
                yield F, v(i), w(i), a12
                yield E, v(i), v(i - 1), -i * (n - i + 1) * a11
                yield E, v(i), w(i - 2), i * (i - 1) * a12
            for i in range(m + 1):
                yield H, w(i), v(i + 1), 2 * (m - i + 1) * a21
                yield H, w(i), w(i), (m - 2 * i) * a22
                yield F, w(i), v(i + 2), a21
                yield F, w(i), w(i + 1), a22
                yield E, w(i), v(i), (m - i + 1) * (m - i + 2) * a21
                yield E, w(i), w(i - 1), -(m - i + 1) * i * a22
        return _left_from_table(n, m, gen())
    if case == "ge2":
        diff = n - m
        if diff < 0 or (diff % 2 == 0 and diff < 4) or len(params) != 2:
            raise ExtensionError("case 'ge2' needs n - m >= 4 or odd, and two parameters")
        a11, a22 = params

        def gen():
            for src, top, c in ((v, n, a11), (w, m, a22)):
                for i in range(top + 1):
                    yield H, src(i), src(i), (top - 2 * i) * c
                    yield F, src(i), src(i + 1), c
                    yield E, src(i), src(i - 1), -i * (top - i + 1) * c
        return _left_from_table(n, m, gen())
    raise ExtensionError(f"unknown case {case!r}")


def family_vectors(case: str, n: int, m: int) -> list[tuple]:
    """Coefficient vectors of the family at the unit parameter points."""
    k = 2 if case == "ge2" else 4
    out = []
    for j in range(k):
        params = [0] * k
        params[j] = 1
        bm = prop_family(case, n, m, params)
        out.append(tuple(x for L in bm.left for x in L.flatten()))
    return out


def m1(n: int) -> Bimodule:
    """The indecomposable with zero left action on W, transcribed entrywise."""
    if n < 2:
        raise ExtensionError("m1 needs n >= 2")
    p = ExtensionProblem(n, n - 2)
    v, w = p.v, p.w

    def gen():
        for i in range(n + 1):
            yield H, v(i), v(i), -(n - 2 * i)
            yield H, v(i), w(i - 1), -2 * i
            yield F, v(i), v(i + 1), -1
            yield F, v(i), w(i), 1
            yield E, v(i), v(i - 1), i * (n - i + 1)
            yield E, v(i), w(i - 2), i * (i - 1)
    return _left_from_table(n, n - 2, gen())


def m2(n: int) -> Bimodule:
    """The indecomposable with zero left action on V, generated from the
    l = 1 family at (0, 0, 1, -1)."""
    if n < 2:
        raise ExtensionError("m2 needs n >= 2")
    return prop_family("1", n, n - 2, (0, 0, 1, -1))


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

SPLIT = "split"
M1_FAMILY = "M1_family"
M2_FAMILY = "M2_family"
ZERO_LABEL = "zero"
RESIDUAL = "residual"


@dataclass
class BranchResult:
    branch: SolutionBranch
    label: str
    point: dict | None = None
    representative: Bimodule | None = None
    split_witness: list = field(default_factory=list)  # list of Subspace
    iso_witness: tuple | None = None

    @property
    def is_split(self) -> bool:
        return self.label in (SPLIT, ZERO_LABEL)

    @property
    def is_indecomposable(self) -> bool:
        return self.label in (M1_FAMILY, M2_FAMILY)

    def to_json(self) -> dict:
        out = {"label": self.label, "branch": self.branch.to_json()}
        if self.point is not None:
            out["point"] = {k: str(v) for k, v in self.point.items()}
        if self.split_witness:
            out["split_witness"] = [s.to_json() for s in self.split_witness]
        if self.iso_witness is not None:
            out["iso_witness"] = [str(x) for x in self.iso_witness]
        if self.representative is not None:
            out["representative"] = self.representative.to_json(include_algebra=False)
        return out


@dataclass
class ClassificationReport:
    problem: ExtensionProblem
    linear_stage: AffineSolutionSpace
    quadratic_system: PolySystem | None
    branches: list[BranchResult]
    sparsity: SparsityReport
    notes: list[str] = field(default_factory=list)

    @property
    def representatives(self) -> list[Bimodule]:
        return [b.representative for b in self.branches
                if b.representative is not None and not b.is_split]

    def labels(self) -> list[str]:
        return [b.label for b in self.branches]

    def indecomposable_branches(self) -> list[BranchResult]:
        return [b for b in self.branches if b.is_indecomposable]

    def to_json(self) -> dict:
        labels = self.problem.coefficient_labels
        basis = [{labels[k]: str(x) for k, x in enumerate(vec) if x} for vec in self.linear_stage.basis]
        return {
            "problem": self.problem.to_json(),
            "linear_stage": {"dim": self.linear_stage.dim,
                             "parameters": list(self.linear_stage.variable_names),
                             "basis": basis},
            "sparsity": self.sparsity.to_json(),
            "quadratic_system": None if self.quadratic_system is None else self.quadratic_system.to_json(),
            "branches": [b.to_json() for b in self.branches],
            "notes": list(self.notes),
        }


def _representative_point(branch: SolutionBranch, rng: random.Random) -> dict | None:
    free = [v for v in branch.free_variables
            if not any(v in q.used_variables() for q in branch.residual.polynomials)]
    preset = {}
    fillers = iter((2, 3, 5, 7, 11, 13, 17, 19))
    cross = next((v for v in free if v in ("phi12", "phi21")), None)
    for v in free:
        preset[v] = 1 if v == cross else next(fillers)
    if not branch.residual.polynomials:
        return branch.point(preset)
    anchor = next((v for v in ("phi12", "phi21") if v in branch.free_variables), None)
    if anchor is not None:
        preset.setdefault(anchor, 1)
    return branch.sample_point(rng, preset=preset)


def classify_point(stage: LinearStage, point: dict, n_for_iso: int | None = None) -> tuple:
    """(label, representative, split witness, iso witness) for a parameter point."""
    p = stage.problem
    params = [point[v] for v in stage.solution.variable_names]
    rep = p.bimodule(stage.solution.point(params))
    if not check_axioms(rep).ok:
        raise ExtensionError("branch point fails the bimodule axioms")
    d = rep.dim
    if all(x == 0 for x in params):
        # no cross terms: V and W are already subbimodules
        halves = [Subspace.span([unit_vector(d, k) for k in ks], d)
                  for ks in (range(p.n + 1), range(p.n + 1, d))]
        return ZERO_LABEL, rep, halves, None
    dec = decompose(rep)
    if dec.verdict == DECOMPOSABLE:
        return SPLIT, rep, [s.basis for s in dec.summands], None
    if p.n - p.m == 2:
        for label, ref in ((M1_FAMILY, m1(p.n)), (M2_FAMILY, m2(p.n))):
            iso = schur_iso_check(rep, ref)
            if iso:
                return label, rep, [], iso.witness
    return RESIDUAL, rep, [], None


def classify(n: int, m: int, stage: str = "full", bound: int = DEFAULT_BOUND,
             seed: int = 0) -> ClassificationReport:
    if stage not in ("linear", "full"):
        raise ExtensionError("stage must be 'linear' or 'full'")
    p = ExtensionProblem.make(n, m)
    if p.n + p.m > bound:
        raise ExtensionError(f"n + m = {p.n + p.m} exceeds the bound {bound}")
    lin = assemble_linear_stage(p)
    sparsity = verify_sparsity_pattern(p, lin.solution)
    notes = []
    if p.swapped:
        notes.append(f"inputs swapped to n={p.n}, m={p.m}")
    if not sparsity.ok:
        notes.append("weight sparsity violated by the linear stage")
    if stage == "linear":
        return ClassificationReport(p, lin.solution, None, [], sparsity, notes)
    quad = assemble_quadratic_stage(p, lin.solution)
    rng = random.Random(seed)
    results = []
    for br in case_split_solve(quad):
        pt = _representative_point(br, rng)
        if pt is None:
            results.append(BranchResult(br, RESIDUAL))
            continue
        label, rep, split, iso = classify_point(lin, pt)
        results.append(BranchResult(br, label, pt, rep, split, iso))
    return ClassificationReport(p, lin.solution, quad, results, sparsity, notes)
