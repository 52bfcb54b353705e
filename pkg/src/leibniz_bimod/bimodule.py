"""Leibniz bimodules as left/right action matrices.

Convention (fixed everywhere, including JSON): matrices act on column
coordinate vectors and entry (r, c) is the coefficient of basis vector r in
the image of basis vector c.  ``left[x]`` is m -> <x, m>, ``right[x]`` is
m -> <m, x>.  In matrix form the axioms read

    (1)  R_[x,y] = R_y R_x - R_x R_y
    (2)  L_x R_y = R_y L_x - L_[x,y]
    (3)  L_x L_y = L_[x,y] - R_y L_x
    (4)  L_x (R_y + L_y) = 0          (sum of (2) and (3))
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import Algebra, Subspace, is_leibniz, random_vector, saturate
from .exactlin import (
    ZERO,
    Matrix,
    Vector,
    enveloping_algebra,
    lin_comb,
    trace_form_rank,
    unit_vector,
)

MATRIX_CONVENTION = ("columns: entry (r, c) is the coefficient of basis vector r "
                     "in the image of basis vector c")


class BimoduleError(ValueError):
    pass


@dataclass(frozen=True)
class Bimodule:
    algebra: Algebra
    dim: int
    left: tuple[Matrix, ...]
    right: tuple[Matrix, ...]
    basis_names: tuple[str, ...] = ()

    def __post_init__(self):
        d = self.dim
        left, right = tuple(self.left), tuple(self.right)
        if len(left) != self.algebra.dim or len(right) != self.algebra.dim:
            raise BimoduleError("need one left and one right matrix per algebra basis element")
        for m in left + right:
            if m.shape != (d, d):
                raise BimoduleError(f"action matrix of shape {m.shape}, expected {d}x{d}")
        names = tuple(self.basis_names) or tuple(f"m{k}" for k in range(d))
        if len(names) != d:
            raise BimoduleError("one basis name per module dimension")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "basis_names", names)

    def L(self, x) -> Matrix:
        return self.left[self._idx(x)]

    def R(self, x) -> Matrix:
        return self.right[self._idx(x)]

    def _idx(self, x) -> int:
        return x if isinstance(x, int) else self.algebra.index(x)

    def left_of(self, coeffs: Sequence[Fraction]) -> Matrix:
        """Left action of a general algebra element, by linearity."""
        return _combine(coeffs, self.left, self.dim)

    def right_of(self, coeffs: Sequence[Fraction]) -> Matrix:
        return _combine(coeffs, self.right, self.dim)

    def action_maps(self):
        """All left and right action matrices (the generators of invariance)."""
        return self.left + self.right

    def with_left(self, left: Sequence[Matrix]) -> "Bimodule":
        return Bimodule(self.algebra, self.dim, tuple(left), self.right, self.basis_names)

    def to_json(self, include_algebra: bool = True) -> dict:
        names = self.algebra.basis_names
        out = {}
        if include_algebra:
            out["algebra"] = self.algebra.to_json()
        out["dim"] = self.dim
        out["basis"] = list(self.basis_names)
        out["convention"] = MATRIX_CONVENTION
        out["left"] = {n: [[str(x) for x in r] for r in m.row_tuples()] for n, m in zip(names, self.left)}
        out["right"] = {n: [[str(x) for x in r] for r in m.row_tuples()] for n, m in zip(names, self.right)}
        return out

    @classmethod
    def from_json(cls, data: Mapping, algebra: Algebra | None = None) -> "Bimodule":
        if algebra is None:
            if "algebra" not in data:
                raise BimoduleError("bimodule JSON is missing field 'algebra'")
            algebra = Algebra.from_json(data["algebra"])
        for key in ("dim", "left", "right"):
            if key not in data:
                raise BimoduleError(f"bimodule JSON is missing field {key!r}")
        d = int(data["dim"])
        mats = {}
        for side in ("left", "right"):
            table = data[side]
            got = []
            for n in algebra.basis_names:
                if n not in table:
                    raise BimoduleError(f"field {side!r} has no matrix for {n!r}")
                rows = table[n]
                if len(rows) != d or any(len(r) != d for r in rows):
                    raise BimoduleError(f"field {side}.{n} is not a {d}x{d} matrix")
                got.append(Matrix(d, d, rows))
            mats[side] = tuple(got)
        return cls(algebra, d, mats["left"], mats["right"], tuple(data.get("basis", ())))


def _combine(coeffs, mats, d) -> Matrix:
    out = Matrix.zeros(d)
    for c, m in zip(coeffs, mats):
        if c:
            out = out + m.scale(c)
    return out


# ---------------------------------------------------------------------------
# axioms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AxiomResult:
    passed: bool
    witness: tuple[str, str, int] | None = None
    lhs: Vector | None = None
    rhs: Vector | None = None

    def to_json(self) -> dict:
        out = {"passed": self.passed}
        if self.witness is not None:
            x, y, k = self.witness
            out["witness"] = {"x": x, "y": y, "basis_index": k,
                              "lhs": [str(v) for v in self.lhs],
                              "rhs": [str(v) for v in self.rhs]}
        return out


@dataclass(frozen=True)
class AxiomReport:
    axiom1: AxiomResult
    axiom2: AxiomResult
    axiom3: AxiomResult
    axiom4: AxiomResult

    @property
    def ok(self) -> bool:
        return self.axiom1.passed and self.axiom2.passed and self.axiom3.passed

    @property
    def redundancy_consistent(self) -> bool:
        """Axiom (4) must hold whenever (2) and (3) hold."""
        return not (self.axiom2.passed and self.axiom3.passed) or self.axiom4.passed

    def to_json(self) -> dict:
        return {"axiom1": self.axiom1.to_json(), "axiom2": self.axiom2.to_json(),
                "axiom3": self.axiom3.to_json(), "axiom4": self.axiom4.to_json(),
                "ok": self.ok}


def _first_failure(pairs, d, names) -> AxiomResult:
    """``pairs`` yields (x, y, lhs_matrix, rhs_matrix); compare column by column."""
    for x, y, lhs, rhs in pairs:
        if lhs == rhs:
            continue
        for k in range(d):
            a, b = lhs.col(k), rhs.col(k)
            if a != b:
                return AxiomResult(False, (names[x], names[y], k), a, b)
    return AxiomResult(True)


def check_axioms(m: Bimodule) -> AxiomReport:
    a = m.algebra
    if not is_leibniz(a):
        raise BimoduleError("the acting algebra is not a Leibniz algebra")
    d, n = m.dim, a.dim
    names = a.basis_names
    L, R = m.left, m.right
    Lb = [[_combine(a.c[x][y], L, d) for y in range(n)] for x in range(n)]
    Rb = [[_combine(a.c[x][y], R, d) for y in range(n)] for x in range(n)]
    pairs = [(x, y) for x in range(n) for y in range(n)]

    def ax1():
        for x, y in pairs:
            yield x, y, Rb[x][y], R[y] @ R[x] - R[x] @ R[y]

    def ax2():
        for x, y in pairs:
            yield x, y, L[x] @ R[y], R[y] @ L[x] - Lb[x][y]

    def ax3():
        for x, y in pairs:
            yield x, y, L[x] @ L[y], Lb[x][y] - R[y] @ L[x]

    def ax4():
        zero = Matrix.zeros(d)
        for x, y in pairs:
            yield x, y, L[x] @ (R[y] + L[y]), zero

    return AxiomReport(_first_failure(ax1(), d, names), _first_failure(ax2(), d, names),
                       _first_failure(ax3(), d, names), _first_failure(ax4(), d, names))


def right_module_ok(algebra: Algebra, right: Sequence[Matrix]) -> bool:
    """Axiom (1) alone: the right action is a right module of the algebra."""
    d = right[0].rows if right else 0
    for x in range(algebra.dim):
        for y in range(algebra.dim):
            if _combine(algebra.c[x][y], right, d) != right[y] @ right[x] - right[x] @ right[y]:
                return False
    return True


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def adjoint(a: Algebra) -> Bimodule:
    if not is_leibniz(a):
        raise BimoduleError("adjoint bimodule needs a Leibniz algebra")
    return Bimodule(a, a.dim,
                    tuple(a.left_mult(i) for i in range(a.dim)),
                    tuple(a.right_mult(i) for i in range(a.dim)),
                    a.basis_names)


def _checked_right(a: Algebra, right: Sequence[Matrix]) -> tuple[Matrix, ...]:
    right = tuple(right)
    if len(right) != a.dim:
        raise BimoduleError("need one right matrix per algebra basis element")
    if not right_module_ok(a, right):
        raise BimoduleError("right action violates axiom (1)")
    return right


def symmetric_from_right(a: Algebra, right: Sequence[Matrix], basis_names=()) -> Bimodule:
    """Left action is minus the right action."""
    right = _checked_right(a, right)
    d = right[0].rows if right else 0
    return Bimodule(a, d, tuple(-r for r in right), right, tuple(basis_names))


def antisymmetric_from_right(a: Algebra, right: Sequence[Matrix], basis_names=()) -> Bimodule:
    """Left action is zero."""
    right = _checked_right(a, right)
    d = right[0].rows if right else 0
    return Bimodule(a, d, tuple(Matrix.zeros(d) for _ in right), right, tuple(basis_names))


def is_symmetric(m: Bimodule) -> bool:
    return all(l == -r for l, r in zip(m.left, m.right))


def is_antisymmetric(m: Bimodule) -> bool:
    return all(l.is_zero() for l in m.left)


def direct_sum(*mods: Bimodule) -> Bimodule:
    if not mods:
        raise BimoduleError("direct sum of nothing")
    a = mods[0].algebra
    if any(mm.algebra != a for mm in mods):
        raise BimoduleError("summands act by different algebras")
    left = tuple(Matrix.block_diagonal(*(mm.left[i] for mm in mods)) for i in range(a.dim))
    right = tuple(Matrix.block_diagonal(*(mm.right[i] for mm in mods)) for i in range(a.dim))
    names = tuple(f"s{k}_{n}" for k, mm in enumerate(mods) for n in mm.basis_names)
    return Bimodule(a, sum(mm.dim for mm in mods), left, right, names)


def conjugate(m: Bimodule, t: Matrix, t_inv: Matrix) -> Bimodule:
    """Transport the structure along the linear isomorphism ``t``.

    The result has actions t A t^-1, so ``t`` intertwines m with it.
    """
    return Bimodule(m.algebra, m.dim,
                    tuple(t @ l @ t_inv for l in m.left),
                    tuple(t @ r @ t_inv for r in m.right),
                    m.basis_names)


def semidirect_sum(a: Algebra, m: Bimodule) -> Algebra:
    """The algebra on a (+) m with [l+u, l'+u'] = [l,l'] + <u,l'> + <l,u'>."""
    if m.algebra != a:
        raise BimoduleError("bimodule is over a different algebra")
    if not check_axioms(m).ok:
        raise BimoduleError("semidirect sum needs a verified bimodule")
    n, d = a.dim, m.dim
    total = n + d
    c = [[[ZERO] * total for _ in range(total)] for _ in range(total)]
    for i in range(n):
        for j in range(n):
            c[i][j][:n] = list(a.c[i][j])
    for i in range(n):
        L, R = m.left[i], m.right[i]
        for s in range(d):
            for r in range(d):
                c[i][n + s][n + r] = L[r, s]
                c[n + s][i][n + r] = R[r, s]
    names = a.basis_names + tuple(n_ for n_ in m.basis_names)
    if len(set(names)) != total:
        names = a.basis_names + tuple(f"m{k}" for k in range(d))
    return Algebra(total, names, c)


# ---------------------------------------------------------------------------
# subbimodules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubbimoduleBasis:
    parent: Bimodule = field(repr=False, compare=False)
    basis: Subspace

    @property
    def dim(self) -> int:
        return self.basis.dim

    def to_json(self) -> dict:
        return {"dim": self.dim, "basis": self.basis.to_json()}


def is_invariant(m: Bimodule, s: Subspace) -> bool:
    return all(s.contains(a.apply(v)) for a in m.action_maps() for v in s.basis)


def generated_subbimodule(m: Bimodule, vectors: Sequence[Sequence[Fraction]]) -> SubbimoduleBasis:
    maps = [a.apply for a in m.action_maps()]
    return SubbimoduleBasis(m, saturate(vectors, maps, m.dim))


def restrict(m: Bimodule, s: Subspace) -> Bimodule:
    """The subbimodule on ``s`` in the coordinates of its RREF basis."""
    if not is_invariant(m, s):
        raise BimoduleError("subspace is not invariant under the actions")

    def block(a: Matrix) -> Matrix:
        return Matrix.from_columns([s.coordinates(a.apply(v)) for v in s.basis], s.dim)

    names = tuple(f"u{k}" for k in range(s.dim))
    return Bimodule(m.algebra, s.dim, tuple(block(l) for l in m.left),
                    tuple(block(r) for r in m.right), names)


def quotient_bimodule(m: Bimodule, s: Subspace) -> Bimodule:
    """M / s on the non-pivot coordinates of s."""
    if not is_invariant(m, s):
        raise BimoduleError("subspace is not invariant under the actions")
    keep = s.complement_indices()

    def block(a: Matrix) -> Matrix:
        cols = []
        for k in keep:
            img = s.reduce(a.apply(unit_vector(m.dim, k)))
            cols.append(tuple(img[j] for j in keep))
        return Matrix.from_columns(cols, len(keep))

    return Bimodule(m.algebra, len(keep), tuple(block(l) for l in m.left),
                    tuple(block(r) for r in m.right), tuple(m.basis_names[k] for k in keep))


# ---------------------------------------------------------------------------
# general algebras
# ---------------------------------------------------------------------------

def action_algebra(m: Bimodule) -> list[Matrix]:
    """Unital associative algebra generated by all action matrices."""
    return enveloping_algebra(m.action_maps(), m.dim)


def is_completely_reducible_general(m: Bimodule) -> bool:
    """Exact criterion for any acting algebra.

    Subbimodules are the submodules over the action algebra A; M is a sum of
    simples iff A (acting faithfully) is semisimple, i.e. the trace form on A
    is nondegenerate.
    """
    if m.dim == 0:
        return True
    basis = action_algebra(m)
    return trace_form_rank(basis) == len(basis)


def is_simple_general(m: Bimodule) -> bool:
    """Absolute simplicity via Burnside: the actions generate all of End(M)."""
    if m.dim == 0:
        return False
    return len(action_algebra(m)) == m.dim * m.dim


def heuristic_subbimodules(m: Bimodule, trials: int = 20, seed: int = 0) -> list[SubbimoduleBasis]:
    """Proper subbimodules found by saturating basis and random vectors.

    A semi-decision only: finding nothing does not prove simplicity.
    """
    rng = random.Random(seed)
    seeds = [unit_vector(m.dim, k) for k in range(m.dim)]
    seeds += [random_vector(rng, m.dim) for _ in range(trials)]
    found: list[SubbimoduleBasis] = []
    for v in seeds:
        sub = generated_subbimodule(m, [v])
        if 0 < sub.dim < m.dim and all(sub.basis != f.basis for f in found):
            found.append(sub)
    return found
