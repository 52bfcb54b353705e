"""Decomposition of Leibniz bimodules over sl2.

The right action makes M a finite-dimensional sl2-module, hence a sum of
chains u, uR_f, uR_f^2, ... started at highest-weight vectors u.  Everything
below works in that chain basis:

* endomorphisms commuting with the right action are block matrices acting on
  the highest-weight spaces, so End(M) is a small linear system;
* M splits iff End(M) is not local.  The trace form gives dim End/rad, and a
  Fitting decomposition of a suitable endomorphism produces the summands;
* a simple subbimodule is the chain of one highest-weight vector u with
  L_e u = 0, L_h u || u and L_f u || uR_f, polynomial conditions on u.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy

from .algebra import Subspace, sl2
from .bimodule import (
    Bimodule,
    SubbimoduleBasis,
    check_axioms,
    is_completely_reducible_general,
    is_simple_general,
    restrict,
)
from .exactlin import (
    ONE,
    ZERO,
    Matrix,
    inverse,
    lin_comb,
    nullspace,
    rank,
    unit_vector,
)
from .polysolve import Polynomial, PolySystem, SolutionBranch, case_split_solve

E, F, H = 0, 1, 2

SIMPLE = "simple"
INDECOMPOSABLE = "indecomposable_not_simple"
DECOMPOSABLE = "decomposable"


class DecompositionError(ValueError):
    pass


def is_sl2_bimodule(m: Bimodule) -> bool:
    ref = sl2()
    return m.algebra.dim == 3 and m.algebra.c == ref.c


def _require_sl2(m: Bimodule) -> None:
    if not is_sl2_bimodule(m):
        raise DecompositionError("expected a bimodule over sl2 in the basis (e, f, h)")


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------

def highest_weight_vectors(m: Bimodule) -> list[tuple[int, list[tuple]]]:
    """(weight, basis of ker R_e within the R_h-eigenspace), highest weight first.

    Raises unless the chains from these vectors form a basis of M, which is
    exactly the semisimple integral weight structure of an sl2-module.
    """
    _require_sl2(m)
    d = m.dim
    Re, Rh = m.right[E], m.right[H]
    out = []
    diag = all(Rh[r, c] == 0 for r in range(d) for c in range(d) if r != c)
    if diag:
        weights = sorted({Rh[k, k] for k in range(d)}, reverse=True)
        for lam in weights:
            if lam.denominator != 1 or lam < 0:
                continue
            cols = [k for k in range(d) if Rh[k, k] == lam]
            sub = Matrix.from_columns([Re.col(k) for k in cols], d)
            vecs = [lin_comb(v, [unit_vector(d, k) for k in cols], d) for v in nullspace(sub)]
            if vecs:
                out.append((int(lam), vecs))
    else:
        for lam in range(d - 1, -1, -1):
            stacked = (Rh - Matrix.identity(d).scale(lam)).stack(Re)
            vecs = nullspace(stacked)
            if vecs:
                out.append((lam, vecs))
    if sum((lam + 1) * len(vs) for lam, vs in out) != d:
        raise DecompositionError("right action does not have the weight structure of an sl2-module")
    return out


@dataclass
class ChainBasis:
    """Basis of M made of chains u R_f^j over highest-weight vectors u."""

    hw: list  # (weight, [vectors])
    index: dict  # (block, q, j) -> column of P
    P: Matrix
    Pinv: Matrix

    def block_sizes(self) -> list[int]:
        return [len(vs) for _, vs in self.hw]


def chain_basis(m: Bimodule) -> ChainBasis:
    hw = highest_weight_vectors(m)
    Rf = m.right[F]
    cols, index = [], {}
    for b, (lam, vecs) in enumerate(hw):
        for q, u in enumerate(vecs):
            v = u
            for j in range(lam + 1):
                index[(b, q, j)] = len(cols)
                cols.append(v)
                v = Rf.apply(v)
    P = Matrix.from_columns(cols, m.dim)
    if rank(P) != m.dim:
        raise DecompositionError("weight chains are dependent; right action is not an sl2-module")
    return ChainBasis(hw, index, P, inverse(P))


def _chain_span(cb: ChainBasis, b: int, coeffs: Sequence[Fraction], d: int) -> list[tuple]:
    """Chain vectors of the highest-weight vector sum_q coeffs[q] h_q in block b."""
    lam = cb.hw[b][0]
    out = []
    for j in range(lam + 1):
        cols = [cb.P.col(cb.index[(b, q, j)]) for q in range(len(coeffs))]
        out.append(lin_comb(coeffs, cols, d))
    return out


# ---------------------------------------------------------------------------
# endomorphisms
# ---------------------------------------------------------------------------

@dataclass
class EndomorphismRing:
    """Basis of End(M), each element given by its highest-weight blocks."""

    chain: ChainBasis
    basis: list  # list of list-of-Matrix (one k_b x k_b block per hw space)

    def full_matrix(self, blocks: Sequence[Matrix]) -> Matrix:
        cb = self.chain
        d = cb.P.rows
        coords = [[ZERO] * d for _ in range(d)]
        for b, (lam, vecs) in enumerate(cb.hw):
            k = len(vecs)
            for j in range(lam + 1):
                for q in range(k):
                    c = cb.index[(b, q, j)]
                    for p in range(k):
                        coords[cb.index[(b, p, j)]][c] = blocks[b][p, q]
        return cb.P @ Matrix(d, d, coords) @ cb.Pinv

    def trace(self, blocks) -> Fraction:
        return sum(((lam + 1) * blk.trace() for (lam, _), blk in zip(self.chain.hw, blocks)), ZERO)

    def semisimple_dim(self) -> int:
        """dim End/rad End, the rank of the trace form."""
        k = len(self.basis)
        gram = [[self.trace([x @ y for x, y in zip(self.basis[i], self.basis[j])])
                 for j in range(k)] for i in range(k)]
        return rank(Matrix(k, k, gram)) if k else 0


def endomorphism_ring(m: Bimodule, cb: ChainBasis | None = None) -> EndomorphismRing:
    cb = cb or chain_basis(m)
    sizes = cb.block_sizes()
    units = []  # (block, p, q)
    for b, k in enumerate(sizes):
        units += [(b, p, q) for p in range(k) for q in range(k)]
    d = m.dim
    Lc = [cb.Pinv @ L @ cb.P for L in m.left]  # left actions in chain coordinates

    def unit_chain_matrix(b, p, q):
        lam = cb.hw[b][0]
        rows = [[ZERO] * d for _ in range(d)]
        for j in range(lam + 1):
            rows[cb.index[(b, p, j)]][cb.index[(b, q, j)]] = ONE
        return Matrix(d, d, rows)

    comms = []
    for u in units:
        T = unit_chain_matrix(*u)
        comms.append(tuple(x for L in Lc for x in (T @ L - L @ T).flatten()))
    system = Matrix.from_columns(comms, 3 * d * d) if comms else Matrix.zeros(0, 0)
    basis = []
    for sol in nullspace(system):
        entries = [[[ZERO] * k for _ in range(k)] for k in sizes]
        for (b, p, q), t in zip(units, sol):
            entries[b][p][q] = t
        blocks = [Matrix(k, k, e) for k, e in zip(sizes, entries)]
        basis.append(blocks)
    return EndomorphismRing(cb, basis)


def _poly_of_matrix(coeffs: Sequence[Fraction], B: Matrix) -> Matrix:
    """coeffs highest degree first (Horner)."""
    k = B.rows
    out = Matrix.zeros(k)
    for c in coeffs:
        out = out @ B + Matrix.identity(k).scale(c)
    return out


_X = sympy.Symbol("x")


def _irreducible_factors(block: Matrix) -> list[tuple]:
    if block.rows == 0:
        return []
    sm = sympy.Matrix(block.rows, block.cols,
                      [sympy.Rational(x.numerator, x.denominator) for x in block.flatten()])
    cp = sm.charpoly(_X)
    _, facs = sympy.factor_list(cp.as_expr(), _X)
    out = []
    for g, _ in facs:
        coeffs = sympy.Poly(g, _X).monic().all_coeffs()
        out.append(tuple(Fraction(int(c.p), int(c.q)) for c in coeffs))
    return out


def _fitting_split(m: Bimodule, ring: EndomorphismRing, seed: int = 0) -> list[Subspace] | None:
    """Summands from an endomorphism whose characteristic polynomial has two
    distinct irreducible factors, or None if the candidates never do."""
    rng = random.Random(seed)
    cb = ring.chain
    candidates = list(ring.basis)
    for _ in range(40):
        cs = [rng.randint(-3, 3) for _ in ring.basis]
        combo = []
        for b, k in enumerate(cb.block_sizes()):
            acc = Matrix.zeros(k)
            for c, blocks in zip(cs, ring.basis):
                acc = acc + blocks[b].scale(c)
            combo.append(acc)
        candidates.append(combo)
    for blocks in candidates:
        factors = []
        for blk in blocks:
            for g in _irreducible_factors(blk):
                if g not in factors:
                    factors.append(g)
        if len(factors) < 2:
            continue
        pieces = []
        for g in factors:
            vecs = []
            for b, blk in enumerate(blocks):
                k = blk.rows
                gk = _poly_of_matrix(g, blk)
                power = Matrix.identity(k)
                for _ in range(k):
                    power = power @ gk
                for coeffs in nullspace(power):
                    vecs += _chain_span(cb, b, coeffs, m.dim)
            pieces.append(Subspace.span(vecs, m.dim))
        return pieces
    return None


def _split(m: Bimodule) -> list[Subspace]:
    """Indecomposable summands, in the coordinates of m."""
    cb = chain_basis(m)
    ring = endomorphism_ring(m, cb)
    if ring.semisimple_dim() <= 1:
        return [Subspace.full(m.dim)]
    pieces = _fitting_split(m, ring)
    if pieces is None:
        raise DecompositionError("endomorphism ring does not split over the rationals")
    out = []
    for s in pieces:
        sub = restrict(m, s)
        for t in _split(sub):
            out.append(Subspace.span([lin_comb(v, s.basis, m.dim) for v in t.basis], m.dim))
    return out


# ---------------------------------------------------------------------------
# simple subbimodules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimpleFamily:
    """Highest-weight vectors h_p + sum t_q h_q generating simple subbimodules."""

    weight: int
    chart: int
    variables: tuple[str, ...]
    branch: SolutionBranch

    @property
    def is_family(self) -> bool:
        free = [v for v in self.branch.free_variables if v in self.variables]
        return bool(free) or bool(self.branch.residual.polynomials)

    def to_json(self) -> dict:
        return {"weight": self.weight, "chart": self.chart,
                "variables": list(self.variables), "branch": self.branch.to_json()}


def simple_subbimodules(m: Bimodule, samples: int = 3, seed: int = 0
                        ) -> tuple[list[SimpleFamily], list[SubbimoduleBasis]]:
    """All simple subbimodules: the solution families and sampled members."""
    cb = chain_basis(m)
    d = m.dim
    Lc = [cb.Pinv @ L @ cb.P for L in m.left]
    rng = random.Random(seed)
    families, found = [], []

    def add(sub: Subspace):
        if all(sub != f.basis for f in found):
            found.append(SubbimoduleBasis(m, sub))

    for b, (lam, vecs) in enumerate(cb.hw):
        k = len(vecs)
        for p in range(k):
            names = tuple(f"t{q}" for q in range(p + 1, k))
            vs = names if names else ("t",)
            # u in chain coordinates, entries are polynomials in the chart variables
            u = [Polynomial.zero(vs) for _ in range(d)]
            u[cb.index[(b, p, 0)]] = Polynomial.constant(vs, 1)
            for q, name in zip(range(p + 1, k), names):
                u[cb.index[(b, q, 0)]] = Polynomial.var(vs, name)

            def act(A: Matrix) -> list[Polynomial]:
                return [sum((u[c] * A[r, c] for c in range(d) if A[r, c] and not u[c].is_zero()),
                            Polynomial.zero(vs)) for r in range(d)]

            eqs = list(act(Lc[E]))
            lh = act(Lc[H])
            c_h = lh[cb.index[(b, p, 0)]]
            eqs += [x - c_h * y for x, y in zip(lh, u)]
            lf = act(Lc[F])
            if lam >= 1:
                uf = [Polynomial.zero(vs) for _ in range(d)]
                for q in range(k):
                    uf[cb.index[(b, q, 1)]] = u[cb.index[(b, q, 0)]]
                c_f = lf[cb.index[(b, p, 1)]]
                eqs += [x - c_f * y for x, y in zip(lf, uf)]
            else:
                eqs += lf
            system = PolySystem(vs, tuple(e for e in eqs if not e.is_zero()))
            for br in case_split_solve(system):
                fam = SimpleFamily(lam, p, names, br)
                families.append(fam)
                tries = samples if fam.is_family else 1
                for _ in range(tries):
                    pt = (br.sample_point(rng) if fam.is_family
                          else br.point({v: 0 for v in br.free_variables}))
                    if pt is None:
                        continue
                    coeffs = [ZERO] * k
                    coeffs[p] = ONE
                    for q, name in zip(range(p + 1, k), names):
                        coeffs[q] = pt.get(name, ZERO)
                    sub = Subspace.span(_chain_span(cb, b, coeffs, d), d)
                    if sub.dim < d:
                        add(sub)
    return families, found


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class DecompositionReport:
    summands: list[SubbimoduleBasis]
    verdict: str
    proper_subbimodules_found: list[SubbimoduleBasis]
    simple_families: list[SimpleFamily] = field(default_factory=list)
    endomorphism_dim: int = 0
    semisimple_endomorphism_dim: int = 0

    @property
    def unique_proper_subbimodule(self) -> SubbimoduleBasis | None:
        """The only proper nonzero subbimodule, when the module has length two
        and exactly one simple subbimodule."""
        if self.verdict != INDECOMPOSABLE or len(self.proper_subbimodules_found) != 1:
            return None
        if any(f.is_family for f in self.simple_families):
            return None
        return self.proper_subbimodules_found[0]

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "summands": [s.to_json() for s in self.summands],
            "proper_subbimodules_found": [s.to_json() for s in self.proper_subbimodules_found],
            "simple_families": [f.to_json() for f in self.simple_families],
            "endomorphism_dim": self.endomorphism_dim,
            "semisimple_endomorphism_dim": self.semisimple_endomorphism_dim,
        }


def decompose(m: Bimodule) -> DecompositionReport:
    _require_sl2(m)
    if not check_axioms(m).ok:
        raise DecompositionError("input fails the bimodule axioms")
    if m.dim == 0:
        return DecompositionReport([], DECOMPOSABLE, [])
    ring = endomorphism_ring(m)
    pieces = _split(m)
    families, found = simple_subbimodules(m)
    summands = [SubbimoduleBasis(m, s) for s in pieces]
    if len(pieces) > 1:
        verdict = DECOMPOSABLE
    else:
        hw = ring.chain.hw
        right_simple = len(hw) == 1 and len(hw[0][1]) == 1
        verdict = SIMPLE if right_simple else INDECOMPOSABLE
    return DecompositionReport(summands, verdict, found, families,
                               len(ring.basis), ring.semisimple_dim())


def _right_simple(m: Bimodule) -> bool:
    hw = highest_weight_vectors(m)
    return len(hw) == 1 and len(hw[0][1]) == 1


def is_completely_reducible(m: Bimodule) -> bool:
    """sl2 route through the decomposition; other algebras use the exact
    criterion on the action algebra."""
    if not is_sl2_bimodule(m):
        return is_completely_reducible_general(m)
    rep = decompose(m)
    return all(_right_simple(restrict(m, s.basis)) for s in rep.summands)


def is_simple(m: Bimodule) -> bool:
    if not is_sl2_bimodule(m):
        return is_simple_general(m)
    return decompose(m).verdict == SIMPLE


# ---------------------------------------------------------------------------
# isomorphism
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsoResult:
    ok: bool
    witness: tuple[Fraction, Fraction] | None = None
    intertwiner: Matrix | None = None

    def __bool__(self) -> bool:
        return self.ok


def _projections(m: Bimodule) -> tuple[Matrix, Matrix]:
    cb = chain_basis(m)
    hw = cb.hw
    if len(hw) != 2 or any(len(vs) != 1 for _, vs in hw):
        raise DecompositionError(
            "isomorphism check needs a right module that is a sum of two "
            "non-isomorphic simple modules")
    d = m.dim
    projs = []
    for b in range(2):
        rows = [[ZERO] * d for _ in range(d)]
        for j in range(hw[b][0] + 1):
            c = cb.index[(b, 0, j)]
            rows[c][c] = ONE
        projs.append(cb.P @ Matrix(d, d, rows) @ cb.Pinv)
    return projs[0], projs[1]


def schur_iso_check(m1: Bimodule, m2: Bimodule) -> IsoResult:
    """Intertwiners a*P_V + b*P_W, complete by Schur's lemma when the right
    module is V (+) W with V, W simple and non-isomorphic."""
    _require_sl2(m1)
    _require_sl2(m2)
    if m1.right != m2.right:
        raise DecompositionError("isomorphism check needs identical right actions")
    pv, pw = _projections(m1)
    cols = []
    for P in (pv, pw):
        cols.append(tuple(x for L1, L2 in zip(m1.left, m2.left)
                          for x in (P @ L1 - L2 @ P).flatten()))
    sols = nullspace(Matrix.from_columns(cols, 3 * m1.dim * m1.dim))
    candidates = []
    if len(sols) == 2:
        candidates.append((ONE, ONE))
    elif len(sols) == 1:
        candidates.append(tuple(sols[0]))
    for a, b in candidates:
        if a and b:
            a, b = ONE, b / a
            return IsoResult(True, (a, b), pv.scale(a) + pw.scale(b))
    return IsoResult(False)
