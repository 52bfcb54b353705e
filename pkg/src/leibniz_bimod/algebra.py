"""Leibniz algebras given by structure constants.

``c[i][j][k]`` is the coefficient of ``b_k`` in ``[b_i, b_j]``.  The (right)
Leibniz identity checked everywhere is

    [x, [y, z]] = [[x, y], z] - [[x, z], y].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .exactlin import (
    ZERO,
    EchelonBasis,
    Matrix,
    Vector,
    canonical_span,
    enveloping_algebra,
    is_zero_vector,
    lin_comb,
    scalar,
    scalar_str,
    unit_vector,
)


class NotLeibnizError(ValueError):
    pass


@dataclass(frozen=True)
class Algebra:
    dim: int
    basis_names: tuple[str, ...]
    c: tuple  # dim x dim x dim nested tuples of Fraction

    def __post_init__(self):
        names = tuple(self.basis_names)
        if len(names) != self.dim or len(set(names)) != self.dim:
            raise ValueError("need one distinct basis name per dimension")
        c = tuple(tuple(tuple(scalar(x) for x in cij) for cij in ci) for ci in self.c)
        if len(c) != self.dim or any(len(ci) != self.dim for ci in c) or any(
                len(cij) != self.dim for ci in c for cij in ci):
            raise ValueError(f"structure constants must have shape {self.dim}^3")
        object.__setattr__(self, "basis_names", names)
        object.__setattr__(self, "c", c)

    @classmethod
    def from_products(cls, names: Sequence[str],
                      products: Mapping[tuple[str, str], Mapping[str, object]]) -> "Algebra":
        """Build from ``{(x, y): {z: coeff}}``; unlisted products are zero."""
        names = tuple(names)
        idx = {n: k for k, n in enumerate(names)}
        d = len(names)
        c = [[[ZERO] * d for _ in range(d)] for _ in range(d)]
        for (x, y), image in products.items():
            for z, coeff in image.items():
                c[idx[x]][idx[y]][idx[z]] = scalar(coeff)
        return cls(d, names, c)

    def index(self, name: str) -> int:
        try:
            return self.basis_names.index(name)
        except ValueError:
            raise KeyError(f"{name!r} is not a basis element") from None

    def basis_vector(self, i: int) -> Vector:
        return unit_vector(self.dim, i)

    def product(self, i: int, j: int) -> Vector:
        return self.c[i][j]

    def bracket(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
        out = [ZERO] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = a * b
                for k, x in enumerate(self.c[i][j]):
                    if x:
                        out[k] += ab * x
        return tuple(out)

    def left_mult(self, i: int) -> Matrix:
        """Matrix of v -> [b_i, v] (columns are images of basis vectors)."""
        return Matrix.from_columns([self.c[i][j] for j in range(self.dim)], self.dim)

    def right_mult(self, i: int) -> Matrix:
        """Matrix of v -> [v, b_i]."""
        return Matrix.from_columns([self.c[j][i] for j in range(self.dim)], self.dim)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "basis": list(self.basis_names),
            "c": [[[scalar_str(x) for x in cij] for cij in ci] for ci in self.c],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Algebra":
        for key in ("dim", "basis", "c"):
            if key not in data:
                raise ValueError(f"algebra JSON is missing field {key!r}")
        return cls(int(data["dim"]), tuple(data["basis"]), data["c"])


@dataclass(frozen=True)
class LeibnizCheck:
    ok: bool
    witness: tuple[int, int, int] | None = None
    lhs: Vector | None = None
    rhs: Vector | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_leibniz(a: Algebra) -> LeibnizCheck:
    """Check the identity on all basis triples; reports the first failure."""
    d = a.dim
    for i in range(d):
        for j in range(d):
            for k in range(d):
                lhs = a.bracket(a.basis_vector(i), a.product(j, k))
                rhs = tuple(p - q for p, q in zip(
                    a.bracket(a.product(i, j), a.basis_vector(k)),
                    a.bracket(a.product(i, k), a.basis_vector(j))))
                if lhs != rhs:
                    return LeibnizCheck(False, (i, j, k), lhs, rhs)
    return LeibnizCheck(True)


def is_lie(a: Algebra) -> bool:
    return is_leibniz(a).ok and leibniz_kernel(a).dim == 0


def sl2() -> Algebra:
    return Algebra.from_products(("e", "f", "h"), {
        ("e", "f"): {"h": 1},
        ("f", "e"): {"h": -1},
        ("e", "h"): {"e": 2},
        ("h", "e"): {"e": -2},
        ("f", "h"): {"f": -2},
        ("h", "f"): {"f": 2},
    })


def nilpotent_2d() -> Algebra:
    """Two-dimensional algebra with [a, a] = b and every other product zero."""
    return Algebra.from_products(("a", "b"), {("a", "a"): {"b": 1}})


def abelian(dim: int) -> Algebra:
    names = tuple(f"x{k}" for k in range(dim))
    return Algebra.from_products(names, {})


@dataclass(frozen=True)
class Subspace:
    """Subspace stored by its RREF basis, so equality is entrywise."""

    ambient_dim: int
    basis: tuple[Vector, ...]

    @classmethod
    def span(cls, vectors, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, canonical_span(vectors, ambient_dim))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls.span([unit_vector(ambient_dim, i) for i in range(ambient_dim)], ambient_dim)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(v) if x) for v in self.basis)

    def contains(self, v: Sequence[Fraction]) -> bool:
        eb = EchelonBasis(self.ambient_dim)
        for b in self.basis:
            eb.add(b)
        return eb.contains(v)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimensions differ")
        return Subspace.span(self.basis + other.basis, self.ambient_dim)

    def coordinates(self, v: Sequence[Fraction]) -> Vector:
        """Coordinates of ``v`` in the RREF basis; ``v`` must lie in the subspace."""
        coords = tuple(v[p] for p in self.pivots)
        if tuple(v) != lin_comb(coords, self.basis, self.ambient_dim):
            raise ValueError("vector is not in the subspace")
        return coords

    def complement_indices(self) -> tuple[int, ...]:
        piv = set(self.pivots)
        return tuple(i for i in range(self.ambient_dim) if i not in piv)

    def reduce(self, v: Sequence[Fraction]) -> Vector:
        """Representative of v modulo the subspace with zero pivot coordinates."""
        w = list(v)
        for p, b in zip(self.pivots, self.basis):
            f = w[p]
            if f:
                for j, x in enumerate(b):
                    if x:
                        w[j] -= f * x
        return tuple(w)

    def to_json(self) -> list[list[str]]:
        return [[scalar_str(x) for x in v] for v in self.basis]


def saturate(start: Sequence[Sequence[Fraction]], maps, dim: int) -> Subspace:
    """Smallest subspace containing ``start`` and invariant under ``maps``.

    ``maps`` are callables vector -> vector.
    """
    eb = EchelonBasis(dim)
    queue = []
    for v in start:
        if eb.add(v):
            queue.append(tuple(v))
    while queue:
        v = queue.pop()
        for f in maps:
            w = f(v)
            if eb.add(w):
                queue.append(w)
    return Subspace(dim, eb.rows())


def ideal_closure(a: Algebra, s: Subspace) -> Subspace:
    if s.ambient_dim != a.dim:
        raise ValueError("subspace does not live in this algebra")
    maps = []
    for i in range(a.dim):
        bi = a.basis_vector(i)
        maps.append(lambda v, bi=bi: a.bracket(v, bi))
        maps.append(lambda v, bi=bi: a.bracket(bi, v))
    return saturate(s.basis, maps, a.dim)


def is_ideal(a: Algebra, s: Subspace) -> bool:
    return ideal_closure(a, s) == s


def leibniz_kernel(a: Algebra) -> Subspace:
    """Ideal generated by the squares.

    Over characteristic zero the squares span the same space as the
    symmetrized products [b_i, b_j] + [b_j, b_i].
    """
    if not is_leibniz(a):
        raise NotLeibnizError("Leibniz kernel requested for a non-Leibniz algebra")
    gens = []
    for i in range(a.dim):
        for j in range(i, a.dim):
            gens.append(tuple(x + y for x, y in zip(a.c[i][j], a.c[j][i])))
    return ideal_closure(a, Subspace.span(gens, a.dim))


def quotient(a: Algebra, ideal: Subspace) -> Algebra:
    """Quotient algebra on the non-pivot coordinates of the ideal's RREF basis."""
    if not is_ideal(a, ideal):
        raise ValueError("can only take the quotient by a two-sided ideal")
    keep = ideal.complement_indices()
    c = []
    for i in keep:
        row = []
        for j in keep:
            r = ideal.reduce(a.c[i][j])
            row.append(tuple(r[k] for k in keep))
        c.append(tuple(row))
    return Algebra(len(keep), tuple(a.basis_names[k] for k in keep), tuple(c))


def liezation(a: Algebra) -> Algebra:
    return quotient(a, leibniz_kernel(a))


def derived_subspace(a: Algebra) -> Subspace:
    """[L, L]"""
    return Subspace.span([a.c[i][j] for i in range(a.dim) for j in range(a.dim)], a.dim)


def is_simple_lie(a: Algebra) -> bool:
    """Simplicity of a Lie algebra, decided exactly.

    Ideals are the subspaces invariant under all ad maps, so the algebra has
    none besides 0 and itself (over the algebraic closure) exactly when the
    ad maps generate the full matrix algebra.
    """
    if not is_lie(a) or a.dim == 0:
        return False
    if derived_subspace(a).dim == 0:
        return False
    gens = [a.left_mult(i) for i in range(a.dim)]
    return len(enveloping_algebra(gens, a.dim)) == a.dim * a.dim


@dataclass(frozen=True)
class SimplicityEvidence:
    """Necessary conditions for a simple Leibniz algebra that are computable here."""

    kernel_dim: int
    derived_dim: int
    liezation_simple: bool
    derived_differs_from_kernel: bool

    @property
    def consistent_with_simple(self) -> bool:
        return self.liezation_simple and self.derived_differs_from_kernel


def simplicity_evidence(a: Algebra) -> SimplicityEvidence:
    kern = leibniz_kernel(a)
    der = derived_subspace(a)
    return SimplicityEvidence(
        kernel_dim=kern.dim,
        derived_dim=der.dim,
        liezation_simple=is_simple_lie(quotient(a, kern)),
        derived_differs_from_kernel=der != kern,
    )


def random_vector(rng, dim: int, spread: int = 5) -> Vector:
    return tuple(Fraction(rng.randint(-spread, spread), rng.randint(1, 3)) for _ in range(dim))


def check_identity_on_vectors(a: Algebra, x, y, z) -> bool:
    lhs = a.bracket(x, a.bracket(y, z))
    rhs = tuple(p - q for p, q in zip(a.bracket(a.bracket(x, y), z),
                                      a.bracket(a.bracket(x, z), y)))
    return is_zero_vector(tuple(p - q for p, q in zip(lhs, rhs)))
