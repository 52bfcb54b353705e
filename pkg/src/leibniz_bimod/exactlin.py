"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction` throughout; nothing here ever
touches floating point.  Matrices are small and dense; the one large,
very sparse system in the package (the linear stage of the extension
solver) goes through :func:`sparse_nullspace` instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Scalar = Fraction
Vector = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def scalar(x) -> Fraction:
    """Coerce an int, Fraction or string like ``"-3/2"`` to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        text = x.strip()
        if not text:
            raise ValueError("empty scalar string")
        return Fraction(text)
    raise TypeError(f"cannot interpret {x!r} as an exact scalar")


def scalar_str(x: Fraction) -> str:
    return str(Fraction(x))


def vector(values: Iterable) -> Vector:
    return tuple(scalar(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(ONE if k == i else ZERO for k in range(n))


def is_zero_vector(v: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in v)


def add_vectors(u, v) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def scale_vector(c, v) -> Vector:
    c = scalar(c)
    return tuple(c * a for a in v)


def lin_comb(coeffs, vectors, n: int | None = None) -> Vector:
    """Return sum(c_i * v_i); ``n`` gives the length when ``vectors`` is empty."""
    vectors = list(vectors)
    if not vectors:
        if n is None:
            raise ValueError("length required for an empty combination")
        return zero_vector(n)
    out = [ZERO] * len(vectors[0])
    for c, v in zip(coeffs, vectors):
        if c == 0:
            continue
        for k, a in enumerate(v):
            if a:
                out[k] += c * a
    return tuple(out)


class Matrix:
    """Immutable dense matrix of Fractions, stored row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: Sequence[Sequence] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix shape must be nonnegative")
        self.rows = rows
        self.cols = cols
        if data is None:
            self._data = tuple((ZERO,) * cols for _ in range(rows))
        else:
            if len(data) != rows or any(len(r) != cols for r in data):
                raise ValueError(f"entries do not match shape {rows}x{cols}")
            self._data = tuple(tuple(scalar(x) for x in r) for r in data)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = list(rows)
        if cols is None:
            if not rows:
                raise ValueError("column count required for an empty matrix")
            cols = len(rows[0])
        return cls(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "Matrix":
        columns = list(columns)
        if rows is None:
            if not columns:
                raise ValueError("row count required for an empty matrix")
            rows = len(columns[0])
        data = [[columns[c][r] for c in range(len(columns))] for r in range(rows)]
        return cls(rows, len(columns), data)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Matrix":
        return cls(rows, rows if cols is None else cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls(n, n, [[entries[i] if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def block_diagonal(cls, *blocks: "Matrix") -> "Matrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        data = [[ZERO] * cols for _ in range(rows)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    data[r0 + i][c0 + j] = b[i, j]
            r0 += b.rows
            c0 += b.cols
        return cls(rows, cols, data)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx):
        r, c = idx
        return self._data[r][c]

    def row(self, r: int) -> Vector:
        return self._data[r]

    def col(self, c: int) -> Vector:
        return tuple(self._data[r][c] for r in range(self.rows))

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def row_tuples(self) -> tuple[Vector, ...]:
        return self._data

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, [self.col(c) for c in range(self.cols)])

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"

    def _check_same_shape(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols,
                      [[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols,
                      [[a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)])

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [[-a for a in r] for r in self._data])

    def scale(self, c) -> "Matrix":
        c = scalar(c)
        return Matrix(self.rows, self.cols, [[c * a for a in r] for r in self._data])

    def __mul__(self, c) -> "Matrix":
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            odata = other._data
            out = []
            for r in self._data:
                acc = [ZERO] * other.cols
                for k, a in enumerate(r):
                    if a:
                        for j, b in enumerate(odata[k]):
                            if b:
                                acc[j] += a * b
                out.append(acc)
            return Matrix(self.rows, other.cols, out)
        return self.apply(other)

    def apply(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} does not fit {self.shape}")
        nz = [(k, x) for k, x in enumerate(v) if x]
        return tuple(sum((r[k] * x for k, x in nz), ZERO) for r in self._data)

    def trace(self) -> Fraction:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        return sum((self._data[i][i] for i in range(self.rows)), ZERO)

    def flatten(self) -> Vector:
        return tuple(x for r in self._data for x in r)

    def stack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch in vertical stack")
        return Matrix(self.rows + other.rows, self.cols, self._data + other._data)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(len(rows), len(cols), [[self._data[r][c] for c in cols] for r in rows])


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivot choice is the first nonzero entry scanning down the current column.
    """
    a = [list(r) for r in m.row_tuples()]
    rows, cols = m.rows, m.cols
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        pr = [x * inv for x in a[r]]
        a[r] = pr
        nz = [j for j in range(c, cols) if pr[j]]
        for i in range(rows):
            if i != r:
                f = a[i][c]
                if f:
                    ri = a[i]
                    for j in nz:
                        ri[j] -= f * pr[j]
        pivots.append(c)
        r += 1
    return Matrix(rows, cols, a), pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def nullspace(m: Matrix) -> list[Vector]:
    """Basis of {x : m x = 0}, one vector per free column."""
    red, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        x = [ZERO] * m.cols
        x[f] = ONE
        for i, p in enumerate(pivots):
            x[p] = -red[i, f]
        basis.append(tuple(x))
    return basis


@dataclass(frozen=True)
class AffineSolutionSpace:
    """``particular + span(basis)``; ``variable_names`` label the basis directions."""

    particular: Vector
    basis: tuple[Vector, ...]
    variable_names: tuple[str, ...]

    def __post_init__(self):
        n = len(self.particular)
        if any(len(b) != n for b in self.basis):
            raise ValueError("all solution vectors must have the same length")
        if len(self.variable_names) != len(self.basis):
            raise ValueError("one variable name per basis vector")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def point(self, params: Sequence) -> Vector:
        if len(params) != len(self.basis):
            raise ValueError(f"expected {len(self.basis)} parameters, got {len(params)}")
        out = lin_comb([scalar(p) for p in params], self.basis, len(self.particular))
        return add_vectors(self.particular, out)


def solve_affine(a: Matrix, b: Sequence, names: Sequence[str] | None = None
                 ) -> AffineSolutionSpace | None:
    """Solve ``a x = b`` exactly; ``None`` when b is outside the column space."""
    b = vector(b)
    if len(b) != a.rows:
        raise ValueError("right-hand side length must equal the row count")
    aug = Matrix(a.rows, a.cols + 1, [list(r) + [x] for r, x in zip(a.row_tuples(), b)])
    red, pivots = rref(aug)
    if pivots and pivots[-1] == a.cols:
        return None
    x = [ZERO] * a.cols
    for i, p in enumerate(pivots):
        x[p] = red[i, a.cols]
    basis = tuple(nullspace(a))
    if names is None:
        names = tuple(f"t{k}" for k in range(len(basis)))
    return AffineSolutionSpace(tuple(x), basis, tuple(names))


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("only square matrices are invertible")
    n = m.rows
    aug = Matrix(n, 2 * n, [list(r) + [ONE if i == j else ZERO for j in range(n)]
                            for i, r in enumerate(m.row_tuples())])
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return red.submatrix(range(n), range(n, 2 * n))


class EchelonBasis:
    """Incrementally maintained reduced echelon basis of a growing span.

    Used for span saturation: ``add`` reports whether the vector was new.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: dict[int, list[Fraction]] = {}  # pivot column -> row with 1 there

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, v: Sequence[Fraction]) -> list[Fraction]:
        w = [scalar(x) for x in v]
        for p, row in self._rows.items():
            f = w[p]
            if f:
                for j, x in enumerate(row):
                    if x:
                        w[j] -= f * x
        return w

    def contains(self, v: Sequence[Fraction]) -> bool:
        return is_zero_vector(self.reduce(v))

    def add(self, v: Sequence[Fraction]) -> bool:
        if len(v) != self.dim:
            raise ValueError("vector length does not match the ambient dimension")
        w = self.reduce(v)
        p = next((j for j, x in enumerate(w) if x), None)
        if p is None:
            return False
        inv = 1 / w[p]
        w = [x * inv for x in w]
        for q, row in self._rows.items():
            f = row[p]
            if f:
                for j, x in enumerate(w):
                    if x:
                        row[j] -= f * x
        self._rows[p] = w
        return True

    def rows(self) -> tuple[Vector, ...]:
        """Canonical RREF rows ordered by pivot."""
        return tuple(tuple(self._rows[p]) for p in sorted(self._rows))


def canonical_span(vectors: Iterable[Sequence], dim: int) -> tuple[Vector, ...]:
    eb = EchelonBasis(dim)
    for v in vectors:
        eb.add(v)
    return eb.rows()


def sparse_nullspace(rows: Iterable[dict[int, Fraction]], ncols: int) -> list[Vector]:
    """Nullspace of a sparse system given as ``{column: coefficient}`` rows.

    Gauss-Jordan on dictionaries; pivot rows are kept fully reduced so that
    each contains its pivot and free columns only.  Returns the same basis
    that :func:`nullspace` would on the dense matrix whose rows are processed
    in the order given (one vector per free column, ascending).
    """
    piv: dict[int, dict[int, Fraction]] = {}
    occurs: dict[int, set[int]] = {}  # non-pivot column -> pivots whose row contains it

    for raw in rows:
        r = {c: scalar(v) for c, v in raw.items() if v}
        for p in [c for c in r if c in piv]:
            f = r.get(p)
            if not f:
                continue
            for c, x in piv[p].items():
                y = r.get(c, ZERO) - f * x
                if y:
                    r[c] = y
                else:
                    r.pop(c, None)
        if not r:
            continue
        p = min(r)
        inv = 1 / r[p]
        r = {c: x * inv for c, x in r.items()}
        for q in occurs.pop(p, set()):
            row = piv[q]
            f = row.pop(p, None)
            if not f:
                continue
            for c, x in r.items():
                if c == p:
                    continue
                y = row.get(c, ZERO) - f * x
                if y:
                    row[c] = y
                    occurs.setdefault(c, set()).add(q)
                else:
                    row.pop(c, None)
                    s = occurs.get(c)
                    if s is not None:
                        s.discard(q)
        piv[p] = r
        for c in r:
            if c != p:
                occurs.setdefault(c, set()).add(p)

    basis = []
    for f in range(ncols):
        if f in piv:
            continue
        x = [ZERO] * ncols
        x[f] = ONE
        for q in occurs.get(f, ()):
            x[q] = -piv[q][f]
        basis.append(tuple(x))
    return basis


def enveloping_algebra(generators: Sequence[Matrix], n: int) -> list[Matrix]:
    """Basis of the unital associative algebra generated by square matrices."""
    eb = EchelonBasis(n * n)
    basis = [Matrix.identity(n)]
    eb.add(basis[0].flatten())
    frontier = list(basis)
    while frontier:
        fresh = []
        for b in frontier:
            for g in generators:
                p = g @ b
                if eb.add(p.flatten()):
                    fresh.append(p)
        basis.extend(fresh)
        frontier = fresh
    return basis


def trace_form_rank(algebra_basis: Sequence[Matrix]) -> int:
    """Rank of (a, b) -> tr(ab) on a matrix algebra.

    In characteristic zero its radical is the Jacobson radical, so the rank
    is the dimension of the semisimple quotient.
    """
    k = len(algebra_basis)
    if k == 0:
        return 0
    gram = [[(algebra_basis[i] @ algebra_basis[j]).trace() for j in range(k)] for i in range(k)]
    return rank(Matrix(k, k, gram))
