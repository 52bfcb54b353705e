"""Multivariate polynomials over Q and a small branch-first solver.

Monomials are exponent tuples over an ordered variable list.  The monomial
order is lex with the first declared variable most significant, which is
plain tuple comparison.  Canonical strings list terms in decreasing order,
e.g. ``"phi11^2 + phi11 + phi12*phi21"``.
"""

from __future__ import annotations

import ast
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactlin import ZERO, scalar, scalar_str

MAX_VARIABLES = 8
MAX_DEGREE = 3


class LimitExceeded(ValueError):
    """The system is larger than the solver is meant to handle."""


class Polynomial:
    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, Fraction] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n:
                raise ValueError(f"exponent tuple {exps} does not match {n} variables")
            c = scalar(c)
            if c:
                clean[exps] = clean.get(exps, ZERO) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean

    # construction ---------------------------------------------------------

    @classmethod
    def constant(cls, variables, c) -> "Polynomial":
        return cls(variables, {(0,) * len(tuple(variables)): scalar(c)})

    @classmethod
    def zero(cls, variables) -> "Polynomial":
        return cls(variables)

    @classmethod
    def var(cls, variables, name: str) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise KeyError(f"unknown variable {name!r}")
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exps: 1})

    @classmethod
    def parse(cls, text: str, variables: Sequence[str]) -> "Polynomial":
        """Parse an arithmetic expression such as ``"(1+x)*x + y^2/2"``."""
        variables = tuple(variables)
        tree = ast.parse(text.replace("^", "**"), mode="eval")

        def ev(node):
            if isinstance(node, ast.Expression):
                return ev(node.body)
            if isinstance(node, ast.Constant) and isinstance(node.value, int):
                return cls.constant(variables, node.value)
            if isinstance(node, ast.Name):
                return cls.var(variables, node.id)
            if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
                x = ev(node.operand)
                return -x if isinstance(node.op, ast.USub) else x
            if isinstance(node, ast.BinOp):
                a, b = ev(node.left), ev(node.right)
                if isinstance(node.op, ast.Add):
                    return a + b
                if isinstance(node.op, ast.Sub):
                    return a - b
                if isinstance(node.op, ast.Mult):
                    return a * b
                if isinstance(node.op, ast.Div):
                    if not b.is_constant() or b.is_zero():
                        raise ValueError("division only by nonzero constants")
                    return a * (1 / b.constant_value())
                if isinstance(node.op, ast.Pow):
                    if not b.is_constant() or b.constant_value().denominator != 1:
                        raise ValueError("exponent must be an integer constant")
                    return a ** int(b.constant_value())
            raise ValueError(f"unsupported syntax in polynomial {text!r}")

        return ev(tree)

    # inspection -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * len(self.variables), ZERO)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        k = self.variables.index(name)
        return max((e[k] for e in self.terms), default=-1)

    def used_variables(self) -> tuple[str, ...]:
        return tuple(v for k, v in enumerate(self.variables) if any(e[k] for e in self.terms))

    def leading_monomial(self) -> tuple:
        return max(self.terms)

    def leading_coefficient(self) -> Fraction:
        return self.terms[max(self.terms)] if self.terms else ZERO

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self * (1 / self.leading_coefficient())

    def coefficient_in(self, name: str, power: int) -> "Polynomial":
        """Coefficient of ``name**power`` as a polynomial in the other variables."""
        k = self.variables.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[k] == power:
                out[e[:k] + (0,) + e[k + 1:]] = c
        return Polynomial(self.variables, out)

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                raise ValueError(f"variable mismatch {self.variables} vs {other.variables}")
            return other
        return Polynomial.constant(self.variables, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, ZERO) + c
        return Polynomial(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = scalar(other)
            return Polynomial(self.variables, {e: c * x for e, x in self.terms.items()})
        other = self._coerce(other)
        out: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, ZERO) + c1 * c2
        return Polynomial(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = Polynomial.constant(self.variables, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.variables == other.variables and self.terms == other.terms
        try:
            return self.is_constant() and self.constant_value() == scalar(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # substitution ---------------------------------------------------------

    def substitute(self, assignment: Mapping[str, object]) -> "Polynomial":
        """Replace variables by scalars or polynomials and expand fully."""
        for name in assignment:
            if name not in self.variables:
                raise KeyError(f"unknown variable {name!r} in assignment")
        images = []
        for v in self.variables:
            if v in assignment:
                val = assignment[v]
                images.append(val if isinstance(val, Polynomial)
                              else Polynomial.constant(self.variables, val))
            else:
                images.append(Polynomial.var(self.variables, v))
        for img in images:
            if img.variables != self.variables:
                raise ValueError("substituted polynomials must share the variable list")
        powers: dict[tuple[int, int], Polynomial] = {}

        def power(k, e):
            key = (k, e)
            if key not in powers:
                powers[key] = images[k] ** e
            return powers[key]

        out = Polynomial.zero(self.variables)
        for e, c in self.terms.items():
            term = Polynomial.constant(self.variables, c)
            for k, x in enumerate(e):
                if x:
                    term = term * power(k, x)
            out = out + term
        return out

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        vals = [scalar(point[v]) if v in point else None for v in self.variables]
        total = ZERO
        for e, c in self.terms.items():
            t = c
            for k, x in enumerate(e):
                if x:
                    if vals[k] is None:
                        raise KeyError(f"no value for {self.variables[k]!r}")
                    t *= vals[k] ** x
            total += t
        return total

    # printing -------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(v if x == 1 else f"{v}^{x}" for v, x in zip(self.variables, e) if x)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = scalar_str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{scalar_str(a)}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r}, vars={self.variables})"


@dataclass(frozen=True)
class PolySystem:
    variables: tuple[str, ...]
    polynomials: tuple[Polynomial, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "polynomials", tuple(self.polynomials))
        for p in self.polynomials:
            if p.variables != self.variables:
                raise ValueError("all polynomials must share the system's variables")

    @classmethod
    def parse(cls, texts: Iterable[str], variables: Sequence[str]) -> "PolySystem":
        variables = tuple(variables)
        return cls(variables, tuple(Polynomial.parse(t, variables) for t in texts))

    def __len__(self) -> int:
        return len(self.polynomials)

    def __iter__(self):
        return iter(self.polynomials)

    def normalized(self) -> "PolySystem":
        """Drop zeros, make monic, remove duplicates (first occurrence wins)."""
        seen = set()
        out = []
        for p in self.polynomials:
            if p.is_zero():
                continue
            q = p.monic()
            if q not in seen:
                seen.add(q)
                out.append(q)
        return PolySystem(self.variables, tuple(out))

    def substitute(self, assignment) -> "PolySystem":
        return PolySystem(self.variables, tuple(p.substitute(assignment) for p in self.polynomials))

    def vanishes_at(self, point) -> bool:
        return all(p.evaluate(point) == 0 for p in self.polynomials)

    def to_json(self) -> list[str]:
        return [str(p) for p in self.polynomials]


def _check_limits(system: PolySystem) -> None:
    if len(system.variables) > MAX_VARIABLES:
        raise LimitExceeded(f"{len(system.variables)} variables exceed the limit {MAX_VARIABLES}")
    deg = max((p.degree() for p in system.polynomials), default=0)
    if deg > MAX_DEGREE:
        raise LimitExceeded(f"degree {deg} exceeds the limit {MAX_DEGREE}")


# ---------------------------------------------------------------------------
# Groebner bases (Buchberger, lex)
# ---------------------------------------------------------------------------

def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _mono_poly(variables, exps, c) -> Polynomial:
    return Polynomial(variables, {tuple(exps): c})


def reduce(p: Polynomial, basis: Sequence[Polynomial]) -> Polynomial:
    """Full multivariate division remainder of ``p`` by ``basis`` (lex)."""
    basis = [g for g in basis if not g.is_zero()]
    leads = [(g.leading_monomial(), g.leading_coefficient(), g) for g in basis]
    rem: dict[tuple, Fraction] = {}
    work = dict(p.terms)
    while work:
        m = max(work)
        c = work.pop(m)
        for lm, lc, g in leads:
            if _divides(lm, m):
                q = tuple(a - b for a, b in zip(m, lm))
                f = c / lc
                for e, x in g.terms.items():
                    if e == lm:
                        continue
                    t = tuple(a + b for a, b in zip(e, q))
                    y = work.get(t, ZERO) - f * x
                    if y:
                        work[t] = y
                    else:
                        work.pop(t, None)
                break
        else:
            rem[m] = c
    return Polynomial(p.variables, rem)


def _s_poly(f: Polynomial, g: Polynomial) -> Polynomial:
    lf, lg = f.leading_monomial(), g.leading_monomial()
    lcm = tuple(max(a, b) for a, b in zip(lf, lg))
    mf = _mono_poly(f.variables, tuple(a - b for a, b in zip(lcm, lf)), 1 / f.leading_coefficient())
    mg = _mono_poly(g.variables, tuple(a - b for a, b in zip(lcm, lg)), 1 / g.leading_coefficient())
    return mf * f - mg * g


def groebner(system: PolySystem, order: str = "lex", check_limits: bool = True) -> PolySystem:
    """Reduced Groebner basis; ``[1]`` exactly when the system has no common zero."""
    if order != "lex":
        raise ValueError("only lex order is supported")
    if check_limits:
        _check_limits(system)
    vs = system.variables
    basis = [p.monic() for p in system.polynomials if not p.is_zero()]
    if any(p.is_constant() for p in basis):
        return PolySystem(vs, (Polynomial.constant(vs, 1),))
    pairs = list(itertools.combinations(range(len(basis)), 2))
    while pairs:
        i, j = pairs.pop(0)
        f, g = basis[i], basis[j]
        lf, lg = f.leading_monomial(), g.leading_monomial()
        if all(a == 0 or b == 0 for a, b in zip(lf, lg)):
            continue  # coprime leading monomials: S-polynomial reduces to zero
        r = reduce(_s_poly(f, g), basis)
        if r.is_zero():
            continue
        if r.is_constant():
            return PolySystem(vs, (Polynomial.constant(vs, 1),))
        basis.append(r.monic())
        k = len(basis) - 1
        pairs.extend((a, k) for a in range(k))

    # minimal basis, then interreduce
    minimal = []
    for k, g in enumerate(basis):
        lm = g.leading_monomial()
        redundant = False
        for k2, h in enumerate(basis):
            if k2 == k:
                continue
            lh = h.leading_monomial()
            if _divides(lh, lm) and (lh != lm or k2 < k):
                redundant = True
                break
        if not redundant:
            minimal.append(g)
    reduced = []
    for k, g in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        lead = Polynomial(vs, {g.leading_monomial(): g.leading_coefficient()})
        tail = reduce(g - lead, others)
        reduced.append((lead + tail).monic())
    reduced.sort(key=lambda p: p.leading_monomial(), reverse=True)
    return PolySystem(vs, tuple(reduced))


def in_ideal(p: Polynomial, gb: PolySystem) -> bool:
    return reduce(p, gb.polynomials).is_zero()


# ---------------------------------------------------------------------------
# Factoring into rational linear pieces
# ---------------------------------------------------------------------------

def factor(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Irreducible factors over Q with multiplicities, constants dropped.

    General factorization is delegated to sympy; only the linear factors are
    used to branch, the rest are kept as residual conditions.
    """
    import sympy

    if p.is_zero() or p.is_constant():
        return []
    gens = [sympy.Symbol(v) for v in p.variables]
    sp = sympy.Poly.from_dict(
        {e: sympy.Rational(c.numerator, c.denominator) for e, c in p.terms.items()},
        *gens, domain=sympy.QQ)
    _, factors = sp.factor_list()
    out = []
    for fac, mult in factors:
        terms = {}
        for e, c in fac.terms():
            c = sympy.Rational(c)
            terms[tuple(e)] = Fraction(int(c.p), int(c.q))
        out.append((Polynomial(p.variables, terms).monic(), int(mult)))
    out.sort(key=lambda fm: (fm[0].degree(), str(fm[0])))
    return out


# ---------------------------------------------------------------------------
# Case-splitting solver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolutionBranch:
    """Solutions with ``fixed`` variables expressed in the free ones.

    Every point is determined by values of ``free_variables`` that make the
    ``residual`` system vanish.
    """

    fixed: tuple[tuple[str, Polynomial], ...]
    residual: PolySystem
    free_variables: tuple[str, ...]

    @property
    def fixed_map(self) -> dict[str, Polynomial]:
        return dict(self.fixed)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.residual.variables

    def key(self):
        return (frozenset((k, v) for k, v in self.fixed), frozenset(self.residual.polynomials))

    def point(self, free_values: Mapping[str, object]) -> dict[str, Fraction]:
        """Complete a point from values of the free variables."""
        missing = [v for v in self.free_variables if v not in free_values]
        if missing:
            raise KeyError(f"missing values for {missing}")
        pt = {v: scalar(free_values[v]) for v in self.free_variables}
        for v, expr in self.fixed:
            pt[v] = expr.evaluate(pt)
        return pt

    def contains(self, point: Mapping[str, object]) -> bool:
        pt = {k: scalar(v) for k, v in point.items()}
        if any(expr.evaluate(pt) != pt[v] for v, expr in self.fixed):
            return False
        return self.residual.vanishes_at(pt)

    def sample_point(self, rng: random.Random, attempts: int = 50,
                     preset: Mapping[str, object] | None = None,
                     values: Sequence[int] = tuple(range(-5, 6))) -> dict[str, Fraction] | None:
        """A rational point on the branch, or ``None`` if none was found.

        Residual polynomials of degree one in some variable are solved for it;
        everything else is drawn at random from ``values``.
        """
        preset = {k: scalar(v) for k, v in (preset or {}).items() if k in self.free_variables}
        for _ in range(attempts):
            free = dict(preset)
            pending = [p for p in self.residual.polynomials]
            ok = True
            while pending:
                progress = False
                for p in list(pending):
                    q = p.substitute(free) if free else p
                    if q.is_constant():
                        if q.constant_value() != 0:
                            ok = False
                            break
                        pending.remove(p)
                        progress = True
                        continue
                    target = next((v for v in reversed(q.used_variables())
                                   if q.degree_in(v) == 1 and v not in free), None)
                    if target is None:
                        continue
                    for v in q.used_variables():
                        if v != target and v not in free:
                            free[v] = Fraction(rng.choice(values))
                    q2 = p.substitute(free)
                    a = q2.coefficient_in(target, 1)
                    b = q2.coefficient_in(target, 0)
                    if a.is_zero():
                        ok = False
                        break
                    free[target] = -b.constant_value() / a.constant_value()
                    pending.remove(p)
                    progress = True
                if not ok:
                    break
                if not progress:
                    v = next(v for p in pending for v in p.used_variables() if v not in free)
                    free[v] = Fraction(rng.choice(values))
            if not ok:
                continue
            for v in self.free_variables:
                free.setdefault(v, Fraction(rng.choice(values)))
            pt = self.point(free)
            if self.contains(pt):
                return pt
        return None

    def to_json(self) -> dict:
        return {
            "fixed": {v: str(e) for v, e in self.fixed},
            "residual": self.residual.to_json(),
            "free_variables": list(self.free_variables),
        }


def _solve_linear(p: Polynomial) -> tuple[str, Polynomial]:
    """Solve a degree-one polynomial for its last declared variable."""
    target = p.used_variables()[-1]
    a = p.coefficient_in(target, 1).constant_value()
    rest = p.coefficient_in(target, 0)
    return target, rest * (-1 / a)


def case_split_solve(system: PolySystem) -> list[SolutionBranch]:
    """Cover the solution set by branches, splitting on rational linear factors.

    Linear equations are eliminated (for the last declared variable they
    contain); a polynomial with a linear factor spawns one branch per
    distinct irreducible factor.  When nothing splits any more the branch is
    returned with its residual equations.  Inconsistent branches (a nonzero
    constant) are discarded since they contain no points.
    """
    _check_limits(system)
    vs = system.variables
    results: list[SolutionBranch] = []
    seen = set()

    def recurse(fixed: list[tuple[str, Polynomial]], polys: list[Polynomial]):
        norm = list(PolySystem(vs, tuple(polys)).normalized().polynomials)
        if any(p.is_constant() for p in norm):
            return
        linear = next((p for p in norm if p.degree() == 1), None)
        if linear is not None:
            v, expr = _solve_linear(linear)
            sub = {v: expr}
            new_fixed = [(w, e.substitute(sub)) for w, e in fixed] + [(v, expr)]
            recurse(new_fixed, [p.substitute(sub) for p in norm if p is not linear])
            return
        for idx, p in enumerate(norm):
            facs = factor(p)
            if not any(f.degree() == 1 for f, _ in facs):
                continue
            if len(facs) == 1 and facs[0][1] == 1:
                continue
            rest = norm[:idx] + norm[idx + 1:]
            for f, _ in facs:
                if f.degree() == 1:
                    recurse(fixed, [f] + rest)
                else:
                    recurse(fixed, rest[:idx] + [f] + rest[idx:])
            return
        fixed_vars = {v for v, _ in fixed}
        order = {v: k for k, v in enumerate(vs)}
        branch = SolutionBranch(
            fixed=tuple(sorted(fixed, key=lambda ve: order[ve[0]])),
            residual=PolySystem(vs, tuple(norm)),
            free_variables=tuple(v for v in vs if v not in fixed_vars),
        )
        k = branch.key()
        if k not in seen:
            seen.add(k)
            results.append(branch)

    recurse([], list(system.polynomials))
    return results
