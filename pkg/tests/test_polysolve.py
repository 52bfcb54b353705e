import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from leibniz_bimod.polysolve import (
    LimitExceeded,
    Polynomial,
    PolySystem,
    case_split_solve,
    factor,
    groebner,
    in_ideal,
    reduce,
)

PHI = ("phi11", "phi12", "phi21", "phi22")
IDEMPOTENT_SYSTEM = PolySystem.parse([
    "(1+phi11)*phi11 + phi12*phi21",
    "phi12*(1+phi11+phi22)",
    "phi21*(1+phi11+phi22)",
    "phi21*phi12 + (1+phi22)*phi22",
], PHI)


def to_sympy(p: Polynomial):
    gens = [sympy.Symbol(v) for v in p.variables]
    return sympy.Poly.from_dict(
        {e: sympy.Rational(c.numerator, c.denominator) for e, c in p.terms.items()} or {(0,) * len(gens): 0},
        *gens, domain=sympy.QQ)


def from_sympy(sp, variables) -> Polynomial:
    terms = {}
    for e, c in sp.terms():
        c = sympy.Rational(c)
        terms[tuple(e)] = Fraction(int(c.p), int(c.q))
    return Polynomial(variables, terms)


def test_canonical_strings():
    assert str(IDEMPOTENT_SYSTEM.polynomials[0]) == "phi11^2 + phi11 + phi12*phi21"
    assert str(Polynomial.parse("-(1+phi11)", PHI)) == "-phi11 - 1"
    assert str(Polynomial.parse("x/2 - 3", ("x",))) == "1/2*x - 3"


def test_parse_rejects_unknown_names_and_bad_division():
    with pytest.raises(KeyError):
        Polynomial.parse("z + 1", ("x",))
    with pytest.raises(ValueError):
        Polynomial.parse("1/x", ("x",))


def test_substitute_and_evaluate():
    x, y = Polynomial.var(("x", "y"), "x"), Polynomial.var(("x", "y"), "y")
    p = x * x + x * y - 1
    assert p.evaluate({"x": 2, "y": Fraction(1, 2)}) == 4
    assert p.substitute({"y": x + 1}) == 2 * x * x + x - 1


def test_groebner_small_examples():
    vs = ("x", "y")
    assert groebner(PolySystem.parse(["x+y", "y"], vs)).to_json() == ["x", "y"]
    assert groebner(PolySystem.parse(["x^2-1", "x-1"], vs)).to_json() == ["x - 1"]
    assert groebner(PolySystem.parse(["x-1", "x-2"], vs)).to_json() == ["1"]


def test_groebner_of_idempotent_system_matches_sympy():
    ours = groebner(IDEMPOTENT_SYSTEM)
    ref = sympy.groebner([to_sympy(p).as_expr() for p in IDEMPOTENT_SYSTEM.polynomials],
                         *[sympy.Symbol(v) for v in PHI], order="lex")
    theirs = {str(from_sympy(sympy.Poly(g, *[sympy.Symbol(v) for v in PHI]), PHI).monic()) for g in ref.exprs}
    assert set(ours.to_json()) == theirs


def test_limits():
    vs = tuple(f"x{k}" for k in range(9))
    with pytest.raises(LimitExceeded):
        case_split_solve(PolySystem(vs, (Polynomial.var(vs, "x0"),)))
    with pytest.raises(LimitExceeded):
        groebner(PolySystem.parse(["x^4 - 1"], ("x",)))


def test_factor_splits_linear_pieces():
    vs = ("x", "y")
    facs = factor(Polynomial.parse("x^2*y - y", vs))
    assert [(str(f), k) for f, k in facs] == [("x + 1", 1), ("x - 1", 1), ("y", 1)]
    assert [str(f) for f, _ in factor(Polynomial.parse("x^2 + 1", vs))] == ["x^2 + 1"]


def test_case_split_idempotent_system_branches():
    branches = case_split_solve(IDEMPOTENT_SYSTEM)
    first = branches[0]
    assert {v: str(e) for v, e in first.fixed} == {"phi22": "-phi11 - 1"}
    assert first.residual.to_json() == ["phi11^2 + phi11 + phi12*phi21"]
    points = [b for b in branches if not b.free_variables]
    assert {tuple(str(e) for _, e in b.fixed) for b in points} == {
        ("0", "0", "0", "0"), ("0", "0", "0", "-1"), ("-1", "0", "0", "0"), ("-1", "0", "0", "-1")}


def test_case_split_simple_products():
    vs = ("x", "y")
    assert len(case_split_solve(PolySystem.parse(["x*y"], vs))) == 2
    (b,) = case_split_solve(PolySystem.parse(["x^2 + 1"], vs))
    assert b.residual.to_json() == ["x^2 + 1"]
    assert case_split_solve(PolySystem.parse(["x", "x - 1"], vs)) == []


def _random_poly(rng, vs, max_terms=3):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        e = [0] * len(vs)
        for _ in range(rng.randint(0, 2)):
            e[rng.randrange(len(vs))] += 1
        terms[tuple(e)] = Fraction(rng.randint(-3, 3))
    p = Polynomial(vs, terms)
    return p if not p.is_zero() else Polynomial.var(vs, vs[0])


def test_groebner_membership_on_random_ideals():
    """50 random small ideals: agreement with sympy, generators and random
    combinations are members, random polynomials agree with sympy's test."""
    rng = random.Random(7)
    vs = ("x", "y", "z")
    gens = [sympy.Symbol(v) for v in vs]
    for _ in range(50):
        polys = [_random_poly(rng, vs) for _ in range(rng.randint(1, 3))]
        system = PolySystem(vs, tuple(polys))
        gb = groebner(system)
        ref = sympy.groebner([to_sympy(p).as_expr() for p in polys], *gens, order="lex")
        assert set(gb.to_json()) == {str(from_sympy(sympy.Poly(g, *gens), vs).monic()) for g in ref.exprs}
        for p in polys:
            assert in_ideal(p, gb)
        combo = sum((q * p for q, p in zip([_random_poly(rng, vs) for _ in polys], polys)),
                    Polynomial.zero(vs))
        assert in_ideal(combo, gb)
        probe = _random_poly(rng, vs)
        assert in_ideal(probe, gb) == ref.contains(to_sympy(probe).as_expr())


def _branch_union_agrees(system, points):
    branches = case_split_solve(system)
    for pt in points:
        assert system.vanishes_at(pt) == any(b.contains(pt) for b in branches), pt


def _points_on_idempotent_system(rng, k):
    """Rational solutions of A^2 + A = 0, A = [[phi11, phi21], [phi12, phi22]]."""
    out = []
    for _ in range(k):
        while True:
            p = [[Fraction(rng.randint(-4, 4)) for _ in range(2)] for _ in range(2)]
            det = p[0][0] * p[1][1] - p[0][1] * p[1][0]
            if det:
                break
        inv = [[p[1][1] / det, -p[0][1] / det], [-p[1][0] / det, p[0][0] / det]]
        d = rng.choice([(0, -1), (0, 0), (-1, -1)])
        a = [[sum(p[i][k] * d[k] * inv[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
        out.append({"phi11": a[0][0], "phi21": a[0][1], "phi12": a[1][0], "phi22": a[1][1]})
    return out


def test_branch_union_conservative_idempotent_system():
    rng = random.Random(1)
    grid = [{v: Fraction(rng.randint(-2, 1)) for v in PHI} for _ in range(100)]
    _branch_union_agrees(IDEMPOTENT_SYSTEM, grid + _points_on_idempotent_system(rng, 100))


def test_branch_union_conservative_random_systems():
    rng = random.Random(3)
    vs = ("x", "y", "z")
    for _ in range(10):
        system = PolySystem(vs, tuple(_random_poly(rng, vs) for _ in range(2)))
        branches = case_split_solve(system)
        pts = [{v: Fraction(rng.randint(-2, 2)) for v in vs} for _ in range(150)]
        for b in branches:
            for _ in range(10):
                pt = b.sample_point(rng)
                if pt is not None:
                    pts.append(pt)
        pts = pts[:200] + [{v: Fraction(0) for v in vs}] * max(0, 200 - len(pts))
        for pt in pts:
            assert system.vanishes_at(pt) == any(b.contains(pt) for b in branches)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(0, 2), st.integers(0, 2)),
                min_size=1, max_size=4),
       st.integers(-3, 3), st.integers(-3, 3))
def test_reduce_remainder_vanishes_on_variety_of_linear_basis(terms, a, b):
    """Modulo {x - a, y - b} every polynomial reduces to its value at (a, b)."""
    vs = ("x", "y")
    p = Polynomial(vs, {(i, j): c for c, i, j in terms})
    basis = [Polynomial.parse(f"x - ({a})", vs), Polynomial.parse(f"y - ({b})", vs)]
    r = reduce(p, basis)
    assert r.is_constant()
    assert r.constant_value() == p.evaluate({"x": a, "y": b})
