import random
from fractions import Fraction

import pytest

from leibniz_bimod.algebra import Subspace, abelian, is_leibniz, nilpotent_2d, sl2
from leibniz_bimod.bimodule import (
    Bimodule,
    BimoduleError,
    adjoint,
    antisymmetric_from_right,
    check_axioms,
    conjugate,
    direct_sum,
    generated_subbimodule,
    heuristic_subbimodules,
    is_antisymmetric,
    is_completely_reducible_general,
    is_invariant,
    is_simple_general,
    is_symmetric,
    quotient_bimodule,
    restrict,
    semidirect_sum,
    symmetric_from_right,
)
from leibniz_bimod.exactlin import Matrix, inverse, rank, unit_vector
from leibniz_bimod.polysolve import case_split_solve
from leibniz_bimod.sl2ext import (
    ExtensionProblem,
    antisymmetric_irrep,
    assemble_linear_stage,
    assemble_quadratic_stage,
    irrep,
    m1,
    m2,
)


def test_adjoint_sl2():
    ad = adjoint(sl2())
    assert check_axioms(ad).ok
    e = unit_vector(3, 0)
    # [e, h] = 2e on the right, [h, e] = -2e on the left
    assert ad.R("h").apply(e) == (2, 0, 0)
    assert ad.L("h").apply(e) == (-2, 0, 0)


def test_adjoint_of_nilpotent_and_abelian():
    ad = adjoint(nilpotent_2d())
    a, b = unit_vector(2, 0), unit_vector(2, 1)
    assert ad.L("a").apply(a) == b
    assert ad.L("a").apply(b) == (0, 0)
    assert ad.L("b").is_zero()
    ab = adjoint(abelian(2))
    assert all(x.is_zero() for x in ab.action_maps())


def test_left_equal_right_breaks_axiom4():
    ad = adjoint(sl2())
    bad = Bimodule(ad.algebra, 3, ad.right, ad.right)
    rep = check_axioms(bad)
    assert not rep.axiom4.passed
    x, y, k = rep.axiom4.witness
    assert (x, y, k) == ("e", "e", 1)
    # by hand: L_e(R_e + L_e) f = 2 [[f, e], e] = 2 [-h, e] = 4e
    assert rep.axiom4.lhs == (4, 0, 0)
    assert rep.axiom4.rhs == (0, 0, 0)
    assert rep.redundancy_consistent


def test_symmetric_and_antisymmetric_over_irrep():
    a = sl2()
    anti = antisymmetric_from_right(a, irrep(2))
    sym = symmetric_from_right(a, irrep(2))
    assert check_axioms(anti).ok and is_antisymmetric(anti)
    assert check_axioms(sym).ok and is_symmetric(sym)
    assert sym.L("h") == -irrep(2)[2]


def test_symmetric_over_adjoint_right_is_lie_bimodule():
    ad = adjoint(sl2())
    assert symmetric_from_right(sl2(), ad.right).left == ad.left


def test_right_action_precondition():
    bad = (Matrix.identity(2),) * 3
    with pytest.raises(BimoduleError, match="axiom"):
        symmetric_from_right(sl2(), bad)


def test_generated_subbimodule_in_m1():
    n = 4
    bm = m1(n)
    w0 = unit_vector(bm.dim, n + 1)
    sub = generated_subbimodule(bm, [w0])
    assert sub.basis == Subspace.span([unit_vector(bm.dim, k) for k in range(n + 1, bm.dim)], bm.dim)
    assert generated_subbimodule(bm, [unit_vector(bm.dim, 0)]).dim == bm.dim
    assert generated_subbimodule(bm, [(0,) * bm.dim]).dim == 0
    assert is_invariant(bm, sub.basis)


def test_json_round_trip_and_errors():
    bm = m1(3)
    assert Bimodule.from_json(bm.to_json()) == bm
    data = bm.to_json()
    del data["right"]["f"]
    with pytest.raises(BimoduleError, match="'right'.*'f'"):
        Bimodule.from_json(data)


def test_restrict_and_quotient_of_m2():
    bm = m2(4)
    v = Subspace.span([unit_vector(bm.dim, k) for k in range(5)], bm.dim)
    sub = restrict(bm, v)
    quo = quotient_bimodule(bm, v)
    assert sub.dim == 5 and quo.dim == 3
    assert is_antisymmetric(sub) and is_symmetric(quo)
    assert check_axioms(sub).ok and check_axioms(quo).ok
    with pytest.raises(BimoduleError):
        restrict(bm, Subspace.span([unit_vector(bm.dim, 5)], bm.dim))


def _random_verified_bimodules(count, seed):
    """Points of the quadratic-stage branches, moved by random basis changes."""
    rng = random.Random(seed)
    pool = []
    for n, m in [(1, 1), (2, 0), (2, 2), (3, 1), (3, 2), (4, 2)]:
        p = ExtensionProblem(n, m)
        lin = assemble_linear_stage(p)
        branches = case_split_solve(assemble_quadratic_stage(p, lin.solution))
        pool.append((p, lin, branches))
    out = []
    while len(out) < count:
        p, lin, branches = rng.choice(pool)
        pt = rng.choice(branches).sample_point(rng)
        if pt is None:
            continue
        bm = p.bimodule(lin.solution.point([pt[v] for v in lin.solution.variable_names]))
        while True:
            t = Matrix(bm.dim, bm.dim, [[rng.randint(-2, 2) for _ in range(bm.dim)] for _ in range(bm.dim)])
            if rank(t) == bm.dim:
                break
        out.append(conjugate(bm, t, inverse(t)))
    return out


def test_axiom4_redundancy_on_random_instances():
    for bm in _random_verified_bimodules(100, seed=11):
        rep = check_axioms(bm)
        assert rep.axiom2.passed and rep.axiom3.passed
        assert rep.axiom4.passed


def test_axiom4_consistency_on_perturbations():
    rng = random.Random(5)
    for bm in _random_verified_bimodules(30, seed=2):
        k = rng.randrange(3)
        r, c = rng.randrange(bm.dim), rng.randrange(bm.dim)
        rows = bm.left[k].to_lists()
        rows[r][c] += 1
        left = list(bm.left)
        left[k] = Matrix(bm.dim, bm.dim, rows)
        rep = check_axioms(bm.with_left(left))
        assert rep.redundancy_consistent


def test_semidirect_round_trip():
    for bm in _random_verified_bimodules(10, seed=9) + [m1(3), m2(3), adjoint(sl2())]:
        g = semidirect_sum(bm.algebra, bm)
        assert is_leibniz(g)
    assert semidirect_sum(sl2(), Bimodule(sl2(), 0, (Matrix.zeros(0),) * 3, (Matrix.zeros(0),) * 3)) == sl2()


def test_semidirect_rejects_unverified():
    ad = adjoint(sl2())
    with pytest.raises(BimoduleError):
        semidirect_sum(sl2(), Bimodule(ad.algebra, 3, ad.right, ad.right))


def test_direct_sum_is_bimodule():
    s = direct_sum(antisymmetric_irrep(2), symmetric_from_right(sl2(), irrep(1)))
    assert s.dim == 5 and check_axioms(s).ok


def _invariant_lines_2d(bm):
    """Brute force over the lines span{(1, t)} with small rational t and span{(0, 1)}."""
    lines = [Subspace.span([(0, 1)], 2)]
    for num in range(-6, 7):
        for den in (1, 2, 3):
            lines.append(Subspace.span([(1, Fraction(num, den))], 2))
    return {ln.basis for ln in lines if is_invariant(bm, ln)}


def test_adjoint_nilpotent_not_completely_reducible():
    bm = adjoint(nilpotent_2d())
    assert _invariant_lines_2d(bm) == {((0, 1),)}
    assert not is_completely_reducible_general(bm)
    assert not is_simple_general(bm)
    assert [s.basis for s in heuristic_subbimodules(bm)] == [Subspace.span([(0, 1)], 2)]


def test_general_route_on_completely_reducible_examples():
    assert is_completely_reducible_general(adjoint(sl2()))
    assert is_simple_general(adjoint(sl2()))
    s = direct_sum(antisymmetric_irrep(2), antisymmetric_irrep(2))
    assert is_completely_reducible_general(s) and not is_simple_general(s)
