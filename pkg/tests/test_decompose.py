import random
from fractions import Fraction

import pytest

from leibniz_bimod.algebra import Subspace, nilpotent_2d, sl2
from leibniz_bimod.bimodule import (
    Bimodule,
    adjoint,
    antisymmetric_from_right,
    check_axioms,
    conjugate,
    direct_sum,
    is_antisymmetric,
    is_invariant,
    is_symmetric,
    restrict,
    semidirect_sum,
    symmetric_from_right,
)
from leibniz_bimod.decompose import (
    DECOMPOSABLE,
    INDECOMPOSABLE,
    SIMPLE,
    DecompositionError,
    decompose,
    highest_weight_vectors,
    is_completely_reducible,
    is_simple,
    schur_iso_check,
)
from leibniz_bimod.exactlin import Matrix, lin_comb, rank, unit_vector
from leibniz_bimod.sl2ext import antisymmetric_irrep, irrep, m1, m2, prop_family, right_sum


def sym(n):
    return symmetric_from_right(sl2(), irrep(n))


def right_only(n, m):
    return antisymmetric_from_right(sl2(), right_sum(n, m))


def check_summands(bm, rep):
    d = bm.dim
    vecs = [v for s in rep.summands for v in s.basis.basis]
    assert len(vecs) == d and rank(Matrix.from_rows(vecs)) == d
    assert all(is_invariant(bm, s.basis) for s in rep.summands)


def test_highest_weight_vectors_examples():
    assert highest_weight_vectors(antisymmetric_irrep(3)) == [(3, [unit_vector(4, 0)])]
    hw = highest_weight_vectors(right_only(4, 2))
    assert [(lam, len(vs)) for lam, vs in hw] == [(4, 1), (2, 1)]
    hw = highest_weight_vectors(right_only(2, 2))
    assert [(lam, len(vs)) for lam, vs in hw] == [(2, 2)]


def test_highest_weight_vectors_nondiagonal_basis():
    bm = right_only(2, 1)
    t = Matrix.from_rows([[1, 1, 0, 0, 0], [0, 1, 0, 0, 2], [0, 0, 1, 0, 0],
                          [0, 0, 1, 1, 0], [1, 0, 0, 0, 1]])
    from leibniz_bimod.exactlin import inverse
    moved = conjugate(bm, t, inverse(t))
    hw = highest_weight_vectors(moved)
    assert [(lam, len(vs)) for lam, vs in hw] == [(2, 1), (1, 1)]


def test_highest_weight_rejects_non_module():
    bad = Bimodule(sl2(), 2, (Matrix.zeros(2),) * 3,
                   (Matrix.zeros(2), Matrix.zeros(2), Matrix.diagonal([Fraction(1, 2), 0])))
    with pytest.raises(DecompositionError):
        highest_weight_vectors(bad)


def test_decompose_direct_sum():
    bm = direct_sum(antisymmetric_irrep(4), sym(2))
    rep = decompose(bm)
    assert rep.verdict == DECOMPOSABLE and len(rep.summands) == 2
    check_summands(bm, rep)


def test_decompose_m1_unique_subbimodule():
    bm = m1(4)
    rep = decompose(bm)
    assert rep.verdict == INDECOMPOSABLE
    sub = rep.unique_proper_subbimodule
    assert sub is not None and sub.dim == 3
    w = Subspace.span([unit_vector(8, k) for k in range(5, 8)], 8)
    assert sub.basis == w


def test_decompose_simple():
    assert decompose(sym(3)).verdict == SIMPLE
    assert decompose(antisymmetric_irrep(0)).verdict == SIMPLE


def test_l0_example_splits_into_x_and_y():
    n = 2
    bm = prop_family("0", n, n, (0, 1, 0, -1))
    rep = decompose(bm)
    assert rep.verdict == DECOMPOSABLE
    v = lambda i: unit_vector(2 * n + 2, i)
    w = lambda i: unit_vector(2 * n + 2, n + 1 + i)
    x = Subspace.span([lin_comb((1, 1), (v(i), w(i))) for i in range(n + 1)], 2 * n + 2)
    y = Subspace.span([w(i) for i in range(n + 1)], 2 * n + 2)
    assert {s.basis for s in rep.summands} == {x, y}


def test_completely_reducible_examples():
    five = semidirect_sum(sl2(), antisymmetric_irrep(1))
    assert not is_completely_reducible(adjoint(five))
    assert not is_completely_reducible(adjoint(nilpotent_2d()))
    assert is_completely_reducible(sym(2))
    assert not is_completely_reducible(m1(4))
    assert is_completely_reducible(direct_sum(sym(2), antisymmetric_irrep(2)))
    assert not is_simple(adjoint(five)) and not is_simple(m2(3))


def test_schur_iso_rescaled_w():
    bm = m1(4)
    t = Matrix.diagonal([1] * 5 + [3] * 3)
    t_inv = Matrix.diagonal([1] * 5 + [Fraction(1, 3)] * 3)
    res = schur_iso_check(bm, conjugate(bm, t, t_inv))
    assert res and res.witness == (1, 3)
    assert res.intertwiner == t


def test_schur_iso_negative_cases():
    assert not schur_iso_check(m1(4), m2(4))
    split = right_only(4, 2)
    assert not schur_iso_check(m1(4), split)
    with pytest.raises(DecompositionError):
        schur_iso_check(right_only(2, 2), right_only(2, 2))


def test_simple_reports_are_symmetric_or_antisymmetric():
    rng = random.Random(4)
    for _ in range(10):
        n = rng.randint(0, 4)
        for bm in (sym(n), antisymmetric_irrep(n)):
            rep = decompose(bm)
            assert rep.verdict == SIMPLE
            assert is_symmetric(bm) or is_antisymmetric(bm)
    for n in range(2, 6):
        for bm in (m1(n), m2(n)):
            rep = decompose(bm)
            for s in rep.summands:
                part = restrict(bm, s.basis)
                if decompose(part).verdict == SIMPLE:
                    assert is_symmetric(part) or is_antisymmetric(part)


def _solutions_a2_plus_a(rng):
    while True:
        p = [[Fraction(rng.randint(-3, 3)) for _ in range(2)] for _ in range(2)]
        det = p[0][0] * p[1][1] - p[0][1] * p[1][0]
        if det:
            break
    inv = [[p[1][1] / det, -p[0][1] / det], [-p[1][0] / det, p[0][0] / det]]
    a = [[p[i][0] * 0 * inv[0][j] + p[i][1] * -1 * inv[1][j] for j in range(2)] for i in range(2)]
    # column convention: A = [[phi11, phi21], [phi12, phi22]]
    return a[0][0], a[1][0], a[0][1], a[1][1]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_l0_points_split_with_the_expected_witnesses(n):
    rng = random.Random(n)
    d = 2 * n + 2
    v = lambda i: unit_vector(d, i)
    w = lambda i: unit_vector(d, n + 1 + i)
    V = Subspace.span([v(i) for i in range(n + 1)], d)
    points = [_solutions_a2_plus_a(rng) for _ in range(12)]
    points += [(0, 0, Fraction(k), -1) for k in (-2, 1, 3)] + [(-1, 0, Fraction(k), 0) for k in (-1, 2)]
    for p11, p12, p21, p22 in points:
        bm = prop_family("0", n, n, (p11, p12, p21, p22))
        assert check_axioms(bm).ok
        rep = decompose(bm)
        assert rep.verdict == DECOMPOSABLE
        got = {s.basis for s in rep.summands}
        if p12 != 0:
            x = Subspace.span([lin_comb((1 + p11, p12), (v(i), w(i))) for i in range(n + 1)], d)
            y = Subspace.span([lin_comb((p11, p12), (v(i), w(i))) for i in range(n + 1)], d)
            assert got == {x, y}
        elif p11 == 0:
            u = Subspace.span([lin_comb((p21, -1), (v(i), w(i))) for i in range(n + 1)], d)
            assert got == {V, u}
        else:
            u = Subspace.span([lin_comb((p21, 1), (v(i), w(i))) for i in range(n + 1)], d)
            assert got == {V, u}
