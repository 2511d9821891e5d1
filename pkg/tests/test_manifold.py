import random

import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import FIXTURE_KS
from tropsh.lattice import Mat2Z, Vec2Z, mat_apply
from tropsh.manifold import (
    CCW,
    CW,
    ORIGIN,
    BadInput,
    BoundaryData,
    LinearFunction,
    NegativeCoords,
    NotLinear,
    TangentVector,
    TropPoint,
    cyclic_system,
    evaluate,
    from_ks,
    integral_points,
    is_linear,
    linear_function_basis,
    monodromy,
    normalize,
    transport_matrix,
    transport_vector,
)

ks_lists = st.lists(st.integers(-5, 5), min_size=1, max_size=6)


def test_build_examples():
    assert all(t == Mat2Z.from_rows([[0, -1], [1, -1]]) for t in from_ks((1, 1, 1)).transitions)
    assert all(t == Mat2Z.from_rows([[0, -1], [1, 0]]) for t in from_ks((0, 0, 0, 0)).transitions)
    m = from_ks((4, 1))
    assert m.transitions == (Mat2Z.from_rows([[0, -1], [1, -4]]), Mat2Z.from_rows([[0, -1], [1, -1]]))
    with pytest.raises(BadInput):
        BoundaryData(0, ())
    with pytest.raises(BadInput):
        BoundaryData(2, (1,))


@pytest.mark.parametrize("name", sorted(FIXTURE_KS))
def test_monodromy_matches_brute_force(name):
    ks = FIXTURE_KS[name]
    mu = monodromy(from_ks(ks))
    assert mu.rows() == oracles.monodromy(ks)
    assert mu.det() == 1


def test_monodromy_examples():
    assert monodromy(from_ks((1, 1, 1))) == Mat2Z.identity()
    assert monodromy(from_ks((-1, -1, -1))) == Mat2Z.from_rows([[-1, 0], [0, -1]])
    mu = monodromy(from_ks((4, 1)))
    assert mu.trace() == 2
    assert mu.rows() == [[-1, 4], [-1, 3]]


def test_normalize_examples():
    m = from_ks((1, 1, 1))
    assert normalize(m, TropPoint(2, (0, 2))) == TropPoint(1, (2, 0))
    assert normalize(m, TropPoint(1, (3, 2))) == TropPoint(1, (3, 2))
    assert normalize(m, TropPoint(1, (0, 0))) == ORIGIN
    assert normalize(m, TropPoint(3, (0, 0))) == ORIGIN
    with pytest.raises(NegativeCoords):
        normalize(m, TropPoint(1, (-1, 0)))


def test_transport_examples():
    for ks in [(1, 1, 1), (0, 0, 0, 0), (4, 1), (2, -3, 5)]:
        m = from_ks(ks)
        for i in range(1, m.n + 1):
            nxt = m.chart(i + 1)
            assert transport_vector(m, TangentVector(i, Vec2Z(1, 0)), nxt).vec == Vec2Z(0, 1)
            assert transport_vector(m, TangentVector(i, Vec2Z(0, 1)), nxt).vec == Vec2Z(-1, -ks[i - 1])
    m = from_ks((1, 1, 1))
    assert transport_vector(m, TangentVector(1, Vec2Z(1, 0)), 1, CCW, turns=1).vec == Vec2Z(1, 0)


def test_integral_point_examples():
    assert len(integral_points(from_ks((1, 1, 1)), 1)) == 7
    assert len(integral_points(from_ks((-2, 0, 3)), 1)) == 7
    assert integral_points(from_ks((1, 1, 1, 1, 1)), 0) == [ORIGIN]
    assert len(integral_points(from_ks((4, 1)), 1)) == 5
    pts = integral_points(from_ks((0, 0, 0, 0)), 3)
    assert len(pts) == len(set(pts))
    assert pts == sorted(pts, key=lambda p: (p.chart, p.a, p.b))


def test_linear_function_examples():
    assert len(linear_function_basis(from_ks((1, 1, 1)))) == 2
    assert linear_function_basis(from_ks((-1, -1, -1))) == []
    basis = linear_function_basis(from_ks((4, 1)))
    assert len(basis) == 1
    a1, a2 = basis[0].values
    assert a1 * -2 == a2 * 1


def test_evaluate_examples():
    m = from_ks((1, 1, 1))
    f = LinearFunction((1, -1, 0))
    assert is_linear(m, f)
    assert evaluate(f, TropPoint(1, (1, 0)), m) == 1
    assert evaluate(f, TropPoint(2, (0, 1)), m) == 1
    assert evaluate(LinearFunction((0, 0, 0)), TropPoint(2, (3, 5)), m) == 0
    with pytest.raises(NotLinear):
        evaluate(LinearFunction((1, 0, 0)), TropPoint(1, (1, 0)), m)


@given(ks_lists)
def test_transitions_unimodular(ks):
    m = from_ks(ks)
    assert all(t.det() == 1 for t in m.transitions)
    assert monodromy(m).det() == 1


@given(ks_lists, st.data())
def test_full_loop_is_monodromy(ks, data):
    m = from_ks(ks)
    v = Vec2Z(data.draw(st.integers(-20, 20)), data.draw(st.integers(-20, 20)))
    mu = monodromy(m)
    assert transport_vector(m, TangentVector(1, v), 1, CCW, turns=1).vec == mat_apply(mu, v)
    inv = transport_matrix(m, 1, 1, CW, turns=1)
    assert (inv @ mu) == Mat2Z.identity()


@given(ks_lists, st.data())
def test_normalize_idempotent_and_ray_consistent(ks, data):
    m = from_ks(ks)
    c = data.draw(st.integers(1, m.n))
    r = data.draw(st.integers(1, 30))
    b = data.draw(st.integers(0, 30))
    p = normalize(m, TropPoint(c, (r, b)))
    assert normalize(m, p) == p
    # the ray of D_c seen from chart c and chart c+1
    assert normalize(m, TropPoint(c, (r, 0))) == normalize(m, TropPoint(c + 1, (0, r)))


@given(ks_lists, st.data())
def test_evaluate_agrees_on_overlaps(ks, data):
    m = from_ks(ks)
    for f in linear_function_basis(m):
        assert is_linear(m, f)
        c = data.draw(st.integers(1, m.n))
        r = data.draw(st.integers(1, 10))
        assert evaluate(f, TropPoint(c, (r, 0))) == evaluate(f, TropPoint(c + 1, (0, r)))


def test_rank_matches_developing_map_oracle():
    rng = random.Random(20241017)
    for _ in range(50):
        n = rng.randint(1, 6)
        ks = [rng.randint(-5, 5) for _ in range(n)]
        m = from_ks(ks)
        assert len(linear_function_basis(m)) == oracles.developing_rank(ks), ks


@given(ks_lists)
def test_basis_solves_cyclic_system(ks):
    m = from_ks(ks)
    rows = cyclic_system(m)
    for f in linear_function_basis(m):
        assert all(sum(r * v for r, v in zip(row, f.values)) == 0 for row in rows)
