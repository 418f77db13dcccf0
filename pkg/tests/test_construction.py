from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from abelaut import fixtures, linalg
from abelaut.construction import (
    FiberAutomorphism,
    TorsorDatum,
    action_freeness,
    default_candidates,
    descent_check,
    dichotomy_holds,
    rigidity_certificate,
    run_candidate_suite,
    subcover_connectivity,
    translation_orbit,
)
from abelaut.errors import DescentError, InvalidDatum, NotAnAutomorphism
from abelaut.torus import INFINITE, order_of, power_trivial_on_torsion, reduce_mod1
from oracles import simulate_descent

F = Fraction
P7 = (F(1, 7), 0, F(1, 7), 0)


@pytest.fixture(scope="module")
def datum():
    return fixtures.cm_product_datum()


@pytest.fixture(scope="module")
def glued():
    return fixtures.glued_datum()


@pytest.fixture(scope="module")
def suite(datum):
    return default_candidates(datum)


def sample_points(datum, count=12):
    pts = [reduce_mod1((0,) * datum.decomp.dim), datum.P]
    for k in range(1, count):
        pts.append(reduce_mod1(tuple(F((k * (i + 3)) % 11, 11) for i in range(datum.decomp.dim))))
    return pts


def test_datum_validation_errors():
    d = fixtures.cm_product()
    with pytest.raises(InvalidDatum):
        TorsorDatum(6, 1, P7, d)
    with pytest.raises(InvalidDatum):
        TorsorDatum(7, 14, P7, d)
    with pytest.raises(InvalidDatum):
        TorsorDatum(7, 1, (F(1, 5), 0, 0, 0), d)
    with pytest.raises(InvalidDatum):
        TorsorDatum(7, 1, (F(1, 7), 0), d)


def test_fixture_datum_is_valid(datum, glued):
    for D in (datum, glued):
        v = D.validate()
        assert v.valid and v.star.ok and v.double_star
        assert action_freeness(D)


def test_group_action_laws(datum):
    for a in sample_points(datum):
        assert datum.act(0, a) == a
        assert datum.act(7, a) == a
        for g in range(1, 7):
            assert datum.act(g, datum.act(1, a)) == datum.act(g + 1, a)


def test_descent_matches_simulation(datum, glued, suite):
    for D, cands in ((datum, suite), (glued, default_candidates(glued))):
        pts = sample_points(D)
        for cand in cands:
            assert descent_check(D, cand) == simulate_descent(D, cand, pts)


def test_translations_always_descend(datum):
    for k in range(7):
        t = FiberAutomorphism.translation(tuple(k * x for x in datum.P))
        assert descent_check(datum, t)
        assert rigidity_certificate(datum, t).kind == "translation"
    t = FiberAutomorphism.translation((F(1, 3), F(2, 5), 0, F(1, 2)))
    assert descent_check(datum, t)


@given(st.integers(0, 47), st.integers(0, 47))
def test_composition_matches_application(i, j):
    suite = fixtures.candidate_suite()
    a, b = suite[i], suite[j]
    comp = a @ b
    for x in sample_points(fixtures.cm_product_datum(), 5):
        assert comp.apply(x) == a.apply(b.apply(x))


def test_composition_of_descending_maps_descends(datum, suite):
    down = [c for c in suite if descent_check(datum, c)]
    for a in down:
        for b in down:
            assert descent_check(datum, a @ b)


def test_product_suite_dichotomy(datum, suite):
    rows = run_candidate_suite(datum, suite)
    assert len(rows) == 48
    assert dichotomy_holds(datum, rows)
    for r in rows:
        if linalg.is_identity(r["phi"]):
            assert r["verdict"] == "translation"
        else:
            assert r["verdict"] == "descent-failure"
            assert 0 < r["n"] < 7
            with pytest.raises(DescentError):
                rigidity_certificate(datum, FiberAutomorphism(r["phi"], r["c"]))


def test_dichotomy_detects_bad_row(datum, suite):
    rows = run_candidate_suite(datum, suite[:4])
    bad = dict(rows[-1], verdict="unresolved")
    assert not dichotomy_holds(datum, rows[:-1] + [bad])
    big = dict(rows[-1], verdict="contradiction", n=9)
    assert not dichotomy_holds(datum, rows[:-1] + [big])


def test_counting_without_descent():
    # Z[i] curve alone with -I: four 2-torsion fixed points, 0 < 4 < 7
    from abelaut.torus import IsogenyDecomposition

    d = IsogenyDecomposition((fixtures.gaussian_curve(),))
    D = TorsorDatum(7, 1, (F(1, 7), 0), d)
    minus = FiberAutomorphism(((-1, 0), (0, -1)))
    with pytest.raises(DescentError):
        rigidity_certificate(D, minus)
    v = rigidity_certificate(D, minus, check_descent=False)
    assert v.kind == "contradiction" and v.n == 4 and not v.descent


def test_shear_power_on_square():
    D = fixtures.gaussian_square_datum()
    S = fixtures.shear_matrix()
    assert order_of(S) is INFINITE
    k = power_trivial_on_torsion(S, 7)
    assert k == 7
    Sk = linalg.matpow(S, k)
    cand = FiberAutomorphism(Sk)
    assert descent_check(D, cand) and not cand.is_translation()
    assert simulate_descent(D, cand, sample_points(D))
    v = rigidity_certificate(D, cand)
    assert v.kind == "unresolved" and v.reason == "phi mixes factors"


def test_fiber_automorphism_errors(datum):
    with pytest.raises(NotAnAutomorphism):
        FiberAutomorphism(linalg.matscale(2, linalg.identity(4)))
    # real swap of coordinates is not complex-linear
    swap = ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    with pytest.raises(NotAnAutomorphism):
        FiberAutomorphism(swap).check_on(datum)


def test_sigma_stability_required(glued):
    # -I on the first factor fixes (1/2,1/2,1/2,0) mod 1, so it is fine;
    # rho on the second factor sends it to (1/2,1/2,0,1/2), which is not in Sigma
    FiberAutomorphism(((-1, 0, 0, 0), (0, -1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))).check_on(glued)
    rho2 = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, -1), (0, 0, 1, 1))
    with pytest.raises(NotAnAutomorphism, match="Sigma"):
        FiberAutomorphism(rho2).check_on(glued)


def test_translation_orbit():
    assert len(translation_orbit((F(1, 7), 0))) == 7
    assert len(translation_orbit((F(1, 2), F(1, 3)))) == 6
    assert translation_orbit((0, 0)) == [(0, 0)]
    with pytest.raises(ValueError):
        translation_orbit((F(1, 1000),), limit=10)


def test_subcover(datum, glued):
    for D in (datum, glued):
        rep = subcover_connectivity(D)
        assert rep.connected and rep.orbit_size == 7


def test_candidate_suite_fixture_matches_generated(datum):
    assert [(c.phi, c.c) for c in fixtures.candidate_suite()] == [(c.phi, c.c) for c in default_candidates(datum)]
