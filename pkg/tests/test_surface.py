import pickle
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from abelaut import linalg
from abelaut.errors import BadReduction, DegenerateInput, InconsistencyError, InvalidMap, UnsupportedDegree
from abelaut.poly import Polynomial, build_deformed_fermat, parse_polynomial, unit_vector
from abelaut.scalars import CyclotomicNumber, is_root_of_unity, zeta
from abelaut.surface import (
    SWAPS,
    AutomorphismRecord,
    ProjectivePoint,
    cyclic_group_report,
    diagonal_exponents,
    diagonal_matrix,
    enumerate_diagonal_automorphisms,
    fixed_points_in_p3,
    freeness_check,
    orthogonal_complement,
    pairing_equivariance_holds,
    projective_key,
    smoothness_certificate,
    swap_case_rejected,
    top_derivative_support,
    verify_orthogonality_coefficient_identities,
    verify_projective_automorphism,
)
from oracles import diagonal_preserves, fermat_family_values, naive_singular_points


@pytest.fixture(scope="module")
def f7():
    return build_deformed_fermat(7, 1)


@pytest.fixture(scope="module")
def records7(f7):
    return enumerate_diagonal_automorphisms(f7, 7)


COORDINATE_POINTS = {str(ProjectivePoint(unit_vector(i))) for i in range(1, 5)}


def test_verify_examples(f7):
    rec = verify_projective_automorphism(f7, diagonal_matrix(7, (1, 2, 3)))
    assert rec.alpha == 1 and rec.order == 7
    rec = verify_projective_automorphism(f7, linalg.identity(4))
    assert rec.alpha == 1 and rec.order == 1
    assert verify_projective_automorphism(f7, SWAPS["both"]) is None
    with pytest.raises(InvalidMap):
        verify_projective_automorphism(f7, linalg.zeros(4))
    with pytest.raises(InvalidMap):
        verify_projective_automorphism(f7, linalg.identity(3))


def test_enumeration_matches_monomial_oracle(f7, records7):
    expected = [e for e in product(range(7), repeat=3) if diagonal_preserves(f7.terms, 7, e)]
    assert [diagonal_exponents(r.matrix, 7) for r in records7] == expected
    assert set(expected) == {(k, 2 * k % 7, 3 * k % 7) for k in range(7)}
    assert len(records7) == 7


def test_fermat_control_matches_oracle():
    f0 = build_deformed_fermat(7, 0)
    recs = enumerate_diagonal_automorphisms(f0, 7)
    expected = sum(1 for e in product(range(7), repeat=3) if diagonal_preserves(f0.terms, 7, e))
    assert len(recs) == expected == 343


def test_records_form_a_group(records7):
    keys = {projective_key(r.matrix) for r in records7}
    for a in keys:
        assert projective_key(linalg.inverse(a)) in keys
        for b in keys:
            assert projective_key(linalg.matmul(a, b)) in keys
    assert 7**3 % len(keys) == 0


def test_record_orders_match_eigenvalues(records7):
    for r in records7:
        entries = [r.matrix[i][i] for i in range(4)]
        ratio_orders = [is_root_of_unity(e / entries[0]) for e in entries]
        expected = 1
        for o in ratio_orders:
            expected = max(expected, o)
        assert r.order == expected
        assert linalg.is_identity(projective_key(linalg.matpow(r.matrix, 7)))


def test_cyclic_report_examples(records7):
    rep = cyclic_group_report(records7, 7)
    assert rep.is_cyclic and rep.order == 7
    assert diagonal_exponents(rep.generator.matrix, 7) == (1, 2, 3)
    ident = AutomorphismRecord(diagonal_matrix(7, (0, 0, 0)), 1, 1)
    rep = cyclic_group_report([ident], 7)
    assert rep.is_cyclic and rep.order == 1 and rep.generator is ident
    one = CyclotomicNumber.from_rational(7, 1)
    bad = AutomorphismRecord(linalg.diag([one, -one, one, one]), 1, 2)
    with pytest.raises(InconsistencyError):
        cyclic_group_report([ident, bad], 7)


def test_non_closed_records_are_inconsistent(records7):
    with pytest.raises(InconsistencyError):
        cyclic_group_report(records7[:3], 7)


def test_fixed_point_examples():
    locus = fixed_points_in_p3(diagonal_matrix(7, (1, 2, 3)))
    assert not locus.positive_dimensional
    assert {str(p) for p in locus.points} == COORDINATE_POINTS
    assert fixed_points_in_p3(linalg.identity(4)).positive_dimensional
    line = fixed_points_in_p3(diagonal_matrix(7, (0, 1, 2)))
    assert line.positive_dimensional and (1, 2) in line.eigenspaces
    with pytest.raises(InvalidMap):
        fixed_points_in_p3(SWAPS["both"])


def test_freeness_examples(f7, records7):
    rep = freeness_check(f7, records7)
    assert rep.free
    assert all({str(p) for p in pts} == COORDINATE_POINTS for pts in rep.fixed_points)
    for pt in COORDINATE_POINTS:
        assert f7.evaluate(ProjectivePoint(unit_vector(list(COORDINATE_POINTS).index(pt) + 1)).coords) != 0
    # drop x1^7: [1:0:0:0] now lies on the surface
    g = parse_polynomial("x2^7 + x3^7 + x4^7 + x1^2*x2^3*x3^2 + x1^4*x2*x4^2", 4)
    recs = enumerate_diagonal_automorphisms(g, 7)
    assert not freeness_check(g, recs).free
    ident = verify_projective_automorphism(f7, linalg.identity(4))
    assert freeness_check(f7, [ident]).free


def test_smoothness_examples():
    cert = smoothness_certificate(7, 0, 29)
    assert cert.smooth and cert.points_scanned == 29**3 + 29**2 + 29 + 1
    assert smoothness_certificate(7, 1, 29).smooth
    small = smoothness_certificate(7, 1, 2)
    assert small.points_scanned <= 15
    assert small.smooth == (not naive_singular_points(7, 1, 2))


@pytest.mark.parametrize("lam,q", [(1, 3), (1, 5), (2, 5), (1, 11), (3, 13), (5, 13), (2, 11), (4, 3)])
def test_smoothness_matches_naive_scan(lam, q):
    cert = smoothness_certificate(7, lam, q)
    singular = naive_singular_points(7, lam, q)
    assert cert.smooth == (not singular)
    if not cert.smooth:
        assert cert.witness in singular
        assert not any(fermat_family_values(7, lam, cert.witness, q))


def test_some_reduction_is_singular():
    # keep the witness path exercised: search small (lam, q) for a singular reduction
    found = None
    for q in (3, 5, 11, 13):
        for lam in range(q):
            cert = smoothness_certificate(7, lam, q)
            if not cert.smooth:
                found = cert
                break
        if found:
            break
    assert found is not None
    assert not any(fermat_family_values(7, int(found.lam), found.witness, found.q))


@pytest.mark.parametrize("q", [3, 5, 11, 13, 29])
def test_fermat_is_smooth_mod_q(q):
    assert smoothness_certificate(7, 0, q).smooth


def test_bad_reductions():
    with pytest.raises(BadReduction):
        smoothness_certificate(7, Fraction(1, 29), 29)
    with pytest.raises(BadReduction):
        smoothness_certificate(7, 1, 7)
    with pytest.raises(BadReduction):
        smoothness_certificate(7, 1, 27)


def test_orthogonal_complement_examples(f7):
    e = [unit_vector(i) for i in range(1, 5)]
    (b,) = orthogonal_complement(f7, e[2])
    assert b[0] == b[1] == b[2] == 0 and b[3]
    (b,) = orthogonal_complement(f7, e[3])
    assert b[0] == b[1] == b[3] == 0 and b[2]
    assert orthogonal_complement(f7, e[0]) == []
    with pytest.raises(DegenerateInput):
        orthogonal_complement(f7, (0, 0, 0, 0))


cyclo_entries = st.builds(
    lambda a, b: CyclotomicNumber(7, [a, b]),
    st.integers(-2, 2), st.integers(-2, 2),
)


@given(st.tuples(*[cyclo_entries] * 4))
def test_random_complements_trivial_over_cyclotomic_field(a):
    support = {i for i, x in enumerate(a) if x}
    if not support or support in ({2}, {3}):
        return
    assert orthogonal_complement(build_deformed_fermat(7, 1), a) == []


@pytest.mark.parametrize("p", [7, 11, 13])
def test_orthogonality_identities(p):
    rep = verify_orthogonality_coefficient_identities(p)
    assert rep.ok and len(rep.checks) == 13


def test_orthogonality_needs_p_at_least_7():
    with pytest.raises(UnsupportedDegree):
        verify_orthogonality_coefficient_identities(5)


def test_top_derivative_support(f7):
    assert [top_derivative_support(f7, i) for i in range(1, 5)] == [{1}, {2}, {3}, {4}]


def test_swaps_rejected(f7):
    assert all(swap_case_rejected(f7).values())
    assert not any(swap_case_rejected(build_deformed_fermat(7, 0)).values())


def test_pairing_equivariance_all_records(f7, records7):
    u, v = (1, Fraction(1, 2), -1, 2), (0, 3, 1, Fraction(-2, 3))
    assert all(pairing_equivariance_holds(f7, r, u, v) for r in records7)


def test_pairing_equivariance_detects_non_automorphism(f7):
    fake = AutomorphismRecord(diagonal_matrix(7, (1, 1, 1)), 1, 7)
    assert not pairing_equivariance_holds(f7, fake, (1, 1, 1, 1), (1, 2, 3, 4))


def test_parallel_enumeration_agrees(f7, records7, monkeypatch):
    monkeypatch.setenv("ABELAUT_THREADS", "2")
    par = enumerate_diagonal_automorphisms(f7, 7)
    assert [r.matrix for r in par] == [r.matrix for r in records7]


def test_values_pickle(f7):
    x = zeta(7) + Fraction(1, 3)
    assert pickle.loads(pickle.dumps(x)) == x
    assert pickle.loads(pickle.dumps(f7)) == f7


def test_projective_point_normalizes():
    z = zeta(7)
    p = ProjectivePoint((0, z, 2 * z, 0))
    assert p.coords[1] == 1 and p.coords[2] == 2
    with pytest.raises(DegenerateInput):
        ProjectivePoint((0, 0, 0, 0))
    assert Polynomial.zero(4).evaluate(p.coords) == 0
