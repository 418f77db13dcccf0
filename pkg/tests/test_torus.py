from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from abelaut import fixtures, linalg
from abelaut.errors import (
    BudgetError,
    DegenerateInput,
    InvalidComplexStructure,
    NotAnAutomorphism,
    NothingToQuotient,
    NotStable,
    TranslationCase,
)
from abelaut.torus import (
    INFINITE,
    IsogenyDecomposition,
    LatticeMap,
    TorsionPoint,
    affine_fixed_points,
    check_condition_double_star,
    check_condition_star,
    derive_quotient_datum,
    endomorphism_basis,
    enumerate_finite_automorphisms,
    fixed_point_count,
    hom_basis,
    induced_map_on_quotient,
    is_closed_under_composition,
    make_torus,
    order_of,
    power_trivial_on_torsion,
    product_torus,
    quotient_by_subgroup,
    reduce_mod1,
    simplicity_screen,
    span_coordinates,
    squarefree_part,
    subgroup_closure,
    subgroups_of_torsion,
    torsion_group,
)
from oracles import bruteforce_affine_fixed_points, naive_order, subgroups_by_small_generating_sets

F = Fraction
J = ((0, -1), (1, 0))
MINUS = ((-1, 0), (0, -1))


@pytest.fixture(scope="module")
def Ei():
    return fixtures.gaussian_curve()


@pytest.fixture(scope="module")
def E6():
    return fixtures.eisenstein_curve()


@pytest.fixture(scope="module")
def EE(Ei):
    return product_torus(Ei, Ei)


def small_endomorphisms(T, bound=2):
    basis = endomorphism_basis(T)
    out = []
    for coeffs in product(range(-bound, bound + 1), repeat=len(basis)):
        M = linalg.zeros(T.dim)
        for c, B in zip(coeffs, basis):
            M = linalg.matadd(M, linalg.matscale(c, B))
        out.append(M)
    return out


# --- complex structures -----------------------------------------------------

def test_make_torus_examples():
    assert make_torus(J).g == 1
    with pytest.raises(InvalidComplexStructure):
        make_torus(((0, -1), (1, -1)))
    with pytest.raises(InvalidComplexStructure):
        make_torus(((1, 0), (0, 1)))
    with pytest.raises(InvalidComplexStructure):
        make_torus(((0,),))
    with pytest.raises(InvalidComplexStructure):
        make_torus({4: J})


def test_eisenstein_structure_from_multiplication_by_tau(E6):
    rho = ((0, -1), (1, 1))  # tau = exp(i pi/3) acting on the basis 1, tau
    K = linalg.matsub(linalg.matscale(2, rho), linalg.identity(2))
    assert linalg.matmul(K, K) == linalg.matscale(-3, linalg.identity(2))
    T = make_torus({3: K})
    assert T.structure == E6.structure
    assert T.J is None and E6.structure.commutes(rho)
    # no rational matrix works for this lattice: the commutant of a rational J is Z[J] with J^2 = -1
    assert not hom_basis(E6, fixtures.gaussian_curve())


def test_squarefree_part():
    assert [squarefree_part(n) for n in (1, 2, 4, 12, 18, 30)] == [1, 2, 1, 3, 2, 30]


# --- endomorphisms ----------------------------------------------------------

def test_endomorphism_ranks(Ei, E6, EE):
    assert len(endomorphism_basis(Ei)) == 2
    assert len(endomorphism_basis(E6)) == 2
    assert len(endomorphism_basis(fixtures.cm_product().product)) == 4
    assert len(endomorphism_basis(EE)) == 8


@pytest.mark.parametrize("name", ["Ei", "E6"])
def test_endomorphism_basis_spans_small_commuting_matrices(name, Ei, E6):
    T = {"Ei": Ei, "E6": E6}[name]
    basis = endomorphism_basis(T)
    for entries in product(range(-2, 3), repeat=4):
        M = (entries[:2], entries[2:])
        if T.structure.commutes(M):
            assert span_coordinates(basis, M) is not None
        else:
            assert span_coordinates(basis, M) is None


@pytest.mark.parametrize("which", ["Ei", "E6", "prod", "EE"])
def test_endomorphism_ring_closed(which, Ei, E6, EE):
    T = {"Ei": Ei, "E6": E6, "EE": EE, "prod": fixtures.cm_product().product}[which]
    basis = endomorphism_basis(T)
    for A in basis:
        for B in basis:
            assert span_coordinates(basis, linalg.matmul(A, B)) is not None
    assert span_coordinates(basis, linalg.identity(T.dim)) is not None


def test_lattice_map_checks(Ei, E6):
    LatticeMap.endo(Ei, J)
    with pytest.raises(DegenerateInput):
        LatticeMap.endo(E6, J)
    with pytest.raises(DegenerateInput):
        LatticeMap.endo(Ei, ((F(1, 2), 0), (0, 1)))


# --- orders and fixed points ------------------------------------------------

def test_order_examples():
    assert order_of(fixtures.shear_matrix()) is INFINITE
    assert order_of(J) == 4
    assert order_of(MINUS) == 2
    with pytest.raises(NotAnAutomorphism):
        order_of(((2, 0), (0, 1)))


def test_order_agrees_with_iteration_on_fixture_units(Ei, E6, EE):
    corpus = []
    for T in (Ei, E6, fixtures.cm_product().product):
        corpus += enumerate_finite_automorphisms(T, 2)
    units = [M for M in small_endomorphisms(EE, 1) if abs(linalg.det(M)) == 1]
    corpus += units[:: max(1, len(units) // 60)]
    assert len(corpus) > 80
    for M in corpus:
        k = order_of(M)
        assert naive_order(M) == (None if k is INFINITE else k)


GL2_GENERATORS = (((1, 1), (0, 1)), ((1, 0), (1, 1)), ((0, 1), (1, 0)), ((-1, 0), (0, 1)), ((1, -1), (0, 1)))


def _word(ws):
    M = linalg.identity(2)
    for w in ws:
        M = linalg.matmul(M, GL2_GENERATORS[w])
    return M


gl2 = st.lists(st.integers(0, len(GL2_GENERATORS) - 1), max_size=6).map(_word)
gl4_blocks = st.tuples(gl2, gl2, st.tuples(*[st.integers(-1, 1)] * 4)).map(
    lambda t: (
        t[0][0] + (t[2][0], t[2][1]),
        t[0][1] + (t[2][2], t[2][3]),
        (0, 0) + t[1][0],
        (0, 0) + t[1][1],
    )
)


@given(st.one_of(gl2, gl4_blocks))
def test_order_agrees_with_iteration(M):
    k = order_of(M)
    assert naive_order(M) == (None if k is INFINITE else k)


def test_fixed_point_examples():
    assert fixed_point_count(linalg.identity(2)) == 0
    assert fixed_point_count(J) == 2
    assert fixed_point_count(MINUS) == 4


def test_affine_examples(Ei):
    res = affine_fixed_points(LatticeMap.endo(Ei, J), TorsionPoint(Ei, (0, 0)))
    assert res.count == 2
    assert {p.coords for p in res.representatives} == {(0, 0), (F(1, 2), F(1, 2))}
    res = affine_fixed_points(MINUS, (0, 0))
    assert set(res.representatives) == {reduce_mod1(v) for v in product((0, F(1, 2)), repeat=2)}
    with pytest.raises(TranslationCase):
        affine_fixed_points(linalg.identity(2), (F(1, 3), 0))


def fixed_point_corpus():
    out = []
    for T in (fixtures.gaussian_curve(), fixtures.eisenstein_curve()):
        out += [M for M in small_endomorphisms(T, 2) if 0 < fixed_point_count(M) <= 64]
    out += [M for M in enumerate_finite_automorphisms(fixtures.cm_product().product, 2) if fixed_point_count(M)]
    return out


def test_fixed_point_count_matches_bruteforce():
    corpus = fixed_point_corpus()
    assert len(corpus) >= 20
    for M in corpus:
        n = fixed_point_count(M)
        res = affine_fixed_points(M, (0,) * len(M))
        brute = bruteforce_affine_fixed_points(M, (0,) * len(M), n)
        assert res.count == n == len(brute)
        assert set(res.representatives) == set(brute)


@pytest.mark.parametrize("a", [(F(1, 2), 0), (F(1, 3), F(2, 3)), (F(1, 5), F(1, 7))])
def test_affine_solutions_form_a_coset(a):
    for M in ((0, -1), (1, 0)), ((-1, 0), (0, -1)), ((1, -1), (1, 0)), ((0, -1), (1, 1)):
        D = linalg.matsub(M, linalg.identity(2))
        n = abs(linalg.det(D))
        level = linalg.common_denominator(a)
        res = affine_fixed_points(M, a)
        brute = bruteforce_affine_fixed_points(M, a, level * n)
        assert set(res.representatives) == set(brute) and res.count == n
        kernel = set(affine_fixed_points(M, (0, 0)).representatives)
        s0 = res.representatives[0]
        assert {reduce_mod1(tuple(x - y for x, y in zip(s, s0))) for s in res.representatives} == kernel


# --- torsion ------------------------------------------------------------------

def test_torsion_examples(Ei, EE):
    assert len(torsion_group(Ei, 2)) == 4
    assert len(torsion_group(EE, 3)) == 81
    G = torsion_group(Ei, 2)
    act = {p.coords: G.act(J, p).coords for p in G.points}
    h = F(1, 2)
    assert act[(0, 0)] == (0, 0) and act[(h, h)] == (h, h)
    assert act[(h, 0)] == (0, h) and act[(0, h)] == (h, 0)
    with pytest.raises(BudgetError):
        torsion_group(EE, 50, cap=10**5)


def test_torsion_point_arithmetic(Ei):
    P = TorsionPoint(Ei, (F(1, 7), F(3, 2)))
    assert P.coords == (F(1, 7), F(1, 2)) and P.level == 14
    assert (14 * P).is_zero() and (P - P).is_zero()


def test_power_trivial_examples():
    assert power_trivial_on_torsion(fixtures.shear_matrix(), 2) == 2
    assert power_trivial_on_torsion(J, 1) == 1
    assert power_trivial_on_torsion(J, 2) == 2
    assert power_trivial_on_torsion(fixtures.shear_matrix(), 7) == 7


@given(st.one_of(gl2, gl4_blocks), st.integers(1, 6), st.integers(1, 4))
def test_power_trivial_divisibility(M, n, m):
    assert power_trivial_on_torsion(M, n * m) % power_trivial_on_torsion(M, n) == 0


# --- quotients ----------------------------------------------------------------

def test_quotient_examples(Ei):
    q = quotient_by_subgroup(Ei, [])
    assert q.index == 1 and linalg.is_identity(q.basis) and q.torus.structure == Ei.structure
    q = quotient_by_subgroup(Ei, [(F(1, 2), F(1, 2))])
    assert q.index == 2 and q.torus.structure.squares_to_minus_identity()
    q = quotient_by_subgroup(Ei, [(F(1, 2), 0), (0, F(1, 2))])
    assert q.index == 4
    q = quotient_by_subgroup(Ei, [(F(1, 4), 0)])
    assert q.index == 4


def test_quotient_index_matches_subgroup_order(Ei, E6):
    for T in (Ei, E6):
        for N in (2, 3, 4):
            for H in subgroups_of_torsion(T, N):
                q = quotient_by_subgroup(T, sorted(H))
                assert q.index == len(H)
                assert q.torus.structure.squares_to_minus_identity()
                assert all(not any(q.project(h)) for h in H)


def test_induced_map_examples(Ei, EE):
    H = [(F(1, 2), F(1, 2))]
    Mq = induced_map_on_quotient(LatticeMap.endo(Ei, MINUS), H)
    assert Mq.M == MINUS
    Jq = induced_map_on_quotient(LatticeMap.endo(Ei, J), H)
    assert linalg.matmul(Jq.M, Jq.M) == MINUS
    assert not Jq.is_identity()
    with pytest.raises(NotStable):
        induced_map_on_quotient(LatticeMap.endo(EE, fixtures.shear_matrix()), [(F(1, 2), 0, 0, 0)])
    ident = induced_map_on_quotient(LatticeMap.endo(Ei, linalg.identity(2)), H)
    assert ident.is_identity()


def test_induced_map_commutes_with_projection(Ei, E6):
    cases = [(Ei, J, [(F(1, 2), F(1, 2))]), (Ei, MINUS, [(F(1, 3), 0)]), (E6, ((0, -1), (1, 1)), [(F(1, 3), F(1, 3))])]
    for T, M, H in cases:
        q = quotient_by_subgroup(T, H)
        Mq = induced_map_on_quotient(LatticeMap.endo(T, M), q)
        for level in range(1, 13):
            for p in torsion_group(T, level).points:
                lhs = q.project(linalg.matvec(M, p.coords))
                rhs = reduce_mod1(linalg.matvec(Mq.M, q.project(p.coords)))
                assert lhs == rhs


def test_quotient_rejects_non_torsion(Ei):
    with pytest.raises(DegenerateInput):
        quotient_by_subgroup(Ei, [(F(1, 2),)])


# --- automorphism enumeration ---------------------------------------------------

def test_finite_automorphism_examples(Ei, E6):
    assert len(enumerate_finite_automorphisms(Ei, 1)) == 4
    assert len(enumerate_finite_automorphisms(E6, 1)) == 6
    autos = enumerate_finite_automorphisms(fixtures.cm_product().product, 1)
    assert len(autos) == 24 and is_closed_under_composition(autos)
    assert sorted(order_of(M) for M in enumerate_finite_automorphisms(E6, 3)) == [1, 2, 3, 3, 6, 6]


def test_finite_automorphism_budget(EE):
    with pytest.raises(BudgetError):
        enumerate_finite_automorphisms(EE, 3)


def test_simplicity_screen(Ei, EE):
    assert simplicity_screen(Ei)
    assert not simplicity_screen(EE, bound=1)


# --- subgroups and the two conditions ------------------------------------------------

@pytest.mark.parametrize("N,g", [(2, 1), (3, 1), (4, 1), (6, 1), (2, 2)])
def test_subgroup_enumeration_matches_oracle(N, g):
    T = fixtures.gaussian_curve() if g == 1 else product_torus(fixtures.gaussian_curve(), fixtures.gaussian_curve())
    ours = set(subgroups_of_torsion(T, N))
    assert ours == subgroups_by_small_generating_sets(N, 2 * g)


def test_subgroup_count_known_values(Ei):
    # subgroups of (Z/2)^2, (Z/3)^2 and (Z/4)^2
    assert [len(subgroups_of_torsion(Ei, N)) for N in (2, 3, 4)] == [5, 6, 15]


def test_star_examples():
    d = fixtures.cm_product()
    rep = check_condition_star(d, 7)
    assert rep.ok and rep.max_count == 4
    counts = [sorted(t["counts"]) for t in rep.table]
    assert counts == [[2, 2, 4], [1, 1, 3, 3, 4]]
    rep3 = check_condition_star(d, 3)
    assert not rep3.ok and rep3.witness["count"] == 4
    assert all(t["subgroup_order"] == 1 for t in rep.table)


def test_star_budget_reports_partial():
    d = IsogenyDecomposition((fixtures.gaussian_curve(),), ((F(1, 6), 0),))
    with pytest.raises(BudgetError) as exc:
        check_condition_star(d, 7, cap=3)
    assert exc.value.partial == []


def test_double_star_examples():
    d = fixtures.cm_product()
    assert check_condition_double_star((F(1, 7), 0, F(1, 7), 0), d, 7)
    assert not check_condition_double_star((F(1, 7), 0, 0, 0), d, 7)
    assert not check_condition_double_star((F(1, 2), 0, F(1, 7), 0), d, 7)
    assert not check_condition_double_star((0, 0, 0, 0), d, 7)


def test_double_star_sees_sigma():
    # with Sigma = <(1/2, 0, 1/2, 0)>, P = (1/2, 0, 1/2, 0) + (1/7, 0, 0, 0) lies in A_1
    d = IsogenyDecomposition((fixtures.gaussian_curve(), fixtures.gaussian_curve()), ((F(1, 2), 0, F(1, 2), 0),))
    P = (F(1, 2) + F(1, 7), 0, F(1, 2), 0)
    assert not check_condition_double_star(P, d, 7)
    assert check_condition_double_star((F(1, 7), 0, F(1, 7), 0), d, 7)


def test_derive_examples():
    d = fixtures.cm_product()
    qd = derive_quotient_datum(d, (F(1, 7), 0, F(1, 7), 0), 7)
    assert (qd.N, qd.N_prime, qd.K_order) == (1, 1, 1) and qd.identity_holds
    assert qd.decomposition.h == 1 and qd.star.ok and qd.double_star
    g = fixtures.glued()
    qd = derive_quotient_datum(g, (F(1, 7), 0, F(1, 7), 0), 7)
    assert qd.N == 2 and qd.N_prime * qd.K_order == 2 and qd.identity_holds and qd.divisibility_holds
    assert qd.star.ok and qd.double_star
    with pytest.raises(NothingToQuotient):
        derive_quotient_datum(IsogenyDecomposition((fixtures.gaussian_curve(),)), (F(1, 7), 0))


def test_derive_identity_by_enumeration():
    # recount K and Sigma' directly from the projections
    g = fixtures.glued()
    qd = derive_quotient_datum(g, (F(1, 7), 0, F(1, 7), 0))
    q = qd.quotients[0]
    images = {q.project(g.component(s, 1)) for s in g.sigma}
    kernel = [s for s in g.sigma if not any(q.project(g.component(s, 1)))]
    assert len(images) == qd.N_prime and len(kernel) == qd.K_order
    assert len(images) * len(kernel) == len(g.sigma)


def test_decomposition_records(EE):
    g = fixtures.glued()
    assert g.N == 2 and g.sigma_meets_factor() == [False, False]
    assert g.target.index == 2
    assert g.pairwise_nonisogenous()
    assert not fixtures.gaussian_square().pairwise_nonisogenous()
    assert subgroup_closure([(F(1, 2), F(1, 2), F(1, 2), 0)], 4) == g.sigma
