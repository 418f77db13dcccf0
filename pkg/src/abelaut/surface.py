"""Automorphisms, fixed points and smoothness of the degree-p surfaces f_lambda = 0.

The universal part of the classification (every automorphism is diagonal)
is not searched for; what is checked here are its computable ingredients
plus an exhaustive scan of the diagonal candidates.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from . import linalg
from .errors import BadReduction, DegenerateInput, InconsistencyError, InvalidMap
from .poly import (
    Polynomial,
    build_deformed_fermat,
    directional_derivative,
    hessian_entry,
    hessian_pairing,
    is_scalar_multiple,
    linear_substitute,
    multilinear_form,
    partial_derivative,
    unit_vector,
)
from .scalars import CyclotomicNumber, as_rational, exact_div, is_prime, is_root_of_unity, render_cyclotomic, zeta


@dataclass(frozen=True)
class ProjectivePoint:
    coords: tuple

    def __post_init__(self):
        lead = next((c for c in self.coords if c), None)
        if lead is None:
            raise DegenerateInput("the zero vector is not a projective point")
        object.__setattr__(self, "coords", tuple(exact_div(c, lead) if c else 0 for c in self.coords))

    def __str__(self):
        return "[" + ":".join(render_cyclotomic(c) if not isinstance(c, int) else str(c) for c in self.coords) + "]"


@dataclass(frozen=True)
class AutomorphismRecord:
    matrix: tuple
    alpha: object
    order: int | None

    def is_trivial(self):
        return self.order == 1


def projective_key(M):
    """Matrix scaled so its first nonzero entry (row-major) is 1."""
    lead = next(a for r in M for a in r if a)
    if lead == 1:
        return tuple(tuple(a if a else 0 for a in r) for r in M)
    return tuple(tuple(exact_div(a, lead) if a else 0 for a in r) for r in M)


def _is_scalar_matrix(M):
    d = M[0][0]
    return all((a == d) if i == j else (not a) for i, r in enumerate(M) for j, a in enumerate(r))


def _is_diagonal(M):
    n = len(M)
    return not any(M[i][j] for i in range(n) for j in range(n) if i != j)


def _compose(A, B):
    if _is_diagonal(A) and _is_diagonal(B):
        return linalg.diag([A[i][i] * B[i][i] for i in range(len(A))], zero=0)
    return linalg.matmul(A, B)


def projective_order(M, limit=1000):
    """Least k >= 1 with M^k scalar, or None if none up to ``limit``."""
    n = len(M)
    if _is_diagonal(M):
        d = [M[i][i] for i in range(n)]
        D = list(d)
        for k in range(1, limit + 1):
            if all(x == D[0] for x in D):
                return k
            D = [x * y for x, y in zip(D, d)]
        return None
    P = M
    for k in range(1, limit + 1):
        if _is_scalar_matrix(P):
            return k
        P = linalg.matmul(P, M)
    return None


def verify_projective_automorphism(f: Polynomial, M, order_limit=1000):
    """AutomorphismRecord if f(Mx) = alpha*f(x) for a nonzero alpha, else None."""
    if len(M) != f.nvars:
        raise InvalidMap(f"matrix size {len(M)} does not match arity {f.nvars}")
    if not linalg.det(M):
        raise InvalidMap("singular matrix does not define a projective map")
    alpha = is_scalar_multiple(linear_substitute(f, M), f)
    if alpha is None or not alpha:
        return None
    return AutomorphismRecord(M, alpha, projective_order(M, order_limit))


def diagonal_matrix(p, exponents):
    """diag(1, z^a, z^b, z^c) over Q(zeta_p)."""
    one = CyclotomicNumber.from_rational(p, 1)
    entries = [one] + [zeta(p, k) for k in exponents]
    return linalg.diag(entries, zero=0)


def _scan_chunk(args):
    f, p, chunk = args
    found = []
    for exps in chunk:
        rec = verify_projective_automorphism(f, diagonal_matrix(p, exps), order_limit=2 * p)
        if rec is not None:
            found.append((exps, rec))
    return found


def _threads():
    try:
        return max(1, int(os.environ.get("ABELAUT_THREADS", "1")))
    except ValueError:
        return 1


def enumerate_diagonal_automorphisms(f: Polynomial, p: int):
    """All diag(1, z^a, z^b, z^c), 0 <= a, b, c < p, preserving f up to scalar.

    Records come back ordered by exponent triple (a, b, c).
    """
    candidates = list(product(range(p), repeat=3))
    workers = _threads()
    if workers == 1:
        found = _scan_chunk((f, p, candidates))
    else:
        chunks = [candidates[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            found = [hit for part in pool.map(_scan_chunk, [(f, p, c) for c in chunks]) for hit in part]
    found.sort(key=lambda hit: hit[0])
    return [rec for _, rec in found]


def diagonal_exponents(M, p):
    """(a, b, c) with M ~ diag(1, z^a, z^b, z^c), or None."""
    key = projective_key(M)
    if any(key[i][j] for i in range(len(key)) for j in range(len(key)) if i != j):
        return None
    exps = []
    for i in range(1, len(key)):
        x = key[i][i]
        for k in range(p):
            if x == zeta(p, k):
                exps.append(k)
                break
        else:
            return None
    return tuple(exps)


@dataclass
class CyclicGroupReport:
    is_cyclic: bool
    order: int
    generator: AutomorphismRecord | None


def cyclic_group_report(records, p=None) -> CyclicGroupReport:
    """Group structure of a list of projective automorphisms.

    Raises InconsistencyError if the projective classes are not closed
    under composition, or (when ``p`` is given) if some diagonal entry is
    not a p-th root of unity, which the diagonal enumerator cannot produce.
    """
    if not records:
        raise InconsistencyError("empty automorphism list")
    keys = {projective_key(r.matrix): r for r in records}
    if len(keys) != len(records):
        raise InconsistencyError("duplicate projective classes in record list")
    if p is not None:
        for key in keys:
            for i, row in enumerate(key):
                for j, a in enumerate(row):
                    if i == j and is_root_of_unity(a) not in (1, p):
                        raise InconsistencyError(f"entry {a} is not a {p}-th root of unity")
    exps = [diagonal_exponents(k, p) for k in keys] if p is not None else [None]
    if all(e is not None for e in exps):
        # diag(1, z^a, z^b, z^c): composition adds exponents mod p
        table = set(exps)
        for e1 in exps:
            for e2 in exps:
                if tuple((x + y) % p for x, y in zip(e1, e2)) not in table:
                    raise InconsistencyError("record set is not closed under composition")
    else:
        for k1 in keys:
            for k2 in keys:
                if projective_key(_compose(k1, k2)) not in keys:
                    raise InconsistencyError("record set is not closed under composition")
    n = len(records)

    def sort_key(r):
        e = diagonal_exponents(r.matrix, p) if p is not None else None
        return (0, e) if e is not None else (1, str(r.matrix))

    generators = sorted((r for r in records if r.order == n), key=sort_key)
    if generators:
        return CyclicGroupReport(True, n, generators[0])
    return CyclicGroupReport(False, n, None)


# ---------------------------------------------------------------------------
# fixed points and freeness
# ---------------------------------------------------------------------------

@dataclass
class FixedLocus:
    points: tuple
    eigenspaces: tuple
    positive_dimensional: bool

    def describe(self):
        if not self.positive_dimensional:
            return f"{len(self.points)} isolated points"
        big = [s for s in self.eigenspaces if len(s) > 1]
        return "positive-dimensional: " + ", ".join(
            "all of P^3" if len(s) == 4 else f"span of e{'/e'.join(map(str, s))}" for s in big
        )


def fixed_points_in_p3(M) -> FixedLocus:
    """Fixed locus in P^3 of a diagonal matrix, grouped by eigenvalue."""
    n = len(M)
    if any(M[i][j] for i in range(n) for j in range(n) if i != j):
        raise InvalidMap("fixed_points_in_p3 expects a diagonal matrix")
    classes = {}
    for i in range(n):
        classes.setdefault(M[i][i], []).append(i + 1)
    spaces = tuple(tuple(idx) for idx in classes.values())
    points = tuple(ProjectivePoint(unit_vector(s[0], n)) for s in spaces if len(s) == 1)
    return FixedLocus(points, spaces, any(len(s) > 1 for s in spaces))


@dataclass
class FreenessReport:
    free: bool
    reason: str
    fixed_points: list = field(default_factory=list)

    def __bool__(self):
        return self.free


def freeness_check(f: Polynomial, records) -> FreenessReport:
    """True iff no nontrivial record has a fixed point on f = 0."""
    seen = []
    for rec in records:
        if rec.order == 1 or _is_scalar_matrix(rec.matrix):
            continue
        locus = fixed_points_in_p3(rec.matrix)
        if locus.positive_dimensional:
            return FreenessReport(False, f"indeterminate: {locus.describe()}", seen)
        for pt in locus.points:
            if not f.evaluate(pt.coords):
                return FreenessReport(False, f"fixed point {pt} lies on the surface", seen)
        seen.append(locus.points)
    return FreenessReport(True, "no fixed point of a nontrivial element lies on the surface", seen)


# ---------------------------------------------------------------------------
# smoothness by reduction mod q
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmoothnessCertificate:
    p: int
    lam: Fraction
    q: int
    smooth: bool
    witness: tuple | None
    points_scanned: int

    @property
    def verdict(self):
        return "smooth" if self.smooth else "singular-with-witness"


def _reduce_mod(c, q):
    c = as_rational(c)
    return (c.numerator * pow(c.denominator, -1, q)) % q


def _eval_mod(poly_terms, cols, table, q, n):
    acc = np.zeros(n, dtype=np.int64)
    for coef, exps in poly_terms:
        t = np.full(n, coef, dtype=np.int64)
        for k, e in enumerate(exps):
            if e:
                t = (t * table[e][cols[k]]) % q
        acc = (acc + t) % q
    return acc


def smoothness_certificate(p: int, lam, q: int) -> SmoothnessCertificate:
    """Scan every point of P^3(F_q) for a common zero of f and its gradient.

    Only F_q-rational points are examined; see the README for what a
    smooth verdict does and does not establish.
    """
    lam = as_rational(lam)
    if not is_prime(q):
        raise BadReduction(f"q = {q} is not prime")
    if q == p:
        raise BadReduction("q must differ from p")
    if lam.denominator % q == 0:
        raise BadReduction(f"q = {q} divides the denominator of lambda = {lam}")
    f = build_deformed_fermat(p, lam)
    polys = [f] + [partial_derivative(f, i) for i in range(1, 5)]
    reduced = [[(_reduce_mod(c, q), e) for e, c in g.terms.items()] for g in polys]
    reduced = [[(c, e) for c, e in terms if c] for terms in reduced]
    table = [np.array([pow(x, e, q) for x in range(q)], dtype=np.int64) for e in range(p + 1)]

    scanned = 0
    grid = np.arange(q, dtype=np.int64)
    # charts (1,a,b,c), (0,1,b,c), (0,0,1,c), (0,0,0,1)
    for lead in range(4):
        free = 3 - lead
        if free == 0:
            blocks = [np.zeros((1, 0), dtype=np.int64)]
        else:
            mesh = np.stack(np.meshgrid(*([grid] * free), indexing="ij"), axis=-1).reshape(-1, free)
            blocks = np.array_split(mesh, max(1, len(mesh) // 200_000))
        for block in blocks:
            n = len(block)
            cols = [np.zeros(n, dtype=np.int64)] * lead + [np.ones(n, dtype=np.int64)]
            cols += [block[:, k] for k in range(free)]
            mask = np.ones(n, dtype=bool)
            for terms in reduced:
                vals = _eval_mod(terms, cols, table, q, n)
                mask &= vals == 0
                if not mask.any():
                    break
            scanned += n
            if mask.any():
                i = int(np.flatnonzero(mask)[0])
                witness = tuple(int(c[i]) for c in cols)
                return SmoothnessCertificate(p, lam, q, False, witness, scanned)
    return SmoothnessCertificate(p, lam, q, True, None, scanned)


# ---------------------------------------------------------------------------
# Step 1-2 machinery: orthogonality and top derivatives
# ---------------------------------------------------------------------------

def orthogonal_complement(f: Polynomial, a):
    """Basis of {b : <a, b> = 0} where <,> is the Hessian pairing of f."""
    if not any(a):
        raise DegenerateInput("a = 0 pairs to zero with everything")
    g = directional_derivative(f, a)
    cols = [partial_derivative(g, j) for j in range(1, f.nvars + 1)]
    monos = sorted(set().union(*(c.terms for c in cols)))
    rows = [[c.coefficient(m) for c in cols] for m in monos]
    one = next((x for x in a if x), 1)
    one = exact_div(one, one)
    return linalg.nullspace(rows, ncols=f.nvars, one=one) if rows else linalg.nullspace([], f.nvars, one)


SYMBOLIC_NAMES = ("a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4", "lam")


def _monomial_quotient(num: Polynomial, den: Polynomial):
    """Single-term Q with Q*den == num, or None."""
    if not den or not num:
        return None
    (en, cn), (ed, cd) = num.sorted_terms()[0], den.sorted_terms()[0]
    diff = tuple(x - y for x, y in zip(en, ed))
    if min(diff) < 0:
        return None
    Q = Polynomial(num.names, {diff: exact_div(cn, cd)})
    return Q if Q * den == num else None


def _only_lambda(Q: Polynomial):
    return all(not any(e[:8]) for e in Q.terms)


@dataclass
class OrthogonalityReport:
    p: int
    checks: dict

    @property
    def ok(self):
        return all(self.checks.values())

    def __bool__(self):
        return self.ok


def verify_orthogonality_coefficient_identities(p: int) -> OrthogonalityReport:
    """Replay the coefficient extraction behind the orthogonality argument symbolically."""
    R = SYMBOLIC_NAMES
    var = [Polynomial.variable(R, i) for i in range(1, 10)]
    a, b, lam = var[0:4], var[4:8], var[8]
    f = build_deformed_fermat(p, lam)
    pair = hessian_pairing(f, a, b)

    def mono(*exps):
        return tuple(exps)

    checks = {}
    for i in range(1, 5):
        m = tuple(p - 2 if k == i else 0 for k in range(1, 5))
        Q = _monomial_quotient(pair.coefficient(m), a[i - 1] * b[i - 1])
        checks[f"x{i}^(p-2) coefficient is a nonzero multiple of a{i}*b{i}"] = Q is not None and Q.is_constant()
        others = [
            hessian_entry(f, k, l).coefficient(m)
            for k in range(1, 5)
            for l in range(1, 5)
            if (k, l) != (i, i)
        ]
        checks[f"only H{i}{i} involves x{i}^(p-2)"] = not any(others)

    displayed = {
        mono(1, p - 5, 2, 0): lam * (2 * (p - 4)) * (a[1] * b[0] + a[0] * b[1]),
        mono(1, p - 4, 1, 0): lam * 4 * (a[2] * b[0] + a[0] * b[2]),
        mono(3, p - 6, 0, 1): lam * 8 * (a[3] * b[0] + a[0] * b[3]),
    }
    for m, expected in displayed.items():
        checks[f"coefficient of x^{m} matches the closed form"] = pair.coefficient(m) == expected

    second = {
        mono(2, p - 5, 1, 0): a[2] * b[1] + a[1] * b[2],
        mono(4, p - 7, 0, 1): a[3] * b[1] + a[1] * b[3],
    }
    for m, target in second.items():
        Q = _monomial_quotient(pair.coefficient(m), target)
        checks[f"coefficient of x^{m} is a nonzero multiple of the symmetric form"] = (
            Q is not None and _only_lambda(Q)
        )
    return OrthogonalityReport(p, checks)


def top_derivative_support(f: Polynomial, i: int):
    """{j : the p-th partial d^p f / dx_i^(p-1) dx_j is nonzero}."""
    d = f.degree()
    ei = unit_vector(i, f.nvars)
    return {j for j in range(1, f.nvars + 1) if multilinear_form(f, *([ei] * (d - 1) + [unit_vector(j, f.nvars)]))}


def pairing_equivariance_holds(f: Polynomial, record: AutomorphismRecord, u, v) -> bool:
    """<Mu, Mv>(Mx) == alpha <u, v>(x) for the record's matrix M and scalar alpha."""
    M = record.matrix
    lhs = linear_substitute(hessian_pairing(f, linalg.matvec(M, u), linalg.matvec(M, v)), M)
    return lhs == hessian_pairing(f, u, v).scale(record.alpha)


SWAPS = {
    "x1<->x2": ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)),
    "x3<->x4": ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, 1), (0, 0, 1, 0)),
    "both": ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, 0, 1), (0, 0, 1, 0)),
}


def swap_case_rejected(f: Polynomial) -> dict:
    """For each coordinate swap P: is f(Px) not a multiple of f, for every diagonal rescaling?

    Rescaling by an invertible diagonal matrix never changes the support,
    so a support mismatch settles all rescalings at once.
    """
    out = {}
    for name, P in SWAPS.items():
        g = linear_substitute(f, P)
        out[name] = verify_projective_automorphism(f, P) is None and g.support() != f.support()
    return out
