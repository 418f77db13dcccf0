"""Complex tori as lattices with a complex structure.

The lattice is always Z^(2g); a torus is determined by its complex
structure J acting on Q^(2g). Homomorphisms are integer matrices
intertwining the structures, torsion points are rational vectors mod Z^(2g).

J need not be rational: for CM by Q(sqrt(-3)) no rational matrix squares
to -I. A :class:`ComplexStructure` therefore stores J as a formal sum
``sum_d K_d / sqrt(d)`` over distinct squarefree d with rational K_d.
Square roots of distinct squarefree integers are linearly independent
over Q, so a rational X commutes with J iff it commutes with every K_d.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from itertools import product

from . import linalg
from .errors import (
    BudgetError,
    DegenerateInput,
    InvalidComplexStructure,
    NotAnAutomorphism,
    NothingToQuotient,
    NotStable,
    TranslationCase,
)
from .scalars import as_rational

INFINITE = math.inf


def squarefree_part(n: int) -> int:
    out, d = 1, 2
    while d * d <= n:
        while n % (d * d) == 0:
            n //= d * d
        if n % d == 0:
            out *= d
            n //= d
        d += 1
    return out * n


# ---------------------------------------------------------------------------
# complex structures and tori
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComplexStructure:
    parts: tuple  # ((d, K_d), ...), d squarefree, sorted, K_d rational and nonzero

    @classmethod
    def from_parts(cls, parts):
        items = parts.items() if isinstance(parts, dict) else parts
        clean = []
        for d, K in sorted(items, key=lambda kv: int(kv[0])):
            d = int(d)
            if d < 1 or squarefree_part(d) != d:
                raise InvalidComplexStructure(f"radicand {d} must be a positive squarefree integer")
            K = linalg.to_fraction(linalg.as_matrix(K))
            if any(a for r in K for a in r):
                clean.append((d, K))
        if not clean:
            raise InvalidComplexStructure("complex structure is zero")
        n = len(clean[0][1])
        if any(len(K) != n or any(len(r) != n for r in K) for _, K in clean):
            raise InvalidComplexStructure("complex structure blocks must be square of one size")
        if n % 2:
            raise InvalidComplexStructure("complex structure needs even dimension")
        return cls(tuple(clean))

    @classmethod
    def rational(cls, J):
        return cls.from_parts({1: J})

    @property
    def dim(self) -> int:
        return len(self.parts[0][1])

    @property
    def is_rational(self) -> bool:
        return len(self.parts) == 1 and self.parts[0][0] == 1

    @property
    def matrix(self):
        """J itself when rational, else None."""
        return self.parts[0][1] if self.is_rational else None

    def squares_to_minus_identity(self) -> bool:
        n = self.dim
        acc = {}
        for d, K in self.parts:
            for e, L in self.parts:
                s = squarefree_part(d * e)
                # K/sqrt(d) * L/sqrt(e) = K L / (sqrt(s) * sqrt(d e / s))
                scale = Fraction(1, math.isqrt(d * e // s))
                term = linalg.matscale(scale, linalg.matmul(K, L))
                acc[s] = linalg.matadd(acc[s], term) if s in acc else term
        minus_one = linalg.matscale(-1, linalg.identity(n))
        for s, T in acc.items():
            target = minus_one if s == 1 else linalg.zeros(n)
            if T != target:
                return False
        return 1 in acc

    def conjugate(self, B):
        """Structure expressed in the basis given by the columns of B."""
        Binv = linalg.inverse(B)
        return ComplexStructure(tuple((d, linalg.matmul(linalg.matmul(Binv, K), B)) for d, K in self.parts))

    def intertwines(self, X, other: "ComplexStructure") -> bool:
        """X J_self == J_other X for a rational X."""
        mine, theirs = dict(self.parts), dict(other.parts)
        rows = len(X)
        cols = len(X[0]) if X else 0
        for d in set(mine) | set(theirs):
            lhs = linalg.matmul(X, mine[d]) if d in mine else linalg.zeros(rows, cols)
            rhs = linalg.matmul(theirs[d], X) if d in theirs else linalg.zeros(rows, cols)
            if lhs != rhs:
                return False
        return True

    def commutes(self, M) -> bool:
        return self.intertwines(M, self)

    def hom_constraints(self, other: "ComplexStructure"):
        """Integer linear system on the entries of X (row-major) for X J_self = J_other X."""
        n, m = self.dim, other.dim
        mine, theirs = dict(self.parts), dict(other.parts)
        rows = []
        for d in sorted(set(mine) | set(theirs)):
            K = mine.get(d, linalg.zeros(n, zero=Fraction(0)))
            L = theirs.get(d, linalg.zeros(m, zero=Fraction(0)))
            for i in range(m):
                for j in range(n):
                    # (X K)_{ij} - (L X)_{ij}
                    row = [Fraction(0)] * (m * n)
                    for k in range(n):
                        row[i * n + k] += K[k][j]
                    for k in range(m):
                        row[k * n + j] -= L[i][k]
                    if any(row):
                        den = linalg.common_denominator(row)
                        rows.append(tuple(int(x * den) for x in row))
        return rows

    @staticmethod
    def direct_sum(*structures):
        ds = sorted({d for s in structures for d, _ in s.parts})
        parts = []
        for d in ds:
            blocks = [dict(s.parts).get(d, linalg.zeros(s.dim, zero=Fraction(0))) for s in structures]
            parts.append((d, linalg.to_fraction(linalg.block_diag(*blocks))))
        return ComplexStructure(tuple(parts))


@dataclass(frozen=True)
class LatticeTorus:
    structure: ComplexStructure
    name: str = field(default="", compare=False)

    @property
    def g(self) -> int:
        return self.structure.dim // 2

    @property
    def dim(self) -> int:
        return self.structure.dim

    @property
    def J(self):
        return self.structure.matrix

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"LatticeTorus(g={self.g}{label})"


def make_torus(J, name="") -> LatticeTorus:
    """Validate a complex structure and wrap it as a torus.

    ``J`` is a rational matrix with J^2 = -I, a mapping {d: K_d} meaning
    sum K_d/sqrt(d), or a ComplexStructure.
    """
    if isinstance(J, ComplexStructure):
        cs = J
    elif isinstance(J, dict):
        cs = ComplexStructure.from_parts(J)
    else:
        M = linalg.as_matrix(J)
        if not M or any(len(r) != len(M) for r in M):
            raise InvalidComplexStructure("J must be a square matrix")
        cs = ComplexStructure.rational(M)
    if not cs.squares_to_minus_identity():
        raise InvalidComplexStructure("J^2 != -I")
    return LatticeTorus(cs, name)


def product_torus(*tori, name="") -> LatticeTorus:
    return LatticeTorus(ComplexStructure.direct_sum(*(t.structure for t in tori)), name)


@dataclass(frozen=True)
class LatticeMap:
    source: LatticeTorus
    target: LatticeTorus
    M: tuple

    def __post_init__(self):
        M = linalg.as_matrix(self.M)
        if len(M) != self.target.dim or any(len(r) != self.source.dim for r in M):
            raise DegenerateInput("matrix shape does not match the tori")
        if not linalg.is_integral(M):
            raise DegenerateInput("a lattice map must have integer entries")
        M = linalg.to_int(M)
        if not self.source.structure.intertwines(M, self.target.structure):
            raise DegenerateInput("matrix is not complex-linear for the given structures")
        object.__setattr__(self, "M", M)

    @classmethod
    def endo(cls, T, M):
        return cls(T, T, M)

    def __matmul__(self, other: "LatticeMap"):
        return LatticeMap(other.source, self.target, linalg.matmul(self.M, other.M))

    def is_identity(self):
        return linalg.is_identity(self.M)


def _matrix(phi):
    return phi.M if isinstance(phi, LatticeMap) else linalg.to_int(linalg.as_matrix(phi))


# ---------------------------------------------------------------------------
# torsion points
# ---------------------------------------------------------------------------

def reduce_mod1(v):
    return tuple(x - math.floor(x) for x in (as_rational(c) for c in v))


@dataclass(frozen=True)
class TorsionPoint:
    torus: LatticeTorus = field(compare=False, hash=False)
    coords: tuple

    def __post_init__(self):
        coords = reduce_mod1(self.coords)
        if len(coords) != self.torus.dim:
            raise DegenerateInput(f"point has {len(coords)} coordinates, torus has dimension {self.torus.dim}")
        object.__setattr__(self, "coords", coords)

    @property
    def level(self) -> int:
        """Order of the point in the torus."""
        return linalg.common_denominator(self.coords)

    n = level

    def is_zero(self):
        return not any(self.coords)

    def __add__(self, other):
        return TorsionPoint(self.torus, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return TorsionPoint(self.torus, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k: int):
        return TorsionPoint(self.torus, tuple(k * a for a in self.coords))

    def apply(self, phi):
        return TorsionPoint(self.torus, linalg.matvec(_matrix(phi), self.coords))


def subgroup_closure(generators, dim):
    """All elements (as coordinate tuples mod 1) of the subgroup generated."""
    zero = (Fraction(0),) * dim
    gens = [reduce_mod1(g) for g in generators]
    elems = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = reduce_mod1(tuple(a + b for a, b in zip(x, g)))
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(elems)


@dataclass
class TorsionGroup:
    torus: LatticeTorus
    n: int
    points: list

    def act(self, phi, point):
        coords = point.coords if isinstance(point, TorsionPoint) else point
        return TorsionPoint(self.torus, linalg.matvec(_matrix(phi), coords))

    def __len__(self):
        return len(self.points)


def torsion_group(T: LatticeTorus, n: int, cap: int = 10**6) -> TorsionGroup:
    if n < 1:
        raise DegenerateInput("torsion level must be positive")
    size = n ** T.dim
    if size > cap:
        raise BudgetError(f"T[{n}] has {size} points, above the cap {cap}")
    steps = [Fraction(k, n) for k in range(n)]
    pts = [TorsionPoint(T, c) for c in product(steps, repeat=T.dim)]
    return TorsionGroup(T, n, pts)


# ---------------------------------------------------------------------------
# endomorphisms and automorphisms
# ---------------------------------------------------------------------------

def _unflatten(v, rows, cols):
    return tuple(tuple(v[i * cols + j] for j in range(cols)) for i in range(rows))


def hom_basis(S: LatticeTorus, T: LatticeTorus):
    """Z-basis of the integer matrices X with X J_S = J_T X."""
    cons = S.structure.hom_constraints(T.structure)
    ker = linalg.integer_kernel(cons, ncols=S.dim * T.dim)
    return [_unflatten(v, T.dim, S.dim) for v in ker]


def endomorphism_basis(T: LatticeTorus):
    """LLL-reduced Z-basis of End(T) as integer matrices."""
    return hom_basis(T, T)


def span_coordinates(basis, M):
    """Integer coordinates of M in the basis, or None if M is not in the Z-span."""
    n = len(M)
    cols = [tuple(x for r in B for x in r) for B in basis]
    target = tuple(x for r in M for x in r)
    A = [[c[k] for c in cols] + [target[k]] for k in range(n * len(M[0]))]
    R, piv = linalg.rref(A)
    if len(cols) in piv:
        return None
    coords = [Fraction(0)] * len(cols)
    for i, c in enumerate(piv):
        coords[c] = R[i][-1]
    if any(x.denominator != 1 for x in coords):
        return None
    return tuple(int(x) for x in coords)


def order_of(phi):
    """Order of an automorphism, or INFINITE.

    Finite order iff the characteristic polynomial is a product of
    cyclotomic polynomials and the product of the distinct factors kills
    the matrix (squarefree minimal polynomial); the order is then the lcm
    of the indices of those factors.
    """
    M = _matrix(phi)
    if abs(linalg.det(M)) != 1:
        raise NotAnAutomorphism("matrix is not invertible over Z")
    n = len(M)
    rest = linalg.charpoly(M)
    present = []
    for d in range(1, 4 * n * n + 3):
        if linalg.euler_phi(d) > n:
            continue
        phi_d = linalg.cyclotomic_poly(d)
        while len(rest) >= len(phi_d):
            q, r = linalg.poly_divmod(rest, phi_d)
            if r:
                break
            rest = q
            if d not in present:
                present.append(d)
        if len(rest) == 1:
            break
    if len(rest) != 1:
        return INFINITE
    radical = [1]
    for d in present:
        radical = _poly_mul(radical, linalg.cyclotomic_poly(d))
    if any(a for r in linalg.poly_eval_matrix(radical, M) for a in r):
        return INFINITE
    return reduce(math.lcm, present, 1)


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def fixed_point_count(phi) -> int:
    """|det(I - M)|: the number of fixed points, 0 in the degenerate case."""
    M = _matrix(phi)
    return abs(linalg.det(linalg.matsub(linalg.identity(len(M)), M)))


@dataclass
class AffineFixedPoints:
    count: int
    representatives: list
    kernel_invariants: tuple  # ker(phi - 1) as a product of cyclic groups


def affine_fixed_points(phi, a) -> AffineFixedPoints:
    """Solutions b of phi(b) + a = b, i.e. (M - I) b = -a mod Z^(2g), via Smith form."""
    M = _matrix(phi)
    n = len(M)
    a_coords = a.coords if isinstance(a, TorsionPoint) else reduce_mod1(a)
    torus = a.torus if isinstance(a, TorsionPoint) else (phi.source if isinstance(phi, LatticeMap) else None)
    D = linalg.matsub(M, linalg.identity(n))
    if not any(x for r in D for x in r):
        raise TranslationCase("phi is the identity: alpha is a translation")
    if linalg.det(D) == 0:
        raise DegenerateInput("phi - 1 is not an isogeny; the fixed locus is not finite")
    U, S, V = smith_normal_form_cached(D)
    w = linalg.matvec(U, tuple(-x for x in a_coords))
    s = [S[i][i] for i in range(n)]
    sols = []

    def rec(i, c):
        if i == n:
            sols.append(reduce_mod1(linalg.matvec(V, c)))
            return
        for k in range(abs(s[i])):
            rec(i + 1, c + ((w[i] + k) / s[i],))

    rec(0, ())
    sols = sorted(set(sols))
    reps = [TorsionPoint(torus, c) for c in sols] if torus is not None else sols
    return AffineFixedPoints(len(sols), reps, tuple(abs(x) for x in s if abs(x) > 1))


def smith_normal_form_cached(D):
    return linalg.smith_normal_form(D)


def power_trivial_on_torsion(phi, n: int, limit: int = 10**6) -> int:
    """Least k >= 1 with M^k = I mod n."""
    M = _matrix(phi)
    size = len(M)
    if n == 1:
        return 1
    Mn = tuple(tuple(x % n for x in r) for r in M)
    P = Mn
    I = linalg.identity(size)
    for k in range(1, limit + 1):
        if P == I:
            return k
        P = tuple(tuple(x % n for x in r) for r in linalg.matmul(P, Mn))
    raise BudgetError(f"no power up to {limit} is trivial mod {n}")


# ---------------------------------------------------------------------------
# quotients
# ---------------------------------------------------------------------------

@dataclass
class Quotient:
    source: LatticeTorus
    torus: LatticeTorus
    basis: tuple  # columns: new lattice in old coordinates
    projection: tuple  # integer matrix: old coordinates -> new coordinates
    subgroup: frozenset
    index: int

    def project(self, coords):
        return reduce_mod1(linalg.matvec(self.projection, coords))


def quotient_by_subgroup(T: LatticeTorus, H) -> Quotient:
    """T/H as the torus V / (Z^(2g) + H) in a Hermite basis of the bigger lattice."""
    n = T.dim
    gens = [h.coords if isinstance(h, TorsionPoint) else tuple(as_rational(x) for x in h) for h in H]
    for g in gens:
        if len(g) != n:
            raise DegenerateInput("subgroup generator has the wrong dimension")
    elems = subgroup_closure(gens, n)
    unit = [tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n)]
    B = linalg.lattice_basis(unit + [tuple(g) for g in gens], n)
    P = linalg.to_int(linalg.inverse(B))
    index = abs(linalg.det(P))
    if index != len(elems):
        raise DegenerateInput(f"lattice index {index} differs from |H| = {len(elems)}")
    new = LatticeTorus(T.structure.conjugate(B), f"{T.name}/H" if T.name else "")
    return Quotient(T, new, B, P, elems, index)


def is_stable(phi, elems) -> bool:
    M = _matrix(phi)
    return all(reduce_mod1(linalg.matvec(M, x)) in elems for x in elems)


def induced_map_on_quotient(phi, H) -> LatticeMap:
    """The automorphism of T/H induced by a phi with phi(H) = H."""
    M = _matrix(phi)
    T = phi.source if isinstance(phi, LatticeMap) else None
    quo = H if isinstance(H, Quotient) else quotient_by_subgroup(T, H)
    if not is_stable(M, quo.subgroup):
        raise NotStable("phi does not map H into itself")
    Mq = linalg.matmul(linalg.matmul(quo.projection, M), quo.basis)
    if not linalg.is_integral(Mq):
        raise NotStable("induced matrix is not integral")
    return LatticeMap(quo.torus, quo.torus, Mq)


def enumerate_finite_automorphisms(T: LatticeTorus, entry_bound: int = 3, max_candidates: int = 10**6):
    """Finite-order units of End(T) with basis coordinates in [-bound, bound].

    Complete only when every torsion unit has small coordinates in the
    LLL-reduced basis; the bound used is part of every report.
    """
    basis = endomorphism_basis(T)
    r = len(basis)
    total = (2 * entry_bound + 1) ** r
    if total > max_candidates:
        raise BudgetError(f"box search needs {total} candidates (rank {r}, bound {entry_bound})")
    n = T.dim
    found = []
    seen = set()
    for coeffs in product(range(-entry_bound, entry_bound + 1), repeat=r):
        M = linalg.zeros(n)
        for c, B in zip(coeffs, basis):
            if c:
                M = linalg.matadd(M, linalg.matscale(c, B))
        if abs(linalg.det(M)) != 1 or M in seen:
            continue
        if order_of(M) is INFINITE:
            continue
        seen.add(M)
        found.append(M)
    found.sort(key=lambda M: (order_of(M), M))
    return found


def is_closed_under_composition(mats) -> bool:
    s = set(mats)
    return all(linalg.matmul(A, B) in s for A in mats for B in mats)


def simplicity_screen(T: LatticeTorus, bound: int = 2) -> bool:
    """No nontrivial idempotent in a small box of End(T); elliptic curves pass outright."""
    if T.g == 1:
        return True
    basis = endomorphism_basis(T)
    n = T.dim
    I, Z = linalg.identity(n), linalg.zeros(n)
    for coeffs in product(range(-bound, bound + 1), repeat=len(basis)):
        E = linalg.zeros(n)
        for c, B in zip(coeffs, basis):
            if c:
                E = linalg.matadd(E, linalg.matscale(c, B))
        if E not in (I, Z) and linalg.matmul(E, E) == E:
            return False
    return True


# ---------------------------------------------------------------------------
# isogeny decompositions and the two conditions on (A, p, P)
# ---------------------------------------------------------------------------

@dataclass
class IsogenyDecomposition:
    """A = (T_1 x ... x T_h) / Sigma, Sigma given by generators in product coordinates."""

    factors: tuple
    sigma_generators: tuple = ()

    def __post_init__(self):
        self.factors = tuple(self.factors)
        self.sigma_generators = tuple(reduce_mod1(g) for g in self.sigma_generators)
        for g in self.sigma_generators:
            if len(g) != self.dim:
                raise DegenerateInput("sigma generator has the wrong dimension")

    @property
    def h(self):
        return len(self.factors)

    @property
    def dim(self):
        return sum(t.dim for t in self.factors)

    @property
    def offsets(self):
        out, k = [], 0
        for t in self.factors:
            out.append(k)
            k += t.dim
        return out

    def component(self, x, i):
        o = self.offsets[i]
        return tuple(x[o: o + self.factors[i].dim])

    @cached_property
    def product(self) -> LatticeTorus:
        return product_torus(*self.factors, name="product")

    @cached_property
    def sigma(self) -> frozenset:
        return subgroup_closure(self.sigma_generators, self.dim)

    @property
    def N(self) -> int:
        return len(self.sigma)

    @cached_property
    def target(self) -> Quotient:
        """A itself, as the quotient of the product by Sigma."""
        return quotient_by_subgroup(self.product, self.sigma_generators)

    def to_target(self, x):
        return self.target.project(x)

    def sigma_meets_factor(self):
        """Per factor: does Sigma meet the embedded factor nontrivially?"""
        out = []
        for i in range(self.h):
            out.append(any(
                any(x) and all(not any(self.component(x, j)) for j in range(self.h) if j != i)
                for x in self.sigma
            ))
        return out

    def pairwise_nonisogenous(self):
        return all(
            not hom_basis(self.factors[i], self.factors[j])
            for i in range(self.h)
            for j in range(i + 1, self.h)
        )


def subgroups_of_torsion(T: LatticeTorus, N: int, cap: int = 10**4):
    """Every subgroup of T[N], each as a frozenset of coordinate tuples."""
    n = T.dim
    if N == 1:
        return [frozenset({(Fraction(0),) * n})]
    pts = [p.coords for p in torsion_group(T, N).points]
    start = frozenset({(Fraction(0),) * n})
    found = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for S in frontier:
            for x in pts:
                if x in S:
                    continue
                S2 = subgroup_closure(list(S) + [x], n)
                if S2 not in found:
                    found.add(S2)
                    nxt.append(S2)
                    if len(found) > cap:
                        raise BudgetError(f"more than {cap} subgroups of T[{N}]")
        frontier = nxt
    return sorted(found, key=lambda S: (len(S), sorted(S)))


def _small_generating_set(elems, dim):
    gens = []
    span = frozenset({(Fraction(0),) * dim})
    for x in sorted(elems):
        if x not in span:
            gens.append(x)
            span = subgroup_closure(gens, dim)
        if span == elems:
            break
    return gens


@dataclass
class StarReport:
    ok: bool
    p: int
    max_count: int
    witness: dict | None
    table: list
    entry_bound: int

    def __bool__(self):
        return self.ok


def check_condition_star(decomp: IsogenyDecomposition, p: int, entry_bound: int = 3, cap: int = 10**4) -> StarReport:
    """p exceeds the number of fixed points of every nontrivial automorphism of every T_i/H, H <= T_i[N]."""
    table = []
    best = None
    for i, T in enumerate(decomp.factors):
        try:
            subgroups = subgroups_of_torsion(T, decomp.N, cap)
        except BudgetError as exc:
            raise BudgetError(str(exc), partial=table) from None
        for H in subgroups:
            quo = quotient_by_subgroup(T, _small_generating_set(H, T.dim))
            try:
                autos = enumerate_finite_automorphisms(quo.torus, entry_bound)
            except BudgetError as exc:
                raise BudgetError(str(exc), partial=table) from None
            counts = []
            for M in autos:
                if linalg.is_identity(M):
                    continue
                c = fixed_point_count(M)
                counts.append(c)
                entry = {"factor": i, "subgroup_order": len(H), "phi": M, "count": c}
                if best is None or c > best["count"]:
                    best = entry
            table.append({"factor": i, "subgroup_order": len(H), "counts": sorted(counts)})
    max_count = best["count"] if best else 0
    return StarReport(max_count < p, p, max_count, best, table, entry_bound)


def check_condition_double_star(P, decomp: IsogenyDecomposition, p: int) -> bool:
    """P (a lift to the product) is p-torsion in A and lies in no proper abelian subvariety.

    P lies in the sum of the factors indexed by I iff some lift P + s,
    s in Sigma, vanishes outside I; so every component of every lift must
    be nonzero. With Sigma trivial this is the plain componentwise test.
    """
    x = reduce_mod1(P.coords if isinstance(P, TorsionPoint) else P)
    if reduce_mod1(tuple(p * c for c in x)) not in decomp.sigma:
        return False
    for s in decomp.sigma:
        y = reduce_mod1(tuple(a + b for a, b in zip(x, s)))
        if any(not any(decomp.component(y, i)) for i in range(decomp.h)):
            return False
    return True


@dataclass
class QuotientDatum:
    decomposition: IsogenyDecomposition
    P: tuple
    N: int
    N_prime: int
    K_order: int
    intersection_orders: list
    identity_holds: bool
    divisibility_holds: bool
    star: StarReport | None = None
    double_star: bool | None = None
    quotients: list = field(default_factory=list)


def derive_quotient_datum(decomp: IsogenyDecomposition, P, p: int | None = None, entry_bound: int = 3) -> QuotientDatum:
    """Data for A' = A/A_1: factors A_i/(A_1 cap A_i), Sigma', P', and N' * #K = N."""
    if decomp.h < 2:
        raise NothingToQuotient("A is simple: there is no factor to quotient by")
    x = reduce_mod1(P.coords if isinstance(P, TorsionPoint) else P)
    quotients, inter_orders = [], []
    for i in range(1, decomp.h):
        # A_1 cap A_i, seen inside A_i: components s_i of s in Sigma supported on {1, i}
        meet = {
            decomp.component(s, i)
            for s in decomp.sigma
            if all(not any(decomp.component(s, j)) for j in range(decomp.h) if j not in (0, i))
        }
        meet = subgroup_closure(list(meet), decomp.factors[i].dim)
        inter_orders.append(len(meet))
        quotients.append(quotient_by_subgroup(decomp.factors[i], _small_generating_set(meet, decomp.factors[i].dim)))

    def image(v):
        return tuple(c for i, q in enumerate(quotients, start=1) for c in q.project(decomp.component(v, i)))

    images = {}
    for s in decomp.sigma:
        images.setdefault(image(s), []).append(s)
    dim2 = sum(q.torus.dim for q in quotients)
    zero = (Fraction(0),) * dim2
    sigma_prime = frozenset(images)
    K = images.get(zero, [])
    N, Np, Kn = decomp.N, len(sigma_prime), len(K)
    new = IsogenyDecomposition(
        tuple(q.torus for q in quotients),
        tuple(_small_generating_set(sigma_prime, dim2)),
    )
    P_prime = image(x)
    out = QuotientDatum(
        new, P_prime, N, Np, Kn, inter_orders,
        identity_holds=(Np * Kn == N),
        divisibility_holds=all(Kn % m == 0 for m in inter_orders),
        quotients=quotients,
    )
    if p is not None:
        out.star = check_condition_star(new, p, entry_bound)
        out.double_star = check_condition_double_star(P_prime, new, p)
    return out
