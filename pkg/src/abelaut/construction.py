"""Fiber-level checks for the quotient Y = (S x A)/G with G = Z/p.

G acts on S freely and on A by g.a = a + chi(g) P. The surface only
enters through G and freeness, so everything here is data on A: the
datum (p, chi, P, decomposition), candidate fiber automorphisms
a -> phi(a) + c, and the counting argument that rules out phi != id.

Points are handled as lifts to the product of the factors; two lifts are
equal in A when they differ by Z^n + Sigma.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .errors import DegenerateInput, DescentError, InvalidDatum, NotAnAutomorphism
from .scalars import is_prime
from .torus import (
    IsogenyDecomposition,
    LatticeMap,
    check_condition_double_star,
    check_condition_star,
    enumerate_finite_automorphisms,
    fixed_point_count,
    is_stable,
    reduce_mod1,
)


def _vec(v):
    return reduce_mod1(getattr(v, "coords", v))


@dataclass(frozen=True)
class TorsorDatum:
    p: int
    c: int  # chi(g) = c * g
    P: tuple  # lift of the point to the product of the factors
    decomp: IsogenyDecomposition = field(hash=False)
    surface_ref: str = ""

    def __post_init__(self):
        if not is_prime(self.p):
            raise InvalidDatum(f"p = {self.p} is not prime")
        if self.c % self.p == 0:
            raise InvalidDatum("chi multiplier must be a unit mod p")
        P = _vec(self.P)
        if len(P) != self.decomp.dim:
            raise InvalidDatum("P has the wrong number of coordinates")
        object.__setattr__(self, "P", P)
        order = self.order_in_A(P)
        if order != self.p:
            raise InvalidDatum(f"P has order {order} in A, expected {self.p}")

    @property
    def A(self):
        return self.decomp.target.torus

    def to_A(self, x):
        return self.decomp.to_target(_vec(x))

    def equal_in_A(self, x, y):
        return not any(self.to_A(tuple(a - b for a, b in zip(_vec(x), _vec(y)))))

    def order_in_A(self, x):
        return linalg.common_denominator(self.to_A(x))

    def act(self, g, a):
        """g . a = a + chi(g) P on a lift."""
        k = (self.c * g) % self.p
        return reduce_mod1(tuple(x + k * y for x, y in zip(_vec(a), self.P)))

    def validate(self, entry_bound=3):
        star = check_condition_star(self.decomp, self.p, entry_bound)
        double = check_condition_double_star(self.P, self.decomp, self.p)
        return DatumValidation(star.ok and double, star, double)


@dataclass
class DatumValidation:
    valid: bool
    star: object
    double_star: bool


@dataclass(frozen=True)
class FiberAutomorphism:
    """a -> phi(a) + c, phi acting on product coordinates and stabilizing Sigma."""

    phi: tuple
    c: tuple = ()
    label: str = ""

    def __post_init__(self):
        M = linalg.to_int(linalg.as_matrix(self.phi))
        if abs(linalg.det(M)) != 1:
            raise NotAnAutomorphism("fiber map part is not invertible over Z")
        object.__setattr__(self, "phi", M)
        c = _vec(self.c) if len(self.c) else reduce_mod1((0,) * len(M))
        object.__setattr__(self, "c", c)

    @classmethod
    def translation(cls, c, label=""):
        c = _vec(c)
        return cls(linalg.identity(len(c)), c, label)

    def is_translation(self):
        return linalg.is_identity(self.phi)

    def apply(self, a):
        return reduce_mod1(tuple(x + y for x, y in zip(linalg.matvec(self.phi, _vec(a)), self.c)))

    def __matmul__(self, other):
        """self after other."""
        return FiberAutomorphism(
            linalg.matmul(self.phi, other.phi),
            tuple(x + y for x, y in zip(linalg.matvec(self.phi, other.c), self.c)),
        )

    def check_on(self, datum: TorsorDatum):
        """Raise unless the map is complex-linear on the product and descends to A."""
        try:
            LatticeMap.endo(datum.decomp.product, self.phi)
        except DegenerateInput as exc:
            raise NotAnAutomorphism(str(exc)) from None
        if not is_stable(self.phi, datum.decomp.sigma):
            raise NotAnAutomorphism("phi does not preserve Sigma, so it does not descend to A")


def action_freeness(datum: TorsorDatum) -> bool:
    zero = reduce_mod1((0,) * datum.decomp.dim)
    return all(not datum.equal_in_A(datum.act(g, zero), zero) for g in range(1, datum.p))


def descent_check(datum: TorsorDatum, candidate: FiberAutomorphism) -> bool:
    """The candidate commutes with G iff phi(P) = P in A."""
    candidate.check_on(datum)
    return datum.equal_in_A(linalg.matvec(candidate.phi, datum.P), datum.P)


def translation_orbit(step, limit=10**6):
    """Orbit of 0 under repeated translation by a rational vector mod 1."""
    step = reduce_mod1(step)
    zero = reduce_mod1((0,) * len(step))
    orbit = [zero]
    x = step
    while x != zero:
        orbit.append(x)
        if len(orbit) > limit:
            raise ValueError("translation orbit exceeds the limit")
        x = reduce_mod1(tuple(a + b for a, b in zip(x, step)))
    return orbit


@dataclass
class SubcoverReport:
    connected: bool
    orbit_size: int


def subcover_connectivity(datum: TorsorDatum) -> SubcoverReport:
    """Monodromy of Z = (S x <P>)/G over X: the generator translates the fiber <P> by chi(1)P."""
    step = datum.to_A(tuple(datum.c * x for x in datum.P))
    orbit = translation_orbit(step)
    return SubcoverReport(len(orbit) == datum.order_in_A(datum.P), len(orbit))


@dataclass
class RigidityVerdict:
    kind: str  # translation | contradiction | unresolved
    n: int
    descent: bool
    factor: int | None = None
    reason: str = ""

    def as_dict(self):
        out = {"kind": self.kind, "n": self.n, "descent": self.descent}
        if self.factor is not None:
            out["factor"] = self.factor
        if self.reason:
            out["reason"] = self.reason
        return out


def _blocks(decomp: IsogenyDecomposition, M):
    offs = decomp.offsets + [decomp.dim]
    return [
        [tuple(tuple(M[r][offs[j]:offs[j + 1]]) for r in range(offs[i], offs[i + 1])) for j in range(decomp.h)]
        for i in range(decomp.h)
    ]


def rigidity_certificate(datum: TorsorDatum, candidate: FiberAutomorphism, check_descent=True) -> RigidityVerdict:
    """Classify a candidate: a translation, or a map whose fixed locus would be a small cover of X.

    If phi != id has n fixed points on the fiber with 0 < n < p, the fixed
    locus would be a cover of X of degree between 1 and p - 1; neither
    exists since pi_1(X) = Z/p and X has no section of Z (checked by
    subcover_connectivity). With ``check_descent=False`` the count is
    evaluated even when the candidate does not commute with G.
    """
    descent = descent_check(datum, candidate)
    if check_descent and not descent:
        raise DescentError("candidate does not commute with the G-action, so it is not an automorphism of Y")
    p = datum.p
    if candidate.is_translation():
        return RigidityVerdict("translation", 0, descent)
    n = fixed_point_count(candidate.phi)
    if 0 < n < p:
        return RigidityVerdict("contradiction", n, descent)
    # n = 0 (phi trivial on some factor) or n >= p: count on the first moving factor
    blocks = _blocks(datum.decomp, candidate.phi)
    h = datum.decomp.h
    if any(any(x for r in blocks[i][j] for x in r) for i in range(h) for j in range(h) if i != j):
        return RigidityVerdict("unresolved", n, descent, reason="phi mixes factors")
    for i in range(h):
        if not linalg.is_identity(blocks[i][i]):
            ni = fixed_point_count(blocks[i][i])
            if 0 < ni < p:
                return RigidityVerdict("contradiction", ni, descent, factor=i)
            return RigidityVerdict("unresolved", ni, descent, factor=i, reason=f"factor count {ni} not in (0, {p})")
    return RigidityVerdict("unresolved", n, descent, reason="no moving factor")


def default_candidates(datum: TorsorDatum, entry_bound=3):
    """Every bounded finite-order automorphism of the product that descends to A, with c = 0 and c = P,
    plus the translations by 0 and P."""
    out = [
        FiberAutomorphism.translation(reduce_mod1((0,) * datum.decomp.dim), "translation by 0"),
        FiberAutomorphism.translation(datum.P, "translation by P"),
    ]
    for M in enumerate_finite_automorphisms(datum.decomp.product, entry_bound):
        if linalg.is_identity(M) or not is_stable(M, datum.decomp.sigma):
            continue
        out.append(FiberAutomorphism(M, (), "phi"))
        out.append(FiberAutomorphism(M, datum.P, "phi + P"))
    return out


def run_candidate_suite(datum: TorsorDatum, candidates):
    """Per candidate: descent, the verdict, and the counting verdict ignoring descent."""
    rows = []
    for cand in candidates:
        descent = descent_check(datum, cand)
        hypo = rigidity_certificate(datum, cand, check_descent=False)
        verdict = hypo.kind if descent else "descent-failure"
        rows.append({
            "label": cand.label,
            "phi": cand.phi,
            "c": cand.c,
            "descent": descent,
            "verdict": verdict,
            "n": hypo.n,
            "counting": hypo.as_dict(),
        })
    return rows


def dichotomy_holds(datum: TorsorDatum, rows) -> bool:
    """Translations give 'translation'; every other candidate fails descent or gives 0 < n < p."""
    for r in rows:
        if linalg.is_identity(r["phi"]):
            if r["verdict"] != "translation":
                return False
        elif r["verdict"] not in ("descent-failure", "contradiction"):
            return False
        elif r["verdict"] == "contradiction" and not 0 < r["n"] < datum.p:
            return False
    return True
