"""Verification pipelines and their deterministic reports."""
from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__, fixtures, linalg
from .construction import (
    FiberAutomorphism,
    TorsorDatum,
    action_freeness,
    default_candidates,
    descent_check,
    dichotomy_holds,
    rigidity_certificate,
    run_candidate_suite,
    subcover_connectivity,
)
from .errors import BadReduction, BudgetError, NothingToQuotient
from .io import (
    candidates_from_obj,
    datum_from_obj,
    decomposition_from_obj,
    encode_matrix,
    encode_vector,
    load_file,
    torus_from_obj,
)
from .poly import build_deformed_fermat, unit_vector
from .scalars import check_conductor, rational_str, render_cyclotomic
from .surface import (
    cyclic_group_report,
    diagonal_exponents,
    enumerate_diagonal_automorphisms,
    freeness_check,
    orthogonal_complement,
    pairing_equivariance_holds,
    smoothness_certificate,
    swap_case_rejected,
    verify_orthogonality_coefficient_identities,
)
from .torus import (
    IsogenyDecomposition,
    derive_quotient_datum,
    endomorphism_basis,
    enumerate_finite_automorphisms,
    fixed_point_count,
    is_closed_under_composition,
    order_of,
    power_trivial_on_torsion,
    simplicity_screen,
    span_coordinates,
)

SCHEMA = "abelaut-report/1"
DEFAULT_Q_LIST = (29, 43, 71, 113)
LAMBDA_WALK = 10  # lambda values tried after the requested one when it is not pinned
COMMANDS = ("verify-surface", "verify-torus", "verify-construction", "full-paper")


@dataclass
class RunConfig:
    command: str
    p: int = 7
    lam: Fraction = Fraction(1)
    lambda_pinned: bool = False
    q_list: tuple = DEFAULT_Q_LIST
    input: str | None = None
    candidates: str | None = None
    seed: int = 20240607
    emit: str = "text"
    entry_bound: int = 3
    timing: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.command in ("verify-surface", "full-paper"):
            check_conductor(self.p)
            if self.p < 7:
                raise ValueError("p must be at least 7")
            if not self.q_list:
                raise ValueError("surface runs need at least one reduction prime")
        if self.emit not in ("text", "json"):
            raise ValueError("emit must be text or json")

    def echo(self):
        out = {"command": self.command, "seed": self.seed, "entry_bound": self.entry_bound}
        if self.command in ("verify-surface", "full-paper"):
            out.update(p=self.p, **{"lambda": rational_str(self.lam)}, q_list=list(self.q_list))
        if self.input:
            out["input"] = self.input
        if self.candidates:
            out["candidates"] = self.candidates
        return out


@dataclass
class VerificationReport:
    config: dict
    checks: list = field(default_factory=list)
    sections: dict = field(default_factory=dict)
    timing: dict | None = None

    def check(self, name, passed, detail=""):
        self.checks.append({"name": name, "passed": bool(passed), "detail": detail})
        return bool(passed)

    @property
    def all_passed(self):
        return all(c["passed"] for c in self.checks)

    def as_dict(self):
        out = {
            "schema": SCHEMA,
            "tool_version": __version__,
            "config": self.config,
            "all_passed": self.all_passed,
            "checks": self.checks,
        }
        out.update(self.sections)
        if self.timing is not None:
            out["timing"] = self.timing
        return out


def render_report(report: VerificationReport, fmt="json") -> bytes:
    if fmt == "json":
        return (json.dumps(report.as_dict(), indent=2, ensure_ascii=False) + "\n").encode()
    lines = [f"abelaut {__version__} {report.config['command']}"]
    for c in report.checks:
        mark = "PASS" if c["passed"] else "FAIL"
        lines.append(f"  [{mark}] {c['name']}" + (f": {c['detail']}" if c["detail"] else ""))
    lines.append("result: " + ("all checks passed" if report.all_passed else "verification FAILED"))
    if report.timing is not None:
        lines.append("timing: " + ", ".join(f"{k} {v:.2f}s" for k, v in report.timing.items()))
    return ("\n".join(lines) + "\n").encode()


def _jsonable(x):
    if isinstance(x, Fraction):
        return rational_str(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if x == float("inf"):
        return "infinite"
    return x


# ---------------------------------------------------------------------------
# surface
# ---------------------------------------------------------------------------

def choose_smooth_parameters(p, lam, q_list, pinned):
    """Walk q through the list, then lambda upward, until a reduction is smooth."""
    attempts = []
    lams = [Fraction(lam)]
    if not pinned:
        lams += [Fraction(k) for k in range(int(lam) + 1, int(lam) + 1 + LAMBDA_WALK) if k != lam]
    for l in lams:
        for q in q_list:
            try:
                cert = smoothness_certificate(p, l, q)
            except BadReduction as exc:
                attempts.append({"lambda": rational_str(l), "q": q, "result": f"bad reduction: {exc}"})
                continue
            attempts.append({"lambda": rational_str(l), "q": q, "result": "smooth" if cert.smooth else "singular"})
            if cert.smooth:
                return l, cert, attempts
    return Fraction(lam), None, attempts


def surface_section(report: VerificationReport, p, lam, q_list, pinned, seed):
    rng = random.Random(seed)
    lam, cert, attempts = choose_smooth_parameters(p, lam, q_list, pinned)
    section = {"p": p, "lambda": rational_str(lam), "q": cert.q if cert else None, "smoothness_attempts": attempts}
    report.check("smoothness certificate", cert is not None,
                 f"smooth mod {cert.q}, {cert.points_scanned} points scanned" if cert else "no smooth reduction found")
    section["smooth"] = cert is not None
    if cert is not None and cert.witness is not None:
        section["singular_witness"] = [str(x) for x in cert.witness]

    f = build_deformed_fermat(p, lam)
    records = enumerate_diagonal_automorphisms(f, p)
    group = cyclic_group_report(records, p)
    section["group_order"] = group.order
    section["is_cyclic"] = group.is_cyclic
    gen = group.generator
    section["generator_matrix"] = (
        [[render_cyclotomic(a) if a else "0" for a in r] for r in gen.matrix] if gen else None
    )
    section["generator_exponents"] = list(diagonal_exponents(gen.matrix, p)) if gen else None
    report.check("automorphism group has order p", group.order == p, f"order {group.order}")
    report.check("automorphism group is cyclic", group.is_cyclic)
    if gen is not None:
        report.check(
            "generator is diag(1, z, z^2, z^3) with alpha = 1",
            diagonal_exponents(gen.matrix, p) == (1, 2, 3) and gen.alpha == 1,
            f"exponents {diagonal_exponents(gen.matrix, p)}",
        )
    free = freeness_check(f, records)
    fixed = sorted({str(pt) for pts in free.fixed_points for pt in pts})
    section["fixed_point_free"] = free.free
    section["fixed_points_in_p3"] = fixed
    report.check("action is free on the surface", free.free, free.reason)

    swaps = swap_case_rejected(f)
    fermat = len(enumerate_diagonal_automorphisms(build_deformed_fermat(p, 0), p))
    section["negative_controls"] = {"swap_rejected": swaps, "fermat_control_order": fermat}
    report.check("coordinate swaps rejected", all(swaps.values()), ", ".join(k for k, v in swaps.items() if not v))
    report.check("Fermat control has a larger group", fermat > p, f"order {fermat}")

    ortho = verify_orthogonality_coefficient_identities(p)
    section["orthogonality_identities"] = ortho.checks
    report.check("orthogonality coefficient identities", ortho.ok)
    e3, e4 = unit_vector(3), unit_vector(4)
    comp3 = orthogonal_complement(f, e3)
    comp4 = orthogonal_complement(f, e4)
    report.check(
        "complements of e3 and e4",
        _is_line(comp3, e4) and _is_line(comp4, e3),
        f"e3 -> {len(comp3)}-dim, e4 -> {len(comp4)}-dim",
    )
    samples = random_vectors_off_axes(rng, 20)
    trivial = sum(1 for a in samples if not orthogonal_complement(f, a))
    section["random_kernel_checks"] = {"samples": len(samples), "trivial_kernel": trivial}
    report.check("random complements are trivial", trivial == len(samples), f"{trivial}/{len(samples)}")

    pairs = [(random_small_vector(rng), random_small_vector(rng)) for _ in range(3)]
    equivariant = all(pairing_equivariance_holds(f, r, u, v) for r in records for u, v in pairs)
    report.check("Hessian pairing equivariance", equivariant, f"{len(records)} maps x {len(pairs)} pairs")
    report.sections["surface"] = section
    return f, records


SMALL_RATIONALS = tuple(Fraction(a, b) for a in range(-3, 4) for b in (1, 2, 3))


def random_small_vector(rng, n=4):
    return tuple(rng.choice(SMALL_RATIONALS) for _ in range(n))


def random_vectors_off_axes(rng, count):
    """Nonzero vectors that are not multiples of e3 or e4."""
    out = []
    while len(out) < count:
        a = random_small_vector(rng)
        support = {i for i, x in enumerate(a) if x}
        if support and support not in ({2}, {3}):
            out.append(a)
    return out


def _is_line(basis, direction):
    if len(basis) != 1:
        return False
    b = basis[0]
    k = next(i for i, x in enumerate(direction) if x)
    return all(b[i] * direction[k] == direction[i] * b[k] for i in range(len(b)))


# ---------------------------------------------------------------------------
# tori
# ---------------------------------------------------------------------------

def torus_summary(report: VerificationReport, T, label, entry_bound):
    basis = endomorphism_basis(T)
    closed = all(
        span_coordinates(basis, linalg.matmul(A, B)) is not None for A in basis for B in basis
    )
    report.check(f"{label}: End is closed under composition", closed, f"rank {len(basis)}")
    out = {"g": T.g, "endomorphism_rank": len(basis), "simplicity_screen": simplicity_screen(T)}
    try:
        autos = enumerate_finite_automorphisms(T, entry_bound)
    except BudgetError as exc:
        out["automorphisms"] = f"budget exceeded: {exc}"
        return out
    report.check(f"{label}: finite automorphisms form a group", is_closed_under_composition(autos), f"{len(autos)} found")
    out["automorphisms"] = [
        {"matrix": encode_matrix(M), "order": order_of(M), "fixed_points": fixed_point_count(M)} for M in autos
    ]
    out["entry_bound"] = entry_bound
    return out


def torus_section(report: VerificationReport, decomp, entry_bound):
    factors = [torus_summary(report, T, T.name or f"factor {i}", entry_bound) for i, T in enumerate(decomp.factors)]
    section = {
        "factors": factors,
        "N": decomp.N,
        "sigma_meets_factor": decomp.sigma_meets_factor(),
        "pairwise_nonisogenous": decomp.pairwise_nonisogenous(),
    }
    report.check("Sigma meets no factor", not any(section["sigma_meets_factor"]))
    report.sections["torus"] = section
    return section


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def construction_section(report: VerificationReport, datum: TorsorDatum, candidates, entry_bound):
    section = {"p": datum.p, "chi": datum.c, "P": encode_vector(datum.P), "surface_ref": datum.surface_ref}
    try:
        validation = datum.validate(entry_bound)
        star = validation.star
        section["star_ok"] = star.ok
        section["star_max_count"] = star.max_count
        section["star_witness"] = _jsonable(star.witness)
        section["star_entry_bound"] = star.entry_bound
    except BudgetError as exc:
        star = None
        section["star_ok"] = False
        section["star_error"] = str(exc)
    double = validation.double_star if star is not None else None
    section["double_star_ok"] = double
    isog = datum.decomp.pairwise_nonisogenous()
    section["factors_pairwise_nonisogenous"] = isog
    section["datum_valid"] = bool(star and star.ok and double and isog)
    report.check("condition (*)", star is not None and star.ok,
                 f"max fixed-point count {star.max_count} < {datum.p}" if star else section.get("star_error", ""))
    report.check("condition (**)", bool(double))
    report.check("factors pairwise non-isogenous", isog)

    free = action_freeness(datum)
    sub = subcover_connectivity(datum)
    section["freeness"] = free
    section["no_section"] = sub.connected
    section["subcover"] = {"connected": sub.connected, "orbit_size": sub.orbit_size}
    report.check("G acts freely on the fibers", free)
    report.check("subcover is connected (no section)", sub.connected, f"orbit size {sub.orbit_size}")

    rows = run_candidate_suite(datum, candidates)
    section["candidates"] = [
        {"label": r["label"], "phi": encode_matrix(r["phi"]), "c": encode_vector(r["c"]),
         "descent": r["descent"], "verdict": r["verdict"], "n": r["n"], "counting": r["counting"]}
        for r in rows
    ]
    report.check("candidate dichotomy", dichotomy_holds(datum, rows), f"{len(rows)} candidates")
    report.sections["construction"] = section

    try:
        qd = derive_quotient_datum(datum.decomp, datum.P, datum.p, entry_bound)
    except NothingToQuotient:
        section["inductive_step"] = None
        return section
    section["inductive_step"] = {
        "N": qd.N,
        "N_prime": qd.N_prime,
        "K_order": qd.K_order,
        "intersection_orders": qd.intersection_orders,
        "identity_holds": qd.identity_holds,
        "divisibility_holds": qd.divisibility_holds,
        "star_ok": qd.star.ok,
        "double_star_ok": qd.double_star,
        "P_prime": encode_vector(qd.P),
    }
    report.check("inductive step: N' * #K = N", qd.identity_holds, f"{qd.N_prime} * {qd.K_order} = {qd.N}")
    report.check("inductive step: derived datum satisfies (*) and (**)", qd.star.ok and qd.double_star)
    return section


def infinite_order_section(report: VerificationReport, p):
    """Shear on E x E: infinite order, a power acting trivially on A[p], and it descends."""
    datum = fixtures.gaussian_square_datum()
    if datum.p != p:
        datum = TorsorDatum(p, 1, tuple(Fraction(1, p) if i in (0, 2) else 0 for i in range(4)), datum.decomp)
    shear = fixtures.shear_matrix()
    order = order_of(shear)
    k = power_trivial_on_torsion(shear, p)
    power = FiberAutomorphism(linalg.matpow(shear, k), (), f"shear^{k}")
    descends = descent_check(datum, power)
    verdict = rigidity_certificate(datum, power)
    report.check("shear has infinite order", order == float("inf"))
    report.check("a shear power acts trivially on A[p]", k == p, f"k = {k}")
    report.check("the shear power descends and is not the identity", descends and not power.is_translation())
    report.sections["infinite_order"] = {
        "order": _jsonable(order),
        "k": k,
        "descends": descends,
        "verdict": verdict.as_dict(),
    }


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def run(config: RunConfig) -> VerificationReport:
    report = VerificationReport(config.echo())
    times = {}

    def timed(name, fn, *args):
        t = time.perf_counter()
        out = fn(*args)
        times[name] = time.perf_counter() - t
        return out

    cmd = config.command
    if cmd == "verify-surface":
        timed("surface", surface_section, report, config.p, config.lam, config.q_list, config.lambda_pinned, config.seed)
    elif cmd == "verify-torus":
        obj = load_file(config.input)
        if isinstance(obj, dict) and "factors" in obj:
            decomp = decomposition_from_obj(obj)
        else:
            decomp = IsogenyDecomposition((torus_from_obj(obj),))
        timed("torus", torus_section, report, decomp, config.entry_bound)
    elif cmd == "verify-construction":
        datum = datum_from_obj(load_file(config.input))
        cands = (
            candidates_from_obj(load_file(config.candidates), datum.decomp.dim)
            if config.candidates else default_candidates(datum, config.entry_bound)
        )
        timed("construction", construction_section, report, datum, cands, config.entry_bound)
    else:
        timed("surface", surface_section, report, config.p, config.lam, config.q_list, config.lambda_pinned, config.seed)
        datum = fixtures.cm_product_datum()
        if datum.p != config.p:
            datum = TorsorDatum(config.p, 1, tuple(Fraction(1, config.p) if i in (0, 2) else 0 for i in range(4)),
                                datum.decomp, f"verify-surface p={config.p}")
        cands = default_candidates(datum, config.entry_bound)
        timed("construction", construction_section, report, datum, cands, config.entry_bound)
        glued = fixtures.glued_datum()
        if glued.p != config.p:
            glued = TorsorDatum(config.p, 1, datum.P, glued.decomp)
        sub = VerificationReport(report.config)
        timed("inductive_step", construction_section, sub, glued, default_candidates(glued, config.entry_bound),
              config.entry_bound)
        for c in sub.checks:
            report.check("glued: " + c["name"], c["passed"], c["detail"])
        report.sections["glued_construction"] = sub.sections["construction"]
        timed("infinite_order", infinite_order_section, report, config.p)
    if config.timing:
        report.timing = {k: round(v, 3) for k, v in times.items()}
    report.sections = _jsonable(report.sections)
    return report
