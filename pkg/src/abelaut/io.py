"""JSON encoding of tori, decompositions, construction data and candidates.

Rationals are strings "a/b" (or "a" for integers) so a dump/load round
trip is exact. A complex structure is either a matrix or an object
{"d": matrix, ...} meaning sum_d K_d / sqrt(d).
"""
from __future__ import annotations

import json
import re
from importlib import resources

from .construction import FiberAutomorphism, TorsorDatum
from .errors import AbelautError, ParseError
from .scalars import as_rational, rational_str
from .torus import ComplexStructure, IsogenyDecomposition, LatticeTorus, make_torus


def _rat(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ParseError(f"expected a rational string, got {json.dumps(x)}", where)
    try:
        return as_rational(x)
    except (ParseError, ZeroDivisionError):
        raise ParseError(f"not a rational: {x!r}", where) from None


def _vector(v, where):
    if not isinstance(v, list):
        raise ParseError("expected a list", where)
    return tuple(_rat(x, f"{where}[{i}]") for i, x in enumerate(v))


def _matrix(m, where):
    if not isinstance(m, list) or not m:
        raise ParseError("expected a nonempty list of rows", where)
    rows = tuple(_vector(r, f"{where}[{i}]") for i, r in enumerate(m))
    if any(len(r) != len(rows[0]) for r in rows):
        raise ParseError("rows have different lengths", where)
    return rows


def _int_matrix(m, where):
    rows = _matrix(m, where)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            if x.denominator != 1:
                raise ParseError("expected an integer", f"{where}[{i}][{j}]")
    return tuple(tuple(int(x) for x in r) for r in rows)


def _field(obj, key, where):
    if not isinstance(obj, dict):
        raise ParseError("expected an object", where)
    if key not in obj:
        raise ParseError(f"missing field {key!r}", where)
    return obj[key]


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") from None


def load_file(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", str(path)) from None
    try:
        return loads(text)
    except ParseError as exc:
        raise ParseError(str(exc), str(path)) from None


# ---------------------------------------------------------------------------
# decoding
# ---------------------------------------------------------------------------

def torus_from_obj(obj, where="$") -> LatticeTorus:
    J = _field(obj, "J", where)
    if isinstance(J, dict):
        parts = {}
        for k, m in J.items():
            if not k.isdigit():
                raise ParseError("radicand keys must be positive integers", f"{where}.J.{k}")
            parts[int(k)] = _matrix(m, f"{where}.J.{k}")
        structure = parts
    else:
        structure = _matrix(J, f"{where}.J")
    try:
        T = make_torus(structure, obj.get("name", ""))
    except AbelautError as exc:
        raise ParseError(str(exc), f"{where}.J") from None
    if "g" in obj and obj["g"] != T.g:
        raise ParseError(f"g = {obj['g']} but J has size {T.dim}", f"{where}.g")
    return T


def parse_torus(text: str) -> LatticeTorus:
    return torus_from_obj(loads(text))


def decomposition_from_obj(obj, where="$") -> IsogenyDecomposition:
    factors = _field(obj, "factors", where)
    if not isinstance(factors, list) or not factors:
        raise ParseError("expected a nonempty list of tori", f"{where}.factors")
    tori = [torus_from_obj(f, f"{where}.factors[{i}]") for i, f in enumerate(factors)]
    gens = obj.get("sigma_generators", [])
    if not isinstance(gens, list):
        raise ParseError("expected a list", f"{where}.sigma_generators")
    dim = sum(t.dim for t in tori)
    vecs = []
    for i, g in enumerate(gens):
        v = _vector(g, f"{where}.sigma_generators[{i}]")
        if len(v) != dim:
            raise ParseError(f"expected {dim} coordinates", f"{where}.sigma_generators[{i}]")
        vecs.append(v)
    return IsogenyDecomposition(tuple(tori), tuple(vecs))


def datum_from_obj(obj, where="$") -> TorsorDatum:
    decomp = decomposition_from_obj(obj, where)
    p = _field(obj, "p", where)
    chi = obj.get("chi", 1)
    for key, val in (("p", p), ("chi", chi)):
        if isinstance(val, bool) or not isinstance(val, int):
            raise ParseError("expected an integer", f"{where}.{key}")
    P = _vector(_field(obj, "P", where), f"{where}.P")
    if len(P) != decomp.dim:
        raise ParseError(f"expected {decomp.dim} coordinates", f"{where}.P")
    return TorsorDatum(p, chi, P, decomp, obj.get("surface_ref", ""))


def candidates_from_obj(obj, dim, where="$"):
    items = _field(obj, "candidates", where)
    if not isinstance(items, list):
        raise ParseError("expected a list", f"{where}.candidates")
    out = []
    for i, c in enumerate(items):
        w = f"{where}.candidates[{i}]"
        phi = _int_matrix(_field(c, "phi", w), f"{w}.phi")
        if len(phi) != dim or len(phi[0]) != dim:
            raise ParseError(f"expected a {dim}x{dim} matrix", f"{w}.phi")
        shift = _vector(c.get("c", ["0"] * dim), f"{w}.c")
        if len(shift) != dim:
            raise ParseError(f"expected {dim} coordinates", f"{w}.c")
        try:
            out.append(FiberAutomorphism(phi, shift, c.get("label", f"candidate {i}")))
        except AbelautError as exc:
            raise ParseError(str(exc), f"{w}.phi") from None
    return out


# ---------------------------------------------------------------------------
# encoding
# ---------------------------------------------------------------------------

def encode_vector(v):
    return [rational_str(x) for x in v]


def encode_matrix(M):
    return [encode_vector(r) for r in M]


def encode_structure(cs: ComplexStructure):
    if cs.is_rational:
        return encode_matrix(cs.matrix)
    return {str(d): encode_matrix(K) for d, K in cs.parts}


def torus_to_obj(T: LatticeTorus):
    out = {"g": T.g, "J": encode_structure(T.structure)}
    if T.name:
        out["name"] = T.name
    return out


def decomposition_to_obj(decomp: IsogenyDecomposition):
    return {
        "factors": [torus_to_obj(t) for t in decomp.factors],
        "sigma_generators": [encode_vector(g) for g in decomp.sigma_generators],
    }


def datum_to_obj(datum: TorsorDatum):
    out = {"p": datum.p, "chi": datum.c}
    out.update(decomposition_to_obj(datum.decomp))
    out["P"] = encode_vector(datum.P)
    if datum.surface_ref:
        out["surface_ref"] = datum.surface_ref
    return out


def candidates_to_obj(cands):
    return {"candidates": [
        {"label": c.label, "phi": [[str(x) for x in r] for r in c.phi], "c": encode_vector(c.c)}
        for c in cands
    ]}


_FLAT_ARRAY = re.compile(r"\[\s+([^\[\]{}]*?)\s+\]")


def dumps(obj) -> str:
    """Indented JSON with arrays of scalars kept on one line."""
    text = json.dumps(obj, indent=2, ensure_ascii=False)
    text = _FLAT_ARRAY.sub(lambda m: "[" + re.sub(r",\s*\n\s*", ", ", m.group(1)) + "]", text)
    return text + "\n"


# ---------------------------------------------------------------------------
# shipped fixtures
# ---------------------------------------------------------------------------

def load_fixture(name: str):
    text = resources.files("abelaut").joinpath("data").joinpath(f"{name}.json").read_text(encoding="utf-8")
    return loads(text)
