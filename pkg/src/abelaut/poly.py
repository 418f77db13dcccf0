"""Sparse multivariate polynomials over a pluggable exact coefficient ring.

A :class:`Polynomial` maps exponent tuples to nonzero coefficients. The
coefficient ring is whatever the coefficients are: ints/Fractions,
:class:`~abelaut.scalars.CyclotomicNumber`, prime-field elements, or
another :class:`Polynomial` with *different variable names*. Two
polynomials belong to the same ring exactly when their ``names`` agree;
anything else is treated as a scalar.

Variable indices in the public functions are 1-based, matching the
rendered names ``x1 ... xn``.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

from .errors import ArityError, DegenerateInput, ParseError, UnsupportedDegree
from .scalars import CyclotomicNumber, exact_div, is_prime, parse_cyclotomic, rational_str, render_cyclotomic


@lru_cache(maxsize=None)
def default_names(n: int) -> tuple:
    return tuple(f"x{i}" for i in range(1, n + 1))


class Polynomial:
    __slots__ = ("names", "terms", "_hash")

    def __init__(self, names, terms=None):
        if isinstance(names, int):
            names = default_names(names)
        object.__setattr__(self, "names", tuple(names))
        n = len(self.names)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n:
                raise ArityError(f"monomial {exps} does not have arity {n}")
            if c:
                clean[exps] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _make(cls, names, terms):
        obj = object.__new__(cls)
        object.__setattr__(obj, "names", names)
        object.__setattr__(obj, "terms", terms)
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    def __reduce__(self):
        return (Polynomial, (self.names, self.terms))

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, names):
        return cls(names)

    @classmethod
    def constant(cls, names, c):
        p = cls(names)
        return cls(p.names, {(0,) * len(p.names): c})

    @classmethod
    def variable(cls, names, i, coeff=1):
        p = cls(names)
        n = len(p.names)
        if not 1 <= i <= n:
            raise ArityError(f"variable index {i} out of range 1..{n}")
        exps = [0] * n
        exps[i - 1] = 1
        return cls(p.names, {tuple(exps): coeff})

    @classmethod
    def monomial(cls, exps, coeff=1, names=None):
        names = default_names(len(exps)) if names is None else names
        return cls(names, {tuple(exps): coeff})

    # basic queries --------------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.names)

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def support(self) -> frozenset:
        return frozenset(self.terms)

    def coefficient(self, exps):
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ArityError(f"monomial {exps} does not have arity {self.nvars}")
        return self.terms.get(exps, 0)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def sorted_terms(self):
        """Terms in graded lexicographic order, largest first."""
        return sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0])))

    # ring operations ------------------------------------------------------
    def _same_ring(self, other):
        return isinstance(other, Polynomial) and other.names == self.names

    def _lift(self, c):
        return Polynomial._make(self.names, {(0,) * self.nvars: c} if c else {})

    def __add__(self, other):
        if not self._same_ring(other):
            other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial._make(self.names, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._make(self.names, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not self._same_ring(other):
            other = self._lift(other)
        return self + (-other)

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c):
        """Multiply every coefficient by the ring scalar ``c``."""
        if not c:
            return Polynomial._make(self.names, {})
        out = {}
        for e, a in self.terms.items():
            v = a * c
            if v:
                out[e] = v
        return Polynomial._make(self.names, out)

    def __mul__(self, other):
        if not self._same_ring(other):
            return self.scale(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                s = out.get(e)
                s = v if s is None else s + v
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Polynomial._make(self.names, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, c):
        if isinstance(c, Polynomial):
            return NotImplemented
        return self.scale(1 / Fraction(c) if isinstance(c, int) else 1 / c)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = self._lift(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.names == other.names and self.terms == other.terms
        if self.is_constant():
            return self.terms.get((0,) * self.nvars, 0) == other
        return False

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                h = hash(self.terms.get((0,) * self.nvars, 0))
            else:
                h = hash((self.names, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return self._hash

    def map_coefficients(self, fn):
        return Polynomial(self.names, {e: fn(c) for e, c in self.terms.items()})

    def evaluate(self, point):
        if len(point) != self.nvars:
            raise ArityError(f"point has {len(point)} coordinates, expected {self.nvars}")
        total = 0
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = t * x**k
            total = total + t
        return total

    def diff(self, i: int) -> "Polynomial":
        return partial_derivative(self, i)

    def __repr__(self):
        return f"Polynomial({render_polynomial(self)!r})"

    def __str__(self):
        return render_polynomial(self)


def _check_var(f, i):
    if not 1 <= i <= f.nvars:
        raise ArityError(f"variable index {i} out of range 1..{f.nvars}")


def partial_derivative(f: Polynomial, i: int) -> Polynomial:
    _check_var(f, i)
    k = i - 1
    out = {}
    for e, c in f.terms.items():
        if e[k]:
            ne = e[:k] + (e[k] - 1,) + e[k + 1:]
            out[ne] = c * e[k]
    return Polynomial._make(f.names, out)


def directional_derivative(f: Polynomial, v) -> Polynomial:
    """sum_j v_j * df/dx_j."""
    if len(v) != f.nvars:
        raise ArityError(f"vector has length {len(v)}, expected {f.nvars}")
    total = Polynomial._make(f.names, {})
    for j, vj in enumerate(v, start=1):
        if vj:
            total = total + partial_derivative(f, j).scale(vj)
    return total


def coefficient_of(f: Polynomial, m) -> object:
    return f.coefficient(m)


def unit_vector(i: int, n: int = 4, one=1):
    """e_i (1-based)."""
    return tuple(one if k == i else 0 for k in range(1, n + 1))


# ---------------------------------------------------------------------------
# the deformed Fermat family
# ---------------------------------------------------------------------------

def build_deformed_fermat(p: int, lam=Fraction(1)) -> Polynomial:
    """x1^p + x2^p + x3^p + x4^p + lam*(x1^2 x2^(p-4) x3^2 + x1^4 x2^(p-6) x4^2).

    ``lam`` may be any ring element, including a symbolic Polynomial.
    """
    if not isinstance(p, int) or p < 7 or not is_prime(p):
        raise UnsupportedDegree(f"the family needs a prime p >= 7, got {p!r}")
    terms = {
        (p, 0, 0, 0): 1,
        (0, p, 0, 0): 1,
        (0, 0, p, 0): 1,
        (0, 0, 0, p): 1,
    }
    if lam:
        terms[(2, p - 4, 2, 0)] = lam
        terms[(4, p - 6, 0, 2)] = lam
    return Polynomial(4, terms)


# ---------------------------------------------------------------------------
# linear substitution and scalar multiples
# ---------------------------------------------------------------------------

def _monomial_rows(M):
    """For a matrix with one nonzero per row, [(column, entry)] per row; else None."""
    rows = []
    for r in M:
        nz = [(j, a) for j, a in enumerate(r) if a]
        if len(nz) != 1:
            return None
        rows.append(nz[0])
    return rows


def linear_substitute(f: Polynomial, M) -> Polynomial:
    """f(M x), i.e. x_i -> sum_j M[i][j] x_j."""
    n = f.nvars
    if len(M) != n or any(len(r) != n for r in M):
        raise ArityError(f"matrix must be {n}x{n} for a polynomial in {n} variables")
    mono = _monomial_rows(M)
    if mono is not None:
        out = {}
        for e, c in f.terms.items():
            ne = [0] * n
            coef = c
            for i, k in enumerate(e):
                if k:
                    j, a = mono[i]
                    ne[j] += k
                    coef = coef * a**k
            ne = tuple(ne)
            s = out.get(ne)
            s = coef if s is None else s + coef
            if s:
                out[ne] = s
            else:
                out.pop(ne, None)
        return Polynomial._make(f.names, out)

    forms = []
    for r in M:
        forms.append(Polynomial(f.names, {tuple(1 if k == j else 0 for k in range(n)): a for j, a in enumerate(r)}))
    cache = {}

    def power(i, k):
        key = (i, k)
        if key not in cache:
            cache[key] = forms[i] if k == 1 else power(i, k - 1) * forms[i]
        return cache[key]

    total = Polynomial._make(f.names, {})
    for e, c in f.terms.items():
        prod = None
        for i, k in enumerate(e):
            if k:
                prod = power(i, k) if prod is None else prod * power(i, k)
        term = f._lift(c) if prod is None else prod.scale(c)
        total = total + term
    return total


def is_scalar_multiple(g: Polynomial, f: Polynomial):
    """alpha with g == alpha*f, or None. By convention (0, 0) gives 1."""
    if not g and not f:
        return 1
    if not g or not f or g.support() != f.support():
        return None
    m, fc = next(iter(f.terms.items()))
    alpha = exact_div(g.terms[m], fc)
    for e, c in f.terms.items():
        if g.terms[e] != alpha * c:
            return None
    return alpha


# ---------------------------------------------------------------------------
# Hessian pairing and the p-linear form
# ---------------------------------------------------------------------------

def hessian_entry(f: Polynomial, i: int, j: int) -> Polynomial:
    return partial_derivative(partial_derivative(f, i), j)


def hessian_pairing(f: Polynomial, u, v) -> Polynomial:
    """sum_{i,j} H_ij(x) u_i v_j with H the Hessian of f."""
    if len(u) != f.nvars or len(v) != f.nvars:
        raise ArityError(f"pairing vectors must have length {f.nvars}")
    return directional_derivative(directional_derivative(f, v), u)


def multilinear_form(f: Polynomial, *vectors):
    """Full polarization of a degree-d form evaluated at d vectors.

    Equals sum over index tuples of d-th mixed partials times coordinates,
    computed as d successive directional derivatives.
    """
    if not f.is_homogeneous():
        raise DegenerateInput("multilinear form needs a homogeneous polynomial")
    d = f.degree()
    if f and d != len(vectors):
        raise ArityError(f"degree {d} form needs {d} vectors, got {len(vectors)}")
    g = f
    for u in vectors:
        g = directional_derivative(g, u)
    return g.terms.get((0,) * f.nvars, 0)


def multilinear_form_bruteforce(f: Polynomial, *vectors):
    """Index-tuple sum of mixed partials; exponential, used as a test oracle."""
    from itertools import product

    n = f.nvars
    cache = {}
    total = 0
    for idx in product(range(1, n + 1), repeat=len(vectors)):
        coeff_prod = 1
        for u, i in zip(vectors, idx):
            coeff_prod = coeff_prod * u[i - 1]
            if not coeff_prod:
                break
        if not coeff_prod:
            continue
        key = tuple(sorted(idx))
        if key not in cache:
            g = f
            for i in key:
                g = partial_derivative(g, i)
            cache[key] = g.terms.get((0,) * n, 0)
        total = total + cache[key] * coeff_prod
    return total


def symmetric_permutations(vectors, limit=24):
    """A few argument permutations, used by symmetry checks."""
    out = []
    for perm in permutations(range(len(vectors))):
        out.append(tuple(vectors[i] for i in perm))
        if len(out) >= limit:
            break
    return out


# ---------------------------------------------------------------------------
# text grammar
# ---------------------------------------------------------------------------

def _render_coeff(c):
    """(sign, magnitude-string or None for 1)."""
    if isinstance(c, (int, Fraction)):
        c = Fraction(c)
        mag = None if abs(c) == 1 else rational_str(abs(c))
        return ("-" if c < 0 else "+"), mag
    if isinstance(c, CyclotomicNumber) and c.is_rational():
        return _render_coeff(c.coeffs[0])
    if isinstance(c, CyclotomicNumber):
        return "+", f"({render_cyclotomic(c)})"
    if isinstance(c, Polynomial):
        return "+", f"({render_polynomial(c)})"
    return "+", f"({c})"


def render_polynomial(f: Polynomial) -> str:
    """Canonical text, graded-lex order: ``x1^7 + 3/2*x1^2*x2 - x4``."""
    if not f:
        return "0"
    pieces = []
    for e, c in f.sorted_terms():
        sign, mag = _render_coeff(c)
        powers = [name if k == 1 else f"{name}^{k}" for name, k in zip(f.names, e) if k]
        if not powers:
            body = mag if mag is not None else "1"
        elif mag is None:
            body = "*".join(powers)
        else:
            body = "*".join([mag] + powers)
        pieces.append((sign, body))
    sign, body = pieces[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x(?P<idx>\d+))|(?P<op>[-+*^()−]))")


def parse_polynomial(text: str, nvars: int | None = None, p: int | None = None) -> Polynomial:
    """Parse the polynomial grammar produced by :func:`render_polynomial`.

    Parenthesised coefficients are cyclotomic literals in ``z`` and need
    the conductor ``p``.
    """
    tokens = []
    pos = 0
    s = text
    while pos < len(s):
        if s[pos:].strip() == "":
            break
        m = _TOKEN.match(s, pos)
        if not m:
            raise ParseError(f"unexpected character {s[pos:].lstrip()[:1]!r}", pos)
        if m.group("op") == "(":
            depth, end = 1, m.end()
            while end < len(s) and depth:
                depth += {"(": 1, ")": -1}.get(s[end], 0)
                end += 1
            if depth:
                raise ParseError("unbalanced parenthesis", m.start())
            if p is None:
                raise ParseError("cyclotomic coefficient needs a conductor", m.start())
            tokens.append(("cyc", parse_cyclotomic(s[m.end(): end - 1], p), m.start()))
            pos = end
            continue
        if m.group("num"):
            tokens.append(("num", Fraction(m.group("num")), m.start()))
        elif m.group("var"):
            idx = int(m.group("idx"))
            if idx < 1:
                raise ParseError("variables are numbered from x1", m.start())
            tokens.append(("var", idx, m.start()))
        else:
            op = m.group("op")
            if op == ")":
                raise ParseError("unbalanced parenthesis", m.start())
            tokens.append(("op", "-" if op == "−" else op, m.start()))
        pos = m.end()
    if not tokens:
        raise ParseError("empty polynomial", 0)

    max_var = max((t[1] for t in tokens if t[0] == "var"), default=1)
    n = max_var if nvars is None else nvars
    if max_var > n:
        raise ArityError(f"x{max_var} exceeds the declared arity {n}")

    terms = {}
    i = 0

    def expect_factor(i):
        if i >= len(tokens):
            raise ParseError("unexpected end of input", len(s))
        kind, val, at = tokens[i]
        if kind in ("num", "cyc"):
            return ("c", val), i + 1
        if kind == "var":
            exp = 1
            if i + 1 < len(tokens) and tokens[i + 1][:2] == ("op", "^"):
                if i + 2 >= len(tokens) or tokens[i + 2][0] != "num" or tokens[i + 2][1].denominator != 1:
                    raise ParseError("exponent must be a non-negative integer", at)
                exp = int(tokens[i + 2][1])
                return ("x", val, exp), i + 3
            return ("x", val, exp), i + 1
        raise ParseError(f"unexpected {val!r}", at)

    first = True
    while i < len(tokens):
        sign = 1
        if tokens[i][:2] in (("op", "+"), ("op", "-")):
            sign = -1 if tokens[i][1] == "-" else 1
            i += 1
        elif not first:
            raise ParseError("missing '+' or '-' between terms", tokens[i][2])
        coef = Fraction(sign)
        exps = [0] * n
        fac, i = expect_factor(i)
        while True:
            if fac[0] == "c":
                coef = fac[1] * coef
            else:
                exps[fac[1] - 1] += fac[2]
            if i < len(tokens) and tokens[i][:2] == ("op", "*"):
                fac, i = expect_factor(i + 1)
                continue
            break
        e = tuple(exps)
        prev = terms.get(e)
        terms[e] = coef if prev is None else prev + coef
        first = False
    return Polynomial(n, terms)
