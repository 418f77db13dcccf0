"""Independent reference computations used to cross-check the package.

Nothing here calls the routine it is checking; most are plain brute force.
"""
from fractions import Fraction
from itertools import combinations, product

import sympy


def sympy_value(x):
    """A cyclotomic number as a sympy polynomial in z reduced mod Phi_p."""
    z = sympy.Symbol("z")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * z**i for i, c in enumerate(x.coeffs))
    return sympy.rem(sympy.Poly(expr, z, domain="QQ"), sympy.Poly(sympy.cyclotomic_poly(x.p, z), z))


def naive_order(M, limit=10**4):
    n = len(M)
    I = [[int(i == j) for j in range(n)] for i in range(n)]
    P = [list(r) for r in M]
    for k in range(1, limit + 1):
        if P == I:
            return k
        P = [[sum(P[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
    return None


def bruteforce_affine_fixed_points(M, a, m):
    """All b in (1/m)Z^n / Z^n with M b + a = b mod Z^n."""
    n = len(M)
    out = []
    for num in product(range(m), repeat=n):
        b = [Fraction(k, m) for k in num]
        img = [sum(M[i][j] * b[j] for j in range(n)) + Fraction(a[i]) - b[i] for i in range(n)]
        if all(x.denominator == 1 for x in img):
            out.append(tuple(b))
    return out


def mod1(v):
    return tuple(Fraction(x) % 1 for x in v)


def closure(gens, n):
    zero = (Fraction(0),) * n
    elems = {zero}
    changed = True
    while changed:
        changed = False
        for x in list(elems):
            for g in gens:
                y = mod1(tuple(a + b for a, b in zip(x, g)))
                if y not in elems:
                    elems.add(y)
                    changed = True
    return frozenset(elems)


def subgroups_by_small_generating_sets(N, n):
    """Subgroups of (Z/N)^n: each one is generated by at most n elements."""
    pts = [tuple(Fraction(k, N) for k in v) for v in product(range(N), repeat=n)]
    found = set()
    for r in range(n + 1):
        for gens in combinations(pts, r):
            found.add(closure(gens, n))
    return found


def diagonal_preserves(terms, p, exps):
    """diag(1, z^a, z^b, z^c) multiplies every monomial by z^(a e2 + b e3 + c e4); f is preserved
    up to a scalar iff that exponent is the same for every monomial of f."""
    a, b, c = exps
    weights = {(a * e[1] + b * e[2] + c * e[3]) % p for e in terms}
    return len(weights) == 1


def fermat_family_values(p, lam, x, q):
    """f and its four partials at x mod q, from the closed form."""
    x1, x2, x3, x4 = x
    f = x1**p + x2**p + x3**p + x4**p + lam * (x1**2 * x2 ** (p - 4) * x3**2 + x1**4 * x2 ** (p - 6) * x4**2)
    d1 = p * x1 ** (p - 1) + lam * (2 * x1 * x2 ** (p - 4) * x3**2 + 4 * x1**3 * x2 ** (p - 6) * x4**2)
    d2 = p * x2 ** (p - 1) + lam * ((p - 4) * x1**2 * x2 ** (p - 5) * x3**2 + (p - 6) * x1**4 * x2 ** (p - 7) * x4**2)
    d3 = p * x3 ** (p - 1) + lam * 2 * x1**2 * x2 ** (p - 4) * x3
    d4 = p * x4 ** (p - 1) + lam * 2 * x1**4 * x2 ** (p - 6) * x4
    return [v % q for v in (f, d1, d2, d3, d4)]


def naive_singular_points(p, lam, q):
    """Singular points of f_lam over F_q, one representative per projective point (lam an integer)."""
    out = []
    for x in product(range(q), repeat=4):
        lead = next((v for v in x if v), None)
        if lead != 1:
            continue
        if not any(fermat_family_values(p, lam, x, q)):
            out.append(x)
    return out


def simulate_descent(datum, candidate, samples):
    """Check F(g.a) = g.F(a) in A for every g in Z/p and every sample point a."""
    for g in range(datum.p):
        for a in samples:
            lhs = candidate.apply(datum.act(g, a))
            rhs = datum.act(g, candidate.apply(a))
            if not datum.equal_in_A(lhs, rhs):
                return False
    return True
