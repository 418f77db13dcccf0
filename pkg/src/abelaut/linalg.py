"""Exact matrix helpers.

Matrices are tuples of row tuples. Field-generic routines only need
``+ - * /`` and truthiness from the entries, so they run unchanged over
Fraction, CyclotomicNumber and PrimeFieldElement. Integer lattice work
(Smith/Hermite normal forms, LLL) is delegated to sympy.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm

from sympy import Matrix as _SMatrix
from sympy import ZZ
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_decomp
from sympy.polys.matrices import DomainMatrix


def as_matrix(rows) -> tuple:
    return tuple(tuple(r) for r in rows)


def shape(A):
    return len(A), (len(A[0]) if A else 0)


def identity(n, one=1, zero=0):
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def zeros(n, m=None, zero=0):
    m = n if m is None else m
    return tuple((zero,) * m for _ in range(n))


def diag(entries, zero=0):
    n = len(entries)
    return tuple(tuple(entries[i] if i == j else zero for j in range(n)) for i in range(n))


def block_diag(*blocks):
    n = sum(len(b) for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        k = len(b)
        for r in b:
            rows.append((0,) * offset + tuple(r) + (0,) * (n - offset - k))
        offset += k
    return tuple(rows)


def transpose(A):
    return tuple(zip(*A)) if A else ()


def matmul(A, B):
    Bt = transpose(B)
    return tuple(tuple(sum((a * b for a, b in zip(row, col)), 0 * row[0]) for col in Bt) for row in A)


def matvec(A, v):
    return tuple(sum((a * x for a, x in zip(row, v)), 0 * row[0]) for row in A)


def matadd(A, B):
    return tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(A, B))


def matsub(A, B):
    return tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(A, B))


def matscale(c, A):
    return tuple(tuple(c * a for a in r) for r in A)


def matpow(A, k):
    n = len(A)
    result = identity(n)
    base = A
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result


def is_identity(A):
    return all((a == 1) if i == j else (not a) for i, r in enumerate(A) for j, a in enumerate(r))


def is_integral(A):
    return all(Fraction(a).denominator == 1 for r in A for a in r)


def to_int(A):
    if not is_integral(A):
        raise ValueError("matrix has non-integral entries")
    return tuple(tuple(int(a) for a in r) for r in A)


def to_fraction(A):
    return tuple(tuple(Fraction(a) for a in r) for r in A)


def _field_rows(A):
    # ints are promoted so that '/' stays exact
    return [[Fraction(a) if isinstance(a, int) else a for a in r] for r in A]


def det(A):
    n = len(A)
    if n == 0:
        return 1
    all_int = all(isinstance(a, int) for r in A for a in r)
    M = _field_rows(A)
    result = M[0][0] * 0 + 1
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            result = -result
        pv = M[col][col]
        result = result * pv
        for r in range(col + 1, n):
            if M[r][col]:
                f = M[r][col] / pv
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    if all_int:
        return int(result)
    return result


def rref(A):
    """Reduced row echelon form over a field; returns (rows, pivot_columns)."""
    M = _field_rows(A)
    if not M:
        return [], []
    nrows, ncols = len(M), len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        pv = M[r][c]
        M[r] = [a / pv for a in M[r]]
        for i in range(nrows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return M, pivots


def nullspace(A, ncols=None, one=None):
    """Basis of {x : A x = 0} over the field of the entries."""
    if not A:
        if ncols is None:
            raise ValueError("ncols required for an empty system")
        one = Fraction(1) if one is None else one
        return [tuple(one if i == j else one * 0 for i in range(ncols)) for j in range(ncols)]
    M, pivots = rref(A)
    ncols = len(M[0])
    sample = next((a for r in M for a in r if a), Fraction(1))
    one = sample / sample if one is None else one
    zero = one * 0
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [zero] * ncols
        v[free] = one
        for i, pc in enumerate(pivots):
            v[pc] = -M[i][free]
        basis.append(tuple(v))
    return basis


def rank(A):
    return len(rref(A)[1]) if A else 0


def inverse(A):
    n = len(A)
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(_field_rows(A))]
    M, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(r[n:]) for r in M)


# ---------------------------------------------------------------------------
# integer lattices
# ---------------------------------------------------------------------------

def _to_sympy(A):
    return _SMatrix([[int(a) for a in r] for r in A])


def _from_sympy(M):
    return tuple(tuple(int(M[i, j]) for j in range(M.cols)) for i in range(M.rows))


def smith_normal_form(A):
    """Return (U, S, V) with U*A*V = S diagonal, U and V unimodular."""
    S, U, V = smith_normal_decomp(_to_sympy(A), domain=ZZ)
    return _from_sympy(U), _from_sympy(S), _from_sympy(V)


def common_denominator(entries):
    return reduce(lcm, (Fraction(a).denominator for a in entries), 1)


def lattice_basis(generators, dim):
    """Column basis (dim x dim) of the full-rank lattice spanned by rational vectors."""
    m = common_denominator(x for g in generators for x in g)
    cols = [tuple(int(Fraction(x) * m) for x in g) for g in generators]
    G = _SMatrix([[c[i] for c in cols] for i in range(dim)])
    H = hermite_normal_form(G)
    if H.cols != dim:
        raise ValueError("generators do not span a full-rank lattice")
    return tuple(tuple(Fraction(int(H[i, j]), m) for j in range(dim)) for i in range(dim))


def lll(rows):
    """LLL-reduce a list of integer row vectors (same lattice, short basis)."""
    if not rows:
        return []
    dm = DomainMatrix([[ZZ(int(a)) for a in r] for r in rows], (len(rows), len(rows[0])), ZZ)
    red = dm.lll().to_Matrix()
    return [tuple(int(red[i, j]) for j in range(red.cols)) for i in range(red.rows)]


def integer_kernel(A, ncols=None):
    """Z-basis of {x in Z^n : A x = 0} for an integer matrix A, LLL-reduced."""
    if not A:
        n = ncols
        return [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    U, S, V = smith_normal_form(A)
    r = sum(1 for i in range(min(len(S), len(S[0]))) if S[i][i])
    n = len(A[0])
    basis = [tuple(V[i][j] for i in range(n)) for j in range(r, n)]
    return lll(basis) if basis else []


def coset_representatives(D):
    """Representatives of Z^n / D Z^n for a nonsingular integer matrix D."""
    U, S, V = smith_normal_form(D)
    n = len(D)
    d = [abs(S[i][i]) for i in range(n)]
    if 0 in d:
        raise ZeroDivisionError("singular matrix has infinite cokernel")
    Uinv = to_int(inverse(U))
    reps = []

    def rec(i, w):
        if i == n:
            reps.append(matvec(Uinv, w))
            return
        for k in range(d[i]):
            rec(i + 1, w + (k,))

    rec(0, ())
    return reps


# ---------------------------------------------------------------------------
# characteristic polynomials and cyclotomic factors
# ---------------------------------------------------------------------------

def charpoly(A):
    """Coefficients of det(xI - A), leading first (Faddeev-LeVerrier)."""
    n = len(A)
    F = to_fraction(A)
    coeffs = [Fraction(1)]
    Mk = zeros(n, zero=Fraction(0))
    I = identity(n, Fraction(1), Fraction(0))
    for k in range(1, n + 1):
        Mk = matadd(matmul(F, Mk), matscale(coeffs[-1], I))
        AM = matmul(F, Mk)
        c = -sum(AM[i][i] for i in range(n)) / k
        coeffs.append(c)
    return [int(c) if c.denominator == 1 else c for c in coeffs]


def poly_divmod(num, den):
    """Long division of dense univariate polynomials (leading coefficient first)."""
    num = list(num)
    out = []
    while len(num) >= len(den):
        q = Fraction(num[0], 1) / den[0]
        out.append(q)
        for i in range(len(den)):
            num[i] -= q * den[i]
        num.pop(0)
    rem = num
    while rem and rem[0] == 0:
        rem.pop(0)
    return out, rem


def cyclotomic_poly(d):
    """Phi_d with integer coefficients, leading first."""
    num = [1] + [0] * (d - 1) + [-1]
    for e in range(1, d):
        if d % e == 0:
            num, rem = poly_divmod(num, cyclotomic_poly(e))
            assert not rem
    return [int(c) for c in num]


def euler_phi(d):
    return sum(1 for k in range(1, d + 1) if gcd(k, d) == 1)


def poly_eval_matrix(coeffs, A):
    n = len(A)
    R = zeros(n)
    for c in coeffs:
        R = matadd(matmul(R, A), matscale(c, identity(n)))
    return R
