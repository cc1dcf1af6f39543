"""Exact linear algebra over the rationals and integer lattice utilities."""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def _frac_rows(rows):
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows):
    """Reduced row echelon form; returns (rref_rows, pivot_columns)."""
    m = _frac_rows(rows)
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, ncols=None):
    """Basis of {x : A x = 0} as Fraction tuples."""
    if not rows:
        if ncols is None:
            raise ValueError("empty matrix needs an explicit column count")
        return [tuple(Fraction(i == j) for j in range(ncols)) for i in range(ncols)]
    ncols = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(tuple(v))
    return basis


def solve_linear(rows, rhs):
    """One solution of A x = b (free variables set to 0), or None."""
    if not rows:
        return None
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    ncols = len(rows[0])
    if ncols in pivots:
        return None  # inconsistent: pivot in the constant column
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


def det(rows) -> Fraction:
    m = _frac_rows(rows)
    n = len(m)
    sign = 1
    out = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            sign = -sign
        out *= m[c][c]
        inv = Fraction(1) / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return out * sign


def inverse(rows):
    """Exact inverse, or None if singular."""
    n = len(rows)
    aug = [list(_frac_rows([row])[0]) + [Fraction(i == j) for j in range(n)] for i, row in enumerate(rows)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in red]


def mat_mul(a, b):
    return [
        [sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def mat_vec(a, v):
    return [sum(a[i][k] * v[k] for k in range(len(v))) for i in range(len(a))]


# -- integer lattice helpers ---------------------------------------------------


def vec_gcd(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def make_primitive(v):
    """Divide an integer vector by the gcd of its entries (direction kept)."""
    g = vec_gcd(v)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in v)


def unimodular_completion(v):
    """Integer matrix B with det +-1 and first column the primitive vector v.

    Works by reducing v to e1 with elementary integer row operations U and
    returning B = U^-1; columns 2..p complete v to a lattice basis.
    """
    v = list(v)
    p = len(v)
    if vec_gcd(v) != 1:
        raise ValueError("unimodular completion needs a primitive vector")
    u = [[1 if i == j else 0 for j in range(p)] for i in range(p)]
    w = list(v)

    def rowop(i, j, q):
        # w[i] -= q*w[j], same on U
        w[i] -= q * w[j]
        u[i] = [a - q * b for a, b in zip(u[i], u[j])]

    while True:
        nz = [i for i in range(p) if w[i] != 0]
        if len(nz) == 1:
            k = nz[0]
            if k != 0:
                w[0], w[k] = w[k], w[0]
                u[0], u[k] = u[k], u[0]
            if w[0] < 0:
                w[0] = -w[0]
                u[0] = [-a for a in u[0]]
            break
        k = min(nz, key=lambda i: abs(w[i]))
        for i in nz:
            if i != k:
                rowop(i, k, w[i] // w[k])
    assert w[0] == 1
    inv = inverse(u)
    b = [[int(x) for x in row] for row in inv]
    assert all(b[i][0] == v[i] for i in range(p))
    return b


def unimodular_variant(b, variant: int):
    """Post-compose a completion with a unimodular map fixing e1.

    Deterministic in ``variant``; variant 0 returns b unchanged.  Used to
    test invariance of quotient constructions under the basis choice.
    """
    if variant == 0:
        return b
    p = len(b)
    t = [[1 if i == j else 0 for j in range(p)] for i in range(p)]
    x = variant
    for j in range(1, p):
        x = (x * 2654435761 + 1) % 7
        t[0][j] = x - 3
    if p > 2:
        t[1][2] = (variant % 3) - 1
    out = mat_mul(b, t)
    return [[int(x) for x in row] for row in out]
