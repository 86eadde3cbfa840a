# cython: boundscheck=False, wraparound=False
"""Compiled arithmetic kernels: the Cython twin of ``_kernel_py``.

Same functions, same semantics, same normalized-triple representation; the
coefficients stay arbitrary-precision Python integers (they routinely have
hundreds of digits), so the speedup comes from compiled dispatch of the
convolution and elimination loops, not from machine arithmetic.
"""

from math import gcd

BACKEND = "cython"

QZERO = (0, 0, 1)
QONE = (1, 0, 1)


def qnorm(a, b, d):
    """Normalize a raw triple: positive denominator, gcd 1."""
    if d == 0:
        raise ZeroDivisionError("zero denominator in Gaussian rational")
    if d < 0:
        a, b, d = -a, -b, -d
    g = gcd(gcd(a, b), d)
    if g > 1:
        a //= g
        b //= g
        d //= g
    return (a, b, d)


def qadd(t, u):
    a1, b1, d1 = t
    a2, b2, d2 = u
    return qnorm(a1 * d2 + a2 * d1, b1 * d2 + b2 * d1, d1 * d2)


def qsub(t, u):
    a1, b1, d1 = t
    a2, b2, d2 = u
    return qnorm(a1 * d2 - a2 * d1, b1 * d2 - b2 * d1, d1 * d2)


def qneg(t):
    a, b, d = t
    return (-a, -b, d)


def qmul(t, u):
    a1, b1, d1 = t
    a2, b2, d2 = u
    if (a1 == 0 and b1 == 0) or (a2 == 0 and b2 == 0):
        return QZERO
    return qnorm(a1 * a2 - b1 * b2, a1 * b2 + b1 * a2, d1 * d2)


def qinv(t):
    a, b, d = t
    n = a * a + b * b
    if n == 0:
        raise ZeroDivisionError("inverse of zero Gaussian rational")
    return qnorm(a * d, -b * d, n)


def qdiv(t, u):
    return qmul(t, qinv(u))


def jet1_mul(ca, cb, n):
    """Convolve two coefficient lists, truncated at degree n (inclusive)."""
    cdef Py_ssize_t k, m, la, lb, nn = n
    out = [QZERO] * (nn + 1)
    la = len(ca)
    if la > nn + 1:
        la = nn + 1
    for k in range(la):
        t = ca[k]
        if t[0] == 0 and t[1] == 0:
            continue
        lb = len(cb)
        if lb > nn + 1 - k:
            lb = nn + 1 - k
        for m in range(lb):
            u = cb[m]
            if u[0] == 0 and u[1] == 0:
                continue
            out[k + m] = qadd(out[k + m], qmul(t, u))
    return out


def jet2_mul(da, db, n):
    """Multiply two sparse 2-variable jets given as {(i, j): triple} dicts.

    Keys with total degree > n are dropped; zero results are not stored.
    """
    cdef Py_ssize_t i, j, i1, j1, i2, j2, nn = n
    out = {}
    for k1, t in da.items():
        if t[0] == 0 and t[1] == 0:
            continue
        i1 = k1[0]
        j1 = k1[1]
        for k2, u in db.items():
            if u[0] == 0 and u[1] == 0:
                continue
            i = i1 + k2[0]
            j = j1 + k2[1]
            if i + j > nn:
                continue
            key = (i, j)
            cur = out.get(key)
            if cur is None:
                out[key] = qmul(t, u)
            else:
                out[key] = qadd(cur, qmul(t, u))
    for key in [k for k, v in out.items() if v[0] == 0 and v[1] == 0]:
        del out[key]
    return out


def rref(rows, limit):
    """Reduced row echelon form in place, pivoting only in the first
    ``limit`` columns; row operations apply to the full rows, so columns
    beyond ``limit`` may carry an augmented right-hand side or an identity
    block for certificate extraction.

    Returns the list of pivot columns (in row order).
    """
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t r = 0, c, p, k, m, width, lim = limit
    pivots = []
    for c in range(lim):
        p = -1
        for k in range(r, nrows):
            t = rows[k][c]
            if t[0] != 0 or t[1] != 0:
                p = k
                break
        if p < 0:
            continue
        if p != r:
            rows[p], rows[r] = rows[r], rows[p]
        row = rows[r]
        piv = row[c]
        if piv != QONE:
            inv = qinv(piv)
            rows[r] = row = [
                qmul(t, inv) if (t[0] != 0 or t[1] != 0) else t for t in row
            ]
        width = len(row)
        for k in range(nrows):
            if k == r:
                continue
            other = rows[k]
            f = other[c]
            if f[0] == 0 and f[1] == 0:
                continue
            rows[k] = [
                qsub(other[m], qmul(f, row[m]))
                if (row[m][0] != 0 or row[m][1] != 0)
                else other[m]
                for m in range(width)
            ]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots
