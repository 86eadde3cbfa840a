"""Independent reference implementations used to freeze expected values.

Everything here is deliberately written from scratch on top of
``fractions.Fraction`` pairs (re, im) — no imports from the package internals
— so that tests compare two genuinely different computations.  Formulas are
chosen to differ from the library's algorithms where possible (Lagrange
inversion instead of coefficient recursion, the Riccati form of the
Schwarzian instead of the direct quotient formula, cofactor determinants).
"""

from fractions import Fraction

ZERO = (Fraction(0), Fraction(0))
ONE = (Fraction(1), Fraction(0))


def gadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def gsub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def ginv(a):
    n = a[0] * a[0] + a[1] * a[1]
    if n == 0:
        raise ZeroDivisionError
    return (a[0] / n, -a[1] / n)


def gdiv(a, b):
    return gmul(a, ginv(b))


def g_is_zero(a):
    return a[0] == 0 and a[1] == 0


def from_int(k):
    return (Fraction(k), Fraction(0))


# --- one-variable series as coefficient lists -------------------------------


def s_trim(c, n):
    c = list(c[: n + 1])
    c += [ZERO] * (n + 1 - len(c))
    return c


def s_add(a, b, n):
    a, b = s_trim(a, n), s_trim(b, n)
    return [gadd(a[k], b[k]) for k in range(n + 1)]


def s_mul(a, b, n):
    out = [ZERO] * (n + 1)
    for k, ak in enumerate(a[: n + 1]):
        if g_is_zero(ak):
            continue
        for m, bm in enumerate(b[: n + 1 - k]):
            if g_is_zero(bm):
                continue
            out[k + m] = gadd(out[k + m], gmul(ak, bm))
    return out


def s_scal(a, c):
    return [gmul(x, c) for x in a]


def s_recip(a, n):
    if g_is_zero(a[0]):
        raise ZeroDivisionError("series reciprocal of a non-unit")
    inv0 = ginv(a[0])
    out = [inv0]
    for k in range(1, n + 1):
        s = ZERO
        for m in range(1, k + 1):
            am = a[m] if m < len(a) else ZERO
            s = gadd(s, gmul(am, out[k - m]))
        out.append(gmul((-s[0], -s[1]), inv0))
    return out


def s_diff(a):
    return [gmul(a[k], from_int(k)) for k in range(1, len(a))]


def lagrange_inverse(f, n):
    """Series reversion by the Lagrange inversion formula.

    g_k = (1/k) * [z^(k-1)] (z / f(z))^k, for f with f(0)=0, f'(0) != 0.
    """
    assert g_is_zero(f[0]) and not g_is_zero(f[1])
    # h = z/f(z) as a unit series: f(z)/z shifted down, then inverted.
    h = s_recip(s_trim(f[1:], n), n)
    out = [ZERO]
    hk = [ONE] + [ZERO] * n  # h^0
    for k in range(1, n + 1):
        hk = s_mul(hk, h, n)
        coeff = hk[k - 1]
        out.append(gmul(coeff, ginv(from_int(k))))
    return out


def schwarzian_riccati(f, n):
    """Schwarzian via u = f''/f':  S(f) = u' - u^2/2  (order n-3 output)."""
    d1 = s_diff(s_trim(f, n))
    d2 = s_diff(d1)
    u = s_mul(d2, s_recip(d1, n - 2), n - 2)
    u2 = s_mul(u, u, n - 3)
    return s_add(s_diff(u), s_scal(u2, (Fraction(-1, 2), Fraction(0))), n - 3)


# --- two-variable polynomials as {(i, j): pair} dicts -----------------------


def p2_add(a, b):
    out = dict(a)
    for k, v in b.items():
        w = gadd(out.get(k, ZERO), v)
        if g_is_zero(w):
            out.pop(k, None)
        else:
            out[k] = w
    return out


def p2_mul(a, b, n=None):
    out = {}
    for (i1, j1), u in a.items():
        for (i2, j2), v in b.items():
            if n is not None and i1 + i2 + j1 + j2 > n:
                continue
            k = (i1 + i2, j1 + j2)
            w = gadd(out.get(k, ZERO), gmul(u, v))
            if g_is_zero(w):
                out.pop(k, None)
            else:
                out[k] = w
    return out


def p2_dx(a):
    return {
        (i - 1, j): gmul(v, from_int(i)) for (i, j), v in a.items() if i >= 1
    }


def p2_dy(a):
    return {
        (i, j - 1): gmul(v, from_int(j)) for (i, j), v in a.items() if j >= 1
    }


def p2_scal(a, c):
    return {k: gmul(v, c) for k, v in a.items() if not g_is_zero(gmul(v, c))}


def det_cofactor(m):
    """Exact determinant by cofactor expansion (small matrices only)."""
    n = len(m)
    if n == 1:
        return m[0][0]
    out = ZERO
    for j in range(n):
        if g_is_zero(m[0][j]):
            continue
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        term = gmul(m[0][j], det_cofactor(minor))
        if j % 2:
            term = (-term[0], -term[1])
        out = gadd(out, term)
    return out


def hankel_of_series(pairs, size, shift=0):
    """Hankel determinant [c_{shift+i+j}] of a coefficient-pair list."""
    m = [[pairs[shift + i + j] for j in range(size)] for i in range(size)]
    return det_cofactor(m)


# --- bridges to package values (public API only) ----------------------------


def pair_of_coeff(c):
    return (c.re, c.im)


def jet1_pairs(jet):
    return [pair_of_coeff(c) for c in jet.coeffs]


def jet2_pairs(jet):
    return {k: pair_of_coeff(c) for k, c in jet.items()}
