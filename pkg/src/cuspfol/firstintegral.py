"""Rational first integrals of the glued foliation.

A meromorphic first integral exists exactly when two nonconstant rational
functions R1, R2 satisfy R1 o sigma = R2, where sigma is the transversal
structure at the corner.  This module offers the pieces of that criterion
that are decidable at finite jet order:

* exact verification of a proposed relation (denominator-cleared, so poles
  of the rational functions are harmless),
* Kronecker/Pade rationality testing of a single truncated series - "is
  R1 o sigma rational of bounded degree?" - with exact reconstruction and
  re-expansion,
* the two canonical first integrals of the homographic case,
  (y^2+x^3)/(xy) and (y^2+x^3)/(xy) + x, which define analytically
  equivalent foliations,
* a bounded search for a relation over monomial probes R1 = z^k.

The bounded search is evidence, not proof: absence of a relation up to the
degree bound is reported as exactly that.  The general existence problem
is bilinear in (R1, R2) and is deliberately not attempted here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coeff import Coeff
from .jets import DEFAULT_ORDER, Jet1, Jet2
from .linalg import solve
from .moduli import GermDiff1, Homography


# ---------------------------------------------------------------------------
# dense polynomials over Coeff (lowest degree first)


def _as_coeff(v):
    return v if isinstance(v, Coeff) else Coeff(v)


def _ptrim(c):
    c = [_as_coeff(v) for v in c]
    while c and c[-1].is_zero():
        c.pop()
    return tuple(c)


def _padd(a, b):
    n = max(len(a), len(b))
    out = []
    for k in range(n):
        x = a[k] if k < len(a) else Coeff(0)
        y = b[k] if k < len(b) else Coeff(0)
        out.append(x + y)
    return _ptrim(out)


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [Coeff(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _ptrim(out)


def _pscale(a, s):
    return _ptrim([v * s for v in a])


def _pdivmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Coeff(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b) and _ptrim(r):
        r = list(_ptrim(r))
        if len(r) < len(b):
            break
        f = r[-1] / lead
        k = len(r) - len(b)
        q[k] = f
        for i, v in enumerate(b):
            r[k + i] = r[k + i] - f * v
        r.pop()
    return _ptrim(q), _ptrim(r)


def _pgcd(a, b):
    a, b = _ptrim(a), _ptrim(b)
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    if not a:
        return ()
    return _pscale(a, Coeff(1) / a[-1])  # monic


def _peval_jet(p, z: Jet1) -> Jet1:
    acc = Jet1.zero(z.order)
    for c in reversed(p):
        acc = acc * z + c
    return acc


def _as_rational(v):
    if isinstance(v, Rational1):
        return v
    if isinstance(v, (int, Coeff)):
        return Rational1((v,))
    raise TypeError(f"cannot interpret {type(v).__name__} as a rational function")


@dataclass(frozen=True)
class Rational1:
    """A reduced rational function num/den of one variable.

    Stored lowest-degree-first; normalized so gcd(num, den) = 1 and the
    denominator has constant term 1 when possible (leading term 1 when the
    denominator vanishes at the origin).
    """

    num: tuple
    den: tuple = (Coeff(1),)

    def __post_init__(self):
        num = _ptrim(self.num)
        den = _ptrim(self.den)
        if not den:
            raise ValueError("rational function needs a nonzero denominator")
        g = _pgcd(num, den)
        if g and len(g) > 1:
            num, _ = _pdivmod(num, g)
            den, _ = _pdivmod(den, g)
        unit = den[0] if not den[0].is_zero() else den[-1]
        s = Coeff(1) / unit
        object.__setattr__(self, "num", _pscale(num, s))
        object.__setattr__(self, "den", _pscale(den, s))

    @classmethod
    def variable(cls):
        return cls((0, 1))

    @classmethod
    def constant(cls, c):
        return cls((c,))

    def is_zero(self):
        return not self.num

    def __add__(self, other):
        other = _as_rational(other)
        return Rational1(
            _padd(_pmul(self.num, other.den), _pmul(other.num, self.den)),
            _pmul(self.den, other.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return Rational1(_pscale(self.num, Coeff(-1)), self.den)

    def __sub__(self, other):
        return self + (-_as_rational(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_rational(other)
        return Rational1(
            _pmul(self.num, other.num), _pmul(self.den, other.den)
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rational(other)
        return Rational1(
            _pmul(self.num, other.den), _pmul(self.den, other.num)
        )

    def derivative(self) -> "Rational1":
        """d/dz by the quotient rule, returned reduced."""

        def pdiff(p):
            return _ptrim([p[k] * Coeff(k) for k in range(1, len(p))])

        return Rational1(
            _padd(
                _pmul(pdiff(self.num), self.den),
                _pscale(_pmul(self.num, pdiff(self.den)), Coeff(-1)),
            ),
            _pmul(self.den, self.den),
        )

    def scale_variable(self, factor) -> "Rational1":
        """The rational function z -> self(factor * z)."""
        f = _as_coeff(factor)

        def scale(p):
            out = []
            power = Coeff(1)
            for c in p:
                out.append(c * power)
                power = power * f
            return out

        return Rational1(scale(self.num), scale(self.den))

    def evaluate(self, point) -> Coeff:
        p = _as_coeff(point)

        def horner(poly):
            acc = Coeff(0)
            for c in reversed(poly):
                acc = acc * p + c
            return acc

        d = horner(self.den)
        if d.is_zero():
            raise ValueError(f"pole at {p}")
        return horner(self.num) / d

    def degree(self):
        dn = len(self.num) - 1 if self.num else 0
        dd = len(self.den) - 1
        return max(dn, dd)

    def is_constant(self):
        return self.degree() == 0

    def expand(self, order) -> Jet1:
        """Taylor jet at the origin; requires den(0) != 0."""
        if self.den[0].is_zero():
            raise ValueError("pole at the origin")
        z = Jet1.variable(order)
        return _peval_jet(self.num, z).div(_peval_jet(self.den, z))

    def compose_expand(self, sigma, order) -> Jet1:
        """Jet of self o sigma; requires den(0) != 0 since sigma(0) = 0."""
        if isinstance(sigma, GermDiff1):
            sigma = sigma.jet
        if self.den[0].is_zero():
            raise ValueError("pole at the origin")
        s = sigma.truncate(order)
        return _peval_jet(self.num, s).div(_peval_jet(self.den, s))


def rational_precompose(r: Rational1, h: Homography) -> Rational1:
    """The rational function r o h, cleared of denominators exactly."""
    d = r.degree()
    lz = (Coeff(0), h.lam)  # lam*z
    u = (Coeff(1), h.mu)  # 1 + mu*z
    lz_pow = [(Coeff(1),)]
    u_pow = [(Coeff(1),)]
    for _ in range(d):
        lz_pow.append(_pmul(lz_pow[-1], lz))
        u_pow.append(_pmul(u_pow[-1], u))

    def push(p):
        out = ()
        for i, c in enumerate(p):
            out = _padd(out, _pscale(_pmul(lz_pow[i], u_pow[d - i]), c))
        return out

    return Rational1(push(r.num), push(r.den))


# ---------------------------------------------------------------------------
# the relation R1 o sigma = R2


def verify_rational_relation(r1: Rational1, r2: Rational1, sigma, order) -> bool:
    """Exact check of P1(sigma)*Q2(z) - P2(z)*Q1(sigma) = 0 to the order.

    Denominator-cleared, so rational functions with poles (even at the
    origin) are handled without division.
    """
    if isinstance(sigma, GermDiff1):
        sigma = sigma.jet
    if sigma.order < order:
        raise ValueError("sigma jet is shorter than the requested order")
    s = sigma.truncate(order)
    z = Jet1.variable(order)
    lhs = _peval_jet(r1.num, s) * _peval_jet(r2.den, z) - _peval_jet(
        r2.num, z
    ) * _peval_jet(r1.den, s)
    return lhs.is_zero()


# ---------------------------------------------------------------------------
# rationality testing


def hankel_determinant(g: Jet1, size, shift=0) -> Coeff:
    """Exact determinant of the Hankel matrix [g_{shift+i+j}]."""
    top = shift + 2 * (size - 1)
    if top > g.order:
        raise ValueError(f"jet order {g.order} too small for index {top}")
    m = [[g.coeff(shift + i + j) for j in range(size)] for i in range(size)]
    det = Coeff(1)
    for col in range(size):
        pivot = None
        for row in range(col, size):
            if not m[row][col].is_zero():
                pivot = row
                break
        if pivot is None:
            return Coeff(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det = det * m[col][col]
        for row in range(col + 1, size):
            f = m[row][col] / m[col][col]
            m[row] = [a - f * b for a, b in zip(m[row], m[col])]
    return det


def hankel_rationality(g: Jet1, max_deg, order) -> Rational1 | None:
    """Reconstruct g as a rational function of degree <= max_deg, if any.

    Kronecker's criterion in its Pade form: a power series agrees with a
    rational function P/Q (deg P, deg Q <= d, Q(0) != 0) to order N >= 2d+2
    iff the linear system  coefficient_m(Q*g) = 0 for d < m <= N  has a
    solution with Q(0) = 1; then P is the degree-<=d head of Q*g.  The
    reconstruction is reduced, re-expanded, and compared with g exactly.
    """
    d = int(max_deg)
    n = int(order)
    if d < 0:
        raise ValueError("degree bound must be >= 0")
    if n < 2 * d + 2:
        raise ValueError(f"order {n} insufficient: need at least {2 * d + 2}")
    if g.order < n:
        raise ValueError(f"jet order {g.order} is shorter than requested order {n}")
    rows = []
    rhs = []
    for m in range(d + 1, n + 1):
        rows.append([g.coeff(m - k) if m - k >= 0 else Coeff(0) for k in range(1, d + 1)])
        rhs.append(-g.coeff(m))
    res = solve(rows, rhs)
    if not res.feasible:
        return None
    q = (Coeff(1),) + tuple(res.solution)
    prod = _peval_jet(q, Jet1.variable(n)) * g.truncate(n)
    p = tuple(prod.coeff(k) for k in range(min(d, n) + 1))
    cand = Rational1(p, q)
    if cand.expand(n) != g.truncate(n):
        return None
    return cand


# ---------------------------------------------------------------------------
# the homographic case


def homographic_case_first_integrals(order=DEFAULT_ORDER):
    """The two canonical rational first integrals, cleared of denominators.

    Returns ((y^2+x^3, x*y), (y^2+x^3+x^2*y, x*y)): the level functions
    (y^2+x^3)/(xy) and (y^2+x^3)/(xy) + x.  Both define cusp-type
    absolutely dicritical foliations, and the two foliations are
    analytically equivalent (their transversal structures are homographies
    with vanishing Schwarzian).
    """
    num1 = Jet2({(0, 2): 1, (3, 0): 1}, order)
    num2 = Jet2({(0, 2): 1, (3, 0): 1, (2, 1): 1}, order)
    den = Jet2({(1, 1): 1}, order)
    return ((num1, den), (num2, den))


# ---------------------------------------------------------------------------
# bounded search


@dataclass(frozen=True)
class FirstIntegralReport:
    """Outcome of the bounded monomial-probe search for a relation."""

    relation_found: bool
    r1: Rational1 | None
    r2: Rational1 | None
    probes: tuple
    degree_bound: int
    order: int
    note: str

    def __bool__(self):
        return self.relation_found


def no_first_integral_witness(sigma, d, order) -> FirstIntegralReport:
    """Probe R1 = z^k, k <= d, for rationality of R1 o sigma.

    Each probe expands (sigma)^k and asks ``hankel_rationality`` for a
    degree-<=d reconstruction; the first hit is returned as the relation
    (R1, R2).  A miss on every probe is evidence of no first integral
    within the bound - a bounded search, not a proof.
    """
    if isinstance(sigma, GermDiff1):
        sigma = sigma.jet
    d = int(d)
    if d < 1:
        raise ValueError("degree bound must be >= 1")
    n = int(order)
    if sigma.order < n:
        raise ValueError("sigma jet is shorter than the requested order")
    s = sigma.truncate(n)
    probes = []
    found = None
    for k in range(1, d + 1):
        r2 = hankel_rationality(s**k, d, n)
        probes.append((k, r2 is not None))
        if r2 is not None and found is None:
            found = (Rational1((0,) * k + (1,)), r2)
    note = (
        f"bounded search over monomial probes z^k, k <= {d}; "
        "absence of a relation within the bound is evidence, not a proof"
    )
    if found is None:
        return FirstIntegralReport(False, None, None, tuple(probes), d, n, note)
    return FirstIntegralReport(
        True, found[0], found[1], tuple(probes), d, n, note
    )
