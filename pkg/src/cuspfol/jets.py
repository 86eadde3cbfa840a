"""Truncated power series (jets) over Q(i), in one and two variables.

A jet of order N stores exact coefficients for all monomials of total degree
<= N; higher-order terms are unknown, not zero.  Jets are immutable values:
arithmetic returns new objects and truncates to the minimum of the operand
orders.  Substitution-type operations that can raise the order (blow-up
pullbacks) take an explicit target order and treat their input as exact
polynomial data; this is documented where it happens.

Internally coefficients are the kernel triples (a, b, d) ~ (a+b*i)/d; the
public surface deals in :class:`~cuspfol.coeff.Coeff`.
"""

from __future__ import annotations

from ._backend import (
    QONE,
    QZERO,
    jet1_mul,
    jet2_mul,
    qadd,
    qdiv,
    qinv,
    qmul,
    qneg,
    qsub,
)
from .coeff import Coeff, format_coeff

DEFAULT_ORDER = 16


class JetError(ValueError):
    pass


class ExactDivisionError(JetError):
    """Raised when the exact-division mode meets a nonzero remainder."""


def _as_triple(c):
    if isinstance(c, Coeff):
        return c.triple
    return Coeff(c).triple


def _tz(t):
    return t[0] == 0 and t[1] == 0


class Jet1:
    """A truncated series  c0 + c1*z + ... + cN*z^N  (+ unknown tail)."""

    __slots__ = ("_c", "_n")

    def __init__(self, coeffs=(), order=DEFAULT_ORDER):
        n = int(order)
        if n < 0:
            raise JetError("order must be >= 0")
        c = [QZERO] * (n + 1)
        for k, v in enumerate(coeffs):
            if k > n:
                break
            c[k] = _as_triple(v)
        self._c = tuple(c)
        self._n = n

    @classmethod
    def _raw(cls, triples, order):
        obj = object.__new__(cls)
        obj._c = tuple(triples[: order + 1]) + (QZERO,) * (order + 1 - len(triples))
        obj._n = order
        return obj

    @classmethod
    def zero(cls, order=DEFAULT_ORDER):
        return cls((), order)

    @classmethod
    def one(cls, order=DEFAULT_ORDER):
        return cls((1,), order)

    @classmethod
    def variable(cls, order=DEFAULT_ORDER):
        return cls((0, 1), order)

    @classmethod
    def monomial(cls, k, c=1, order=DEFAULT_ORDER):
        t = [0] * k + [c]
        return cls(t, order)

    @property
    def order(self):
        return self._n

    @property
    def coeffs(self):
        return tuple(Coeff.from_triple(t) for t in self._c)

    def coeff(self, k) -> Coeff:
        if k < 0 or k > self._n:
            raise JetError(f"coefficient index {k} outside jet order {self._n}")
        return Coeff.from_triple(self._c[k])

    def is_zero(self):
        return all(_tz(t) for t in self._c)

    def valuation(self):
        """Smallest k with nonzero z^k coefficient; None for the zero jet."""
        for k, t in enumerate(self._c):
            if not _tz(t):
                return k
        return None

    def degree(self):
        """Largest k with nonzero coefficient; None for the zero jet."""
        for k in range(self._n, -1, -1):
            if not _tz(self._c[k]):
                return k
        return None

    def truncate(self, order):
        if order > self._n:
            raise JetError("truncate cannot raise the order")
        return Jet1._raw(self._c[: order + 1], order)

    def with_order(self, order):
        """Reinterpret as a jet of the given order, padding with zeros.

        Raising the order asserts the stored coefficients are exact
        polynomial data (the new high-degree coefficients are claimed zero).
        """
        if order <= self._n:
            return self.truncate(order)
        return Jet1._raw(self._c, order)

    def _bin(self, other, op):
        if not isinstance(other, Jet1):
            other = Jet1((other,), self._n)
        n = min(self._n, other._n)
        return Jet1._raw(
            [op(self._c[k], other._c[k]) for k in range(n + 1)], n
        )

    def __add__(self, other):
        if isinstance(other, (int, Coeff)) or type(other).__name__ == "Fraction":
            other = Jet1((other,), self._n)
        if not isinstance(other, Jet1):
            return NotImplemented
        return self._bin(other, qadd)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Coeff)) or type(other).__name__ == "Fraction":
            other = Jet1((other,), self._n)
        if not isinstance(other, Jet1):
            return NotImplemented
        return self._bin(other, qsub)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Jet1._raw([qneg(t) for t in self._c], self._n)

    def __mul__(self, other):
        if isinstance(other, Jet1):
            n = min(self._n, other._n)
            return Jet1._raw(jet1_mul(self._c, other._c, n), n)
        t = _as_triple(other)
        return Jet1._raw([qmul(c, t) for c in self._c], self._n)

    __rmul__ = __mul__

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise JetError("jet powers take a nonnegative integer exponent")
        acc = Jet1.one(self._n)
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def derivative(self):
        """d/dz, one order lower (the top coefficient is consumed)."""
        if self._n == 0:
            raise JetError("cannot differentiate an order-0 jet")
        out = [
            qmul(self._c[k], (k, 0, 1)) for k in range(1, self._n + 1)
        ]
        return Jet1._raw(out, self._n - 1)

    def compose(self, inner: "Jet1") -> "Jet1":
        """self(inner(z)); inner must have zero constant term."""
        if not _tz(inner._c[0]):
            raise JetError("composition target must vanish at 0")
        n = min(self._n, inner._n)
        acc = [QZERO] * (n + 1)
        for k in range(n, -1, -1):
            acc = jet1_mul(acc, inner._c, n)
            acc[0] = qadd(acc[0], self._c[k])
        return Jet1._raw(acc, n)

    def comp_inverse(self) -> "Jet1":
        """Compositional inverse g with g(f(z)) = z; needs f(0)=0, f'(0)!=0."""
        if not _tz(self._c[0]):
            raise JetError("compositional inverse needs f(0) = 0")
        if _tz(self._c[1]):
            raise JetError("compositional inverse needs f'(0) != 0")
        n = self._n
        inv1 = qinv(self._c[1])
        g = [QZERO, inv1]
        # Determine g degree by degree from [z^k](g o f) = 0 for 2 <= k <= n.
        for k in range(2, n + 1):
            comp = Jet1._raw(g, k).compose(self.truncate(k))
            # g_k enters [z^k] with factor (f'(0))^k.
            bad = comp._c[k]
            g.append(qneg(qmul(bad, _pow_triple(inv1, k))))
        return Jet1._raw(g, n)

    def reciprocal(self) -> "Jet1":
        """1/self; needs a nonzero constant term."""
        if _tz(self._c[0]):
            raise JetError("reciprocal needs a unit (nonzero constant term)")
        n = self._n
        inv0 = qinv(self._c[0])
        out = [inv0]
        for k in range(1, n + 1):
            s = QZERO
            for m in range(1, k + 1):
                if not _tz(self._c[m]):
                    s = qadd(s, qmul(self._c[m], out[k - m]))
            out.append(qneg(qmul(s, inv0)))
        return Jet1._raw(out, n)

    def div(self, other: "Jet1") -> "Jet1":
        """Division, in one of two exact modes.

        If ``other`` is a unit this is series division at the min of the
        orders.  Otherwise both operands are treated as exact polynomials and
        divided exactly (the result order drops by the divisor valuation);
        a nonzero remainder raises :class:`ExactDivisionError`.
        """
        if not isinstance(other, Jet1):
            raise JetError("div expects a Jet1")
        if not _tz(other._c[0]):
            return self * other.reciprocal()
        v = other.valuation()
        if v is None:
            raise ZeroDivisionError("division by the zero jet")
        n = min(self._n, other._n)
        if n < v:
            raise JetError("divisor valuation exceeds the working order")
        for k in range(min(v, self._n)):
            if not _tz(self._c[k]):
                raise ExactDivisionError(
                    "dividend not divisible: low-order term below divisor valuation"
                )
        shifted_num = Jet1._raw(self._c[v : n + 1], n - v)
        shifted_den = Jet1._raw(other._c[v : n + 1], n - v)
        return shifted_num * shifted_den.reciprocal()

    def eval_poly(self, point) -> Coeff:
        """Evaluate the stored coefficients as a polynomial at an exact point."""
        p = _as_triple(point)
        acc = QZERO
        for k in range(self._n, -1, -1):
            acc = qadd(qmul(acc, p), self._c[k])
        return Coeff.from_triple(acc)

    def scale_variable(self, factor) -> "Jet1":
        """self(factor * z): coefficient k picks up factor^k."""
        f = _as_triple(factor)
        out = []
        p = QONE
        for k in range(self._n + 1):
            out.append(qmul(self._c[k], p))
            p = qmul(p, f)
        return Jet1._raw(out, self._n)

    def __eq__(self, other):
        if not isinstance(other, Jet1):
            return NotImplemented
        return self._n == other._n and self._c == other._c

    def __hash__(self):
        return hash((self._n, self._c))

    def __repr__(self):
        return f"Jet1({format_jet1(self)})"


def _pow_triple(t, e):
    acc = QONE
    while e:
        if e & 1:
            acc = qmul(acc, t)
        t = qmul(t, t)
        e >>= 1
    return acc


class Jet2:
    """A truncated series in two variables: {(i, j): coeff}, i+j <= order."""

    __slots__ = ("_d", "_n")

    def __init__(self, coeffs=None, order=DEFAULT_ORDER):
        n = int(order)
        if n < 0:
            raise JetError("order must be >= 0")
        d = {}
        if coeffs:
            for (i, j), v in coeffs.items():
                if i < 0 or j < 0:
                    raise JetError("negative exponent in Jet2")
                if i + j > n:
                    continue
                t = _as_triple(v)
                if not _tz(t):
                    d[(i, j)] = t
        self._d = d
        self._n = n

    @classmethod
    def _raw(cls, d, order):
        obj = object.__new__(cls)
        obj._d = d
        obj._n = order
        return obj

    @classmethod
    def zero(cls, order=DEFAULT_ORDER):
        return cls._raw({}, order)

    @classmethod
    def one(cls, order=DEFAULT_ORDER):
        return cls({(0, 0): 1}, order)

    @classmethod
    def monomial(cls, i, j, c=1, order=DEFAULT_ORDER):
        return cls({(i, j): c}, order)

    @classmethod
    def var_x(cls, order=DEFAULT_ORDER):
        return cls({(1, 0): 1}, order)

    @classmethod
    def var_y(cls, order=DEFAULT_ORDER):
        return cls({(0, 1): 1}, order)

    @classmethod
    def from_jet1(cls, jet: Jet1, axis: str) -> "Jet2":
        """Embed a one-variable jet along the "x" or "y" axis."""
        if axis == "x":
            d = {(k, 0): t for k, t in enumerate(jet._c) if not _tz(t)}
        elif axis == "y":
            d = {(0, k): t for k, t in enumerate(jet._c) if not _tz(t)}
        else:
            raise JetError("axis must be 'x' or 'y'")
        return cls._raw(d, jet.order)

    @property
    def order(self):
        return self._n

    def items(self):
        """Sorted (key, Coeff) pairs of the nonzero monomials."""
        return [
            ((i, j), Coeff.from_triple(t))
            for (i, j), t in sorted(self._d.items(), key=_monokey)
        ]

    def coeff(self, i, j) -> Coeff:
        if i < 0 or j < 0 or i + j > self._n:
            raise JetError(f"monomial ({i},{j}) outside jet order {self._n}")
        return Coeff.from_triple(self._d.get((i, j), QZERO))

    def is_zero(self):
        return not self._d

    def valuation(self):
        """Smallest nonzero total degree; None for the zero jet."""
        if not self._d:
            return None
        return min(i + j for (i, j) in self._d)

    def degree(self):
        if not self._d:
            return None
        return max(i + j for (i, j) in self._d)

    def truncate(self, order):
        if order > self._n:
            raise JetError("truncate cannot raise the order")
        d = {k: t for k, t in self._d.items() if k[0] + k[1] <= order}
        return Jet2._raw(d, order)

    def with_order(self, order):
        """Reinterpret at a different order (see :meth:`Jet1.with_order`)."""
        if order <= self._n:
            return self.truncate(order)
        return Jet2._raw(dict(self._d), order)

    def homogeneous_part(self, deg) -> "Jet2":
        d = {k: t for k, t in self._d.items() if k[0] + k[1] == deg}
        return Jet2._raw(d, self._n)

    def _bin(self, other, op):
        n = min(self._n, other._n)
        d = {}
        for k, t in self._d.items():
            if k[0] + k[1] <= n:
                d[k] = t
        for k, u in other._d.items():
            if k[0] + k[1] > n:
                continue
            cur = d.get(k)
            r = op(cur, u) if cur is not None else op(QZERO, u)
            if _tz(r):
                d.pop(k, None)
            else:
                d[k] = r
        return Jet2._raw(d, n)

    def __add__(self, other):
        if isinstance(other, (int, Coeff)) or type(other).__name__ == "Fraction":
            other = Jet2({(0, 0): other}, self._n)
        if not isinstance(other, Jet2):
            return NotImplemented
        return self._bin(other, qadd)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Coeff)) or type(other).__name__ == "Fraction":
            other = Jet2({(0, 0): other}, self._n)
        if not isinstance(other, Jet2):
            return NotImplemented
        return self._bin(other, qsub)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Jet2._raw({k: qneg(t) for k, t in self._d.items()}, self._n)

    def __mul__(self, other):
        if isinstance(other, Jet2):
            n = min(self._n, other._n)
            return Jet2._raw(jet2_mul(self._d, other._d, n), n)
        t = _as_triple(other)
        if _tz(t):
            return Jet2.zero(self._n)
        return Jet2._raw({k: qmul(c, t) for k, c in self._d.items()}, self._n)

    __rmul__ = __mul__

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise JetError("jet powers take a nonnegative integer exponent")
        acc = Jet2.one(self._n)
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def dx(self) -> "Jet2":
        """Partial derivative in the first variable (order drops by one)."""
        if self._n == 0:
            raise JetError("cannot differentiate an order-0 jet")
        d = {}
        for (i, j), t in self._d.items():
            if i >= 1:
                d[(i - 1, j)] = qmul(t, (i, 0, 1))
        return Jet2._raw(d, self._n - 1)

    def dy(self) -> "Jet2":
        """Partial derivative in the second variable (order drops by one)."""
        if self._n == 0:
            raise JetError("cannot differentiate an order-0 jet")
        d = {}
        for (i, j), t in self._d.items():
            if j >= 1:
                d[(i, j - 1)] = qmul(t, (j, 0, 1))
        return Jet2._raw(d, self._n - 1)

    def substitute(self, fx: "Jet2", fy: "Jet2", order=None) -> "Jet2":
        """self(fx, fy) for substitution targets vanishing at the origin.

        The result order defaults to min(self.order, fx.order, fy.order).
        Passing a larger ``order`` asserts the inputs are exact polynomial
        data (used by blow-up pullbacks, where monomial degrees grow).
        """
        if (fx.valuation() or 0) < 1 and not fx.is_zero():
            raise JetError("substitution target must vanish at the origin")
        if (fy.valuation() or 0) < 1 and not fy.is_zero():
            raise JetError("substitution target must vanish at the origin")
        if order is None:
            order = min(self._n, fx._n, fy._n)
        n = order
        # Precompute powers of fx and fy up to what monomials need.
        max_i = max((i for (i, _) in self._d), default=0)
        max_j = max((j for (_, j) in self._d), default=0)
        px = [Jet2.one(n)]
        for _ in range(max_i):
            px.append(px[-1] * fx.with_order(n))
        py = [Jet2.one(n)]
        for _ in range(max_j):
            py.append(py[-1] * fy.with_order(n))
        acc = Jet2.zero(n)
        for (i, j), t in self._d.items():
            acc = acc + px[i] * py[j] * Coeff.from_triple(t)
        return acc

    def restrict_to_axis(self, axis: str) -> Jet1:
        """The one-variable jet on an axis: "x" sets y=0, "y" sets x=0."""
        out = [QZERO] * (self._n + 1)
        if axis == "x":
            for (i, j), t in self._d.items():
                if j == 0:
                    out[i] = t
        elif axis == "y":
            for (i, j), t in self._d.items():
                if i == 0:
                    out[j] = t
        else:
            raise JetError("axis must be 'x' or 'y'")
        return Jet1._raw(out, self._n)

    def swap_variables(self) -> "Jet2":
        return Jet2._raw({(j, i): t for (i, j), t in self._d.items()}, self._n)

    def div(self, other: "Jet2") -> "Jet2":
        """Division, unit mode or exact polynomial mode (see :meth:`Jet1.div`)."""
        if not isinstance(other, Jet2):
            raise JetError("div expects a Jet2")
        c0 = other._d.get((0, 0))
        if c0 is not None:
            n = min(self._n, other._n)
            return self.truncate(n) * _jet2_reciprocal(other.truncate(n))
        v = other.valuation()
        if v is None:
            raise ZeroDivisionError("division by the zero jet")
        n = min(self._n, other._n)
        if n < v:
            raise JetError("divisor valuation exceeds the working order")
        return _jet2_exact_div(self.truncate(n), other.truncate(n), v)

    def __eq__(self, other):
        if not isinstance(other, Jet2):
            return NotImplemented
        return self._n == other._n and self._d == other._d

    def __hash__(self):
        return hash((self._n, tuple(sorted(self._d.items()))))

    def __repr__(self):
        return f"Jet2({format_jet2(self)})"


def _monokey(item):
    (i, j), _ = item
    return (i + j, -i)


def _jet2_reciprocal(b: Jet2) -> Jet2:
    n = b.order
    c0 = b._d.get((0, 0))
    if c0 is None:
        raise JetError("reciprocal needs a unit (nonzero constant term)")
    inv0 = qinv(c0)
    rest = Jet2._raw({k: t for k, t in b._d.items() if k != (0, 0)}, n)
    # 1/(c0 + r) = (1/c0) * sum_k (-r/c0)^k, degree-filtered by valuation.
    term = Jet2.one(n)
    acc = Jet2.one(n)
    step = rest * Coeff.from_triple(qneg(inv0))
    v = step.valuation() or (n + 1)
    k = 1
    while k * v <= n:
        term = term * step
        acc = acc + term
        k += 1
    return acc * Coeff.from_triple(inv0)


def _gl_lead(d):
    """Graded-lex maximal monomial (degree first, then x-exponent)."""
    return max(d, key=lambda k: (k[0] + k[1], k[0]))


def _jet2_exact_div(a: Jet2, b: Jet2, v: int) -> Jet2:
    n = a.order
    if a.is_zero():
        return Jet2.zero(n - v)
    r = dict(a._d)
    bl = _gl_lead(b._d)
    blc = b._d[bl]
    q = {}
    while r:
        m = _gl_lead(r)
        if m[0] < bl[0] or m[1] < bl[1]:
            raise ExactDivisionError(
                f"nonzero remainder in exact division (stuck at x^{m[0]}*y^{m[1]})"
            )
        qk = (m[0] - bl[0], m[1] - bl[1])
        qc = qdiv(r[m], blc)
        q[qk] = qadd(q.get(qk, QZERO), qc)
        for bk, bc in b._d.items():
            kk = (qk[0] + bk[0], qk[1] + bk[1])
            cur = qsub(r.get(kk, QZERO), qmul(qc, bc))
            if _tz(cur):
                r.pop(kk, None)
            else:
                r[kk] = cur
    q = {k: t for k, t in q.items() if not _tz(t)}
    return Jet2._raw(q, n - v)


def _fmt_term(c: Coeff, mono: str) -> str:
    cs = format_coeff(c)
    if not mono:
        return cs
    if cs == "1":
        return mono
    if cs == "-1":
        return f"-{mono}"
    if "+" in cs[1:] or "-" in cs[1:]:
        return f"({cs})*{mono}"
    return f"{cs}*{mono}"


def _join_terms(terms):
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def format_jet1(jet: Jet1, var: str = "z") -> str:
    terms = []
    for k in range(jet.order + 1):
        c = jet.coeff(k)
        if c.is_zero():
            continue
        if k == 0:
            mono = ""
        elif k == 1:
            mono = var
        else:
            mono = f"{var}^{k}"
        terms.append(_fmt_term(c, mono))
    return _join_terms(terms)


def format_jet2(jet: Jet2, vars=("x", "y")) -> str:
    vx, vy = vars
    terms = []
    for (i, j), c in jet.items():
        parts = []
        if i == 1:
            parts.append(vx)
        elif i > 1:
            parts.append(f"{vx}^{i}")
        if j == 1:
            parts.append(vy)
        elif j > 1:
            parts.append(f"{vy}^{j}")
        terms.append(_fmt_term(c, "*".join(parts)))
    return _join_terms(terms)
