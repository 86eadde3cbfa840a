"""Exact Gaussian-rational scalars.

``Coeff`` wraps the kernel's normalized integer triple ``(a, b, d)`` —
meaning ``(a + b*i)/d`` — behind an immutable value type whose real and
imaginary parts are exposed as ``fractions.Fraction``.  No floats anywhere.
"""

from __future__ import annotations

from fractions import Fraction

from ._backend import QONE, QZERO, qadd, qdiv, qinv, qmul, qneg, qnorm, qsub


def _to_triple(re, im=0):
    """Build a normalized triple from int/Fraction real and imaginary parts."""
    fr = Fraction(re)
    fi = Fraction(im)
    d = fr.denominator * fi.denominator
    return qnorm(fr.numerator * fi.denominator, fi.numerator * fr.denominator, d)


class Coeff:
    """An element of Q(i), immutable and hashable."""

    __slots__ = ("_t",)

    def __init__(self, re=0, im=0):
        if isinstance(re, Coeff):
            t = re._t
            if im:
                t = qadd(t, _to_triple(0, im))
            object.__setattr__(self, "_t", t)
        else:
            object.__setattr__(self, "_t", _to_triple(re, im))

    @classmethod
    def from_triple(cls, t) -> "Coeff":
        obj = object.__new__(cls)
        object.__setattr__(obj, "_t", t)
        return obj

    @property
    def triple(self):
        return self._t

    @property
    def re(self) -> Fraction:
        a, _, d = self._t
        return Fraction(a, d)

    @property
    def im(self) -> Fraction:
        _, b, d = self._t
        return Fraction(b, d)

    def __setattr__(self, name, value):
        raise AttributeError("Coeff is immutable")

    def is_zero(self) -> bool:
        a, b, _ = self._t
        return a == 0 and b == 0

    def is_rational(self) -> bool:
        return self._t[1] == 0

    def conj(self) -> "Coeff":
        a, b, d = self._t
        return Coeff.from_triple((a, -b, d))

    def _coerce(self, other):
        if isinstance(other, Coeff):
            return other._t
        if isinstance(other, (int, Fraction)):
            return _to_triple(other)
        return None

    def __add__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        return Coeff.from_triple(qadd(self._t, t))

    __radd__ = __add__

    def __sub__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        return Coeff.from_triple(qsub(self._t, t))

    def __rsub__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        return Coeff.from_triple(qsub(t, self._t))

    def __mul__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        return Coeff.from_triple(qmul(self._t, t))

    __rmul__ = __mul__

    def __truediv__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        return Coeff.from_triple(qdiv(self._t, t))

    def __rtruediv__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        return Coeff.from_triple(qdiv(t, self._t))

    def __neg__(self):
        return Coeff.from_triple(qneg(self._t))

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return Coeff.from_triple(qinv(self._t)) ** (-n)
        acc = QONE
        base = self._t
        while n:
            if n & 1:
                acc = qmul(acc, base)
            base = qmul(base, base)
            n >>= 1
        return Coeff.from_triple(acc)

    def __eq__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        return self._t == t

    def __hash__(self):
        return hash(self._t)

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"Coeff({format_coeff(self)})"

    def __str__(self):
        return format_coeff(self)


ZERO = Coeff.from_triple(QZERO)
ONE = Coeff.from_triple(QONE)
I = Coeff.from_triple((0, 1, 1))


def _fmt_frac(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def format_coeff(c: Coeff) -> str:
    """Canonical text form, re-parseable by the expression parser.

    Pure reals print as ``p`` or ``p/q``; pure imaginaries as ``i``, ``-i`` or
    ``p/q*i``; mixed values as ``re+im*i`` / ``re-im*i`` with the imaginary
    magnitude printed unsigned after the sign.
    """
    re, im = c.re, c.im
    if im == 0:
        return _fmt_frac(re)
    if im == 1:
        im_s = "i"
    elif im == -1:
        im_s = "-i"
    else:
        im_s = f"{_fmt_frac(im)}*i"
    if re == 0:
        return im_s
    if im_s.startswith("-"):
        return f"{_fmt_frac(re)}-{im_s[1:]}"
    return f"{_fmt_frac(re)}+{im_s}"
