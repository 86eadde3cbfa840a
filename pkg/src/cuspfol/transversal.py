"""Corner germs, formal first integrals, and the transversal structure.

After the two-step reduction the foliation is regular at the corner point
where the two divisor components cross.  In the corner chart (u, v) the
u-axis lies on D2 (the first exceptional curve, self-intersection -2) and
the v-axis on D1 (the second, -1).  The transversal structure is the germ
of diffeomorphism sigma matching a point x on D2 with the point sigma(x)
on D1 that belongs to the same local leaf.

Computable exactly: a regular germ admits a formal first integral H,
solved degree by degree (constructive Frobenius); then

    sigma = (v -> H(0, v))^{-1}  composed with  (u -> H(u, 0)).

sigma does not depend on the choice of H: any other first integral is
phi(H) for a unit reparametrization phi, which cancels in the composition
(property-tested with H -> H + H^2).
"""

from __future__ import annotations

from dataclasses import dataclass

from .coeff import Coeff
from .forms import OneForm, ReductionReport, differential, wedge
from .jets import Jet1, Jet2, JetError
from .moduli import GermDiff1


@dataclass(frozen=True)
class CornerGerm:
    """A regular 1-form germ at the corner, transverse to both axes.

    ``form`` is written in the corner coordinates (u, v); the axis labels
    record which divisor component each coordinate axis lies on (u on D2,
    v on D1 under the convention of :mod:`cuspfol.forms`).
    """

    form: OneForm
    divisor_u: str = "D2"
    divisor_v: str = "D1"

    def __post_init__(self):
        a0 = self.form.a.coeff(0, 0)
        b0 = self.form.b.coeff(0, 0)
        if a0.is_zero():
            raise ValueError(
                "not a valid corner germ: the foliation is not transverse "
                f"to the {self.form.variables[0]}-axis"
            )
        if b0.is_zero():
            raise ValueError(
                "not a valid corner germ: the foliation is not transverse "
                f"to the {self.form.variables[1]}-axis"
            )

    @classmethod
    def from_reduction(cls, rep: ReductionReport) -> "CornerGerm":
        """The corner germ of a completed cusp reduction.

        The reduction's second chart is (xi, t) with D1 = {t=0} and
        D2 = {xi=0}; the corner coordinates are therefore u = t (along D2)
        and v = xi (along D1), so the two jet slots swap places.
        """
        w2 = rep.second_chart_form
        if w2 is None:
            raise ValueError("reduction did not reach the second blow-up")
        form = OneForm(
            w2.b.swap_variables(), w2.a.swap_variables(), ("u", "v")
        )
        return cls(form)

    @property
    def order(self) -> int:
        return self.form.order


def regular_first_integral(c: CornerGerm, order=None) -> Jet2:
    """A formal first integral H of the corner germ, exact to the jet order.

    H satisfies H(0,0) = 0 and dH ^ form = 0 (to order N-1, all that an
    order-N jet determines), normalized by H(u, 0) = u.  Each homogeneous
    degree is a triangular linear system over Q(i): writing the degree-d
    residual of H_u*B - H_v*A, the next homogeneous part of H is obtained
    by exact back-substitution against the constant terms of A and B.
    """
    w = c.form
    n = w.order if order is None else order
    if order is not None and order > w.order:
        raise JetError("requested order exceeds the corner germ's jet order")
    a = w.a.truncate(n)
    b = w.b.truncate(n)
    a0 = a.coeff(0, 0)
    b0 = b.coeff(0, 0)
    h = Jet2.zero(n)
    for d in range(0, n):
        # residual of the current partial integral, homogeneous degree d
        res = (h.dx() * b.truncate(n - 1) - h.dy() * a.truncate(n - 1)).homogeneous_part(d)
        coeffs = {}
        hk = Coeff(1) if d == 0 else Coeff(0)
        if not hk.is_zero():
            coeffs[(d + 1, 0)] = hk
        for m in range(0, d + 1):
            rm = res.coeff(d - m, m)
            hk = ((d + 1 - m) * hk * b0 + rm) / ((m + 1) * a0)
            if not hk.is_zero():
                coeffs[(d - m, m + 1)] = hk
        h = h + Jet2(coeffs, n)
    resid = wedge(differential(h, w.variables), OneForm(a, b, w.variables).truncate(n - 1))
    if not resid.is_zero():
        raise AssertionError("first integral failed the dH ^ w = 0 re-check")
    return h


def sigma_of_integral(h: Jet2) -> GermDiff1:
    """The transversal structure read off any first integral.

    With g1 = H(.,0) and g2 = H(0,.), both tangent-to-identity up to a
    unit factor, sigma = g2^{-1} o g1.  Reparametrizing H by any unit
    series phi(H) leaves the composition unchanged.
    """
    g1 = h.restrict_to_axis("x")
    g2 = h.restrict_to_axis("y")
    for g in (g1, g2):
        if not g.coeff(0).is_zero() or g.coeff(1).is_zero():
            raise ValueError("integral is not transverse-normalized on the axes")
    return GermDiff1(g2.comp_inverse().compose(g1))


def transversal_structure(c: CornerGerm, order=None) -> GermDiff1:
    """The germ sigma: (D2, corner) -> (D1, corner) matching leaf levels."""
    return sigma_of_integral(regular_first_integral(c, order))
