"""Glued models and the truncated cohomological-equation solver.

The glued surface is built from two elementary fibred models.  Each model
carries two charts; the second chart is reached by the monomial
substitutions

    model "F2":  x2 = 1/y1,  y2 = y1^2 x1     (x1^i y1^j -> x2^(2i-j) y2^i)
    model "F1":  x4 = 1/y3,  y4 = y3 x3       (x3^i y3^j -> x4^(i-j)  y4^i)

so a function germ extends to the whole model exactly when every exponent
image is nonnegative; those support rules drive every globality check
here.  The models are glued along their first charts by a cocycle

    (x1, y1) -> (x1*A(x1,y1) + sigma(y1), sigma(y1)),   A(0,0) != 0,

whose distinguished one-parameter shape A = 1 + alpha*y1 is produced by
``build_cocycle``.  Automorphisms of the models have the form
(x*A(x,y), h(y)) with h a homography fixing 0; on the "F1" side the
diagonal {x3 = y3} is part of the structure and pins A by
A(x,x) = h(x)/x, while the "F2" side keeps a free homothety scale.

The deformation theory of the glued foliation is probed through the
cohomological equation: a vertical field B*x1*d/dx1 on the overlap is a
coboundary when it splits as (transported X1) - X2 with X1, X2 vertical
fields holomorphic on their models.  Writing X2 = A2*x1*d/dx1 and
X1 = (x3-y3)*T*x3*d/dx3 (the diagonal factor is forced: without it the
transported coefficient is not holomorphic on the second chart), the
split becomes one finite exact linear system per jet order.  The single
obstruction is the y1-coefficient: the system's corank is 1 and the class
of y1*x1*d/dx1 generates it, which is this module's operational form of
"the deformation space is one-dimensional".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .coeff import Coeff
from .jets import DEFAULT_ORDER, Jet1, Jet2
from .linalg import matrix_rank, solve
from .moduli import GermDiff1, Homography


class Model(Enum):
    """The two elementary fibred models."""

    F1 = "F1"
    F2 = "F2"


def _as_model(m) -> Model:
    if isinstance(m, Model):
        return m
    return Model(str(m))


@dataclass(frozen=True)
class ModelTransition:
    """Monomial exponent map from a model's first chart to its second."""

    model: Model

    def exponent_image(self, i, j):
        if self.model is Model.F2:
            return (2 * i - j, i)
        return (i - j, i)

    def is_global_monomial(self, i, j) -> bool:
        return self.exponent_image(i, j)[0] >= 0


@dataclass(frozen=True)
class GlobalityReport:
    is_global: bool
    violations: list

    def __bool__(self):
        return self.is_global


def globality_check(f: Jet2, model) -> GlobalityReport:
    """Which monomials of f fail to extend to the model's second chart."""
    tr = ModelTransition(_as_model(model))
    bad = [key for key, _ in f.items() if not tr.is_global_monomial(*key)]
    return GlobalityReport(not bad, bad)


@dataclass(frozen=True)
class VectorFieldJet:
    """The vertical field coefficient * x * d/dx in a named chart."""

    coefficient: Jet2
    chart: str = "x1"

    def is_zero(self) -> bool:
        return self.coefficient.is_zero()


@dataclass(frozen=True)
class GluingCocycle:
    """(x1, y1) -> (x1*A(x1,y1) + sigma(y1), sigma(y1)) with A(0,0) != 0."""

    sigma: GermDiff1
    A: Jet2

    def __post_init__(self):
        if self.A.coeff(0, 0).is_zero():
            raise ValueError("cocycle needs A(0,0) != 0")

    @property
    def order(self):
        return min(self.sigma.jet.order, self.A.order)

    def as_map(self, order=None):
        n = self.order if order is None else order
        s2 = Jet2.from_jet1(self.sigma.jet.truncate(n), "y")
        first = Jet2.var_x(n) * self.A.truncate(n) + s2
        return first, s2


def build_cocycle(sigma, alpha) -> GluingCocycle:
    """The one-parameter gluing shape A = 1 + alpha*y1."""
    if isinstance(sigma, Jet1):
        sigma = GermDiff1(sigma)
    n = sigma.jet.order
    a = alpha if isinstance(alpha, Coeff) else Coeff(alpha)
    return GluingCocycle(sigma, Jet2({(0, 0): 1, (0, 1): a}, n))


# ---------------------------------------------------------------------------
# model automorphisms


@dataclass(frozen=True)
class ModelAutomorphism:
    """(x, y) -> (x*A(x,y), h(y)) holomorphic and invertible on the model."""

    model: Model
    h: Homography
    A: Jet2

    def as_map(self, order=None):
        n = self.A.order if order is None else order
        return (
            Jet2.var_x(n) * self.A.truncate(n),
            Jet2.from_jet1(self.h.to_jet(n), "y"),
        )


def _homography_params(h: Homography):
    # h(z) = lam*z/(1+mu*z) rewritten as z/(a+b*z)
    a = Coeff(1) / h.lam
    b = h.mu / h.lam
    return a, b


def model_automorphism(h: Homography, model, leading=None, order=DEFAULT_ORDER) -> ModelAutomorphism:
    """The automorphism of the model induced by a homography of the base.

    On "F1" the coefficient is (a+b*y)/((a+b*x)^2), pinned by the diagonal
    condition A(x,x) = h(x)/x.  On "F2" it is c*(a+b*y)^2 where the scale c
    is free (the homothety direction); ``leading`` selects A(0,0), default
    1/h'(0).  Regularity on the second chart is asserted by transporting
    the second component through the model transition.
    """
    model = _as_model(model)
    a, b = _homography_params(h)
    lin_y = Jet2({(0, 0): a, (0, 1): b}, order)  # a + b*y
    lin_x = Jet2({(0, 0): a, (1, 0): b}, order)  # a + b*x
    if model is Model.F1:
        if leading is not None:
            raise ValueError(
                "the diagonal condition pins the scale on the first model"
            )
        A = lin_y.div(lin_x * lin_x)
        phi = ModelAutomorphism(model, h, A)
        _check_f1_regularity(phi, a, b)
        return phi
    lead = a if leading is None else (
        leading if isinstance(leading, Coeff) else Coeff(leading)
    )
    if lead.is_zero():
        raise ValueError("leading coefficient must be nonzero")
    scale = lead / (a * a)
    A = lin_y * lin_y * scale
    phi = ModelAutomorphism(model, h, A)
    _check_f2_regularity(phi)
    return phi


def _check_f1_regularity(phi: ModelAutomorphism, a, b):
    n = phi.A.order
    x = Jet2.var_x(n)
    hy = Jet2.from_jet1(phi.h.to_jet(n), "y")
    # second-chart second component: h(y) * x * A(x,y) must be global
    rep = globality_check(hy * x * phi.A, Model.F1)
    if not rep:
        raise AssertionError(f"first-model automorphism not global: {rep.violations}")
    # diagonal condition A(x,x) = h(x)/x, i.e. x*A(x,x) = h(x)
    diag = (x * phi.A.substitute(x, x)).restrict_to_axis("x")
    if diag != phi.h.to_jet(n):
        raise AssertionError("diagonal condition failed for first-model automorphism")
    # Taylor data tied to h: r = h''(0), s = -h''(0)/2
    hpp = Coeff(-2) * phi.h.lam * phi.h.mu
    if phi.A.coeff(1, 0) != hpp or phi.A.coeff(0, 1) != -(hpp / Coeff(2)):
        raise AssertionError("first-model automorphism Taylor data mismatch")


def _check_f2_regularity(phi: ModelAutomorphism):
    n = phi.A.order
    x = Jet2.var_x(n)
    hy = Jet2.from_jet1(phi.h.to_jet(n), "y")
    rep = globality_check(hy * hy * x * phi.A, Model.F2)
    if not rep:
        raise AssertionError(f"second-model automorphism not global: {rep.violations}")
    # u = A_y(0,0) relates to h''(0)/h'(0) = -2*mu scaled by the leading term
    if phi.A.coeff(0, 1) != Coeff(2) * phi.h.mu * phi.A.coeff(0, 0):
        raise AssertionError("second-model automorphism Taylor data mismatch")


def model_homothety(eps, model, order=DEFAULT_ORDER) -> ModelAutomorphism:
    """(x, y) -> (eps*x, eps*y), an automorphism of either model."""
    e = eps if isinstance(eps, Coeff) else Coeff(eps)
    h = Homography(e)
    model = _as_model(model)
    if model is Model.F1:
        return model_automorphism(h, model, order=order)
    return model_automorphism(h, model, leading=e, order=order)


def cocycle_compose_check(
    phi1: ModelAutomorphism, c: GluingCocycle, phi2: ModelAutomorphism, order=None
) -> GluingCocycle:
    """Exact composition phi1 o c o phi2, renormalized to cocycle shape.

    phi2 must be an automorphism of the second model (source side), phi1 of
    the first (target side).  Raises if the composed second component
    depends on the first variable - that means the inputs were not model
    automorphisms.
    """
    if phi2.model is not Model.F2 or phi1.model is not Model.F1:
        raise ValueError("compose expects a second-model phi2 and first-model phi1")
    n = min(c.order, phi1.A.order, phi2.A.order) if order is None else order
    f2x, f2y = phi2.as_map(n)
    cx, cy = c.as_map(n)
    f1x, f1y = phi1.as_map(n)
    mid_x = cx.substitute(f2x, f2y)
    mid_y = cy.substitute(f2x, f2y)
    out_x = f1x.substitute(mid_x, mid_y)
    out_y = f1y.substitute(mid_x, mid_y)
    stray = [key for key, _ in out_y.items() if key[0] != 0]
    if stray:
        raise ValueError(
            f"composed map is not of cocycle shape (second component touches {stray})"
        )
    sigma_new = GermDiff1(out_y.restrict_to_axis("y"))
    a_new = (out_x - out_y).div(Jet2.var_x(n))
    return GluingCocycle(sigma_new, a_new)


# ---------------------------------------------------------------------------
# the cohomological equation


def _f2_admissible(order):
    out = []
    for d in range(order + 1):
        for i in range(d, -1, -1):
            j = d - i
            if 2 * i - j >= 0:
                out.append((i, j))
    return out


def _f1_tilde_admissible(order):
    out = []
    for d in range(order):
        for i in range(d, -1, -1):
            j = d - i
            if i > j:
                out.append((i, j))
    return out


def _row_keys(order):
    return [(p, d - p) for d in range(order + 1) for p in range(d, -1, -1)]


def _radial_jacobian(a0: Jet2) -> Jet2:
    """A0 + x*dA0/dx, the x-derivative of x*A0, computed coefficient-wise."""
    return Jet2(
        {key: c * Coeff(key[0] + 1) for key, c in a0.items()}, a0.order
    )


def _coboundary_columns(sigma: GermDiff1, a0: Jet2, order):
    """Column functions of the split equation, indexed by unknown labels.

    The transported first-model field (x3-y3)*T*x3*d/dx3 contributes, for
    each admissible monomial of T, the function
    (A0*(x1*A0+sigma)/J) * (x3 o psi)^i * (y3 o psi)^j with J = A0+x1*dA0/dx1;
    a second-model monomial (i,j) of A2 contributes -x1^i y1^j.
    """
    n = order
    x = Jet2.var_x(n)
    s2 = Jet2.from_jet1(sigma.jet.truncate(n), "y")
    a0 = a0.truncate(n)
    x3 = x * a0 + s2
    factor = (a0 * x3).div(_radial_jacobian(a0))
    cols = []
    labels = []
    xpow = [Jet2.one(n)]
    ypow = [Jet2.one(n)]
    for _ in range(n):
        xpow.append(xpow[-1] * x3)
        ypow.append(ypow[-1] * s2)
    for (i, j) in _f1_tilde_admissible(n):
        cols.append(factor * xpow[i] * ypow[j])
        labels.append(("T", i, j))
    for (i, j) in _f2_admissible(n):
        cols.append(Jet2.monomial(i, j, -1, n))
        labels.append(("A2", i, j))
    return cols, labels


@dataclass
class CoboundaryResult:
    """Outcome of one truncated split of the cohomological equation."""

    feasible: bool
    order: int
    field_first: VectorFieldJet | None = None
    field_second: VectorFieldJet | None = None
    tilde: Jet2 | None = None
    certificate: list | None = None
    certificate_checked: bool | None = None

    def __bool__(self):
        return self.feasible


def _solve_coboundary(sigma: GermDiff1, a0: Jet2, target: Jet2, order) -> CoboundaryResult:
    n = order
    cols, labels = _coboundary_columns(sigma, a0, n)
    keys = _row_keys(n)
    rows = [[col.coeff(p, q) for col in cols] for (p, q) in keys]
    rhs = [target.coeff(p, q) for (p, q) in keys]
    res = solve(rows, rhs, certificate=True)
    if not res.feasible:
        cert = [(keys[r], w) for r, w in res.certificate]
        checked = res.check_certificate(rows, rhs)
        return CoboundaryResult(False, n, certificate=cert, certificate_checked=checked)
    tilde_d = {}
    a2_d = {}
    for lab, val in zip(labels, res.solution):
        if val.is_zero():
            continue
        if lab[0] == "T":
            tilde_d[(lab[1], lab[2])] = val
        else:
            a2_d[(lab[1], lab[2])] = val
    tilde = Jet2(tilde_d, n)
    a2 = Jet2(a2_d, n)
    # re-substitute: the split must reproduce the target exactly
    x = Jet2.var_x(n)
    s2 = Jet2.from_jet1(sigma.jet.truncate(n), "y")
    x3 = x * a0.truncate(n) + s2
    fac = (a0.truncate(n) * x3).div(_radial_jacobian(a0.truncate(n)))
    lhs = fac * tilde.substitute(x3, s2) - a2
    if lhs != target.truncate(n):
        raise AssertionError("coboundary split failed re-substitution")
    a1 = (Jet2.var_x(n) - Jet2.var_y(n)) * tilde
    return CoboundaryResult(
        True,
        n,
        field_first=VectorFieldJet(a1, "x3"),
        field_second=VectorFieldJet(a2, "x1"),
        tilde=tilde,
    )


def coboundary_solve(sigma, alpha0, target: VectorFieldJet, order=None) -> CoboundaryResult:
    """Split a vertical overlap field against the one-parameter gluing.

    Solves  target = (transport of X1) - X2  at the given jet order for
    the cocycle with A = 1 + alpha0*y1.  Infeasibility comes with a
    re-checked certificate: the labeled row combination no admissible
    split can satisfy.  Infeasibility at one order persists at all higher
    orders (the lower system is a subsystem of the higher one).
    """
    if isinstance(sigma, Jet1):
        sigma = GermDiff1(sigma)
    n = min(sigma.jet.order, target.coefficient.order) if order is None else order
    a = alpha0 if isinstance(alpha0, Coeff) else Coeff(alpha0)
    a0 = Jet2({(0, 0): 1, (0, 1): a}, n)
    return _solve_coboundary(sigma, a0, target.coefficient.truncate(n), n)


def ks_generator(order=DEFAULT_ORDER) -> VectorFieldJet:
    """The distinguished deformation direction x1*y1*d/dx1."""
    return VectorFieldJet(Jet2.var_y(order), "x1")


@dataclass(frozen=True)
class CohomologyReport:
    order: int
    rows: int
    rank: int
    corank: int
    generator_independent: bool

    @property
    def dimension(self):
        return self.corank


def cohomology_dimension(sigma, alpha0, order) -> CohomologyReport:
    """Corank of the split system = dimension of the deformation space.

    Checks both that the corank is the stated 1 and that the class of the
    distinguished direction y1 (as a right-hand side) is NOT reachable,
    i.e. it spans the quotient.
    """
    if isinstance(sigma, Jet1):
        sigma = GermDiff1(sigma)
    a = alpha0 if isinstance(alpha0, Coeff) else Coeff(alpha0)
    n = order
    a0 = Jet2({(0, 0): 1, (0, 1): a}, n)
    cols, _ = _coboundary_columns(sigma, a0, n)
    keys = _row_keys(n)
    rows = [[col.coeff(p, q) for col in cols] for (p, q) in keys]
    rank = matrix_rank(rows)
    corank = len(keys) - rank
    gen = [Coeff(1) if (p, q) == (0, 1) else Coeff(0) for (p, q) in keys]
    aug = [row + [g] for row, g in zip(rows, gen)]
    aug_rank = matrix_rank(aug)
    return CohomologyReport(n, len(keys), rank, corank, aug_rank == rank + 1)


# ---------------------------------------------------------------------------
# unfoldings


def _series_inverse(units: list[Coeff]) -> list[Coeff]:
    """Multiplicative inverse of a truncated parameter series (unit term)."""
    if units[0].is_zero():
        raise ValueError("series has no inverse: constant term vanishes")
    inv = [Coeff(1) / units[0]]
    for k in range(1, len(units)):
        acc = Coeff(0)
        for m in range(1, k + 1):
            if m < len(units):
                acc = acc + units[m] * inv[k - m]
        inv.append(-(acc / units[0]))
    return inv


def _normalize_family(family: list[Jet2]) -> list[Jet2]:
    """Rescale A_eps so A_eps(0,0) = 1 identically in the parameter.

    The rescale is the parametrized homothety x -> c(eps)*x with
    c = 1/A_eps(0,0): each monomial x^i y^j picks up c^(i+1), computed as
    an exact truncated series in the parameter.
    """
    units = [a.coeff(0, 0) for a in family]
    c = _series_inverse(units)
    k_max = len(family)
    n = min(a.order for a in family)
    powers = {0: [Coeff(1)] + [Coeff(0)] * (k_max - 1)}

    def c_power(i):
        if i not in powers:
            prev = c_power(i - 1)
            cur = []
            for k in range(k_max):
                acc = Coeff(0)
                for m in range(k + 1):
                    acc = acc + prev[m] * c[k - m]
                cur.append(acc)
            powers[i] = cur
        return powers[i]

    out = [dict() for _ in range(k_max)]
    seen = set()
    for a in family:
        for key, _ in a.items():
            seen.add(key)
    for (i, j) in seen:
        series = [a.coeff(i, j) for a in family]
        cp = c_power(i + 1)
        for k in range(k_max):
            acc = Coeff(0)
            for m in range(k + 1):
                acc = acc + series[m] * cp[k - m]
            if not acc.is_zero():
                out[k][(i, j)] = acc
    return [Jet2(d, n) for d in out]


@dataclass
class UnfoldingReport:
    trivial: bool
    hypothesis_holds: bool
    order: int
    nontrivial_direction: VectorFieldJet | None = None
    solutions: list = field(default_factory=list)
    certificates: list = field(default_factory=list)

    def __bool__(self):
        return self.trivial


def unfolding_triviality_check(sigma, family: list[Jet2], order=None) -> UnfoldingReport:
    """Decide per-order triviality of a parametrized gluing family.

    ``family`` lists the parameter-power coefficients of A_eps.  The family
    is first rescaled so A_eps(0,0) = 1 (a parametrized homothety, always
    available); the triviality criterion is that the y1-coefficient of the
    rescaled family is parameter-independent.  When it holds, each
    parameter power is split by the cohomological-equation solver against
    the base cocycle and the solutions are returned; a failure of the
    criterion reports the distinguished direction as the obstruction.
    Each split certifies triviality to first order in its parameter power;
    the full conjugacy is the (not assembled) composition of their flows.
    """
    if isinstance(sigma, Jet1):
        sigma = GermDiff1(sigma)
    if not family:
        raise ValueError("empty family")
    if family[0].coeff(0, 0).is_zero():
        raise ValueError("family base needs A(0,0) != 0")
    n = min(sigma.jet.order, min(a.order for a in family)) if order is None else order
    norm = _normalize_family([a.truncate(n) for a in family])
    bad = [k for k in range(1, len(norm)) if not norm[k].coeff(0, 1).is_zero()]
    if bad:
        k = bad[0]
        return UnfoldingReport(
            False,
            False,
            n,
            nontrivial_direction=VectorFieldJet(
                Jet2.monomial(0, 1, norm[k].coeff(0, 1), n), "x1"
            ),
        )
    base = norm[0]
    jac = _radial_jacobian(base)
    solutions = []
    certificates = []
    ok = True
    for k in range(1, len(norm)):
        if norm[k].is_zero():
            continue
        target = norm[k].div(jac)
        res = _solve_coboundary(sigma, base, target, n)
        if res.feasible:
            solutions.append((k, res))
        else:
            ok = False
            certificates.append((k, res.certificate))
    return UnfoldingReport(ok, True, n, solutions=solutions, certificates=certificates)
