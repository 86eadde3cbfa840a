"""Germs of diffeomorphisms of (C, 0), Schwarzians, and moduli decisions.

The transversal-structure germ sigma of a cusp-type foliation is classified,
up to the relevant equivalences, by its Schwarzian derivative modulo a C*
action, together with one canonically chosen constant.  This module carries
the scalar side of that story:

- Schwarzian derivative of a jet germ (exact, order drops by 3).
- The C* action  (eps . f)_k = eps^(k+2) f_k  and the exact decision whether
  two jets lie on the same orbit, with a Q(i) witness when one exists and a
  defining polynomial when the witness lives in an extension field.
- Homographies z -> lam*z/(1 + mu*z) as exact first-class values.
- The search for homographic symmetries of a jet by exact elimination.
- Normal pairs (sigma, alpha) and their equivalence via canonicalization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, gcd

from .coeff import Coeff, format_coeff
from .gaussint import UNITS, gi_divisors, nth_roots_in_qi
from .jets import DEFAULT_ORDER, Jet1, JetError, format_jet1


@dataclass(frozen=True)
class GermDiff1:
    """An invertible germ of (C,0): a jet with f(0)=0, f'(0)!=0."""

    jet: Jet1

    def __post_init__(self):
        if not self.jet.coeff(0).is_zero():
            raise JetError("germ must fix the origin")
        if self.jet.coeff(1).is_zero():
            raise JetError("germ must have invertible linear part")

    @classmethod
    def identity(cls, order=DEFAULT_ORDER) -> "GermDiff1":
        return cls(Jet1.variable(order))

    @property
    def order(self):
        return self.jet.order

    def compose(self, other: "GermDiff1") -> "GermDiff1":
        return GermDiff1(self.jet.compose(other.jet))

    def inverse(self) -> "GermDiff1":
        return GermDiff1(self.jet.comp_inverse())

    def derivative_at_zero(self) -> Coeff:
        return self.jet.coeff(1)


def _as_germ_jet(s) -> Jet1:
    if isinstance(s, GermDiff1):
        return s.jet
    if isinstance(s, Jet1):
        return s
    raise TypeError("expected a GermDiff1 or Jet1")


@dataclass(frozen=True)
class Homography:
    """The Moebius germ z -> lam*z / (1 + mu*z), an exact value."""

    lam: Coeff
    mu: Coeff = Coeff(0)

    def __post_init__(self):
        lam = self.lam if isinstance(self.lam, Coeff) else Coeff(self.lam)
        mu = self.mu if isinstance(self.mu, Coeff) else Coeff(self.mu)
        if lam.is_zero():
            raise ValueError("homography needs lam != 0")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", mu)

    @classmethod
    def identity(cls) -> "Homography":
        return cls(Coeff(1), Coeff(0))

    def is_identity(self) -> bool:
        return self.lam == 1 and self.mu.is_zero()

    def to_jet(self, order=DEFAULT_ORDER) -> Jet1:
        # lam*z * sum_k (-mu z)^k
        coeffs = [Coeff(0)]
        p = self.lam
        for _ in range(order):
            coeffs.append(p)
            p = p * (-self.mu)
        return Jet1(coeffs, order)

    def to_germ(self, order=DEFAULT_ORDER) -> GermDiff1:
        return GermDiff1(self.to_jet(order))

    def compose(self, other: "Homography") -> "Homography":
        """self after other: (self.compose(other))(z) = self(other(z))."""
        return Homography(
            self.lam * other.lam, other.mu + self.mu * other.lam
        )

    def inverse(self) -> "Homography":
        return Homography(1 / self.lam, -self.mu / self.lam)

    def evaluate(self, z: Coeff) -> Coeff:
        den = 1 + self.mu * z
        if den.is_zero():
            raise ZeroDivisionError("pole of the homography")
        return self.lam * z / den

    @classmethod
    def fit_from_jet(cls, jet: Jet1) -> "Homography":
        """The homography matching the 2-jet: lam = f'(0), mu = -f''(0)/(2f'(0))."""
        c1 = jet.coeff(1)
        if c1.is_zero():
            raise JetError("cannot fit a homography to a singular germ")
        return cls(c1, -jet.coeff(2) / c1)


def schwarzian(s, order=None) -> Jet1:
    """Schwarzian derivative S(f) = f'''/f' - (3/2)(f''/f')^2 as a jet.

    Input of order N yields output of order N-3.  Vanishes identically on
    homographies, and obeys S(f o g) = (S(f) o g)*(g')^2 + S(g).
    """
    f = _as_germ_jet(s)
    if order is not None:
        f = f.truncate(order)
    if f.order < 3:
        raise JetError("schwarzian needs jet order >= 3")
    if f.coeff(1).is_zero():
        raise JetError("schwarzian needs an invertible germ (f'(0) != 0)")
    n = f.order
    d1 = f.derivative()
    d2 = d1.derivative()
    d3 = d2.derivative()
    lead = d3.div(d1.truncate(n - 3))
    ratio = d2.div(d1.truncate(n - 2))
    return lead - (ratio * ratio).truncate(n - 3) * (Coeff(3) / 2)


def cstar_apply(f: Jet1, eps) -> Jet1:
    """The C* action on moduli jets: coefficient k scales by eps^(k+2)."""
    e = eps if isinstance(eps, Coeff) else Coeff(eps)
    if e.is_zero():
        raise ValueError("C* action needs eps != 0")
    out = []
    p = e * e  # eps^(k+2) for k = 0
    for k in range(f.order + 1):
        out.append(f.coeff(k) * p)
        p = p * e
    return Jet1(out, f.order)


@dataclass
class CStarVerdict:
    equivalent: bool
    eps: Coeff | None = None
    eps_candidates: list[Coeff] = field(default_factory=list)
    constraints: list[str] = field(default_factory=list)
    defining_poly: tuple[int, Coeff] | None = None  # (g, rho): eps^g = rho
    reason: str = ""

    def __bool__(self):
        return self.equivalent


def cstar_equivalent(f0: Jet1, f1: Jet1) -> CStarVerdict:
    """Decide f0 = eps . f1 for some eps in C*, i.e. f0_k = eps^(k+2) f1_k.

    The decision over C is exact: one Bezout combination rho of the
    coefficient ratios must reproduce every ratio, which encodes all integer
    relations among the exponents k+2.  A Q(i) witness is extracted by
    Gaussian-prime root extraction when one exists; otherwise the verdict is
    "equivalent over C" with the defining polynomial eps^g = rho.
    """
    n = min(f0.order, f1.order)
    support0 = [k for k in range(n + 1) if not f0.coeff(k).is_zero()]
    support1 = [k for k in range(n + 1) if not f1.coeff(k).is_zero()]
    if support0 != support1:
        return CStarVerdict(
            False,
            reason="support mismatch: the action never creates or kills coefficients",
        )
    if not support0:
        return CStarVerdict(
            True, eps=Coeff(1), constraints=["any eps != 0"], reason="both zero"
        )
    exps = [k + 2 for k in support0]
    ratios = [f0.coeff(k) / f1.coeff(k) for k in support0]
    g = 0
    for m in exps:
        g = gcd(g, m)
    # Bezout multipliers with sum(u_k * m_k) == g.
    us = [0] * len(exps)
    cur_g, us[0] = exps[0], 1
    for idx in range(1, len(exps)):
        new_g, x, y = _ext_gcd(cur_g, exps[idx])
        for j in range(idx):
            us[j] *= x
        us[idx] = y
        cur_g = new_g
    assert cur_g == g
    rho = Coeff(1)
    for u, r in zip(us, ratios):
        rho = rho * r ** u
    constraints = [f"eps^{g} = {format_coeff(rho)}"]
    for m, r in zip(exps, ratios):
        if rho ** (m // g) != r:
            return CStarVerdict(
                False,
                constraints=constraints
                + [f"violated: eps^{m} = {format_coeff(r)}"],
                reason="incompatible coefficient ratios",
            )
    roots = nth_roots_in_qi(rho, g)
    if roots:
        eps = roots[0]
        check = cstar_apply(f1.truncate(n), eps)
        assert check == f0.truncate(n), "internal witness verification failed"
        return CStarVerdict(
            True,
            eps=eps,
            eps_candidates=roots,
            constraints=constraints,
            reason="witness in Q(i)",
        )
    return CStarVerdict(
        True,
        eps=None,
        constraints=constraints,
        defining_poly=(g, rho),
        reason="equivalent over C; witness lies in an extension field",
    )


def _ext_gcd(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


# --- homographic symmetries -------------------------------------------------


def _poly_trim(p: list[Coeff]) -> list[Coeff]:
    while p and p[-1].is_zero():
        p.pop()
    return p


def _poly_divmod(a: list[Coeff], b: list[Coeff]):
    a = list(a)
    q = [Coeff(0)] * max(0, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    while len(a) >= len(b) and _poly_trim(a):
        if len(a) < len(b):
            break
        c = a[-1] * inv
        k = len(a) - len(b)
        q[k] = c
        for j in range(len(b)):
            a[k + j] = a[k + j] - c * b[j]
        a.pop()
    return q, _poly_trim(a)


def _poly_gcd(a: list[Coeff], b: list[Coeff]) -> list[Coeff]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if a:
        inv = 1 / a[-1]
        a = [c * inv for c in a]
    return a


def _poly_eval(p: list[Coeff], x: Coeff) -> Coeff:
    acc = Coeff(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _clear_denominators(p: list[Coeff]) -> list[tuple[int, int]]:
    from math import lcm

    denom = 1
    for c in p:
        denom = lcm(denom, c.triple[2])
    out = []
    for c in p:
        a, b, d = c.triple
        f = denom // d
        out.append((a * f, b * f))
    return out


def _poly_roots_qi(p: list[Coeff]) -> list[Coeff]:
    """All Q(i) roots of a nonzero polynomial, by exact divisor enumeration."""
    p = _poly_trim(list(p))
    if not p:
        raise ValueError("zero polynomial has every root")
    roots = []
    # Factor out mu = 0 roots.
    k = 0
    while k < len(p) and p[k].is_zero():
        k += 1
    if k:
        roots.append(Coeff(0))
        p = p[k:]
    if len(p) <= 1:
        return roots
    if len(p) == 2:
        roots.append(-p[0] / p[1])
        return roots
    zi = _clear_denominators(p)
    lead = zi[-1]
    const = zi[0]
    cands = set()
    for s in gi_divisors(const):
        for t in gi_divisors(lead):
            base = Coeff(s[0], s[1]) / Coeff(t[0], t[1])
            for u in UNITS:
                cands.add(u * base)
    for cand in cands:
        if _poly_eval(p, cand).is_zero():
            roots.append(cand)
    return roots


@dataclass
class SymmetryReport:
    infinite: bool
    lambda_order: int | None = None  # symbolic constraint lam^lambda_order = 1
    candidates: list[Homography] = field(default_factory=list)
    mu_polynomials: dict[str, list[Coeff]] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)


def homographic_symmetries(f: Jet1) -> SymmetryReport:
    """All homographies h with (f o h) * (h')^2 = f, to the jet's order.

    For f = 0 the group is infinite (such f is the Schwarzian of a
    homography) and the report says so.  Otherwise, writing k0 for the
    lowest nonzero index, the scaling part must satisfy lam^(k0+2) = 1 —
    reported symbolically — and for each representable lam in {1,-1,i,-i}
    the shift mu is pinned by an exact polynomial system; its Q(i) roots
    are enumerated and every returned candidate is re-verified against the
    functional equation.
    """
    n = f.order
    if n < 4:
        raise JetError("symmetry search needs jet order >= 4")
    if f.is_zero():
        return SymmetryReport(
            infinite=True, notes=["f = 0: every homography is a symmetry"]
        )
    k0 = f.valuation()
    lam_order = k0 + 2
    report = SymmetryReport(infinite=False, lambda_order=lam_order)
    for lam in UNITS:
        if lam ** lam_order != 1:
            continue
        # Coefficient m of (f o h)(h')^2 - f, as a polynomial in mu:
        #   f_m (lam^(m+2) - 1) + sum_j f_(m-j) lam^(m-j+2) (-mu)^j C(m+1, j).
        polys = []
        for m in range(k0, n + 1):
            deg = m - k0
            pc = [Coeff(0)] * (deg + 1)
            pc[0] = f.coeff(m) * (lam ** (m + 2) - 1)
            for j in range(1, deg + 1):
                sign = -1 if j % 2 else 1
                pc[j] = (
                    f.coeff(m - j)
                    * lam ** (m - j + 2)
                    * Coeff(sign * comb(m + 1, j))
                )
            if _poly_trim(pc):
                polys.append(pc)
        if not polys:
            report.notes.append(
                f"lam = {format_coeff(lam)}: no constraint on mu to this order"
            )
            report.infinite = True
            continue
        g = []
        for p in polys:
            g = _poly_gcd(g, p) if g else _poly_trim(list(p))
        report.mu_polynomials[format_coeff(lam)] = list(g)
        if len(g) == 1:
            continue  # constant gcd: no common root for this lam
        for mu in _poly_roots_qi(g):
            h = Homography(lam, mu)
            if _is_symmetry(f, h):
                report.candidates.append(h)
    return report


def _is_symmetry(f: Jet1, h: Homography) -> bool:
    n = f.order
    hj = h.to_jet(n)
    lhs = f.compose(hj).truncate(n - 1) * (hj.derivative() ** 2)
    return lhs == f.truncate(n - 1)


# --- normal pairs and their equivalence -------------------------------------


def canonical_alpha(s) -> Coeff:
    """(3/2) * sigma''(0)/sigma'(0), with sigma''(0) = 2 * (z^2 coefficient)."""
    jet = _as_germ_jet(s)
    c1 = jet.coeff(1)
    if c1.is_zero():
        raise JetError("canonical_alpha needs an invertible germ")
    return 3 * jet.coeff(2) / c1


@dataclass(frozen=True)
class ModuliClass:
    """The full invariant of a transversal germ: S(sigma) and its canonical
    alpha."""

    schwarzian: Jet1
    canonical_alpha: Coeff

    @classmethod
    def of(cls, s, order=None) -> "ModuliClass":
        jet = _as_germ_jet(s)
        return cls(schwarzian(jet, order), canonical_alpha(jet))


@dataclass(frozen=True)
class NormalPair:
    """The data (sigma, alpha) selecting one glued foliation model."""

    sigma: GermDiff1
    alpha: Coeff

    def __init__(self, sigma, alpha=0):
        if isinstance(sigma, Jet1):
            sigma = GermDiff1(sigma)
        object.__setattr__(self, "sigma", sigma)
        a = alpha if isinstance(alpha, Coeff) else Coeff(alpha)
        object.__setattr__(self, "alpha", a)


def canonicalizing_homography(pair: NormalPair) -> Homography:
    """The inner homography that moves alpha to its canonical value.

    Composing sigma with h = z/(1 + mu*z), mu = -(alpha - canonical)/5,
    produces an equivalent pair whose alpha equals the canonical alpha of
    the new sigma; the leftover freedom is exactly the C* scaling.
    """
    ca = canonical_alpha(pair.sigma.jet)
    mu = -(pair.alpha - ca) / 5
    return Homography(Coeff(1), mu)


def canonical_germ(pair: NormalPair) -> Jet1:
    h = canonicalizing_homography(pair)
    return pair.sigma.jet.compose(h.to_jet(pair.sigma.order))


@dataclass
class NormalPairVerdict:
    equivalent: bool
    h0: Homography
    h1: Homography
    cstar: CStarVerdict
    constraints: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.equivalent


def normal_pair_equivalent(p0: NormalPair, p1: NormalPair) -> NormalPairVerdict:
    """Decide equivalence of two (sigma, alpha) pairs.

    Each pair is first canonicalized by an inner homography killing the
    alpha offset; the remaining question is whether the two canonical
    Schwarzians lie on one C* orbit, which is decided exactly.
    """
    h0 = canonicalizing_homography(p0)
    h1 = canonicalizing_homography(p1)
    s0 = schwarzian(canonical_germ(p0))
    s1 = schwarzian(canonical_germ(p1))
    n = min(s0.order, s1.order)
    verdict = cstar_equivalent(s0.truncate(n), s1.truncate(n))
    constraints = [
        f"inner homography for first pair: mu = {format_coeff(h0.mu)}",
        f"inner homography for second pair: mu = {format_coeff(h1.mu)}",
        *verdict.constraints,
    ]
    return NormalPairVerdict(
        equivalent=verdict.equivalent,
        h0=h0,
        h1=h1,
        cstar=verdict,
        constraints=constraints,
    )
