"""Limit cycles of piecewise systems across the switching line Im z = 0.

Three solver families, all built on first-integral matching across the
switching line and confirmed against the numerical return map:

* mixed linear systems with the lower (holomorphic) equilibrium on the
  line: at most one cycle, from a closed-form crossing pair;
* mixed linear systems with an arbitrary lower equilibrium: roots of a
  transcendental matching function F on the monotone intervals cut out
  by an explicit quadratic, at most three;
* piecewise anti-holomorphic polynomial systems: common zeros of the
  two symmetric divided-difference polynomials, extracted through a
  Sylvester resultant, with degree-driven bounds 0/1/3 for
  linear/quadratic/cubic sides.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import cpoly, odeint
from .cpoly import CPoly
from .errors import (
    CenterContinuum,
    ContinuumDetected,
    DegreeUnsupported,
    HoloflowError,
    HypothesisViolation,
    IdenticallyZero,
)
from .odeint import IntegratorConfig, DEFAULT_CONFIG
from .potential import SystemKind, SystemSpec, anti_holomorphic, build_potential

CONFIRM_TOL = 1e-6


@dataclass(frozen=True)
class PiecewiseSpec:
    """upper governs Im z > 0, lower governs Im z < 0."""

    upper: SystemSpec
    lower: SystemSpec


class Stability(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    NON_HYPERBOLIC = "non_hyperbolic"
    UNKNOWN = "unknown"


class Verified(enum.Enum):
    ANALYTIC = "analytic"
    NUMERICALLY_CONFIRMED = "numerically_confirmed"
    REJECTED = "rejected"


@dataclass(frozen=True)
class CycleCandidate:
    """Crossing pair stored with x1 > x2."""

    x1: float
    x2: float
    multiplier: float | None
    stability: Stability
    verified: Verified

    def __post_init__(self):
        if not self.x1 > self.x2:
            raise ValueError("candidates are stored with x1 > x2")


class Crossing(enum.Enum):
    CROSSING_UP = "crossing_up"
    CROSSING_DOWN = "crossing_down"
    TANGENT = "tangent"
    SLIDING = "sliding"


def crossing_transversality(spec: PiecewiseSpec, x: float) -> Crossing:
    """Filippov classification of the point (x, 0) on the switching line
    from the vertical components of the two fields."""
    v_up = spec.upper.planar(x, 0.0)[1]
    v_lo = spec.lower.planar(x, 0.0)[1]
    s_up = _tangency_sign(spec.upper, x, v_up)
    s_lo = _tangency_sign(spec.lower, x, v_lo)
    if s_up == 0 or s_lo == 0:
        return Crossing.TANGENT
    if s_up != s_lo:
        return Crossing.SLIDING
    return Crossing.CROSSING_UP if s_up > 0 else Crossing.CROSSING_DOWN


def _tangency_sign(spec: SystemSpec, x, v):
    scale = float(np.max(np.abs(spec.p.coeffs))) * max(1.0, abs(x)) ** spec.p.degree
    if abs(v) <= 1e-12 * max(scale, 1e-300):
        return 0
    return 1 if v > 0 else -1


def _validate(pw: PiecewiseSpec, x1, x2, cfg, multiplier=None):
    """odeint confirmation: transversal crossings of opposite direction
    at the pair and a closed full return; computes the return-map
    derivative when no analytic multiplier is supplied."""
    c1 = crossing_transversality(pw, x1)
    c2 = crossing_transversality(pw, x2)
    crossings = {Crossing.CROSSING_UP, Crossing.CROSSING_DOWN}
    if c1 not in crossings or c2 not in crossings or c1 == c2:
        return Verified.REJECTED, multiplier, Stability.UNKNOWN
    ret = odeint.return_map(pw, x1, cfg)
    if ret is None or abs(ret - x1) > CONFIRM_TOL * max(1.0, abs(x1)):
        return Verified.REJECTED, multiplier, Stability.UNKNOWN
    if multiplier is None:
        try:
            multiplier = odeint.return_map_derivative(pw, x1, cfg)
        except (ValueError, HoloflowError):
            multiplier = None
    stability = _stability_from_multiplier(multiplier)
    return Verified.NUMERICALLY_CONFIRMED, multiplier, stability


def _stability_from_multiplier(multiplier):
    if multiplier is None:
        return Stability.UNKNOWN
    if abs(multiplier) < 1.0 - 1e-6:
        return Stability.STABLE
    if abs(multiplier) > 1.0 + 1e-6:
        return Stability.UNSTABLE
    return Stability.NON_HYPERBOLIC


# --------------------------------------------------------------------------
# mixed linear systems, lower equilibrium on the switching line
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MixedLinearSpec:
    """Upper: zdot = conj((a1 + i a2) z + (b1 + i b2)), Im z > 0.
    Lower: zdot = (a + i b)(z - x0), Im z < 0, with x0 real."""

    a1: float
    a2: float
    b1: float
    b2: float
    a: float
    b: float
    x0: float = 0.0

    def as_piecewise(self) -> PiecewiseSpec:
        upper = anti_holomorphic([complex(self.b1, self.b2), complex(self.a1, self.a2)])
        lam = complex(self.a, self.b)
        lower = SystemSpec(SystemKind.HOLOMORPHIC, CPoly([-lam * self.x0, lam]))
        return PiecewiseSpec(upper, lower)


def mixed_linear_pair(spec: MixedLinearSpec):
    """The unique candidate crossing pair in original coordinates, or
    None when it degenerates.

    In translated coordinates the two crossing abscissas are
    2*bt2 / (a2 * (exp(s * a*pi/b) - 1)) for s = +1 and s = -1; they
    always straddle the lower equilibrium when a != 0 and bt2 != 0.
    """
    bt2 = spec.a2 * spec.x0 + spec.b2
    if bt2 == 0.0 or spec.a == 0.0:
        return None
    c = spec.a * math.pi / spec.b
    xs = 2.0 * bt2 / (spec.a2 * math.expm1(c))
    xm = 2.0 * bt2 / (spec.a2 * math.expm1(-c))
    return (max(xs, xm) + spec.x0, min(xs, xm) + spec.x0)


def solve_mixed_linear_on_sigma(spec: MixedLinearSpec,
                                cfg: IntegratorConfig = DEFAULT_CONFIG,
                                validate=True):
    """At most one limit cycle; empty when the crossing pair fails the
    geometric validity checks.

    Raises CenterContinuum when a = 0 and the matching equations admit a
    crossing pair (period annulus: closed orbits, none isolated). The
    multiplier of a genuine cycle is exp(a*pi/|b|): stable for a < 0,
    unstable for a > 0.
    """
    if spec.a2 == 0.0 or spec.b == 0.0:
        raise HypothesisViolation("mixed linear solver requires a2 != 0 and b != 0")
    bt2 = spec.a2 * spec.x0 + spec.b2
    scale = max(1.0, abs(spec.a2), abs(spec.b2), abs(spec.a2 * spec.x0))
    pw = spec.as_piecewise()
    if spec.a == 0.0:
        if abs(bt2) > 1e-12 * scale:
            return []
        pair = _annulus_representative(pw, spec.x0, cfg)
        raise CenterContinuum(
            "a = 0 with matching crossing pairs: period annulus, no limit cycle",
            pair=pair,
        )
    pair = mixed_linear_pair(spec)
    if pair is None:
        return []
    x1, x2 = pair
    multiplier = math.exp(spec.a * math.pi / abs(spec.b))
    stability = Stability.STABLE if spec.a < 0 else Stability.UNSTABLE
    if not validate:
        return [CycleCandidate(x1, x2, multiplier, stability, Verified.ANALYTIC)]
    verified, _, _ = _validate(pw, x1, x2, cfg, multiplier=multiplier)
    if verified is not Verified.NUMERICALLY_CONFIRMED:
        return []
    return [CycleCandidate(x1, x2, multiplier, stability, Verified.NUMERICALLY_CONFIRMED)]


def _annulus_representative(pw, x0, cfg):
    """A crossing pair on a confirmed closed orbit of a period annulus."""
    for r in (max(1.0, abs(x0)), 1.0, 0.5 * max(1.0, abs(x0)), 0.1):
        x1, x2 = x0 + r, x0 - r
        ret = odeint.return_map(pw, x1, cfg)
        if ret is not None and abs(ret - x1) <= CONFIRM_TOL * max(1.0, abs(x1)):
            return (x1, x2)
    return None


# --------------------------------------------------------------------------
# mixed linear systems, arbitrary lower equilibrium
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MixedGeneralConstants:
    """Upper: zdot = conj((a1 + i a2) z + (b1 + i b2)), Im z > 0.
    Lower: zdot = (a + i b)(z - (x0 + i y0)), Im z < 0."""

    a1: float
    a2: float
    b1: float
    b2: float
    a: float
    b: float
    x0: float
    y0: float

    @property
    def C(self):
        return 2.0 * self.x0 + 2.0 * self.b2 / self.a2

    def L(self, x):
        """Upper-arc partner abscissa from stream-function matching."""
        return -x - 2.0 * self.b2 / self.a2

    def as_piecewise(self) -> PiecewiseSpec:
        upper = anti_holomorphic([complex(self.b1, self.b2), complex(self.a1, self.a2)])
        lam = complex(self.a, self.b)
        z0 = complex(self.x0, self.y0)
        lower = SystemSpec(SystemKind.HOLOMORPHIC, CPoly([-lam * z0, lam]))
        return PiecewiseSpec(upper, lower)

    def matching_function(self):
        """F(x) = b*ln(R(L(x))/R(x)) - a*(Theta(L(x)) - Theta(x)) whose
        zeros give the candidate crossing pairs (x, L(x))."""
        x0, y0, a, b = self.x0, self.y0, self.a, self.b

        def theta(x):
            return math.atan2(-y0, x - x0)

        def radius2(x):
            return (x - x0) ** 2 + y0 ** 2

        def F(x):
            lx = self.L(x)
            return 0.5 * b * math.log(radius2(lx) / radius2(x)) - a * (theta(lx) - theta(x))

        return F

    def fprime_quadratic(self):
        """Coefficients (ascending in u = x - x0) of F'(x) * D(x), a real
        quadratic whose zeros are the critical points of F."""
        a, b, y0, C = self.a, self.b, self.y0, self.C
        return (
            a * y0 * C * C + 2.0 * a * y0 ** 3 + b * C * y0 * y0,
            2.0 * a * y0 * C - b * C * C,
            2.0 * a * y0 - b * C,
        )


def solve_mixed_general(k: MixedGeneralConstants, tol=1e-10,
                        cfg: IntegratorConfig = DEFAULT_CONFIG,
                        validate=True, include_winding=False):
    """At most three limit cycles for the general mixed system.

    y0 = 0 reduces exactly to solve_mixed_linear_on_sigma. Otherwise the
    real line splits into at most three monotone intervals of F (the
    critical points solve an explicit quadratic) and each sign change is
    bisected; a root x yields the pair (x, L(x)), deduplicated and
    confirmed by integration.

    include_winding additionally solves F = +-2*pi*a, the matching
    condition for lower arcs that wrap around an equilibrium lying
    strictly below the switching line (an extension: those arcs are
    invisible to the plain F = 0 equation).
    """
    if k.a2 == 0.0 or k.b == 0.0:
        raise HypothesisViolation("mixed general solver requires a2 != 0 and b != 0")
    if k.y0 == 0.0:
        return solve_mixed_linear_on_sigma(
            MixedLinearSpec(k.a1, k.a2, k.b1, k.b2, k.a, k.b, k.x0), cfg, validate
        )
    pw = k.as_piecewise()
    F = k.matching_function()
    q0, q1, q2 = k.fprime_quadratic()
    if q0 == 0.0 and q1 == 0.0 and q2 == 0.0:
        # F is constant; it vanishes at the L-fixed point, hence everywhere
        pair = _annulus_representative(pw, k.x0, cfg)
        raise CenterContinuum(
            "matching function vanishes identically: period annulus", pair=pair
        )
    crit = _real_quadratic_roots(q0, q1, q2)
    span = 1e9 * max(1.0, abs(k.x0), abs(k.y0), abs(k.C))
    breakpoints = [k.x0 - span] + sorted(u + k.x0 for u in crit) + [k.x0 + span]
    targets = [0.0]
    if include_winding and k.y0 < 0.0:
        targets += [2.0 * math.pi * k.a, -2.0 * math.pi * k.a]
    seen_pairs = []
    candidates = []
    for target in targets:
        for left, right in zip(breakpoints[:-1], breakpoints[1:]):
            root = _bracket_bisect(lambda x: F(x) - target, left, right, tol)
            if root is None:
                continue
            partner = k.L(root)
            if abs(root - partner) <= 1e-9 * max(1.0, abs(root)):
                continue  # the involution fixed point, not a crossing pair
            x1, x2 = (root, partner) if root > partner else (partner, root)
            if any(abs(x1 - p1) <= 1e-8 * max(1.0, abs(x1))
                   and abs(x2 - p2) <= 1e-8 * max(1.0, abs(x2))
                   for p1, p2 in seen_pairs):
                continue
            seen_pairs.append((x1, x2))
            if validate:
                verified, mult, stab = _validate(pw, x1, x2, cfg)
                candidates.append(CycleCandidate(x1, x2, mult, stab, verified))
            else:
                candidates.append(
                    CycleCandidate(x1, x2, None, Stability.UNKNOWN, Verified.ANALYTIC)
                )
    return candidates


def _real_quadratic_roots(c0, c1, c2):
    """Real roots of c2 u^2 + c1 u + c0, ascending input order."""
    scale = max(abs(c0), abs(c1), abs(c2))
    if scale == 0.0:
        return []
    if abs(c2) <= 1e-14 * scale:
        if abs(c1) <= 1e-14 * scale:
            return []
        return [-c0 / c1]
    disc = c1 * c1 - 4.0 * c2 * c0
    if disc < 0.0:
        return []
    sq = math.sqrt(disc)
    q = -0.5 * (c1 + math.copysign(sq, c1)) if c1 != 0 else 0.5 * sq
    roots = []
    if q != 0.0:
        roots = [q / c2, c0 / q]
    else:
        roots = [0.0] if disc == 0 else [sq / (2 * c2), -sq / (2 * c2)]
    return sorted(set(roots))


def _bracket_bisect(g, left, right, tol, max_iter=200):
    gl, gr = g(left), g(right)
    if gl == 0.0:
        return left
    if gr == 0.0:
        return right
    if math.copysign(1.0, gl) == math.copysign(1.0, gr):
        return None
    for _ in range(max_iter):
        mid = 0.5 * (left + right)
        gm = g(mid)
        if gm == 0.0 or right - left <= max(tol, 1e-14 * max(1.0, abs(mid))):
            return mid
        if math.copysign(1.0, gm) == math.copysign(1.0, gl):
            left, gl = mid, gm
        else:
            right = mid
    return 0.5 * (left + right)


# --------------------------------------------------------------------------
# piecewise anti-holomorphic polynomial systems
# --------------------------------------------------------------------------

DEGREE_BOUNDS = {1: 0, 2: 1, 3: 3}


def crossing_pair_polynomial(spec: SystemSpec) -> cpoly.BivarSym:
    """The symmetric divided-difference polynomial c(x1, x2) of one
    anti-holomorphic side: (psi(x1,0) - psi(x2,0)) / (x1 - x2)."""
    rep = build_potential(spec)
    psi_axis = rep.poly_part.coeffs.imag
    return cpoly.divided_difference(psi_axis)


def solve_antiholo_pair(spec: PiecewiseSpec, tol=1e-10,
                        cfg: IntegratorConfig = DEFAULT_CONFIG,
                        validate=True):
    """Candidate crossing cycles of a piecewise anti-holomorphic system.

    Builds the two divided-difference polynomials, eliminates x2 through
    the Sylvester resultant R(x1), matches the common real x2-roots at
    every real root of R, deduplicates the symmetric pairs and (by
    default) confirms each one against the numerical return map.

    Degree bounds: linear sides admit no candidates, quadratic at most
    one, cubic at most three. Sides of degree > 3 run the same pipeline
    but carry no proven bound (see candidate_bound). Raises
    ContinuumDetected when R vanishes identically and
    DegreeUnsupported for constant sides.
    """
    for side in (spec.upper, spec.lower):
        if side.kind is not SystemKind.ANTI_HOLOMORPHIC:
            raise ValueError("solve_antiholo_pair requires anti-holomorphic sides")
        if side.p.degree < 1:
            raise DegreeUnsupported("sides must have degree >= 1")
    c_up = crossing_pair_polynomial(spec.upper)
    c_lo = crossing_pair_polynomial(spec.lower)
    resultant = cpoly.resultant_x2(c_up, c_lo)
    scale = max(1.0, float(np.max(np.abs(c_up.coeffs))),
                float(np.max(np.abs(c_lo.coeffs)))) ** (c_up.x2_degree + c_lo.x2_degree)
    if float(np.max(np.abs(resultant.coeffs))) <= 1e-12 * scale:
        raise ContinuumDetected(
            "resultant vanishes identically: infinitely many crossing pairs, no limit cycles"
        )
    try:
        r_roots = cpoly.real_roots(resultant, tol=tol)
    except IdenticallyZero:  # pragma: no cover - guarded by scale test
        raise ContinuumDetected("resultant vanishes identically")
    pairs = []
    for r in r_roots:
        up_roots = _univariate_real_roots(c_up.x2_poly(r), tol)
        lo_roots = _univariate_real_roots(c_lo.x2_poly(r), tol)
        for x2 in up_roots:
            if not any(abs(x2 - y) <= 10.0 * max(tol, 1e-9) * max(1.0, abs(x2))
                       for y in lo_roots):
                continue
            if abs(r - x2) <= 1e-9 * max(1.0, abs(r)):
                continue
            x1, xx2 = (r, x2) if r > x2 else (x2, r)
            if any(abs(x1 - p1) <= 1e-8 * max(1.0, abs(x1))
                   and abs(xx2 - p2) <= 1e-8 * max(1.0, abs(xx2))
                   for p1, p2 in pairs):
                continue
            pairs.append((x1, xx2))
    candidates = []
    for x1, x2 in pairs:
        if validate:
            verified, mult, stab = _validate(spec, x1, x2, cfg)
            candidates.append(CycleCandidate(x1, x2, mult, stab, verified))
        else:
            candidates.append(
                CycleCandidate(x1, x2, None, Stability.UNKNOWN, Verified.ANALYTIC)
            )
    return candidates


def candidate_bound(spec: PiecewiseSpec):
    """Proven upper bound on the number of limit cycles, or None when
    the side degrees exceed the proven range."""
    deg = max(spec.upper.p.degree, spec.lower.p.degree)
    return DEGREE_BOUNDS.get(deg)


def _univariate_real_roots(ascending, tol):
    c = cpoly._trim_real(np.asarray(ascending, dtype=float))
    if len(c) == 1:
        return []
    try:
        return list(cpoly.real_roots(CPoly(c.astype(complex)), tol=tol))
    except IdenticallyZero:
        return []
