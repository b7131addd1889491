"""Independent numerical oracle: adaptive Runge-Kutta integration.

Dormand-Prince 5(4) embedded pair with the standard quartic dense
output, specialized to planar fields represented as complex-valued
velocities z -> dz/dt. Provides switching-line (Im z = 0) crossing
detection by bisection on the dense output, Poincare half-return and
full-return maps, and separatrix tracing from the equilibria at
infinity.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .classify import InfinityEquilibrium
from .cpoly import CPoly
from .errors import NotEntering
from .potential import SystemKind, SystemSpec

BLOWUP_RADIUS = 1e12

# Dormand-Prince RK5(4)7M tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
# b5 - b4: weights of the embedded error estimate
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)
# dense-output weights for the quartic interpolant
_D = (
    -12715105075 / 11282082432,
    0.0,
    87487479700 / 32700410799,
    -10690763975 / 1880347072,
    701980252875 / 199316789632,
    -1453857185 / 822651844,
    69997945 / 29380423,
)


class Terminal(enum.Enum):
    TIME_REACHED = "time_reached"
    EVENT_HIT = "event_hit"
    BLOWUP = "blowup"
    STEP_LIMIT = "step_limit"


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-9
    max_step: float = np.inf
    max_steps: int = 1_000_000
    event_tol: float = 1e-12

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "max_step", "event_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


DEFAULT_CONFIG = IntegratorConfig()


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution; samples[:, k] = (t, x, y) per accepted step."""

    samples: np.ndarray
    terminal: Terminal
    x_event: float | None = None

    @property
    def times(self):
        return self.samples[:, 0]

    @property
    def points(self):
        return self.samples[:, 1] + 1j * self.samples[:, 2]

    def end_point(self):
        return complex(self.samples[-1, 1], self.samples[-1, 2])

    def write_csv(self, path):
        import csv

        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "x", "y"])
            for t, x, y in self.samples:
                writer.writerow([repr(float(t)), repr(float(x)), repr(float(y))])


def _rhs(field):
    if isinstance(field, SystemSpec):
        return field.velocity
    return field


class _Dopri5:
    """Scalar-complex DOPRI5 stepper with FSAL and dense output."""

    def __init__(self, f, t0, z0, direction, cfg):
        self.f = f
        self.t = t0
        self.z = z0
        self.dir = direction
        self.cfg = cfg
        self.k1 = f(z0)
        v = abs(self.k1)
        scale = cfg.abs_tol + cfg.rel_tol * abs(z0)
        h = 0.01 * scale ** 0.2 / max(v, 1e-8) ** 0.2 if v > 0 else 1e-3
        self.h = min(h, cfg.max_step, 1.0)
        self._dense = None

    def step(self, t_limit=None):
        """Advance one accepted step (respecting t_limit); returns False
        when the step would start beyond t_limit."""
        cfg = self.cfg
        t, z, k1 = self.t, self.z, self.k1
        h = self.h
        if t_limit is not None:
            remaining = (t_limit - t) * self.dir
            if remaining <= 0:
                return False
            h = min(h, remaining)
        for _ in range(120):
            hs = h * self.dir
            with np.errstate(over="ignore", invalid="ignore"):
                k = [k1]
                for i in range(1, 7):
                    zi = z + hs * sum(a * kk for a, kk in zip(_A[i], k))
                    k.append(self.f(zi))
                z_new = z + hs * sum(a * kk for a, kk in zip(_A[6], k[:6]))
                # stage 7 is f at the new point (FSAL)
                k[6] = self.f(z_new)
                err = hs * sum(e * kk for e, kk in zip(_E, k))
            sc = cfg.abs_tol + cfg.rel_tol * max(abs(z), abs(z_new))
            err_norm = abs(err) / sc
            if not np.isfinite(err_norm) or not np.isfinite(z_new):
                h *= 0.1
                continue
            if err_norm <= 1.0 or h <= 1e-14 * max(1.0, abs(t)):
                factor = 0.9 * err_norm ** -0.2 if err_norm > 0 else 5.0
                self.h = min(h * min(max(factor, 0.2), 5.0), cfg.max_step)
                delta = z_new - z
                self._dense = (
                    t,
                    hs,
                    z,
                    delta,
                    hs * k[0] - delta,
                    delta - hs * k[6] - (hs * k[0] - delta),
                    hs * sum(d * kk for d, kk in zip(_D, k)),
                )
                self.t = t + hs
                self.z = z_new
                self.k1 = k[6]
                return True
            factor = 0.9 * err_norm ** -0.2
            h = h * min(max(factor, 0.1), 1.0)
        raise RuntimeError("step size underflow")

    def dense(self, theta):
        """Interpolated z at fraction theta in [0, 1] of the last step."""
        _, _, y0, r2, r3, r4, r5 = self._dense
        return y0 + theta * (r2 + (1 - theta) * (r3 + theta * (r4 + (1 - theta) * r5)))

    def dense_time(self, theta):
        t0, hs = self._dense[0], self._dense[1]
        return t0 + theta * hs


def integrate(field, z0, t_end, cfg: IntegratorConfig = DEFAULT_CONFIG) -> Trajectory:
    """Integrate zdot = field(z) from z0 over [0, t_end] (t_end < 0
    integrates backward). Declares Blowup past |z| = 1e12."""
    if t_end == 0:
        raise ValueError("t_end must be nonzero; its sign gives the direction")
    f = _rhs(field)
    direction = 1.0 if t_end > 0 else -1.0
    st = _Dopri5(f, 0.0, complex(z0), direction, cfg)
    rows = [(0.0, st.z.real, st.z.imag)]
    terminal = Terminal.TIME_REACHED
    for _ in range(cfg.max_steps):
        if not st.step(t_limit=t_end):
            break
        rows.append((st.t, st.z.real, st.z.imag))
        if abs(st.z) > BLOWUP_RADIUS:
            terminal = Terminal.BLOWUP
            break
        if (t_end - st.t) * direction <= 0:
            break
    else:
        terminal = Terminal.STEP_LIMIT
    return Trajectory(np.array(rows), terminal)


class Side(enum.Enum):
    UPPER = 1
    LOWER = -1


def half_return(spec, x_start, side: Side, cfg: IntegratorConfig = DEFAULT_CONFIG,
                t_max=1e6):
    """Landing abscissa of the orbit through (x_start, 0) after one
    excursion into the requested half-plane, or None if it escapes.

    Raises NotEntering when the field at the start does not point into
    the half-plane. The crossing is located by bisection on the dense
    output until |Im z| <= event_tol.
    """
    f = _rhs(spec)
    z0 = complex(x_start, 0.0)
    v0 = f(z0)
    s = float(side.value)
    if v0.imag * s <= 0:
        raise NotEntering(f"field does not enter the {side.name.lower()} half-plane at x={x_start}")
    st = _Dopri5(f, 0.0, z0, 1.0, cfg)
    armed_level = 10.0 * cfg.event_tol * max(1.0, abs(x_start))
    armed = False
    for _ in range(cfg.max_steps):
        if st.t > t_max:
            return None
        try:
            if not st.step():
                return None
        except RuntimeError:
            return None
        if abs(st.z) > BLOWUP_RADIUS:
            return None
        # scan the dense output for a sign change back across the axis
        thetas = np.linspace(0.0, 1.0, 9)
        ys = [st.dense(th).imag for th in thetas]
        prev_th, prev_y = thetas[0], ys[0]
        for th, yv in zip(thetas[1:], ys[1:]):
            if not armed and abs(yv) > armed_level and yv * s > 0:
                armed = True
            if armed and (yv * s < 0 or yv == 0.0):
                lo, hi = prev_th, th
                ylo = prev_y
                for _ in range(200):
                    mid = 0.5 * (lo + hi)
                    ym = st.dense(mid).imag
                    if abs(ym) <= cfg.event_tol:
                        return st.dense(mid).real
                    if ym * ylo > 0:
                        lo, ylo = mid, ym
                    else:
                        hi = mid
                return st.dense(0.5 * (lo + hi)).real
            prev_th, prev_y = th, yv
    return None


def return_map(spec, x_start, cfg: IntegratorConfig = DEFAULT_CONFIG, t_max=1e6):
    """Full Poincare return to Sigma = {Im z = 0} for a piecewise spec
    (any object with .upper/.lower SystemSpec attributes).

    Returns None unless both fields cross Sigma in the same direction at
    x_start (Filippov crossing) and both half-returns land."""
    v_up = spec.upper.planar(x_start, 0.0)[1]
    v_lo = spec.lower.planar(x_start, 0.0)[1]
    if v_up * v_lo <= 0:
        return None
    if v_up > 0:
        first, second = (spec.upper, Side.UPPER), (spec.lower, Side.LOWER)
    else:
        first, second = (spec.lower, Side.LOWER), (spec.upper, Side.UPPER)
    try:
        mid = half_return(first[0], x_start, first[1], cfg, t_max)
        if mid is None:
            return None
        return half_return(second[0], mid, second[1], cfg, t_max)
    except NotEntering:
        return None


def return_map_derivative(spec, x, cfg: IntegratorConfig = DEFAULT_CONFIG, h=None):
    """Central finite difference of the return map at x."""
    if h is None:
        h = 1e-5 * max(1.0, abs(x))
    plus = return_map(spec, x + h, cfg)
    minus = return_map(spec, x - h, cfg)
    if plus is None or minus is None:
        raise ValueError("return map undefined near x; cannot differentiate")
    return (plus - minus) / (2.0 * h)


def trace_separatrix(p: CPoly, inf_eq: InfinityEquilibrium,
                     cfg: IntegratorConfig = DEFAULT_CONFIG,
                     t_span=20.0, offset=1e-4) -> Trajectory:
    """Numerical rendering of the separatrix attached to an infinity
    saddle: seed just inside the Poincare disk along the saddle angle and
    integrate toward the finite region (figure output, not
    classification)."""
    spec = SystemSpec(SystemKind.HOLOMORPHIC, p)
    z_seed = np.exp(1j * inf_eq.angle) / offset
    v = spec.velocity(z_seed)
    radial = (np.conj(z_seed) * v).real
    direction = -1.0 if radial > 0 else 1.0
    return integrate(spec, z_seed, direction * t_span, cfg)
