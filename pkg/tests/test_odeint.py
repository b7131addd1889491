import math

import numpy as np
import pytest

from holoflow.cpoly import CPoly
from holoflow.errors import NotEntering
from holoflow.odeint import (
    IntegratorConfig,
    Side,
    Terminal,
    half_return,
    integrate,
    return_map,
    return_map_derivative,
    trace_separatrix,
)
from holoflow.classify import infinity_equilibria
from holoflow.potential import SystemKind, SystemSpec, anti_holomorphic, holomorphic
from holoflow.pwcycles import PiecewiseSpec

S33 = math.sqrt(33.0)

# a verified mixed linear-linear instance carrying a stable crossing cycle
CYCLE_PARAMS = dict(a1=1.413612, a2=-1.064242, b1=-1.766789, b2=-0.874464,
                    a=-0.619219, b=0.485750)


def _mixed_piecewise(a1, a2, b1, b2, a, b, x0=0.0, y0=0.0):
    upper = anti_holomorphic([complex(b1, b2), complex(a1, a2)])
    lam = complex(a, b)
    z0 = complex(x0, y0)
    lower = SystemSpec(SystemKind.HOLOMORPHIC, CPoly([-lam * z0, lam]))
    return PiecewiseSpec(upper, lower)


def _reference_quadratic_pair():
    a2m_lead = -4 + 1j * (-1 + S33) / (-19 + 3 * S33)
    lower = anti_holomorphic([-3 + 1j, -(1 - 1j), a2m_lead])
    upper = anti_holomorphic([0.5 * (2 + 1j), 0.5 * (4 + 3j), 0.5 * (6 + 1j)])
    return PiecewiseSpec(upper, lower)


class TestIntegrate:
    def test_linear_endpoint(self):
        traj = integrate(holomorphic([0, 1]), 1.0, 1.0)
        assert traj.terminal is Terminal.TIME_REACHED
        assert abs(traj.end_point() - math.e) < 1e-8

    def test_quadratic_endpoint(self):
        # z = -1/(t - 1/z0): from z0 = 1 at t = 0.5 the value is 2
        traj = integrate(holomorphic([0, 0, 1]), 1.0, 0.5)
        assert abs(traj.end_point() - 2.0) < 1e-8

    def test_antiholo_first_integral_drift(self):
        spec = anti_holomorphic([0, 0, 1])
        traj = integrate(spec, 1 + 1j, 1.0)
        x0, y0 = 1.0, 1.0
        psi0 = x0 * x0 * y0 - y0 ** 3 / 3
        for _, x, y in traj.samples:
            assert abs(x * x * y - y ** 3 / 3 - psi0) < 1e-7

    def test_backward_time(self):
        traj = integrate(holomorphic([0, 1]), 1.0, -1.0)
        assert abs(traj.end_point() - math.exp(-1)) < 1e-8

    def test_time_reversal_round_trip(self):
        spec = anti_holomorphic([0.3 + 0.1j, -0.2j, 1.0])
        fwd = integrate(spec, 0.5 + 0.25j, 1.0)
        back = integrate(spec, fwd.end_point(), -1.0)
        assert abs(back.end_point() - (0.5 + 0.25j)) < 1e-8

    def test_blowup_detected(self):
        traj = integrate(holomorphic([0, 0, 1]), 1.0, 2.0)
        assert traj.terminal is Terminal.BLOWUP
        assert abs(traj.end_point()) > 1e12

    def test_step_limit(self):
        cfg = IntegratorConfig(max_steps=5)
        traj = integrate(holomorphic([0, 1]), 1.0, 100.0, cfg)
        assert traj.terminal is Terminal.STEP_LIMIT

    def test_zero_time_rejected(self):
        with pytest.raises(ValueError):
            integrate(holomorphic([0, 1]), 1.0, 0.0)

    def test_callable_field(self):
        traj = integrate(lambda z: 1.0 / z, 1.0, 1.5)
        # z^2/2 = t + 1/2
        assert abs(traj.end_point() - 2.0) < 1e-8

    def test_csv_round_trip(self, tmp_path):
        traj = integrate(holomorphic([0, 1]), 1.0, 0.5)
        path = tmp_path / "traj.csv"
        traj.write_csv(path)
        data = np.genfromtxt(path, delimiter=",", names=True)
        assert data.shape[0] == traj.samples.shape[0]
        np.testing.assert_allclose(data["t"], traj.samples[:, 0])
        np.testing.assert_allclose(data["x"], traj.samples[:, 1])


class TestHalfReturn:
    def test_center_half_turn(self):
        # zdot = -i (z - 10): clockwise center at 10; from 20 the lower
        # arc lands at 0
        lam = -1j
        spec = SystemSpec(SystemKind.HOLOMORPHIC, CPoly([-lam * 10.0, lam]))
        landing = half_return(spec, 20.0, Side.LOWER)
        assert landing == pytest.approx(0.0, abs=1e-8)

    def test_not_entering(self):
        lam = -1j
        spec = SystemSpec(SystemKind.HOLOMORPHIC, CPoly([-lam * 10.0, lam]))
        with pytest.raises(NotEntering):
            half_return(spec, 0.0, Side.LOWER)  # field points upward at 0

    def test_spiral_landing_magnitude(self):
        # lower linear spec with a != 0: the half turn scales the radius
        # by exp(a*pi/|b|)
        rng = np.random.default_rng(19)
        for _ in range(10):
            a = rng.uniform(-0.8, 0.8)
            b = rng.uniform(0.3, 1.5) * rng.choice([-1.0, 1.0])
            spec = SystemSpec(SystemKind.HOLOMORPHIC, CPoly([0, complex(a, b)]))
            x0 = rng.uniform(0.5, 3.0)
            start = -x0 if b > 0 else x0  # enter the lower half-plane
            landing = half_return(spec, start, Side.LOWER)
            assert landing is not None
            assert abs(landing) == pytest.approx(
                abs(start) * math.exp(a * math.pi / abs(b)), rel=1e-7
            )
            assert landing * start < 0

    def test_reference_quadratic_upper_arc(self):
        pw = _reference_quadratic_pair()
        x2 = (-9 + S33) / 4
        landing = half_return(pw.upper, x2, Side.UPPER)
        assert landing == pytest.approx(0.0, abs=1e-6)


class TestReturnMap:
    def test_fixed_point_and_multiplier(self):
        pw = _mixed_piecewise(**CYCLE_PARAMS)
        a, b = CYCLE_PARAMS["a"], CYCLE_PARAMS["b"]
        c = a * math.pi / b
        x_pos = 2 * CYCLE_PARAMS["b2"] / (CYCLE_PARAMS["a2"] * math.expm1(-c))
        assert x_pos > 0
        ret = return_map(pw, x_pos)
        assert ret == pytest.approx(x_pos, abs=1e-8)
        mult = return_map_derivative(pw, x_pos)
        assert mult == pytest.approx(math.exp(a * math.pi / abs(b)), rel=1e-4)

    def test_stable_fixed_point_iteration(self):
        # a < 0: the multiplier is < 1 and iteration converges
        pw = _mixed_piecewise(**CYCLE_PARAMS)
        a, b = CYCLE_PARAMS["a"], CYCLE_PARAMS["b"]
        c = a * math.pi / b
        x_star = 2 * CYCLE_PARAMS["b2"] / (CYCLE_PARAMS["a2"] * math.expm1(-c))
        x = 1.6 * x_star
        for _ in range(12):
            nxt = return_map(pw, x)
            assert nxt is not None
            x = nxt
        assert x == pytest.approx(x_star, rel=1e-6)

    def test_continuum_identity(self):
        # period annulus: the return map is the identity inside it
        upper = anti_holomorphic([(2 + 1j) * (-5j), 2 + 1j])
        lam = -1j
        lower = SystemSpec(SystemKind.HOLOMORPHIC, CPoly([-lam * 10.0, lam]))
        pw = PiecewiseSpec(upper, lower)
        for x in (2.0, 4.0, 6.0, 8.0, 12.0, 16.0):
            assert return_map(pw, x) == pytest.approx(x, abs=1e-6)

    def test_non_crossing_returns_none(self):
        pw = _reference_quadratic_pair()
        # at large x both fields point the same way? pick a sliding point:
        # upper y-velocity and lower y-velocity have opposite signs near x=2
        up = pw.upper.planar(2.0, 0.0)[1]
        lo = pw.lower.planar(2.0, 0.0)[1]
        assert up * lo < 0
        assert return_map(pw, 2.0) is None


class TestSeparatrices:
    def test_nodes_attract_vertical_separatrices(self):
        p = CPoly([0, -1, 0, 1])  # z^3 - z
        eqs = infinity_equilibria(3)
        for k in (1, 3):
            traj = trace_separatrix(p, eqs[k], t_span=20.0)
            assert abs(traj.end_point()) < 1e-3

    def test_triple_sepal_axes(self):
        p = CPoly([0, 0, 0, 1])  # z^3
        eqs = infinity_equilibria(3)
        traj = trace_separatrix(p, eqs[1], t_span=20.0)  # vertical direction
        # decays along the imaginary axis like 1/sqrt(2t)
        assert abs(traj.end_point()) < 0.2
        xs = traj.samples[:, 1]
        ys = np.abs(traj.samples[:, 2])
        assert np.max(np.abs(xs)) < 1e-6 * np.max(ys)

    def test_center_case_recurrent(self):
        # in the three-center configuration the trace from e0 crosses the
        # finite region and keeps returning to it (circulation in a
        # center-type region) instead of settling or blowing up
        p = CPoly([0, -1j, 0, 1])  # z^3 - iz
        eqs = infinity_equilibria(3)
        traj = trace_separatrix(p, eqs[0], t_span=50.0)
        assert traj.terminal is Terminal.TIME_REACHED
        radii = np.abs(traj.points)
        inside = radii < 3.0
        # count separate visits to the finite region
        visits = int(np.sum(inside[1:] & ~inside[:-1]))
        assert visits >= 3
        assert np.min(radii) < 1.0
