import math

import numpy as np
import pytest

from holoflow.cpoly import (
    BivarSym,
    CPoly,
    _sylvester_matrix,
    divided_difference,
    real_roots,
    resultant_x2,
    roots,
)
from holoflow.errors import DegenerateLeadingCoefficient, IdenticallyZero

S33 = math.sqrt(33.0)


class TestEval:
    def test_cubic_minus_z_at_two(self):
        p = CPoly([0, -1, 0, 1])
        assert p(2.0) == 6.0 + 0j

    def test_constant(self):
        p = CPoly([1.0])
        assert p(5 + 1j) == 1.0 + 0j

    def test_cubic_minus_iz_at_i(self):
        # (i)^3 - i*(i) = -i + 1, expanded by hand
        p = CPoly([0, -1j, 0, 1])
        assert p(1j) == pytest.approx(1 - 1j)

    def test_vectorized(self):
        p = CPoly([1, 2, 3])
        zs = np.array([0.0, 1.0, 1j])
        np.testing.assert_allclose(p(zs), [1, 6, 1 + 2j - 3])


class TestCalculus:
    def test_antiderivative_z_squared(self):
        q = CPoly([0, 0, 1]).antiderivative()
        np.testing.assert_allclose(q.coeffs, [0, 0, 0, 1 / 3])

    def test_derivative_inverts_antiderivative(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            deg = rng.integers(0, 7)
            c = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
            p = CPoly(c)
            back = p.antiderivative().derivative()
            assert back.degree == p.degree
            np.testing.assert_allclose(back.coeffs, p.coeffs, atol=1e-14)

    def test_upper_field_primitive(self):
        # primitive of (2+i)(z - 5i) equals (2+i)(z - 5i)^2 / 2 up to a constant
        p = CPoly([(2 + 1j) * (-5j), 2 + 1j])
        prim = p.antiderivative()
        expanded = CPoly.from_roots([5j, 5j], leading=(2 + 1j) / 2)
        diff = prim - expanded
        assert diff.degree == 0  # constant difference only

    def test_zero_constant_term(self):
        assert CPoly([3.0, 1.0]).antiderivative().coeffs[0] == 0


class TestRoots:
    def test_three_simple(self):
        rs = roots(CPoly([0, -1, 0, 1]))
        locs = sorted(rs.locations(), key=lambda z: z.real)
        np.testing.assert_allclose(locs, [-1, 0, 1], atol=1e-10)
        assert all(m == 1 for _, m in rs)

    def test_double_root(self):
        rs = roots(CPoly([2, -3, 0, 1]))  # (z-1)^2 (z+2)
        by_mult = {m: z for z, m in rs}
        assert abs(by_mult[2] - 1) < 1e-6
        assert abs(by_mult[1] + 2) < 1e-10

    def test_triple_root(self):
        rs = roots(CPoly([0, 0, 0, 1]))
        assert len(rs) == 1
        z, m = rs.roots[0]
        assert m == 3 and abs(z) < 1e-5

    def test_expand_resolve_round_trip(self):
        rng = np.random.default_rng(5)
        tol = 1e-10
        for _ in range(25):
            n_clusters = rng.integers(1, 4)
            locs, mults = [], []
            while len(locs) < n_clusters:
                cand = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
                if all(abs(cand - z) > 0.5 for z in locs):
                    locs.append(cand)
                    mults.append(int(rng.integers(1, 4)))
            p = CPoly.from_roots([z for z, m in zip(locs, mults) for _ in range(m)])
            rs = roots(p)
            assert rs.total_multiplicity() == p.degree
            for z, m in zip(locs, mults):
                match = min(rs.roots, key=lambda t: abs(t[0] - z))
                assert match[1] == m
                assert abs(match[0] - z) <= 10 * tol ** (1.0 / m) * max(1, abs(z))

    def test_residual_bound(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            c = rng.normal(size=6) + 1j * rng.normal(size=6)
            p = CPoly(c)
            pnorm = np.max(np.abs(p.coeffs))
            for z, m in roots(p):
                scale = pnorm * max(1.0, abs(z)) ** p.degree
                assert abs(p(z)) <= 1e-9 * scale

    def test_viete_centered(self):
        # monic centered polynomials have zero root sum
        rng = np.random.default_rng(3)
        for _ in range(20):
            a1 = complex(rng.normal(), rng.normal())
            a0 = complex(rng.normal(), rng.normal())
            rs = roots(CPoly([a0, a1, 0, 1]))
            total = sum(z * m for z, m in rs)
            assert abs(total) < 1e-8

    def test_degree_zero_rejected(self):
        with pytest.raises(ValueError):
            roots(CPoly([1.0]))


class TestDividedDifference:
    def test_square(self):
        c = divided_difference([0.0, 0.0, 1.0])  # q = x^2
        expected = np.zeros((2, 2))
        expected[1, 0] = expected[0, 1] = 1.0
        np.testing.assert_array_equal(c.coeffs, expected)

    def test_quadratic_side_pattern(self):
        # q = c2 x + (b2/2) x^2 + (a2/3) x^3
        c2, b2, a2 = 0.7, -1.3, 2.1
        c = divided_difference([0.0, c2, b2 / 2, a2 / 3])
        assert c(0.0, 0.0) == pytest.approx(c2)
        # coefficient of x1 and of x2 is b2/2, of x1^2, x1 x2, x2^2 is a2/3
        assert c.coeffs[1, 0] == pytest.approx(b2 / 2)
        assert c.coeffs[0, 1] == pytest.approx(b2 / 2)
        assert c.coeffs[2, 0] == pytest.approx(a2 / 3)
        assert c.coeffs[1, 1] == pytest.approx(a2 / 3)
        assert c.coeffs[0, 2] == pytest.approx(a2 / 3)

    def test_quartic(self):
        # q = x^4 -> x1^3 + x1^2 x2 + x1 x2^2 + x2^3
        c = divided_difference([0.0, 0.0, 0.0, 0.0, 1.0])
        for i in range(4):
            assert c.coeffs[i, 3 - i] == 1.0
        assert np.sum(c.coeffs) == 4.0

    def test_symmetry(self):
        rng = np.random.default_rng(23)
        q = rng.normal(size=5)
        c = divided_difference(q)
        np.testing.assert_array_equal(c.coeffs, c.coeffs.T)
        for _ in range(100):
            x1, x2 = rng.uniform(-2, 2, 2)
            assert c(x1, x2) == pytest.approx(c(x2, x1), rel=1e-12, abs=1e-12)

    def test_matches_defining_quotient(self):
        rng = np.random.default_rng(29)
        q = CPoly(rng.normal(size=5).astype(complex))
        c = divided_difference(q)
        for _ in range(50):
            x1, x2 = rng.uniform(-2, 2, 2)
            if abs(x1 - x2) < 1e-3:
                continue
            expected = (q(x1) - q(x2)).real / (x1 - x2)
            assert c(x1, x2) == pytest.approx(expected, rel=1e-10, abs=1e-10)


def _reference_quadratic_sides():
    """The worked quadratic pair: psi restrictions on the axis."""
    a2m = (-1 + S33) / (-19 + 3 * S33)
    q_plus = [0.0, 0.5, 3 / 4, 1 / 6]          # x/2 + 3x^2/4 + x^3/6
    q_minus = [0.0, 1.0, 0.5, a2m / 3.0]
    return divided_difference(q_plus), divided_difference(q_minus)


class TestResultant:
    def test_worked_quadratic_example(self):
        cp, cm = _reference_quadratic_sides()
        r = resultant_x2(cp, cm)
        rr = real_roots(r)
        expected = sorted([0.0, (-9 + S33) / 4])
        np.testing.assert_allclose(rr, expected, atol=1e-9)

    def test_identical_sides_vanish(self):
        cp, _ = _reference_quadratic_sides()
        r = resultant_x2(cp, cp)
        scale = np.max(np.abs(cp.coeffs)) ** (2 * cp.x2_degree)
        assert np.max(np.abs(r.coeffs)) <= 1e-12 * scale

    def test_against_elimination_oracle(self):
        # Res_x2(c+, c-)(s) = lead+^(deg-) * prod over roots rho of c+(s, .)
        # of c-(s, rho); checked at sample abscissas
        rng = np.random.default_rng(41)
        for _ in range(10):
            qp = np.concatenate([[0.0], rng.uniform(-2, 2, 3)])
            qm = np.concatenate([[0.0], rng.uniform(-2, 2, 3)])
            if abs(qp[3]) < 0.1 or abs(qm[3]) < 0.1:
                continue
            cp, cm = divided_difference(qp), divided_difference(qm)
            r = resultant_x2(cp, cm)
            for s in rng.uniform(-2, 2, 5):
                ap = cp.x2_poly(s)
                am = cm.x2_poly(s)
                rho = np.roots(ap[::-1])
                cm_vals = np.polyval(am[::-1], rho)
                oracle = ap[-1] ** (len(am) - 1) * np.prod(cm_vals)
                assert complex(r(s)) == pytest.approx(oracle, rel=1e-7, abs=1e-10)

    def test_degree_two_for_quadratic_sides(self):
        rng = np.random.default_rng(43)
        for _ in range(20):
            qp = np.concatenate([[0.0], rng.uniform(-2, 2, 3)])
            qm = np.concatenate([[0.0], rng.uniform(-2, 2, 3)])
            if abs(qp[3]) < 0.1 or abs(qm[3]) < 0.1:
                continue
            r = resultant_x2(divided_difference(qp), divided_difference(qm))
            assert r.degree <= 2

    def test_vanishes_at_constructed_common_root(self):
        rng = np.random.default_rng(47)
        for _ in range(10):
            x1s, x2s = rng.uniform(-2, 2, 2)
            qp = np.concatenate([[0.0], rng.uniform(-2, 2, 3)])
            qm = np.concatenate([[0.0], rng.uniform(-2, 2, 3)])
            qp[3] = np.sign(qp[3]) * max(abs(qp[3]), 0.2)
            qm[3] = np.sign(qm[3]) * max(abs(qm[3]), 0.2)
            cp = divided_difference(qp)
            cm = divided_difference(qm)
            # the linear q-coefficient shifts c by a constant: align both
            # sides to vanish at the chosen pair
            qp[1] -= cp(x1s, x2s)
            qm[1] -= cm(x1s, x2s)
            cp = divided_difference(qp)
            cm = divided_difference(qm)
            r = resultant_x2(cp, cm)
            scale = max(1.0, float(np.max(np.abs(r.coeffs))))
            assert abs(complex(r(x1s))) <= 1e-8 * scale

    def test_degenerate_leading_coefficient(self):
        flat = BivarSym(np.array([[1.0, 0.0], [0.0, 0.0]]))
        good = _reference_quadratic_sides()[0]
        with pytest.raises(DegenerateLeadingCoefficient):
            resultant_x2(flat, good)


class TestRealRoots:
    def test_worked_example_roots(self):
        cp, cm = _reference_quadratic_sides()
        rr = real_roots(resultant_x2(cp, cm))
        assert rr[0] == pytest.approx((-9 + S33) / 4, abs=1e-9)
        assert rr[1] == pytest.approx(0.0, abs=1e-9)

    def test_no_real_roots(self):
        assert len(real_roots(CPoly([1, 0, 1]))) == 0

    def test_degree_six_construct_then_solve(self):
        p = CPoly.from_roots([-3, -2, -1, 1, 2, 3])
        rr = real_roots(p)
        np.testing.assert_allclose(rr, [-3, -2, -1, 1, 2, 3], atol=1e-9)

    def test_double_real_root_found(self):
        p = CPoly.from_roots([1.0, 1.0, -2.0])
        rr = real_roots(p)
        np.testing.assert_allclose(rr, [-2.0, 1.0], atol=1e-6)

    def test_interval_restriction(self):
        p = CPoly.from_roots([-3, -2, -1, 1, 2, 3])
        rr = real_roots(p, interval=(0.0, 2.5))
        np.testing.assert_allclose(rr, [1, 2], atol=1e-9)

    def test_identically_zero(self):
        with pytest.raises(IdenticallyZero):
            real_roots(CPoly([0.0]))


class TestSylvesterShape:
    def test_matrix_layout(self):
        s = _sylvester_matrix(np.array([1.0, 2.0, 3.0]), np.array([4.0, 5.0]))
        # deg 2 and deg 1 -> 3x3
        expected = np.array([
            [3.0, 2.0, 1.0],
            [5.0, 4.0, 0.0],
            [0.0, 5.0, 4.0],
        ])
        np.testing.assert_array_equal(s, expected)
