"""Complex potentials and first integrals.

For an anti-holomorphic system zdot = conj(p(z)) the potential is the
polynomial primitive of p and its imaginary part is a global first
integral. For a holomorphic system zdot = p(z) the potential is a
primitive of 1/p, assembled from the partial-fraction expansion over
the roots of p; its imaginary part is constant along trajectories away
from poles and branch cuts, and w = Phi(z) rectifies the flow to
wdot = 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import cpoly
from .cpoly import CPoly
from .errors import AtPole, ExcludedExponent, UndefinedAtOrigin, ZeroPolynomial


class SystemKind(enum.Enum):
    HOLOMORPHIC = "holomorphic"
    ANTI_HOLOMORPHIC = "anti_holomorphic"


@dataclass(frozen=True)
class SystemSpec:
    """A planar system zdot = p(z) or zdot = conj(p(z))."""

    kind: SystemKind
    p: CPoly

    def velocity(self, z):
        """dz/dt at z as a complex number (elementwise on arrays)."""
        v = self.p(z)
        return np.conj(v) if self.kind is SystemKind.ANTI_HOLOMORPHIC else v

    def planar(self, x, y):
        """(dx/dt, dy/dt); the anti-holomorphic field is (u, -v)."""
        v = self.velocity(np.asarray(x) + 1j * np.asarray(y))
        return v.real, v.imag


def holomorphic(coeffs) -> SystemSpec:
    return SystemSpec(SystemKind.HOLOMORPHIC, CPoly(coeffs))


def anti_holomorphic(coeffs) -> SystemSpec:
    return SystemSpec(SystemKind.ANTI_HOLOMORPHIC, CPoly(coeffs))


@dataclass(frozen=True)
class PotentialRep:
    """Closed form of a potential: polynomial part plus logarithmic and
    rational terms from partial fractions.

    log_terms: (residue, pole) pairs contributing residue*Log(z - pole).
    rational_terms: (coeff, pole, order) contributing coeff/(z - pole)**order.
    """

    poly_part: CPoly
    log_terms: tuple = ()
    rational_terms: tuple = ()

    def poles(self):
        seen = []
        for _, pole in self.log_terms:
            seen.append(pole)
        for _, pole, _ in self.rational_terms:
            if pole not in seen:
                seen.append(pole)
        return seen

    def cut_distance(self, z):
        """Distance from z to the nearest pole or branch-cut ray.

        Each logarithmic pole carries a principal-branch cut along the
        ray arg(z - pole) = pi; rational-only poles contribute just the
        pole distance.
        """
        z = complex(z)
        best = np.inf
        for _, pole in self.log_terms:
            d = z - pole
            ray = abs(d.imag) if d.real <= 0 else abs(d)
            best = min(best, ray)
        for _, pole, _ in self.rational_terms:
            best = min(best, abs(z - pole))
        return best


def _taylor_shift(coeffs, z0):
    """Coefficients of p(z0 + w) in w, via repeated synthetic division."""
    c = np.array(coeffs, dtype=complex)
    n = len(c)
    out = np.zeros(n, dtype=complex)
    for k in range(n):
        # divide by (z - z0): remainder is the next Taylor coefficient
        rem = c[-1]
        for i in range(len(c) - 2, -1, -1):
            rem = rem * z0 + c[i]
        out[k] = rem
        # synthetic deflation
        nc = np.zeros(len(c) - 1, dtype=complex) if len(c) > 1 else np.zeros(1, dtype=complex)
        acc = 0j
        for i in range(len(c) - 1, 0, -1):
            acc = c[i] + acc * z0
            nc[i - 1] = acc
        c = nc
        if len(c) == 1 and k + 1 < n and c[0] == 0:
            break
    return out


def _series_reciprocal(a, order):
    """First `order` coefficients of 1/sum(a_k w^k); requires a[0] != 0."""
    b = np.zeros(order, dtype=complex)
    b[0] = 1.0 / a[0]
    for k in range(1, order):
        s = 0j
        for i in range(1, min(k, len(a) - 1) + 1):
            s += a[i] * b[k - i]
        b[k] = -s / a[0]
    return b


def _series_product(a, b, order):
    out = np.zeros(order, dtype=complex)
    for k in range(order):
        s = 0j
        for i in range(0, k + 1):
            ai = a[i] if i < len(a) else 0.0
            bj = b[k - i] if k - i < len(b) else 0.0
            s += ai * bj
        out[k] = s
    return out


def partial_fraction_primitive(num: CPoly, den: CPoly, tol=1e-10) -> PotentialRep:
    """Primitive of num/den (deg num < deg den) as log + rational terms.

    The expansion coefficient of 1/(z - z_j)**m is read off the Taylor
    series of num * (z - z_j)**m_j / den at z_j.
    """
    if den.is_zero():
        raise ZeroPolynomial("denominator is identically zero")
    if num.degree >= den.degree:
        raise ValueError("partial fractions require deg num < deg den")
    root_set = cpoly.roots(den, tol=tol)
    logs = []
    rats = []
    for z_j, m in root_set:
        # deflate den by (z - z_j)^m
        q = den.coeffs.copy()
        for _ in range(m):
            nq = np.zeros(len(q) - 1, dtype=complex)
            acc = 0j
            for i in range(len(q) - 1, 0, -1):
                acc = q[i] + acc * z_j
                nq[i - 1] = acc
            q = nq
        q_shift = _taylor_shift(q, z_j)
        num_shift = _taylor_shift(num.coeffs, z_j)
        series = _series_product(num_shift, _series_reciprocal(q_shift, m), m)
        # series[k] multiplies 1/(z - z_j)**(m - k)
        for k in range(m):
            order = m - k
            d = series[k]
            if d == 0:
                continue
            if order == 1:
                logs.append((complex(d), complex(z_j)))
            else:
                rats.append((complex(-d / (order - 1)), complex(z_j), order - 1))
    return PotentialRep(CPoly([0.0]), tuple(logs), tuple(rats))


def build_potential(spec: SystemSpec, tol=1e-10) -> PotentialRep:
    """Potential of the system: primitive of p (anti-holomorphic case,
    purely polynomial) or of 1/p (holomorphic case, partial fractions).
    """
    if spec.p.is_zero():
        raise ZeroPolynomial("system polynomial is identically zero")
    if spec.kind is SystemKind.ANTI_HOLOMORPHIC:
        return PotentialRep(spec.p.antiderivative())
    if spec.p.degree == 0:
        return PotentialRep(CPoly([0.0, 1.0 / spec.p.coeffs[0]]))
    return partial_fraction_primitive(CPoly([1.0]), spec.p, tol=tol)


def eval_potential(rep: PotentialRep, z) -> complex:
    """Evaluate the potential with principal logarithms.

    Raises AtPole when z is within 1e-12 * max(1, |pole|) of a pole.
    """
    z = complex(z)
    for pole in rep.poles():
        if abs(z - pole) < 1e-12 * max(1.0, abs(pole)):
            raise AtPole(f"evaluation at pole {pole}")
    val = rep.poly_part(z)
    for res, pole in rep.log_terms:
        val += res * np.log(z - pole)
    for coeff, pole, order in rep.rational_terms:
        val += coeff / (z - pole) ** order
    return complex(val)


def potential_derivative(rep: PotentialRep, z) -> complex:
    """Analytic derivative of the represented potential at z."""
    z = complex(z)
    val = rep.poly_part.derivative()(z)
    for res, pole in rep.log_terms:
        val += res / (z - pole)
    for coeff, pole, order in rep.rational_terms:
        val += -order * coeff / (z - pole) ** (order + 1)
    return complex(val)


def first_integral(rep: PotentialRep, x: float, y: float):
    """(phi, psi) = (Re, Im) of the potential at x + iy."""
    w = eval_potential(rep, complex(x, y))
    return w.real, w.imag


def rectify(rep: PotentialRep, z) -> complex:
    """Rectifying coordinate w = Phi(z): along trajectories of
    zdot = p(z), Im w is constant and Re w advances at unit speed."""
    return eval_potential(rep, z)


class NormalFormKind(enum.Enum):
    MONOMIAL = "monomial"   # f(z) = z**n, n integer, n != 1
    RESONANT = "resonant"   # f(z) = z**n / (1 + z**(n-1)), n >= 2


def normal_form_potential(n: int, kind: NormalFormKind):
    """Closed-form (x, y) -> (phi, psi) for the normal-form fields.

    Monomial: Omega = z**(1-n)/(1-n), written in polar form with the
    two-argument arctangent. Resonant adds log(r) to phi and the polar
    angle to psi.
    """
    if kind is NormalFormKind.MONOMIAL:
        if n == 1:
            raise ExcludedExponent("n = 1 has potential log z, not a power law")
    else:
        if n < 2:
            raise ValueError("resonant normal form requires n >= 2")

    def evaluate(x, y):
        r2 = x * x + y * y
        if r2 == 0.0:
            raise UndefinedAtOrigin("normal-form potential singular at the origin")
        theta = np.arctan2(y, x)
        k = 1 - n
        amp = r2 ** (k / 2.0) / k
        phi = amp * np.cos(k * theta)
        psi = amp * np.sin(k * theta)
        if kind is NormalFormKind.RESONANT:
            phi += 0.5 * np.log(r2)
            psi += theta
        return phi, psi

    return evaluate
