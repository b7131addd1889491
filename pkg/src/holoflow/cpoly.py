"""Complex and real polynomial arithmetic.

Dense univariate polynomials (ascending coefficients), an
Aberth-Ehrlich simultaneous root finder with multiplicity clustering,
Sturm-sequence real-root isolation, symmetric divided-difference
polynomials in two variables, and Sylvester resultants eliminating one
of the two variables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateLeadingCoefficient,
    IdenticallyZero,
    NonConvergence,
)

DEFAULT_TOL = 1e-10
DEFAULT_CLUSTER_TOL = 1e-6


class CPoly:
    """Univariate polynomial with complex coefficients, ascending order.

    Trailing (highest-degree) coefficients that are exactly zero are
    trimmed so that ``degree == len(coeffs) - 1`` and the leading
    coefficient of a nonzero polynomial is nonzero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
        n = len(c)
        while n > 1 and c[n - 1] == 0:
            n -= 1
        c = c[:n].copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __setattr__(self, name, value):
        raise AttributeError("CPoly is immutable")

    @classmethod
    def from_roots(cls, roots, leading=1.0):
        """Expand prod (z - r) over the given roots (with repetition)."""
        c = np.array([complex(leading)])
        for r in roots:
            c = np.convolve(c, np.array([-complex(r), 1.0]))
        return cls(c)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return self.degree == 0 and self.coeffs[0] == 0

    def __call__(self, z):
        """Horner evaluation; accepts scalars or numpy arrays."""
        z = np.asarray(z, dtype=complex)
        acc = np.full(z.shape, self.coeffs[-1])
        for c in self.coeffs[-2::-1]:
            acc = acc * z + c
        return acc if acc.shape else complex(acc)

    def derivative(self):
        if self.degree == 0:
            return CPoly([0.0])
        k = np.arange(1, self.degree + 1)
        return CPoly(self.coeffs[1:] * k)

    def antiderivative(self):
        """Term-by-term primitive with zero constant term."""
        k = np.arange(1, self.degree + 2)
        return CPoly(np.concatenate([[0.0], self.coeffs / k]))

    def real_coeffs(self, tol=1e-12):
        """Coefficients as floats; raises if any imaginary part is material."""
        scale = max(1.0, float(np.max(np.abs(self.coeffs))))
        if np.max(np.abs(self.coeffs.imag)) > tol * scale:
            raise ValueError("polynomial has non-real coefficients")
        return self.coeffs.real.copy()

    # -- arithmetic helpers (used by expansion, Sturm chains, tests) --

    def _lifted(self, other):
        if isinstance(other, CPoly):
            return other
        return CPoly([other])

    def __add__(self, other):
        other = self._lifted(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, dtype=complex)
        a[: len(self.coeffs)] += self.coeffs
        a[: len(other.coeffs)] += other.coeffs
        return CPoly(a)

    __radd__ = __add__

    def __neg__(self):
        return CPoly(-self.coeffs)

    def __sub__(self, other):
        return self + (-self._lifted(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CPoly):
            return CPoly(np.convolve(self.coeffs, other.coeffs))
        return CPoly(self.coeffs * complex(other))

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, CPoly) and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def __repr__(self):
        return f"CPoly({list(self.coeffs)})"


@dataclass(frozen=True)
class RootSet:
    """Roots with multiplicities; multiplicities sum to the source degree."""

    roots: tuple  # of (location: complex, multiplicity: int)

    def total_multiplicity(self):
        return sum(m for _, m in self.roots)

    def locations(self):
        return [z for z, _ in self.roots]

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)


def eval_poly(p: CPoly, z):
    """Horner evaluation of p at z."""
    return p(z)


def derivative(p: CPoly) -> CPoly:
    return p.derivative()


def antiderivative(p: CPoly) -> CPoly:
    return p.antiderivative()


def _aberth(coeffs, tol, max_iter):
    """Aberth-Ehrlich simultaneous iteration on a normalized polynomial."""
    n = len(coeffs) - 1
    lead = coeffs[-1]
    radius = 1.0 + float(np.max(np.abs(coeffs[:-1] / lead))) if n > 0 else 1.0
    # spread starting points on a circle with an irrational-ish phase so
    # symmetric configurations do not trap the iteration
    ang = 2.0 * np.pi * np.arange(n) / n + 0.4
    x = radius * np.exp(1j * ang)
    dcoeffs = coeffs[1:] * np.arange(1, n + 1)
    pnorm = float(np.max(np.abs(coeffs)))

    def horner(c, z):
        acc = np.full(z.shape, c[-1])
        for ck in c[-2::-1]:
            acc = acc * z + ck
        return acc

    # Iterate until the corrections stagnate at machine level. Multiple
    # roots converge only linearly with clouds of radius ~eps**(1/m), so
    # the correction threshold (not the polynomial residual) is the
    # primary stop; the residual is the final acceptance gate.
    prev_w = np.inf
    for it in range(max_iter):
        pv = horner(coeffs, x)
        dv = horner(dcoeffs, x)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = np.where(dv != 0, pv / np.where(dv == 0, 1, dv), 0.0)
            diff = x[:, None] - x[None, :]
            np.fill_diagonal(diff, np.inf)
            s = np.sum(1.0 / diff, axis=1)
            denom = 1.0 - newton * s
            w = np.where(np.abs(denom) > 1e-300, newton / np.where(denom == 0, 1, denom), newton)
        if not np.all(np.isfinite(w)):
            w = np.where(np.isfinite(w), w, 0.1 * radius * np.exp(1j * ang))
        x = x - w
        wmax = float(np.max(np.abs(w) / (1.0 + np.abs(x))))
        if wmax <= 1e-13:
            break
        # corrections stalled at the multiple-root noise floor
        if it > 20 and wmax > 0.5 * prev_w and wmax < 1e-5:
            break
        prev_w = wmax
    pv = horner(coeffs, x)
    scale = pnorm * np.maximum(1.0, np.abs(x)) ** n
    if np.all(np.abs(pv) <= tol * scale):
        return x
    raise NonConvergence(
        f"Aberth iteration did not meet tol={tol:g} within {max_iter} iterations"
    )


def _cluster(points, cluster_tol):
    """Greedy merge of approximate roots into multiplicity clusters.

    Two clusters merge when their centers lie within
    cluster_tol**(1/m) * max(1, |center|) of each other, m being the
    combined size: multiple roots of multiplicity m are resolved by the
    iteration only to a radius on that order.
    """
    clusters = [[z] for z in points]
    merged = True
    while merged:
        merged = False
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                ci, cj = clusters[i], clusters[j]
                zi = np.mean(ci)
                zj = np.mean(cj)
                m = len(ci) + len(cj)
                radius = cluster_tol ** (1.0 / m) * max(1.0, abs(zi), abs(zj))
                if abs(zi - zj) <= radius:
                    clusters[i] = ci + cj
                    del clusters[j]
                    merged = True
                    break
            if merged:
                break
    return [(complex(np.mean(c)), len(c)) for c in clusters]


def roots(p: CPoly, tol=DEFAULT_TOL, cluster_tol=DEFAULT_CLUSTER_TOL, max_iter=200) -> RootSet:
    """All complex roots of p with multiplicities.

    Raises NonConvergence if the simultaneous iteration stalls.
    """
    if p.degree < 1:
        raise ValueError("roots() requires degree >= 1")
    approx = _aberth(p.coeffs, tol, max_iter)
    clustered = _cluster(list(approx), cluster_tol)
    dp = p.derivative()
    refined = []
    for z0, m in clustered:
        if m == 1:
            # Newton polish to full precision
            z = z0
            for _ in range(3):
                dv = dp(z)
                if dv == 0:
                    break
                step = p(z) / dv
                z = z - step
                if abs(step) <= 1e-16 * (1.0 + abs(z)):
                    break
            if abs(z - z0) < cluster_tol * max(1.0, abs(z0)):
                z0 = z
        if m > 1:
            # an m-fold root of p is a simple root of the (m-1)-th
            # derivative: polish the cluster mean with Newton there
            q = p
            for _ in range(m - 1):
                q = q.derivative()
            dq = q.derivative()
            z = z0
            for _ in range(3):
                dv = dq(z)
                if dv == 0:
                    break
                z = z - q(z) / dv
            if abs(z - z0) < cluster_tol ** (1.0 / m) * max(1.0, abs(z0)):
                z0 = z
        refined.append((z0, m))
    refined.sort(key=lambda t: (t[0].real, t[0].imag))
    return RootSet(tuple(refined))


# --------------------------------------------------------------------------
# real-root isolation (Sturm sequences)
# --------------------------------------------------------------------------

def _polydiv(num, den):
    """Quotient/remainder for ascending float coefficient arrays."""
    num = np.array(num, dtype=float)
    den = np.asarray(den, dtype=float)
    dn, dd = len(num) - 1, len(den) - 1
    if dn < dd:
        return np.zeros(1), num
    q = np.zeros(dn - dd + 1)
    for k in range(dn - dd, -1, -1):
        q[k] = num[dd + k] / den[dd]
        num[k : dd + k + 1] -= q[k] * den
    rem = num[:dd] if dd > 0 else np.zeros(1)
    return q, rem


def _trim_real(c, rel=1e-13):
    c = np.asarray(c, dtype=float)
    scale = np.max(np.abs(c)) if len(c) else 0.0
    if scale == 0.0:
        return np.zeros(1)
    c = np.where(np.abs(c) <= rel * scale, 0.0, c)
    n = len(c)
    while n > 1 and c[n - 1] == 0.0:
        n -= 1
    return c[:n]


def _sturm_chain(c):
    """Canonical Sturm chain; terminates at the (approximate) gcd."""
    chain = [_trim_real(c)]
    d = chain[0]
    if len(d) > 1:
        deriv = d[1:] * np.arange(1, len(d))
        chain.append(_trim_real(deriv))
        while len(chain[-1]) > 1:
            _, rem = _polydiv(chain[-2], chain[-1])
            rem = _trim_real(rem)
            if len(rem) == 1 and rem[0] == 0.0:
                break
            chain.append(-rem)
    return chain


def _sign_changes(chain, x):
    prev = 0
    count = 0
    for c in chain:
        v = 0.0
        for ck in c[::-1]:
            v = v * x + ck
        s = 0 if v == 0.0 else (1 if v > 0 else -1)
        if s != 0:
            if prev != 0 and s != prev:
                count += 1
            prev = s
    return count


def real_roots(r: CPoly, interval=None, tol=DEFAULT_TOL):
    """All distinct real roots of a real-coefficient polynomial, sorted.

    Counting uses a Sturm sequence (exact distinct-root counts even in
    the presence of multiple roots), then each isolated root is refined
    by count-preserving bisection and Newton polish. Raises
    IdenticallyZero for the zero polynomial.
    """
    c = _trim_real(r.real_coeffs())
    if len(c) == 1:
        if c[0] == 0.0:
            raise IdenticallyZero("zero polynomial has a continuum of roots")
        return np.array([])
    chain = _sturm_chain(c)
    lead = c[-1]
    bound = 1.0 + float(np.max(np.abs(c[:-1] / lead)))
    if interval is None:
        lo, hi = -bound, bound
    else:
        lo, hi = float(interval[0]), float(interval[1])
        lo, hi = max(lo, -bound), min(hi, bound)
        if lo >= hi:
            return np.array([])
    # nudge endpoints off possible roots; Sturm counts roots in (lo, hi]
    eps = 1e-12 * max(1.0, abs(lo), abs(hi))
    while _eval_real(c, lo) == 0.0:
        lo -= eps
        eps *= 2
    total = _sign_changes(chain, lo) - _sign_changes(chain, hi)
    out = []
    stack = [(lo, hi, total)]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append(_refine_root(c, chain, a, b, tol))
            continue
        mid = 0.5 * (a + b)
        while _eval_real(c, mid) == 0.0:
            mid += eps
        va = _sign_changes(chain, a)
        vm = _sign_changes(chain, mid)
        vb = _sign_changes(chain, b)
        stack.append((a, mid, va - vm))
        stack.append((mid, b, vm - vb))
    return np.array(sorted(out))


def _eval_real(c, x):
    v = 0.0
    for ck in c[::-1]:
        v = v * x + ck
    return v


def _refine_root(c, chain, a, b, tol):
    # bisection on the Sturm count keeps working for even-multiplicity
    # roots, where the plain sign of the polynomial does not change
    va = _sign_changes(chain, a)
    for _ in range(80):
        if b - a <= 1e-14 * max(1.0, abs(a), abs(b)):
            break
        mid = 0.5 * (a + b)
        vm = _sign_changes(chain, mid)
        if va - vm >= 1:
            b = mid
        else:
            a = mid
            va = vm
    x = 0.5 * (a + b)
    dc = c[1:] * np.arange(1, len(c)) if len(c) > 1 else np.zeros(1)
    for _ in range(8):
        fx = _eval_real(c, x)
        if abs(fx) <= tol:
            break
        dfx = _eval_real(dc, x)
        if dfx == 0.0:
            break
        step = fx / dfx
        if not (a - 1e-9 <= x - step <= b + 1e-9):
            break
        x -= step
    return x


# --------------------------------------------------------------------------
# symmetric bivariate polynomials and resultants
# --------------------------------------------------------------------------

class BivarSym:
    """Symmetric real polynomial in (x1, x2) over the monomial basis.

    coeffs[i, j] multiplies x1**i * x2**j and equals coeffs[j, i].
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=float)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValueError("coefficient matrix must be square")
        scale = max(1.0, float(np.max(np.abs(c))))
        if np.max(np.abs(c - c.T)) > 1e-12 * scale:
            raise ValueError("coefficient matrix must be symmetric")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __setattr__(self, name, value):
        raise AttributeError("BivarSym is immutable")

    @property
    def x2_degree(self):
        nz = np.nonzero(np.any(self.coeffs != 0.0, axis=0))[0]
        return int(nz[-1]) if len(nz) else 0

    def x2_poly(self, x1):
        """Ascending coefficients in x2 at numeric x1."""
        pows = np.asarray(x1, dtype=float) ** np.arange(self.coeffs.shape[0])
        return pows @ self.coeffs

    def x2_leading(self):
        """The leading-in-x2 coefficient as a real CPoly in x1."""
        return CPoly(self.coeffs[:, self.x2_degree].astype(complex))

    def __call__(self, x1, x2):
        p1 = np.asarray(x1, dtype=float) ** np.arange(self.coeffs.shape[0])
        p2 = np.asarray(x2, dtype=float) ** np.arange(self.coeffs.shape[1])
        return float(p1 @ self.coeffs @ p2)

    def __eq__(self, other):
        return isinstance(other, BivarSym) and np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self):
        return f"BivarSym({self.coeffs.tolist()})"


def divided_difference(q) -> BivarSym:
    """(q(x1) - q(x2)) / (x1 - x2) for a real univariate polynomial q.

    Computed exactly: the term q_k x**k contributes q_k times the
    complete homogeneous sum x1**i x2**j over i + j = k - 1.
    """
    if isinstance(q, CPoly):
        qc = q.real_coeffs()
    else:
        qc = np.asarray(q, dtype=float)
    deg = len(qc) - 1
    n = max(deg, 1)
    c = np.zeros((n, n))
    for k in range(1, deg + 1):
        if qc[k] == 0.0:
            continue
        for i in range(k):
            c[i, k - 1 - i] += qc[k]
    return BivarSym(c)


def _sylvester_matrix(ap, am):
    """Sylvester matrix for ascending coefficient rows ap (deg dp) and am."""
    dp, dm = len(ap) - 1, len(am) - 1
    n = dp + dm
    s = np.zeros((n, n))
    for r in range(dm):
        s[r, r : r + dp + 1] = ap[::-1]
    for r in range(dp):
        s[dm + r, r : r + dm + 1] = am[::-1]
    return s


def resultant_x2(c_plus: BivarSym, c_minus: BivarSym) -> CPoly:
    """Resultant of c_plus and c_minus with respect to x2, as a real
    polynomial in x1.

    The Sylvester determinant is evaluated at Chebyshev sample points
    (LU with partial pivoting) and the coefficients recovered by solving
    the Vandermonde system; noise below 1e-10 of the largest coefficient
    is trimmed.
    """
    dp, dm = c_plus.x2_degree, c_minus.x2_degree
    if dp == 0 or dm == 0:
        raise DegenerateLeadingCoefficient("inputs must have positive x2-degree")
    for b in (c_plus, c_minus):
        lead = b.x2_leading()
        if np.max(np.abs(lead.coeffs)) <= 1e-13 * max(1.0, np.max(np.abs(b.coeffs))):
            raise DegenerateLeadingCoefficient("leading x2-coefficient vanishes identically")
    d1p = c_plus.coeffs.shape[0] - 1
    d1m = c_minus.coeffs.shape[0] - 1
    deg_bound = d1p * dm + d1m * dp
    n = deg_bound + 1
    xs = 2.0 * np.cos(np.pi * (2 * np.arange(n) + 1) / (2 * n))
    vals = np.empty(n)
    for i, x in enumerate(xs):
        s = _sylvester_matrix(c_plus.x2_poly(x), c_minus.x2_poly(x))
        vals[i] = np.linalg.det(s)
    vander = np.vander(xs, n, increasing=True)
    coef = np.linalg.solve(vander, vals)
    scale = np.max(np.abs(coef))
    if scale > 0:
        coef = np.where(np.abs(coef) <= 1e-10 * scale, 0.0, coef)
    return CPoly(coef.astype(complex))
