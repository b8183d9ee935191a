"""Period lattices, torsion points, and the Jacobi sine.

The Jacobi sine here is the odd elliptic function on the doubled lattice
Z*omega1 + 2Z*omega2 with simple zeros on the full lattice Z*omega1 +
Z*omega2, simple poles on its translate by omega1/2, and unit derivative at
the origin.  Equivalently: s(z + omega1) = s(z), s(z + omega2) = -s(z), and
s(z + omega1/2) = a/s(z); one cell of the doubled lattice carries two zeros
(0 and omega2) and two poles (omega1/2 and omega1/2 + omega2).  It is
realized as a quotient of four first theta functions whose zero set and pole
set have equal sums in the plane (representatives 0, omega2 against omega1/2,
omega2 - omega1/2), which makes the quotient genuinely elliptic rather than
merely quasi-periodic.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .series import TruncatedSeries

#: absolute distance below which evaluation refuses to approach a pole
POLE_TOL = 1e-10
#: per-coordinate tolerance for recognizing rational (torsion) coordinates
RATIONAL_TOL = 1e-9


class LatticeError(ValueError):
    """Degenerate or unsupported period lattice."""


class PoleError(ArithmeticError):
    """Evaluation requested too close to a pole."""


class TorsionError(ValueError):
    """A torsion point was required but the input is not one."""


@dataclass(frozen=True)
class Lattice:
    """Period lattice Z*omega1 + Z*omega2 with the doubled sublattice attached."""

    omega1: complex
    omega2: complex

    def __post_init__(self):
        object.__setattr__(self, "omega1", complex(self.omega1))
        object.__setattr__(self, "omega2", complex(self.omega2))
        ratio = self.omega2 / self.omega1
        if abs(ratio.imag) <= 1e-12:
            raise LatticeError("periods are R-linearly dependent")

    def coordinates(self, z):
        """Real coordinates (x, y) with z = x*omega1 + y*omega2."""
        z = complex(z)
        a, b = self.omega1, self.omega2
        det = a.real * b.imag - a.imag * b.real
        x = (z.real * b.imag - z.imag * b.real) / det
        y = (a.real * z.imag - a.imag * z.real) / det
        return x, y

    def from_coordinates(self, x, y):
        return x * self.omega1 + y * self.omega2

    def doubled_generators(self):
        return self.omega1, 2.0 * self.omega2

    @property
    def scale(self):
        return abs(self.omega1) + abs(self.omega2)

    def reduce_centered(self, z):
        """Representative of z modulo the lattice with coordinates in [-1/2, 1/2)."""
        x, y = self.coordinates(z)
        return self.from_coordinates(x - round(x), y - round(y))

    def contains(self, z, tol=RATIONAL_TOL):
        x, y = self.coordinates(z)
        return abs(x - round(x)) <= tol and abs(y - round(y)) <= tol


def _reduced_basis(g1, g2):
    """Lagrange-reduced basis of the lattice Z*g1 + Z*g2, with Im(g2/g1) > 0."""
    g1, g2 = complex(g1), complex(g2)
    for _ in range(256):
        if abs(g1) > abs(g2):
            g1, g2 = g2, g1
        t = round((g2 * g1.conjugate()).real / abs(g1) ** 2)
        g2 = g2 - t * g1
        if abs(g2) >= abs(g1) * (1.0 - 1e-15):
            break
    if (g2 / g1).imag < 0:
        g2 = -g2
    return g1, g2


class CurvePoint:
    """Point of the complex torus, reduced to the doubled fundamental domain.

    The stored representative has coordinates in [0,1) x [0,2) with respect to
    the (omega1, omega2) basis, i.e. it lies in a fundamental parallelogram of
    the doubled lattice.  Torsion is always measured against the full lattice.
    """

    def __init__(self, z, lattice, exact_order=None):
        self.lattice = lattice
        x, y = lattice.coordinates(z)
        x -= math.floor(x)
        y -= 2.0 * math.floor(y / 2.0)
        if x > 1.0 - 1e-12:
            x = 0.0
        if y > 2.0 - 1e-12:
            y = 0.0
        self.z = lattice.from_coordinates(x, y)
        self.coords = (x, y)
        self._order = exact_order

    @classmethod
    def from_coordinates(cls, x, y, lattice):
        return cls(lattice.from_coordinates(x, y), lattice)

    def order(self, n_max=64):
        """Smallest n <= n_max with n*z in the lattice, or None."""
        if self._order is not None and self._order <= n_max:
            return self._order
        x, y = self.coords
        for n in range(1, n_max + 1):
            tol = n * RATIONAL_TOL + 1e-12
            if abs(n * x - round(n * x)) <= tol and abs(n * y - round(n * y)) <= tol:
                self._order = n
                return n
        return None

    def approx_eq(self, other, tol=1e-9):
        diff = self.lattice.reduce_centered(self.z - other.z)
        return abs(diff) <= tol * max(1.0, self.lattice.scale)

    def __repr__(self):
        x, y = self.coords
        return f"CurvePoint({x:.6g}*w1 + {y:.6g}*w2)"


def exact_order(point, n_max):
    """Exact torsion order of the point with respect to the full lattice."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    return point.order(n_max)


def epsilon_sign(point, n=None, n_max=64):
    """The sign epsilon with s(x + n*alpha) = epsilon * s(x).

    Writing n*alpha = a*omega1 + b*omega2 with integer a, b, the quasi-period
    rules give epsilon = (-1)**b.  `n` defaults to the exact order of the point.
    """
    if n is None:
        n = point.order(n_max)
        if n is None:
            raise TorsionError("point is not torsion within the search bound")
    x, y = point.lattice.coordinates(n * point.z)
    tol = abs(n) * RATIONAL_TOL + 1e-9
    if abs(x - round(x)) > tol or abs(y - round(y)) > tol:
        raise TorsionError(f"{n} times the point does not lie in the lattice")
    return -1 if round(y) % 2 else 1


# ---------------------------------------------------------------------------
# theta machinery
# ---------------------------------------------------------------------------


def _theta_term_count(im_tau):
    for n in range(3, 40):
        if math.pi * im_tau * ((n + 0.5) ** 2 - (2 * n + 1) * 1.1) > 85.0:
            return n + 1
    return 40


class JacobiSine:
    """Evaluator for the Jacobi sine of a given lattice."""

    def __init__(self, lattice):
        self.lattice = lattice
        g1, g2 = lattice.doubled_generators()
        p1, p2 = _reduced_basis(g1, g2)
        tau = p2 / p1
        if tau.imag > 100.0:
            raise LatticeError("lattice too elongated for stable theta evaluation")
        self.p1, self.p2 = p1, p2
        self.tau = tau
        self.q = cmath.exp(1j * math.pi * tau)
        self._nterms = _theta_term_count(tau.imag)
        ns = np.arange(self._nterms)
        self._signs = (-1.0) ** ns
        self._qpow = np.asarray([self.q ** ((n + 0.5) ** 2) for n in ns])
        self._odd = 2 * ns + 1
        self._theta1_prime0 = 2.0 * complex(np.sum(self._signs * self._qpow * self._odd))
        # inverse of the (p1, p2) coordinate matrix
        det = p1.real * p2.imag - p1.imag * p2.real
        self._inv = ((p2.imag / det, -p2.real / det), (-p1.imag / det, p1.real / det))

        w1, w2 = lattice.omega1, lattice.omega2
        self.zero_reps = (0.0 + 0j, w2)
        self.pole_reps = (w1 / 2.0, w2 - w1 / 2.0)
        self._c1 = w2
        self._c2 = w1 / 2.0
        self._c3 = w2 - w1 / 2.0
        self._norm = (
            (p1 / math.pi)
            / self._theta1_prime0
            * self._theta_factor(-self._c2)
            * self._theta_factor(-self._c3)
            / self._theta_factor(-self._c1)
        )
        self._half_constant = None
        self._self_check()

    # -- internals ----------------------------------------------------------

    def _coords(self, z):
        (a, b), (c, d) = self._inv
        if isinstance(z, np.ndarray):
            return a * z.real + b * z.imag, c * z.real + d * z.imag
        z = complex(z)
        return a * z.real + b * z.imag, c * z.real + d * z.imag

    def _theta1(self, v):
        if isinstance(v, np.ndarray):
            args = np.multiply.outer(v, self._odd)
            return 2.0 * np.sum(self._signs * self._qpow * np.sin(args), axis=-1)
        total = 0j
        for s, qp, o in zip(self._signs, self._qpow, self._odd):
            total += s * qp * cmath.sin(o * v)
        return 2.0 * total

    def _theta_factor(self, z):
        """theta1(pi z / p1) with the argument reduced into the base cell first.

        Quasi-periodicity factors for the removed lattice part are reapplied,
        so the value equals the unreduced theta exactly.
        """
        x, y = self._coords(z)
        if isinstance(z, np.ndarray):
            m = np.round(x)
            k = np.round(y)
            zr = z - m * self.p1 - k * self.p2
            v = math.pi * zr / self.p1
            val = self._theta1(v)
            shifted = (m != 0) | (k != 0)
            if np.any(shifted):
                phase = (-1.0) ** (m + k) * self.q ** (-(k**2)) * np.exp(-2j * k * v)
                val = np.where(shifted, val * phase, val)
            return val
        m = round(x)
        k = round(y)
        zr = z - m * self.p1 - k * self.p2
        v = math.pi * zr / self.p1
        val = self._theta1(v)
        if m or k:
            val *= (-1.0) ** (m + k) * self.q ** (-(k * k)) * cmath.exp(-2j * k * v)
        return val

    def _raw(self, z):
        return (
            self._norm
            * self._theta_factor(z)
            * self._theta_factor(z - self._c1)
            / (self._theta_factor(z - self._c2) * self._theta_factor(z - self._c3))
        )

    def _orbit_distance(self, z, rep):
        """Distance from z to the doubled-lattice orbit of rep."""
        w = z - rep
        x, y = self._coords(w)
        zr = w - round(x) * self.p1 - round(y) * self.p2
        best = abs(zr)
        for i in (-1, 0, 1):
            for j in (-1, 0, 1):
                best = min(best, abs(zr + i * self.p1 + j * self.p2))
        return best

    def _self_check(self):
        scale = self.lattice.scale
        h = 1e-3 * scale
        d = (
            8.0 * (self._raw(h) - self._raw(-h)) - (self._raw(2 * h) - self._raw(-2 * h))
        ) / (12.0 * h)
        if abs(d - 1.0) > 1e-8:
            raise LatticeError(f"normalization failed: s'(0) = {d!r}")
        for x, y in ((0.13, 0.29), (0.41, 0.77), (0.23, 1.31)):
            z = self.lattice.from_coordinates(x, y)
            if abs(self._raw(z) + self._raw(-z)) > 1e-8 * max(1.0, abs(self._raw(z))):
                raise LatticeError("oddness check failed at construction")

    # -- public API ----------------------------------------------------------

    def nearest_pole_distance(self, z):
        return min(self._orbit_distance(z, rep) for rep in self.pole_reps)

    def nearest_zero_distance(self, z):
        return min(self._orbit_distance(z, rep) for rep in self.zero_reps)

    def eval(self, z):
        """Value of the Jacobi sine at z; errors within 1e-10 of a pole."""
        z = complex(z)
        if self.nearest_pole_distance(z) < POLE_TOL:
            raise PoleError("pole")
        return self._raw(z)

    def evaluate_many(self, zs):
        """Vectorized evaluation; every input must stay clear of the poles."""
        zs = np.asarray(zs, dtype=complex)
        for rep in self.pole_reps:
            w = zs - rep
            x, y = self._coords(w)
            zr = w - np.round(x) * self.p1 - np.round(y) * self.p2
            dist = np.abs(zr)
            for i in (-1, 0, 1):
                for j in (-1, 0, 1):
                    dist = np.minimum(dist, np.abs(zr + i * self.p1 + j * self.p2))
            if np.any(dist < POLE_TOL):
                raise PoleError("pole")
        return self._raw(zs)

    def taylor(self, order):
        """Taylor series at the origin via Cauchy-integral coefficients (FFT)."""
        return self.local_expansion(0.0, order)

    def local_expansion(self, center, order, nsamples=256):
        """Laurent window of x -> s(center + x) around x = 0.

        The expansion has lowest exponent -1 when `center` sits on a pole
        (within 1e-10) and 0 otherwise.  Coefficients come from a discrete
        Cauchy integral on a circle staying well inside the nearest
        singularity.
        """
        center = complex(center)
        dists = [self._orbit_distance(center, rep) for rep in self.pole_reps]
        at_pole = min(dists) < POLE_TOL
        if at_pole:
            low = -1
            clear = [d for d in dists if d >= POLE_TOL]
            clear.append(abs(self.p1))
            radius = 0.6 * min(clear)
        else:
            low = 0
            radius = 0.6 * min(dists)
        if order - low + 2 > nsamples // 2:
            raise ValueError("expansion order too large for the sample count")
        angles = 2.0 * math.pi * np.arange(nsamples) / nsamples
        ring = center + radius * np.exp(1j * angles)
        vals = self._raw(ring)
        hat = np.fft.fft(vals) / nsamples
        coeffs = []
        for k in range(low, order + 1):
            c = hat[k % nsamples] * radius ** (-k)
            coeffs.append(complex(c))
        return TruncatedSeries(low, tuple(coeffs))

    def half_period_constant(self):
        """The constant a with s(z + omega1/2) = a / s(z)."""
        if self._half_constant is None:
            half = self.lattice.omega1 / 2.0
            samples = []
            for x, y in ((0.231, 0.317), (0.111, 0.583), (0.352, 1.173), (0.442, 0.741)):
                z = self.lattice.from_coordinates(x, y)
                samples.append(self._raw(z + half) * self._raw(z))
            spread = max(abs(s - samples[0]) for s in samples)
            if spread > 1e-6 * max(1.0, abs(samples[0])):
                raise ArithmeticError("half-period product failed to be constant")
            self._half_constant = samples[0]
        return self._half_constant


def jacobi_sine_eval(sine, z):
    """Value of the Jacobi sine at z (errors near poles)."""
    return sine.eval(z)


def jacobi_sine_taylor(sine, order):
    """Taylor series of the Jacobi sine at the origin, tracked to `order`."""
    if order < 1:
        raise ValueError("order must be at least 1")
    return sine.taylor(order)


def half_period_constant(sine):
    return sine.half_period_constant()


def sine_over_x(sine, order):
    """The unital even series s(x)/x, suitable for multiplicative expansions."""
    s = sine.taylor(order + 1)
    coeffs = [s.coefficient(k + 1) for k in range(order + 1)]
    return TruncatedSeries(0, tuple(coeffs))
