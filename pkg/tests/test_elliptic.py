import math

import mpmath as mp
import numpy as np
import pytest

from ellgenus import (
    CurvePoint,
    JacobiSine,
    Lattice,
    LatticeError,
    PoleError,
    TorsionError,
    epsilon_sign,
    exact_order,
    half_period_constant,
    jacobi_sine_eval,
    jacobi_sine_taylor,
)

mp.mp.dps = 30


def mpmath_sigma_quotient(lattice):
    """Independent construction: quotient of four Weierstrass sigma functions
    of the doubled lattice, pole representatives chosen so the zero and pole
    sums agree, normalized to unit derivative at 0.  Built entirely on
    mpmath's jtheta."""
    w1, w2 = mp.mpc(lattice.omega1), mp.mpc(lattice.omega2)
    p1, p2 = w1, 2 * w2
    tau = p2 / p1
    if mp.im(tau) < 0:
        p2, tau = -p2, -tau
    q = mp.exp(1j * mp.pi * tau)
    t1p = mp.jtheta(1, 0, q, 1)
    t1ppp = mp.jtheta(1, 0, q, 3)
    eta = -mp.pi**2 / (12 * (p1 / 2)) * (t1ppp / t1p)

    def sigma(z):
        return p1 / mp.pi * mp.exp(eta * z**2 / p1) * mp.jtheta(1, mp.pi * z / p1, q) / t1p

    c1, c2, c3 = w2, w1 / 2, w2 - w1 / 2
    norm = sigma(-c2) * sigma(-c3) / sigma(-c1)

    def s(z):
        z = mp.mpc(z)
        return complex(norm * sigma(z) * sigma(z - c1) / (sigma(z - c2) * sigma(z - c3)))

    return s


def winding(sine, corners, samples_per_edge=600):
    """Total phase winding of s along the closed polyline through `corners`."""
    pts = []
    for a, b in zip(corners, corners[1:] + corners[:1]):
        t = np.linspace(0.0, 1.0, samples_per_edge, endpoint=False)
        pts.append(a + (b - a) * t)
    pts = np.concatenate(pts)
    vals = sine.evaluate_many(pts)
    ratios = vals[np.arange(1, len(vals) + 1) % len(vals)] / vals
    steps = np.angle(ratios)
    assert np.max(np.abs(steps)) < 2.5, "contour passes too close to a zero or pole"
    return float(np.sum(steps) / (2.0 * math.pi))


def cell_box(lattice, x0, x1, y0, y1):
    """Corners of the parallelogram x in [x0,x1], y in [y0,y1] in the
    (omega1, omega2) coordinate system."""
    f = lattice.from_coordinates
    return [f(x0, y0), f(x1, y0), f(x1, y1), f(x0, y1)]


class TestLattice:
    def test_rejects_degenerate(self):
        with pytest.raises(LatticeError):
            Lattice(1.0, 2.0)

    def test_coordinates_roundtrip(self, generic_lattice, rng):
        for _ in range(20):
            x, y = rng.normal(), rng.normal()
            z = generic_lattice.from_coordinates(x, y)
            got = generic_lattice.coordinates(z)
            assert abs(got[0] - x) < 1e-12 and abs(got[1] - y) < 1e-12


class TestCurvePointAndTorsion:
    def test_reduction_window(self, square_lattice):
        p = CurvePoint(3.25 + 7.5j, square_lattice)
        x, y = p.coords
        assert 0 <= x < 1 and 0 <= y < 2

    def test_exact_order_half_period(self, square_lattice):
        p = CurvePoint(square_lattice.omega1 / 2, square_lattice)
        assert exact_order(p, 10) == 2

    def test_exact_order_third(self, square_lattice):
        p = CurvePoint((square_lattice.omega1 + square_lattice.omega2) / 3, square_lattice)
        assert exact_order(p, 10) == 3

    def test_exact_order_irrational(self, square_lattice):
        p = CurvePoint(0.3183098861837907 * square_lattice.omega1, square_lattice)
        assert exact_order(p, 50) is None

    def test_lattice_point_has_order_one(self, square_lattice):
        p = CurvePoint(square_lattice.omega2, square_lattice)
        assert exact_order(p, 10) == 1

    def test_epsilon_omega2_half(self, square_lattice):
        p = CurvePoint(square_lattice.omega2 / 2, square_lattice)
        assert epsilon_sign(p) == -1

    def test_epsilon_omega1_third(self, square_lattice):
        p = CurvePoint(square_lattice.omega1 / 3, square_lattice)
        assert epsilon_sign(p) == 1

    def test_epsilon_mixed_half(self, square_lattice):
        p = CurvePoint((square_lattice.omega1 + square_lattice.omega2) / 2, square_lattice)
        assert epsilon_sign(p) == -1

    def test_epsilon_non_torsion_raises(self, square_lattice):
        p = CurvePoint(0.3183098861837907 * square_lattice.omega1, square_lattice)
        with pytest.raises(TorsionError):
            epsilon_sign(p)

    def test_epsilon_matches_sine(self, square_sine, rng):
        # s(z + n*alpha) = epsilon * s(z) at random z, for several torsion points
        lattice = square_sine.lattice
        cases = [(1, 2, 4), (1, 0, 3), (2, 3, 6), (0, 1, 2), (1, 1, 2)]
        for i, j, n in cases:
            p = CurvePoint.from_coordinates(i / n, j / n, lattice)
            eps = epsilon_sign(p, n=n)
            for _ in range(5):
                z = lattice.from_coordinates(rng.uniform(0.05, 0.4), rng.uniform(0.1, 0.6))
                lhs = square_sine.eval(z + n * p.z)
                assert abs(lhs - eps * square_sine.eval(z)) < 1e-10


class TestSineProperties:
    @pytest.mark.parametrize("which", ["square", "generic"])
    def test_quasi_periods_on_grid(self, which, square_sine, generic_sine, rng):
        sine = square_sine if which == "square" else generic_sine
        lat = sine.lattice
        w1, w2 = lat.omega1, lat.omega2
        for _ in range(100):
            z = lat.from_coordinates(rng.uniform(0.02, 0.95), rng.uniform(0.02, 1.9))
            if sine.nearest_pole_distance(z) < 1e-3:
                continue
            v = sine.eval(z)
            assert abs(sine.eval(-z) + v) < 1e-8
            assert abs(sine.eval(z + w1) - v) < 1e-8
            assert abs(sine.eval(z + w2) + v) < 1e-8
            assert abs(sine.eval(z + 2 * w2) - v) < 1e-8

    def test_derivative_normalization(self, square_sine, generic_sine):
        for sine in (square_sine, generic_sine):
            h = 1e-3
            d = (
                8 * (sine.eval(h) - sine.eval(-h)) - (sine.eval(2 * h) - sine.eval(-2 * h))
            ) / (12 * h)
            assert abs(d - 1) < 1e-8

    def test_pole_refusal(self, square_sine):
        with pytest.raises(PoleError, match="pole"):
            square_sine.eval(square_sine.lattice.omega1 / 2)

    def test_zero_at_origin_and_omega2(self, square_sine):
        assert abs(square_sine.eval(0.0)) < 1e-12
        assert abs(square_sine.eval(square_sine.lattice.omega2)) < 1e-12

    @pytest.mark.parametrize("which", ["square", "generic"])
    def test_census(self, which, square_sine, generic_sine):
        """Argument principle: one cell of the doubled lattice carries exactly
        two zeros (0, omega2) and two poles (omega1/2, omega1/2 + omega2)."""
        sine = square_sine if which == "square" else generic_sine
        lat = sine.lattice
        total = winding(sine, cell_box(lat, -0.25, 0.75, -0.5, 1.5))
        assert abs(total - 0.0) < 1e-6
        boxes = {
            (0.0, 0.0): (-0.25, 0.25, -0.5, 0.5),
            (0.5, 0.0): (0.25, 0.75, -0.5, 0.5),
            (0.0, 1.0): (-0.25, 0.25, 0.5, 1.5),
            (0.5, 1.0): (0.25, 0.75, 0.5, 1.5),
        }
        zeros, poles = 0, 0
        for (px, py), box in boxes.items():
            w = winding(sine, cell_box(lat, *box))
            assert abs(w - round(w)) < 1e-6
            w = round(w)
            assert w in (-1, 1)
            if w == 1:
                zeros += 1
                assert (px, py) in ((0.0, 0.0), (0.0, 1.0))
            else:
                poles += 1
                assert (px, py) in ((0.5, 0.0), (0.5, 1.0))
        assert zeros == 2 and poles == 2

    def test_value_against_sigma_quotient_oracle(self, square_sine, generic_sine):
        for sine in (square_sine, generic_sine):
            oracle = mpmath_sigma_quotient(sine.lattice)
            for z in (0.3 + 0.1j, 0.11 + 0.52j, -0.27 + 0.93j, 0.4 - 0.33j):
                assert abs(sine.eval(z) - oracle(z)) < 1e-12

    def test_value_against_classical_sn(self, square_sine):
        # On the square lattice, s(z) = sn(-2iKz | 1/2) / (-2iK) with K = K(1/2):
        # this matches periods, the zero and pole lattices, and s'(0) = 1.
        K = mp.ellipk(mp.mpf(1) / 2)
        c = -2j * K
        for z in (0.3 + 0.1j, 0.21 - 0.4j, 0.05 + 0.66j, 0.49 + 0.77j):
            oracle = complex(mp.ellipfun("sn", c * z, mp.mpf(1) / 2) / c)
            assert abs(square_sine.eval(z) - oracle) < 1e-12

    @pytest.mark.parametrize("which", ["square", "generic"])
    def test_ode_family_membership(self, which, square_sine, generic_sine, rng):
        """s is an elliptic sine: s'^2 = 1 - 2*delta*s^2 + eps*s^4 for
        constants delta, eps; fit at two points, verify at twenty more."""
        sine = square_sine if which == "square" else generic_sine
        lat = sine.lattice

        def sprime(z, h=1e-3):
            return (
                8 * (sine.eval(z + h) - sine.eval(z - h))
                - (sine.eval(z + 2 * h) - sine.eval(z - 2 * h))
            ) / (12 * h)

        zs = [lat.from_coordinates(0.17, 0.23), lat.from_coordinates(0.31, 0.41)]
        rows, rhs = [], []
        for z in zs:
            v = sine.eval(z)
            rows.append([2 * v**2, -(v**4)])
            rhs.append(1 - sprime(z) ** 2)
        delta, eps = np.linalg.solve(np.array(rows), np.array(rhs))
        for _ in range(20):
            z = lat.from_coordinates(rng.uniform(0.05, 0.45), rng.uniform(0.05, 0.9))
            if sine.nearest_pole_distance(z) < 0.1:
                continue
            v = sine.eval(z)
            resid = sprime(z) ** 2 - (1 - 2 * delta * v**2 + eps * v**4)
            assert abs(resid) < 1e-7
        # expansion consistency: s = z + a3 z^3 + ... forces a3 = -delta/3
        a3 = jacobi_sine_taylor(sine, 5).coefficient(3)
        assert abs(a3 + delta / 3) < 1e-8


class TestTaylor:
    def test_low_coefficients(self, square_sine):
        t = jacobi_sine_taylor(square_sine, 9)
        assert abs(t.coefficient(0)) < 1e-12
        assert abs(t.coefficient(1) - 1) < 1e-12

    def test_odd_series(self, square_sine, generic_sine):
        for sine in (square_sine, generic_sine):
            t = jacobi_sine_taylor(sine, 12)
            for k in range(0, 13, 2):
                assert abs(t.coefficient(k)) < 1e-9

    def test_a3_against_richardson_differences(self, square_sine, generic_sine):
        for sine in (square_sine, generic_sine):
            def third(h):
                return (
                    sine.eval(2 * h) - 2 * sine.eval(h) + 2 * sine.eval(-h) - sine.eval(-2 * h)
                ) / (2 * h**3)

            # error expands in even powers of h: extrapolate twice
            h = 0.04
            r1a = (4 * third(h / 2) - third(h)) / 3
            r1b = (4 * third(h / 4) - third(h / 2)) / 3
            d3 = (16 * r1b - r1a) / 15
            a3 = jacobi_sine_taylor(sine, 3).coefficient(3)
            assert abs(a3 - d3 / 6) < 1e-6

    @pytest.mark.parametrize("which", ["square", "generic"])
    def test_partial_sums_match_eval(self, which, square_sine, generic_sine, rng):
        sine = square_sine if which == "square" else generic_sine
        t = jacobi_sine_taylor(sine, 16)
        r = 0.05 * abs(sine.lattice.omega1)
        for k in range(12):
            z = r * np.exp(2j * np.pi * (k + 0.3) / 12)
            assert abs(t.evaluate(z) - sine.eval(z)) < 1e-8


class TestLocalExpansion:
    def test_generic_center_derivative(self, square_sine):
        c = 0.23 + 0.11j
        loc = square_sine.local_expansion(c, 6)
        assert loc.low == 0
        assert abs(loc.coefficient(0) - square_sine.eval(c)) < 1e-12
        h = 1e-4
        d = (square_sine.eval(c + h) - square_sine.eval(c - h)) / (2 * h)
        assert abs(loc.coefficient(1) - d) < 1e-6

    def test_pole_center_is_laurent(self, square_sine):
        c = square_sine.lattice.omega1 / 2
        loc = square_sine.local_expansion(c, 6)
        assert loc.low == -1
        assert abs(loc.coefficient(-1)) > 0.01
        # residue oracle: x * s(c + x) tends to the residue
        for x in (1e-3, 1e-3j, (0.7 + 0.4j) * 1e-3):
            approx = x * square_sine.eval(c + x)
            assert abs(approx - loc.coefficient(-1)) < 5e-3

    def test_expansion_consistency_with_eval(self, generic_sine, rng):
        for _ in range(5):
            c = generic_sine.lattice.from_coordinates(
                rng.uniform(0.1, 0.4), rng.uniform(0.1, 0.8)
            )
            loc = generic_sine.local_expansion(c, 10)
            x = 0.01 * np.exp(2j * np.pi * rng.uniform())
            assert abs(loc.evaluate(x) - generic_sine.eval(c + x)) < 1e-9


class TestHalfPeriod:
    @pytest.mark.parametrize("which", ["square", "generic"])
    def test_constant_product(self, which, square_sine, generic_sine, rng):
        sine = square_sine if which == "square" else generic_sine
        lat = sine.lattice
        a = half_period_constant(sine)
        assert abs(a) > 1e-12
        for _ in range(20):
            z = lat.from_coordinates(rng.uniform(0.03, 0.45), rng.uniform(0.05, 1.2))
            prod = sine.eval(z + lat.omega1 / 2) * sine.eval(z)
            assert abs(prod - a) < 1e-6

    def test_square_lattice_value(self, square_sine):
        # direct product evaluation at a fixed reference point
        z = 0.2
        want = square_sine.eval(z + 0.5) * square_sine.eval(z)
        assert abs(half_period_constant(square_sine) - want) < 1e-10


def test_module_level_eval_wrapper(square_sine):
    assert jacobi_sine_eval(square_sine, 0.3 + 0.1j) == square_sine.eval(0.3 + 0.1j)
