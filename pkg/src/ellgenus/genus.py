"""Fixed-point localization of the circle-equivariant elliptic genus,
plus the numerical rigidity verdict.

The genus of fixed-point data is the sum over components of the integrated
inverse elliptic Euler class of the normal bundle,

    genus(u) = sum_N sign_N * top[ prod_j s(w_j + m_j u)^(-1) ],

evaluated either pointwise in u or as a Laurent series at u = 0.  Both routes
are implemented independently (numerical local expansions vs. exact series
arithmetic) and are cross-checked in the test suite.
"""

import math
from dataclasses import dataclass

from .charclass import BundleSummand
from .elliptic import CurvePoint, Lattice, exact_order
from .series import (
    NilpotentAlgebra,
    SeriesError,
    TruncatedSeries,
    algebra_evaluate_series,
)

#: absolute distance of m_j*u to a zero of s below which evaluation refuses
SPECIAL_TOL = 1e-10


class SpecialPointError(ArithmeticError):
    """The Euler class degenerates at the requested parameter."""


@dataclass(frozen=True)
class FixedComponent:
    """One connected fixed component: normal-bundle summands, cohomology algebra
    with its top-degree functional, and the orientation sign."""

    name: str
    summands: tuple
    algebra: NilpotentAlgebra = None
    orientation_sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(self.summands))
        if self.algebra is None:
            object.__setattr__(self, "algebra", NilpotentAlgebra.trivial())
        if self.orientation_sign not in (1, -1):
            raise ValueError("orientation sign must be +1 or -1")
        for s in self.summands:
            if s.rotation_number == 0:
                raise ValueError("normal-bundle rotation numbers must be nonzero")

    @property
    def rotation_numbers(self):
        return tuple(s.rotation_number for s in self.summands)

    def root_of(self, summand):
        if summand.chern_root is None:
            return self.algebra.zero()
        return summand.chern_root


def isolated_component(name, rotation_numbers, orientation_sign=1):
    """Convenience constructor for an isolated fixed point."""
    summands = tuple(BundleSummand(m) for m in rotation_numbers)
    return FixedComponent(name, summands, NilpotentAlgebra.trivial(), orientation_sign)


@dataclass(frozen=True)
class ManifoldFixedData:
    """Full fixed-point model of a closed manifold with circle action."""

    components: tuple
    dimension: int
    declared_spin: bool = False

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if self.dimension % 2:
            raise ValueError("dimension must be even")
        for comp in self.components:
            if comp.algebra.top_degree + 2 * len(comp.summands) != self.dimension:
                raise ValueError(
                    f"component {comp.name!r}: algebra top degree plus twice the "
                    f"number of summands must equal the dimension"
                )

    def rotation_numbers(self):
        out = []
        for comp in self.components:
            out.extend(comp.rotation_numbers)
        return out

    def spin_parity_report(self):
        """Advisory only: per-component parity of the rotation-number sum."""
        return [(comp.name, sum(comp.rotation_numbers) % 2) for comp in self.components]


@dataclass
class GenusReport:
    """Outcome of a rigidity check over a sample grid."""

    samples: list
    taylor: TruncatedSeries
    constant: bool
    max_deviation: float
    reference_value: complex
    excluded: list
    tolerance: float


def _component_value(comp, u, sine):
    alg = comp.algebra
    for s in comp.summands:
        center = s.rotation_number * u
        if sine.nearest_zero_distance(center) < SPECIAL_TOL:
            raise SpecialPointError("special point: Euler class vanishes")
    if all(s.chern_root is None or s.chern_root.is_zero() for s in comp.summands):
        value = 1.0 + 0j
        for s in comp.summands:
            value /= sine._raw(s.rotation_number * u)
        return comp.orientation_sign * value * alg.integrate(alg.unit(1.0))
    product = alg.unit(1.0)
    korder = alg.basis_size + 1
    for s in comp.summands:
        local = sine.local_expansion(s.rotation_number * u, korder)
        inv = local.inverse(leading_tol=1e-13 * max(1.0, local.max_abs()))
        factor = algebra_evaluate_series(inv, comp.root_of(s), 0)
        product = product * factor
    return comp.orientation_sign * alg.integrate(product)


def genus_eval(data, u, sine):
    """Value of the equivariant elliptic genus at the parameter u.

    Components are summed in their declared order so repeated runs are
    bitwise reproducible.
    """
    u = complex(u)
    total = 0j
    for comp in data.components:
        total += _component_value(comp, u, sine)
    return complex(total)


def genus_taylor(data, order, sine):
    """Laurent expansion of the genus at u = 0 by exact series arithmetic.

    Each localization term has valuation minus the number of summands; the
    cancellation of principal parts in the sum is computed, not assumed.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    rmax = max((len(c.summands) for c in data.components), default=0)
    if rmax == 0:
        return TruncatedSeries.zero(order=order, low=-1)
    sine_order = order + 2 * rmax + 6
    st = sine.taylor(sine_order)
    inv = st.inverse(leading_tol=1e-12 * max(1.0, st.max_abs()))
    u = TruncatedSeries.variable(sine_order)
    total = None
    for comp in data.components:
        alg = comp.algebra
        product = alg.unit(TruncatedSeries.constant(1.0, sine_order))
        for s in comp.summands:
            factor = algebra_evaluate_series(inv, comp.root_of(s), s.rotation_number * u)
            product = product * factor
        term = alg.integrate(product) * comp.orientation_sign
        if not isinstance(term, TruncatedSeries):
            term = TruncatedSeries.constant(term, order=sine_order)
        total = term if total is None else total + term
    return total.truncate(order)


def principal_part(series):
    """Coefficients of the strictly negative exponents, lowest first."""
    return [(k, series.coefficient(k)) for k in range(series.low, 0)]


def default_grid(sine, data, count=20, radius_factor=0.07, avoid_torsion_order=24):
    """Sample circle |u| = radius_factor*|omega1| avoiding torsion points of
    small order and the zero locus of every s(m_j u)."""
    lattice = sine.lattice
    radius = radius_factor * abs(lattice.omega1)
    ms = sorted(set(abs(m) for m in data.rotation_numbers())) or [1]
    grid = []
    for i in range(count):
        theta = 2.0 * math.pi * (i + 0.37) / count
        for _ in range(64):
            u = radius * complex(math.cos(theta), math.sin(theta))
            p = CurvePoint(u, lattice)
            clear = p.order(avoid_torsion_order) is None
            if clear and all(sine.nearest_zero_distance(m * u) > 1e-6 for m in ms):
                break
            theta += 0.0137
        grid.append(u)
    return grid


def rigidity_check(data, sine, grid=None, tol=1e-6, taylor_order=8):
    """Evaluate the genus on a grid and report whether it is constant.

    The verdict compares the maximum deviation from the grid mean against
    `tol` relative to max(1, |mean|).  Samples that hit special points are
    excluded from the statistics and reported.
    """
    if grid is None:
        grid = default_grid(sine, data)
    samples = []
    excluded = []
    for u in grid:
        try:
            samples.append((u, genus_eval(data, u, sine)))
        except SpecialPointError as exc:
            excluded.append((u, str(exc)))
    if not samples:
        raise SpecialPointError("special point: every grid sample degenerated")
    mean = sum(v for _, v in samples) / len(samples)
    max_dev = float(max(abs(v - mean) for _, v in samples))
    constant = bool(max_dev < tol * max(1.0, abs(mean)))
    taylor = genus_taylor(data, taylor_order, sine)
    return GenusReport(
        samples=samples,
        taylor=taylor,
        constant=constant,
        max_deviation=max_dev,
        reference_value=complex(mean),
        excluded=excluded,
        tolerance=tol,
    )


def special_points(data, lattice, n_max):
    """Torsion points whose order divides some rotation number.

    At such points the corresponding cyclic-subgroup fixed set strictly
    contains the circle-fixed set.  Points are listed by increasing order and
    lexicographic coordinates, each carrying its exact order.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    ms = [abs(m) for m in data.rotation_numbers()]
    out = []
    for n in range(1, n_max + 1):
        if not any(m % n == 0 for m in ms):
            continue
        for i in range(n):
            for j in range(n):
                if math.gcd(math.gcd(i, j), n) == 1:
                    out.append(
                        CurvePoint.from_coordinates(i / n, j / n, lattice)
                    )
                    out[-1]._order = n
    return out
