"""Characteristic, Euler and elliptic Euler classes of split equivariant bundles.

Bundles arrive already split into line summands (rotation number + nilpotent
Chern root); classes are computed over a single fixed component, i.e. inside a
finite nilpotent coefficient algebra with series-valued scalars.
"""

from dataclasses import dataclass, field

from .series import (
    DEFAULT_ORDER,
    NilpotentAlgebra,
    SeriesError,
    TruncatedSeries,
    algebra_evaluate_series,
    even_odd_split,
)

#: parity detection tolerance for numerically produced series
PARITY_TOL = 1e-9


@dataclass(frozen=True)
class BundleSummand:
    """Line-bundle summand: rotation number, nilpotent Chern root, structure flag.

    `chern_root` may be None for the common isolated-fixed-point case (w = 0).
    `complex_flag` records whether the summand carries a chosen complex
    structure; a bundle all of whose summands do is treated as complex.
    """

    rotation_number: int
    chern_root: object = None
    complex_flag: bool = True

    def __post_init__(self):
        if self.rotation_number == 0:
            raise ValueError("rotation numbers of quotient bundles are nonzero")


@dataclass(frozen=True)
class EquivariantBundle:
    """Sum of line summands with an orientation sign relative to their product
    complex orientation."""

    summands: tuple
    orientation_sign: int = 1
    algebra: NilpotentAlgebra = None

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(self.summands))
        if self.orientation_sign not in (1, -1):
            raise ValueError("orientation sign must be +1 or -1")
        if self.algebra is None:
            alg = None
            for s in self.summands:
                if s.chern_root is not None:
                    alg = s.chern_root.algebra
                    break
            if alg is None:
                alg = NilpotentAlgebra.trivial()
            object.__setattr__(self, "algebra", alg)

    @property
    def rank(self):
        """Real rank (two per line summand, hence always even)."""
        return 2 * len(self.summands)

    def is_complex(self):
        return all(s.complex_flag for s in self.summands)

    def root_of(self, summand):
        if summand.chern_root is None:
            return self.algebra.zero()
        return summand.chern_root


def _u_series(order):
    return TruncatedSeries.variable(order)


def mu_Q(bundle, q, order=DEFAULT_ORDER):
    """Multiplicative characteristic class prod_j q(w_j + m_j u).

    For a complex bundle any convergent series q is accepted.  A real oriented
    bundle needs q even or odd; odd q makes the class orientation-sensitive, so
    the bundle's orientation sign multiplies the result.
    """
    sign = 1
    if not bundle.is_complex():
        parity, _ = even_odd_split(q, tol=PARITY_TOL * max(1.0, q.max_abs()))
        if parity == "neither":
            raise SeriesError("parity required")
        if parity == "odd":
            sign = bundle.orientation_sign
    u = _u_series(order)
    result = bundle.algebra.unit(TruncatedSeries.constant(1.0, order))
    for s in bundle.summands:
        w = bundle.root_of(s)
        factor = algebra_evaluate_series(q, w, s.rotation_number * u)
        result = result * factor
    return result * sign


def ordinary_euler_class(bundle, order=DEFAULT_ORDER):
    """prod_j (w_j + m_j u), times the orientation sign."""
    u = _u_series(order)
    result = bundle.algebra.unit(TruncatedSeries.constant(1.0, order))
    for s in bundle.summands:
        factor = bundle.root_of(s) + bundle.algebra.unit(s.rotation_number * u)
        result = result * factor
    return result * bundle.orientation_sign


def elliptic_euler_class(bundle, sine, shift=0.0, order=DEFAULT_ORDER):
    """prod_j s(w_j + m_j u + m_j shift), times the orientation sign.

    With shift = 0 this is the elliptic Euler class; nonzero shifts produce the
    translated classes entering lifting identities.  When some m_j * shift
    lands on a zero of s the class is still returned but is not invertible.
    """
    u = _u_series(order)
    result = bundle.algebra.unit(TruncatedSeries.constant(1.0, order))
    for s in bundle.summands:
        center = s.rotation_number * complex(shift)
        local = sine.local_expansion(center, order + bundle.algebra.basis_size)
        factor = algebra_evaluate_series(local, bundle.root_of(s), s.rotation_number * u)
        result = result * factor
    return result * bundle.orientation_sign


def invert_class(elem):
    """Inverse of a class whose series-valued scalar part is invertible.

    Raises with the Euler-class message when the scalar part vanishes (a zero
    rotation number, or an evaluation at a special point).  Tiny leading
    coefficients left over from numerical expansion are treated as zeros.
    """
    scalar = elem.scalar_part
    alg = elem.algebra
    if isinstance(scalar, TruncatedSeries):
        tol = 1e-12 * max(1.0, scalar.max_abs())
        try:
            s_inv = scalar.inverse(leading_tol=tol)
        except SeriesError:
            raise SeriesError("Euler class not invertible") from None
    else:
        if scalar == 0:
            raise SeriesError("Euler class not invertible")
        s_inv = 1.0 / complex(scalar)
    nil = elem.nilpotent_part()
    result = alg.unit(s_inv)
    term = alg.unit(s_inv)
    for _ in range(alg.basis_size + 1):
        term = term * nil * (-1) * s_inv
        if term.is_zero():
            break
        result = result + term
    return result
