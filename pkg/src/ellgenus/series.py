"""Truncated power/Laurent series, finite nilpotent coefficient algebras, and
elementary-symmetric expansions of multiplicative series.

Everything here is plain complex arithmetic on finite coefficient windows; all
objects are immutable and all operations are pure.
"""

import math
from dataclasses import dataclass, field

import numpy as np

#: Default highest tracked exponent for series created from scalars.
DEFAULT_ORDER = 16


class SeriesError(ValueError):
    """Raised for invalid series operations (non-invertible input, pole hit, ...)."""


def _promote(value, like):
    """Lift a plain number to a constant series sharing `like`'s window."""
    low = min(0, like.low)
    coeffs = [0j] * (like.order - low + 1)
    coeffs[-low] = complex(value)
    return TruncatedSeries(low, tuple(coeffs))


@dataclass(frozen=True)
class TruncatedSeries:
    """A finite window of Laurent coefficients.

    ``coeffs[i]`` is the coefficient of ``u**(low+i)``.  Coefficients above the
    window (beyond the truncation order) are unknown; coefficients below ``low``
    are exactly zero.  Arithmetic tracks the window on which the result is
    exact, shrinking it as necessary.
    """

    low: int
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        if len(self.coeffs) < 1:
            raise SeriesError("series window must contain at least one exponent")

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, value, order=DEFAULT_ORDER):
        coeffs = [0j] * (order + 1)
        coeffs[0] = complex(value)
        return cls(0, tuple(coeffs))

    @classmethod
    def variable(cls, order=DEFAULT_ORDER):
        """The series ``u``."""
        coeffs = [0j] * (order + 1)
        coeffs[1] = 1.0 + 0j
        return cls(0, tuple(coeffs))

    @classmethod
    def zero(cls, order=DEFAULT_ORDER, low=0):
        return cls(low, tuple([0j] * (order - low + 1)))

    @classmethod
    def from_coefficients(cls, low, coeffs):
        return cls(low, tuple(coeffs))

    # -- basic accessors ---------------------------------------------------

    @property
    def order(self):
        """Highest tracked exponent."""
        return self.low + len(self.coeffs) - 1

    def coefficient(self, k):
        if k > self.order:
            raise SeriesError(f"coefficient of u^{k} beyond truncation order {self.order}")
        if k < self.low:
            return 0j
        return self.coeffs[k - self.low]

    def valuation(self, tol=0.0):
        """Lowest exponent whose coefficient exceeds `tol` in magnitude, or None."""
        for i, c in enumerate(self.coeffs):
            if abs(c) > tol:
                return self.low + i
        return None

    def is_zero(self, tol=0.0):
        return all(abs(c) <= tol for c in self.coeffs)

    def max_abs(self):
        return max(abs(c) for c in self.coeffs)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = _promote(other, self)
        low = min(self.low, other.low)
        order = min(self.order, other.order)
        if order < low:
            raise SeriesError("empty coefficient window in addition")
        return TruncatedSeries(
            low,
            tuple(self.coefficient(k) + other.coefficient(k) for k in range(low, order + 1)),
        )

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.low, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = _promote(other, self)
        return self + (-other)

    def __rsub__(self, other):
        return _promote(other, self) - self

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            c = complex(other)
            return TruncatedSeries(self.low, tuple(a * c for a in self.coeffs))
        low = self.low + other.low
        order = min(self.order + other.low, other.order + self.low)
        n = order - low + 1
        out = [0j] * n
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            jmax = min(len(other.coeffs), n - i)
            for j in range(jmax):
                out[i + j] += a * other.coeffs[j]
        return TruncatedSeries(low, tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.inverse()
        c = complex(other)
        return TruncatedSeries(self.low, tuple(a / c for a in self.coeffs))

    def __rtruediv__(self, other):
        return _promote(other, self) * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            raise SeriesError("series exponent must be an integer")
        if k < 0:
            return self.inverse() ** (-k)
        result = TruncatedSeries.constant(1.0, order=self.order - self.low)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def inverse(self, leading_tol=0.0):
        """Multiplicative inverse up to truncation.

        The valuation may shift: inverting ``c*u**v*(1 + ...)`` yields a series
        with lowest exponent ``-v``.  Leading coefficients of magnitude at most
        `leading_tol` are treated as exact zeros.
        """
        v = self.valuation(leading_tol)
        if v is None:
            raise SeriesError("not invertible")
        lead = self.coefficient(v)
        rel = self.order - v  # relative truncation order of the unit part
        # unit part n_k = a_{v+k}/lead for k=1..rel
        a = [self.coefficient(v + k) / lead for k in range(rel + 1)]
        b = [0j] * (rel + 1)
        b[0] = 1.0 + 0j
        for k in range(1, rel + 1):
            s = 0j
            for i in range(1, k + 1):
                s += a[i] * b[k - i]
            b[k] = -s
        return TruncatedSeries(-v, tuple(c / lead for c in b))

    def shift(self, k):
        """Multiply by ``u**k``."""
        return TruncatedSeries(self.low + k, self.coeffs)

    def truncate(self, order):
        if order < self.low:
            raise SeriesError("truncation below lowest exponent")
        order = min(order, self.order)
        return TruncatedSeries(self.low, self.coeffs[: order - self.low + 1])

    def differentiate(self):
        return TruncatedSeries(
            self.low - 1,
            tuple((self.low + i) * c for i, c in enumerate(self.coeffs)),
        )

    def scale_argument(self, factor):
        """Substitute ``u -> factor*u``."""
        f = complex(factor)
        if f == 0:
            raise SeriesError("argument scale must be nonzero")
        return TruncatedSeries(
            self.low,
            tuple(c * f ** (self.low + i) for i, c in enumerate(self.coeffs)),
        )

    def compose(self, inner):
        """Substitute the series `inner` (vanishing at 0) for the variable."""
        if not isinstance(inner, TruncatedSeries):
            raise SeriesError("composition requires a series argument")
        if inner.is_zero():
            if self.low < 0 and any(abs(self.coefficient(k)) > 0 for k in range(self.low, 0)):
                raise SeriesError("pole hit")
            return TruncatedSeries.constant(self.coefficient(0), order=inner.order)
        v = inner.valuation()
        if v is None or v < 1:
            raise SeriesError("composition requires positive valuation")
        order = min(inner.order, v * (self.order + 1) - 1)
        acc = TruncatedSeries.zero(order=order)
        # nonnegative exponents by ascending powers
        power = TruncatedSeries.constant(1.0, order=order)
        for k in range(0, self.order + 1):
            c = self.coefficient(k)
            if c != 0:
                acc = acc + c * power.truncate(order)
            if k < self.order:
                power = power * inner
                if power.order < order and power.valuation() is None:
                    break
        # negative exponents via the inverse of inner
        if self.low < 0:
            inv = inner.inverse()
            power = inv
            for k in range(1, -self.low + 1):
                c = self.coefficient(-k)
                if c != 0:
                    acc = acc + c * power
                if k < -self.low:
                    power = power * inv
        return acc

    def evaluate(self, z):
        """Partial-sum evaluation at the point `z`."""
        z = complex(z)
        if self.low < 0 and z == 0:
            raise SeriesError("pole hit")
        total = 0j
        for i, c in enumerate(self.coeffs):
            if c != 0:
                total += c * z ** (self.low + i)
        return total

    def allclose(self, other, tol=1e-12):
        low = min(self.low, other.low)
        order = min(self.order, other.order)
        return all(abs(self.coefficient(k) - other.coefficient(k)) <= tol for k in range(low, order + 1))

    def __repr__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if abs(c) > 1e-14:
                parts.append(f"({c:.6g})u^{self.low + i}")
        body = " + ".join(parts) if parts else "0"
        return f"<series {body} + O(u^{self.order + 1})>"


def series_mul(a, b):
    """Cauchy product with window tracking."""
    return a * b


def series_inverse(a, leading_tol=0.0):
    """Two-sided inverse of `a` up to truncation; errors on zero leading part."""
    return a.inverse(leading_tol=leading_tol)


def even_odd_split(q, tol=0.0):
    """Classify a series as even/odd and return the reduced series.

    Returns ``(parity, reduced)`` with parity in ``{"even", "odd", "neither"}``:
    for even q, ``q(x) = reduced(x**2)``; for odd q, ``q(x) = x*reduced(x**2)``.
    `tol` is the magnitude below which a stored coefficient counts as zero.
    """
    odd_part = [k for k in range(q.low, q.order + 1) if k % 2 != 0 and abs(q.coefficient(k)) > tol]
    even_part = [k for k in range(q.low, q.order + 1) if k % 2 == 0 and abs(q.coefficient(k)) > tol]
    if not odd_part:
        lo = math.ceil(q.low / 2)
        hi = math.floor(q.order / 2)
        reduced = TruncatedSeries(lo, tuple(q.coefficient(2 * k) for k in range(lo, hi + 1)))
        return "even", reduced
    if not even_part:
        lo = math.ceil((q.low - 1) / 2)
        hi = math.floor((q.order - 1) / 2)
        reduced = TruncatedSeries(lo, tuple(q.coefficient(2 * k + 1) for k in range(lo, hi + 1)))
        return "odd", reduced
    return "neither", None


def reconstruct_from_parity(parity, reduced):
    """Inverse of :func:`even_odd_split` for the even/odd outcomes."""
    if parity == "even":
        low = 2 * reduced.low
        coeffs = [0j] * (2 * len(reduced.coeffs) - 1)
        coeffs[::2] = reduced.coeffs
        return TruncatedSeries(low, tuple(coeffs))
    if parity == "odd":
        low = 2 * reduced.low + 1
        coeffs = [0j] * (2 * len(reduced.coeffs) - 1)
        coeffs[::2] = reduced.coeffs
        return TruncatedSeries(low, tuple(coeffs))
    raise SeriesError("cannot reconstruct from parity 'neither'")


# ---------------------------------------------------------------------------
# Nilpotent coefficient algebras
# ---------------------------------------------------------------------------


class NilpotentAlgebra:
    """Finite commutative algebra with unit basis element and nilpotent rest.

    ``degrees[0]`` must be 0 (the unit); all degrees are even and nonnegative.
    ``mult_table[i][j]`` is the coefficient vector of the product of basis
    elements i and j.  ``top_functional`` is the linear functional extracting
    the top-degree coefficient (defaults to the sum of top-degree coordinates).
    """

    def __init__(self, degrees, mult_table, top_functional=None, check=True):
        self.degrees = tuple(int(d) for d in degrees)
        n = len(self.degrees)
        self.table = np.asarray(mult_table, dtype=complex).reshape(n, n, n)
        if top_functional is None:
            top = max(self.degrees)
            top_functional = [1.0 if d == top else 0.0 for d in self.degrees]
        self.top_functional = tuple(complex(c) for c in top_functional)
        if len(self.top_functional) != n:
            raise ValueError("top functional length must match basis size")
        if check:
            self._validate()
        # sparse structure constants for series-coefficient multiplication
        self._sparse = [
            (i, j, k, self.table[i, j, k])
            for i in range(n)
            for j in range(n)
            for k in range(n)
            if self.table[i, j, k] != 0
        ]

    @property
    def basis_size(self):
        return len(self.degrees)

    def _validate(self):
        n = self.basis_size
        if self.degrees[0] != 0:
            raise ValueError("basis element 0 must be the unit (degree 0)")
        if any(d < 0 or d % 2 for d in self.degrees[1:] if d != 0):
            raise ValueError("degrees must be even and nonnegative")
        eye = np.zeros(n, dtype=complex)
        eye[0] = 1.0
        for i in range(n):
            want = np.zeros(n, dtype=complex)
            want[i] = 1.0
            if not np.allclose(self.table[0, i], want) or not np.allclose(self.table[i, 0], want):
                raise ValueError("element 0 does not act as the unit")
        if not np.allclose(self.table, self.table.transpose(1, 0, 2)):
            raise ValueError("multiplication table is not commutative")
        # associativity on all basis triples
        for i in range(n):
            for j in range(n):
                ij = self.table[i, j]
                for k in range(n):
                    left = ij @ self.table[:, k, :]
                    right = self.table[i, :, :].T @ self.table[j, k]
                    if not np.allclose(left, right, atol=1e-10):
                        raise ValueError("multiplication table is not associative")
        # degrees add or the product vanishes
        for i in range(n):
            for j in range(n):
                d = self.degrees[i] + self.degrees[j]
                for k in range(n):
                    if self.table[i, j, k] != 0 and self.degrees[k] != d:
                        raise ValueError("multiplication does not respect degrees")
        # every non-unit basis element is nilpotent
        for i in range(1, n):
            power = np.zeros(n, dtype=complex)
            power[i] = 1.0
            for _ in range(n + 1):
                power = power @ self.table[i]
                if np.allclose(power, 0):
                    break
            else:
                raise ValueError(f"basis element {i} is not nilpotent")

    # -- element constructors ---------------------------------------------

    def element(self, coeffs):
        coeffs = list(coeffs)
        if len(coeffs) != self.basis_size:
            raise ValueError("coefficient vector length must match basis size")
        return AlgebraElement(self, tuple(coeffs))

    def unit(self, value=1.0):
        coeffs = [0j] * self.basis_size
        coeffs[0] = value
        return AlgebraElement(self, tuple(coeffs))

    def zero(self):
        return AlgebraElement(self, tuple([0j] * self.basis_size))

    def basis_element(self, i, value=1.0):
        coeffs = [0j] * self.basis_size
        coeffs[i] = value
        return AlgebraElement(self, tuple(coeffs))

    def integrate(self, elem):
        """Apply the top-degree functional."""
        total = 0
        for f, c in zip(self.top_functional, elem.coeffs):
            if f != 0:
                total = total + f * c
        return total

    @property
    def top_degree(self):
        return max(self.degrees)

    # -- stock algebras ------------------------------------------------------

    @classmethod
    def trivial(cls):
        return cls([0], [[[1.0]]], top_functional=[1.0], check=False)

    @classmethod
    def truncated_polynomial(cls, power, generator_degree=2):
        """C[t]/(t^power) with deg t = generator_degree; basis 1, t, ..., t^(power-1)."""
        n = int(power)
        if n < 1:
            raise ValueError("power must be at least 1")
        table = np.zeros((n, n, n), dtype=complex)
        for i in range(n):
            for j in range(n):
                if i + j < n:
                    table[i, j, i + j] = 1.0
        degrees = [generator_degree * i for i in range(n)]
        top = [0.0] * n
        top[-1] = 1.0
        return cls(degrees, table, top_functional=top)

    @classmethod
    def tensor(cls, a, b):
        """Tensor product algebra with the product top functional."""
        na, nb = a.basis_size, b.basis_size
        n = na * nb
        table = np.zeros((n, n, n), dtype=complex)
        for i1 in range(na):
            for j1 in range(nb):
                for i2 in range(na):
                    for j2 in range(nb):
                        prod = np.outer(a.table[i1, i2], b.table[j1, j2]).reshape(n)
                        table[i1 * nb + j1, i2 * nb + j2] = prod
        degrees = [a.degrees[i] + b.degrees[j] for i in range(na) for j in range(nb)]
        top = [a.top_functional[i] * b.top_functional[j] for i in range(na) for j in range(nb)]
        return cls(degrees, table, top_functional=top)


@dataclass(frozen=True)
class AlgebraElement:
    """Element of a :class:`NilpotentAlgebra`; coefficients may be numbers or series."""

    algebra: NilpotentAlgebra
    coeffs: tuple

    def _binary(self, other, op):
        if isinstance(other, AlgebraElement):
            if other.algebra is not self.algebra:
                raise ValueError("algebra mismatch")
            return AlgebraElement(
                self.algebra, tuple(op(a, b) for a, b in zip(self.coeffs, other.coeffs))
            )
        # scalar or series acts on the unit component
        promoted = self.algebra.unit(other)
        return self._binary(promoted, op)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __neg__(self):
        return AlgebraElement(self.algebra, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            return AlgebraElement(self.algebra, tuple(c * other for c in self.coeffs))
        if other.algebra is not self.algebra:
            raise ValueError("algebra mismatch")
        out = [0] * self.algebra.basis_size
        for i, j, k, t in self.algebra._sparse:
            a = self.coeffs[i]
            b = other.coeffs[j]
            if _is_exact_zero(a) or _is_exact_zero(b):
                continue
            out[k] = out[k] + t * a * b
        return AlgebraElement(self.algebra, tuple(out))

    def __rmul__(self, other):
        return self.__mul__(other)

    @property
    def scalar_part(self):
        return self.coeffs[0]

    def nilpotent_part(self):
        coeffs = list(self.coeffs)
        coeffs[0] = 0j if not isinstance(coeffs[0], TruncatedSeries) else coeffs[0] * 0.0
        return AlgebraElement(self.algebra, tuple(coeffs))

    def is_zero(self, tol=0.0):
        return all(_coeff_mag(c) <= tol for c in self.coeffs)

    def max_abs(self):
        return max(_coeff_mag(c) for c in self.coeffs)

    def integrate(self):
        return self.algebra.integrate(self)

    def inverse(self):
        """Inverse when the scalar part is invertible; geometric series in the rest."""
        s = self.scalar_part
        if isinstance(s, TruncatedSeries):
            s_inv = s.inverse()
        else:
            if s == 0:
                raise SeriesError("not invertible")
            s_inv = 1.0 / s
        nil = self.nilpotent_part()
        result = self.algebra.unit(s_inv)
        term = self.algebra.unit(s_inv)
        for _ in range(self.algebra.basis_size + 1):
            term = term * nil * (-1) * s_inv
            if term.is_zero():
                break
            result = result + term
        return result

    def difference_norm(self, other):
        diff = self - other
        return diff.max_abs()


def _is_exact_zero(c):
    if isinstance(c, TruncatedSeries):
        return c.is_zero()
    return c == 0


def _coeff_mag(c):
    if isinstance(c, TruncatedSeries):
        return c.max_abs()
    return abs(c)


def algebra_evaluate_series(q, nilpotent, scalar_part):
    """Evaluate the series `q` at ``scalar_part + nilpotent``.

    ``nilpotent`` is an algebra element with vanishing unit component;
    ``scalar_part`` is either 0 or a series with positive valuation.  The
    result is the finite Taylor sum sum_k q^(k)(scalar_part)/k! * nilpotent^k,
    exact in the nilpotent directions and truncated in the series variable.
    """
    alg = nilpotent.algebra
    if _coeff_mag(nilpotent.coeffs[0]) > 1e-12:
        raise SeriesError("nilpotent argument must have zero unit component")

    if isinstance(scalar_part, TruncatedSeries) and not scalar_part.is_zero():
        v = scalar_part.valuation()
        if v is None or v < 1:
            raise SeriesError("scalar part must vanish at the origin")
        scalar_zero = False
    else:
        if isinstance(scalar_part, TruncatedSeries):
            scalar_zero = True
        else:
            if complex(scalar_part) != 0:
                raise SeriesError("scalar part must vanish at the origin")
            scalar_zero = True

    if scalar_zero and q.low < 0:
        if any(abs(q.coefficient(k)) > 0 for k in range(q.low, 0)):
            raise SeriesError("pole hit")

    # collect nilpotent powers until they die
    powers = [alg.unit(1.0)]
    p = alg.unit(1.0)
    for _ in range(alg.basis_size + 1):
        p = p * nilpotent
        if p.is_zero():
            break
        powers.append(p)

    result = alg.zero()
    if scalar_zero:
        for k, pk in enumerate(powers):
            if k > q.order:
                break
            c = q.coefficient(k)
            if c != 0:
                result = result + pk * c
        return result

    deriv = q
    fact = 1.0
    for k, pk in enumerate(powers):
        if deriv.order < deriv.low:
            break
        coeff_series = deriv.compose(scalar_part) * (1.0 / fact)
        result = result + pk * coeff_series
        deriv = deriv.differentiate()
        fact *= k + 1
    return result


# ---------------------------------------------------------------------------
# Symmetric-function expansion of multiplicative series
# ---------------------------------------------------------------------------


def _mpoly_add(a, b):
    out = dict(a)
    for key, c in b.items():
        out[key] = out.get(key, 0j) + c
        if out[key] == 0:
            del out[key]
    return out


def _mpoly_scale(a, c):
    return {key: v * c for key, v in a.items()}


def _weighted_degree(key):
    return sum((j + 1) * e for j, e in enumerate(key))


def _mpoly_mul(a, b, bound):
    out = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            key = tuple(x + y for x, y in zip(ka, kb))
            if _weighted_degree(key) > bound:
                continue
            out[key] = out.get(key, 0j) + ca * cb
    return {k: v for k, v in out.items() if v != 0}


def _log_series(q, order):
    """log q as a list of coefficients c_1..c_order (q(0) = 1 assumed)."""
    r = q.differentiate() * q.inverse()
    return [r.coefficient(k - 1) / k for k in range(1, order + 1)]


@dataclass(frozen=True)
class SymmetricPolynomial:
    """Polynomial in the elementary symmetric generators sigma_1..sigma_n.

    ``terms`` maps exponent tuples (lambda_1, ..., lambda_n) to coefficients;
    the weight of sigma_j is j and every stored term has weighted degree at
    most ``bound``.
    """

    nroots: int
    terms: dict
    bound: int

    def __post_init__(self):
        for key in self.terms:
            if _weighted_degree(key) > self.bound:
                raise SeriesError("term exceeds the weighted degree bound")

    def constant_term(self):
        return self.terms.get(tuple([0] * self.nroots), 0j)

    def evaluate(self, sigmas):
        sigmas = [complex(s) for s in sigmas]
        if len(sigmas) != self.nroots:
            raise ValueError("need one value per elementary symmetric generator")
        total = 0j
        for key, c in self.terms.items():
            term = c
            for s, e in zip(sigmas, key):
                if e:
                    term *= s**e
            total += term
        return total

    def evaluate_at_roots(self, roots):
        return self.evaluate(elementary_symmetric_values(roots))


def elementary_symmetric_values(roots):
    """e_1..e_n of the given roots by the stable ascending recurrence."""
    roots = [complex(r) for r in roots]
    n = len(roots)
    e = [0j] * (n + 1)
    e[0] = 1.0 + 0j
    for r in roots:
        for j in range(n, 0, -1):
            e[j] += r * e[j - 1]
    return e[1:]


def elementary_symmetric_expansion(q, n, bound):
    """Express q(x_1)...q(x_n) as a polynomial in sigma_1..sigma_n.

    Uses the Newton-identity conversion: log of the product is a linear
    combination of power sums, each rewritten in the elementary symmetric
    generators, and the result is re-exponentiated with weighted-degree
    truncation at `bound`.
    """
    if n < 1:
        raise ValueError("need at least one root")
    if q.low != 0 or abs(q.coefficient(0) - 1.0) > 1e-12:
        raise SeriesError("not a unital multiplicative series")
    if bound > q.order:
        raise SeriesError("bound exceeds the series truncation order")

    logq = _log_series(q, bound)

    # power sums p_k in terms of sigma's, k = 1..bound
    def e_key(i):
        key = [0] * n
        key[i - 1] = 1
        return tuple(key)

    p = {}
    for k in range(1, bound + 1):
        acc = {}
        if k <= n:
            acc = {e_key(k): ((-1) ** (k - 1)) * k}
        for i in range(1, min(k - 1, n) + 1):
            contrib = _mpoly_mul({e_key(i): (-1) ** (i - 1)}, p[k - i], bound)
            acc = _mpoly_add(acc, contrib)
        p[k] = acc

    # S = sum_k logq_k * p_k, then exp(S)
    s = {}
    for k in range(1, bound + 1):
        if logq[k - 1] != 0:
            s = _mpoly_add(s, _mpoly_scale(p[k], logq[k - 1]))

    zero_key = tuple([0] * n)
    result = {zero_key: 1.0 + 0j}
    term = {zero_key: 1.0 + 0j}
    for m in range(1, bound + 1):
        term = _mpoly_mul(term, s, bound)
        if not term:
            break
        result = _mpoly_add(result, _mpoly_scale(term, 1.0 / math.factorial(m)))
    # drop roundoff junk left by the exp/log round trip
    cutoff = 1e-13 * max(1.0, max(abs(c) for c in result.values()))
    result = {k: c for k, c in result.items() if abs(c) > cutoff}
    return SymmetricPolynomial(n, result, bound)
