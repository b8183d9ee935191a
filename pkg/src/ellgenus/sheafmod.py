"""Polynomial-matrix computations over C[u] localized at u = 0, torsion
divisors on the curve, and the rank-2 decomposition of the rotation-sphere
restriction map.

Smith exponents are computed two independent ways: local row/column reduction
with unit pivots (valuations via truncated power series), and valuations of
determinantal divisors (gcd of k x k minors).  The test suite requires the two
routes to agree.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .elliptic import CurvePoint

#: relative magnitude below which a polynomial coefficient counts as zero
COEFF_TOL = 1e-12


def _trim(p):
    p = [complex(c) for c in p]
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p)


def _padd(a, b, sign=1.0):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + sign * (b[i] if i < len(b) else 0) for i in range(n)])


def _pmul(a, b):
    out = [0j] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _pval(p, tol):
    for i, c in enumerate(p):
        if abs(c) > tol:
            return i
    return None


def _pmax(p):
    return max(abs(c) for c in p)


class CuMatrix:
    """Matrix with polynomial entries in u (complex coefficients, exact lists)."""

    def __init__(self, entries):
        rows = []
        for row in entries:
            prow = []
            for e in row:
                if isinstance(e, (list, tuple)):
                    prow.append(_trim(e))
                else:
                    prow.append(_trim([e]))
            rows.append(tuple(prow))
        self.entries = tuple(rows)
        if not self.entries or not self.entries[0]:
            raise ValueError("matrix must be nonempty")
        ncols = len(self.entries[0])
        if any(len(r) != ncols for r in self.entries):
            raise ValueError("ragged matrix")

    @property
    def shape(self):
        return len(self.entries), len(self.entries[0])

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, polys):
        n = len(polys)
        return cls([[polys[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def matmul(self, other):
        ra, ca = self.shape
        rb, cb = other.shape
        if ca != rb:
            raise ValueError("shape mismatch")
        out = []
        for i in range(ra):
            row = []
            for j in range(cb):
                acc = (0j,)
                for k in range(ca):
                    acc = _padd(acc, _pmul(self.entries[i][k], other.entries[k][j]))
                row.append(acc)
            out.append(row)
        return CuMatrix(out)

    def apply(self, vector):
        """Apply to a vector of coefficient lists; returns polynomial tuples."""
        rows, cols = self.shape
        vec = [_trim(v) if isinstance(v, (list, tuple)) else _trim([v]) for v in vector]
        if len(vec) != cols:
            raise ValueError("vector length mismatch")
        out = []
        for i in range(rows):
            acc = (0j,)
            for k in range(cols):
                acc = _padd(acc, _pmul(self.entries[i][k], vec[k]))
            out.append(acc)
        return out

    def max_coeff(self):
        return max(_pmax(e) for row in self.entries for e in row)

    def determinant(self):
        rows, cols = self.shape
        if rows != cols:
            raise ValueError("determinant of a non-square matrix")
        if rows == 1:
            return self.entries[0][0]
        total = (0j,)
        for j in range(cols):
            minor = [
                [self.entries[i][jj] for jj in range(cols) if jj != j]
                for i in range(1, rows)
            ]
            sub = CuMatrix(minor).determinant()
            term = _pmul(self.entries[0][j], sub)
            total = _padd(total, term, sign=(-1.0) ** j)
        return _trim(total)

    def __repr__(self):
        return f"CuMatrix({[[list(e) for e in row] for row in self.entries]})"


def determinantal_smith_exponents(matrix, tol_scale=COEFF_TOL):
    """Smith exponents over the local ring via determinantal divisors.

    The k-th determinantal valuation d_k is the minimum u-valuation over all
    k x k minors; the exponents are the successive differences.
    """
    rows, cols = matrix.shape
    scale = max(1.0, matrix.max_coeff())
    tol = tol_scale * scale
    if rows < cols:
        raise ValueError("not injective")
    exponents = []
    prev = 0
    for k in range(1, cols + 1):
        best = None
        for rsel in itertools.combinations(range(rows), k):
            for csel in itertools.combinations(range(cols), k):
                sub = CuMatrix([[matrix.entries[i][j] for j in csel] for i in rsel])
                v = _pval(sub.determinant(), tol)
                if v is not None and (best is None or v < best):
                    best = v
        if best is None:
            raise ValueError("not injective")
        exponents.append(best - prev)
        prev = best
    return sorted(exponents)


def local_smith_exponents(matrix, tol_scale=COEFF_TOL):
    """Smith exponents over C[u] localized at u = 0, by local reduction.

    Pivots are entries of minimal u-valuation; elimination divides by the
    pivot's unit part in truncated power-series arithmetic, which is exact for
    valuation bookkeeping as long as the working precision exceeds every
    exponent.  Sorted ascending.
    """
    rows, cols = matrix.shape
    if rows < cols:
        raise ValueError("not injective")
    scale = max(1.0, matrix.max_coeff())
    tol = tol_scale * scale
    # working precision: valuations are bounded by the determinant degree
    prec = sum(max(len(e) for e in row) for row in matrix.entries) + 2
    work = np.zeros((rows, cols, prec), dtype=complex)
    for i in range(rows):
        for j in range(cols):
            e = matrix.entries[i][j]
            work[i, j, : min(len(e), prec)] = e[:prec]

    def val(i, j):
        nz = np.nonzero(np.abs(work[i, j]) > tol)[0]
        return int(nz[0]) if len(nz) else None

    exponents = []
    top = 0
    while top < cols:
        pivot = None
        for i in range(top, rows):
            for j in range(top, cols):
                v = val(i, j)
                if v is not None and (pivot is None or v < pivot[0]):
                    pivot = (v, i, j)
        if pivot is None:
            raise ValueError("not injective")
        v, pi, pj = pivot
        work[[top, pi]] = work[[pi, top]]
        work[:, [top, pj]] = work[:, [pj, top]]
        # divide out u^v and invert the unit part of the pivot
        unit = work[top, top, v:].copy()
        unit_inv = np.zeros(prec, dtype=complex)
        unit_inv[0] = 1.0 / unit[0]
        for k in range(1, prec - v):
            acc = 0j
            for i in range(1, k + 1):
                if i < len(unit):
                    acc += unit[i] * unit_inv[k - i]
            unit_inv[k] = -acc / unit[0]

        def times_unit_inv(p):
            out = np.zeros(prec, dtype=complex)
            for i, c in enumerate(p):
                if c == 0:
                    continue
                limit = prec - i
                out[i:] += c * unit_inv[:limit]
            return out

        for i in range(top + 1, rows):
            e = work[i, top]
            ev = val(i, top)
            if ev is None:
                continue
            quot = np.zeros(prec, dtype=complex)
            shifted = times_unit_inv(e)
            quot[: prec - v] = shifted[v:]
            for j in range(top, cols):
                prod = np.convolve(quot, work[top, j])[:prec]
                work[i, j] -= prod
        for j in range(top + 1, cols):
            e = work[top, j]
            ev = val(top, j)
            if ev is None:
                continue
            quot = np.zeros(prec, dtype=complex)
            shifted = times_unit_inv(e)
            quot[: prec - v] = shifted[v:]
            for i in range(top, rows):
                prod = np.convolve(quot, work[i, top])[:prec]
                work[i, j] -= prod
        exponents.append(v)
        top += 1
    return sorted(exponents)


def s2n_restriction_matrix(n):
    """Restriction matrix of the n-fold rotation sphere in the pinned bases.

    Independent of n as a matrix; n only controls which torsion points carry
    the nontrivial local exponent.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    return CuMatrix([[1, 0], [0, (0, 1)]])


# ---------------------------------------------------------------------------
# divisors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Divisor:
    """Formal sum of curve points with nonzero integer multiplicities."""

    points: tuple  # of (CurvePoint, multiplicity)

    def __post_init__(self):
        for _, mult in self.points:
            if mult == 0:
                raise ValueError("multiplicities must be nonzero")


def divisor_degree(divisor):
    return sum(mult for _, mult in divisor.points)


def divisor_sum(divisor):
    """Multiplicity-weighted point sum, reduced modulo the full lattice."""
    if not divisor.points:
        raise ValueError("empty divisor has no lattice")
    lattice = divisor.points[0][0].lattice
    total = sum(mult * p.z for p, mult in divisor.points)
    x, y = lattice.coordinates(total)
    x -= math.floor(x)
    y -= math.floor(y)
    if x > 1.0 - 1e-9:
        x = 0.0
    if y > 1.0 - 1e-9:
        y = 0.0
    return CurvePoint(lattice.from_coordinates(x, y), lattice)


def n_torsion_divisor(n, lattice):
    """All n^2 points killed by n, each with multiplicity one."""
    points = []
    for i in range(n):
        for j in range(n):
            points.append((CurvePoint.from_coordinates(i / n, j / n, lattice), 1))
    return Divisor(tuple(points))


@dataclass(frozen=True)
class SheafDecomposition:
    """Rank-2 splitting descriptor: a trivial summand plus a twist summand.

    `local_exponents` holds the Smith exponents at each support point.  The
    twist is pinned by its degree and vanishing Abel sum; both sign
    conventions for the twisting degree are reported explicitly.
    """

    free_ranks: tuple
    divisor: Divisor
    local_exponents: dict
    degree_magnitude: int
    abel_sum: CurvePoint
    twist_degree_by_divisor: int
    twist_degree_dual: int


def assemble_sheaf_decomposition(n, lattice):
    """Decomposition data of the n-fold rotation sphere over the curve."""
    if n < 1:
        raise ValueError("n must be at least 1")
    exps = tuple(local_smith_exponents(s2n_restriction_matrix(n)))
    divisor = n_torsion_divisor(n, lattice)
    local = {idx: exps for idx in range(len(divisor.points))}
    return SheafDecomposition(
        free_ranks=(1, 1),
        divisor=divisor,
        local_exponents=local,
        degree_magnitude=n * n,
        abel_sum=divisor_sum(divisor),
        twist_degree_by_divisor=n * n,
        twist_degree_dual=-n * n,
    )
