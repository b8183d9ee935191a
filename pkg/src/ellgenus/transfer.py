"""Rotation-number bookkeeping at a torsion point of order n.

Index sets by Euclidean remainder, quotient parities, star (complex-structure)
representatives, and pointwise numerical certificates for the lifting identity
that transfers the inverse Euler-class expression from the circle-fixed set to
the cyclic-subgroup-fixed set, with sign epsilon**sigma.
"""

import math
from dataclasses import dataclass

from .elliptic import TorsionError, epsilon_sign
from .genus import SpecialPointError
from .series import SeriesError, algebra_evaluate_series


def euclidean_quotients(m, n):
    """Pairs (q_j, r_j) with m_j = n*q_j + r_j and 0 <= r_j < n."""
    if n < 1:
        raise ValueError("modulus must be positive")
    return [divmod(mj, n) for mj in m]


def index_sets(m, n):
    """Partition of the index set by remainder classes.

    Returns ``(I0, by_class, I_half)``: indices with remainder 0, a dict
    mapping k (0 < k < n/2) to indices with remainder k or n-k, and the
    indices with remainder exactly n/2 (empty for odd n).  Indices are
    0-based.
    """
    if any(mj == 0 for mj in m):
        raise ValueError("rotation numbers must be nonzero")
    qr = euclidean_quotients(m, n)
    i0 = [j for j, (_, r) in enumerate(qr) if r == 0]
    by_class = {}
    for k in range(1, (n + 1) // 2):
        members = [j for j, (_, r) in enumerate(qr) if r == k or r == n - k]
        if members:
            by_class[k] = members
    if n % 2 == 0:
        i_half = [j for j, (_, r) in enumerate(qr) if r == n // 2]
    else:
        i_half = []
    return i0, by_class, i_half


def sigma_parity(m, n):
    """Parity of the sum of the Euclidean quotients of the m_j modulo n."""
    return sum(q for q, _ in euclidean_quotients(m, n)) % 2


def star_representatives(m, n):
    """Rotation numbers of the preferred complex structure.

    Remainder-0 and remainder-n/2 summands become positive; a summand in the
    class {k, n-k} keeps its sign if its remainder is already k and flips
    otherwise, forcing remainder exactly k.
    """
    qr = euclidean_quotients(m, n)
    out = []
    for mj, (_, r) in zip(m, qr):
        if r == 0 or (n % 2 == 0 and r == n // 2):
            out.append(abs(mj))
        else:
            k = min(r, n - r)
            out.append(mj if r == k else -mj)
    return out


def sign_change_count_parity(m, m_star):
    """Parity of the number of sign flips under the canonical matching.

    Both lists are sorted by absolute value (stable); the absolute-value
    multisets must agree.
    """
    if sorted(abs(x) for x in m) != sorted(abs(x) for x in m_star):
        raise ValueError("absolute-value multisets differ")
    a = sorted(range(len(m)), key=lambda j: (abs(m[j]), j))
    b = sorted(range(len(m_star)), key=lambda j: (abs(m_star[j]), j))
    flips = sum(1 for i, j in zip(a, b) if m[i] == -m_star[j] and m[i] != 0)
    return flips % 2


@dataclass(frozen=True)
class RotationSystem:
    """All derived integer data of a rotation-number list modulo n."""

    m: tuple
    n: int
    quotients: tuple
    remainders: tuple
    i0: tuple
    by_class: dict
    i_half: tuple
    m_star: tuple
    star_quotients: tuple
    flips_i0: int
    flips_classes: int
    flips_half: int
    sigma: int

    @classmethod
    def build(cls, m, n):
        m = tuple(int(x) for x in m)
        qr = euclidean_quotients(m, n)
        i0, by_class, i_half = index_sets(m, n)
        mstar = tuple(star_representatives(m, n))
        qstar = tuple(q for q, _ in euclidean_quotients(mstar, n))
        in_half = set(i_half)
        in_zero = set(i0)
        flips = [j for j in range(len(m)) if m[j] != mstar[j]]
        flips_i0 = sum(1 for j in flips if j in in_zero) % 2
        flips_half = sum(1 for j in flips if j in in_half) % 2
        flips_classes = sum(1 for j in flips if j not in in_zero and j not in in_half) % 2
        return cls(
            m=m,
            n=n,
            quotients=tuple(q for q, _ in qr),
            remainders=tuple(r for _, r in qr),
            i0=tuple(i0),
            by_class={k: tuple(v) for k, v in by_class.items()},
            i_half=tuple(i_half),
            m_star=mstar,
            star_quotients=qstar,
            flips_i0=flips_i0,
            flips_classes=flips_classes,
            flips_half=flips_half,
            sigma=sigma_parity(m, n),
        )

    @property
    def flips_total(self):
        return (self.flips_i0 + self.flips_classes + self.flips_half) % 2


def sigma_parity_three_sum(m, n):
    """The orientation-table route to sigma: star quotients plus per-class flip
    parities.  Agrees with :func:`sigma_parity` for every input."""
    rs = RotationSystem.build(m, n)
    return (sum(rs.star_quotients) + rs.flips_classes + rs.flips_half) % 2


@dataclass
class TransferCertificate:
    """Pointwise comparison record of the two sides of the lifting identity."""

    sigma: int
    epsilon: int
    order: int
    lhs_samples: list
    rhs_samples: list
    max_mismatch: float
    excluded: list
    rotation_system: RotationSystem


def _inverted_factor(sine, center, algebra, root):
    local = sine.local_expansion(center, algebra.basis_size + 1)
    if local.low >= 0 and abs(local.coefficient(0)) < 1e-10:
        raise SpecialPointError("special point: factor vanishes on the grid")
    inv = local.inverse(leading_tol=1e-13 * max(1.0, local.max_abs()))
    return algebra_evaluate_series(inv, root, 0)


def _direct_factor(sine, center, algebra, root):
    local = sine.local_expansion(center, algebra.basis_size + 1)
    return algebra_evaluate_series(local, root, 0)


def _lift_sides(comp, rs, eps, alpha_z, u, sine):
    alg = comp.algebra
    roots = [comp.root_of(s) for s in comp.summands]
    star_roots = [
        r if rs.m[j] == rs.m_star[j] else -r for j, r in enumerate(roots)
    ]
    # left side: all starred inverse factors, then the Euler class of the
    # invariant quotient over the remainder-0 indices
    lhs = alg.unit(complex((-1) ** rs.flips_total))
    for j in range(len(roots)):
        center = rs.m_star[j] * (u + alpha_z)
        lhs = lhs * _inverted_factor(sine, center, alg, star_roots[j])
    euler = alg.unit(complex((-1) ** rs.flips_i0))
    for j in rs.i0:
        center = rs.m_star[j] * u
        euler = euler * _direct_factor(sine, center, alg, star_roots[j])
    lhs = lhs * euler
    # right side: epsilon^sigma times the restricted lifted classes
    sign = (eps**rs.sigma) * ((-eps) ** rs.flips_classes) * ((-eps) ** rs.flips_half)
    rhs = alg.unit(complex(sign))
    for k, members in rs.by_class.items():
        for j in members:
            center = rs.m_star[j] * u + k * alpha_z
            rhs = rhs * _inverted_factor(sine, center, alg, star_roots[j])
    for j in rs.i_half:
        center = rs.m_star[j] * u + (rs.n // 2) * alpha_z
        rhs = rhs * _inverted_factor(sine, center, alg, star_roots[j])
    return lhs, rhs


def verify_transfer_lift(component, alpha, grid, sine, tol=1e-8, n=None):
    """Numerically certify the lifting identity at a torsion point.

    `alpha` is a curve point with n*alpha in the lattice (n defaults to the
    exact order).  For every grid parameter u both sides are assembled from
    first principles and compared coefficientwise; grid points where a factor
    degenerates are excluded and recorded.
    """
    if n is None:
        n = alpha.order()
        if n is None:
            raise TorsionError("alpha is not torsion within the search bound")
    eps = epsilon_sign(alpha, n=n)
    rs = RotationSystem.build(component.rotation_numbers, n)
    lhs_samples, rhs_samples, excluded = [], [], []
    max_mismatch = 0.0
    for u in grid:
        try:
            lhs, rhs = _lift_sides(component, rs, eps, alpha.z, complex(u), sine)
        except (SpecialPointError, SeriesError) as exc:
            excluded.append((u, str(exc)))
            continue
        mism = float(lhs.difference_norm(rhs))
        max_mismatch = max(max_mismatch, mism)
        lhs_samples.append((u, complex(lhs.integrate())))
        rhs_samples.append((u, complex(rhs.integrate())))
    if not lhs_samples:
        raise SpecialPointError("special point: every grid sample degenerated")
    return TransferCertificate(
        sigma=rs.sigma,
        epsilon=eps,
        order=n,
        lhs_samples=lhs_samples,
        rhs_samples=rhs_samples,
        max_mismatch=max_mismatch,
        excluded=excluded,
        rotation_system=rs,
    )


def component_parity_lemma_check(m, m_tilde, n):
    """Check sigma-parity agreement for a compatible pair of rotation systems.

    The hypothesis: after a permutation, m_tilde_j = m_j + n*t_j with the t_j
    summing to an even number.  Violations raise; otherwise the parity verdict
    is returned (it is always True, which is the point of the lemma).
    """
    if sorted(x % n for x in m) != sorted(x % n for x in m_tilde):
        raise ValueError("not BT-compatible")
    total_shift = (sum(m_tilde) - sum(m)) // n
    if total_shift % 2:
        raise ValueError("not BT-compatible")
    return sigma_parity(m, n) == sigma_parity(m_tilde, n)
