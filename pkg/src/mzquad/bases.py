"""Orthonormal polynomial bases evaluated at arbitrary point sets.

Each family is orthonormal w.r.t. its domain's reference measure and is
indexed in a fixed graded order (total degree, then lexicographic on the
index tuple), so the constant element always comes first and coefficient
vectors map back to named basis elements.  Evaluation uses three-term
recurrences throughout; nothing is expanded into monomials.

Families and index labels:

* ``LEGENDRE_1D``           interval, label ``(k,)``
* ``PRODUCT_LEGENDRE_TD``   square/cube, exponent tuples ``(a, b[, c])``
* ``PRODUCT_CHEBYSHEV_TD``  square with product Chebyshev measure
* ``LOGAN_SHEPP``           disk, ridge Chebyshev functions, label ``(k, j)``
* ``DUBINER``               unit triangle, collapsed Jacobi, label ``(a, b)``
* ``SPHERICAL_HARMONICS``   real spherical harmonics, label ``(l, m)``,
  ``l = 0..n``, ``m = -l..l``, no Condon-Shortley sign
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .domains import Domain, DomainKind, Measure, contains


class DomainViolationError(ValueError):
    """A point lies outside the basis's domain."""


class NormalizationError(ValueError):
    """A sphere point is not on the unit sphere to the required tolerance."""


class BasisFamily(Enum):
    LEGENDRE_1D = "legendre"
    PRODUCT_LEGENDRE_TD = "prod-legendre"
    PRODUCT_CHEBYSHEV_TD = "prod-chebyshev"
    LOGAN_SHEPP = "logan-shepp"
    DUBINER = "dubiner"
    SPHERICAL_HARMONICS = "spherical-harmonics"


_DEFAULT_FAMILY = {
    (DomainKind.INTERVAL, Measure.LEBESGUE): BasisFamily.LEGENDRE_1D,
    (DomainKind.SQUARE, Measure.LEBESGUE): BasisFamily.PRODUCT_LEGENDRE_TD,
    (DomainKind.SQUARE, Measure.PRODUCT_CHEBYSHEV): BasisFamily.PRODUCT_CHEBYSHEV_TD,
    (DomainKind.CUBE, Measure.LEBESGUE): BasisFamily.PRODUCT_LEGENDRE_TD,
    (DomainKind.DISK, Measure.LEBESGUE): BasisFamily.LOGAN_SHEPP,
    (DomainKind.SIMPLEX, Measure.LEBESGUE): BasisFamily.DUBINER,
    (DomainKind.SPHERE, Measure.LEBESGUE): BasisFamily.SPHERICAL_HARMONICS,
}

#: membership tolerance for evaluation points (absolute)
POINT_TOL = 1e-10
#: unit-norm tolerance for sphere evaluation points
SPHERE_NORM_TOL = 1e-12


def basis_dim(domain: Domain, n: int) -> int:
    """Dimension of the total-degree-n polynomial space on the domain."""
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    kind = domain.kind
    if kind is DomainKind.INTERVAL:
        return n + 1
    if kind in (DomainKind.SQUARE, DomainKind.DISK, DomainKind.SIMPLEX):
        return (n + 1) * (n + 2) // 2
    if kind is DomainKind.CUBE:
        return (n + 1) * (n + 2) * (n + 3) // 6
    if kind is DomainKind.SPHERE:
        return (n + 1) ** 2
    raise AssertionError(kind)


def _graded_pairs(n):
    return [(a, g - a) for g in range(n + 1) for a in range(g + 1)]


def _graded_triples(n):
    return [
        (a, b, g - a - b)
        for g in range(n + 1)
        for a in range(g + 1)
        for b in range(g - a + 1)
    ]


def _make_indices(domain: Domain, family: BasisFamily, n: int):
    if family is BasisFamily.LEGENDRE_1D:
        return [(k,) for k in range(n + 1)]
    if family in (BasisFamily.PRODUCT_LEGENDRE_TD, BasisFamily.PRODUCT_CHEBYSHEV_TD):
        if domain.kind is DomainKind.CUBE:
            return _graded_triples(n)
        return _graded_pairs(n)
    if family is BasisFamily.DUBINER:
        return _graded_pairs(n)
    if family is BasisFamily.LOGAN_SHEPP:
        return [(k, j) for k in range(n + 1) for j in range(k + 1)]
    if family is BasisFamily.SPHERICAL_HARMONICS:
        return [(l, m) for l in range(n + 1) for m in range(-l, l + 1)]
    raise AssertionError(family)


@dataclass(frozen=True)
class OrthonormalBasis:
    """An ordered orthonormal basis of the degree-n polynomial space."""

    domain: Domain
    degree: int
    family: BasisFamily
    indices: tuple = field(repr=False, default=())

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError(f"degree must be nonnegative, got {self.degree}")
        object.__setattr__(
            self, "indices", tuple(_make_indices(self.domain, self.family, self.degree))
        )
        if len(self.indices) != basis_dim(self.domain, self.degree):
            raise AssertionError("index enumeration does not match space dimension")

    @property
    def dim(self) -> int:
        return len(self.indices)


def orthonormal_basis(domain: Domain, n: int, family: BasisFamily | None = None) -> OrthonormalBasis:
    """The basis used for `domain` at degree `n` (default family per domain)."""
    if family is None:
        family = _DEFAULT_FAMILY[(domain.kind, domain.measure)]
    else:
        if _DEFAULT_FAMILY[(domain.kind, domain.measure)] is not family:
            raise ValueError(f"family {family.value} does not match domain {domain}")
    return OrthonormalBasis(domain=domain, degree=n, family=family)


@dataclass(frozen=True)
class BasisMatrix:
    """Values B[i, j] = phi_j(x_i) with back-references to its inputs."""

    values: np.ndarray
    basis: OrthonormalBasis
    points: np.ndarray


# ----------------------------------------------------------------------
# 1D building blocks (tables of shape (deg+1, npoints))

def _legendre_orthonormal_table(nmax: int, x: np.ndarray) -> np.ndarray:
    """Orthonormal Legendre on [-1,1]: sqrt((2k+1)/2) P_k(x)."""
    P = np.empty((nmax + 1, x.size))
    P[0] = 1.0
    if nmax >= 1:
        P[1] = x
    for k in range(1, nmax):
        P[k + 1] = ((2 * k + 1) * x * P[k] - k * P[k - 1]) / (k + 1)
    scale = np.sqrt((2.0 * np.arange(nmax + 1) + 1.0) / 2.0)
    return P * scale[:, None]


def _chebyshev_orthonormal_table(nmax: int, x: np.ndarray) -> np.ndarray:
    """Factors orthonormal for the Chebyshev weight: 1/sqrt(pi), sqrt(2/pi) T_k."""
    T = np.empty((nmax + 1, x.size))
    T[0] = 1.0
    if nmax >= 1:
        T[1] = x
    for k in range(1, nmax):
        T[k + 1] = 2.0 * x * T[k] - T[k - 1]
    T *= math.sqrt(2.0 / math.pi)
    T[0] = 1.0 / math.sqrt(math.pi)
    return T


def _chebyshev_u(k: int, u: np.ndarray) -> np.ndarray:
    """Chebyshev polynomial of the second kind U_k."""
    if k == 0:
        return np.ones_like(u)
    prev = np.ones_like(u)
    cur = 2.0 * u
    for _ in range(1, k):
        prev, cur = cur, 2.0 * u * cur - prev
    return cur


def _jacobi_table(nmax: int, alpha: float, beta: float, x: np.ndarray) -> np.ndarray:
    """Jacobi polynomials P_b^(alpha,beta)(x), b = 0..nmax (unnormalized)."""
    P = np.empty((nmax + 1, x.size))
    P[0] = 1.0
    if nmax >= 1:
        P[1] = (alpha - beta) / 2.0 + (alpha + beta + 2.0) / 2.0 * x
    for b in range(2, nmax + 1):
        c1 = 2.0 * b * (b + alpha + beta) * (2 * b + alpha + beta - 2)
        c2 = (2 * b + alpha + beta - 1) * (alpha**2 - beta**2)
        c3 = (2 * b + alpha + beta - 1) * (2 * b + alpha + beta) * (2 * b + alpha + beta - 2)
        c4 = 2.0 * (b + alpha - 1) * (b + beta - 1) * (2 * b + alpha + beta)
        P[b] = ((c2 + c3 * x) * P[b - 1] - c4 * P[b - 2]) / c1
    return P


def _legendre_homogeneous_table(amax: int, s: np.ndarray, t: np.ndarray) -> np.ndarray:
    """p_a(s, t) = t^a P_a(s/t) via the homogenized recurrence (no division)."""
    p = np.empty((amax + 1, s.size))
    p[0] = 1.0
    if amax >= 1:
        p[1] = s
    tt = t * t
    for a in range(1, amax):
        p[a + 1] = ((2 * a + 1) * s * p[a] - a * tt * p[a - 1]) / (a + 1)
    return p


# ----------------------------------------------------------------------
# family evaluators

def _eval_legendre_1d(n, pts, out):
    out[:] = _legendre_orthonormal_table(n, pts[:, 0]).T


def _eval_product_td(n, pts, out, table, indices):
    axes = [table(n, pts[:, d]) for d in range(pts.shape[1])]
    for col, idx in enumerate(indices):
        v = axes[0][idx[0]]
        for d in range(1, len(idx)):
            v = v * axes[d][idx[d]]
        out[:, col] = v


def _eval_logan_shepp(n, pts, out, indices):
    x, y = pts[:, 0], pts[:, 1]
    inv_sqrt_pi = 1.0 / math.sqrt(math.pi)
    for col, (k, j) in enumerate(indices):
        th = j * math.pi / (k + 1)
        u = x * math.cos(th) + y * math.sin(th)
        out[:, col] = inv_sqrt_pi * _chebyshev_u(k, u)


def _eval_dubiner(n, pts, out, indices):
    x, y = pts[:, 0], pts[:, 1]
    # collapsed coordinates: u = x/(1-y) handled in homogenized form to stay
    # finite at the top vertex y = 1
    ph = _legendre_homogeneous_table(n, 2.0 * x + y - 1.0, 1.0 - y)
    t = 2.0 * y - 1.0
    jac = {a: _jacobi_table(n - a, 2 * a + 1, 0.0, t) for a in range(n + 1)}
    for col, (a, b) in enumerate(indices):
        norm = math.sqrt((2 * a + 1) * (2 * a + 2 * b + 2))
        out[:, col] = norm * ph[a] * jac[a][b]


def _eval_spherical_harmonics(n, pts, out, indices):
    x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
    ct = z
    st = np.hypot(x, y)
    safe = np.where(st > 0.0, st, 1.0)
    cp = np.where(st > 0.0, x / safe, 1.0)
    sp = np.where(st > 0.0, y / safe, 0.0)

    # fully normalized associated Legendre, Condon-Shortley-free
    M = x.size
    Pbar = np.zeros((n + 1, n + 1, M))
    Pbar[0, 0] = 1.0 / math.sqrt(4.0 * math.pi)
    for m in range(1, n + 1):
        Pbar[m, m] = math.sqrt((2 * m + 1) / (2.0 * m)) * st * Pbar[m - 1, m - 1]
    for m in range(n):
        Pbar[m + 1, m] = math.sqrt(2 * m + 3.0) * ct * Pbar[m, m]
    for m in range(n + 1):
        for l in range(m + 2, n + 1):
            a = math.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
            b = math.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
            Pbar[l, m] = a * (ct * Pbar[l - 1, m] - b * Pbar[l - 2, m])

    cosm = np.empty((n + 1, M))
    sinm = np.empty((n + 1, M))
    cosm[0] = 1.0
    sinm[0] = 0.0
    for m in range(1, n + 1):
        cosm[m] = cosm[m - 1] * cp - sinm[m - 1] * sp
        sinm[m] = sinm[m - 1] * cp + cosm[m - 1] * sp

    sq2 = math.sqrt(2.0)
    for col, (l, m) in enumerate(indices):
        if m == 0:
            out[:, col] = Pbar[l, 0]
        elif m > 0:
            out[:, col] = sq2 * Pbar[l, m] * cosm[m]
        else:
            out[:, col] = sq2 * Pbar[l, -m] * sinm[-m]


def _as_points(domain: Domain, points) -> np.ndarray:
    p = np.asarray(points, dtype=float)
    if p.ndim == 1:
        p = p[:, None] if domain.dim == 1 else p[None, :]
    if p.ndim != 2 or p.shape[1] != domain.dim:
        raise ValueError(
            f"points must have shape (M, {domain.dim}) for domain {domain}, got {p.shape}"
        )
    return p


def eval_basis(basis: OrthonormalBasis, points) -> BasisMatrix:
    """Evaluate every basis element at every point: B[i, j] = phi_j(x_i)."""
    domain = basis.domain
    pts = _as_points(domain, points)

    if domain.kind is DomainKind.SPHERE:
        off = np.abs(np.linalg.norm(pts, axis=1) - 1.0)
        if off.size and off.max() > SPHERE_NORM_TOL:
            i = int(np.argmax(off))
            raise NormalizationError(
                f"point {i} has norm deviation {off[i]:.3e} from the unit sphere"
            )
    else:
        inside = contains(domain, pts, tol=POINT_TOL)
        if not np.all(inside):
            i = int(np.argmin(inside))
            raise DomainViolationError(f"point {i} = {pts[i]} lies outside {domain}")

    n = basis.degree
    out = np.empty((pts.shape[0], basis.dim))
    fam = basis.family
    if fam is BasisFamily.LEGENDRE_1D:
        _eval_legendre_1d(n, pts, out)
    elif fam is BasisFamily.PRODUCT_LEGENDRE_TD:
        _eval_product_td(n, pts, out, _legendre_orthonormal_table, basis.indices)
    elif fam is BasisFamily.PRODUCT_CHEBYSHEV_TD:
        _eval_product_td(n, pts, out, _chebyshev_orthonormal_table, basis.indices)
    elif fam is BasisFamily.LOGAN_SHEPP:
        _eval_logan_shepp(n, pts, out, basis.indices)
    elif fam is BasisFamily.DUBINER:
        _eval_dubiner(n, pts, out, basis.indices)
    elif fam is BasisFamily.SPHERICAL_HARMONICS:
        _eval_spherical_harmonics(n, pts, out, basis.indices)
    else:
        raise AssertionError(fam)

    if not np.all(np.isfinite(out)):
        raise FloatingPointError("basis evaluation produced non-finite entries")
    out.setflags(write=False)
    return BasisMatrix(values=out, basis=basis, points=pts)


def check_orthonormality(basis: OrthonormalBasis, reference) -> float:
    """max_{j,k} |S_ref(phi_j phi_k) - delta_jk| under a reference rule.

    The reference rule must share the basis's domain and measure and have
    algebraic exactness at least twice the basis degree.
    """
    if reference.domain != basis.domain:
        raise ValueError(
            f"reference rule domain {reference.domain} does not match basis domain {basis.domain}"
        )
    if reference.ade is None or reference.ade < 2 * basis.degree:
        raise ValueError(
            f"reference rule exactness {reference.ade} is below 2n = {2 * basis.degree}"
        )
    B = eval_basis(basis, reference.nodes).values
    G = B.T @ (reference.weights[:, None] * B)
    return float(np.abs(G - np.eye(basis.dim)).max())
