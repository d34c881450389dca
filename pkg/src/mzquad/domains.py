"""Reference integration domains and their measures.

All computations happen on fixed unit reference sets: the interval [-1,1],
the square [-1,1]^2, the cube [-1,1]^3, the closed unit disk, the unit
triangle {x,y >= 0, x+y <= 1} and the unit sphere S^2 in R^3.  Each domain
carries a reference measure: Lebesgue everywhere, plus the (unnormalized)
product Chebyshev measure dx dy / sqrt((1-x^2)(1-y^2)) on the square.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class DomainKind(Enum):
    INTERVAL = "interval"
    SQUARE = "square"
    CUBE = "cube"
    DISK = "disk"
    SIMPLEX = "simplex"
    SPHERE = "sphere"


class Measure(Enum):
    LEBESGUE = "lebesgue"
    PRODUCT_CHEBYSHEV = "cheb"


_DIM = {
    DomainKind.INTERVAL: 1,
    DomainKind.SQUARE: 2,
    DomainKind.CUBE: 3,
    DomainKind.DISK: 2,
    DomainKind.SIMPLEX: 2,
    DomainKind.SPHERE: 3,
}

_MASS = {
    (DomainKind.INTERVAL, Measure.LEBESGUE): 2.0,
    (DomainKind.SQUARE, Measure.LEBESGUE): 4.0,
    (DomainKind.SQUARE, Measure.PRODUCT_CHEBYSHEV): math.pi**2,
    (DomainKind.CUBE, Measure.LEBESGUE): 8.0,
    (DomainKind.DISK, Measure.LEBESGUE): math.pi,
    (DomainKind.SIMPLEX, Measure.LEBESGUE): 0.5,
    (DomainKind.SPHERE, Measure.LEBESGUE): 4.0 * math.pi,
}


@dataclass(frozen=True)
class Domain:
    """A reference set together with its reference measure."""

    kind: DomainKind
    measure: Measure = Measure.LEBESGUE

    def __post_init__(self):
        if self.measure is Measure.PRODUCT_CHEBYSHEV and self.kind is not DomainKind.SQUARE:
            raise ValueError(
                f"the product Chebyshev measure is only supported on the square, not {self.kind.value}"
            )

    @property
    def dim(self) -> int:
        """Number of ambient coordinates of a point (the sphere lives in R^3)."""
        return _DIM[self.kind]

    @property
    def token(self) -> str:
        return self.kind.value

    def __str__(self) -> str:
        if self.measure is Measure.PRODUCT_CHEBYSHEV:
            return f"{self.kind.value}[cheb]"
        return self.kind.value


INTERVAL = Domain(DomainKind.INTERVAL)
SQUARE = Domain(DomainKind.SQUARE)
SQUARE_CHEB = Domain(DomainKind.SQUARE, Measure.PRODUCT_CHEBYSHEV)
CUBE = Domain(DomainKind.CUBE)
DISK = Domain(DomainKind.DISK)
SIMPLEX = Domain(DomainKind.SIMPLEX)
SPHERE = Domain(DomainKind.SPHERE)


def domain_from_token(token: str, measure: str | None = None) -> Domain:
    """Build a Domain from CLI tokens, e.g. ("square", "cheb")."""
    try:
        kind = DomainKind(token.lower())
    except ValueError:
        raise ValueError(f"unknown domain token {token!r}") from None
    if measure in (None, "", "lebesgue"):
        return Domain(kind)
    if measure == "cheb":
        return Domain(kind, Measure.PRODUCT_CHEBYSHEV)
    raise ValueError(f"unknown measure token {measure!r}")


def mass(domain: Domain) -> float:
    """Total measure of the domain's reference measure."""
    return _MASS[(domain.kind, domain.measure)]


def contains(domain: Domain, points: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Per-point membership test for the closed reference set.

    For the sphere, membership means |norm(p) - 1| <= tol.
    """
    p = np.atleast_2d(np.asarray(points, dtype=float))
    kind = domain.kind
    if kind is DomainKind.INTERVAL:
        return np.abs(p[:, 0]) <= 1.0 + tol
    if kind in (DomainKind.SQUARE, DomainKind.CUBE):
        return np.all(np.abs(p) <= 1.0 + tol, axis=1)
    if kind is DomainKind.DISK:
        return p[:, 0] ** 2 + p[:, 1] ** 2 <= (1.0 + tol) ** 2
    if kind is DomainKind.SIMPLEX:
        x, y = p[:, 0], p[:, 1]
        return (x >= -tol) & (y >= -tol) & (x + y <= 1.0 + tol)
    if kind is DomainKind.SPHERE:
        return np.abs(np.linalg.norm(p, axis=1) - 1.0) <= tol
    raise AssertionError(kind)


def sample_domain(domain: Domain, count: int, seed: int = 0) -> np.ndarray:
    """Seeded quasi-uniform sample of `count` points, shape (count, dim).

    Used for sup-norm estimates; the distribution only needs to cover the
    domain densely, not to be exactly uniform.
    """
    rng = np.random.default_rng(seed)
    kind = domain.kind
    if kind is DomainKind.INTERVAL:
        return rng.uniform(-1.0, 1.0, size=(count, 1))
    if kind is DomainKind.SQUARE:
        return rng.uniform(-1.0, 1.0, size=(count, 2))
    if kind is DomainKind.CUBE:
        return rng.uniform(-1.0, 1.0, size=(count, 3))
    if kind is DomainKind.DISK:
        r = np.sqrt(rng.uniform(0.0, 1.0, size=count))
        th = rng.uniform(0.0, 2.0 * np.pi, size=count)
        return np.column_stack([r * np.cos(th), r * np.sin(th)])
    if kind is DomainKind.SIMPLEX:
        u = rng.uniform(0.0, 1.0, size=(count, 2))
        flip = u.sum(axis=1) > 1.0
        u[flip] = 1.0 - u[flip]
        return u
    if kind is DomainKind.SPHERE:
        v = rng.standard_normal(size=(count, 3))
        return v / np.linalg.norm(v, axis=1, keepdims=True)
    raise AssertionError(kind)
