"""Hyperinterpolation and discrete least-squares projection.

Both operators expand a continuous function in an orthonormal basis from
samples at cubature nodes.  Hyperinterpolation uses the raw discrete
moments c_j = S(f phi_j); it is the L2 projection whenever the rule is
exact in twice the basis degree ("classical"), and a well-defined but
non-projective approximation otherwise ("exactness-relaxed").  The
least-squares operator solves the Gramian normal equations G c = m and is
a projection in the discrete weighted norm whenever the Gramian is
nonsingular.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .bases import OrthonormalBasis, eval_basis, orthonormal_basis
from .domains import Domain, DomainKind, Measure, mass, sample_domain
from .linalg import NotSPDError, SymMatrix, spd_solve, sym_eig
from .mz import MzReport, gramian
from .rules import CubatureRule, Provenance, reference_rule, tensor_gauss_legendre, gauss_legendre

#: Gramians whose eigenvalues are smaller than this (relative to the
#: largest) are treated as singular: no least-squares fit exists
LS_SINGULAR_REL = 1e-12


class NoMZPropertyError(RuntimeError):
    """The Gramian is numerically singular: no least-squares fit at this degree."""


class DegenerateFunctionError(ValueError):
    """The target function is numerically zero on the reference nodes."""


class Method(Enum):
    HYPERINTERPOLATION = "hyperinterpolation"
    LEAST_SQUARES = "least-squares"


@dataclass(frozen=True)
class Approximant:
    """A polynomial given by coefficients in an orthonormal basis."""

    basis: OrthonormalBasis
    coeffs: np.ndarray
    method: Method
    source: Provenance | None = None

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (self.basis.dim,):
            raise ValueError(f"expected {self.basis.dim} coefficients, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients contain non-finite values")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __call__(self, points):
        return evaluate(self, points)


@dataclass(frozen=True)
class ErrorRecord:
    """One relative-L2-error measurement of an approximation method."""

    domain: Domain
    family: str
    ade: int | None
    n: int
    method: Method
    fid: str
    relerr: float


def _node_values(f, nodes: np.ndarray) -> np.ndarray:
    vals = np.asarray(f(nodes), dtype=float)
    if vals.shape != (nodes.shape[0],):
        raise ValueError(f"function returned shape {vals.shape}, expected ({nodes.shape[0]},)")
    bad = ~np.isfinite(vals)
    if bad.any():
        raise ValueError(f"function evaluation failed at node {int(np.argmax(bad))}")
    return vals


def discrete_moments(rule: CubatureRule, basis: OrthonormalBasis, f) -> np.ndarray:
    """m_j = S(f phi_j) = sum_i w_i f(x_i) phi_j(x_i)."""
    B = eval_basis(basis, rule.nodes).values
    return B.T @ (rule.weights * _node_values(f, rule.nodes))


def hyperinterpolate(rule: CubatureRule, basis: OrthonormalBasis, f) -> Approximant:
    """Approximant with coefficients c_j = S(f phi_j)."""
    if rule.domain != basis.domain:
        raise ValueError(f"rule domain {rule.domain} does not match basis domain {basis.domain}")
    return Approximant(
        basis=basis,
        coeffs=discrete_moments(rule, basis, f),
        method=Method.HYPERINTERPOLATION,
        source=rule.provenance,
    )


def solve_normal_equations(G: SymMatrix, moments: np.ndarray) -> np.ndarray:
    """Solve G c = m for a Gramian G.

    Cholesky when G is positive definite.  Rules with a few negative
    weights (Padua) can produce an indefinite yet well-conditioned Gramian;
    those are solved through the symmetric eigendecomposition instead.
    A numerically singular Gramian raises NoMZPropertyError.
    """
    try:
        return spd_solve(G, moments)
    except NotSPDError:
        eig = sym_eig(G)
        lam = eig.raw_values
        if np.abs(lam).min() <= LS_SINGULAR_REL * np.abs(lam).max():
            raise NoMZPropertyError(
                "Gramian is numerically singular: the rule has no MZ property at this degree"
            ) from None
        return eig.vectors @ ((eig.vectors.T @ moments) / lam)


def least_squares(rule: CubatureRule, basis: OrthonormalBasis, f, G: SymMatrix | None = None) -> Approximant:
    """Weighted least-squares fit: minimizes sum_i w_i (p(x_i) - f(x_i))^2.

    Coefficients solve the Gramian normal equations G c = {S(f phi_j)}.
    A precomputed Gramian can be passed to amortize repeated fits.
    """
    if rule.domain != basis.domain:
        raise ValueError(f"rule domain {rule.domain} does not match basis domain {basis.domain}")
    if G is None:
        G = gramian(rule, basis)
    coeffs = solve_normal_equations(G, discrete_moments(rule, basis, f))
    return Approximant(basis=basis, coeffs=coeffs, method=Method.LEAST_SQUARES, source=rule.provenance)


def evaluate(approx: Approximant, points) -> np.ndarray:
    """p(z) = sum_j c_j phi_j(z) at the given points."""
    return eval_basis(approx.basis, points).values @ approx.coeffs


def rel_l2_error(approx: Approximant, f, reference: CubatureRule) -> float:
    """Relative L2 error of `approx` against f, via the reference rule.

    Returns sqrt(sum u_k (p(z_k) - f(z_k))^2) / sqrt(sum u_k f(z_k)^2).
    """
    if reference.domain != approx.basis.domain:
        raise ValueError(
            f"reference domain {reference.domain} does not match approximant domain {approx.basis.domain}"
        )
    fz = _node_values(f, reference.nodes)
    denom = float(np.sum(reference.weights * fz * fz))
    if denom <= 0.0 or math.sqrt(denom) < 1e-15 * math.sqrt(mass(reference.domain)):
        raise DegenerateFunctionError("function is numerically zero on the reference nodes")
    pz = evaluate(approx, reference.nodes)
    num = float(np.sum(reference.weights * (pz - fz) ** 2))
    return math.sqrt(max(num, 0.0)) / math.sqrt(denom)


# ----------------------------------------------------------------------
# one-sided error-bound checks

@dataclass(frozen=True)
class BoundCheck:
    """One-sided check of the least-squares error bound.

    lhs is the measured L2 error ||f - LS_n f||; rhs is the bound
    (1 + 1/sqrt(A)) * sqrt(mass) * sup|f - p| with the sup estimated on a
    seeded dense grid (an estimate, not a certified maximum).
    """

    lhs: float
    rhs: float
    sup_estimate: float
    A: float
    passed: bool


class BoundInapplicableError(RuntimeError):
    """The lower MZ constant is nonpositive: the bound does not apply."""


def check_error_bounds(
    report: MzReport,
    rule: CubatureRule,
    f,
    surrogate_p: Approximant,
    reference: CubatureRule | None = None,
    grid_points: int = 10_000,
    seed: int = 2025,
) -> BoundCheck:
    """Check ||f - LS_n f|| <= (1 + 1/sqrt(A)) sqrt(mass) ||f - p||_inf.

    `surrogate_p` is any degree-n polynomial; its sup distance from f upper
    bounds the best uniform approximation error, so the check is one-sided.
    """
    if report.A <= 0.0:
        raise BoundInapplicableError(f"lower MZ constant A = {report.A!r} is not positive")
    basis = report.basis
    if surrogate_p.basis.degree > basis.degree:
        raise ValueError("surrogate polynomial degree exceeds the report degree")
    if reference is None:
        reference = reference_rule(basis.domain)
    approx = least_squares(rule, basis, f)
    fz = _node_values(f, reference.nodes)
    fnorm = math.sqrt(float(np.sum(reference.weights * fz * fz)))
    lhs = rel_l2_error(approx, f, reference) * fnorm

    grid = sample_domain(basis.domain, grid_points, seed=seed)
    sup = float(np.abs(_node_values(f, grid) - evaluate(surrogate_p, grid)).max())
    rhs = (1.0 + 1.0 / math.sqrt(report.A)) * math.sqrt(mass(basis.domain)) * sup
    return BoundCheck(lhs=lhs, rhs=rhs, sup_estimate=sup, A=report.A, passed=lhs <= rhs)


def chebyshev_truncation(f, domain: Domain, n: int, axis_points: int | None = None) -> Approximant:
    """Total-degree-n Chebyshev truncation of f on a box domain.

    Chebyshev coefficients are computed by a tensor Gauss-Chebyshev
    quadrature; the truncated series is then re-expanded exactly in the
    domain's orthonormal basis by a rule of exactness 2n.  The result is a
    convenient default surrogate for best-approximation error bounds.
    """
    if domain.kind not in (DomainKind.INTERVAL, DomainKind.SQUARE, DomainKind.CUBE):
        raise ValueError("Chebyshev truncation is defined on box domains only")
    if domain.measure is not Measure.LEBESGUE:
        raise ValueError("Chebyshev truncation expects the Lebesgue measure")
    dim = domain.dim
    k = axis_points or (n + 25)
    i = np.arange(1, k + 1)
    x1 = np.cos((2.0 * i - 1.0) * np.pi / (2.0 * k))

    T1 = np.empty((n + 1, k))
    T1[0] = 1.0
    if n >= 1:
        T1[1] = x1
    for j in range(1, n):
        T1[j + 1] = 2.0 * x1 * T1[j] - T1[j - 1]

    grids = np.meshgrid(*([x1] * dim), indexing="ij")
    pts = np.column_stack([g.ravel() for g in grids])
    fv = _node_values(f, pts).reshape((k,) * dim)

    # Gauss-Chebyshev projection per axis: <f, T_a> with weight pi/k,
    # normalized by ||T_0||^2 = pi, ||T_a||^2 = pi/2
    coef = fv
    for axis in range(dim):
        coef = np.tensordot(T1, coef, axes=([1], [axis]))
        coef = np.moveaxis(coef, 0, axis)
    coef = coef * (2.0 / k) ** dim
    sl = [slice(None)] * dim
    for axis in range(dim):
        sl_axis = sl.copy()
        sl_axis[axis] = 0
        coef[tuple(sl_axis)] *= 0.5

    idx = np.indices((n + 1,) * dim).reshape(dim, -1).T
    kept = idx[idx.sum(axis=1) <= n]
    kept_vals = coef[tuple(kept.T)]

    def truncated(points):
        p = np.atleast_2d(np.asarray(points, dtype=float))
        tabs = []
        for axis in range(dim):
            T = np.empty((n + 1, p.shape[0]))
            T[0] = 1.0
            if n >= 1:
                T[1] = p[:, axis]
            for j in range(1, n):
                T[j + 1] = 2.0 * p[:, axis] * T[j] - T[j - 1]
            tabs.append(T)
        out = np.zeros(p.shape[0])
        for exps, a in zip(kept, kept_vals):
            term = a * tabs[0][exps[0]]
            for axis in range(1, dim):
                term = term * tabs[axis][exps[axis]]
            out += term
        return out

    projector = gauss_legendre(n + 1) if dim == 1 else tensor_gauss_legendre(2 * n, dim)
    basis = orthonormal_basis(domain, n)
    return hyperinterpolate(projector, basis, truncated)
