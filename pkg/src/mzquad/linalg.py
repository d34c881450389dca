"""Dense symmetric linear algebra used by the Gramian analysis.

Thin, contract-checked wrappers around LAPACK: full symmetric
eigendecomposition (dsyevd via numpy) and Cholesky solves (dpotrf/dpotrs).
Discrete Gramians of positive-weight rules are positive semi-definite in
exact arithmetic, so eigenvalues in a tiny negative band around zero are
clamped to zero; the raw spectrum is kept alongside.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg.lapack import dpotrf, dpotrs

#: eigenvalues below zero by at most this times ||G||_F are treated as 0
CLAMP_REL = 1e-14


class EigenConvergenceError(RuntimeError):
    """The eigensolver did not converge."""


class NotSPDError(RuntimeError):
    """Cholesky factorization hit a nonpositive pivot.

    `pivot` is the 0-based index of the failing pivot; for a Gramian this
    signals a vanishing smallest eigenvalue, i.e. the underlying rule has
    no lower Marcinkiewicz-Zygmund bound at the current degree.
    """

    def __init__(self, pivot: int):
        super().__init__(f"matrix is not positive definite (failing pivot index {pivot})")
        self.pivot = pivot


@dataclass(frozen=True)
class SymMatrix:
    """Dense real symmetric matrix; symmetrized on construction."""

    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        sym = 0.5 * (a + a.T)
        sym.setflags(write=False)
        object.__setattr__(self, "a", sym)

    @property
    def order(self) -> int:
        return self.a.shape[0]

    def fro_norm(self) -> float:
        return float(np.linalg.norm(self.a))


@dataclass(frozen=True)
class EigDecomposition:
    """Full spectrum, eigenvalues ascending, orthonormal eigenvector columns.

    `values` carries the clamped spectrum, `raw_values` the LAPACK output.
    """

    values: np.ndarray
    raw_values: np.ndarray
    vectors: np.ndarray


def sym_eig(G: SymMatrix) -> EigDecomposition:
    """Eigendecomposition of a symmetric matrix, ascending eigenvalues."""
    if not np.all(np.isfinite(G.a)):
        raise ValueError("matrix has non-finite entries")
    try:
        lam, V = np.linalg.eigh(G.a)
    except np.linalg.LinAlgError as exc:
        raise EigenConvergenceError(str(exc)) from exc
    clamped = lam.copy()
    band = CLAMP_REL * G.fro_norm()
    clamped[(clamped < 0.0) & (clamped >= -band)] = 0.0
    return EigDecomposition(values=clamped, raw_values=lam, vectors=V)


def spd_solve(G: SymMatrix, b: np.ndarray) -> np.ndarray:
    """Solve G x = b for symmetric positive definite G via Cholesky.

    Raises NotSPDError with the failing pivot index when G is not SPD.
    """
    b = np.asarray(b, dtype=float)
    c, info = dpotrf(G.a, lower=1)
    if info > 0:
        raise NotSPDError(pivot=info - 1)
    if info < 0:
        raise ValueError(f"illegal value in argument {-info} of dpotrf")
    x, info = dpotrs(c, b, lower=1)
    if info != 0:
        raise RuntimeError(f"dpotrs failed with info={info}")
    return x


def spectral_dist_from_identity(G: SymMatrix) -> float:
    """2-norm distance of G from the identity: max(|1-lam_min|, |1-lam_max|)."""
    eig = sym_eig(G)
    return max(abs(1.0 - eig.values[0]), abs(1.0 - eig.values[-1]))
