"""Gramian assembly and weak Marcinkiewicz-Zygmund constants.

For a rule S and an orthonormal basis {phi_j} of the degree-n polynomial
space, the Gramian G has entries S(phi_j phi_k).  Its extremal eigenvalues
are the sharpest constants A, B with A ||p||^2 <= S(p^2) <= B ||p||^2 over
that space, and eta = max(|1-A|, |1-B|) = ||Id - G||_2 measures how far the
discrete inner product is from the continuous one.  The rule admits
exactness-relaxed approximation at degree n exactly when eta < 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bases import OrthonormalBasis, eval_basis
from .linalg import SymMatrix, sym_eig
from .rules import CubatureRule

#: A at or below COND_CUTOFF_REL * B means no lower MZ bound: cond2 = inf
COND_CUTOFF_REL = 1e-14

#: nodes are processed in blocks of this many rows to bound memory
GRAMIAN_CHUNK = 1 << 16


@dataclass(frozen=True)
class MzReport:
    """Extremal quadratic-form report for one (rule, degree) pair.

    A and B are the smallest/largest Gramian eigenvalues (A clamped to 0
    inside the numerical PSD band, and negative for genuinely indefinite
    Gramians of mixed-sign-weight rules).  pA_coeffs and pB_coeffs are unit
    coefficient vectors attaining A = S(pA^2) and B = S(pB^2);
    worst_coeffs attains |1 - S(p^2)| = eta.
    """

    n: int
    A: float
    B: float
    eta: float
    cond2: float
    pA_coeffs: np.ndarray
    pB_coeffs: np.ndarray
    worst_coeffs: np.ndarray
    basis: OrthonormalBasis
    M: int | None = None
    family: str | None = None
    ade: int | None = None

    @property
    def d_n(self) -> int:
        return self.basis.dim

    @property
    def has_mz_property(self) -> bool:
        """Whether the rule admits a positive lower MZ bound at this degree."""
        return self.A > COND_CUTOFF_REL * self.B

    def to_json_dict(self) -> dict:
        """Flat mapping for serialization; infinite cond2 becomes "inf"."""
        return {
            "n": self.n,
            "A": self.A,
            "B": self.B,
            "eta": self.eta,
            "cond2": "inf" if math.isinf(self.cond2) else self.cond2,
            "M": self.M,
            "d_n": self.d_n,
            "family": self.family,
            "ade": self.ade,
            "mz_property": self.has_mz_property,
        }


def gramian(rule: CubatureRule, basis: OrthonormalBasis, chunk: int = GRAMIAN_CHUNK) -> SymMatrix:
    """G[j, k] = sum_i w_i phi_j(x_i) phi_k(x_i), symmetrized."""
    if rule.domain != basis.domain:
        raise ValueError(
            f"rule domain {rule.domain} does not match basis domain {basis.domain}"
        )
    d = basis.dim
    G = np.zeros((d, d))
    for start in range(0, rule.size, chunk):
        stop = min(start + chunk, rule.size)
        B = eval_basis(basis, rule.nodes[start:stop]).values
        G += B.T @ (rule.weights[start:stop, None] * B)
    return SymMatrix(G)


def mz_report(G: SymMatrix, basis: OrthonormalBasis, rule: CubatureRule | None = None,
              family: str | None = None) -> MzReport:
    """Extremal eigenvalue report of a Gramian built on `basis`."""
    if G.order != basis.dim:
        raise ValueError(f"Gramian order {G.order} does not match basis dimension {basis.dim}")
    eig = sym_eig(G)
    A = float(eig.values[0])
    B = float(eig.values[-1])
    eta = max(abs(1.0 - A), abs(1.0 - B))
    cond2 = math.inf if A <= COND_CUTOFF_REL * B else B / A
    pA = eig.vectors[:, 0].copy()
    pB = eig.vectors[:, -1].copy()
    worst = pA if abs(1.0 - A) >= abs(1.0 - B) else pB
    return MzReport(
        n=basis.degree, A=A, B=B, eta=eta, cond2=cond2,
        pA_coeffs=pA, pB_coeffs=pB, worst_coeffs=worst.copy(), basis=basis,
        M=None if rule is None else rule.size,
        family=family,
        ade=None if rule is None else rule.ade,
    )


def analyze(rule: CubatureRule, basis_or_degree, family: str | None = None) -> MzReport:
    """Convenience wrapper: Gramian plus report in one call.

    `basis_or_degree` is either an OrthonormalBasis on the rule's domain or
    a degree, in which case the domain's default basis is used.
    """
    from .bases import orthonormal_basis

    if isinstance(basis_or_degree, OrthonormalBasis):
        basis = basis_or_degree
    else:
        basis = orthonormal_basis(rule.domain, int(basis_or_degree))
    G = gramian(rule, basis)
    return mz_report(G, basis, rule=rule, family=family)


def eta_direct_check(rule: CubatureRule, basis: OrthonormalBasis, coeffs: np.ndarray) -> float:
    """Eigen-free oracle: |1 - S(p^2)| for p with unit coefficient vector.

    Evaluates p = sum_j c_j phi_j at the rule nodes directly, so it shares
    nothing with the eigenvalue route; at the report's worst_coeffs it must
    reproduce eta.
    """
    c = np.asarray(coeffs, dtype=float)
    nrm = float(np.linalg.norm(c))
    if abs(nrm - 1.0) > 1e-10:
        raise ValueError(f"coefficient vector must have unit 2-norm, got {nrm!r}")
    if c.size != basis.dim:
        raise ValueError(f"expected {basis.dim} coefficients, got {c.size}")
    p = eval_basis(basis, rule.nodes).values @ c
    return float(abs(1.0 - np.sum(rule.weights * p * p)))
