"""Cubature rule constructors, file I/O and exactness certification.

Every rule is a flat list of nodes and weights on one of the reference
domains, tagged with its claimed algebraic degree of exactness (ADE).
Constructed families: Gauss-Legendre and Clenshaw-Curtis on the interval,
tensor products on the square/cube, Padua-point and Morrow-Patterson-Xu
rules on the square, polar tensor rules on the disk, Stroud conical rules
on the triangle, latitude-longitude rules on the sphere, and Halton
quasi-Monte Carlo rules on the square/cube.  Externally published rules
(sphere designs, near-minimal rules) are read from plain-text files.

Text format (UTF-8, one rule per file)::

    # domain=<token> ade=<int|unknown> count=<M> columns=<d|d+1>
    x1 [y1 [z1]] [w1]
    ...

The weight column may be omitted only for sphere designs, whose weights
are the equal-weight value 4*pi/M by definition.  The serializer writes
17 significant digits so files round-trip exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .domains import (
    CUBE,
    DISK,
    INTERVAL,
    SIMPLEX,
    SPHERE,
    SQUARE,
    SQUARE_CHEB,
    Domain,
    DomainKind,
    Measure,
    contains,
    mass,
)
from . import bases

#: node membership tolerance for constructed and loaded rules
NODE_TOL = 1e-10


class Provenance(Enum):
    GAUSS_LEGENDRE = "gauss-legendre"
    CLENSHAW_CURTIS = "clenshaw-curtis"
    TENSOR_PRODUCT = "tensor-product"
    PADUA = "padua"
    MORROW_PATTERSON_XU = "morrow-patterson-xu"
    POLAR_DISK = "polar-disk"
    STROUD_CONICAL = "stroud-conical"
    LAT_LONG = "lat-long"
    SPHERICAL_DESIGN = "spherical-design"
    SYMMETRIC_SPHERICAL_DESIGN = "symmetric-spherical-design"
    HALTON_QMC = "halton-qmc"
    NEAR_MINIMAL_FILE = "near-minimal-file"


class RuleParseError(ValueError):
    """Base class for rule-file parse failures; message names the line."""


class MalformedLineError(RuleParseError):
    pass


class NonpositiveWeightError(RuleParseError):
    pass


class NodeOutsideDomainError(RuleParseError):
    pass


class CountMismatchError(RuleParseError):
    pass


@dataclass(frozen=True)
class CubatureRule:
    """Nodes, positive weights and a claimed algebraic degree of exactness.

    `ade` is None when the rule has no algebraic exactness claim (QMC).
    """

    domain: Domain
    nodes: np.ndarray
    weights: np.ndarray
    ade: int | None
    provenance: Provenance

    def __post_init__(self):
        nodes = np.atleast_2d(np.asarray(self.nodes, dtype=float))
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != (weights.size, self.domain.dim):
            raise ValueError(
                f"nodes shape {nodes.shape} does not match {weights.size} weights in R^{self.domain.dim}"
            )
        if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(weights))):
            raise ValueError("rule has non-finite nodes or weights")
        if not np.all(contains(self.domain, nodes, tol=NODE_TOL)):
            bad = int(np.argmin(contains(self.domain, nodes, tol=NODE_TOL)))
            raise ValueError(f"node {bad} = {nodes[bad]} lies outside {self.domain}")
        if self.provenance is not Provenance.PADUA and np.any(weights <= 0.0):
            bad = int(np.argmin(weights))
            raise ValueError(f"weight {bad} = {weights[bad]} is not positive")
        if self.ade is not None or self.provenance is Provenance.HALTON_QMC:
            target = mass(self.domain)
            if abs(weights.sum() - target) > 1e-10 * target:
                raise ValueError(
                    f"weights sum to {weights.sum()!r}, expected measure mass {target!r}"
                )
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return self.weights.size


# ----------------------------------------------------------------------
# Gauss rules via the symmetric tridiagonal recurrence eigenproblem

def _gauss_from_recurrence(diag: np.ndarray, offsq: np.ndarray, mu0: float):
    """Nodes/weights of the Gauss rule with recurrence diagonal `diag`,
    squared off-diagonal `offsq` and zeroth moment `mu0` (Golub-Welsch)."""
    J = np.diag(diag)
    if offsq.size:
        sb = np.sqrt(offsq)
        J = J + np.diag(sb, 1) + np.diag(sb, -1)
    lam, V = np.linalg.eigh(J)
    return lam, mu0 * V[0, :] ** 2


def _gauss_legendre_1d(k: int):
    diag = np.zeros(k)
    j = np.arange(1.0, k)
    offsq = j * j / (4.0 * j * j - 1.0)
    return _gauss_from_recurrence(diag, offsq, 2.0)


def _gauss_jacobi_1d(k: int, alpha: float, beta: float):
    """Gauss rule for the weight (1-x)^alpha (1+x)^beta on [-1, 1]."""
    apb = alpha + beta
    diag = np.zeros(k)
    offsq = np.zeros(max(k - 1, 0))
    diag[0] = (beta - alpha) / (apb + 2.0)
    mu0 = 2.0 ** (apb + 1.0) * math.gamma(alpha + 1) * math.gamma(beta + 1) / math.gamma(apb + 2)
    for j in range(1, k):
        den = (2 * j + apb) * (2 * j + apb + 2.0)
        diag[j] = (beta**2 - alpha**2) / den
        offsq[j - 1] = (
            4.0 * j * (j + alpha) * (j + beta) * (j + apb)
            / ((2 * j + apb) ** 2 * ((2 * j + apb) ** 2 - 1.0))
        )
    return _gauss_from_recurrence(diag, offsq, mu0)


def gauss_legendre(k: int) -> CubatureRule:
    """k-point Gauss-Legendre rule on [-1,1], exact up to degree 2k-1."""
    if k < 1:
        raise ValueError(f"need at least one node, got k={k}")
    x, w = _gauss_legendre_1d(k)
    return CubatureRule(INTERVAL, x[:, None], w, ade=2 * k - 1, provenance=Provenance.GAUSS_LEGENDRE)


def clenshaw_curtis(m: int) -> CubatureRule:
    """Clenshaw-Curtis rule with m+1 Chebyshev-Lobatto nodes, exact in degree m."""
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    j = np.arange(m + 1)
    theta = j * np.pi / m
    nodes = np.cos(theta)
    s = np.ones(m + 1)
    for k in range(1, m // 2 + 1):
        b = 1.0 if 2 * k == m else 2.0
        s -= b * np.cos(2.0 * k * theta) / (4.0 * k * k - 1.0)
    c = np.where((j == 0) | (j == m), 1.0, 2.0)
    w = c * s / m
    return CubatureRule(INTERVAL, nodes[:, None], w, ade=m, provenance=Provenance.CLENSHAW_CURTIS)


def tensor_rule(factors) -> CubatureRule:
    """Tensor product of 2 or 3 interval rules (square or cube grid)."""
    factors = list(factors)
    if len(factors) not in (2, 3) or any(f.domain.kind is not DomainKind.INTERVAL for f in factors):
        raise ValueError("tensor composition supports 2 or 3 interval factors only")
    target = SQUARE if len(factors) == 2 else CUBE
    grids = np.meshgrid(*[f.nodes[:, 0] for f in factors], indexing="ij")
    nodes = np.column_stack([g.ravel() for g in grids])
    wgrids = np.meshgrid(*[f.weights for f in factors], indexing="ij")
    weights = np.ones_like(wgrids[0])
    for wg in wgrids:
        weights = weights * wg
    ade = min(f.ade for f in factors)
    return CubatureRule(target, nodes, weights.ravel(), ade=ade, provenance=Provenance.TENSOR_PRODUCT)


def tensor_gauss_legendre(ade: int, dim: int) -> CubatureRule:
    """Product Gauss-Legendre grid on the square (dim=2) or cube (dim=3)
    with per-axis exactness at least `ade`."""
    k = (ade + 2) // 2
    return tensor_rule([gauss_legendre(k)] * dim)


def tensor_gauss_chebyshev(k: int) -> CubatureRule:
    """k x k Gauss-Chebyshev grid for the product Chebyshev measure on the
    square; exact in total degree 2k-1, weights (pi/k)^2."""
    if k < 1:
        raise ValueError(f"need at least one node per axis, got k={k}")
    i = np.arange(1, k + 1)
    x = np.cos((2.0 * i - 1.0) * np.pi / (2.0 * k))
    X, Y = np.meshgrid(x, x, indexing="ij")
    nodes = np.column_stack([X.ravel(), Y.ravel()])
    weights = np.full(k * k, (np.pi / k) ** 2)
    return CubatureRule(SQUARE_CHEB, nodes, weights, ade=2 * k - 1, provenance=Provenance.TENSOR_PRODUCT)


def padua_rule(m: int) -> CubatureRule:
    """Degree-m Padua points with moment-fitted Lebesgue weights.

    Nodes are the (m+1)(m+2)/2 points (cos(j pi/m), cos(k pi/(m+1))) with
    j+k even; the points are unisolvent for total degree m, so the moment
    system against a product Chebyshev basis of that degree is square and
    determines the weights.  Individual weights may be (slightly) negative;
    positivity is not part of this family's contract.
    """
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    pts = []
    for j in range(m + 1):
        xj = math.cos(j * math.pi / m)
        for k in range(m + 2):
            if (j + k) % 2 == 0:
                pts.append((xj, math.cos(k * math.pi / (m + 1))))
    nodes = np.array(pts)
    pairs = [(a, g - a) for g in range(m + 1) for a in range(g + 1)]
    Tx = _chebyshev_t_table(m, nodes[:, 0])
    Ty = _chebyshev_t_table(m, nodes[:, 1])
    A = np.empty((len(pairs), nodes.shape[0]))
    rhs = np.empty(len(pairs))
    for row, (a, b) in enumerate(pairs):
        A[row] = Tx[a] * Ty[b]
        rhs[row] = _cheb_lebesgue_moment(a) * _cheb_lebesgue_moment(b)
    try:
        w = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"Padua moment system of degree {m} is singular") from exc
    return CubatureRule(SQUARE, nodes, w, ade=m, provenance=Provenance.PADUA)


def _chebyshev_t_table(nmax: int, x: np.ndarray) -> np.ndarray:
    T = np.empty((nmax + 1, x.size))
    T[0] = 1.0
    if nmax >= 1:
        T[1] = x
    for k in range(1, nmax):
        T[k + 1] = 2.0 * x * T[k] - T[k - 1]
    return T


def _cheb_lebesgue_moment(a: int) -> float:
    """Integral of T_a over [-1, 1] with the Lebesgue measure."""
    return 0.0 if a % 2 else 2.0 / (1.0 - a * a)


def morrow_patterson_xu(m: int) -> CubatureRule:
    """Near-minimal rule of odd degree m for the product Chebyshev measure.

    The closed-form construction interleaves even/odd Chebyshev-Lobatto
    indices on a (q+1) x (q+1) grid with q = (m+1)/2; it covers odd m only.
    Interior points carry weight 2 pi^2/q^2, edge points half of that,
    corner points a quarter.
    """
    if m < 1 or m % 2 == 0:
        raise ValueError(
            f"the closed-form construction supports odd degrees m = 1, 3, 5, ...; got m={m}"
        )
    q = (m + 1) // 2
    z = np.cos(np.arange(q + 1) * np.pi / q)
    nodes = []
    weights = []
    base = np.pi**2 / q**2

    def boundary_count(i, j):
        return (i in (0, q)) + (j in (0, q))

    for i in range(0, q + 1, 2):
        for j in range(1, q + 1, 2):
            nodes.append((z[i], z[j]))
            weights.append(base * 2.0 / 2 ** boundary_count(i, j))
    for i in range(1, q + 1, 2):
        for j in range(0, q + 1, 2):
            nodes.append((z[i], z[j]))
            weights.append(base * 2.0 / 2 ** boundary_count(i, j))
    return CubatureRule(
        SQUARE_CHEB, np.array(nodes), np.array(weights), ade=m,
        provenance=Provenance.MORROW_PATTERSON_XU,
    )


def polar_disk_rule(m: int) -> CubatureRule:
    """Polar tensor rule on the unit disk, exact in total degree m.

    Radial part: Gauss rule for the weight r on [0,1] with ceil((m+1)/2)
    points; angular part: m+1 equispaced angles with equal weights.
    """
    if m < 0:
        raise ValueError(f"need m >= 0, got {m}")
    q = (m + 2) // 2
    t, lam = _gauss_jacobi_1d(q, 0.0, 1.0)
    r = (1.0 + t) / 2.0
    wr = lam / 4.0
    K = m + 1
    th = 2.0 * np.pi * np.arange(K) / K
    R, TH = np.meshgrid(r, th, indexing="ij")
    nodes = np.column_stack([(R * np.cos(TH)).ravel(), (R * np.sin(TH)).ravel()])
    weights = np.repeat(wr, K) * (2.0 * np.pi / K)
    return CubatureRule(DISK, nodes, weights, ade=m, provenance=Provenance.POLAR_DISK)


def stroud_conical(m: int) -> CubatureRule:
    """Conical product rule on the unit triangle, exact in total degree m.

    Duffy map x = u, y = v(1-u) of a Gauss-Jacobi rule (weight 1-u) times a
    Gauss-Legendre rule; exactly ceil((m+1)/2)^2 interior nodes.
    """
    if m < 0:
        raise ValueError(f"need m >= 0, got {m}")
    q = (m + 2) // 2
    t, lam = _gauss_jacobi_1d(q, 1.0, 0.0)
    u = (1.0 + t) / 2.0
    wu = lam / 4.0
    s, mu = _gauss_legendre_1d(q)
    v = (1.0 + s) / 2.0
    wv = mu / 2.0
    U, V = np.meshgrid(u, v, indexing="ij")
    nodes = np.column_stack([U.ravel(), (V * (1.0 - U)).ravel()])
    weights = np.outer(wu, wv).ravel()
    return CubatureRule(SIMPLEX, nodes, weights, ade=m, provenance=Provenance.STROUD_CONICAL)


def latlong_sphere(m: int) -> CubatureRule:
    """Latitude-longitude rule on S^2, exact in spherical degree m.

    Gauss-Legendre in t = cos(theta) with ceil((m+1)/2) points crossed with
    m+1 equispaced longitudes of equal weight.
    """
    if m < 0:
        raise ValueError(f"need m >= 0, got {m}")
    q = (m + 2) // 2
    t, wt = _gauss_legendre_1d(q)
    st = np.sqrt(np.maximum(0.0, 1.0 - t * t))
    K = m + 1
    phi = 2.0 * np.pi * np.arange(K) / K
    cph, sph = np.cos(phi), np.sin(phi)
    x = np.outer(st, cph).ravel()
    y = np.outer(st, sph).ravel()
    z = np.repeat(t, K)
    weights = np.repeat(wt, K) * (2.0 * np.pi / K)
    return CubatureRule(
        SPHERE, np.column_stack([x, y, z]), weights, ade=m, provenance=Provenance.LAT_LONG
    )


def _radical_inverse(indices: np.ndarray, base: int) -> np.ndarray:
    x = np.zeros(indices.shape, dtype=float)
    f = 1.0 / base
    i = indices.copy()
    while i.max() > 0:
        x += (i % base) * f
        i //= base
        f /= base
    return x


def halton_qmc(M: int, domain: Domain) -> CubatureRule:
    """First M Halton points (indices starting at 1) with equal weights.

    Bases (2, 3) on the square, (2, 3, 5) on the cube; points are mapped
    from [0,1]^d to [-1,1]^d.  No algebraic exactness degree is claimed.
    """
    if domain.kind not in (DomainKind.SQUARE, DomainKind.CUBE) or domain.measure is not Measure.LEBESGUE:
        raise ValueError(f"Halton rules are supported on the square and cube only, not {domain}")
    if M < 1:
        raise ValueError(f"need at least one point, got M={M}")
    primes = (2, 3, 5)[: domain.dim]
    idx = np.arange(1, M + 1, dtype=np.int64)
    cols = [2.0 * _radical_inverse(idx, b) - 1.0 for b in primes]
    nodes = np.column_stack(cols)
    weights = np.full(M, mass(domain) / M)
    return CubatureRule(domain, nodes, weights, ade=None, provenance=Provenance.HALTON_QMC)


# ----------------------------------------------------------------------
# exactness certification

def default_basis(domain: Domain, n: int):
    return bases.orthonormal_basis(domain, n)


def verify_ade(rule: CubatureRule, claimed_m: int) -> float:
    """Residual max_j |S(phi_j) - I(phi_j)| over the degree-claimed_m basis.

    By orthonormality I(phi_j) vanishes except for the constant element,
    whose integral is sqrt(mass).  A residual at rounding level certifies
    the claimed exactness degree; a large residual refutes it.
    """
    basis = default_basis(rule.domain, claimed_m)
    B = bases.eval_basis(basis, rule.nodes).values
    s = B.T @ rule.weights
    s[0] -= math.sqrt(mass(rule.domain))
    return float(np.abs(s).max())


def reference_rule(domain: Domain, ade: int = 50) -> CubatureRule:
    """A positive rule of exactness at least `ade` on the given domain."""
    kind = domain.kind
    if kind is DomainKind.INTERVAL:
        return gauss_legendre((ade + 2) // 2)
    if kind is DomainKind.SQUARE:
        if domain.measure is Measure.PRODUCT_CHEBYSHEV:
            return tensor_gauss_chebyshev((ade + 2) // 2)
        return tensor_gauss_legendre(ade, 2)
    if kind is DomainKind.CUBE:
        return tensor_gauss_legendre(ade, 3)
    if kind is DomainKind.DISK:
        return polar_disk_rule(ade)
    if kind is DomainKind.SIMPLEX:
        return stroud_conical(ade)
    if kind is DomainKind.SPHERE:
        return latlong_sphere(ade)
    raise AssertionError(kind)


# ----------------------------------------------------------------------
# plain-text rule files

def _is_antipodal(nodes: np.ndarray) -> bool:
    a = np.round(nodes, 9)
    b = np.round(-nodes, 9)
    order_a = np.lexsort(a.T)
    order_b = np.lexsort(b.T)
    return bool(np.array_equal(a[order_a], b[order_b]))


def load_rule(path, domain: Domain, ade_claim: int | str | None = "header") -> CubatureRule:
    """Parse a rule file; see the module docstring for the format.

    `ade_claim` overrides the header's exactness claim when given as an
    int or None; the default "header" keeps the file's claim.
    """
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].lstrip().startswith("#"):
        raise MalformedLineError(f"{path}:1: missing '# domain=... ade=... count=... columns=...' header")
    header: dict[str, str] = {}
    for tokenpair in lines[0].lstrip("# ").split():
        if "=" not in tokenpair:
            raise MalformedLineError(f"{path}:1: bad header token {tokenpair!r}")
        key, val = tokenpair.split("=", 1)
        header[key] = val
    for key in ("domain", "ade", "count", "columns"):
        if key not in header:
            raise MalformedLineError(f"{path}:1: header lacks {key}=")
    if header["domain"] != domain.kind.value:
        raise MalformedLineError(
            f"{path}:1: header domain {header['domain']!r} does not match requested {domain.kind.value!r}"
        )
    try:
        count = int(header["count"])
        columns = int(header["columns"])
    except ValueError as exc:
        raise MalformedLineError(f"{path}:1: non-integer count/columns") from exc
    header_ade: int | None
    if header["ade"] == "unknown":
        header_ade = None
    else:
        try:
            header_ade = int(header["ade"])
        except ValueError as exc:
            raise MalformedLineError(f"{path}:1: bad ade value {header['ade']!r}") from exc

    d = domain.dim
    if columns not in (d, d + 1):
        raise MalformedLineError(f"{path}:1: columns={columns}, expected {d} or {d + 1}")
    has_weights = columns == d + 1
    if not has_weights and domain.kind is not DomainKind.SPHERE:
        raise MalformedLineError(
            f"{path}:1: the weight column may be omitted only for sphere designs"
        )

    rows = []
    for lineno, raw in enumerate(lines[1:], start=2):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        parts = text.split()
        if len(parts) != columns:
            raise MalformedLineError(
                f"{path}:{lineno}: expected {columns} fields, found {len(parts)}"
            )
        try:
            vals = [float(p) for p in parts]
        except ValueError:
            raise MalformedLineError(f"{path}:{lineno}: non-numeric field") from None
        if has_weights and vals[-1] <= 0.0:
            raise NonpositiveWeightError(f"{path}:{lineno}: weight {vals[-1]!r} is not positive")
        node = np.array(vals[:d])
        if not contains(domain, node[None, :], tol=NODE_TOL)[0]:
            raise NodeOutsideDomainError(f"{path}:{lineno}: node {node} lies outside {domain}")
        rows.append((lineno, vals))
    if len(rows) != count:
        raise CountMismatchError(
            f"{path}:{len(lines)}: header declares count={count} but found {len(rows)} data lines"
        )

    data = np.array([v for _, v in rows])
    nodes = data[:, :d]
    if has_weights:
        weights = data[:, d]
        provenance = Provenance.NEAR_MINIMAL_FILE
    else:
        weights = np.full(count, 4.0 * math.pi / count)
        provenance = (
            Provenance.SYMMETRIC_SPHERICAL_DESIGN
            if _is_antipodal(nodes)
            else Provenance.SPHERICAL_DESIGN
        )
    ade = header_ade if ade_claim == "header" else ade_claim
    return CubatureRule(domain, nodes, weights, ade=ade, provenance=provenance)


def dump_rule(rule: CubatureRule, path) -> None:
    """Serialize a rule in the plain-text format with 17 significant digits.

    Sphere designs (equal-weight provenance) are written without the
    weight column so they reload as designs.
    """
    path = Path(path)
    design = rule.provenance in (
        Provenance.SPHERICAL_DESIGN,
        Provenance.SYMMETRIC_SPHERICAL_DESIGN,
    )
    d = rule.domain.dim
    columns = d if design else d + 1
    ade = "unknown" if rule.ade is None else str(rule.ade)
    out = [f"# domain={rule.domain.kind.value} ade={ade} count={rule.size} columns={columns}"]
    for i in range(rule.size):
        fields = [format(v, ".17g") for v in rule.nodes[i]]
        if not design:
            fields.append(format(rule.weights[i], ".17g"))
        out.append(" ".join(fields))
    path.write_text("\n".join(out) + "\n", encoding="utf-8")
