"""Experiment grids: eta/conditioning scans and approximation benchmarks.

`scan_eta` and `scan_cond` sweep a rule family over a grid of exactness
degrees m and polynomial degrees n, recording eta and cond2(G) per cell.
`approx_bench` compares three operators on a catalog of test functions:
exactness-relaxed hyperinterpolation with a moderate-exactness rule,
classical hyperinterpolation with a rule of twice that exactness, and
least squares with the moderate rule.  Errors are measured against a
high-exactness reference rule.

Grid cells are independent; per-column Gramians are assembled once at the
largest degree and lower degrees reuse leading principal submatrices,
which is exact because the basis order is graded.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .approx import ErrorRecord, Method, solve_normal_equations
from .bases import basis_dim, eval_basis, orthonormal_basis
from .domains import CUBE, DISK, INTERVAL, SIMPLEX, SPHERE, SQUARE, SQUARE_CHEB, Domain, DomainKind
from .linalg import SymMatrix, sym_eig
from .mz import COND_CUTOFF_REL, gramian
from .rules import (
    CubatureRule,
    clenshaw_curtis,
    gauss_legendre,
    halton_qmc,
    load_rule,
    morrow_patterson_xu,
    padua_rule,
    polar_disk_rule,
    latlong_sphere,
    reference_rule,
    stroud_conical,
    tensor_gauss_legendre,
)

#: environment variable consulted for the external rule dataset directory
DATA_DIR_ENV = "MZQUAD_DATA_DIR"

#: cond2 bucket labels, matched verbatim in CSV output
COND_BUCKETS = (
    (1.0, 10.0, "[1,10)"),
    (10.0, 1e2, "[10,10^2)"),
    (1e2, 1e4, "[10^2,10^4)"),
    (1e4, 1e7, "[10^4,10^7)"),
    (1e7, math.inf, "[10^7,inf)"),
)

STATUS_OK = "ok"
STATUS_DATASET_MISSING = "dataset-missing"
STATUS_UNSUPPORTED = "unsupported-degree"


def cond_bucket(cond2: float) -> str:
    for lo, hi, label in COND_BUCKETS:
        if lo <= cond2 < hi:
            return label
    return COND_BUCKETS[-1][2]


# ----------------------------------------------------------------------
# test function catalog

@dataclass(frozen=True)
class TestFunction:
    """A named closed-form test function on one domain."""

    fid: str
    domain: Domain
    fn: callable

    def __call__(self, points):
        p = np.atleast_2d(np.asarray(points, dtype=float))
        return self.fn(p)


def test_functions(domain: Domain) -> list[TestFunction]:
    """The five-function benchmark catalog for box domains.

    f1 Gaussian bump, f2 degree-15 polynomial, f3 sine wave, f4/f5 odd
    powers of the distance from the off-center point (0.5, ..., 0.5).
    """
    kind = domain.kind
    if kind is DomainKind.INTERVAL:
        defs = {
            "f1": lambda p: np.exp(-p[:, 0] ** 2),
            "f2": lambda p: (0.5 + p[:, 0]) ** 15,
            "f3": lambda p: np.sin(np.pi * p[:, 0]),
            "f4": lambda p: np.abs(p[:, 0] - 0.5) ** 3,
            "f5": lambda p: np.abs(p[:, 0] - 0.5) ** 7,
        }
    elif kind is DomainKind.SQUARE:
        defs = {
            "f1": lambda p: np.exp(-(p[:, 0] ** 2 + p[:, 1] ** 2)),
            "f2": lambda p: (0.5 + p[:, 0] + 0.1 * p[:, 1]) ** 15,
            "f3": lambda p: np.sin(np.pi * p[:, 0] + np.pi * p[:, 1]),
            "f4": lambda p: ((p[:, 0] - 0.5) ** 2 + (p[:, 1] - 0.5) ** 2) ** 1.5,
            "f5": lambda p: ((p[:, 0] - 0.5) ** 2 + (p[:, 1] - 0.5) ** 2) ** 3.5,
        }
    elif kind is DomainKind.CUBE:
        defs = {
            "f1": lambda p: np.exp(-(p[:, 0] ** 2 + p[:, 1] ** 2 + p[:, 2] ** 2)),
            "f2": lambda p: (0.5 + p[:, 0] + 0.1 * p[:, 1] + 0.4 * p[:, 2]) ** 15,
            "f3": lambda p: np.sin(np.pi * (p[:, 0] + p[:, 1] + p[:, 2])),
            "f4": lambda p: ((p[:, 0] - 0.5) ** 2 + (p[:, 1] - 0.5) ** 2 + (p[:, 2] - 0.5) ** 2) ** 1.5,
            "f5": lambda p: ((p[:, 0] - 0.5) ** 2 + (p[:, 1] - 0.5) ** 2 + (p[:, 2] - 0.5) ** 2) ** 3.5,
        }
    else:
        raise ValueError(f"no test-function catalog for domain {domain}")
    return [TestFunction(fid, domain, fn) for fid, fn in defs.items()]


# ----------------------------------------------------------------------
# rule family registry

class UnsupportedCellError(RuntimeError):
    """A scan cell cannot be built; carries the skip-status token."""

    def __init__(self, status: str, detail: str = ""):
        super().__init__(detail or status)
        self.status = status


def _builtin_data_dir() -> Path:
    return Path(resources.files("mzquad") / "data")


def _dataset_path(family: str, domain: Domain, m: int, data_dir) -> Path:
    root = Path(data_dir) if data_dir else _builtin_data_dir()
    return root / f"{family}_{domain.kind.value}_m{m}.txt"


def _load_dataset_rule(family: str, domain: Domain, m: int, data_dir) -> CubatureRule:
    path = _dataset_path(family, domain, m, data_dir)
    if not path.is_file():
        raise UnsupportedCellError(STATUS_DATASET_MISSING, f"no dataset file {path}")
    return load_rule(path, domain, ade_claim=m)


#: family token -> (set of valid (kind, measure), builder(m, domain, data_dir))
FAMILIES = {
    "gl": ({INTERVAL}, lambda m, d, _: gauss_legendre((m + 2) // 2)),
    "cc": ({INTERVAL}, lambda m, d, _: clenshaw_curtis(m)),
    "tensor-gl": ({SQUARE, CUBE}, lambda m, d, _: tensor_gauss_legendre(m, d.dim)),
    "padua": ({SQUARE}, lambda m, d, _: padua_rule(m)),
    "mpx": ({SQUARE_CHEB}, lambda m, d, _: morrow_patterson_xu(m)),
    "polar": ({DISK}, lambda m, d, _: polar_disk_rule(m)),
    "conical": ({SIMPLEX}, lambda m, d, _: stroud_conical(m)),
    "latlong": ({SPHERE}, lambda m, d, _: latlong_sphere(m)),
    "qmc": ({SQUARE, CUBE}, lambda m, d, _: halton_qmc(2**m, d)),
    "design": ({SPHERE}, lambda m, d, dd: _load_dataset_rule("design", d, m, dd)),
    "symdesign": ({SPHERE}, lambda m, d, dd: _load_dataset_rule("symdesign", d, m, dd)),
    "nearmin": (
        {INTERVAL, SQUARE, DISK, SIMPLEX},
        lambda m, d, dd: _load_dataset_rule("nearmin", d, m, dd),
    ),
}


def build_family_rule(family: str, domain: Domain, m: int, data_dir=None) -> CubatureRule:
    """Construct (or load) the family's rule for grid parameter m.

    For the qmc family m is the cardinality exponent (M = 2^m); for every
    other family m is the claimed algebraic exactness degree.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown rule family {family!r}; known: {', '.join(sorted(FAMILIES))}")
    domains_ok, builder = FAMILIES[family]
    if domain not in domains_ok:
        allowed = ", ".join(str(d) for d in sorted(domains_ok, key=str))
        raise ValueError(f"family {family!r} is not defined on {domain}; valid on: {allowed}")
    if data_dir is None:
        data_dir = os.environ.get(DATA_DIR_ENV) or None
    try:
        return builder(m, domain, data_dir)
    except UnsupportedCellError:
        raise
    except ValueError as exc:
        raise UnsupportedCellError(STATUS_UNSUPPORTED, str(exc)) from exc


# ----------------------------------------------------------------------
# scans

@dataclass(frozen=True)
class ScanCell:
    m: int
    n: int
    M: int | None
    d_n: int
    eta: float | None
    cond2: float | None
    status: str

    @property
    def bucket(self) -> str | None:
        return None if self.cond2 is None else cond_bucket(self.cond2)


@dataclass(frozen=True)
class ScanGrid:
    kind: str  # "eta" or "cond"
    family: str
    domain: Domain
    m_values: tuple
    n_values: tuple
    cells: tuple = field(default=())

    def rows(self):
        """CSV-ready rows: family,domain,m,n,M,d_n,eta,cond2,bucket,status."""
        dom = str(self.domain)
        for c in self.cells:
            yield (
                self.family, dom, c.m, c.n,
                c.M, c.d_n, c.eta, c.cond2, c.bucket, c.status,
            )


def _scan_column(family, domain, m, n_values, data_dir):
    """All cells of one m-column, sharing a single maximal Gramian."""
    cells = []
    try:
        rule = build_family_rule(family, domain, m, data_dir)
    except UnsupportedCellError as exc:
        for n in n_values:
            cells.append(ScanCell(m, n, None, basis_dim(domain, n), None, None, exc.status))
        return cells
    except Exception as exc:  # per-cell failures are recorded, not fatal
        status = f"error:{type(exc).__name__}"
        for n in n_values:
            cells.append(ScanCell(m, n, None, basis_dim(domain, n), None, None, status))
        return cells

    n_max = max(n_values)
    basis_max = orthonormal_basis(domain, n_max)
    G_max = gramian(rule, basis_max).a
    dims = {n: basis_dim(domain, n) for n in n_values}
    for n in n_values:
        d = dims[n]
        lam = sym_eig(SymMatrix(G_max[:d, :d])).values
        A, B = float(lam[0]), float(lam[-1])
        eta = max(abs(1.0 - A), abs(1.0 - B))
        cond2 = math.inf if A <= COND_CUTOFF_REL * B else B / A
        cells.append(ScanCell(m, n, rule.size, d, eta, cond2, STATUS_OK))
    return cells


def _run_scan(kind, family, domain, m_values, n_values, data_dir, jobs):
    m_values = tuple(m_values)
    n_values = tuple(sorted(n_values))
    if not m_values or not n_values:
        raise ValueError("m and n ranges must be nonempty")
    if jobs and jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            columns = list(
                pool.map(lambda m: _scan_column(family, domain, m, n_values, data_dir), m_values)
            )
    else:
        columns = [_scan_column(family, domain, m, n_values, data_dir) for m in m_values]
    cells = [cell for col in columns for cell in col]
    cells.sort(key=lambda c: (c.m, c.n))
    return ScanGrid(
        kind=kind, family=family, domain=domain,
        m_values=m_values, n_values=n_values, cells=tuple(cells),
    )


def scan_eta(family, domain, m_values, n_values, data_dir=None, jobs=None) -> ScanGrid:
    """Grid of eta values over (m, n); skipped cells carry a status reason."""
    return _run_scan("eta", family, domain, m_values, n_values, data_dir, jobs)


def scan_cond(family, domain, m_values, n_values, data_dir=None, jobs=None) -> ScanGrid:
    """Grid of cond2(G) values over (m, n) with bucket labels."""
    return _run_scan("cond", family, domain, m_values, n_values, data_dir, jobs)


# ----------------------------------------------------------------------
# approximation benchmark

@dataclass(frozen=True)
class BenchSetup:
    """Resolved rule configuration of one benchmark run."""

    domain: Domain
    relaxed_family: str
    relaxed: CubatureRule
    classical: CubatureRule
    reference: CubatureRule


def bench_setup(domain: Domain, build_ade: int = 15) -> BenchSetup:
    """Rules used by the benchmark on a box domain.

    Relaxed rule: Clenshaw-Curtis (interval), Padua points (square) or a
    2^15-point Halton set (cube); classical rule: product Gauss-Legendre
    of exactness 2*build_ade; reference: exactness 50.
    """
    kind = domain.kind
    if kind is DomainKind.INTERVAL:
        relaxed_family, relaxed = "cc", clenshaw_curtis(build_ade)
    elif kind is DomainKind.SQUARE:
        relaxed_family, relaxed = "padua", padua_rule(build_ade)
    elif kind is DomainKind.CUBE:
        relaxed_family, relaxed = "qmc", halton_qmc(2**15, CUBE)
    else:
        raise ValueError(f"benchmark domains are interval, square and cube; got {domain}")
    classical = (
        gauss_legendre(build_ade + 1)
        if kind is DomainKind.INTERVAL
        else tensor_gauss_legendre(2 * build_ade, domain.dim)
    )
    return BenchSetup(
        domain=domain,
        relaxed_family=relaxed_family,
        relaxed=relaxed,
        classical=classical,
        reference=reference_rule(domain, 50),
    )


def approx_bench(domain: Domain, build_ade: int = 15, n_max: int = 15,
                 setup: BenchSetup | None = None) -> list[ErrorRecord]:
    """Error records for three methods x five functions x degrees 1..n_max.

    Per-method failures (e.g. a singular Gramian at some degree) are
    recorded as NaN errors and the run continues.
    """
    if setup is None:
        setup = bench_setup(domain, build_ade)
    funcs = test_functions(domain)
    basis_max = orthonormal_basis(domain, n_max)

    B_rel = eval_basis(basis_max, setup.relaxed.nodes).values
    B_cls = eval_basis(basis_max, setup.classical.nodes).values
    B_ref = eval_basis(basis_max, setup.reference.nodes).values
    w_rel, w_cls = setup.relaxed.weights, setup.classical.weights
    u_ref = setup.reference.weights
    G_rel = B_rel.T @ (w_rel[:, None] * B_rel)
    G_rel = 0.5 * (G_rel + G_rel.T)

    f_rel = {tf.fid: tf(setup.relaxed.nodes) for tf in funcs}
    f_cls = {tf.fid: tf(setup.classical.nodes) for tf in funcs}
    f_ref = {tf.fid: tf(setup.reference.nodes) for tf in funcs}
    mom_rel = {fid: B_rel.T @ (w_rel * v) for fid, v in f_rel.items()}
    mom_cls = {fid: B_cls.T @ (w_cls * v) for fid, v in f_cls.items()}
    fnorm = {fid: math.sqrt(float(np.sum(u_ref * v * v))) for fid, v in f_ref.items()}

    def rel_err(coeffs, fid, d):
        pz = B_ref[:, :d] @ coeffs
        return math.sqrt(float(np.sum(u_ref * (pz - f_ref[fid]) ** 2))) / fnorm[fid]

    records = []
    for n in range(1, n_max + 1):
        d = basis_dim(domain, n)
        G_n = SymMatrix(G_rel[:d, :d])
        for tf in funcs:
            fid = tf.fid
            records.append(ErrorRecord(
                domain, setup.relaxed_family, setup.relaxed.ade, n,
                Method.HYPERINTERPOLATION, fid, rel_err(mom_rel[fid][:d], fid, d),
            ))
            records.append(ErrorRecord(
                domain, "tensor-gl" if domain.dim > 1 else "gl", setup.classical.ade, n,
                Method.HYPERINTERPOLATION, fid, rel_err(mom_cls[fid][:d], fid, d),
            ))
            try:
                c_ls = solve_normal_equations(G_n, mom_rel[fid][:d])
                err = rel_err(c_ls, fid, d)
            except Exception:
                err = math.nan
            records.append(ErrorRecord(
                domain, setup.relaxed_family, setup.relaxed.ade, n,
                Method.LEAST_SQUARES, fid, err,
            ))
    return records


# ----------------------------------------------------------------------
# delimited serialization

def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


SCAN_HEADER = "family,domain,m,n,M,d_n,eta,cond2,bucket,status"
BENCH_HEADER = "domain,family,ade,n,method,fid,relerr"


def grid_to_csv(grid: ScanGrid, config_lines=()) -> str:
    out = [f"# {line}" for line in config_lines]
    out.append(SCAN_HEADER)
    for row in grid.rows():
        out.append(",".join(_fmt(v) for v in row))
    return "\n".join(out) + "\n"


def grid_to_json_obj(grid: ScanGrid, config=None) -> dict:
    cols = SCAN_HEADER.split(",")
    rows = []
    for row in grid.rows():
        rows.append({k: ("inf" if isinstance(v, float) and math.isinf(v) else v)
                     for k, v in zip(cols, row)})
    obj = {"kind": grid.kind, "rows": rows}
    if config:
        obj = {"config": config, **obj}
    return obj


def records_to_csv(records, config_lines=()) -> str:
    out = [f"# {line}" for line in config_lines]
    out.append(BENCH_HEADER)
    for r in records:
        ade = "unknown" if r.ade is None else r.ade
        out.append(",".join(_fmt(v) for v in (
            str(r.domain), r.family, ade, r.n, r.method.value, r.fid, r.relerr,
        )))
    return "\n".join(out) + "\n"


def records_to_json_obj(records, config=None) -> dict:
    rows = []
    for r in records:
        rows.append({
            "domain": str(r.domain), "family": r.family,
            "ade": "unknown" if r.ade is None else r.ade,
            "n": r.n, "method": r.method.value, "fid": r.fid,
            "relerr": None if math.isnan(r.relerr) else r.relerr,
        })
    obj = {"rows": rows}
    if config:
        obj = {"config": config, **obj}
    return obj
