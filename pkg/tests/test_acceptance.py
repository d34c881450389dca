"""Acceptance suite.

One test per acceptance criterion; `pytest -v` prints one pass/fail line
per criterion.  Tolerances and runtime budgets are pinned inside each
test.  The heavy cube benchmark result is shared across criterion 11's
sub-checks through a module-scope fixture.
"""

import math
import time

import numpy as np
import pytest

import mzquad as mz
from mzquad.approx import Method
from mzquad.bases import basis_dim
from mzquad.bench import approx_bench
from mzquad.linalg import SymMatrix, sym_eig
from mzquad.mz import eta_direct_check


def _column_etas(rule, domain, n_values):
    """eta per degree, via leading principal submatrices of one Gramian."""
    basis = mz.orthonormal_basis(domain, max(n_values))
    G = mz.gramian(rule, basis).a
    out = {}
    for n in n_values:
        d = basis_dim(domain, n)
        lam = sym_eig(SymMatrix(G[:d, :d])).values
        out[n] = (max(abs(1 - lam[0]), abs(1 - lam[-1])),
                  math.inf if lam[0] <= 1e-14 * lam[-1] else lam[-1] / lam[0])
    return out


def test_criterion_01_gaussian_exact_regime():
    start = time.perf_counter()
    for k in range(2, 11):
        rule = mz.gauss_legendre(k)
        cells = _column_etas(rule, mz.INTERVAL, range(k))
        for n in range(k):
            eta, cond2 = cells[n]
            assert eta <= 1e-12, (k, n, eta)
            assert cond2 <= 1.0 + 1e-10, (k, n, cond2)
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"runtime {elapsed:.2f}s exceeds 1s budget"


def test_criterion_02_gaussian_eta_one_and_worst_polynomial():
    start = time.perf_counter()
    for k in range(2, 11):
        rule = mz.gauss_legendre(k)
        rep = mz.analyze(rule, k)
        assert abs(rep.eta - 1.0) <= 1e-10, (k, rep.eta)
        # worst-case polynomial is +- the degree-k orthonormal element
        assert abs(rep.worst_coeffs[k]) >= 1.0 - 1e-8, (k, rep.worst_coeffs[k])
        for n in range(k, k + 6):
            assert mz.analyze(rule, n).eta >= 1.0 - 1e-10, (k, n)
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"runtime {elapsed:.2f}s exceeds 5s budget"


def test_criterion_03_tensor_gaussian_square():
    for k in range(2, 7):
        rule = mz.tensor_rule([mz.gauss_legendre(k)] * 2)
        cells = _column_etas(rule, mz.SQUARE, range(k, k + 3))
        for n, (eta, _) in cells.items():
            assert eta >= 1.0 - 1e-10, (k, n, eta)


def test_criterion_04_clenshaw_curtis_window():
    start = time.perf_counter()
    for m in (8, 14, 20):
        rule = mz.clenshaw_curtis(m)
        cells = _column_etas(rule, mz.INTERVAL, range(m // 2 + 1, m + 1))
        for n in range(m // 2 + 1, m):
            eta, _ = cells[n]
            assert eta < 1.0 - 1e-10, (m, n, eta)
        for n in range(m // 2 + 1, m + 1):
            _, cond2 = cells[n]
            assert cond2 < 10.0 - 1e-10, (m, n, cond2)
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"runtime {elapsed:.2f}s exceeds 10s budget"


def test_criterion_05_padua_window():
    start = time.perf_counter()
    for m in (10, 15, 20):
        rule = mz.padua_rule(m)
        cells = _column_etas(rule, mz.SQUARE, range(0, m))
        for n in range(0, m):
            eta, cond2 = cells[n]
            assert eta < 1.0 - 1e-10, (m, n, eta)
            assert cond2 < 10.0 - 1e-10, (m, n, cond2)
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, f"runtime {elapsed:.2f}s exceeds 60s budget"


ORACLE_CASES = [
    # (factory, domain, degrees) -> 30 (rule, n) cases over every domain
    (lambda: mz.gauss_legendre(4), mz.INTERVAL, (1, 3, 4, 6)),
    (lambda: mz.clenshaw_curtis(12), mz.INTERVAL, (5, 9, 11)),
    (lambda: mz.tensor_gauss_legendre(9, 2), mz.SQUARE, (3, 5)),
    (lambda: mz.padua_rule(9), mz.SQUARE, (4, 8, 9)),
    (lambda: mz.morrow_patterson_xu(11), mz.SQUARE_CHEB, (4, 7)),
    (lambda: mz.halton_qmc(1024, mz.SQUARE), mz.SQUARE, (2, 5)),
    (lambda: mz.halton_qmc(2048, mz.CUBE), mz.CUBE, (2, 3)),
    (lambda: mz.tensor_gauss_legendre(7, 3), mz.CUBE, (3, 4)),
    (lambda: mz.polar_disk_rule(10), mz.DISK, (4, 6, 8)),
    (lambda: mz.stroud_conical(10), mz.SIMPLEX, (4, 7)),
    (lambda: mz.latlong_sphere(8), mz.SPHERE, (3, 4, 6)),
    (lambda: mz.build_family_rule("design", mz.SPHERE, 2), mz.SPHERE, (1, 2)),
    (lambda: mz.build_family_rule("symdesign", mz.SPHERE, 5), mz.SPHERE, (2, 4)),
]


def test_criterion_06_oracle_equivalence():
    rng = np.random.default_rng(20250809)
    total = 0
    for factory, domain, degrees in ORACLE_CASES:
        rule = factory()
        for n in degrees:
            total += 1
            rep = mz.analyze(rule, n)
            at_worst = eta_direct_check(rule, rep.basis, rep.worst_coeffs)
            assert abs(at_worst - rep.eta) <= 1e-10, (rule.provenance, n)
            B = mz.eval_basis(rep.basis, rule.nodes).values
            c = rng.standard_normal((200, rep.d_n))
            c /= np.linalg.norm(c, axis=1, keepdims=True)
            p = B @ c.T
            direct = np.abs(1.0 - np.sum(rule.weights[:, None] * p * p, axis=0))
            assert direct.max() <= rep.eta + 1e-10, (rule.provenance, n, direct.max())
    assert total >= 30, f"only {total} (rule, n) cases"


def test_criterion_07_eta_monotone_in_degree():
    columns = [
        (mz.gauss_legendre(5), mz.INTERVAL, range(0, 12)),
        (mz.clenshaw_curtis(12), mz.INTERVAL, range(0, 16)),
        (mz.padua_rule(10), mz.SQUARE, range(0, 12)),
        (mz.morrow_patterson_xu(9), mz.SQUARE_CHEB, range(0, 8)),
        (mz.halton_qmc(4096, mz.SQUARE), mz.SQUARE, range(0, 9)),
        (mz.polar_disk_rule(12), mz.DISK, range(0, 10)),
        (mz.stroud_conical(12), mz.SIMPLEX, range(0, 10)),
        (mz.latlong_sphere(10), mz.SPHERE, range(0, 8)),
    ]
    for rule, domain, ns in columns:
        cells = _column_etas(rule, domain, ns)
        etas = [cells[n][0] for n in ns]
        for a, b in zip(etas, etas[1:]):
            assert b >= a - 1e-12, (rule.provenance, etas)


def test_criterion_08_qmc_convergence():
    for domain in (mz.SQUARE, mz.CUBE):
        basis = mz.orthonormal_basis(domain, 3)
        eta = {}
        for mexp in (6, 16):
            G = mz.gramian(mz.halton_qmc(2**mexp, domain), basis)
            lam = sym_eig(G).values
            eta[mexp] = max(abs(1 - lam[0]), abs(1 - lam[-1]))
        assert eta[16] < eta[6], (domain, eta)
        assert eta[16] < 1.0, (domain, eta)


ORTHONORMALITY_REFERENCES = [
    (mz.INTERVAL, lambda n: mz.gauss_legendre(n + 1)),
    (mz.SQUARE, lambda n: mz.tensor_gauss_legendre(2 * n, 2)),
    (mz.SQUARE_CHEB, lambda n: mz.tensor_gauss_chebyshev(n + 1)),
    (mz.CUBE, lambda n: mz.tensor_gauss_legendre(2 * n, 3)),
    (mz.DISK, lambda n: mz.polar_disk_rule(2 * n)),
    (mz.SIMPLEX, lambda n: mz.stroud_conical(2 * n)),
    (mz.SPHERE, lambda n: mz.latlong_sphere(2 * n)),
]


def test_criterion_09_orthonormality_suites():
    for domain, ref in ORTHONORMALITY_REFERENCES:
        for n in range(0, 11):
            basis = mz.orthonormal_basis(domain, n)
            residual = mz.check_orthonormality(basis, ref(n))
            assert residual <= 1e-10, (domain, n, residual)


PROJECTION_CASES = [
    (mz.INTERVAL, lambda: mz.clenshaw_curtis(10), 7, lambda: mz.gauss_legendre(8), 7),
    (mz.SQUARE, lambda: mz.padua_rule(9), 7, lambda: mz.tensor_gauss_legendre(14, 2), 7),
    (mz.SQUARE_CHEB, lambda: mz.morrow_patterson_xu(11), 5, lambda: mz.tensor_gauss_chebyshev(6), 5),
    (mz.CUBE, lambda: mz.halton_qmc(8192, mz.CUBE), 3, lambda: mz.tensor_gauss_legendre(6, 3), 3),
    (mz.DISK, lambda: mz.polar_disk_rule(11), 5, lambda: mz.polar_disk_rule(10), 5),
    (mz.SIMPLEX, lambda: mz.stroud_conical(11), 5, lambda: mz.stroud_conical(10), 5),
    (mz.SPHERE, lambda: mz.latlong_sphere(9), 4, lambda: mz.latlong_sphere(8), 4),
]


def test_criterion_10_projection_properties():
    rng = np.random.default_rng(77)
    reference = {d: mz.reference_rule(d, 50) for d, *_ in PROJECTION_CASES}
    for domain, relaxed_factory, n_relaxed, classical_factory, n_classical in PROJECTION_CASES:
        relaxed = relaxed_factory()
        classical = classical_factory()
        rep = mz.analyze(relaxed, n_relaxed)
        assert rep.A > 1e-8, (domain, rep.A)
        for case in range(20):
            basis = rep.basis
            c = rng.standard_normal(basis.dim)
            c /= np.linalg.norm(c)
            p = mz.Approximant(basis, c, Method.LEAST_SQUARES)
            f = lambda z: mz.evaluate(p, z)
            ls = mz.least_squares(relaxed, basis, f)
            assert mz.rel_l2_error(ls, f, reference[domain]) <= 1e-10, (domain, case)
            basis_c = mz.orthonormal_basis(domain, n_classical)
            pc = mz.Approximant(basis_c, c[: basis_c.dim] / np.linalg.norm(c[: basis_c.dim]),
                                Method.HYPERINTERPOLATION)
            fc = lambda z: mz.evaluate(pc, z)
            hyper = mz.hyperinterpolate(classical, basis_c, fc)
            assert mz.rel_l2_error(hyper, fc, reference[domain]) <= 1e-10, (domain, case)


@pytest.fixture(scope="module")
def bench_records():
    start = time.perf_counter()
    records = {
        "interval": approx_bench(mz.INTERVAL),
        "square": approx_bench(mz.SQUARE),
        "cube": approx_bench(mz.CUBE),
    }
    return records, time.perf_counter() - start


def _lookup(records, family, method, fid, n):
    return next(
        r.relerr
        for r in records
        if r.family == family and r.method is method and r.fid == fid and r.n == n
    )


def test_criterion_11a_reference_node_counts():
    assert mz.reference_rule(mz.INTERVAL, 50).size == 26
    assert mz.reference_rule(mz.SQUARE, 50).size == 676


def test_criterion_11b_square_f2_reconstruction(bench_records):
    records, _ = bench_records
    assert len(records["interval"]) == 225  # 3 methods x 5 functions x 15 degrees
    classical = _lookup(records["square"], "tensor-gl", Method.HYPERINTERPOLATION, "f2", 15)
    padua_ls = _lookup(records["square"], "padua", Method.LEAST_SQUARES, "f2", 15)
    padua_hyper = _lookup(records["square"], "padua", Method.HYPERINTERPOLATION, "f2", 15)
    assert classical <= 1e-9, classical
    assert padua_ls <= 1e-9, padua_ls
    assert padua_hyper >= 1e-3, padua_hyper
    classical_1d = _lookup(records["interval"], "gl", Method.HYPERINTERPOLATION, "f2", 15)
    assert classical_1d <= 1e-9, classical_1d


def test_criterion_11c_cube_qmc_degradation(bench_records):
    records, elapsed = bench_records
    hyper = _lookup(records["cube"], "qmc", Method.HYPERINTERPOLATION, "f1", 15)
    ls = _lookup(records["cube"], "qmc", Method.LEAST_SQUARES, "f1", 15)
    assert hyper >= 10.0 * ls, (hyper, ls)
    assert elapsed < 300.0, f"bench runtime {elapsed:.1f}s exceeds 5min budget"
