import math

import numpy as np
import pytest

import mzquad as mz
from mzquad.approx import (
    DegenerateFunctionError,
    Method,
    NoMZPropertyError,
    check_error_bounds,
    chebyshev_truncation,
    evaluate,
    hyperinterpolate,
    least_squares,
    rel_l2_error,
)


def test_hyperinterpolate_constant():
    basis = mz.orthonormal_basis(mz.INTERVAL, 2)
    approx = hyperinterpolate(mz.gauss_legendre(3), basis, lambda p: np.ones(len(p)))
    assert np.allclose(approx.coeffs, [math.sqrt(2), 0.0, 0.0], atol=1e-15)


def test_hyperinterpolate_reproduces_basis_element():
    basis = mz.orthonormal_basis(mz.INTERVAL, 4)
    rule = mz.gauss_legendre(5)  # ade 9 >= 8
    f = lambda p: evaluate(mz.Approximant(basis, np.eye(5)[4], Method.HYPERINTERPOLATION), p)
    approx = hyperinterpolate(rule, basis, f)
    assert np.allclose(approx.coeffs, np.eye(5)[4], atol=1e-13)


def test_classical_projection_recovers_coefficients():
    rng = np.random.default_rng(31)
    for domain, rule in [
        (mz.INTERVAL, mz.gauss_legendre(8)),
        (mz.SQUARE, mz.tensor_gauss_legendre(12, 2)),
        (mz.SIMPLEX, mz.stroud_conical(12)),
    ]:
        basis = mz.orthonormal_basis(domain, 5)
        c = rng.standard_normal(basis.dim)
        p = mz.Approximant(basis, c, Method.HYPERINTERPOLATION)
        approx = hyperinterpolate(rule, basis, p)
        assert np.abs(approx.coeffs - c).max() <= 1e-12 * max(1, np.abs(c).max())


def test_least_squares_equals_hyper_under_exactness():
    basis = mz.orthonormal_basis(mz.INTERVAL, 4)
    rule = mz.gauss_legendre(6)
    f = lambda p: np.exp(-p[:, 0] ** 2)
    h = hyperinterpolate(rule, basis, f)
    l = least_squares(rule, basis, f)
    assert np.abs(h.coeffs - l.coeffs).max() <= 1e-12


def test_least_squares_reproduces_polynomials_without_exactness():
    # Clenshaw-Curtis m=10 at n=8 has 0 < A < 1: projection still exact on P_n
    rule = mz.clenshaw_curtis(10)
    basis = mz.orthonormal_basis(mz.INTERVAL, 8)
    rng = np.random.default_rng(7)
    c = rng.standard_normal(basis.dim)
    p = mz.Approximant(basis, c, Method.LEAST_SQUARES)
    approx = least_squares(rule, basis, p)
    assert np.abs(approx.coeffs - c).max() <= 1e-10 * max(1, np.abs(c).max())


def test_least_squares_requires_nonsingular_gramian():
    # Gaussian rule at n = k: the Gramian has an exactly zero eigenvalue
    rule = mz.gauss_legendre(4)
    basis = mz.orthonormal_basis(mz.INTERVAL, 4)
    with pytest.raises(NoMZPropertyError):
        least_squares(rule, basis, lambda p: np.ones(len(p)))


def test_least_squares_survives_indefinite_padua_gramian():
    # at n = m the Padua Gramian is indefinite but well conditioned;
    # least squares degenerates to interpolation and recovers the polynomial
    rule = mz.padua_rule(15)
    basis = mz.orthonormal_basis(mz.SQUARE, 15)
    f2 = lambda p: (0.5 + p[:, 0] + 0.1 * p[:, 1]) ** 15
    approx = least_squares(rule, basis, f2)
    err = rel_l2_error(approx, f2, mz.reference_rule(mz.SQUARE, 50))
    assert err <= 1e-10


def test_node_evaluation_failure_names_the_node():
    basis = mz.orthonormal_basis(mz.INTERVAL, 2)
    rule = mz.gauss_legendre(3)

    def bad(p):
        vals = np.ones(len(p))
        vals[1] = np.nan
        return vals

    with pytest.raises(ValueError, match="node 1"):
        hyperinterpolate(rule, basis, bad)


def test_operators_are_linear():
    rule = mz.clenshaw_curtis(9)
    basis = mz.orthonormal_basis(mz.INTERVAL, 6)
    rng = np.random.default_rng(12)
    a, b = rng.standard_normal(2)
    f = lambda p: np.exp(p[:, 0])
    g = lambda p: np.sin(2 * p[:, 0])
    for op in (hyperinterpolate, least_squares):
        combo = op(rule, basis, lambda p: a * f(p) + b * g(p))
        parts = a * op(rule, basis, f).coeffs + b * op(rule, basis, g).coeffs
        assert np.abs(combo.coeffs - parts).max() <= 1e-12 * max(1, np.abs(parts).max())


def test_projection_idempotence():
    rule = mz.clenshaw_curtis(12)
    basis = mz.orthonormal_basis(mz.INTERVAL, 9)
    f = lambda p: np.abs(p[:, 0] - 0.3) ** 3
    once = least_squares(rule, basis, f)
    twice = least_squares(rule, basis, lambda p: evaluate(once, p))
    assert np.abs(once.coeffs - twice.coeffs).max() <= 1e-10


def test_ls_minimizes_discrete_weighted_residual():
    rule = mz.clenshaw_curtis(10)
    basis = mz.orthonormal_basis(mz.INTERVAL, 7)
    f = lambda p: np.exp(-2 * p[:, 0] ** 2)
    fit = least_squares(rule, basis, f)
    B = mz.eval_basis(basis, rule.nodes).values
    fv = f(rule.nodes)

    def residual(c):
        r = B @ c - fv
        return float(np.sum(rule.weights * r * r))

    best = residual(fit.coeffs)
    rng = np.random.default_rng(99)
    for _ in range(100):
        pert = fit.coeffs + rng.standard_normal(basis.dim) * 10.0 ** rng.uniform(-6, 0)
        assert residual(pert) >= best - 1e-12


def test_evaluate_basics():
    basis = mz.orthonormal_basis(mz.INTERVAL, 2)
    const = mz.Approximant(basis, np.array([1.0, 0.0, 0.0]), Method.HYPERINTERPOLATION)
    vals = evaluate(const, np.array([[-0.5], [0.7]]))
    assert np.allclose(vals, 1 / math.sqrt(2), atol=1e-16)
    lin = mz.Approximant(basis, np.array([0.0, 1.0, 0.0]), Method.HYPERINTERPOLATION)
    assert evaluate(lin, np.array([[1.0]]))[0] == pytest.approx(math.sqrt(1.5), abs=1e-15)
    zero = mz.Approximant(basis, np.zeros(3), Method.HYPERINTERPOLATION)
    assert np.all(evaluate(zero, np.array([[0.1]])) == 0.0)


def test_rel_l2_error_reference_counts_and_zero_cases():
    ref_i = mz.reference_rule(mz.INTERVAL, 50)
    ref_s = mz.reference_rule(mz.SQUARE, 50)
    assert ref_i.size == 26 and ref_s.size == 676
    basis = mz.orthonormal_basis(mz.INTERVAL, 3)
    rng = np.random.default_rng(0)
    c = rng.standard_normal(4)
    p = mz.Approximant(basis, c, Method.HYPERINTERPOLATION)
    assert rel_l2_error(p, lambda z: evaluate(p, z), ref_i) <= 1e-12
    with pytest.raises(DegenerateFunctionError):
        rel_l2_error(p, lambda z: np.zeros(len(z)), ref_i)


def test_chebyshev_truncation_exact_on_polynomials():
    f = lambda p: (0.5 + p[:, 0]) ** 4
    q = chebyshev_truncation(f, mz.INTERVAL, 4)
    grid = mz.sample_domain(mz.INTERVAL, 300, seed=1)
    assert np.abs(q(grid) - f(grid)).max() <= 1e-12


def test_bound_check_polynomial_surrogate_vanishes():
    rule = mz.clenshaw_curtis(12)
    basis = mz.orthonormal_basis(mz.INTERVAL, 6)
    f_apx = chebyshev_truncation(lambda p: (0.3 + p[:, 0]) ** 5, mz.INTERVAL, 6)
    f = lambda p: evaluate(f_apx, p)
    report = mz.analyze(rule, basis)
    check = check_error_bounds(report, rule, f, f_apx)
    assert check.rhs <= 1e-10
    assert check.lhs <= 1e-10


def test_bound_check_exact_rule():
    # A = 1: the bound is 2 sqrt(mass) * sup|f - p|
    rule = mz.gauss_legendre(10)
    basis = mz.orthonormal_basis(mz.INTERVAL, 6)
    f = lambda p: np.exp(-p[:, 0] ** 2)
    surrogate = chebyshev_truncation(f, mz.INTERVAL, 6)
    report = mz.analyze(rule, basis)
    check = check_error_bounds(report, rule, f, surrogate)
    assert report.A == pytest.approx(1.0, abs=1e-12)
    assert check.rhs == pytest.approx(2 * math.sqrt(2) * check.sup_estimate, rel=1e-10)
    assert check.passed


def test_bound_check_relaxed_rule():
    rule = mz.clenshaw_curtis(15)
    basis = mz.orthonormal_basis(mz.INTERVAL, 8)
    f = lambda p: np.exp(-p[:, 0] ** 2)
    surrogate = chebyshev_truncation(f, mz.INTERVAL, 8)
    report = mz.analyze(rule, basis)
    assert 0.0 < report.A < 1.0 + 1e-12
    check = check_error_bounds(report, rule, f, surrogate)
    assert check.passed
