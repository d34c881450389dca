"""mzquad: weak L2 Marcinkiewicz-Zygmund constants of cubature rules.

Computes the sharpest constants A, B with A ||p||^2 <= S(p^2) <= B ||p||^2
over total-degree polynomial spaces as extremal eigenvalues of the rule's
Gramian, and uses them to drive hyperinterpolation (classical and
exactness-relaxed) and Gramian-based least-squares approximation on the
interval, square, cube, disk, triangle and sphere.
"""

from .approx import (
    Approximant,
    BoundCheck,
    DegenerateFunctionError,
    ErrorRecord,
    Method,
    NoMZPropertyError,
    check_error_bounds,
    chebyshev_truncation,
    evaluate,
    hyperinterpolate,
    least_squares,
    rel_l2_error,
)
from .bases import (
    BasisFamily,
    BasisMatrix,
    DomainViolationError,
    NormalizationError,
    OrthonormalBasis,
    basis_dim,
    check_orthonormality,
    eval_basis,
    orthonormal_basis,
)
from .bench import (
    ScanCell,
    ScanGrid,
    TestFunction,
    approx_bench,
    bench_setup,
    build_family_rule,
    cond_bucket,
    scan_cond,
    scan_eta,
    test_functions,
)
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
    domain_from_token,
    mass,
    sample_domain,
)
from .linalg import (
    EigDecomposition,
    EigenConvergenceError,
    NotSPDError,
    SymMatrix,
    spd_solve,
    spectral_dist_from_identity,
    sym_eig,
)
from .mz import MzReport, analyze, eta_direct_check, gramian, mz_report
from .rules import (
    CubatureRule,
    Provenance,
    RuleParseError,
    clenshaw_curtis,
    dump_rule,
    gauss_legendre,
    halton_qmc,
    latlong_sphere,
    load_rule,
    morrow_patterson_xu,
    padua_rule,
    polar_disk_rule,
    reference_rule,
    stroud_conical,
    tensor_gauss_chebyshev,
    tensor_gauss_legendre,
    tensor_rule,
    verify_ade,
)

__version__ = "0.1.0"
