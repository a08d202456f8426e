"""Schoenberg expansions of positive definite kernels on real and complex spheres
coupled with a finite group factor."""

from .exceptions import (
    CapExceededError,
    DomainError,
    GroupAxiomError,
    NegativeCoefficientError,
    NotHermitianError,
    QuadratureError,
    SchoenbergError,
    SmoothnessError,
)
from .groups import (
    GroupFunction,
    GroupSpec,
    bochner_check_cyclic,
    make_cyclic,
    make_dihedral,
    make_from_table,
    make_product,
    make_trivial,
    pd_check_group,
    random_pd_function,
)
from .pdcheck import GramReport, SpherePointSet, gram_check, sample_sphere
from .quadrature import (
    GaussJacobiRule,
    delta_convergence_probe,
    gauss_jacobi_rule,
    integrate_nu,
    integrate_tau,
)
from .series import CoefficientTable, OpaqueKernel
from .specfun import (
    disc_polynomial,
    gegenbauer_normalized,
    harmonic_dim_complex,
    harmonic_dim_real,
    jacobi_normalized,
    pochhammer,
    surface_mass,
)
from .sphere_complex import (
    DiscPowerSeries,
    DiscSeries,
    coefficient_inequality_check,
    dimension_walk,
    disc_limit_diagnostic,
    disc_to_monomial,
    evaluate_series_complex,
    extract_coefficient_complex,
    extract_table_complex,
    group_average,
    limit_study_complex,
    monomial_coefficients_complex,
    recover_group_coefficients,
)
from .sphere_real import (
    GegenbauerSeries,
    PowerSeries,
    derivative_split,
    evaluate_series_real,
    extract_coefficient_real,
    extract_table_real,
    gegenbauer_to_monomial,
    limit_study_real,
    monomial_coefficients_real,
    monomial_to_gegenbauer,
)
from .symdiff import (
    WeightedBiPolynomial,
    WeightedPolynomial,
    derivative,
    rodrigues_check_complex,
    rodrigues_check_real,
    wirtinger_z,
    wirtinger_zbar,
)

__version__ = "0.1.0"
