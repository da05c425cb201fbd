"""Distance-sensitive hashing toolkit.

Families of hash-function pairs (h, g) whose collision probability
Pr[h(x) = g(y)] is a prescribed function of dist(x, y): increasing,
unimodal, or step-shaped, not just the decreasing curves of classic
LSH. Ships exact collision-probability functions, a seeded Monte Carlo
verification lab, CPF combinators, annulus and range-reporting indexes,
and a simulated privacy protocol built on step CPFs.
"""

from .combinators import concat, mixture, power
from .core import Cpf, DshFamily, FunctionPair
from .euclidean import (
    ShiftedBucketFamily,
    ShiftedBucketParams,
    choose_w_k,
    e2dsh_cpf,
    e2dsh_family,
    rho_minus,
)
from .hamming import (
    SchemeAssembly,
    SchemeComponent,
    anti_bit_sampling_family,
    assembly_exact_cpf,
    bit_sampling_family,
    const_pair_family,
    polynomial_family,
    scaled_bit_sampling_family,
    scaled_biased_anti_family,
    zeroed_anti_family,
)
from .indexes import (
    AnnulusQueryParams,
    DshIndex,
    QueryResult,
    annulus_query,
    build_annulus_index,
    build_range_index,
    cpf_at_distance,
    range_report,
)
from .lab import (
    CheckReport,
    EstimateReport,
    RhoReport,
    builtin_hamming_families,
    check_forward_ssse,
    check_jensen_chain,
    check_reverse_ssse,
    estimate_cpf,
    rho_report,
)
from .pairs import (
    PairGenerator,
    correlated_bits,
    euclid_pair,
    generator_for,
    sphere_pair,
)
from .polynomial import Polynomial
from .privacy import (
    ProtocolParams,
    Sketch,
    calibrate_C,
    decide_close,
    leakage_estimate,
    make_sketch,
    protocol_params,
    step_family,
)
from .sphere import (
    AnnulusFamilyParams,
    CrossPolytopeFamily,
    FilterParams,
    PolynomialSphereFamily,
    SimHashFamily,
    annulus_family,
    crosspolytope_family,
    default_filter_m,
    embedded_dimension,
    filter_collision_probability,
    filter_cpf_bounds,
    filter_family,
    polynomial_sphere_family,
    simhash_family,
    valiant_embed,
    valiant_embed_batch,
)
from .tails import (
    bivariate_tail_bounds,
    bivariate_tail_exact,
    normal_tail_bounds,
    phi,
    phi_bar,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "AnnulusFamilyParams",
    "AnnulusQueryParams",
    "CheckReport",
    "Cpf",
    "CrossPolytopeFamily",
    "DshFamily",
    "DshIndex",
    "EstimateReport",
    "FilterParams",
    "FunctionPair",
    "PairGenerator",
    "Polynomial",
    "PolynomialSphereFamily",
    "ProtocolParams",
    "QueryResult",
    "RhoReport",
    "SchemeAssembly",
    "SchemeComponent",
    "ShiftedBucketFamily",
    "ShiftedBucketParams",
    "SimHashFamily",
    "Sketch",
    "annulus_family",
    "annulus_query",
    "anti_bit_sampling_family",
    "assembly_exact_cpf",
    "bit_sampling_family",
    "bivariate_tail_bounds",
    "bivariate_tail_exact",
    "build_annulus_index",
    "build_range_index",
    "builtin_hamming_families",
    "calibrate_C",
    "check_forward_ssse",
    "check_jensen_chain",
    "check_reverse_ssse",
    "choose_w_k",
    "concat",
    "const_pair_family",
    "correlated_bits",
    "cpf_at_distance",
    "crosspolytope_family",
    "decide_close",
    "default_filter_m",
    "e2dsh_cpf",
    "e2dsh_family",
    "embedded_dimension",
    "estimate_cpf",
    "euclid_pair",
    "filter_collision_probability",
    "filter_cpf_bounds",
    "filter_family",
    "generator_for",
    "leakage_estimate",
    "make_sketch",
    "mixture",
    "normal_tail_bounds",
    "phi",
    "phi_bar",
    "polynomial_family",
    "polynomial_sphere_family",
    "power",
    "protocol_params",
    "range_report",
    "rho_minus",
    "rho_report",
    "scaled_bit_sampling_family",
    "scaled_biased_anti_family",
    "simhash_family",
    "sphere_pair",
    "step_family",
    "valiant_embed",
    "valiant_embed_batch",
    "zeroed_anti_family",
]
