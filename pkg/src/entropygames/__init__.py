"""Solvers for entropy games and matrix multiplication games with
independent row uncertainty."""

from .decide import (
    Certificate,
    PositivityRequiredError,
    ValueInterval,
    decide_jsr_le,
    decide_jsr_lt,
    decide_jssr_ge,
    decide_jssr_gt,
    decide_mm_ge,
    decide_mm_le,
    decide_mm_lt,
    norm_bound,
    value_bisection,
    verify_certificate,
)
from .games import (
    Arena,
    GameSolution,
    GrowthReport,
    MpgArena,
    PositionalStrategy,
    SaddlePoint,
    Translation,
    arena_to_iru,
    as_action_oracle,
    eg_payoff_entropy,
    find_saddle,
    forest_counts,
    mpg_to_weighted_eg,
    mpg_value,
    population_trace,
    simulate_payoff,
    solve,
    verify_saddle,
)
from .iru import (
    EnumerationCapError,
    HourglassReport,
    IruSet,
    RadiusPair,
    RowSet,
    enumerate_members,
    hourglass_check,
    iru_set,
    jsr_jssr,
    right_product,
    sample_conv,
)
from .linalg import (
    Matrix,
    RadiusEstimate,
    Rational,
    ReducibleMatrixError,
    Vector,
    certify_radius_lower,
    certify_radius_upper,
    mat_mul,
    mat_vec,
    one_norm,
    perron_vector,
    rat,
    spectral_radius,
    vec_mat,
)
from .lp import FeasibilitySystem, LpResult, lp_max
from .minsky import TwoCounterMachine, format_machine, parse_machine, run_machine
from .realroots import charpoly, compare_radii, compare_radius_with_rational
from .reductions import (
    EncodedMmg,
    NonnegPunishmentReport,
    ScriptedPlayReport,
    check_nonneg_punishment,
    encode_integer,
    encode_nonneg,
    run_scripted_play,
)

__version__ = "0.1.0"

__all__ = [
    "Arena",
    "Certificate",
    "EncodedMmg",
    "EnumerationCapError",
    "FeasibilitySystem",
    "GameSolution",
    "GrowthReport",
    "HourglassReport",
    "IruSet",
    "LpResult",
    "Matrix",
    "MpgArena",
    "NonnegPunishmentReport",
    "PositionalStrategy",
    "PositivityRequiredError",
    "RadiusEstimate",
    "RadiusPair",
    "Rational",
    "ReducibleMatrixError",
    "RowSet",
    "SaddlePoint",
    "ScriptedPlayReport",
    "Translation",
    "TwoCounterMachine",
    "ValueInterval",
    "Vector",
    "arena_to_iru",
    "as_action_oracle",
    "certify_radius_lower",
    "certify_radius_upper",
    "charpoly",
    "check_nonneg_punishment",
    "compare_radii",
    "compare_radius_with_rational",
    "decide_jsr_le",
    "decide_jsr_lt",
    "decide_jssr_ge",
    "decide_jssr_gt",
    "decide_mm_ge",
    "decide_mm_le",
    "decide_mm_lt",
    "eg_payoff_entropy",
    "encode_integer",
    "encode_nonneg",
    "enumerate_members",
    "find_saddle",
    "forest_counts",
    "format_machine",
    "hourglass_check",
    "iru_set",
    "jsr_jssr",
    "lp_max",
    "mat_mul",
    "mat_vec",
    "mpg_to_weighted_eg",
    "mpg_value",
    "norm_bound",
    "one_norm",
    "parse_machine",
    "perron_vector",
    "population_trace",
    "rat",
    "right_product",
    "run_machine",
    "run_scripted_play",
    "sample_conv",
    "simulate_payoff",
    "solve",
    "spectral_radius",
    "value_bisection",
    "vec_mat",
    "verify_certificate",
    "verify_saddle",
]
