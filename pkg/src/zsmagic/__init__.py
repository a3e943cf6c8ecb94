"""Zero-sum partitions, complete mappings, Kotzig array sets and magic
rectangle sets over finite Abelian groups: constructions, existence
decisions and independent verifiers, all certificate-producing."""

from .errors import (
    BudgetExceededError,
    GroupSpecError,
    InfeasibleError,
    OutOfTheoremRangeError,
    PreconditionError,
    VerificationError,
    ZsmagicError,
)
from .groups import (
    GroupSpec,
    all_groups_up_to,
    groups_of_order,
    is_in_script_g,
    parse_group_spec,
)
from .kotzig import (
    IntKotzigArray,
    KotzigArraySet,
    check_kas,
    group_kotzig,
    int_kotzig,
    kas,
    kas_column_glue,
    kas_row_glue,
    kas_three_rows,
    kas_two_rows,
    verify_int_kotzig,
    verify_kas,
)
from .mappings import (
    CmPartitionCertificate,
    CompleteMapping,
    check_cm_certificate,
    cm_odd_identity,
    cm_two_group,
    cm_zero_sum_partition,
    find_complete_mapping,
    two_group_class_size,
    verify_cm_certificate,
    verify_complete_mapping,
)
from .rectangles import (
    RectangleSet,
    Verdict,
    check_mrs,
    decide_existence,
    mrs_construct,
    mrs_exp_variant,
    mrs_search,
    verify_mrs,
)
from .search import DEFAULT_BUDGET, SearchOutcome, backtrack
from .zerosum import (
    ZeroSumPartition,
    check_zero_sum_partition,
    verify_zero_sum_partition,
    zero_sum_partition,
)

__all__ = [
    "BudgetExceededError",
    "GroupSpecError",
    "InfeasibleError",
    "OutOfTheoremRangeError",
    "PreconditionError",
    "VerificationError",
    "ZsmagicError",
    "GroupSpec",
    "all_groups_up_to",
    "groups_of_order",
    "is_in_script_g",
    "parse_group_spec",
    "IntKotzigArray",
    "KotzigArraySet",
    "check_kas",
    "group_kotzig",
    "int_kotzig",
    "kas",
    "kas_column_glue",
    "kas_row_glue",
    "kas_three_rows",
    "kas_two_rows",
    "verify_int_kotzig",
    "verify_kas",
    "CmPartitionCertificate",
    "CompleteMapping",
    "check_cm_certificate",
    "cm_odd_identity",
    "cm_two_group",
    "cm_zero_sum_partition",
    "find_complete_mapping",
    "two_group_class_size",
    "verify_cm_certificate",
    "verify_complete_mapping",
    "RectangleSet",
    "Verdict",
    "check_mrs",
    "decide_existence",
    "mrs_construct",
    "mrs_exp_variant",
    "mrs_search",
    "verify_mrs",
    "DEFAULT_BUDGET",
    "SearchOutcome",
    "backtrack",
    "ZeroSumPartition",
    "check_zero_sum_partition",
    "verify_zero_sum_partition",
    "zero_sum_partition",
]

__version__ = "0.1.0"
