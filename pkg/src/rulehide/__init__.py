"""rulehide: hide selected decision-tree rules by minimally relabeling and
augmenting the dataset they were induced from."""

from .dataset import (
    AttributeSchema,
    DataError,
    Dataset,
    Instance,
    NEGATIVE,
    ORIGIN_ORIGINAL,
    ORIGIN_SYNTHETIC,
    POSITIVE,
    RuleSpec,
    default_schema,
    generate,
    parse_csv,
    parse_rules,
    write_csv,
)
from .hiding import (
    AllocationProblem,
    ClassDelta,
    CostReport,
    EVEN_SPLIT,
    HOLD_BACK,
    HidingError,
    PendingInstance,
    SanitizationReport,
    allocate_and_set,
    corner_allocation,
    hide,
    per_leaf_cost,
    required_additions,
    slope_walk,
    swap_and_add,
    swap_leaf,
)
from .induction import (
    ClassCounts,
    DecisionTree,
    Leaf,
    ResolvedLeaf,
    Rule,
    Split,
    TreeError,
    classify,
    entropy,
    extract_rules,
    find_leaf,
    format_path,
    format_rule,
    induce,
    info_gain,
    parse_path,
    similarity,
    tree_from_dict,
    tree_from_json,
    tree_to_dict,
    tree_to_json,
)
from .oracle import (
    OracleVerdict,
    check_convexity,
    check_endpoint_max,
    check_serial_parallel,
    enumerate_gain,
    verify_hidden,
)
from .rng import BitStream

__version__ = "0.1.0"
