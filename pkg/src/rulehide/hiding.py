"""Hiding engine: make selected leaves disappear from re-induced trees.

The pipeline has two passes over the tree:

1. Bottom-up (`swap_and_add`): relabel every instance of each requested leaf
   toward its target class, then walk the affected ancestors deepest-first.
   Each ancestor accumulates the class deltas arriving from below and, if its
   majority:minority ratio has dropped below the node's original ratio (in
   either orientation), schedules the minimal number of single-class additions
   that restores some orientation of it. Keeping every ancestor's ratio at or
   above its original value keeps every ancestor's entropy at or below its
   original value, which protects the gain of the split above it. Scheduled
   additions have values fixed only along the root-to-node path.

2. Top-down (`allocate_and_set`): route the scheduled instances down the tree.
   Where a node's split attribute is free, the batch is allocated between the
   branches: the weighted-entropy gain of the split as a function of "i of k
   go left" is convex, so its maximum sits at a corner; `hold_back` starts at
   the better corner and walks toward the other branch until the split's gain
   no longer exceeds the gain of the split above it (which it would otherwise
   eventually displace), while `even_split` just halves each batch. Attributes
   never encountered on the way to a fringe are filled with seeded random bits.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .dataset import (
    Dataset,
    Instance,
    NEGATIVE,
    ORIGIN_SYNTHETIC,
    POSITIVE,
)
from .induction import (
    ClassCounts,
    DecisionTree,
    Leaf,
    Path,
    ResolvedLeaf,
    Rule,
    Split,
    TreeNode,
    extract_rules,
    find_leaf,
    format_path,
    format_rule,
    induce,
    info_gain,
    similarity,
)
from .rng import BitStream

HOLD_BACK = "hold_back"
EVEN_SPLIT = "even_split"
STRATEGIES = (HOLD_BACK, EVEN_SPLIT)

# Gain comparisons downstream of the induction tolerance: a difference at or
# below this counts as "not lower".
GAIN_TOLERANCE = 1e-9

# Corner comparisons: mirrored children can differ by float summation order,
# so exact symmetry must still deterministically pick the left corner.
_CORNER_EPS = 1e-12


class HidingError(ValueError):
    """Invalid hiding request or unusable engine input."""


@dataclass(frozen=True)
class ClassDelta:
    """Per-node record of what hiding did: relabels at leaves, additions at
    ancestors. At a hidden leaf exactly one relabel direction is non-zero."""

    relabeled_p_to_n: int = 0
    relabeled_n_to_p: int = 0
    added_p: int = 0
    added_n: int = 0

    def merged(self, other: "ClassDelta") -> "ClassDelta":
        return ClassDelta(
            self.relabeled_p_to_n + other.relabeled_p_to_n,
            self.relabeled_n_to_p + other.relabeled_n_to_p,
            self.added_p + other.added_p,
            self.added_n + other.added_n,
        )

    @property
    def added(self) -> int:
        return self.added_p + self.added_n


@dataclass(frozen=True)
class PendingInstance:
    """An addition scheduled at some node: class plus the values fixed by the
    root-to-node path. Everything else is still free."""

    label: str
    fixed: Path


@dataclass(frozen=True)
class AllocationProblem:
    """One batch allocation at one split: `k` same-class pending instances
    arrive at a node whose current counts are `parent` (arrivals included);
    `left`/`right` are the children's current counts before this batch."""

    parent: ClassCounts
    left: ClassCounts
    right: ClassCounts
    k: int
    label: str

    def gain(self, i: int) -> float:
        """Split gain when i of the k instances go to the true branch."""
        return info_gain(
            self.parent,
            self.left.added(self.label, i),
            self.right.added(self.label, self.k - i),
        )


def ratio_floor(counts: ClassCounts) -> Fraction | None:
    """A node's original majority:minority ratio; None when the node is pure
    (no defined ratio, nothing to enforce)."""
    low = min(counts.p, counts.n)
    if low == 0:
        return None
    return Fraction(max(counts.p, counts.n), low)


def _ceil_div(num: int, den: int) -> int:
    return -(-num // den)


def required_additions(
    counts: ClassCounts,
    target: Fraction | None,
    warnings: list[str] | None = None,
    node_name: str = "node",
) -> tuple[str, int]:
    """Minimal single-class additions so that max:min >= target in at least
    one orientation (either class may end up the majority).

    Ties between the two classes' counts are broken toward fewer instances
    first, then toward the current majority class, then toward p.
    """
    if counts.p == 0 and counts.n == 0:
        if warnings is not None:
            warnings.append(
                f"{node_name}: no instances remain; ratio cannot be enforced"
            )
        return POSITIVE, 0
    if target is None:
        return counts.majority, 0
    num, den = target.numerator, target.denominator
    # k making p the (sufficient) majority: (p + k) / n >= num / den
    k_p = max(0, _ceil_div(num * counts.n - den * counts.p, den))
    k_n = max(0, _ceil_div(num * counts.p - den * counts.n, den))
    if k_p < k_n:
        return POSITIVE, k_p
    if k_n < k_p:
        return NEGATIVE, k_n
    return (NEGATIVE, k_n) if counts.n > counts.p else (POSITIVE, k_p)


def swap_target(ref: ResolvedLeaf) -> str:
    """The class a hidden leaf's instances are relabeled to: always the
    opposite of the leaf's own label, so the leaf's classification can no
    longer be learned from its region."""
    return NEGATIVE if ref.leaf.label == POSITIVE else POSITIVE


def _reaches(instance: Instance, path: Path) -> bool:
    return all(instance.values[attr] == value for attr, value in path)


def _swap_in_place(work: list[Instance], ref: ResolvedLeaf) -> ClassDelta:
    if ref.leaf.counts.total == 0:
        raise HidingError("leaf has no instances")
    target = swap_target(ref)
    if ref.leaf.label == target:
        raise HidingError(
            f"nothing to hide: leaf is already classified {target!r}"
        )
    moved = 0
    for idx, inst in enumerate(work):
        if inst.label != target and _reaches(inst, ref.path):
            work[idx] = inst.relabeled(target)
            moved += 1
    if target == NEGATIVE:
        return ClassDelta(relabeled_p_to_n=moved)
    return ClassDelta(relabeled_n_to_p=moved)


def swap_leaf(dataset: Dataset, ref: ResolvedLeaf) -> tuple[Dataset, ClassDelta]:
    """Relabel every instance reaching `ref` to the leaf's target class."""
    work = list(dataset.instances)
    delta = _swap_in_place(work, ref)
    return Dataset(dataset.schema, tuple(work)), delta


@dataclass
class SwapAddResult:
    dataset: Dataset  # relabeled copy of the input
    pending: list[PendingInstance]
    deltas: dict[Path, ClassDelta]
    warnings: list[str]


def swap_and_add(
    dataset: Dataset, tree: DecisionTree, refs: Sequence[ResolvedLeaf]
) -> SwapAddResult:
    """Bottom-up pass: relabel the requested leaves, then restore every
    affected ancestor's original ratio floor with minimal additions.

    All requests are processed as one group: each affected node is visited
    exactly once, deepest first, seeing the summed deltas of everything below
    it. Additions scheduled at a node count toward that node and everything
    above it.
    """
    paths = [ref.path for ref in refs]
    if len(set(paths)) != len(paths):
        raise HidingError("duplicate hiding requests")

    work = list(dataset.instances)
    deltas: dict[Path, ClassDelta] = {}
    incoming: dict[Path, list[int]] = defaultdict(lambda: [0, 0])
    affected: dict[Path, Split] = {}

    for ref in refs:
        delta = _swap_in_place(work, ref)
        deltas[ref.path] = delta
        dp = delta.relabeled_n_to_p - delta.relabeled_p_to_n
        if ref.ancestors:
            parent_path = ref.path[:-1]
            incoming[parent_path][0] += dp
            incoming[parent_path][1] -= dp
            for depth, (node, _) in enumerate(ref.ancestors):
                affected[ref.path[:depth]] = node

    pending: list[PendingInstance] = []
    warnings: list[str] = []
    schema = dataset.schema
    for path in sorted(affected, key=lambda q: (-len(q), q)):
        node = affected[path]
        dp, dn = incoming[path]
        current = node.counts.shifted(dp, dn)
        name = format_path(schema, path) or "(root)"
        label, k = required_additions(
            current, ratio_floor(node.counts), warnings, name
        )
        if k:
            pending.extend(PendingInstance(label, path) for _ in range(k))
            add = ClassDelta(added_p=k) if label == POSITIVE else ClassDelta(added_n=k)
            deltas[path] = deltas.get(path, ClassDelta()).merged(add)
            if label == POSITIVE:
                dp += k
            else:
                dn += k
        if path:
            parent_path = path[:-1]
            incoming[parent_path][0] += dp
            incoming[parent_path][1] += dn

    return SwapAddResult(Dataset(schema, tuple(work)), pending, deltas, warnings)


def corner_allocation(problem: AllocationProblem) -> tuple[str, float]:
    """The better of the two all-or-nothing allocations; ties go left."""
    if problem.k < 1:
        raise HidingError("allocation needs at least one pending instance")
    gain_left = problem.gain(problem.k)
    gain_right = problem.gain(0)
    if gain_left >= gain_right - _CORNER_EPS:
        return "left", gain_left
    return "right", gain_right


def slope_walk(
    problem: AllocationProblem,
    parent_gain: float | None,
    warnings: list[str] | None = None,
    node_name: str = "node",
) -> int:
    """Number of pending instances sent to the true branch.

    Starts at the better corner, which maximizes this split's gain, and walks
    single steps toward the other branch until the gain stops exceeding
    `parent_gain` (so the split above keeps its advantage when re-induced).
    Convexity makes the walked gains monotone; if even the minimum stays above
    `parent_gain`, the minimizing allocation is returned with a warning.
    `parent_gain` is None at the root, where there is nothing to hold back
    for and the corner stands.
    """
    corner, gain = corner_allocation(problem)
    i = problem.k if corner == "left" else 0
    if parent_gain is None:
        return i
    step = -1 if corner == "left" else 1
    while gain > parent_gain + GAIN_TOLERANCE:
        j = i + step
        if j < 0 or j > problem.k:
            break  # walked to the far corner; that is the minimum
        next_gain = problem.gain(j)
        if next_gain >= gain - _CORNER_EPS:
            break  # passed the convex minimum (ties within float wobble count)
        i, gain = j, next_gain
    if gain > parent_gain + GAIN_TOLERANCE and warnings is not None:
        warnings.append(
            f"{node_name}: every allocation of {problem.k} pending "
            f"'{problem.label}' instances leaves this split's gain above its "
            f"parent's ({gain:.6f} > {parent_gain:.6f}); using the minimum"
        )
    return i


@dataclass
class _Slot:
    pending: PendingInstance
    values: dict[int, bool]


def _index_nodes(tree: DecisionTree) -> dict[Path, TreeNode]:
    nodes: dict[Path, TreeNode] = {}

    def walk(node: TreeNode, path: Path) -> None:
        nodes[path] = node
        if isinstance(node, Split):
            walk(node.left, path + ((node.attribute, True),))
            walk(node.right, path + ((node.attribute, False),))

    walk(tree.root, ())
    return nodes


def allocate_and_set(
    tree: DecisionTree,
    pending: Sequence[PendingInstance],
    strategy: str = HOLD_BACK,
    *,
    seed: int = 0,
    relabel_deltas: Mapping[Path, tuple[int, int]] | None = None,
    warnings: list[str] | None = None,
) -> list[Instance]:
    """Top-down pass: route pending instances and fix their free values.

    `relabel_deltas` maps hidden-leaf paths to the (dp, dn) their relabeling
    caused, so the counts used for gain decisions reflect the swapped dataset.
    Within a node, batches are allocated per class with negatives first (they
    are scheduled by deeper nodes in the bottom-up pass); each allocation sees
    counts updated by all previous ones. Values of attributes never seen on
    the walk to a fringe are drawn from a BitStream seeded with `seed`.
    """
    if strategy not in STRATEGIES:
        raise HidingError(f"unknown strategy: {strategy!r}")
    arity = len(tree.schema)
    nodes = _index_nodes(tree)
    bits = BitStream(seed)

    # Current counts per node: induced counts plus relabel deltas below.
    counts: dict[Path, list[int]] = {}
    rl = dict(relabel_deltas or {})

    def init_counts(node: TreeNode, path: Path) -> tuple[int, int]:
        dp, dn = rl.get(path, (0, 0))
        if isinstance(node, Split):
            for child, value in ((node.left, True), (node.right, False)):
                cdp, cdn = init_counts(child, path + ((node.attribute, value),))
                dp += cdp
                dn += cdn
        counts[path] = [node.counts.p + dp, node.counts.n + dn]
        return dp, dn

    init_counts(tree.root, ())

    def bump(path: Path, label: str) -> None:
        counts[path][0 if label == POSITIVE else 1] += 1

    # Route each fixed prefix from the root, checking it against the tree and
    # counting the instance into every node it is already committed to.
    slots: list[_Slot] = []
    for item in pending:
        fixed = dict(item.fixed)
        if len(fixed) != len(item.fixed):
            raise HidingError("pending instance repeats an attribute")
        for attr, _ in fixed.items():
            if not 0 <= attr < arity:
                raise HidingError(f"pending instance fixes unknown attribute {attr}")
        node, path = tree.root, ()
        bump(path, item.label)
        consumed = set()
        while isinstance(node, Split) and node.attribute in fixed:
            value = fixed[node.attribute]
            consumed.add(node.attribute)
            path = path + ((node.attribute, value),)
            node = node.left if value else node.right
            bump(path, item.label)
        if len(consumed) != len(fixed) and isinstance(node, Split):
            raise HidingError(
                "pending instance's fixed path contradicts the tree: "
                f"stuck at a split on {tree.schema.names[node.attribute]!r} "
                f"with fixed attributes left over"
            )
        slots.append(_Slot(item, fixed))

    def parent_gain(path: Path) -> float | None:
        if not path:
            return None
        above = path[:-1]
        node = nodes[above]
        assert isinstance(node, Split)
        left_path = above + ((node.attribute, True),)
        right_path = above + ((node.attribute, False),)
        return info_gain(
            ClassCounts(*counts[above]),
            ClassCounts(*counts[left_path]),
            ClassCounts(*counts[right_path]),
        )

    out: list[Instance] = []

    def descend(node: TreeNode, path: Path, batch: list[_Slot]) -> None:
        if not batch:
            return
        if isinstance(node, Leaf):
            for slot in batch:
                values = tuple(
                    slot.values[a] if a in slot.values else bits.next_bit()
                    for a in range(arity)
                )
                out.append(Instance(values, slot.pending.label, ORIGIN_SYNTHETIC))
            return
        attr = node.attribute
        left_path = path + ((attr, True),)
        right_path = path + ((attr, False),)
        undecided = [slot for slot in batch if attr not in slot.values]
        for label in (NEGATIVE, POSITIVE):
            group = [s for s in undecided if s.pending.label == label]
            if not group:
                continue
            k = len(group)
            if strategy == EVEN_SPLIT:
                to_left = (k + 1) // 2  # the odd instance goes left
            else:
                problem = AllocationProblem(
                    parent=ClassCounts(*counts[path]),
                    left=ClassCounts(*counts[left_path]),
                    right=ClassCounts(*counts[right_path]),
                    k=k,
                    label=label,
                )
                name = format_path(tree.schema, path) or "(root)"
                to_left = slope_walk(problem, parent_gain(path), warnings, name)
            for rank, slot in enumerate(group):
                value = rank < to_left
                slot.values[attr] = value
                bump(left_path if value else right_path, label)
        descend(node.left, left_path, [s for s in batch if s.values[attr]])
        descend(node.right, right_path, [s for s in batch if not s.values[attr]])

    descend(tree.root, (), slots)
    return out


@dataclass
class SanitizationReport:
    """What a hide run did, plus how much the re-induced tree still matches."""

    per_node: dict[Path, ClassDelta]
    total_added: int
    growth_ratio: float
    similarity: float
    hidden_rules: tuple[Rule, ...]
    warnings: tuple[str, ...]

    def to_json_dict(self, schema) -> dict:
        rows = []
        for path in sorted(self.per_node, key=lambda q: (len(q), format_path(schema, q))):
            delta = self.per_node[path]
            rows.append(
                {
                    "path": format_path(schema, path),
                    "relabeledPtoN": delta.relabeled_p_to_n,
                    "relabeledNtoP": delta.relabeled_n_to_p,
                    "addedP": delta.added_p,
                    "addedN": delta.added_n,
                }
            )
        return {
            "perNode": rows,
            "totalAdded": self.total_added,
            "growthRatio": self.growth_ratio,
            "similarity": self.similarity,
            "hiddenRules": [format_rule(schema, rule) for rule in self.hidden_rules],
            "warnings": list(self.warnings),
        }


def _resolve_requests(
    tree: DecisionTree, requests: Sequence[Rule | Path]
) -> list[ResolvedLeaf]:
    refs = []
    for request in requests:
        if isinstance(request, Rule):
            ref = find_leaf(tree, request.path)
            if ref.leaf.label != request.label:
                raise HidingError(
                    f"rule labels the leaf {request.label!r} but the tree "
                    f"says {ref.leaf.label!r}"
                )
        else:
            ref = find_leaf(tree, tuple(request))
        refs.append(ref)
    return refs


def hide(
    dataset: Dataset,
    requests: Sequence[Rule | Path],
    strategy: str = HOLD_BACK,
    seed: int = 0,
) -> tuple[Dataset, SanitizationReport]:
    """Full pipeline: induce, swap + restore ratios, allocate, re-induce.

    Returns the sanitized dataset (original rows relabeled where hidden,
    synthetic rows appended) and a report. The input dataset is not modified.
    """
    if not requests:
        raise HidingError("no hiding requests given")
    if strategy not in STRATEGIES:
        raise HidingError(f"unknown strategy: {strategy!r}")
    tree = induce(dataset)
    refs = _resolve_requests(tree, requests)
    result = swap_and_add(dataset, tree, refs)

    relabel_deltas = {
        ref.path: (
            result.deltas[ref.path].relabeled_n_to_p
            - result.deltas[ref.path].relabeled_p_to_n,
            result.deltas[ref.path].relabeled_p_to_n
            - result.deltas[ref.path].relabeled_n_to_p,
        )
        for ref in refs
    }
    synthetic = allocate_and_set(
        tree,
        result.pending,
        strategy,
        seed=seed,
        relabel_deltas=relabel_deltas,
        warnings=result.warnings,
    )
    sanitized = Dataset(
        dataset.schema, result.dataset.instances + tuple(synthetic)
    )

    new_tree = induce(sanitized)
    new_rules = set(extract_rules(new_tree))
    hidden = tuple(r for r in extract_rules(tree) if r not in new_rules)
    report = SanitizationReport(
        per_node=result.deltas,
        total_added=len(synthetic),
        growth_ratio=len(synthetic) / len(dataset) if len(dataset) else 0.0,
        similarity=similarity(tree, new_tree),
        hidden_rules=hidden,
        warnings=tuple(result.warnings),
    )
    return sanitized, report


@dataclass
class LeafCost:
    rule: Rule
    growth: float | None
    error: str | None = None


@dataclass
class CostReport:
    rows: list[LeafCost]
    mean: float
    minimum: float
    maximum: float

    def to_json_dict(self, schema) -> dict:
        return {
            "rows": [
                {
                    "path": format_path(schema, row.rule.path),
                    "label": row.rule.label,
                    "growth": row.growth,
                    "error": row.error,
                }
                for row in self.rows
            ],
            "mean": self.mean,
            "min": self.minimum,
            "max": self.maximum,
        }


def per_leaf_cost(
    dataset: Dataset, strategy: str = HOLD_BACK, seed: int = 0
) -> CostReport:
    """Hide each leaf of the induced tree separately and report the growth
    ratio of each run. Leaves that cannot be hidden (no target class) become
    rows with an error instead of a growth value."""
    tree = induce(dataset)
    rows: list[LeafCost] = []
    for rule in extract_rules(tree):
        try:
            _, report = hide(dataset, [rule], strategy, seed)
            rows.append(LeafCost(rule, report.growth_ratio))
        except HidingError as exc:
            rows.append(LeafCost(rule, None, str(exc)))
    growths = [row.growth for row in rows if row.growth is not None]
    if growths:
        return CostReport(rows, sum(growths) / len(growths), min(growths), max(growths))
    return CostReport(rows, 0.0, 0.0, 0.0)
