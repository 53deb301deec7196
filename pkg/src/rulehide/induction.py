"""Top-down decision-tree induction for binary attributes and a two-class
target, splitting on information gain.

Conventions shared by everything downstream:

* the true branch of a split is the left child;
* gain ties are broken toward the lowest attribute index;
* leaf label ties (equal class counts) resolve to the positive class;
* growth stops when a node is pure, no unused attribute remains on the path,
  or the best achievable gain is zero (within rounding).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .dataset import (
    AttributeSchema,
    Dataset,
    Instance,
    NEGATIVE,
    POSITIVE,
)

# Gains within this of zero are treated as zero when deciding whether to split.
GAIN_STOP_EPS = 1e-12


class TreeError(ValueError):
    """Induction failure or an unresolvable tree path."""


@dataclass(frozen=True)
class ClassCounts:
    p: int
    n: int

    @property
    def total(self) -> int:
        return self.p + self.n

    @property
    def majority(self) -> str:
        """Majority class; a tie resolves to the positive class."""
        return POSITIVE if self.p >= self.n else NEGATIVE

    def added(self, label: str, k: int) -> "ClassCounts":
        if label == POSITIVE:
            return ClassCounts(self.p + k, self.n)
        return ClassCounts(self.p, self.n + k)

    def shifted(self, dp: int, dn: int) -> "ClassCounts":
        return ClassCounts(self.p + dp, self.n + dn)


@dataclass(frozen=True)
class Leaf:
    label: str
    counts: ClassCounts


@dataclass(frozen=True)
class Split:
    attribute: int
    counts: ClassCounts
    left: "TreeNode"  # attribute == True
    right: "TreeNode"  # attribute == False


TreeNode = Leaf | Split

# A path is the sequence of (attribute index, branch value) decisions from the
# root; the empty tuple is the root itself.
Path = tuple[tuple[int, bool], ...]


@dataclass(frozen=True)
class DecisionTree:
    schema: AttributeSchema
    root: TreeNode


@dataclass(frozen=True)
class Rule:
    """A root-to-leaf path plus the leaf's label."""

    path: Path
    label: str


def entropy(p: float, n: float) -> float:
    """Two-class Shannon entropy in bits; 0*log(0) is taken as 0."""
    if p <= 0 or n <= 0:
        return 0.0
    total = p + n
    fp = p / total
    fn = n / total
    return -(fp * math.log2(fp) + fn * math.log2(fn))


def info_gain(parent: ClassCounts, left: ClassCounts, right: ClassCounts) -> float:
    """Entropy of the parent minus child entropies weighted by parent share.

    The children of an induced split partition the parent exactly, but callers
    evaluating prospective allocations may pass children that do not sum to the
    parent; the weights deliberately use the parent total either way.
    """
    total = parent.total
    if total == 0:
        return 0.0
    gain = entropy(parent.p, parent.n)
    for child in (left, right):
        if child.total:
            gain -= (child.total / total) * entropy(child.p, child.n)
    return gain


def _count(instances: list[Instance]) -> ClassCounts:
    p = sum(1 for inst in instances if inst.label == POSITIVE)
    return ClassCounts(p, len(instances) - p)


def _grow(instances: list[Instance], used: frozenset[int], arity: int) -> TreeNode:
    counts = _count(instances)
    if counts.p == 0 or counts.n == 0 or len(used) == arity:
        return Leaf(counts.majority, counts)

    best_attr = -1
    best_gain = 0.0
    best_parts: tuple[list[Instance], list[Instance]] | None = None
    for attr in range(arity):
        if attr in used:
            continue
        left = [inst for inst in instances if inst.values[attr]]
        right = [inst for inst in instances if not inst.values[attr]]
        gain = info_gain(counts, _count(left), _count(right))
        # Strict comparison: on a tie the earlier (lower) attribute stays.
        if best_parts is None or gain > best_gain:
            best_attr, best_gain, best_parts = attr, gain, (left, right)

    if best_parts is None or best_gain <= GAIN_STOP_EPS:
        return Leaf(counts.majority, counts)

    child_used = used | {best_attr}
    return Split(
        best_attr,
        counts,
        _grow(best_parts[0], child_used, arity),
        _grow(best_parts[1], child_used, arity),
    )


def induce(dataset: Dataset) -> DecisionTree:
    if not dataset.instances:
        raise TreeError("cannot induce a tree from an empty dataset")
    root = _grow(list(dataset.instances), frozenset(), len(dataset.schema))
    return DecisionTree(dataset.schema, root)


def extract_rules(tree: DecisionTree) -> list[Rule]:
    """All root-to-leaf paths, left (true) branch first."""
    rules: list[Rule] = []

    def walk(node: TreeNode, path: Path) -> None:
        if isinstance(node, Leaf):
            rules.append(Rule(path, node.label))
            return
        walk(node.left, path + ((node.attribute, True),))
        walk(node.right, path + ((node.attribute, False),))

    walk(tree.root, ())
    return rules


def classify(tree: DecisionTree, values: tuple[bool, ...]) -> str:
    if len(values) != len(tree.schema):
        raise TreeError(
            f"expected {len(tree.schema)} attribute values, got {len(values)}"
        )
    node = tree.root
    while isinstance(node, Split):
        node = node.left if values[node.attribute] else node.right
    return node.label


def _positions(node: TreeNode, at: tuple[bool, ...], out: dict) -> None:
    if isinstance(node, Leaf):
        out[at] = ("leaf", node.label)
        return
    out[at] = ("split", node.attribute)
    _positions(node.left, at + (True,), out)
    _positions(node.right, at + (False,), out)


def similarity(a: DecisionTree, b: DecisionTree) -> float:
    """Structural overlap: positions (root-anchored branch sequences) that
    agree on kind and content, divided by the union of positions."""
    if a.schema.names != b.schema.names:
        raise TreeError("cannot compare trees over different schemas")
    pa: dict = {}
    pb: dict = {}
    _positions(a.root, (), pa)
    _positions(b.root, (), pb)
    union = set(pa) | set(pb)
    matching = sum(1 for pos in union if pa.get(pos) == pb.get(pos))
    return matching / len(union)


@dataclass(frozen=True)
class ResolvedLeaf:
    """A leaf located by path, with the splits passed on the way down."""

    path: Path
    ancestors: tuple[tuple[Split, bool], ...]  # (node, branch taken), root first
    leaf: Leaf


def find_leaf(tree: DecisionTree, path: Path) -> ResolvedLeaf:
    node = tree.root
    ancestors: list[tuple[Split, bool]] = []
    for step, (attr, value) in enumerate(path):
        if isinstance(node, Leaf):
            raise TreeError(
                f"path step {step}: reached a leaf with path remaining"
            )
        if node.attribute != attr:
            names = tree.schema.names
            said = names[attr] if 0 <= attr < len(names) else f"#{attr}"
            raise TreeError(
                f"path step {step}: node splits on '{names[node.attribute]}',"
                f" path says '{said}'"
            )
        ancestors.append((node, value))
        node = node.left if value else node.right
    if not isinstance(node, Leaf):
        raise TreeError("path ends at an internal node, not a leaf")
    return ResolvedLeaf(tuple(path), tuple(ancestors), node)


def format_path(schema: AttributeSchema, path: Path) -> str:
    return "/".join(
        f"{schema.names[attr]}={'t' if value else 'f'}" for attr, value in path
    )


def parse_path(schema: AttributeSchema, text: str) -> Path:
    text = text.strip()
    if not text:
        return ()
    steps = []
    for part in text.split("/"):
        name, sep, value = part.partition("=")
        if not sep or value.strip() not in ("t", "f"):
            raise TreeError(f"bad path step {part!r}, expected 'name=t' or 'name=f'")
        steps.append((schema.index_of(name.strip()), value.strip() == "t"))
    return tuple(steps)


def format_rule(schema: AttributeSchema, rule: Rule) -> str:
    return f"{format_path(schema, rule.path)} => {rule.label}"


def parse_rule_text(schema: AttributeSchema, text: str) -> Rule:
    path_part, sep, label = text.rpartition("=>")
    if not sep:
        raise TreeError(f"bad rule {text!r}, expected 'path => label'")
    label = label.strip()
    if label not in (POSITIVE, NEGATIVE):
        raise TreeError(f"bad rule label {label!r}")
    return Rule(parse_path(schema, path_part), label)


def _node_to_dict(schema: AttributeSchema, node: TreeNode) -> dict:
    if isinstance(node, Leaf):
        return {
            "kind": "leaf",
            "label": node.label,
            "p": node.counts.p,
            "n": node.counts.n,
        }
    return {
        "kind": "internal",
        "attribute": schema.names[node.attribute],
        "p": node.counts.p,
        "n": node.counts.n,
        "left": _node_to_dict(schema, node.left),
        "right": _node_to_dict(schema, node.right),
    }


def tree_to_dict(tree: DecisionTree) -> dict:
    return {
        "schema": list(tree.schema.names),
        "root": _node_to_dict(tree.schema, tree.root),
    }


def _node_from_dict(schema: AttributeSchema, data: dict) -> TreeNode:
    try:
        kind = data["kind"]
        counts = ClassCounts(int(data["p"]), int(data["n"]))
        if kind == "leaf":
            return Leaf(data["label"], counts)
        if kind == "internal":
            return Split(
                schema.index_of(data["attribute"]),
                counts,
                _node_from_dict(schema, data["left"]),
                _node_from_dict(schema, data["right"]),
            )
    except (KeyError, TypeError) as exc:
        raise TreeError(f"malformed tree node: {exc}") from None
    raise TreeError(f"unknown node kind: {kind!r}")


def tree_from_dict(data: dict) -> DecisionTree:
    try:
        schema = AttributeSchema(tuple(data["schema"]))
        root = data["root"]
    except (KeyError, TypeError) as exc:
        raise TreeError(f"malformed tree document: {exc}") from None
    return DecisionTree(schema, _node_from_dict(schema, root))


def tree_to_json(tree: DecisionTree) -> str:
    return json.dumps(tree_to_dict(tree), indent=2) + "\n"


def tree_from_json(text: str) -> DecisionTree:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TreeError(f"invalid tree JSON: {exc}") from None
    return tree_from_dict(data)
