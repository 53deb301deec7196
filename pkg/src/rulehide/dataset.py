"""Binary-attribute datasets: CSV and rule-file parsing, writing, and a
rule-driven synthetic data generator.

Every attribute is boolean (cells `t`/`f`), the class is two-valued (`p`/`n`),
and each instance carries an origin marker so sanitized datasets can be told
apart from the rows they were grown from.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .rng import BitStream

POSITIVE = "p"
NEGATIVE = "n"
LABELS = (POSITIVE, NEGATIVE)

ORIGIN_ORIGINAL = "original"
ORIGIN_SYNTHETIC = "synthetic"
ORIGINS = (ORIGIN_ORIGINAL, ORIGIN_SYNTHETIC)

CLASS_COLUMN = "class"
ORIGIN_COLUMN = "origin"

_VALUE_TOKENS = {"t": True, "f": False}
_PATTERN_TOKENS = {"t": True, "f": False, "_": None}


class DataError(ValueError):
    """Malformed CSV, rule file, or schema violation."""


@dataclass(frozen=True)
class AttributeSchema:
    """Ordered attribute names; the class column is not part of the schema."""

    names: tuple[str, ...]

    def __post_init__(self):
        if not self.names:
            raise DataError("schema needs at least one attribute")
        if len(set(self.names)) != len(self.names):
            raise DataError("duplicate attribute names in schema")
        for name in self.names:
            if not name or name in (CLASS_COLUMN, ORIGIN_COLUMN):
                raise DataError(f"invalid attribute name: {name!r}")

    def __len__(self) -> int:
        return len(self.names)

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise DataError(f"unknown attribute: {name!r}") from None


def default_schema(arity: int) -> AttributeSchema:
    return AttributeSchema(tuple(f"a{i + 1}" for i in range(arity)))


@dataclass(frozen=True)
class Instance:
    values: tuple[bool, ...]
    label: str
    origin: str = ORIGIN_ORIGINAL

    def __post_init__(self):
        if self.label not in LABELS:
            raise DataError(f"invalid class label: {self.label!r}")
        if self.origin not in ORIGINS:
            raise DataError(f"invalid origin: {self.origin!r}")

    def relabeled(self, label: str) -> "Instance":
        return replace(self, label=label)


@dataclass(frozen=True)
class Dataset:
    schema: AttributeSchema
    instances: tuple[Instance, ...] = field(default_factory=tuple)

    def __post_init__(self):
        arity = len(self.schema)
        for inst in self.instances:
            if len(inst.values) != arity:
                raise DataError(
                    f"instance has {len(inst.values)} values, schema has {arity}"
                )

    def __len__(self) -> int:
        return len(self.instances)

    def class_counts(self) -> tuple[int, int]:
        p = sum(1 for inst in self.instances if inst.label == POSITIVE)
        return p, len(self.instances) - p


@dataclass(frozen=True)
class RuleSpec:
    """A generation/matching pattern: one value or wildcard per attribute."""

    pattern: tuple[bool | None, ...]
    label: str

    def __post_init__(self):
        if self.label not in LABELS:
            raise DataError(f"invalid class label: {self.label!r}")

    def matches(self, instance: Instance) -> bool:
        if len(instance.values) != len(self.pattern):
            raise DataError(
                f"pattern arity {len(self.pattern)} does not match "
                f"instance arity {len(instance.values)}"
            )
        return all(
            want is None or want == got
            for want, got in zip(self.pattern, instance.values)
        )


def parse_csv(text: str) -> Dataset:
    """Parse the CSV dataset format. Cells are trimmed; blank lines skipped."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DataError("empty dataset file: missing header")

    header = [cell.strip() for cell in lines[0].split(",")]
    has_origin = header[-1] == ORIGIN_COLUMN
    if has_origin:
        header = header[:-1]
    if not header or header[-1] != CLASS_COLUMN:
        raise DataError(
            f"header must end with {CLASS_COLUMN!r}"
            + (f" before {ORIGIN_COLUMN!r}" if has_origin else "")
        )
    schema = AttributeSchema(tuple(header[:-1]))
    arity = len(schema)
    expected = arity + 1 + (1 if has_origin else 0)

    instances = []
    for row, line in enumerate(lines[1:], start=1):
        cells = [cell.strip() for cell in line.split(",")]
        if len(cells) != expected:
            raise DataError(f"row {row}: expected {expected} cells, got {len(cells)}")
        values = []
        for col, token in enumerate(cells[:arity], start=1):
            if token not in _VALUE_TOKENS:
                raise DataError(
                    f"row {row}, column {col}: expected 't' or 'f', got {token!r}"
                )
            values.append(_VALUE_TOKENS[token])
        label = cells[arity]
        if label not in LABELS:
            raise DataError(
                f"row {row}, column {arity + 1}: expected 'p' or 'n', got {label!r}"
            )
        origin = ORIGIN_ORIGINAL
        if has_origin:
            origin = cells[arity + 1]
            if origin not in ORIGINS:
                raise DataError(
                    f"row {row}, column {expected}: expected 'original' or "
                    f"'synthetic', got {origin!r}"
                )
        instances.append(Instance(tuple(values), label, origin))
    return Dataset(schema, tuple(instances))


def write_csv(dataset: Dataset) -> str:
    """Serialize a dataset. The origin column appears only when any instance
    is synthetic, so untouched datasets round-trip byte-identically."""
    include_origin = any(i.origin == ORIGIN_SYNTHETIC for i in dataset.instances)
    header = list(dataset.schema.names) + [CLASS_COLUMN]
    if include_origin:
        header.append(ORIGIN_COLUMN)
    out = [",".join(header)]
    for inst in dataset.instances:
        cells = ["t" if v else "f" for v in inst.values] + [inst.label]
        if include_origin:
            cells.append(inst.origin)
        out.append(",".join(cells))
    return "\n".join(out) + "\n"


def parse_rules(text: str) -> list[RuleSpec]:
    """Parse a rule file: one `(v,v,...,v):c` per line, `_` for wildcard.

    Blank lines are ignored. All rules must agree on arity.
    """
    rules: list[RuleSpec] = []
    arity: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        pattern_part, sep, label_part = line.rpartition(":")
        if not sep:
            raise DataError(f"line {lineno}: expected '(pattern):class'")
        label = label_part.strip()
        if label not in LABELS:
            raise DataError(f"line {lineno}: unknown class token {label!r}")
        pattern_part = pattern_part.strip()
        if not (pattern_part.startswith("(") and pattern_part.endswith(")")):
            raise DataError(f"line {lineno}: pattern must be parenthesized")
        tokens = [tok.strip() for tok in pattern_part[1:-1].split(",")]
        pattern = []
        for pos, token in enumerate(tokens, start=1):
            if token not in _PATTERN_TOKENS:
                raise DataError(
                    f"line {lineno}, position {pos}: expected 't', 'f' or '_', "
                    f"got {token!r}"
                )
            pattern.append(_PATTERN_TOKENS[token])
        if arity is None:
            arity = len(pattern)
        elif len(pattern) != arity:
            raise DataError(
                f"line {lineno}: expected {arity} positions, got {len(pattern)}"
            )
        rules.append(RuleSpec(tuple(pattern), label))
    return rules


def generate(rules: list[RuleSpec], count: int, seed: int = 0) -> Dataset:
    """Generate `count` instances distributed over `rules`.

    Each rule receives floor(count / len(rules)) instances; the remainder is
    assigned one each starting from the first rule. Rows are emitted grouped by
    rule, in rule order. Wildcard positions are filled from a BitStream seeded
    with `seed`, drawn in attribute-index order.
    """
    if not rules:
        raise DataError("need at least one rule to generate from")
    if count < 0:
        raise DataError("count must be non-negative")
    arity = len(rules[0].pattern)
    for rule in rules:
        if len(rule.pattern) != arity:
            raise DataError("rules disagree on arity")
    schema = default_schema(arity)
    bits = BitStream(seed)
    base, remainder = divmod(count, len(rules))
    instances = []
    for idx, rule in enumerate(rules):
        block = base + (1 if idx < remainder else 0)
        for _ in range(block):
            values = tuple(
                want if want is not None else bits.next_bit()
                for want in rule.pattern
            )
            instances.append(Instance(values, rule.label))
    return Dataset(schema, tuple(instances))
