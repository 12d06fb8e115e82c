"""Mixed-type parameter spaces with conditional activation.

A space is declared one parameter per line::

    <name> <kind> <domain> [log] [| <condition>]   # comment

where kind is ``r`` (real), ``i`` (integer) or ``c`` (categorical), a
numeric domain is ``(lb, ub)``, a categorical domain is ``{v1, v2, ...}``
and the optional ``log`` token selects log-scale sampling for numeric
kinds. Conditions form a DAG; activation is derived in topological order.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Iterable, Mapping, Optional, Sequence, Union

from .conditions import INACTIVE, ConditionError, ConditionExpr, Value

REAL = "real"
INTEGER = "integer"
CATEGORICAL = "categorical"

_KIND_LETTERS = {"r": REAL, "i": INTEGER, "c": CATEGORICAL}
_KIND_TO_LETTER = {v: k for k, v in _KIND_LETTERS.items()}


class SpaceError(ValueError):
    """Raised for invalid parameter declarations or files."""


@dataclass(frozen=True)
class ParameterSpec:
    """One parameter declaration."""

    name: str
    kind: str
    lower: Optional[float] = None
    upper: Optional[float] = None
    values: tuple = ()
    condition: Optional[ConditionExpr] = None
    scale: str = "linear"

    def __post_init__(self):
        if self.kind not in (REAL, INTEGER, CATEGORICAL):
            raise SpaceError(f"{self.name}: unknown kind {self.kind!r}")
        if self.kind == CATEGORICAL:
            if len(set(self.values)) < 2:
                raise SpaceError(f"{self.name}: categorical domain needs >= 2 distinct values")
            if len(set(self.values)) != len(self.values):
                raise SpaceError(f"{self.name}: duplicate categorical values")
        else:
            if self.lower is None or self.upper is None:
                raise SpaceError(f"{self.name}: numeric domain requires bounds")
            if not (self.lower < self.upper):
                raise SpaceError(f"{self.name}: requires lb < ub, got ({self.lower}, {self.upper})")
            if self.scale == "log" and self.lower <= 0:
                raise SpaceError(f"{self.name}: log scale requires lb > 0")
            if self.kind == INTEGER and (self.lower != int(self.lower) or self.upper != int(self.upper)):
                raise SpaceError(f"{self.name}: integer bounds must be integers")
        if self.scale not in ("linear", "log"):
            raise SpaceError(f"{self.name}: unknown scale {self.scale!r}")
        if self.scale == "log" and self.kind == CATEGORICAL:
            raise SpaceError(f"{self.name}: log scale applies to numeric kinds only")

    @property
    def is_numeric(self) -> bool:
        return self.kind in (REAL, INTEGER)

    @property
    def is_conditional(self) -> bool:
        return self.condition is not None

    @property
    def width(self) -> float:
        """Declared domain width R_j used by Gower scaling."""
        return float(self.upper) - float(self.lower)

    @property
    def domain_size(self) -> int:
        """Number of distinct domain values (finite kinds only)."""
        if self.kind == INTEGER:
            return int(self.upper) - int(self.lower) + 1
        if self.kind == CATEGORICAL:
            return len(self.values)
        raise SpaceError(f"{self.name}: real domains are not enumerable")

    def contains(self, value: Value) -> bool:
        if self.kind == CATEGORICAL:
            return value in self.values
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return False
        if self.kind == INTEGER and value != int(value):
            return False
        return self.lower <= value <= self.upper

    def serialize(self) -> str:
        if self.kind == CATEGORICAL:
            domain = "{" + ", ".join(self.values) + "}"
        else:
            lo, hi = self.lower, self.upper
            if self.kind == INTEGER:
                lo, hi = int(lo), int(hi)
            domain = f"({_fmt_num(lo)}, {_fmt_num(hi)})"
        parts = [self.name, _KIND_TO_LETTER[self.kind], domain]
        if self.scale == "log":
            parts.append("log")
        line = " ".join(parts)
        if self.condition is not None:
            line += " | " + self.condition.unparse()
        return line


def _fmt_num(x: Union[int, float]) -> str:
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


class ParameterSpace:
    """Ordered, validated collection of parameter specs."""

    def __init__(self, params: Sequence[ParameterSpec]):
        names = [p.name for p in params]
        dupes = {n for n in names if names.count(n) > 1}
        if dupes:
            raise SpaceError(f"duplicate parameter names: {sorted(dupes)}")
        self.params: tuple[ParameterSpec, ...] = tuple(params)
        self.by_name: dict[str, ParameterSpec] = {p.name: p for p in self.params}
        for p in self.params:
            if p.condition is None:
                continue
            unknown = p.condition.referenced_names() - set(names)
            if unknown:
                raise SpaceError(f"{p.name}: condition references unknown parameters {sorted(unknown)}")
        self.topo_order: tuple[str, ...] = self._topological_order()

    def _topological_order(self) -> tuple[str, ...]:
        graph = {
            p.name: (p.condition.referenced_names() if p.condition else set())
            for p in self.params
        }
        try:
            order = list(TopologicalSorter(graph).static_order())
        except CycleError as exc:
            cycle = exc.args[1] if len(exc.args) > 1 else []
            raise SpaceError(f"cyclic conditions involving {sorted(set(cycle))}") from exc
        # stable order: topological generations, file order within each
        index = {p.name: i for i, p in enumerate(self.params)}
        depth: dict[str, int] = {}
        for name in order:
            deps = graph[name]
            depth[name] = 1 + max((depth[d] for d in deps), default=-1)
        return tuple(sorted(order, key=lambda n: (depth[n], index[n])))

    @property
    def n_params(self) -> int:
        return len(self.params)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)

    def __iter__(self):
        return iter(self.params)

    def __getitem__(self, name: str) -> ParameterSpec:
        return self.by_name[name]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ParameterSpace) and self.params == other.params

    def serialize(self) -> str:
        return "\n".join(p.serialize() for p in self.params) + "\n"

    def derive_activation(self, raw_values: Mapping[str, Value]) -> dict[str, Value]:
        """Resolve conditional activation over fully-drawn raw values.

        Walks parameters in topological order; a parameter whose condition
        evaluates false (clauses touching INACTIVE parameters are false)
        gets INACTIVE regardless of its drawn value.
        """
        resolved: dict[str, Value] = {}
        for name in self.topo_order:
            spec = self.by_name[name]
            if spec.condition is None or spec.condition.evaluate(resolved):
                resolved[name] = raw_values[name]
            else:
                resolved[name] = INACTIVE
        return {p.name: resolved[p.name] for p in self.params}


@dataclass(frozen=True)
class Origin:
    kind: str  # initial | sampled | anchor
    parent_id: Optional[int] = None
    iteration: int = 0


@dataclass(frozen=True, eq=False)
class Configuration:
    """One full assignment of values (or INACTIVE) to a space's parameters.

    Identity is the id; values are never mutated after creation.
    """

    id: int
    values: Mapping[str, Value]
    origin: Origin = field(default=Origin("initial"))

    def __getitem__(self, name: str) -> Value:
        return self.values[name]

    def is_active(self, name: str) -> bool:
        return self.values[name] is not INACTIVE

    def signature(self) -> tuple:
        """Value tuple used for duplicate detection (order = declaration order)."""
        return tuple(
            (name, None if value is INACTIVE else value) for name, value in self.values.items()
        )


def parse_parameter_file(text: str) -> ParameterSpace:
    """Parse the one-parameter-per-line grammar into a validated space."""
    params: list[ParameterSpec] = []
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw_line).strip()
        if not line:
            continue
        params.append(_parse_line(line, lineno))
    if not params:
        raise SpaceError("no parameter declarations found")
    return ParameterSpace(params)


def load_parameter_file(path) -> ParameterSpace:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_parameter_file(fh.read())


_LINE_RE = re.compile(
    r"^(?P<name>[A-Za-z_][A-Za-z0-9_\-]*)\s+(?P<kind>[ric])\s+(?P<rest>.+)$"
)
_NUM_DOMAIN_RE = re.compile(
    r"^\(\s*(?P<lb>[^,\s]+)\s*,\s*(?P<ub>[^)\s]+)\s*\)(?P<tail>.*)$"
)
_CAT_DOMAIN_RE = re.compile(r"^\{(?P<body>[^}]*)\}(?P<tail>.*)$")


def _strip_comment(line: str) -> str:
    # '#' starts a comment unless inside quotes
    out = []
    quote = None
    for ch in line:
        if quote:
            if ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
        elif ch == "#":
            break
        out.append(ch)
    return "".join(out)


def _parse_line(line: str, lineno: int) -> ParameterSpec:
    m = _LINE_RE.match(line)
    if m is None:
        raise SpaceError(f"line {lineno}: expected '<name> <r|i|c> <domain> ...': {line!r}")
    name, kind_letter, rest = m.group("name"), m.group("kind"), m.group("rest").strip()
    kind = _KIND_LETTERS[kind_letter]

    condition = None
    if "|" in rest:
        rest, cond_text = rest.split("|", 1)
        rest = rest.strip()
        try:
            condition = ConditionExpr.parse(cond_text.strip())
        except ConditionError as exc:
            raise SpaceError(f"line {lineno}: bad condition: {exc}") from exc

    scale = "linear"
    try:
        if kind == CATEGORICAL:
            dm = _CAT_DOMAIN_RE.match(rest)
            if dm is None:
                raise SpaceError(f"line {lineno}: expected categorical domain '{{v1, v2, ...}}'")
            values = tuple(v.strip().strip("\"'") for v in dm.group("body").split(",") if v.strip())
            if dm.group("tail").strip():
                raise SpaceError(f"line {lineno}: unexpected trailing text {dm.group('tail').strip()!r}")
            return ParameterSpec(name, kind, values=values, condition=condition)

        dm = _NUM_DOMAIN_RE.match(rest)
        if dm is None:
            raise SpaceError(f"line {lineno}: expected numeric domain '(lb, ub)'")
        tail = dm.group("tail").strip()
        if tail == "log":
            scale = "log"
        elif tail:
            raise SpaceError(f"line {lineno}: unexpected trailing text {tail!r}")
        try:
            lb, ub = float(dm.group("lb")), float(dm.group("ub"))
        except ValueError as exc:
            raise SpaceError(f"line {lineno}: malformed numeric bound: {exc}") from exc
        return ParameterSpec(name, kind, lower=lb, upper=ub, condition=condition, scale=scale)
    except SpaceError:
        raise
    except ValueError as exc:
        raise SpaceError(f"line {lineno}: {exc}") from exc


def evaluate_condition(expr: ConditionExpr, config: Configuration) -> bool:
    """Total evaluation of a condition against a configuration."""
    return expr.evaluate(config.values)


def active_parameters(space: ParameterSpace, config: Configuration) -> set[str]:
    """Names whose condition holds, derived in topological order."""
    resolved: dict[str, Value] = {}
    active: set[str] = set()
    for name in space.topo_order:
        spec = space.by_name[name]
        if spec.condition is None or spec.condition.evaluate(resolved):
            active.add(name)
            resolved[name] = config.values[name]
        else:
            resolved[name] = INACTIVE
    return active


def validate_configuration(space: ParameterSpace, config: Configuration) -> list[str]:
    """Invariant violations, one message per offending parameter."""
    violations: list[str] = []
    missing = set(space.names) - set(config.values)
    for name in sorted(missing):
        violations.append(f"{name}: missing value")
    if missing:
        return violations

    should_be_active = active_parameters(space, config)
    for spec in space.params:
        value = config.values[spec.name]
        active = value is not INACTIVE
        if active and spec.name not in should_be_active:
            violations.append(f"{spec.name}: assigned a value but its condition is false")
        elif not active and spec.name in should_be_active:
            violations.append(f"{spec.name}: inactive but its condition is true")
        elif active and not spec.contains(value):
            violations.append(f"{spec.name}: value {value!r} outside declared domain")
    return violations


def transform(spec: ParameterSpec, value: float) -> float:
    """Map a numeric value into sampling space (log for log-scale)."""
    return math.log(value) if spec.scale == "log" else float(value)


def untransform(spec: ParameterSpec, value: float) -> float:
    return math.exp(value) if spec.scale == "log" else value


def sampling_width(spec: ParameterSpec) -> float:
    """Domain width in sampling space."""
    return transform(spec, spec.upper) - transform(spec, spec.lower)


def round_half_away(x: float) -> int:
    """Round half away from zero (symmetric integer rounding)."""
    return int(math.floor(x + 0.5)) if x >= 0 else int(math.ceil(x - 0.5))


def clamp_integer(spec: ParameterSpec, x: float) -> int:
    return int(min(int(spec.upper), max(int(spec.lower), round_half_away(x))))


def values_to_jsonable(values: Mapping[str, Value]) -> dict:
    return {k: (None if v is INACTIVE else v) for k, v in values.items()}


def values_from_jsonable(data: Mapping[str, object]) -> dict[str, Value]:
    return {k: (INACTIVE if v is None else v) for k, v in data.items()}
