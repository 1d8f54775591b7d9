"""Interval-sensitive measures evaluated on (core, window) pairs.

A measure declares how its value reacts to changing the query window while
the core stays fixed: `insensitive` values never change, `monotonic` values
only improve toward one end (shrinking or expanding the window), and
`nonmonotonic` values carry no guarantee.  The search strategies pick their
evaluation schedule from that declaration, so a mislabeled measure produces
wrong answers; `check_measure_sensitivity` spot-checks a declaration on
real zones.

Values are exact: plain ints or `fractions.Fraction`.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Mapping

from .graph import ContractViolation, CoreSnapshot, TemporalGraph, TimeInterval

SENSITIVITIES = ("insensitive", "monotonic", "nonmonotonic")
DIRECTIONS = ("shrink", "expand")


class UndefinedMeasureValue(ValueError):
    """The measure has no value here (for instance, on an empty core)."""


class MeasureValueError(TypeError):
    """Measure values could not be compared."""


@dataclass(frozen=True)
class EvalContext:
    """Read-only handles an evaluator may need beyond the core itself."""

    graph: TemporalGraph | None = None
    zone: object | None = None
    all_zones: tuple | None = None
    params: Mapping = field(default_factory=dict)

    def with_zone(self, zone) -> "EvalContext":
        return replace(self, zone=zone)


@dataclass(frozen=True)
class MeasureDescriptor:
    name: str
    sensitivity: str
    better: str  # "higher" | "lower"
    evaluator: Callable[[CoreSnapshot, TimeInterval, EvalContext], object]
    improves_on: str | None = None  # shrink | expand, monotonic only
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.sensitivity not in SENSITIVITIES:
            raise ValueError(f"unknown sensitivity: {self.sensitivity!r}")
        if self.better not in ("higher", "lower"):
            raise ValueError(f"better must be 'higher' or 'lower', got {self.better!r}")
        if self.sensitivity == "monotonic":
            if self.improves_on not in DIRECTIONS:
                raise ValueError("monotonic measures must declare improves_on shrink|expand")
        elif self.improves_on is not None:
            raise ValueError("improves_on only applies to monotonic measures")

    def with_params(self, **params) -> "MeasureDescriptor":
        merged = dict(self.params)
        merged.update(params)
        return replace(self, params=merged)


def evaluate(measure: MeasureDescriptor, core: CoreSnapshot, window, ctx: EvalContext):
    if core.is_empty:
        raise UndefinedMeasureValue(f"{measure.name} is undefined on an empty core")
    return measure.evaluator(core, TimeInterval(*window), ctx)


def compare(measure: MeasureDescriptor, a, b) -> str:
    """Orient `a` against `b`: 'better', 'equal', or 'worse'."""
    try:
        if a == b:
            return "equal"
        bigger = a > b
    except TypeError as exc:
        raise MeasureValueError(f"cannot compare {a!r} with {b!r}") from exc
    if measure.better == "higher":
        return "better" if bigger else "worse"
    return "worse" if bigger else "better"


def satisfies(measure: MeasureDescriptor, value, sigma) -> bool:
    """True when `value` is no worse than the threshold `sigma`."""
    return compare(measure, value, sigma) != "worse"


# -- built-in evaluators ------------------------------------------------


def _require_zone(ctx, name):
    if ctx.zone is None:
        raise ContractViolation(f"{name} needs the zone record in the context")
    return ctx.zone


def _size(core, w, ctx):
    return len(core.vertices)


def _frequency(core, w, ctx):
    return min(core.pair_counts.values())


def _time_span(core, w, ctx):
    return core.tti.te - core.tti.ts


def _persistence(core, w, ctx):
    zone = _require_zone(ctx, "persistence")
    base = zone.tti.span
    return max(lti.span - base for lti in zone.ltis)


def _periodicity(core, w, ctx):
    if ctx.all_zones is None:
        raise ContractViolation("periodicity needs the full zone list in the context")
    gap = ctx.params.get("p", 1)
    ttis = sorted(
        (z.tti for z in ctx.all_zones if z.core.vertices == core.vertices),
        key=lambda iv: iv.te,
    )
    count = 0
    last_end = None
    for tti in ttis:
        if last_end is None or tti.ts - last_end >= gap:
            count += 1
            last_end = tti.te
    return count


def _growth_rate(core, w, ctx):
    return Fraction(len(core.vertices), w.duration)


def _burstiness(core, w, ctx):
    return Fraction(2 * len(core.pair_counts), w.duration)


def _engagement(core, w, ctx):
    if ctx.graph is None:
        raise ContractViolation("engagement needs the source graph in the context")
    ambient: dict = defaultdict(set)
    for u, v, t in ctx.graph.edges:
        if w.ts <= t <= w.te:
            ambient[u].add(v)
            ambient[v].add(u)
    return min(
        Fraction(len(core.neighbors(v)), len(ambient[v])) for v in sorted(core.vertices)
    )


BUILTIN_MEASURES = (
    MeasureDescriptor("size", "insensitive", "lower", _size),
    MeasureDescriptor("frequency", "insensitive", "higher", _frequency),
    MeasureDescriptor("time_span", "insensitive", "lower", _time_span),
    MeasureDescriptor("persistence", "insensitive", "higher", _persistence),
    MeasureDescriptor("periodicity", "insensitive", "higher", _periodicity, params={"p": 1}),
    MeasureDescriptor("growth_rate", "monotonic", "higher", _growth_rate, improves_on="shrink"),
    MeasureDescriptor("burstiness", "monotonic", "higher", _burstiness, improves_on="shrink"),
    MeasureDescriptor("engagement", "monotonic", "higher", _engagement, improves_on="shrink"),
)

_REGISTRY: dict[str, MeasureDescriptor] = {m.name: m for m in BUILTIN_MEASURES}


def get_measure(name: str) -> MeasureDescriptor:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown measure: {name!r}") from None


def list_measures() -> list[str]:
    return sorted(_REGISTRY)


def register_udf(measure: MeasureDescriptor) -> None:
    """Register a user-defined measure; names are single-assignment."""
    if measure.name in _REGISTRY:
        raise ValueError(f"measure {measure.name!r} is already registered")
    _REGISTRY[measure.name] = measure


def check_measure_sensitivity(
    measure: MeasureDescriptor,
    graph: TemporalGraph,
    zones,
    *,
    rng: random.Random,
    samples: int = 200,
) -> list[str]:
    """Sample nested same-zone window pairs and report any observation that
    contradicts the measure's declared sensitivity."""
    from .txcq import zone_member_intervals

    violations = []
    candidates = [z for z in zones if len(zone_member_intervals(z)) >= 2]
    if not candidates:
        return violations
    base = EvalContext(graph=graph, all_zones=tuple(zones), params=dict(measure.params))
    for _ in range(samples):
        zone = rng.choice(candidates)
        members = zone_member_intervals(zone)
        outer = rng.choice(members)
        inner_options = [m for m in members if m != outer and outer.contains(m)]
        if not inner_options:
            continue
        inner = rng.choice(inner_options)
        ctx = base.with_zone(zone)
        inner_val = evaluate(measure, zone.core, inner, ctx)
        outer_val = evaluate(measure, zone.core, outer, ctx)
        rel = compare(measure, inner_val, outer_val)
        if measure.sensitivity == "insensitive":
            if rel != "equal":
                violations.append(
                    f"{measure.name}: value changed {outer_val} -> {inner_val} "
                    f"between {tuple(outer)} and nested {tuple(inner)}"
                )
        elif measure.sensitivity == "monotonic":
            bad = "worse" if measure.improves_on == "shrink" else "better"
            if rel == bad:
                violations.append(
                    f"{measure.name}: declared improves-on-{measure.improves_on} but "
                    f"{tuple(inner)} inside {tuple(outer)} went {rel} "
                    f"({outer_val} -> {inner_val})"
                )
    return violations
