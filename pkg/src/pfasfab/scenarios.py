"""Trade-off analyses over validated stacks.

Four scenario operations: two-stack comparison, routing-layer reduction
sweeps with optional power-grid retention, SoC composition under per-block
area overheads, and normalization of cross-node series to a reference node.
Each evaluation is a pure computation over immutable inputs, so scenarios
can run in parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .carbon import CarbonParams, CarbonResult, carbon_band, embodied_carbon
from .catalog import DEFAULT_CATALOG, DEFAULT_WEIGHTS, EnergyWeights, ProcessCatalog
from .engine import ChipPfas, DesignParams, StackMetrics, chip_pfas, stack_metrics
from .errors import DomainError, MissingOverheadError, TrendReferenceError, UnknownTargetError
from .stack import Region, StackSpec, beol_index, validate_stack


def _ratio(a: float, b: float) -> float | None:
    return a / b if b != 0 else None


@dataclass(frozen=True)
class ComparisonResult:
    """Stack-vs-stack ratios; ``a`` is conventionally the costlier baseline."""

    metrics_a: StackMetrics
    metrics_b: StackMetrics
    ratio_pfas: float | None
    ratio_litho_steps: float | None
    ratio_total_steps: float | None
    ratio_energy: float | None
    pfas_ratio_by_region: dict[Region, float | None]
    percent_reduction: float | None  # (pfas_a - pfas_b) / pfas_a, as a fraction


def compare_stacks(
    a: StackSpec,
    b: StackSpec,
    catalog: ProcessCatalog = DEFAULT_CATALOG,
    weights: EnergyWeights = DEFAULT_WEIGHTS,
) -> ComparisonResult:
    """Ratios and reductions of PFAS layers, steps, and litho energy.

    Ratios with a zero denominator are reported as absent (None) rather
    than raising; a region empty in stack ``b`` simply has no ratio.
    """
    validate_stack(a, catalog)
    validate_stack(b, catalog)
    ma = stack_metrics(a, catalog, weights)
    mb = stack_metrics(b, catalog, weights)
    return ComparisonResult(
        metrics_a=ma,
        metrics_b=mb,
        ratio_pfas=_ratio(ma.total_pfas_layers, mb.total_pfas_layers),
        ratio_litho_steps=_ratio(ma.total_litho_steps, mb.total_litho_steps),
        ratio_total_steps=_ratio(ma.total_steps.total(), mb.total_steps.total()),
        ratio_energy=_ratio(ma.total_litho_energy, mb.total_litho_energy),
        pfas_ratio_by_region={
            region: _ratio(ma.by_region[region], mb.by_region[region])
            for region in Region
        },
        percent_reduction=(
            (ma.total_pfas_layers - mb.total_pfas_layers) / ma.total_pfas_layers
            if ma.total_pfas_layers != 0
            else None
        ),
    )


@dataclass(frozen=True)
class SweepPoint:
    top_routing_layer: str | None
    stack: StackSpec
    metrics: StackMetrics
    chip: ChipPfas | None = None
    carbon: CarbonResult | None = None


def _truncate_beol(stack: StackSpec, top_index: int | None, retain_power_grid: bool) -> StackSpec:
    """Drop BEOL routing layers above ``top_index``; power-grid layers are
    kept verbatim when retention is on and dropped entirely otherwise."""
    kept = []
    for layer in stack.layers:
        if layer.region is not Region.BEOL:
            kept.append(layer)
        elif layer.is_power_grid:
            if retain_power_grid:
                kept.append(layer)
        elif top_index is not None and beol_index(layer.name) <= top_index:
            kept.append(layer)
    return StackSpec(technology_node=stack.technology_node, layers=tuple(kept))


def _resolve_target(stack: StackSpec, target: str) -> int:
    names = [l.name for l in stack.beol_layers()]
    if target not in names:
        raise UnknownTargetError(
            f"target {target!r} is not a BEOL layer of {stack.technology_node}; "
            f"BEOL layers: {', '.join(names)}"
        )
    return beol_index(target)


def sweep_beol(
    stack: StackSpec,
    targets: Sequence[str],
    retain_power_grid: bool = False,
    catalog: ProcessCatalog = DEFAULT_CATALOG,
    weights: EnergyWeights = DEFAULT_WEIGHTS,
    design: DesignParams | None = None,
    carbon_params: CarbonParams | None = None,
    ci_band: tuple[float, float] | None = None,
) -> list[SweepPoint]:
    """Evaluate the stack capped at each target routing layer.

    The first point is the baseline: the stack capped at its own topmost
    routing layer, which with power-grid retention on is the unmodified
    stack. Target points follow in descending layer order. Chip scaling
    and carbon are filled in when ``design`` / ``carbon_params`` are given.
    """
    validate_stack(stack, catalog)

    def point(label: str | None, top_index: int | None) -> SweepPoint:
        variant = _truncate_beol(stack, top_index, retain_power_grid)
        metrics = stack_metrics(variant, catalog, weights)
        chip = chip_pfas(metrics, design) if design is not None else None
        carbon = None
        if carbon_params is not None and design is not None:
            if ci_band is not None:
                carbon = carbon_band(metrics, design, carbon_params, *ci_band)
            else:
                carbon = embodied_carbon(metrics, design, carbon_params)
        return SweepPoint(label, variant, metrics, chip, carbon)

    top = stack.top_routing_layer()
    points = [point(top, beol_index(top) if top is not None else None)]
    resolved = {target: _resolve_target(stack, target) for target in targets}
    for target in sorted(resolved, key=resolved.get, reverse=True):
        points.append(point(target, resolved[target]))
    return points


@dataclass(frozen=True)
class SocBlock:
    """One SoC block: its area, the top layer its routing needs, and the
    measured area-overhead factors for constraining it below that layer."""

    name: str
    baseline_area_cm2: float
    required_top_layer: str
    area_overhead: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not (math.isfinite(self.baseline_area_cm2) and self.baseline_area_cm2 > 0):
            raise DomainError(
                f"block {self.name!r}: baseline_area_cm2 must be finite and > 0, "
                f"got {self.baseline_area_cm2}"
            )
        if beol_index(self.required_top_layer) is None:
            raise DomainError(
                f"block {self.name!r}: required_top_layer must be a BEOL label M<k>, "
                f"got {self.required_top_layer!r}"
            )
        for target, factor in self.area_overhead.items():
            if not (math.isfinite(factor) and factor >= 1):
                raise DomainError(
                    f"block {self.name!r}: overhead factor for {target} must be finite "
                    f"and >= 1, got {factor}"
                )

    def overhead_factor(self, target: str) -> float:
        target_index = beol_index(target)
        if target_index is None:
            raise DomainError(f"target must be a BEOL label M<k>, got {target!r}")
        if target_index >= beol_index(self.required_top_layer):
            return 1.0
        try:
            return float(self.area_overhead[target])
        except KeyError:
            raise MissingOverheadError(
                f"block {self.name!r} has no area-overhead factor for target {target} "
                f"(requires {self.required_top_layer})"
            ) from None


@dataclass(frozen=True)
class SocBlockResult:
    block: SocBlock
    overhead_factor: float
    constrained_area_cm2: float


@dataclass(frozen=True)
class SocReport:
    target_top: str
    retain_power_grid: bool
    blocks: tuple[SocBlockResult, ...]
    baseline_metrics: StackMetrics
    constrained_metrics: StackMetrics
    baseline_area_cm2: float
    constrained_area_cm2: float
    area_increase: float  # fractional, (constrained - baseline) / baseline
    baseline_chip: ChipPfas
    constrained_chip: ChipPfas
    pfas_layer_ratio: float | None
    chip_pfas_ratio: float | None
    baseline_carbon: CarbonResult | None = None
    constrained_carbon: CarbonResult | None = None


def compose_soc(
    blocks: Sequence[SocBlock],
    chip_stack: StackSpec,
    target_top: str,
    retain_power_grid: bool = True,
    design: DesignParams | None = None,
    catalog: ProcessCatalog = DEFAULT_CATALOG,
    weights: EnergyWeights = DEFAULT_WEIGHTS,
    carbon_params: CarbonParams | None = None,
    ci_band: tuple[float, float] | None = None,
) -> SocReport:
    """Constrain every block of an SoC to route at or below ``target_top``.

    Masks pattern the whole die, so the chip uses a single stack capped at
    the highest layer any block still needs after the constraint; blocks
    forced below their required top pay their tabulated area-overhead
    factor. Chip areas come from the blocks; ``design`` supplies the yield
    (its area, if any, is ignored here).
    """
    if not blocks:
        raise DomainError("compose_soc requires at least one block")
    validate_stack(chip_stack, catalog)
    target_index = _resolve_target(chip_stack, target_top)
    yield_fraction = design.yield_fraction if design is not None else 1.0

    block_results = []
    chip_top_index = 0
    for block in blocks:
        factor = block.overhead_factor(target_top)
        block_results.append(
            SocBlockResult(
                block=block,
                overhead_factor=factor,
                constrained_area_cm2=block.baseline_area_cm2 * factor,
            )
        )
        chip_top_index = max(
            chip_top_index, min(beol_index(block.required_top_layer), target_index)
        )

    baseline_area = sum(b.baseline_area_cm2 for b in blocks)
    constrained_area = sum(r.constrained_area_cm2 for r in block_results)
    constrained_stack = _truncate_beol(chip_stack, chip_top_index, retain_power_grid)

    baseline_metrics = stack_metrics(chip_stack, catalog, weights)
    constrained_metrics = stack_metrics(constrained_stack, catalog, weights)
    baseline_design = DesignParams(baseline_area, yield_fraction)
    constrained_design = DesignParams(constrained_area, yield_fraction)
    baseline_chip = chip_pfas(baseline_metrics, baseline_design)
    constrained_chip = chip_pfas(constrained_metrics, constrained_design)

    baseline_carbon = constrained_carbon = None
    if carbon_params is not None:
        if ci_band is not None:
            baseline_carbon = carbon_band(baseline_metrics, baseline_design, carbon_params, *ci_band)
            constrained_carbon = carbon_band(constrained_metrics, constrained_design, carbon_params, *ci_band)
        else:
            baseline_carbon = embodied_carbon(baseline_metrics, baseline_design, carbon_params)
            constrained_carbon = embodied_carbon(constrained_metrics, constrained_design, carbon_params)

    return SocReport(
        target_top=target_top,
        retain_power_grid=retain_power_grid,
        blocks=tuple(block_results),
        baseline_metrics=baseline_metrics,
        constrained_metrics=constrained_metrics,
        baseline_area_cm2=baseline_area,
        constrained_area_cm2=constrained_area,
        area_increase=(constrained_area - baseline_area) / baseline_area,
        baseline_chip=baseline_chip,
        constrained_chip=constrained_chip,
        pfas_layer_ratio=_ratio(
            baseline_metrics.total_pfas_layers, constrained_metrics.total_pfas_layers
        ),
        chip_pfas_ratio=_ratio(baseline_chip.value, constrained_chip.value),
        baseline_carbon=baseline_carbon,
        constrained_carbon=constrained_carbon,
    )


@dataclass(frozen=True)
class TrendSeries:
    """Ordered (node label, value) pairs, optionally normalized to a node."""

    points: tuple[tuple[str, float], ...]
    reference: str | None = None

    def __post_init__(self):
        object.__setattr__(
            self, "points", tuple((str(n), float(v)) for n, v in self.points)
        )
        labels = [n for n, _ in self.points]
        if len(labels) != len(set(labels)):
            raise DomainError("trend series has duplicate node labels")
        for node, value in self.points:
            if not math.isfinite(value):
                raise DomainError(f"trend value for {node!r} must be finite, got {value}")

    def values(self) -> dict[str, float]:
        return dict(self.points)


def normalize_trend(series: TrendSeries, reference: str) -> TrendSeries:
    """Divide every value by the reference node's value.

    The reference node maps to exactly 1.0, which also makes the operation
    idempotent for a fixed reference.
    """
    values = series.values()
    if reference not in values:
        raise TrendReferenceError(
            f"reference node {reference!r} not in series; nodes: "
            + ", ".join(values)
        )
    ref_value = values[reference]
    if ref_value == 0:
        raise TrendReferenceError(f"reference node {reference!r} has value 0")
    return TrendSeries(
        points=tuple(
            (node, 1.0 if node == reference else value / ref_value)
            for node, value in series.points
        ),
        reference=reference,
    )
