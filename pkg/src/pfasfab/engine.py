"""Aggregation of per-layer mask counts into stack-level and chip-level totals.

The chip-level PFAS figure is a proxy in units of PFAS-containing-layer x
cm2: mask applications scaled by die area over yield. It is deliberately
not a chemical mass; per-layer chemical quantification is an open
measurement problem and the library never reports kilograms of PFAS.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .catalog import (
    DEFAULT_CATALOG,
    DEFAULT_WEIGHTS,
    EnergyWeights,
    ExposureClass,
    ProcessCatalog,
    StepCounts,
)
from .errors import DomainError
from .stack import LayerMetrics, Region, StackSpec, derive_layer_metrics


@dataclass(frozen=True)
class DesignParams:
    """Die area and fab yield used to scale stack counts to one good chip."""

    area_cm2: float
    yield_fraction: float

    def __post_init__(self):
        if not (math.isfinite(self.area_cm2) and self.area_cm2 > 0):
            raise DomainError(f"area_cm2 must be finite and > 0, got {self.area_cm2}")
        if not 0 < self.yield_fraction <= 1:
            raise DomainError(
                f"yield must be within (0, 1] (the 0 - 1 range with zero excluded), "
                f"got {self.yield_fraction}"
            )


@dataclass(frozen=True)
class StackMetrics:
    technology_node: str
    total_pfas_layers: int
    by_region: dict[Region, int]
    by_exposure: dict[ExposureClass, int]
    total_steps: StepCounts
    total_litho_steps: int
    total_litho_energy: float
    per_layer: tuple[LayerMetrics, ...]

    @property
    def euv_masks(self) -> int:
        return self.by_exposure[ExposureClass.EUV]

    @property
    def duv_masks(self) -> int:
        return (
            self.by_exposure[ExposureClass.DUV_DRY]
            + self.by_exposure[ExposureClass.DUV_IMMERSION]
        )


@dataclass(frozen=True)
class ChipPfas:
    """PFAS proxy for one chip, with the inputs echoed."""

    value: float  # PFAS-containing layers x cm2 per good die
    stack: str
    area_cm2: float
    yield_fraction: float


def stack_metrics(
    stack: StackSpec,
    catalog: ProcessCatalog = DEFAULT_CATALOG,
    weights: EnergyWeights = DEFAULT_WEIGHTS,
) -> StackMetrics:
    """Totals and FEOL/MOL/BEOL and exposure-class breakdowns for a stack."""
    per_layer = []
    by_region = {region: 0 for region in Region}
    by_exposure = {exposure: 0 for exposure in ExposureClass}
    total_steps = StepCounts()
    litho_energy = 0.0
    for layer in stack.layers:
        metrics = derive_layer_metrics(layer, catalog, weights)
        per_layer.append(metrics)
        by_region[layer.region] += metrics.pfas_layers
        for pid in layer.process_ids():
            proc = catalog.lookup(pid)
            by_exposure[proc.exposure] += proc.masks
        total_steps = total_steps + metrics.total_steps
        litho_energy += metrics.litho_energy
    return StackMetrics(
        technology_node=stack.technology_node,
        total_pfas_layers=sum(by_region.values()),
        by_region=by_region,
        by_exposure=by_exposure,
        total_steps=total_steps,
        total_litho_steps=total_steps.litho,
        total_litho_energy=litho_energy,
        per_layer=tuple(per_layer),
    )


def chip_pfas(metrics: StackMetrics, design: DesignParams) -> ChipPfas:
    """Scale stack PFAS layers to one good chip: layers x area / yield."""
    return ChipPfas(
        value=metrics.total_pfas_layers * design.area_cm2 / design.yield_fraction,
        stack=metrics.technology_node,
        area_cm2=design.area_cm2,
        yield_fraction=design.yield_fraction,
    )


def step_totals(stack: StackSpec, catalog: ProcessCatalog = DEFAULT_CATALOG) -> StepCounts:
    """Category-wise step sums over every layer's metal and via processes."""
    total = StepCounts()
    for layer in stack.layers:
        for pid in layer.process_ids():
            total = total + catalog.lookup(pid).steps
    return total
