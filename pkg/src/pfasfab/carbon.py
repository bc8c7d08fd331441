"""Parameterized embodied-carbon estimate for one manufactured chip.

Only the relative lithography energy of the stack is stack-sensitive; all
other fab electricity folds into a per-area base term, and direct gas
emissions and materials procurement enter as per-area constants:

    embodied = area / yield
               * (ci * (energy_per_unit_litho * litho_energy + energy_per_area_base)
                  + gas_per_area + material_per_area)

All five parameters are required. The library ships no hidden defaults
because credible constants depend on the fab; an example profile is
provided with the CLI configs and is labeled as illustrative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .engine import DesignParams, StackMetrics
from .errors import DomainError


@dataclass(frozen=True)
class CarbonParams:
    carbon_intensity: float  # kg CO2e per kWh of fab electricity
    energy_per_unit_litho: float  # kWh per cm2 per unit of relative litho energy
    energy_per_area_base: float  # kWh per cm2, non-litho fab energy
    gas_per_area: float  # kg CO2e per cm2, direct gas emissions
    material_per_area: float  # kg CO2e per cm2, materials procurement

    def __post_init__(self):
        for name, value in (
            ("carbon_intensity", self.carbon_intensity),
            ("energy_per_unit_litho", self.energy_per_unit_litho),
            ("energy_per_area_base", self.energy_per_area_base),
            ("gas_per_area", self.gas_per_area),
            ("material_per_area", self.material_per_area),
        ):
            if not (math.isfinite(value) and value >= 0):
                raise DomainError(f"{name} must be finite and >= 0, got {value}")


@dataclass(frozen=True)
class CarbonResult:
    embodied_kg: float
    low_kg: float | None = None
    high_kg: float | None = None


def embodied_carbon(
    metrics: StackMetrics, design: DesignParams, params: CarbonParams
) -> CarbonResult:
    """Embodied kg CO2e for one good chip of the given stack and design."""
    per_cm2 = (
        params.carbon_intensity
        * (
            params.energy_per_unit_litho * metrics.total_litho_energy
            + params.energy_per_area_base
        )
        + params.gas_per_area
        + params.material_per_area
    )
    return CarbonResult(embodied_kg=design.area_cm2 / design.yield_fraction * per_cm2)


def carbon_band(
    metrics: StackMetrics,
    design: DesignParams,
    params: CarbonParams,
    ci_low: float,
    ci_high: float,
) -> CarbonResult:
    """Embodied carbon at the profile's nominal carbon intensity, plus the
    band spanned between a low and a high grid intensity."""
    if ci_low > ci_high:
        raise DomainError(f"inverted carbon-intensity band: {ci_low} > {ci_high}")
    if not (ci_low >= 0 and ci_high >= 0):
        raise DomainError("carbon-intensity band bounds must be >= 0")
    nominal = embodied_carbon(metrics, design, params)
    low = embodied_carbon(metrics, design, replace(params, carbon_intensity=ci_low))
    high = embodied_carbon(metrics, design, replace(params, carbon_intensity=ci_high))
    return CarbonResult(
        embodied_kg=nominal.embodied_kg,
        low_kg=low.embodied_kg,
        high_kg=high.embodied_kg,
    )
