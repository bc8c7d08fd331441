"""Design-time model of PFAS-containing lithography layers, fabrication
steps, relative litho energy, and embodied carbon for IC metal stacks."""

__version__ = "0.1.0"

from .catalog import (
    BUILTIN_PROCESSES,
    DEFAULT_CATALOG,
    DEFAULT_WEIGHTS,
    EnergyWeights,
    ExposureClass,
    ProcessCatalog,
    ProcessClass,
    StepCounts,
    lookup_process,
    mask_energy,
    register_process,
)
from .stack import (
    LayerMetrics,
    LayerSpec,
    Region,
    StackSpec,
    Violation,
    asap7_preset,
    beol_index,
    derive_layer_metrics,
    n7_fixture,
    stack_violations,
    validate_stack,
)
from .engine import (
    ChipPfas,
    DesignParams,
    StackMetrics,
    chip_pfas,
    stack_metrics,
    step_totals,
)
from .carbon import CarbonParams, CarbonResult, carbon_band, embodied_carbon
from .scenarios import (
    ComparisonResult,
    SocBlock,
    SocReport,
    SweepPoint,
    TrendSeries,
    compare_stacks,
    compose_soc,
    normalize_trend,
    sweep_beol,
)
from .config import (
    PRESETS,
    ConfigDocument,
    load_stack_document,
    parse_carbon_profile,
    parse_config,
    stack_to_dict,
)
from .errors import (
    ConfigError,
    DomainError,
    InvalidProcessError,
    MissingOverheadError,
    PfasfabError,
    ProcessCollisionError,
    StackValidationError,
    TrendReferenceError,
    UnknownProcessError,
    UnknownTargetError,
)

__all__ = [
    "BUILTIN_PROCESSES",
    "DEFAULT_CATALOG",
    "DEFAULT_WEIGHTS",
    "PRESETS",
    "CarbonParams",
    "CarbonResult",
    "ChipPfas",
    "ComparisonResult",
    "ConfigDocument",
    "ConfigError",
    "DesignParams",
    "DomainError",
    "EnergyWeights",
    "ExposureClass",
    "InvalidProcessError",
    "LayerMetrics",
    "LayerSpec",
    "MissingOverheadError",
    "PfasfabError",
    "ProcessCatalog",
    "ProcessClass",
    "ProcessCollisionError",
    "Region",
    "SocBlock",
    "SocReport",
    "StackMetrics",
    "StackSpec",
    "StackValidationError",
    "StepCounts",
    "SweepPoint",
    "TrendReferenceError",
    "TrendSeries",
    "UnknownProcessError",
    "UnknownTargetError",
    "Violation",
    "asap7_preset",
    "beol_index",
    "carbon_band",
    "chip_pfas",
    "compare_stacks",
    "compose_soc",
    "derive_layer_metrics",
    "embodied_carbon",
    "load_stack_document",
    "lookup_process",
    "mask_energy",
    "n7_fixture",
    "normalize_trend",
    "parse_carbon_profile",
    "parse_config",
    "register_process",
    "stack_metrics",
    "stack_to_dict",
    "stack_violations",
    "step_totals",
    "sweep_beol",
    "validate_stack",
]
