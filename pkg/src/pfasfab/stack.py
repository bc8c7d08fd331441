"""Layer and stack schema for fabricated metal stacks, plus built-in stacks.

A stack lists fabricated layers bottom-up through the transistor front end
(FEOL), the local-interconnect middle (MOL), and the metal routing back end
(BEOL). Each layer names the patterning process used for its lines and,
where applicable, for its vias; per-layer mask counts, step counts, and
relative litho energy all derive from the process catalog, so pitch is
descriptive metadata only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from enum import Enum

from .catalog import (
    DEFAULT_CATALOG,
    DEFAULT_WEIGHTS,
    EnergyWeights,
    ProcessCatalog,
    StepCounts,
)
from .errors import StackValidationError

TAG_ROUTING = "routing"
TAG_POWER_GRID = "power_grid"
KNOWN_TAGS = frozenset({TAG_ROUTING, TAG_POWER_GRID})


class Region(Enum):
    FEOL = "FEOL"
    MOL = "MOL"
    BEOL = "BEOL"

    @property
    def rank(self) -> int:
        return _REGION_RANK[self]


_REGION_RANK = {Region.FEOL: 0, Region.MOL: 1, Region.BEOL: 2}

_BEOL_NAME = re.compile(r"M([1-9][0-9]*)\Z")


def beol_index(name: str) -> int | None:
    """Metal index k for a BEOL layer named M<k>, else None."""
    m = _BEOL_NAME.fullmatch(name)
    return int(m.group(1)) if m else None


@dataclass(frozen=True)
class LayerSpec:
    """One fabricated layer; via-only layers leave metal_process unset."""

    name: str
    region: Region
    pitch_nm: float | None = None
    metal_process: str | None = None
    via_process: str | None = None
    tags: frozenset[str] = frozenset()

    def process_ids(self) -> tuple[str, ...]:
        return tuple(p for p in (self.metal_process, self.via_process) if p is not None)

    @property
    def is_power_grid(self) -> bool:
        return TAG_POWER_GRID in self.tags


@dataclass(frozen=True)
class StackSpec:
    """Ordered full stack: FEOL first, then MOL, then BEOL bottom-up."""

    technology_node: str
    layers: tuple[LayerSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))

    def names(self) -> tuple[str, ...]:
        return tuple(layer.name for layer in self.layers)

    def layer(self, name: str) -> LayerSpec:
        for layer in self.layers:
            if layer.name == name:
                return layer
        raise KeyError(name)

    def beol_layers(self) -> tuple[LayerSpec, ...]:
        return tuple(l for l in self.layers if l.region is Region.BEOL)

    def routing_beol_layers(self) -> tuple[LayerSpec, ...]:
        return tuple(l for l in self.beol_layers() if not l.is_power_grid)

    def top_routing_layer(self) -> str | None:
        routing = self.routing_beol_layers()
        return routing[-1].name if routing else None


@dataclass(frozen=True)
class Violation:
    layer: str
    rule: str
    message: str


@dataclass(frozen=True)
class LayerMetrics:
    """Derived counts for one layer, summed over its metal and via processes."""

    name: str
    litho_steps: int
    total_steps: StepCounts
    masks: int
    pfas_layers: int
    litho_energy: float


def stack_violations(stack: StackSpec, catalog: ProcessCatalog = DEFAULT_CATALOG) -> list[Violation]:
    """Collect every invariant violation in the stack, empty when valid."""
    violations: list[Violation] = []
    seen: set[str] = set()
    max_rank = 0
    prev_beol_index: int | None = None

    for layer in stack.layers:
        if layer.name in seen:
            violations.append(
                Violation(layer.name, "duplicate-name", "layer name appears more than once")
            )
        seen.add(layer.name)

        if layer.region.rank < max_rank:
            violations.append(
                Violation(
                    layer.name,
                    "region-order",
                    f"{layer.region.value} layer appears after a later region",
                )
            )
        max_rank = max(max_rank, layer.region.rank)

        if not layer.process_ids():
            violations.append(
                Violation(layer.name, "missing-process", "neither metal_process nor via_process is set")
            )
        for pid in layer.process_ids():
            if pid not in catalog:
                violations.append(
                    Violation(
                        layer.name,
                        "unknown-process",
                        f"process {pid!r} not in catalog ({', '.join(catalog.ids())})",
                    )
                )

        if layer.pitch_nm is not None and not layer.pitch_nm > 0:
            violations.append(
                Violation(layer.name, "bad-pitch", f"pitch_nm must be > 0, got {layer.pitch_nm}")
            )

        if layer.region is Region.BEOL:
            idx = beol_index(layer.name)
            if idx is None:
                violations.append(
                    Violation(layer.name, "beol-name", "BEOL layers must be named M<k> with k >= 1")
                )
            else:
                if prev_beol_index is not None and idx <= prev_beol_index:
                    violations.append(
                        Violation(
                            layer.name,
                            "beol-order",
                            f"BEOL index {idx} does not exceed previous index {prev_beol_index}",
                        )
                    )
                prev_beol_index = idx

    return violations


def validate_stack(stack: StackSpec, catalog: ProcessCatalog = DEFAULT_CATALOG) -> StackSpec:
    """Return the stack unchanged if valid, else raise with all violations."""
    violations = stack_violations(stack, catalog)
    if violations:
        raise StackValidationError(violations)
    return stack


def derive_layer_metrics(
    layer: LayerSpec,
    catalog: ProcessCatalog = DEFAULT_CATALOG,
    weights: EnergyWeights = DEFAULT_WEIGHTS,
) -> LayerMetrics:
    """Masks, steps, and relative litho energy for one layer.

    The PFAS-containing-layer count of a layer equals its total mask count:
    an absent metal or via process contributes nothing.
    """
    steps = StepCounts()
    masks = 0
    energy = 0.0
    for pid in layer.process_ids():
        proc = catalog.lookup(pid)
        steps = steps + proc.steps
        masks += proc.masks
        energy += proc.masks * weights.per_mask(proc.exposure)
    return LayerMetrics(
        name=layer.name,
        litho_steps=steps.litho,
        total_steps=steps,
        masks=masks,
        pfas_layers=masks,
        litho_energy=energy,
    )


def _feol(name, pitch, metal):
    return LayerSpec(name, Region.FEOL, pitch_nm=pitch, metal_process=metal)


def _mol(name, pitch, metal=None, via=None):
    return LayerSpec(name, Region.MOL, pitch_nm=pitch, metal_process=metal, via_process=via)


def _beol(name, pitch, metal, via, tag):
    return LayerSpec(
        name, Region.BEOL, pitch_nm=pitch, metal_process=metal, via_process=via,
        tags=frozenset({tag}),
    )


def asap7_preset() -> StackSpec:
    """Sixteen-layer 7 nm stack modeled on the academic ASAP7 PDK.

    SAQP fins and SADP gates with EUV single exposure elsewhere in the
    front end and local interconnect; M1-M3 pattern metal and vias with
    EUV, M4-M7 pair SADP metals with immersion LE-2 vias, and M8-M9 are
    relaxed-pitch single-exposure power-grid metals. FEOL doping masks are
    not modeled; add extra FEOL layers to account for them if needed.
    """
    return StackSpec(
        technology_node="7nm-ASAP7",
        layers=(
            _feol("Fin", 27, "ArFi_SAQP"),
            _feol("Active", 108, "EUV_LE"),
            _feol("Gate", 54, "ArFi_SADP"),
            _feol("SDT", 54, "EUV_LE"),
            _mol("LISD", 54, metal="EUV_LE"),
            _mol("LIG", 54, metal="EUV_LE"),
            _mol("VIA0", 25, via="EUV_LE"),
            _beol("M1", 36, "EUV_LE", "EUV_LE", TAG_ROUTING),
            _beol("M2", 36, "EUV_LE", "EUV_LE", TAG_ROUTING),
            _beol("M3", 36, "EUV_LE", "EUV_LE", TAG_ROUTING),
            _beol("M4", 48, "ArFi_SADP", "ArFi_LE2", TAG_ROUTING),
            _beol("M5", 48, "ArFi_SADP", "ArFi_LE2", TAG_ROUTING),
            _beol("M6", 64, "ArFi_SADP", "ArFi_LE2", TAG_ROUTING),
            _beol("M7", 64, "ArFi_SADP", "ArFi_LE2", TAG_ROUTING),
            _beol("M8", 80, "ArFi_LE", "ArFi_LE", TAG_POWER_GRID),
            _beol("M9", 80, "ArFi_LE", "ArFi_LE", TAG_POWER_GRID),
        ),
    )


# Immersion-DUV substitutions applied to the EUV layers of the 7 nm stack.
# Values are (metal_process, via_process); None leaves the slot unchanged.
_N7_DUV_SUBSTITUTIONS = {
    "Active": ("ArFi_LE2", None),
    "SDT": ("ArFi_LE2", None),
    "LISD": ("ArFi_LE2", None),
    "LIG": ("ArFi_LE", None),
    "VIA0": (None, "ArFi_LE2"),
    "M1": ("ArFi_SADP", "ArFi_LE2"),
    "M2": ("ArFi_SADP", "ArFi_LE2"),
    "M3": ("ArFi_SADP", "ArFi_LE2"),
}


def n7_fixture(variant: str) -> StackSpec:
    """7 nm comparison stacks: ``euv`` is the ASAP7 preset, ``duv`` swaps
    every EUV exposure for an immersion multi-patterning equivalent.

    The DUV composition is a documented reconstruction for EUV-vs-DUV
    comparisons at the same metal stack, not a published foundry flow.
    """
    if variant == "euv":
        return asap7_preset()
    if variant != "duv":
        raise ValueError(f"variant must be 'euv' or 'duv', got {variant!r}")
    layers = []
    for layer in asap7_preset().layers:
        sub = _N7_DUV_SUBSTITUTIONS.get(layer.name)
        if sub is not None:
            metal, via = sub
            layers.append(
                replace(
                    layer,
                    metal_process=metal if metal is not None else layer.metal_process,
                    via_process=via if via is not None else layer.via_process,
                )
            )
        else:
            layers.append(layer)
    return StackSpec(technology_node="7nm-DUV", layers=tuple(layers))
