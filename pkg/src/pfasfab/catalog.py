"""Catalog of patterning process classes.

Each process class records how many fabrication steps of each category a
single patterned line requires, how many masks (exposure passes) it
consumes, and whether those exposures are EUV or DUV. Mask count doubles as
the PFAS-containing-layer count of the process, since every exposure pass
applies a fresh coat of PFAS-bearing resist chemistry, and the exposure
class drives the relative lithography energy weighting.

The nine built-in processes cover the common single- and multi-patterning
flows (dry/immersion ArF litho-etch up to LE-4, spacer-based SADP/SAQP, and
EUV single/self-aligned double exposure). User-defined processes can be
registered into a catalog instance without touching the built-ins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

from .errors import InvalidProcessError, ProcessCollisionError, UnknownProcessError


class ExposureClass(Enum):
    """Exposure tool family used by a patterning process."""

    DUV_DRY = "DUV_DRY"  # 193 nm ArF, dry
    DUV_IMMERSION = "DUV_IMMERSION"  # 193 nm ArF, water immersion
    EUV = "EUV"  # 13.5 nm

    @property
    def is_euv(self) -> bool:
        return self is ExposureClass.EUV


@dataclass(frozen=True)
class StepCounts:
    """Fabrication step counts by category for one patterned line."""

    dry_etch: int = 0
    litho: int = 0
    metallization: int = 0
    metrology: int = 0
    wet_etch: int = 0
    deposition: int = 0

    def __post_init__(self):
        for name, value in self.as_dict().items():
            if value < 0:
                raise InvalidProcessError(
                    f"step count {name} must be >= 0, got {value}"
                )

    def as_dict(self) -> dict[str, int]:
        return {
            "dry_etch": self.dry_etch,
            "litho": self.litho,
            "metallization": self.metallization,
            "metrology": self.metrology,
            "wet_etch": self.wet_etch,
            "deposition": self.deposition,
        }

    def total(self) -> int:
        return sum(self.as_dict().values())

    def __add__(self, other: "StepCounts") -> "StepCounts":
        return StepCounts(
            self.dry_etch + other.dry_etch,
            self.litho + other.litho,
            self.metallization + other.metallization,
            self.metrology + other.metrology,
            self.wet_etch + other.wet_etch,
            self.deposition + other.deposition,
        )


@dataclass(frozen=True)
class ProcessClass:
    """A named patterning process: step counts, masks, exposure class."""

    id: str
    steps: StepCounts
    masks: int
    exposure: ExposureClass

    def __post_init__(self):
        if self.masks < 1:
            raise InvalidProcessError(
                f"process {self.id!r}: masks must be >= 1, got {self.masks}"
            )


@dataclass(frozen=True)
class EnergyWeights:
    """Relative lithography energy per mask, by exposure class.

    An EUV exposure tool draws roughly ten times the power of a DUV tool,
    so the defaults weight each EUV mask 10 and each DUV mask 1. Dry ArF
    carries the DUV weight; no separate figure is modeled for it.
    """

    per_euv_mask: float = 10.0
    per_duv_mask: float = 1.0

    def __post_init__(self):
        for value in (self.per_euv_mask, self.per_duv_mask):
            if not (math.isfinite(value) and value > 0):
                raise InvalidProcessError(f"energy weights must be finite and > 0, got {value}")

    def per_mask(self, exposure: ExposureClass) -> float:
        return self.per_euv_mask if exposure.is_euv else self.per_duv_mask


DEFAULT_WEIGHTS = EnergyWeights()


def _proc(pid, dry, litho, metal, metr, wet, dep, masks, exposure):
    return ProcessClass(pid, StepCounts(dry, litho, metal, metr, wet, dep), masks, exposure)


_DRY = ExposureClass.DUV_DRY
_IMM = ExposureClass.DUV_IMMERSION
_EUV = ExposureClass.EUV

# Columns: dry_etch, litho, metallization, metrology, wet_etch, deposition.
BUILTIN_PROCESSES = (
    _proc("ArF_LE", 1, 3, 1, 2, 3, 0, 1, _DRY),
    _proc("ArFi_LE", 1, 3, 1, 3, 3, 0, 1, _IMM),
    _proc("ArFi_LE2", 3, 6, 1, 7, 3, 1, 2, _IMM),
    _proc("ArFi_LE3", 4, 9, 1, 10, 3, 1, 3, _IMM),
    _proc("ArFi_LE4", 5, 12, 1, 13, 3, 1, 4, _IMM),
    _proc("ArFi_SADP", 3, 3, 1, 5, 5, 3, 1, _IMM),
    _proc("ArFi_SAQP", 3, 2, 1, 7, 7, 10, 1, _IMM),
    _proc("EUV_LE", 1, 3, 1, 3, 3, 0, 1, _EUV),
    _proc("EUV_SA_LE2", 5, 6, 1, 8, 7, 3, 2, _EUV),
)


class ProcessCatalog:
    """Immutable lookup table of process classes.

    ``register`` returns a new catalog extended with the given process;
    existing instances, including the shared default, are never mutated,
    so catalogs are safe to share across threads.
    """

    def __init__(self, processes: Iterable[ProcessClass] = BUILTIN_PROCESSES):
        self._processes = {p.id: p for p in processes}

    def ids(self) -> tuple[str, ...]:
        return tuple(self._processes)

    def lookup(self, process_id: str) -> ProcessClass:
        try:
            return self._processes[process_id]
        except KeyError:
            raise UnknownProcessError(process_id, self.ids()) from None

    def register(self, custom: ProcessClass) -> "ProcessCatalog":
        if custom.id in self._processes:
            raise ProcessCollisionError(
                f"process id {custom.id!r} is already registered"
            )
        return ProcessCatalog((*self._processes.values(), custom))

    def __contains__(self, process_id: str) -> bool:
        return process_id in self._processes

    def __iter__(self) -> Iterator[ProcessClass]:
        return iter(self._processes.values())

    def __len__(self) -> int:
        return len(self._processes)


DEFAULT_CATALOG = ProcessCatalog()


def lookup_process(process_id: str, catalog: ProcessCatalog = DEFAULT_CATALOG) -> ProcessClass:
    """Resolve a process id to its full record."""
    return catalog.lookup(process_id)


def register_process(custom: ProcessClass, catalog: ProcessCatalog = DEFAULT_CATALOG) -> ProcessCatalog:
    """Return a catalog extended with a user-defined process."""
    return catalog.register(custom)


def mask_energy(proc: ProcessClass, weights: EnergyWeights = DEFAULT_WEIGHTS) -> float:
    """Relative lithography energy to expose every mask of ``proc``."""
    return proc.masks * weights.per_mask(proc.exposure)
