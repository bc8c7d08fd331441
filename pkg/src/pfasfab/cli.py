"""Command-line surface: analyze, compare, sweep, soc, trend, export-catalog.

Exit codes: 0 success, 1 validation error, 2 usage error. Reports go to
stdout (or --out); errors and warnings go to stderr. Identical inputs and
flags produce byte-identical output.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import report as rpt
from .catalog import DEFAULT_CATALOG
from .config import (
    PRESETS,
    ConfigDocument,
    load_stack_document,
    parse_carbon_profile,
    parse_config,
    stack_to_dict,
)
from .engine import DesignParams, chip_pfas, stack_metrics
from .carbon import carbon_band, embodied_carbon
from .errors import ConfigError, PfasfabError, StackValidationError
from .scenarios import compare_stacks, compose_soc, normalize_trend, sweep_beol
from .stack import StackSpec, validate_stack


class _CliError(Exception):
    """Validation-level CLI failure; message goes to stderr, exit code 1."""


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _CliError(f"{path}: cannot read file ({exc.strerror})") from None


def _load_config(args) -> ConfigDocument:
    if getattr(args, "config", None) is None:
        return ConfigDocument()
    doc = parse_config(_read_text(args.config), strict=args.strict)
    for warning in doc.warnings:
        print(f"warning: {args.config}: {warning}", file=sys.stderr)
    return doc


def _resolve_stack(ref: str | None, fallback: StackSpec | None, args) -> StackSpec:
    if ref is None:
        if fallback is None:
            raise _CliError(
                "no stack given: pass --stack <preset|path> or a config with a "
                f"stack section (presets: {', '.join(PRESETS)})"
            )
        return fallback
    if ref in PRESETS:
        return PRESETS[ref]()
    if Path(ref).exists():
        return load_stack_document(_read_text(ref), strict=args.strict)
    raise _CliError(
        f"stack {ref!r} is neither a preset ({', '.join(PRESETS)}) nor an existing file"
    )


def _resolve_design(args, cfg: ConfigDocument, required=True) -> DesignParams | None:
    area = getattr(args, "area", None)
    yield_fraction = getattr(args, "yield_fraction", None)
    if area is None and yield_fraction is None and cfg.design is not None:
        return cfg.design
    if area is None and cfg.design is not None:
        area = cfg.design.area_cm2
    if yield_fraction is None and cfg.design is not None:
        yield_fraction = cfg.design.yield_fraction
    if area is None or yield_fraction is None:
        if required:
            raise _CliError(
                "design parameters missing: pass --area and --yield or a config "
                "with a design section"
            )
        return None
    return DesignParams(area_cm2=float(area), yield_fraction=float(yield_fraction))


def _resolve_carbon(args, cfg: ConfigDocument):
    if getattr(args, "carbon_profile", None) is not None:
        params, ci_band, warnings = parse_carbon_profile(
            _read_text(args.carbon_profile), strict=args.strict
        )
        for warning in warnings:
            print(f"warning: {args.carbon_profile}: {warning}", file=sys.stderr)
        return params, ci_band
    return cfg.carbon, cfg.ci_band


def _carbon_result(metrics, design, carbon_params, ci_band):
    if carbon_params is None or design is None:
        return None
    if ci_band is not None:
        return carbon_band(metrics, design, carbon_params, *ci_band)
    return embodied_carbon(metrics, design, carbon_params)


def _design_echo(design: DesignParams | None):
    if design is None:
        return None
    return {"area_cm2": design.area_cm2, "yield": design.yield_fraction}


def _weights_echo(weights):
    return {"per_euv_mask": weights.per_euv_mask, "per_duv_mask": weights.per_duv_mask}


def _carbon_echo(carbon_params, ci_band):
    echo = None
    if carbon_params is not None:
        echo = {
            "carbon_intensity": carbon_params.carbon_intensity,
            "energy_per_unit_litho": carbon_params.energy_per_unit_litho,
            "energy_per_area_base": carbon_params.energy_per_area_base,
            "gas_per_area": carbon_params.gas_per_area,
            "material_per_area": carbon_params.material_per_area,
        }
    return echo, (list(ci_band) if ci_band is not None else None)


def _cmd_analyze(args) -> dict:
    cfg = _load_config(args)
    stack = _resolve_stack(args.stack, cfg.stack, args)
    validate_stack(stack)
    design = _resolve_design(args, cfg)
    carbon_params, ci_band = _resolve_carbon(args, cfg)
    metrics = stack_metrics(stack, DEFAULT_CATALOG, cfg.weights)
    chip = chip_pfas(metrics, design)
    carbon = _carbon_result(metrics, design, carbon_params, ci_band)
    carbon_echo, band_echo = _carbon_echo(carbon_params, ci_band)
    inputs = {
        "stack": stack_to_dict(stack),
        "design": _design_echo(design),
        "energy_weights": _weights_echo(cfg.weights),
        "carbon": carbon_echo,
        "ci_band": band_echo,
    }
    result = {
        "stack_metrics": rpt.metrics_to_dict(stack, metrics),
        "chip_pfas": rpt.chip_to_dict(chip),
        "carbon": rpt.carbon_to_dict(carbon),
    }
    return rpt.build_report("analyze", inputs, result)


def _cmd_compare(args) -> dict:
    cfg = _load_config(args)
    section = cfg.compare
    if args.stack_a is not None or args.stack_b is not None:
        if args.stack_a is None or args.stack_b is None:
            raise _CliError("compare needs both stacks: pass two positional stack refs")
        a = _resolve_stack(args.stack_a, None, args)
        b = _resolve_stack(args.stack_b, None, args)
    elif section is not None:
        a, b = section.stack_a, section.stack_b
    else:
        raise _CliError(
            "compare needs two stacks: pass them as arguments or in the config's "
            "compare section"
        )
    comparison = compare_stacks(a, b, DEFAULT_CATALOG, cfg.weights)
    inputs = {
        "stack_a": stack_to_dict(a),
        "stack_b": stack_to_dict(b),
        "energy_weights": _weights_echo(cfg.weights),
    }
    return rpt.build_report("compare", inputs, rpt.comparison_to_dict(comparison))


def _cmd_sweep(args) -> dict:
    cfg = _load_config(args)
    section = cfg.sweep
    stack = _resolve_stack(args.stack, cfg.stack, args)
    targets = [t.strip() for t in args.targets.split(",")] if args.targets else None
    if targets is None and section is not None:
        targets = list(section.targets)
    if not targets:
        raise _CliError("sweep needs --targets M7,M5,... or a config sweep section")
    retain = args.retain_power_grid
    beol_only = args.beol_only
    if retain is None:
        retain = section.retain_power_grid if section is not None else False
    if not beol_only and section is not None:
        beol_only = section.beol_only
    if beol_only and retain:
        raise _CliError("--beol-only is a routing-layers view; it excludes --retain-power-grid")
    design = _resolve_design(args, cfg, required=False)
    carbon_params, ci_band = _resolve_carbon(args, cfg)
    points = sweep_beol(
        stack,
        targets,
        retain_power_grid=retain,
        weights=cfg.weights,
        design=design,
        carbon_params=carbon_params,
        ci_band=ci_band,
    )
    carbon_echo, band_echo = _carbon_echo(carbon_params, ci_band)
    inputs = {
        "stack": stack_to_dict(stack),
        "targets": list(targets),
        "retain_power_grid": retain,
        "beol_only": beol_only,
        "design": _design_echo(design),
        "energy_weights": _weights_echo(cfg.weights),
        "carbon": carbon_echo,
        "ci_band": band_echo,
    }
    return rpt.build_report("sweep", inputs, rpt.sweep_to_dict(points, retain, beol_only))


def _cmd_soc(args) -> dict:
    cfg = _load_config(args)
    section = cfg.soc
    if section is None:
        raise _CliError("soc needs a config with an soc section (blocks and target_top)")
    stack = _resolve_stack(args.stack, cfg.stack, args)
    target = args.target or section.target_top
    retain = args.retain_power_grid
    if retain is None:
        retain = section.retain_power_grid
    design = _resolve_design(args, cfg, required=False)
    carbon_params, ci_band = _resolve_carbon(args, cfg)
    soc = compose_soc(
        section.blocks,
        stack,
        target,
        retain_power_grid=retain,
        design=design,
        weights=cfg.weights,
        carbon_params=carbon_params,
        ci_band=ci_band,
    )
    carbon_echo, band_echo = _carbon_echo(carbon_params, ci_band)
    inputs = {
        "stack": stack_to_dict(stack),
        "blocks": [
            {
                "name": b.name,
                "area_cm2": b.baseline_area_cm2,
                "required_top": b.required_top_layer,
                "area_overhead": dict(sorted(b.area_overhead.items())),
            }
            for b in section.blocks
        ],
        "target_top": target,
        "retain_power_grid": retain,
        "design": _design_echo(design),
        "energy_weights": _weights_echo(cfg.weights),
        "carbon": carbon_echo,
        "ci_band": band_echo,
    }
    return rpt.build_report("soc", inputs, rpt.soc_to_dict(soc))


def _cmd_trend(args) -> dict:
    cfg = _load_config(args)
    section = cfg.trend
    if section is None:
        raise _CliError("trend needs a config with a trend section (series and reference)")
    reference = args.ref or section.reference
    if reference is None:
        raise _CliError("trend needs a reference node: pass --ref or set it in the config")
    normalized = normalize_trend(section.series, reference)
    inputs = {
        "series": [[node, value] for node, value in section.series.points],
        "reference": reference,
    }
    return rpt.build_report("trend", inputs, rpt.trend_to_dict(section.series, normalized))


def _cmd_export_catalog(args) -> dict:
    return rpt.catalog_to_dict(DEFAULT_CATALOG)


_COMMANDS = {
    "analyze": _cmd_analyze,
    "compare": _cmd_compare,
    "sweep": _cmd_sweep,
    "soc": _cmd_soc,
    "trend": _cmd_trend,
    "export-catalog": _cmd_export_catalog,
}


def _add_common(parser, with_stack=True):
    if with_stack:
        parser.add_argument("--stack", help="stack preset name or path to a stack JSON file")
    parser.add_argument("--config", help="path to a JSON config document")
    parser.add_argument(
        "--format", choices=("table", "csv", "json"), default="table", help="output format"
    )
    parser.add_argument("--out", help="write the report to this path instead of stdout")
    parser.add_argument(
        "--strict", action="store_true", help="reject unknown config keys instead of warning"
    )


def _add_design(parser):
    parser.add_argument("--area", type=float, help="die area in cm^2")
    parser.add_argument(
        "--yield", dest="yield_fraction", type=float, help="fab yield in (0, 1]"
    )


def _add_carbon(parser):
    parser.add_argument(
        "--carbon-profile",
        help="path to a carbon parameter profile JSON (five factors plus optional ci_band)",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pfasfab",
        description=(
            "Model PFAS-containing litho layers, fab steps, relative litho energy, "
            "and embodied carbon for an IC metal stack, and run trade-off scenarios."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="per-layer and total metrics for one stack")
    _add_common(p)
    _add_design(p)
    _add_carbon(p)

    p = sub.add_parser("compare", help="ratios between two stacks (a vs b)")
    p.add_argument("stack_a", nargs="?", help="first stack: preset name or path")
    p.add_argument("stack_b", nargs="?", help="second stack: preset name or path")
    _add_common(p, with_stack=False)

    p = sub.add_parser("sweep", help="cap the routing BEOL at each target layer")
    _add_common(p)
    _add_design(p)
    _add_carbon(p)
    p.add_argument("--targets", help="comma-separated BEOL layer labels, e.g. M7,M5,M3")
    p.add_argument(
        "--retain-power-grid",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="keep power-grid-tagged layers in every variant (default: off for sweep)",
    )
    p.add_argument(
        "--beol-only",
        action="store_true",
        help="routing-layers view: drop power-grid layers and focus on BEOL counts",
    )

    p = sub.add_parser("soc", help="constrain SoC blocks to a target routing layer")
    _add_common(p)
    _add_design(p)
    _add_carbon(p)
    p.add_argument("--target", help="target top routing layer (overrides config)")
    p.add_argument(
        "--retain-power-grid",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="keep power-grid-tagged layers (default: on for soc)",
    )

    p = sub.add_parser("trend", help="normalize a per-node series to a reference node")
    _add_common(p, with_stack=False)
    p.add_argument("--ref", help="reference node label (overrides config)")

    p = sub.add_parser("export-catalog", help="emit the built-in process catalog")
    p.add_argument(
        "--format", choices=("table", "csv", "json"), default="json", help="output format"
    )
    p.add_argument("--out", help="write the catalog to this path instead of stdout")

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        report = _COMMANDS[args.command](args)
    except ConfigError as exc:
        for location, message in exc.entries:
            print(f"error: {location}: {message}", file=sys.stderr)
        return 1
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except StackValidationError as exc:
        for v in exc.violations:
            print(f"error: layer {v.layer!r}: [{v.rule}] {v.message}", file=sys.stderr)
        return 1
    except PfasfabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = rpt.render(report, args.format)
    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"error: {args.out}: cannot write report ({exc.strerror})", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
