#!/usr/bin/env python3
"""Run the bundled trade-off case studies and write plot-ready outputs.

Covers four analyses over the built-in 7 nm stacks:
  1. EUV vs immersion-DUV patterning of the same metal stack
  2. routing-BEOL reduction sweep (M7 / M5 / M3), with and without
     power-grid retention
  3. SoC composition: constraining a trainer SoC's blocks to M4 under
     per-block area overheads
  4. cross-node trend normalization of user-style series values

Outputs land in --outdir as JSON plus a CSV per sweep. The carbon profile
is the illustrative example shipped in configs/.
"""

import argparse
import json
from pathlib import Path

from pfasfab import (
    CarbonParams,
    DesignParams,
    Region,
    SocBlock,
    TrendSeries,
    asap7_preset,
    compare_stacks,
    compose_soc,
    n7_fixture,
    normalize_trend,
    stack_metrics,
    sweep_beol,
)
from pfasfab.report import (
    comparison_to_dict,
    render,
    soc_to_dict,
    sweep_to_dict,
    trend_to_dict,
)

CARBON_EXAMPLE = CarbonParams(
    carbon_intensity=0.4,
    energy_per_unit_litho=0.05,
    energy_per_area_base=5.0,
    gas_per_area=0.3,
    material_per_area=0.5,
)
CI_BAND = (0.02, 0.82)  # illustrative renewable-to-coal grid intensities
DESIGN = DesignParams(area_cm2=1.0, yield_fraction=0.875)


def save(outdir: Path, name: str, payload: dict):
    path = outdir / f"{name}.json"
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    print(f"  wrote {path}")


def case_euv_vs_duv(outdir: Path):
    print("case 1: EUV vs immersion DUV at the same 7 nm metal stack")
    result = compare_stacks(n7_fixture("duv"), n7_fixture("euv"))
    reduction = result.percent_reduction
    print(f"  PFAS layers {result.metrics_a.total_pfas_layers} -> "
          f"{result.metrics_b.total_pfas_layers} "
          f"({reduction * 100:.1f}% fewer with EUV)")
    print(f"  relative litho energy {result.metrics_a.total_litho_energy:.0f} -> "
          f"{result.metrics_b.total_litho_energy:.0f} (EUV costs more exposure energy)")
    save(outdir, "case1_euv_vs_duv", comparison_to_dict(result))


def case_beol_sweep(outdir: Path):
    print("case 2: routing-BEOL reduction sweep on the 7 nm stack")
    stack = asap7_preset()
    targets = ["M7", "M5", "M3"]
    routing = sweep_beol(stack, targets, retain_power_grid=False,
                         design=DESIGN, carbon_params=CARBON_EXAMPLE, ci_band=CI_BAND)
    series = {p.top_routing_layer: p.metrics.by_region[Region.BEOL] for p in routing[1:]}
    print("  routing-BEOL PFAS layers:",
          ", ".join(f"{t}={series[t]}" for t in targets))
    retained = sweep_beol(stack, targets, retain_power_grid=True,
                          design=DESIGN, carbon_params=CARBON_EXAMPLE, ci_band=CI_BAND)
    base = retained[0].metrics.total_pfas_layers
    m3 = [p for p in retained if p.top_routing_layer == "M3"][0]
    print(f"  overall with power grid retained: {base} -> "
          f"{m3.metrics.total_pfas_layers} "
          f"({base / m3.metrics.total_pfas_layers:.2f}x fewer PFAS layers)")
    save(outdir, "case2_sweep_routing", sweep_to_dict(routing, False, True))
    save(outdir, "case2_sweep_retained", sweep_to_dict(retained, True, False))
    report = {"command": "sweep", "result": sweep_to_dict(retained, True, False)}
    (outdir / "case2_sweep_retained.csv").write_text(render(report, "csv"), encoding="utf-8")
    print(f"  wrote {outdir / 'case2_sweep_retained.csv'}")


def case_soc(outdir: Path):
    print("case 3: trainer SoC constrained to M4 with per-block area overheads")
    blocks = [
        SocBlock("cortex_m0", 0.051, "M7", {"M4": 1.47}),
        SocBlock("systolic_array", 0.6, "M7", {"M4": 1.0}),
        SocBlock("sram", 0.349, "M4", {}),
    ]
    report = compose_soc(blocks, asap7_preset(), "M4", retain_power_grid=True,
                         design=DESIGN, carbon_params=CARBON_EXAMPLE, ci_band=CI_BAND)
    print(f"  total area {report.baseline_area_cm2:.3f} -> "
          f"{report.constrained_area_cm2:.5f} cm^2 "
          f"({report.area_increase * 100:.2f}% increase)")
    print(f"  PFAS layers {report.baseline_metrics.total_pfas_layers} -> "
          f"{report.constrained_metrics.total_pfas_layers} "
          f"(layer ratio {report.pfas_layer_ratio:.2f}, "
          f"chip ratio {report.chip_pfas_ratio:.2f})")
    print(f"  embodied carbon {report.baseline_carbon.embodied_kg:.2f} -> "
          f"{report.constrained_carbon.embodied_kg:.2f} kg CO2e (nearly flat)")
    save(outdir, "case3_soc", soc_to_dict(report))


def case_trend(outdir: Path):
    print("case 4: cross-node series normalized to 28nm")
    asap7_total = stack_metrics(asap7_preset()).total_pfas_layers
    series = TrendSeries((("28nm", 20.0), ("14nm", 24.0), ("7nm", float(asap7_total))))
    normalized = normalize_trend(series, "28nm")
    for node, value in normalized.points:
        print(f"  {node}: {value:.2f}")
    save(outdir, "case4_trend", trend_to_dict(series, normalized))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", default="out", help="output directory (default: out)")
    args = parser.parse_args()
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    case_euv_vs_duv(outdir)
    case_beol_sweep(outdir)
    case_soc(outdir)
    case_trend(outdir)


if __name__ == "__main__":
    main()
