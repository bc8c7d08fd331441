import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pfasfab import (
    CarbonParams,
    DesignParams,
    DomainError,
    MissingOverheadError,
    Region,
    SocBlock,
    StackSpec,
    TrendReferenceError,
    TrendSeries,
    UnknownTargetError,
    asap7_preset,
    compare_stacks,
    compose_soc,
    n7_fixture,
    normalize_trend,
    sweep_beol,
)


# ---------------------------------------------------------------------------
# compare_stacks


def test_compare_duv_vs_euv(asap7, n7_duv):
    result = compare_stacks(n7_duv, asap7)
    assert math.isclose(result.percent_reduction, 7 / 36, rel_tol=1e-12)
    assert 0.16 <= result.percent_reduction <= 0.20
    assert math.isclose(result.ratio_pfas, 36 / 29, rel_tol=1e-12)


def test_compare_identity(asap7):
    result = compare_stacks(asap7, asap7)
    assert result.ratio_pfas == 1.0
    assert result.ratio_energy == 1.0
    assert result.ratio_litho_steps == 1.0
    assert result.ratio_total_steps == 1.0
    assert result.percent_reduction == 0.0
    assert all(r == 1.0 for r in result.pfas_ratio_by_region.values())


def test_compare_zero_region_reported_absent(asap7):
    partial = StackSpec(asap7.technology_node, asap7.layers[:7])
    result = compare_stacks(asap7, partial)
    assert result.pfas_ratio_by_region[Region.BEOL] is None
    assert math.isclose(result.ratio_pfas, 29 / 7, rel_tol=1e-12)


@pytest.mark.parametrize("variant", ["euv", "duv"])
def test_compare_antisymmetry(asap7, variant):
    other = n7_fixture(variant)
    ab = compare_stacks(asap7, other)
    ba = compare_stacks(other, asap7)
    assert abs(ab.ratio_pfas * ba.ratio_pfas - 1.0) < 1e-12
    assert abs(ab.ratio_energy * ba.ratio_energy - 1.0) < 1e-12


# ---------------------------------------------------------------------------
# sweep_beol


def test_sweep_routing_series(asap7):
    points = sweep_beol(asap7, ["M7", "M5", "M3"], retain_power_grid=False)
    labels = [p.top_routing_layer for p in points]
    assert labels == ["M7", "M7", "M5", "M3"]  # baseline first, then targets
    beol = [p.metrics.by_region[Region.BEOL] for p in points[1:]]
    assert beol == [18, 12, 6]
    assert beol[0] / beol[2] == 3.0
    assert beol[0] / beol[1] == 1.5
    assert beol[1] / beol[2] == 2.0


def test_sweep_with_retention_overall_ratio(asap7):
    points = sweep_beol(asap7, ["M3"], retain_power_grid=True)
    baseline, constrained = points
    assert baseline.metrics.total_pfas_layers == 29
    assert constrained.metrics.total_pfas_layers == 17
    ratio = baseline.metrics.total_pfas_layers / constrained.metrics.total_pfas_layers
    assert 1.65 <= ratio <= 1.75


def test_sweep_topmost_target_is_noop(asap7):
    points = sweep_beol(asap7, ["M7"], retain_power_grid=True)
    baseline, target = points
    assert target.stack == asap7
    assert target.stack == baseline.stack
    assert target.metrics == baseline.metrics


def test_sweep_targets_reported_descending(asap7):
    points = sweep_beol(asap7, ["M3", "M7", "M5"], retain_power_grid=False)
    assert [p.top_routing_layer for p in points[1:]] == ["M7", "M5", "M3"]


def test_sweep_unknown_target(asap7):
    with pytest.raises(UnknownTargetError):
        sweep_beol(asap7, ["M12"])
    with pytest.raises(UnknownTargetError):
        sweep_beol(asap7, ["Fin"])


def test_sweep_power_grid_dropped_without_retention(asap7):
    points = sweep_beol(asap7, ["M7"], retain_power_grid=False)
    names = points[1].stack.names()
    assert "M8" not in names and "M9" not in names
    assert points[1].metrics.total_pfas_layers == 25


@given(top=st.sampled_from(["M1", "M2", "M3", "M4", "M5", "M6", "M7"]),
       retain=st.booleans())
def test_sweep_monotone_in_target(top, retain):
    asap7 = asap7_preset()
    targets = [f"M{k}" for k in range(1, 8)]
    points = sweep_beol(asap7, targets, retain_power_grid=retain)
    series = {p.top_routing_layer: p for p in points[1:]}
    below = series[top]
    above = series["M7"]
    assert below.metrics.total_pfas_layers <= above.metrics.total_pfas_layers
    assert below.metrics.total_litho_energy <= above.metrics.total_litho_energy
    assert below.metrics.total_steps.total() <= above.metrics.total_steps.total()
    for region in Region:
        assert below.metrics.by_region[region] <= above.metrics.by_region[region]


def test_sweep_retention_keeps_power_grid_contribution_constant(asap7):
    points = sweep_beol(asap7, ["M7", "M5", "M3", "M1"], retain_power_grid=True)
    contributions = []
    for point in points:
        pg = sum(
            lm.pfas_layers
            for lm, layer in zip(point.metrics.per_layer, point.stack.layers)
            if layer.is_power_grid
        )
        contributions.append(pg)
    assert len(set(contributions)) == 1
    assert contributions[0] == 4


def test_sweep_fills_chip_and_carbon_when_given(asap7):
    design = DesignParams(2.0, 0.8)
    params = CarbonParams(0.4, 0.05, 5.0, 0.3, 0.5)
    points = sweep_beol(
        asap7, ["M3"], retain_power_grid=True, design=design,
        carbon_params=params, ci_band=(0.02, 0.82),
    )
    target = points[1]
    assert target.chip.value == 17 * 2.0 / 0.8
    assert target.carbon.low_kg < target.carbon.embodied_kg < target.carbon.high_kg


# ---------------------------------------------------------------------------
# compose_soc


def _fixture_blocks():
    return [
        SocBlock("cortex_m0", 0.051, "M7", {"M4": 1.47}),
        SocBlock("systolic_array", 0.6, "M7", {"M4": 1.0}),
        SocBlock("sram", 0.349, "M4", {}),
    ]


def test_soc_fixture_area_increase(asap7):
    report = compose_soc(
        _fixture_blocks(), asap7, "M4", retain_power_grid=True,
        design=DesignParams(1.0, 0.875),
    )
    assert math.isclose(report.area_increase, 0.051 * 0.47, rel_tol=1e-12)
    assert 0.023 <= report.area_increase <= 0.025
    assert report.baseline_area_cm2 == 1.0
    # chip stack drops to M4 with the power grid retained
    assert report.constrained_metrics.total_pfas_layers == 20
    assert report.baseline_metrics.total_pfas_layers == 29


def test_soc_truncation_to_m5(asap7):
    blocks = [
        SocBlock("cortex_m0", 0.051, "M7", {"M5": 1.0}),
        SocBlock("systolic_array", 0.6, "M7", {"M5": 1.0}),
        SocBlock("sram", 0.349, "M4", {}),
    ]
    report = compose_soc(
        blocks, asap7, "M5", retain_power_grid=True, design=DesignParams(1.0, 1.0)
    )
    assert report.baseline_metrics.total_pfas_layers == 29
    assert report.constrained_metrics.total_pfas_layers == 23
    assert math.isclose(report.pfas_layer_ratio, 29 / 23, rel_tol=1e-12)
    assert report.area_increase == 0.0


def test_soc_all_blocks_within_target(asap7):
    blocks = [
        SocBlock("sram_a", 0.5, "M4", {}),
        SocBlock("sram_b", 0.5, "M3", {}),
    ]
    report = compose_soc(blocks, asap7, "M5", design=DesignParams(1.0, 1.0))
    assert report.area_increase == 0.0
    # chip truncates to the highest layer still required, M4
    assert report.constrained_metrics.total_pfas_layers == 20
    beol_names = [lm.name for lm in report.constrained_metrics.per_layer if lm.name.startswith("M")]
    assert beol_names == ["M1", "M2", "M3", "M4", "M8", "M9"]


def test_soc_degenerates_to_sweep(asap7):
    blocks = [
        SocBlock("a", 0.4, "M7", {"M3": 1.0}),
        SocBlock("b", 0.6, "M7", {"M3": 1.0}),
    ]
    report = compose_soc(blocks, asap7, "M3", retain_power_grid=True,
                         design=DesignParams(1.0, 1.0))
    sweep_point = sweep_beol(asap7, ["M3"], retain_power_grid=True)[1]
    assert report.constrained_metrics == sweep_point.metrics
    assert report.constrained_area_cm2 == report.baseline_area_cm2


def test_soc_missing_overhead(asap7):
    blocks = [SocBlock("cortex_m0", 0.051, "M7", {"M4": 1.47})]
    with pytest.raises(MissingOverheadError):
        compose_soc(blocks, asap7, "M3", design=DesignParams(1.0, 1.0))


def test_soc_unknown_target(asap7):
    with pytest.raises(UnknownTargetError):
        compose_soc(_fixture_blocks(), asap7, "M99", design=DesignParams(1.0, 1.0))


def test_soc_chip_ratio_accounts_for_area(asap7):
    report = compose_soc(
        _fixture_blocks(), asap7, "M4", retain_power_grid=True,
        design=DesignParams(1.0, 1.0),
    )
    expected_chip_ratio = (29 * 1.0) / (20 * report.constrained_area_cm2)
    assert math.isclose(report.chip_pfas_ratio, expected_chip_ratio, rel_tol=1e-12)


def test_soc_block_validation():
    with pytest.raises(DomainError):
        SocBlock("bad", -1.0, "M7", {})
    with pytest.raises(DomainError):
        SocBlock("bad", 1.0, "Fin", {})
    with pytest.raises(DomainError):
        SocBlock("bad", 1.0, "M7", {"M4": 0.5})
    with pytest.raises(DomainError):
        SocBlock("ok", 1.0, "M7", {}).overhead_factor("Fin")


def test_soc_requires_blocks(asap7):
    with pytest.raises(DomainError):
        compose_soc([], asap7, "M4", design=DesignParams(1.0, 1.0))


def test_soc_carbon_paths(asap7):
    params = CarbonParams(0.4, 0.05, 5.0, 0.3, 0.5)
    plain = compose_soc(
        _fixture_blocks(), asap7, "M4", design=DesignParams(1.0, 1.0),
        carbon_params=params,
    )
    assert plain.baseline_carbon.low_kg is None
    assert plain.baseline_carbon.embodied_kg > plain.constrained_carbon.embodied_kg * 0.9
    banded = compose_soc(
        _fixture_blocks(), asap7, "M4", design=DesignParams(1.0, 1.0),
        carbon_params=params, ci_band=(0.02, 0.82),
    )
    assert banded.constrained_carbon.low_kg < banded.constrained_carbon.high_kg


# ---------------------------------------------------------------------------
# normalize_trend


def test_normalize_example():
    series = TrendSeries((("28nm", 20.0), ("7nm", 29.0)))
    normalized = normalize_trend(series, "28nm")
    assert normalized.values() == {"28nm": 1.0, "7nm": 1.45}
    assert normalized.reference == "28nm"


def test_normalize_single_point():
    normalized = normalize_trend(TrendSeries((("28nm", 17.0),)), "28nm")
    assert normalized.values() == {"28nm": 1.0}


def test_normalize_reference_errors():
    series = TrendSeries((("28nm", 20.0), ("7nm", 29.0)))
    with pytest.raises(TrendReferenceError):
        normalize_trend(series, "3nm")
    with pytest.raises(TrendReferenceError):
        normalize_trend(TrendSeries((("28nm", 0.0),)), "28nm")


def test_trend_series_rejects_duplicates_and_non_finite():
    with pytest.raises(DomainError):
        TrendSeries((("7nm", 1.0), ("7nm", 2.0)))
    with pytest.raises(DomainError):
        TrendSeries((("7nm", float("nan")),))


@given(
    values=st.lists(
        st.floats(min_value=0.001, max_value=1000), min_size=1, max_size=8
    ),
    ref_index=st.integers(min_value=0, max_value=7),
)
def test_normalize_idempotent(values, ref_index):
    nodes = [f"n{i}" for i in range(len(values))]
    series = TrendSeries(tuple(zip(nodes, values)))
    reference = nodes[ref_index % len(values)]
    once = normalize_trend(series, reference)
    twice = normalize_trend(once, reference)
    assert once == twice
    assert once.values()[reference] == 1.0
