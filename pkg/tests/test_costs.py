import numpy as np
import pytest

from stochmem.circuits import AppKind
from stochmem.costs import (AccessCounts, AccessMultipliers, EnergyMode,
                            SystemDesign, UnitCost, aggregate_reduction,
                            area_report, average_shares, default_access,
                            default_profile, energy_report, load_cost_config,
                            share_breakdown)

APPS = list(AppKind)

# published per-app area totals in um^2
AREA_TOTALS = {
    (AppKind.ROBERT, SystemDesign.CONV_LFSR): 51810,
    (AppKind.ROBERT, SystemDesign.CONV_MTJ): 66435,
    (AppKind.ROBERT, SystemDesign.STOCHMEM): 597,
    (AppKind.MEDIAN, SystemDesign.CONV_LFSR): 58320,
    (AppKind.MEDIAN, SystemDesign.CONV_MTJ): 71570,
    (AppKind.MEDIAN, SystemDesign.STOCHMEM): 5868,
    (AppKind.FRAME, SystemDesign.CONV_LFSR): 51246,
    (AppKind.FRAME, SystemDesign.CONV_MTJ): 66534,
    (AppKind.FRAME, SystemDesign.STOCHMEM): 670,
    (AppKind.GAMMA, SystemDesign.CONV_LFSR): 51267,
    (AppKind.GAMMA, SystemDesign.CONV_MTJ): 66231,
    (AppKind.GAMMA, SystemDesign.STOCHMEM): 502,
    (AppKind.KDE, SystemDesign.CONV_LFSR): 64979,
    (AppKind.KDE, SystemDesign.CONV_MTJ): 75443,
    (AppKind.KDE, SystemDesign.STOCHMEM): 10392,
}


@pytest.mark.parametrize("app,design", list(AREA_TOTALS))
def test_area_totals_integer_exact(app, design):
    report = area_report(design, default_profile(app))
    assert report.total == AREA_TOTALS[(app, design)]


def test_dsc_area_composition():
    robert = area_report(SystemDesign.CONV_LFSR, default_profile(AppKind.ROBERT))
    dsc = dict((u, v) for u, _, v in robert.entries)["dsc"]
    assert dsc == 1450
    kde = area_report(SystemDesign.CONV_LFSR, default_profile(AppKind.KDE))
    assert dict((u, v) for u, _, v in kde.entries)["dsc"] == 194 * 11 + 96 * 42 == 6166
    frame = area_report(SystemDesign.CONV_LFSR, default_profile(AppKind.FRAME))
    assert dict((u, v) for u, _, v in frame.entries)["dsc"] == 772


def test_median_asc_area():
    rep = area_report(SystemDesign.CONV_MTJ, default_profile(AppKind.MEDIAN))
    assert dict((u, v) for u, _, v in rep.entries)["asc"] == 150


def test_stochmem_gamma_total_decomposition():
    rep = area_report(SystemDesign.STOCHMEM, default_profile(AppKind.GAMMA))
    parts = dict((u, v) for u, _, v in rep.entries)
    assert parts == {"memory": 306.0, "asc": 120.0, "logic": 76.0}
    assert rep.total == 502


def test_area_reduction_modes_bracket_published_value():
    stoch = [area_report(SystemDesign.STOCHMEM, default_profile(a)) for a in APPS]
    lfsr = [area_report(SystemDesign.CONV_LFSR, default_profile(a)) for a in APPS]
    mean_mode = aggregate_reduction(stoch, lfsr, "mean_of_ratios")
    sum_mode = aggregate_reduction(stoch, lfsr, "sum_based")
    assert 93.5 <= sum_mode <= 94.1
    assert 93.5 <= mean_mode <= 94.2
    assert min(mean_mode, sum_mode) <= 93.7 <= max(mean_mode, sum_mode)


def test_area_share_averages():
    stoch = average_shares([area_report(SystemDesign.STOCHMEM, default_profile(a))
                            for a in APPS])
    assert stoch["logic"] == pytest.approx(0.631, abs=0.02)
    assert stoch["conversion"] == pytest.approx(0.108, abs=0.02)
    lfsr = average_shares([area_report(SystemDesign.CONV_LFSR, default_profile(a))
                           for a in APPS])
    assert lfsr["logic"] == pytest.approx(0.049, abs=0.02)
    assert lfsr["input_layer"] == pytest.approx(0.909, abs=0.02)


class TestEnergy:
    def test_robert_dsc_energy_per_pixel(self):
        rep = energy_report(SystemDesign.CONV_LFSR, default_profile(AppKind.ROBERT), 1024)
        dsc = dict((u, v) for u, _, v in rep.entries)["dsc"]
        assert dsc == pytest.approx(5 * (0.355 + 0.041) * 1024)
        assert dsc == pytest.approx(2027.52)

    def test_zero_length_leaves_only_event_terms(self):
        rep = energy_report(SystemDesign.CONV_LFSR, default_profile(AppKind.ROBERT), 0)
        parts = dict((u, v) for u, _, v in rep.entries)
        assert parts["dsc"] == 0.0
        assert parts["logic"] == 0.0
        assert parts["adc"] > 0.0

    def test_per_cycle_terms_linear_in_length(self):
        p = default_profile(AppKind.GAMMA)
        r1 = energy_report(SystemDesign.STOCHMEM, p, 512)
        r2 = energy_report(SystemDesign.STOCHMEM, p, 1024)
        g1, g2 = r1.group_totals, r2.group_totals
        assert g2["conversion"] == pytest.approx(2 * g1["conversion"])
        assert g2["logic"] == pytest.approx(2 * g1["logic"])
        assert g2["input_layer"] == pytest.approx(g1["input_layer"])

    @pytest.mark.parametrize("app", APPS)
    def test_strict_energy_ordering_under_defaults(self, app):
        p = default_profile(app)
        e = {d: energy_report(d, p, 1024).total for d in SystemDesign}
        assert e[SystemDesign.STOCHMEM] < e[SystemDesign.CONV_MTJ] < e[SystemDesign.CONV_LFSR]

    def test_published_energy_reductions(self):
        reps = {d: [energy_report(d, default_profile(a), 1024) for a in APPS]
                for d in SystemDesign}
        red_ml = aggregate_reduction(reps[SystemDesign.CONV_MTJ],
                                     reps[SystemDesign.CONV_LFSR])
        red_sm = aggregate_reduction(reps[SystemDesign.STOCHMEM],
                                     reps[SystemDesign.CONV_MTJ])
        assert red_ml == pytest.approx(45.7, abs=10.0)
        assert red_sm == pytest.approx(11.1, abs=8.0)

    def test_energy_share_progression(self):
        shares = {d: average_shares([energy_report(d, default_profile(a), 1024)
                                     for a in APPS]) for d in SystemDesign}
        logic = [shares[d]["logic"] for d in
                 (SystemDesign.CONV_LFSR, SystemDesign.CONV_MTJ, SystemDesign.STOCHMEM)]
        conv = [shares[d]["conversion"] for d in
                (SystemDesign.CONV_LFSR, SystemDesign.CONV_MTJ, SystemDesign.STOCHMEM)]
        assert logic[0] < logic[1] < logic[2]
        assert conv[0] > conv[1] > conv[2]
        for got, ref in zip(logic, (0.312, 0.530, 0.601)):
            assert got == pytest.approx(ref, abs=0.10)
        for got, ref in zip(conv, (0.644, 0.378, 0.221)):
            assert got == pytest.approx(ref, abs=0.10)

    def test_custom_access_counts(self):
        p = default_profile(AppKind.FRAME)
        acc = AccessCounts(adc_conversions=2, dac_conversions=0, mem_reads=4,
                           mem_writes=2)
        rep = energy_report(SystemDesign.CONV_LFSR, p, 1024, access=acc,
                            multipliers=AccessMultipliers.unit())
        parts = dict((u, v) for u, _, v in rep.entries)
        assert parts["adc"] == 40.0
        assert parts["memory"] == 60.0

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            AccessCounts(-1, 0, 0, 0)


def test_share_breakdown_sums_to_one():
    for app in APPS:
        for design in SystemDesign:
            for rep in (area_report(design, default_profile(app)),
                        energy_report(design, default_profile(app), 1024)):
                assert sum(share_breakdown(rep).values()) == pytest.approx(1.0, abs=1e-9)


def test_share_breakdown_zero_total_rejected():
    rep = energy_report(SystemDesign.STOCHMEM, default_profile(AppKind.GAMMA), 1024)
    rep.entries = [("x", "logic", 0.0)]
    with pytest.raises(ValueError):
        share_breakdown(rep)


def test_default_access_counts():
    p = default_profile(AppKind.KDE)
    acc = default_access(p, SystemDesign.CONV_MTJ)
    assert (acc.adc_conversions, acc.dac_conversions) == (42, 42)
    acc2 = default_access(p, SystemDesign.STOCHMEM)
    assert acc2.dac_conversions == 0


def test_cost_config_overrides(tmp_path):
    cfg = tmp_path / "costs.txt"
    cfg.write_text(
        "# override table\n"
        "unit.adc_10bit.area_um2 = 40000\n"
        "unit.analog_cell.write_energy_pJ = 90\n"
        "profile.robert.n_streams = 6\n")
    units, profiles = load_cost_config(cfg)
    assert units["adc_10bit"].area_um2 == 40000
    assert units["adc_10bit"].energy_pJ == 20  # untouched fields keep defaults
    assert units["analog_cell"].write_pJ == 90
    assert profiles[AppKind.ROBERT].n_streams == 6
    report = area_report(SystemDesign.CONV_LFSR, profiles[AppKind.ROBERT], units)
    assert report.total == 339 + 21 + 40000 + (194 * 5 + 96 * 6)


def test_cost_config_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "costs.txt"
    cfg.write_text("unit.adc_10bit.bogus = 1\n")
    with pytest.raises(ValueError):
        load_cost_config(cfg)


def test_unit_cost_validation():
    with pytest.raises(ValueError):
        UnitCost(-1.0, 0.0, EnergyMode.PER_CYCLE)
