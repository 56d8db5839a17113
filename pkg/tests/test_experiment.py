import math

import numpy as np
import pytest

from lossyhom.analytic import BiphotonState, g2_zero, outcome_arrays
from lossyhom.core import BeamSplitter, random_physical_bs
from lossyhom.errors import NotPhysical, UnknownPair
from lossyhom.experiment import (
    OPPOSITE_SIDE,
    PAIRS,
    SAME_SIDE,
    SETTINGS,
    CountRecord,
    DetectorConfig,
    FigureConfig,
    classify,
    counts_csv,
    expected_rates,
    fit_pairs,
    g2_sweep,
    reproduce_figure,
    simulate_counts,
)
from lossyhom.material import HysteresisModel
from lossyhom.oracle import fock_outcomes

H = math.sqrt(0.5)
LOSSLESS = BeamSplitter(H, H, math.pi / 2)
SYM = SETTINGS["symmetric_degenerate"]
MODEL = HysteresisModel()


def test_classify():
    assert classify("AB") == SAME_SIDE
    assert classify("cd") == SAME_SIDE
    for pair in ("AC", "AD", "BC", "BD"):
        assert classify(pair) == OPPOSITE_SIDE
    with pytest.raises(UnknownPair):
        classify("AE")


def test_settings_presets():
    assert SYM.delta == 0 and SYM.phi_omega == 0 and SYM.crystal_temp == 23.5
    anti = SETTINGS["antisymmetric_nondegenerate"]
    assert anti.delta == pytest.approx(2 * math.pi * 2.95) and anti.phi_omega == pytest.approx(math.pi)
    assert SETTINGS["symmetric_nondegenerate"].delta == pytest.approx(2 * math.pi * 5.85)


def test_detector_validation():
    with pytest.raises(ValueError):
        DetectorConfig(eta={"A": 1.0})
    with pytest.raises(ValueError):
        DetectorConfig(fiber_split=1.5)
    with pytest.raises(ValueError):
        DetectorConfig(pair_rate=-1.0)
    det = DetectorConfig(eta=0.8, dark_rate={"A": 1, "B": 2, "C": 3, "D": 4})
    assert det.eta == dict.fromkeys("ABCD", 0.8)
    assert det.dark_rate["D"] == 4.0


def test_expected_rates_examples():
    det = DetectorConfig(pair_rate=1e4)
    rates = expected_rates(LOSSLESS, SYM.state, 0.0, det)
    assert rates["AB"] == pytest.approx(2500.0)
    assert rates["CD"] == pytest.approx(2500.0)
    assert rates["AC"] == pytest.approx(0.0, abs=1e-9)
    far = expected_rates(LOSSLESS, SYM.state, 100.0, det)
    assert far["AC"] == pytest.approx(1250.0)


def test_dark_floor():
    det = DetectorConfig(pair_rate=0.0, dark_rate=1000.0)
    rates = expected_rates(LOSSLESS, SYM.state, 0.0, det)
    for pair in PAIRS:
        assert rates[pair] == pytest.approx(1000.0 * 1000.0 * 1e-9)


def test_rates_reject_unphysical():
    with pytest.raises(NotPhysical):
        expected_rates(BeamSplitter(H, H, 0.0), SYM.state, 0.0, DetectorConfig())


def test_routing_conservation():
    det = DetectorConfig(pair_rate=3.7e4)
    for seed in range(200):
        bs = random_physical_bs(seed)
        state = BiphotonState(18.5, 0.3 * seed, 3.0)
        tau = np.linspace(-1, 1, 7)
        rates = expected_rates(bs, state, tau, det)
        p11, p20, p02, _ = outcome_arrays(bs, state, tau)
        total = sum(rates[p] for p in PAIRS)
        np.testing.assert_allclose(total, det.pair_rate * (p11 + (p20 + p02) / 2), rtol=0, atol=1e-12 * det.pair_rate)


def test_uneven_fiber_split_and_efficiency():
    det = DetectorConfig(eta={"A": 0.5, "B": 1.0, "C": 1.0, "D": 0.25}, fiber_split=0.7, pair_rate=1.0)
    p11, p20, _, _ = outcome_arrays(LOSSLESS, SYM.state, 10.0)
    rates = expected_rates(LOSSLESS, SYM.state, 10.0, det)
    assert rates["AB"] == pytest.approx(p20 * 2 * 0.7 * 0.3 * 0.5)
    assert rates["AD"] == pytest.approx(p11 * 0.7 * 0.3 * 0.5 * 0.25)


def test_simulate_counts_layout_and_determinism():
    det = DetectorConfig(pair_rate=1e4, t_int=2.0)
    taus = np.linspace(-2, 2, 11)
    a = simulate_counts(LOSSLESS, SYM.state, det, taus, seed=5)
    b = simulate_counts(LOSSLESS, SYM.state, det, taus, seed=5)
    c = simulate_counts(LOSSLESS, SYM.state, det, taus, seed=6)
    assert a == b and a != c
    assert [r.pair for r in a] == [p for p in PAIRS for _ in taus]
    rates = expected_rates(LOSSLESS, SYM.state, taus, det)
    for pair in PAIRS:
        got = [r.expected for r in a if r.pair == pair]
        np.testing.assert_array_equal(got, rates[pair] * 2.0)
    assert all(r.counts >= 0 for r in a)
    assert counts_csv(a).splitlines()[0] == "pair,tau_ps,counts,expected"
    with pytest.raises(ValueError):
        simulate_counts(LOSSLESS, SYM.state, DetectorConfig(t_int=0.0), taus)


def test_poisson_concentration():
    det = DetectorConfig(pair_rate=1e5)
    taus = np.linspace(-3, 3, 400)
    recs = simulate_counts(BeamSplitter(0.55, 0.5, 2.2), SETTINGS["antisymmetric_nondegenerate"].state, det, taus, 9)
    inside = [abs(r.counts - r.expected) <= 3 * math.sqrt(r.expected) for r in recs if r.expected > 0]
    assert np.mean(inside) >= 0.99


def test_g2_sweep_matches_pointwise_and_oracle():
    rows = g2_sweep(MODEL, SYM, [40.0])
    assert rows == [(40.0, g2_zero(MODEL.splitter_at(40.0), SYM.state))]
    for theta in (30.0, 65.5, 68.0, 80.0, 95.0):
        (_, g2), = g2_sweep(MODEL, SYM, [theta])
        bs = MODEL.splitter_at(theta)
        oracle = fock_outcomes(bs, 1.0, 0.0).p11 / fock_outcomes(bs, 0.0, 0.0).p11
        assert g2 == pytest.approx(oracle, abs=1e-12)
    with pytest.raises(ValueError):
        g2_sweep(MODEL, SYM, [])


def test_g2_sweep_symmetric_rises_through_one():
    g2 = np.array([v for _, v in g2_sweep(MODEL, SYM, np.arange(30.0, 95.5, 0.5))])
    assert g2[0] < 1 < g2[-1]
    assert np.all(np.diff(g2) >= 0)
    assert np.count_nonzero(np.diff(np.sign(g2 - 1))) == 1


def test_g2_sweep_antisymmetric_mirrors():
    anti = SETTINGS["antisymmetric_nondegenerate"]
    g2 = np.array([v for _, v in g2_sweep(MODEL, anti, np.arange(30.0, 95.5, 0.5))])
    assert g2[0] > 1 and g2[-1] <= 1
    assert np.all(np.diff(g2) <= 1e-15)


def _fit_sign(records, pair, delta):
    fits = fit_pairs([r for r in records if r.pair == pair], delta, None, use_expected=True)
    return fits[pair].visibility


def test_fig3_panel_sign_flip():
    bundle = reproduce_figure("fig3_scans")
    assert "fig3_symmetric_degenerate_40.csv" in bundle.files
    assert "fig3_symmetric_degenerate_80.csv" in bundle.files
    assert "fig3_antisymmetric_nondegenerate_65p5.csv" in bundle.files
    assert len(bundle.files) == 10  # 3 settings x 3 temperatures + manifest
    cold = _parse(bundle.files["fig3_symmetric_degenerate_40.csv"])
    hot = _parse(bundle.files["fig3_symmetric_degenerate_80.csv"])
    assert _fit_sign(cold, "AC", 0.0) > 0
    assert _fit_sign(hot, "AC", 0.0) < 0


def _parse(text):
    rows = [line.split(",") for line in text.strip().splitlines()[1:]]
    return [CountRecord(p, float(t), int(c), float(e)) for p, t, c, e in rows]


def test_fig4_restores_conventional_pattern():
    bundle = reproduce_figure("fig4_scans")
    cooled = _parse(bundle.files["fig4_symmetric_degenerate_40.csv"])
    assert _fit_sign(cooled, "AC", 0.0) > 0
    assert "branch=cooling" in bundle.files["manifest.txt"]


def test_fig3_fig4_agree_at_matching_states():
    shift = MODEL.hysteresis_shift
    heat = reproduce_figure("fig3_scans", FigureConfig(thetas=(70.0,)))
    cool = reproduce_figure("fig4_scans", FigureConfig(thetas=(70.0 - shift,)))
    for name in SETTINGS:
        a = _parse(heat.files[f"fig3_{name}_70.csv"])
        b = _parse(cool.files[f"fig4_{name}_64.csv"])
        np.testing.assert_allclose([r.expected for r in a], [r.expected for r in b], rtol=0, atol=1e-12)


def test_fig2_and_fig5_bundles():
    fig2 = reproduce_figure("fig2_states")
    text = fig2.files["fig2_symmetric_degenerate.csv"]
    assert text.splitlines()[0] == "theta_c,p11,p20,p02,p_abs"
    assert len(text.splitlines()) == 4
    fig5 = reproduce_figure("fig5_sweep")
    assert set(fig5.files) == {"fig5_sweep.csv", "manifest.txt"}
    g2 = [float(line.split(",")[1]) for line in fig5.files["fig5_sweep.csv"].splitlines()[1:]]
    assert np.all(np.diff(g2) >= 0)
    with pytest.raises(ValueError):
        reproduce_figure("fig9")


def test_bundle_write(tmp_path):
    reproduce_figure("fig5_sweep").write(tmp_path / "out")
    assert (tmp_path / "out" / "manifest.txt").read_text().startswith("fig_id=fig5_sweep")


def test_reproduce_figure_deterministic():
    a = reproduce_figure("fig3_scans", FigureConfig(seed=4)).files
    b = reproduce_figure("fig3_scans", FigureConfig(seed=4)).files
    c = reproduce_figure("fig3_scans", FigureConfig(seed=5)).files
    assert a == b and a != c


def test_fit_pairs_reports_failures_inline():
    det = DetectorConfig(pair_rate=1e6)
    recs = simulate_counts(LOSSLESS, SYM.state, det, np.linspace(-4, 4, 81), 1)
    flat = [CountRecord("BD", r.tau, 50, 50.0) for r in recs if r.pair == "AC"]
    good = [r for r in recs if r.pair == "AC"]
    out = fit_pairs(good + flat, 0.0, None)
    assert out["AC"].visibility == pytest.approx(1.0, abs=0.02)
    assert isinstance(out["BD"], Exception)
