"""Simulated measurement chain: sources, four-detector routing, counts, sweeps.

Output port a is split by a fiber coupler onto detectors A and B, port b
onto C and D. Same-side pairs (AB, CD) record bunched photons, opposite
side pairs (AC, AD, BC, BD) anti-bunched ones.
"""

import math
import os
from dataclasses import dataclass, field, replace

import numpy as np

from .analytic import BiphotonState, g2_zero, outcome_arrays, thz_to_rad_per_ps
from .csvio import fmt, to_csv
from .errors import LossyHOMError, UnknownPair
from .fitting import fit_scan
from .material import Branch, HysteresisModel

PAIRS = ("AB", "CD", "AC", "AD", "BC", "BD")
SAME_SIDE = "same_side"
OPPOSITE_SIDE = "opposite_side"
DETECTORS = ("A", "B", "C", "D")
COINCIDENCE_WINDOW = 1e-9  # s
DEFAULT_SIGMA = thz_to_rad_per_ps(0.5)


@dataclass(frozen=True)
class SourceSetting:
    name: str
    delta: float
    phi_omega: float
    sigma: float = DEFAULT_SIGMA
    crystal_temp: float = float("nan")

    @property
    def state(self):
        return BiphotonState(self.delta, self.phi_omega, self.sigma)


SETTINGS = {
    "symmetric_degenerate": SourceSetting("symmetric_degenerate", 0.0, 0.0, crystal_temp=23.5),
    "antisymmetric_nondegenerate": SourceSetting(
        "antisymmetric_nondegenerate", thz_to_rad_per_ps(2.95), math.pi, crystal_temp=45.0
    ),
    "symmetric_nondegenerate": SourceSetting(
        "symmetric_nondegenerate", thz_to_rad_per_ps(5.85), 0.0, crystal_temp=60.0
    ),
}

# temperatures of the zero-delay state panels
PANEL_THETAS = (40.0, 65.5, 80.0)


def _per_detector(value, name):
    if isinstance(value, dict):
        missing = set(DETECTORS) - set(value)
        if missing:
            raise ValueError(f"{name} missing detectors {sorted(missing)}")
        return {k: float(value[k]) for k in DETECTORS}
    return {k: float(value) for k in DETECTORS}


@dataclass(frozen=True)
class DetectorConfig:
    eta: dict = field(default_factory=lambda: dict.fromkeys(DETECTORS, 1.0))
    fiber_split: float = 0.5
    dark_rate: object = 0.0
    pair_rate: float = 1e4
    t_int: float = 1.0

    def __post_init__(self):
        eta = _per_detector(self.eta, "eta")
        dark = _per_detector(self.dark_rate, "dark_rate")
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "dark_rate", dark)
        if any(not 0.0 <= v <= 1.0 for v in eta.values()):
            raise ValueError("detector efficiencies must lie in [0, 1]")
        if not 0.0 <= self.fiber_split <= 1.0:
            raise ValueError("fiber_split must lie in [0, 1]")
        if any(v < 0 for v in dark.values()) or self.pair_rate < 0:
            raise ValueError("rates must be non-negative")
        if self.t_int < 0:
            raise ValueError("t_int must be non-negative")


@dataclass(frozen=True)
class CountRecord:
    pair: str
    tau: float
    counts: int
    expected: float


def classify(pair):
    pair = str(pair).upper()
    if pair in ("AB", "CD"):
        return SAME_SIDE
    if pair in ("AC", "AD", "BC", "BD"):
        return OPPOSITE_SIDE
    raise UnknownPair(f"unknown detector pair {pair!r}; expected one of {', '.join(PAIRS)}")


def expected_rates(bs, state, tau, det):
    """Mean coincidence rate (1/s) for each detector pair."""
    p11, p20, p02, _ = outcome_arrays(bs, state, tau)
    s = det.fiber_split
    split = {"A": s, "B": 1.0 - s, "C": s, "D": 1.0 - s}
    eta, dark = det.eta, det.dark_rate
    rates = {}
    for pair in PAIRS:
        i, j = pair
        if pair == "AB":
            signal = p20 * 2.0 * s * (1.0 - s)
        elif pair == "CD":
            signal = p02 * 2.0 * s * (1.0 - s)
        else:
            signal = p11 * split[i] * split[j]
        accidental = dark[i] * dark[j] * COINCIDENCE_WINDOW
        rate = det.pair_rate * signal * eta[i] * eta[j] + accidental
        rates[pair] = float(rate) if np.ndim(rate) == 0 else rate
    return rates


def simulate_counts(bs, state, det, tau_grid, seed=0):
    """Poisson coincidence counts per pair and delay.

    Delay point ``i`` draws from ``numpy.random.default_rng([seed, i])``;
    records are ordered by pair, then delay.
    """
    if not det.t_int > 0:
        raise ValueError("t_int must be > 0")
    taus = np.asarray(tau_grid, dtype=float)
    means = expected_rates(bs, state, taus, det)
    by_pair = {pair: [] for pair in PAIRS}
    for i, tau in enumerate(taus):
        rng = np.random.default_rng([seed, i])
        for pair in PAIRS:
            mu = float(means[pair][i]) * det.t_int
            by_pair[pair].append(CountRecord(pair, float(tau), int(rng.poisson(mu)), mu))
    return [rec for pair in PAIRS for rec in by_pair[pair]]


def counts_csv(records):
    return to_csv(("pair", "tau_ps", "counts", "expected"), ((r.pair, r.tau, r.counts, r.expected) for r in records))


def g2_sweep(model, setting, thetas, branch=Branch.HEATING):
    """``[(theta, g2(0))]`` along one branch of the film response."""
    thetas = list(thetas)
    if not thetas:
        raise ValueError("thetas must be non-empty")
    state = setting.state if isinstance(setting, SourceSetting) else setting
    return [(float(th), g2_zero(model.splitter_at(th, branch), state)) for th in thetas]


def sweep_csv(rows):
    return to_csv(("theta_c", "g2"), rows)


# ---------------------------------------------------------------------------
# figure datasets
# ---------------------------------------------------------------------------

FIGURES = ("fig2_states", "fig3_scans", "fig4_scans", "fig5_sweep")


@dataclass(frozen=True)
class FigureConfig:
    model: object = field(default_factory=HysteresisModel)
    detector: DetectorConfig = field(default_factory=DetectorConfig)
    sigma: float = DEFAULT_SIGMA
    tau_min: float = -2.0
    tau_max: float = 2.0
    n_points: int = 161
    thetas: tuple = PANEL_THETAS
    sweep_thetas: tuple = tuple(np.round(np.arange(30.0, 95.0 + 1e-9, 0.5), 6))
    seed: int = 0

    def settings(self):
        return [replace(s, sigma=self.sigma) for s in SETTINGS.values()]


@dataclass
class FigureBundle:
    fig_id: str
    files: dict

    def write(self, outdir):
        os.makedirs(outdir, exist_ok=True)
        for name, text in self.files.items():
            with open(os.path.join(outdir, name), "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)


def _panel_seed(seed, index):
    return int(np.random.SeedSequence([seed, index]).generate_state(1, dtype=np.uint64)[0])


def _theta_label(theta):
    return fmt(theta).replace(".", "p")


def _scan_panels(prefix, cfg, branch, thetas, files):
    taus = np.linspace(cfg.tau_min, cfg.tau_max, cfg.n_points)
    index = 0
    for setting in cfg.settings():
        for theta in thetas:
            bs = cfg.model.splitter_at(theta, branch)
            records = simulate_counts(bs, setting.state, cfg.detector, taus, _panel_seed(cfg.seed, index))
            files[f"{prefix}_{setting.name}_{_theta_label(theta)}.csv"] = counts_csv(records)
            index += 1


def _manifest(fig_id, cfg, extra=()):
    lines = [f"fig_id={fig_id}", f"seed={cfg.seed}"]
    model = cfg.model
    if isinstance(model, HysteresisModel):
        for name in ("theta_c_heat", "theta_c_cool", "width", "a_ins", "a_met", "balance_eta"):
            lines.append(f"material.{name}={fmt(getattr(model, name))}")
    else:
        lines.append("material=calibration_table")
    for s in cfg.settings():
        lines.append(
            f"source.{s.name}=delta:{fmt(s.delta)},phi_omega:{fmt(s.phi_omega)},"
            f"sigma:{fmt(s.sigma)},crystal_temp:{fmt(s.crystal_temp)}"
        )
    det = cfg.detector
    lines.append("detector.eta=" + ",".join(f"{k}:{fmt(det.eta[k])}" for k in DETECTORS))
    lines.append(f"detector.fiber_split={fmt(det.fiber_split)}")
    lines.append("detector.dark_rate=" + ",".join(f"{k}:{fmt(det.dark_rate[k])}" for k in DETECTORS))
    lines.append(f"detector.pair_rate={fmt(det.pair_rate)}")
    lines.append(f"detector.t_int={fmt(det.t_int)}")
    lines.append(f"scan=tau_min:{fmt(cfg.tau_min)},tau_max:{fmt(cfg.tau_max)},n_points:{cfg.n_points}")
    lines.extend(extra)
    return "\n".join(lines) + "\n"


def reproduce_figure(fig_id, config=None):
    """Datasets for one figure, keyed by file name (CSV text plus a manifest)."""
    cfg = config or FigureConfig()
    files = {}
    if fig_id == "fig2_states":
        for setting in cfg.settings():
            rows = []
            for theta in cfg.thetas:
                bs = cfg.model.splitter_at(theta, Branch.HEATING)
                p11, p20, p02, p_abs = (float(v) for v in outcome_arrays(bs, setting.state, 0.0))
                rows.append((theta, p11, p20, p02, p_abs))
            files[f"fig2_{setting.name}.csv"] = to_csv(("theta_c", "p11", "p20", "p02", "p_abs"), rows)
        extra = ["branch=heating", "tau_ps=0"]
    elif fig_id == "fig3_scans":
        _scan_panels("fig3", cfg, Branch.HEATING, cfg.thetas, files)
        extra = ["branch=heating"]
    elif fig_id == "fig4_scans":
        _scan_panels("fig4", cfg, Branch.COOLING, tuple(sorted(cfg.thetas, reverse=True)), files)
        extra = ["branch=cooling"]
    elif fig_id == "fig5_sweep":
        setting = replace(SETTINGS["symmetric_degenerate"], sigma=cfg.sigma)
        files["fig5_sweep.csv"] = sweep_csv(g2_sweep(cfg.model, setting, cfg.sweep_thetas, Branch.HEATING))
        extra = ["branch=heating", "setting=symmetric_degenerate"]
    else:
        raise ValueError(f"unknown figure id {fig_id!r}; expected one of {', '.join(FIGURES)}")
    files["manifest.txt"] = _manifest(fig_id, cfg, extra)
    return FigureBundle(fig_id, files)


def fit_pairs(records, delta_hint=None, sigma_hint=None, use_expected=False):
    """Fit every pair present; failures are returned in place of results."""
    grouped = {}
    for rec in records:
        grouped.setdefault(rec.pair, []).append(rec)
    out = {}
    for pair in sorted(grouped, key=lambda p: PAIRS.index(p) if p in PAIRS else len(PAIRS)):
        try:
            out[pair] = fit_scan(grouped[pair], "dip_peak", delta_hint, sigma_hint, use_expected)
        except (LossyHOMError, ValueError) as exc:
            out[pair] = exc
    return out
