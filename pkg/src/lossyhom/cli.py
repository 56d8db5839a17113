"""Command-line front end.

Runs are described by an INI-style config file (``--config`` or the
``LOSSYHOM_CONFIG`` environment variable); command-line flags override
individual values. Exit codes: 0 success, 1 check failure, 2 usage or
config error, 3 unphysical splitter.
"""

import argparse
import configparser
import csv
import io
import math
import os
import sys

from . import __version__
from .analytic import hom_scan, thz_to_rad_per_ps
from .core import BeamSplitter, check_physical
from .csvio import to_csv
from .errors import LossyHOMError, NotPhysical, ZeroBaseline
from .experiment import (
    FIGURES,
    PAIRS,
    SETTINGS,
    CountRecord,
    DetectorConfig,
    FigureConfig,
    SourceSetting,
    counts_csv,
    fit_pairs,
    g2_sweep,
    reproduce_figure,
    simulate_counts,
    sweep_csv,
)
from .material import Branch, HysteresisModel, load_calibration
from .oracle import sweep_check

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_PHYSICAL = 0, 1, 2, 3
CONFIG_ENV = "LOSSYHOM_CONFIG"

SCHEMA = {
    "run": {"seed", "output", "counts_output"},
    "material": {
        "calibration", "theta_c_heat", "theta_c_cool", "width", "a_ins", "a_met",
        "balance_eta", "thetas", "theta_min", "theta_max", "theta_step", "branch", "theta",
    },
    "splitter": {"t_mag", "r_mag", "phi_rt"},
    "source": {"setting", "delta_thz", "phi_omega", "sigma_thz"},
    "detector": {
        "eta", "eta_a", "eta_b", "eta_c", "eta_d", "fiber_split", "dark_rate", "pair_rate", "t_int",
    },
    "scan": {"tau_min_ps", "tau_max_ps", "n_points"},
    "oracle": {"n", "tol"},
    "fit": {"delta_thz", "sigma_thz", "use_expected"},
}
MODEL_KEYS = ("theta_c_heat", "theta_c_cool", "width", "a_ins", "a_met", "balance_eta")


class ConfigError(LossyHOMError):
    pass


class RunConfig:
    """Validated view over the config file."""

    def __init__(self, parser=None, base_dir="."):
        self.cp = parser or configparser.ConfigParser()
        self.base_dir = base_dir
        for section in self.cp.sections():
            if section not in SCHEMA:
                raise ConfigError(f"unknown config section [{section}]")
            for key in self.cp[section]:
                if key not in SCHEMA[section]:
                    raise ConfigError(f"unknown config key {section}.{key}")

    @classmethod
    def from_path(cls, path):
        cp = configparser.ConfigParser(interpolation=None)
        cp.optionxform = str.lower
        if path is None:
            return cls(cp)
        try:
            with open(path, encoding="utf-8") as fh:
                cp.read_file(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        except configparser.Error as exc:
            raise ConfigError(f"malformed config {path}: {exc.message.splitlines()[0]}") from None
        return cls(cp, os.path.dirname(os.path.abspath(path)))

    def has(self, section, key):
        return self.cp.has_option(section, key)

    def raw(self, section, key, default=None):
        if self.has(section, key):
            return self.cp.get(section, key).strip()
        return default

    def number(self, section, key, default=None, cast=float):
        value = self.raw(section, key)
        if value is None:
            return default
        try:
            out = cast(value)
        except ValueError:
            raise ConfigError(f"{section}.{key}: expected a number, got {value!r}") from None
        if cast is float and not math.isfinite(out):
            raise ConfigError(f"{section}.{key}: must be finite")
        return out

    def number_list(self, section, key):
        value = self.raw(section, key)
        if value is None:
            return None
        items = [v for v in value.replace(";", ",").split(",") if v.strip()]
        try:
            return [float(v) for v in items]
        except ValueError:
            raise ConfigError(f"{section}.{key}: expected a comma-separated list of numbers") from None

    # --- components -----------------------------------------------------

    def material(self):
        path = self.raw("material", "calibration")
        inline = [k for k in MODEL_KEYS if self.has("material", k)]
        if path is not None:
            if inline:
                raise ConfigError(f"material.calibration cannot be combined with material.{inline[0]}")
            full = path if os.path.isabs(path) else os.path.join(self.base_dir, path)
            try:
                return load_calibration(full)
            except OSError as exc:
                raise ConfigError(f"material.calibration: cannot read {path}: {exc.strerror}") from None
            except (LossyHOMError, ValueError) as exc:
                raise ConfigError(f"material.calibration: {exc}") from None
        kwargs = {k: self.number("material", k) for k in inline}
        try:
            return HysteresisModel(**kwargs)
        except ValueError as exc:
            raise ConfigError(f"material: {exc}") from None

    def thetas(self, override=None):
        if override is not None:
            values = override
        else:
            values = self.number_list("material", "thetas")
        if values is None and self.has("material", "theta_min"):
            lo = self.number("material", "theta_min")
            hi = self.number("material", "theta_max", lo)
            step = self.number("material", "theta_step", 1.0)
            if step <= 0:
                raise ConfigError("material.theta_step: must be > 0")
            n = int(math.floor((hi - lo) / step + 1e-9)) + 1
            values = [lo + i * step for i in range(max(n, 0))]
        if values is None:
            values = [25.0, 68.0, 95.0]
        if not values:
            raise ConfigError("material.thetas: temperature list is empty")
        return values

    def branches(self, override=None):
        value = (override or self.raw("material", "branch", "heating")).lower()
        if value == "both":
            return [Branch.HEATING, Branch.COOLING]
        try:
            return [Branch.parse(value)]
        except ValueError:
            raise ConfigError(f"material.branch: expected heating, cooling or both, got {value!r}") from None

    def source(self):
        name = self.raw("source", "setting")
        sigma_thz = self.number("source", "sigma_thz", 0.5)
        if sigma_thz <= 0:
            raise ConfigError("source.sigma_thz: must be > 0")
        sigma = thz_to_rad_per_ps(sigma_thz)
        if name is not None:
            if name not in SETTINGS:
                raise ConfigError(f"source.setting: unknown setting {name!r}; choose from {', '.join(SETTINGS)}")
            if self.has("source", "delta_thz") or self.has("source", "phi_omega"):
                raise ConfigError("source.setting cannot be combined with source.delta_thz/phi_omega")
            s = SETTINGS[name]
            return SourceSetting(s.name, s.delta, s.phi_omega, sigma, s.crystal_temp)
        delta_thz = self.number("source", "delta_thz", 0.0)
        if delta_thz < 0:
            raise ConfigError("source.delta_thz: must be >= 0")
        phi = self.number("source", "phi_omega", 0.0)
        return SourceSetting("custom", thz_to_rad_per_ps(delta_thz), phi, sigma)

    def detector(self):
        eta = {}
        base = self.number("detector", "eta", 1.0)
        for d in "abcd":
            eta[d.upper()] = self.number("detector", f"eta_{d}", base)
        kwargs = {
            "eta": eta,
            "fiber_split": self.number("detector", "fiber_split", 0.5),
            "dark_rate": self.number("detector", "dark_rate", 0.0),
            "pair_rate": self.number("detector", "pair_rate", 1e4),
            "t_int": self.number("detector", "t_int", 1.0),
        }
        try:
            return DetectorConfig(**kwargs)
        except ValueError as exc:
            raise ConfigError(f"detector: {exc}") from None

    def scan(self):
        tmin = self.number("scan", "tau_min_ps", -2.0)
        tmax = self.number("scan", "tau_max_ps", 2.0)
        n = self.number("scan", "n_points", 161, cast=int)
        if not tmin < tmax:
            raise ConfigError("scan.tau_min_ps: must be below scan.tau_max_ps")
        if n < 2:
            raise ConfigError("scan.n_points: must be >= 2")
        return tmin, tmax, n

    def explicit_splitter(self):
        if not self.cp.has_section("splitter"):
            return None
        missing = [k for k in ("t_mag", "r_mag", "phi_rt") if not self.has("splitter", k)]
        if missing:
            raise ConfigError(f"splitter.{missing[0]}: required when [splitter] is given")
        try:
            return BeamSplitter(*(self.number("splitter", k) for k in ("t_mag", "r_mag", "phi_rt")))
        except ValueError as exc:
            raise ConfigError(f"splitter: {exc}") from None


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _emit(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _counts_path(output):
    if output is None or output == "-":
        return None
    stem, ext = os.path.splitext(output)
    return f"{stem}_counts{ext or '.csv'}"


def _parse_floats(text, flag):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"{flag}: expected a comma-separated list of numbers") from None


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_material(args, cfg):
    model = cfg.material()
    thetas = cfg.thetas(_parse_floats(args.thetas, "--thetas") if args.thetas else None)
    rows = []
    for branch in cfg.branches(args.branch):
        for theta in thetas:
            T, R, A = model.tra_at(theta, branch)
            rows.append((theta, branch.value, T, R, A, model.exchange_phase_at(theta, branch)))
    _emit(to_csv(("theta_c", "branch", "T", "R", "A", "phi_rt"), rows), args.output)
    return EXIT_OK


def _scan_splitter(args, cfg):
    bs = cfg.explicit_splitter()
    if bs is None:
        model = cfg.material()
        theta = args.theta if args.theta is not None else cfg.number("material", "theta", 40.0)
        branch = cfg.branches(args.branch)[0]
        bs = model.splitter_at(theta, branch)
    report = check_physical(bs)
    if not report.physical:
        raise NotPhysical(
            f"splitter violates the passivity bound: |cos(phi_rt)| = {abs(report.cos_phi):.12g}, "
            f"bound = {report.bound:.12g}, |t|^2+|r|^2 = {bs.T + bs.R:.12g}",
            bound=report.bound, cos_phi=report.cos_phi,
        )
    return bs


def cmd_scan(args, cfg):
    bs = _scan_splitter(args, cfg)
    state = cfg.source().state
    tmin, tmax, n = cfg.scan()
    want_counts = args.counts or args.command == "counts"
    det = cfg.detector() if want_counts else None
    scan = hom_scan(bs, state, tmin, tmax, n)
    text = to_csv(
        ("tau_ps", "p11", "p20", "p02", "p_abs"),
        ((p.tau, p.p11, p.p20, p.p02, p.p_abs) for p in scan.points),
    )
    output = args.output
    counts_text = None
    if want_counts:
        records = simulate_counts(bs, state, det, scan.tau, args.seed)
        counts_text = counts_csv(records)
    counts_out = args.counts_output or cfg.raw("run", "counts_output") or _counts_path(output)
    _emit(text, output)
    if counts_text is not None:
        if counts_out is None:
            sys.stdout.write("\n")
        _emit(counts_text, counts_out)
    return EXIT_OK


def cmd_sweep(args, cfg):
    model = cfg.material()
    thetas = cfg.thetas(_parse_floats(args.thetas, "--thetas") if args.thetas is not None else None)
    branch = cfg.branches(args.branch)[0]
    rows = g2_sweep(model, cfg.source(), thetas, branch)
    _emit(sweep_csv(rows), args.output)
    return EXIT_OK


def read_counts(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if r and any(c.strip() for c in r)]
    if not rows:
        raise ConfigError(f"{path}: file is empty")
    header = [c.strip() for c in rows[0]]
    if header[:3] != ["pair", "tau_ps", "counts"]:
        raise ConfigError(f"{path}: expected header 'pair,tau_ps,counts[,expected]'")
    records = []
    for lineno, row in enumerate(rows[1:], start=2):
        try:
            pair = row[0].strip().upper()
            tau = float(row[1])
            counts = int(float(row[2]))
            expected = float(row[3]) if len(row) > 3 and row[3].strip() else float(counts)
        except (ValueError, IndexError):
            raise ConfigError(f"{path}: malformed row {lineno}") from None
        if pair not in PAIRS:
            raise ConfigError(f"{path}: unknown pair {pair!r} on row {lineno}")
        records.append(CountRecord(pair, tau, counts, expected))
    if not records:
        raise ConfigError(f"{path}: no data rows")
    return records


def format_fit_report(results):
    lines = []
    for pair, res in results.items():
        lines.append(f"[{pair}]")
        if isinstance(res, Exception):
            lines.append(f"status = failed ({type(res).__name__}): {res}")
        else:
            lines.append("status = ok")
            for name in ("baseline", "visibility", "delta_hat", "sigma_hat", "tau0_hat", "phase_hat", "residual_rms"):
                lines.append(f"{name} = {getattr(res, name):.12g}")
        lines.append("")
    return "\n".join(lines)


def cmd_fit(args, cfg):
    records = read_counts(args.input)
    source = cfg.source()
    delta_thz = args.delta_thz if args.delta_thz is not None else cfg.number("fit", "delta_thz")
    sigma_thz = args.sigma_thz if args.sigma_thz is not None else cfg.number("fit", "sigma_thz")
    delta = thz_to_rad_per_ps(delta_thz) if delta_thz is not None else source.delta
    sigma = thz_to_rad_per_ps(sigma_thz) if sigma_thz is not None else source.sigma
    use_expected = args.use_expected or cfg.raw("fit", "use_expected", "false").lower() in ("1", "true", "yes")
    results = fit_pairs(records, delta, sigma, use_expected)
    _emit(format_fit_report(results), args.output)
    if all(isinstance(r, Exception) for r in results.values()):
        return EXIT_CHECK
    return EXIT_OK


def cmd_oracle_check(args, cfg):
    n = args.n if args.n is not None else cfg.number("oracle", "n", 1000, cast=int)
    tol = args.tol if args.tol is not None else cfg.number("oracle", "tol", 1e-6)
    if n < 1:
        raise ConfigError("oracle.n: must be >= 1")
    if tol < 0:
        raise ConfigError("oracle.tol: must be >= 0")
    report = sweep_check(n, args.seed, tol, cross_tol=min(tol, 1e-7))
    _emit(report.to_text(), args.output)
    return EXIT_OK if report.passed else EXIT_CHECK


FIG_ALIASES = {f.split("_")[0]: f for f in FIGURES}


def cmd_demo(args, cfg):
    fig_id = FIG_ALIASES.get(args.fig_id, args.fig_id)
    if fig_id not in FIGURES:
        raise ConfigError(f"unknown figure id {args.fig_id!r}; choose from {', '.join(FIGURES)}")
    tmin, tmax, n = cfg.scan()
    fig_cfg = FigureConfig(
        model=cfg.material(),
        detector=cfg.detector(),
        sigma=cfg.source().sigma,
        tau_min=tmin,
        tau_max=tmax,
        n_points=n,
        seed=args.seed,
    )
    bundle = reproduce_figure(fig_id, fig_cfg)
    outdir = args.outdir or args.output or f"{fig_id}_data"
    bundle.write(outdir)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"INI config file (default: ${CONFIG_ENV})")
    common.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    common.add_argument("-o", "--output", help="output file (default: stdout)")

    parser = argparse.ArgumentParser(prog="lossyhom", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("material", parents=[common], help="film T/R/A and exchange phase vs temperature")
    p.add_argument("--thetas", help="comma-separated temperatures in degC")
    p.add_argument("--branch", help="heating, cooling or both")
    p.set_defaults(func=cmd_material)

    for name, helptext in (("scan", "analytic HOM delay scan"), ("counts", "scan plus Poisson counts")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--theta", type=float, help="film temperature in degC")
        p.add_argument("--branch", help="heating or cooling")
        p.add_argument("--counts", action="store_true", help="also emit simulated counts")
        p.add_argument("--counts-output", help="counts CSV path (default: <output>_counts.csv)")
        p.set_defaults(func=cmd_scan)

    p = sub.add_parser("sweep", parents=[common], help="g2(0) versus temperature")
    p.add_argument("--thetas", help="comma-separated temperatures in degC")
    p.add_argument("--branch", help="heating or cooling")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", parents=[common], help="fit a counts CSV, one result per pair")
    p.add_argument("input", help="counts CSV (pair,tau_ps,counts,expected)")
    p.add_argument("--delta-thz", type=float, help="fringe frequency hint in THz")
    p.add_argument("--sigma-thz", type=float, help="bandwidth hint in THz")
    p.add_argument("--use-expected", action="store_true", help="fit the noiseless expected column")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("oracle-check", parents=[common], help="cross-check closed forms against oracles")
    p.add_argument("--n", type=int, help="number of random cases (default 1000)")
    p.add_argument("--tol", type=float, help="analytic vs quadrature tolerance (default 1e-6)")
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("demo", parents=[common], help="write a figure dataset bundle")
    p.add_argument("fig_id", help=", ".join(FIGURES) + " (or fig2..fig5)")
    p.add_argument("--outdir", help="output directory")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    config_path = args.config or os.environ.get(CONFIG_ENV) or None
    try:
        cfg = RunConfig.from_path(config_path)
        if args.seed is None:
            args.seed = cfg.number("run", "seed", 0, cast=int)
        if args.output is None:
            args.output = cfg.raw("run", "output")
        return args.func(args, cfg)
    except NotPhysical as exc:
        print(f"lossyhom: {exc}", file=sys.stderr)
        return EXIT_PHYSICAL
    except (ConfigError, ZeroBaseline, ValueError) as exc:
        print(f"lossyhom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
