"""Brute-force reference simulators for the two-photon experiment.

Both simulators push the photons through the 4x4 unitary dilation of the
splitter (modes a, b, env_a, env_b), so absorption events are kept rather
than discarded.

* :func:`fock_outcomes` works with discrete modes: two frequency bins times
  two temporal modes per spatial port, and enumerates every two-photon
  output configuration with 2x2 permanents.
* :func:`quad_outcomes` builds the continuous joint spectral amplitude on
  a frequency grid, applies the delay phase, symmetrises over photon
  exchange, and integrates on the 2-D grid.

Neither routine uses the closed forms in :mod:`lossyhom.analytic`.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .analytic import BiphotonState, outcome_arrays, p11 as analytic_p11
from .core import random_physical_bs, unitary_dilation
from .errors import GridTooCoarse


@dataclass(frozen=True)
class FrequencyGrid:
    n_points: int = 512
    span_sigmas: float = 6.0

    def __post_init__(self):
        if self.n_points < 64:
            raise ValueError("n_points must be >= 64")
        if self.span_sigmas < 4:
            raise ValueError("span_sigmas must be >= 4")

    def refined(self):
        return FrequencyGrid(2 * self.n_points, self.span_sigmas)


@dataclass(frozen=True)
class OutcomeDistribution:
    p11: float
    p20: float
    p02: float
    p_one_lost: float
    p_both_lost: float

    @property
    def p_abs(self):
        return self.p_one_lost + self.p_both_lost

    @property
    def total(self):
        return self.p11 + self.p20 + self.p02 + self.p_one_lost + self.p_both_lost

    def as_dict(self):
        return {
            "p11": self.p11,
            "p20": self.p20,
            "p02": self.p02,
            "p_one_lost": self.p_one_lost,
            "p_both_lost": self.p_both_lost,
        }


def _classify(port_probs):
    """Fold a 4x4 table of (port_p, port_q) probabilities into outcomes."""
    p11 = port_probs[0, 1] + port_probs[1, 0]
    p20 = port_probs[0, 0]
    p02 = port_probs[1, 1]
    one = port_probs[:2, 2:].sum() + port_probs[2:, :2].sum()
    both = port_probs[2:, 2:].sum()
    return OutcomeDistribution(float(p11), float(p20), float(p02), float(one), float(both))


# ---------------------------------------------------------------------------
# discrete-mode (Fock) oracle
# ---------------------------------------------------------------------------

# internal mode labels: (frequency bin, temporal mode); temporal "w" is the
# part of the delayed photon orthogonal to the undelayed one
_INTERNAL = [(1, "u"), (2, "u"), (1, "w"), (2, "w")]
_N_INT = len(_INTERNAL)


def _mode(port, freq, tmode):
    return port * _N_INT + _INTERNAL.index((freq, tmode))


def fock_outcomes(bs, overlap, phi_total):
    """Outcome distribution for two photons in discrete modes.

    The input is ``(a1u b2v + exp(i phi_total) a2u b1v) / sqrt(2)`` where
    ``v = overlap * u + sqrt(1 - overlap^2) * w`` is the temporal mode of
    the photon in arm b.
    """
    if not 0.0 <= overlap <= 1.0:
        raise ValueError("overlap must lie in [0, 1]")
    U = unitary_dilation(bs)
    M = np.kron(U, np.eye(_N_INT))
    s = math.sqrt(max(0.0, 1.0 - overlap * overlap))
    phase = complex(math.cos(phi_total), math.sin(phi_total))
    a, b = 0, 1
    terms = [
        (overlap, _mode(a, 1, "u"), _mode(b, 2, "u")),
        (s, _mode(a, 1, "u"), _mode(b, 2, "w")),
        (phase * overlap, _mode(a, 2, "u"), _mode(b, 1, "u")),
        (phase * s, _mode(a, 2, "u"), _mode(b, 1, "w")),
    ]
    # amp[p, q] = sum_c c * perm([[M_pi, M_pj], [M_qi, M_qj]])
    amp = np.zeros((M.shape[0], M.shape[0]), dtype=complex)
    for c, i, j in terms:
        amp += (c / math.sqrt(2.0)) * (np.outer(M[:, i], M[:, j]) + np.outer(M[:, j], M[:, i]))
    probs = np.abs(amp) ** 2
    # ordered pairs p != q double count each configuration; p == q carries 1/2!
    upper = np.triu(probs, 1) + 0.5 * np.diag(np.diag(probs))
    ports = np.arange(M.shape[0]) // _N_INT
    table = np.zeros((4, 4))
    # p <= q implies port(p) <= port(q), so only the upper triangle fills
    np.add.at(table, (ports[:, None], ports[None, :]), upper)
    return _classify(table)


# ---------------------------------------------------------------------------
# continuous-mode quadrature oracle
# ---------------------------------------------------------------------------


def _frequency_lattice(state, grid):
    half = grid.n_points // 2
    h = 2.0 * grid.span_sigmas * state.sigma / (2 * half)
    shift = int(round(state.delta / h))
    k = np.union1d(np.arange(-half, half + 1), np.arange(shift - half, shift + half + 1))
    return -0.5 * state.delta + k * h, h


def _quad_gram(state, tau, grid):
    """Return ``(I_FF, I_FT)`` for the normalised joint spectral amplitude."""
    x, h = _frequency_lattice(state, grid)
    w = 4.0 * state.sigma**2
    g1 = np.exp(-np.square(x + 0.5 * state.delta) / w)
    g2 = np.exp(-np.square(x - 0.5 * state.delta) / w)
    phase = np.exp(1j * state.phi_omega)
    # F[i, j]: photon from arm a at x[i], photon from arm b at x[j]
    F = np.outer(g1, g2) + phase * np.outer(g2, g1)
    F *= np.exp(1j * x * tau)[:, None]
    norm = np.vdot(F, F).real * h * h
    if norm < 1e-300:
        raise ValueError("joint spectral amplitude vanishes (degenerate anti-symmetric input)")
    i_ft = np.vdot(F, F.T) * h * h / norm
    return 1.0, complex(i_ft)


def _quad_once(U, state, tau, grid):
    i_ff, i_ft = _quad_gram(state, tau, grid)
    table = np.zeros((4, 4))
    for p in range(4):
        for q in range(p, 4):
            alpha = U[p, 0] * U[q, 1]
            beta = U[q, 0] * U[p, 1]
            if p == q:
                table[p, p] = 0.5 * abs(alpha) ** 2 * (2.0 * i_ff + 2.0 * i_ft.real)
            else:
                table[p, q] = (
                    (abs(alpha) ** 2 + abs(beta) ** 2) * i_ff
                    + 2.0 * (np.conj(alpha) * beta * i_ft).real
                )
    return _classify(table)


CONVERGENCE_TOL = 1e-7


def quad_outcomes(bs, state, tau, grid=None, check_convergence=True):
    """Outcome distribution from frequency-grid quadrature.

    With ``check_convergence`` the calculation is repeated on a grid with
    twice the points; :class:`GridTooCoarse` is raised if any probability
    moves by more than 1e-7.
    """
    grid = grid or FrequencyGrid()
    U = unitary_dilation(bs)
    out = _quad_once(U, state, float(tau), grid)
    if check_convergence:
        fine = _quad_once(U, state, float(tau), grid.refined())
        a, b = out.as_dict(), fine.as_dict()
        worst = max(abs(a[k] - b[k]) for k in a)
        if worst > CONVERGENCE_TOL:
            raise GridTooCoarse(
                f"doubling the grid changed a probability by {worst:.3g} (> {CONVERGENCE_TOL:g})"
            )
    return out


# ---------------------------------------------------------------------------
# randomised three-way comparison
# ---------------------------------------------------------------------------

ANALYTIC_CHANNELS = ("p11", "p20", "p02", "p_abs")
CROSS_CHANNELS = ("p11", "p20", "p02", "p_one_lost", "p_both_lost")


def random_case(rng):
    """Draw ``(bs, state, tau)`` for the oracle sweep.

    Frequency bins are either degenerate (symmetric input) or separated by
    at least ten bandwidths, the regime in which the closed forms hold.
    """
    bs = random_physical_bs(int(rng.integers(2**63)))
    sigma = rng.uniform(0.5, 5.0)
    if rng.random() < 0.25:
        state = BiphotonState(0.0, 0.0, sigma)
    else:
        state = BiphotonState(sigma * rng.uniform(10.0, 20.0), rng.uniform(-math.pi, math.pi), sigma)
    tau = rng.uniform(-3.0, 3.0) / sigma
    return bs, state, tau


@dataclass
class SweepReport:
    n_cases: int
    seed: int
    tol: float
    cross_tol: float
    analytic_vs_quad: dict = field(default_factory=dict)
    quad_vs_fock: dict = field(default_factory=dict)
    published_vs_quad_p11: float = 0.0
    max_norm_error: float = 0.0
    worst_case: int = -1

    @property
    def max_analytic_deviation(self):
        return max(self.analytic_vs_quad.values(), default=0.0)

    @property
    def max_cross_deviation(self):
        return max(self.quad_vs_fock.values(), default=0.0)

    @property
    def passed(self):
        return self.max_analytic_deviation <= self.tol and self.max_cross_deviation <= self.cross_tol

    def to_text(self):
        lines = [
            f"oracle check: {self.n_cases} cases, seed {self.seed}",
            f"analytic vs quadrature (tol {self.tol:.3g}):",
        ]
        lines += [f"  {k:<12s} {v:.3e}" for k, v in self.analytic_vs_quad.items()]
        lines.append(f"quadrature vs fock (tol {self.cross_tol:.3g}):")
        lines += [f"  {k:<12s} {v:.3e}" for k, v in self.quad_vs_fock.items()]
        lines.append(f"max |sum - 1|     {self.max_norm_error:.3e}")
        lines.append(f"as_published p11 vs quadrature (informational): {self.published_vs_quad_p11:.3e}")
        lines.append(f"worst case index  {self.worst_case}")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines) + "\n"


def sweep_check(n_cases, seed=0, tol=1e-6, cross_tol=CONVERGENCE_TOL, grid=None):
    """Compare analytic, quadrature and Fock results on random cases.

    Case ``i`` is drawn from ``numpy.random.default_rng([seed, i])`` so the
    report does not depend on evaluation order.
    """
    if n_cases < 1:
        raise ValueError("n_cases must be >= 1")
    grid = grid or FrequencyGrid()
    report = SweepReport(n_cases=n_cases, seed=seed, tol=tol, cross_tol=cross_tol)
    a_dev = dict.fromkeys(ANALYTIC_CHANNELS, 0.0)
    c_dev = dict.fromkeys(CROSS_CHANNELS, 0.0)
    worst = -1.0
    for i in range(n_cases):
        rng = np.random.default_rng([seed, i])
        bs, state, tau = random_case(rng)
        quad = quad_outcomes(bs, state, tau, grid, check_convergence=False)
        overlap = math.exp(-0.5 * (state.sigma * tau) ** 2)
        fock = fock_outcomes(bs, overlap, state.delta * tau + state.phi_omega)
        ana = dict(zip(ANALYTIC_CHANNELS, (float(v) for v in outcome_arrays(bs, state, tau))))
        qd = quad.as_dict()
        qd["p_abs"] = quad.p_abs
        fd = fock.as_dict()
        case_worst = 0.0
        for k in ANALYTIC_CHANNELS:
            d = abs(ana[k] - qd[k])
            a_dev[k] = max(a_dev[k], d)
            case_worst = max(case_worst, d)
        for k in CROSS_CHANNELS:
            d = abs(qd[k] - fd[k])
            c_dev[k] = max(c_dev[k], d)
        pub = abs(analytic_p11(bs, state, tau, convention="as_published") - quad.p11)
        report.published_vs_quad_p11 = max(report.published_vs_quad_p11, pub)
        report.max_norm_error = max(
            report.max_norm_error, abs(quad.total - 1.0), abs(fock.total - 1.0)
        )
        if case_worst > worst:
            worst, report.worst_case = case_worst, i
    report.analytic_vs_quad = a_dev
    report.quad_vs_fock = c_dev
    return report
