"""Least-squares fitting of HOM coincidence scans.

The fitted model is

    B * (1 - V * cos(delta * (tau - tau0) + phase) * exp(-sigma^2 (tau - tau0)^2))

so a positive visibility ``V`` is a dip and a negative one a peak. The
phase is reported in (-pi/2, pi/2]; a phase outside that range is folded
into the sign of ``V``. When the bins are degenerate (``delta_hint == 0``)
the fringe frequency and phase are fixed at zero.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .errors import DegenerateData, NoConvergence

MAX_ITER = 200
XTOL = 1e-8
STALL_TOL = 1e-4
VISIBILITY_CAP = 1.5


@dataclass(frozen=True)
class FitResult:
    baseline: float
    visibility: float
    delta_hat: float
    sigma_hat: float
    tau0_hat: float
    phase_hat: float
    residual_rms: float
    pair: str = ""


def hom_model(tau, baseline, visibility, delta, sigma, tau0, phase):
    x = np.asarray(tau, dtype=float) - tau0
    return baseline * (1.0 - visibility * np.cos(delta * x + phase) * np.exp(-(sigma * x) ** 2))


def _canonical(v, delta, sigma, phase):
    if delta < 0:
        delta, phase = -delta, -phase
    sigma = abs(sigma)
    phase = math.remainder(phase, 2.0 * math.pi)
    if phase > 0.5 * math.pi:
        phase, v = phase - math.pi, -v
    elif phase <= -0.5 * math.pi:
        phase, v = phase + math.pi, -v
    return v, delta, sigma, phase


def _grid_seed(tau, y, deltas, sigmas, tau0s):
    """Best starting point over the grid; linear parameters solved exactly."""
    D, S, T0 = np.meshgrid(deltas, sigmas, tau0s, indexing="ij")
    D, S, T0 = D.ravel(), S.ravel(), T0.ravel()
    x = tau[None, :] - T0[:, None]
    env = np.exp(-(S[:, None] * x) ** 2)
    ones = np.ones_like(x)
    cols = [ones, np.cos(D[:, None] * x) * env]
    with_sine = np.any(deltas > 0)
    if with_sine:
        cols.append(np.sin(D[:, None] * x) * env)
    G = np.stack(cols, axis=-1)
    GtG = np.einsum("kni,knj->kij", G, G)
    Gty = np.einsum("kni,n->ki", G, y)
    GtG += 1e-12 * np.trace(GtG, axis1=1, axis2=2)[:, None, None] * np.eye(G.shape[-1])
    coef = np.linalg.solve(GtG, Gty[..., None])[..., 0]
    ssr = np.sum((np.einsum("kni,ki->kn", G, coef) - y[None, :]) ** 2, axis=1)
    k = int(np.argmin(ssr))
    a = coef[k]
    B = a[0] if a[0] != 0 else float(np.mean(y)) or 1.0
    a1 = a[1]
    a2 = a[2] if with_sine else 0.0
    v = math.hypot(a1, a2) / B
    phase = math.atan2(a2 / B, -a1 / B) if v > 0 else 0.0
    return B, v, D[k], S[k], T0[k], phase


def fit_scan(
    records,
    model_hint="dip_peak",
    delta_hint=None,
    sigma_hint=None,
    use_expected=False,
):
    """Fit one detector pair's scan.

    ``delta_hint`` and ``sigma_hint`` (rad/ps) set the coarse search grid:
    fringe frequency over 16 steps in ``[0, 2 * delta_hint]``, width over
    ``{0.25, 0.5, 1, 2} * sigma_hint`` and centre over 32 steps spanning the
    scan. ``use_expected`` fits the noiseless means instead of the counts.
    """
    if model_hint != "dip_peak":
        raise ValueError(f"unknown model_hint {model_hint!r}")
    records = sorted(records, key=lambda rec: rec.tau)
    pairs = {rec.pair for rec in records}
    if len(pairs) > 1:
        raise ValueError(f"records mix detector pairs {sorted(pairs)}")
    pair = pairs.pop() if pairs else ""
    tau = np.array([rec.tau for rec in records], dtype=float)
    y = np.array([rec.expected if use_expected else rec.counts for rec in records], dtype=float)
    if len(tau) < 20:
        raise ValueError(f"need at least 20 scan points, got {len(tau)}")
    if not np.any(y != 0):
        raise DegenerateData(f"pair {pair or '?'}: all counts are zero")
    if np.ptp(y) == 0:
        raise DegenerateData(f"pair {pair or '?'}: scan is flat, no interference feature")

    span = tau[-1] - tau[0]
    if sigma_hint is None:
        sigma_hint = 10.0 / span
    fixed_fringe = delta_hint is not None and delta_hint == 0
    if delta_hint is None:
        delta_hint = 0.25 * math.pi / np.median(np.diff(tau))
    deltas = np.array([0.0]) if fixed_fringe else np.linspace(0.0, 2.0 * delta_hint, 16)
    sigmas = sigma_hint * np.array([0.25, 0.5, 1.0, 2.0])
    tau0s = np.linspace(tau[0], tau[-1], 32)

    B, v, d, s, t0, ph = _grid_seed(tau, y, deltas, sigmas, tau0s)

    def unpack(p):
        if fixed_fringe:
            return p[0], p[1], 0.0, p[2], p[3], 0.0
        return tuple(p)

    def residual(p):
        return hom_model(tau, *unpack(p)) - y

    def jac(p):
        Bv, V, D, S, T0, P = unpack(p)
        x = tau - T0
        env = np.exp(-(S * x) ** 2)
        c, sn = np.cos(D * x + P), np.sin(D * x + P)
        d_b = 1.0 - V * c * env
        d_v = -Bv * c * env
        d_d = Bv * V * sn * x * env
        d_s = Bv * V * c * env * 2.0 * S * x * x
        d_t0 = -Bv * V * env * (sn * D + c * 2.0 * S * S * x)
        d_p = Bv * V * sn * env
        if fixed_fringe:
            return np.column_stack([d_b, d_v, d_s, d_t0])
        return np.column_stack([d_b, d_v, d_d, d_s, d_t0, d_p])

    p0 = [B, v, s, t0] if fixed_fringe else [B, v, d, s, t0, ph]
    sol = least_squares(
        residual, p0, jac=jac, method="lm", x_scale="jac",
        xtol=XTOL, ftol=1e-15, gtol=1e-15, max_nfev=MAX_ITER,
    )
    if sol.status == 0:
        probe = least_squares(
            residual, sol.x, jac=jac, method="lm", x_scale="jac",
            xtol=XTOL, ftol=1e-15, gtol=1e-15, max_nfev=2,
        )
        step = np.linalg.norm(probe.x - sol.x) / max(np.linalg.norm(sol.x), 1e-300)
        if step > STALL_TOL:
            raise NoConvergence(
                f"pair {pair or '?'}: no convergence after {MAX_ITER} evaluations "
                f"(relative step {step:.2e})"
            )
    Bf, V, D, S, T0, P = unpack(sol.x)
    V, D, S, P = _canonical(V, D, S, P)
    if abs(V) > VISIBILITY_CAP:
        raise NoConvergence(f"pair {pair or '?'}: fitted visibility {V:.3g} exceeds sanity cap")
    rms = float(np.sqrt(np.mean(residual(sol.x) ** 2)))
    return FitResult(
        baseline=float(Bf), visibility=float(V), delta_hat=float(D), sigma_hat=float(S),
        tau0_hat=float(T0), phase_hat=float(P), residual_rms=rms, pair=pair,
    )
