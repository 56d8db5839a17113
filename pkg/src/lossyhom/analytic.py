"""Closed-form two-photon outcome probabilities for a lossy beam splitter.

The input is a frequency-bin entangled pair

    (|w1>_a |w2>_b + exp(i phi_omega) |w2>_a |w1>_b) / sqrt(2)

with bin separation ``delta`` (rad/ps), Gaussian single-photon intensity
spectra of RMS width ``sigma`` (rad/ps), and a relative delay ``tau`` (ps)
on input arm a. Bins are assumed well separated (``delta >> sigma``) or
degenerate (``delta == 0`` with ``phi_omega == 0``).

Two normalisation conventions are exposed:

``"physical"`` (default)
    True outcome probabilities. The cross-port interference term is
    ``cos(2 phi_rt) * cos(delta tau + phi_omega)``, and each same-port
    probability is ``|t|^2 |r|^2 (1 + cos(delta tau + phi_omega) env)``.
    These agree with the brute-force simulators in :mod:`lossyhom.oracle`.

``"as_published"``
    The commonly quoted closed forms, with cross-port term
    ``cos(delta tau + 2 phi_rt + phi_omega)`` and same-port probability
    ``2 |t|^2 |r|^2 (1 + cos(...) env)``. They coincide with the physical
    cross-port form whenever ``sin(2 phi_rt) sin(delta tau + phi_omega) = 0``
    (every symmetric or anti-symmetric input at zero delay) and the
    same-port form is twice the true probability.
"""

import math
from dataclasses import dataclass

import numpy as np

from .core import BeamSplitter, require_physical, wrap_phase
from .errors import BaselineTooShort, ZeroBaseline

CONVENTIONS = ("physical", "as_published")
TWO_PI = 2.0 * math.pi


def thz_to_rad_per_ps(f_thz):
    """Ordinary frequency in THz to angular frequency in rad/ps."""
    return TWO_PI * f_thz


@dataclass(frozen=True)
class BiphotonState:
    delta: float
    phi_omega: float
    sigma: float

    def __post_init__(self):
        if not self.delta >= 0:
            raise ValueError(f"delta must be >= 0, got {self.delta!r}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma!r}")
        object.__setattr__(self, "delta", float(self.delta))
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "phi_omega", wrap_phase(self.phi_omega))


@dataclass(frozen=True)
class HOMScanPoint:
    tau: float
    p11: float
    p20: float
    p02: float
    p_abs: float


@dataclass(frozen=True)
class HOMScan:
    points: list
    bs: BeamSplitter
    state: BiphotonState

    def __post_init__(self):
        taus = np.array([p.tau for p in self.points])
        if len(taus) > 1 and not np.all(np.diff(taus) > 0):
            raise ValueError("scan delays must be strictly increasing")

    def column(self, name):
        return np.array([getattr(p, name) for p in self.points])

    @property
    def tau(self):
        return self.column("tau")


def _check_convention(convention):
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")


def _envelope(state, tau):
    return np.exp(-(state.sigma**2) * np.square(tau))


def _scalar_or_array(x):
    if np.ndim(x) == 0:
        return float(x)
    return x


def p11(bs, state, tau, convention="physical"):
    """Probability that the photons leave through opposite output ports."""
    _check_convention(convention)
    require_physical(bs)
    tau = np.asarray(tau, dtype=float)
    T, R = bs.T, bs.R
    beat = state.delta * tau + state.phi_omega
    if convention == "physical":
        fringe = math.cos(2.0 * bs.phi_rt) * np.cos(beat)
    else:
        fringe = np.cos(beat + 2.0 * bs.phi_rt)
    return _scalar_or_array(T * T + R * R + 2.0 * T * R * fringe * _envelope(state, tau))


def p_bunch(bs, state, tau, convention="physical"):
    """Same-port probabilities ``(p20, p02)``; independent of ``phi_rt``."""
    _check_convention(convention)
    require_physical(bs)
    tau = np.asarray(tau, dtype=float)
    scale = 1.0 if convention == "physical" else 2.0
    beat = state.delta * tau + state.phi_omega
    p = scale * bs.T * bs.R * (1.0 + np.cos(beat) * _envelope(state, tau))
    p = _scalar_or_array(p)
    return p, p


def p_absorbed(bs, state, tau):
    """Probability that at least one photon is absorbed."""
    cross = np.asarray(p11(bs, state, tau))
    p20, p02 = p_bunch(bs, state, tau)
    return _scalar_or_array(np.clip(1.0 - cross - np.asarray(p20) - np.asarray(p02), 0.0, 1.0))


def outcome_arrays(bs, state, tau):
    """Vectorised ``(p11, p20, p02, p_abs)`` in the physical convention."""
    tau = np.asarray(tau, dtype=float)
    a = np.asarray(p11(bs, state, tau))
    b, c = (np.asarray(x) for x in p_bunch(bs, state, tau))
    d = np.clip(1.0 - a - b - c, 0.0, 1.0)
    return a, b, c, d


def hom_scan(bs, state, tau_min, tau_max, n):
    if n < 2:
        raise ValueError("n must be >= 2")
    if not tau_min < tau_max:
        raise ValueError("tau_min must be < tau_max")
    taus = np.linspace(tau_min, tau_max, int(n))
    a, b, c, d = outcome_arrays(bs, state, taus)
    points = [
        HOMScanPoint(float(t), float(x), float(y), float(z), float(w))
        for t, x, y, z, w in zip(taus, a, b, c, d)
    ]
    return HOMScan(points=points, bs=bs, state=state)


def g2_zero(bs, state):
    """Zero-delay cross-port coincidence over its long-delay baseline.

    Values below 1 are the bosonic (dip-like) regime, above 1 the
    fermion-like (peak-like) one.
    """
    require_physical(bs)
    baseline = bs.T**2 + bs.R**2
    if baseline <= 0.0:
        raise ZeroBaseline("|t|^4 + |r|^4 = 0: no coincidences to normalise by")
    return float(p11(bs, state, 0.0)) / baseline


def visibility(scan, channel="cross"):
    """Signed visibility ``(P_base - P(0)) / P_base``; positive for a dip.

    ``P_base`` is the mean of the outermost 10% of scan points (half from
    each end).
    """
    if channel == "cross":
        values = scan.column("p11")
    elif channel == "same":
        values = scan.column("p20")
    else:
        raise ValueError(f"channel must be 'cross' or 'same', got {channel!r}")
    taus = scan.tau
    reach = 5.0 / scan.state.sigma
    if taus[0] > -reach or taus[-1] < reach:
        raise BaselineTooShort(
            f"scan [{taus[0]:.6g}, {taus[-1]:.6g}] ps does not reach +/-5/sigma = {reach:.6g} ps"
        )
    k = max(1, int(math.ceil(0.05 * len(taus))))
    base = float(np.mean(np.concatenate([values[:k], values[-k:]])))
    if base == 0.0:
        raise ZeroBaseline("baseline of the selected channel is zero")
    at_zero = float(np.interp(0.0, taus, values))
    return (base - at_zero) / base
