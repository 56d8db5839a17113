"""Lossy two-port beam splitters: passivity checks and unitary dilation.

The splitter acts on the input annihilation operators as

    a_out = t a_in + r b_in + (noise)
    b_out = t b_in + r a_in + (noise)

with ``t = t_mag`` (real, the transmission phase is fixed to zero) and
``r = r_mag * exp(1j * phi_rt)``. Only the relative phase ``phi_rt`` is
observable. The noise terms are realised explicitly by two environment
modes in :func:`unitary_dilation`.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotPhysical

PHYSICAL_TOL = 1e-12
UNITARITY_TOL = 1e-12


def wrap_phase(phi):
    """Map an angle into (-pi, pi]."""
    phi = math.fmod(float(phi), 2.0 * math.pi)
    if phi > math.pi:
        phi -= 2.0 * math.pi
    elif phi <= -math.pi:
        phi += 2.0 * math.pi
    return phi


@dataclass(frozen=True)
class BeamSplitter:
    """Magnitudes and exchange phase of a symmetric, possibly lossy two-port.

    A ``BeamSplitter`` may be unphysical; use :func:`check_physical` to test
    it. Construction only rejects magnitudes outside [0, 1] and non-finite
    values.
    """

    t_mag: float
    r_mag: float
    phi_rt: float

    def __post_init__(self):
        for name in ("t_mag", "r_mag", "phi_rt"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        for name in ("t_mag", "r_mag"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
        object.__setattr__(self, "phi_rt", wrap_phase(self.phi_rt))

    @classmethod
    def from_intensities(cls, T, R, phi_rt):
        """Build from transmission/reflection probabilities."""
        return cls(math.sqrt(T), math.sqrt(R), phi_rt)

    @property
    def t(self):
        return complex(self.t_mag)

    @property
    def r(self):
        return self.r_mag * complex(math.cos(self.phi_rt), math.sin(self.phi_rt))

    @property
    def T(self):
        return self.t_mag**2

    @property
    def R(self):
        return self.r_mag**2

    @property
    def loss(self):
        """Single-photon absorption probability 1 - |t|^2 - |r|^2."""
        return 1.0 - self.T - self.R


@dataclass(frozen=True)
class PhysicalityReport:
    physical: bool
    bound: float
    cos_phi: float
    excess_intensity: float

    def __bool__(self):
        return self.physical


def phase_bound(t_mag, r_mag):
    """Right-hand side of the passivity inequality on |cos(phi_rt)|.

    Returns ``(1 - t^2 - r^2) / (2 t r)`` without clamping, or ``math.inf``
    when ``t * r == 0`` (phase unconstrained).
    """
    prod = t_mag * r_mag
    if prod == 0.0:
        return math.inf
    return (1.0 - t_mag**2 - r_mag**2) / (2.0 * prod)


def check_physical(bs, tol=PHYSICAL_TOL):
    excess = bs.T + bs.R - 1.0
    bound = phase_bound(bs.t_mag, bs.r_mag)
    cos_phi = math.cos(bs.phi_rt)
    ok = excess <= tol and abs(cos_phi) <= min(bound, 1.0) + tol
    return PhysicalityReport(
        physical=bool(ok),
        bound=bound,
        cos_phi=cos_phi,
        excess_intensity=max(excess, 0.0),
    )


def require_physical(bs):
    report = check_physical(bs)
    if not report.physical:
        if report.excess_intensity > 0:
            msg = (
                f"not physical: |t|^2+|r|^2 = {bs.T + bs.R:.12g} exceeds 1"
            )
        else:
            msg = (
                f"not physical: |cos(phi_rt)| = {abs(report.cos_phi):.12g} "
                f"exceeds passivity bound {report.bound:.12g}"
            )
        raise NotPhysical(msg, bound=report.bound, cos_phi=report.cos_phi)
    return report


def scattering_matrix(bs):
    t, r = bs.t, bs.r
    return np.array([[t, r], [r, t]], dtype=complex)


def _psd_sqrt(h):
    # h is Hermitian positive semidefinite up to rounding
    w, v = np.linalg.eigh(h)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def unitary_dilation(bs):
    """4x4 unitary whose upper-left 2x2 block is the scattering matrix.

    Modes are ordered (a, b, env_a, env_b). Uses the Halmos completion
    ``[[S, D*], [D, -S^H]]`` with ``D* = sqrt(I - S S^H)`` and
    ``D = sqrt(I - S^H S)``.
    """
    require_physical(bs)
    S = scattering_matrix(bs)
    eye = np.eye(2)
    d_left = _psd_sqrt(eye - S @ S.conj().T)
    d_right = _psd_sqrt(eye - S.conj().T @ S)
    return np.block([[S, d_left], [d_right, -S.conj().T]])


def unitarity_residual(U):
    return float(np.max(np.abs(U @ U.conj().T - np.eye(U.shape[0]))))


def allowed_phase_arc(t_mag, r_mag):
    """Return ``(lo, hi)`` so that phi_rt in [lo, hi] (or its negative) is allowed.

    Returns ``None`` when no phase is allowed (|t|^2 + |r|^2 > 1).
    """
    bound = phase_bound(t_mag, r_mag)
    if bound < -PHYSICAL_TOL:
        return None
    lo = math.acos(min(max(bound, 0.0), 1.0))
    return lo, math.pi - lo


def random_physical_bs(seed):
    """Draw a physical splitter, deterministic in ``seed``.

    ``(|t|^2, |r|^2)`` is uniform on the simplex ``T + R <= 1``; the phase is
    uniform on the allowed arc (either sign with equal probability).
    """
    rng = np.random.default_rng(seed)
    T, R, _ = rng.dirichlet((1.0, 1.0, 1.0))
    t_mag, r_mag = math.sqrt(T), math.sqrt(R)
    lo, hi = allowed_phase_arc(t_mag, r_mag)
    phi = rng.uniform(lo, hi)
    if rng.random() < 0.5:
        phi = -phi
    return BeamSplitter(t_mag, r_mag, phi)
