"""VO2 film response versus temperature.

Two sources of (T, R, A, phi_rt) are provided: a phenomenological
:class:`HysteresisModel` (logistic insulator-metal transition with separate
heating and cooling critical temperatures) and a measured
:class:`CalibrationTable` loaded from CSV. Both expose ``tra_at``,
``exchange_phase_at`` and ``splitter_at`` and always return physical
splitters.
"""

import csv
import enum
import io
import math
import os
from dataclasses import dataclass

import numpy as np

from .core import BeamSplitter, allowed_phase_arc
from .errors import NonMonotonic, ParseError, RowNotNormalized


class Branch(str, enum.Enum):
    HEATING = "heating"
    COOLING = "cooling"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"branch must be 'heating' or 'cooling', got {value!r}") from None


def logistic(x):
    # numerically safe for large |x|
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def clamp_to_arc(phi, T, R):
    """Clamp an exchange phase in [0, pi] into the passivity-allowed arc."""
    lo, hi = allowed_phase_arc(math.sqrt(T), math.sqrt(R))
    return min(max(phi, lo), hi)


@dataclass(frozen=True)
class HysteresisModel:
    theta_c_heat: float = 68.0
    theta_c_cool: float = 62.0
    width: float = 3.0
    a_ins: float = 0.30
    a_met: float = 0.52
    balance_eta: float = 0.5

    def __post_init__(self):
        if not (0.0 <= self.a_ins < self.a_met <= 1.0):
            raise ValueError("need 0 <= a_ins < a_met <= 1")
        if not self.width > 0:
            raise ValueError("width must be > 0")
        if not self.theta_c_cool <= self.theta_c_heat:
            raise ValueError("theta_c_cool must not exceed theta_c_heat")
        if not 0.0 < self.balance_eta < 1.0:
            raise ValueError("balance_eta must lie in (0, 1)")

    @property
    def hysteresis_shift(self):
        return self.theta_c_heat - self.theta_c_cool

    def critical_temperature(self, branch):
        branch = Branch.parse(branch)
        return self.theta_c_heat if branch is Branch.HEATING else self.theta_c_cool

    def metallic_fraction(self, theta, branch):
        return logistic((theta - self.critical_temperature(branch)) / self.width)

    def tra_from_fraction(self, fraction):
        A = self.a_ins + (self.a_met - self.a_ins) * fraction
        rest = 1.0 - A
        return self.balance_eta * rest, (1.0 - self.balance_eta) * rest, A

    def phase_from_fraction(self, fraction):
        T, R, _ = self.tra_from_fraction(fraction)
        target = 0.5 * math.pi * (1.0 + fraction)
        return clamp_to_arc(target, T, R)

    def tra_at(self, theta, branch=Branch.HEATING):
        return self.tra_from_fraction(self.metallic_fraction(theta, branch))

    def exchange_phase_at(self, theta, branch=Branch.HEATING):
        return self.phase_from_fraction(self.metallic_fraction(theta, branch))

    def splitter_at(self, theta, branch=Branch.HEATING):
        f = self.metallic_fraction(theta, branch)
        T, R, _ = self.tra_from_fraction(f)
        return BeamSplitter.from_intensities(T, R, self.phase_from_fraction(f))


# module-level aliases matching the functional interface
def tra_at(model, theta, branch=Branch.HEATING):
    return model.tra_at(theta, branch)


def exchange_phase_at(model, theta, branch=Branch.HEATING):
    return model.exchange_phase_at(theta, branch)


def splitter_at(model, theta, branch=Branch.HEATING):
    return model.splitter_at(theta, branch)


class ThermalHistory:
    """Film driven along a temperature path with return-point memory.

    The metallic fraction only grows while heating (following the heating
    branch) and only shrinks while cooling (following the cooling branch),
    so reversals inside the loop leave the film state unchanged until the
    opposite branch is met.
    """

    def __init__(self, model, theta0=25.0):
        self.model = model
        self.theta = float(theta0)
        self.fraction = model.metallic_fraction(theta0, Branch.HEATING)

    def move_to(self, theta):
        theta = float(theta)
        if theta > self.theta:
            self.fraction = max(self.fraction, self.model.metallic_fraction(theta, Branch.HEATING))
        elif theta < self.theta:
            self.fraction = min(self.fraction, self.model.metallic_fraction(theta, Branch.COOLING))
        self.theta = theta
        return self

    def state(self):
        """Current ``(T, R, A, phi_rt)``."""
        T, R, A = self.model.tra_from_fraction(self.fraction)
        return T, R, A, self.model.phase_from_fraction(self.fraction)

    def splitter(self):
        T, R, _, phi = self.state()
        return BeamSplitter.from_intensities(T, R, phi)


# ---------------------------------------------------------------------------
# measured calibration tables
# ---------------------------------------------------------------------------

NORMALIZATION_TOL = 0.02


@dataclass(frozen=True)
class CalibrationTable:
    """Measured film response; linear interpolation, flat extrapolation.

    The table carries a single curve and ignores the branch argument. When
    no ``phi_rt`` column is present the exchange phase is mapped from the
    absorption, rising from pi/2 at the table's minimum absorption to pi
    at its maximum, clamped to the passivity-allowed arc.
    """

    theta: np.ndarray
    T: np.ndarray
    R: np.ndarray
    A: np.ndarray
    phi_rt: np.ndarray = None

    def __post_init__(self):
        validate_rows(self.theta, self.T, self.R, self.A)

    @property
    def rows(self):
        phis = self.phi_rt if self.phi_rt is not None else [None] * len(self.theta)
        return [
            (float(a), float(b), float(c), float(d), None if e is None else float(e))
            for a, b, c, d, e in zip(self.theta, self.T, self.R, self.A, phis)
        ]

    def _interp(self, values, theta):
        return float(np.interp(theta, self.theta, values))

    def tra_at(self, theta, branch=None):
        T = self._interp(self.T, theta)
        R = self._interp(self.R, theta)
        A = self._interp(self.A, theta)
        return T, R, A

    def _intensities(self, theta):
        # renormalised so the splitter sees T + R <= 1 even for rows
        # that sum to slightly above 1 within the table tolerance
        T, R, A = self.tra_at(theta)
        total = T + R + A
        return T / total, R / total

    def exchange_phase_at(self, theta, branch=None):
        T, R = self._intensities(theta)
        if self.phi_rt is not None:
            phi = abs(self._interp(self.phi_rt, theta))
        else:
            a_lo, a_hi = float(self.A.min()), float(self.A.max())
            frac = 0.0 if a_hi == a_lo else (self._interp(self.A, theta) - a_lo) / (a_hi - a_lo)
            phi = 0.5 * math.pi * (1.0 + frac)
        return clamp_to_arc(phi, T, R)

    def splitter_at(self, theta, branch=None):
        T, R = self._intensities(theta)
        return BeamSplitter.from_intensities(T, R, self.exchange_phase_at(theta))


def validate_rows(theta, T, R, A):
    theta = np.asarray(theta, dtype=float)
    if theta.size == 0:
        raise ValueError("calibration table is empty")
    for i in range(1, theta.size):
        if not theta[i] > theta[i - 1]:
            raise NonMonotonic(
                f"theta must be strictly increasing; row {i} ({theta[i]:g}) "
                f"follows {theta[i - 1]:g}",
                index=i,
            )
    for i, (t, r, a) in enumerate(zip(T, R, A)):
        for name, v in (("T", t), ("R", r), ("A", a)):
            if not 0.0 <= v <= 1.0:
                raise RowNotNormalized(f"row {i}: {name} = {v:g} outside [0, 1]", index=i)
        if abs(t + r + a - 1.0) > NORMALIZATION_TOL:
            raise RowNotNormalized(
                f"row {i}: T + R + A = {t + r + a:.6g} is not 1 +/- {NORMALIZATION_TOL}",
                index=i,
            )


def _read_text(source):
    if isinstance(source, (bytes, bytearray)):
        return bytes(source).decode("utf-8")
    if hasattr(source, "read"):
        data = source.read()
        return data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            return fh.read().decode("utf-8")
    raise TypeError(f"cannot read calibration data from {type(source).__name__}")


def load_calibration(source):
    """Parse a ``theta,T,R,A[,phi_rt]`` CSV from bytes, a stream or a path."""
    text = _read_text(source)
    reader = csv.reader(io.StringIO(text))
    header = None
    rows = []
    for row in reader:
        lineno = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        cells = [cell.strip() for cell in row]
        if header is None:
            if cells not in (["theta", "T", "R", "A"], ["theta", "T", "R", "A", "phi_rt"]):
                raise ParseError(f"expected header 'theta,T,R,A[,phi_rt]', got {','.join(cells)!r}", lineno)
            header = cells
            continue
        if len(cells) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(cells)}", lineno)
        try:
            values = [float(c) for c in cells]
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        if not all(math.isfinite(v) for v in values):
            raise ParseError("non-finite value", lineno)
        rows.append(values)
    if header is None:
        raise ParseError("missing header", 1)
    if not rows:
        raise ParseError("no data rows")
    data = np.array(rows, dtype=float)
    phi = data[:, 4].copy() if data.shape[1] == 5 else None
    return CalibrationTable(data[:, 0].copy(), data[:, 1].copy(), data[:, 2].copy(), data[:, 3].copy(), phi)
