"""Normal-incidence thin-film optics and two-phase effective-medium mixing.

Conventions: fields vary as ``exp(i(kz - wt))``, so absorbing media have
``Im(n) > 0``. Lengths are in nm.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .core import BeamSplitter


@dataclass(frozen=True)
class Layer:
    n: complex
    d: float

    def __post_init__(self):
        object.__setattr__(self, "n", complex(self.n))
        if not self.d > 0:
            raise ValueError(f"layer thickness must be > 0, got {self.d!r}")
        if self.n.imag < 0:
            raise ValueError(f"Im(n) must be >= 0 (passive layer), got {self.n!r}")


@dataclass(frozen=True)
class LayerStack:
    layers: tuple = field(default_factory=tuple)
    n_ambient: float = 1.0
    n_substrate: float = 1.76
    wavelength: float = 810.0

    def __post_init__(self):
        layers = tuple(
            layer if isinstance(layer, Layer) else Layer(*layer) for layer in self.layers
        )
        object.__setattr__(self, "layers", layers)
        if not (self.n_ambient > 0 and self.n_substrate > 0 and self.wavelength > 0):
            raise ValueError("ambient/substrate indices and wavelength must be positive")

    def reversed(self):
        """The same stack seen from the substrate side."""
        return LayerStack(
            tuple(reversed(self.layers)), self.n_substrate, self.n_ambient, self.wavelength
        )


def characteristic_matrix(stack):
    """Product of the per-layer 2x2 characteristic matrices, top to bottom."""
    M = np.eye(2, dtype=complex)
    k0 = 2.0 * math.pi / stack.wavelength
    for layer in stack.layers:
        delta = k0 * layer.n * layer.d
        c, s = cmath.cos(delta), cmath.sin(delta)
        M = M @ np.array([[c, -1j * s / layer.n], [-1j * layer.n * s, c]])
    return M


def tmm_stack(stack):
    """Amplitude coefficients ``(t, r, A)`` for light incident from the ambient.

    ``A = 1 - |t|^2 n_sub / n_amb - |r|^2`` is the absorbed fraction.
    """
    M = characteristic_matrix(stack)
    n0, ns = stack.n_ambient, stack.n_substrate
    B = M[0, 0] + M[0, 1] * ns
    C = M[1, 0] + M[1, 1] * ns
    denom = n0 * B + C
    r = complex((n0 * B - C) / denom)
    t = complex(2.0 * n0 / denom)
    A = 1.0 - abs(t) ** 2 * ns / n0 - abs(r) ** 2
    return t, r, A


def splitter_from_stack(stack):
    """Symmetric two-port splitter equivalent to a (possibly asymmetric) stack.

    The transmission is power normalised, ``t_mag = |t| sqrt(n_sub/n_amb)``.
    Reflection from the two sides generally differs; the splitter uses
    their geometric mean magnitude and mean phase. With that choice the
    symmetric matrix has the same determinant and no larger Frobenius norm
    than the true scattering matrix, so it is passive whenever the film is.
    """
    t, r, _ = tmm_stack(stack)
    _, r_back, _ = tmm_stack(stack.reversed())
    t_mag = min(abs(t) * math.sqrt(stack.n_substrate / stack.n_ambient), 1.0)
    r_mag = min(math.sqrt(abs(r) * abs(r_back)), 1.0)
    phi_r = 0.5 * (cmath.phase(r) + cmath.phase(r_back))
    return BeamSplitter(t_mag, r_mag, phi_r - cmath.phase(t))


def effective_index(n_ins, n_met, fill):
    """Bruggeman effective index of a two-phase mixture.

    ``fill`` is the volume fraction of the ``n_met`` phase. Of the two roots
    of the Bruggeman quadratic in permittivity the one with non-negative
    imaginary part is kept (for lossless inputs, the positive one).
    """
    if not 0.0 <= fill <= 1.0:
        raise ValueError("fill must lie in [0, 1]")
    e_i, e_m = complex(n_ins) ** 2, complex(n_met) ** 2
    f_m, f_i = fill, 1.0 - fill
    # 2 e^2 - b e - e_i e_m = 0
    b = (2.0 * f_m - f_i) * e_m + (2.0 * f_i - f_m) * e_i
    root = cmath.sqrt(b * b + 8.0 * e_i * e_m)
    cands = [(b + root) / 4.0, (b - root) / 4.0]
    eps = max(cands, key=lambda e: (e.imag > -1e-12 * max(1.0, abs(e)), e.real))
    return cmath.sqrt(eps)
