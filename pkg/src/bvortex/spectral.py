"""Fourier-multiplier machinery on the unit circle.

The Dirichlet-to-Neumann operator of the disk acts on trace samples at
uniform angles as the multiplier |k| on e^{i k theta}.  The same operator
realizes the half-Laplacian on the compactified line (see ``layer``).

Conventions: for real trace values u_j at theta_j = offset + 2 pi j / n,
the harmonic extension into the disk has Dirichlet energy

    1/2 int_D |grad u|^2 = pi * sum_k |k| |u_hat_k|^2,

with u_hat_k the standard DFT coefficients divided by n.  For u = cos theta
this gives pi/2, matching the area integral of |grad(r cos theta)|^2 / 2.
"""

from functools import lru_cache

import numpy as np


def uniform_nodes(n: int, offset: float = 0.0) -> np.ndarray:
    """Uniform angles theta_j = offset + 2 pi j / n."""
    return offset + 2.0 * np.pi * np.arange(n) / n


def multiplier_symbol(n: int) -> np.ndarray:
    """|k| for the rfft layout of an n-point real signal (n even or odd)."""
    return np.abs(np.fft.rfftfreq(n, d=1.0 / n))


def apply_multiplier(values: np.ndarray, symbol=None) -> np.ndarray:
    """Apply a Fourier multiplier (default |k|) to real samples on a uniform grid."""
    values = np.asarray(values, dtype=float)
    n = values.shape[-1]
    if symbol is None:
        symbol = multiplier_symbol(n)
    return np.fft.irfft(np.fft.rfft(values) * symbol, n=n)


@lru_cache(maxsize=8)
def dtn_matrix(n: int) -> np.ndarray:
    """Dense symmetric matrix of the |k| multiplier on n uniform nodes."""
    kernel = np.fft.irfft(multiplier_symbol(n), n=n)
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    return kernel[idx]


def fourier_coefficients(values: np.ndarray) -> np.ndarray:
    """rfft coefficients normalized by n (so u = sum c_k e^{i k theta} + c.c.)."""
    values = np.asarray(values, dtype=float)
    return np.fft.rfft(values) / values.shape[-1]


def dirichlet_energy(values: np.ndarray) -> float:
    """1/2 int_D |grad u|^2 for the harmonic extension of the sampled trace."""
    n = len(values)
    c = fourier_coefficients(values)
    k = np.arange(len(c), dtype=float)
    weights = np.full(len(c), 2.0)
    weights[0] = 1.0
    if n % 2 == 0:
        weights[-1] = 0.5  # Nyquist mode is a pure cosine of amplitude c_{n/2}
    return float(np.pi * np.sum(weights * k * np.abs(c) ** 2))


def trig_interpolate(values: np.ndarray, theta_grid_offset: float, theta_eval) -> np.ndarray:
    """Evaluate the trigonometric interpolant of uniform samples at new angles."""
    values = np.asarray(values, dtype=float)
    n = len(values)
    c = np.fft.rfft(values) / n
    th = np.asarray(theta_eval, dtype=float) - theta_grid_offset
    k = np.arange(len(c))
    phases = np.exp(1j * np.outer(th, k))
    weights = np.full(len(c), 2.0)
    weights[0] = 1.0
    if n % 2 == 0:
        weights[-1] = 1.0  # Nyquist mode is real-even on an even grid
    out = (phases * (weights * c)).real.sum(axis=1)
    return out if np.ndim(theta_eval) else float(out[0])
