"""Bistable boundary reactions.

A reaction is the pair (G, f) with f = -G' where G is a balanced double-well
potential on [-1, 1]: G >= 0, G(+-1) = 0, G''(+-1) > 0, and G convex on the
two components of {t_star <= |t| <= 1}.

Built-ins:

    cubic     G(u) = (1 - u^2)^2 / 4,          f(u) = u - u^3,          t_star = 1/sqrt(3)
    sine(a)   G(u) = 2 cos^2(pi u / 2)/(a pi^2), f(u) = sin(pi u)/(pi a), t_star = 1/2

The sine family is the one with a closed-form monotone connection on the
line, used as the oracle throughout the test suite.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import BVortexError


@dataclass(frozen=True)
class Nonlinearity:
    """Reaction f = -G' with double-well metadata.

    ``curvature`` is (G''(-1), G''(+1)); both must be positive.
    ``odd`` marks reactions with f(-u) = -f(u), which the layer solver
    exploits to pin the translation mode.
    """

    name: str
    G: Callable[[np.ndarray], np.ndarray]
    f: Callable[[np.ndarray], np.ndarray]
    fprime: Callable[[np.ndarray], np.ndarray]
    t_star: float
    curvature: tuple = (0.0, 0.0)
    odd: bool = True
    params: dict = field(default_factory=dict)

    def validate(self, n_grid: int = 2001, tol: float = 1e-10) -> None:
        """Grid self-test of the double-well axioms; raises on violation."""
        t = np.linspace(-1.0, 1.0, n_grid)
        g = self.G(t)
        if np.min(g) < -tol:
            raise BVortexError(f"{self.name}: potential takes negative values")
        if abs(self.G(-1.0)) > tol or abs(self.G(1.0)) > tol:
            raise BVortexError(f"{self.name}: potential does not vanish at +-1")
        if self.curvature[0] <= 0 or self.curvature[1] <= 0:
            raise BVortexError(f"{self.name}: wells are degenerate")
        # convexity outside |t| < t_star, checked by second differences
        h = t[1] - t[0]
        d2 = (g[2:] - 2 * g[1:-1] + g[:-2]) / h**2
        mask = np.abs(t[1:-1]) >= self.t_star + 10 * h
        if np.any(d2[mask] < -1e-6):
            raise BVortexError(f"{self.name}: potential not convex beyond t_star")
        # f^2 <= C G with a finite constant (G has a differentiable square root)
        fv = self.f(t)
        gsafe = np.maximum(g, 1e-300)
        interior = np.abs(t) <= 1.0 - 1e-3
        if np.max(fv[interior] ** 2 / gsafe[interior]) > 1e3:
            raise BVortexError(f"{self.name}: f^2/G unbounded on the well interior")


def _cubic() -> Nonlinearity:
    return Nonlinearity(
        name="cubic",
        G=lambda u: 0.25 * (1.0 - np.asarray(u) ** 2) ** 2,
        f=lambda u: np.asarray(u) - np.asarray(u) ** 3,
        fprime=lambda u: 1.0 - 3.0 * np.asarray(u) ** 2,
        t_star=1.0 / np.sqrt(3.0),
        curvature=(2.0, 2.0),
        odd=True,
    )


def _sine(a: float) -> Nonlinearity:
    if a <= 0:
        raise BVortexError(f"sine reaction requires a > 0, got a={a}")
    api = np.pi * a
    return Nonlinearity(
        name="sine",
        G=lambda u: (2.0 / (a * np.pi**2)) * np.cos(0.5 * np.pi * np.asarray(u)) ** 2,
        f=lambda u: np.sin(np.pi * np.asarray(u)) / api,
        fprime=lambda u: np.cos(np.pi * np.asarray(u)) / a,
        t_star=0.5,
        curvature=(1.0 / a, 1.0 / a),
        odd=True,
        params={"a": float(a)},
    )


def builtin_nonlinearity(name: str, a: float = 1.0) -> Nonlinearity:
    """Return a built-in reaction by name: "cubic" or "sine" (with parameter a)."""
    if name == "cubic":
        return _cubic()
    if name == "sine":
        return _sine(a)
    raise BVortexError(f"unknown nonlinearity {name!r} (expected 'cubic' or 'sine')")
