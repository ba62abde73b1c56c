"""Spectral measures with atoms and a square-root-edged density.

Integrals against the continuous part use the substitution
``x = c - rho*cos(t)`` on ``[0, pi]``, which turns the ``sqrt`` edge
behaviour of both free-Poisson and free-binomial densities into a smooth
integrand, followed by Gauss-Legendre quadrature in ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = ["SpectralMeasure", "cauchy_quadrature"]

QUAD_ORDER = 200


@dataclass(frozen=True)
class SpectralMeasure:
    """Atoms ``(location, weight)`` plus a density on ``support = (a, b)``.

    ``density`` must accept a numpy array of points strictly inside the
    support.  ``support`` is ``None`` for a purely atomic measure.
    """

    atoms: tuple[tuple[float, float], ...]
    density: Callable[[np.ndarray], np.ndarray] | None = None
    support: tuple[float, float] | None = None
    _cdf_grid: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if any(w < 0 for _, w in self.atoms):
            raise ValueError("atom weights must be non-negative")
        if (self.density is None) != (self.support is None):
            raise ValueError("density and support must be given together")

    def nodes(self, order: int = QUAD_ORDER) -> tuple[np.ndarray, np.ndarray]:
        """Points and weights so that ``sum(w * g(x))`` integrates ``g * density``."""
        if self.support is None:
            return np.empty(0), np.empty(0)
        a, b = self.support
        c, rho = (a + b) / 2, (b - a) / 2
        t, w = np.polynomial.legendre.leggauss(order)
        t = (t + 1) * np.pi / 2
        w = w * np.pi / 2
        x = c - rho * np.cos(t)
        return x, w * rho * np.sin(t) * self.density(x)

    def integrate(self, g: Callable[[np.ndarray], np.ndarray], order: int = QUAD_ORDER):
        """``integral g d(mu)``, atoms included."""
        total = sum(w * g(np.asarray(loc)) for loc, w in self.atoms)
        x, w = self.nodes(order)
        if len(x):
            total = total + np.sum(w * g(x))
        return total

    def mass(self, order: int = QUAD_ORDER) -> float:
        return float(self.integrate(np.ones_like, order))

    def moments(self, n: int, order: int = QUAD_ORDER) -> list[float]:
        """Numerical moments ``m_1..m_n``."""
        return [float(self.integrate(lambda x, k=k: x**k, order)) for k in range(1, n + 1)]

    def cdf(self, x, grid: int = 4001) -> np.ndarray:
        """Distribution function, right-continuous at atoms."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for loc, w in self.atoms:
            out = out + w * (x >= loc)
        if self.support is not None:
            xs, cum = self._continuous_cdf(grid)
            out = out + np.interp(x, xs, cum, left=0.0, right=cum[-1])
        return out

    def _continuous_cdf(self, grid: int):
        if grid not in self._cdf_grid:
            a, b = self.support
            c, rho = (a + b) / 2, (b - a) / 2
            # Gauss-Legendre on each panel of a uniform t-grid
            t = np.linspace(0.0, np.pi, grid)
            gt, gw = np.polynomial.legendre.leggauss(8)
            lo, hi = t[:-1, None], t[1:, None]
            tt = (hi - lo) / 2 * gt + (hi + lo) / 2
            ww = (hi - lo) / 2 * gw
            f = rho * np.sin(tt) * self.density(c - rho * np.cos(tt))
            cum = np.concatenate([[0.0], np.cumsum(np.sum(ww * f, axis=1))])
            self._cdf_grid[grid] = (c - rho * np.cos(t), cum)
        return self._cdf_grid[grid]


def cauchy_quadrature(measure: SpectralMeasure, z: complex, order: int = QUAD_ORDER) -> complex:
    """``G(z) = integral mu(dx) / (z - x)`` by quadrature.

    ``z`` must lie off the real axis, or on it away from the support and
    the atoms.
    """
    z = complex(z)
    if z.imag == 0:
        if measure.support is not None and measure.support[0] <= z.real <= measure.support[1]:
            raise ValueError(f"z = {z.real} lies inside the continuous support")
        if any(z.real == loc for loc, _ in measure.atoms):
            raise ValueError(f"z = {z.real} is an atom")
    return complex(measure.integrate(lambda x: 1.0 / (z - x), order))
