"""Exact and Monte Carlo verification of the free Lukacs property.

If ``U`` is free-binomial and ``V`` is free-Poisson, free from ``U``, then
``X = V^{1/2} U V^{1/2}`` and ``Y = V - X`` are free.  Conversely, freeness
of ``X`` and ``Y`` together with two conditional-moment regressions pins
the laws of ``U`` and ``V`` down.  The package checks both directions with
exact rational series and with random matrices.
"""

from __future__ import annotations

from .laws import FreeBinomialLaw, FreePoissonLaw, fb_moments, mp_moments
from .lukacs import (
    compute_mixed_sequences,
    forward_check,
    roundtrip_characterization,
    solve_inverse,
)
from .ncpart import Word, enumerate_nc
from .series import TruncatedSeries

__version__ = "0.1.0"

__all__ = [
    "FreeBinomialLaw",
    "FreePoissonLaw",
    "TruncatedSeries",
    "Word",
    "compute_mixed_sequences",
    "enumerate_nc",
    "fb_moments",
    "forward_check",
    "mp_moments",
    "roundtrip_characterization",
    "solve_inverse",
]
