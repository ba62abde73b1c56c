"""Free-Poisson (Marchenko-Pastur) and free-binomial laws.

Parameters are stored as Fractions so that moment and cumulant sequences
come out exact; densities and Cauchy transforms are evaluated in floating
point.  A free-binomial law ``fb(sigma, theta)`` has mean
``sigma / (sigma + theta)``, an atom ``1 - sigma`` at 0 when
``0 < sigma < 1`` and an atom ``1 - theta`` at 1 when ``0 < theta < 1``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .measure import SpectralMeasure
from .ncpart import moment_sequence
from .series import TruncatedSeries, as_exact
from .transforms import r_from_moments, r_from_s

__all__ = [
    "AWImage",
    "AskeyWilsonParams",
    "FBValidation",
    "FreeBinomialLaw",
    "FreePoissonLaw",
    "InvalidLawError",
    "aw_map",
    "aw_measure",
    "bernoulli_power",
    "fb_cauchy_closed",
    "fb_cumulants",
    "fb_measure",
    "fb_moments",
    "fb_validate",
    "law_cumulants",
    "law_measure",
    "mp_cauchy_closed",
    "mp_cumulants",
    "mp_density",
    "mp_measure",
    "mp_moments",
]


class InvalidLawError(ValueError):
    """Parameters outside the region where a law is defined (or evaluable)."""


# ---------------------------------------------------------------------------
# free Poisson


@dataclass(frozen=True)
class FreePoissonLaw:
    """Marchenko-Pastur law with rate ``lam`` and jump size ``alpha``."""

    lam: Fraction
    alpha: Fraction = Fraction(1)

    def __init__(self, lam, alpha=1):
        lam, alpha = as_exact(lam), as_exact(alpha)
        if lam <= 0 or alpha <= 0:
            raise InvalidLawError(f"free-Poisson needs lam > 0 and alpha > 0, got ({lam}, {alpha})")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "alpha", alpha)

    @property
    def support(self) -> tuple[float, float]:
        lam, a = float(self.lam), float(self.alpha)
        return a * (1 - math.sqrt(lam)) ** 2, a * (1 + math.sqrt(lam)) ** 2

    @property
    def atom(self) -> Fraction:
        """Weight of the atom at 0."""
        return max(Fraction(0), 1 - self.lam)

    def __str__(self) -> str:
        return f"MP({self.lam}, {self.alpha})"


def _mp_density_array(x: np.ndarray, lam: float, a: float) -> np.ndarray:
    disc = 4 * lam * a * a - (x - a * (1 + lam)) ** 2
    return np.sqrt(np.clip(disc, 0.0, None)) / (2 * np.pi * a * x)


def mp_density(x: float, law: FreePoissonLaw) -> float:
    """Density of the continuous part at ``x``; 0 on the support edges."""
    lo, hi = law.support
    if x < lo or x > hi:
        raise ValueError(f"x = {x} lies outside the support [{lo}, {hi}]")
    if x in (lo, hi):
        return 0.0
    return float(_mp_density_array(np.asarray(x, float), float(law.lam), float(law.alpha)))


def mp_measure(law: FreePoissonLaw) -> SpectralMeasure:
    lam, a = float(law.lam), float(law.alpha)
    atoms = ((0.0, float(law.atom)),) if law.atom > 0 else ()
    return SpectralMeasure(atoms, lambda x: _mp_density_array(x, lam, a), law.support)


def mp_cumulants(law: FreePoissonLaw, K: int) -> list[Fraction]:
    """``kappa_n = alpha^n lam`` for ``n = 1..K``."""
    return [law.alpha**n * law.lam for n in range(1, K + 1)]


def mp_moments(law: FreePoissonLaw, K: int) -> list[Fraction]:
    return moment_sequence(mp_cumulants(law, K))


def mp_cauchy_closed(z: complex, law: FreePoissonLaw) -> complex:
    """Root of ``a z G^2 - (z + a - a lam) G + 1 = 0`` that behaves like ``1/z``."""
    lam, a = float(law.lam), float(law.alpha)
    lo, hi = law.support
    z = complex(z)
    p = z + a - a * lam
    root = cmath.sqrt(z - lo) * cmath.sqrt(z - hi)
    return (p - root) / (2 * a * z)


# ---------------------------------------------------------------------------
# free binomial


@dataclass(frozen=True)
class FBValidation:
    valid: bool
    ratio_total: Fraction
    ratio_product: Fraction
    evaluable: bool
    message: str

    def as_dict(self) -> dict:
        return {
            "valid": self.valid,
            "ratio_total": str(self.ratio_total),
            "ratio_product": str(self.ratio_product),
            "evaluable": self.evaluable,
            "message": self.message,
        }


def fb_validate(sigma, theta) -> FBValidation:
    """Membership of ``(sigma, theta)`` in the free-binomial parameter region.

    Both ``(s+t)/(s+t-1)`` and ``s t/(s+t-1)`` must be positive.  Density
    and atom evaluation additionally requires ``sigma, theta > 0``.
    """
    s, t = as_exact(sigma), as_exact(theta)
    if s + t == 1:
        raise InvalidLawError("sigma + theta = 1: the limiting law is purely atomic")
    r1 = (s + t) / (s + t - 1)
    r2 = s * t / (s + t - 1)
    valid = r1 > 0 and r2 > 0
    evaluable = valid and s > 0 and t > 0 and s + t > 1
    if not valid:
        bad = []
        if r1 <= 0:
            bad.append(f"(s+t)/(s+t-1) = {r1} <= 0")
        if r2 <= 0:
            bad.append(f"s*t/(s+t-1) = {r2} <= 0")
        message = "outside the free-binomial region: " + "; ".join(bad)
    elif not evaluable:
        message = "valid, but density evaluation needs sigma, theta > 0"
    else:
        message = "valid"
    return FBValidation(valid, r1, r2, evaluable, message)


@dataclass(frozen=True)
class FreeBinomialLaw:
    """Free-binomial law ``fb(sigma, theta)``; validated on construction."""

    sigma: Fraction
    theta: Fraction

    def __init__(self, sigma, theta):
        s, t = as_exact(sigma), as_exact(theta)
        check = fb_validate(s, t)
        if not check.valid:
            raise InvalidLawError(check.message)
        object.__setattr__(self, "sigma", s)
        object.__setattr__(self, "theta", t)

    @property
    def total(self) -> Fraction:
        return self.sigma + self.theta

    @property
    def evaluable(self) -> bool:
        return self.sigma > 0 and self.theta > 0 and self.total > 1

    @property
    def support(self) -> tuple[float, float]:
        s, t = float(self.sigma), float(self.theta)
        n = s + t
        u = math.sqrt(s / n * (1 - 1 / n))
        v = math.sqrt(1 / n * (1 - s / n))
        return (u - v) ** 2, (u + v) ** 2

    @property
    def atoms(self) -> tuple[tuple[float, float], ...]:
        out = []
        if 0 < self.sigma < 1:
            out.append((0.0, float(1 - self.sigma)))
        if 0 < self.theta < 1:
            out.append((1.0, float(1 - self.theta)))
        return tuple(out)

    def __str__(self) -> str:
        return f"fb({self.sigma}, {self.theta})"


def _require_evaluable(law: FreeBinomialLaw):
    if not law.evaluable:
        raise InvalidLawError(
            f"{law} is a valid law but its density is only evaluated for sigma, theta > 0"
        )


def fb_measure(law: FreeBinomialLaw) -> SpectralMeasure:
    _require_evaluable(law)
    lo, hi = law.support
    n = float(law.total)

    def density(x):
        x = np.asarray(x, float)
        return n * np.sqrt(np.clip((x - lo) * (hi - x), 0.0, None)) / (2 * np.pi * x * (1 - x))

    return SpectralMeasure(law.atoms, density, (lo, hi))


def fb_cauchy_closed(z: complex, law: FreeBinomialLaw) -> complex:
    """Closed-form Cauchy transform of ``fb(sigma, theta)``.

    The square root of the discriminant is taken as
    ``(s+t) sqrt(z - x_-) sqrt(z - x_+)`` with principal roots: its cut is
    exactly the support and it grows like ``(s+t) z``, which is the branch
    giving ``G(z) ~ 1/z``.
    """
    _require_evaluable(law)
    s, t = float(law.sigma), float(law.theta)
    lo, hi = law.support
    z = complex(z)
    if z.imag == 0 and (lo <= z.real <= hi or z.real in (0.0, 1.0)):
        raise ValueError(f"z = {z.real} is on the support, an atom or a branch point")
    p = (s + t - 2) * z + 1 - s
    root = (s + t) * cmath.sqrt(z - lo) * cmath.sqrt(z - hi)
    return (p - root) / (2 * z * (1 - z))


def _fb_s_transform(law: FreeBinomialLaw, order: int) -> TruncatedSeries:
    # S(z) = 1 + theta / (sigma + z), the jump size cancels
    s, t = law.sigma, law.theta
    return 1 + TruncatedSeries.geometric(t / s, -1 / s, order)


def fb_cumulants(law: FreeBinomialLaw, K: int) -> list[Fraction]:
    """Free cumulants ``kappa_1..kappa_K`` (exact)."""
    return list(r_from_s(_fb_s_transform(law, K - 1)).coeffs)


def fb_moments(law: FreeBinomialLaw, K: int) -> list[Fraction]:
    """Exact moments ``m_1..m_K`` via the S-transform route."""
    return moment_sequence(fb_cumulants(law, K))


# ---------------------------------------------------------------------------
# Askey-Wilson reparametrisation


@dataclass(frozen=True)
class AskeyWilsonParams:
    a: Fraction
    b: Fraction

    def __init__(self, a, b):
        a, b = as_exact(a), as_exact(b)
        if not 1 - a * b > 0:
            raise InvalidLawError(f"Askey-Wilson parameters need ab < 1, got ab = {a * b}")
        if a * b == 0:
            raise InvalidLawError("Askey-Wilson parameters need ab != 0")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


@dataclass(frozen=True)
class AWImage:
    """Free-binomial parameters and the affine map ``Y = scale * X + shift``."""

    sigma: Fraction
    theta: Fraction
    scale: Fraction
    shift: Fraction


def aw_map(p: AskeyWilsonParams) -> AWImage:
    a, b = p.a, p.b
    if a == b:
        raise InvalidLawError("the Askey-Wilson map needs a != b")
    theta = (1 - a * b) / (a * (a - b))
    sigma = (1 - a * b) / (b * (b - a))
    k = a / ((a - b) * (a * b - 1))
    return AWImage(sigma=sigma, theta=theta, scale=2 * b * k, shift=-(1 + b * b) * k)


def aw_measure(p: AskeyWilsonParams) -> SpectralMeasure:
    """Two-parameter Askey-Wilson law on ``[-1, 1]`` plus its atoms."""
    a, b = float(p.a), float(p.b)
    atoms = []
    for u, v in ((a, b), (b, a)):
        if abs(u) > 1:
            atoms.append(((u + 1 / u) / 2, (u * u - 1) / (u * u - u * v)))

    def density(x):
        x = np.asarray(x, float)
        return (
            2 * (1 - a * b) / np.pi * np.sqrt(np.clip(1 - x * x, 0.0, None))
            / ((1 + a * a - 2 * a * x) * (1 + b * b - 2 * b * x))
        )

    return SpectralMeasure(tuple(atoms), density, (-1.0, 1.0))


# ---------------------------------------------------------------------------
# free convolution powers of a Bernoulli law


def bernoulli_power(p, n: int, K: int) -> list[Fraction]:
    """Moments ``m_1..m_K`` of ``(p delta_0 + (1-p) delta_{1/n})`` to the ``n``-th free power."""
    p = as_exact(p)
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    if n < 2:
        raise ValueError("n must be at least 2")
    base = [(1 - p) * Fraction(1, n) ** k for k in range(1, K + 1)]
    r = r_from_moments(base) * n
    return moment_sequence(list(r.coeffs), K)


def law_cumulants(law, K: int) -> list[Fraction]:
    if isinstance(law, FreePoissonLaw):
        return mp_cumulants(law, K)
    if isinstance(law, FreeBinomialLaw):
        return fb_cumulants(law, K)
    raise TypeError(f"unsupported law {law!r}")


def law_measure(law) -> SpectralMeasure:
    if isinstance(law, FreePoissonLaw):
        return mp_measure(law)
    if isinstance(law, FreeBinomialLaw):
        return fb_measure(law)
    raise TypeError(f"unsupported law {law!r}")

