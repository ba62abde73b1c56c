"""r-, S-, Cauchy and moment-generating transforms as truncated series.

Conventions (all series are :class:`~freelukacs.series.TruncatedSeries`):

* r-transform ``r(z) = sum kappa_{n+1} z^n``; ``R(z) = z r(z)``.
* S-transform defined by ``R(z S(z)) = z``.
* moment generating function ``M(z) = sum_{n>=1} m_n z^n``.
* Cauchy transform ``G(w) = sum_{n>=0} m_n w^{-n-1}``, carried as the list
  of moments ``[1, m_1, m_2, ...]``.

Every identity is checked formally, coefficient by coefficient.  The only
analytic evaluation is :func:`cauchy_quadrature`.
"""

from __future__ import annotations

from typing import Sequence

from .measure import cauchy_quadrature
from .ncpart import moment_sequence
from .series import SeriesError, TruncatedSeries, compose, reciprocal, revert

__all__ = [
    "cauchy_from_r",
    "cauchy_quadrature",
    "crr_residual",
    "cumulants_from_r",
    "free_add_convolve",
    "free_mul_convolve",
    "mgf_from_moments",
    "mgf_s_check",
    "r_from_cumulants",
    "r_from_moments",
    "r_from_s",
    "s_from_moments",
    "s_from_r",
    "str_residual",
]


def r_from_cumulants(kappa: Sequence, kind: str | None = None) -> TruncatedSeries:
    """r-transform from ``kappa_1..kappa_K``; the series has order ``K-1``."""
    if not len(kappa):
        raise ValueError("need at least one cumulant")
    return TruncatedSeries(kappa, kind=kind)


def cumulants_from_r(r: TruncatedSeries) -> list:
    return list(r.coeffs)


def free_add_convolve(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """r-transform of the free additive convolution."""
    return a + b


def free_mul_convolve(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """S-transform of the free multiplicative convolution."""
    return a * b


def _times_z(a: TruncatedSeries) -> TruncatedSeries:
    # z * a(z), keeping every known coefficient (order goes up by one)
    return TruncatedSeries([a._zero()] + list(a.coeffs), kind=a.kind)


def s_from_r(r: TruncatedSeries) -> TruncatedSeries:
    """Solve ``R(z S(z)) = z`` for ``S``; needs ``kappa_1 != 0``."""
    if r.coeffs[0] == 0:
        raise SeriesError("S-transform needs a nonzero mean (kappa_1 = 0)")
    return revert(_times_z(r)).shift_down(1)


def r_from_s(s: TruncatedSeries) -> TruncatedSeries:
    """Inverse of :func:`s_from_r`: ``R`` is the compositional inverse of ``z S(z)``."""
    if s.coeffs[0] == 0:
        raise SeriesError("S-transform must have a nonzero constant term")
    return revert(_times_z(s)).shift_down(1)


def mgf_from_moments(m: Sequence, kind: str | None = None) -> TruncatedSeries:
    """``M(z) = sum m_n z^n`` from ``m_1..m_K``."""
    zero = 0 * m[0]
    return TruncatedSeries([zero] + list(m), kind=kind)


def s_from_moments(m: Sequence) -> TruncatedSeries:
    """S-transform from moments through ``M(z/(1+z) S(z)) = z``.

    Independent of the cumulant route: ``S(z) = (1+z)/z * M^{-1}(z)``.
    """
    M = mgf_from_moments(m)
    if M.coeffs[1] == 0:
        raise SeriesError("S-transform needs a nonzero mean")
    inv = revert(M).shift_down(1)
    one_plus_z = TruncatedSeries([1, 1], order=inv.order, kind=inv.kind)
    return inv * one_plus_z


def cauchy_from_r(r: TruncatedSeries) -> list:
    """Moments ``[1, m_1, ..., m_{K+1}]`` encoded by the r-transform of order ``K``."""
    one = 1 + 0 * r.coeffs[0]
    return [one] + moment_sequence(list(r.coeffs))


def r_from_moments(m: Sequence) -> TruncatedSeries:
    """r-transform from ``m_1..m_K`` by inverting the Cauchy series.

    With ``u = 1/w``, ``G = u (1 + M(u))`` is reversible and
    ``G(r(z) + 1/z) = z`` gives ``r(z) = 1/Ginv(z) - 1/z``.
    """
    M = mgf_from_moments(m)
    g = _times_z(M + 1)
    ginv = revert(g)
    q = ginv.shift_down(1)
    return (reciprocal(q) - 1).shift_down(1)


# ---------------------------------------------------------------------------
# residuals of the defining functional equations


def str_residual(r: TruncatedSeries, s: TruncatedSeries):
    """Largest coefficient of ``R(z S(z)) - z``."""
    R = _times_z(r)
    inner = _times_z(s)
    res = compose(R, inner)
    return (res - TruncatedSeries.variable(res.order, kind=res.kind)).max_abs()


def crr_residual(r: TruncatedSeries, moments: Sequence):
    """Largest coefficient of ``G(r(z) + 1/z) - z`` as a series in ``z``.

    ``moments`` is ``[1, m_1, ...]``.  Writing ``u = z / (1 + R(z))`` for
    ``1/(r + 1/z)``, the left side is ``sum m_n u^{n+1}``.
    """
    R = _times_z(r)
    u = _times_z(reciprocal(R + 1)).truncate(R.order)
    g = TruncatedSeries([0 * moments[0]] + list(moments), kind=r.kind)
    res = compose(g, u)
    return (res - TruncatedSeries.variable(res.order, kind=res.kind)).max_abs()


def mgf_s_check(m: Sequence, s: TruncatedSeries):
    """Largest coefficient of ``M(z/(1+z) S(z)) - z``; 0 when consistent.

    ``m`` holds ``m_1..m_K``.
    """
    M = mgf_from_moments(m, kind=s.kind)
    if M.coeffs[1] == 0:
        raise SeriesError("moment/S check needs a nonzero mean")
    K = min(M.order, s.order + 1)
    one_plus_z = TruncatedSeries([1, 1], order=K - 1, kind=s.kind)
    inner = _times_z(reciprocal(one_plus_z) * s.truncate(K - 1))
    res = compose(M.truncate(K), inner)
    return (res - TruncatedSeries.variable(res.order, kind=res.kind)).max_abs()

