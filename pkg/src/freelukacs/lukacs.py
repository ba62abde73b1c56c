"""Dual Lukacs characterization of free-Poisson and free-binomial laws.

Forward direction: with ``U ~ fb(sigma, theta)`` free from
``V ~ MP(sigma + theta, alpha)``, the pair ``X = V^{1/2} U V^{1/2}``,
``Y = V - X`` is free with ``X ~ MP(sigma, alpha)`` and
``Y ~ MP(theta, alpha)``.  This is checked exactly by computing every joint
moment of ``(X, Y)`` up to a given length and showing that all mixed free
cumulants vanish.

Inverse direction: from the constants ``c1 = phi(Y | X)`` and
``c2 = phi(Y^2 | X)`` together with ``beta_0 = phi(V)`` and
``alpha_1 = phi(VU)``, :func:`solve_inverse` recovers the parameters and
the closed-form transforms; :func:`build_generating_bundle` verifies each
intermediate generating-function identity as a truncated series.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

from .laws import FreeBinomialLaw, FreePoissonLaw, fb_cumulants, mp_cumulants
from .ncpart import MAX_NC_SIZE, FreeMoments, Word, joint_cumulant, moment_sequence
from .series import TruncatedSeries, as_exact, compose, reciprocal, revert
from .transforms import r_from_s, s_from_moments, s_from_r

__all__ = [
    "ForwardCertificate",
    "GeneratingBundle",
    "InverseSolution",
    "MixedMomentTable",
    "RegressionConstants",
    "RoundtripReport",
    "XYMoments",
    "build_generating_bundle",
    "check_regression_recurrences",
    "compute_mixed_sequences",
    "conditional_moment_check",
    "forward_check",
    "regression_constants",
    "roundtrip_characterization",
    "lambda_split_form",
    "solve_inverse",
    "transform_checks",
    "uv_engine",
    "xy_word_reduce",
]

MAX_TABLE_ORDER = 24


def _canonical_rotation(letters: tuple[str, ...]) -> tuple[str, ...]:
    if not letters:
        return letters
    return min(letters[i:] + letters[:i] for i in range(len(letters)))


# ---------------------------------------------------------------------------
# mixed moment sequences


@dataclass(frozen=True)
class MixedMomentTable:
    """``alpha_n = phi((VU)^n)``, ``beta_n = phi(V(VU)^n)``,
    ``gamma_n = phi(V^2(VU)^n)``, ``delta_n = phi(U(VU)^n)`` for ``n = 0..order``."""

    alphas: tuple
    betas: tuple
    gammas: tuple
    deltas: tuple

    @property
    def order(self) -> int:
        return len(self.alphas) - 1

    def generating_functions(self) -> dict[str, TruncatedSeries]:
        return {
            "A": TruncatedSeries(self.alphas),
            "B": TruncatedSeries(self.betas),
            "C": TruncatedSeries(self.gammas),
            "D": TruncatedSeries(self.deltas),
        }


def uv_engine(u, v, K: int) -> FreeMoments:
    """Joint-moment engine for free ``U`` and ``V`` with cumulants up to order ``K``."""
    cum_u = fb_cumulants(u, K) if isinstance(u, FreeBinomialLaw) else list(u)
    cum_v = mp_cumulants(v, K) if isinstance(v, FreePoissonLaw) else list(v)
    return FreeMoments({"U": cum_u, "V": cum_v})


def compute_mixed_sequences(u: FreeBinomialLaw, v: FreePoissonLaw, K: int) -> MixedMomentTable:
    """The four sequences for ``n = 0..K`` (no relation between ``u`` and ``v`` assumed)."""
    if not 0 <= K <= MAX_TABLE_ORDER:
        raise ValueError(f"table order must lie in 0..{MAX_TABLE_ORDER}")
    phi = uv_engine(u, v, K + 2)
    vu = Word("VU")
    alphas = tuple(phi(vu**n) for n in range(K + 1))
    betas = tuple(phi(Word("V") * vu**n) for n in range(K + 1))
    gammas = tuple(phi(Word("VV") * vu**n) for n in range(K + 1))
    deltas = tuple(phi(Word("U") * vu**n) for n in range(K + 1))
    return MixedMomentTable(alphas, betas, gammas, deltas)


@dataclass(frozen=True)
class RegressionConstants:
    """``c1 = phi(Y | X)``, ``c2 = phi(Y^2 | X)``; need ``c1 > 0``, ``c2 > c1^2``."""

    c1: Fraction
    c2: Fraction

    def __init__(self, c1, c2):
        object.__setattr__(self, "c1", _num(c1))
        object.__setattr__(self, "c2", _num(c2))
        if not self.c1 > 0:
            raise ValueError(f"c1 must be positive, got {self.c1}")
        if not self.c2 - self.c1**2 > 0:
            raise ValueError(f"need c2 > c1^2, got c1 = {self.c1}, c2 = {self.c2}")


def _num(x):
    # floats stay floats (perturbation studies); everything else is exact
    return x if isinstance(x, float) else as_exact(x)


def regression_constants(t: MixedMomentTable) -> tuple:
    """``c1``, ``c2`` read off the ``n = 0`` recurrences."""
    c1 = t.betas[0] - t.alphas[1]
    c2 = t.gammas[0] - 2 * t.betas[1] + t.alphas[2]
    return c1, c2


def check_regression_recurrences(t: MixedMomentTable, c1, c2):
    """Largest residual of ``beta_n - alpha_{n+1} = c1 alpha_n`` and
    ``gamma_n - 2 beta_{n+1} + alpha_{n+2} = c2 alpha_n`` over ``n <= K - 2``."""
    K = t.order
    if K < 2:
        raise ValueError("the recurrences need a table of order at least 2")
    a, b, g = t.alphas, t.betas, t.gammas
    res = []
    for n in range(K - 1):
        res.append(abs(b[n] - a[n + 1] - c1 * a[n]))
        res.append(abs(g[n] - 2 * b[n + 1] + a[n + 2] - c2 * a[n]))
    return max(res)


# ---------------------------------------------------------------------------
# generating functions and the identities between them


@dataclass
class GeneratingBundle:
    A: TruncatedSeries
    B: TruncatedSeries
    C: TruncatedSeries
    D: TruncatedSeries
    h: TruncatedSeries
    residuals: dict[str, TruncatedSeries] = field(default_factory=dict)
    parameters: dict[str, object] = field(default_factory=dict)

    def max_residuals(self) -> dict[str, object]:
        return {k: v.max_abs() for k, v in self.residuals.items()}

    @property
    def all_zero(self) -> bool:
        return all(v == 0 for v in self.max_residuals().values())


def _z(order: int, kind: str) -> TruncatedSeries:
    return TruncatedSeries.variable(order, kind=kind)


def build_generating_bundle(
    t: MixedMomentTable,
    v_r: TruncatedSeries,
    c1=None,
    c2=None,
) -> GeneratingBundle:
    """Assemble ``A, B, C, D, h`` and the residual of every identity.

    ``v_r`` is the r-transform of ``V`` of the same order as the table.
    ``c1``, ``c2`` default to the values read off the table; ``alpha`` and
    ``lam`` follow from them as in the inverse theorem.  Each residual is a
    series whose coefficients are all zero when the identity holds to the
    order it is known.
    """
    if v_r.order != t.order:
        raise ValueError(f"table order {t.order} and r-transform order {v_r.order} differ")
    gf = t.generating_functions()
    A, B, C, D = gf["A"], gf["B"], gf["C"], gf["D"]
    kind = A.kind
    K = t.order
    if c1 is None or c2 is None:
        c1, c2 = regression_constants(t)
    elif kind == "exact":
        c1, c2 = as_exact(c1), as_exact(c2)
    beta0, alpha1 = t.betas[0], t.alphas[1]
    jump = (c2 - c1**2) / c1
    lam = c1 * (alpha1 + c1 - 2 * beta0) / (c1**2 - c2)

    z = _z(K, kind)
    w = z * D  # zD(z)
    rw = compose(v_r, w)
    h = w * rw
    one = TruncatedSeries.constant(1, K, kind=kind)
    e = (1 + c1 * z) * D - 1

    res: dict[str, TruncatedSeries] = {}
    res["AA"] = A - (1 + w * rw)
    res["BB"] = B - (w * rw**2 + rw)
    # (r(w) - beta0) / w = q(w) with q = (r - beta0) / z
    q = (v_r - beta0).shift_down(1)
    res["CC"] = C - (w * rw**3 + rw**2 + rw * (rw - beta0) + compose(q, w))
    res["equ1"] = B - (A - 1).shift_down(1) - c1 * A
    res["equ2"] = C - 2 * (B - beta0).shift_down(1) + (A - alpha1 * z - 1).shift_down(2) - c2 * A
    res["pom"] = w * rw**2 + (1 - D) * rw - c1 * (1 + w * rw)
    res["h=M"] = h - (A - 1)
    res["equ1h"] = h**2 - (e * h + c1 * z * D)
    res["equ1hh"] = h**3 - ((e**2 + c1 * z * D) * h + e * c1 * z * D)
    zD2 = z * z * D * D
    res["equh3"] = (
        h**3
        + 2 * (1 - D) * h**2
        - (beta0 * z * D - 1 + 2 * D - D * D + c2 * zD2) * h
        - (c2 * zD2 + beta0 * z * D * (1 - 2 * D) + alpha1 * z * D * D)
    )
    res["funH"] = h - (lam * jump * D * reciprocal(c1 * jump * z * D + (lam * jump - c1)) - 1)
    res["quadD"] = (
        jump * (1 + c1 * (1 - 1 / lam) * z) * z * D * D
        - (1 + (jump * (1 - lam) + c1 * (1 - 2 / lam)) * z) * D
        + (1 - c1 / (jump * lam)) * one
    )
    res["hD"] = h * (1 - jump * w) - lam * jump * w
    res["quadh"] = jump * z * h**2 - (1 + (c1 - jump * (1 + lam)) * z) * h - (c1 - jump * lam) * z

    return GeneratingBundle(
        A, B, C, D, h, res,
        parameters={"c1": c1, "c2": c2, "alpha": jump, "lam": lam, "beta0": beta0, "alpha1": alpha1},
    )


# ---------------------------------------------------------------------------
# forward direction: words in X and Y


def xy_word_reduce(word) -> dict[tuple[str, ...], int]:
    """Trace-equivalent expansion of a word in ``X``, ``Y`` over ``U``, ``V``.

    With ``X = V^{1/2} U V^{1/2}`` and ``Y = V - X`` every factor has the
    form ``V^{1/2} m V^{1/2}`` with ``m`` in ``{U, 1}``; cycling the leading
    half power to the end leaves ``prod (V m_i)``.  Returns
    ``{canonical rotation: coefficient}`` with zero coefficients dropped.
    """
    word = Word.parse(word) if isinstance(word, str) else word
    if not len(word):
        raise ValueError("empty word")
    if not word.labels <= {"X", "Y"}:
        raise ValueError(f"word must be over X and Y, got {word}")
    choices = []
    for letter in word.letters:
        if letter == "X":
            choices.append([(1, ("V", "U"))])
        else:
            choices.append([(1, ("V",)), (-1, ("V", "U"))])
    out: dict[tuple[str, ...], int] = {}
    for combo in itertools.product(*choices):
        coef = 1
        letters: tuple[str, ...] = ()
        for c, piece in combo:
            coef *= c
            letters += piece
        key = _canonical_rotation(letters)
        out[key] = out.get(key, 0) + coef
    return {k: c for k, c in out.items() if c}


class XYMoments:
    """Moments ``phi(P(X, Y))`` for monomials, through :func:`xy_word_reduce`."""

    def __init__(self, u, v, K: int):
        self.uv = uv_engine(u, v, K)
        self._cache: dict[tuple[str, ...], object] = {}

    def __call__(self, word):
        word = Word.parse(word) if isinstance(word, str) else word
        hit = self._cache.get(word.letters)
        if hit is None:
            hit = sum(c * self.uv(Word(w)) for w, c in xy_word_reduce(word).items())
            self._cache[word.letters] = hit
        return hit


@dataclass
class ForwardCertificate:
    passed: bool
    order: int
    max_mixed_cumulant: object
    x_cumulant_deviation: object
    y_cumulant_deviation: object
    x_cumulants: list
    y_cumulants: list
    expected_x: str
    expected_y: str
    words_checked: int
    violations: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        d = asdict(self)
        for k in ("max_mixed_cumulant", "x_cumulant_deviation", "y_cumulant_deviation"):
            d[k] = str(d[k])
        d["x_cumulants"] = [str(x) for x in self.x_cumulants]
        d["y_cumulants"] = [str(x) for x in self.y_cumulants]
        return d


def _hypothesis_violations(u: FreeBinomialLaw, v: FreePoissonLaw) -> list[str]:
    out = []
    if v.lam != u.total:
        out.append(f"rate {v.lam} of V differs from sigma + theta = {u.total}")
    if not (u.sigma > 0 and u.theta > 0):
        out.append("sigma and theta must be positive")
    return out


def forward_check(u: FreeBinomialLaw, v: FreePoissonLaw, K: int = 6) -> ForwardCertificate:
    """Exact freeness certificate for ``X = V^{1/2} U V^{1/2}``, ``Y = V - X``.

    Every word over ``{X, Y}`` of length ``<= K`` containing both letters
    must have zero free cumulant, and the pure cumulants must equal
    ``alpha^n sigma`` (for ``X``) and ``alpha^n theta`` (for ``Y``).
    Violated hypotheses are reported and fail the certificate, but the
    cumulants are still computed so the failure is visible in the numbers.
    """
    if not 1 <= K <= MAX_NC_SIZE:
        raise ValueError(f"K must lie in 1..{MAX_NC_SIZE}")
    violations = _hypothesis_violations(u, v)
    phi = XYMoments(u, v, 2 * K)
    cache: dict = {}
    max_mixed = Fraction(0)
    count = 0
    for n in range(2, K + 1):
        for letters in itertools.product("XY", repeat=n):
            if len(set(letters)) < 2:
                continue
            count += 1
            k = joint_cumulant(Word(letters), phi, cache)
            max_mixed = max(max_mixed, abs(k))
    x_cum = [joint_cumulant(Word("X" * n), phi, cache) for n in range(1, K + 1)]
    y_cum = [joint_cumulant(Word("Y" * n), phi, cache) for n in range(1, K + 1)]
    a = v.alpha
    x_dev = max(abs(x_cum[n - 1] - a**n * u.sigma) for n in range(1, K + 1))
    y_dev = max(abs(y_cum[n - 1] - a**n * u.theta) for n in range(1, K + 1))
    passed = not violations and max_mixed == 0 and x_dev == 0 and y_dev == 0
    return ForwardCertificate(
        passed=passed,
        order=K,
        max_mixed_cumulant=max_mixed,
        x_cumulant_deviation=x_dev,
        y_cumulant_deviation=y_dev,
        x_cumulants=x_cum,
        y_cumulants=y_cum,
        expected_x=str(FreePoissonLaw(u.sigma, a)) if u.sigma > 0 else "-",
        expected_y=str(FreePoissonLaw(u.theta, a)) if u.theta > 0 else "-",
        words_checked=count,
        violations=violations,
    )


def conditional_moment_check(u: FreeBinomialLaw, v: FreePoissonLaw, K: int = 8, c1=None, c2=None):
    """Projected conditional-moment residuals ``(first, second)``.

    Checks ``phi(Y X^n) = c1 phi(X^n)`` and ``phi(Y^2 X^n) = c2 phi(X^n)``
    for ``n <= K - 2`` with ``c1 = theta alpha`` and
    ``c2 = theta (theta + 1) alpha^2`` unless given.
    """
    if K < 2:
        raise ValueError("K must be at least 2")
    a = v.alpha
    c1 = u.theta * a if c1 is None else c1
    c2 = u.theta * (u.theta + 1) * a * a if c2 is None else c2
    phi = XYMoments(u, v, K + 2)
    r1 = r2 = Fraction(0)
    for n in range(K - 1):
        xn = Word("X" * n)
        px = phi(xn) if n else Fraction(1)
        r1 = max(r1, abs(phi(Word("Y") * xn) - c1 * px))
        r2 = max(r2, abs(phi(Word("YY") * xn) - c2 * px))
    return r1, r2


# ---------------------------------------------------------------------------
# inverse direction


@dataclass
class InverseSolution:
    lam: object
    alpha: object
    theta: object
    sigma: object
    c1: object
    c2: object
    consistency: object
    r_V: TruncatedSeries
    psi_VU: TruncatedSeries
    S_VU: TruncatedSeries
    S_V: TruncatedSeries
    S_U: TruncatedSeries
    G_U: list

    @property
    def laws(self) -> tuple[FreePoissonLaw, FreeBinomialLaw]:
        return FreePoissonLaw(self.lam, self.alpha), FreeBinomialLaw(self.sigma, self.theta)

    def as_dict(self) -> dict:
        def s(x):
            return str(x) if isinstance(x, Fraction) else x

        return {
            "lambda": s(self.lam),
            "alpha": s(self.alpha),
            "theta": s(self.theta),
            "sigma": s(self.sigma),
            "c1": s(self.c1),
            "c2": s(self.c2),
            "consistency_beta0_minus_alpha1_minus_c1": s(self.consistency),
            "transforms": {
                name: [s(c) for c in ser.coeffs]
                for name, ser in (
                    ("r_V", self.r_V),
                    ("psi_VU", self.psi_VU),
                    ("S_VU", self.S_VU),
                    ("S_V", self.S_V),
                    ("S_U", self.S_U),
                )
            },
            "G_U_moments": [s(c) for c in self.G_U],
        }


def lambda_split_form(c1, c2, beta0, alpha1):
    """The rate written as ``theta + sigma`` with each part explicit."""
    return c1**2 / (c2 - c1**2) + c1 * (alpha1 + 2 * c1 - 2 * beta0) / (c1**2 - c2)


def solve_inverse(c1, c2, beta0, alpha1, order: int = 10, tol: float = 1e-9) -> InverseSolution:
    """Recover ``(lam, alpha, theta, sigma)`` and the transforms from regression data.

    Exact inputs (ints, Fractions, decimal floats without ``tol`` use) give
    exact output.  ``beta0 - alpha1 = c1`` must hold exactly for exact input
    and within ``tol`` for float input.
    """
    exact = not any(isinstance(x, float) for x in (c1, c2, beta0, alpha1))
    conv = as_exact if exact else float
    c1, c2, beta0, alpha1 = (conv(x) for x in (c1, c2, beta0, alpha1))
    if not c1 > 0:
        raise ValueError(f"c1 must be positive, got {c1}")
    if not c2 > c1**2:
        raise ValueError(f"need c2 > c1^2 (alpha would be non-positive), got c1={c1}, c2={c2}")
    consistency = beta0 - alpha1 - c1
    if (exact and consistency != 0) or (not exact and abs(consistency) > tol):
        raise ValueError(f"inconsistent data: beta0 - alpha1 - c1 = {consistency} != 0")
    jump = (c2 - c1**2) / c1
    theta = c1**2 / (c2 - c1**2)
    lam = c1 * (alpha1 + c1 - 2 * beta0) / (c1**2 - c2)
    sigma = lam - theta
    if not sigma > 0:
        raise ValueError(f"recovered sigma = {sigma} is not positive")

    kind = "exact" if exact else "float"
    K = order
    r_V = TruncatedSeries.geometric(lam * jump, jump, K, kind=kind)
    z = _z(K, kind)
    denom = (jump * lam - c1) + jump * z  # alpha lam - c1 + alpha z
    psi = z * reciprocal((1 + z) * denom)
    S_VU = reciprocal(denom)
    S_V = reciprocal(jump * lam + jump * z)
    S_U = 1 + c1 * reciprocal(denom)
    r_U = r_from_s(S_U)
    G_U = [TruncatedSeries.constant(1, 0, kind=kind)[0]] + moment_sequence(list(r_U.coeffs))
    return InverseSolution(
        lam=lam, alpha=jump, theta=theta, sigma=sigma, c1=c1, c2=c2, consistency=consistency,
        r_V=r_V, psi_VU=psi, S_VU=S_VU, S_V=S_V, S_U=S_U, G_U=G_U,
    )


def transform_checks(sol: InverseSolution, t: MixedMomentTable | None = None) -> dict[str, object]:
    """Cross-check the closed forms of a solution against independent routes.

    * ``S_V`` against :func:`s_from_r` of ``r_V``;
    * ``S_VU * S_V^{-1}`` against ``S_U`` (multiplicativity);
    * ``psi_VU`` against the reversion of ``M_VU`` and ``S_VU`` against the
      moment route, when a table ``t`` of ``alpha_n`` is supplied.
    """
    out = {}
    out["S_V"] = (s_from_r(sol.r_V) - sol.S_V).max_abs()
    out["S_U*S_V=S_VU"] = (sol.S_U * sol.S_V - sol.S_VU).max_abs()
    if t is not None:
        K = min(t.order, sol.psi_VU.order)
        M = TruncatedSeries(t.alphas[: K + 1]) - 1
        out["psi_VU"] = (revert(M) - sol.psi_VU.truncate(K)).max_abs()
        s_vu = s_from_moments(list(t.alphas[1 : K + 1]))
        k2 = min(s_vu.order, sol.S_VU.order)
        out["S_VU"] = (s_vu.truncate(k2) - sol.S_VU.truncate(k2)).max_abs()
    return out


@dataclass
class RoundtripReport:
    inputs: dict
    recovered: dict
    exact_match: bool
    deviations: dict
    forward_passed: bool | None
    constants: dict

    def as_dict(self) -> dict:
        def s(x):
            return str(x) if isinstance(x, Fraction) else x

        return {
            "inputs": {k: s(v) for k, v in self.inputs.items()},
            "recovered": {k: s(v) for k, v in self.recovered.items()},
            "exact_match": self.exact_match,
            "deviations": {k: s(v) for k, v in self.deviations.items()},
            "forward_passed": self.forward_passed,
            "constants": {k: s(v) for k, v in self.constants.items()},
        }


def roundtrip_characterization(
    sigma, theta, alpha, K: int = 8, mode: str = "exact", perturb_gamma0=None, forward_order: int = 4
) -> RoundtripReport:
    """Mixed sequences of ``fb(sigma, theta)`` x ``MP(sigma + theta, alpha)`` ->
    regression constants -> :func:`solve_inverse` -> comparison with the inputs.

    In ``"float"`` mode the table is converted to floats, optionally with
    ``gamma_0`` shifted by ``perturb_gamma0``, which reports how sensitive
    the recovered parameters are to the data.
    """
    u = FreeBinomialLaw(sigma, theta)
    v = FreePoissonLaw(u.total, alpha)
    t = compute_mixed_sequences(u, v, K)
    alphas, betas, gammas = list(t.alphas), list(t.betas), list(t.gammas)
    if mode == "float":
        alphas, betas, gammas = ([float(x) for x in seq] for seq in (alphas, betas, gammas))
        if perturb_gamma0:
            gammas[0] += float(perturb_gamma0)
    elif mode != "exact":
        raise ValueError("mode must be 'exact' or 'float'")
    elif perturb_gamma0:
        gammas[0] += as_exact(perturb_gamma0)
    c1 = betas[0] - alphas[1]
    c2 = gammas[0] - 2 * betas[1] + alphas[2]
    sol = solve_inverse(c1, c2, betas[0], alphas[1], order=K)
    inputs = {"sigma": u.sigma, "theta": u.theta, "alpha": v.alpha, "lambda": v.lam}
    recovered = {"sigma": sol.sigma, "theta": sol.theta, "alpha": sol.alpha, "lambda": sol.lam}
    deviations = {k: abs(recovered[k] - inputs[k]) for k in inputs}
    exact_match = mode == "exact" and all(d == 0 for d in deviations.values())
    forward_passed = None
    if mode == "exact" and exact_match:
        mp, fb = sol.laws
        forward_passed = forward_check(fb, mp, forward_order).passed
    return RoundtripReport(
        inputs=inputs,
        recovered=recovered,
        exact_match=exact_match,
        deviations=deviations,
        forward_passed=forward_passed,
        constants={"c1": c1, "c2": c2, "beta0": betas[0], "alpha1": alphas[1]},
    )

