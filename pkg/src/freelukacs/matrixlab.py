"""Monte Carlo with complex Wishart and matrix-beta ensembles.

``X`` and ``Y`` are independent complex Wishart matrices with shapes
``p_X = round(sigma N)`` and ``p_Y = round(theta N)`` and scale
``(alpha/N) I``; ``V = X + Y`` and ``U = V^{-1/2} X V^{-1/2}``.  As
``N`` grows, ``V`` tends to ``MP(sigma + theta, alpha)``, ``U`` to
``fb(sigma, theta)``, and normalised traces of words tend to the free
values computed exactly in :mod:`freelukacs.lukacs`.

Every random matrix is drawn from a generator keyed by
``(seed, replicate, role)``, so any replicate can be regenerated alone.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from .laws import FreeBinomialLaw, FreePoissonLaw, fb_measure, mp_measure
from .lukacs import XYMoments, uv_engine
from .measure import SpectralMeasure
from .ncpart import Word

__all__ = [
    "AdmissibilityError",
    "LukacsEnsemble",
    "SpectralHistogram",
    "TraceMomentEstimate",
    "WishartSpec",
    "asymptotic_freeness_diagnostic",
    "hermitian_inv_sqrt",
    "kolmogorov_distance",
    "sample_beta_matrix",
    "sample_complex_wishart",
    "spectral_histogram",
    "trace_mixed_moment",
]

EIG_TOL = 1e-10


class AdmissibilityError(ValueError):
    """Shapes for which the beta construction is not defined."""


@dataclass(frozen=True)
class WishartSpec:
    """``N x N`` complex Wishart with ``p`` degrees of freedom and scale ``(scale/N) I``."""

    N: int
    p: int
    scale: float = 1.0

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be positive")
        if self.p < 1:
            raise AdmissibilityError(f"shape p must be a positive integer, got {self.p}")


def _rng(seed: int, replicate: int, role: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, replicate, role]))


def sample_complex_wishart(spec: WishartSpec, rng: np.random.Generator) -> np.ndarray:
    """``W = Z Z^*`` with ``E|Z_jk|^2 = scale/N``."""
    sd = math.sqrt(spec.scale / (2 * spec.N))
    z = rng.normal(scale=sd, size=(spec.N, spec.p)) + 1j * rng.normal(scale=sd, size=(spec.N, spec.p))
    w = z @ z.conj().T
    return (w + w.conj().T) / 2


def _real_embedding(h: np.ndarray) -> np.ndarray:
    a, b = h.real, h.imag
    return np.block([[a, -b], [b, a]])


def _eigh(h: np.ndarray, method: str) -> tuple[np.ndarray, np.ndarray]:
    if method == "native":
        return np.linalg.eigh(h)
    if method != "embedding":
        raise ValueError(f"unknown eigensolver {method!r}")
    # every eigenvalue of the 2N real form appears twice; for each pair the
    # vector (x, y) maps back to the complex eigenvector x + iy
    n = h.shape[0]
    evals, evecs = np.linalg.eigh(_real_embedding(h))
    vecs = evecs[:n] + 1j * evecs[n:]
    # re-orthonormalise within the doubled spectrum by a QR of the candidates
    q, r = np.linalg.qr(vecs)
    keep = np.abs(np.diag(r)) > 1e-8 * np.abs(np.diag(r)).max()
    if keep.sum() != n:
        q, _ = np.linalg.qr(vecs[:, ::2])
        keep = slice(None)
    q = q[:, keep]
    vals = np.real(np.einsum("ij,jk,ki->i", q.conj().T, h, q))
    return vals, q


def hermitian_inv_sqrt(h: np.ndarray, check: bool = True, method: str = "native") -> np.ndarray:
    """``h^{-1/2}`` for a Hermitian positive definite ``h``.

    ``method="embedding"`` diagonalises the real symmetric ``2N x 2N`` form
    instead of calling the complex solver.
    """
    evals, evecs = _eigh(h, method)
    top = evals.max()
    if evals.min() <= 1e-12 * top:
        raise np.linalg.LinAlgError(
            f"matrix is not positive definite (min eigenvalue {evals.min():.3e}, max {top:.3e})"
        )
    out = (evecs / np.sqrt(evals)) @ evecs.conj().T
    out = (out + out.conj().T) / 2
    if check:
        err = np.abs(out @ h @ out - np.eye(len(h))).max()
        if err >= 1e-8:
            raise np.linalg.LinAlgError(f"inverse square root residual {err:.3e}")
    return out


def sample_beta_matrix(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``(X+Y)^{-1/2} X (X+Y)^{-1/2}``; eigenvalues are checked to lie in [0, 1]."""
    s = hermitian_inv_sqrt(x + y)
    u = s @ x @ s
    u = (u + u.conj().T) / 2
    ev = np.linalg.eigvalsh(u)
    if ev.min() < -EIG_TOL or ev.max() > 1 + EIG_TOL:
        raise ValueError(f"beta matrix spectrum [{ev.min()}, {ev.max()}] leaves [0, 1]")
    return u


@dataclass(frozen=True)
class LukacsEnsemble:
    """Finite-``N`` model of ``U ~ fb(sigma, theta)`` free from ``V ~ MP(sigma+theta, alpha)``."""

    N: int
    sigma: float
    theta: float
    alpha: float = 1.0
    seed: int = 7

    @property
    def shapes(self) -> tuple[int, int]:
        return round(self.sigma * self.N), round(self.theta * self.N)

    def check_admissible(self) -> None:
        p, q = self.shapes
        problems = []
        if p + q <= self.N - 1:
            problems.append(f"p + q = {p + q} <= N - 1 = {self.N - 1}, so X + Y is singular")
        if p < 1 or q < 1:
            problems.append(f"shapes p = round(sigma N) = {p}, q = round(theta N) = {q} must be >= 1")
        if problems:
            raise AdmissibilityError("inadmissible ensemble: " + "; ".join(problems))

    def sample(self, replicate: int) -> dict[str, np.ndarray]:
        """Matrices ``X, Y, U, V`` for one replicate."""
        self.check_admissible()
        p, q = self.shapes
        x = sample_complex_wishart(WishartSpec(self.N, p, self.alpha), _rng(self.seed, replicate, 0))
        y = sample_complex_wishart(WishartSpec(self.N, q, self.alpha), _rng(self.seed, replicate, 1))
        return {"X": x, "Y": y, "U": sample_beta_matrix(x, y), "V": x + y}

    def samples(self, replicates: int) -> list[dict[str, np.ndarray]]:
        return [self.sample(i) for i in range(replicates)]

    @property
    def limit_laws(self) -> tuple[FreeBinomialLaw, FreePoissonLaw]:
        u = FreeBinomialLaw(self.sigma, self.theta)
        return u, FreePoissonLaw(u.total, self.alpha)


@dataclass(frozen=True)
class TraceMomentEstimate:
    word: str
    mean: float
    standard_error: float
    replicates: int
    N: int

    def as_dict(self) -> dict:
        return asdict(self)


def _normalized_trace(word: Word, mats: dict[str, np.ndarray]) -> float:
    prod = mats[word.letters[0]]
    for letter in word.letters[1:]:
        prod = prod @ mats[letter]
    return float(np.trace(prod).real) / prod.shape[0]


def trace_mixed_moment(word, samples: Sequence[dict[str, np.ndarray]]) -> TraceMomentEstimate:
    """Mean and standard error of ``(1/N) Tr`` of a word across replicates."""
    word = Word.parse(word) if isinstance(word, str) else word
    if not 1 <= len(word) <= 8:
        raise ValueError("word length must lie in 1..8")
    vals = np.array([_normalized_trace(word, m) for m in samples])
    n = len(vals)
    se = float(vals.std(ddof=1) / math.sqrt(n)) if n > 1 else float("nan")
    return TraceMomentEstimate(str(word), float(vals.mean()), se, n, samples[0]["X"].shape[0])


# ---------------------------------------------------------------------------
# spectra


def kolmogorov_distance(eigs: np.ndarray, target: SpectralMeasure) -> float:
    """``sup_x |F_emp(x) - F(x)|``, checking both one-sided limits at each sample."""
    x = np.sort(np.asarray(eigs, float))
    n = len(x)
    pts = np.unique(x)
    upper = np.searchsorted(x, pts, side="right") / n
    lower = np.searchsorted(x, pts, side="left") / n
    f = target.cdf(pts)
    f_left = target.cdf(np.nextafter(pts, -np.inf))
    return float(max(np.max(np.abs(upper - f)), np.max(np.abs(f_left - lower))))


@dataclass
class SpectralHistogram:
    edges: np.ndarray
    density: np.ndarray
    distance: float
    n_eigenvalues: int

    def as_dict(self) -> dict:
        return {
            "edges": self.edges.tolist(),
            "density": self.density.tolist(),
            "kolmogorov_distance": self.distance,
            "n_eigenvalues": self.n_eigenvalues,
        }


def spectral_histogram(
    matrices: Sequence[np.ndarray], target: SpectralMeasure, bins: int = 50
) -> SpectralHistogram:
    """Pooled eigenvalue histogram and its Kolmogorov distance to ``target``."""
    if len(matrices) < 10:
        raise ValueError("need at least 10 sampled matrices")
    eigs = np.concatenate([np.linalg.eigvalsh(m) for m in matrices])
    density, edges = np.histogram(eigs, bins=bins, density=True)
    return SpectralHistogram(edges, density, kolmogorov_distance(eigs, target), len(eigs))


# ---------------------------------------------------------------------------
# asymptotic freeness


def _centered(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    return m - (np.trace(m).real / n) * np.eye(n)


def mixed_words(letters: str = "XY", max_len: int = 4) -> list[Word]:
    """One representative per cyclic class of words using both letters."""
    import itertools

    seen, out = set(), []
    for n in range(2, max_len + 1):
        for w in itertools.product(letters, repeat=n):
            if len(set(w)) < 2:
                continue
            key = min(w[i:] + w[:i] for i in range(n))
            if key not in seen:
                seen.add(key)
                out.append(Word(key))
    return out


def asymptotic_freeness_diagnostic(
    N_list: Iterable[int],
    replicates: int,
    sigma: float = 1.0,
    theta: float = 1.0,
    alpha: float = 1.0,
    seed: int = 7,
    words: Sequence | None = None,
    exact: dict | None = None,
) -> list[dict]:
    """Per ``N``: the centred alternating moment ``phi((X-phi X)(Y-phi Y))^2`` and word estimates.

    Centring uses each sample's own normalised trace.  ``exact`` maps word
    strings to their free limits; when given, each estimate reports its
    distance to the limit in standard errors.  A decreasing centred moment
    with ``N`` is a heuristic signal of asymptotic freeness, not a test.
    """
    words = [Word.parse(w) if isinstance(w, str) else w for w in (words or mixed_words())]
    report = []
    for N in N_list:
        ens = LukacsEnsemble(N, sigma, theta, alpha, seed)
        vals = []
        samples = []
        for i in range(replicates):
            m = ens.sample(i)
            cx, cy = _centered(m["X"]), _centered(m["Y"])
            vals.append(float(np.trace(cx @ cy @ cx @ cy).real) / N)
            samples.append(m)
        vals = np.array(vals)
        entry = {
            "N": N,
            "centered_alternating": float(vals.mean()),
            "centered_alternating_se": float(vals.std(ddof=1) / math.sqrt(len(vals))),
            "words": [],
        }
        for w in words:
            est = trace_mixed_moment(w, samples)
            row = est.as_dict()
            if exact is not None and str(w) in exact:
                limit = float(exact[str(w)])
                row["limit"] = limit
                row["z_score"] = (est.mean - limit) / est.standard_error
            entry["words"].append(row)
        report.append(entry)
    return report


def target_measures(ens: LukacsEnsemble) -> dict[str, SpectralMeasure]:
    u, v = ens.limit_laws
    return {"U": fb_measure(u), "V": mp_measure(v)}


def exact_limits(ens: LukacsEnsemble, words: Iterable) -> dict[str, object]:
    """Free limits of ``words`` (over ``{U, V}`` or ``{X, Y}``) for the ensemble's laws."""
    u, v = ens.limit_laws
    words = [Word.parse(w) if isinstance(w, str) else w for w in words]
    K = max(len(w) for w in words)
    uv, xy = uv_engine(u, v, K), XYMoments(u, v, K)
    out = {}
    for w in words:
        letters = set(w.letters)
        if letters <= {"U", "V"}:
            out[str(w)] = uv(w)
        elif letters <= {"X", "Y"}:
            out[str(w)] = xy(w)
        else:
            raise ValueError(f"word {w} mixes the (U, V) and (X, Y) alphabets")
    return out


__all__ += ["exact_limits", "mixed_words", "target_measures"]
