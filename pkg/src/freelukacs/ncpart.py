"""Non-crossing partitions and the moment/free-cumulant calculus.

Sequences of moments or cumulants are passed as plain sequences indexed
from order one: ``kappa[0]`` is the first cumulant, ``m[0]`` the first
moment (``m_0 = 1`` is implicit).  Everything here is generic over the
scalar type, so Fractions give exact answers and floats give floats.

Two independent routes to a joint moment of free variables are provided:
:func:`free_mixed_moment` sums over NC(n) with monochromatic blocks, and
:func:`bls_moment` splits on the letters coupled to the first one and
recurses on contiguous gaps.  The second scales polynomially in the word
length and is what the rest of the package uses.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Mapping, Sequence

__all__ = [
    "MAX_NC_SIZE",
    "FreeMoments",
    "NCPartition",
    "Word",
    "bls_moment",
    "catalan",
    "cumulant_sequence",
    "cumulants_from_moments",
    "enumerate_nc",
    "free_mixed_moment",
    "is_crossing",
    "joint_cumulant",
    "moment_sequence",
    "moments_from_cumulants",
    "nc_moment_sum",
]

MAX_NC_SIZE = 14
_CACHED_NC_SIZE = 10


def catalan(n: int) -> int:
    from math import comb

    return comb(2 * n, n) // (n + 1)


# ---------------------------------------------------------------------------
# partitions


@dataclass(frozen=True)
class NCPartition:
    """A partition of ``{1..k}`` into blocks (1-based, sorted)."""

    blocks: tuple[tuple[int, ...], ...]
    k: int

    def __post_init__(self):
        seen = sorted(i for b in self.blocks for i in b)
        if seen != list(range(1, self.k + 1)):
            raise ValueError("blocks do not partition {1..k}")
        if is_crossing(self.blocks):
            raise ValueError(f"blocks {self.blocks} cross")

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def is_noncrossing(self) -> bool:
        return not is_crossing(self.blocks)

    def __str__(self) -> str:
        return "".join("{" + "".join(map(str, b)) + "}" for b in self.blocks)


def is_crossing(blocks: Sequence[Sequence[int]]) -> bool:
    """True if two distinct blocks interleave as ``i1 < j1 < i2 < j2``."""
    for r, s in itertools.permutations(range(len(blocks)), 2):
        br, bs = blocks[r], blocks[s]
        for i1, i2 in itertools.combinations(sorted(br), 2):
            if any(i1 < j < i2 for j in bs) and any(j > i2 or j < i1 for j in bs):
                return True
    return False


def _nc_build(k: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    # block of 0 is {0 = i_1 < ... < i_m}; the gaps between its elements
    # are partitioned independently
    if k == 0:
        yield ()
        return
    for mask in range(1 << (k - 1)):
        first = (0,) + tuple(i for i in range(1, k) if mask >> (i - 1) & 1)
        cuts = first + (k,)
        gaps = [(cuts[j] + 1, cuts[j + 1]) for j in range(len(first))]
        choices = [
            [tuple(tuple(lo + i for i in b) for b in part) for part in _nc0(hi - lo)]
            for lo, hi in gaps
        ]
        for combo in itertools.product(*choices):
            yield (first,) + tuple(b for part in combo for b in part)


@lru_cache(maxsize=None)
def _nc_cached(k: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    return tuple(_nc_build(k))


def _nc0(k: int):
    """0-based non-crossing partitions of ``range(k)``."""
    if k <= _CACHED_NC_SIZE:
        return _nc_cached(k)
    return _nc_build(k)


def enumerate_nc(k: int) -> list[NCPartition]:
    """All non-crossing partitions of ``{1..k}``; there are ``catalan(k)`` of them."""
    if not 1 <= k <= MAX_NC_SIZE:
        raise ValueError(f"k must lie in 1..{MAX_NC_SIZE}, got {k}")
    out = []
    for p in _nc0(k):
        # non-crossing by construction, so skip the validating constructor
        part = object.__new__(NCPartition)
        object.__setattr__(part, "blocks", tuple(tuple(i + 1 for i in b) for b in p))
        object.__setattr__(part, "k", k)
        out.append(part)
    return out


# ---------------------------------------------------------------------------
# one-variable moment <-> cumulant conversion


def _one(values):
    return Fraction(1) if all(isinstance(v, (int, Fraction)) for v in values) else 1.0


def _power_coeff_table(m: Sequence, n: int, one):
    """Coefficients ``[z^{n-s}] A(z)^s`` for ``s = 1..n`` with ``A = 1 + sum m_i z^i``.

    Only ``m_1..m_{n-1}`` are read.
    """
    a = [one] + list(m[: n - 1])
    out = {}
    power = [one] + [0 * one] * (n - 1)
    for s in range(1, n + 1):
        deg = n - s
        new = []
        for d in range(deg + 1):
            acc = 0 * one
            for i in range(d + 1):
                acc += power[i] * a[d - i]
            new.append(acc)
        power = new
        out[s] = power[deg]
    return out


def moment_sequence(kappa: Sequence, n: int | None = None) -> list:
    """Moments ``m_1..m_n`` of a law with free cumulants ``kappa``.

    Uses ``m_n = sum_s kappa_s [z^{n-s}] A(z)^s``, the one-variable form
    of the moment-cumulant formula.
    """
    n = len(kappa) if n is None else n
    if n > len(kappa):
        raise ValueError(f"need {n} cumulants, only {len(kappa)} given")
    one = _one(kappa)
    m: list = []
    for order in range(1, n + 1):
        table = _power_coeff_table(m, order, one)
        m.append(sum((kappa[s - 1] * table[s] for s in range(1, order + 1)), 0 * one))
    return m


def cumulant_sequence(m: Sequence, n: int | None = None) -> list:
    """Free cumulants ``kappa_1..kappa_n`` from moments ``m_1..m_n``."""
    n = len(m) if n is None else n
    if n > len(m):
        raise ValueError(f"need {n} moments, only {len(m)} given")
    one = _one(m)
    kappa: list = []
    for order in range(1, n + 1):
        table = _power_coeff_table(m, order, one)
        lower = sum((kappa[s - 1] * table[s] for s in range(1, order)), 0 * one)
        kappa.append(m[order - 1] - lower)
    return kappa


def moments_from_cumulants(kappa: Sequence, n: int):
    """The ``n``-th moment from free cumulants ``kappa_1..``."""
    if n < 1:
        raise ValueError("n must be positive")
    return moment_sequence(kappa, n)[-1]


def cumulants_from_moments(m: Sequence, n: int):
    """The ``n``-th free cumulant from moments ``m_1..``."""
    if n < 1:
        raise ValueError("n must be positive")
    return cumulant_sequence(m, n)[-1]


def nc_moment_sum(kappa: Sequence, n: int):
    """``m_n`` as the literal sum over NC(n) of products of ``kappa_{|B|}``."""
    if n > len(kappa):
        raise ValueError(f"need {n} cumulants, only {len(kappa)} given")
    one = _one(kappa)
    total = 0 * one
    for p in _nc0(n):
        term = one
        for b in p:
            term *= kappa[len(b) - 1]
        total += term
    return total


# ---------------------------------------------------------------------------
# words

_TOKEN = re.compile(r"\s*(?:(\()|(\))|([A-Za-z])|\^(\d+))")


@dataclass(frozen=True)
class Word:
    """A monomial in non-commuting variables, stored letter by letter.

    ``Word.parse("V^2U(VU)^3")`` and ``Word("VVUVUVUVU")`` are equal.
    """

    letters: tuple[str, ...]

    def __init__(self, letters=()):
        if isinstance(letters, str):
            letters = tuple(letters)
        object.__setattr__(self, "letters", tuple(letters))

    @classmethod
    def parse(cls, text: str) -> Word:
        tokens = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                raise ValueError(f"cannot parse word {text!r} at position {pos}")
            tokens.append(m.groups())
            pos = m.end()

        def group(i, depth=0):
            items: list[str] = []
            while i < len(tokens):
                lpar, rpar, letter, _ = tokens[i]
                if rpar:
                    if not depth:
                        raise ValueError(f"unbalanced parentheses in {text!r}")
                    return items, i + 1
                if lpar:
                    inner, i = group(i + 1, depth + 1)
                    chunk = inner
                elif letter:
                    chunk = [letter]
                    i += 1
                else:
                    raise ValueError(f"dangling exponent in {text!r}")
                if i < len(tokens) and tokens[i][3]:
                    chunk = chunk * int(tokens[i][3])
                    i += 1
                items.extend(chunk)
            if depth:
                raise ValueError(f"unbalanced parentheses in {text!r}")
            return items, i

        letters, end = group(0)
        if end != len(tokens):
            raise ValueError(f"unbalanced parentheses in {text!r}")
        return cls(letters)

    @classmethod
    def from_runs(cls, runs: Sequence[tuple[str, int]]) -> Word:
        letters: list[str] = []
        for label, exp in runs:
            if exp < 1:
                raise ValueError("exponents must be positive")
            letters.extend([label] * exp)
        return cls(letters)

    @property
    def runs(self) -> tuple[tuple[str, int], ...]:
        return tuple((k, len(list(g))) for k, g in itertools.groupby(self.letters))

    @property
    def labels(self) -> frozenset[str]:
        return frozenset(self.letters)

    def rotate(self, k: int = 1) -> Word:
        if not self.letters:
            return self
        k %= len(self.letters)
        return Word(self.letters[k:] + self.letters[:k])

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)

    def __pow__(self, n: int) -> Word:
        return Word(self.letters * n)

    def __str__(self) -> str:
        return "".join(k if e == 1 else f"{k}^{e}" for k, e in self.runs)


def _as_word(w) -> Word:
    return Word.parse(w) if isinstance(w, str) else w


# ---------------------------------------------------------------------------
# joint moments of free variables


def _check_cumulants(word: Word, cumulants: Mapping[str, Sequence]):
    for label in word.labels:
        if label not in cumulants:
            raise KeyError(f"no cumulants given for variable {label!r}")
        need = word.letters.count(label)
        if len(cumulants[label]) < need:
            raise ValueError(
                f"variable {label!r} occurs {need} times but only "
                f"{len(cumulants[label])} cumulants are available"
            )


def free_mixed_moment(word, cumulants: Mapping[str, Sequence]):
    """Joint moment of a word in free variables, summed over NC(n).

    Mixed free cumulants vanish, so only partitions whose blocks are
    monochromatic contribute ``prod kappa_{|B|}(colour)``.
    """
    word = _as_word(word)
    n = len(word)
    if n > MAX_NC_SIZE:
        raise ValueError(f"word length {n} exceeds the NC enumeration guard {MAX_NC_SIZE}")
    if n == 0:
        return Fraction(1)
    _check_cumulants(word, cumulants)
    letters = word.letters
    one = _one([c for seq in cumulants.values() for c in seq])
    total = 0 * one
    for p in _nc0(n):
        term = one
        for b in p:
            colour = letters[b[0]]
            if any(letters[i] != colour for i in b):
                break
            term *= cumulants[colour][len(b) - 1]
        else:
            total += term
    return total


class FreeMoments:
    """Memoised joint moments of free variables with given free cumulants.

    The moment of ``X_1 ... X_n`` is expanded over the positions coupled to
    ``X_1`` by a cumulant; only same-coloured positions can couple, and the
    gaps between them are contiguous subwords whose moments are cached.
    """

    def __init__(self, cumulants: Mapping[str, Sequence]):
        self.cumulants = {k: list(v) for k, v in cumulants.items()}
        self._one = _one([c for seq in self.cumulants.values() for c in seq])
        self._cache: dict[tuple[str, ...], object] = {(): self._one}

    def __call__(self, word):
        word = _as_word(word)
        _check_cumulants(word, self.cumulants)
        return self._moment(word.letters)

    def _moment(self, w: tuple[str, ...]):
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        n = len(w)
        colour = w[0]
        kappa = self.cumulants[colour]
        pos = [i for i in range(n) if w[i] == colour]
        zero = 0 * self._one
        # chains[j][k]: sum over chains 0 = i_1 < ... < i_k = pos[j] of the
        # product of gap moments between consecutive chain elements
        chains = [dict() for _ in pos]
        chains[0][1] = self._one
        total = zero
        for j, p in enumerate(pos):
            tail = self._moment(w[p + 1 :])
            for k, weight in chains[j].items():
                total += kappa[k - 1] * weight * tail
                for jj in range(j + 1, len(pos)):
                    q = pos[jj]
                    gap = self._moment(w[p + 1 : q])
                    chains[jj][k + 1] = chains[jj].get(k + 1, zero) + weight * gap
        self._cache[w] = total
        return total


def bls_moment(word, cumulants: Mapping[str, Sequence], engine: FreeMoments | None = None):
    """Joint moment of a word in free variables via the first-letter expansion."""
    if engine is None:
        engine = FreeMoments(cumulants)
    return engine(word)


# ---------------------------------------------------------------------------
# joint cumulants from an arbitrary moment functional


def joint_cumulant(word, moment: Callable[[Word], object], _cache: dict | None = None):
    """Multilinear free cumulant ``R_n(a_1, ..., a_n)`` of the letters of ``word``.

    ``moment`` maps a :class:`Word` to its expectation.  Cumulants are
    obtained by subtracting all non-trivial NC(n) contributions from the
    moment, recursively; ``_cache`` may be shared across calls with the same
    ``moment``.
    """
    word = _as_word(word)
    n = len(word)
    if n == 0:
        raise ValueError("cumulants need a nonempty word")
    if n > MAX_NC_SIZE:
        raise ValueError(f"word length {n} exceeds the NC enumeration guard {MAX_NC_SIZE}")
    cache = {} if _cache is None else _cache

    def kappa(letters: tuple[str, ...]):
        hit = cache.get(letters)
        if hit is not None:
            return hit
        value = moment(Word(letters))
        if len(letters) > 1:
            for p in _nc0(len(letters)):
                if len(p) == 1:
                    continue
                term = None
                for b in p:
                    f = kappa(tuple(letters[i] for i in b))
                    term = f if term is None else term * f
                value = value - term
        cache[letters] = value
        return value

    return kappa(word.letters)
