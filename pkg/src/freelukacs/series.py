"""Truncated formal power series over exact rationals or floats.

A :class:`TruncatedSeries` holds ``c_0 .. c_K`` and represents
``sum c_n z^n + O(z^{K+1})``.  All coefficients share one scalar kind:
``"exact"`` (:class:`fractions.Fraction`) or ``"float"``.  Mixing kinds in
a binary operation raises :class:`ScalarKindError`; convert explicitly with
:meth:`TruncatedSeries.to_float`.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational, Real
from typing import Iterable, Sequence

__all__ = [
    "ScalarKindError",
    "SeriesError",
    "TruncatedSeries",
    "as_exact",
    "combine",
    "compose",
    "reciprocal",
    "revert",
]

DEFAULT_ORDER = 10


class SeriesError(ValueError):
    """Raised when a series operation's precondition fails."""


class ScalarKindError(TypeError):
    """Raised when exact and float series are combined."""


def as_exact(x) -> Fraction:
    """Convert ``x`` to a Fraction.

    Floats go through their shortest decimal repr, so ``0.1`` becomes
    ``1/10`` rather than the binary expansion.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def _kind_of(values: Sequence) -> str:
    if all(isinstance(v, Rational) for v in values):
        return "exact"
    if all(isinstance(v, (Real, complex)) for v in values):
        return "float"
    raise TypeError("series coefficients must be rational or real numbers")


class TruncatedSeries:
    """Coefficients ``c_0..c_K`` of a power series known up to ``z^K``."""

    __slots__ = ("coeffs", "kind")

    def __init__(self, coeffs: Iterable, order: int | None = None, kind: str | None = None):
        coeffs = list(coeffs)
        if kind is None:
            kind = _kind_of(coeffs) if coeffs else "exact"
        if kind == "exact":
            coeffs = [as_exact(c) for c in coeffs]
            zero = Fraction(0)
        elif kind == "float":
            coeffs = [float(c) for c in coeffs]
            zero = 0.0
        else:
            raise ValueError(f"unknown scalar kind {kind!r}")
        if order is not None:
            if order < 0:
                raise SeriesError("order must be non-negative")
            coeffs = coeffs[: order + 1] + [zero] * (order + 1 - len(coeffs))
        if not coeffs:
            raise SeriesError("a series needs at least one coefficient")
        self.coeffs: tuple = tuple(coeffs)
        self.kind: str = kind

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, order: int, kind: str = "exact") -> TruncatedSeries:
        return cls([], order=order, kind=kind)

    @classmethod
    def constant(cls, c, order: int, kind: str | None = None) -> TruncatedSeries:
        return cls([c], order=order, kind=kind)

    @classmethod
    def variable(cls, order: int, kind: str = "exact") -> TruncatedSeries:
        """The series ``z``."""
        return cls([0, 1], order=order, kind=kind)

    @classmethod
    def geometric(cls, a, b, order: int, kind: str | None = None) -> TruncatedSeries:
        """Expansion of ``a / (1 - b z)``."""
        if kind is None:
            kind = _kind_of([a, b])
        if kind == "exact":
            a, b = as_exact(a), as_exact(b)
        return cls([a * b**n for n in range(order + 1)], kind=kind)

    # -- basic protocol ----------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self) -> str:
        return f"TruncatedSeries({list(self.coeffs)!r}, kind={self.kind!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.kind == other.kind and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.kind, self.coeffs))

    @property
    def is_reversible(self) -> bool:
        return self.coeffs[0] == 0 and self.order >= 1 and self.coeffs[1] != 0

    @property
    def is_invertible(self) -> bool:
        return self.coeffs[0] != 0

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise SeriesError(f"cannot extend a series of order {self.order} to {order}")
        return TruncatedSeries(self.coeffs[: order + 1], kind=self.kind)

    def to_float(self) -> TruncatedSeries:
        return TruncatedSeries([float(c) for c in self.coeffs], kind="float")

    def max_abs(self):
        return max(abs(c) for c in self.coeffs)

    def _zero(self):
        return Fraction(0) if self.kind == "exact" else 0.0

    def _scalar(self, c):
        if self.kind == "exact":
            if not isinstance(c, Rational):
                raise ScalarKindError(f"cannot scale an exact series by {type(c).__name__}")
            return Fraction(c)
        return float(c)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> TruncatedSeries:
        if isinstance(other, TruncatedSeries):
            if other.kind != self.kind:
                raise ScalarKindError(f"cannot combine {self.kind} and {other.kind} series")
            return other
        return TruncatedSeries.constant(self._scalar(other), self.order, kind=self.kind)

    def __add__(self, other):
        return combine(self, self._coerce(other), "add")

    __radd__ = __add__

    def __sub__(self, other):
        return combine(self, self._coerce(other), "sub")

    def __rsub__(self, other):
        return combine(self._coerce(other), self, "sub")

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], kind=self.kind)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return combine(self, self._coerce(other), "mul")
        c = self._scalar(other)
        return TruncatedSeries([c * x for x in self.coeffs], kind=self.kind)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * reciprocal(self._coerce(other))
        c = self._scalar(other)
        return TruncatedSeries([x / c for x in self.coeffs], kind=self.kind)

    def __rtruediv__(self, other):
        return self._coerce(other) * reciprocal(self)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise SeriesError("only non-negative integer powers are supported")
        result = TruncatedSeries.constant(1, self.order, kind=self.kind)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, inner: TruncatedSeries) -> TruncatedSeries:
        return compose(self, inner)

    # -- calculus and shifts -----------------------------------------------

    def derivative(self) -> TruncatedSeries:
        """Formal derivative; the result has order ``K - 1`` (at least 0)."""
        c = self.coeffs
        if len(c) == 1:
            return TruncatedSeries([self._zero()], kind=self.kind)
        return TruncatedSeries([n * c[n] for n in range(1, len(c))], kind=self.kind)

    def shift_down(self, k: int = 1) -> TruncatedSeries:
        """Divide by ``z^k``; requires ``c_0 .. c_{k-1}`` to vanish.  Loses ``k`` orders."""
        if any(c != 0 for c in self.coeffs[:k]):
            raise SeriesError(f"series is not divisible by z^{k}")
        if k > self.order:
            raise SeriesError("not enough coefficients to divide by z^k")
        return TruncatedSeries(self.coeffs[k:], kind=self.kind)

    def shift_up(self, k: int = 1) -> TruncatedSeries:
        """Multiply by ``z^k`` keeping the same order."""
        z = [self._zero()] * k
        return TruncatedSeries(z + list(self.coeffs[: self.order + 1 - k]), kind=self.kind)

    def evaluate(self, x):
        """Evaluate the truncated polynomial at ``x`` (Horner)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def combine(a: TruncatedSeries, b: TruncatedSeries, kind: str) -> TruncatedSeries:
    """Add, subtract or multiply two series, truncating at the smaller order."""
    if a.kind != b.kind:
        raise ScalarKindError(f"cannot combine {a.kind} and {b.kind} series")
    K = min(a.order, b.order)
    x, y = a.coeffs, b.coeffs
    if kind == "add":
        out = [x[n] + y[n] for n in range(K + 1)]
    elif kind == "sub":
        out = [x[n] - y[n] for n in range(K + 1)]
    elif kind == "mul":
        out = []
        for n in range(K + 1):
            s = x[0] * y[n]
            for i in range(1, n + 1):
                s += x[i] * y[n - i]
            out.append(s)
    else:
        raise ValueError(f"unknown combination {kind!r}")
    return TruncatedSeries(out, kind=a.kind)


def reciprocal(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse ``1/a`` by long division; needs ``a(0) != 0``."""
    c = a.coeffs
    if c[0] == 0:
        raise SeriesError("reciprocal needs a nonzero constant term")
    inv0 = 1 / c[0] if a.kind == "float" else Fraction(1) / c[0]
    out = [inv0]
    for n in range(1, len(c)):
        s = c[1] * out[n - 1]
        for i in range(2, n + 1):
            s += c[i] * out[n - i]
        out.append(-s * inv0)
    return TruncatedSeries(out, kind=a.kind)


def compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """``outer(inner(z))``; ``inner`` must have zero constant term."""
    if outer.kind != inner.kind:
        raise ScalarKindError(f"cannot compose {outer.kind} and {inner.kind} series")
    if inner.coeffs[0] != 0:
        raise SeriesError("inner series of a composition must have zero constant term")
    K = min(outer.order, inner.order)
    inner = inner.truncate(K)
    # Horner; inner has valuation >= 1 so c_n for n > K never contributes
    acc = TruncatedSeries.constant(outer.coeffs[K], K, kind=outer.kind)
    for n in range(K - 1, -1, -1):
        acc = acc * inner + outer.coeffs[n]
    return acc


def revert(a: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse ``b`` with ``a(b(z)) = z + O(z^{K+1})``.

    Newton iteration ``b <- b - (a(b) - z) / a'(b)`` seeded with ``z / c_1``;
    each step doubles the number of correct coefficients.
    """
    if not a.is_reversible:
        raise SeriesError("reversion needs c_0 == 0 and c_1 != 0")
    K = a.order
    z = TruncatedSeries.variable(K, kind=a.kind)
    da = a.derivative()
    da = TruncatedSeries(list(da.coeffs), order=K, kind=a.kind)
    b = z / a.coeffs[1]
    correct = 1
    while correct < K:
        correct = min(2 * correct, K)
        b = b - (compose(a, b) - z) * reciprocal(compose(da, b))
    return b
