"""Algebraic data for bases: minimal polynomials, certified conjugate bounds,
value-equivalence of equal-length digit words, and class enumeration.

Two equal-length words are equivalent when their digit sums against inverse
powers of the base agree exactly; for an algebraic base this is decidable in
the number field.  A certified separation bound keeps non-equivalent values
apart, which is what makes windowed class enumeration terminate with exact
answers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Optional, Sequence

from .numerics import (
    AlgebraicBeta,
    BetaSpec,
    DomainError,
    ExactReal,
    NumberFieldContext,
    beta_value,
    exact_cmp,
    exact_sign,
)
from .expand import validate_bits

__all__ = [
    "MinPolyData",
    "ConjugateBounds",
    "Preset",
    "ClassPartition",
    "ValueClass",
    "builtin_presets",
    "get_preset",
    "separation_bound",
    "equiv",
    "equiv_class",
    "is_generalized_garsia",
    "partition_words",
    "scaled_power_table",
]


@dataclass(frozen=True)
class MinPolyData:
    """Integer minimal-polynomial coefficients in ascending degree order.

    Irreducibility is asserted by the caller, not re-proved here.
    """

    coefficients: tuple[int, ...]

    def __post_init__(self):
        cs = tuple(int(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", cs)
        if len(cs) < 2 or cs[-1] <= 0:
            raise DomainError("minimal polynomial needs degree >= 1 and positive leading coefficient")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> int:
        return self.coefficients[-1]

    @property
    def constant(self) -> int:
        return self.coefficients[0]


@dataclass(frozen=True)
class ConjugateBounds:
    """Certified rational bounds on conjugate products of the base.

    pi_lower underestimates leading * prod |1 - |z|| over all conjugates z,
    bplus_upper overestimates beta * leading * prod of the moduli outside the
    unit circle, and k_beta counts conjugates exactly on the unit circle.
    The pisot flag is declared data; its observable consequence (bounded
    per-level class counts) is checked at runtime by the canonicalizer.
    """

    pi_lower: Fraction
    bplus_upper: Fraction
    k_beta: int
    pisot: bool
    provenance: str = "user"

    def __post_init__(self):
        object.__setattr__(self, "pi_lower", Fraction(self.pi_lower))
        object.__setattr__(self, "bplus_upper", Fraction(self.bplus_upper))
        if self.pi_lower <= 0:
            raise DomainError("pi_lower must be positive")
        if self.bplus_upper < 1:
            raise DomainError("bplus_upper must be at least 1")
        if self.k_beta < 0:
            raise DomainError("k_beta must be nonnegative")


@dataclass(frozen=True)
class Preset:
    name: str
    beta: AlgebraicBeta
    data: MinPolyData
    bounds: ConjugateBounds


def _mk_preset(name, minpoly, isolating, pi_lower, bplus_upper, k_beta, pisot):
    ctx = NumberFieldContext(minpoly, (Fraction(isolating[0]), Fraction(isolating[1])))
    return Preset(
        name=name,
        beta=AlgebraicBeta(ctx),
        data=MinPolyData(tuple(minpoly)),
        bounds=ConjugateBounds(pi_lower, bplus_upper, k_beta, pisot, provenance="preset"),
    )


_PRESETS: dict[str, Preset] = {}


def builtin_presets() -> dict[str, Preset]:
    """Registry of built-in bases keyed by name; constructed once and shared."""
    if not _PRESETS:
        _PRESETS["golden"] = _mk_preset(
            "golden", [-1, -1, 1], ("3/2", "5/3"),
            Fraction(38, 100), Fraction(1_618_034, 1_000_000), 0, True,
        )
        _PRESETS["sqrt2"] = _mk_preset(
            "sqrt2", [-2, 0, 1], ("7/5", "3/2"),
            Fraction(2, 5), Fraction(2), 0, False,
        )
        _PRESETS["cbrt2"] = _mk_preset(
            "cbrt2", [-2, 0, 0, 1], ("5/4", "13/10"),
            Fraction(67, 1000), Fraction(2), 0, False,
        )
        _PRESETS["tribonacci"] = _mk_preset(
            "tribonacci", [-1, -1, -1, 1], ("9/5", "15/8"),
            Fraction(68, 1000), Fraction(184, 100), 0, True,
        )
    return _PRESETS


def get_preset(name: str) -> Preset:
    presets = builtin_presets()
    if name not in presets:
        raise DomainError(f"unknown preset {name!r}; known: {sorted(presets)}")
    return presets[name]


def separation_bound(data: MinPolyData, bounds: ConjugateBounds, n: int) -> Fraction:
    """Certified positive lower bound on |value(x) - value(y)| over all
    non-equivalent pairs of length-n words."""
    if n < 1:
        raise DomainError("word length must be >= 1")
    return bounds.pi_lower / (Fraction(n) ** bounds.k_beta * bounds.bplus_upper ** n)


def is_generalized_garsia(data: MinPolyData) -> bool:
    """Monic with |constant coefficient| >= 2: finite digit sums never collide,
    so canonicalization is the identity."""
    return data.leading == 1 and abs(data.constant) >= 2


def scaled_power_table(beta: BetaSpec, n: int):
    """Powers beta^0 .. beta^(n-1) plus suffix sums used as feasibility windows.

    Returns (powers, windows) with windows[i] = sum of beta^k for k < n - i,
    so windows[n] = 0.  Working with values scaled by beta^n keeps all digit
    arithmetic free of divisions.
    """
    b = beta_value(beta)
    powers = [b - b + 1]
    for _ in range(n - 1):
        powers.append(powers[-1] * b)
    windows = [b - b] * (n + 1)
    for i in range(n - 1, -1, -1):
        windows[i] = windows[i + 1] + powers[n - i - 1]
    return powers, windows


def _value_key(v: ExactReal):
    return v.coeffs if hasattr(v, "coeffs") else v


def equiv(beta: BetaSpec, x: str, y: str) -> bool:
    """Exact equality of the two words' values; words must have equal length."""
    validate_bits(x)
    validate_bits(y)
    if len(x) != len(y):
        raise DomainError(f"length mismatch: {len(x)} vs {len(y)}")
    b = beta_value(beta)
    acc = b - b
    for cx, cy in zip(x, y):
        acc = acc * b + (int(cx) - int(cy))
    return exact_sign(acc) == 0


def equiv_class(beta: BetaSpec, x: str) -> list[str]:
    """All equal-length words sharing the exact value of x, sorted.

    Depth-first search over digit prefixes, pruned to the window of scaled
    deficits that remaining digits can still cancel, with exact equality at
    the leaves.
    """
    validate_bits(x)
    n = len(x)
    if n == 0:
        return [""]
    powers, windows = scaled_power_table(beta, n)
    # deficit(u) = beta^n * value(x) - sum_{j<=|u|} u_j beta^(n-j); a prefix u
    # stays viable while its remaining digits can still cancel the deficit,
    # and class members are exactly the words ending at deficit 0
    deficit0 = powers[0] - powers[0]
    for j, ch in enumerate(x):
        if ch == "1":
            deficit0 = deficit0 + powers[n - j - 1]
    out = []
    stack = [(0, deficit0, "")]
    while stack:
        i, deficit, word = stack.pop()
        if i == n:
            out.append(word)
            continue
        p = powers[n - i - 1]
        for digit in (0, 1):
            d2 = deficit - p if digit else deficit
            if exact_sign(d2) < 0:
                continue
            if exact_cmp(d2, windows[i + 1]) > 0:
                continue
            stack.append((i + 1, d2, word + str(digit)))
    out.sort()
    return out


@dataclass(frozen=True)
class ValueClass:
    value: ExactReal
    members: tuple[str, ...]


@dataclass(frozen=True)
class ClassPartition:
    """Equal-length words grouped by exact value, classes in increasing value
    order and members sorted lexicographically."""

    word_length: int
    classes: tuple[ValueClass, ...]

    def index_of(self, word: str) -> int:
        """1-based index of the class containing `word`."""
        for k, cls in enumerate(self.classes, start=1):
            if word in cls.members:
                return k
        raise DomainError(f"{word!r} is not in any class of this partition")

    def all_words(self) -> list[str]:
        return sorted(w for cls in self.classes for w in cls.members)


def partition_words(beta: BetaSpec, words: Sequence[str], values: Optional[Sequence[ExactReal]] = None) -> ClassPartition:
    """Group equal-length words into exact value classes, sorted by value."""
    words = list(words)
    if not words:
        return ClassPartition(0, ())
    n = len(words[0])
    if any(len(w) != n for w in words):
        raise DomainError("all words in a partition must share one length")
    if values is None:
        from .expand import delta_finite

        values = [delta_finite(beta, w) for w in words]
    groups: dict = {}
    for w, v in zip(words, values):
        groups.setdefault(_value_key(v), (v, []))[1].append(w)
    classes = [(v, tuple(sorted(ws))) for v, ws in groups.values()]
    classes.sort(key=cmp_to_key(lambda a, b: exact_cmp(a[0], b[0])))
    return ClassPartition(n, tuple(ValueClass(v, ws) for v, ws in classes))
