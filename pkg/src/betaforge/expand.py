"""Expansion generators for bases in (1, 2].

Digits of an expansion of s come from iterating the shift map r -> beta*r - b
with b chosen by threshold rules: the greedy rule emits 1 whenever possible,
the lazy rule emits 0 whenever possible, and the randomized rule consults a
coin toss exactly on the switch region [1/beta, 1/(beta*(beta-1))] where both
digits stay valid.  All residuals are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional

from .numerics import (
    BetaForgeError,
    BetaSpec,
    DomainError,
    ExactReal,
    beta_value,
    exact_cmp,
    exact_float,
    exact_sign,
)

__all__ = [
    "BitStream",
    "StreamExhaustedError",
    "TraceStep",
    "LandingInfo",
    "validate_bits",
    "delta_finite",
    "tail_bound",
    "expansion_domain_max",
    "switch_region",
    "greedy_prefix",
    "greedy_expand",
    "lazy_expand",
    "random_expand",
    "landing_threshold",
]


class StreamExhaustedError(BetaForgeError):
    """A finite toss stream ran out while a toss was required."""


class BitStream:
    """Pull-based bit source with a position counter.

    Streams are single-consumer; deterministic replay is obtained by
    reconstructing the stream from the same definition.
    """

    def __init__(self, factory: Callable[[], Iterator[int]], label: str = "<stream>"):
        self._iter = factory()
        self._label = label
        self.consumed = 0

    @classmethod
    def from_bits(cls, bits: str) -> "BitStream":
        validate_bits(bits)
        return cls(lambda: iter(int(b) for b in bits), label=f"bits:{bits}")

    @classmethod
    def constant(cls, bit: int) -> "BitStream":
        return cls(lambda: iter(lambda: bit, 2), label=f"constant:{bit}")

    @classmethod
    def alternating(cls, first: int = 1) -> "BitStream":
        def gen():
            b = first
            while True:
                yield b
                b ^= 1

        return cls(gen, label=f"alternating:{first}")

    def next_bit(self) -> int:
        try:
            b = next(self._iter)
        except StopIteration:
            raise StreamExhaustedError(
                f"toss stream {self._label} exhausted after {self.consumed} bits"
            ) from None
        if b not in (0, 1):
            raise DomainError(f"toss stream produced non-bit value {b!r}")
        self.consumed += 1
        return b


def validate_bits(bits: str) -> str:
    if bits.strip("01"):
        raise DomainError(f"not a bitstring over 0/1: {bits!r}")
    return bits


@dataclass(frozen=True)
class TraceStep:
    """One step of the randomized expansion: residual seen, digit emitted,
    and the toss consumed when the residual sat in the switch region."""

    index: int
    residual_before: ExactReal
    emitted_bit: int
    in_switch: bool
    toss_consumed: Optional[int]

    def __post_init__(self):
        if self.in_switch != (self.toss_consumed is not None):
            raise DomainError("toss_consumed must be present exactly when in_switch")


@dataclass(frozen=True)
class LandingInfo:
    """Landing data for a residual r: the real threshold above which every
    iterate of the greedy map lies in [0, 1), and the least iterate index
    that actually lands there (None when the all-ones fixed point never lands)."""

    threshold: float
    least_landing: Optional[int]


def _one(beta):
    return Fraction(1) if isinstance(beta, Fraction) else beta / beta


def _inv(x):
    return Fraction(1) / x if isinstance(x, Fraction) else x.inverse()


def expansion_domain_max(beta: BetaSpec) -> ExactReal:
    """Right endpoint 1/(beta-1) of the representable interval."""
    b = beta_value(beta)
    return _inv(b - 1)


def switch_region(beta: BetaSpec):
    """Endpoints (1/beta, 1/(beta*(beta-1))) of the region where both digits
    remain valid; degenerate exactly at beta = 2."""
    b = beta_value(beta)
    return _inv(b), _inv(b * (b - 1))


def _check_in_domain(b, s):
    if exact_sign(s) < 0 or exact_cmp(s, _inv(b - 1)) > 0:
        raise DomainError("value outside [0, 1/(beta-1)]")


def delta_finite(beta: BetaSpec, bits: str) -> ExactReal:
    """Exact value sum(bits[i] * beta^-(i+1)); empty input gives 0."""
    b = beta_value(beta)
    validate_bits(bits)
    inv_b = _inv(b)
    acc = b - b  # zero of the right type
    for ch in reversed(bits):
        acc = acc * inv_b
        if ch == "1":
            acc = acc + inv_b
    return acc


def tail_bound(beta: BetaSpec, n: int) -> ExactReal:
    """beta^-n / (beta - 1): the largest value n trailing digits can add."""
    b = beta_value(beta)
    return _inv(b) ** n * _inv(b - 1)


def greedy_prefix(beta: BetaSpec, r: ExactReal, n_digits: int):
    """First `n_digits` greedy digits of r together with the shifted residual
    beta^n * (r - value(digits)), still inside [0, 1/(beta-1)]."""
    b = beta_value(beta)
    _check_in_domain(b, r)
    inv_b = _inv(b)
    out = []
    for _ in range(n_digits):
        if exact_cmp(r, inv_b) < 0:
            out.append("0")
            r = b * r
        else:
            out.append("1")
            r = b * r - 1
    return "".join(out), r


def greedy_expand(beta: BetaSpec, s: ExactReal, n: int) -> str:
    """n-digit prefix of the lexicographically maximal expansion of s."""
    bits, _ = greedy_prefix(beta, s, n)
    return bits


def lazy_expand(beta: BetaSpec, s: ExactReal, n: int) -> str:
    """n-digit prefix of the lexicographically minimal expansion of s."""
    b = beta_value(beta)
    _check_in_domain(b, s)
    hi = _inv(b * (b - 1))
    out = []
    r = s
    for _ in range(n):
        if exact_cmp(r, hi) <= 0:
            out.append("0")
            r = b * r
        else:
            out.append("1")
            r = b * r - 1
    return "".join(out)


def random_expand(beta: BetaSpec, s: ExactReal, n: int, tosses: BitStream):
    """Randomized expansion driven by an explicit toss stream.

    Digits are forced outside the switch region and equal the next toss
    inside it.  Returns the emitted word and the full step trace.
    """
    b = beta_value(beta)
    _check_in_domain(b, s)
    lo, hi = _inv(b), _inv(b * (b - 1))
    out = []
    trace = []
    r = s
    for i in range(n):
        before = r
        if exact_cmp(r, lo) < 0:
            bit, in_switch, toss = 0, False, None
        elif exact_cmp(r, hi) > 0:
            bit, in_switch, toss = 1, False, None
        else:
            toss = tosses.next_bit()
            bit, in_switch = toss, True
        out.append(str(bit))
        r = b * r - bit
        trace.append(TraceStep(i, before, bit, in_switch, toss))
    return "".join(out), trace


def landing_threshold(beta: BetaSpec, r: ExactReal) -> LandingInfo:
    """Least iterate index at which the greedy map brings r into [0, 1),
    together with the real-valued threshold it is compared against.

    The all-ones fixed point r = 1/(beta-1) never lands; its threshold is
    infinite and the landing index is None.
    """
    b = beta_value(beta)
    if isinstance(b, Fraction) and b == 2:
        raise DomainError("landing threshold requires beta strictly below 2")
    _check_in_domain(b, r)
    numer = 1 - (b - 1) * r  # zero exactly at the fixed point
    if exact_sign(numer) == 0:
        return LandingInfo(math.inf, None)
    ratio = exact_float((2 - b) / numer)
    threshold = math.log(ratio) / math.log(exact_float(b)) if ratio > 0 else -math.inf
    least = 0
    x = r
    while exact_cmp(x, 1) >= 0:
        x = b * x - 1
        least += 1
    return LandingInfo(threshold, least)
