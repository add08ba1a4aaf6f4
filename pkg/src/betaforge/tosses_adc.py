"""Simulation of expansion hardware with an imperfect comparator, and
recovery of the coin tosses behind any expansion.

The comparator answers reliably only outside a band around its threshold;
inside the band it returns an arbitrary bit, modeled here by an explicit
replayable toss stream.  When the band sits inside the switch region the
device still emits a valid expansion of its input.  Conversely, given the
full prefix set of a value, the tosses that drive the randomized algorithm
to a particular member are recoverable: they sit exactly at the indices
where the prefix tree branches.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .numerics import (
    BetaSpec,
    DomainError,
    ExactReal,
    beta_value,
    exact_cmp,
    exact_sign,
)
from .expand import BitStream, switch_region, validate_bits, _check_in_domain, _inv
from .canonical import FastRunStats, m_beta_fast
from .algebraic import ConjugateBounds

__all__ = [
    "Quantizer",
    "QuantizerCheck",
    "RunRecord",
    "PipelineResult",
    "validate_quantizer",
    "adc_run",
    "branch_indices",
    "extract_tosses",
    "denoise_pipeline",
]


@dataclass(frozen=True)
class Quantizer:
    """Threshold comparator with symmetric uncertainty band [t - eps, t + eps]."""

    t: ExactReal
    eps: ExactReal

    def __post_init__(self):
        if exact_sign(self.eps) < 0:
            raise DomainError("quantizer uncertainty must be nonnegative")


@dataclass(frozen=True)
class QuantizerCheck:
    valid: bool
    reason: Optional[str] = None


@dataclass(frozen=True)
class RunRecord:
    """One device run: emitted bits, the step indices whose residual sat in
    the switch region, the bits emitted at exactly those indices, the final
    shifted residual, and whether any step escaped the representable interval
    (possible only with an unsound quantizer; the run continues clamped)."""

    bits: str
    switch_indices: tuple[int, ...]
    consumed_tosses: str
    residual: ExactReal
    fault: bool
    fault_indices: tuple[int, ...] = ()


@dataclass(frozen=True)
class PipelineResult:
    raw: str
    canonical: str
    record: RunRecord
    stats: FastRunStats


def validate_quantizer(beta: BetaSpec, q: Quantizer) -> QuantizerCheck:
    """Sound iff the uncertainty band sits inside the switch region, so that
    an arbitrary in-band answer is always a digit both continuations allow."""
    s_lo, s_hi = switch_region(beta)
    band_lo = q.t - q.eps
    band_hi = q.t + q.eps
    if exact_cmp(band_lo, s_lo) < 0:
        return QuantizerCheck(False, f"band lower end {band_lo} falls below the switch region start {s_lo}")
    if exact_cmp(band_hi, s_hi) > 0:
        return QuantizerCheck(False, f"band upper end {band_hi} exceeds the switch region end {s_hi}")
    return QuantizerCheck(True)


def adc_run(beta: BetaSpec, q: Quantizer, s: ExactReal, n: int, tosses: BitStream) -> RunRecord:
    """Drive the comparator loop for n digits from input s.

    In-band residuals consume the next toss; the trajectory's switch-region
    visits and the bits emitted there are recorded, so a sound run can be
    checked against toss extraction bit for bit.  Residuals that escape the
    representable interval set the fault flag and are clamped.
    """
    b = beta_value(beta)
    _check_in_domain(b, s)
    s_lo, s_hi = switch_region(beta)
    band_lo = q.t - q.eps
    band_hi = q.t + q.eps
    top = _inv(b - 1)
    r = s
    bits = []
    switch_idx = []
    consumed = []
    fault_idx = []
    for i in range(n):
        in_switch = exact_cmp(s_lo, r) <= 0 and exact_cmp(r, s_hi) <= 0
        if exact_cmp(r, band_lo) < 0:
            bit = 0
        elif exact_cmp(r, band_hi) > 0:
            bit = 1
        else:
            bit = tosses.next_bit()
        if in_switch:
            switch_idx.append(i)
            consumed.append(str(bit))
        bits.append(str(bit))
        r = b * r - bit
        if exact_sign(r) < 0:
            fault_idx.append(i)
            r = r - r  # clamp to 0
        elif exact_cmp(r, top) > 0:
            fault_idx.append(i)
            r = top
    return RunRecord(
        "".join(bits),
        tuple(switch_idx),
        "".join(consumed),
        r,
        bool(fault_idx),
        tuple(fault_idx),
    )


def branch_indices(expansions: Sequence[str], x: str) -> tuple[int, ...]:
    """Indices i (0-based prefix lengths) at which some member of the prefix
    set shares x's first i digits but then differs."""
    validate_bits(x)
    if x not in set(expansions):
        raise DomainError("word is not a member of the given prefix set")
    n = len(x)
    branches = set()
    for y in expansions:
        if y == x:
            continue
        cp = 0
        while cp < n and y[cp] == x[cp]:
            cp += 1
        if cp < n:
            branches.add(cp)
    return tuple(sorted(branches))


def extract_tosses(beta: BetaSpec, expansions: Sequence[str], x: str) -> str:
    """Tosses that make the randomized algorithm emit x: the digit x takes at
    every branch index, in increasing index order.

    `expansions` must be the full prefix set of the underlying value; the
    result equals the consumed-toss prefix of any run that produced x.
    """
    del beta  # extraction is purely combinatorial once the prefix set is given
    return "".join(x[i] for i in branch_indices(expansions, x))


def denoise_pipeline(
    beta: BetaSpec,
    q: Quantizer,
    s: ExactReal,
    n: int,
    tosses: BitStream,
    bounds: Optional[ConjugateBounds] = None,
) -> PipelineResult:
    """Device run followed by canonicalization: the raw expansion is mapped to
    the value-preserving lexicographic maximum of its class."""
    check = validate_quantizer(beta, q)
    if not check.valid:
        raise DomainError(f"pipeline requires a sound quantizer: {check.reason}")
    record = adc_run(beta, q, s, n, tosses)
    canonical, stats = m_beta_fast(beta, record.bits, bounds)
    if canonical < record.bits:
        raise DomainError("canonicalization produced a lexicographically smaller word; internal error")
    return PipelineResult(record.bits, canonical, record, stats)
