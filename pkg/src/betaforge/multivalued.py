"""Multivalued conversion maps between bases, exact expansion-set enumeration,
and empirical digit-sum measures.

A prefix of an expansion pins its value to a short interval, so converting a
prefix between bases can only return the set of all candidate prefixes whose
values meet a widened copy of that interval.  Widening exponents, per
operation (always the binary-side precision parameter n, never the converted
length):
    f_beta_to_2   widens the value window by 2^-n
    f_2_to_beta   widens J(x) = [value(x) - 2^-n, value(x) + 2^-n] by 2^-n
    g_beta_window widens [value(x) -/+ tail] by 2^-n with n = len(x)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .numerics import (
    BetaForgeError,
    BetaSpec,
    BudgetExceededError,
    DomainError,
    ExactReal,
    Interval,
    SizeGuardError,
    beta_value,
    exact_cmp,
    exact_floor,
)
from .expand import delta_finite, validate_bits, _inv, _check_in_domain
from .algebraic import ClassPartition, partition_words

__all__ = [
    "CandidateSet",
    "WrongLengthError",
    "base_length",
    "f_beta_to_2",
    "f_2_to_beta",
    "g_beta_window",
    "f_1_to_all",
    "enumerate_expansions",
    "nu_measure",
]

DEFAULT_SET_GUARD = 200_000
NU_BUDGET = 30


class WrongLengthError(BetaForgeError):
    """Input word length does not match the required converted length."""

    def __init__(self, got: int, required: int):
        super().__init__(f"word length {got} does not match required length {required}")
        self.got = got
        self.required = required


@dataclass(frozen=True)
class CandidateSet:
    """Sorted candidate words sharing one length, all of whose values lie in
    the construction window widened by 2^-widen_exponent."""

    length: int
    words: tuple[str, ...]
    window: Interval
    widen_exponent: int

    def __contains__(self, word: str) -> bool:
        return word in self.words

    def __len__(self) -> int:
        return len(self.words)


def base_length(beta_value_lo: ExactReal, n: int) -> int:
    """Least m with beta^m >= 2^n: the digit count in base beta that carries
    at least n binary digits of precision.  Exact-power ties take the integer."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    target = Fraction(1 << n)
    m = 0
    p = beta_value_lo - beta_value_lo + 1
    while exact_cmp(p, target) < 0:
        p = p * beta_value_lo
        m += 1
    return m


def _ceil_exact(v: ExactReal) -> int:
    return -exact_floor(-v)


def _bits_of(k: int, n: int) -> str:
    return format(k, f"0{n}b") if n else ""


def f_beta_to_2(beta_window: Interval, x: str, n: int, guard: int = DEFAULT_SET_GUARD) -> CandidateSet:
    """Binary candidates of length n for a base-side prefix x, where the base
    is only known to lie in `beta_window` (degenerate windows allowed).

    Wrong-length inputs are a typed error carrying the required length.
    """
    validate_bits(x)
    if n < 1:
        raise DomainError("n must be >= 1")
    b1, b2 = beta_window.lo, beta_window.hi
    if exact_cmp(b1, 1) <= 0 or exact_cmp(b2, 2) >= 0:
        raise DomainError("base window must lie inside (1, 2)")
    required = base_length(b1, n)
    if len(x) != required:
        raise WrongLengthError(len(x), required)
    degenerate = exact_cmp(b1, b2) == 0
    pad = Fraction(1, 1 << n)
    v_at_b2 = delta_finite(_as_spec(b2), x)
    v_at_b1 = v_at_b2 if degenerate else delta_finite(_as_spec(b1), x)
    if degenerate:
        tail = pad * _inv(b1 - 1)
    else:
        tail = _inv(b1) ** required * _inv(b1 - 1)
    window = Interval(v_at_b2 - pad, v_at_b1 + tail)
    scale = 1 << n
    k_lo = max(0, _ceil_exact((window.lo - pad) * scale))
    k_hi = min(scale - 1, exact_floor((window.hi + pad) * scale))
    count = max(0, k_hi - k_lo + 1)
    if count > guard:
        raise SizeGuardError(f"candidate set of size {count} exceeds guard {guard}")
    words = tuple(_bits_of(k, n) for k in range(k_lo, k_hi + 1))
    return CandidateSet(n, words, window, n)


def _as_spec(v: ExactReal) -> BetaSpec:
    from .numerics import AlgebraicBeta, NumberFieldElement, RationalBeta

    if isinstance(v, NumberFieldElement):
        if v == NumberFieldElement.generator(v.ctx):
            return AlgebraicBeta(v.ctx)
        raise DomainError("algebraic window endpoints must be the field generator")
    return RationalBeta(Fraction(v))


def _dfs_window(beta: BetaSpec, length: int, lo_w: ExactReal, hi_w: ExactReal, guard: int):
    """All words of the given length whose exact value lies in [lo_w, hi_w],
    by depth-first search with reachable-interval pruning."""
    b = beta_value(beta)
    inv_b = _inv(b)
    inv_pows = [inv_b - inv_b + 1]
    for _ in range(length):
        inv_pows.append(inv_pows[-1] * inv_b)
    tail_factor = _inv(b - 1)
    # remaining[i] = largest value addable after i digits are placed
    remaining = [(inv_pows[i] - inv_pows[length]) * tail_factor for i in range(length + 1)]
    out = []
    stack = [(0, b - b, "")]
    while stack:
        i, v, word = stack.pop()
        if exact_cmp(v, hi_w) > 0 or exact_cmp(v + remaining[i], lo_w) < 0:
            continue
        if i == length:
            out.append(word)
            if len(out) > guard:
                raise SizeGuardError(f"window enumeration exceeded guard {guard}")
            continue
        stack.append((i + 1, v + inv_pows[i + 1], word + "1"))
        stack.append((i + 1, v, word + "0"))
    out.sort()
    return out


def f_2_to_beta(beta: BetaSpec, x: str, guard: int = DEFAULT_SET_GUARD) -> CandidateSet:
    """Base-side candidates for a binary prefix x: all words of the carried
    length whose value meets [value(x) - 2^-n, value(x) + 2^-n] widened by
    2^-n, n = len(x)."""
    validate_bits(x)
    n = len(x)
    if n < 1:
        raise DomainError("binary prefix must be nonempty")
    b = beta_value(beta)
    m = base_length(b, n)
    v = _delta2(x)
    pad = Fraction(1, 1 << n)
    window = Interval(v - pad, v + pad)
    words = _dfs_window(beta, m, window.lo - pad, window.hi + pad, guard)
    return CandidateSet(m, tuple(words), window, n)


def _delta2(x: str) -> Fraction:
    acc = 0
    for ch in x:
        acc = (acc << 1) | (ch == "1")
    return Fraction(acc, 1 << len(x)) if x else Fraction(0)


def g_beta_window(beta: BetaSpec, x: str, guard: int = DEFAULT_SET_GUARD) -> ClassPartition:
    """Same-base window around the value of x: every word of equal length
    whose value meets [value(x) - tail, value(x) + tail] widened by 2^-n,
    partitioned into exact value classes sorted by class value."""
    validate_bits(x)
    n = len(x)
    if n < 1:
        raise DomainError("word must be nonempty")
    b = beta_value(beta)
    v = delta_finite(beta, x)
    tail = _inv(b) ** n * _inv(b - 1)
    pad = Fraction(1, 1 << n)
    words = _dfs_window(beta, n, v - tail - pad, v + tail + pad, guard)
    return partition_words(beta, words)


def f_1_to_all(beta: BetaSpec, x: str, guard: int = DEFAULT_SET_GUARD) -> list[tuple[str, ...]]:
    """Candidate expansion sets built from the class partition around x: one
    sorted union per consecutive class range containing the class of x.

    The true prefix set of any value admitting x appears among the candidates;
    their number is iota * (M - iota + 1) for iota the 1-based class index of
    x and M the class count.
    """
    part = g_beta_window(beta, x, guard)
    iota = part.index_of(x)
    m = len(part.classes)
    out = []
    for i in range(1, iota + 1):
        for j in range(iota, m + 1):
            members = []
            for cls in part.classes[i - 1 : j]:
                members.extend(cls.members)
            out.append(tuple(sorted(members)))
    return out


def enumerate_expansions(beta: BetaSpec, s: ExactReal, n: int, guard: int = DEFAULT_SET_GUARD):
    """Exactly the length-n prefixes of expansions of s, sorted, via the exact
    prefix feasibility window: after placing a prefix u, the shifted residual
    must stay inside [0, 1/(beta-1)]."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    b = beta_value(beta)
    _check_in_domain(b, s)
    lo = _inv(b)  # digit 1 feasible from here
    hi = _inv(b * (b - 1))  # digit 0 feasible up to here
    out = []
    stack = [(0, s, "")]
    while stack:
        i, r, word = stack.pop()
        if i == n:
            out.append(word)
            if len(out) > guard:
                raise SizeGuardError(f"expansion enumeration exceeded guard {guard}")
            continue
        if exact_cmp(r, lo) >= 0:
            stack.append((i + 1, b * r - 1, word + "1"))
        if exact_cmp(r, hi) <= 0:
            stack.append((i + 1, b * r, word + "0"))
    out.sort()
    return out


def nu_measure(beta: BetaSpec, m: int, interval: Interval, budget: int = NU_BUDGET) -> Fraction:
    """Mass 2^-m * #{words u of length m : value(u) in interval}, counted
    exactly with subtree pruning: a subtree is skipped when its reachable
    value interval misses `interval` and counted wholesale when contained."""
    if m < 0:
        raise DomainError("m must be nonnegative")
    if m > budget:
        raise BudgetExceededError(f"m = {m} exceeds the measure budget {budget}")
    b = beta_value(beta)
    inv_b = _inv(b)
    inv_pows = [inv_b - inv_b + 1]
    for _ in range(m):
        inv_pows.append(inv_pows[-1] * inv_b)
    tail_factor = _inv(b - 1)
    remaining = [(inv_pows[i] - inv_pows[m]) * tail_factor for i in range(m + 1)]
    lo, hi = interval.lo, interval.hi

    def count(i: int, v: ExactReal) -> int:
        top = v + remaining[i]
        if exact_cmp(v, hi) > 0 or exact_cmp(top, lo) < 0:
            return 0
        if exact_cmp(v, lo) >= 0 and exact_cmp(top, hi) <= 0:
            return 1 << (m - i)
        if i == m:
            return 1 if interval.contains(v) else 0
        return count(i + 1, v) + count(i + 1, v + inv_pows[i + 1])

    return Fraction(count(0, b - b), 1 << m)
