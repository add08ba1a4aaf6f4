"""Exact number representations and decidable comparisons.

Everything downstream (expansion generators, converters, canonicalization,
enumeration) runs on exact arithmetic: big rationals via `fractions.Fraction`
and elements of a real number field Q(beta) given by an integer minimal
polynomial plus an isolating interval.  Signs of field elements are decided
by refining the isolating interval until interval evaluation certifies them,
so every comparison is deterministic and reproducible.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import gcd as _gcd
from typing import Callable, Iterator, Sequence, Union

__all__ = [
    "BetaForgeError",
    "MalformedContextError",
    "BudgetExceededError",
    "ExactnessRequiredError",
    "DomainError",
    "SizeGuardError",
    "NumberFieldContext",
    "NumberFieldElement",
    "Interval",
    "RationalBeta",
    "AlgebraicBeta",
    "StreamBeta",
    "BetaSpec",
    "ExactReal",
    "beta_value",
    "beta_from_json",
    "parse_rational",
    "format_rational",
    "exact_sign",
    "exact_cmp",
    "exact_float",
    "exact_floor",
    "floor_log2",
    "ceil_log2",
    "exact_log2_bounds",
    "in_approx",
]

DEFAULT_BIT_BUDGET = 1_000_000


class BetaForgeError(Exception):
    """Base class for all library errors."""


class MalformedContextError(BetaForgeError):
    """Number-field context violates its invariants."""


class BudgetExceededError(BetaForgeError):
    """An exact computation would exceed the configured size budget."""


class ExactnessRequiredError(BetaForgeError):
    """A stream-specified base was passed where an exact value is required."""


class DomainError(BetaForgeError):
    """Input outside the documented domain of an operation."""


class SizeGuardError(BetaForgeError):
    """An enumeration grew past its configured cap."""


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", an integer literal, or a decimal string, exactly."""
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot parse rational from {text!r}") from exc


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def _cmp_pow2(a: Fraction, m: int) -> int:
    # sign of a - 2^m without building floats
    n, d = a.numerator, a.denominator
    lhs, rhs = (n, d << m) if m >= 0 else (n << (-m), d)
    return (lhs > rhs) - (lhs < rhs)


def _interval_mul(alo, ahi, blo, bhi):
    p = (alo * blo, alo * bhi, ahi * blo, ahi * bhi)
    return min(p), max(p)


def _interval_eval(coeffs: Sequence[Fraction], lo: Fraction, hi: Fraction):
    """Interval Horner evaluation of sum(coeffs[i] * x^i) over x in [lo, hi]."""
    acc_lo = acc_hi = Fraction(0)
    for c in reversed(coeffs):
        acc_lo, acc_hi = _interval_mul(acc_lo, acc_hi, lo, hi)
        acc_lo += c
        acc_hi += c
    return acc_lo, acc_hi


class NumberFieldContext:
    """A real algebraic number: integer minimal polynomial plus an isolating
    rational interval containing exactly one real root in (1, 2).

    The context owns a shared, monotonically refined enclosure of the root,
    used to certify signs of field elements.  Refinement is idempotent and
    lock-protected, so contexts are safe to share across threads.
    """

    __slots__ = ("minpoly", "degree", "_lo", "_hi", "_lock", "_pow_rows", "_dyadic")

    def __init__(self, minpoly: Sequence[int], isolating: tuple[Fraction, Fraction]):
        coeffs = tuple(int(c) for c in minpoly)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if len(coeffs) < 2:
            raise MalformedContextError("minimal polynomial must have degree >= 1")
        if coeffs[-1] <= 0:
            raise MalformedContextError("leading coefficient must be positive")
        lo, hi = Fraction(isolating[0]), Fraction(isolating[1])
        if not (1 < lo <= hi < 2):
            raise MalformedContextError("isolating interval must lie within (1, 2)")
        self.minpoly = coeffs
        self.degree = len(coeffs) - 1
        slo = self._poly_sign(lo)
        shi = self._poly_sign(hi)
        if slo == 0 or shi == 0:
            # endpoint happens to be the root only when the root is rational
            if self.degree != 1:
                raise MalformedContextError("isolating endpoint is a root")
        elif slo == shi:
            raise MalformedContextError("minimal polynomial does not change sign over the isolating interval")
        self._lo = lo
        self._hi = hi
        self._lock = threading.Lock()
        self._pow_rows = self._reduction_rows()
        self._dyadic = None

    def _poly_sign(self, q: Fraction) -> int:
        acc = Fraction(0)
        for c in reversed(self.minpoly):
            acc = acc * q + c
        return (acc > 0) - (acc < 0)

    def _reduction_rows(self):
        # rows[k] = coefficients of beta^(degree+k) reduced to degree < d
        d = self.degree
        lead = self.minpoly[-1]
        base = tuple(Fraction(-c, lead) for c in self.minpoly[:-1])
        rows = [base]
        for _ in range(d - 2):
            prev = rows[-1]
            shifted = (Fraction(0),) + prev[:-1]
            top = prev[-1]
            rows.append(tuple(s + top * b for s, b in zip(shifted, base)))
        return tuple(rows)

    def enclosure(self) -> tuple[Fraction, Fraction]:
        return self._lo, self._hi

    def refine(self, max_width: Fraction) -> tuple[Fraction, Fraction]:
        """Shrink the cached root enclosure below `max_width` by bisection."""
        with self._lock:
            lo, hi = self._lo, self._hi
            s_hi = self._poly_sign(hi)
            if s_hi == 0:  # rational root sitting on the endpoint
                s_hi = 1
            while hi - lo > max_width:
                mid = (lo + hi) / 2
                s_mid = self._poly_sign(mid)
                if s_mid == 0:
                    # mid is the root itself; pin an interval around it
                    eps = max_width / 4
                    lo, hi = mid - eps, mid + eps
                    break
                if s_mid == s_hi:
                    hi = mid
                else:
                    lo = mid
            self._lo, self._hi = lo, hi
            return lo, hi

    def root_float(self) -> float:
        lo, hi = self.refine(Fraction(1, 1 << 60))
        return float((lo + hi) / 2)

    def _dyadic_enclosure(self, bits: int) -> tuple[int, int, int]:
        """Integers (P, Q, bits) with P/2^bits <= root <= Q/2^bits, Q - P <= 3."""
        cached = self._dyadic
        if cached is not None and cached[2] >= bits:
            return cached
        lo, hi = self.refine(Fraction(1, 1 << bits))
        scale = 1 << bits
        p = (lo.numerator * scale) // lo.denominator
        q = -((-hi.numerator * scale) // hi.denominator)
        self._dyadic = (p, q, bits)
        return self._dyadic

    def sign_of_coeffs(self, coeffs) -> int:
        """Certified sign of sum(coeffs[i] * root^i) using integer interval
        evaluation over a dyadic enclosure of the root; exact zero only for
        the zero coefficient vector."""
        nz = [i for i, c in enumerate(coeffs) if c]
        if not nz:
            return 0
        if nz == [0]:
            c = coeffs[0]
            return (c > 0) - (c < 0)
        denom_lcm = 1
        for c in coeffs:
            d = c.denominator if isinstance(c, Fraction) else 1
            if d != 1:
                denom_lcm = denom_lcm * d // _gcd(denom_lcm, d)
        ints = [
            (c.numerator * (denom_lcm // c.denominator)) if isinstance(c, Fraction) else c * denom_lcm
            for c in coeffs
        ]
        d = len(ints)
        bits = 64
        for _ in range(24):
            p, q, k = self._dyadic_enclosure(bits)
            acc_lo = acc_hi = ints[d - 1]
            shift = 0
            for j in range(d - 2, -1, -1):
                shift += k
                new_lo = acc_lo * (p if acc_lo >= 0 else q)
                new_hi = acc_hi * (q if acc_hi >= 0 else p)
                scaled = ints[j] << shift
                acc_lo = new_lo + scaled
                acc_hi = new_hi + scaled
            if acc_lo > 0:
                return 1
            if acc_hi < 0:
                return -1
            bits *= 2
        raise MalformedContextError(
            "sign certification did not converge; the minimal polynomial may be reducible"
        )

    def __repr__(self):
        return f"NumberFieldContext(minpoly={list(self.minpoly)}, isolating=({self._lo}, {self._hi}))"


_SIGN_MAX_REFINEMENTS = 4000


class NumberFieldElement:
    """Element c0 + c1*beta + ... + c_{d-1}*beta^{d-1} of Q(beta).

    Immutable.  Arithmetic reduces modulo the minimal polynomial; comparisons
    go through certified sign determination.  Mixed arithmetic with ints and
    Fractions coerces the rational operand into the field.
    """

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: NumberFieldContext, coeffs: Sequence[Fraction]):
        cs = tuple(Fraction(c) for c in coeffs)
        if len(cs) != ctx.degree:
            raise MalformedContextError(f"expected {ctx.degree} coefficients, got {len(cs)}")
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "coeffs", cs)

    def __setattr__(self, *_):
        raise AttributeError("NumberFieldElement is immutable")

    @classmethod
    def from_rational(cls, ctx: NumberFieldContext, q) -> "NumberFieldElement":
        return cls(ctx, (Fraction(q),) + (Fraction(0),) * (ctx.degree - 1))

    @classmethod
    def generator(cls, ctx: NumberFieldContext) -> "NumberFieldElement":
        if ctx.degree == 1:
            # beta is rational: -c0/c1
            return cls(ctx, (Fraction(-ctx.minpoly[0], ctx.minpoly[1]),))
        return cls(ctx, (Fraction(0), Fraction(1)) + (Fraction(0),) * (ctx.degree - 2))

    def _coerce(self, other):
        if isinstance(other, NumberFieldElement):
            if other.ctx is not self.ctx:
                raise DomainError("cannot mix elements of different number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return NumberFieldElement.from_rational(self.ctx, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NumberFieldElement(self.ctx, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NumberFieldElement(self.ctx, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return NumberFieldElement(self.ctx, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self.ctx.degree
        a, b = self.coeffs, o.coeffs
        conv = [Fraction(0)] * (2 * d - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if bj:
                    conv[i + j] += ai * bj
        out = conv[:d]
        rows = self.ctx._pow_rows
        for k in range(d, 2 * d - 1):
            c = conv[k]
            if c:
                row = rows[k - d]
                for i in range(d):
                    out[i] += c * row[i]
        return NumberFieldElement(self.ctx, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = NumberFieldElement.from_rational(self.ctx, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "NumberFieldElement":
        """Multiplicative inverse via the extended Euclidean algorithm in Q[x]."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        # gcd(minpoly, self-as-poly) over Q[x]; minpoly irreducible => gcd = 1
        f = [Fraction(c) for c in self.ctx.minpoly]
        g = list(self.coeffs)
        while len(g) > 1 and not g[-1]:
            g.pop()
        # invariants: s*self + t*minpoly = r  (t never needed)
        r0, r1 = f, g
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while True:
            while len(r1) > 1 and not r1[-1]:
                r1.pop()
            if len(r1) == 1 and not r1[0]:
                raise MalformedContextError("minimal polynomial is reducible")
            if len(r1) == 1:
                inv = 1 / r1[0]
                coeffs = [c * inv for c in s1] + [Fraction(0)] * self.ctx.degree
                return NumberFieldElement(self.ctx, coeffs[: self.ctx.degree])
            q, rem = _poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def is_zero(self) -> bool:
        return all(not c for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(not c for c in self.coeffs[1:])

    def sign(self) -> int:
        """Certified sign: 0 exactly when the reduced element is zero."""
        return self.ctx.sign_of_coeffs(self.coeffs)

    def enclosure(self, max_width: Fraction) -> tuple[Fraction, Fraction]:
        """Rational enclosure of the real value, of width at most `max_width`."""
        ctx = self.ctx
        lo, hi = ctx.enclosure()
        for _ in range(_SIGN_MAX_REFINEMENTS):
            elo, ehi = _interval_eval(self.coeffs, lo, hi)
            if ehi - elo <= max_width:
                return elo, ehi
            lo, hi = ctx.refine((hi - lo) / 4)
        raise MalformedContextError("enclosure refinement did not converge")

    def __float__(self):
        lo, hi = self.enclosure(Fraction(1, 1 << 80))
        return float((lo + hi) / 2)

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, NumberFieldElement) else other
        if o is None or not isinstance(o, NumberFieldElement):
            return NotImplemented
        if o.ctx is not self.ctx:
            return False
        return self.coeffs == o.coeffs

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __hash__(self):
        return hash((id(self.ctx), self.coeffs))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*b^{i}")
        return "NFE(" + (" + ".join(terms) if terms else "0") + ")"


def _poly_divmod(a, b):
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    q = [Fraction(0)] * max(1, len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] / lb
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    while len(a) > 1 and not a[-1]:
        a.pop()
    return q, a


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    for i, bi in enumerate(b):
        a[i] -= bi
    return a


ExactReal = Union[Fraction, NumberFieldElement]


def exact_sign(x: ExactReal) -> int:
    if isinstance(x, NumberFieldElement):
        return x.sign()
    return (x > 0) - (x < 0)


def exact_cmp(a: ExactReal, b: ExactReal) -> int:
    """Sign of a - b; coerces rationals into the field when needed."""
    if isinstance(a, NumberFieldElement) or isinstance(b, NumberFieldElement):
        return exact_sign(a - b)
    return (a > b) - (a < b)


def exact_float(x: ExactReal) -> float:
    return float(x)


def nf_sign(v: NumberFieldElement) -> int:
    """Certified sign of a number-field element (-1, 0, or +1)."""
    return v.sign()


def exact_floor(x: ExactReal) -> int:
    if isinstance(x, Fraction):
        return x.numerator // x.denominator
    lo, hi = x.enclosure(Fraction(1, 4))
    k = lo.numerator // lo.denominator
    # walk to the unique k with k <= x < k+1, deciding boundaries exactly
    while exact_cmp(x, k) < 0:
        k -= 1
    while exact_cmp(x, k + 1) >= 0:
        k += 1
    return k


def floor_log2(a: ExactReal) -> int:
    """Greatest m with 2^m <= a, for a > 0, decided exactly."""
    if exact_sign(a) <= 0:
        raise DomainError("floor_log2 requires a positive argument")
    if isinstance(a, Fraction):
        m = a.numerator.bit_length() - a.denominator.bit_length()
        while _cmp_pow2(a, m) < 0:
            m -= 1
        while _cmp_pow2(a, m + 1) >= 0:
            m += 1
        return m
    lo, _ = a.enclosure(Fraction(1, 16))
    if lo <= 0:
        lo, _ = a.enclosure(Fraction(1, 1 << 40))
    m = floor_log2(lo) if lo > 0 else 0
    while exact_cmp(a, Fraction(2) ** m) < 0:
        m -= 1
    while exact_cmp(a, Fraction(2) ** (m + 1)) >= 0:
        m += 1
    return m


def ceil_log2(a: ExactReal) -> int:
    """Least m with 2^m >= a, for a > 0; exact powers of two take their exponent."""
    f = floor_log2(a)
    return f if exact_cmp(a, Fraction(2) ** f) == 0 else f + 1


def _size_bits(a: ExactReal) -> int:
    if isinstance(a, Fraction):
        return a.numerator.bit_length() + a.denominator.bit_length()
    return sum(c.numerator.bit_length() + c.denominator.bit_length() for c in a.coeffs)


def exact_log2_bounds(a: ExactReal, k: int, bit_budget: int = DEFAULT_BIT_BUDGET) -> tuple[int, int]:
    """Return (ceil(k*log2(a)), floor(log2(a))), both decided by exact
    comparison of a^k (resp. a) against powers of two.
    """
    if k < 0:
        raise DomainError("k must be nonnegative")
    if exact_sign(a) <= 0:
        raise DomainError("a must be positive")
    if k * max(1, _size_bits(a)) > bit_budget:
        raise BudgetExceededError(f"a^{k} would exceed the {bit_budget}-bit budget")
    p = a ** k
    return ceil_log2(p), floor_log2(a)


@dataclass(frozen=True)
class Interval:
    """Closed interval with exact endpoints, lo <= hi."""

    lo: ExactReal
    hi: ExactReal

    def __post_init__(self):
        if exact_cmp(self.lo, self.hi) > 0:
            raise DomainError("interval endpoints out of order")

    def contains(self, x: ExactReal) -> bool:
        return exact_cmp(self.lo, x) <= 0 and exact_cmp(x, self.hi) <= 0


def in_approx(s: ExactReal, interval: Interval, n: int) -> bool:
    """Membership of s in `interval` widened by 2^-n on both sides.

    Deterministic: true iff s lies in [lo - 2^-n, hi + 2^-n].  Exact
    membership in [lo, hi] always answers true, and a true answer always
    certifies membership in the widened interval.
    """
    if n < 0:
        raise DomainError("precision exponent must be nonnegative")
    pad = Fraction(1, 1 << n)
    return exact_cmp(s, interval.lo - pad) >= 0 and exact_cmp(s, interval.hi + pad) <= 0


@dataclass(frozen=True)
class RationalBeta:
    """Base given exactly as a rational in (1, 2]."""

    value: Fraction

    def __post_init__(self):
        v = Fraction(self.value)
        object.__setattr__(self, "value", v)
        if not (1 < v <= 2):
            raise DomainError(f"base {v} outside (1, 2]")


@dataclass(frozen=True)
class AlgebraicBeta:
    """Base given as the unique root of `ctx.minpoly` inside `ctx` isolating interval."""

    ctx: NumberFieldContext

    def element(self) -> NumberFieldElement:
        return NumberFieldElement.generator(self.ctx)


@dataclass(frozen=True)
class StreamBeta:
    """Base known only through the binary-digit stream of beta - 1, with
    rational bracketing bounds 1 < lo <= beta <= hi < 2.

    `bit_factory` returns a fresh iterator over the digits on every call, so
    consumption is replayable by reconstruction.
    """

    bit_factory: Callable[[], Iterator[int]]
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if not (1 < lo <= hi < 2):
            raise DomainError("stream brackets must satisfy 1 < lo <= hi < 2")


BetaSpec = Union[RationalBeta, AlgebraicBeta, StreamBeta]


def beta_value(spec: BetaSpec) -> ExactReal:
    """Exact value of the base; stream bases are rejected."""
    if isinstance(spec, RationalBeta):
        return spec.value
    if isinstance(spec, AlgebraicBeta):
        return spec.element()
    if isinstance(spec, StreamBeta):
        raise ExactnessRequiredError(
            "base given as a bit stream has no exact value; use the stream converter"
        )
    raise DomainError(f"not a base specification: {spec!r}")


def beta_from_json(obj: dict) -> BetaSpec:
    """Build a base from its JSON object form.

    {"minpoly": [c0, ..., cd], "isolating": ["p/q", "r/s"]} for algebraic;
    {"bits": "0101...", "lo": "p/q", "hi": "r/s"} for a stream base.
    """
    if "minpoly" in obj:
        lo = parse_rational(str(obj["isolating"][0]))
        hi = parse_rational(str(obj["isolating"][1]))
        return AlgebraicBeta(NumberFieldContext(obj["minpoly"], (lo, hi)))
    if "bits" in obj:
        bits = str(obj["bits"])
        if bits.strip("01"):
            raise DomainError("stream bits must be a string over 0/1")
        lo = parse_rational(str(obj["lo"]))
        hi = parse_rational(str(obj["hi"]))
        return StreamBeta(lambda: iter(int(b) for b in bits), lo, hi)
    raise DomainError("unrecognized base object; expected minpoly/isolating or bits/lo/hi")
