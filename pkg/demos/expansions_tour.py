"""Tour of the expansion generators: greedy, lazy, and toss-driven.

Run:  python demos/expansions_tour.py
"""

from fractions import Fraction

import betaforge as bf

S = Fraction(3, 4)

print("Greedy digits of s = 3/4 in six bases (50 digits each):")
for beta in ("2", "101/100", "6/5", "3/2", "9/5", "199/100"):
    spec = bf.RationalBeta(bf.parse_rational(beta))
    print(f"  beta = {beta:>8}: {bf.greedy_expand(spec, S, 50)}")

print()
print("Greedy vs lazy at a dyadic point (base 2, s = 3/4):")
b2 = bf.RationalBeta(Fraction(2))
print("  greedy:", bf.greedy_expand(b2, S, 8))
print("  lazy:  ", bf.lazy_expand(b2, S, 8))

golden = bf.get_preset("golden")
print()
print("The golden base keeps both digits valid on the switch region", end=" ")
lo, hi = bf.switch_region(golden.beta)
print(f"[{bf.exact_float(lo):.6f}, {bf.exact_float(hi):.6f}]:")
for tosses in ("111111", "000000", "101011"):
    word, trace = bf.random_expand(golden.beta, Fraction(1), 6, bf.BitStream.from_bits(tosses))
    visits = sum(t.in_switch for t in trace)
    print(f"  tosses {tosses} -> word {word}   (switch visits: {visits})")
print("  all-ones tosses reproduce the greedy word, all-zeros the lazy word")

print()
print("Landing of the shift map into [0, 1):")
b32 = bf.RationalBeta(Fraction(3, 2))
for r in (Fraction(0), Fraction(19, 10), Fraction(2)):
    info = bf.landing_threshold(b32, r)
    print(f"  r = {str(r):>5}: threshold {info.threshold:.3f}, first landing index {info.least_landing}")
