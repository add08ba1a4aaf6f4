"""Value windows: converting prefixes between bases can only pin a value to
an interval, so the conversions are set-valued; the empirical digit-sum
measure weighs such intervals.

Run:  python demos/windows_and_measures.py
"""

from fractions import Fraction

import betaforge as bf

B32 = bf.RationalBeta(Fraction(3, 2))
golden = bf.get_preset("golden")

print("Base-to-binary candidates for the prefix 1000 at beta = 3/2:")
cs = bf.f_beta_to_2(bf.Interval(Fraction(3, 2), Fraction(3, 2)), "1000", 2)
print(f"  {list(cs.words)}  (cardinality bound 1/(beta-1) + 3 = 5)")

print()
print("Binary-to-base candidates for the prefix 11 at beta = 3/2:")
cs = bf.f_2_to_beta(B32, "11")
print(f"  {len(cs.words)} candidate words of length {cs.length}; a superset of the true prefix set:")
true = bf.enumerate_expansions(B32, Fraction(3, 4), cs.length)
print(f"  prefix set of 3/4: {true}")

print()
print("Golden window around 1100, partitioned into exact value classes:")
part = bf.g_beta_window(golden.beta, "1100")
for cls in part.classes:
    print(f"  value {bf.exact_float(cls.value):.3f}: {' '.join(cls.members)}")
iota = part.index_of("1100")
candidates = bf.f_1_to_all(golden.beta, "1100")
print(f"  class index of 1100: {iota}; consecutive-range candidates: {len(candidates)}")

print()
print("All length-4 prefixes of expansions of 1 in the golden base:")
words = bf.enumerate_expansions(golden.beta, Fraction(1), 4)
print(f"  {words}  (count {len(words)})")

print()
print("Empirical measure of length-m digit sums (a finite-stage Bernoulli convolution):")
for m in (4, 8, 12):
    mass = bf.nu_measure(golden.beta, m, bf.Interval(Fraction(9, 10), Fraction(11, 10)))
    print(f"  m = {m:>2}: mass near 1 is {mass} ~ {float(mass):.4f}")
