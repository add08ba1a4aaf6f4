"""Robust conversion with an imperfect comparator, and recovering the coin
tosses that drove any particular output.

Run:  python demos/imperfect_quantizer_pipeline.py
"""

from fractions import Fraction

import betaforge as bf

golden = bf.get_preset("golden")
g_inv = golden.beta.element().inverse()

# band [t - eps, t + eps] equals the golden switch region [1/G, 1] exactly
q = bf.Quantizer((g_inv + 1) / 2, (1 - g_inv) / 2)
print("Quantizer band inside the switch region:", bf.validate_quantizer(golden.beta, q).valid)

s = Fraction(3, 4)
n = 24
print(f"\nConverting s = {s} with adversarial in-band answers (n = {n}):")
for label, stream in [
    ("all zeros  ", bf.BitStream.constant(0)),
    ("all ones   ", bf.BitStream.constant(1)),
    ("alternating", bf.BitStream.alternating()),
]:
    rec = bf.adc_run(golden.beta, q, s, n, stream)
    err = bf.exact_float(s - bf.delta_finite(golden.beta, rec.bits))
    print(f"  {label}: {rec.bits}  error {err:.2e}")
print(f"  every run stays within the tail bound {bf.exact_float(bf.tail_bound(golden.beta, n)):.2e}")

print("\nAt base 2 the switch region degenerates and the same device fails:")
b2 = bf.RationalBeta(Fraction(2))
q_bad = bf.Quantizer(Fraction(1, 2), Fraction(1, 10))
rec = bf.adc_run(b2, q_bad, Fraction(11, 20), 20, bf.BitStream.constant(0))
err = abs(bf.exact_float(Fraction(11, 20) - bf.delta_finite(b2, rec.bits)))
print(f"  fault flag {rec.fault}, error {err:.3f} versus tail bound {bf.exact_float(bf.tail_bound(b2, 20)):.1e}")

print("\nDenoising: canonicalize the raw expansion without changing its value:")
res = bf.denoise_pipeline(golden.beta, q, s, n, bf.BitStream.alternating(), golden.bounds)
print(f"  raw:       {res.raw}")
print(f"  canonical: {res.canonical}")
print("  same exact value:", bf.equiv(golden.beta, res.raw, res.canonical))

print("\nCoin tosses are recoverable from the output and the full prefix set:")
words = bf.enumerate_expansions(golden.beta, Fraction(1), 6)
for x in words:
    w = bf.extract_tosses(golden.beta, words, x)
    print(f"  {x} <- tosses {w or '(none)'}")
