"""The two binary-to-beta converters, with their schedules and diagnostics.

Run:  python demos/binary_to_beta_converters.py
"""

from fractions import Fraction

import betaforge as bf

S = Fraction(3, 4)
B2 = bf.RationalBeta(Fraction(2))

# rational base: chunk size N and read schedule follow from beta alone
beta = bf.RationalBeta(Fraction(3, 2))
params = bf.params_rational(beta)
print(f"Rational converter at beta = 3/2: chunk size N = {params.N}")
print("  read schedule:", [params.sigma(i) for i in range(8)])

n = 12
prefix = bf.greedy_expand(B2, S, params.sigma(n))
res = bf.convert_rational(beta, prefix, n)
err = S - bf.delta_finite(beta, res.bits)
print(f"  read {params.sigma(n)} binary digits, emitted {len(res.bits)} base digits")
print(f"  emitted: {res.bits}")
print(f"  value error {float(err):.3e} (tail bound {float(bf.tail_bound(beta, len(res.bits))):.3e})")

# stream base: the golden ratio enters only through the digits of beta - 1
golden = bf.get_preset("golden")
stream = bf.stream_from_exact(golden.beta)
sp = bf.params_stream(stream)
print()
print(f"Stream converter at the golden base: N = {sp.N}, read-ahead L = {sp.L}, correction cap {sp.C_lower}")
prefix = bf.greedy_expand(B2, S, 600)
res = bf.convert_stream(bf.stream_from_exact(golden.beta), prefix, 4)
print(f"  binary reads per chunk: {list(res.sigmas)}")
print(f"  dyadic approximants:   {[f'{float(a):.9f}' for a in res.approximants[:5]]} ...")
print("  per-step corrections:  ", [f"{float(d.correction):.2e}" for d in res.diagnostics])
err = Fraction(3, 4) - bf.delta_finite(golden.beta, res.bits)
lo, hi = err.enclosure(Fraction(1, 10**40))
print(f"  value error below {float(hi):.3e} against the golden base itself")
