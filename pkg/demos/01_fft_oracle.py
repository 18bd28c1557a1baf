"""
Serial FFT kernels and the naive-DFT oracle
===========================================

The fast radix-2 transform is only trusted because an O(n^2) evaluation of
the DFT definition agrees with it.  This script shows the oracle check,
energy conservation, and the 2D transform.
"""

import numpy as np

from parcelfft import dft_naive, fft2_serial, fft_pow2, max_rel_error

# An impulse spreads evenly over every frequency bin.
print("fft([1,0,0,0])      =", fft_pow2([1, 0, 0, 0]).round(12))

# A constant concentrates in bin zero.
print("fft([1,1,1,1])      =", fft_pow2([1, 1, 1, 1]).round(12))

# The same answers fall out of the definition sum.
print("dft_naive([1,2,3,4]) =", dft_naive([1, 2, 3, 4]).round(12))

# Fast path vs oracle on a random signal.
rng = np.random.default_rng(42)
x = rng.uniform(-1, 1, 256) + 1j * rng.uniform(-1, 1, 256)
err = max_rel_error(fft_pow2(x), dft_naive(x))
print(f"\nradix-2 vs naive DFT, n=256: max relative error = {err:.3e}")

# Parseval: signal energy equals spectrum energy over n.
X = fft_pow2(x)
print(f"sum|x|^2             = {np.sum(np.abs(x) ** 2):.12f}")
print(f"(1/n) sum|X|^2       = {np.sum(np.abs(X) ** 2) / x.size:.12f}")

# The 2D transform is two row passes around a transpose.
m = rng.uniform(-1, 1, (8, 8)) + 1j * rng.uniform(-1, 1, (8, 8))
print(f"\nfft2 vs numpy oracle, 8x8: {max_rel_error(fft2_serial(m), np.fft.fft2(m)):.3e}")
