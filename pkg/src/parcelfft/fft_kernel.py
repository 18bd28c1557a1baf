"""Serial FFT building blocks and the naive-DFT correctness oracle.

Signals are 1D ``complex128`` numpy arrays; matrices are 2D ``complex128``
arrays in row-major order.  The forward transform is unnormalized with the
``exp(-2*pi*i*j*k/n)`` sign convention, so Parseval's relation reads
``sum |x|^2 == (1/n) * sum |X|^2``.

Everything here is a pure function of its inputs and safe to call from any
number of threads.
"""

from __future__ import annotations

import numpy as np

# Denominator floor for relative errors: keeps 0/0 comparisons at exactly 0.
EPS_FLOOR = 1e-30


def is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def dft_naive(x) -> np.ndarray:
    """Discrete Fourier transform evaluated straight from the definition.

    ``out[k] = sum_j x[j] * exp(-2*pi*i*j*k/n)``, computed as the full
    O(n^2) matrix-vector product with no recursion or factorization.  This
    is the independent oracle every fast path is checked against.  The
    exponential is periodic in ``j*k mod n``, so a single period of roots
    is evaluated and indexed; the summation itself stays O(n^2).
    """
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("dft_naive expects a nonempty 1D sequence")
    n = x.size
    j = np.arange(n, dtype=np.int64)
    roots = np.exp((-2j * np.pi / n) * np.arange(n))
    return roots[np.outer(j, j) % n] @ x


def bit_reverse_indices(n: int) -> np.ndarray:
    """Permutation that reverses the binary digits of each index 0..n-1."""
    if not is_pow2(n):
        raise ValueError(f"length {n} is not a power of two")
    bits = n.bit_length() - 1
    rev = np.zeros(n, dtype=np.intp)
    for i in range(1, n):
        rev[i] = (rev[i >> 1] >> 1) | ((i & 1) << (bits - 1))
    return rev


def _fft_pow2_last_axis(a: np.ndarray) -> np.ndarray:
    """Iterative radix-2 DIT transform along the last axis.

    One explicit bit-reversal permutation pass, then log2(n) butterfly
    stages.  Twiddles are computed per stage from the complex exponential.
    Rows (leading axes) are transformed independently; the result does not
    depend on any row-processing order.
    """
    n = a.shape[-1]
    if not is_pow2(n):
        raise ValueError(f"length {n} is not a power of two")
    out = np.array(a[..., bit_reverse_indices(n)], dtype=np.complex128)
    m = 2
    while m <= n:
        half = m // 2
        w = np.exp((-2j * np.pi / m) * np.arange(half))
        blocks = out.reshape(out.shape[:-1] + (n // m, m))
        u = blocks[..., :half].copy()
        t = blocks[..., half:] * w
        blocks[..., :half] = u + t
        blocks[..., half:] = u - t
        m *= 2
    return out


def fft_pow2(x) -> np.ndarray:
    """Radix-2 FFT of a power-of-two-length signal (same math as dft_naive)."""
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("fft_pow2 expects a nonempty 1D sequence")
    return _fft_pow2_last_axis(x)


def fft_rows(m) -> np.ndarray:
    """Transform each row of a 2D matrix independently; shape is preserved."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError("fft_rows expects a 2D matrix")
    return _fft_pow2_last_axis(m)


def fft2_serial(m) -> np.ndarray:
    """2D DFT of a power-of-two matrix: row pass, transpose, row pass, transpose back.

    Output element (u, v) is indexed in the same orientation as the input.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError("fft2_serial expects a 2D matrix")
    step1 = fft_rows(m)
    step2 = fft_rows(np.ascontiguousarray(step1.T))
    return np.ascontiguousarray(step2.T)


def max_rel_error(a, b) -> float:
    """max over elements of |a - b| / max(|b|, EPS_FLOOR); shapes must agree."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), EPS_FLOOR)))
