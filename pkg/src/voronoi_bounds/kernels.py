"""Hot integer kernels, compiled with numba when available.

Every kernel has a pure numpy/Python twin. Set ``VORONOI_BOUNDS_NUMBA=0``
before import to force the fallback path (useful for debugging and for the
benchmark in ``benchmarks/bench_kernels.py``). All kernels work on int64
and require their moduli to stay below 2**31 so products never overflow.
"""

from __future__ import annotations

import math
import os

import numpy as np

_WANT_NUMBA = os.environ.get("VORONOI_BOUNDS_NUMBA", "1").lower() not in ("0", "false", "no", "off")

try:
    if not _WANT_NUMBA:
        raise ImportError("numba disabled by VORONOI_BOUNDS_NUMBA")
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


MAX_MODULUS = 2**31 - 1

__all__ = [
    "HAS_NUMBA",
    "BACKEND",
    "bernoulli_table_mod_p",
    "power_residue_product",
    "prime_sieve",
    "prime_reciprocal_sum",
    "box_short_vectors",
    "py_bernoulli_table_mod_p",
    "py_power_residue_product",
    "py_prime_sieve",
    "py_box_short_vectors",
]


# --- Bernoulli numbers mod p -------------------------------------------------


@njit(cache=True, nogil=True)
def _powmod(b, e, m):
    r = 1
    b %= m
    while e > 0:
        if e & 1:
            r = (r * b) % m
        b = (b * b) % m
        e >>= 1
    return r


@njit(cache=True, nogil=True)
def _nb_bernoulli_table(p, kmax):
    out = np.zeros(kmax + 1, dtype=np.int64)
    out[0] = 1
    if kmax >= 1:
        out[1] = (p - 1) // 2  # -1/2 mod p
    # row holds C(m+1, j) mod p, advanced one Pascal step per m
    row = np.zeros(kmax + 2, dtype=np.int64)
    row[0] = 1
    row[1] = 1
    for m in range(1, kmax + 1):
        # advance row to C(m+1, .)
        for j in range(m + 1, 0, -1):
            row[j] = (row[j] + row[j - 1]) % p
        if m % 2 == 1:
            continue
        s = row[0] * out[0] + row[1] * out[1]
        for j in range(2, m, 2):
            s += row[j] * out[j]
            if s > 4611686018427387904:
                s %= p
        s %= p
        inv = _powmod(m + 1, p - 2, p)
        out[m] = (-s * inv) % p
    return out


def py_bernoulli_table_mod_p(p: int, kmax: int) -> np.ndarray:
    """numpy twin of :func:`bernoulli_table_mod_p`."""
    out = np.zeros(kmax + 1, dtype=np.int64)
    out[0] = 1
    if kmax >= 1:
        out[1] = (p - 1) // 2
    row = np.zeros(kmax + 2, dtype=np.int64)
    row[0] = 1
    row[1] = 1
    for m in range(1, kmax + 1):
        row[1 : m + 2] = (row[1 : m + 2] + row[0 : m + 1]) % p
        if m % 2 == 1:
            continue
        idx = np.r_[0, 1, np.arange(2, m, 2)]
        if p < 2**20:
            s = int(np.dot(row[idx], out[idx]) % p)
        else:
            s = sum(int(row[j]) * int(out[j]) for j in idx) % p
        out[m] = (-s * pow(m + 1, p - 2, p)) % p
    return out


def bernoulli_table_mod_p(p: int, kmax: int) -> np.ndarray:
    """Residues of B_0..B_kmax modulo the odd prime ``p``.

    Requires ``kmax <= p - 2`` so every B_j involved is p-integral
    (von Staudt-Clausen) and every ``m + 1`` is invertible.
    """
    if not (2 < p <= MAX_MODULUS):
        raise ValueError(f"modulus {p} outside (2, 2**31)")
    if kmax > p - 2:
        raise ValueError(f"kmax={kmax} exceeds p-2={p - 2}")
    if HAS_NUMBA:
        return _nb_bernoulli_table(np.int64(p), np.int64(kmax))
    return py_bernoulli_table_mod_p(p, kmax)


# --- power-residue product for the Vandiver unit test ----------------------


@njit(cache=True, nogil=True)
def _nb_power_residue_product(p, k, q, eta, full_range):
    inv2 = (p + 1) // 2
    top = p - 1 if full_range else (p - 1) // 2
    u = 1
    for a in range(1, top + 1):
        half = (a * inv2) % p
        x = _powmod(eta, half, q)
        y = _powmod(eta, (p - half) % p, q)
        base = (x - y) % q
        e = _powmod(a, p - 1 - k, p)
        u = (u * _powmod(base, e, q)) % q
    return _powmod(u, (q - 1) // p, q)


def py_power_residue_product(p: int, k: int, q: int, eta: int, full_range: bool = False) -> int:
    """Plain-Python twin of :func:`power_residue_product`."""
    inv2 = (p + 1) // 2
    top = p - 1 if full_range else (p - 1) // 2
    u = 1
    for a in range(1, top + 1):
        half = a * inv2 % p
        base = (pow(eta, half, q) - pow(eta, (p - half) % p, q)) % q
        u = u * pow(base, pow(a, p - 1 - k, p), q) % q
    return pow(u, (q - 1) // p, q)


def power_residue_product(p: int, k: int, q: int, eta: int, full_range: bool = False) -> int:
    """p-th power residue symbol (as an element of order dividing p mod q) of

        prod_a (eta^(a/2) - eta^(-a/2)) ** (a^(p-1-k) mod p)

    over 1 <= a <= (p-1)/2, or over 1 <= a <= p-1 with ``full_range``.
    ``a/2`` is taken modulo p, which is legitimate because eta has order p.
    A return value of 1 means the product is a p-th power mod q.
    """
    if q > MAX_MODULUS:
        raise ValueError(f"auxiliary prime {q} too large for int64 kernels")
    if HAS_NUMBA:
        return int(_nb_power_residue_product(p, k, q, eta, full_range))
    return py_power_residue_product(p, k, q, eta, full_range)


# --- primes ------------------------------------------------------------------


@njit(cache=True, nogil=True)
def _nb_sieve(x):
    flags = np.ones(x + 1, dtype=np.bool_)
    flags[:2] = False
    i = 2
    while i * i <= x:
        if flags[i]:
            for j in range(i * i, x + 1, i):
                flags[j] = False
        i += 1
    return flags


def py_prime_sieve(x: int) -> np.ndarray:
    flags = np.ones(x + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, math.isqrt(x) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    return flags


def prime_sieve(x: int) -> np.ndarray:
    """Boolean primality table for 0..x."""
    if x < 1:
        return np.zeros(max(x + 1, 0), dtype=bool)
    if HAS_NUMBA:
        return _nb_sieve(np.int64(x))
    return py_prime_sieve(x)


@njit(cache=True, nogil=True)
def _nb_reciprocal_sum(flags, lo):
    # Neumaier-compensated sum keeps the error at a few ulps
    s = 0.0
    c = 0.0
    for n in range(lo, flags.shape[0]):
        if flags[n]:
            t = 1.0 / n
            tot = s + t
            if abs(s) >= abs(t):
                c += (s - tot) + t
            else:
                c += (t - tot) + s
            s = tot
    return s + c


def prime_reciprocal_sum(lo: int, x: int) -> float:
    """Sum of 1/p over primes lo <= p <= x."""
    flags = prime_sieve(x)
    if HAS_NUMBA:
        return float(_nb_reciprocal_sum(flags, lo))
    primes = np.flatnonzero(flags[lo:]) + lo
    return math.fsum((1.0 / primes).tolist())


# --- brute-force lattice search ---------------------------------------------


@njit(cache=True, nogil=True)
def _nb_box_values(gram, c):
    n = gram.shape[0]
    side = 2 * c + 1
    total = side**n
    vals = np.empty(total, dtype=np.int64)
    x = np.empty(n, dtype=np.int64)
    for idx in range(total):
        r = idx
        for i in range(n):
            x[i] = r % side - c
            r //= side
        v = 0
        for i in range(n):
            if x[i] != 0:
                acc = 0
                for j in range(n):
                    acc += gram[i, j] * x[j]
                v += x[i] * acc
        vals[idx] = v
    return vals


def _box_points(n: int, c: int) -> np.ndarray:
    side = 2 * c + 1
    idx = np.arange(side**n, dtype=np.int64)
    pts = np.empty((side**n, n), dtype=np.int64)
    for i in range(n):
        pts[:, i] = idx % side - c
        idx //= side
    return pts


def py_box_short_vectors(gram: np.ndarray, c: int):
    pts = _box_points(gram.shape[0], c)
    vals = np.einsum("ij,jk,ik->i", pts, gram, pts)
    return pts, vals


def box_short_vectors(gram, c: int):
    """All points of the box ``|x_i| <= c`` with their values ``x^t G x``.

    ``gram`` must be an integer matrix. Returns ``(points, values)``. Used as
    an exhaustive oracle; cost grows like ``(2c+1)**n``.
    """
    g = np.asarray(gram, dtype=np.int64)
    if HAS_NUMBA:
        vals = _nb_box_values(g, np.int64(c))
        return _box_points(g.shape[0], c), vals
    return py_box_short_vectors(g, c)


BACKEND = "numba" if HAS_NUMBA else "numpy"
