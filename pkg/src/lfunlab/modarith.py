"""Integer substrate: prime sieves, factorization, primitive roots and index tables.

Everything here is exact integer arithmetic. The only floating point values are
the von Mangoldt logarithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

# Full (non-segmented) sieve is used up to this limit; above it we stream segments.
_FLAT_SIEVE_LIMIT = 1 << 24
_SEGMENT = 1 << 20


class CompositeModulusError(ValueError):
    """Raised when a modulus that must be prime is composite."""


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes.tolist())


def _flat_sieve(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    is_p[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if is_p[p]:
            is_p[p * p :: 2 * p] = False
    return np.flatnonzero(is_p).astype(np.int64)


def iter_prime_segments(lo: int, hi: int, segment: int = _SEGMENT) -> Iterator[np.ndarray]:
    """Yield arrays of the primes in (lo, hi], in ascending order, one segment at a time."""
    lo = max(lo, 1)
    if hi <= lo:
        return
    base = _flat_sieve(math.isqrt(hi) + 1)
    start = lo + 1
    while start <= hi:
        stop = min(start + segment, hi + 1)  # half-open [start, stop)
        mark = np.ones(stop - start, dtype=bool)
        for p in base.tolist():
            if p * p >= stop:
                break
            first = max(p * p, -(-start // p) * p)
            mark[first - start :: p] = False
        if start <= 1:
            mark[: 2 - start] = False
        yield np.flatnonzero(mark).astype(np.int64) + start
        start = stop


def sieve_primes(limit: int) -> PrimeTable:
    """All primes <= limit. ``limit`` 0 or 1 gives an empty table."""
    if limit < 0:
        raise ValueError("limit must be non-negative")
    if limit <= _FLAT_SIEVE_LIMIT:
        primes = _flat_sieve(limit)
    else:
        chunks = list(iter_prime_segments(1, limit))
        primes = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    return PrimeTable(limit=limit, primes=primes)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n as ascending (prime, exponent) pairs; 1 -> []."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out = []
    for p in (2, 3):
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        if k:
            out.append((p, k))
    f = 5
    step = 2
    while f * f <= n:
        k = 0
        while n % f == 0:
            n //= f
            k += 1
        if k:
            out.append((f, k))
        f += step
        step = 6 - step
    if n > 1:
        out.append((n, 1))
    return out


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, k in factorize(n):
        divs = [d * p**j for d in divs for j in range(k + 1)]
    return sorted(divs)


def find_primitive_root(q: int) -> int:
    """Smallest primitive root modulo the prime q (1 for q = 2)."""
    if not is_prime(q):
        raise CompositeModulusError(f"{q} is not prime")
    if q == 2:
        return 1
    cofactors = [(q - 1) // ell for ell, _ in factorize(q - 1)]
    for g in range(2, q):
        if all(pow(g, c, q) != 1 for c in cofactors):
            return g
    raise AssertionError("unreachable: every prime has a primitive root")


@dataclass(frozen=True, eq=False)
class ModulusContext:
    """Prime modulus q together with a primitive root and its discrete log table.

    ``ind[n]`` is the exponent k in [0, q-2] with g**k = n (mod q); ``ind[0]`` holds -1.
    ``gpow[k]`` is g**k mod q for k in [0, q-2].
    ``roots[k]`` caches exp(2 pi i k / (q-1)).
    """

    q: int
    g: int
    factor_qm1: tuple[tuple[int, int], ...]
    ind: np.ndarray = field(repr=False)
    gpow: np.ndarray = field(repr=False)
    roots: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return self.q - 1

    def index(self, n: int) -> int:
        n %= self.q
        if n == 0:
            raise ValueError("0 has no index")
        return int(self.ind[n])


def build_context(q: int) -> ModulusContext:
    if q < 3 or not is_prime(q):
        raise CompositeModulusError(f"modulus must be an odd prime, got {q}")
    g = find_primitive_root(q)
    gpow = np.empty(q - 1, dtype=np.int64)
    x = 1
    for k in range(q - 1):
        gpow[k] = x
        x = x * g % q
    ind = np.full(q, -1, dtype=np.int64)
    ind[gpow] = np.arange(q - 1, dtype=np.int64)
    roots = np.exp(2j * np.pi * np.arange(q - 1) / (q - 1))
    for arr in (ind, gpow, roots):
        arr.setflags(write=False)
    return ModulusContext(
        q=q, g=g, factor_qm1=tuple(factorize(q - 1)), ind=ind, gpow=gpow, roots=roots
    )


# -- arithmetic functions ---------------------------------------------------


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius expects n >= 1")
    sign = 1
    for _, k in factorize(n):
        if k > 1:
            return 0
        sign = -sign
    return sign


def prime_power(n: int) -> tuple[int, int] | None:
    """(p, k) if n = p**k with k >= 1, else None."""
    if n < 2:
        return None
    fac = factorize(n)
    return fac[0] if len(fac) == 1 else None


def von_mangoldt(n: int) -> float:
    pk = prime_power(n)
    return math.log(pk[0]) if pk else 0.0


def mobius_table(limit: int) -> np.ndarray:
    """mu(n) for 0 <= n <= limit (entry 0 is 0) by a linear-style sieve."""
    mu = np.ones(limit + 1, dtype=np.int64)
    mu[0] = 0
    for p in _flat_sieve(limit).tolist():
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    return mu
