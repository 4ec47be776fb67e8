"""Big-Omega classification of integers and brute-force k-almost-prime sums.

This is the independent oracle for the analytic evaluators: it knows nothing
about zeta functions beyond a tail estimate for the truncated sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from mpmath import mpf

from .errors import DomainError
from .mpcore import PrecisionContext, power_tail

__all__ = [
    "OmegaTable",
    "omega_table",
    "big_omega",
    "enumerate_class",
    "class_members_between",
    "class_power_sum",
    "mobius",
    "divisors",
    "primes_upto",
]

# Tables up to this size are kept in memory; beyond it sums are streamed.
SEGMENT_THRESHOLD = 10**8
_BLOCK = 1 << 20
# Terms with n below this are summed in multiprecision, the rest in binary64.
_EXACT_SPLIT = 10**4


def primes_upto(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    return np.nonzero(is_p)[0].astype(np.int64)


def _omega_block(lo: int, hi: int, primes: np.ndarray) -> np.ndarray:
    """Omega(n) for lo <= n < hi, given all primes up to sqrt(hi)."""
    rem = np.arange(lo, hi, dtype=np.int64)
    om = np.zeros(hi - lo, dtype=np.int8)
    for p in primes:
        p = int(p)
        if p * p >= hi:
            break
        pk = p
        while pk < hi:
            start = (-lo) % pk
            om[start::pk] += 1
            rem[start::pk] //= p
            pk *= p
    om[rem > 1] += 1
    if lo <= 1 < hi:
        om[1 - lo] = 0
    if lo == 0:
        om[0] = 0
    return om


@dataclass(frozen=True)
class OmegaTable:
    """omega[n] = Omega(n) for 0 <= n <= limit (entries 0 and 1 hold 0)."""

    limit: int
    omega: np.ndarray

    def __getitem__(self, n: int) -> int:
        return int(self.omega[n])

    def members(self, k: int, lo: int = 2, hi: int | None = None) -> np.ndarray:
        hi = self.limit if hi is None else min(hi, self.limit)
        lo = max(lo, 2)
        if hi < lo:
            return np.zeros(0, dtype=np.int64)
        idx = np.nonzero(self.omega[lo : hi + 1] == k)[0]
        return idx.astype(np.int64) + lo


@lru_cache(maxsize=4)
def omega_table(limit: int) -> OmegaTable:
    if limit < 2:
        raise DomainError("limit must be >= 2")
    if limit > SEGMENT_THRESHOLD:
        raise DomainError(f"tables above {SEGMENT_THRESHOLD} are streamed, not stored")
    primes = primes_upto(math.isqrt(limit) + 1)
    parts = [_omega_block(lo, min(lo + _BLOCK, limit + 1), primes) for lo in range(0, limit + 1, _BLOCK)]
    omega = np.concatenate(parts)
    omega.setflags(write=False)
    return OmegaTable(limit, omega)


_SMALL = 1 << 16
_TABLE_CAP = 1 << 24


def big_omega(n: int) -> int:
    """Number of prime factors of n counted with multiplicity."""
    if n < 1:
        raise DomainError("Omega(n) needs n >= 1")
    if n <= _SMALL:
        return omega_table(_SMALL)[n]
    count = 0
    while n % 2 == 0:
        n //= 2
        count += 1
    p = 3
    while p * p <= n:
        while n % p == 0:
            n //= p
            count += 1
        p += 2
    return count + (1 if n > 1 else 0)


def enumerate_class(k: int, limit: int) -> list[int]:
    """All n in [2, limit] with Omega(n) = k, ascending."""
    if limit < 2:
        return []
    return [int(n) for n in omega_table(max(limit, 2)).members(k, 2, limit)]


def class_members_between(k: int, lo: int, hi: int) -> list[int]:
    """Members of the k-class in [lo, hi]."""
    lo = max(lo, 2, 1 << k)
    if hi < lo:
        return []
    if hi <= _TABLE_CAP:
        table = omega_table(max(_SMALL, 1 << (hi - 1).bit_length()))
        return [int(n) for n in table.members(k, lo, hi)]
    primes = primes_upto(math.isqrt(hi) + 1)
    out = []
    for a in range(lo, hi + 1, _BLOCK):
        b = min(a + _BLOCK, hi + 1)
        out.extend(int(n) + a for n in np.nonzero(_omega_block(a, b, primes) == k)[0])
    return out


def _iter_class_blocks(k: int, limit: int):
    """Yield arrays of k-class members in increasing blocks up to limit."""
    if limit <= SEGMENT_THRESHOLD:
        yield omega_table(limit).members(k, 2, limit)
        return
    primes = primes_upto(math.isqrt(limit) + 1)
    for lo in range(0, limit + 1, _BLOCK):
        hi = min(lo + _BLOCK, limit + 1)
        om = _omega_block(lo, hi, primes)
        idx = np.nonzero(om == k)[0] + lo
        yield idx[idx >= 2].astype(np.int64)


def class_power_sum(k: int, s: int, limit: int, ctx: PrecisionContext) -> tuple[mpf, mpf]:
    """Sum of n^-s over n <= limit with Omega(n) = k, plus a tail bound.

    The returned tail bound is the complete remainder sum_{n > limit} n^-s,
    which dominates the k-class remainder and is itself at most
    limit^(1-s)/(s-1).  Terms with n < 10^4 are summed at working precision;
    larger terms in binary64 with a correctly rounded ``math.fsum``, which
    keeps the rounding error far below the tail bound.
    """
    if limit < 2:
        raise DomainError("limit must be >= 2")
    if s < 2:
        raise DomainError("class_power_sum needs s >= 2")
    with ctx.workdps():
        exact = mpf(0)
        floats = []
        for block in _iter_class_blocks(k, limit):
            low = block[block < _EXACT_SPLIT]
            for n in low:
                exact += mpf(int(n)) ** (-s)
            high = block[block >= _EXACT_SPLIT].astype(np.float64)
            if high.size:
                floats.append(math.fsum(np.power(high, -float(s))))
        total = exact + mpf(math.fsum(floats))
        tail = power_tail(s, limit + 1, ctx.working_digits)
        return total, tail


def mobius(n: int) -> int:
    if n < 1:
        raise DomainError("mobius needs n >= 1")
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]
