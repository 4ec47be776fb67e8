"""Prime zeta, k-almost-prime zeta and second-kind zeta functions.

Everything here is relative-accurate: P_k(s) is evaluated so that its leading
digits are right even when it is as small as 2^(-k s).  That matters because
callers multiply these values by rapidly growing integer coefficients.

Evaluation routes:

* P(s)     = sum_j mu(j)/j log zeta(j s)
* P_k(s)   from k P_k(s) = sum_{j=1..k} P(j s) P_{k-j}(s),  P_0 = 1
* zeta_k   = exp(sum_j P_k(j s) / j),  zeta_1 = zeta
"""

from __future__ import annotations

import math
import os
import tempfile
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from pathlib import Path

import mpmath
from mpmath import mpf

from .errors import ConsistencyError, DomainError
from .mpcore import PrecisionContext, bernoulli, zeta_int, zeta_minus_one
from .sieve import class_members_between, mobius

__all__ = [
    "ZetaCache",
    "get_cache",
    "set_cache",
    "prime_zeta",
    "almost_prime_zeta",
    "zeta_k",
    "log_zeta_k",
    "pk_via_mobius",
    "class_rational_ratio",
    "rama_rational",
    "class_tail_sum",
    "log_class_zeta",
]

KINDS = ("P", "Pk", "zeta_k")
CACHE_FILENAME = "zeta_cache.txt"

LOG10_2 = math.log10(2)
# Direct summation of a class tail is used when it needs members below this.
DIRECT_CAP = 1 << 14


# ---------------------------------------------------------------------------
# cache


@dataclass
class CacheEntry:
    value: mpf
    precision: int
    method: str


def _decimal(value: mpf, digits: int) -> str:
    return mpmath.libmp.to_str(value._mpf_, digits, min_fixed=-math.inf, max_fixed=math.inf)


class ZetaCache:
    """Memo of (kind, k, s) -> value with the precision it was computed at.

    An entry is served only to requests at or below its recorded precision.
    With a ``storage_path`` the cache is loaded lazily and written atomically
    as lines ``kind,k,s,precision_digits,value_decimal``.
    """

    def __init__(self, storage_path: str | os.PathLike | None = None):
        self.storage_path = Path(storage_path) if storage_path is not None else None
        self._entries: dict[tuple[str, int, int], CacheEntry] = {}
        self._lock = threading.RLock()
        self._loaded = self.storage_path is None
        self._dirty = False

    def __len__(self):
        self._ensure_loaded()
        return len(self._entries)

    def _ensure_loaded(self):
        if not self._loaded:
            with self._lock:
                if not self._loaded:
                    self.load()

    def get(self, kind: str, k: int, s: int, precision: int) -> mpf | None:
        self._ensure_loaded()
        entry = self._entries.get((kind, k, s))
        if entry is not None and entry.precision >= precision:
            return entry.value
        return None

    def put(self, kind: str, k: int, s: int, value: mpf, precision: int, method: str) -> None:
        if kind not in KINDS:
            raise ValueError(f"unknown cache kind {kind!r}")
        self._ensure_loaded()
        with self._lock:
            old = self._entries.get((kind, k, s))
            if old is None or old.precision <= precision:
                self._entries[(kind, k, s)] = CacheEntry(value, precision, method)
                self._dirty = True

    def records(self) -> list[str]:
        self._ensure_loaded()
        lines = []
        for (kind, k, s), e in sorted(self._entries.items()):
            lines.append(f"{kind},{k},{s},{e.precision},{_decimal(e.value, e.precision)},{e.method}")
        return lines

    def load(self) -> None:
        self._loaded = True
        if self.storage_path is None or not self.storage_path.exists():
            return
        with self._lock:
            for line in self.storage_path.read_text().splitlines():
                if not line.strip():
                    continue
                parts = line.split(",")
                kind, k, s, prec, text = parts[0], int(parts[1]), int(parts[2]), int(parts[3]), parts[4]
                method = parts[5] if len(parts) > 5 else ""
                with mpmath.workdps(prec + 10):
                    value = mpf(text)
                old = self._entries.get((kind, k, s))
                if old is None or old.precision < prec:
                    self._entries[(kind, k, s)] = CacheEntry(value, prec, method)

    def save(self) -> None:
        if self.storage_path is None or not self._dirty:
            return
        with self._lock:
            self.storage_path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.storage_path.parent, prefix=".zeta_cache.")
            with os.fdopen(fd, "w") as fh:
                fh.write("\n".join(self.records()) + "\n")
            os.replace(tmp, self.storage_path)
            self._dirty = False

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()
            self._dirty = False
            self._loaded = True
            if self.storage_path is not None and self.storage_path.exists():
                self.storage_path.unlink()


_cache = ZetaCache()
_tail_memo: dict = {}


def get_cache() -> ZetaCache:
    return _cache


def set_cache(cache: ZetaCache) -> ZetaCache:
    """Install ``cache`` as the process-wide cache and return the previous one."""
    global _cache
    old, _cache = _cache, cache
    return old


# ---------------------------------------------------------------------------
# internal evaluators at an explicit number of relative digits


def _prime_zeta(s: int, dps: int) -> mpf:
    hit = _cache.get("P", 1, s, dps)
    if hit is not None:
        return hit
    with mpmath.workdps(dps + 10):
        total = mpf(0)
        # P(s) > 2^-s and |term_j| < 2 * 2^(-j s) / j; stop when the
        # geometric remainder is below 10^-(dps+5) relative.
        j = 1
        while True:
            mu = mobius(j)
            if mu:
                need = max(10, int(dps + 5 - (j - 1) * s * LOG10_2) + 1)
                total += mpf(mu) / j * mpmath.log1p(zeta_minus_one(j * s, need))
            j += 1
            remainder_log10 = math.log10(2) - j * s * LOG10_2 - math.log10(1 - 2.0 ** (-s))
            if remainder_log10 < -(dps + 5) - s * LOG10_2:
                break
    _cache.put("P", 1, s, total, dps, "mobius-log-zeta")
    return total


def _pk(k: int, s: int, dps: int) -> mpf:
    if k == 0:
        return mpf(1)
    if k == 1:
        return _prime_zeta(s, dps)
    hit = _cache.get("Pk", k, s, dps)
    if hit is not None:
        return hit
    inner = dps + 5
    with mpmath.workdps(inner + 5):
        total = mpf(0)
        for j in range(1, k + 1):
            total += _prime_zeta(j * s, inner) * _pk(k - j, s, inner)
        total /= k
    _cache.put("Pk", k, s, total, dps, "newton-recurrence")
    return total


def _pk_upper_log10(k: int, t: int) -> float:
    """log10 of an upper bound for P_k(t), t >= 2: P_k(t) <= P_k(2) 2^(-k(t-2)) < 2^(-k(t-2))."""
    return -k * (t - 2) * LOG10_2


def _log_zeta_k(k: int, s: int, dps: int) -> mpf:
    if k == 1:
        with mpmath.workdps(dps + 10):
            return mpmath.log1p(zeta_minus_one(s, dps + 5))
    with mpmath.workdps(dps + 10):
        total = mpf(0)
        floor_log10 = -k * s * LOG10_2  # P_k(s) >= 2^(-k s)
        j = 1
        while True:
            need = max(10, int(dps + 5 + floor_log10 - (-k * j * s * LOG10_2)) + 1)
            total += _pk(k, j * s, need) / j
            j += 1
            rem = _pk_upper_log10(k, j * s) - math.log10(1 - 2.0 ** (-k * s))
            if rem < floor_log10 - (dps + 5):
                break
        return total


# ---------------------------------------------------------------------------
# public operations


def _check_args(k: int, s: int, kmin: int = 0) -> None:
    if not isinstance(s, int) or s < 2:
        raise DomainError(f"integer s >= 2 required, got {s!r}")
    if not isinstance(k, int) or k < kmin:
        raise DomainError(f"integer k >= {kmin} required, got {k!r}")


def prime_zeta(s: int, ctx: PrecisionContext) -> mpf:
    """P(s) = sum over primes of p^-s."""
    _check_args(1, s)
    with ctx.workdps():
        return +_prime_zeta(s, ctx.working_digits)


def almost_prime_zeta(k: int, s: int, ctx: PrecisionContext) -> mpf:
    """P_k(s) = sum over n with Omega(n) = k of n^-s; P_0 = 1."""
    _check_args(k, s)
    with ctx.workdps():
        return +_pk(k, s, ctx.working_digits)


def log_zeta_k(k: int, s: int, ctx: PrecisionContext) -> mpf:
    _check_args(k, s, 1)
    with ctx.workdps():
        return +_log_zeta_k(k, s, ctx.working_digits)


def zeta_k(k: int, s: int, ctx: PrecisionContext) -> mpf:
    """zeta_k(s) = 1 / prod_{Omega(n)=k} (1 - n^-s); zeta_1 is Riemann's zeta."""
    _check_args(k, s, 1)
    dps = ctx.working_digits
    hit = _cache.get("zeta_k", k, s, dps)
    if hit is not None:
        with ctx.workdps():
            return +hit
    with ctx.workdps(5):
        if k == 1:
            value = zeta_int(s, PrecisionContext(ctx.target_digits, ctx.guard_digits + 5))
            method = "euler-maclaurin"
        else:
            value = mpmath.exp(_log_zeta_k(k, s, dps + 5))
            method = "exp-log-series"
    _cache.put("zeta_k", k, s, value, dps, method)
    with ctx.workdps():
        return +value


def pk_via_mobius(k: int, s: int, ctx: PrecisionContext) -> mpf:
    """P_k(s) = sum_j mu(j)/j log zeta_k(j s)."""
    _check_args(k, s, 1)
    dps = ctx.working_digits
    with mpmath.workdps(dps + 10):
        floor_log10 = -k * s * LOG10_2
        total = mpf(0)
        j = 1
        while True:
            mu = mobius(j)
            if mu:
                need = max(10, int(dps + 5 + floor_log10 + k * j * s * LOG10_2) + 1)
                total += mpf(mu) / j * _log_zeta_k(k, j * s, need)
            j += 1
            # |log zeta_k(t)| <= 2 P_k(t) for t >= 2
            rem = math.log10(2) + _pk_upper_log10(k, j * s) - math.log10(1 - 2.0 ** (-k * s))
            if rem < floor_log10 - (dps + 5):
                break
    with ctx.workdps():
        return +total


def class_rational_ratio(k: int, s: int, ctx: PrecisionContext) -> mpf:
    """prod over the k-class of (n^s - 1)/(n^s + 1).

    Evaluated both as exp(-2 sum_l P_k((2l-1)s)/(2l-1)) and as
    zeta_k(2s)/zeta_k(s)^2; the second value is returned after the two agree.
    """
    _check_args(k, s, 1)
    dps = ctx.working_digits
    with mpmath.workdps(dps + 10):
        floor_log10 = -k * s * LOG10_2
        acc = mpf(0)
        l = 1
        while True:
            t = (2 * l - 1) * s
            need = max(10, int(dps + 5 + floor_log10 + k * t * LOG10_2) + 1)
            acc += _pk(k, t, need) / (2 * l - 1)
            l += 1
            rem = _pk_upper_log10(k, (2 * l - 1) * s) - math.log10(1 - 4.0 ** (-k * s))
            if rem < floor_log10 - (dps + 5):
                break
        via_pk = mpmath.exp(-2 * acc)
        via_zeta = zeta_k(k, 2 * s, ctx) / zeta_k(k, s, ctx) ** 2
        if abs(via_pk - via_zeta) > mpf(10) ** (-(dps - 5)):
            raise ConsistencyError(
                f"class_rational_ratio({k},{s}): paths differ by {mpmath.nstr(abs(via_pk - via_zeta), 5)}"
            )
    with ctx.workdps():
        return +via_zeta


def rama_rational(s: int) -> Fraction:
    """prod_p (p^s - 1)/(p^s + 1) = 2|B_2s| / (binom(2s, s) B_s^2), s even."""
    if not isinstance(s, int) or s < 2 or s % 2:
        raise DomainError("rama_rational needs an even integer s >= 2")
    return 2 * abs(bernoulli(2 * s)) / (comb(2 * s, s) * bernoulli(s) ** 2)


# ---------------------------------------------------------------------------
# tails of k-class power sums


def _first_member(k: int, n0: int, excluded: frozenset) -> int:
    lo, width = max(n0, 1 << k), 64
    while True:
        for m in class_members_between(k, lo, lo + width):
            if m not in excluded:
                return m
        lo, width = lo + width + 1, width * 4


def class_tail_sum(k: int, t: int, n0: int, excluded: frozenset = frozenset(), dps: int = 50) -> mpf:
    """Sum of n^-t over n >= n0 with Omega(n) = k and n not in ``excluded``.

    Relative accuracy about ``dps`` digits.  Large t is summed directly over
    the sieve; otherwise P_k(t) is taken at raised precision and the small
    members are subtracted.
    """
    if k < 1 or t < 2:
        raise DomainError("class_tail_sum needs k >= 1 and t >= 2")
    excluded = frozenset(e for e in excluded if e >= n0)
    below = class_members_between(k, 2, n0 - 1) if n0 > 2 else []
    if not below and not excluded:
        return _pk(k, t, dps)
    key = (k, t, n0, excluded)
    hit = _tail_memo.get(key)
    if hit is not None and hit[1] >= dps:
        return hit[0]
    f = _first_member(k, n0, excluded)
    need = (t * math.log10(f) + dps + 5 - math.log10(t - 1)) / (t - 1)
    with mpmath.workdps(dps + 10):
        if need < math.log10(DIRECT_CAP):
            cut = int(10**need) + 1
            total = mpf(0)
            for n in reversed(class_members_between(k, n0, max(cut, n0))):
                if n not in excluded:
                    total += mpf(n) ** (-t)
        else:
            extra = int(math.ceil(t * math.log10(f / 2**k))) + 5
            hi_dps = dps + max(extra, 0)
            with mpmath.workdps(hi_dps + 10):
                total = _pk(k, t, hi_dps)
                for m in below:
                    total -= mpf(m) ** (-t)
                for m in excluded:
                    if class_members_between(k, m, m):
                        total -= mpf(m) ** (-t)
            total = +total
    _tail_memo[key] = (total, dps)
    return total


def log_class_zeta(k: int, s: int, start: int, excluded: frozenset = frozenset(), dps: int = 50) -> mpf:
    """log of prod over k-class n >= start, n not excluded, of 1/(1 - n^-s)."""
    excluded = frozenset(e for e in excluded if e >= start)
    below = class_members_between(k, 2, start - 1) if start > 2 else []
    if not below and not excluded:
        return _log_zeta_k(k, s, dps)
    f = _first_member(k, start, excluded)
    floor_log10 = -s * math.log10(f)
    with mpmath.workdps(dps + 10):
        total = mpf(0)
        i = 1
        while True:
            t = i * s
            need = max(10, int(dps + 5 + floor_log10 + t * math.log10(f)) + 1)
            total += class_tail_sum(k, t, start, excluded, need) / i
            i += 1
            # tail_{>=f}(t) <= f^-t (1 + f/(t-1))
            rem = -i * s * math.log10(f) + math.log10(1 + f / (i * s - 1)) - math.log10(1 - f ** (-float(s)))
            if rem < floor_log10 - (dps + 5):
                break
        return total
