import mpmath
import pytest
from fractions import Fraction
from hypothesis import given, settings, strategies as st

from apz import pzeta
from apz.constants import RationalProductSpec, class_product
from apz.errors import DomainError
from apz.mpcore import IntPolynomial, PrecisionContext, zeta_int
from apz.pzeta import (
    ZetaCache,
    almost_prime_zeta,
    class_rational_ratio,
    class_tail_sum,
    log_class_zeta,
    pk_via_mobius,
    prime_zeta,
    rama_rational,
    zeta_k,
)
from apz.sieve import enumerate_class

CTX = PrecisionContext(40)


def test_prime_zeta_against_mpmath():
    with CTX.workdps():
        for s in (2, 3, 7):
            assert abs(prime_zeta(s, CTX) - mpmath.primezeta(s)) < CTX.tolerance


def test_p0_is_one():
    assert almost_prime_zeta(0, 3, CTX) == 1


@pytest.mark.parametrize("k", [1, 2, 3, 4])
@pytest.mark.parametrize("s", [2, 3, 5, 8, 12])
def test_mobius_round_trip(k, s):
    with CTX.workdps():
        a = almost_prime_zeta(k, s, CTX)
        b = pk_via_mobius(k, s, CTX)
        assert abs(a - b) <= a * CTX.tolerance


@pytest.mark.parametrize("s", range(2, 9))
def test_sign_switched_sibling(s):
    n = IntPolynomial.x()
    spec = RationalProductSpec(n**s, n**s + 1)
    got = class_product(spec, 1, CTX).value
    with CTX.workdps():
        assert abs(got - zeta_int(2 * s, CTX) / zeta_int(s, CTX)) < CTX.tolerance


@pytest.mark.parametrize("s", [2, 4, 6, 8])
def test_rama_rational(s):
    with CTX.workdps():
        q = rama_rational(s)
        assert abs(class_rational_ratio(1, s, CTX) - mpmath.mpf(q.numerator) / q.denominator) < CTX.tolerance


def test_rama_rational_values():
    assert rama_rational(2) == Fraction(2, 5)
    assert rama_rational(4) == Fraction(6, 7)
    assert rama_rational(6) == Fraction(691, 715)
    assert rama_rational(8) == Fraction(7234, 7293)
    with pytest.raises(DomainError):
        rama_rational(3)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 5), st.integers(2, 14))
def test_decay(k, s):
    # zeta(2) - 1 > 1/2, so the bound starts at s = 3 for the primes
    ctx = PrecisionContext(20 + k * s // 3)
    with ctx.workdps():
        v = zeta_k(k, s, ctx) - 1
        assert v > 0
        if s >= max(2 * k, 3):
            assert v < mpmath.mpf(2) ** (-k * s + 1)


def test_zeta_k_one_is_riemann():
    with CTX.workdps():
        assert abs(zeta_k(1, 3, CTX) - mpmath.zeta(3)) < CTX.tolerance


def test_domain_errors():
    with pytest.raises(DomainError):
        zeta_k(1, 1, CTX)
    with pytest.raises(DomainError):
        zeta_k(0, 2, CTX)
    with pytest.raises(DomainError):
        prime_zeta(1, CTX)


def test_tail_sum_direct_and_subtracted_paths():
    with mpmath.workdps(60):
        for t in (2, 3, 9, 30):
            members = enumerate_class(2, 200)
            skip = {10, 14}
            head = sum(mpmath.mpf(m) ** -t for m in members if m < 9 or m in skip)
            want = almost_prime_zeta(2, t, PrecisionContext(50)) - head
            got = class_tail_sum(2, t, 9, frozenset(skip), 45)
            assert abs(got - want) <= abs(want) * mpmath.mpf(10) ** -40


def test_log_class_zeta_start():
    with mpmath.workdps(50):
        full = log_class_zeta(1, 2, 2, dps=45)
        part = log_class_zeta(1, 2, 5, dps=45)
        assert abs(full - part + mpmath.log(1 - mpmath.mpf(1) / 4) + mpmath.log(1 - mpmath.mpf(1) / 9)) < mpmath.mpf(10) ** -40


def test_cache_round_trip(tmp_path):
    path = tmp_path / "c" / "zeta_cache.txt"
    cache = ZetaCache(path)
    with mpmath.workdps(60):
        cache.put("zeta_k", 2, 3, mpmath.mpf(1) / 3, 55, "exp-log-series")
    cache.save()
    line = path.read_text().strip()
    kind, k, s, prec, value, method = line.split(",")
    assert (kind, k, s, prec, method) == ("zeta_k", "2", "3", "55", "exp-log-series")
    again = ZetaCache(path)
    assert len(again) == 1
    with mpmath.workdps(60):
        assert abs(again.get("zeta_k", 2, 3, 55) - mpmath.mpf(1) / 3) < mpmath.mpf(10) ** -54
    assert again.get("zeta_k", 2, 3, 80) is None
    again.clear()
    assert not path.exists()


def test_cache_serves_repeat_requests():
    cache = ZetaCache()
    old = pzeta.set_cache(cache)
    try:
        first = zeta_k(3, 5, CTX)
        assert len(cache) >= 1
        assert zeta_k(3, 5, CTX) == first
    finally:
        pzeta.set_cache(old)
