import math
from fractions import Fraction

import mpmath
import pytest

from apz.constants import (
    RationalProductSpec,
    class_product,
    closed_form,
    constant,
    constant_via_zeta_basis,
    family_spec,
    host_constant,
    host_product,
    phi,
    zofs_closed_form,
)
from apz.errors import ConvergenceError, DivergenceError, DomainError, SpecError
from apz.mpcore import IntPolynomial, PrecisionContext, zeta_int

CTX = PrecisionContext(40)
ORDERS = {"A": (1, 2, 3, 4), "Q": (1, 2, 3, 4), "T": (2, 3, 4), "F": (2, 3, 4), "C": (3, 4)}
n = IntPolynomial.x()


def test_spec_validation():
    with pytest.raises(DivergenceError):
        RationalProductSpec(n**2, n**2 + n)
    with pytest.raises(DivergenceError):
        RationalProductSpec(n**2, 2 * n**2)
    with pytest.raises(SpecError):
        RationalProductSpec(n**2 - 5, n**2 - 4)
    RationalProductSpec(n**2 - 5, n**2 - 4, start_n=3)
    assert family_spec("A", 1).factor(2) == Fraction(1, 2)
    with pytest.raises(DomainError):
        family_spec("T", 1)


def test_product_of_one_minus_n_squared():
    spec = RationalProductSpec.one_minus(IntPolynomial.const(1), n**2)
    assert abs(host_product(spec, CTX).value - mpmath.mpf(1) / 2) < CTX.tolerance


@pytest.mark.parametrize("family,r", [(f, r) for f, rs in ORDERS.items() for r in rs])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_dual_path(family, r, k):
    a = constant(family, k, r, CTX).value
    b = constant_via_zeta_basis(family, k, r, None, CTX).value
    assert abs(a - b) < CTX.tolerance


@pytest.mark.parametrize("family,r,k", [("A", 1, 1), ("T", 2, 2), ("Q", 3, 1), ("F", 2, 3), ("C", 3, 2), ("C", 5, 1)])
def test_acceleration_invariance(family, r, k):
    vals = [constant(family, k, r, CTX, M=M).value for M in (16, 64, 256)]
    assert max(vals) - min(vals) < CTX.tolerance


@pytest.mark.parametrize("r", range(2, 7))
def test_sum_rule(r):
    with CTX.workdps(5):
        lhs = mpmath.mpf(0)
        s = 1
        while True:
            term = (1 - zeta_int(r * s, CTX)) / s
            lhs += term
            if abs(term) < CTX.epsilon / 10:
                break
            s += 1
        rhs = mpmath.log(host_product(RationalProductSpec.one_minus(IntPolynomial.const(1), n**r), CTX).value)
        assert abs(lhs - rhs) < CTX.tolerance


ZOFS_PRINTED = {3: "0.809396597366290", 4: "0.919019477593744", 5: "0.963256561757559", 6: "0.982684277742192",
                7: "0.991654953472834", 8: "0.995923315077783", 9: "0.997991715347709", 10: "0.999005442480989"}


@pytest.mark.parametrize("s", range(2, 11))
def test_zofs_values(s):
    spec = RationalProductSpec.one_minus(IntPolynomial.const(1), n**s)
    v = host_product(spec, CTX).value
    if s == 2:
        assert abs(v - mpmath.mpf(1) / 2) < CTX.tolerance
    else:
        assert mpmath.nstr(v, 20, strip_zeros=False).startswith(ZOFS_PRINTED[s])
    cf = zofs_closed_form(s)
    if cf is not None:
        with CTX.workdps():
            assert abs(v - zofs_closed_form(s)) < CTX.tolerance


@pytest.mark.parametrize("family,r", [("A", 1), ("Q", 1), ("F", 2), ("F", 4), ("F", 6)])
def test_closed_forms_against_gamma_product(family, r):
    v = host_product(family_spec(family, r), CTX).value
    with CTX.workdps():
        assert abs(v - closed_form(family, r)) < CTX.tolerance


def test_artin_host_is_golden_ratio_form():
    with CTX.workdps():
        assert abs(host_constant("A", 1, CTX).value + mpmath.sin(mpmath.pi * phi()) / mpmath.pi) < CTX.tolerance
        assert abs(host_constant("Q", 1, CTX).value - 2 * host_constant("A", 1, CTX).value) < CTX.tolerance


@pytest.mark.parametrize("r", range(3, 7))
def test_hl_host_exact(r):
    res = host_constant("C", r, CTX)
    assert res.exact == Fraction(math.factorial(r - 1), r ** (r - 1))
    gamma_path = host_product(family_spec("C", r), CTX).value
    with CTX.workdps():
        assert abs(gamma_path - mpmath.mpf(res.exact.numerator) / res.exact.denominator) < CTX.tolerance


def _residual_estimate(logs):
    # geometric decay in k: the last computed term bounds the rest
    return mpmath.exp(sum(abs(x) for x in logs) + abs(logs[-1])) - 1


@pytest.mark.parametrize("family,r", [("A", 1), ("F", 2), ("C", 3)])
def test_host_factorization(family, r):
    ctx = PrecisionContext(20)
    vals = [constant(family, k, r, ctx).value for k in range(1, 25)]
    host = host_constant(family, r, ctx).value
    with mpmath.workdps(40):
        logs = [mpmath.log(v) for v in vals]
        partial, prev = mpmath.mpf(1), None
        for K in range(1, 11):
            partial *= vals[K - 1]
            err = abs(host - partial)
            if prev is not None:
                assert err < prev
            assert err <= partial * _residual_estimate(logs[K:])
            prev = err


def test_class_product_k_two_small_case():
    # 1 - 1/n^2 over semiprimes equals 1/zeta_2(2)
    spec = RationalProductSpec.one_minus(IntPolynomial.const(1), n**2)
    from apz.pzeta import zeta_k

    v = class_product(spec, 2, CTX).value
    with CTX.workdps():
        assert abs(v - 1 / zeta_k(2, 2, CTX)) < CTX.tolerance


def test_zeta_basis_too_few_terms():
    with pytest.raises(ConvergenceError):
        constant_via_zeta_basis("A", 1, 1, 3, CTX)


def test_method_dispatch():
    assert constant("F", None, 2, CTX).method == "closed-form"
    with pytest.raises(DomainError):
        constant("A", 1, 1, CTX, method="nope")
    with pytest.raises(DomainError):
        constant("Z", 1, 1, CTX)
