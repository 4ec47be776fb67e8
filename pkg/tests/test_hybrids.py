from fractions import Fraction

import pytest

from apz.errors import DomainError
from apz.hybrids import CATALOG_SIZE, catalog, get_identity, verify_hybrid
from apz.mpcore import PrecisionContext

CTX = PrecisionContext(30)

# 13 displays in the cyclotomic section plus 50 in the appendix
CYCLOTOMIC = {"one-minus-n4", "one-plus-n2", "one-plus-ns", "ratio-ns", "one-plus-n2-n4", "even-geometric",
              "alternating-n6", "alternating-geometric", "one-plus-n3j-n6j", "square-plus", "square-minus",
              "mixed-plus", "mixed-minus"}


def test_catalog_count():
    entries = catalog()
    assert len(entries) == CATALOG_SIZE == 63
    ids = [h.id for h in entries]
    assert len(set(ids)) == len(ids)
    assert CYCLOTOMIC <= set(ids)
    assert sum(h.id not in CYCLOTOMIC for h in entries) == 50


@pytest.mark.parametrize("ident", [h.id for h in catalog()])
def test_local_factors_exact(ident):
    """The LHS factor equals the product of the RHS factors at every large n."""
    h = get_identity(ident)
    for params in h.parameter_sets(3, 2):
        spec = h.instantiate(params)
        for k in (1, 2):
            factors = h.rhs_factors(k, params)
            for n in range(max(spec.start_n, 10), 30):
                rhs = Fraction(1)
                for f in factors:
                    rhs *= f.local(n)
                assert spec.factor(n) == rhs, (ident, params, n)


@pytest.mark.parametrize("ident", ["zk-squared", "one-plus-n2", "mixed-minus", "c34-ratio", "artin-times-feller"])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_numeric_sample(ident, k):
    h = get_identity(ident)
    params = h.parameter_sets(2, 1)[0]
    rep = verify_hybrid(ident, k, params, CTX)
    assert rep.passed, rep


def test_c34_rational_factor():
    h = get_identity("c34-ratio")
    assert any(f.symbol == "rational" and f.arg == Fraction(27, 16) for f in h.rhs_factors(2, {}))
    assert not any(f.symbol == "rational" for f in h.rhs_factors(1, {}))
    assert verify_hybrid("c34-ratio", 2, {}, CTX).passed


def test_bad_parameters():
    with pytest.raises(DomainError):
        get_identity("no-such-identity")
    with pytest.raises(DomainError):
        get_identity("zk-squared").instantiate({"s": 1})
    with pytest.raises(DomainError):
        get_identity("zk-squared").instantiate({})
