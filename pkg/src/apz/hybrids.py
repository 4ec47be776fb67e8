"""Catalog of product identities over k-almost primes, with numeric verification.

Each identity states that the product of one rational factor over the k-class
equals a finite product of zeta_k values, family constants and (rarely) a
rational correction.  The left side is evaluated with ``class_product``; the
right side from ``zeta_k`` and ``constant``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from mpmath import mpf

from .constants import RationalProductSpec, class_product, constant
from .errors import DomainError
from .mpcore import IntPolynomial, PrecisionContext, to_mpf
from .pzeta import zeta_k

__all__ = ["Factor", "HybridIdentity", "HybridReport", "catalog", "get_identity", "verify_hybrid", "CATALOG_SIZE"]

SYMBOLS = ("zeta", "A", "Q", "F", "C", "rational")


@dataclass(frozen=True)
class Factor:
    symbol: str
    arg: int | Fraction
    power: int = 1

    def local(self, n: int) -> Fraction:
        """The factor's contribution at a single n (rational factors excluded)."""
        a = self.arg
        if self.symbol == "zeta":
            f = Fraction(n**a, n**a - 1)
        elif self.symbol == "A":
            f = 1 - Fraction(1, n**a * (n - 1))
        elif self.symbol == "Q":
            f = 1 - Fraction(1, n**a * (n + 1))
        elif self.symbol == "F":
            f = 1 - Fraction(2, n**a)
        elif self.symbol == "C":
            f = Fraction(n ** (a - 1) * (n - a), (n - 1) ** a)
        else:
            return Fraction(1)
        return f**self.power


@dataclass(frozen=True)
class HybridIdentity:
    id: str
    lhs_text: str
    rhs_text: str
    lhs: Callable[[dict], RationalProductSpec]
    rhs: Callable[[int, dict], list]
    minima: dict = field(default_factory=dict)
    source: str = "appendix"
    notes: str = ""

    @property
    def params(self) -> tuple[str, ...]:
        return tuple(self.minima)

    def _check(self, params: dict) -> None:
        if set(params) != set(self.minima):
            raise DomainError(f"{self.id} takes parameters {sorted(self.minima)}, got {sorted(params)}")
        for name, lo in self.minima.items():
            if not isinstance(params[name], int) or params[name] < lo:
                raise DomainError(f"{self.id}: {name} must be an integer >= {lo}")

    def instantiate(self, params: dict) -> RationalProductSpec:
        self._check(params)
        return self.lhs(params)

    def rhs_factors(self, k: int, params: dict) -> list[Factor]:
        self._check(params)
        return self.rhs(k, params)

    def parameter_sets(self, s_max: int = 4, l_max: int = 2, j_max: int = 2) -> list[dict]:
        caps = {"s": s_max, "l": l_max, "j": j_max}
        names = list(self.minima)
        ranges = [range(self.minima[p], caps[p] + 1) for p in names]
        return [dict(zip(names, combo)) for combo in itertools.product(*ranges)]


@dataclass
class HybridReport:
    id: str
    k: int
    params: dict
    lhs_value: mpf
    rhs_value: mpf
    abs_diff: mpf
    passed: bool

    @property
    def pass_(self) -> bool:
        return self.passed


def _p(text: str) -> IntPolynomial:
    return IntPolynomial.parse(text)


def _plus(p: str, q: str, start: int = 2) -> RationalProductSpec:
    return RationalProductSpec.one_plus(_p(p), _p(q), start)


def _minus(p: str, q: str, start: int = 2) -> RationalProductSpec:
    return RationalProductSpec.one_minus(_p(p), _p(q), start)


def Z(arg, power=1):
    return Factor("zeta", arg, power)


def _fam(symbol):
    return lambda arg, power=1: Factor(symbol, arg, power)


A, Q, F, C = _fam("A"), _fam("Q"), _fam("F"), _fam("C")
S2 = {"s": 2}
SL = {"s": 2, "l": 1}


def _geom(s: int, lo: int = 0) -> str:
    """n^(s-1) + ... + n^lo as text."""
    return " + ".join(f"n^{i}" for i in range(s - 1, lo - 1, -1)) or "0"


def _build() -> list[HybridIdentity]:
    H = HybridIdentity
    out = [
        # cyclotomic factorizations
        H("one-minus-n4", "1 - 1/n^4", "1/zeta_k(4)",
          lambda p: _minus("1", "n^4"), lambda k, p: [Z(4, -1)], {}, "cyclotomic"),
        H("one-plus-n2", "1 + 1/n^2", "zeta_k(2)/zeta_k(4)",
          lambda p: _plus("1", "n^2"), lambda k, p: [Z(2), Z(4, -1)], {}, "cyclotomic"),
        H("one-plus-ns", "1 + 1/n^s", "zeta_k(s)/zeta_k(2s)",
          lambda p: _plus("1", f"n^{p['s']}"), lambda k, p: [Z(p["s"]), Z(2 * p["s"], -1)], S2, "cyclotomic"),
        H("ratio-ns", "(n^s - 1)/(n^s + 1)", "zeta_k(2s)/zeta_k(s)^2",
          lambda p: RationalProductSpec(_p(f"n^{p['s']} - 1"), _p(f"n^{p['s']} + 1")),
          lambda k, p: [Z(2 * p["s"]), Z(p["s"], -2)], S2, "cyclotomic"),
        H("one-plus-n2-n4", "1 + 1/n^2 + 1/n^4", "zeta_k(2)/zeta_k(6)",
          lambda p: _plus("n^2 + 1", "n^4"), lambda k, p: [Z(2), Z(6, -1)], {}, "cyclotomic"),
        H("even-geometric", "1 + sum_{j=1..s} n^-2j", "zeta_k(2)/zeta_k(2s+2)",
          lambda p: _plus(" + ".join(f"n^{2 * i}" for i in range(p["s"])), f"n^{2 * p['s']}"),
          lambda k, p: [Z(2), Z(2 * p["s"] + 2, -1)], {"s": 1}, "cyclotomic"),
        H("alternating-n6", "1 - 1/n^2 + 1/n^4 - 1/n^6", "zeta_k(4)/(zeta_k(2) zeta_k(8))",
          lambda p: _minus("n^4 - n^2 + 1", "n^6"), lambda k, p: [Z(4), Z(2, -1), Z(8, -1)], {}, "cyclotomic"),
        H("alternating-geometric", "1 + sum_{j=1..s} (-1/n^2)^j",
          "zeta_k(4)/(zeta_k(2) zeta_k(2s+2)) for odd s, zeta_k(4) zeta_k(2s+2)/(zeta_k(2) zeta_k(4s+4)) for even s",
          lambda p: RationalProductSpec(
              sum(((-1) ** j * _p(f"n^{2 * (p['s'] - j)}") for j in range(p["s"] + 1)), IntPolynomial.const(0)),
              _p(f"n^{2 * p['s']}")),
          lambda k, p: ([Z(4), Z(2, -1), Z(2 * p["s"] + 2, -1)] if p["s"] % 2
                        else [Z(4), Z(2 * p["s"] + 2), Z(2, -1), Z(4 * p["s"] + 4, -1)]),
          {"s": 1}, "cyclotomic"),
        H("one-plus-n3j-n6j", "1 + 1/n^3j + 1/n^6j", "zeta_k(3j)/zeta_k(9j)",
          lambda p: _plus(f"n^{3 * p['j']} + 1", f"n^{6 * p['j']}"),
          lambda k, p: [Z(3 * p["j"]), Z(9 * p["j"], -1)], {"j": 1}, "cyclotomic"),
        H("square-plus", "1 - (-2n^s - 1)/n^2s", "(zeta_k(s)/zeta_k(2s))^2",
          lambda p: _minus(f"-2*n^{p['s']} - 1", f"n^{2 * p['s']}"),
          lambda k, p: [Z(p["s"], 2), Z(2 * p["s"], -2)], S2, "cyclotomic",
          "printed numerator 1 -/+ 2n^s has the wrong constant sign; encoded so that the factor is (1 + n^-s)^2"),
        H("square-minus", "1 - (2n^s - 1)/n^2s", "1/zeta_k(s)^2",
          lambda p: _minus(f"2*n^{p['s']} - 1", f"n^{2 * p['s']}"),
          lambda k, p: [Z(p["s"], -2)], S2, "cyclotomic",
          "printed numerator 1 -/+ 2n^s has the wrong constant sign; encoded so that the factor is (1 - n^-s)^2"),
        H("mixed-plus", "1 - (n^(s+1) + n^s - 1)/n^(2s+1)", "1/(zeta_k(s) zeta_k(s+1))",
          lambda p: _minus(f"n^{p['s'] + 1} + n^{p['s']} - 1", f"n^{2 * p['s'] + 1}"),
          lambda k, p: [Z(p["s"], -1), Z(p["s"] + 1, -1)], S2, "cyclotomic",
          "printed right side has the second factor's sign flipped; this sign gives (1 - n^-s)(1 - n^-(s+1))"),
        H("mixed-minus", "1 - (n^(s+1) - n^s + 1)/n^(2s+1)", "zeta_k(s+1)/(zeta_k(s) zeta_k(2s+2))",
          lambda p: _minus(f"n^{p['s'] + 1} - n^{p['s']} + 1", f"n^{2 * p['s'] + 1}"),
          lambda k, p: [Z(p["s"], -1), Z(p["s"] + 1), Z(2 * p["s"] + 2, -1)], S2, "cyclotomic",
          "printed right side has the second factor's sign flipped; this sign gives (1 - n^-s)(1 + n^-(s+1))"),
        # hybrids
        H("feller-zeta-square", "1 - (3n^s + 2)/n^3s", "F_k^(s) (zeta_k(s)/zeta_k(2s))^2",
          lambda p: _minus(f"3*n^{p['s']} + 2", f"n^{3 * p['s']}"),
          lambda k, p: [F(p["s"]), Z(p["s"], 2), Z(2 * p["s"], -2)], S2),
        H("zk-squared", "1 + (2n^s - 1)/(n^s - 1)^2", "zeta_k(s)^2",
          lambda p: _plus(f"2*n^{p['s']} - 1", f"(n^{p['s']} - 1)^2"), lambda k, p: [Z(p["s"], 2)], S2),
        H("zk-product-shift", "1 + (n^(s+l) + n^s - 1)/(n^(2s+l) - n^(s+l) - n^s + 1)", "zeta_k(s+l) zeta_k(s)",
          lambda p: _plus(f"n^{p['s'] + p['l']} + n^{p['s']} - 1",
                          f"n^{2 * p['s'] + p['l']} - n^{p['s'] + p['l']} - n^{p['s']} + 1"),
          lambda k, p: [Z(p["s"] + p["l"]), Z(p["s"])], SL),
        H("zk-ratio-geometric", "1 - 1/(n^s + ... + n + 1)", "zeta_k(s+1)/zeta_k(s)",
          lambda p: _minus("1", _geom(p["s"] + 1)), lambda k, p: [Z(p["s"] + 1), Z(p["s"], -1)], S2),
        H("zk-ratio-shift", "1 - (n^l - 1)/(n^(s+l) - 1)", "zeta_k(s+l)/zeta_k(s)",
          lambda p: _minus(f"n^{p['l']} - 1", f"n^{p['s'] + p['l']} - 1"),
          lambda k, p: [Z(p["s"] + p["l"]), Z(p["s"], -1)], SL),
        H("inverse-zk-squared", "1 - (2n^s - 1)/n^2s", "1/zeta_k(s)^2",
          lambda p: _minus(f"2*n^{p['s']} - 1", f"n^{2 * p['s']}"), lambda k, p: [Z(p["s"], -2)], S2),
        H("inverse-zk-product-shift", "1 - (n^(s+l) + n^s - 1)/n^(2s+l)", "1/(zeta_k(s+l) zeta_k(s))",
          lambda p: _minus(f"n^{p['s'] + p['l']} + n^{p['s']} - 1", f"n^{2 * p['s'] + p['l']}"),
          lambda k, p: [Z(p["s"] + p["l"], -1), Z(p["s"], -1)], SL),
        H("zk-ratio-inverse-geometric", "1 + 1/(n (n^(s-1) + ... + n + 1))", "zeta_k(s)/zeta_k(s+1)",
          lambda p: _plus("1", f"n*({_geom(p['s'])})"), lambda k, p: [Z(p["s"]), Z(p["s"] + 1, -1)], S2),
        H("one-over-ns-plus-1", "1 - 1/(n^s + 1)", "zeta_k(2s)/zeta_k(s)",
          lambda p: _minus("1", f"n^{p['s']} + 1"), lambda k, p: [Z(2 * p["s"]), Z(p["s"], -1)], S2),
        H("zk-ratio-multiple", "1 - (n^((l-1)s) - 1)/(n^(ls) - 1)", "zeta_k(ls)/zeta_k(s)",
          lambda p: _minus(f"n^{(p['l'] - 1) * p['s']} - 1", f"n^{p['l'] * p['s']} - 1"),
          lambda k, p: [Z(p["l"] * p["s"]), Z(p["s"], -1)], SL),
        H("artin-reciprocal", "1 + 1/(n^s (n - 1) - 1)", "1/A_k^(s)",
          lambda p: _plus("1", f"n^{p['s']}*(n - 1) - 1"), lambda k, p: [A(p["s"], -1)], {"s": 1}),
        H("zk-times-artin", "1 - 1/(n^(s+2) - n^(s+1) - n + 1)", "zeta_k(s+1) A_k^(s)",
          lambda p: _minus("1", f"n^{p['s'] + 2} - n^{p['s'] + 1} - n + 1"),
          lambda k, p: [Z(p["s"] + 1), A(p["s"])], {"s": 1}),
        H("zeta2-over-artin1", "1 + (2n + 1)/(n^3 - 2n - 1)", "zeta_k(2)/A_k^(1)",
          lambda p: _plus("2*n + 1", "n^3 - 2*n - 1"), lambda k, p: [Z(2), A(1, -1)], {}),
        H("inverse-zk-times-artin", "1 + 1/(n (n^(s+1) - n^s - 1))", "1/(zeta_k(s+1) A_k^(s))",
          lambda p: _plus("1", f"n*(n^{p['s'] + 1} - n^{p['s']} - 1)"),
          lambda k, p: [Z(p["s"] + 1, -1), A(p["s"], -1)], {"s": 1}),
        H("artin1-over-zeta2", "1 - (2n + 1)/n^3", "A_k^(1)/zeta_k(2)",
          lambda p: _minus("2*n + 1", "n^3"), lambda k, p: [A(1), Z(2, -1)], {}),
        H("artin-over-zeta-shift", "1 - (2n^s + n^(s-1) + ... + n + 1)/n^(2s+1)", "A_k^(s)/zeta_k(s+1)",
          lambda p: _minus(f"n^{p['s']} + {_geom(p['s'] + 1)}", f"n^{2 * p['s'] + 1}"),
          lambda k, p: [A(p["s"]), Z(p["s"] + 1, -1)], {"s": 1}),
        H("zk-times-artin-b", "1 + (n - 2)/(n^(s+1) - n^s - n + 1)", "zeta_k(s) A_k^(s)",
          lambda p: _plus("n - 2", f"n^{p['s'] + 1} - n^{p['s']} - n + 1"),
          lambda k, p: [Z(p["s"]), A(p["s"])], S2),
        H("inverse-zk-times-artin-b", "1 - (n - 2)/(n^(s+1) - n^s - 1)", "1/(zeta_k(s) A_k^(s))",
          lambda p: _minus("n - 2", f"n^{p['s'] + 1} - n^{p['s']} - 1"),
          lambda k, p: [Z(p["s"], -1), A(p["s"], -1)], S2),
        H("artin-over-zeta", "1 - (n^s + ... + n + 1)/n^2s", "A_k^(s)/zeta_k(s)",
          lambda p: _minus(_geom(p["s"] + 1), f"n^{2 * p['s']}"), lambda k, p: [A(p["s"]), Z(p["s"], -1)], S2),
        H("artin1-over-zeta", "1 - (n^(s-1) + ... + n^2 + 2n + 1)/n^(s+1)", "A_k^(1)/zeta_k(s)",
          lambda p: _minus(f"{_geom(p['s'])} + n", f"n^{p['s'] + 1}"), lambda k, p: [A(1), Z(p["s"], -1)], S2),
        H("quad-reciprocal", "1 + 1/(n^s (n + 1) - 1)", "1/Q_k^(s)",
          lambda p: _plus("1", f"n^{p['s']}*(n + 1) - 1"), lambda k, p: [Q(p["s"], -1)], {"s": 1}),
        H("zk-times-quad", "1 + 1/(n^(s+2) + n^(s+1) - n - 1)", "zeta_k(s+1) Q_k^(s)",
          lambda p: _plus("1", f"n^{p['s'] + 2} + n^{p['s'] + 1} - n - 1"),
          lambda k, p: [Z(p["s"] + 1), Q(p["s"])], {"s": 1}),
        H("zeta2-over-quad1", "1 + (2n - 1)/(n^3 - 2n + 1)", "zeta_k(2)/Q_k^(1)",
          lambda p: _plus("2*n - 1", "n^3 - 2*n + 1"), lambda k, p: [Z(2), Q(1, -1)], {}, "appendix",
          "printed numerator 2n + 1 is inconsistent with the right side; 2n - 1 is forced by it"),
        H("inverse-zk-times-quad", "1 - 1/(n (n^(s+1) + n^s - 1))", "1/(zeta_k(s+1) Q_k^(s))",
          lambda p: _minus("1", f"n*(n^{p['s'] + 1} + n^{p['s']} - 1)"),
          lambda k, p: [Z(p["s"] + 1, -1), Q(p["s"], -1)], {"s": 1}, "appendix",
          "printed denominator has an unbalanced parenthesis; read as n (n^(s+1) + n^s - 1)"),
        H("quad1-over-zeta2", "1 - (2n - 1)/n^3", "Q_k^(1)/zeta_k(2)",
          lambda p: _minus("2*n - 1", "n^3"), lambda k, p: [Q(1), Z(2, -1)], {}),
        H("quad-over-zeta-shift", "1 - (2n^(s+1) + n^s - 1)/(n^(2s+1) (n + 1))", "Q_k^(s)/zeta_k(s+1)",
          lambda p: _minus(f"2*n^{p['s'] + 1} + n^{p['s']} - 1", f"n^{2 * p['s'] + 1}*(n + 1)"),
          lambda k, p: [Q(p["s"]), Z(p["s"] + 1, -1)], {"s": 1}),
        H("zk-times-quad-b", "1 + n/(n^(s+1) + n^s - n - 1)", "zeta_k(s) Q_k^(s)",
          lambda p: _plus("n", f"n^{p['s'] + 1} + n^{p['s']} - n - 1"), lambda k, p: [Z(p["s"]), Q(p["s"])], S2),
        H("inverse-zk-times-quad-b", "1 - n/(n^(s+1) + n^s - 1)", "1/(zeta_k(s) Q_k^(s))",
          lambda p: _minus("n", f"n^{p['s'] + 1} + n^{p['s']} - 1"),
          lambda k, p: [Z(p["s"], -1), Q(p["s"], -1)], S2),
        H("quad2-over-zeta2", "1 - (n^2 + n - 1)/n^4", "Q_k^(2)/zeta_k(2)",
          lambda p: _minus("n^2 + n - 1", "n^4"), lambda k, p: [Q(2), Z(2, -1)], {}),
        H("quad-over-zeta", "1 - (n^(s+1) + 2n^s - 1)/(n^2s (n + 1))", "Q_k^(s)/zeta_k(s)",
          lambda p: _minus(f"n^{p['s'] + 1} + 2*n^{p['s']} - 1", f"n^{2 * p['s']}*(n + 1)"),
          lambda k, p: [Q(p["s"]), Z(p["s"], -1)], S2),
        H("feller-reciprocal", "1 + 2/(n^s - 2)", "1/F_k^(s)",
          lambda p: _plus("2", f"n^{p['s']} - 2"), lambda k, p: [F(p["s"], -1)], S2),
        H("zk-times-feller", "1 - 1/(n^s - 1)", "zeta_k(s) F_k^(s)",
          lambda p: _minus("1", f"n^{p['s']} - 1"), lambda k, p: [Z(p["s"]), F(p["s"])], S2),
        H("zk-shift-times-feller", "1 - (2n^l - 1)/(n^(s+l) - 1)", "zeta_k(s+l) F_k^(s)",
          lambda p: _minus(f"2*n^{p['l']} - 1", f"n^{p['s'] + p['l']} - 1"),
          lambda k, p: [Z(p["s"] + p["l"]), F(p["s"])], SL),
        H("zk-times-feller-shift", "1 + (n^l - 2)/(n^l (n^s - 1))", "zeta_k(s) F_k^(s+l)",
          lambda p: _plus(f"n^{p['l']} - 2", f"n^{p['l']}*(n^{p['s']} - 1)"),
          lambda k, p: [Z(p["s"]), F(p["s"] + p["l"])], SL),
        H("zk-over-feller", "1 + (3n^s - 2)/(n^2s - 3n^s + 2)", "zeta_k(s)/F_k^(s)",
          lambda p: _plus(f"3*n^{p['s']} - 2", f"n^{2 * p['s']} - 3*n^{p['s']} + 2"),
          lambda k, p: [Z(p["s"]), F(p["s"], -1)], S2),
        H("inverse-zk-times-feller", "1 + 1/(n^s - 2)", "1/(zeta_k(s) F_k^(s))",
          lambda p: _plus("1", f"n^{p['s']} - 2"), lambda k, p: [Z(p["s"], -1), F(p["s"], -1)], S2),
        H("inverse-zk-shift-times-feller", "1 + (2n^l - 1)/(n^l (n^s - 2))", "1/(zeta_k(s+l) F_k^(s))",
          lambda p: _plus(f"2*n^{p['l']} - 1", f"n^{p['l']}*(n^{p['s']} - 2)"),
          lambda k, p: [Z(p["s"] + p["l"], -1), F(p["s"], -1)], SL),
        H("feller-over-zk", "1 - (3n^s - 2)/n^2s", "F_k^(s)/zeta_k(s)",
          lambda p: _minus(f"3*n^{p['s']} - 2", f"n^{2 * p['s']}"), lambda k, p: [F(p["s"]), Z(p["s"], -1)], S2),
        H("artin-shift-ratio", "1 + (n^l - 1)/(n^l (n^(s+1) - n^s - 1))", "A_k^(s+l)/A_k^(s)",
          lambda p: _plus(f"n^{p['l']} - 1", f"n^{p['l']}*(n^{p['s'] + 1} - n^{p['s']} - 1)"),
          lambda k, p: [A(p["s"] + p["l"]), A(p["s"], -1)], {"s": 1, "l": 1}),
        H("artin-shift-ratio-inverse", "1 - (n^l - 1)/(n^(s+l+1) - n^(s+l) - 1)", "A_k^(s)/A_k^(s+l)",
          lambda p: _minus(f"n^{p['l']} - 1", f"n^{p['s'] + p['l'] + 1} - n^{p['s'] + p['l']} - 1"),
          lambda k, p: [A(p["s"]), A(p["s"] + p["l"], -1)], {"s": 1, "l": 1}),
        H("artin-times-quad", "1 - (2n^(s+1) - 1)/(n^2s (n^2 - 1))", "A_k^(s) Q_k^(s)",
          lambda p: _minus(f"2*n^{p['s'] + 1} - 1", f"n^{2 * p['s']}*(n^2 - 1)"),
          lambda k, p: [A(p["s"]), Q(p["s"])], {"s": 1}),
        H("artin-over-quad", "1 - 2/(n^(s+2) - n^s - n + 1)", "A_k^(s)/Q_k^(s)",
          lambda p: _minus("2", f"n^{p['s'] + 2} - n^{p['s']} - n + 1"),
          lambda k, p: [A(p["s"]), Q(p["s"], -1)], {"s": 1}),
        H("quad-over-artin", "1 + 2/(n^(s+2) - n^s - n - 1)", "Q_k^(s)/A_k^(s)",
          lambda p: _plus("2", f"n^{p['s'] + 2} - n^{p['s']} - n - 1"),
          lambda k, p: [Q(p["s"]), A(p["s"], -1)], {"s": 1}),
        H("artin-times-feller", "1 - (2n^(s+1) - n^s - 2)/(n^2s (n - 1))", "A_k^(s) F_k^(s)",
          lambda p: _minus(f"2*n^{p['s'] + 1} - n^{p['s']} - 2", f"n^{2 * p['s']}*(n - 1)"),
          lambda k, p: [A(p["s"]), F(p["s"])], S2, "appendix",
          "printed numerator has a stray parenthesis and the leading sign is flipped; "
          "1 - (2n^(s+1) - n^s - 2)/(n^2s (n - 1)) is the product of the A and F factors"),
        H("artin-times-feller-shift", "1 - (3n^(s+1) - 2n^s - 2)/(n^(2s+1) (n - 1))", "A_k^(s) F_k^(s+1)",
          lambda p: _minus(f"3*n^{p['s'] + 1} - 2*n^{p['s']} - 2", f"n^{2 * p['s'] + 1}*(n - 1)"),
          lambda k, p: [A(p["s"]), F(p["s"] + 1)], {"s": 1}, "appendix",
          "printed numerator has a stray parenthesis"),
        H("artin-over-feller", "1 + (2n - 3)/(n^(s+1) - n^s - 2n + 2)", "A_k^(s)/F_k^(s)",
          lambda p: _plus("2*n - 3", f"n^{p['s'] + 1} - n^{p['s']} - 2*n + 2"),
          lambda k, p: [A(p["s"]), F(p["s"], -1)], S2),
        H("quad-over-feller-shift", "1 + (n + 2)/(n^(s+2) + n^(s+1) - 2n - 2)", "Q_k^(s)/F_k^(s+1)",
          lambda p: _plus("n + 2", f"n^{p['s'] + 2} + n^{p['s'] + 1} - 2*n - 2"),
          lambda k, p: [Q(p["s"]), F(p["s"] + 1, -1)], {"s": 1}),
        H("feller-shift-over-quad", "1 - (n + 2)/(n (n^(s+1) + n^s - 1))", "F_k^(s+1)/Q_k^(s)",
          lambda p: _minus("n + 2", f"n*(n^{p['s'] + 1} + n^{p['s']} - 1)"),
          lambda k, p: [F(p["s"] + 1), Q(p["s"], -1)], {"s": 1}),
        H("feller-shift-ratio", "1 - (2n^l - 2)/(n^(s+l) - 2)", "F_k^(s)/F_k^(s+l)",
          lambda p: _minus(f"2*n^{p['l']} - 2", f"n^{p['s'] + p['l']} - 2"),
          lambda k, p: [F(p["s"]), F(p["s"] + p["l"], -1)], SL, "appendix",
          "printed numerator 2n^l + 2 is inconsistent with the right side; 2n^l - 2 is forced by it"),
        H("c34-ratio", "1 + 3/(n (n - 4)), n >= 5", "(27/16 if k = 2) C_k^(3)/C_k^(4)",
          lambda p: _plus("3", "n*(n - 4)", start=5),
          lambda k, p: ([Factor("rational", Fraction(27, 16))] if k == 2 else []) + [C(3), C(4, -1)], {},
          "appendix", "n = 4 is the only member of the C^(3) range below the C^(4) range; it is a semiprime"),
    ]
    return out


_CATALOG: list[HybridIdentity] | None = None
CATALOG_SIZE = 63


def catalog() -> list[HybridIdentity]:
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = _build()
    return list(_CATALOG)


def get_identity(identity_id: str) -> HybridIdentity:
    for h in catalog():
        if h.id == identity_id:
            return h
    raise DomainError(f"no hybrid identity with id {identity_id!r}")


def _rhs_value(factors: list[Factor], k: int, ctx: PrecisionContext) -> mpf:
    with ctx.workdps():
        value = mpf(1)
        for fct in factors:
            if fct.symbol == "rational":
                v = to_mpf(Fraction(fct.arg))
            elif fct.symbol == "zeta":
                v = zeta_k(k, fct.arg, ctx)
            else:
                v = constant(fct.symbol, k, fct.arg, ctx).value
            value *= v**fct.power
        return value


def verify_hybrid(identity_id: str, k: int, params: dict | None, ctx: PrecisionContext, tol=None) -> HybridReport:
    """Evaluate both sides of one identity; pass iff they agree within tol (default 10^-target)."""
    h = get_identity(identity_id)
    params = dict(params or {})
    spec = h.instantiate(params)
    lhs = class_product(spec, k, ctx).value
    rhs = _rhs_value(h.rhs_factors(k, params), k, ctx)
    with ctx.workdps():
        diff = abs(lhs - rhs)
        tol = ctx.tolerance if tol is None else mpf(tol)
        return HybridReport(identity_id, k, params, lhs, rhs, diff, bool(diff < tol))

