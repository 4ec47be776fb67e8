"""Exact integer sequences behind the constant families.

Each family is tied to the 1/n expansion of the log of its defining factor,

    log f(n) = -sum_{s>=1} g_s / s * n^-s,

and the exponents gamma_j of f(n) = prod_j (1 - n^-j)^gamma_j follow from
g by the Moebius pair  g_s = sum_{l|s} l gamma_l.  The families are

    A (1 - 1/(n^r (n-1)))   g = a_{r,.}
    T (1 - 1/(n-1)^r)       g = r t_{r,.}
    Q (1 - 1/(n^r (n+1)))   g = q_{r,.}
    F (1 - 2/n^r)           g_{rj} = r 2^j, zero elsewhere
    C (n^{r-1}(n-r)/(n-1)^r) g = c^{(r)}

Tables are indexed from 0, with zeros where a list would conventionally start
later.  Arithmetic is exact throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import DomainError, SequenceDataError
from .mpcore import IntPolynomial
from .sieve import divisors, mobius

__all__ = [
    "SequenceTable",
    "ExponentTable",
    "seq_values",
    "binomial_sum",
    "recurrence_values",
    "gf_coefficients",
    "series_divide",
    "log_series",
    "family_g_from_poly",
    "mobius_exponents",
    "gamma_F",
    "gamma_C",
    "exponent_table",
    "family_g",
]

SEQUENCE_FAMILIES = ("a", "t", "q", "c")
EXPONENT_FAMILIES = ("A", "T", "Q", "F", "C")


@dataclass(frozen=True)
class SequenceTable:
    family: str
    r: int
    values: tuple[int, ...]
    provenance: str

    def __getitem__(self, s: int) -> int:
        return self.values[s]

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class ExponentTable:
    """gamma_j for j = 0..j_max (entry 0 is always 0)."""

    family: str
    r: int
    values: tuple[int, ...]
    scale: int

    def __getitem__(self, j: int) -> int:
        return self.values[j]

    @property
    def j_max(self) -> int:
        return len(self.values) - 1

    def reconstruct(self) -> list[Fraction]:
        """g_s = (1/scale) sum_{l|s} l gamma_l, s = 0..j_max."""
        out = [Fraction(0)]
        for s in range(1, len(self.values)):
            out.append(Fraction(sum(l * self.values[l] for l in divisors(s)), self.scale))
        return out


def _check_order(family: str, r: int) -> None:
    if family not in SEQUENCE_FAMILIES:
        raise DomainError(f"unknown sequence family {family!r}")
    if not isinstance(r, int) or r < 1 or (family in ("t", "c") and r < 2):
        raise DomainError(f"order r={r!r} is not valid for family {family!r}")


def binomial_sum(family: str, r: int, s: int) -> int:
    """Closed-form value of one sequence element."""
    _check_order(family, r)
    if family == "c":
        return r**s - r if s >= 2 else 0
    total = Fraction(0)
    if family == "t":
        for j in range(1, s // r + 1):
            total += Fraction(s, r * j) * comb(s - 1, r * j - 1)
    else:
        for j in range(1, s // (r + 1) + 1):
            term = Fraction(s, j) * comb(s - j * r - 1, j - 1)
            if family == "q" and (s - (r + 1) * j) % 2:
                term = -term
            total += term
    if total.denominator != 1:
        raise SequenceDataError(f"{family}_{{{r},{s}}} = {total} is not an integer")
    return int(total)


def recurrence_values(family: str, r: int, s_max: int) -> list[int]:
    """a and q by their linear recurrences, seeded from the closed form."""
    if family not in ("a", "q"):
        raise DomainError("only families a and q have a stored recurrence")
    sign = 1 if family == "a" else -1
    v = [binomial_sum(family, r, s) for s in range(min(s_max, r + 2) + 1)]
    for s in range(len(v), s_max + 1):
        v.append(sign * 2 * v[s - 1] - v[s - 2] + v[s - r - 1] - sign * v[s - r - 2])
    return v


def series_divide(num: list[int], den: list[int], n_terms: int) -> list[Fraction]:
    """Taylor coefficients of num(x)/den(x), den(0) != 0."""
    if not den or den[0] == 0:
        raise DomainError("denominator must have a nonzero constant term")
    out: list[Fraction] = []
    for i in range(n_terms):
        acc = Fraction(num[i]) if i < len(num) else Fraction(0)
        for j in range(1, min(i, len(den) - 1) + 1):
            acc -= den[j] * out[i - j]
        out.append(acc / den[0])
    return out


def _gf(family: str, r: int) -> tuple[IntPolynomial, IntPolynomial]:
    x = IntPolynomial.x()
    one = IntPolynomial.const(1)
    if family == "a":
        return x ** (1 + r) * (1 + r - r * x), (one - x) * (one - x - x ** (1 + r))
    if family == "q":
        return x ** (1 + r) * (1 + r + r * x), (one + x) * (one + x - x ** (1 + r))
    if family == "t":
        return x**r, (one - x) * ((one - x) ** r - x**r)
    raise DomainError(f"no generating function for family {family!r}")


def gf_coefficients(family: str, r: int, s_max: int) -> list[int]:
    _check_order(family, r)
    num, den = _gf(family, r)
    coeffs = series_divide(list(num.coefficients), list(den.coefficients), s_max + 1)
    if any(c.denominator != 1 for c in coeffs):
        raise SequenceDataError(f"non-integral coefficient in the {family} generating function")
    return [int(c) for c in coeffs]


def seq_values(family: str, r: int, s_max: int) -> SequenceTable:
    """Sequence values for s = 0..s_max, cross-checked by a second formula."""
    _check_order(family, r)
    if s_max < 2:
        raise DomainError("s_max must be at least 2")
    if family in ("a", "q"):
        values, provenance = recurrence_values(family, r, s_max), "recurrence"
        check = [binomial_sum(family, r, s) for s in range(s_max + 1)]
    elif family == "t":
        values, provenance = [binomial_sum("t", r, s) for s in range(s_max + 1)], "binomial-sum"
        check = gf_coefficients("t", r, s_max)
    else:
        values, provenance = [binomial_sum("c", r, s) for s in range(s_max + 1)], "binomial-sum"
        num = IntPolynomial((-r, 1)) * IntPolynomial((0, 1)) ** (r - 1)
        den = IntPolynomial((-1, 1)) ** r
        check = [int(g) for g in family_g_from_poly(num, den, s_max)]
    if values != check:
        bad = next(i for i, (u, v) in enumerate(zip(values, check)) if u != v)
        raise SequenceDataError(f"{family}_{{{r},{bad}}}: {values[bad]} vs {check[bad]}")
    return SequenceTable(family, r, tuple(values), provenance)


# ---------------------------------------------------------------------------
# log series of a rational function in 1/n


def _power_sums(poly: IntPolynomial, s_max: int) -> list[Fraction]:
    """p_s = sum of rho_i^s over the roots of poly, via Newton's identities."""
    c = poly.coefficients
    d = len(c) - 1
    e = [Fraction(1)] + [Fraction((-1) ** i * c[d - i], c[d]) for i in range(1, d + 1)]
    p = [Fraction(d)]
    for s in range(1, s_max + 1):
        acc = Fraction(0)
        for i in range(1, min(s - 1, d) + 1):
            acc += (-1) ** (i - 1) * e[i] * p[s - i]
        if s <= d:
            acc += (-1) ** (s - 1) * s * e[s]
        p.append(acc)
    return p


def family_g_from_poly(num: IntPolynomial, den: IntPolynomial, s_max: int) -> list[Fraction]:
    """g_s with log(num(n)/den(n)) = log(lc ratio) - sum_s g_s/s n^-s.

    num(n) = c prod (n - alpha_i) so log num(n) = log c + d log n
    - sum_s p_s(alpha)/s n^-s; g_s is therefore p_s(num) - p_s(den).
    """
    pn, pd = _power_sums(num, s_max), _power_sums(den, s_max)
    return [Fraction(0)] + [pn[s] - pd[s] for s in range(1, s_max + 1)]


def log_series(num: IntPolynomial, den: IntPolynomial, s_max: int) -> list[Fraction]:
    """h_s, s = 0..s_max, with log(num(n)/den(n)) = sum_s h_s n^-s.

    h_0 is returned as 0 and must be checked separately (it is log of the
    leading-coefficient ratio and vanishes for a convergent product).
    """
    g = family_g_from_poly(num, den, s_max)
    return [Fraction(0)] + [-g[s] / s for s in range(1, s_max + 1)]


# ---------------------------------------------------------------------------
# exponents


def mobius_exponents(g, scale: int = 1, j_max: int | None = None, family: str = "custom", r: int = 0) -> ExponentTable:
    """gamma_j = (scale/j) sum_{l|j} mu(l) g_{j/l} for j = 1..j_max."""
    if j_max is None:
        j_max = len(g) - 1
    if j_max >= len(g):
        raise DomainError(f"sequence has only {len(g) - 1} terms, {j_max} requested")
    values = [0]
    for j in range(1, j_max + 1):
        acc = scale * sum(mobius(l) * Fraction(g[j // l]) for l in divisors(j))
        if acc % j:
            raise SequenceDataError(f"gamma_{j} = {acc}/{j} is not an integer")
        values.append(int(acc / j))
    return ExponentTable(family, r, tuple(values), scale)


def gamma_F(r: int, j_max: int) -> ExponentTable:
    """Exponents of 1 - 2/n^r, from the closed formula; zero unless r | j."""
    if r < 2:
        raise DomainError("F family needs r >= 2")
    values = [0]
    for j in range(1, j_max + 1):
        if j % r:
            values.append(0)
            continue
        m = j // r
        acc = r * sum(2**d * mobius(m // d) for d in divisors(m))
        if acc % j:
            raise SequenceDataError(f"gamma^F_{{{r},{j}}} is not an integer")
        values.append(acc // j)
    return ExponentTable("F", r, tuple(values), 1)


def gamma_C(r: int, j_max: int) -> ExponentTable:
    if r < 3:
        raise DomainError("C family needs r >= 3")
    c = seq_values("c", r, max(j_max, 2))
    t = mobius_exponents(c.values, 1, j_max)
    return ExponentTable("C", r, t.values, 1)


def family_g(family: str, r: int, s_max: int) -> list[int]:
    """The g sequence of a family: log f(n) = -sum g_s/s n^-s."""
    if family == "A":
        return list(seq_values("a", r, s_max).values)
    if family == "Q":
        return list(seq_values("q", r, s_max).values)
    if family == "T":
        return [r * v for v in seq_values("t", r, s_max).values]
    if family == "C":
        return list(seq_values("c", r, s_max).values)
    if family == "F":
        if r < 2:
            raise DomainError("F family needs r >= 2")
        return [r * 2 ** (s // r) if s and s % r == 0 else 0 for s in range(s_max + 1)]
    raise DomainError(f"unknown family {family!r}")


def exponent_table(family: str, r: int, j_max: int) -> ExponentTable:
    """gamma^(family)_{r,j}, j = 0..j_max."""
    if family == "A":
        return mobius_exponents(seq_values("a", r, max(j_max, 2)).values, 1, j_max, "A", r)
    if family == "T":
        return mobius_exponents(seq_values("t", r, max(j_max, 2)).values, r, j_max, "T", r)
    if family == "Q":
        return mobius_exponents(seq_values("q", r, max(j_max, 2)).values, 1, j_max, "Q", r)
    if family == "F":
        return gamma_F(r, j_max)
    if family == "C":
        return gamma_C(r, j_max)
    raise DomainError(f"unknown family {family!r}")
