"""Products of rational functions over k-almost primes and over all integers.

Three evaluation routes:

* ``class_product``: exp of sum_s h_s R_k(s), where h_s are the exact
  coefficients of log(num/den) in powers of 1/n and R_k(s) is the tail of
  P_k(s) above an acceleration cutoff M.  Members up to M are multiplied in
  exactly.
* ``constant_via_zeta_basis``: the product written as prod_j lambda(j)^-gamma_j
  with lambda the (start-restricted) zeta function of the k-class.
* ``host_product``: the product over every integer as a ratio of Gamma
  functions at the shifted roots of numerator and denominator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mpf

from .errors import ConsistencyError, ConvergenceError, DivergenceError, DomainError, SpecError
from .mpcore import IntPolynomial, PrecisionContext, gamma_complex, poly_roots, to_mpf
from .pzeta import class_tail_sum, log_class_zeta
from .sequences import exponent_table, log_series
from .sieve import class_members_between

__all__ = [
    "RationalProductSpec",
    "ConstantResult",
    "FAMILIES",
    "family_spec",
    "check_family",
    "class_product",
    "constant",
    "host_product",
    "host_constant",
    "closed_form",
    "constant_via_zeta_basis",
    "phi",
    "tau",
]

FAMILIES = ("A", "T", "Q", "F", "C")
_MIN_ORDER = {"A": 1, "Q": 1, "T": 2, "F": 2, "C": 3}
DEFAULT_M = 64
TERM_CAP = 10**4


def phi() -> mpf:
    """Golden ratio at the current precision."""
    return (mpmath.sqrt(5) + 1) / 2


def tau() -> mpf:
    """pi/sqrt(2), the argument in the s=8 host closed form."""
    return mpmath.pi / mpmath.sqrt(2)


@dataclass(frozen=True)
class RationalProductSpec:
    """prod over n >= start_n, n not excluded, of numerator(n)/denominator(n)."""

    numerator: IntPolynomial
    denominator: IntPolynomial
    start_n: int = 2
    excluded_n: tuple[int, ...] = ()

    def __post_init__(self):
        if self.start_n < 1:
            raise SpecError("start_n must be positive")
        object.__setattr__(self, "excluded_n", tuple(sorted(set(self.excluded_n))))
        num, den = self.numerator, self.denominator
        if num.is_zero() or den.is_zero():
            raise SpecError("numerator and denominator must be nonzero polynomials")
        if num.degree != den.degree or num.leading != den.leading:
            raise DivergenceError("numerator and denominator must share degree and leading coefficient")
        d = num.degree
        if d == 0 or num.coefficients[d - 1] != den.coefficients[d - 1]:
            if d == 0:
                raise SpecError("constant factors do not define a product")
            raise DivergenceError("log(num/den) has a nonzero 1/n coefficient; the product diverges")
        for n in self.integer_zeros(den):
            raise SpecError(f"denominator vanishes at n={n}")

    @classmethod
    def one_minus(cls, p: IntPolynomial, q: IntPolynomial, start_n: int = 2, excluded_n=()) -> "RationalProductSpec":
        """Spec for the factor 1 - p(n)/q(n)."""
        return cls(q - p, q, start_n, tuple(excluded_n))

    @classmethod
    def one_plus(cls, p: IntPolynomial, q: IntPolynomial, start_n: int = 2, excluded_n=()) -> "RationalProductSpec":
        return cls(q + p, q, start_n, tuple(excluded_n))

    def integer_zeros(self, poly: IntPolynomial) -> list[int]:
        """Integer zeros of poly at n >= start_n that are not excluded."""
        c = poly.coefficients
        bound = 1 + max(abs(Fraction(x, c[-1])) for x in c[:-1]) if len(c) > 1 else 0
        return [n for n in range(self.start_n, int(bound) + 1) if n not in self.excluded_n and poly(n) == 0]

    def factor(self, n: int) -> Fraction:
        return Fraction(self.numerator(n), self.denominator(n))

    def log_coefficients(self, s_max: int) -> list[Fraction]:
        return log_series(self.numerator, self.denominator, s_max)

    def __str__(self):
        ex = f" except {list(self.excluded_n)}" if self.excluded_n else ""
        return f"prod_{{n>={self.start_n}{ex}}} ({self.numerator})/({self.denominator})"


@dataclass
class ConstantResult:
    value: mpf
    error_bound: mpf
    method: str
    terms_used: int = 0
    acceleration_M: int = 0
    exact: Fraction | None = None
    notes: dict = field(default_factory=dict)


def check_family(family: str, r: int) -> None:
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if not isinstance(r, int) or r < _MIN_ORDER[family]:
        raise DomainError(f"family {family} needs r >= {_MIN_ORDER[family]}, got {r!r}")


def family_spec(family: str, r: int) -> RationalProductSpec:
    check_family(family, r)
    n = IntPolynomial.x()
    one = IntPolynomial.const(1)
    if family == "A":
        return RationalProductSpec.one_minus(one, n**r * (n - 1), 2)
    if family == "T":
        return RationalProductSpec.one_minus(one, (n - 1) ** r, 3)
    if family == "Q":
        return RationalProductSpec.one_minus(one, n**r * (n + 1), 2)
    if family == "F":
        return RationalProductSpec.one_minus(IntPolynomial.const(2), n**r, 2)
    return RationalProductSpec(n ** (r - 1) * (n - r), (n - 1) ** r, r + 1)


# ---------------------------------------------------------------------------
# root modulus and tail bounds


def _root_radius(spec: RationalProductSpec) -> float:
    ctx = PrecisionContext(20)
    rho = 0.0
    with mpmath.workdps(30):
        for p in (spec.numerator, spec.denominator):
            if p.degree:
                rho = max(rho, max(float(abs(z)) for z in poly_roots(p, ctx)))
    return rho * (1 + 1e-9) + 1e-12


def _tail_log10(f: int, s: int) -> float:
    """log10 of a bound on sum_{n >= f} n^-s."""
    return -s * math.log10(f) + math.log10(1 + f / (s - 1))


def _first_member_above(k: int, lo: int, excluded) -> int:
    lo, width = max(lo, 1 << k), 64
    while True:
        for m in class_members_between(k, lo, lo + width):
            if m not in excluded:
                return m
        lo, width = lo + width + 1, width * 4


def _explicit_part(spec: RationalProductSpec, k: int, upto: int) -> Fraction:
    out = Fraction(1)
    for m in class_members_between(k, spec.start_n, upto):
        if m not in spec.excluded_n:
            out *= spec.factor(m)
    return out


# ---------------------------------------------------------------------------
# k-class products


def class_product(spec: RationalProductSpec, k: int, ctx: PrecisionContext, M: int = DEFAULT_M) -> ConstantResult:
    """Product of spec's factor over the k-almost primes in its range."""
    if k < 1:
        raise DomainError("k must be >= 1")
    W = ctx.working_digits
    cut = max(M, spec.start_n - 1)
    excluded = frozenset(e for e in spec.excluded_n if e > cut)
    f = _first_member_above(k, cut + 1, excluded)
    rho = _root_radius(spec)
    if rho >= f:
        raise ConvergenceError(f"root radius {rho:.4g} reaches the first class member {f} above M={cut}; raise M")
    d = max(spec.numerator.degree, spec.denominator.degree)
    q = rho / f

    def rest_log10(s):
        # sum_{s' > s} 2 d rho^s'/s' * f^-s' (1 + f/(s'-1))
        if rho == 0:
            return -math.inf
        return math.log10(2 * d / (s + 1) * (1 + f / s)) + (s + 1) * math.log10(q) - math.log10(1 - q)

    S = 2
    while rest_log10(S) > -(W + 2):
        S += 1
        if S > TERM_CAP:
            raise ConvergenceError(f"series needs more than {TERM_CAP} terms")
    h = spec.log_coefficients(S)
    if h[1] != 0:
        raise DivergenceError("nonzero 1/n coefficient")

    explicit = _explicit_part(spec, k, cut)
    with mpmath.workdps(W + 10):
        total = mpf(0)
        used = 0
        for s in range(2, S + 1):
            if h[s] == 0:
                continue
            scale = math.log10(abs(h[s])) + _tail_log10(f, s)
            need = int(W + 5 + scale) + 1
            if need <= 0:
                continue
            total += to_mpf(h[s]) * class_tail_sum(k, s, cut + 1, excluded, max(need, 10))
            used = s
        value = to_mpf(explicit) * mpmath.exp(total)
        err = abs(value) * (mpf(10) ** rest_log10(S) * 2 + mpf(10) ** (-(W - 2)))
    with ctx.workdps():
        return ConstantResult(+value, +err, "pk-series", used, cut, Fraction(0) if explicit == 0 else None)


def constant(family: str, k: int | None, r: int, ctx: PrecisionContext, M: int = DEFAULT_M, method: str = "pk") -> ConstantResult:
    """A_k^(r), T_k^(r), Q_k^(r), F_k^(r) or C_k^(r); k=None gives the host value."""
    check_family(family, r)
    if k is None or method == "host":
        return host_constant(family, r, ctx)
    if method == "pk":
        return class_product(family_spec(family, r), k, ctx, M)
    if method == "zeta-basis":
        return constant_via_zeta_basis(family, k, r, None, ctx)
    raise DomainError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# zeta basis


def constant_via_zeta_basis(family: str, k: int, r: int, j_max: int | None, ctx: PrecisionContext) -> ConstantResult:
    """prod_j lambda_k(j)^(-gamma_j), lambda_k(j) = prod_{class, n >= start} 1/(1 - n^-j)."""
    check_family(family, r)
    if k < 1:
        raise DomainError("k must be >= 1")
    spec = family_spec(family, r)
    W = ctx.working_digits
    start = spec.start_n
    f = _first_member_above(k, start, frozenset())
    rho = _root_radius(spec)
    dtot = spec.numerator.degree + spec.denominator.degree
    rho1 = max(rho, 1.0)
    if rho >= f:
        raise ConvergenceError(f"zeta-basis product does not converge (root radius {rho:.4g} >= {f})")

    def term_log10(j):
        # |gamma_j| <= dtot (rho^j + j rho^(j/2)) / j and log lambda(j) <= 2 tail_{>=f}(j)
        g = math.log10(dtot / j) + j * math.log10(rho1) + math.log10(1 + j * rho1 ** (-j / 2))
        return g + math.log10(2) + _tail_log10(f, j)

    def rest_log10(J):
        terms, j = [], J + 1
        while True:
            t = term_log10(j)
            terms.append(t)
            if t < -(W + 40) or j > J + 20000:
                break
            j += 1
        top = max(terms)
        return top + math.log10(sum(10 ** (t - top) for t in terms))

    if j_max is None:
        J = 2
        while rest_log10(J) > -(W + 2):
            J = J + max(1, J // 4)
            if J > TERM_CAP:
                raise ConvergenceError(f"zeta-basis product needs more than {TERM_CAP} factors")
        while J > 2 and rest_log10(J - 1) <= -(W + 2):
            J -= 1
    else:
        J = j_max
        if rest_log10(J) > -(W + 2):
            raise ConvergenceError(f"j_max={j_max} leaves a tail above 10^-{W + 2}; increase j_max")

    gamma = exponent_table(family, r, J)
    with mpmath.workdps(W + 10):
        total = mpf(0)
        for j in range(1, J + 1):
            gj = gamma[j]
            if gj == 0:
                continue
            need = int(W + 5 + math.log10(abs(gj)) + math.log10(2) + _tail_log10(f, j)) + 1
            if need <= 0:
                continue
            total -= gj * log_class_zeta(k, j, start, frozenset(), max(need, 10))
        value = mpmath.exp(total)
        err = abs(value) * (2 * mpf(10) ** rest_log10(J) + mpf(10) ** (-(W - 2)))
    with ctx.workdps():
        return ConstantResult(+value, +err, "zeta-basis", J, 0)


# ---------------------------------------------------------------------------
# host products over all integers


def host_product(spec: RationalProductSpec, ctx: PrecisionContext) -> ConstantResult:
    """prod over all n >= start_n (minus exclusions) via Gamma functions.

    With num = c prod(n - alpha_i), den = c prod(n - beta_i) the product from
    n0 equals prod Gamma(n0 - beta_i) / prod Gamma(n0 - alpha_i).
    """
    zeros = spec.integer_zeros(spec.numerator)
    if zeros:
        raise SpecError(f"numerator vanishes at n={zeros[0]}; the Gamma form has a pole there")
    n0 = spec.start_n
    W = ctx.working_digits
    inner = PrecisionContext(ctx.target_digits + 10, ctx.guard_digits)
    with mpmath.workdps(inner.working_digits + 5):
        value = mpmath.mpc(1)
        for z in poly_roots(spec.denominator, inner):
            value *= gamma_complex(n0 - z, inner)
        for z in poly_roots(spec.numerator, inner):
            value /= gamma_complex(n0 - z, inner)
        if abs(value.imag) > mpf(10) ** (-(W - 5)) * max(1, abs(value)):
            raise ConsistencyError(f"Gamma product has imaginary part {mpmath.nstr(value.imag, 5)}")
        out = value.real
        for e in spec.excluded_n:
            if e >= n0:
                out /= to_mpf(spec.factor(e))
        err = abs(out) * mpf(10) ** (-(W - 2))
    with ctx.workdps():
        return ConstantResult(+out, +err, "gamma-host")


def closed_form(family: str, r: int):
    """Printed closed form of the host constant, evaluated at current precision, or None."""
    pi = mpmath.pi
    if family == "A" and r == 1:
        return -mpmath.sin(pi * phi()) / pi
    if family == "Q" and r == 1:
        return -2 * mpmath.sin(pi * phi()) / pi
    if family == "F":
        w = mpf(2) ** (mpf(1) / r)
        if r == 2:
            return -mpmath.sin(pi * w) / (pi * w)
        if r == 4:
            return -mpmath.sinh(pi * w) * mpmath.sin(pi * w) / (pi**2 * mpmath.sqrt(2))
        if r == 6:
            v = mpf(2) ** (mpf(-5) / 6)
            bracket = mpmath.cosh(pi * v * mpmath.sqrt(3)) ** 2 - mpmath.cos(pi * v) ** 2
            return -mpmath.sin(pi * w) * bracket / (pi**3 * mpmath.sqrt(2))
    if family == "T":
        return zofs_closed_form(r)
    if family == "C":
        return to_mpf(Fraction(math.factorial(r - 1), r ** (r - 1)))
    return None


def zofs_closed_form(s: int):
    """prod_{n>=2} (1 - n^-s) in closed form for s in {2, 3, 4, 6, 8}."""
    pi = mpmath.pi
    c = mpmath.cosh(pi * mpmath.sqrt(3) / 2)
    if s == 2:
        return mpf(1) / 2
    if s == 3:
        return c / (3 * pi)
    if s == 4:
        return mpmath.sinh(pi) / (4 * pi)
    if s == 6:
        return c**2 / (6 * pi**2)
    if s == 8:
        t = tau()
        bracket = (mpmath.sin(t) * mpmath.cosh(t)) ** 2 + (mpmath.cos(t) * mpmath.sinh(t)) ** 2
        return mpmath.sinh(pi) * bracket / (8 * pi**3)
    return None


def host_constant(family: str, r: int, ctx: PrecisionContext) -> ConstantResult:
    """A^(r), T^(r), Q^(r), F^(r), C^(r) over all integers in the family's range."""
    spec = family_spec(family, r)
    result = host_product(spec, ctx)
    with ctx.workdps(10):
        cf = closed_form(family, r)
        if cf is not None:
            if abs(cf - result.value) > ctx.epsilon * 100 * max(1, abs(cf)):
                raise ConsistencyError(f"{family}^({r}): Gamma product and closed form disagree")
            result.notes["closed_form"] = True
            result.method = "closed-form"
    if family == "C":
        exact = Fraction(math.factorial(r - 1), r ** (r - 1))
        with ctx.workdps():
            result.value = to_mpf(exact)
        result.exact = exact
        result.error_bound = mpf(0)
    return result
