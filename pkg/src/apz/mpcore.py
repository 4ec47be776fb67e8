"""Multiprecision core: precision context, integer polynomials and special functions.

Real and complex values are plain ``mpmath.mpf`` / ``mpmath.mpc`` numbers; the
number of digits they carry is governed by a :class:`PrecisionContext`.  The
special functions (Riemann zeta at integers, complex Gamma, Bernoulli numbers,
polynomial roots) are implemented here directly on top of mpmath's elementary
arithmetic, so that mpmath's own special functions remain available as
independent test oracles.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath
from mpmath import mpc, mpf

from .errors import DomainError, PoleError, RootFindingError

__all__ = [
    "PrecisionContext",
    "IntPolynomial",
    "bernoulli",
    "zeta_int",
    "zeta_minus_one",
    "power_tail",
    "gamma_complex",
    "poly_roots",
    "to_mpf",
]


@dataclass(frozen=True)
class PrecisionContext:
    """Decimal digit target plus guard digits.

    All evaluators run at ``working_digits = target_digits + guard_digits`` and
    results are meant to be trusted to ``target_digits``.
    """

    target_digits: int = 50
    guard_digits: int = 15

    def __post_init__(self):
        if int(self.target_digits) != self.target_digits or self.target_digits < 10:
            raise ValueError(f"target_digits must be an integer >= 10, got {self.target_digits!r}")
        if int(self.guard_digits) != self.guard_digits or self.guard_digits < 15:
            raise ValueError(f"guard_digits must be an integer >= 15, got {self.guard_digits!r}")

    @property
    def working_digits(self) -> int:
        return self.target_digits + self.guard_digits

    def workdps(self, extra: int = 0):
        return mpmath.workdps(self.working_digits + extra)

    @property
    def tolerance(self) -> mpf:
        """10^-target_digits, the acceptance threshold for results."""
        with self.workdps():
            return mpf(10) ** (-self.target_digits)

    @property
    def epsilon(self) -> mpf:
        with self.workdps():
            return mpf(10) ** (-self.working_digits)


def to_mpf(q) -> mpf:
    """Convert an int or Fraction to mpf at the current precision."""
    if isinstance(q, Fraction):
        return mpf(q.numerator) / q.denominator
    return mpf(q)


# ---------------------------------------------------------------------------
# integer polynomials


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with exact integer coefficients in ascending degree."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        if any(c != d for c, d in zip(coeffs, self.coefficients)):
            raise TypeError("coefficients must be integers")
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if not coeffs:
            coeffs = (0,)
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def x(cls) -> "IntPolynomial":
        return cls((0, 1))

    @classmethod
    def const(cls, c: int) -> "IntPolynomial":
        return cls((c,))

    @classmethod
    def parse(cls, text: str, var: str = "n") -> "IntPolynomial":
        """Parse an expression such as ``"n^3 - 2*n + 1"`` or ``"(n-1)**2"``."""
        tree = ast.parse(text.replace("^", "**"), mode="eval")
        return _eval_poly_ast(tree.body, var)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> int:
        return self.coefficients[-1]

    def is_zero(self) -> bool:
        return self.coefficients == (0,)

    def __call__(self, n):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * n + c
        return acc

    def _coerce(self, other) -> "IntPolynomial":
        if isinstance(other, IntPolynomial):
            return other
        if isinstance(other, int):
            return IntPolynomial((other,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coefficients, other.coefficients
        n = max(len(a), len(b))
        return IntPolynomial(tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coefficients, other.coefficients
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("only non-negative integer powers")
        out = IntPolynomial((1,))
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def shift(self, a: int) -> "IntPolynomial":
        """Return q(x) = p(x + a)."""
        out = IntPolynomial((0,))
        xa = IntPolynomial((a, 1))
        for c in reversed(self.coefficients):
            out = out * xa + c
        return out

    def derivative(self) -> "IntPolynomial":
        if self.degree == 0:
            return IntPolynomial((0,))
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coefficients) if i > 0))

    def __str__(self):
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coefficients[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("n" if i == 1 else f"n^{i}")
            mag = abs(c)
            body = f"{mag}" if (mag != 1 or i == 0) else ""
            if body and mono:
                body += "*"
            sign = "-" if c < 0 else "+"
            terms.append(f"{sign} {body}{mono}")
        if not terms:
            return "0"
        text = " ".join(terms)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def _eval_poly_ast(node, var):
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return IntPolynomial((node.value,))
    if isinstance(node, ast.Name):
        if node.id != var:
            raise ValueError(f"unknown variable {node.id!r}; expected {var!r}")
        return IntPolynomial.x()
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        val = _eval_poly_ast(node.operand, var)
        return -val if isinstance(node.op, ast.USub) else val
    if isinstance(node, ast.BinOp):
        left = _eval_poly_ast(node.left, var)
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                raise ValueError("exponents must be integer literals")
            return left ** node.right.value
        right = _eval_poly_ast(node.right, var)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
    raise ValueError(f"unsupported polynomial syntax: {ast.dump(node)}")


# ---------------------------------------------------------------------------
# Bernoulli numbers

_BERNOULLI: list[Fraction] = []


def _bernoulli_upto(n: int) -> list[Fraction]:
    if len(_BERNOULLI) <= n:
        size = max(n + 1, 2 * len(_BERNOULLI), 32)
        # Akiyama-Tanigawa triangle; it yields B_1 = +1/2.
        row: list[Fraction] = []
        out: list[Fraction] = []
        for m in range(size):
            row.append(Fraction(1, m + 1))
            for j in range(m, 0, -1):
                row[j - 1] = j * (row[j - 1] - row[j])
            out.append(row[0])
        out[1] = -out[1]
        _BERNOULLI[:] = out
    return _BERNOULLI


def bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number B_n with the convention B_1 = -1/2."""
    if n < 0:
        raise DomainError("bernoulli index must be >= 0")
    if n > 1 and n % 2:
        return Fraction(0)
    return _bernoulli_upto(n)[n]


@lru_cache(maxsize=None)
def _em_coefficient(j: int) -> Fraction:
    """B_{2j} / (2j)!"""
    return bernoulli(2 * j) / math.factorial(2 * j)


# ---------------------------------------------------------------------------
# Riemann zeta at integer arguments


def power_tail(s: int, N: int, dps: int) -> mpf:
    """Sum of n^-s over n >= N, to about ``dps`` significant digits.

    Direct summation up to a cutoff followed by Euler-Maclaurin correction
    terms.  All pieces are positive, so the relative accuracy survives even
    when the result is tiny.
    """
    if s < 2:
        raise DomainError(f"power sums diverge for s={s}")
    if N < 1:
        raise DomainError("N must be >= 1")
    with mpmath.workdps(dps + 10):
        eps = mpf(10) ** (-(dps + 5))
        first = mpf(N) ** (-s)
        # Smallest cutoff beyond which the plain tail integral is negligible.
        need = (s * math.log10(N) + dps + 5 - math.log10(s - 1)) / (s - 1)
        direct_cut = 10 ** need if need < 15 else math.inf
        cutoff = max(N, dps + 10)
        if direct_cut <= cutoff:
            cutoff = max(N, int(direct_cut) + 1)
        while True:
            total = mpf(0)
            for n in range(N, cutoff):
                total += mpf(n) ** (-s)
            M = mpf(cutoff)
            Ms = M ** (-s)
            total += M * Ms / (s - 1) + Ms / 2
            poch = mpf(s)  # s (s+1) ... (s+2j-2)
            Mpow = Ms / M  # M^(-s-2j+1)
            prev = None
            ok = False
            for j in range(1, 4 * dps + 50):
                if j > 1:
                    poch *= (s + 2 * j - 3) * (s + 2 * j - 2)
                    Mpow /= M * M
                term = to_mpf(_em_coefficient(j)) * poch * Mpow
                total += term
                if abs(term) < eps * first:
                    ok = True
                    break
                if prev is not None and abs(term) > abs(prev):
                    break
                prev = term
            if ok:
                return total
            cutoff *= 2


def zeta_minus_one(s: int, dps: int) -> mpf:
    """zeta(s) - 1 with full relative accuracy (useful for large s)."""
    return power_tail(s, 2, dps)


def zeta_int(s: int, ctx: PrecisionContext) -> mpf:
    """Riemann zeta at an integer s >= 2 via Euler-Maclaurin summation."""
    if not isinstance(s, int) or s < 2:
        raise DomainError(f"zeta(s) diverges or is out of scope for s={s!r}")
    with ctx.workdps():
        return 1 + zeta_minus_one(s, ctx.working_digits)


# ---------------------------------------------------------------------------
# complex Gamma


def _is_pole(z: mpc) -> bool:
    return z.imag == 0 and z.real <= 0 and z.real == mpmath.floor(z.real)


def _gamma_upper(z: mpc, dps: int) -> mpc:
    """Gamma(z) for Im z >= 0 by upward shift and Stirling's series."""
    threshold = 0.5 * dps + 10
    shift = max(0, int(math.ceil(threshold - float(z.real))))
    denom = mpc(1)
    for k in range(shift):
        denom *= z + k
    w = z + shift
    eps = mpf(10) ** (-(dps + 5))
    lg = (w - mpf(1) / 2) * mpmath.log(w) - w + mpmath.log(2 * mpmath.pi) / 2
    winv = 1 / w
    winv2 = winv * winv
    wpow = winv
    for j in range(1, 4 * dps + 50):
        term = to_mpf(bernoulli(2 * j)) / (2 * j * (2 * j - 1)) * wpow
        lg += term
        if abs(term) < eps:
            break
        wpow *= winv2
    else:  # pragma: no cover - threshold guarantees convergence
        raise RootFindingError("Stirling series did not converge")
    return mpmath.exp(lg) / denom


def gamma_complex(z, ctx: PrecisionContext) -> mpc:
    """Complex Gamma function to working precision.

    Conjugate symmetry is exact: the lower half-plane is evaluated as the
    conjugate of the upper half-plane value.
    """
    with ctx.workdps(10):
        z = mpc(z)
        if _is_pole(z):
            raise PoleError(f"Gamma has a pole at {mpmath.nstr(z.real, 10)}")
        if z.imag < 0:
            return mpmath.conj(_gamma_upper(mpmath.conj(z), ctx.working_digits + 10))
        return _gamma_upper(z, ctx.working_digits + 10)


# ---------------------------------------------------------------------------
# polynomial roots

# Exact arithmetic in Q[x] for the square-free decomposition; lists ascend.


def _q_trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return p


def _q_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    b = _q_trim(b)
    if len(a) < len(b):
        return [Fraction(0)], _q_trim(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    return _q_trim(q), _q_trim(a[: len(b) - 1] or [Fraction(0)])


def _q_monic(p):
    return [c / p[-1] for c in p]


def _q_gcd(a, b):
    a, b = _q_trim(a), _q_trim(b)
    while not (len(b) == 1 and b[0] == 0):
        _, r = _q_divmod(a, b)
        a, b = b, r
    return _q_monic(a)


def _q_deriv(p):
    if len(p) == 1:
        return [Fraction(0)]
    return [i * c for i, c in enumerate(p) if i > 0]


def _squarefree_factors(coeffs: Sequence[int]) -> list[tuple[list[Fraction], int]]:
    """Yun's algorithm: f = prod a_i^i with a_i square-free and coprime."""
    f = [Fraction(c) for c in coeffs]
    if len(f) == 2:
        return [(f, 1)]
    fp = _q_deriv(f)
    a0 = _q_gcd(f, fp)
    b, _ = _q_divmod(f, a0)
    c, _ = _q_divmod(fp, a0)
    d = [x - y for x, y in _zip_pad(c, _q_deriv(b))]
    out = []
    i = 1
    while len(_q_trim(b)) > 1:
        a = _q_gcd(b, d)
        b, _ = _q_divmod(b, a)
        c, _ = _q_divmod(d, a)
        d = [x - y for x, y in _zip_pad(c, _q_deriv(b))]
        if len(a) > 1:
            out.append((a, i))
        i += 1
    return out


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return [((a[i] if i < len(a) else Fraction(0)), (b[i] if i < len(b) else Fraction(0))) for i in range(n)]


def _fujiwara_bound(c: list) -> mpf:
    """Upper bound on root moduli of the polynomial with coefficients c (ascending)."""
    d = len(c) - 1
    lead = abs(c[-1])
    vals = []
    for k in range(1, d + 1):
        a = abs(c[d - k]) / lead
        if k == d:
            a /= 2
        if a:
            vals.append(a ** (mpf(1) / k))
    return 2 * max(vals) if vals else mpf(0)


def _horner_with_derivative(c, z):
    p = c[-1]
    dp = 0
    for a in reversed(c[:-1]):
        dp = dp * z + p
        p = p * z + a
    return p, dp


def _aberth(c: list[mpf], dps: int, max_iter: int = 1000) -> list[mpc]:
    d = len(c) - 1
    radius = _fujiwara_bound(c)
    if radius == 0:
        return [mpc(0)] * d
    z = [radius * mpmath.expj(2 * mpmath.pi * k / d + 0.4) * (1 + mpf(k) / (7 * d)) for k in range(d)]
    tol = mpf(10) ** (-(dps - 8))
    for it in range(max_iter):
        worst = mpf(0)
        for i in range(d):
            p, dp = _horner_with_derivative(c, z[i])
            if p == 0:
                continue
            ratio = p / dp if dp != 0 else mpc(radius)
            acc = mpc(0)
            for j in range(d):
                if j != i:
                    diff = z[i] - z[j]
                    if diff != 0:
                        acc += 1 / diff
            step = ratio / (1 - ratio * acc)
            z[i] -= step
            rel = abs(step) / max(mpf(1), abs(z[i]))
            if rel > worst:
                worst = rel
        if worst < tol:
            return z
    residuals = [abs(_horner_with_derivative(c, r)[0]) for r in z]
    raise RootFindingError(
        f"Aberth iteration did not converge in {max_iter} steps (max residual "
        f"{mpmath.nstr(max(residuals), 5)})",
        residuals=residuals,
        iterations=max_iter,
    )


def _newton_polish(c, z, steps=3):
    for _ in range(steps):
        p, dp = _horner_with_derivative(c, z)
        if dp == 0:
            break
        z = z - p / dp
    return z


def _symmetrize_real(c: list[mpf], roots: list[mpc], dps: int) -> list[mpc]:
    """Snap near-real roots to the real axis and pair complex roots exactly."""
    small = mpf(10) ** (-(dps // 2))
    real, upper, lower = [], [], []
    for r in roots:
        if abs(r.imag) <= small * max(mpf(1), abs(r)):
            real.append(mpc(_newton_polish(c, mpf(r.real))))
        elif r.imag > 0:
            upper.append(r)
        else:
            lower.append(r)
    if len(upper) != len(lower):
        return roots
    out = list(real)
    for r in upper:
        out.append(r)
        out.append(mpmath.conj(r))
    return out


def _binomial_roots(coeffs: list[Fraction]) -> list[mpc] | None:
    """Roots of a*x^d + b in closed form, or None if not of that shape."""
    d = len(coeffs) - 1
    if d < 2 or any(coeffs[i] != 0 for i in range(1, d)) or coeffs[0] == 0:
        return None
    c = -to_mpf(coeffs[0]) / to_mpf(coeffs[-1])
    mag = abs(c) ** (mpf(1) / d)
    out = []
    # angles pi*k/d; k odd when c < 0
    for k in range(1 if c < 0 else 0, 2 * d, 2):
        if k == 0:
            out.append(mpc(mag))
        elif k == d:
            out.append(mpc(-mag))
        elif k < d:
            r = mag * mpmath.expj(mpmath.pi * k / d)
            out.extend([r, mpmath.conj(r)])
    return out


def _squarefree_roots(f: list[Fraction], dps: int) -> list[mpc]:
    d = len(f) - 1
    if d == 1:
        return [mpc(-to_mpf(f[0]) / to_mpf(f[1]))]
    binom = _binomial_roots(f)
    if binom is not None:
        return binom
    c = [to_mpf(x) for x in f]
    roots = _aberth(c, dps)
    roots = [_newton_polish(c, r, 2) for r in roots]
    return _symmetrize_real(c, roots, dps)


def poly_roots(p: IntPolynomial, ctx: PrecisionContext) -> list[mpc]:
    """All complex roots of p, with multiplicity, to working precision.

    Zero roots are split off exactly, the remainder goes through an exact
    square-free decomposition; linear and binomial factors are solved in
    closed form and the rest by Aberth iteration started on a perturbed
    circle of Fujiwara radius.  Real polynomials give roots in conjugate
    pairs.
    """
    if p.degree < 1:
        raise DomainError("poly_roots needs a polynomial of degree >= 1")
    dps = ctx.working_digits + 10
    with mpmath.workdps(dps):
        coeffs = list(p.coefficients)
        zeros = 0
        while coeffs[0] == 0:
            coeffs.pop(0)
            zeros += 1
        roots: list[mpc] = [mpc(0)] * zeros
        if len(coeffs) > 1:
            for factor, mult in _squarefree_factors(coeffs):
                for r in _squarefree_roots(factor, dps):
                    roots.extend([r] * mult)
        _check_residuals(p, roots, ctx)
        return roots


def _check_residuals(p: IntPolynomial, roots: Iterable[mpc], ctx: PrecisionContext) -> None:
    c = [mpf(x) for x in p.coefficients]
    thresh = mpf(10) ** (-(ctx.working_digits - 5))
    bad = []
    for r in roots:
        val, _ = _horner_with_derivative(c, r)
        scale = sum(abs(x) * abs(r) ** i for i, x in enumerate(c))
        if abs(val) > thresh * scale:
            bad.append((r, abs(val)))
    if bad:
        raise RootFindingError(
            f"{len(bad)} root(s) of {p} fail the residual test",
            residuals=[b[1] for b in bad],
        )
