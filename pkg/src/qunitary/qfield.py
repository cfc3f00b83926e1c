"""Exact arithmetic in cyclotomic fields Q(zeta_m) and q-combinatorics at roots of unity.

Elements are stored as an integer numerator vector in the power basis
1, zeta, ..., zeta^(phi(m)-1) together with a positive integer denominator,
always reduced modulo the m-th cyclotomic polynomial.  Equality and the zero
test are therefore coefficient comparisons; signs of real elements are decided
by interval evaluation with growing precision.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, NamedTuple, Sequence

import mpmath

__all__ = [
    "QRoot",
    "Cyclotomic",
    "cyclotomic_polynomial",
    "embed_q",
    "root_of_unity",
    "q_power",
    "sign_of_real",
    "qint",
    "qint_rational",
    "qfactorial",
    "qbinomial",
    "check_qbinom_identity",
]


class QRoot(NamedTuple):
    """The root of unity q = exp(2 pi i n / m)."""

    n: int
    m: int

    @classmethod
    def parse(cls, text: str) -> "QRoot":
        """Parse ``"n/m"``; the fraction is reduced before validation."""
        try:
            frac = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse root of unity {text!r}; expected n/m") from exc
        return cls.of(frac.numerator, frac.denominator)

    @classmethod
    def of(cls, n: int, m: int) -> "QRoot":
        q = cls(int(n), int(m))
        q.validate()
        return q

    def validate(self) -> None:
        if self.m < 2:
            raise ValueError(f"conductor m must be at least 2, got {self.m}")
        if not 1 <= self.n < self.m:
            raise ValueError(f"need 1 <= n < m for q = exp(2 pi i n/m), got n={self.n}, m={self.m}")
        if gcd(self.n, self.m) != 1:
            raise ValueError(f"n={self.n} and m={self.m} must be relatively prime")

    @property
    def phase(self) -> Fraction:
        return Fraction(self.n, self.m)

    def __str__(self) -> str:
        return f"{self.n}/{self.m}"


# ---------------------------------------------------------------------------
# cyclotomic polynomials and reduction tables


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # integer polynomials, lowest degree first, den monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        out[k] = c
        if c:
            for j, dj in enumerate(den):
                num[k + j] -= c * dj
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError("cyclotomic polynomial needs m >= 1")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Row k holds zeta_m^k in the power basis, for 0 <= k < 2*phi(m)."""
    phi_poly = cyclotomic_polynomial(m)
    deg = len(phi_poly) - 1
    rows: list[tuple[int, ...]] = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(max(2 * deg, m)):
        rows.append(tuple(cur))
        # multiply by x and reduce with x^deg = -sum phi_j x^j
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(deg):
                cur[j] -= top * phi_poly[j]
    return tuple(rows)


def _degree(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


def _reduce_raw(m: int, raw: Sequence[int]) -> list[int]:
    deg = _degree(m)
    table = _power_table(m)
    out = list(raw[:deg]) + [0] * max(0, deg - len(raw))
    for k in range(deg, len(raw)):
        c = raw[k]
        if c:
            row = table[k]
            for j in range(deg):
                if row[j]:
                    out[j] += c * row[j]
    return out


def _normalize(num: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num = [-c for c in num]
        den = -den
    g = den
    for c in num:
        if c:
            g = gcd(g, c)
            if g == 1:
                break
    if not any(num):
        return tuple(0 for _ in num), 1
    if g != 1:
        num = [c // g for c in num]
        den //= g
    return tuple(num), den


class Cyclotomic:
    """Element of Q(zeta_m) in canonical reduced form.

    ``Cyclotomic(m, coeffs)`` accepts any rational coefficient sequence in the
    powers of zeta_m (of any length) and reduces it modulo Phi_m.
    """

    __slots__ = ("m", "_num", "_den", "_hash")

    def __init__(self, m: int, coeffs: Iterable = (), *, _raw: tuple[tuple[int, ...], int] | None = None):
        self.m = int(m)
        self._hash = None
        if _raw is not None:
            self._num, self._den = _raw
            return
        fracs = [Fraction(c) for c in coeffs]
        den = 1
        for f in fracs:
            den = den * f.denominator // gcd(den, f.denominator)
        ints = [int(f * den) for f in fracs]
        reduced = _reduce_long(self.m, ints)
        self._num, self._den = _normalize(reduced, den)

    # construction helpers -------------------------------------------------
    @classmethod
    def _make(cls, m: int, num: list[int], den: int = 1) -> "Cyclotomic":
        return cls(m, _raw=_normalize(num, den))

    @classmethod
    def zero(cls, m: int) -> "Cyclotomic":
        return cls(m, _raw=((0,) * _degree(m), 1))

    @classmethod
    def one(cls, m: int) -> "Cyclotomic":
        return cls.from_rational(m, 1)

    @classmethod
    def from_rational(cls, m: int, value) -> "Cyclotomic":
        f = Fraction(value)
        num = [0] * _degree(m)
        num[0] = f.numerator
        return cls._make(m, num, f.denominator)

    @classmethod
    def zeta_power(cls, m: int, k: int) -> "Cyclotomic":
        return cls(m, _raw=(_power_table(m)[k % m], 1))

    # accessors -------------------------------------------------------------
    @property
    def numerators(self) -> tuple[int, ...]:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._num)

    @property
    def degree(self) -> int:
        return len(self._num)

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self._num[0], self._den)

    # coercion --------------------------------------------------------------
    def _coerce(self, other) -> "Cyclotomic | None":
        if isinstance(other, Cyclotomic):
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclotomic.from_rational(self.m, other)
        return None

    def lift(self, N: int) -> "Cyclotomic":
        """The same number viewed inside Q(zeta_N) for a multiple N of m."""
        if N == self.m:
            return self
        if N % self.m:
            raise ValueError(f"cannot lift from conductor {self.m} to {N}")
        step = N // self.m
        raw = [0] * ((self.degree - 1) * step + 1 if self.degree else 1)
        for k, c in enumerate(self._num):
            raw[k * step] = c
        return Cyclotomic._make(N, _reduce_long(N, raw), self._den)

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.m != self.m:
            a, b = _common(self, o)
            return a.__add__(b)
        d1, d2 = self._den, o._den
        if d1 == d2:
            return Cyclotomic._make(self.m, [a + b for a, b in zip(self._num, o._num)], d1)
        return Cyclotomic._make(
            self.m, [a * d2 + b * d1 for a, b in zip(self._num, o._num)], d1 * d2
        )

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.m, _raw=(tuple(-c for c in self._num), self._den))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.m != self.m:
            a, b = _common(self, o)
            return a.__sub__(b)
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.m != self.m:
            a, b = _common(self, o)
            return a.__rsub__(b)
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return Cyclotomic._make(self.m, [c * f.numerator for c in self._num], self._den * f.denominator)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.m != self.m:
            x, y = _common(self, o)
            return x * y
        a, b = self._num, o._num
        deg = len(a)
        raw = [0] * (2 * deg - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        raw[i + j] += ai * bj
        return Cyclotomic._make(self.m, _reduce_raw(self.m, raw), self._den * o._den)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        inv = _poly_inverse_mod(self.coeffs, cyclotomic_polynomial(self.m))
        return Cyclotomic(self.m, inv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.m != self.m:
            a, b = _common(self, o)
            return a.__truediv__(b)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.m != self.m:
            a, b = _common(self, o)
            return a.__rtruediv__(b)
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = Cyclotomic.one(self.m)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def star(self) -> "Cyclotomic":
        """Complex conjugation, the automorphism zeta -> zeta^-1."""
        m = self.m
        raw = [0] * m
        for k, c in enumerate(self._num):
            if c:
                raw[(-k) % m] += c
        return Cyclotomic._make(m, _reduce_long(m, raw), self._den)

    def is_real(self) -> bool:
        return self.star() == self

    # comparison ------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Cyclotomic):
            if other.m != self.m:
                n = self.m * other.m // gcd(self.m, other.m)
                return self.lift(n) == other.lift(n)
            return self._den == other._den and self._num == other._num
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self._num[0], self._den) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.m, self._num, self._den))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    # numerics --------------------------------------------------------------
    def approx(self) -> complex:
        """Floating-point value under zeta_m -> exp(2 pi i / m)."""
        m = self.m
        re = im = 0.0
        for k, c in enumerate(self._num):
            if c:
                re += c * math.cos(2 * math.pi * k / m)
                im += c * math.sin(2 * math.pi * k / m)
        return complex(re / self._den, im / self._den)

    def sign(self) -> int:
        return sign_of_real(self)

    def __repr__(self):
        return f"Cyclotomic({self.m}, {[str(c) for c in self.coeffs]})"

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*z^{k}")
        return " + ".join(terms) if terms else "0"


def _common(a: Cyclotomic, b: Cyclotomic) -> tuple[Cyclotomic, Cyclotomic]:
    N = a.m * b.m // gcd(a.m, b.m)
    return a.lift(N), b.lift(N)


def _reduce_long(m: int, raw: Sequence[int]) -> list[int]:
    # fold exponents modulo m first so that arbitrary lengths are accepted
    if len(raw) > m:
        folded = [0] * m
        for k, c in enumerate(raw):
            folded[k % m] += c
        raw = folded
    return _reduce_raw(m, raw)


def _poly_inverse_mod(a: Sequence[Fraction], modulus: Sequence[int]) -> list[Fraction]:
    """Inverse of a(x) modulo an irreducible modulus via the extended Euclidean algorithm."""

    def trim(p):
        p = list(p)
        while p and p[-1] == 0:
            p.pop()
        return p

    def divmod_poly(num, den):
        num = list(num)
        q = [Fraction(0)] * max(1, len(num) - len(den) + 1)
        lead = den[-1]
        while len(num) >= len(den) and num:
            c = num[-1] / lead
            shift = len(num) - len(den)
            q[shift] = c
            for j, dj in enumerate(den):
                num[shift + j] -= c * dj
            num = trim(num)
        return trim(q), num

    def sub(p, r):
        n = max(len(p), len(r))
        return trim([(p[i] if i < len(p) else 0) - (r[i] if i < len(r) else 0) for i in range(n)])

    def mul(p, r):
        if not p or not r:
            return []
        out = [Fraction(0)] * (len(p) + len(r) - 1)
        for i, pi in enumerate(p):
            if pi:
                for j, rj in enumerate(r):
                    out[i + j] += pi * rj
        return trim(out)

    r0, r1 = trim([Fraction(c) for c in modulus]), trim([Fraction(c) for c in a])
    s0, s1 = [], [Fraction(1)]
    while r1 and len(r1) > 1:
        q, r = divmod_poly(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
    if not r1:
        raise ZeroDivisionError("element not invertible modulo the cyclotomic polynomial")
    c = r1[0]
    return [x / c for x in s1]


# ---------------------------------------------------------------------------
# roots of unity and q-numbers


def root_of_unity(N: int, k: int) -> Cyclotomic:
    """exp(2 pi i k / N) as an element of Q(zeta_N)."""
    return Cyclotomic.zeta_power(N, k)


def embed_q(q: QRoot) -> Cyclotomic:
    """The canonical residue of zeta_m^n representing q."""
    q.validate()
    return Cyclotomic.zeta_power(q.m, q.n)


def q_power(q: QRoot, exponent, N: int | None = None) -> Cyclotomic:
    """q^x = exp(2 pi i n x / m) for rational x, inside Q(zeta_N).

    ``N`` defaults to the smallest conductor containing the value together
    with q itself.
    """
    x = Fraction(exponent)
    phase = Fraction(q.n, q.m) * x
    need = q.m * phase.denominator // gcd(q.m, phase.denominator)
    if N is None:
        N = need
    elif N % phase.denominator:
        raise ValueError(f"q^{x} does not lie in Q(zeta_{N})")
    k = int(phase * N) % N
    return Cyclotomic.zeta_power(N, k)


def _interval_value(x: Cyclotomic, prec: int) -> tuple[mpmath.mpf, mpmath.mpf]:
    """Real part under the standard embedding together with an absolute error bound."""
    m = x.m
    with mpmath.workprec(prec):
        total = mpmath.mpf(0)
        weight = 0
        two_pi = 2 * mpmath.pi
        for k, c in enumerate(x.numerators):
            if c:
                total += c * mpmath.cos(two_pi * k / m)
                weight += abs(c)
        # each cosine carries a few ulps; summation adds one ulp per term
        err = mpmath.mpf(weight) * (x.degree + 8) * mpmath.mpf(2) ** (-prec + 4)
        return total / x.denominator, err / x.denominator


def sign_of_real(x: Cyclotomic) -> int:
    """Exact sign of a real cyclotomic number under zeta_m -> exp(2 pi i/m)."""
    if not isinstance(x, Cyclotomic):
        return (Fraction(x) > 0) - (Fraction(x) < 0)
    if x.is_zero():
        return 0
    if not x.is_real():
        raise ValueError("sign_of_real requires a star-fixed (real) element")
    if x.is_rational():
        return 1 if x.numerators[0] > 0 else -1
    # quick double-precision attempt
    val = x.approx().real
    weight = sum(abs(c) for c in x.numerators) / x.denominator
    if abs(val) > weight * (x.degree + 8) * 1e-14:
        return 1 if val > 0 else -1
    prec = 128
    while True:
        val, err = _interval_value(x, prec)
        if abs(val) > err:
            return 1 if val > 0 else -1
        prec *= 2


def _qroot_power_index(q: QRoot, d: int) -> int:
    # exponent of zeta_m representing q^d
    return (q.n * d) % q.m


def _check_admissible(q: QRoot, d: int) -> None:
    # q^d != q^-d  <=>  zeta_m^(2 n d) != 1
    if (2 * q.n * d) % q.m == 0:
        raise ValueError(
            f"q^{d} = q^-{d} for q = exp(2 pi i {q.n}/{q.m}); need q_i^2 != 1"
        )


def qint(k: int, d: int, q: QRoot) -> Cyclotomic:
    """[k]_{q^d} = (q^{dk} - q^{-dk}) / (q^d - q^{-d}) as a Laurent sum."""
    _check_admissible(q, d)
    m = q.m
    if k == 0:
        return Cyclotomic.zero(m)
    sign = 1
    if k < 0:
        sign, k = -1, -k
    step = _qroot_power_index(q, d)
    raw = [0] * m
    # sum_{j=0}^{k-1} q_i^{k-1-2j}
    for j in range(k):
        raw[(step * (k - 1 - 2 * j)) % m] += sign
    return Cyclotomic._make(m, _reduce_long(m, raw))


@lru_cache(maxsize=4096)
def _qint_denominator_inverse(q: QRoot, d: int, N: int) -> Cyclotomic:
    a = q_power(q, d, N)
    return (a - a.inverse()).inverse()


def qint_rational(x, d: int, q: QRoot, N: int) -> Cyclotomic:
    """[x]_{q^d} for a rational x, computed inside Q(zeta_N)."""
    x = Fraction(x)
    _check_admissible(q, d)
    if x.denominator == 1:
        return qint(int(x), d, q).lift(N)
    top = q_power(q, d * x, N)
    return (top - top.inverse()) * _qint_denominator_inverse(q, d, N)


def qfactorial(k: int, d: int, q: QRoot) -> Cyclotomic:
    if k < 0:
        raise ValueError("q-factorial of a negative integer")
    result = Cyclotomic.one(q.m)
    for j in range(1, k + 1):
        result = result * qint(j, d, q)
    return result


@lru_cache(maxsize=None)
def _gauss_rows(top: int, period: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Gaussian binomials G(top, k)(t) reduced modulo t^period - 1, for all k.

    Built by the Pascal recurrence G(n,k) = G(n-1,k-1) + t^k G(n-1,k).
    """
    rows: list[tuple[tuple[int, ...], ...]] = []
    prev: list[list[int]] = [[1] + [0] * (period - 1)]
    rows.append(tuple(tuple(r) for r in prev))
    for n in range(1, top + 1):
        cur = []
        for k in range(n + 1):
            vec = [0] * period
            if k >= 1:
                for j, c in enumerate(prev[k - 1]):
                    vec[j] += c
            if k <= n - 1:
                shift = k % period
                for j, c in enumerate(prev[k]):
                    if c:
                        vec[(j + shift) % period] += c
            cur.append(vec)
        prev = cur
        rows.append(tuple(tuple(r) for r in prev))
    return tuple(rows)


def _gauss_row(top: int, period: int):
    # grow the cached table in steps to keep recursion depth and memory modest
    size = 16
    while size < top:
        size *= 2
    return _gauss_rows(size, period)[top]


def qbinomial(top: int, bottom: int, d: int, q: QRoot) -> Cyclotomic:
    """Balanced q-binomial [top over bottom]_{q^d}.

    Defined as v^{-k(n-k)} G(n,k)(v^2) evaluated at v = q^d, so it is total at
    roots of unity and agrees with the factorial quotient wherever that is
    defined.  Negative ``top`` uses [-a over k] = (-1)^k [a+k-1 over k].
    """
    m = q.m
    if bottom < 0:
        return Cyclotomic.zero(m)
    if top < 0:
        val = qbinomial(bottom - top - 1, bottom, d, q)
        return -val if bottom % 2 else val
    if bottom > top:
        return Cyclotomic.zero(m)
    step = _qroot_power_index(q, d)  # v = zeta_m^step
    period = m // gcd(m, 2 * step) if step else 1
    coeffs = _gauss_row(top, period)[bottom]
    shift = bottom * (top - bottom)
    raw = [0] * m
    for j, c in enumerate(coeffs):
        if c:
            raw[(step * (2 * j - shift)) % m] += c
    return Cyclotomic._make(m, _reduce_long(m, raw))


def check_qbinom_identity(a: int, b: int, c: int, d: int, q: QRoot) -> bool:
    """Check [aM+b over cM+d]_q = q^{M^2 c(a+1) + M(ad-bc)} [b over d]_q binom(a, c)."""
    M = q.m if q.m % 2 else q.m // 2
    lhs = qbinomial(a * M + b, c * M + d, 1, q)
    exponent = M * M * c * (a + 1) + M * (a * d - b * c)
    ordinary = math.comb(a, c) if 0 <= c <= a else 0
    rhs = q_power(q, exponent, q.m) * qbinomial(b, d, 1, q) * ordinary
    return lhs == rhs
