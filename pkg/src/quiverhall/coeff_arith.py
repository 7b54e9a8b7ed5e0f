"""Exact coefficient arithmetic.

Prime fields, the rationals, Laurent polynomials with rational
coefficients, quantum integers and binomials, exact interpolation in
``q`` over a set of primes, and Hall-algebra coefficients living in
``Q(v)`` with ``v**2 == q``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from sympy import isprime, primitive_root

from .errors import InterpolationUnstable


def parse_rational(text) -> Fraction:
    """Parse ``"num/den"``, ``"n"`` or an int into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(str(text).strip())


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# fields


class PrimeField:
    """The field F_p. Elements are plain ints in ``range(p)``."""

    is_finite = True

    def __init__(self, p: int):
        if not isinstance(p, int) or p < 2 or not isprime(p):
            raise ValueError(f"modulus {p!r} is not prime")
        self.p = p
        self.zero = 0
        self.one = 1

    @property
    def name(self) -> str:
        return f"F{self.p}"

    @property
    def order(self) -> int:
        return self.p

    @property
    def characteristic(self) -> int:
        return self.p

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __call__(self, x) -> int:
        return self.from_int(x)

    def from_int(self, x) -> int:
        if isinstance(x, Fraction):
            return self.div(x.numerator % self.p, x.denominator % self.p)
        return int(x) % self.p

    def parse(self, x) -> int:
        if isinstance(x, str):
            return self.from_int(Fraction(x))
        return self.from_int(x)

    def to_json(self, a: int):
        return int(a)

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0 in a prime field")
        return pow(a, -1, self.p)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def is_zero(self, a: int) -> bool:
        return a % self.p == 0

    def elements(self) -> range:
        return range(self.p)

    def nonzero_elements(self) -> range:
        return range(1, self.p)

    def random_element(self, rng: random.Random) -> int:
        return rng.randrange(self.p)

    def generator(self) -> int:
        """A generator of the multiplicative group."""
        return 1 if self.p == 2 else int(primitive_root(self.p))


class RationalField:
    """The field Q with exact Fraction elements."""

    is_finite = False
    name = "Q"
    characteristic = 0
    order = None

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def __repr__(self):
        return "RationalField()"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __call__(self, x) -> Fraction:
        return self.from_int(x)

    def from_int(self, x) -> Fraction:
        return Fraction(x)

    def parse(self, x) -> Fraction:
        return parse_rational(x)

    def to_json(self, a: Fraction) -> str:
        return format_rational(a)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def is_zero(self, a) -> bool:
        return a == 0

    def random_element(self, rng: random.Random, spread: int = 5) -> Fraction:
        return Fraction(rng.randint(-spread, spread))


QQ = RationalField()


def field_from_name(name: str):
    """``"Q"`` gives the rationals, ``"F7"`` gives F_7."""
    name = name.strip()
    if name in ("Q", "QQ"):
        return QQ
    if name.upper().startswith("F") and name[1:].isdigit():
        return PrimeField(int(name[1:]))
    raise ValueError(f"unknown field {name!r}")


# ---------------------------------------------------------------------------
# Laurent polynomials


class LaurentPoly:
    """Laurent polynomial in one variable with rational coefficients."""

    __slots__ = ("_terms", "var")

    def __init__(self, terms: Mapping[int, object] | None = None, var: str = "t"):
        clean = {}
        for e, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[int(e)] = c
        self._terms = tuple(sorted(clean.items()))
        self.var = var

    @classmethod
    def monomial(cls, exponent: int, coeff=1, var: str = "t") -> LaurentPoly:
        return cls({exponent: coeff}, var)

    @classmethod
    def constant(cls, c, var: str = "t") -> LaurentPoly:
        return cls({0: c}, var)

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def coeff(self, e: int) -> Fraction:
        return self.terms.get(e, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def min_exp(self) -> int:
        return self._terms[0][0]

    def max_exp(self) -> int:
        return self._terms[-1][0]

    def _coerce(self, other) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(other, self.var)
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = self.terms
        for e, c in other._terms:
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms}, self.var)

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
        out: dict[int, Fraction] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            # only monomials are units
            if len(self._terms) != 1:
                raise ValueError("negative powers of a non-monomial")
            (e, c), = self._terms
            return LaurentPoly({e * n: Fraction(c) ** n}, self.var)
        out = LaurentPoly.constant(1, self.var)
        for _ in range(n):
            out = out * self
        return out

    def divide_exact(self, other: LaurentPoly) -> LaurentPoly:
        """Quotient ``self / other``; raises ValueError if not exact."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        if self.is_zero():
            return LaurentPoly({}, self.var)
        shift_a, shift_b = self.min_exp(), other.min_exp()
        num = [Fraction(0)] * (self.max_exp() - shift_a + 1)
        for e, c in self._terms:
            num[e - shift_a] = c
        den = [Fraction(0)] * (other.max_exp() - shift_b + 1)
        for e, c in other._terms:
            den[e - shift_b] = c
        if len(den) > len(num):
            raise ValueError("Laurent division is not exact")
        quot = [Fraction(0)] * (len(num) - len(den) + 1)
        lead = den[-1]
        for k in range(len(quot) - 1, -1, -1):
            c = num[k + len(den) - 1] / lead
            quot[k] = c
            if c:
                for j, d in enumerate(den):
                    num[k + j] -= c * d
        if any(num):
            raise ValueError("Laurent division is not exact")
        return LaurentPoly(
            {k + shift_a - shift_b: c for k, c in enumerate(quot)}, self.var
        )

    def evaluate(self, x):
        x = Fraction(x)
        return sum((c * x**e for e, c in self._terms), Fraction(0))

    def to_json(self) -> dict[str, str]:
        return {str(e): format_rational(c) for e, c in self._terms}

    @classmethod
    def from_json(cls, data: Mapping[str, str], var: str = "t") -> LaurentPoly:
        return cls({int(e): parse_rational(c) for e, c in data.items()}, var)

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in reversed(self._terms):
            if e == 0:
                parts.append(format_rational(c))
                continue
            mono = self.var if e == 1 else f"{self.var}^{e}"
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{format_rational(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def quantum_int(n: int, var: str = "t") -> LaurentPoly:
    """The balanced quantum integer ``t^(n-1) + t^(n-3) + ... + t^(1-n)``."""
    if n == 0:
        return LaurentPoly({}, var)
    if n < 0:
        return -quantum_int(-n, var)
    return LaurentPoly({n - 1 - 2 * k: 1 for k in range(n)}, var)


def quantum_factorial(n: int, var: str = "t") -> LaurentPoly:
    if n < 0:
        raise ValueError("quantum factorial of a negative integer")
    out = LaurentPoly.constant(1, var)
    for k in range(1, n + 1):
        out = out * quantum_int(k, var)
    return out


def quantum_binomial(m: int, p: int, var: str = "t") -> LaurentPoly:
    if m < 0 or p < 0:
        raise ValueError("quantum binomial needs non-negative arguments")
    if p > m:
        raise ValueError(f"quantum binomial with p={p} > m={m}")
    den = quantum_factorial(p, var) * quantum_factorial(m - p, var)
    return quantum_factorial(m, var).divide_exact(den)


# ---------------------------------------------------------------------------
# interpolation in q


def _newton_coefficients(xs: Sequence[Fraction], ys: Sequence[Fraction]):
    table = list(ys)
    coeffs = [table[0]]
    n = len(xs)
    for level in range(1, n):
        table = [
            (table[i + 1] - table[i]) / (xs[i + level] - xs[i])
            for i in range(n - level)
        ]
        coeffs.append(table[0])
    return coeffs


def interpolate_in_q(
    samples: Iterable[tuple[int, object]], degree_bound: int, var: str = "q"
) -> LaurentPoly:
    """Exact polynomial of degree <= ``degree_bound`` through ``samples``.

    The first ``degree_bound + 1`` samples determine the polynomial; any
    further samples are checked against it and a mismatch raises
    :class:`InterpolationUnstable` naming the offending q.
    """
    samples = [(int(q), Fraction(y)) for q, y in samples]
    if degree_bound < 0:
        raise ValueError("degree_bound must be non-negative")
    qs = [q for q, _ in samples]
    if len(set(qs)) != len(qs):
        raise ValueError("sample points must be pairwise distinct")
    if len(samples) < degree_bound + 1:
        raise ValueError(
            f"{len(samples)} samples cannot determine degree {degree_bound}"
        )
    head = samples[: degree_bound + 1]
    xs = [Fraction(q) for q, _ in head]
    newton = _newton_coefficients(xs, [y for _, y in head])
    # expand the Newton form into monomial coefficients
    poly = [Fraction(0)]
    for k in range(len(newton) - 1, -1, -1):
        # poly = poly * (x - xs[k]) + newton[k]
        shifted = [Fraction(0)] + poly
        for i, c in enumerate(poly):
            shifted[i] -= xs[k] * c
        shifted[0] += newton[k]
        poly = shifted
    result = LaurentPoly(dict(enumerate(poly)), var)
    for q, y in samples[degree_bound + 1 :]:
        if result.evaluate(q) != y:
            raise InterpolationUnstable(
                q, f"sample at q={q} disagrees with degree-{degree_bound} fit"
            )
    return result


# ---------------------------------------------------------------------------
# Hall coefficients


def _split_q_power(x: Fraction, q: int) -> tuple[int, int]:
    """Write x = body / q**k with k minimal; return (body, k)."""
    x = Fraction(x)
    den = x.denominator
    k = 0
    while den % q == 0:
        den //= q
        k += 1
    if den != 1:
        raise ValueError(f"{x} does not have a pure power of {q} as denominator")
    return x.numerator, k


@dataclass(frozen=True)
class HallCoefficient:
    """The element ``even + odd*v`` of Q(v) with ``v**2 == q``.

    Every Hall structure constant at a fixed prime lives here: Euler-form
    twists contribute ``v**e`` and quantum binomials at ``t = v`` contribute
    Laurent polynomials in ``v``. Two rational parts make equality exact.
    """

    q: int
    even: Fraction = Fraction(0)
    odd: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "even", Fraction(self.even))
        object.__setattr__(self, "odd", Fraction(self.odd))

    @classmethod
    def v_power(cls, q: int, exponent: int, scale=1) -> HallCoefficient:
        half, parity = divmod(exponent, 2)
        value = Fraction(scale) * Fraction(q) ** half
        return cls(q, odd=value) if parity else cls(q, even=value)

    @classmethod
    def from_laurent(cls, poly: LaurentPoly, q: int) -> HallCoefficient:
        out = cls(q)
        for e, c in poly.terms.items():
            out = out + cls.v_power(q, e, c)
        return out

    def is_zero(self) -> bool:
        return not self.even and not self.odd

    def __bool__(self):
        return not self.is_zero()

    def _check(self, other: HallCoefficient):
        if other.q != self.q:
            raise ValueError(f"mixing coefficients at q={self.q} and q={other.q}")

    def __add__(self, other):
        if isinstance(other, int):
            other = HallCoefficient(self.q, other)
        self._check(other)
        return HallCoefficient(self.q, self.even + other.even, self.odd + other.odd)

    __radd__ = __add__

    def __neg__(self):
        return HallCoefficient(self.q, -self.even, -self.odd)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return HallCoefficient(self.q, self.even * other, self.odd * other)
        self._check(other)
        return HallCoefficient(
            self.q,
            self.even * other.even + self.q * self.odd * other.odd,
            self.even * other.odd + self.odd * other.even,
        )

    __rmul__ = __mul__

    def parts(self) -> list[tuple[int, int, int]]:
        """Canonical ``(v_parity, body, q_denom_pow)`` triples, one per parity."""
        out = []
        for parity, value in ((0, self.even), (1, self.odd)):
            if value:
                body, k = _split_q_power(value, self.q)
                out.append((parity, body, k))
        return out

    def to_json(self) -> list[dict]:
        return [
            {"v_parity": parity, "q_poly": str(body), "q_denom_pow": k}
            for parity, body, k in self.parts()
        ]

    def __repr__(self):
        if self.is_zero():
            return "0"
        bits = []
        if self.even:
            bits.append(format_rational(self.even))
        if self.odd:
            bits.append(f"{format_rational(self.odd)}*v")
        return " + ".join(bits)
