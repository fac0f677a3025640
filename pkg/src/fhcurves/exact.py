"""Exact arithmetic over the Gaussian rationals Q(i).

Polynomials are stored constant term first, the way they are written in
catalogue files.  Everything here is exact; floating point only appears in
:meth:`Poly.to_complex`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


class GaussianRational:
    """A number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            re, im = re.re, re.im + Fraction(im)
        elif isinstance(re, complex):
            re, im = Fraction(re.real), Fraction(re.imag) + Fraction(im)
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        return x if isinstance(x, GaussianRational) else cls(x)

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        num = self * o.conjugate()
        return GaussianRational(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """Squared modulus, exact."""
        return self.re * self.re + self.im * self.im

    def height(self) -> int:
        return max(abs(self.re.numerator), self.re.denominator,
                   abs(self.im.numerator), self.im.denominator)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        return format_token(self)


def parse_token(token: str) -> GaussianRational:
    """Parse ``a/b+c/d i`` style tokens: ``3``, ``-1/2``, ``2i``, ``-i``, ``1/2-3/4i``."""
    t = token.strip().replace(" ", "")
    if not t:
        raise ValueError("empty coefficient token")
    try:
        if not t.endswith("i"):
            return GaussianRational(Fraction(t), 0)
        body = t[:-1]
        cut = max(body.rfind("+"), body.rfind("-"))
        real_s, imag_s = (body[:cut], body[cut:]) if cut > 0 else ("0", body)
        if imag_s in ("", "+", "-"):
            imag_s += "1"
        return GaussianRational(Fraction(real_s), Fraction(imag_s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad coefficient token {token!r}") from exc


def format_token(x: GaussianRational) -> str:
    if x.im == 0:
        return str(x.re)
    im = abs(x.im)
    mag = "" if im == 1 else str(im)
    if x.re == 0:
        return f"{'-' if x.im < 0 else ''}{mag}i"
    sign = "+" if x.im > 0 else "-"
    return f"{x.re}{sign}{mag}i"


def _strip(coeffs: Sequence[GaussianRational]) -> tuple:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    """Univariate polynomial over Q(i), immutable, constant term first.

    The zero polynomial has no coefficients and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _strip([GaussianRational.coerce(c) for c in coeffs])

    @classmethod
    def parse(cls, tokens: Iterable[str]) -> "Poly":
        return cls(parse_token(t) for t in tokens)

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> "Poly":
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> GaussianRational:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = GaussianRational.coerce(other)
            return Poly(x * c for x in self.coeffs)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [GaussianRational(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if not x:
                continue
            for j, y in enumerate(other.coeffs):
                out[i + j] = out[i + j] + x * y
        return Poly(out)

    __rmul__ = __mul__

    def __divmod__(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.lead()
        if len(rem) - 1 < dq:
            return Poly(), Poly(rem)
        quot = [GaussianRational(0)] * (len(rem) - dq)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] / lead
            quot[i - dq] = c
            if c:
                for j, y in enumerate(other.coeffs):
                    rem[i - dq + j] = rem[i - dq + j] - c * y
        return Poly(quot), Poly(rem[:dq])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = GaussianRational(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly(c * i for i, c in enumerate(self.coeffs) if i > 0)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * (GaussianRational(1) / self.lead())

    def height(self) -> int:
        return max((c.height() for c in self.coeffs), default=0)

    def to_complex(self):
        import numpy as np
        return np.array([complex(c) for c in self.coeffs], dtype=complex)

    def tokens(self) -> list[str]:
        return [format_token(c) for c in self.coeffs] or ["0"]

    def __repr__(self):
        return f"Poly([{', '.join(self.tokens())}])"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def gcd_all(polys: Iterable[Poly]) -> Poly:
    g = Poly()
    for p in polys:
        g = poly_gcd(g, p)
        if g.degree == 0:
            break
    return g


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: monic squarefree factors ``(f_i, i)`` with ``p = c * prod f_i**i``.

    Factors equal to 1 are dropped.
    """
    if p.degree <= 0:
        return []
    out = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        f = poly_gcd(b, d)
        if f.degree > 0:
            out.append((f, i))
        b = b // f
        c = d // f
        d = c - b.derivative()
        i += 1
    return out
