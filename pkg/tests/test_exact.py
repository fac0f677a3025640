from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from fhcurves.exact import (GaussianRational as G, Poly, format_token, gcd_all, parse_token,
                            poly_gcd, squarefree_decomposition)

z = sp.symbols("z")

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gauss = st.builds(G, fracs, fracs)
polys = st.lists(gauss, min_size=0, max_size=6).map(Poly)
nonzero_polys = polys.filter(lambda p: not p.is_zero())


def to_sympy(p: Poly):
    return sum((sp.Rational(c.re.numerator, c.re.denominator)
                + sp.I * sp.Rational(c.im.numerator, c.im.denominator)) * z**i
               for i, c in enumerate(p.coeffs))


def from_sympy(expr) -> Poly:
    coeffs = sp.Poly(sp.expand(expr), z).all_coeffs()[::-1]
    out = []
    for c in coeffs:
        re, im = sp.re(c), sp.im(c)
        out.append(G(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q))))
    return Poly(out)


@pytest.mark.parametrize("token,value", [
    ("3", G(3)), ("-1/2", G(Fraction(-1, 2))), ("2i", G(0, 2)), ("-i", G(0, -1)),
    ("i", G(0, 1)), ("1/2-3/4i", G(Fraction(1, 2), Fraction(-3, 4))), ("1+i", G(1, 1)),
    ("-1/2-i", G(Fraction(-1, 2), -1)),
])
def test_parse_token(token, value):
    assert parse_token(token) == value


@pytest.mark.parametrize("bad", ["", "x", "1/0", "1+2j", "++i"])
def test_parse_token_rejects(bad):
    with pytest.raises(ValueError):
        parse_token(bad)


@given(gauss)
def test_token_roundtrip(x):
    assert parse_token(format_token(x)) == x


@given(gauss, gauss, gauss)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    if b:
        assert (a / b) * b == a
    assert a.norm() == (a * a.conjugate()).re


@given(gauss)
def test_complex_conversion(a):
    assert complex(a) == pytest.approx(complex(float(a.re), float(a.im)))


def test_poly_basics():
    p = Poly.parse(["1", "0", "0", "0", "1"])
    assert p.degree == 4
    assert p.lead() == 1
    assert Poly().degree == -1
    assert Poly([0, 0]).is_zero()
    assert p(G(0, 1)) == 2  # i^4 + 1
    assert p.derivative() == Poly([0, 0, 0, 4])
    assert Poly([2, 4]).monic() == Poly([Fraction(1, 2), 1])


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_ring_ops_match_sympy(a, b):
    assert a + b == from_sympy(to_sympy(a) + to_sympy(b)) if not (a + b).is_zero() else True
    prod = a * b
    if not prod.is_zero():
        assert prod == from_sympy(to_sympy(a) * to_sympy(b))


@settings(max_examples=60, deadline=None)
@given(polys, nonzero_polys)
def test_divmod_identity(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree


@settings(max_examples=40, deadline=None)
@given(nonzero_polys, nonzero_polys)
def test_gcd_matches_sympy(a, b):
    g = poly_gcd(a, b)
    want = sp.Poly(sp.gcd(to_sympy(a), to_sympy(b)), z, extension=sp.I).monic()
    got = sp.Poly(to_sympy(g), z, extension=sp.I)
    assert sp.expand(got.as_expr() - want.as_expr()) == 0


def test_gcd_shared_factor():
    a = Poly.parse(["-1", "0", "0", "0", "1"])  # z^4 - 1
    b = Poly.parse(["-1", "1"])
    assert poly_gcd(a, b) == b
    assert gcd_all([a, b, Poly.parse(["1", "1"])]).degree == 0


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.builds(G, st.integers(-3, 3), st.integers(-3, 3)), st.integers(1, 3)),
                min_size=1, max_size=3))
def test_squarefree_reconstructs(factors):
    p = Poly([1])
    for root, mult in factors:
        for _ in range(mult):
            p = p * Poly([-root, 1])
    parts = squarefree_decomposition(p)
    q = Poly([1])
    for f, m in parts:
        assert poly_gcd(f, f.derivative()).degree == 0
        for _ in range(m):
            q = q * f
    assert q == p.monic()
