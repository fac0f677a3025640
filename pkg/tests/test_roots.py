import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fhcurves.exact import GaussianRational as G, Poly
from fhcurves.roots import aberth, poly_roots, relative_residual


def same_roots(a, b, atol):
    a, b = np.asarray(a), np.asarray(b)
    return len(a) == len(b) and all(np.abs(b - x).min() <= atol for x in a) \
        and all(np.abs(a - x).min() <= atol for x in b)


def from_roots(roots):
    p = Poly([1])
    for r in roots:
        p = p * Poly([-r, 1])
    return p


def test_double_roots():
    p = Poly.parse(["1", "0", "2", "0", "1"])  # (z^2 + 1)^2
    roots = poly_roots(p)
    assert [r.multiplicity for r in roots] == [2, 2]
    assert sorted(r.value.imag for r in roots) == pytest.approx([-1, 1])


def test_sorted_by_modulus():
    roots = poly_roots(from_roots([G(3), G(-1), G(0, 2)]))
    assert [abs(r.value) for r in roots] == pytest.approx([1, 2, 3])


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        poly_roots(Poly())


def test_constant_has_no_roots():
    assert poly_roots(Poly([5])) == []


@settings(max_examples=25, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
                min_size=2, max_size=8))
def test_aberth_matches_numpy(roots):
    roots = np.array(roots)
    # keep roots well separated so both solvers are well conditioned
    d = np.abs(roots[:, None] - roots[None, :]) + np.eye(len(roots))
    if d.min() < 0.1:
        return
    coeffs = np.poly(roots)[::-1]
    assert same_roots(aberth(coeffs), np.roots(coeffs[::-1]), 1e-7)


def test_catalogue_denominator_against_numpy():
    p = Poly.parse(["3", "0", "0", "-1/2", "0", "0", "1"])
    got = np.array([r.value for r in poly_roots(p)])
    assert same_roots(got, np.roots(p.to_complex()[::-1]), 1e-10)
    assert max(relative_residual(p.to_complex(), r) for r in got) < 1e-12
