"""Model rational curves [p0 : p1 : ... : pm] and their certified parameters."""

from __future__ import annotations

import hashlib
import json
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np

from .exact import GaussianRational, Poly, gcd_all, poly_gcd
from .roots import Root, poly_roots

DEGREE_MARGIN = 4


class CurveError(ValueError):
    pass


class CommonZero(CurveError):
    pass


class DegreeMargin(CurveError):
    pass


class PoleHit(ArithmeticError):
    pass


@dataclass(frozen=True)
class RationalCurve:
    components: tuple[Poly, ...]

    @property
    def m(self) -> int:
        return len(self.components) - 1

    @property
    def p0(self) -> Poly:
        return self.components[0]

    @property
    def degree(self) -> int:
        return self.p0.degree

    def height(self) -> int:
        return max(p.height() for p in self.components)

    def sort_key(self):
        return (self.degree, self.height(), tuple(tuple(p.tokens()) for p in self.components))

    def __str__(self):
        return "[" + " : ".join(" ".join(p.tokens()) for p in self.components) + "]"


@dataclass(frozen=True)
class CurveParams:
    k: int
    R: Fraction
    n: int
    eta: int


@dataclass(frozen=True)
class CatalogueEntry:
    curve: RationalCurve
    params: CurveParams
    poles: tuple[Root, ...]  # roots of p0 with multiplicity


@dataclass(frozen=True)
class CurveCatalogue:
    entries: tuple[CatalogueEntry, ...]

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, k: int) -> CatalogueEntry:
        """1-based access by catalogue index."""
        if not 1 <= k <= len(self.entries):
            raise IndexError(f"catalogue index {k} out of range 1..{len(self.entries)}")
        return self.entries[k - 1]


def validate_curve(candidate: Sequence[Poly]) -> RationalCurve:
    """Check coprimality and the degree margin; normalise so p0 is monic."""
    comps = tuple(candidate)
    if len(comps) < 2:
        raise CurveError("a curve needs p0 and at least one more component")
    p0 = comps[0]
    if p0.is_zero():
        raise CurveError("p0 is identically zero")
    for i, p in enumerate(comps[1:], 1):
        if p.is_zero():
            raise CurveError(f"component p{i} is identically zero")
    g = gcd_all(comps)
    if g.degree > 0:
        raise CommonZero(f"components share the factor {g}")
    for i, p in enumerate(comps[1:], 1):
        if p0.degree < p.degree + DEGREE_MARGIN:
            raise DegreeMargin(
                f"deg p0 = {p0.degree} < deg p{i} + {DEGREE_MARGIN} = {p.degree + DEGREE_MARGIN}")
    scale = GaussianRational(1) / p0.lead()
    return RationalCurve(tuple(p * scale for p in comps))


def _sqrt_bounds(q: Fraction, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Rational lower and upper bounds on sqrt(q)."""
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd), Fraction(rn, rd)
    scale = 1 << bits
    num = q.numerator * scale * scale
    lo = math.isqrt(num // q.denominator)
    lo_f = Fraction(lo, scale)
    hi_f = Fraction(lo + 1, scale)
    return lo_f, hi_f


def _abs_upper(c: GaussianRational) -> Fraction:
    return _sqrt_bounds(c.norm())[1]


def _abs_lower(c: GaussianRational) -> Fraction:
    return _sqrt_bounds(c.norm())[0]


def _decay_margin(curve: RationalCurve):
    """Coefficients of D(x) = |lead| x^d - sum(lower |a_i| x^i) - sum(|c_i| x^(i+3)),
    one per component; D(x) >= 0 certifies |p_j(z)| |z|^3 <= |p0(z)| at |z| = x."""
    p0 = curve.p0
    d = p0.degree
    base = [-_abs_upper(c) for c in p0.coeffs[:-1]] + [_abs_lower(p0.lead())]
    out = []
    for p in curve.components[1:]:
        coeffs = list(base)
        for i, c in enumerate(p.coeffs):
            coeffs[i + 3] -= _abs_upper(c)
        out.append(coeffs)
    return out


def _eval_fraction(coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def decay_radius(curve: RationalCurve, rel_tol: Fraction = Fraction(1, 10**9)) -> Fraction:
    """Certified R with |p_j(z)| |z|^3 <= |p0(z)| for all |z| >= R and every j.

    Each margin polynomial has one sign change in its coefficients, so it has a
    single positive root and is non-negative beyond it.  The root is bracketed
    by exact bisection, then snapped to a nearby simple rational when that
    rational still certifies.
    """
    R = Fraction(0)
    for coeffs in _decay_margin(curve):
        lead = coeffs[-1]
        hi = 1 + sum(-c for c in coeffs[:-1]) / lead
        lo = Fraction(0)
        if _eval_fraction(coeffs, hi) < 0:  # cannot happen, the bound is Cauchy's
            raise AssertionError("decay bracket failed")
        while hi - lo > rel_tol * hi:
            mid = (lo + hi) / 2
            # keep the dyadic bisection bounded in size
            mid = Fraction(math.floor(mid * 2**64), 2**64) if mid.denominator > 2**64 else mid
            if _eval_fraction(coeffs, mid) >= 0:
                hi = mid
            else:
                lo = mid
        best = hi
        for q in range(1, 65):
            c = Fraction(math.ceil(lo * q), q)
            if c < best and c > 0 and _eval_fraction(coeffs, c) >= 0:
                best = c
        R = max(R, best)
    return R


def pole_count(curve: RationalCurve) -> int:
    p0 = curve.p0
    return sum((p0 // poly_gcd(p0, p)).degree for p in curve.components[1:])


@lru_cache(maxsize=None)
def zeta3_upper(terms: int = 10**6) -> Fraction:
    """Upper bound on sum 1/n^3 from a partial sum plus the integral tail 1/(2N^2)."""
    n = np.arange(1, terms + 1, dtype=np.float64)
    partial = math.fsum((1.0 / n**3).tolist())
    # each term and the final sum carry at most a few ulps of relative error
    bound = Fraction(partial) * (1 + Fraction(1, 2**40)) + Fraction(1, 2 * terms * terms)
    return bound


def choose_eta(R: Fraction, n: int, k: int, zeta3: Fraction) -> int:
    """Smallest integer dominating 2R, 3^k, n and (2^(k+4) zeta3)^(1/3)."""
    if k < 1:
        raise ValueError("catalogue index starts at 1")
    if k > 200:
        raise OverflowError(f"3^{k} is beyond any realizable schedule")
    target = Fraction(2 ** (k + 4)) * zeta3
    e = max(1, int(float(target) ** (1 / 3)) - 1)
    while Fraction(e) ** 3 < target:
        e += 1
    return max(math.ceil(2 * R), 3**k, n, e)


def build_catalogue(sources: Sequence[Sequence[Poly]]) -> CurveCatalogue:
    curves = []
    seen = set()
    for pos, src in enumerate(sources, 1):
        try:
            c = validate_curve(src)
        except CurveError as exc:
            raise type(exc)(f"source {pos}: {exc}") from exc
        if c.components in seen:
            warnings.warn(f"source {pos} duplicates an earlier curve; dropped")
            continue
        seen.add(c.components)
        curves.append(c)
    curves.sort(key=RationalCurve.sort_key)
    z3 = zeta3_upper()
    entries = []
    for k, c in enumerate(curves, 1):
        R = decay_radius(c)
        n = pole_count(c)
        params = CurveParams(k, R, n, choose_eta(R, n, k, z3))
        entries.append(CatalogueEntry(c, params, tuple(poly_roots(c.p0))))
    return CurveCatalogue(tuple(entries))


def evaluate_gamma(curve: RationalCurve, j: int, z, guard: float = 1e-14):
    """p_j(z) / p0(z) in floating point; accepts scalars or arrays."""
    z = np.asarray(z, dtype=complex)
    den = np.polynomial.polynomial.polyval(z, curve.p0.to_complex())
    if np.any(np.abs(den) < guard):
        raise PoleHit(f"|p0(z)| below {guard} near z = {z.ravel()[np.argmin(np.abs(den).ravel())]}")
    num = np.polynomial.polynomial.polyval(z, curve.components[j].to_complex())
    out = num / den
    return complex(out) if out.ndim == 0 else out


# -- catalogue files --------------------------------------------------------

def parse_catalogue_text(text: str) -> list[tuple[Poly, ...]]:
    """Records look like ``curve 1 | 1 0 0 0 1 | 1``: m, then p0..pm tokens."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split("|")]
        head = parts[0].split()
        if len(head) != 2 or head[0] != "curve":
            raise ValueError(f"line {lineno}: expected 'curve <m> | ...'")
        m = int(head[1])
        polys = parts[1:]
        if len(polys) != m + 1:
            raise ValueError(f"line {lineno}: m={m} needs {m + 1} polynomials, got {len(polys)}")
        try:
            out.append(tuple(Poly.parse(p.split()) for p in polys))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
    return out


def format_catalogue(sources) -> str:
    lines = []
    for comps in sources:
        comps = comps.components if isinstance(comps, RationalCurve) else comps
        body = " | ".join(" ".join(p.tokens()) for p in comps)
        lines.append(f"curve {len(comps) - 1} | {body}")
    return "\n".join(lines) + "\n"


def catalogue_hash(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def load_catalogue(path: Path, cache: Path | None = None) -> CurveCatalogue:
    """Build from a catalogue file, reusing cached parameters when the content hash matches."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise OSError(f"cannot read catalogue file {path}: {exc.strerror}") from exc
    return catalogue_from_text(text, cache)


def catalogue_from_text(text: str, cache: Path | None = None) -> CurveCatalogue:
    sources = parse_catalogue_text(text)
    digest = catalogue_hash(text)
    if cache is not None and Path(cache).exists():
        data = json.loads(Path(cache).read_text())
        if data.get("sha256") == digest:
            return _from_cache(sources, data)
    cat = build_catalogue(sources)
    if cache is not None:
        Path(cache).write_text(catalogue_cache_json(cat, digest))
    return cat


def catalogue_cache_json(cat: CurveCatalogue, digest: str) -> str:
    data = {
        "sha256": digest,
        "curves": [
            {"k": e.params.k, "curve": str(e.curve), "R": str(e.params.R),
             "n": e.params.n, "eta": e.params.eta}
            for e in cat.entries
        ],
    }
    return json.dumps(data, indent=1, sort_keys=True) + "\n"


def _from_cache(sources, data) -> CurveCatalogue:
    curves = sorted({validate_curve(s) for s in sources}, key=RationalCurve.sort_key)
    cached = {rec["curve"]: rec for rec in data["curves"]}
    entries = []
    for k, c in enumerate(curves, 1):
        rec = cached.get(str(c))
        if rec is None or rec["k"] != k:
            return build_catalogue(sources)
        params = CurveParams(k, Fraction(rec["R"]), rec["n"], rec["eta"])
        entries.append(CatalogueEntry(c, params, tuple(poly_roots(c.p0))))
    return CurveCatalogue(tuple(entries))
