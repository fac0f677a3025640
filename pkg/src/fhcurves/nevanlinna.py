"""Nevanlinna functions of a curve h = [h0 : h1 : ... : hm] with respect to H0 = {Z0 = 0}.

Two independent routes to the characteristic T_h(r):

* ``characteristic_fmt``: proximity m(r) + counting N(r) - m(0);
* ``characteristic_area``: the log-radial integral of the Fubini-Study area
  of h(D_t), computed as T(r) = int_0^inf r^2 u e^(-2u) G(r e^(-u)) du with
  G(s) the angular integral of the pullback density on |z| = s.

All logarithms are natural.
"""

from __future__ import annotations

import math
import warnings
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .catalogue import RationalCurve
from .exact import Poly
from .roots import poly_roots

BOUNDARY_TOL = 1e-9
NUDGE = 1e-6


class BoundaryZero(ValueError):
    pass


class WindingMismatch(RuntimeError):
    pass


class OriginOnDivisor(ValueError):
    pass


class InsufficientSamples(ValueError):
    pass


class CurveEvaluator(ABC):
    """Pointwise access to a curve through a reduced representation."""

    m: int

    @abstractmethod
    def ratios(self, z) -> np.ndarray:
        """h_j / h0 for j = 1..m, shape (m, *z.shape)."""

    @abstractmethod
    def ratio_derivatives(self, z) -> tuple[np.ndarray, np.ndarray]:
        """(h_j / h0, (h_j / h0)') for j = 1..m."""

    @abstractmethod
    def zeros(self) -> list[tuple[complex, int]]:
        """Zeros of h0 with multiplicity."""

    @abstractmethod
    def log_abs_h0(self, z) -> np.ndarray:
        ...

    @abstractmethod
    def log_lead(self) -> float:
        """log |leading coefficient of h0|."""

    @abstractmethod
    def h0_log_derivative(self, z) -> np.ndarray:
        ...

    def representation(self, z) -> tuple[np.ndarray, np.ndarray]:
        """(H, H') with H = (1, h1/h0, ...), the curve up to a pointwise scalar."""
        z = np.asarray(z, dtype=complex)
        f, df = self.ratio_derivatives(z)
        H = np.concatenate([np.ones((1,) + z.shape, dtype=complex), f])
        dH = np.concatenate([np.zeros((1,) + z.shape, dtype=complex), df])
        return H, dH

    def log_norm(self, z) -> np.ndarray:
        """(1/2) log sum |h_i|^2 for the reduced representation."""
        f = self.ratios(z)
        return self.log_abs_h0(z) + 0.5 * np.log1p(np.sum(np.abs(f) ** 2, axis=0))

    def peak_angles(self, r: float) -> list[float]:
        """Breakpoints for angular quadrature on |z| = r; empty means smooth enough for trapezoid."""
        return []

    def density(self, z) -> np.ndarray:
        """Fubini-Study pullback density, normalised so a line has area 1."""
        H, dH = self.representation(z)
        scale = np.max(np.abs(H), axis=0)
        scale = np.where(scale > 0, scale, 1.0)
        H = H / scale
        dH = dH / scale
        norm2 = np.sum(np.abs(H) ** 2, axis=0)
        num = np.zeros(norm2.shape)
        for i in range(H.shape[0]):
            for j in range(i + 1, H.shape[0]):
                num = num + np.abs(H[i] * dH[j] - H[j] * dH[i]) ** 2
        return num / (np.pi * norm2**2)


def _polyval(c: np.ndarray, z):
    return np.polynomial.polynomial.polyval(z, c)


class PolynomialCurveEvaluator(CurveEvaluator):
    """h = [p0 : ... : pm] with polynomial components."""

    def __init__(self, components):
        if isinstance(components, RationalCurve):
            components = components.components
        polys = [p if isinstance(p, Poly) else Poly(p) for p in components]
        if polys[0].is_zero():
            raise ValueError("h0 must not vanish identically")
        self.polys = polys
        self.m = len(polys) - 1
        self.c = [p.to_complex() if not p.is_zero() else np.zeros(1, dtype=complex) for p in polys]
        self.dc = [np.polynomial.polynomial.polyder(c) if len(c) > 1 else np.zeros(1, dtype=complex)
                   for c in self.c]
        self._zeros = [(r.value, r.multiplicity) for r in poly_roots(polys[0])] \
            if polys[0].degree > 0 else []

    def values(self, z):
        z = np.asarray(z, dtype=complex)
        H = np.stack([_polyval(c, z) for c in self.c])
        dH = np.stack([_polyval(c, z) for c in self.dc])
        return H, dH

    def representation(self, z):
        return self.values(z)

    def ratios(self, z):
        H, _ = self.values(z)
        return H[1:] / H[0]

    def ratio_derivatives(self, z):
        H, dH = self.values(z)
        f = H[1:] / H[0]
        df = (dH[1:] * H[0] - H[1:] * dH[0]) / H[0] ** 2
        return f, df

    def zeros(self):
        return list(self._zeros)

    def log_abs_h0(self, z):
        return np.log(np.abs(_polyval(self.c[0], np.asarray(z, dtype=complex))))

    def log_norm(self, z):
        H, _ = self.values(z)
        return 0.5 * np.log(np.sum(np.abs(H) ** 2, axis=0))

    def log_lead(self):
        return math.log(abs(self.c[0][-1]))

    def h0_log_derivative(self, z):
        z = np.asarray(z, dtype=complex)
        return _polyval(self.dc[0], z) / _polyval(self.c[0], z)


class RescaledEvaluator(CurveEvaluator):
    """z -> h(c z)."""

    def __init__(self, base: CurveEvaluator, factor: float):
        if not factor > 0:
            raise ValueError("rescale factor must be positive")
        self.base = base
        self.factor = float(factor)
        self.m = base.m

    def ratios(self, z):
        return self.base.ratios(self.factor * np.asarray(z, dtype=complex))

    def ratio_derivatives(self, z):
        f, df = self.base.ratio_derivatives(self.factor * np.asarray(z, dtype=complex))
        return f, self.factor * df

    def zeros(self):
        return [(a / self.factor, mu) for a, mu in self.base.zeros()]

    def log_abs_h0(self, z):
        return self.base.log_abs_h0(self.factor * np.asarray(z, dtype=complex))

    def log_norm(self, z):
        return self.base.log_norm(self.factor * np.asarray(z, dtype=complex))

    def log_lead(self):
        deg = sum(mu for _, mu in self.base.zeros())
        return self.base.log_lead() + deg * math.log(self.factor)

    def h0_log_derivative(self, z):
        return self.factor * self.base.h0_log_derivative(self.factor * np.asarray(z, dtype=complex))

    def peak_angles(self, r):
        return self.base.peak_angles(self.factor * r)


# -- circle averages ---------------------------------------------------------

@dataclass
class CircleMean:
    value: float
    nodes: int
    certified: bool


def circle_mean(func, r: float, breakpoints=(), nodes: int = 1024, cap: int = 2**15,
                tol: float = 1e-6) -> CircleMean:
    """Mean of func(r e^{i theta}) over the circle.

    Smooth integrands use the trapezoid rule with doubling until two successive
    values agree to ``tol``.  When breakpoints are supplied the integrand has
    narrow peaks there, and adaptive Gauss-Kronrod is run across them instead.
    """
    if len(breakpoints):
        pts = sorted({float(p) % (2 * np.pi) for p in breakpoints} - {0.0})
        f = lambda th: float(func(np.array([r * np.exp(1j * th)]))[0])
        val, err = integrate.quad(f, 0.0, 2 * np.pi, points=pts or None,
                                  limit=max(200, 50 * (len(pts) + 1)),
                                  epsabs=tol * 2 * np.pi / 100, epsrel=1e-10)
        return CircleMean(val / (2 * np.pi), -1, bool(err < tol * 2 * np.pi))
    n = nodes
    th = 2 * np.pi * np.arange(n) / n
    total = float(np.sum(func(r * np.exp(1j * th))))
    prev = total / n
    while n < cap:
        th = 2 * np.pi * (np.arange(n) + 0.5) / n
        total += float(np.sum(func(r * np.exp(1j * th))))
        n *= 2
        cur = total / n
        if abs(cur - prev) < tol:
            return CircleMean(cur, n, True)
        prev = cur
    return CircleMean(prev, n, False)


def graded_breakpoints(centres_angle: float, width: float, reach: float = 0.5) -> list[float]:
    """Points centre +- width * 2^j up to ``reach`` radians."""
    pts = [centres_angle]
    w = max(width, 1e-12)
    while w < reach:
        pts += [centres_angle - w, centres_angle + w]
        w *= 2
    return pts


# -- counting, proximity, characteristic -------------------------------------

def _check_boundary(evaluator: CurveEvaluator, t: float):
    for a, _ in evaluator.zeros():
        if abs(abs(a) - t) < BOUNDARY_TOL:
            raise BoundaryZero(f"zero {a} lies within {BOUNDARY_TOL} of |z| = {t}")


def winding_number(evaluator: CurveEvaluator, t: float) -> float:
    """(1/2 pi i) times the contour integral of h0'/h0 over |z| = t."""
    pts = list(evaluator.peak_angles(t))
    for a, _ in evaluator.zeros():
        d = abs(abs(a) - t)
        if d < 0.5 * t:
            pts += graded_breakpoints(float(np.angle(a)), max(d, 1e-12) / t)

    def integrand(z):
        return np.real(z * evaluator.h0_log_derivative(z))

    return circle_mean(integrand, t, breakpoints=pts or [0.0, np.pi], tol=1e-8).value


def counting_raw(evaluator: CurveEvaluator, t: float, cross_check: bool = True) -> int:
    """n_h(t, H0): zeros of h0 in |z| < t with multiplicity."""
    if t <= 0:
        raise ValueError("radius must be positive")
    _check_boundary(evaluator, t)
    n = sum(mu for a, mu in evaluator.zeros() if abs(a) < t)
    if cross_check:
        w = winding_number(evaluator, t)
        if abs(w - n) >= 0.1:
            raise WindingMismatch(f"inventory gives {n} zeros in |z| < {t}, winding gives {w:.4f}")
    return n


def counting_integrated(evaluator: CurveEvaluator, r: float) -> float:
    """N_h(r, H0) = sum over zeros with 0 < |a| < r of mu * log(r / |a|)."""
    zs = evaluator.zeros()
    if any(abs(a) == 0 for a, _ in zs):
        raise OriginOnDivisor("h0(0) = 0")
    return math.fsum(mu * math.log(r / abs(a)) for a, mu in zs if abs(a) < r)


def jensen_mean_log_h0(evaluator: CurveEvaluator, r: float) -> float:
    """Circle mean of log|h0| by Jensen's formula."""
    return evaluator.log_lead() + math.fsum(mu * math.log(max(r, abs(a))) for a, mu in evaluator.zeros())


@dataclass
class Proximity:
    value: float
    certified: bool
    method: str
    nodes: int


def proximity(evaluator: CurveEvaluator, r: float, nodes: int = 1024, cap: int = 2**15,
              tol: float = 1e-6, method: str = "auto") -> Proximity:
    """m_h(r, H0), the circle mean of (1/2) log(1 + sum |h_j / h0|^2).

    ``ratio`` integrates that expression directly.  ``jensen`` integrates the smooth
    (1/2) log sum |h_i|^2 and subtracts the exact mean of log|h0|; it stays accurate
    when the circle passes close to zeros of h0.  ``auto`` picks jensen when a zero
    is within distance 1 of the circle.
    """
    if r < 0:
        raise ValueError("radius must be non-negative")
    if r == 0:
        f = evaluator.ratios(np.zeros(1, dtype=complex))
        return Proximity(float(0.5 * np.log1p(np.sum(np.abs(f) ** 2))), True, "origin", 1)
    if method == "auto":
        near = any(abs(abs(a) - r) < 1.0 for a, _ in evaluator.zeros())
        method = "jensen" if near else "ratio"
    bps = evaluator.peak_angles(r)
    if method == "ratio":
        res = circle_mean(lambda z: 0.5 * np.log1p(np.sum(np.abs(evaluator.ratios(z)) ** 2, axis=0)),
                          r, bps, nodes, cap, tol)
        value = res.value
    elif method == "jensen":
        res = circle_mean(evaluator.log_norm, r, bps, nodes, cap, tol)
        value = res.value - jensen_mean_log_h0(evaluator, r)
    else:
        raise ValueError(f"unknown proximity method {method!r}")
    if not res.certified:
        warnings.warn(f"proximity at r={r} did not converge within {cap} nodes")
    return Proximity(max(value, 0.0) if value > -tol else value, res.certified, method, res.nodes)


@dataclass
class CharacteristicSample:
    r: float
    N: float
    m: float
    m0: float
    T_fmt: float
    T_area: float = math.nan
    certified: bool = True
    note: str = ""
    r_requested: float | None = None

    @property
    def T_over_r(self) -> float:
        return self.T_fmt / self.r


def admissible_radius(evaluator: CurveEvaluator, r: float) -> tuple[float, str]:
    """Nudge r outward while it sits within BOUNDARY_TOL of a zero modulus."""
    note = ""
    moduli = [abs(a) for a, _ in evaluator.zeros()]
    while any(abs(x - r) < BOUNDARY_TOL for x in moduli):
        r += NUDGE
        note = f"radius nudged outward by {NUDGE:g} off a zero of h0"
    return r, note


def characteristic_fmt(evaluator: CurveEvaluator, r: float, m0: float | None = None,
                       **prox_kw) -> CharacteristicSample:
    """T(r) = m(r) + N(r) - m(0)."""
    if r <= 0:
        raise ValueError("radius must be positive")
    r_used, note = admissible_radius(evaluator, r)
    N = counting_integrated(evaluator, r_used)
    prox = proximity(evaluator, r_used, **prox_kw)
    if m0 is None:
        m0 = proximity(evaluator, 0.0).value
    T = prox.value + N - m0
    return CharacteristicSample(r_used, N, prox.value, m0, T, math.nan, prox.certified, note, r)


def _simpson(y: np.ndarray, h: float) -> float:
    return h / 3 * (y[0] + y[-1] + 4 * y[1:-1:2].sum() + 2 * y[2:-1:2].sum())


def _angular_integral(evaluator: CurveEvaluator, s: np.ndarray, nodes: int, cap: int,
                      rel_tol: float = 1e-10, chunk: int = 2**20) -> tuple[np.ndarray, bool]:
    """G(s) = int_0^{2pi} rho(s e^{i phi}) d phi by trapezoid doubling, per radius."""
    out = np.empty(s.size)
    ok = True
    n = nodes
    todo = np.arange(s.size)
    acc = np.zeros(s.size)
    prev = np.full(s.size, np.nan)
    offset = 0.0
    while todo.size:
        phi = 2 * np.pi * (np.arange(n if offset == 0 else n // 2) + offset) / (n if offset == 0 else n // 2)
        rows = max(1, chunk // phi.size)
        for i0 in range(0, todo.size, rows):
            idx = todo[i0:i0 + rows]
            acc[idx] += evaluator.density(s[idx, None] * np.exp(1j * phi)[None, :]).sum(axis=1)
        cur = 2 * np.pi * acc[todo] / n
        done = np.abs(cur - prev[todo]) <= rel_tol * np.abs(cur) + 1e-300
        if n >= cap:
            ok = ok and bool(done.all())
            done[:] = True
        out[todo[done]] = cur[done]
        prev[todo] = cur
        todo = todo[~done]
        offset = 0.5
        n *= 2
    return out, ok


def characteristic_area(evaluator: CurveEvaluator, r: float, panels_per_unit: int = 32,
                        angular_nodes: int = 256, angular_cap: int = 2**15,
                        tol: float = 1e-8) -> tuple[float, bool]:
    """T(r) from the Fubini-Study area, by composite Simpson in u = log(r/s).

    The u-axis is broken at the moduli of the zeros of h0 and the panel count is
    doubled, reusing earlier nodes, until the total moves by less than ``tol``
    (relative to max(1, T)).  Returns (value, certified).
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    u_max = max(0.0, math.log(r)) + 18.0
    brk = {0.0, u_max}
    for a, _ in evaluator.zeros():
        if 0 < abs(a) < r:
            brk.add(math.log(r / abs(a)))
    brk = sorted(brk)
    ok_all = True
    segs = []
    for u0, u1 in zip(brk[:-1], brk[1:]):
        n = max(4, int(math.ceil((u1 - u0) * panels_per_unit)))
        n += n % 2
        u = np.linspace(u0, u1, n + 1)
        G, ok = _angular_integral(evaluator, r * np.exp(-u), angular_nodes, angular_cap)
        ok_all &= ok
        segs.append((u0, u1, n, r * r * u * np.exp(-2 * u) * G))

    def total():
        return math.fsum(_simpson(y, (u1 - u0) / n) for u0, u1, n, y in segs)

    prev = total()
    for _ in range(8):
        new = []
        for u0, u1, n, y in segs:
            h = (u1 - u0) / n
            um = u0 + h * (np.arange(n) + 0.5)
            G, ok = _angular_integral(evaluator, r * np.exp(-um), angular_nodes, angular_cap)
            ok_all &= ok
            ym = r * r * um * np.exp(-2 * um) * G
            y2 = np.empty(2 * n + 1)
            y2[0::2] = y
            y2[1::2] = ym
            new.append((u0, u1, 2 * n, y2))
        segs = new
        cur = total()
        if abs(cur - prev) < tol * max(1.0, abs(cur)):
            return cur, ok_all
        prev = cur
    warnings.warn(f"area quadrature at r={r} did not settle")
    return prev, False


def order_estimate(samples) -> float:
    """Least-squares slope of log T against log r over the larger-r half of the samples."""
    pts = sorted((s.r, s.T_fmt) if isinstance(s, CharacteristicSample) else s for s in samples)
    if len(pts) < 3:
        raise InsufficientSamples("need at least 3 samples")
    if any(T <= 0 for _, T in pts):
        raise InsufficientSamples("T must be positive at every sample")
    tail = pts[len(pts) // 2:]
    x = np.log([p[0] for p in tail])
    y = np.log([p[1] for p in tail])
    return float(np.polyfit(x, y, 1)[0])


# -- obstruction checks ------------------------------------------------------

@dataclass
class VisitStatistics:
    theta: float
    target: int
    radius: int  # sup-norm disc radius l; neighbourhood is sup distance < 1/l on |z| <= l
    visits: np.ndarray
    alpha: float  # measured tail-inf density
    N0: int
    N_max: int
    profile: object = field(default=None, repr=False)


@dataclass
class CheckRecord:
    name: str
    checked: int
    worst_margin: float  # >= 0 means pass
    passed: bool
    detail: str = ""


def fhc_lower_bound_check(visits: VisitStatistics, evaluator: CurveEvaluator,
                          t_values, r_values, T_values: dict | None = None) -> list[CheckRecord]:
    """n_h(t) >= 2C t and T(r) >= C r with C = alpha / 8 past the burn-in.

    t_values below (N0 + 1) and r_values below 2 (N0 + 1) are skipped.
    ``T_values`` may supply precomputed lower bounds for T at the given radii.
    """
    alpha = visits.alpha
    C = alpha / 8
    name = f"lower bound k={visits.target} theta={visits.theta:.6g}"
    if alpha <= 0 or visits.visits.size == 0:
        return [CheckRecord(name + " (counting)", 0, 0.0, True, "vacuous: alpha = 0")]
    worst_n = math.inf
    cnt = 0
    for t in t_values:
        if t < visits.N0 + 1:
            continue
        t_adm, _ = admissible_radius(evaluator, t)
        n = sum(mu for a, mu in evaluator.zeros() if abs(a) < t_adm)
        worst_n = min(worst_n, n - 2 * C * t)
        cnt += 1
    out = [CheckRecord(name + " (counting)", cnt, worst_n if cnt else 0.0,
                       (worst_n >= 0) if cnt else True, f"C={C:.6g}")]
    worst_T = math.inf
    cntT = 0
    for r in r_values:
        if r < 2 * (visits.N0 + 1):
            continue
        T = T_values[r] if T_values and r in T_values else characteristic_fmt(evaluator, r).T_fmt
        worst_T = min(worst_T, T - C * r)
        cntT += 1
    out.append(CheckRecord(name + " (characteristic)", cntT, worst_T if cntT else 0.0,
                           (worst_T >= 0) if cntT else True, f"C={C:.6g}"))
    return out


@dataclass
class BudgetRow:
    n: int
    count: int
    budget: float

    @property
    def ok(self) -> bool:
        return self.count < self.budget


def direction_budget_check(alphas, epsilon_slope: float, n_values) -> list[BudgetRow]:
    """#{directions with alpha > 1/n} < 4 epsilon n, for each n."""
    alphas = list(alphas)
    return [BudgetRow(n, sum(1 for a in alphas if a > 1 / n), 4 * epsilon_slope * n) for n in n_values]
