"""The truncated series h_j = sum_k sum_s gamma_j^[k](z - b_s^[k]) and its checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .catalogue import CurveCatalogue
from .density import density_profile
from .nevanlinna import (CharacteristicSample, CheckRecord, CurveEvaluator, RescaledEvaluator,
                         VisitStatistics, admissible_radius, characteristic_fmt, counting_raw,
                         graded_breakpoints, proximity)
from .placement import CenterSchedule, straddle_index


class InconsistentInputs(ValueError):
    pass


@dataclass
class _Block:
    k: int
    eta: int
    R: float
    p: list  # complex coefficient arrays p0..pm
    dp: list
    b: np.ndarray  # centres
    l: np.ndarray  # Theta per centre
    a: np.ndarray  # moduli
    roots: list  # (alpha, mu) of p0


def _pv(c, z):
    return np.polynomial.polynomial.polyval(z, c)


class TruncatedCurve(CurveEvaluator):
    """Finite sum over curves k <= K and centres s <= S_k, with h0 the product of shifted denominators."""

    def __init__(self, catalogue: CurveCatalogue, schedule: CenterSchedule, K: int, S: dict):
        if K < 1:
            raise InconsistentInputs("K must be >= 1: an empty sum is a constant curve")
        if K > len(catalogue):
            raise InconsistentInputs(f"K={K} exceeds catalogue size {len(catalogue)}")
        ms = {catalogue[k].curve.m for k in range(1, K + 1)}
        if len(ms) != 1:
            raise InconsistentInputs(f"catalogue curves disagree on m: {sorted(ms)}")
        self.m = ms.pop()
        self.K = K
        self.S = {k: S[k] for k in range(1, K + 1)}
        self.blocks: list[_Block] = []
        for k in range(1, K + 1):
            entry = catalogue[k]
            if schedule.eta.get(k) != entry.params.eta:
                raise InconsistentInputs(
                    f"curve {k}: schedule eta {schedule.eta.get(k)} != catalogue eta {entry.params.eta}")
            cs = schedule.centers.get(k, ())
            if len(cs) < self.S[k]:
                raise InconsistentInputs(f"curve {k}: {len(cs)} centres scheduled, S={self.S[k]}")
            cs = cs[:self.S[k]]
            p = [c.to_complex() for c in entry.curve.components]
            dp = [np.polynomial.polynomial.polyder(c) if len(c) > 1 else np.zeros(1, complex) for c in p]
            self.blocks.append(_Block(
                k, entry.params.eta, float(entry.params.R), p, dp,
                np.array([c.b for c in cs], dtype=complex),
                np.array([c.l for c in cs], dtype=np.int64),
                np.array([c.a for c in cs], dtype=np.int64),
                [(r.value, r.multiplicity) for r in entry.poles]))
        self._zeros = [(complex(b + a), mu) for blk in self.blocks for b in blk.b for a, mu in blk.roots]

    # -- evaluation ------------------------------------------------------

    def block_values(self, z, exclude: tuple[int, int] | None = None, derivative: bool = False):
        """h_j^[k](z) per block: array (K, m, *z.shape); optionally the derivative too."""
        z = np.asarray(z, dtype=complex)
        vals = np.zeros((self.K, self.m) + z.shape, dtype=complex)
        ders = np.zeros_like(vals) if derivative else None
        for i, blk in enumerate(self.blocks):
            w = z[None, ...] - blk.b.reshape((-1,) + (1,) * z.ndim)
            p0 = _pv(blk.p[0], w)
            keep = np.ones(blk.b.size, dtype=bool)
            if exclude is not None and exclude[0] == blk.k:
                keep[exclude[1] - 1] = False
            for j in range(1, self.m + 1):
                pj = _pv(blk.p[j], w)
                g = pj / p0
                vals[i, j - 1] = g[keep].sum(axis=0)
                if derivative:
                    d = (_pv(blk.dp[j], w) * p0 - pj * _pv(blk.dp[0], w)) / p0**2
                    ders[i, j - 1] = d[keep].sum(axis=0)
        return (vals, ders) if derivative else vals

    def ratios(self, z):
        return self.block_values(z).sum(axis=0)

    def ratio_derivatives(self, z):
        v, d = self.block_values(z, derivative=True)
        return v.sum(axis=0), d.sum(axis=0)

    def gamma(self, k: int, j: int, w):
        blk = self.blocks[k - 1]
        return _pv(blk.p[j], w) / _pv(blk.p[0], w)

    def zeros(self):
        return list(self._zeros)

    def log_abs_h0(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.zeros(z.shape)
        for blk in self.blocks:
            w = z[None, ...] - blk.b.reshape((-1,) + (1,) * z.ndim)
            acc = acc + np.log(np.abs(_pv(blk.p[0], w))).sum(axis=0)
        return acc

    def log_lead(self):
        return 0.0  # every p0 is monic

    def h0_log_derivative(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.zeros(z.shape, dtype=complex)
        for blk in self.blocks:
            w = z[None, ...] - blk.b.reshape((-1,) + (1,) * z.ndim)
            acc = acc + (_pv(blk.dp[0], w) / _pv(blk.p[0], w)).sum(axis=0)
        return acc

    def peak_angles(self, r):
        pts = []
        for blk in self.blocks:
            for b in blk.b:
                d = abs(abs(b) - r)
                if d < 0.5 * r:
                    w = max(d - blk.R, 1e-9 * r) / r
                    pts += graded_breakpoints(float(np.angle(b)), w)
        for a, _ in self._zeros:
            d = abs(abs(a) - r)
            if d < 1.0:
                pts += graded_breakpoints(float(np.angle(a)), max(d, 1e-12) / r, reach=30.0 / r)
        return sorted(set(pts))

    def discs(self) -> list[tuple[int, int, complex, int]]:
        """(k, s, b, eta) for every realized centre."""
        return [(blk.k, s + 1, complex(b), blk.eta) for blk in self.blocks for s, b in enumerate(blk.b)]

    # -- tails -----------------------------------------------------------

    def approximation_tail(self, k: int, s: int) -> float:
        """Bound on |h_j - h_j(truncated)| over D(b_s^[k], Theta) from omitted terms."""
        blk = self.blocks[k - 1]
        l = float(blk.l[s - 1])
        a = int(blk.a[s - 1])
        tail = 3.0 / (8 * 9.0**self.K * l)

        def series(eta, n0):
            x = l + eta * n0
            return 1 / x**3 + 1 / (2 * eta * x**2)

        for other in self.blocks:
            if other.k == k:
                tail += series(2 * other.eta, self.S[k] + 1 - s)
            else:
                st = straddle_index(other.a, a)
                tail += series(other.eta, self.S[other.k] + 2 - st)
        return tail


def assemble(catalogue: CurveCatalogue, schedule: CenterSchedule, K: int, S) -> TruncatedCurve:
    if isinstance(S, int):
        S = {k: S for k in range(1, K + 1)}
    return TruncatedCurve(catalogue, schedule, K, S)


# -- checks ---------------------------------------------------------------

def exterior_samples(curve: TruncatedCurve, count: int, rng: np.random.Generator) -> np.ndarray:
    """Half uniform in a bounding disc, half just outside the discs; closed discs rejected."""
    discs = curve.discs()
    b = np.array([d[2] for d in discs])
    eta = np.array([d[3] for d in discs], dtype=float)
    bound = float(np.max(np.abs(b) + 2 * eta))
    out = []
    while len(out) < count:
        n = count
        rad = bound * np.sqrt(rng.uniform(0, 1, n))
        z1 = rad * np.exp(1j * rng.uniform(0, 2 * np.pi, n))
        pick = rng.integers(0, b.size, n)
        z2 = b[pick] + eta[pick] * (1 + rng.exponential(0.5, n)) * np.exp(1j * rng.uniform(0, 2 * np.pi, n))
        for z in np.concatenate([z1[: n // 2], z2[: n - n // 2]]):
            if np.all(np.abs(z - b) > eta) and len(out) < count:
                out.append(z)
    return np.array(out)


def convergence_check(curve: TruncatedCurve, sample_count: int, seed: int) -> list[CheckRecord]:
    """|h_j^[k](b)| <= 2^-k per block and |h_j(b)| <= 1 at seeded exterior points."""
    rng = np.random.default_rng(seed)
    z = exterior_samples(curve, sample_count, rng)
    vals = np.abs(curve.block_values(z))  # (K, m, n)
    recs = []
    for i, blk in enumerate(curve.blocks):
        margin = 2.0 ** -blk.k - vals[i].max()
        recs.append(CheckRecord(f"convergence block k={blk.k}", z.size, float(margin), margin >= 0,
                                f"bound 2^-{blk.k}, seed {seed}"))
    total = np.abs(curve.block_values(z).sum(axis=0)).max()
    recs.append(CheckRecord("convergence total", z.size, float(1 - total), total <= 1, f"seed {seed}"))
    return recs


@dataclass
class DiscApproximation:
    k: int
    s: int
    l: int
    sup: float
    tail: float
    spot_error: float

    @property
    def margin(self) -> float:
        return 1 / self.l + self.tail - self.sup


def disc_points(b: complex, radius: float, boundary_nodes: int, rings: int = 5, per_ring: int = 64):
    th = 2 * np.pi * np.arange(boundary_nodes) / boundary_nodes
    pts = [b + radius * np.exp(1j * th), np.array([b])]
    for i in range(1, rings + 1):
        t = 2 * np.pi * (np.arange(per_ring) + 0.5 * (i % 2)) / per_ring
        pts.append(b + radius * i / (rings + 1) * np.exp(1j * t))
    return np.concatenate(pts)


def approximation_check(curve: TruncatedCurve, boundary_nodes: int = 256) -> tuple[list[CheckRecord], list[DiscApproximation]]:
    """sup over D(b, Theta) of |h_j - gamma_j(. - b)| against 1/Theta + omitted tail, every disc.

    The difference is the sum of the other terms, evaluated as such; a direct
    subtraction is compared with it where the local term is moderate.
    """
    discs = []
    for blk in curve.blocks:
        for s in range(1, blk.b.size + 1):
            l = int(blk.l[s - 1])
            b = complex(blk.b[s - 1])
            z = disc_points(b, l, boundary_nodes)
            others = curve.block_values(z, exclude=(blk.k, s)).sum(axis=0)  # (m, n)
            sup = float(np.abs(others).max())
            own = np.stack([curve.gamma(blk.k, j, z - b) for j in range(1, curve.m + 1)])
            ok = np.all(np.abs(own) < 10, axis=0)
            spot = 0.0
            if ok.any():
                direct = curve.ratios(z[ok]) - own[:, ok]
                spot = float(np.abs(direct - others[:, ok]).max())
            discs.append(DiscApproximation(blk.k, s, l, sup, curve.approximation_tail(blk.k, s), spot))
    worst = min(discs, key=lambda d: d.margin)
    spot = max(d.spot_error for d in discs)
    recs = [
        CheckRecord("approximation on discs", len(discs), worst.margin, all(d.margin >= 0 for d in discs),
                    f"worst k={worst.k} s={worst.s} sup={worst.sup:.3g} bound={1 / worst.l + worst.tail:.3g}"),
        CheckRecord("approximation spot subtraction", len(discs), 1e-9 - spot, spot <= 1e-9,
                    f"max |direct - omitted-term| = {spot:.3g}"),
    ]
    return recs, discs


def pole_inventory_check(curve: TruncatedCurve, tol: float = 1e-8) -> CheckRecord:
    """Newton on h0 from each predicted zero must stay within tol of the prediction."""
    worst = 0.0
    for a, mu in curve.zeros():
        z = complex(a) + 1e-7 * (1 + 1j)
        for _ in range(8):
            L = complex(curve.h0_log_derivative(np.array([z]))[0])
            if not np.isfinite(L) or L == 0:
                break
            z = z - mu / L
        worst = max(worst, abs(z - a))
    return CheckRecord("pole inventory", len(curve.zeros()), tol - worst, worst <= tol,
                       f"max displacement {worst:.3g}")


# -- witnesses ----------------------------------------------------------------

@dataclass
class Witness:
    k: int
    v: int
    l: int
    times: np.ndarray
    sups: list
    stats: VisitStatistics | None


def fhc_witness(curve: TruncatedCurve, discs: list[DiscApproximation], k: int, v: int, l: int,
                schedule: CenterSchedule, theta: float) -> Witness:
    """Translation times n (realized centres of curve k on ray v with Theta >= l)."""
    blk = curve.blocks[k - 1]
    cs = schedule.centers[k][: blk.b.size]
    by_s = {(d.k, d.s): d for d in discs}
    times, sups = [], []
    for c in cs:
        if c.v == v and c.l >= l:
            d = by_s[(k, c.s)]
            times.append(c.a)
            sups.append((c.s, d.sup, 1 / c.l + d.tail))
    t = np.array(times, dtype=np.int64)
    if t.size == 0:
        return Witness(k, v, l, t, sups, None)
    N0 = int(t[0])
    N_max = max(int(blk.a.max()), N0 + 1)
    prof = density_profile(t, N0, N_max)
    return Witness(k, v, l, t, sups, VisitStatistics(theta, k, l, t, prof.inf_over_tail, N0, N_max, prof))


# -- growth -------------------------------------------------------------------

def parse_ladder(spec: str) -> list[float]:
    """``r0:rmax:factor`` -> geometric ladder."""
    try:
        r0, rmax, fac = (float(Fraction(x)) for x in spec.split(":"))
    except ValueError as exc:
        raise ValueError(f"ladder must look like r0:rmax:factor, got {spec!r}") from exc
    if not (r0 > 0 and rmax >= r0 and fac > 1):
        raise ValueError("ladder needs 0 < r0 <= rmax and factor > 1")
    out = []
    r = r0
    while r <= rmax * (1 + 1e-12):
        out.append(r)
        r *= fac
    return out


def bridge_radius(curve: CurveEvaluator, r: float, discs, upward: bool = True) -> float:
    """Move r to the boundary of the annulus of any disc whose circle it would cut."""
    for _, _, b, eta in discs:
        if abs(b) - eta < r < abs(b) + eta:
            return abs(b) + eta if upward else abs(b) - eta
    return r


@dataclass
class GrowthResult:
    samples: list
    M: float
    M_cert: Fraction
    checks: list
    factor: float


def growth_scan(curve: CurveEvaluator, ladder: list[float], discs=(), counting_check: bool = True,
                label: str = "growth") -> GrowthResult:
    """T at each ladder radius (radii cutting a disc annulus bridged to |b| + eta), M = max T(r')/r.

    M_cert = M times the ladder ratio bounds T(r)/r on the whole ladder range,
    because T is non-decreasing.
    """
    samples: list[CharacteristicSample] = []
    m0 = proximity(curve, 0.0).value
    m_bound = math.log(math.sqrt(curve.m + 1))
    worst_m = math.inf
    worst_n = math.inf
    winding_ok = True
    for r in ladder:
        r_used = bridge_radius(curve, r, discs)
        s = characteristic_fmt(curve, r_used, m0=m0)
        s.r_requested = r
        if r_used != r:
            s.note = (s.note + "; " if s.note else "") + f"bridged from r={r:g}"
        samples.append(s)
        worst_m = min(worst_m, m_bound - s.m)
        for t in {r, s.r}:
            t_adm, _ = admissible_radius(curve, t)
            n = sum(mu for a, mu in curve.zeros() if abs(a) < t_adm)
            worst_n = min(worst_n, 1.5 * t - n)
        if counting_check:
            try:
                counting_raw(curve, s.r)
            except Exception:
                winding_ok = False
    ratios = [s.T_fmt / s.r_requested for s in samples]
    M = max(ratios) if ratios else 0.0
    factor = ladder[1] / ladder[0] if len(ladder) > 1 else 1.0
    M_cert = Fraction(math.ceil(M * factor * (1 + 1e-9) * 2**30), 2**30)
    mono = [b.T_fmt - a.T_fmt for a, b in zip(sorted(samples, key=lambda x: x.r),
                                              sorted(samples, key=lambda x: x.r)[1:])]
    worst_mono = min(mono, default=0.0)
    small = ratios[0] <= ratios[1] + 1e-12 if len(ratios) > 1 else True
    checks = [
        CheckRecord(f"{label}: counting n(t) <= 1.5 t", len(ladder), worst_n, worst_n >= 0),
        CheckRecord(f"{label}: proximity m <= log sqrt(m+1)", len(ladder), worst_m, worst_m >= -1e-9),
        CheckRecord(f"{label}: T non-decreasing", len(samples), worst_mono, worst_mono >= -1e-6),
        CheckRecord(f"{label}: T/r decreasing toward r -> 0", 2, (ratios[1] - ratios[0]) if len(ratios) > 1 else 0.0,
                    small),
        CheckRecord(f"{label}: M finite", len(samples), 0.0 if math.isfinite(M) else -math.inf,
                    math.isfinite(M), f"M={M:.6g} M_cert={float(M_cert):.6g}"),
        CheckRecord(f"{label}: quadrature certified", len(samples), 0.0,
                    all(s.certified for s in samples) and winding_ok),
    ]
    return GrowthResult(samples, M, M_cert, checks, factor)


def rescale(curve: CurveEvaluator, M: Fraction | float, epsilon: Fraction | float) -> tuple[RescaledEvaluator, Fraction]:
    """h~(z) = h((epsilon / M) z); the factor is kept exact and rounded down."""
    M = Fraction(M)
    epsilon = Fraction(epsilon)
    if M <= 0 or epsilon <= 0:
        raise ValueError("M and epsilon must be positive")
    c = epsilon / M
    c = Fraction(math.floor(c * 2**40), 2**40) if c.denominator > 2**40 else c
    return RescaledEvaluator(curve, float(c)), c


@dataclass
class RescaleResult:
    samples: list
    epsilon: float
    factor: Fraction
    checks: list = field(default_factory=list)


def rescaled_scan(curve: CurveEvaluator, M_cert: Fraction, epsilon: float, ladder: list[float],
                  identity_radii: int = 3) -> RescaleResult:
    """T_h~(r) <= epsilon r at every ladder radius (no bridging), plus T_h~(r) = T_h(c r) spot checks."""
    ev, c = rescale(curve, M_cert, Fraction(epsilon))
    m0 = proximity(ev, 0.0).value
    samples = []
    worst = math.inf
    for r in ladder:
        s = characteristic_fmt(ev, r, m0=m0)
        s.r_requested = r
        samples.append(s)
        worst = min(worst, epsilon * r - s.T_fmt)
    ident = 0.0
    picks = ladder[:: max(1, len(ladder) // identity_radii)][:identity_radii]
    for r in picks:
        a = characteristic_fmt(ev, r, m0=m0).T_fmt
        b = characteristic_fmt(curve, float(c) * r).T_fmt
        ident = max(ident, abs(a - b) / max(1.0, abs(b)))
    checks = [
        CheckRecord("rescale: T <= epsilon r", len(samples), worst, worst > 0,
                    f"epsilon={epsilon} c={float(c):.6g}"),
        CheckRecord("rescale: T_h~(r) = T_h(c r)", len(picks), 1e-6 - ident, ident <= 1e-6,
                    f"max relative gap {ident:.3g}"),
        CheckRecord("rescale: quadrature certified", len(samples), 0.0, all(s.certified for s in samples)),
    ]
    return RescaleResult(samples, epsilon, c, checks)
