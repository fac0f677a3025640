"""Translation centres b_s^[k] on finitely many rays, and their separation geometry."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .density import HorizonExhausted, SeparatedFamilyGrid


@dataclass(frozen=True)
class Direction:
    value: float  # radians in [0, 2pi)
    turns: Fraction | None = None  # exact angle / 2pi when known

    def __str__(self):
        if self.turns is not None:
            half = 2 * self.turns
            return "0" if half == 0 else f"{half}pi"
        return repr(self.value)


_PI_RE = re.compile(r"^\s*([+-]?\d+(?:/\d+)?)?\s*\*?\s*pi\s*$")


def parse_direction(text: str) -> Direction:
    """``0``, ``1.25``, ``pi``, ``2/3pi`` or ``4/3*pi``."""
    m = _PI_RE.match(text)
    if m:
        coef = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        turns = coef / 2
        return Direction(float(turns) * math.tau, turns)
    val = float(text)
    if val == 0:
        return Direction(0.0, Fraction(0))
    return Direction(val)


@dataclass(frozen=True)
class DirectionTable:
    directions: tuple[Direction, ...]

    def __post_init__(self):
        vals = [d.value for d in self.directions]
        if not vals:
            raise ValueError("direction table is empty")
        if any(not 0 <= v < math.tau for v in vals):
            raise ValueError("direction angles must lie in [0, 2pi)")
        if len(set(vals)) != len(vals):
            raise ValueError("direction angles must be distinct")

    @property
    def V(self) -> int:
        return len(self.directions)

    @property
    def thetas(self) -> list[float]:
        return [d.value for d in self.directions]

    def theta(self, v: int) -> float:
        return self.directions[v - 1].value

    @classmethod
    def parse(cls, items: Sequence[str]) -> "DirectionTable":
        return cls(tuple(parse_direction(s) for s in items))


def cantor_unpair(n: int) -> tuple[int, int]:
    """Diagonal enumeration of N x N: 1 -> (1,1), 2 -> (1,2), 3 -> (2,1), ..."""
    if n < 1:
        raise ValueError("n must be >= 1")
    d = (math.isqrt(8 * n) + 1) // 2
    while d * (d - 1) // 2 >= n:
        d -= 1
    while d * (d + 1) // 2 < n:
        d += 1
    p = n - d * (d - 1) // 2
    return p, d + 1 - p


def cantor_pair(i: int, j: int) -> int:
    d = i + j - 1
    return d * (d - 1) // 2 + i


def direction_index(l: int, V: int) -> int:
    """phi_1(l) folded onto the finite table."""
    return (cantor_unpair(l)[0] - 1) % V + 1


@dataclass(frozen=True)
class Center:
    k: int
    s: int
    a: int
    l: int  # Theta^[k](s)
    v: int
    theta: float
    b: complex


@dataclass(frozen=True)
class CenterSchedule:
    centers: dict  # k -> tuple[Center, ...]
    eta: dict  # k -> int

    @property
    def ks(self) -> list[int]:
        return sorted(self.centers)

    def all(self) -> list[Center]:
        return [c for k in self.ks for c in self.centers[k]]


def enumerate_centers(grid: SeparatedFamilyGrid, eta_k: int, k: int,
                      directions: DirectionTable, s_max: int) -> tuple[Center, ...]:
    """First s_max elements of the union over l >= eta_k of A(k, 2l), rotated onto rays."""
    if s_max <= 0:
        return ()
    pool = []
    for (first, nu), els in grid.cells.items():
        if first != k or nu % 2 or nu // 2 < eta_k:
            continue
        pool.extend((int(a), nu // 2) for a in els)
    pool.sort()
    if len(pool) < s_max:
        raise HorizonExhausted(
            f"curve {k}: only {len(pool)} centres realized up to horizon {grid.horizon}, need {s_max}")
    out = []
    for s, (a, l) in enumerate(pool[:s_max], 1):
        v = direction_index(l, directions.V)
        th = directions.theta(v)
        out.append(Center(k, s, a, l, v, th, a * complex(math.cos(th), math.sin(th))))
    return tuple(out)


def build_schedule(grid: SeparatedFamilyGrid, etas: dict, directions: DirectionTable,
                   S: dict) -> CenterSchedule:
    return CenterSchedule({k: enumerate_centers(grid, etas[k], k, directions, S[k]) for k in etas},
                          dict(etas))


@dataclass(frozen=True)
class PlacementReport:
    name: str
    checked: int
    violations: list
    min_slack: float

    @property
    def passed(self) -> bool:
        return not self.violations


def check_disjoint_discs(schedule: CenterSchedule) -> PlacementReport:
    """||b1| - |b2|| >= 2 eta1 + 2 eta2 for every pair of distinct centres.

    This implies the discs D(b, eta) and the annuli |b| - eta < |z| < |b| + eta are
    pairwise disjoint; slack is measured against the stronger bound.
    """
    cs = schedule.all()
    a = np.array([c.a for c in cs], dtype=np.int64)
    e = np.array([schedule.eta[c.k] for c in cs], dtype=np.int64)
    violations = []
    slack_min = math.inf
    n = len(cs)
    for i in range(n):
        for j in range(i + 1, n):
            slack = abs(int(a[i]) - int(a[j])) - 2 * int(e[i]) - 2 * int(e[j])
            slack_min = min(slack_min, slack)
            if slack < 0:
                violations.append(((cs[i].k, cs[i].s), (cs[j].k, cs[j].s), slack))
    return PlacementReport("disjoint discs and annuli", n * (n - 1) // 2, violations, slack_min)


def straddle_index(moduli: Sequence[int], x: float) -> int:
    """Smallest t >= 1 with moduli[t-1] > x (len + 1 when none); moduli is a_1 < a_2 < ..."""
    return int(np.searchsorted(np.asarray(moduli), x, side="right")) + 1


def check_distance_bounds(schedule: CenterSchedule, samples_per_disc: int = 1000,
                          seed: int = 0) -> list[PlacementReport]:
    """Same-curve, cross-curve and exterior-point distance bounds, exhaustively on centres."""
    same, cross, ext = [], [], []
    same_slack = cross_slack = ext_slack = math.inf
    n_same = n_cross = n_ext = 0
    moduli = {k: [c.a for c in schedule.centers[k]] for k in schedule.ks}
    for k in schedule.ks:
        for cs in schedule.centers[k]:
            l = cs.l
            for ct in schedule.centers[k]:
                if ct.s == cs.s:
                    continue
                dist = abs(ct.b - cs.b) - l
                bound = l + 2 * schedule.eta[k] * abs(ct.s - cs.s)
                n_same += 1
                same_slack = min(same_slack, dist - bound)
                if dist < bound:
                    same.append((k, cs.s, ct.s, dist, bound))
            for k2 in schedule.ks:
                if k2 == k:
                    continue
                s_t = straddle_index(moduli[k2], cs.a)
                for ct in schedule.centers[k2]:
                    dist = abs(ct.b - cs.b) - l
                    bound = l + schedule.eta[k2] * (abs(ct.s - s_t) + 1)
                    n_cross += 1
                    cross_slack = min(cross_slack, dist - bound)
                    if dist < bound:
                        cross.append((k, cs.s, k2, ct.s, dist, bound))
    rng = np.random.default_rng(seed)
    for k in schedule.ks:
        eta = schedule.eta[k]
        for cs in schedule.centers[k]:
            # points outside the closed disc, spread up to a few disc radii away
            rad = eta * (1 + 1e-9 + rng.exponential(4.0, samples_per_disc))
            ang = rng.uniform(0, math.tau, samples_per_disc)
            pts = cs.b + rad * np.exp(1j * ang)
            for b in pts:
                t = straddle_index(moduli[k], abs(b))
                lhs = abs(b - cs.b)
                rhs = eta / 2 * (abs(t - cs.s) + 1)
                n_ext += 1
                ext_slack = min(ext_slack, lhs - rhs)
                if lhs < rhs:
                    ext.append((k, cs.s, complex(b), lhs, rhs))
    return [
        PlacementReport("same-curve distance", n_same, same, same_slack),
        PlacementReport("cross-curve distance", n_cross, cross, cross_slack),
        PlacementReport("exterior point distance", n_ext, ext, ext_slack),
    ]


def far_from_origin_violations(schedule: CenterSchedule) -> list:
    """Centres with |b| < 2 Theta or Theta < eta."""
    bad = []
    for c in schedule.all():
        if not c.a >= 2 * c.l >= 2 * schedule.eta[c.k]:
            bad.append((c.k, c.s, c.a, c.l))
    return bad


def ray_consistency_violations(schedule: CenterSchedule, directions: DirectionTable,
                               tol: float = 1e-9) -> list:
    """Each centre lies on the ray of its direction index, with integer modulus a."""
    bad = []
    for c in schedule.all():
        want = c.a * complex(math.cos(directions.theta(c.v)), math.sin(directions.theta(c.v)))
        if c.v != direction_index(c.l, directions.V) or abs(c.b - want) > tol * c.a \
                or abs(abs(c.b) - c.a) > tol * c.a:
            bad.append((c.k, c.s))
    return bad
