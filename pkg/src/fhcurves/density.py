"""Disjoint separated families of positive lower density.

Blocks N_k = [c_k, d_k] are cut into sub-intervals positioned by an interval
family in [0, 1]; the slot assigned to separation parameter nu yields A'(nu),
from which every 2nu-th element is kept.  A sieve by least prime factor then
splits each A(nu) into the grid cells A(l, nu).

Every object is a finite prefix: constructors take a horizon and the checks
are exact up to it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

MAX_INDEX = 2**62


class CapacityError(OverflowError):
    pass


class HorizonExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class BlockFamily:
    blocks: tuple[tuple[int, int], ...]

    @property
    def count(self) -> int:
        return len(self.blocks)

    def lengths(self) -> list[int]:
        return [d - c for c, d in self.blocks]

    def gaps(self) -> list[int]:
        return [self.blocks[i + 1][0] - self.blocks[i][1] for i in range(self.count - 1)]

    def truncate(self, horizon: int) -> "BlockFamily":
        """Blocks that start at or below ``horizon``."""
        return BlockFamily(tuple(b for b in self.blocks if b[0] <= horizon))

    def density_bound(self) -> Fraction:
        """Exact inf over N >= c_2 of |(union of blocks) cap [1,N]| / N within the realized range."""
        best = Fraction(1)
        covered = 0
        for i, (c, d) in enumerate(self.blocks):
            if i > 0:
                best = min(best, Fraction(covered, c - 1))
            covered += d - c + 1
        return best


def build_blocks(count: int, length_scale: int = 1, gap_offset: int = 0) -> BlockFamily:
    """c_1 = 1, d_k - c_k = length_scale * 2^k, c_(k+1) - d_k = gap_offset + k."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if length_scale < 1 or gap_offset < 0:
        raise ValueError("length_scale >= 1 and gap_offset >= 0 required")
    out = []
    c = 1
    for k in range(1, count + 1):
        d = c + length_scale * 2**k
        if d > MAX_INDEX:
            raise CapacityError(f"block {k} ends beyond {MAX_INDEX}")
        out.append((c, d))
        c = d + gap_offset + k
    return BlockFamily(tuple(out))


def blocks_to_horizon(horizon: int, length_scale: int = 1, gap_offset: int = 0) -> BlockFamily:
    """All blocks starting at or below ``horizon``."""
    count = 1
    while True:
        fam = build_blocks(count + 1, length_scale, gap_offset)
        if fam.blocks[-1][0] > horizon:
            return build_blocks(count, length_scale, gap_offset)
        count += 1


@dataclass(frozen=True)
class IntervalFamily:
    """Sub-intervals of [0, 1]; slot j (1-based) serves separation parameter nu_values[j-1].

    Slot j is the middle half of [P_(j-1)/C, P_j/C], where P are the partial sums of the
    weights and C the total.  P is held in floating point but every endpoint is the
    exact rational value of those floats, so disjointness is exact.
    """

    prefix: np.ndarray = field(repr=False)
    nu_values: tuple[int, ...]
    epsilon: float | None = None

    def __len__(self):
        return len(self.nu_values)

    @property
    def C(self) -> float:
        return float(self.prefix[-1])

    def interval(self, slot: int) -> tuple[Fraction, Fraction]:
        if not 1 <= slot <= len(self):
            raise IndexError(f"interval slot {slot} out of range")
        C = Fraction(float(self.prefix[-1]))
        lo = Fraction(float(self.prefix[slot - 1])) / C
        hi = Fraction(float(self.prefix[slot])) / C
        mid, quarter = (lo + hi) / 2, (hi - lo) / 4
        return mid - quarter, mid + quarter

    def length(self, slot: int) -> Fraction:
        a, b = self.interval(slot)
        return b - a

    def lengths(self) -> np.ndarray:
        return np.diff(self.prefix) / (2 * self.prefix[-1])

    def slot_of(self, nu: int) -> int:
        try:
            return self.nu_values.index(nu) + 1
        except ValueError:
            raise KeyError(f"no interval slot serves nu={nu}") from None


def build_intervals(epsilon: float, count: int) -> IntervalFamily:
    """Slot nu has length nu^-(1+epsilon) / (2C), C the partial sum up to ``count``."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if count < 1:
        raise ValueError("count must be >= 1")
    nu = np.arange(1, count + 1, dtype=np.float64)
    w = nu ** -(1.0 + epsilon)
    prefix = np.concatenate([[0.0], np.cumsum(w)])
    return IntervalFamily(prefix, tuple(range(1, count + 1)), epsilon)


def intervals_from_weights(weights: Sequence[float], nu_values: Sequence[int]) -> IntervalFamily:
    if len(weights) != len(nu_values):
        raise ValueError("one weight per nu")
    if any(not w > 0 for w in weights):
        raise ValueError("weights must be positive")
    if len(set(nu_values)) != len(nu_values):
        raise ValueError("nu values must be distinct")
    prefix = np.concatenate([[0.0], np.cumsum(np.asarray(weights, dtype=np.float64))])
    return IntervalFamily(prefix, tuple(int(v) for v in nu_values))


def stride_intervals(nu_values: Iterable[int]) -> IntervalFamily:
    """Weights proportional to nu, larger nu first."""
    nus = sorted(set(nu_values), reverse=True)
    return intervals_from_weights([float(v) for v in nus], nus)


def interval_distance(I: tuple[Fraction, Fraction], J: tuple[Fraction, Fraction]) -> Fraction:
    return max(Fraction(0), max(I[0], J[0]) - min(I[1], J[1]))


@dataclass(frozen=True)
class ThresholdTable:
    K: dict  # slot -> 1-based block index


def compute_thresholds(blocks: BlockFamily, intervals: IntervalFamily, j_max: int) -> ThresholdTable:
    """Smallest K_j with both separation conditions at every realized k >= K_j.

    For slot j serving nu_j: the gap before block k is at least 2 nu_j, and the
    scaled distance from I_j to every slot with smaller nu is at least 2 nu_j.
    The first block has no predecessor, so only the second condition applies there.
    """
    K = {}
    nu_cap = max(intervals.nu_values[:j_max], default=0)
    relevant = {s: intervals.interval(s) for s in range(1, len(intervals) + 1)
                if s <= j_max or intervals.nu_values[s - 1] < nu_cap}
    lengths = blocks.lengths()
    gaps = [None] + blocks.gaps()
    for j in range(1, j_max + 1):
        if j > len(intervals):
            raise HorizonExhausted(f"no interval slot {j}")
        nu = intervals.nu_values[j - 1]
        Ij = relevant[j]
        dmin = min((interval_distance(I, Ij) for s, I in relevant.items()
                    if intervals.nu_values[s - 1] < nu), default=None)
        ok = []
        for k in range(blocks.count):
            c1 = gaps[k] is None or gaps[k] >= 2 * nu
            c2 = dmin is None or dmin * lengths[k] >= 2 * nu
            ok.append(c1 and c2)
        Kj = None
        for start in range(blocks.count - 1, -1, -1):
            if not ok[start]:
                break
            Kj = start + 1
        if Kj is None:
            raise HorizonExhausted(f"no threshold for slot {j} (nu={nu}) within {blocks.count} blocks")
        K[j] = Kj
    return ThresholdTable(K)


@dataclass(frozen=True)
class SeparatedFamily:
    nu: int
    elements: np.ndarray
    aprime: np.ndarray = field(repr=False)  # A'(nu) cap [nu, horizon]
    stride: int = 0


def scaled_block(block: tuple[int, int], interval: tuple[Fraction, Fraction]) -> range:
    """Integers in c + (d - c) * I, rounding inward."""
    c, d = block
    lo = math.ceil(c + (d - c) * interval[0])
    hi = math.floor(c + (d - c) * interval[1])
    return range(lo, hi + 1)


def build_separated_family(nu: int, blocks: BlockFamily, intervals: IntervalFamily,
                           thresholds: ThresholdTable, horizon: int,
                           slot: int | None = None) -> SeparatedFamily:
    if nu < 1:
        raise ValueError("nu must be >= 1")
    slot = intervals.slot_of(nu) if slot is None else slot
    if slot not in thresholds.K:
        raise KeyError(f"no threshold for slot {slot}")
    I = intervals.interval(slot)
    parts = []
    for k in range(thresholds.K[slot], blocks.count + 1):
        r = scaled_block(blocks.blocks[k - 1], I)
        lo, hi = max(r.start, nu), min(r.stop - 1, horizon)
        if lo > horizon:
            break
        if lo <= hi:
            parts.append(np.arange(lo, hi + 1, dtype=np.int64))
    aprime = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
    elements = aprime[2 * nu - 1::2 * nu]
    if elements.size == 0:
        warnings.warn(f"A({nu}) has no element up to horizon {horizon}")
    return SeparatedFamily(nu, elements, aprime, 2 * nu)


@lru_cache(maxsize=4)
def least_prime_factor(horizon: int) -> np.ndarray:
    """lpf[n] for 0 <= n <= horizon (lpf[0] = 0, lpf[1] = 1)."""
    lpf = np.zeros(horizon + 1, dtype=np.int64)
    if horizon >= 1:
        lpf[1] = 1
    for p in range(2, horizon + 1):
        if lpf[p]:
            continue
        block = lpf[p::p]
        block[block == 0] = p
        if p * p > horizon:
            rest = lpf[p + 1:]
            mask = rest == 0
            rest[mask] = np.arange(p + 1, horizon + 1)[mask]
            break
    return lpf


@lru_cache(maxsize=None)
def nth_prime(l: int) -> int:
    if l < 1:
        raise ValueError("l must be >= 1")
    bound = max(15, int(l * (math.log(l + 1) + math.log(math.log(l + 2)) + 3)))
    lpf = least_prime_factor(bound)
    primes = np.flatnonzero((lpf == np.arange(bound + 1)) & (np.arange(bound + 1) >= 2))
    return int(primes[l - 1])


def prime_partition(l: int, horizon: int) -> np.ndarray:
    """B_1 = {1} and the evens; B_l = integers whose least prime factor is the l-th prime."""
    if l < 1:
        raise ValueError("l must be >= 1")
    if horizon < 1:
        return np.empty(0, dtype=np.int64)
    lpf = least_prime_factor(horizon)
    p = nth_prime(l)
    hits = np.flatnonzero(lpf == p)
    if l == 1:
        hits = np.concatenate([[1], hits])
    return hits.astype(np.int64)


def decompose(elements: np.ndarray, l: int) -> np.ndarray:
    """Elements of an increasing sequence sitting at positions in B_l."""
    elements = np.asarray(elements, dtype=np.int64)
    pos = prime_partition(l, len(elements))
    return elements[pos - 1]


@dataclass(frozen=True)
class SeparatedFamilyGrid:
    cells: dict  # (l, nu) -> np.ndarray
    horizon: int

    def cell(self, l: int, nu: int) -> np.ndarray:
        return self.cells[(l, nu)]

    def table(self) -> list[tuple[int, int, int]]:
        """(l, nu, element) rows sorted by element."""
        rows = [(l, nu, int(e)) for (l, nu), els in self.cells.items() for e in els]
        rows.sort(key=lambda r: (r[2], r[0], r[1]))
        return rows


@dataclass(frozen=True)
class GridSetup:
    blocks: BlockFamily
    intervals: IntervalFamily
    thresholds: ThresholdTable
    families: dict  # nu -> SeparatedFamily


def prepare_families(nu_values: Iterable[int], horizon: int, length_scale: int = 1,
                     gap_offset: int = 0, interval_law: str = "stride",
                     epsilon: float = 1.0) -> GridSetup:
    """Blocks, intervals and thresholds for the requested nu values, then A(nu) for each.

    ``interval_law`` is "stride" (weights proportional to nu) or "power" (slot nu has
    weight nu^-(1+epsilon), slots indexed by nu itself).
    """
    nus = sorted(set(nu_values))
    blocks = blocks_to_horizon(horizon, length_scale, gap_offset)
    if interval_law == "stride":
        intervals = stride_intervals(nus)
    elif interval_law == "power":
        intervals = build_intervals(epsilon, max(nus))
    else:
        raise ValueError(f"unknown interval law {interval_law!r}")
    slots = [intervals.slot_of(nu) for nu in nus]
    thresholds = compute_thresholds(blocks, intervals, max(slots))
    fams = {nu: build_separated_family(nu, blocks, intervals, thresholds, horizon, slot)
            for nu, slot in zip(nus, slots)}
    return GridSetup(blocks, intervals, thresholds, fams)


def build_grid(cells: Iterable[tuple[int, int]], setup: GridSetup, horizon: int) -> SeparatedFamilyGrid:
    """A(l, nu) = decompose(A(nu), l) for each requested cell."""
    out = {}
    for l, nu in cells:
        els = decompose(setup.families[nu].elements, l)
        out[(l, nu)] = els[els <= horizon]
        if out[(l, nu)].size == 0:
            warnings.warn(f"cell A({l},{nu}) is empty up to horizon {horizon}")
    return SeparatedFamilyGrid(out, horizon)


@dataclass(frozen=True)
class GapReport:
    pairs_checked: int
    violations: list  # (n1, nu1, n2, nu2)
    min_slack: float  # min over pairs of |n1 - n2| - (nu1 + nu2)
    repeated: list


def check_grid_gaps(grid: SeparatedFamilyGrid, limit: int) -> GapReport:
    """Brute-force check of |n1 - n2| >= nu1 + nu2 and n >= nu over all pairs up to ``limit``."""
    vals, nus = [], []
    for (l, nu), els in grid.cells.items():
        sel = els[els <= limit]
        vals.append(sel)
        nus.append(np.full(sel.size, nu, dtype=np.int64))
    n = np.concatenate(vals) if vals else np.empty(0, dtype=np.int64)
    v = np.concatenate(nus) if nus else np.empty(0, dtype=np.int64)
    order = np.argsort(n, kind="stable")
    n, v = n[order], v[order]
    uniq, counts = np.unique(n, return_counts=True)
    repeated = uniq[counts > 1].tolist()
    violations = [(int(a), int(b), int(a), int(b)) for a, b in zip(n, v) if a < b]
    min_slack = math.inf
    pairs = 0
    chunk = 2048
    for i0 in range(0, n.size, chunk):
        a, va = n[i0:i0 + chunk, None], v[i0:i0 + chunk, None]
        b, vb = n[None, :], v[None, :]
        slack = np.abs(a - b) - (va + vb)
        idx = np.arange(i0, i0 + a.shape[0])[:, None] < np.arange(n.size)[None, :]
        pairs += int(idx.sum())
        if idx.any():
            min_slack = min(min_slack, float(slack[idx].min()))
        bad = np.argwhere(idx & (slack < 0))
        for r, c in bad:
            violations.append((int(n[i0 + r]), int(v[i0 + r]), int(n[c]), int(v[c])))
    return GapReport(pairs, violations, min_slack, repeated)


@dataclass(frozen=True)
class DensityProfile:
    samples: list  # (N, count, ratio)
    inf_over_tail: float
    inf_at: tuple[int, int] | None  # (N, count) attaining the tail inf
    N0: int
    N_max: int


def _ladder(N0: int, N_max: int, per_decade: int = 20) -> list[int]:
    if N0 >= N_max:
        return [N_max]
    pts = np.unique(np.round(np.logspace(math.log10(N0), math.log10(N_max),
                                         max(2, int(per_decade * math.log10(N_max / N0)) + 1))).astype(np.int64))
    pts = pts[(pts >= N0) & (pts <= N_max)].tolist()
    return sorted(set(pts) | {N0, N_max})


def density_profile(elements, N0: int, N_max: int, per_decade: int = 20) -> DensityProfile:
    """Prefix ratios on a log ladder plus the exact inf of count/N over integer N in [N0, N_max].

    count/N only drops while count is constant, so the inf is attained at N0,
    N_max, or just before an element.
    """
    if not 1 <= N0 < N_max:
        raise ValueError("need 1 <= N0 < N_max")
    els = np.asarray(elements, dtype=np.int64)
    samples = []
    for N in _ladder(N0, N_max, per_decade):
        c = int(np.searchsorted(els, N, side="right"))
        samples.append((N, c, c / N))
    inside = els[(els > N0) & (els <= N_max)]
    cand = np.unique(np.concatenate([[N0, N_max], inside - 1]))
    counts = np.searchsorted(els, cand, side="right")
    # exact comparison of count/N via cross multiplication over candidates
    best_c, best_N = int(counts[0]), int(cand[0])
    for c, N in zip(counts.tolist(), cand.tolist()):
        if c * best_N < best_c * N:
            best_c, best_N = c, N
    return DensityProfile(samples, best_c / best_N, (best_N, best_c), N0, N_max)


@dataclass(frozen=True)
class ProductCheck:
    passed: bool
    dens_A: float
    dens_indices: float
    dens_composed: float
    warning: str | None = None


def density_product_check(A, indices, composed, N0: int, N_max: int,
                          tol: float = 1e-3) -> ProductCheck:
    """dens(composed) >= dens(A) * dens(indices) - tol on realized tails.

    The index density is measured on positions reached by A between N0 and N_max.
    """
    A = np.asarray(A, dtype=np.int64)
    A = A[A <= N_max]
    indices = np.asarray(indices, dtype=np.int64)
    composed = np.asarray(composed, dtype=np.int64)
    i0 = int(np.searchsorted(A, N0, side="right"))
    i1 = int(A.size)
    if composed.size == 0 or i0 < 1 or i1 <= i0:
        msg = f"horizon too small for a density comparison (|A|={A.size}, |composed|={composed.size})"
        warnings.warn(msg)
        return ProductCheck(True, math.nan, math.nan, math.nan, msg)
    dA = density_profile(A, N0, N_max).inf_over_tail
    dI = density_profile(indices, i0, i1).inf_over_tail if i1 > i0 else 1.0
    dC = density_profile(composed, N0, N_max).inf_over_tail
    return ProductCheck(dC >= dA * dI - tol, dA, dI, dC)
