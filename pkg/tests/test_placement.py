import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fhcurves.density import HorizonExhausted, SeparatedFamilyGrid
from fhcurves.placement import (Center, CenterSchedule, DirectionTable, cantor_pair, cantor_unpair,
                                check_disjoint_discs, check_distance_bounds, direction_index,
                                enumerate_centers, far_from_origin_violations, parse_direction,
                                ray_consistency_violations, straddle_index)
from fhcurves import pipeline
from fhcurves.catalogue import catalogue_from_text


@pytest.fixture(scope="module")
def default_schedule(default_cfg):
    cat = catalogue_from_text(default_cfg.catalogue_text())
    _, grid, schedule = pipeline.construct(default_cfg, cat)
    return grid, schedule, default_cfg.direction_table()


def test_cantor_examples():
    assert cantor_unpair(1) == (1, 1)
    assert cantor_unpair(2) == (1, 2)
    assert cantor_unpair(3) == (2, 1)
    assert cantor_unpair(4) == (1, 3)


def test_cantor_roundtrip():
    seen = set()
    for n in range(1, 10**5 + 1):
        i, j = cantor_unpair(n)
        assert cantor_pair(i, j) == n
        seen.add((i, j))
    assert len(seen) == 10**5


def test_cantor_rejects():
    with pytest.raises(ValueError):
        cantor_unpair(0)


def test_direction_index_folds():
    assert [direction_index(l, 3) for l in (4, 5, 6, 9, 10, 12, 27, 28, 30)] == [1, 2, 3, 3, 1, 2, 3, 1, 2]
    assert all(direction_index(l, 1) == 1 for l in range(1, 50))


@pytest.mark.parametrize("text,turns", [("0", 0), ("pi", Fraction(1, 2)), ("2/3pi", Fraction(1, 3)),
                                        ("4/3*pi", Fraction(2, 3)), ("1/2 pi", Fraction(1, 4))])
def test_parse_direction(text, turns):
    d = parse_direction(text)
    assert d.turns == turns
    assert d.value == pytest.approx(float(turns) * 2 * math.pi)


def test_parse_direction_radians():
    assert parse_direction("1.25").value == 1.25


def test_direction_table_validation():
    with pytest.raises(ValueError):
        DirectionTable.parse(["0", "2pi"])
    with pytest.raises(ValueError):
        DirectionTable.parse(["pi", "1/1pi"])
    with pytest.raises(ValueError):
        DirectionTable.parse([])
    assert DirectionTable.parse(["0", "2/3pi", "4/3pi"]).V == 3


def test_schedule_invariants(default_schedule):
    grid, schedule, dirs = default_schedule
    for k in schedule.ks:
        cs = schedule.centers[k]
        assert len(cs) == 8
        assert [c.a for c in cs] == sorted(c.a for c in cs)
        for c in cs:
            assert c.l >= schedule.eta[k]
            assert c.a in set(grid.cell(k, 2 * c.l).tolist())
            assert abs(c.b) == pytest.approx(c.a, rel=1e-15)
            assert c.v == direction_index(c.l, dirs.V)
    assert not far_from_origin_violations(schedule)
    assert not ray_consistency_violations(schedule, dirs)


def test_schedule_is_first_elements(default_schedule):
    grid, schedule, dirs = default_schedule
    eta = schedule.eta[2]
    pool = sorted(int(a) for (k, nu), els in grid.cells.items() if k == 2 and nu // 2 >= eta for a in els)
    assert [c.a for c in schedule.centers[2]] == pool[:8]


def test_enumerate_empty_and_exhausted(default_schedule):
    grid, schedule, dirs = default_schedule
    assert enumerate_centers(grid, 4, 1, dirs, 0) == ()
    with pytest.raises(HorizonExhausted):
        enumerate_centers(grid, 4, 1, dirs, 10**7)


def test_default_disjoint_and_distances(default_schedule):
    _, schedule, _ = default_schedule
    rep = check_disjoint_discs(schedule)
    assert rep.passed and rep.min_slack == 70
    for r in check_distance_bounds(schedule, 200, seed=3):
        assert r.passed, r.name


def test_disjoint_oracle(default_schedule):
    _, schedule, _ = default_schedule
    cs = schedule.all()
    slack = min(abs(a.a - b.a) - 2 * schedule.eta[a.k] - 2 * schedule.eta[b.k]
                for i, a in enumerate(cs) for b in cs[i + 1:])
    assert check_disjoint_discs(schedule).min_slack == slack


def test_same_curve_bound_oracle(default_schedule):
    _, schedule, _ = default_schedule
    worst = math.inf
    for k in schedule.ks:
        for s in schedule.centers[k]:
            for t in schedule.centers[k]:
                if t.s != s.s:
                    worst = min(worst, abs(t.b - s.b) - s.l - (s.l + 2 * schedule.eta[k] * abs(t.s - s.s)))
    rep = check_distance_bounds(schedule, 10, seed=0)[0]
    assert rep.min_slack == pytest.approx(worst)


def _single(k, s, a, l, eta, theta=0.0):
    return Center(k, s, a, l, 1, theta, a * complex(math.cos(theta), math.sin(theta)))


def test_single_centre_vacuous():
    sch = CenterSchedule({1: (_single(1, 1, 100, 4, 4),)}, {1: 4})
    rep = check_disjoint_discs(sch)
    assert rep.passed and rep.checked == 0


def test_perturbed_schedule_detected(default_schedule):
    _, schedule, _ = default_schedule
    c1 = schedule.centers[1][0]
    eta = schedule.eta[1]
    moved = Center(1, 2, c1.a + eta, c1.l, c1.v, c1.theta, c1.b + eta * c1.b / abs(c1.b))
    cs = (c1, moved) + schedule.centers[1][2:]
    bad = CenterSchedule({**schedule.centers, 1: cs}, schedule.eta)
    assert not check_disjoint_discs(bad).passed
    assert not all(r.passed for r in check_distance_bounds(bad, 50, seed=0))


def test_straddle_index():
    mods = [10, 20, 30]
    assert straddle_index(mods, 5) == 1
    assert straddle_index(mods, 10) == 2
    assert straddle_index(mods, 25) == 3
    assert straddle_index(mods, 31) == 4


@given(st.lists(st.integers(1, 1000), min_size=1, max_size=20, unique=True), st.floats(0, 1100))
def test_straddle_index_property(mods, x):
    mods = sorted(mods)
    t = straddle_index(mods, x)
    assert all(m <= x for m in mods[:t - 1])
    assert t == len(mods) + 1 or mods[t - 1] > x


def test_far_from_origin_flags():
    sch = CenterSchedule({1: (_single(1, 1, 7, 4, 4),)}, {1: 4})
    assert far_from_origin_violations(sch) == [(1, 1, 7, 4)]


def test_ray_consistency_flags():
    dirs = DirectionTable.parse(["0", "pi"])
    c = Center(1, 1, 100, 4, 1, 0.0, complex(0, 100))
    sch = CenterSchedule({1: (c,)}, {1: 4})
    assert ray_consistency_violations(sch, dirs) == [(1, 1)]
