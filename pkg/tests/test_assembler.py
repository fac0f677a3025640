import math
from fractions import Fraction

import numpy as np
import pytest

from fhcurves import pipeline
from fhcurves.assembler import (InconsistentInputs, approximation_check, assemble, bridge_radius,
                                convergence_check, fhc_witness, growth_scan, parse_ladder,
                                pole_inventory_check, rescale, rescaled_scan)
from fhcurves.catalogue import build_catalogue
from fhcurves.nevanlinna import PolynomialCurveEvaluator, characteristic_fmt
from fhcurves.placement import CenterSchedule, DirectionTable, enumerate_centers

from conftest import P


@pytest.fixture(scope="module")
def instance(default_cfg):
    cat = pipeline.load_curves(default_cfg)
    _, grid, schedule = pipeline.construct(default_cfg, cat)
    curve = assemble(cat, schedule, default_cfg.K, default_cfg.S_map())
    return cat, schedule, curve


def _single(S=1):
    cat = build_catalogue([(P("0", "0", "0", "0", "1"), P("1"))])
    eta = cat[1].params.eta
    from fhcurves.placement import Center
    cs = tuple(Center(1, s, 100 * s * eta, 2 * eta, 1, 0.0, complex(100 * s * eta)) for s in range(1, S + 1))
    return cat, CenterSchedule({1: cs}, {1: eta})


def test_single_term_is_translated_curve():
    cat, sch = _single()
    h = assemble(cat, sch, 1, 1)
    b = sch.centers[1][0].b
    z = np.array([0.3 + 2j, -5.0, b + 3 + 1j])
    assert np.allclose(h.ratios(z)[0], 1 / (z - b) ** 4, rtol=1e-12)
    assert h.zeros() == [(b, 4)]


def test_empty_sum_rejected():
    cat, sch = _single()
    with pytest.raises(InconsistentInputs):
        assemble(cat, sch, 0, 1)
    with pytest.raises(InconsistentInputs):
        assemble(cat, sch, 2, 1)


def test_eta_mismatch_and_short_schedule():
    cat, sch = _single()
    bad = CenterSchedule(sch.centers, {1: sch.eta[1] + 1})
    with pytest.raises(InconsistentInputs):
        assemble(cat, bad, 1, 1)
    with pytest.raises(InconsistentInputs):
        assemble(cat, sch, 1, 2)


def test_default_convergence(instance, default_cfg):
    *_, curve = instance
    recs = convergence_check(curve, default_cfg.convergence_samples, default_cfg.seed)
    assert len(recs) == default_cfg.K + 1
    assert all(r.passed for r in recs)
    assert all(r.checked == default_cfg.convergence_samples for r in recs)


def test_default_approximation(instance):
    *_, curve = instance
    recs, discs = approximation_check(curve, 64)
    assert all(r.passed for r in recs)
    assert len(discs) == sum(curve.S.values())


def test_default_pole_inventory(instance, default_cfg):
    cat, _, curve = instance
    rec = pole_inventory_check(curve)
    assert rec.passed
    assert sum(mu for _, mu in curve.zeros()) == sum(
        cat[k].params.n * default_cfg.S_for(k) for k in range(1, default_cfg.K + 1))


def test_witness_times_are_centre_moduli(instance):
    cat, schedule, curve = instance
    _, discs = approximation_check(curve, 32)
    dirs = DirectionTable.parse(("0", "2/3pi", "4/3pi"))
    w = fhc_witness(curve, discs, 1, 2, cat[1].params.eta, schedule, dirs.theta(2))
    want = [c.a for c in schedule.centers[1] if c.v == 2]
    assert list(w.times) == want
    assert w.stats.N0 == want[0]
    assert all(sup <= bound for _, sup, bound in w.sups)


def test_parse_ladder():
    assert parse_ladder("1:8:2") == [1.0, 2.0, 4.0, 8.0]
    assert parse_ladder("1/16:1/4:2") == [0.0625, 0.125, 0.25]
    for bad in ("1:8", "0:8:2", "4:2:2", "1:8:1", "a:b:c"):
        with pytest.raises(ValueError):
            parse_ladder(bad)


def test_bridge_radius():
    discs = [(1, 1, 100 + 0j, 4)]
    assert bridge_radius(None, 98.0, discs) == 104
    assert bridge_radius(None, 98.0, discs, upward=False) == 96
    assert bridge_radius(None, 50.0, discs) == 50.0
    assert bridge_radius(None, 104.0, discs) == 104.0


def test_rescale_factor_exact():
    ev = PolynomialCurveEvaluator([[1], [0, 1]])
    _, c = rescale(ev, Fraction(3, 4), Fraction(1, 2))
    assert c == Fraction(2, 3)
    _, c = rescale(ev, Fraction(25920705, 2**30), Fraction(1, 2))
    assert c == Fraction(2**29, 25920705)
    with pytest.raises(ValueError):
        rescale(ev, 0, 0.5)


def test_growth_scan_line():
    ev = PolynomialCurveEvaluator([[1], [0, 1]])
    ladder = parse_ladder("1/4:64:2")
    g = growth_scan(ev, ladder)
    ratios = [0.5 * math.log1p(r * r) / r for r in ladder]
    assert g.M == pytest.approx(max(ratios), rel=1e-6)
    assert float(g.M_cert) >= 2 * g.M
    by_name = {r.name: r.passed for r in g.checks}
    # the line has unbounded ratio, so only the proximity bound may fail
    assert not by_name.pop("growth: proximity m <= log sqrt(m+1)")
    assert all(by_name.values())


def test_rescaled_scan_meets_target():
    ev = PolynomialCurveEvaluator([[1], [0, 1]])
    ladder = parse_ladder("1/4:64:2")
    g = growth_scan(ev, ladder)
    res = rescaled_scan(ev, g.M_cert, 0.5, ladder)
    assert all(r.passed for r in res.checks)
    for s in res.samples:
        assert s.T_fmt <= 0.5 * s.r_requested
        assert s.T_fmt == pytest.approx(characteristic_fmt(ev, float(res.factor) * s.r).T_fmt, abs=1e-9)
