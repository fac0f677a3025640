"""Build, verify and report stages driven by a RunConfig."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .assembler import (InconsistentInputs, approximation_check, assemble, bridge_radius,
                        convergence_check, fhc_witness, growth_scan, parse_ladder,
                        pole_inventory_check, rescaled_scan)
from .catalogue import (CurveCatalogue, catalogue_from_text, choose_eta, decay_radius,
                        evaluate_gamma, pole_count, zeta3_upper)
from .config import ConfigError, RunConfig
from .exact import poly_gcd
from .density import (build_grid, check_grid_gaps, density_product_check, density_profile,
                      least_prime_factor, nth_prime, prepare_families, prime_partition)
from .nevanlinna import (CheckRecord, PolynomialCurveEvaluator,
                         characteristic_area, characteristic_fmt, direction_budget_check,
                         fhc_lower_bound_check)
from .placement import (Center, CenterSchedule, check_disjoint_discs, check_distance_bounds,
                        direction_index, enumerate_centers, far_from_origin_violations,
                        ray_consistency_violations)
from .roots import poly_roots
from . import plotting


class MissingArtifact(FileNotFoundError):
    pass


GRID_FILE = "grid.txt"
SCHEDULE_FILE = "schedule.csv"
CACHE_FILE = "catalogue_cache.json"
MANIFEST_FILE = "manifest.json"
REPORT_FILE = "verification_report.txt"
GROWTH_FILE = "growth.csv"
RESCALED_FILE = "growth_rescaled.csv"
FMT_FILE = "fmt.csv"
WITNESS_FILE = "witness.csv"
SAMPLE_HEADER = ["r", "N", "m", "m0", "T_fmt", "T_area", "T_over_r", "certified_flag"]


def _num(x) -> str:
    return repr(float(x)) if isinstance(x, (float, np.floating)) else str(x)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(x) for x in row])
    return buf.getvalue()


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _require(path: Path, stage: str) -> Path:
    if not path.exists():
        raise MissingArtifact(f"missing {path}; run '{stage}' first")
    return path


# -- build ------------------------------------------------------------------

def auto_l_values(etas: dict, V: int) -> list[int]:
    """For each curve, the smallest l >= eta_k whose direction indices cover all V rays."""
    chosen = set()
    for eta in etas.values():
        seen = set()
        l = eta
        while len(seen) < V:
            v = direction_index(l, V)
            if v not in seen:
                seen.add(v)
                chosen.add(l)
            l += 1
    return sorted(chosen)


def l_values(cfg: RunConfig, etas: dict) -> list[int]:
    if cfg.grid_l_values == "auto":
        return auto_l_values(etas, cfg.direction_table().V)
    return sorted(set(int(x) for x in cfg.grid_l_values.replace(",", " ").split()))


def load_curves(cfg: RunConfig, cache: Path | None = None) -> CurveCatalogue:
    cat = catalogue_from_text(cfg.catalogue_text(), cache)
    if cfg.K > len(cat):
        raise InconsistentInputs(f"K={cfg.K} exceeds catalogue size {len(cat)}")
    return cat


def construct(cfg: RunConfig, cat: CurveCatalogue):
    """Grid setup, grid and schedule for the first K curves of the catalogue."""
    etas = {k: cat[k].params.eta for k in range(1, cfg.K + 1)}
    ls = l_values(cfg, etas)
    nus = [2 * l for l in ls]
    setup = prepare_families(nus, cfg.horizon, cfg.block_length_scale, cfg.block_gap_offset,
                             cfg.interval_law, cfg.epsilon_intervals)
    if cfg.j_max != "auto":
        need = max(setup.intervals.slot_of(nu) for nu in nus)
        if need > int(cfg.j_max):
            raise ConfigError(f"j_max={cfg.j_max} is below the largest interval slot {need}")
    cells = [(k, 2 * l) for k in etas for l in ls if l >= etas[k]]
    grid = build_grid(cells, setup, cfg.horizon)
    schedule = CenterSchedule(
        {k: enumerate_centers(grid, etas[k], k, cfg.direction_table(), cfg.S_for(k)) for k in etas},
        etas)
    return setup, grid, schedule


def grid_text(grid) -> str:
    return "# l nu element\n" + "".join(f"{l} {nu} {e}\n" for l, nu, e in grid.table())


def schedule_csv(schedule: CenterSchedule) -> str:
    rows = [(c.k, c.s, c.a, c.l, c.v, c.theta, c.b.real, c.b.imag, schedule.eta[c.k])
            for c in schedule.all()]
    return _csv_text(["k", "s", "a", "l", "v", "theta_radians", "re_b", "im_b", "eta_k"], rows)


def config_digest(cfg: RunConfig) -> str:
    return hashlib.sha256((cfg.to_text() + cfg.catalogue_text()).encode()).hexdigest()


def run_build(cfg: RunConfig) -> Path:
    """Write grid, density profiles, catalogue cache and schedule; skip when already current."""
    out = cfg.out_dir()
    digest = config_digest(cfg)
    manifest = out / MANIFEST_FILE
    if manifest.exists():
        data = json.loads(manifest.read_text())
        if data.get("sha256") == digest and all((out / f).exists() for f in data.get("files", [])):
            return out
    out.mkdir(parents=True, exist_ok=True)
    cache = out / CACHE_FILE
    cat = load_curves(cfg, cache)
    _, grid, schedule = construct(cfg, cat)
    files = [GRID_FILE, SCHEDULE_FILE, CACHE_FILE]
    _write(out / GRID_FILE, grid_text(grid))
    _write(out / SCHEDULE_FILE, schedule_csv(schedule))
    for (k, nu), els in sorted(grid.cells.items()):
        prof = density_profile(els, cfg.density_n0, cfg.horizon)
        name = f"density/A_{k}_{nu}.csv"
        _write(out / name, _csv_text(["N", "count", "ratio"], prof.samples))
        files.append(name)
    _write(manifest, json.dumps({"sha256": digest, "files": files}, indent=1) + "\n")
    return out


# -- artifact readers ---------------------------------------------------------

def read_grid(path: Path, horizon: int):
    from .density import SeparatedFamilyGrid
    cells: dict = {}
    for raw in path.read_text().splitlines():
        if not raw.strip() or raw.startswith("#"):
            continue
        l, nu, e = (int(x) for x in raw.split())
        cells.setdefault((l, nu), []).append(e)
    return SeparatedFamilyGrid({key: np.array(sorted(v), dtype=np.int64) for key, v in cells.items()},
                               horizon)


def read_schedule(path: Path) -> CenterSchedule:
    centers: dict = {}
    eta: dict = {}
    with path.open(newline="") as fh:
        for row in csv.DictReader(fh):
            k = int(row["k"])
            c = Center(k, int(row["s"]), int(row["a"]), int(row["l"]), int(row["v"]),
                       float(row["theta_radians"]), complex(float(row["re_b"]), float(row["im_b"])))
            centers.setdefault(k, []).append(c)
            eta[k] = int(row["eta_k"])
    return CenterSchedule({k: tuple(sorted(v, key=lambda c: c.s)) for k, v in centers.items()}, eta)


# -- verify -----------------------------------------------------------------

@dataclass
class VerificationReport:
    records: list = field(default_factory=list)  # (suite, CheckRecord)
    M: float = math.nan
    M_cert: Fraction | None = None
    rescale_factor: Fraction | None = None
    seed: int = 0
    digest: str = ""

    @property
    def passed(self) -> bool:
        return all(r.passed for _, r in self.records)

    def failed(self) -> list:
        return [(s, r) for s, r in self.records if not r.passed]

    def to_text(self) -> str:
        lines = ["fhcurves verification report", f"config sha256 {self.digest}", f"seed {self.seed}"]
        if self.M_cert is not None:
            lines.append(f"measured slope M {self.M:.9e}; certified M {self.M_cert} ({float(self.M_cert):.9e})")
        if self.rescale_factor is not None:
            lines.append(f"rescale factor c {self.rescale_factor} ({float(self.rescale_factor):.9e})")
        for suite, r in self.records:
            flag = "PASS" if r.passed else "FAIL"
            detail = f" | {r.detail}" if r.detail else ""
            lines.append(f"[{flag}] {suite} | {r.name} | checked={r.checked} | "
                         f"worst_margin={r.worst_margin:.6e}{detail}")
        n_fail = len(self.failed())
        lines.append(f"summary: {len(self.records) - n_fail} passed, {n_fail} failed")
        return "\n".join(lines) + "\n"


def density_suite(cfg: RunConfig, grid, setup) -> list[CheckRecord]:
    recs = []
    gaps = check_grid_gaps(grid, cfg.gap_check_limit)
    recs.append(CheckRecord(f"key gap up to {cfg.gap_check_limit}", gaps.pairs_checked,
                            float(gaps.min_slack) if math.isfinite(gaps.min_slack) else 0.0,
                            not gaps.violations and not gaps.repeated,
                            f"{len(gaps.violations)} violations, {len(gaps.repeated)} repeated elements"))
    infs = {}
    for key, els in sorted(grid.cells.items()):
        infs[key] = density_profile(els, cfg.density_n0, cfg.horizon).inf_over_tail
    worst = min(infs, key=infs.get)
    recs.append(CheckRecord(f"tail-inf density positive on [{cfg.density_n0}, {cfg.horizon}]", len(infs),
                            infs[worst], infs[worst] > 0, f"smallest at A({worst[0]},{worst[1]})"))
    b2 = prime_partition(2, cfg.horizon).size / cfg.horizon
    recs.append(CheckRecord("B_2 density 1/6", 1, 1e-3 - abs(b2 - 1 / 6), abs(b2 - 1 / 6) <= 1e-3,
                            f"measured {b2:.6f}"))
    L = 10
    parts = [prime_partition(l, cfg.horizon) for l in range(1, L + 1)]
    allp = np.concatenate(parts)
    lpf = least_prime_factor(cfg.horizon)
    rest = int(np.count_nonzero(lpf[2:] > nth_prime(L)))
    ok = np.unique(allp).size == allp.size and allp.size + rest == cfg.horizon
    recs.append(CheckRecord(f"prime partition of [1, {cfg.horizon}] for l <= {L}", cfg.horizon,
                            0.0 if ok else -1.0, ok))
    worst_p, n_p, p_ok = math.inf, 0, True
    for (k, nu), els in sorted(grid.cells.items()):
        A = setup.families[nu].elements
        idx = prime_partition(k, int(A.size))
        chk = density_product_check(A, idx, els, cfg.density_n0, cfg.horizon)
        if not math.isnan(chk.dens_composed):
            worst_p = min(worst_p, chk.dens_composed - chk.dens_A * chk.dens_indices + 1e-3)
            n_p += 1
        p_ok &= chk.passed
    recs.append(CheckRecord("density of A(k,nu) vs dens A(nu) * dens B_k", n_p,
                            worst_p if n_p else 0.0, p_ok))
    return recs


def catalogue_suite(cfg: RunConfig, cat: CurveCatalogue) -> list[CheckRecord]:
    rng = np.random.default_rng(cfg.seed)
    recs = []
    worst = math.inf
    n = 0
    z3 = zeta3_upper()
    eta_ok = True
    for k in range(1, cfg.K + 1):
        e = cat[k]
        R = float(e.params.R)
        rad = R * np.exp(rng.uniform(0, math.log(10), cfg.decay_samples))
        rad[0] = R
        z = rad * np.exp(1j * rng.uniform(0, math.tau, cfg.decay_samples))
        for j in range(1, e.curve.m + 1):
            g = np.abs(evaluate_gamma(e.curve, j, z))
            worst = min(worst, float(np.min((np.abs(z) ** -3.0) * (1 + 1e-12) - g)))
            n += z.size
        eta_ok &= (decay_radius(e.curve) == e.params.R and pole_count(e.curve) == e.params.n
                   and choose_eta(e.params.R, e.params.n, k, z3) == e.params.eta
                   and e.params.eta >= max(2 * e.params.R, 3**k, e.params.n))
    recs.append(CheckRecord("decay |gamma_j| <= |z|^-3 beyond R_k", n, worst, worst >= 0,
                            f"seed {cfg.seed}"))
    mismatch = 0
    for k in range(1, cfg.K + 1):
        c = cat[k].curve
        found = sum(r.multiplicity for p in c.components[1:] if not p.is_zero()
                    for r in poly_roots(c.p0 // poly_gcd(c.p0, p)))
        mismatch += abs(found - pole_count(c))
    recs.append(CheckRecord("pole count matches root finder", cfg.K, -float(mismatch), mismatch == 0))
    recs.append(CheckRecord("catalogue parameters (R, n, eta) recomputed", cfg.K, 0.0 if eta_ok else -1.0, eta_ok))
    return recs


def placement_suite(cfg: RunConfig, schedule: CenterSchedule, grid) -> list[CheckRecord]:
    dirs = cfg.direction_table()
    recs = []
    for rep in [check_disjoint_discs(schedule)] + check_distance_bounds(schedule, cfg.placement_samples, cfg.seed):
        slack = float(rep.min_slack) if math.isfinite(rep.min_slack) else 0.0
        recs.append(CheckRecord(rep.name, rep.checked, slack, rep.passed, f"{len(rep.violations)} violations"))
    far = far_from_origin_violations(schedule)
    recs.append(CheckRecord("|b| >= 2 Theta >= 2 eta", len(schedule.all()), _count_margin(far), not far))
    ray = ray_consistency_violations(schedule, dirs)
    recs.append(CheckRecord("centres on their rays", len(schedule.all()), _count_margin(ray), not ray))
    bad = 0
    for k in schedule.ks:
        want = enumerate_centers(grid, schedule.eta[k], k, dirs, len(schedule.centers[k]))
        for c, w in zip(schedule.centers[k], want):
            if (c.k, c.s, c.a, c.l, c.v) != (w.k, w.s, w.a, w.l, w.v) or abs(c.b - w.b) > 1e-9 * w.a:
                bad += 1
        bad += abs(len(want) - len(schedule.centers[k]))
    recs.append(CheckRecord("schedule matches grid enumeration", len(schedule.all()), _count_margin(range(bad)), bad == 0))
    return recs


def fmt_suite(cfg: RunConfig, cat: CurveCatalogue, rows: list) -> list[CheckRecord]:
    worst = math.inf
    n = 0
    certified = True
    evs = [(f"curve {k}", PolynomialCurveEvaluator(cat[k].curve)) for k in range(1, cfg.K + 1)]
    for label, ev in evs:
        for r in cfg.area_radii:
            s = characteristic_fmt(ev, r, nodes=cfg.proximity_nodes, cap=cfg.proximity_cap)
            area, ok = characteristic_area(ev, s.r, angular_cap=cfg.area_angular_cap)
            tol = max(1e-3, 1e-3 * abs(s.T_fmt))
            worst = min(worst, tol - abs(s.T_fmt - area))
            certified &= ok and s.certified
            n += 1
            rows.append((label, s.r, s.N, s.m, s.m0, s.T_fmt, area, s.T_over_r, int(ok and s.certified)))
    recs = [CheckRecord("T_fmt = T_area on catalogue curves", n, worst, worst >= 0),
            CheckRecord("FMT quadrature certified", n, 0.0, certified)]
    line = PolynomialCurveEvaluator([[1], [0, 1]])
    a = characteristic_area(line, 1.0)[0]
    f = characteristic_fmt(line, 1.0).T_fmt
    target = 0.5 * math.log(2)
    err = max(abs(a - target), abs(f - target))
    rows.append(("line [1:z]", 1.0, 0.0, f, 0.0, f, a, f, 1))
    recs.append(CheckRecord("anchor T_[1:z](1) = log(2)/2", 2, 1e-4 - err, err <= 1e-4,
                            f"fmt {f:.7f} area {a:.7f}"))
    return recs


def _count_margin(violations) -> float:
    return -float(len(violations)) if len(violations) else 0.0


def _sample_rows(samples):
    return [(s.r, s.N, s.m, s.m0, s.T_fmt, s.T_area, s.T_over_r, int(s.certified)) for s in samples]


def _geometric(lo: float, hi: float, ratio: float) -> list[float]:
    out, r = [], lo
    while r <= hi:
        out.append(r)
        r *= ratio
    return out


def obstruction_suite(cfg: RunConfig, curve, discs_approx, schedule, M_cert, witness_rows,
                      profiles) -> list[CheckRecord]:
    dirs = cfg.direction_table()
    recs = []
    witnesses = []
    for k in schedule.ks:
        for v in range(1, dirs.V + 1):
            w = fhc_witness(curve, discs_approx, k, v, schedule.eta[k], schedule, dirs.theta(v))
            witnesses.append(w)
    sup_worst = min((bound - sup for w in witnesses for _, sup, bound in w.sups), default=0.0)
    n_sup = sum(len(w.sups) for w in witnesses)
    recs.append(CheckRecord("witness sup bound at every witness disc", n_sup, sup_worst, sup_worst >= 0))
    live = [w for w in witnesses if w.stats is not None]
    a_min = min((w.stats.alpha for w in live), default=0.0)
    recs.append(CheckRecord("witness tail-inf density positive", len(live), a_min, bool(live) and a_min > 0,
                            f"{len(witnesses) - len(live)} (k, v) pairs without witnesses"))
    zeros = curve.zeros()
    moduli = sorted({abs(a) for a, _ in zeros})
    disc_list = curve.discs()
    T_cache: dict = {}
    for w in live:
        st = w.stats
        lo, hi = st.N0 + 1, st.N_max
        t_vals = _geometric(lo, hi, 2 ** 0.125) + [x - 1e-3 for x in moduli if lo <= x - 1e-3 <= hi]
        r_vals = _geometric(2 * lo, max(hi, 2 * lo), 2 ** 0.25)
        T_lower = {}
        for r in r_vals:
            r_down = bridge_radius(curve, r, disc_list, upward=False)
            if r_down not in T_cache:
                T_cache[r_down] = characteristic_fmt(curve, r_down, nodes=cfg.proximity_nodes,
                                                     cap=cfg.proximity_cap).T_fmt
            T_lower[r] = T_cache[r_down]
        for rec in fhc_lower_bound_check(st, curve, t_vals, r_vals, T_lower):
            rec.name = rec.name.replace("lower bound", f"lower bound v={w.v}")
            recs.append(rec)
    for w in witnesses:
        st = w.stats
        witness_rows.append((w.k, w.v, w.l, len(w.times), st.N0 if st else 0, st.N_max if st else 0,
                             st.alpha if st else 0.0))
        if st is not None:
            profiles[(w.k, w.v)] = st.profile.samples
    alphas = []
    for v in range(1, dirs.V + 1):
        alphas.append(max((w.stats.alpha for w in live if w.v == v), default=0.0))
    rows = direction_budget_check(alphas, float(M_cert), range(1, cfg.budget_n_max + 1))
    margin = min(r.budget - r.count for r in rows)
    recs.append(CheckRecord(f"direction budget n = 1..{cfg.budget_n_max}", len(rows), margin,
                            all(r.ok for r in rows), f"epsilon_slope = certified M {float(M_cert):.6g}"))
    return recs


def _guard(report: VerificationReport, suite: str, fn, *args):
    """Run one suite; an exception becomes a failed record instead of stopping the run."""
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            recs = fn(*args)
    except Exception as exc:  # aggregated, never short-circuited
        recs = [CheckRecord("suite error", 0, -math.inf, False, f"{type(exc).__name__}: {exc}")]
    for r in recs:
        report.records.append((suite, r))
    return recs


def run_verify(cfg: RunConfig) -> VerificationReport:
    out = cfg.out_dir()
    grid_path = _require(out / GRID_FILE, "build")
    sched_path = _require(out / SCHEDULE_FILE, "build")
    _require(out / CACHE_FILE, "build")
    report = VerificationReport(seed=cfg.seed, digest=config_digest(cfg))
    cat = load_curves(cfg, out / CACHE_FILE)
    grid = read_grid(grid_path, cfg.horizon)
    schedule = read_schedule(sched_path)
    ladder = parse_ladder(cfg.ladder)
    state: dict = {}

    def density():
        setup, built, _ = construct(cfg, cat)
        same = sorted(built.cells) == sorted(grid.cells) and all(
            np.array_equal(built.cells[key], grid.cells[key]) for key in built.cells)
        recs = [CheckRecord("grid artifact matches construction", len(built.cells), 0.0 if same else -1.0, same)]
        return recs + density_suite(cfg, grid, setup)

    def curve_checks():
        curve = assemble(cat, schedule, cfg.K, cfg.S_map())
        state["curve"] = curve
        recs = convergence_check(curve, cfg.convergence_samples, cfg.seed)
        approx, discs = approximation_check(curve, cfg.boundary_nodes)
        state["discs"] = discs
        return recs + approx + [pole_inventory_check(curve)]

    def growth():
        curve = state["curve"]
        res = growth_scan(curve, ladder, curve.discs())
        report.M, report.M_cert = res.M, res.M_cert
        _write(out / GROWTH_FILE, _csv_text(SAMPLE_HEADER, _sample_rows(res.samples)))
        return res.checks

    def rescale():
        res = rescaled_scan(state["curve"], report.M_cert, cfg.epsilon_target, ladder)
        report.rescale_factor = res.factor
        _write(out / RESCALED_FILE, _csv_text(SAMPLE_HEADER, _sample_rows(res.samples)))
        return res.checks

    fmt_rows: list = []
    witness_rows: list = []
    profiles: dict = {}

    def obstruction():
        return obstruction_suite(cfg, state["curve"], state["discs"], schedule, report.M_cert,
                                 witness_rows, profiles)

    _guard(report, "density", density)
    _guard(report, "catalogue", catalogue_suite, cfg, cat)
    _guard(report, "placement", placement_suite, cfg, schedule, grid)
    _guard(report, "fmt", fmt_suite, cfg, cat, fmt_rows)
    _guard(report, "curve", curve_checks)
    if "curve" in state:
        _guard(report, "growth", growth)
        if report.M_cert is not None:
            _guard(report, "rescale", rescale)
            _guard(report, "obstruction", obstruction)
    for suite in ("growth", "rescale", "obstruction"):
        if not any(s == suite for s, _ in report.records):
            report.records.append((suite, CheckRecord("not run", 0, -math.inf, False,
                                                      "an earlier suite it depends on failed")))
    _write(out / FMT_FILE, _csv_text(["curve"] + SAMPLE_HEADER, fmt_rows))
    _write(out / WITNESS_FILE, _csv_text(["k", "v", "l", "count", "N0", "N_max", "alpha"], witness_rows))
    for (k, v), samples in sorted(profiles.items()):
        _write(out / f"density/witness_{k}_{v}.csv", _csv_text(["N", "count", "ratio"], samples))
    _write(out / REPORT_FILE, report.to_text())
    return report


# -- report -----------------------------------------------------------------

def read_samples(path: Path) -> list[dict]:
    with path.open(newline="") as fh:
        return [{k: (v if k == "curve" else float(v)) for k, v in row.items()} for row in csv.DictReader(fh)]


def run_report(cfg: RunConfig) -> list[Path]:
    out = cfg.out_dir()
    growth = read_samples(_require(out / GROWTH_FILE, "verify"))
    rescaled = read_samples(_require(out / RESCALED_FILE, "verify"))
    _require(out / WITNESS_FILE, "verify")
    figs = out / "figures"
    written = []

    def series(rows, key):
        return [r["r"] for r in rows], [r[key] for r in rows]

    written.append(plotting.line_chart(
        figs / "characteristic.svg",
        [("h", *series(growth, "T_fmt")), ("rescaled h", *series(rescaled, "T_fmt"))],
        "r", "T(r)", "Characteristic function", logx=True, logy=True))
    eps = cfg.epsilon_target
    written.append(plotting.line_chart(
        figs / "growth_ratio.svg",
        [("h", *series(growth, "T_over_r")), ("rescaled h", *series(rescaled, "T_over_r")),
         (f"epsilon = {eps:g}", [r["r"] for r in rescaled], [eps] * len(rescaled))],
        "r", "T/r", "Growth ratio", logx=True, logy=True))
    dens = []
    for p in sorted((out / "density").glob("A_*.csv")):
        rows = read_samples(p)
        dens.append((p.stem, [r["N"] for r in rows], [r["ratio"] for r in rows]))
    written.append(plotting.line_chart(figs / "density_profiles.svg", dens, "N", "|A ∩ [1,N]| / N",
                                       "Density profiles of the grid cells", logx=True, logy=True))
    wit = []
    for p in sorted((out / "density").glob("witness_*.csv")):
        rows = read_samples(p)
        wit.append((p.stem, [r["N"] for r in rows], [r["ratio"] for r in rows]))
    written.append(plotting.line_chart(figs / "witness_density.svg", wit, "N", "|W ∩ [1,N]| / N",
                                       "Witness densities", logx=True, logy=True))
    return written
