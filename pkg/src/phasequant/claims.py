"""Reproduction harness: each quantitative claim as a named, self-checking run.

A claim evaluates one or more checks, records a table of the numbers behind
them, and reports pass/fail. The CLI writes the tables as CSV and the
summary as JSON; nothing here touches the filesystem.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import coherent, irrep, number_obs, spectral, two_mode
from .coherent import CoherentSpec
from .irrep import IrrepParams, OperatorKind

__all__ = ["Check", "ClaimResult", "CLAIMS", "DEFAULT_SETTINGS", "run_claim", "run_claims"]

DEFAULT_SETTINGS = {
    "scan_lo": 0.2,
    "scan_hi": 0.5,
    "scan_tol": 1e-3,
    "rho_max": 500.0,
    "grid_points": 2000,
    "irrep_dim": 200,
    "two_mode_M": 12,
    "spectrum_dim": 2000,
    "improper_n_max": 200,
}

COHERENT_GRID = [(k, rho, alpha) for k in (0.5, 1.0) for rho in (0.5, 2.0, 10.0)
                 for alpha in (0.0, math.pi / 3)]


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    limit: str
    passed: bool


@dataclass
class ClaimResult:
    index: int
    name: str
    checks: list[Check]
    header: list[str]
    rows: list[list]
    summary: dict = field(default_factory=dict)
    runtime: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "name": self.name,
            "passed": self.passed,
            "runtime_s": self.runtime,
            "checks": [{"name": c.name, "value": c.value, "limit": c.limit, "passed": c.passed}
                       for c in self.checks],
            **self.summary,
        }


def _le(name, value, bound):
    return Check(name, float(value), f"<= {bound:g}", bool(value <= bound))


def _within(name, value, lo, hi):
    return Check(name, float(value), f"in [{lo:g}, {hi:g}]", bool(lo <= value <= hi))


def claim_k1_bound(s):
    root = number_obs.k1_lower_bound()
    radical = number_obs.k1_radical()
    checks = [
        _le("root_minus_radical", abs(root - radical), 1e-12),
        _le("abs_minus_0.162", abs(root - 0.162), 5e-4),
    ]
    rows = [["root_finder", root], ["radical", radical]]
    return checks, ["quantity", "value"], rows, {"value": root}, 1.0


def claim_threshold(s):
    cfg = spectral.GridConfig(rho_max=s["rho_max"], points=int(s["grid_points"]))
    report = spectral.threshold_scan(s["scan_lo"], s["scan_hi"], s["scan_tol"], cfg)
    lo, hi = report.threshold_bracket
    bad = spectral.ratio_supremum(0.25, cfg.rho_max, cfg)
    checks = [
        _within("bracket_lo", lo, 0.30, 0.34),
        _within("bracket_hi", hi, 0.30, 0.34),
        Check("bracket_contains_0.32", 0.32, f"in [{lo:.6g}, {hi:.6g}]", bool(lo <= 0.32 <= hi)),
        Check("sup_ratio_k_0.25", bad.sup, "> 2", bool(bad.sup > 2.0)),
    ]
    rows = [[k, r, a] for k, r, a in zip(report.k_grid, report.sup_ratio, report.per_k_argmax_rho)]
    summary = {"bracket": [lo, hi], "sup_ratio_k_0.25": bad.sup}
    return checks, ["k", "sup_ratio", "argmax_rho"], rows, summary, 120.0


def claim_asymptotics(s):
    rho = 50.0
    checks, rows = [], []
    for k in (0.5, 1.0):
        ratio = coherent.g_ratio(k, rho)
        target = 2.0 * (1.0 - 1.0 / (4.0 * rho))
        dev = abs(ratio - target)
        checks.append(_le(f"deviation_k_{k:g}", dev, 5.0 / rho ** 2))
        rows.append([k, rho, ratio, target, dev])
    return checks, ["k", "rho", "ratio", "two_term_limit", "deviation"], rows, {}, 1.0


def claim_g_cross(s):
    checks, rows = [], []
    worst = 0.0
    for k in (0.5, 1.0, 2.0):
        for rho in (0.5, 2.0, 10.0, 30.0):
            a = coherent.g_function(k, rho, "series")
            b = coherent.g_function(k, rho, "integral")
            rel = abs(a - b) / abs(a)
            worst = max(worst, rel)
            rows.append([k, rho, a, b, rel])
    checks.append(_le("max_rel_diff", worst, 1e-9))
    return checks, ["k", "rho", "series", "integral", "rel_diff"], rows, {"max_rel_diff": worst}, None


def claim_algebra(s):
    dim = int(s["irrep_dim"])
    M = int(s["two_mode_M"])
    rows = []
    cas = com = 0.0
    for k in (0.25, 0.5, 1.0, 1.5):
        p = IrrepParams(k)
        c = irrep.casimir_defect(p, dim)
        m = max(irrep.commutator_defect(p, dim))
        cas, com = max(cas, c), max(com, m)
        rows.append(["irrep", k, dim, c, m])
    tm = max(two_mode.two_mode_commutator_defect(M))
    rows.append(["two_mode", float("nan"), M, float("nan"), tm])
    checks = [
        _le("irrep_casimir_defect", cas, 1e-12),
        _le("irrep_commutator_defect", com, 1e-12),
        _le("two_mode_commutator_defect", tm, 1e-12),
    ]
    return checks, ["realization", "k", "dim", "casimir_defect", "commutator_defect"], rows, {}, None


def claim_coherent_eigen(s):
    rows = []
    worst = 0.0
    for k, rho, alpha in COHERENT_GRID:
        r = coherent.eigen_residual(CoherentSpec.from_polar(k, rho, alpha))
        worst = max(worst, r)
        rows.append([k, rho, alpha, r])
    return ([_le("max_residual", worst, 1e-9)], ["k", "rho", "alpha", "residual"], rows,
            {"max_residual": worst}, None)


def claim_uncertainty(s):
    rows = []
    worst = 0.0
    for k, rho, alpha in COHERENT_GRID:
        spec = CoherentSpec.from_polar(k, rho, alpha)
        closed = coherent.uncertainty_check(spec)
        matrix = coherent.uncertainty_check(coherent.coherent_vector(spec))
        for label, res in (("closed_form", closed), ("matrix", matrix)):
            rel = abs(res.lhs - res.rhs) / res.rhs
            worst = max(worst, rel)
            rows.append([label, k, rho, alpha, res.lhs, res.rhs, rel])
    ns = irrep.number_state(IrrepParams(1.0), 1, 8)
    num = coherent.uncertainty_check(ns)
    rows.append(["number_state_n1", 1.0, float("nan"), float("nan"), num.lhs, num.rhs,
                 abs(num.lhs - num.rhs) / num.rhs])
    checks = [
        _le("max_rel_saturation", worst, 1e-10),
        Check("number_state_strict", num.lhs - num.rhs, "> 0", bool(num.lhs > num.rhs)),
        _le("number_state_lhs_minus_4", abs(num.lhs - 4.0), 1e-12),
        _le("number_state_rhs_minus_1", abs(num.rhs - 1.0), 1e-12),
    ]
    return checks, ["state", "k", "rho", "alpha", "var_product", "quarter_mean_K3_sq", "rel_diff"], rows, {}, None


def claim_completeness(s):
    rows = []
    worst = 0.0
    for k in (0.5, 1.0, 1.5):
        for n in (0, 1, 5):
            res = coherent.completeness_integral(k, n)
            dev = abs(res.value - 1.0)
            worst = max(worst, dev)
            rows.append([k, n, res.value, res.abs_err, res.tail_bound])
    return ([_le("max_abs_deviation", worst, 1e-6)], ["k", "n", "value", "abs_err", "tail_bound"],
            rows, {"max_abs_deviation": worst}, None)


def claim_large_z_stats(s):
    spec = CoherentSpec.from_polar(0.5, 100.0)
    m = coherent.k3_moments(spec)
    dist = coherent.photon_distribution(spec, coherent.required_dim(spec))
    fano = coherent.fano_factor(dist)
    tv = coherent.poisson_tv_distance(dist)
    checks = [
        _within("mean_K3_over_rho", m.mean / 100.0, 0.99, 1.01),
        _within("fano_factor", fano, 0.45, 0.55),
        Check("poisson_tv_distance", tv, "> 0.05", bool(tv > 0.05)),
    ]
    rows = [["mean_K3_over_rho", m.mean / 100.0], ["fano_factor", fano], ["poisson_tv_distance", tv]]
    return checks, ["quantity", "value"], rows, {}, None


def claim_correspondence(s):
    ns = [100, 1000, 10000]
    checks, rows = [], []
    for k in (0.5, 1.0):
        rep = number_obs.correspondence_report(k, ns)
        sm = number_obs.loglog_slope(ns, [r.second_moment_deviation for r in rep])
        cm = number_obs.loglog_slope(ns, [r.commutator_magnitude for r in rep])
        checks.append(_within(f"second_moment_slope_k_{k:g}", sm, -2.2, -1.8))
        checks.append(_within(f"commutator_slope_k_{k:g}", cm, -2.2, -1.8))
        cas = max(abs(r.casimir_residual) for r in rep)
        checks.append(_le(f"casimir_residual_k_{k:g}", cas, 1e-12 * (ns[-1] + k) ** 2))
        if k == 1.0:
            checks.append(Check("k_squares_difference_k_1", max(abs(r.k_squares_difference) for r in rep),
                                "== 0", all(r.k_squares_difference == 0.0 for r in rep)))
        for r in rep:
            rows.append([k, r.n, r.casimir_residual, r.k_squares_difference,
                         r.second_moment_deviation, r.commutator_magnitude])
    header = ["k", "n", "casimir_residual", "k_squares_difference",
              "second_moment_deviation", "commutator_magnitude"]
    return checks, header, rows, {}, None


def claim_spectral_support(s):
    dim = int(s["spectrum_dim"])
    checks, rows = [], []
    for k in (0.5, 1.0, 0.25):
        w = spectral.cos_spectrum(IrrepParams(k), dim)
        rows.append(["spectrum", k, dim, float(w[0]), float(w[-1]), float("nan")])
        if k == 0.25:
            checks.append(Check("max_eig_k_0.25", float(w[-1]), "> 1", bool(w[-1] > 1.0)))
        else:
            checks.append(_le(f"max_abs_eig_k_{k:g}_minus_1", float(np.max(np.abs(w))) - 1.0, 1e-3))
    n_max = int(s["improper_n_max"])
    worst = 0.0
    for k in (0.5, 1.0):
        for mu in (0.0, 0.3, 0.7, 0.95):
            vec = spectral.improper_eigenvector(k, mu, n_max=n_max)
            r = vec.residual()
            worst = max(worst, r)
            rows.append(["improper", k, n_max, mu, float("nan"), r])
    checks.append(_le("improper_residual", worst, 1e-12))
    return checks, ["probe", "k", "dim", "min_or_mu", "max", "residual"], rows, {}, 60.0


def claim_two_mode(s):
    M = int(s["two_mode_M"])
    recs = two_mode.irrep_decomposition(M)
    worst = max(r.max_defect for r in recs)
    dirac = two_mode.dirac_sqrt_check(max(M, 3))
    checks = [
        _le("max_sector_defect", worst, 1e-12),
        _le("dirac_defect", dirac.defect, 1e-12),
        Check("dirac_eigenvectors", dirac.eigen_residual, "< 1e-12", dirac.eigen_ok),
    ]
    rows = [[r.delta, r.branch, r.k, r.multiplicity, r.max_defect] for r in recs]
    return checks, ["delta", "branch", "k", "multiplicity", "max_defect"], rows, {}, None


def claim_ground_state(s):
    checks, rows = [], []
    for k, exact in ((0.5, 4.0 / 9.0), (1.0, 9.0 / 32.0)):
        closed = number_obs.ground_state_moment(k)
        p = IrrepParams(k)
        v = irrep.number_state(p, 0, 4).coeffs
        cv = irrep.build_operator(OperatorKind.COS_PHI, p, 4).matvec(v)
        quad = float(np.vdot(cv, cv).real)
        checks.append(_le(f"closed_form_k_{k:g}", abs(closed - exact), 1e-12))
        checks.append(_le(f"quadratic_form_k_{k:g}", abs(quad - exact), 1e-12))
        rows.append([k, exact, closed, quad])
    return checks, ["k", "exact", "closed_form", "quadratic_form"], rows, {}, None


CLAIMS = {
    "k1_bound": (1, claim_k1_bound),
    "threshold": (2, claim_threshold),
    "asymptotics": (3, claim_asymptotics),
    "g_cross": (4, claim_g_cross),
    "algebra": (5, claim_algebra),
    "coherent_eigen": (6, claim_coherent_eigen),
    "uncertainty": (7, claim_uncertainty),
    "completeness": (8, claim_completeness),
    "large_z_stats": (9, claim_large_z_stats),
    "correspondence": (10, claim_correspondence),
    "spectral_support": (11, claim_spectral_support),
    "two_mode": (12, claim_two_mode),
    "ground_state": (13, claim_ground_state),
}


def run_claim(name: str, settings: dict | None = None) -> ClaimResult:
    """Run one claim by name with ``settings`` layered over the defaults."""
    s = dict(DEFAULT_SETTINGS)
    s.update(settings or {})
    index, body = CLAIMS[name]
    t0 = time.perf_counter()
    checks, header, rows, summary, limit = body(s)
    elapsed = time.perf_counter() - t0
    if limit is not None:
        checks = checks + [_le("runtime_s", elapsed, limit)]
    return ClaimResult(index, name, checks, header, rows, summary, elapsed)


def run_claims(names=None, settings: dict | None = None) -> list[ClaimResult]:
    names = list(CLAIMS) if names is None else list(names)
    unknown = [n for n in names if n not in CLAIMS]
    if unknown:
        raise KeyError(", ".join(unknown))
    return [run_claim(n, settings) for n in names]
