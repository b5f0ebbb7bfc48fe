"""Reproducible experiment runner.

``cfsgauge run config.json`` builds box ensembles from a JSON config,
executes the requested verification tasks, and writes two machine-readable
outputs into the chosen directory:

* ``report.json`` - one entry per assertion with its measured value,
  threshold and pass/fail flag (stable key order; a fixed seed reproduces
  the file byte for byte),
* ``kernels.csv`` - sampled two-point kernel entries relative to the first
  configured point, RFC-4180-style with header
  ``t,x1,x2,x3,row,col,re,im``.

``cfsgauge dim p q f`` prints the manifold dimension and ``cfsgauge modes
L eps m`` the sea mode count for one box.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import closed_chain as cc
from . import krein as kr
from . import manifold as mf
from . import perturbation as pt
from . import randoms as rnd
from . import wave_charts as wc
from .correlation import spin_space
from .dirac_box import (DiracBoxConfig, kernel_braket_sum,
                        kernel_mode_sum, momentum_modes, wave_value_matrix)
from .errors import CfsGaugeError, ConfigError, TaskError
from .krein import KreinSpace, opnorm

KNOWN_TASKS = ("charts", "gauge", "spectral", "perturb", "dim-count")

DEFAULT_TOLERANCES = {
    "chart_roundtrip": 1e-9,
    "gaussian_c2_rel": 1e-8,
    "gaussian_ratio_low": 12.0,
    "gaussian_ratio_high": 20.0,
    "polar_residual": 1e-8,
    "polar_unitary": 1e-9,
    "polar_symmetric": 1e-9,
    "sqrt_series_agreement": 1e-9,
    "orbit_recovery": 1e-9,
    "coincidence": 1e-8,
    "gauge_condition": 1e-9,
    "eigenvalue_match": 1e-9,
    "projector_algebra": 1e-9,
    "unitarity": 1e-9,
    "expansion_coefficient": 1e-6,
    "expansion_ratio_low": 3.0,
    "expansion_ratio_high": 5.0,
    "phase_cancellation": 1e-9,
    "kernel_phase_law": 1e-9,
    "chain_invariance": 1e-9,
    "gauge_value_invariance": 1e-9,
    "mixed_kernel_law": 1e-10,
    "kernel_consistency": 1e-10,
}


@dataclass(frozen=True)
class ExperimentConfig:
    box: DiracBoxConfig
    points: tuple
    seed: int
    tolerances: dict
    tasks: tuple


def _require(mapping, key, kind, field):
    if key not in mapping:
        raise ConfigError("missing required value", field=field)
    value = mapping[key]
    if kind is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if kind is int and isinstance(value, int) and not isinstance(value, bool):
        return value
    raise ConfigError(f"expected {kind.__name__}", field=field)


def parse_config(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("top-level document must be an object", field="")

    box_raw = raw.get("box")
    if not isinstance(box_raw, dict):
        raise ConfigError("missing or invalid section", field="box")
    L = _require(box_raw, "L", float, "box.L")
    eps = _require(box_raw, "eps", float, "box.eps")
    m = _require(box_raw, "m", float, "box.m")
    if L <= 0.0:
        raise ConfigError("must be positive", field="box.L")
    if eps <= 0.0:
        raise ConfigError("must be positive", field="box.eps")
    if m < 0.0:
        raise ConfigError("must be nonnegative", field="box.m")
    box = DiracBoxConfig(L=L, eps=eps, m=m)

    points_raw = raw.get("points", {"nt": 1, "nx": 2, "t_range": [0.0, 0.0]})
    points = _parse_points(points_raw, box)
    if not points:
        raise ConfigError("grid is empty", field="points")

    seed = raw.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ConfigError("expected integer", field="seed")

    tolerances = dict(DEFAULT_TOLERANCES)
    overrides = raw.get("tolerances", {})
    if not isinstance(overrides, dict):
        raise ConfigError("expected object", field="tolerances")
    for key, value in overrides.items():
        if key not in DEFAULT_TOLERANCES:
            raise ConfigError("unknown tolerance", field=f"tolerances.{key}")
        if not isinstance(value, (int, float)) or isinstance(value, bool) or value <= 0:
            raise ConfigError("must be positive", field=f"tolerances.{key}")
        tolerances[key] = float(value)

    tasks = raw.get("tasks", list(KNOWN_TASKS))
    if not isinstance(tasks, list) or not tasks:
        raise ConfigError("expected non-empty list", field="tasks")
    for task in tasks:
        if task not in KNOWN_TASKS:
            raise ConfigError(f"unknown task {task!r}", field="tasks")

    return ExperimentConfig(box=box, points=tuple(points), seed=seed,
                            tolerances=tolerances, tasks=tuple(tasks))


def _parse_points(raw, box: DiracBoxConfig):
    if isinstance(raw, list):
        points = []
        for i, item in enumerate(raw):
            if (not isinstance(item, list) or len(item) != 4
                    or not all(isinstance(c, (int, float)) for c in item)):
                raise ConfigError("expected [t, x1, x2, x3]",
                                  field=f"points[{i}]")
            points.append(box.point(float(item[0]), tuple(map(float, item[1:]))))
        return points
    if isinstance(raw, dict):
        nt = _require(raw, "nt", int, "points.nt")
        nx = _require(raw, "nx", int, "points.nx")
        t_range = raw.get("t_range", [0.0, 0.0])
        if (not isinstance(t_range, list) or len(t_range) != 2
                or not all(isinstance(c, (int, float)) for c in t_range)):
            raise ConfigError("expected [t_min, t_max]", field="points.t_range")
        if nt < 1 or nx < 1:
            raise ConfigError("grid sizes must be >= 1", field="points")
        times = np.linspace(float(t_range[0]), float(t_range[1]), nt)
        axis = np.linspace(-box.L, box.L, nx, endpoint=False)
        points = []
        for t in times:
            for x1 in axis:
                for x2 in axis:
                    for x3 in axis:
                        points.append(box.point(float(t), (float(x1),
                                                           float(x2),
                                                           float(x3))))
        return points
    raise ConfigError("expected list of points or grid spec", field="points")


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise ConfigError(str(exc), field="path") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}", field="path") from exc
    return parse_config(raw)


def _entry(task, name, ref, value, threshold):
    """One report line; entries without a threshold are informational."""
    value = float(value)
    passed = True if threshold is None else bool(value <= threshold)
    return {"task": task, "name": name, "paper_ref": ref,
            "value": value, "threshold": threshold, "passed": passed}


def _interval_excess(value, low, high) -> float:
    """Distance outside [low, high]; zero inside."""
    return float(max(0.0, low - value, value - high))


def _map(fn, items, parallel: bool):
    if parallel:
        with ThreadPoolExecutor() as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


# ---------------------------------------------------------------------------
# tasks


def task_dim_count(config: ExperimentConfig, parallel: bool):
    box = config.box
    modes = momentum_modes(box)
    f = len(modes)
    predicted = 8.0 / (3.0 * np.pi ** 2) * (box.L / box.eps) ** 3
    entries = [
        _entry("dim-count", "f", "sea-mode-count", f, None),
        _entry("dim-count", "mode-density-ratio", "mode-density-asymptotics",
               abs(f / predicted - 1.0), None),
    ]
    for p, q, f_dim in ((1, 1, 4), (2, 2, 8)):
        entries.append(_entry(
            "dim-count", f"manifold-dim-{p}{q}-{f_dim}",
            "manifold-dimension-formula",
            float(mf.manifold_dim(p, q, f_dim)), None))
    return entries


def task_charts(config: ExperimentConfig, parallel: bool):
    tol = config.tolerances
    rng = np.random.default_rng(config.seed)
    entries = []

    worst = 0.0
    for p, q, f in ((1, 1, 6), (2, 2, 8)):
        split = spin_space(rnd.random_correlation(rng, f, p), p).split
        for _ in range(50):
            coords = rnd.random_chart_coords(rng, split, scale=0.05)
            back = mf.chart_inverse(mf.chart_forward(coords), split)
            worst = max(worst, opnorm(back.a - coords.a),
                        opnorm(back.b - coords.b))
    entries.append(_entry("charts", "roundtrip-max-residual",
                          "chart-inverse-roundtrip", worst,
                          tol["chart_roundtrip"]))

    for p, q, f in ((1, 1, 4), (2, 2, 8), (2, 2, 12)):
        x = rnd.random_correlation(rng, f, p)
        split = spin_space(x, p).split
        rank = mf.chart_jacobian_rank(split)
        entries.append(_entry(
            "charts", f"jacobian-rank-{p}{q}-{f}",
            "manifold-dimension-formula",
            abs(rank - mf.manifold_dim(p, q, f)), 0.0))

    x = rnd.random_correlation(rng, 8, 2)
    split = spin_space(x, 2).split
    worst_rel = 0.0
    worst_excess = 0.0
    for _ in range(5):
        dir1, dir2 = rnd.random_direction_pair(rng, split)
        report = mf.gaussian_check(split, dir1[0], dir1[1], dir2[0], dir2[1])
        scale = max(1.0, report.predicted_coefficient)
        worst_rel = max(worst_rel, abs(report.quadratic_coefficient
                                       - report.predicted_coefficient) / scale)
        for ratio in report.residual_ratios:
            worst_excess = max(worst_excess, _interval_excess(
                ratio, tol["gaussian_ratio_low"], tol["gaussian_ratio_high"]))
    entries.append(_entry("charts", "gaussian-c2-relative-error",
                          "gaussian-chart-quadratic-form", worst_rel,
                          tol["gaussian_c2_rel"]))
    entries.append(_entry("charts", "gaussian-residual-ratio-excess",
                          "gaussian-chart-quartic-residual", worst_excess, 0.0))
    return entries


def task_gauge(config: ExperimentConfig, parallel: bool):
    tol = config.tolerances
    rng = np.random.default_rng(config.seed + 1)
    entries = []

    worst_polar = worst_unitary = worst_symmetric = worst_series = 0.0
    for p, q in ((1, 1), (2, 2)):
        dim = p + q
        for _ in range(100):
            space = KreinSpace(gram=rnd.random_gram(rng, p, q),
                               signature=(p, q))
            delta = rnd.random_complex(rng, dim, dim)
            delta *= 0.2 * rng.uniform(0.2, 1.0) / opnorm(delta)
            a = np.eye(dim) + delta
            u, s = kr.polar_decompose(a, space)
            worst_polar = max(worst_polar, opnorm(a - u @ s))
            worst_unitary = max(worst_unitary, opnorm(
                u.conj().T @ space.gram @ u - space.gram))
            worst_symmetric = max(worst_symmetric,
                                  opnorm(s - space.adjoint(s)))
            b = space.adjoint(a) @ a
            res = kr.sqrt_near_identity(b, space)
            series = kr.binomial_sqrt_series(b - np.eye(dim), 0.5)
            worst_series = max(worst_series, opnorm(res.sqrt - series))
    entries.append(_entry("gauge", "polar-residual",
                          "unique-polar-decomposition", worst_polar,
                          tol["polar_residual"]))
    entries.append(_entry("gauge", "polar-unitary-residual",
                          "indefinite-unitarity", worst_unitary,
                          tol["polar_unitary"]))
    entries.append(_entry("gauge", "polar-symmetric-residual",
                          "indefinite-symmetry", worst_symmetric,
                          tol["polar_symmetric"]))
    entries.append(_entry("gauge", "sqrt-series-agreement",
                          "sqrt-series-vs-diagonalization", worst_series,
                          tol["sqrt_series_agreement"]))

    base = spin_space(rnd.random_correlation(rng, 8, 2), 2)
    worst_orbit = 0.0
    for _ in range(25):
        psi = wc.WaveChartPoint(
            on_image=np.eye(4) + 0.05 * rnd.random_complex(rng, 4, 4),
            on_complement=0.05 * rnd.random_complex(rng, 4, 4),
            base=base)
        u0 = rnd.random_krein_unitary(rng, base.krein, scale=0.2)
        rotated = wc.WaveChartPoint(on_image=u0 @ psi.on_image,
                                    on_complement=u0 @ psi.on_complement,
                                    base=base)
        u = wc.gauge_orbit_witness(psi, rotated)
        if u is None:
            raise TaskError("orbit witness unexpectedly missing")
        worst_orbit = max(worst_orbit, opnorm(u - u0))
    entries.append(_entry("gauge", "orbit-recovery",
                          "gauge-orbit-injectivity", worst_orbit,
                          tol["orbit_recovery"]))

    worst_coincide = 0.0
    for f in (8, 12):
        x = rnd.random_correlation(rng, f, 2)
        base_f = spin_space(x, 2)
        samples = [mf.chart_forward(rnd.random_chart_coords(rng, base_f.split,
                                                            scale=0.04))
                   for _ in range(25)]
        report = wc.charts_coincide_check(base_f, samples)
        worst_coincide = max(worst_coincide, report.max_deviation)
    entries.append(_entry("gauge", "wave-chart-coincidence",
                          "symmetric-vs-transported-wave-chart",
                          worst_coincide, tol["coincidence"]))

    points = [mf.chart_forward(rnd.random_chart_coords(rng, base.split,
                                                       scale=0.05))
              for _ in range(10)]
    gauge = wc.build_gauge(base, points)
    entries.append(_entry("gauge", "gauge-condition-residual",
                          "gauge-defining-condition",
                          max(gauge.condition_residuals),
                          tol["gauge_condition"]))
    return entries


def task_spectral(config: ExperimentConfig, parallel: bool):
    tol = config.tolerances
    rng = np.random.default_rng(config.seed + 2)
    entries = []

    worst_eig = 0.0
    for _ in range(100):
        vk = cc.VectorKernel(rng.standard_normal(4), rng.standard_normal(4))
        lam_plus, lam_minus = cc.chain_eigenvalues(vk)
        predicted = np.array([lam_plus, lam_plus, lam_minus, lam_minus])
        numeric = np.linalg.eigvals(cc.chain_from_vectors(vk))
        worst_eig = max(worst_eig, _multiset_distance(predicted, numeric))
    entries.append(_entry("spectral", "eigenvalue-match",
                          "closed-chain-eigenvalues", worst_eig,
                          tol["eigenvalue_match"]))

    worst_proj = worst_unit = 0.0
    worst_dev = 0.0
    eye = np.eye(4)
    for _ in range(50):
        vk = _right_half_plane_sample(rng)
        e_plus, e_minus = cc.spectral_projectors(vk)
        lam_plus, lam_minus = cc.chain_eigenvalues(vk)
        a = cc.chain_from_vectors(vk)
        worst_proj = max(worst_proj,
                         opnorm(e_plus + e_minus - eye),
                         opnorm(e_plus @ e_plus - e_plus),
                         opnorm(e_plus @ e_minus),
                         opnorm(a @ e_plus - lam_plus * e_plus),
                         opnorm(a @ e_minus - lam_minus * e_minus))
        result = cc.dual_route_inv_sqrt(vk)
        worst_unit = max(worst_unit, result.unitarity_residual)
        worst_dev = max(worst_dev, result.deviation)
    entries.append(_entry("spectral", "projector-algebra",
                          "spectral-projector-algebra", worst_proj,
                          tol["projector_algebra"]))
    entries.append(_entry("spectral", "connecting-unitarity",
                          "gauge-factor-unitarity", worst_unit,
                          tol["unitarity"]))
    entries.append(_entry("spectral", "closed-form-vs-spectral-deviation",
                          "closed-form-vs-spectral-route", worst_dev, None))

    real_step = np.concatenate([[0.0], 0.5 * rng.standard_normal(3)])
    imag_step = np.concatenate([rng.standard_normal(1),
                                0.5 * rng.standard_normal(3)])
    report = cc.unitary_expansion(1.0, real_step, imag_step,
                                  tau_list=(1e-2, 5e-3, 2.5e-3))
    entries.append(_entry("spectral", "expansion-coefficient",
                          "gauge-factor-first-order",
                          report.coefficient_deviation,
                          tol["expansion_coefficient"]))
    worst_excess = max(_interval_excess(r, tol["expansion_ratio_low"],
                                        tol["expansion_ratio_high"])
                       for r in report.residual_ratios)
    entries.append(_entry("spectral", "expansion-residual-ratio-excess",
                          "gauge-factor-quadratic-residual", worst_excess,
                          0.0))
    entries.append(_entry("spectral", "expansion-antisymmetry",
                          "gauge-factor-unitarity",
                          report.antisymmetry_residual,
                          tol["expansion_coefficient"]))
    return entries


def _multiset_distance(a, b) -> float:
    best = np.inf
    for perm in itertools.permutations(range(len(b))):
        best = min(best, float(np.max(np.abs(a - b[list(perm)]))))
    return best


def _right_half_plane_sample(rng):
    while True:
        u = np.array([rng.uniform(1.5, 2.5), *(0.4 * rng.standard_normal(3))])
        z = 0.4 * rng.standard_normal(4)
        vk = cc.VectorKernel(real_vec=u, imag_vec=z)
        lam_plus, lam_minus = cc.chain_eigenvalues(vk)
        ok = all(l.real > 0.1 or abs(l.imag) > 0.1
                 for l in (lam_plus, lam_minus))
        if ok and abs(lam_plus - lam_minus) > 1e-3 * (abs(lam_plus)
                                                      + abs(lam_minus)):
            return vk


def task_perturb(config: ExperimentConfig, parallel: bool):
    tol = config.tolerances
    box = config.box
    rng = np.random.default_rng(config.seed + 3)
    entries = []

    x = config.points[0]
    y = (config.points[1] if len(config.points) > 1
         else box.point(x.t + 0.1, tuple(c + 0.2 for c in x.x_vec)))

    pairs = [(x, y), (y, x), (x, box.point(0.0, (0.0, 0.0, 0.0)))]
    worst_kernel = max(opnorm(kernel_mode_sum(box, a, b)
                              - kernel_braket_sum(box, a, b))
                       for a, b in pairs)
    entries.append(_entry("perturb", "kernel-sum-consistency",
                          "kernel-mode-sum-vs-braket", worst_kernel,
                          tol["kernel_consistency"]))

    try:
        waves = wave_value_matrix(box, x)
        alpha = pt.kernel_time_coefficient(pt.diagonal_kernel(waves))
    except CfsGaugeError as exc:
        raise TaskError(
            f"perturb task needs a (nearly) massless ensemble: {exc}"
        ) from exc

    reference = pt.perturbed_symmetric_gauge(waves, waves)
    worst_cancel = 0.0
    for _ in range(50):
        lam = rnd.random_gauge_function(rng, box.L)
        perturbed = pt.apply_local_phase(waves, lam, x)
        value = pt.perturbed_symmetric_gauge(waves, perturbed)
        worst_cancel = max(worst_cancel, opnorm(value - reference))
    entries.append(_entry("perturb", "phase-cancellation",
                          "local-phase-cancellation", worst_cancel,
                          tol["phase_cancellation"]))

    waves_y = wave_value_matrix(box, y)
    p_xy = -(waves @ waves_y.conj().T @ pt.SPINOR_GRAM)
    p_yx = -(waves_y @ waves.conj().T @ pt.SPINOR_GRAM)
    chain = p_xy @ p_yx

    def gauge_at_y(pxy, wy_val):
        normalized = (pxy @ (pt.SPINOR_GRAM @ pxy.conj().T
                             @ pt.SPINOR_GRAM)) / (alpha * alpha)
        inv_sqrt = kr.sqrt_near_identity(
            normalized, pt.SPINOR_KREIN).inv_sqrt / abs(alpha)
        return pt.SPINOR_GRAM @ inv_sqrt @ pxy @ wy_val

    reference_y = gauge_at_y(p_xy, waves_y)
    worst_phase = worst_chain = worst_value = 0.0
    for _ in range(10):
        lam = rnd.random_gauge_function(rng, box.L).shifted_to_vanish_at(x)
        wx_t = pt.apply_local_phase(waves, lam, x)
        wy_t = pt.apply_local_phase(waves_y, lam, y)
        p_xy_t = -(wx_t @ wy_t.conj().T @ pt.SPINOR_GRAM)
        p_yx_t = -(wy_t @ wx_t.conj().T @ pt.SPINOR_GRAM)
        phase = np.exp(1j * (lam(x) - lam(y)))
        worst_phase = max(worst_phase, opnorm(p_xy_t - phase * p_xy))
        worst_chain = max(worst_chain, opnorm(p_xy_t @ p_yx_t - chain))
        worst_value = max(worst_value,
                          opnorm(gauge_at_y(p_xy_t, wy_t) - reference_y))
    entries.append(_entry("perturb", "kernel-phase-law",
                          "kernel-phase-transformation", worst_phase,
                          tol["kernel_phase_law"]))
    entries.append(_entry("perturb", "chain-invariance",
                          "closed-chain-gauge-invariance", worst_chain,
                          tol["chain_invariance"]))
    entries.append(_entry("perturb", "gauge-value-invariance",
                          "distinguished-gauge-invariance", worst_value,
                          tol["gauge_value_invariance"]))

    lam = rnd.random_gauge_function(rng, box.L)
    axis = np.linspace(-box.L, box.L, 5, endpoint=False)
    grid = [box.point(0.1, (float(a), float(b), float(c)))
            for a in axis for b in axis for c in axis]

    def mixed_residual(point):
        w = wave_value_matrix(box, point)
        wt = pt.apply_local_phase(w, lam, point)
        expected = np.exp(-1j * lam(point)) * pt.diagonal_kernel(w)
        return opnorm(pt.mixed_kernel(w, wt) - expected)

    worst_mixed = max(_map(mixed_residual, grid, parallel))
    entries.append(_entry("perturb", "mixed-kernel-phase-law",
                          "mixed-kernel-phase-law", worst_mixed,
                          tol["mixed_kernel_law"]))
    return entries


TASK_RUNNERS = {
    "dim-count": task_dim_count,
    "charts": task_charts,
    "gauge": task_gauge,
    "spectral": task_spectral,
    "perturb": task_perturb,
}


# ---------------------------------------------------------------------------
# outputs


def run_experiment(config: ExperimentConfig, out_dir, parallel: bool = False):
    """Execute the configured tasks; write report.json and kernels.csv.

    Returns the process exit code: 0 when every assertion passed and no task
    failed, 1 otherwise.
    """
    out_path = Path(out_dir)
    out_path.mkdir(parents=True, exist_ok=True)

    entries = []
    task_errors = {}
    for task in config.tasks:
        try:
            entries.extend(TASK_RUNNERS[task](config, parallel))
        except CfsGaugeError as exc:
            task_errors[task] = str(exc)

    all_passed = (not task_errors) and all(e["passed"] for e in entries)
    report = {
        "config": {
            "box": {"L": config.box.L, "eps": config.box.eps,
                    "m": config.box.m},
            "points": [[p.t, *p.x_vec] for p in config.points],
            "seed": config.seed,
            "tasks": list(config.tasks),
            "tolerances": config.tolerances,
        },
        "entries": entries,
        "task_errors": task_errors,
        "all_passed": all_passed,
    }
    report_file = out_path / "report.json"
    with open(report_file, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(report, handle, indent=2, sort_keys=True)
        handle.write("\n")

    _write_kernel_csv(config, out_path / "kernels.csv", parallel)
    return 0 if all_passed else 1


def _write_kernel_csv(config: ExperimentConfig, path, parallel: bool):
    base = config.points[0]

    def kernel_rows(point):
        k = kernel_mode_sum(config.box, base, point)
        rows = []
        for row in range(4):
            for col in range(4):
                value = k[row, col]
                rows.append([point.t, *point.x_vec, row, col,
                             float(value.real), float(value.imag)])
        return rows

    blocks = _map(kernel_rows, list(config.points), parallel)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["t", "x1", "x2", "x3", "row", "col", "re", "im"])
        for block in blocks:
            writer.writerows(block)


# ---------------------------------------------------------------------------
# entry point


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cfsgauge",
        description="Verification experiments for box Dirac ensembles and "
                    "their distinguished gauges.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run the tasks of a JSON config")
    run_p.add_argument("config", help="path to the experiment config")
    run_p.add_argument("--out", default=".", help="output directory")
    run_p.add_argument("--parallel", action="store_true",
                       help="parallelize per-point work inside tasks")
    run_p.add_argument("--seed", type=int, default=None,
                       help="override the config seed")

    dim_p = sub.add_parser("dim", help="print the operator-manifold dimension")
    dim_p.add_argument("p", type=int)
    dim_p.add_argument("q", type=int)
    dim_p.add_argument("f", type=int)

    modes_p = sub.add_parser("modes", help="print the sea mode count")
    modes_p.add_argument("L", type=float)
    modes_p.add_argument("eps", type=float)
    modes_p.add_argument("m", type=float)

    args = parser.parse_args(argv)

    if args.command == "dim":
        try:
            print(mf.manifold_dim(args.p, args.q, args.f))
        except CfsGaugeError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        return 0

    if args.command == "modes":
        try:
            box = DiracBoxConfig(L=args.L, eps=args.eps, m=args.m)
            print(len(momentum_modes(box)))
        except (CfsGaugeError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        return 0

    try:
        config = load_config(args.config)
        if args.seed is not None:
            config = ExperimentConfig(box=config.box, points=config.points,
                                      seed=args.seed,
                                      tolerances=config.tolerances,
                                      tasks=config.tasks)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return run_experiment(config, args.out, parallel=args.parallel)


if __name__ == "__main__":
    sys.exit(main())
