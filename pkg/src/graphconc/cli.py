"""Reproducible experiment runner.

A single TOML config file drives one named experiment; the output is a CSV
whose bytes depend only on the config and the build.  Numeric cells use
12-significant-digit rendering, booleans render as 1/0, and unavailable
cells are empty.  The last row(s) start with "#summary" and carry
name=value aggregates padded to the header width.

Exit codes: 0 success, 2 configuration error, 3 I/O error.  A bound being
exceeded empirically is data, never a nonzero exit.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import numpy as np

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

from . import concentration as conc
from . import graphon as gn
from . import graphs
from . import perturbation as pert
from . import quasirandom as qr
from . import rng as _rng
from .errors import ConfigError, GraphConcError, IoError
from .linalg import eigen_range_projector, spectral_norm

EXPERIMENTS = (
    "deviation",
    "freedman-tail",
    "percolation-gap",
    "graphon-spectrum",
    "quasirandom",
    "perturbation-suite",
)

_COLUMN_DOCS = """\
CSV columns per experiment (booleans are 1/0; empty cell = not computed):

deviation:
  trial, observed, bound, within
    observed = operator-norm distance between the sampled and typical
    matrix; bound = closed-form deviation bound at the configured delta;
    within = observed <= bound.  Summary: failure_fraction.

freedman-tail:
  threshold, empirical_prob, bound_value, mc_slack, within
    empirical_prob = fraction of trials whose largest final eigenvalue
    reached the threshold; bound_value = one-sided tail bound at the
    generator's exact variance proxy; mc_slack = 3-sigma binomial slack;
    within = empirical_prob <= bound_value + mc_slack.
    Summary: max_excess (most positive empirical_prob - bound - slack).

percolation-gap:
  trial, gap_original, gap_sample, abs_diff, bound, within
    Spectral gaps of the base graph and the percolated sample; bound =
    Laplacian deviation bound at the configured delta.  Summary:
    within_fraction, matched_rate (sqrt(ln n/(p d)) with unit constant),
    reference_rate (same plus the second-order reference term).

graphon-spectrum:
  trial, alpha, gamma, count_in_window, max_error, matrix_dev,
  operator_dev, transfer_forward, transfer_backward, projector_dev,
  projector_bound
    One row per (trial, reference eigenvalue).  max_error = worst
    |eigenvalue - alpha| inside the window of halfwidth gamma around
    alpha; matrix_dev / operator_dev per the library's estimation report.
    Summary: median_top_error.

quasirandom:
  trial, edges, labeled_c4, lambda_max, second_absmax, p1_dev,
  q3_edges_ok, q3_top_ok, q3_bulk_ok, prop42_ok, q4_disc
    Statistics of one sampled homogeneous graph per trial; q4_disc only
    when include_q4 is set and n is within the enumeration cap.
    Summary: median_p1_dev.

perturbation-suite:
  trial, check, ok, stat1, stat2
    check = multiplicity (stat1/stat2 = counted multiplicities, forward
    direction), projector (stat1 = measured projector distance, stat2 =
    closed-form bound), or contour (stat1 = contour-vs-direct projector
    error at quad_points, stat2 = error at twice as many points).
    Summary: ok_fraction per check kind.
"""


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    x = float(value)
    if not math.isfinite(x):
        return ""
    return f"{x:.12g}"


@dataclass
class CsvReport:
    header: list
    rows: list
    summary: dict

    def render(self) -> str:
        width = len(self.header)
        lines = [",".join(self.header)]
        for row in self.rows:
            if len(row) != width:
                raise ValueError("row width does not match header")
            lines.append(",".join(_fmt(v) for v in row))
        items = [f"{k}={_fmt(v)}" for k, v in self.summary.items()]
        for start in range(0, len(items), width - 1):
            cells = ["#summary"] + items[start : start + width - 1]
            cells += [""] * (width - len(cells))
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def plot_data(self, experiment: str) -> str:
        lines = ["experiment,row,column,value"]
        for k, row in enumerate(self.rows):
            for name, v in zip(self.header, row):
                lines.append(f"{experiment},{k},{name},{_fmt(v)}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# config schema


def _check_keys(table: dict, allowed: set, context: str, diags: list) -> None:
    for key in table:
        if key not in allowed:
            diags.append(f"error: unknown key '{context}{key}'")


def _require(table: dict, key: str, types, context: str, diags: list):
    if key not in table:
        diags.append(f"error: missing key '{context}{key}'")
        return None
    value = table[key]
    if isinstance(value, bool) and bool not in (types if isinstance(types, tuple) else (types,)):
        diags.append(f"error: key '{context}{key}' has wrong type")
        return None
    if not isinstance(value, types):
        diags.append(f"error: key '{context}{key}' has wrong type")
        return None
    return value


def load_config(path) -> dict:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read config {path}: {exc}") from exc
    try:
        return tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"config {path} is not valid TOML: {exc}") from exc


def validate(config: dict) -> list:
    """Diagnostics for a config dict; empty means run() will accept it.

    Entries are strings prefixed "error:" or "warning:"; only errors block
    execution.
    """
    diags: list = []
    experiment = config.get("experiment")
    if experiment not in EXPERIMENTS:
        diags.append(
            f"error: key 'experiment' must be one of {', '.join(EXPERIMENTS)}; got {experiment!r}"
        )
        return diags

    top_allowed = {"experiment", "master_seed", "trials", "output_path"}
    table_name = {
        "deviation": "model",
        "freedman-tail": "generator",
        "percolation-gap": "graph",
        "graphon-spectrum": "kernel",
        "quasirandom": "graph",
        "perturbation-suite": "suite",
    }[experiment]
    top_allowed.add(table_name)
    if experiment in ("deviation", "percolation-gap"):
        top_allowed.add("delta")
    _check_keys(config, top_allowed, "", diags)

    seed = _require(config, "master_seed", int, "", diags)
    if seed is not None and not 0 <= seed < 2**64:
        diags.append("error: key 'master_seed' must fit in 64 bits")
    trials = _require(config, "trials", int, "", diags)
    if trials is not None and trials < 1:
        diags.append("error: key 'trials' must be a positive integer")
    out = config.get("output_path")
    if out is not None and not isinstance(out, str):
        diags.append("error: key 'output_path' must be a string")

    if experiment in ("deviation", "percolation-gap"):
        delta = _require(config, "delta", (int, float), "", diags)
        if delta is not None and not 0.0 < float(delta) <= 0.5:
            diags.append(
                f"error: key 'delta' must lie in (0, 1/2] (deviation-bound validity range); got {delta}"
            )

    table = config.get(table_name)
    if not isinstance(table, dict):
        diags.append(f"error: missing table '[{table_name}]'")
        return diags
    ctx = table_name + "."

    if experiment == "deviation":
        _check_keys(table, {"kind", "n", "p", "which", "graph_file"}, ctx, diags)
        kind = _require(table, "kind", str, ctx, diags)
        which = _require(table, "which", str, ctx, diags)
        if which is not None and which not in ("adjacency", "laplacian"):
            diags.append(f"error: key '{ctx}which' must be 'adjacency' or 'laplacian'")
        p = _require(table, "p", (int, float), ctx, diags)
        if p is not None and not 0.0 < float(p) < 1.0:
            diags.append(f"error: key '{ctx}p' must lie in (0, 1)")
        if kind == "erdos-renyi":
            n = _require(table, "n", int, ctx, diags)
            if n is not None and n < 2:
                diags.append(f"error: key '{ctx}n' must be >= 2")
            if "graph_file" in table:
                diags.append(f"error: key '{ctx}graph_file' only applies to kind='percolation'")
        elif kind == "percolation":
            if "graph_file" in table:
                _require(table, "graph_file", str, ctx, diags)
            else:
                n = _require(table, "n", int, ctx, diags)
                if n is not None and n < 2:
                    diags.append(f"error: key '{ctx}n' must be >= 2")
        elif kind is not None:
            diags.append(f"error: key '{ctx}kind' must be 'erdos-renyi' or 'percolation'")

    elif experiment == "freedman-tail":
        _check_keys(
            table,
            {"kind", "d", "scale", "n_steps", "thresholds", "vector_seed", "i", "j", "p"},
            ctx,
            diags,
        )
        kind = _require(table, "kind", str, ctx, diags)
        if kind is not None and kind not in (
            "diagonal-rademacher",
            "rank-one-sign",
            "bernoulli-edge",
        ):
            diags.append(
                f"error: key '{ctx}kind' must be diagonal-rademacher, rank-one-sign or bernoulli-edge"
            )
        d = _require(table, "d", int, ctx, diags)
        if d is not None and d < 1:
            diags.append(f"error: key '{ctx}d' must be >= 1")
        n_steps = _require(table, "n_steps", int, ctx, diags)
        if n_steps is not None and n_steps < 1:
            diags.append(f"error: key '{ctx}n_steps' must be >= 1")
        thresholds = _require(table, "thresholds", list, ctx, diags)
        if thresholds is not None and (
            not thresholds or not all(isinstance(t, (int, float)) for t in thresholds)
        ):
            diags.append(f"error: key '{ctx}thresholds' must be a nonempty numeric list")
        if "scale" in table:
            scale = _require(table, "scale", (int, float), ctx, diags)
            if scale is not None and float(scale) <= 0:
                diags.append(f"error: key '{ctx}scale' must be > 0")
        if kind == "bernoulli-edge":
            for key in ("i", "j"):
                idx = _require(table, key, int, ctx, diags)
                if idx is not None and d is not None and not 0 <= idx < d:
                    diags.append(f"error: key '{ctx}{key}' must lie in [0, d)")
            pp = _require(table, "p", (int, float), ctx, diags)
            if pp is not None and not 0.0 < float(pp) < 1.0:
                diags.append(f"error: key '{ctx}p' must lie in (0, 1)")

    elif experiment == "percolation-gap":
        _check_keys(table, {"kind", "n", "p", "graph_file"}, ctx, diags)
        kind = _require(table, "kind", str, ctx, diags)
        if kind == "complete":
            n = _require(table, "n", int, ctx, diags)
            if n is not None and n < 3:
                diags.append(f"error: key '{ctx}n' must be >= 3")
        elif kind == "file":
            _require(table, "graph_file", str, ctx, diags)
        elif kind is not None:
            diags.append(f"error: key '{ctx}kind' must be 'complete' or 'file'")
        p = _require(table, "p", (int, float), ctx, diags)
        if p is not None and not 0.0 < float(p) < 1.0:
            diags.append(f"error: key '{ctx}p' must lie in (0, 1)")

    elif experiment == "graphon-spectrum":
        _check_keys(
            table,
            {"kind", "n", "p", "coef", "exponent", "c", "values", "checks", "K", "L"},
            ctx,
            diags,
        )
        kind = _require(table, "kind", str, ctx, diags)
        n = _require(table, "n", int, ctx, diags)
        if n is not None and n < 2:
            diags.append(f"error: key '{ctx}n' must be >= 2")
        p = _require(table, "p", (int, float), ctx, diags)
        if p is not None and not 0.0 < float(p) <= 1.0:
            diags.append(f"error: key '{ctx}p' must lie in (0, 1]")
        kernel = None
        if kind == "constant":
            c = _require(table, "c", (int, float), ctx, diags)
            if c is not None and float(c) >= 0:
                kernel = gn.ConstantKernel(float(c))
        elif kind == "rank-one":
            coef = _require(table, "coef", (int, float), ctx, diags)
            exponent = table.get("exponent", 1.0)
            if coef is not None and float(coef) >= 0 and float(exponent) >= 0:
                kernel = gn.RankOneKernel(float(coef), float(exponent))
        elif kind == "block":
            values = _require(table, "values", list, ctx, diags)
            if values is not None:
                try:
                    kernel = gn.BlockKernel(np.array(values, dtype=float))
                except (GraphConcError, ValueError) as exc:
                    diags.append(f"error: key '{ctx}values' is not a valid block matrix: {exc}")
        elif kind is not None:
            diags.append(f"error: key '{ctx}kind' must be constant, rank-one or block")
        if "checks" in table:
            checks = table["checks"]
            valid = {"matrix", "operator", "transfer", "projector"}
            if not isinstance(checks, list) or not set(checks) <= valid:
                diags.append(f"error: key '{ctx}checks' must be a sublist of {sorted(valid)}")
        if kernel is not None and p is not None and kernel.sup_bound > 0:
            if float(p) > 1.0 / kernel.sup_bound:
                diags.append(
                    f"warning: {ctx}p = {p} exceeds 1/K = {1.0 / kernel.sup_bound:.6g}; "
                    "edge probabilities clip and the estimation hypothesis p <= 1/K fails"
                )

    elif experiment == "quasirandom":
        _check_keys(table, {"n", "p", "slack", "include_q4"}, ctx, diags)
        n = _require(table, "n", int, ctx, diags)
        if n is not None and n < 2:
            diags.append(f"error: key '{ctx}n' must be >= 2")
        p = _require(table, "p", (int, float), ctx, diags)
        if p is not None and not 0.0 < float(p) < 1.0:
            diags.append(f"error: key '{ctx}p' must lie in (0, 1)")
        slack = _require(table, "slack", (int, float), ctx, diags)
        if slack is not None and float(slack) < 0:
            diags.append(f"error: key '{ctx}slack' must be >= 0")
        include_q4 = table.get("include_q4", False)
        if not isinstance(include_q4, bool):
            diags.append(f"error: key '{ctx}include_q4' must be a boolean")
        elif include_q4 and n is not None and n > qr.Q4_MAX_N:
            diags.append(
                f"error: key '{ctx}include_q4' needs n <= {qr.Q4_MAX_N} (subset enumeration cap)"
            )

    elif experiment == "perturbation-suite":
        _check_keys(table, {"max_order", "quad_points", "contour_trials"}, ctx, diags)
        for key, minimum in (("max_order", 2), ("quad_points", 16), ("contour_trials", 0)):
            if key in table:
                value = _require(table, key, int, ctx, diags)
                if value is not None and value < minimum:
                    diags.append(f"error: key '{ctx}{key}' must be >= {minimum}")

    return diags


# ---------------------------------------------------------------------------
# experiment bodies


def _base_graph(table: dict) -> graphs.Graph:
    if table.get("kind") == "file" or "graph_file" in table:
        return graphs.read_graph(table["graph_file"])
    return graphs.complete_graph(int(table["n"]))


def _run_deviation(config: dict) -> CsvReport:
    table = config["model"]
    p = float(table["p"])
    if table["kind"] == "erdos-renyi":
        model = graphs.model_erdos_renyi(int(table["n"]), p)
    else:
        model = graphs.model_percolation(_base_graph(table), p)
    reports = graphs.deviation_experiment(
        model,
        float(config["delta"]),
        int(config["trials"]),
        int(config["master_seed"]),
        table["which"],
    )
    rows = [
        (k, r.observed, r.bound, r.within_bound) for k, r in enumerate(reports)
    ]
    return CsvReport(
        header=["trial", "observed", "bound", "within"],
        rows=rows,
        summary={"failure_fraction": graphs.failure_fraction(reports)},
    )


def _make_generator(table: dict):
    kind = table["kind"]
    d = int(table["d"])
    scale = float(table.get("scale", 1.0))
    if kind == "diagonal-rademacher":
        return conc.DiagonalRademacher(d, scale)
    if kind == "rank-one-sign":
        return conc.RankOneSign(d, int(table.get("vector_seed", 0)), scale)
    return conc.BernoulliCenteredEdge(d, int(table["i"]), int(table["j"]), float(table["p"]), scale)


def _run_freedman_tail(config: dict) -> CsvReport:
    table = config["generator"]
    gen = _make_generator(table)
    rows_raw = conc.empirical_tail(
        gen,
        int(table["n_steps"]),
        int(config["trials"]),
        [float(t) for t in table["thresholds"]],
        int(config["master_seed"]),
    )
    rows = []
    max_excess = -math.inf
    for r in rows_raw:
        slack = conc.monte_carlo_slack(r.freedman_value, int(config["trials"]))
        excess = r.empirical_prob - r.freedman_value - slack
        max_excess = max(max_excess, excess)
        rows.append((r.threshold, r.empirical_prob, r.freedman_value, slack, excess <= 0))
    return CsvReport(
        header=["threshold", "empirical_prob", "bound_value", "mc_slack", "within"],
        rows=rows,
        summary={"max_excess": max_excess},
    )


def _run_percolation_gap(config: dict) -> CsvReport:
    table = config["graph"]
    g = _base_graph(table)
    p = float(table["p"])
    delta = float(config["delta"])
    model = graphs.model_percolation(g, p)
    d_g = float(g.degrees().min())
    bound = graphs.laplacian_bound(p * d_g, g.n, delta)
    gap_orig = graphs.spectral_gap(g)
    seed = int(config["master_seed"])
    rows = []
    within = 0
    for k in range(int(config["trials"])):
        sample = graphs.sample_graph(model, _rng.mix_seed(seed, k))
        gap_sample = graphs.spectral_gap(sample)
        diff = abs(gap_orig - gap_sample)
        ok = diff <= bound
        within += ok
        rows.append((k, gap_orig, gap_sample, diff, bound, ok))
    matched = graphs.chung_horn_reference(g.n, p, d_g, (1.0, 0.0))
    reference = graphs.chung_horn_reference(g.n, p, d_g, (1.0, 1.0))
    return CsvReport(
        header=["trial", "gap_original", "gap_sample", "abs_diff", "bound", "within"],
        rows=rows,
        summary={
            "within_fraction": within / int(config["trials"]),
            "matched_rate": matched,
            "reference_rate": reference,
        },
    )


def _make_kernel(table: dict):
    kind = table["kind"]
    if kind == "constant":
        return gn.ConstantKernel(float(table["c"]))
    if kind == "rank-one":
        return gn.RankOneKernel(float(table["coef"]), float(table.get("exponent", 1.0)))
    return gn.BlockKernel(np.array(table["values"], dtype=float))


def _run_graphon_spectrum(config: dict) -> CsvReport:
    table = config["kernel"]
    kernel = _make_kernel(table)
    checks = tuple(table.get("checks", ["matrix", "operator", "transfer", "projector"]))
    trials = gn.estimation_report(
        kernel,
        int(table["n"]),
        float(table["p"]),
        int(config["trials"]),
        int(config["master_seed"]),
        checks=checks,
    )
    rows = []
    top_errors = []
    for k, trial in enumerate(trials):
        if trial.checks:
            top_errors.append(trial.checks[0].max_error)
            for chk in trial.checks:
                rows.append(
                    (
                        k,
                        chk.alpha,
                        chk.gamma,
                        chk.count_in_window,
                        chk.max_error if math.isfinite(chk.max_error) else None,
                        trial.matrix_dev,
                        trial.operator_dev,
                        chk.transfer_forward,
                        chk.transfer_backward,
                        chk.projector_dev,
                        chk.projector_bound,
                    )
                )
        else:
            rows.append(
                (k, None, None, None, None, trial.matrix_dev, trial.operator_dev, None, None, None, None)
            )
    finite = [e for e in top_errors if math.isfinite(e)]
    median_top = float(np.median(finite)) if finite else math.inf
    return CsvReport(
        header=[
            "trial",
            "alpha",
            "gamma",
            "count_in_window",
            "max_error",
            "matrix_dev",
            "operator_dev",
            "transfer_forward",
            "transfer_backward",
            "projector_dev",
            "projector_bound",
        ],
        rows=rows,
        summary={"median_top_error": median_top},
    )


def _run_quasirandom(config: dict) -> CsvReport:
    table = config["graph"]
    n, p = int(table["n"]), float(table["p"])
    slack = float(table["slack"])
    include_q4 = bool(table.get("include_q4", False))
    model = graphs.model_erdos_renyi(n, p)
    seed = int(config["master_seed"])
    rows = []
    p1_devs = []
    for k in range(int(config["trials"])):
        g = graphs.sample_graph(model, _rng.mix_seed(seed, k))
        report = qr.quasirandom_report(g, p, include_q4=include_q4)
        q3 = qr.q3_check(g, p, slack)
        p1_devs.append(report.p1_dev)
        rows.append(
            (
                k,
                report.edge_count,
                report.labeled_c4,
                report.lambda_max,
                report.second_eigen_absmax,
                report.p1_dev,
                q3.edges_ok,
                q3.top_eigen_ok,
                q3.bulk_ok,
                qr.prop42_forward_check(g, p, slack),
                report.q4_disc,
            )
        )
    return CsvReport(
        header=[
            "trial",
            "edges",
            "labeled_c4",
            "lambda_max",
            "second_absmax",
            "p1_dev",
            "q3_edges_ok",
            "q3_top_ok",
            "q3_bulk_ok",
            "prop42_ok",
            "q4_disc",
        ],
        rows=rows,
        summary={"median_p1_dev": float(np.median(p1_devs))},
    )


def _run_perturbation_suite(config: dict) -> CsvReport:
    table = config.get("suite", {})
    max_order = int(table.get("max_order", 40))
    quad_points = int(table.get("quad_points", 2000))
    contour_trials = int(table.get("contour_trials", 100))
    trials = int(config["trials"])
    seed = int(config["master_seed"])
    rows = []
    ok_counts = {"multiplicity": 0, "projector": 0, "contour": 0}
    totals = {"multiplicity": trials, "projector": trials, "contour": contour_trials}
    for k in range(trials):
        gen = _rng.trial_stream(seed, k)
        v, w, s = pert.random_multiplicity_instance(gen, max_order)
        fwd, bwd = pert.multiplicity_lemma_check(v, w, s)
        spec_v = np.linalg.eigvalsh(v)
        spec_w = np.linalg.eigvalsh(w)
        eps = spectral_norm(v - w)
        ok = fwd and bwd
        ok_counts["multiplicity"] += ok
        rows.append(
            (
                k,
                "multiplicity",
                ok,
                pert.multiplicity_count(spec_v, s),
                pert.multiplicity_count(spec_w, pert.dilate(s, eps)),
            )
        )
        v, w, a, b, gamma = pert.random_projector_instance(gen, max_order)
        check = pert.projector_lemma_check(v, w, a, b, gamma)
        ok_counts["projector"] += check.holds
        rows.append((k, "projector", check.holds, check.lhs, check.rhs))
    for k in range(contour_trials):
        gen = _rng.trial_stream(seed, trials + k)
        m, a, b, gamma = pert.random_contour_instance(gen)
        direct = eigen_range_projector(m, a, b).matrix
        err1 = spectral_norm(pert.contour_projector(m, a, b, gamma, quad_points) - direct)
        err2 = spectral_norm(pert.contour_projector(m, a, b, gamma, 2 * quad_points) - direct)
        ok = err1 <= 1e-6 and err2 <= err1 / 2.0 + 1e-14
        ok_counts["contour"] += ok
        rows.append((k, "contour", ok, err1, err2))
    summary = {
        f"{kind}_ok_fraction": (ok_counts[kind] / totals[kind]) if totals[kind] else 1.0
        for kind in ("multiplicity", "projector", "contour")
    }
    return CsvReport(
        header=["trial", "check", "ok", "stat1", "stat2"],
        rows=rows,
        summary=summary,
    )


_RUNNERS = {
    "deviation": _run_deviation,
    "freedman-tail": _run_freedman_tail,
    "percolation-gap": _run_percolation_gap,
    "graphon-spectrum": _run_graphon_spectrum,
    "quasirandom": _run_quasirandom,
    "perturbation-suite": _run_perturbation_suite,
}


def run(config: dict) -> CsvReport:
    """Execute one experiment; the config must already validate cleanly."""
    errors = [d for d in validate(config) if d.startswith("error:")]
    if errors:
        raise ConfigError("; ".join(errors))
    return _RUNNERS[config["experiment"]](config)


# ---------------------------------------------------------------------------
# entry point


def _apply_overrides(config: dict, args) -> dict:
    config = dict(config)
    if args.seed is not None:
        config["master_seed"] = args.seed
    if args.trials is not None:
        config["trials"] = args.trials
    if args.out is not None:
        config["output_path"] = str(args.out)
    return config


def main(argv: Optional[list] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="graphconc",
        description="Seeded experiments on concentration of random-graph matrices.",
        epilog=_COLUMN_DOCS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run", "validate"):
        cmd = sub.add_parser(name, help=f"{name} an experiment config")
        cmd.add_argument("config", type=Path, help="TOML experiment description")
        if name == "run":
            cmd.add_argument("--seed", type=int, default=None, help="override master_seed")
            cmd.add_argument("--trials", type=int, default=None, help="override trials")
            cmd.add_argument("--out", type=Path, default=None, help="override output_path")
            cmd.add_argument(
                "--emit-plot-data",
                action="store_true",
                help="also write tidy long-format CSV next to the output",
            )
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3

    if args.command == "validate":
        diagnostics = validate(config)
        for line in diagnostics:
            print(line)
        return 2 if any(d.startswith("error:") for d in diagnostics) else 0

    config = _apply_overrides(config, args)
    diagnostics = validate(config)
    for line in diagnostics:
        print(line, file=sys.stderr)
    if any(d.startswith("error:") for d in diagnostics):
        return 2

    try:
        report = run(config)
    except ConfigError as exc:  # pragma: no cover - validate() already ran
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3

    out_path = config.get("output_path")
    text = report.render()
    if out_path is None:
        sys.stdout.write(text)
    else:
        try:
            Path(out_path).write_text(text, encoding="ascii")
            if args.emit_plot_data:
                plot_path = Path(out_path).with_suffix(".plot.csv")
                plot_path.write_text(report.plot_data(config["experiment"]), encoding="ascii")
        except OSError as exc:
            print(f"error: cannot write {out_path}: {exc}", file=sys.stderr)
            return 3
        print(f"wrote {out_path} ({len(report.rows)} rows)")
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
