"""Command-line entry point.

Subcommands: fit, simulate, scenario, density-eval, hill-plot, plus replay
(re-executes a recorded manifest).  Every run writes a manifest.json holding
the resolved arguments, master seed, input digests and tool version;
replaying a manifest reproduces the outputs bit-exactly.

Exit codes: 0 ok, 2 input/data error, 3 sampler failure.
"""

from __future__ import annotations

import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click
import numpy as np

from . import __version__
from ._io import (
    CsvParseError,
    format_float,
    read_json,
    read_numeric_csv,
    read_vector_csv,
    sha256_file,
    write_csv,
    write_json,
)
from .analysis import mse_metrics, summarize
from .backend import backend_name
from .chains import ChainConfig, ChainOutput, RegressionData
from .datagen import SimEnv, simulate
from .densities import (
    GltMarginalParams,
    glt_kappa_pdf,
    glt_marginal_beta,
    hs_kappa_pdf,
    hs_marginal_beta,
)
from .distributions import make_rng
from .errors import DomainError, OriginSpikeError, SamplerAbort
from .glt_sampler import run_chain
from .hill import HillWindow, default_window, hill_estimates
from .hs_sampler import run_hs_chain

PAPER_ITERATIONS = (10000, 10000, 100)
PAPER_REPLICATES = 50

SCENARIO1_Q = {
    500: [1, 6, 11, 16, 22, 27, 32, 37, 43, 48],
    1000: [1, 11, 22, 32, 43, 53, 64, 74, 85, 95],
}
SCENARIO2_RHO = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]
SCENARIO3_SNR = [2.0, 4.0, 6.0, 8.0, 10.0]


class InputError(click.ClickException):
    exit_code = 2


class SamplerError(click.ClickException):
    exit_code = 3


def _chain_options(f):
    for opt in reversed(
        [
            click.option("--burn", default=10000, show_default=True, type=int),
            click.option("--keep", default=10000, show_default=True, type=int),
            click.option("--thin", default=100, show_default=True, type=int),
            click.option("--seed", default=0, show_default=True, type=int),
            click.option("--rho2", default=0.001, show_default=True, type=float),
        ]
    ):
        f = opt(f)
    return f


def _iteration_protocol(burn, keep, thin):
    return "paper" if (burn, keep, thin) == PAPER_ITERATIONS else "reduced"


def _write_manifest(out_dir, subcommand, args, inputs=None, extra=None):
    manifest = {
        "tool": "gltshrink",
        "version": __version__,
        "backend": backend_name(),
        "subcommand": subcommand,
        "args": args,
        "inputs": {
            str(p): f"sha256:{sha256_file(p)}" for p in (inputs or [])
        },
    }
    if extra:
        manifest.update(extra)
    write_json(Path(out_dir) / "manifest.json", manifest)


def _prepare_out_dir(out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_regression_data(y_path, x_path, identity_design):
    try:
        y = read_vector_csv(y_path)
        if identity_design:
            return RegressionData(y=y, identity_design=True)
        if x_path is None:
            raise InputError("either --x or --identity-design is required")
        X = read_numeric_csv(x_path)
        return RegressionData(y=y, X=X)
    except CsvParseError as exc:
        raise InputError(str(exc)) from exc
    except DomainError as exc:
        raise InputError(str(exc)) from exc


def _run_prior(prior, data, config, truncated_tau=False):
    try:
        if prior == "glt":
            return run_chain(data, config)
        return run_hs_chain(
            data, config, truncated_tau=(prior == "horseshoe-truncated" or truncated_tau)
        )
    except SamplerAbort as exc:
        raise SamplerError(str(exc)) from exc


def _write_chain_outputs(out: ChainOutput, out_dir: Path):
    p = out.p
    header = (
        ["draw"]
        + [f"beta_{j + 1}" for j in range(p)]
        + [f"lambda_{j + 1}" for j in range(p)]
        + ["sigma2", "tau"]
        + (["xi"] if out.xi is not None else [])
        + ["loglik"]
    )
    rows = []
    for i in range(out.n_draws):
        row = [str(i + 1)]
        row += [format_float(v) for v in out.beta[i]]
        row += [format_float(v) for v in out.lam[i]]
        row += [format_float(out.sigma2[i]), format_float(out.tau[i])]
        if out.xi is not None:
            row.append(format_float(out.xi[i]))
        row.append(format_float(out.loglik[i]))
        rows.append(row)
    write_csv(out_dir / "draws.csv", header, rows)

    s = summarize(out)
    summary = {
        "prior": out.prior,
        "n_draws": s.n_draws,
        "beta_mean": [float(v) for v in s.beta_mean],
        "beta_lo": [float(v) for v in s.beta_lo],
        "beta_hi": [float(v) for v in s.beta_hi],
        "sigma2_mean": s.sigma2_mean,
        "tau_mean": s.tau_mean,
        "xi_mean": s.xi_mean,
        "cor_lambda_tau": [float(v) for v in s.cor_lambda_tau],
        "cor_lambda_xi": (
            [float(v) for v in s.cor_lambda_xi] if s.cor_lambda_xi is not None else None
        ),
        "collapse": s.collapse,
        "degenerate_correlations": s.degenerate_correlations,
        "diagnostics": {k: v for k, v in s.diagnostics.items()},
    }
    write_json(out_dir / "summary.json", summary)


@click.group()
@click.version_option(version=__version__)
def main():
    """Tail-adaptive shrinkage regression toolkit."""


@main.command()
@click.option("--prior", type=click.Choice(["glt", "horseshoe", "horseshoe-truncated"]),
              default="glt", show_default=True)
@click.option("--y", "y_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--x", "x_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--identity-design", is_flag=True, help="Normal-means model (X implicit).")
@click.option("--truncated-tau", is_flag=True,
              help="Restrict the horseshoe global scale to tau > 1/p.")
@_chain_options
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
def fit(prior, y_path, x_path, identity_design, truncated_tau, burn, keep, thin,
        seed, rho2, out_dir):
    """Fit a shrinkage regression; writes draws.csv and summary.json."""
    out = _prepare_out_dir(out_dir)
    data = _load_regression_data(y_path, x_path, identity_design)
    try:
        config = ChainConfig(burn=burn, keep=keep, thin=thin, seed=seed, rho2=rho2)
        if config.n_draws < 20:
            raise DomainError(
                f"keep/thin = {config.n_draws} kept draws; need at least 20"
            )
    except DomainError as exc:
        raise InputError(str(exc)) from exc
    chain = _run_prior(prior, data, config, truncated_tau)
    _write_chain_outputs(chain, out)
    _write_manifest(
        out, "fit",
        {
            "prior": prior, "y": str(Path(y_path).resolve()),
            "x": str(Path(x_path).resolve()) if x_path else None,
            "identity_design": identity_design, "truncated_tau": truncated_tau,
            "burn": burn, "keep": keep, "thin": thin, "seed": seed, "rho2": rho2,
        },
        inputs=[p for p in (y_path, x_path) if p],
        extra={"protocol": {"iterations": _iteration_protocol(burn, keep, thin)}},
    )


@main.command(name="simulate")
@click.option("--n", required=True, type=int)
@click.option("--p", required=True, type=int)
@click.option("--q", required=True, type=int)
@click.option("--rho", default=0.0, show_default=True, type=float)
@click.option("--snr", default=5.0, show_default=True, type=float)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
def simulate_cmd(n, p, q, rho, snr, seed, out_dir):
    """Generate a synthetic dataset: y.csv, X.csv, truth.csv, meta.json."""
    out = _prepare_out_dir(out_dir)
    try:
        env = SimEnv(n=n, p=p, q=q, rho=rho, snr=snr)
    except DomainError as exc:
        raise InputError(str(exc)) from exc
    data, beta0, sigma0 = simulate(env, make_rng(seed))
    write_csv(out / "y.csv", ["y"], [[v] for v in data.y])
    write_csv(out / "X.csv", [f"x_{j + 1}" for j in range(p)], data.X)
    write_csv(out / "truth.csv", ["beta0"], [[v] for v in beta0])
    write_json(out / "meta.json",
               {"n": n, "p": p, "q": q, "rho": rho, "snr": snr,
                "sigma0": sigma0, "seed": seed})
    _write_manifest(out, "simulate",
                    {"n": n, "p": p, "q": q, "rho": rho, "snr": snr, "seed": seed})


def _scenario_grid(scenario, n, p):
    if scenario == 1:
        if p in SCENARIO1_Q:
            return "q", SCENARIO1_Q[p]
        fracs = np.linspace(0.002, 0.096, 10)
        return "q", sorted({max(1, int(round(f * p))) for f in fracs})
    if scenario == 2:
        return "rho", SCENARIO2_RHO
    return "snr", SCENARIO3_SNR


def _scenario_task(payload):
    """One (grid point, replicate): simulate once, fit both priors."""
    (scenario, grid_param, grid_value, grid_index, replicate,
     n, p, seed, burn, keep, thin, rho2) = payload
    env_kwargs = {"n": n, "p": p, "q": max(1, int(round(0.01 * p))),
                  "rho": 0.0, "snr": 5.0}
    env_kwargs[grid_param] = grid_value
    env = SimEnv(**env_kwargs)
    data_rng = make_rng(seed, scenario, grid_index, replicate, 0)
    data, beta0, _ = simulate(env, data_rng)
    chain_seeds = np.random.SeedSequence(
        entropy=seed, spawn_key=(scenario, grid_index, replicate, 1)
    ).generate_state(2, dtype=np.uint64)

    results = {}
    for prior, chain_seed in (("glt", chain_seeds[0]), ("horseshoe", chain_seeds[1])):
        config = ChainConfig(burn=burn, keep=keep, thin=thin,
                             seed=int(chain_seed), rho2=rho2)
        try:
            chain = (run_chain if prior == "glt" else run_hs_chain)(data, config)
        except Exception as exc:  # noqa: BLE001 - reported per replicate
            results[prior] = {"error": f"{type(exc).__name__}: {exc}"}
            continue
        s = summarize(chain)
        _, mse_s, mse_n = mse_metrics(s.beta_mean, beta0, env.q)
        results[prior] = {
            "mse_s": mse_s, "mse_n": mse_n,
            "tau": s.tau_mean, "xi": s.xi_mean,
            "collapse": s.collapse,
        }
    return grid_index, replicate, results


@main.command()
@click.option("--scenario", type=click.IntRange(1, 3), required=True)
@click.option("--replicates", default=PAPER_REPLICATES, show_default=True, type=int)
@click.option("--n", default=100, show_default=True, type=int)
@click.option("--p", default=500, show_default=True, type=int)
@_chain_options
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
def scenario(scenario, replicates, n, p, burn, keep, thin, seed, rho2, out_dir):
    """Replicated comparison of both priors over a scenario grid.

    Writes replicates.csv (per-fit metrics) and medians.csv (per grid point).
    GLT_THREADS caps the worker count; results are independent of it.
    """
    out = _prepare_out_dir(out_dir)
    grid_param, grid_values = _scenario_grid(scenario, n, p)
    tasks = [
        (scenario, grid_param, gv, gi, r, n, p, seed, burn, keep, thin, rho2)
        for gi, gv in enumerate(grid_values)
        for r in range(replicates)
    ]
    workers = int(os.environ.get("GLT_THREADS", "0")) or (os.cpu_count() or 1)
    workers = max(1, min(workers, len(tasks)))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(_scenario_task, tasks, chunksize=1))
    else:
        raw = [_scenario_task(t) for t in tasks]
    raw.sort(key=lambda item: (item[0], item[1]))

    rep_rows = []
    failures = 0
    per_point = {}
    for gi, r, results in raw:
        for prior, res in results.items():
            if "error" in res:
                failures += 1
                rep_rows.append([str(grid_values[gi]), prior, str(r), "nan", "nan",
                                 "nan", "nan", res["error"].replace(",", ";")])
                continue
            rep_rows.append([
                str(grid_values[gi]), prior, str(r),
                format_float(res["mse_s"]), format_float(res["mse_n"]),
                format_float(res["tau"]),
                format_float(res["xi"]) if res["xi"] is not None else "nan",
                "",
            ])
            per_point.setdefault((gi, prior), []).append(res)
    write_csv(out / "replicates.csv",
              [grid_param, "prior", "replicate", "mse_s", "mse_n", "tau", "xi", "note"],
              rep_rows)

    if failures > 0.2 * len(tasks) * 2:
        raise SamplerError(f"{failures} of {len(tasks) * 2} fits failed")

    med_rows = []
    for gi, gv in enumerate(grid_values):
        for prior in ("glt", "horseshoe"):
            group = per_point.get((gi, prior), [])
            if not group:
                continue
            med = lambda key: float(np.median([g[key] for g in group]))
            med_rows.append([
                str(gv), prior,
                format_float(med("mse_s")), format_float(med("mse_n")),
                format_float(med("tau")),
                format_float(med("xi")) if prior == "glt" else "nan",
                str(len(group)),
            ])
    write_csv(out / "medians.csv",
              [grid_param, "prior", "median_mse_s", "median_mse_n",
               "median_tau", "median_xi", "n_ok"],
              med_rows)
    _write_manifest(
        out, "scenario",
        {"scenario": scenario, "replicates": replicates, "n": n, "p": p,
         "burn": burn, "keep": keep, "thin": thin, "seed": seed, "rho2": rho2},
        extra={"protocol": {
            "iterations": _iteration_protocol(burn, keep, thin),
            "replicates": "paper-scale" if replicates >= PAPER_REPLICATES else "desk-scale",
        }},
    )


@main.command(name="density-eval")
@click.option("--kind", type=click.Choice(["glt-beta", "glt-kappa", "hs-beta", "hs-kappa"]),
              required=True)
@click.option("--tau", default=1.0, show_default=True, type=float)
@click.option("--xi", default=1.0, show_default=True, type=float)
@click.option("--grid-min", type=float, default=None)
@click.option("--grid-max", type=float, default=None)
@click.option("--grid-points", default=200, show_default=True, type=int)
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
def density_eval(kind, tau, xi, grid_min, grid_max, grid_points, out_dir):
    """Tabulate a marginal density on a grid to table.csv."""
    out = _prepare_out_dir(out_dir)
    on_beta = kind.endswith("beta")
    if grid_min is None:
        grid_min = -8.0 if on_beta else 0.005
    if grid_max is None:
        grid_max = 8.0 if on_beta else 0.995
    grid = np.linspace(grid_min, grid_max, grid_points)
    try:
        if kind == "glt-beta":
            params = GltMarginalParams(tau=tau, xi=xi)
            fn = lambda b: glt_marginal_beta(b, params)
        elif kind == "glt-kappa":
            fn = lambda k: glt_kappa_pdf(k, tau, xi)
        elif kind == "hs-beta":
            fn = lambda b: hs_marginal_beta(b, tau)
        else:
            fn = lambda k: hs_kappa_pdf(k, tau)
        rows = []
        for x in grid:
            try:
                rows.append([x, fn(float(x))])
            except OriginSpikeError:
                rows.append([x, math.inf])
    except DomainError as exc:
        raise InputError(str(exc)) from exc
    write_csv(out / "table.csv", ["x", "density"], rows)
    _write_manifest(out, "density-eval",
                    {"kind": kind, "tau": tau, "xi": xi, "grid_min": grid_min,
                     "grid_max": grid_max, "grid_points": grid_points})


@main.command(name="hill-plot")
@click.option("--lambdas", "lambdas_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--k-lo", type=int, default=None, help="Window start (default p/10).")
@click.option("--k-hi", type=int, default=None, help="Window end (default 9p/10).")
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
def hill_plot(lambdas_path, k_lo, k_hi, out_dir):
    """Tabulate (k, tail-shape estimate) pairs with the window mean."""
    out = _prepare_out_dir(out_dir)
    try:
        lam = read_vector_csv(lambdas_path)
        estimates = hill_estimates(lam)
        window = default_window(lam.size)
        if k_lo is not None or k_hi is not None:
            window = HillWindow(k_lo or window.k_lo, k_hi or window.k_hi)
            if window.k_hi > lam.size:
                raise InputError(f"window {window} exceeds p = {lam.size}")
    except (CsvParseError, DomainError) as exc:
        raise InputError(str(exc)) from exc
    in_window = np.zeros(estimates.size, dtype=bool)
    in_window[window.k_lo - 2 : window.k_hi - 1] = True
    window_mean = float(estimates[in_window].mean())
    rows = [
        [str(k), format_float(estimates[k - 2]), str(int(in_window[k - 2])),
         format_float(window_mean)]
        for k in range(2, lam.size + 1)
    ]
    write_csv(out / "hillplot.csv", ["k", "xi_hat", "in_window", "window_mean"], rows)
    _write_manifest(out, "hill-plot",
                    {"lambdas": str(Path(lambdas_path).resolve()),
                     "k_lo": window.k_lo, "k_hi": window.k_hi},
                    inputs=[lambdas_path])


@main.command()
@click.option("--manifest", "manifest_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
def replay(manifest_path, out_dir):
    """Re-execute a recorded run; outputs are bit-identical."""
    manifest = read_json(manifest_path)
    sub = manifest["subcommand"]
    args = manifest["args"]
    argv = [sub]
    for key, value in args.items():
        if value is None:
            continue
        flag = "--" + key.replace("_", "-")
        if isinstance(value, bool):
            if value:
                argv.append(flag)
        else:
            argv.extend([flag, str(value)])
    argv.extend(["--out-dir", out_dir])
    main.main(args=argv, standalone_mode=False)


if __name__ == "__main__":
    main()
