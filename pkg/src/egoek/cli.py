"""Command-line pipeline: generate | decompose | fluct | analytic | table1.

Exit codes: 0 success, 2 validation error, 1 runtime error.  All randomness
flows from the master seed; reruns with the same configuration are
byte-identical regardless of --threads.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import analytic, archive as arc, fluctuations as fl, periodogram as pg, pipeline
from .config import ConfigError, RunConfig, VALID_ORDERS, config_from_dict, load_config
from .ensemble import EnsembleSpec
from .fock import Statistics

ARCHIVE_NAME = "spectra.egoearc"

DEFAULT_TABLE_GRID = (
    [("fermion", 6, 12, k) for k in range(2, 7)]
    + [("boson", 10, 5, k) for k in range(2, 11)]
)


class CliError(RuntimeError):
    pass


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("EGOE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigError(f"EGOE_THREADS must be an integer, got {env!r}") from exc
    return 1


def _parse_orders(text: str) -> tuple[int, ...]:
    try:
        orders = tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise ConfigError(f"cannot parse orders {text!r}") from exc
    if not orders or any(o not in VALID_ORDERS for o in orders):
        raise ConfigError(f"orders must be a non-empty subset of {VALID_ORDERS}")
    return orders


def _load_run_config(args) -> RunConfig:
    if args.config:
        config = load_config(args.config)
    else:
        if args.statistics is None or args.m is None or args.N is None or args.k is None:
            raise ConfigError("either --config or all of --statistics/-m/-N/-k are required")
        config = config_from_dict(
            {
                "ensemble": {
                    "statistics": args.statistics,
                    "m": args.m,
                    "N": args.N,
                    "k": args.k,
                },
            }
        )
    ens = config.ensemble
    if args.seed is not None or args.members is not None:
        ens = EnsembleSpec(
            statistics=ens.statistics,
            m=ens.m,
            n_sites=ens.n_sites,
            k=ens.k,
            members=args.members if args.members is not None else ens.members,
            master_seed=args.seed if args.seed is not None else ens.master_seed,
            nu2=ens.nu2,
        )
    return RunConfig(
        ensemble=ens,
        orders=_parse_orders(args.orders) if getattr(args, "orders", None) else config.orders,
        trim=config.trim,
        l_max=config.l_max,
        bin_width=config.bin_width,
        spacing_max=config.spacing_max,
        oversample=config.oversample,
        out_dir=args.out or config.out_dir,
        format_version=config.format_version,
    )


def _out_dir(config: RunConfig) -> Path:
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _write_json(path: Path, payload: dict, config: RunConfig) -> None:
    payload = {"config": config.to_dict(), **payload}
    path.write_text(json.dumps(payload, sort_keys=True, indent=2))


def cmd_generate(args) -> None:
    config = _load_run_config(args)
    out = _out_dir(config)
    archive = pipeline.generate_archive(config.ensemble, threads=_threads(args))
    target = out / ARCHIVE_NAME
    arc.write_archive(target, archive)
    if args.export_json:
        arc.export_json(archive, args.export_json)
    print(f"wrote {target} ({config.ensemble.members} members, d={archive.dimension})")


def _read_archive(args) -> arc.SpectrumArchive:
    if not args.archive:
        raise ConfigError("--archive is required")
    return arc.read_archive(args.archive)


def cmd_decompose(args) -> None:
    archive = _read_archive(args)
    config = _archive_config(args, archive)
    out = _out_dir(config)
    analyses = pipeline.decompose_archive(archive, config.orders, threads=_threads(args))

    rows = []
    for analysis in analyses:
        for order in config.orders:
            series = analysis.decomposition.series[order]
            for e_hat, delta in zip(series.e_hat, series.delta):
                rows.append([analysis.member, order, f"{e_hat:.12g}", f"{delta:.12g}"])
    _write_csv(out / "delta_series.csv", ["member", "order", "E_hat", "delta"], rows)

    summary = {
        "mean_delta_rms": {
            str(order): float(
                np.mean([a.decomposition.delta_rms(order) for a in analyses])
            )
            for order in config.orders
        },
        "member_q": {str(a.member): a.q for a in analyses},
        "goe_delta_rms": float(
            np.sqrt(np.log(2.0 * archive.dimension)) / np.pi
        ),
    }
    _write_json(out / "decompose_summary.json", summary, config)
    print(f"wrote {out / 'delta_series.csv'} and decompose_summary.json")


def cmd_fluct(args) -> None:
    archive = _read_archive(args)
    config = _archive_config(args, archive)
    out = _out_dir(config)
    spec = archive.spec

    analyses = pipeline.decompose_archive(archive, config.orders, threads=_threads(args))
    grouped = pipeline.periodograms_by_order(
        analyses,
        config.orders,
        trim=config.trim,
        oversample=config.oversample,
        convention=args.convention,
    )

    rows = []
    for order in config.orders:
        mean_power = np.mean([r.power for r in grouped[order]], axis=0)
        freqs = grouped[order][0].frequency
        for f, p in zip(freqs, mean_power):
            rows.append([spec.k, order, f"{f:.12g}", f"{p:.12g}"])
    _write_csv(out / "periodogram.csv", ["k", "order", "f", "P_mean"], rows)

    report = pg.separation_report(
        {(spec.k, order): grouped[order] for order in config.orders}
    )

    policy_order = fl.unfolding_order(spec.statistics, spec.k)
    unfolded = pipeline.unfolded_ensemble(archive, order=policy_order, trim=config.trim)
    hist = fl.nnsd(unfolded, bin_width=config.bin_width, s_max=config.spacing_max)
    _write_csv(
        out / "nnsd.csv",
        ["s_low", "s_high", "density", "wigner", "poisson"],
        [
            [f"{lo:.12g}", f"{hi:.12g}", f"{d:.12g}", f"{w:.12g}", f"{p:.12g}"]
            for lo, hi, d, w, p in zip(
                hist.bin_edges[:-1], hist.bin_edges[1:], hist.density, hist.wigner, hist.poisson
            )
        ],
    )

    curve = fl.delta3(unfolded, l_max=config.l_max)
    _write_csv(
        out / "delta3.csv",
        ["L", "delta3", "goe", "poisson"],
        [
            [f"{L:.12g}", f"{v:.12g}", f"{g:.12g}", f"{p:.12g}"]
            for L, v, g, p in zip(curve.lengths, curve.values, curve.goe, curve.poisson)
        ],
    )

    summary = {
        "lambda_convention": args.convention,
        "separation": [
            {
                "k": row.k,
                "order": row.order,
                "mean_lambda": row.mean_significance,
                "mean_f_p": row.mean_peak_frequency,
            }
            for row in report
        ],
        "nnsd_sigma2": hist.sigma2,
        "unfolding_order": policy_order,
    }
    _write_json(out / "fluct_summary.json", summary, config)
    print(f"wrote periodogram.csv, nnsd.csv, delta3.csv, fluct_summary.json in {out}")


def cmd_analytic(args) -> None:
    statistics = Statistics(args.statistics)
    modes = tuple(int(tok) for tok in args.modes.split(",") if tok.strip())
    if not modes or any(n < 1 for n in modes):
        raise ConfigError("modes must be positive integers")
    ks = tuple(int(tok) for tok in args.k_list.split(",") if tok.strip())
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)

    rows = []
    for k in ks:
        if args.q is not None:
            q = args.q
        else:
            try:
                q = analytic.preset_q(statistics, args.m, args.N, k)
            except KeyError as exc:
                raise ConfigError(
                    f"no preset shape parameter for this system; pass --q ({exc})"
                ) from exc
        half = 2.0 / np.sqrt(1.0 - q) if q < 1.0 else 6.0
        grid = np.linspace(-half, half, args.grid_points)
        for n in modes:
            curve = analytic.mode_width_curve(statistics, args.m, args.N, k, q, n, grid)
            for e_hat, value in zip(curve.grid, curve.values):
                rows.append(
                    [
                        statistics.value,
                        args.m,
                        args.N,
                        k,
                        f"{q:.12g}",
                        n,
                        f"{e_hat:.12g}",
                        f"{value:.12g}",
                    ]
                )
    _write_csv(
        out / "mode_widths.csv",
        ["statistics", "m", "N", "k", "q", "n", "E_hat", "value"],
        rows,
    )
    print(f"wrote {out / 'mode_widths.csv'}")


def cmd_table1(args) -> None:
    if args.grid:
        try:
            grid_spec = json.loads(Path(args.grid).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read grid file: {exc}") from exc
        grid = [(g["statistics"], g["m"], g["N"], g["k"]) for g in grid_spec]
    else:
        grid = DEFAULT_TABLE_GRID
    members = args.members if args.members is not None else 50
    seed = args.seed if args.seed is not None else 0
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)

    rows = []
    summaries = []
    for statistics, m, n_sites, k in grid:
        spec = EnsembleSpec(
            statistics=Statistics(statistics),
            m=m,
            n_sites=n_sites,
            k=k,
            members=members,
            master_seed=seed,
        )
        archive = pipeline.generate_archive(spec, threads=_threads(args))
        summary = pipeline.moment_summary(archive)
        summaries.append(summary.__dict__)
        rows.append(
            [
                summary.statistics,
                summary.m,
                summary.n_sites,
                summary.k,
                summary.members,
                f"{summary.gamma1_mean:.6f}",
                f"{summary.gamma1_se:.6f}",
                f"{summary.gamma2_mean:.6f}",
                f"{summary.gamma2_se:.6f}",
                f"{summary.q_mean:.6f}",
            ]
        )
        print(
            f"{summary.statistics} m={m} N={n_sites} k={k}: "
            f"gamma1={summary.gamma1_mean:+.4f} gamma2={summary.gamma2_mean:+.4f}"
        )
    _write_csv(
        out / "table1.csv",
        ["statistics", "m", "N", "k", "members", "gamma1", "gamma1_se", "gamma2", "gamma2_se", "q"],
        rows,
    )
    payload = {
        "format_version": "1",
        "members": members,
        "master_seed": seed,
        "rows": summaries,
    }
    (out / "table1.json").write_text(json.dumps(payload, sort_keys=True, indent=2))
    print(f"wrote {out / 'table1.csv'} and table1.json")


def _archive_config(args, archive: arc.SpectrumArchive) -> RunConfig:
    if args.config:
        config = load_config(args.config)
        ensemble = archive.spec
    else:
        ensemble = archive.spec
        config = RunConfig(ensemble=ensemble)
    orders = _parse_orders(args.orders) if getattr(args, "orders", None) else config.orders
    return RunConfig(
        ensemble=ensemble,
        orders=orders,
        trim=config.trim,
        l_max=config.l_max,
        bin_width=config.bin_width,
        spacing_max=config.spacing_max,
        oversample=config.oversample,
        out_dir=args.out or config.out_dir,
        format_version=config.format_version,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="egoek",
        description="Embedded Gaussian orthogonal ensembles with k-body interactions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, archive=False, ensemble_flags=False):
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--seed", type=int, help="master seed override")
        p.add_argument("--members", type=int, help="member count override")
        p.add_argument("--out", help="output directory")
        p.add_argument("--threads", type=int, help="worker threads (env EGOE_THREADS)")
        if archive:
            p.add_argument("--archive", help="spectrum archive path")
            p.add_argument("--orders", help="comma-separated correction orders")
        if ensemble_flags:
            p.add_argument("--statistics", choices=["fermion", "boson"])
            p.add_argument("-m", type=int, help="particle count")
            p.add_argument("-N", type=int, help="single-particle states")
            p.add_argument("-k", type=int, help="interaction rank")

    p_gen = sub.add_parser("generate", help="build, diagonalize, and archive an ensemble")
    common(p_gen, ensemble_flags=True)
    p_gen.add_argument("--export-json", help="also write a human-readable JSON dump")
    p_gen.set_defaults(func=cmd_generate)

    p_dec = sub.add_parser("decompose", help="level-motion series and fitted corrections")
    common(p_dec, archive=True)
    p_dec.set_defaults(func=cmd_decompose)

    p_flu = sub.add_parser("fluct", help="periodograms, NNSD, and spectral rigidity")
    common(p_flu, archive=True)
    p_flu.add_argument(
        "--convention",
        choices=list(pg.LAMBDA_CONVENTIONS),
        default="fap",
        help="peak-significance convention recorded in outputs",
    )
    p_flu.set_defaults(func=cmd_fluct)

    p_ana = sub.add_parser("analytic", help="closed-form mode-width curves")
    p_ana.add_argument("--statistics", required=True, choices=["fermion", "boson"])
    p_ana.add_argument("-m", type=int, required=True)
    p_ana.add_argument("-N", type=int, required=True)
    p_ana.add_argument("--k-list", required=True, help="comma-separated interaction ranks")
    p_ana.add_argument("--q", type=float, help="explicit shape parameter (else preset)")
    p_ana.add_argument("--modes", default="2,3,4,6", help="comma-separated mode indices")
    p_ana.add_argument("--grid-points", type=int, default=801)
    p_ana.add_argument("--out")
    p_ana.set_defaults(func=cmd_analytic)

    p_tab = sub.add_parser("table1", help="ensemble-averaged shape parameters grid")
    p_tab.add_argument("--grid", help="JSON list of {statistics, m, N, k}")
    p_tab.add_argument("--members", type=int)
    p_tab.add_argument("--seed", type=int)
    p_tab.add_argument("--out")
    p_tab.add_argument("--threads", type=int)
    p_tab.set_defaults(func=cmd_table1)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
