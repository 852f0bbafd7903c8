"""Command-line driver: 1D experiments, image experiments, benchmark tables.

Subcommands:
  approx1d          classical / probabilistic reconstruction of a 1D signal
  image             block-mean reconstruction of a grayscale image
  reproduce-tables  rerun the benchmark configurations and compare against
                    the published reference values embedded below
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .image import (
    classical_reconstruction_metrics,
    expected_reconstruction_metrics,
    sk_reconstruct,
    apply_psk_image,
    synthetic_test_image,
)
from .kernels import kernel_from_name
from .metrics import SsimConfig
from .noise import (
    NoiseModel,
    TrialContext,
    apply_psk_from_means,
    expected_error_summary,
)
from .operator1d import (
    Domain1D,
    apply_sk,
    compute_cell_means,
    error_summary,
    pointwise_error,
    sample_function,
)
from .pgm import load_pgm, save_pgm
from .quadrature import Quadrature
from .reports import write_csv_report

FUNCTIONS = {
    "expgauss": lambda x: np.exp(-np.asarray(x, dtype=float) ** 2),
}

# Published reference values for the benchmark tables (reproduce-tables
# compares fresh runs against these).
TABLE1_CLASSICAL_REF = {5: 0.086, 15: 0.043, 25: 0.021, 35: 0.010}
TABLE1_PROBABILISTIC_REF = {5: 0.091, 15: 0.048, 25: 0.027, 35: 0.018}

# Tolerance bands for the classical column: +/-35% around the reference,
# except n=35 where the first-order theory value for this configuration
# (cell width * total variation / 4 = 1/(2n) ~ 0.0143) sits outside such a
# window around the reported 0.010; that row keeps the wider documented
# band [0.007, 0.02].
TABLE1_BAND = {
    5: (0.65 * 0.086, 1.35 * 0.086),
    15: (0.65 * 0.043, 1.35 * 0.043),
    25: (0.65 * 0.021, 1.35 * 0.021),
    35: (0.007, 0.020),
}

# window -> (psnr, ssim, mae, var_abs_err)
TABLE2_REF = {
    3: (29.45, 0.8590, 0.0174, 0.00083128),
    7: (25.10, 0.7185, 0.0286, 0.00227373),
    15: (22.21, 0.6155, 0.0402, 0.00439862),
}
TABLE3_REF = {
    3: (28.48, 0.8421, 0.0305, 0.000129),
    7: (28.98, 0.8797, 0.0274, 0.000081),
    15: (27.86, 0.8446, 0.0283, 0.000047),
}


def _int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42, help="master RNG seed")
    common.add_argument("--threads", type=int, default=1, help="worker threads for Monte Carlo trials")
    common.add_argument("--out-dir", default="out", help="directory for all outputs")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kantorovich",
        description="Sampling Kantorovich reconstruction experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_parser()

    p1 = sub.add_parser("approx1d", parents=[common], help="1D signal reconstruction sweep")
    p1.add_argument("--fn", default="expgauss", choices=sorted(FUNCTIONS))
    p1.add_argument("--a", type=float, default=-3.0)
    p1.add_argument("--b", type=float, default=3.0)
    p1.add_argument("--points", type=int, default=1000)
    p1.add_argument("--n", type=_int_list, default=[5, 15, 25, 35, 45], metavar="N1,N2,...")
    p1.add_argument("--kernel", default="box", choices=["box", "bspline2", "bspline3"])
    p1.add_argument("--quad", default="simpson", choices=["midpoint", "simpson"])
    p1.add_argument("--panels", type=int, default=8)
    p1.add_argument("--mode", default="both", choices=["classical", "probabilistic", "both"])
    p1.add_argument("--noise-std", type=float, default=0.02)
    p1.add_argument("--noise-placement", default="cell", choices=["cell", "sample"])
    p1.add_argument("--noise-schedule", default="fixed", choices=["fixed", "inv-sqrt-n"])
    p1.add_argument("--trials", type=int, default=100)
    p1.add_argument("--out-csv", default=None, help="summary CSV path (default: <out-dir>/approx1d_summary.csv)")
    p1.add_argument("--out-curves", default=None, help="curves CSV path (default: <out-dir>/approx1d_curves.csv)")
    p1.set_defaults(func=cmd_approx1d)

    p2 = sub.add_parser("image", parents=[common], help="grayscale image reconstruction")
    p2.add_argument("--in", dest="input", default=None, help="input PGM (default: bundled synthetic image)")
    p2.add_argument("--windows", type=_int_list, default=[3, 7, 15], metavar="W1,W2,...")
    p2.add_argument("--mode", default="classical", choices=["classical", "probabilistic"])
    p2.add_argument("--noise-std", type=float, default=0.02)
    p2.add_argument("--trials", type=int, default=100)
    p2.add_argument("--ssim-window", default="gauss11", choices=["gauss11", "uniform8"])
    p2.add_argument("--peak", type=float, default=1.0)
    p2.add_argument("--report", default=None, help="report CSV path (default: <out-dir>/image_report.csv)")
    p2.set_defaults(func=cmd_image)

    p3 = sub.add_parser(
        "reproduce-tables", parents=[common], help="rerun benchmarks against reference values"
    )
    p3.add_argument("--trials-table1", type=int, default=2000)
    p3.add_argument("--trials-table3", type=int, default=100)
    p3.add_argument("--strict", action="store_true", help="exit nonzero if any gate fails")
    p3.set_defaults(func=cmd_reproduce_tables)
    return parser


def _config_lines(args: argparse.Namespace) -> list[str]:
    # Echo only result-determining settings: worker count and output
    # locations must never influence the computed values, and keeping them
    # out of the echo lets identical runs produce byte-identical files no
    # matter where they are written or how they are scheduled.
    skip = {"func", "command", "threads", "out_dir", "out_csv", "out_curves", "report"}
    items = sorted((k, v) for k, v in vars(args).items() if k not in skip)
    return ["config " + " ".join(f"{k}={v}" for k, v in items)]


def _out_dir(args: argparse.Namespace) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_approx1d(args: argparse.Namespace) -> int:
    out = _out_dir(args)
    f = FUNCTIONS[args.fn]
    domain = Domain1D(a=args.a, b=args.b, grid_points=args.points)
    kernel = kernel_from_name(args.kernel)
    quad = Quadrature(scheme=args.quad, panels_per_cell=args.panels)
    exact = sample_function(f, domain)
    preamble = _config_lines(args)

    summary_rows: list[dict] = []
    curve_cols: dict[str, np.ndarray] = {"x": domain.grid(), "f": exact.samples}
    run_classical = args.mode in ("classical", "both")
    run_prob = args.mode in ("probabilistic", "both")

    for n in args.n:
        means = compute_cell_means(f, domain, n, quad)
        if run_classical:
            sk = apply_sk(means, kernel, domain)
            s = error_summary(pointwise_error(sk, exact))
            summary_rows.append(
                {
                    "mode": "classical",
                    "n": n,
                    "l1_error": s.l1_total,
                    "l1_std_error": None,
                    "max_error": s.max,
                    "min_error": s.min,
                    "discrete_mean_error": s.discrete_mean,
                }
            )
            curve_cols[f"sk_n{n}"] = sk.samples
        if run_prob:
            std = args.noise_std
            if args.noise_schedule == "inv-sqrt-n":
                std = args.noise_std / math.sqrt(n)
            noise = NoiseModel(std=std, placement=args.noise_placement, master_seed=args.seed)
            est = expected_error_summary(
                f, domain, n, kernel, noise, args.trials, quad, threads=args.threads
            )
            summary_rows.append(
                {
                    "mode": "probabilistic",
                    "n": n,
                    "l1_error": est["l1_total"].mean,
                    "l1_std_error": est["l1_total"].std_error,
                    "max_error": est["max"].mean,
                    "min_error": est["min"].mean,
                    "discrete_mean_error": est["discrete"].mean,
                }
            )
            psk = apply_psk_from_means(means, domain, kernel, noise, TrialContext(0))
            curve_cols[f"psk_n{n}"] = psk.samples

    summary_path = Path(args.out_csv) if args.out_csv else out / "approx1d_summary.csv"
    write_csv_report(
        summary_path,
        ["mode", "n", "l1_error", "l1_std_error", "max_error", "min_error", "discrete_mean_error"],
        summary_rows,
        preamble,
    )
    curves_path = Path(args.out_curves) if args.out_curves else out / "approx1d_curves.csv"
    names = list(curve_cols)
    curve_rows = [
        {name: float(curve_cols[name][i]) for name in names}
        for i in range(domain.grid_points)
    ]
    write_csv_report(curves_path, names, curve_rows, preamble)
    print(f"wrote {summary_path} and {curves_path}")
    return 0


def cmd_image(args: argparse.Namespace) -> int:
    out = _out_dir(args)
    if args.input is None:
        img = synthetic_test_image()
        source = "synthetic-256"
    else:
        img = load_pgm(args.input)
        source = args.input
    cfg = SsimConfig(window=args.ssim_window, peak=args.peak)
    preamble = _config_lines(args) + [f"source {source}"]

    rows: list[dict] = []
    if args.mode == "classical":
        fields = ["window", "psnr", "ssim", "mae", "var_abs_err"]
        for w in args.windows:
            rec = sk_reconstruct(img, w)
            save_pgm(rec, out / f"sk_w{w}.pgm", comments=tuple(preamble))
            m = classical_reconstruction_metrics(img, w, cfg)
            rows.append(
                {"window": w, "psnr": m.psnr, "ssim": m.ssim, "mae": m.mae, "var_abs_err": m.var_abs_err}
            )
    else:
        fields = [
            "window",
            "psnr",
            "psnr_std_error",
            "ssim",
            "ssim_std_error",
            "mae",
            "mae_std_error",
            "var_abs_err",
            "trials",
        ]
        noise = NoiseModel(std=args.noise_std, placement="sample", master_seed=args.seed)
        for w in args.windows:
            rec0 = apply_psk_image(img, w, noise, TrialContext(0))
            save_pgm(rec0, out / f"psk_w{w}.pgm", comments=tuple(preamble))
            m = expected_reconstruction_metrics(img, w, noise, args.trials, cfg, threads=args.threads)
            rows.append(
                {
                    "window": w,
                    "psnr": m.psnr.mean,
                    "psnr_std_error": m.psnr.std_error,
                    "ssim": m.ssim.mean,
                    "ssim_std_error": m.ssim.std_error,
                    "mae": m.mae.mean,
                    "mae_std_error": m.mae.std_error,
                    "var_abs_err": m.var_abs_err,
                    "trials": m.trials,
                }
            )

    report_path = Path(args.report) if args.report else out / "image_report.csv"
    write_csv_report(report_path, fields, rows, preamble)
    print(f"wrote {report_path}")
    return 0


def _strictly_decreasing(values: list[float]) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


def cmd_reproduce_tables(args: argparse.Namespace) -> int:
    out = _out_dir(args)
    preamble = _config_lines(args)
    gates: dict[str, bool] = {}

    # ---- Table 1: 1D reconstruction of exp(-x^2) ----
    f = FUNCTIONS["expgauss"]
    domain = Domain1D(a=-3.0, b=3.0, grid_points=1000)
    kernel = kernel_from_name("box")
    quad = Quadrature()
    exact = sample_function(f, domain)
    noise = NoiseModel(std=0.02, placement="cell", master_seed=args.seed)

    ns = [5, 15, 25, 35, 45]
    classical: dict[int, float] = {}
    prob: dict[int, tuple[float, float]] = {}
    for n in ns:
        means = compute_cell_means(f, domain, n, quad)
        sk = apply_sk(means, kernel, domain)
        classical[n] = error_summary(pointwise_error(sk, exact)).l1_total
        est = expected_error_summary(
            f, domain, n, kernel, noise, args.trials_table1, quad, threads=args.threads
        )["l1_total"]
        prob[n] = (est.mean, est.std_error)

    rows1 = []
    for n in ns:
        ref = TABLE1_CLASSICAL_REF.get(n)
        band = TABLE1_BAND.get(n)
        within = None if band is None else band[0] <= classical[n] <= band[1]
        mean, se = prob[n]
        rows1.append(
            {
                "n": n,
                "paper_classical": ref,
                "ours_classical": classical[n],
                "within_band": within,
                "paper_probabilistic": TABLE1_PROBABILISTIC_REF.get(n),
                "ours_probabilistic": mean,
                "prob_std_error": se,
                "prob_exceeds_classical": mean - 3.0 * se > classical[n],
            }
        )
    write_csv_report(
        out / "table1.csv",
        [
            "n",
            "paper_classical",
            "ours_classical",
            "within_band",
            "paper_probabilistic",
            "ours_probabilistic",
            "prob_std_error",
            "prob_exceeds_classical",
        ],
        rows1,
        preamble,
    )
    gates["table1_within_band"] = all(
        TABLE1_BAND[n][0] <= classical[n] <= TABLE1_BAND[n][1] for n in TABLE1_BAND
    )
    gates["table1_classical_decreasing"] = _strictly_decreasing([classical[n] for n in ns])
    gates["table1_prob_exceeds_classical"] = all(
        prob[n][0] - 3.0 * prob[n][1] > classical[n] for n in TABLE1_CLASSICAL_REF
    )

    # ---- Table 2: classical reconstruction of the synthetic image ----
    img = synthetic_test_image()
    save_pgm(img, out / "synthetic.pgm", comments=tuple(preamble))
    cfg = SsimConfig()
    windows = [3, 7, 15]
    t2 = {}
    for w in windows:
        rec = sk_reconstruct(img, w)
        save_pgm(rec, out / f"table2_sk_w{w}.pgm", comments=tuple(preamble))
        t2[w] = classical_reconstruction_metrics(img, w, cfg)
    rows2 = []
    for i, w in enumerate(windows):
        ref = TABLE2_REF[w]
        prev = t2[windows[i - 1]] if i > 0 else None
        rows2.append(
            {
                "window": w,
                "paper_psnr": ref[0],
                "ours_psnr": t2[w].psnr,
                "paper_ssim": ref[1],
                "ours_ssim": t2[w].ssim,
                "paper_mae": ref[2],
                "ours_mae": t2[w].mae,
                "paper_var": ref[3],
                "ours_var": t2[w].var_abs_err,
                "psnr_decreasing": None if prev is None else t2[w].psnr < prev.psnr,
                "mae_increasing": None if prev is None else t2[w].mae > prev.mae,
                "ssim_decreasing": None if prev is None else t2[w].ssim < prev.ssim,
            }
        )
    write_csv_report(
        out / "table2.csv",
        [
            "window",
            "paper_psnr",
            "ours_psnr",
            "paper_ssim",
            "ours_ssim",
            "paper_mae",
            "ours_mae",
            "paper_var",
            "ours_var",
            "psnr_decreasing",
            "mae_increasing",
            "ssim_decreasing",
        ],
        rows2,
        preamble,
    )
    gates["table2_psnr_decreasing"] = _strictly_decreasing([t2[w].psnr for w in windows])
    gates["table2_mae_increasing"] = _strictly_decreasing([-t2[w].mae for w in windows])
    gates["table2_ssim_decreasing"] = _strictly_decreasing([t2[w].ssim for w in windows])

    # ---- Table 3: probabilistic reconstruction of the synthetic image ----
    noise_img = NoiseModel(std=0.02, placement="sample", master_seed=args.seed)
    t3 = {}
    for w in windows:
        rec0 = apply_psk_image(img, w, noise_img, TrialContext(0))
        save_pgm(rec0, out / f"table3_psk_w{w}.pgm", comments=tuple(preamble))
        t3[w] = expected_reconstruction_metrics(
            img, w, noise_img, args.trials_table3, cfg, threads=args.threads
        )
    rows3 = []
    for i, w in enumerate(windows):
        ref = TABLE3_REF[w]
        prev = t3[windows[i - 1]] if i > 0 else None
        rows3.append(
            {
                "window": w,
                "paper_psnr": ref[0],
                "ours_psnr": t3[w].psnr.mean,
                "psnr_std_error": t3[w].psnr.std_error,
                "paper_ssim": ref[1],
                "ours_ssim": t3[w].ssim.mean,
                "ssim_std_error": t3[w].ssim.std_error,
                "paper_mae": ref[2],
                "ours_mae": t3[w].mae.mean,
                "mae_std_error": t3[w].mae.std_error,
                "paper_var": ref[3],
                "ours_var": t3[w].var_abs_err,
                "var_decreasing": None if prev is None else t3[w].var_abs_err < prev.var_abs_err,
                "trials": t3[w].trials,
            }
        )
    write_csv_report(
        out / "table3.csv",
        [
            "window",
            "paper_psnr",
            "ours_psnr",
            "psnr_std_error",
            "paper_ssim",
            "ours_ssim",
            "ssim_std_error",
            "paper_mae",
            "ours_mae",
            "mae_std_error",
            "paper_var",
            "ours_var",
            "var_decreasing",
            "trials",
        ],
        rows3,
        preamble,
    )
    gates["table3_var_decreasing"] = _strictly_decreasing(
        [t3[w].var_abs_err for w in windows]
    )

    for name in sorted(gates):
        print(f"GATE {name}: {'PASS' if gates[name] else 'FAIL'}")
    print(f"wrote {out / 'table1.csv'}, {out / 'table2.csv'}, {out / 'table3.csv'}")
    if args.strict and not all(gates.values()):
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
