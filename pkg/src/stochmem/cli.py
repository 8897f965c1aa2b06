"""Command-line front end.

Subcommands: run, sweep, cost, fit-gamma, gen-inputs, calibrate.
Exit codes: 0 success, 1 domain error, 2 usage error.  Tables on stdout are
tab-separated for scripting.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .circuits import AppKind, fit_bernstein
from .costs import (AccessMultipliers, SystemDesign, area_report,
                    default_profile, energy_report, load_cost_config,
                    share_breakdown)
from .harness import (CSV_COLUMNS, DEFAULT_SEEDS, PAPER_LENGTHS,
                      ExperimentConfig, apply_env_overrides, calibrate_access,
                      calibrate_noise, load_config, report_csv_row,
                      run_experiment, sweep)
from .images import save_pgm
from .memory import NoiseModel
from .synth import gen_test_inputs


def _fmt(x: float) -> str:
    return f"{x:g}"


def _parse_apps(spec: str) -> list[AppKind]:
    if spec == "all":
        return list(AppKind)
    return [AppKind.from_name(s) for s in spec.split(",") if s]


def _parse_designs(spec: str) -> list[SystemDesign]:
    if spec == "all":
        return list(SystemDesign)
    return [SystemDesign.from_name(s) for s in spec.split(",") if s]


def _parse_dims(spec: str) -> tuple[int, int]:
    w, h = spec.lower().split("x")
    return int(w), int(h)


def _config_from_args(args) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if getattr(args, "config", None):
        cfg = load_config(args.config, cfg)
    updates = {}
    if getattr(args, "app", None):
        updates["app"] = AppKind.from_name(args.app)
    if getattr(args, "design", None):
        updates["design"] = SystemDesign.from_name(args.design)
    if getattr(args, "length", None) is not None:
        updates["length"] = args.length
    if getattr(args, "seed", None) is not None:
        updates["global_seed"] = args.seed
    if getattr(args, "dims", None):
        updates["dims"] = _parse_dims(args.dims)
    if getattr(args, "input", None):
        updates["input_path"] = args.input
    if getattr(args, "frames", None):
        updates["frames_dir"] = args.frames
    if getattr(args, "jobs", None) is not None:
        updates["jobs"] = args.jobs
    if getattr(args, "free_run", False):
        updates["dsc_free_run"] = True
    if getattr(args, "write_sigma", None) is not None or getattr(args, "read_sigma", None) is not None:
        ws = args.write_sigma if args.write_sigma is not None else cfg.noise.write_sigma
        rs = args.read_sigma if args.read_sigma is not None else cfg.noise.read_sigma
        updates["noise"] = NoiseModel(ws, rs)
    params = cfg.params
    for name in ("theta", "delta", "gamma_exponent"):
        val = getattr(args, name, None)
        if val is not None:
            params = replace(params, **{name: val})
    updates["params"] = params
    return apply_env_overrides(replace(cfg, **updates))


def _add_common_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--seed", type=int, help="global seed (env STOCHMEM_SEED overrides)")
    p.add_argument("--dims", help="image size WxH for synthetic inputs (default 128x128)")
    p.add_argument("--write-sigma", dest="write_sigma", type=float,
                   help="analog memory write discrepancy sigma")
    p.add_argument("--read-sigma", dest="read_sigma", type=float,
                   help="analog memory read discrepancy sigma")
    p.add_argument("--theta", type=float, help="segmentation threshold")
    p.add_argument("--delta", type=float, help="density kernel half-width")
    p.add_argument("--gamma-exponent", dest="gamma_exponent", type=float,
                   help="power-function exponent")
    p.add_argument("--free-run", dest="free_run", action="store_true",
                   help="let the comparator LFSR run across pixels instead of reseeding")
    p.add_argument("--jobs", type=int, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stochmem",
                                 description="Stochastic image-processing system simulator")
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment and report accuracy and cost")
    p_run.add_argument("--app", required=True, help="robert|median|frame|gamma|kde")
    p_run.add_argument("--design", required=True, help="conv-lfsr|conv-mtj|stochmem")
    p_run.add_argument("--length", type=int, help="bitstream length (default 1024)")
    p_run.add_argument("--input", help="input image (PGM, maxval 255)")
    p_run.add_argument("--frames", help="directory of PGM frames for frame/kde")
    p_run.add_argument("--out", help="directory for output.pgm and report.csv")
    _add_common_run_flags(p_run)

    p_sweep = sub.add_parser("sweep", help="run the app x design x length x seed grid")
    p_sweep.add_argument("--apps", default="all", help="comma list or 'all'")
    p_sweep.add_argument("--designs", default="all", help="comma list or 'all'")
    p_sweep.add_argument("--lengths", default=",".join(str(v) for v in PAPER_LENGTHS),
                         help="comma list of bitstream lengths")
    p_sweep.add_argument("--seeds", type=int, default=DEFAULT_SEEDS,
                         help="runs per configuration (seed = base + index)")
    p_sweep.add_argument("--out", required=True, help="CSV output path")
    _add_common_run_flags(p_sweep)

    p_cost = sub.add_parser("cost", help="print area and energy tables")
    p_cost.add_argument("--app", default="all", help="application or 'all'")
    p_cost.add_argument("--design", default="all", help="design or 'all'")
    p_cost.add_argument("--length", type=int, default=1024,
                        help="bitstream length for the energy table")
    p_cost.add_argument("--costs", help="unit/profile override file")

    p_fit = sub.add_parser("fit-gamma", help="fit the power function as a Bernstein polynomial")
    p_fit.add_argument("--exponent", type=float, default=0.45)
    p_fit.add_argument("--degree", type=int, default=6)

    p_gen = sub.add_parser("gen-inputs", help="write the synthetic input set as PGM files")
    p_gen.add_argument("--out", required=True, help="output directory")
    p_gen.add_argument("--dims", default="128x128")

    p_cal = sub.add_parser("calibrate", help="calibrate noise sigma or access multipliers")
    p_cal.add_argument("--mode", choices=("noise", "access"), default="noise")
    p_cal.add_argument("--target-gap", dest="target_gap", type=float, default=0.19,
                       help="accuracy gap target in percentage points (noise mode)")
    p_cal.add_argument("--tol", type=float, default=0.05, help="gap tolerance (noise mode)")
    p_cal.add_argument("--runs", type=int, default=5, help="seeds per evaluation (noise mode)")
    p_cal.add_argument("--dims", help="image size WxH (noise mode)")
    p_cal.add_argument("--seed", type=int, help="base seed (noise mode)")
    p_cal.add_argument("--jobs", type=int, help="worker processes")
    return ap


def _cmd_run(args) -> int:
    cfg = _config_from_args(args)
    report = run_experiment(cfg)
    print("app\tdesign\tlength\tseed\tinaccuracy_percent\tenergy_pJ_per_pixel\tarea_um2")
    print(f"{report.app.value}\t{report.design.value}\t{report.length}\t{report.seed}\t"
          f"{report.inaccuracy_percent:.6f}\t{report.energy.total:.4f}\t"
          f"{_fmt(report.area.total)}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        save_pgm(report.output, out / "output.pgm")
        (out / "report.csv").write_text(
            ",".join(CSV_COLUMNS) + "\n" + report_csv_row(report) + "\n")
        print(f"wrote {out / 'output.pgm'}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = _config_from_args(args)
    lengths = tuple(int(s) for s in args.lengths.split(",") if s)
    jobs = args.jobs or 1
    lines = sweep(cfg, apps=_parse_apps(args.apps), designs=_parse_designs(args.designs),
                  lengths=lengths, n_seeds=args.seeds, out_csv=args.out, jobs=jobs)
    print(f"wrote {args.out} ({len(lines) - 1} rows)")
    return 0


def _print_report(report, value_name: str) -> None:
    print(f"unit\tgroup\t{value_name}")
    for unit, group, value in report.entries:
        print(f"{unit}\t{group}\t{_fmt(value)}")
    shares = share_breakdown(report)
    print(f"total\t\t{_fmt(report.total)}")
    print("shares\t" + "\t".join(f"{g}={shares[g]:.3f}" for g in ("input_layer", "conversion", "logic")))


def _cmd_cost(args) -> int:
    costs, profiles = (load_cost_config(args.costs) if args.costs
                       else (None, {a: default_profile(a) for a in AppKind}))
    apps = _parse_apps(args.app)
    designs = _parse_designs(args.design)
    for app in apps:
        profile = profiles[app]
        for design in designs:
            print(f"# area_um2 app={app.value} design={design.value}")
            _print_report(area_report(design, profile, costs), "area_um2")
            print(f"# energy_pJ_per_pixel app={app.value} design={design.value} "
                  f"length={args.length}")
            _print_report(energy_report(design, profile, args.length, costs=costs),
                          "energy_pJ")
    return 0


def _cmd_fit_gamma(args) -> int:
    poly, max_err = fit_bernstein(lambda x: x ** args.exponent, args.degree)
    print("coefficient\tvalue")
    for k, c in enumerate(poly.coeffs):
        print(f"b{k}\t{c:.6f}")
    print(f"max_fit_error\t{max_err:.6f}")
    return 0


def _cmd_gen_inputs(args) -> int:
    dims = _parse_dims(args.dims)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for kind in ("scene", "gradient", "checkerboard", "salt-pepper"):
        path = out / f"{kind.replace('-', '_')}.pgm"
        save_pgm(gen_test_inputs(kind, dims), path)
        print(f"wrote {path}")
    video_dir = out / "video"
    video_dir.mkdir(exist_ok=True)
    for i, frame in enumerate(gen_test_inputs("video", dims)):
        save_pgm(frame, video_dir / f"frame_{i:02d}.pgm")
    print(f"wrote {video_dir} (33 frames)")
    return 0


def _cmd_calibrate(args) -> int:
    if args.mode == "access":
        mult, red_ml, red_sm = calibrate_access()
        print("multiplier\tvalue")
        for k, v in mult.as_dict().items():
            print(f"{k}\t{v:g}")
        print(f"mtj_vs_lfsr_reduction_percent\t{red_ml:.2f}")
        print(f"stochmem_vs_mtj_reduction_percent\t{red_sm:.2f}")
        return 0
    template = ExperimentConfig()
    if args.dims:
        template = replace(template, dims=_parse_dims(args.dims))
    if args.seed is not None:
        template = replace(template, global_seed=args.seed)
    noise, gap = calibrate_noise(args.target_gap, template, tol_pp=args.tol,
                                 n_seeds=args.runs, jobs=args.jobs or 1)
    print(f"sigma\t{noise.write_sigma:.6f}")
    print(f"achieved_gap_pp\t{gap:.4f}")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "cost": _cmd_cost,
    "fit-gamma": _cmd_fit_gamma,
    "gen-inputs": _cmd_gen_inputs,
    "calibrate": _cmd_calibrate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
