"""
Command-line entry point.

    keyhrv analyze  --keystrokes K --rr R [--keymap M] [--config C] [--<key> VALUE ...]
    keyhrv baseline --keystrokes K [--keymap M] [--config C] [--<key> VALUE ...]
    keyhrv hrv      --rr R [--config C] [--<key> VALUE ...]
    keyhrv synth    SPEC [--output_dir DIR]

Every key of the config file can be overridden by a flag of the same name.
Exit status: 0 success, 1 usage error, 2 data error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import fields
from pathlib import Path

from . import export, hrv, pipeline
from .config import AnalysisConfig, coerce, read_config_file
from .ingest import default_keymap, load_keymap, load_keystrokes, load_rr
from .synth import generate, load_session_spec, write_session

logger = logging.getLogger("keyhrv")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value config file")
    group = p.add_argument_group("config overrides")
    for f in fields(AnalysisConfig):
        group.add_argument(f"--{f.name}", dest=f"cfg_{f.name}", metavar="VALUE", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="keyhrv", description="Keystroke dynamics vs. heart rate variability analysis.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="full keystroke + HRV correlation analysis")
    p.add_argument("--keystrokes", required=True)
    p.add_argument("--rr", required=True)
    p.add_argument("--keymap")
    _add_config_flags(p)

    p = sub.add_parser("baseline", help="bigram baseline and window latencies only")
    p.add_argument("--keystrokes", required=True)
    p.add_argument("--keymap")
    _add_config_flags(p)

    p = sub.add_parser("hrv", help="HRV windows over the whole RR recording")
    p.add_argument("--rr", required=True)
    _add_config_flags(p)

    p = sub.add_parser("synth", help="generate a synthetic dataset from a session spec file")
    p.add_argument("spec")
    p.add_argument("--output_dir", default=None)
    return parser


def resolve_config(args: argparse.Namespace) -> AnalysisConfig:
    values = {}
    if args.config:
        try:
            values.update(read_config_file(args.config))
        except OSError as err:
            raise FileNotFoundError(f"cannot read config {args.config}: {err.strerror}") from None
    for f in fields(AnalysisConfig):
        v = getattr(args, f"cfg_{f.name}")
        if v is not None:
            values[f.name] = v
    try:
        return AnalysisConfig(**coerce(values))
    except (TypeError, ValueError) as err:
        raise UsageError(f"invalid configuration: {err}") from None


def _keymap(args):
    return load_keymap(args.keymap) if args.keymap else default_keymap()


def _check_readable(*paths):
    for path in paths:
        if path and not Path(path).is_file():
            raise FileNotFoundError(f"no such file: {path}")


def run_analyze(args) -> int:
    config = resolve_config(args)
    _check_readable(args.keystrokes, args.rr, args.keymap)
    events = load_keystrokes(args.keystrokes, _keymap(args), strict=config.strict_keymap)
    rr = load_rr(args.rr, config.rr_start_ms, (config.rr_min_ms, config.rr_max_ms))
    result = pipeline.analyze(events, rr, config)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    ks = result.keystrokes
    export.write_baseline(out / "baseline.csv", ks.baseline)
    export.write_windows(out / "windows.csv", ks.windows)
    export.write_hrv_windows(out / "hrv_windows.csv", result.hrv_windows)
    export.write_scatter(out / "scatter.csv", result.alignment.pairs)
    report = export.report_dict(
        result.report,
        bigram_grand_mean_ms=ks.baseline.grand_mean,
        hrv_baseline_sdnn_ms=result.hrv_baseline.mean_sdnn_ms,
        n_hrv_windows=len(result.hrv_windows),
        unmatched_keystroke_windows=result.alignment.unmatched_keystroke,
        unmatched_hrv_windows=result.alignment.unmatched_hrv,
        n_episodes=len(ks.episodes),
        rejected_beats=result.nn.rejected_count,
        implausible_beats=rr.n_dropped,
    )
    export.write_json(out / "report.json", report)
    r = report["pearson_r"]
    logger.info("n=%d pearson_r=%s -> %s", report["n"], "n/a" if r is None else f"{r:.3f}", out)
    return EXIT_OK


def run_baseline(args) -> int:
    config = resolve_config(args)
    _check_readable(args.keystrokes, args.keymap)
    events = load_keystrokes(args.keystrokes, _keymap(args), strict=config.strict_keymap)
    ks = pipeline.analyze_keystrokes(events, config)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    export.write_baseline(out / "baseline.csv", ks.baseline)
    export.write_windows(out / "windows.csv", ks.windows)
    logger.info("grand mean %.1f ms over %d bigrams", ks.baseline.grand_mean, len(ks.baseline.per_bigram_mean))
    return EXIT_OK


def run_hrv(args) -> int:
    config = resolve_config(args)
    _check_readable(args.rr)
    rr = load_rr(args.rr, config.rr_start_ms, (config.rr_min_ms, config.rr_max_ms))
    nn = hrv.filter_ectopic_malik(rr, config.malik_tolerance)
    first = int(nn.end_ms[0] - round(nn.nn_ms[0]))
    anchors = hrv.sliding_anchors(first, int(nn.end_ms[-1]), config.window_ms, config.step_ms)
    windows = hrv.window_hrv(nn, anchors, config.window_ms, config.min_intervals)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    export.write_hrv_windows(out / "hrv_windows.csv", windows)
    summary = {"n_beats": len(rr), "rejected_beats": nn.rejected_count, "implausible_beats": rr.n_dropped}
    if windows:
        summary.update(export.hrv_baseline_dict(hrv.hrv_baseline(windows)))
    export.write_json(out / "hrv_summary.json", summary)
    return EXIT_OK


def run_synth(args) -> int:
    _check_readable(args.spec)
    spec = load_session_spec(args.spec)
    outdir = args.output_dir or "synth_out"
    paths = write_session(generate(spec), outdir)
    logger.info("wrote %s", ", ".join(str(p) for p in paths.values()))
    return EXIT_OK


COMMANDS = {"analyze": run_analyze, "baseline": run_baseline, "hrv": run_hrv, "synth": run_synth}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as err:
        print(f"keyhrv: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as err:
        print(f"keyhrv: error: {err}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
