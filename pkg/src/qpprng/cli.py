"""Command-line interface: ``qpprng {gen,stats,dual,bench,selftest}``.

Exit codes: 0 success, 1 usage error, 2 runtime error, 3 self-test failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from importlib import resources
from pathlib import Path

import numpy as np

from qpprng.clock import (
    ClockExhausted,
    ConstantClock,
    JitterConfig,
    ScriptedClock,
    SimulatedJitterClock,
    SystemClock,
    default_divisor,
)
from qpprng.engine import Engine, EngineConfig
from qpprng.permutation import DEFAULT_ITERATION_CAP, DEFAULT_STATIC_SEED, IterationCapExceeded
from qpprng.stats import InsufficientSamples, histogram, report

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2
EXIT_SELFTEST = 3

STATS_DEFAULT_COUNT = 1_000_000
GOLDEN_COUNT = 1024
GOLDEN_ARGS = ["--n", "5", "--m", "4", "--seed", str(DEFAULT_STATIC_SEED), "--divisor", "1"]

# Flag defaults; a config file may override these, explicit flags override both.
DEFAULTS = {
    "n": 5,
    "m": 4,
    "seed": DEFAULT_STATIC_SEED,
    "divisor": None,
    "clock": "system",
    "jitter_base": 50,
    "jitter_width": None,
    "jitter_dist": "uniform",
    "jitter_sigma": None,
    "jitter_seed": None,
    "iteration_cap": DEFAULT_ITERATION_CAP,
    "init_rounds": 8,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("engine")
    g.add_argument("--n", type=int, help="array size (default 5)")
    g.add_argument("--m", type=int, help="sorting rounds per output byte (default 4)")
    g.add_argument("--seed", type=int, help="static seed for the pad generator (default 123456789)")
    g.add_argument("--divisor", type=int, help="clock divisor (default: per platform)")
    g.add_argument("--iteration-cap", type=int, help="max permutations per sort")
    g.add_argument("--init-rounds", type=int, help="initialization sorts (default 8)")
    g.add_argument(
        "--clock",
        help="system | simulated | constant | scripted:FILE (one ns reading per line)",
    )
    g.add_argument("--jitter-base", type=int, help="simulated clock: ns per permutation (default 50)")
    g.add_argument("--jitter-width", type=int, help="simulated clock: fluctuation range in ns (default 256*divisor)")
    g.add_argument("--jitter-dist", choices=["uniform", "normal"], help="simulated clock fluctuation law")
    g.add_argument("--jitter-sigma", type=float, help="simulated clock: normal-law standard deviation")
    g.add_argument("--jitter-seed", type=int, help="simulated clock: RNG seed")
    g.add_argument("--config", type=Path, help="JSON config file; flags take precedence")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = _Parser(prog="qpprng", description="Random bytes from permutation-sorting counts.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", parents=[common], help="generate random bytes")
    p.add_argument("--count", type=int, default=STATS_DEFAULT_COUNT)
    p.add_argument("-o", "--output", default="-", help="output file ('-' for stdout)")
    p.add_argument("--format", choices=["raw", "hex", "csv"], default="raw")

    p = sub.add_parser("stats", parents=[common], help="entropy report for a raw byte file")
    p.add_argument("input", help="raw byte file ('-' for stdin)")
    p.add_argument("--format", choices=["text", "kv", "json"], default="text")

    p = sub.add_parser("dual", parents=[common], help="capture count and jitter byte streams")
    p.add_argument("--count", type=int, default=STATS_DEFAULT_COUNT)
    p.add_argument("--output-dir", type=Path, default=Path("."))
    p.add_argument("--prefix", default="dual")

    p = sub.add_parser("bench", parents=[common], help="throughput benchmark")
    p.add_argument("--count", type=int, default=4096)

    p = sub.add_parser("selftest", parents=[common], help="golden-vector and live entropy checks")
    p.add_argument("--golden", type=Path, help="golden output file (default: bundled)")
    p.add_argument("--golden-clock", type=Path, help="golden scripted clock file (default: bundled)")
    p.add_argument("--live-count", type=int, default=65536)
    return parser


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        else:
            out[key] = v
    return out


# Accepted config-file keys, dotted form, mapped to option names.
_CONFIG_KEYS = {
    "n": "n",
    "m": "m",
    "seed": "seed",
    "engine.n": "n",
    "engine.m": "m",
    "engine.seed": "seed",
    "engine.iteration_cap": "iteration_cap",
    "engine.init_rounds": "init_rounds",
    "clock.divisor": "divisor",
    "clock.mode": "clock",
    "clock.jitter_base": "jitter_base",
    "clock.jitter_width": "jitter_width",
    "clock.jitter_dist": "jitter_dist",
    "clock.jitter_sigma": "jitter_sigma",
    "clock.jitter_seed": "jitter_seed",
}


def resolve_options(args: argparse.Namespace) -> dict:
    opts = dict(DEFAULTS)
    if args.config is not None:
        try:
            raw = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        for key, value in _flatten(raw).items():
            if key not in _CONFIG_KEYS:
                raise UsageError(f"unknown config key {key!r}")
            opts[_CONFIG_KEYS[key]] = value
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            opts[key] = value
    return opts


def make_clock(opts: dict, divisor: int):
    mode = opts["clock"]
    if mode == "system":
        return SystemClock()
    if mode == "constant":
        return ConstantClock()
    if mode == "simulated":
        width = opts["jitter_width"] if opts["jitter_width"] is not None else 256 * divisor
        return SimulatedJitterClock(
            base_ns=opts["jitter_base"],
            width=width,
            distribution=opts["jitter_dist"],
            sigma=opts["jitter_sigma"],
            seed=opts["jitter_seed"],
        )
    if mode.startswith("scripted:"):
        path = mode.split(":", 1)[1]
        try:
            return ScriptedClock.from_file(path)
        except OSError as exc:
            raise UsageError(f"cannot read clock script {path}: {exc}") from exc
    raise UsageError(f"unknown clock mode {mode!r}")


def make_engine(opts: dict) -> Engine:
    try:
        jitter = JitterConfig(opts["divisor"]) if opts["divisor"] is not None else default_divisor()
        cfg = EngineConfig(
            n=opts["n"],
            m=opts["m"],
            static_seed=opts["seed"],
            jitter=jitter,
            init_rounds=opts["init_rounds"],
            iteration_cap=opts["iteration_cap"],
        )
        clock = make_clock(opts, jitter.divisor)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return Engine.initialize(cfg, clock)


def config_echo(eng: Engine, opts: dict) -> str:
    cfg = eng.cfg
    return (
        f"n={cfg.n}\nm={cfg.m}\nseed={cfg.static_seed}\ndivisor={cfg.jitter.divisor}\n"
        f"clock={opts['clock']}\ninit_rounds={cfg.init_rounds}\niteration_cap={cfg.iteration_cap}\n"
    )


def _write_output(path: str, data: bytes, fmt: str) -> None:
    if fmt == "raw":
        payload = data
    elif fmt == "hex":
        payload = (data.hex() + "\n").encode()
    else:
        payload = ("value\n" + "".join(f"{b}\n" for b in data)).encode()
    if path == "-":
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
    else:
        Path(path).write_bytes(payload)


def cmd_gen(args, opts) -> int:
    if args.count < 0:
        raise UsageError("--count must be >= 0")
    eng = make_engine(opts)
    data = eng.generate(args.count)
    _write_output(args.output, data, args.format)
    return EXIT_OK


def cmd_stats(args, opts) -> int:
    data = sys.stdin.buffer.read() if args.input == "-" else Path(args.input).read_bytes()
    rep = report(data)
    if args.format == "kv":
        print(rep.to_kv(), end="")
    elif args.format == "json":
        print(rep.to_json())
    else:
        print(rep.to_text(), end="")
    return EXIT_OK


def _write_hist_csv(path: Path, data: bytes) -> None:
    counts = histogram(data).counts
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["value", "count"])
        for v in range(256):
            w.writerow([v, int(counts[v])])


def cmd_dual(args, opts) -> int:
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    eng = make_engine(opts)
    counts, jitter = eng.capture_dual_streams(args.count)
    out = args.output_dir
    out.mkdir(parents=True, exist_ok=True)
    with (out / f"{args.prefix}.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["count_byte", "jitter_byte"])
        w.writerows(zip(counts, jitter))
    _write_hist_csv(out / f"{args.prefix}_count_hist.csv", counts)
    _write_hist_csv(out / f"{args.prefix}_jitter_hist.csv", jitter)
    print(f"samples={args.count}")
    for name, stream in (("count", counts), ("jitter", jitter)):
        try:
            rep = report(stream)
        except InsufficientSamples:
            continue
        for k, v in vars(rep).items():
            if k != "sample_count":
                print(f"{name}.{k}={v}")
    return EXIT_OK


def cmd_bench(args, opts) -> int:
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    eng = make_engine(opts)
    before = eng.counters.permutations
    t0 = time.perf_counter()
    eng.generate(args.count)
    elapsed = time.perf_counter() - t0
    perms = eng.counters.permutations - before
    print(config_echo(eng, opts), end="")
    print(f"bytes={args.count}")
    print(f"elapsed_s={elapsed:.6f}")
    print(f"bytes_per_second={args.count / elapsed:.3f}")
    print(f"permutations_per_byte={perms / args.count:.3f}")
    return EXIT_OK


def _bundled(name: str) -> Path:
    return Path(str(resources.files("qpprng") / "data" / name))


def golden_output(clock_path: Path) -> bytes:
    parser = build_parser()
    args = parser.parse_args(["gen", "--count", str(GOLDEN_COUNT), "--clock", f"scripted:{clock_path}", *GOLDEN_ARGS])
    eng = make_engine(resolve_options(args))
    return eng.generate(GOLDEN_COUNT)


def cmd_selftest(args, opts) -> int:
    golden = args.golden or _bundled("golden_1024.bin")
    golden_clock = args.golden_clock or _bundled("golden_clock.txt")
    failures = []

    try:
        got = golden_output(golden_clock)
        if got != Path(golden).read_bytes():
            failures.append(f"golden vector {golden}: output differs")
        else:
            print(f"PASS golden vector {Path(golden).name}")
    except (OSError, ClockExhausted, UsageError) as exc:
        failures.append(f"golden vector {golden}: {exc}")

    eng = make_engine(opts)
    counts, jitter = eng.capture_dual_streams(256)
    if len(set(jitter)) < 2:
        failures.append("live entropy: clock produced no jitter (all timing bytes identical)")
    data = eng.generate(args.live_count)
    try:
        shannon = report(data).shannon_bits
    except InsufficientSamples as exc:
        failures.append(f"live entropy: {exc}")
    else:
        if shannon < 7.9:
            failures.append(f"live entropy: Shannon {shannon:.5f} < 7.9 bits/byte over {args.live_count} bytes")
        else:
            print(f"PASS live entropy: Shannon {shannon:.5f} bits/byte over {args.live_count} bytes")

    for f in failures:
        print(f"FAIL {f}", file=sys.stderr)
    return EXIT_SELFTEST if failures else EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "stats": cmd_stats,
    "dual": cmd_dual,
    "bench": cmd_bench,
    "selftest": cmd_selftest,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        opts = resolve_options(args)
        return COMMANDS[args.command](args, opts)
    except UsageError as exc:
        print(f"qpprng: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IterationCapExceeded, ClockExhausted, InsufficientSamples, OSError) as exc:
        print(f"qpprng: fatal: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
