"""Command-line entry point wiring every module together.

Subcommands: sieve, verify, summatory, stats, simulate, trace, oeis-check.
Data goes to stdout or the --out file (CSV by default, NDJSON with
--format json: one object per row); logging goes to stderr.  Exit codes:
0 success, 1 failed identity/comparison or operational error, 2 usage error.
"""

import argparse
import json
import logging
import sys
from contextlib import nullcontext
from dataclasses import dataclass, field

from . import arith, dirichlet, randmodel, sieve, stats, tracker
from .parallel import WorkerPool, default_threads
from .summatory import CheckpointPolicy, SummatoryRows, build_series

log = logging.getLogger("mforge")

USAGE_ERROR = 2


@dataclass
class RunConfig:
    """Everything one invocation needs; flags override config-file values."""

    subcommand: str
    limit: int = 0
    segment_size: int = sieve.DEFAULT_SEGMENT_CAPACITY
    threads: int = 1
    policy: CheckpointPolicy = field(default_factory=CheckpointPolicy)
    out: str | None = None
    fmt: str = "csv"
    seed: int = 0
    verbosity: int = 0
    # subcommand-specific knobs
    identity: str = "all"
    x: int = 0
    report: str = ""
    k: int | None = None
    m: int | None = None
    p: int | None = None
    statistic: str = "omega"
    trials: int = 1
    x_max: int = 0
    infile: str | None = None
    sequence: str = ""
    bfile: str | None = None


def _open_out(config):
    if config.out in (None, "-"):
        return nullcontext(sys.stdout)
    return open(config.out, "w")


def _emit_rows(config, header: list, rows):
    """Write rows as CSV or as NDJSON objects mirroring the CSV columns."""
    with _open_out(config) as fh:
        if config.fmt == "json":
            for row in rows:
                fh.write(json.dumps(dict(zip(header, row))) + "\n")
        else:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join("" if v is None else str(v) for v in row) + "\n")


def _fmt_float(v: float) -> str:
    return f"{v:.12g}"


def cmd_sieve(config: RunConfig) -> int:
    primes = sieve.primes_up_to(config.limit)
    if not config.out:
        raise ValueError("sieve requires --out PATH for the binary cache")
    sieve.save_prime_cache(config.out, primes)
    log.info("cached %d primes <= %d to %s", len(primes), config.limit, config.out)
    return 0


def cmd_verify(config: RunConfig) -> int:
    names = dirichlet.IDENTITY_NAMES if config.identity == "all" else (config.identity,)
    need_g = any(n in ("b", "c", "d", "f") for n in names)
    profile = arith.profile_range(sieve.Segment(1, config.limit + 1), include_g=need_g)
    failed = False
    with _open_out(config) as fh:
        for name in names:
            report = dirichlet.verify_identity(name, config.limit, profile=profile)
            fh.write(f"{report}  -- {dirichlet.IDENTITY_LABELS[name]}\n")
            failed |= not report.passed
    return 1 if failed else 0


def cmd_summatory(config: RunConfig) -> int:
    pool = WorkerPool(config.threads)
    series = build_series(config.limit, config.policy,
                          segment_size=config.segment_size, pool=pool)
    if config.fmt == "json":
        rows = zip(series.checkpoints.tolist(), series.M.tolist(),
                   series.G.tolist(), series.Qsq.tolist(), series.pi.tolist())
        _emit_rows(config, ["x", "M", "G", "Qsq", "pi"], rows)
    else:
        with _open_out(config) as fh:
            series.to_csv(fh)
    return 0


def cmd_stats(config: RunConfig) -> int:
    pool = WorkerPool(config.threads)
    x = config.x
    kind = config.report
    if kind in ("omega-k", "excess", "sign", "conditional"):
        counts = stats.collect_counts(x, config.segment_size, pool=pool)
    if kind == "omega-k":
        r = stats.omega_k_density(x, _require(config.k, "--k"), counts)
        rows = [(r.x, r.k, r.count, _fmt_float(r.empirical),
                 _fmt_float(r.predicted), _fmt_float(r.abs_error))]
        _emit_rows(config, ["x", "k", "count", "empirical", "predicted", "abs_error"], rows)
    elif kind == "excess":
        r = stats.excess_density(x, _require(config.m, "--m"), counts)
        rows = [(r.x, r.k, r.count, _fmt_float(r.empirical),
                 _fmt_float(r.predicted), _fmt_float(r.abs_error))]
        _emit_rows(config, ["x", "m", "count", "empirical", "predicted", "abs_error"], rows)
    elif kind == "sign":
        b = stats.sign_balance(x, counts)
        fp, fm = b.fractions
        rows = [(b.x, b.squarefree, b.plus, b.minus, _fmt_float(fp), _fmt_float(fm))]
        _emit_rows(config, ["x", "squarefree", "plus", "minus",
                            "plus_fraction", "minus_fraction"], rows)
    elif kind == "conditional":
        r = stats.conditional_squarefree(x, _require(config.k, "--k"), counts)
        rows = [(r.x, r.k, r.class_count, r.squarefree_in_class,
                 None if r.undefined else _fmt_float(r.conditional),
                 _fmt_float(r.unconditional),
                 None if r.undefined else _fmt_float(r.ratio),
                 int(r.undefined))]
        _emit_rows(config, ["x", "k", "class_count", "squarefree_in_class",
                            "conditional", "unconditional", "ratio", "undefined"], rows)
    elif kind == "exponent":
        table = stats.prime_exponent_distribution(x, _require(config.p, "--p"),
                                                  config.k if config.k is not None else 6)
        rows = [(r.x, config.p, r.k, r.count, _fmt_float(r.empirical),
                 _fmt_float(r.predicted)) for r in table]
        _emit_rows(config, ["x", "p", "k", "count", "empirical", "predicted"], rows)
    elif kind == "cdf":
        cdf = stats.erdos_kac_cdf(x, config.statistic, config.segment_size, pool=pool)
        rows = list(_cdf_quantile_rows(cdf))
        log.info("KS distance vs standard normal at x=%d (%s): %.6f",
                 x, config.statistic, cdf.ks)
        _emit_rows(config, ["quantile", "z", "ecdf", "normal_cdf", "ks"], rows)
    else:
        raise ValueError(f"unknown stats report {kind!r}")
    return 0


def _cdf_quantile_rows(cdf, grid: int = 256):
    from scipy.special import ndtr
    n = cdf.size
    for i in range(1, grid + 1):
        j = min(n - 1, max(0, (i * n) // grid - 1))
        z = float(cdf.values[j])
        yield (_fmt_float(i / grid), _fmt_float(z), _fmt_float((j + 1) / n),
               _fmt_float(float(ndtr(z))), _fmt_float(cdf.ks))


def _require(value, flag):
    if value is None:
        raise ValueError(f"this report requires {flag}")
    return value


def cmd_simulate(config: RunConfig) -> int:
    pool = WorkerPool(config.threads)
    runs = randmodel.simulate_many(config.seed, config.trials, config.x_max,
                                   config.policy, pool=pool)
    summary = randmodel.lil_statistic(runs)
    log.info("lil sup: aggregate %.6f (mean %.6f over %d runs; reference %.7f)",
             summary.aggregate_sup, summary.aggregate_mean, len(runs),
             summary.reference)
    if config.fmt == "json":
        rows = [(t, int(r.checkpoints[i]), int(r.mbar[i]),
                 float(r.lil_running_max[i])
                 if r.checkpoints[i] >= randmodel.LIL_MIN_X else None)
                for t, r in enumerate(runs) for i in range(len(r.checkpoints))]
        _emit_rows(config, ["trial", "x", "Mbar", "lil_stat"], rows)
    else:
        with _open_out(config) as fh:
            randmodel.write_runs_csv(fh, runs)
    return 0


def cmd_trace(config: RunConfig) -> int:
    if not config.infile:
        raise ValueError("trace requires --in series.csv")
    with open(config.infile) as fh:
        rows = SummatoryRows.from_csv(fh)
    trace = tracker.build_trace(rows)
    if config.fmt == "json":
        out_rows = []
        for i in range(len(trace.x)):
            out_rows.append((int(trace.x[i]), float(trace.q[i]), float(trace.gonek[i]),
                             float(trace.r1[i]), float(trace.r2[i]), float(trace.rG1[i]),
                             float(trace.rG2[i]),
                             float(trace.twice_g[i]) if trace.twice_g_defined[i] else None,
                             float(trace.qhat_pred[i]), int(trace.qhat_exact[i])))
        _emit_rows(config, list(tracker.TRACE_COLUMNS), out_rows)
    else:
        with _open_out(config) as fh:
            tracker.write_trace_csv(fh, trace)
    return 0


OEIS_SEQUENCES = {
    "mu": "mobius",
    "lambda": "liouville",
    "g": "g",
}


def cmd_oeis_check(config: RunConfig) -> int:
    if config.sequence not in OEIS_SEQUENCES:
        raise ValueError(f"--sequence must be one of {sorted(OEIS_SEQUENCES)}")
    if not config.bfile:
        raise ValueError("oeis-check requires --bfile PATH")
    max_idx = 0
    with open(config.bfile) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            max_idx = max(max_idx, int(line.split()[0]))
    limit = min(max_idx, config.limit) if config.limit else max_idx
    if limit < 1:
        raise ValueError(f"{config.bfile}: no usable entries")
    profile = arith.profile_range(sieve.Segment(1, limit + 1),
                                  include_g=config.sequence == "g")
    values = getattr(profile, OEIS_SEQUENCES[config.sequence])
    mismatch = arith.compare_bfile(config.bfile, values[:limit], start=1)
    if mismatch is None:
        print(f"{config.sequence}: all entries up to {limit} match {config.bfile}")
        return 0
    idx, want, got = mismatch
    print(f"{config.sequence}: first mismatch at index {idx}: "
          f"file has {want}, computed {got}")
    return 1


_COMMANDS = {
    "sieve": cmd_sieve,
    "verify": cmd_verify,
    "summatory": cmd_summatory,
    "stats": cmd_stats,
    "simulate": cmd_simulate,
    "trace": cmd_trace,
    "oeis-check": cmd_oeis_check,
}


def run(config: RunConfig) -> int:
    """Dispatch a validated config; returns the process exit code."""
    try:
        return _COMMANDS[config.subcommand](config)
    except (ValueError, OverflowError) as exc:
        log.error("%s", exc)
        return USAGE_ERROR
    except OSError as exc:
        log.error("%s: %s", getattr(exc, "filename", "?"), exc.strerror or exc)
        return 1


def _read_config_file(path) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            out[key.strip()] = val.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps subparser defaults from clobbering values parsed before
    # the subcommand name (global flags are accepted in both positions)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS,
                        help="key=value defaults file; flags override")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="worker count (default: MFORGE_THREADS or 1)")
    common.add_argument("--segment-size", type=int, default=argparse.SUPPRESS,
                        help="sieve segment capacity (default 2^22)")
    common.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS,
                        help="more logging on stderr")
    common.add_argument("-q", "--quiet", action="store_true",
                        default=argparse.SUPPRESS, help="errors only")

    ap = argparse.ArgumentParser(
        prog="mforge",
        description="Sieve laboratory for Mertens-adjacent arithmetic functions.",
        parents=[common],
    )
    sub = ap.add_subparsers(dest="subcommand", required=True,
                            parser_class=lambda **kw: argparse.ArgumentParser(
                                parents=[common], **kw))

    def add_out(p):
        p.add_argument("--out", "--output", dest="out", default=None,
                       help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv",
                       help="csv (default) or json, one object per row")

    p = sub.add_parser("sieve", help="build and cache seed primes")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--out", "--output", dest="out", required=True,
                   help="binary cache path (MFPRIMES1 header + u64le primes)")

    p = sub.add_parser("verify", help="exact convolution identity suite")
    p.add_argument("--identity", default="all",
                   choices=list(dirichlet.IDENTITY_NAMES) + ["all"],
                   help="which identity to check (default: all); identity e "
                        "runs the reference inverse, sized for limits <= ~1e6")
    p.add_argument("--limit", type=int, required=True,
                   help="check the identity exactly on 1..N")
    p.add_argument("--out", "--output", dest="out", default=None)

    p = sub.add_parser("summatory", help="checkpointed summatory series")
    p.add_argument("--limit", type=int, required=True,
                   help="upper limit N of the streaming pass")
    p.add_argument("--checkpoints", default="geometric:1.25",
                   help="all | geometric[:ratio] | explicit:x1,x2,... "
                        "(default: geometric:1.25 plus powers of 10)")
    add_out(p)

    p = sub.add_parser("stats", help="distribution measurements")
    p.add_argument("--x", type=int, required=True, help="count over n <= x")
    p.add_argument("--report", required=True,
                   choices=("omega-k", "excess", "sign", "conditional", "exponent", "cdf"))
    p.add_argument("--k", type=int, default=None,
                   help="factor count (omega-k, conditional) or max exponent (exponent, default 6)")
    p.add_argument("--m", type=int, default=None, help="excess factor count")
    p.add_argument("--p", type=int, default=None, help="prime for the exponent report")
    p.add_argument("--statistic", choices=("omega", "log_c_omega"), default="omega",
                   help="cdf statistic (default: omega)")
    add_out(p)

    p = sub.add_parser("simulate", help="randomized Mobius model runs")
    p.add_argument("--seed", type=int, default=0,
                   help="base seed; trial i uses stream seed+i (default: 0)")
    p.add_argument("--trials", type=int, default=1,
                   help="independent trajectories (default: 1)")
    p.add_argument("--x-max", type=int, required=True,
                   help="draws per trajectory (>= 16)")
    p.add_argument("--checkpoints", default="geometric:1.25",
                   help="recording points (default: geometric:1.25)")
    add_out(p)

    p = sub.add_parser("trace", help="scaled growth ratios from a series CSV")
    p.add_argument("--in", dest="infile", required=True, help="checkpoint CSV")
    add_out(p)

    p = sub.add_parser("oeis-check", help="compare a sequence against a b-file")
    p.add_argument("--sequence", required=True, choices=sorted(OEIS_SEQUENCES))
    p.add_argument("--bfile", required=True)
    p.add_argument("--limit", type=int, default=0,
                   help="cap on indices to check (default: whole file)")

    return ap


def parse_config(argv) -> RunConfig:
    ap = build_parser()
    ns = ap.parse_args(argv)

    defaults = {}
    if getattr(ns, "config", None):
        defaults = _read_config_file(ns.config)

    threads = getattr(ns, "threads", None)
    if threads is None:
        threads = int(defaults.get("threads", default_threads()))
    segment_size = getattr(ns, "segment_size", None)
    if segment_size is None:
        segment_size = int(defaults.get("segment_size", sieve.DEFAULT_SEGMENT_CAPACITY))
    policy_text = getattr(ns, "checkpoints", None) or defaults.get("checkpoints") \
        or "geometric:1.25"

    config = RunConfig(
        subcommand=ns.subcommand,
        limit=getattr(ns, "limit", 0) or int(defaults.get("limit", 0)),
        segment_size=segment_size,
        threads=threads,
        policy=CheckpointPolicy.parse(policy_text),
        out=getattr(ns, "out", None),
        fmt=getattr(ns, "format", "csv"),
        seed=getattr(ns, "seed", 0),
        identity=getattr(ns, "identity", "all"),
        x=getattr(ns, "x", 0),
        report=getattr(ns, "report", ""),
        k=getattr(ns, "k", None),
        m=getattr(ns, "m", None),
        p=getattr(ns, "p", None),
        statistic=getattr(ns, "statistic", "omega"),
        trials=getattr(ns, "trials", 1),
        x_max=getattr(ns, "x_max", 0),
        infile=getattr(ns, "infile", None),
        sequence=getattr(ns, "sequence", ""),
        bfile=getattr(ns, "bfile", None),
    )  # verbosity resolved below from the SUPPRESS-defaulted flags
    quiet = getattr(ns, "quiet", False)
    config.verbosity = -1 if quiet else getattr(ns, "verbose", 0)
    _validate(config)
    return config


def _validate(config: RunConfig):
    if config.subcommand in ("sieve", "verify", "summatory") and config.limit < 1:
        raise SystemExit(_usage_fail(f"--limit must be >= 1, got {config.limit}"))
    if config.subcommand == "stats" and config.x < 1:
        raise SystemExit(_usage_fail(f"--x must be >= 1, got {config.x}"))
    if config.subcommand == "simulate":
        if config.x_max < randmodel.LIL_MIN_X:
            raise SystemExit(_usage_fail(f"--x-max must be >= {randmodel.LIL_MIN_X}"))
        if config.trials < 1:
            raise SystemExit(_usage_fail("--trials must be >= 1"))
    if config.threads < 1:
        raise SystemExit(_usage_fail("--threads must be >= 1"))


def _usage_fail(msg: str) -> int:
    print(f"mforge: error: {msg}", file=sys.stderr)
    return USAGE_ERROR


def main(argv=None) -> int:
    config = parse_config(sys.argv[1:] if argv is None else argv)
    level = logging.WARNING
    if config.verbosity < 0:
        level = logging.ERROR
    elif config.verbosity == 1:
        level = logging.INFO
    elif config.verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(levelname)s %(name)s: %(message)s", force=True)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
