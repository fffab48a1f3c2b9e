"""Command-line front end.

Subcommands: generate, correlate, simulate, sweep, sync, session, compare.
Numeric artifacts go to files (CSV/JSON, written atomically); stdout gets a
short human summary.  Exit codes: 0 success, 1 a guarantee that should hold
was violated, 2 usage error.  JSON encodes exact rationals as "num/den"
strings.  CRTSEQ_THREADS caps sweep parallelism (0 = auto).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import baselines, channel, correlation, erasure, sync
from .core import (
    CrtParams,
    SequenceRecord,
    Variant,
    format_sequence_entry,
    generate_sequence,
)

USAGE_ERROR, GUARANTEE_VIOLATION = 2, 1


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _thread_count() -> int:
    raw = os.environ.get("CRTSEQ_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValueError(f"CRTSEQ_THREADS must be an integer, got {raw!r}") from exc
    return os.cpu_count() or 1 if n == 0 else max(1, n)


def _params(args) -> CrtParams:
    return CrtParams(args.p, args.q, Variant.parse(args.variant))


def _cmd_generate(args) -> int:
    if args.g is None and not args.all:
        raise ValueError("provide --g or --all")
    params = _params(args)
    gens = list(range(params.p)) if args.all else [args.g]
    lines, records = [], []
    for g in gens:
        seq = generate_sequence(g, params)
        lines.append(str(seq))
        records.append(SequenceRecord(params, g, seq))
    print("\n".join(lines))
    if args.out:
        _write_atomic(
            args.out,
            "".join(format_sequence_entry(r.params, r.generator, r.sequence) for r in records),
        )
    return 0


def _cmd_correlate(args) -> int:
    params = _params(args)
    a = generate_sequence(args.g, params)
    b = generate_sequence(args.h, params)
    spec = correlation.correlation_spectrum(a, b)
    try:
        predicted = correlation.predicted_distribution(
            (args.g * pow(args.h, -1, params.p)) % params.p if args.h != 0 else 0, params
        )
    except (correlation.UnsupportedParameters, ValueError):
        predicted = None
    payload = {
        "range_predicted": list(correlation.predicted_cross_range(args.g, args.h, params)),
        "histogram_bruteforce": {str(j): n for j, n in spec.histogram.items()},
        "histogram_predicted": None
        if predicted is None
        else {str(j): n for j, n in predicted.items()},
        "epsilon": _frac(correlation.pairwise_epsilon(a, b)),
    }
    text = json.dumps(payload, indent=2)
    print(text)
    if args.out:
        _write_atomic(args.out, text + "\n")
    return 0


def _load_scenario(path: str) -> channel.Scenario:
    try:
        with open(path) as fh:
            return channel.scenario_from_json(json.load(fh))
    except FileNotFoundError as exc:
        raise ValueError(f"scenario file not found: {path}") from exc


def _cmd_simulate(args) -> int:
    sc = _load_scenario(args.scenario)
    trace = channel.simulate(sc)
    rows = ["slot,outcome,sender"]
    for t in range(trace.duration):
        out = trace.outcome(t)
        if out[0] == "idle":
            rows.append(f"{t},idle,")
        elif out[0] == "success":
            rows.append(f"{t},success,{out[1]}")
        else:
            rows.append(f"{t},collision,{'+'.join(str(u) for u in out[1])}")
    _write_atomic(args.out, "\n".join(rows) + "\n")
    print(
        f"{trace.duration} slots: {trace.total_successes} successes, "
        f"{len(trace.collision_senders)} collision slots, "
        f"throughput {_frac(trace.system_throughput)}"
    )
    if args.activity:
        print(str(channel.channel_activity(trace)))
    return 0


def _cmd_sweep(args) -> int:
    ks = _parse_range(args.k_range)
    workers = _thread_count()

    def one(k: int):
        rep = channel.monte_carlo_throughput(args.p, k, args.m, args.trials, args.seed + k)
        return k, rep, channel.peak_throughput_bound(args.p, k)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, ks))
    else:
        results = [one(k) for k in ks]
    rows = ["k,L,min,mean,max,bound"]
    for k, rep, bound in results:
        L = k * args.p * args.p - args.p
        rows.append(f"{k},{L},{rep.minimum:.6f},{rep.mean:.6f},{rep.maximum:.6f},{float(bound):.6f}")
    _write_atomic(args.out, "\n".join(rows) + "\n")
    for line in rows:
        print(line)
    return 0


def _expected_activations(sc: channel.Scenario) -> dict[int, set[int]]:
    """Per user: start slots at which a correct detector must activate it
    (only starts whose full window fits in the simulated horizon)."""
    offsets = sc.resolved_offsets()
    expected: dict[int, set[int]] = {}
    for u in sc.users:
        starts = [offsets[u.user_id]] if u.sessions is None else [a for a, _ in u.sessions]
        expected[u.user_id] = {s for s in starts if s + sc.params.L <= sc.duration}
    return expected


def _cmd_sync(args) -> int:
    sc = _load_scenario(args.scenario)
    trace = channel.simulate(sc)
    signal = channel.channel_activity(trace)
    events = sync.run_detector(signal, sc.params)
    L = sc.params.L
    rows = ["slot,event,user,start"]
    for ev in events:
        if isinstance(ev, sync.Activated):
            rows.append(f"{ev.start + L},activated,{ev.user},{ev.start}")
        else:
            rows.append(f"{ev.at + L},deactivated,{ev.user},")
    _write_atomic(args.emit, "\n".join(rows) + "\n")

    expected = _expected_activations(sc)
    errors = []
    seen: dict[int, set[int]] = {u: set() for u in expected}
    for ev in events:
        if isinstance(ev, sync.Activated):
            if ev.user not in expected:
                errors.append(f"false alarm: user {ev.user} activated at {ev.start}")
            elif ev.start not in expected[ev.user]:
                errors.append(f"start error: user {ev.user} activated at {ev.start}")
            else:
                seen[ev.user].add(ev.start)
    for u, starts in expected.items():
        for s in starts - seen.get(u, set()):
            errors.append(f"missed detection: user {u} at start {s}")

    active = len(sc.users)
    guarantee = sync.sync_guarantee(sc.params.p, sc.params.q, active)
    print(f"{len(events)} events, guarantee: {guarantee.level.value}"
          + (f" ({guarantee.reason})" if guarantee.reason else ""))
    for err in errors:
        print(err)
    if errors and guarantee.guaranteed and args.assert_guarantee:
        print("guarantee violated", file=sys.stderr)
        return GUARANTEE_VIOLATION
    return 0


def _cmd_session(args) -> int:
    gens = tuple(int(x) for x in args.users.split(","))
    if args.offsets:
        offs = tuple(int(x) for x in args.offsets.split(","))
    else:
        L = args.p * (args.k * args.p + 1)
        rng = np.random.default_rng(args.seed)
        offs = tuple(int(x) for x in rng.integers(0, L, size=len(gens)))
    payloads = None
    if args.payload:
        with open(args.payload) as fh:
            raw = json.load(fh)
        payloads = {int(g): np.asarray(v, dtype=np.int64) for g, v in raw.items()}
        missing = [g for g in gens if g not in payloads]
        if missing:
            raise ValueError(f"payload file lacks symbols for users {missing}")
    report = erasure.session_roundtrip(args.p, args.k, gens, offs, payloads, seed=args.seed)
    payload = {
        "p": args.p,
        "k": args.k,
        "n": report.spec.n,
        "dim": report.spec.dim,
        "field_order": report.spec.field_order,
        "offsets": list(offs),
        "users": {
            str(g): {"erasures": report.erasure_counts[g], "recovered": report.recovered_ok[g]}
            for g in gens
        },
        "all_recovered": report.all_recovered,
        "info_throughput": _frac(report.info_throughput),
    }
    text = json.dumps(payload, indent=2)
    print(text)
    if args.out:
        _write_atomic(args.out, text + "\n")
    return 0 if report.all_recovered else GUARANTEE_VIOLATION


def _cmd_compare(args) -> int:
    p, k = args.p, args.k
    rows = ["family,period,epsilon,note"]
    crt = [generate_sequence(g, channel.construction_params(p, k)) for g in range(p)]
    rows.append(
        f"crt,{k * p * p - p},{_frac(correlation.epsilon_uniformity(crt))},computed"
    )
    prime = baselines.prime_sequences(p)
    rows.append(
        f"prime,{prime.period},{_frac(correlation.epsilon_uniformity(list(prime.sequences)))},computed"
    )
    ext = baselines.extended_prime_sequences(p)
    rows.append(
        f"extended-prime,{ext.period},{_frac(correlation.epsilon_uniformity(list(ext.sequences)))},computed"
    )
    rows.append(f"wobbling,{p ** 4},{_frac(Fraction(1, p))},not computed")
    rows.append("shift-invariant,exponential(p),0/1,not computed")
    _write_atomic(args.out, "\n".join(rows) + "\n")
    for line in rows:
        print(line)
    return 0


def _parse_range(text: str) -> list[int]:
    if ":" in text:
        lo, hi = text.split(":")
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",")]


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="crtseq", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="emit protocol sequences")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--q", type=int, required=True)
    g.add_argument("--variant", default="std", choices=["std", "mod"])
    g.add_argument("--g", type=int)
    g.add_argument("--all", action="store_true", help="all p generators")
    g.add_argument("--out")
    g.set_defaults(fn=_cmd_generate)

    c = sub.add_parser("correlate", help="brute-force vs predicted correlation")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--g", type=int, required=True)
    c.add_argument("--h", type=int, required=True)
    c.add_argument("--variant", default="std", choices=["std", "mod"])
    c.add_argument("--out")
    c.set_defaults(fn=_cmd_correlate)

    s = sub.add_parser("simulate", help="run a collision-channel scenario")
    s.add_argument("--scenario", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--activity", action="store_true", help="print the 0/1/* signal")
    s.set_defaults(fn=_cmd_simulate)

    w = sub.add_parser("sweep", help="throughput vs k for the q=kp-1 family")
    w.add_argument("--p", type=int, required=True)
    w.add_argument("--k-range", dest="k_range", required=True, help="lo:hi or comma list")
    w.add_argument("--m", type=int, required=True, help="number of users")
    w.add_argument("--trials", type=int, default=10000)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--out", required=True)
    w.set_defaults(fn=_cmd_sweep)

    y = sub.add_parser("sync", help="blind user identification over a scenario")
    y.add_argument("--scenario", required=True)
    y.add_argument("--emit", required=True)
    y.add_argument("--assert-guarantee", dest="assert_guarantee", action="store_true")
    y.set_defaults(fn=_cmd_sync)

    e = sub.add_parser("session", help="erasure-coded round trip, q=kp+1")
    e.add_argument("--p", type=int, required=True)
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--users", required=True, help="comma-separated generators")
    e.add_argument("--offsets", help="comma-separated delays (default: sampled)")
    e.add_argument("--payload", help="JSON file: generator -> symbol list")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out")
    e.set_defaults(fn=_cmd_session)

    t = sub.add_parser("compare", help="uniformity table across families")
    t.add_argument("--p", type=int, required=True)
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--out", required=True)
    t.set_defaults(fn=_cmd_compare)
    return ap


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
