"""Command-line entry point: ``isidetect <command> ...``."""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import analysis
from .channel import add_awgn, gram_coefficients, parse_taps, transmit_noiseless
from .detect_lp import lp_detect
from .detect_mp import MIN_SUM, SUM_PRODUCT, MpConfig, mp_detect
from .ldpc import generate_regular, load_alist, save_alist
from .ml import viterbi_ml
from .sim import SweepConfig, resolve_channel, run_sweep, snr_to_sigma


def _channel(args):
    return resolve_channel(args.taps) if not any(c in args.taps for c in ",. ") \
        else parse_taps(args.taps)


def _floats(text):
    return np.array([float(v) for v in text.replace(",", " ").split()])


def cmd_classify(args):
    ch = _channel(args)
    c = analysis.classify_channel(ch, args.n, args.window)
    info = {
        "taps": list(ch.taps), "lambda": [float(v) + 0.0 for v in c.lambdas],
        "nc": c.nc, "wnc": c.wnc, "delta_inf": c.delta_inf, "d_min": c.d_min,
        "d_min_event": {"F": list(c.event.F), "x": list(c.event.x_F)},
        "label": c.label,
    }
    if args.dot:
        from .tanner import build_pr_graph
        n = args.n or max(4 * (ch.memory + 1), 8)
        with open(args.dot, "w") as fh:
            fh.write(build_pr_graph(gram_coefficients(ch, n), n).to_dot())
    if c.known_as:
        info["known_as"] = c.known_as
        info["delta_inf_mismatch"] = c.delta_inf_mismatch
    if args.json:
        print(json.dumps(info, indent=2))
        return 0
    print(f"taps        {ch}")
    print("lambda      " + " ".join(f"{v + 0.0:g}" for v in c.lambdas))
    print(f"NC          {c.nc}")
    print(f"WNC         {c.wnc}")
    print(f"delta_inf   {c.delta_inf:.6g}")
    print(f"d_min       {c.d_min:.6g}  F={list(c.event.F)}  x={list(c.event.x_F)}")
    print(f"label       {c.label}")
    for note in c.notes:
        print(f"note        {note}")
    return 0


def cmd_analyze(args):
    ch = _channel(args)
    sigma = args.sigma if args.sigma is not None else snr_to_sigma(args.snr_db)
    lam = gram_coefficients(ch, max(args.window, ch.memory + 1)).stationary
    d, F, x_F = analysis.search_min_distance(lam, args.window)
    x_full = np.zeros(args.window)
    x_full[list(F)] = x_F
    var = analysis.error_event_variance(F, x_full, ch, sigma)
    var_max, _ = analysis.max_variance_for_set(F, ch, sigma)
    rows = [("dominant", F, x_F, d, var)]
    rows.append(("singleton", (0,), (1.0,), abs(lam[0]),
                 analysis.error_event_variance((0,), [1.0], ch, sigma)))
    print(f"sigma = {sigma:.6g}, window = {args.window}")
    print(f"{'event':<10} {'F':<24} {'d_F':>10} {'sigma_F^2':>12} {'Q(d/sigma_F)':>14}")
    for name, F_, x_, d_, v_ in rows:
        p = analysis.failure_probability(d_, math.sqrt(v_)) if v_ > 0 else float("nan")
        print(f"{name:<10} {str(list(F_)):<24} {d_:>10.5g} {v_:>12.5g} {p:>14.5g}")
    bound = analysis.failure_probability(d, math.sqrt(var_max)) if var_max > 0 else float("nan")
    print(f"bound for dominant F: Q(d_min / sigma_max) = {bound:.5g}")
    delta, var_half, ratio = analysis.all_half_event(lam, args.n, sigma)
    print(f"all-1/2 event, n = {args.n}: delta = {delta:.5g}, var = {var_half:.5g}, "
          f"Q = {analysis.failure_probability(delta, math.sqrt(var_half)):.5g}")
    return 0


def cmd_detect(args):
    ch = _channel(args)
    H = load_alist(args.code) if args.code else None
    if args.received is not None:
        r = _floats(args.received)
    elif args.received_file:
        with open(args.received_file) as fh:
            r = _floats(fh.read())
    elif args.bits is not None:
        bits = np.array([int(b) for b in args.bits if b in "01"])
        sigma = args.sigma if args.sigma is not None else snr_to_sigma(args.snr_db)
        r = add_awgn(transmit_noiseless(bits, ch), sigma, args.seed)
    else:
        print("need --received, --received-file or --bits", file=sys.stderr)
        return 2
    sigma = args.sigma
    if sigma is None and args.snr_db is not None:
        sigma = snr_to_sigma(args.snr_db)
    if args.method == "lp":
        out = lp_detect(r, ch, H)
        res = {"bits": out.hard_bits.tolist(), "x": out.x_values.tolist(),
               "integral": out.integral, "ml_certificate": out.ml_certificate,
               "fractional_set": list(out.fractional_set), "objective": out.objective,
               "snap_anomalies": out.snap_anomalies}
    elif args.method == "viterbi":
        res = {"bits": viterbi_ml(r, ch).tolist()}
    else:
        algo = MIN_SUM if args.method == "msa" else SUM_PRODUCT
        if algo == SUM_PRODUCT and sigma is None:
            print("sum-product needs --sigma or --snr-db", file=sys.stderr)
            return 2
        cfg = MpConfig(algorithm=algo, selective=args.selective, max_iters=args.max_iters)
        out = mp_detect(r, ch, H, cfg, sigma)
        res = {"bits": out.hard_bits.tolist(), "iterations": out.iterations,
               "converged": out.converged}
    if args.json:
        print(json.dumps(res))
    else:
        print("".join(str(b) for b in res["bits"]))
        for k, v in res.items():
            if k not in ("bits", "x"):
                print(f"{k}: {v}")
    return 0


def cmd_simulate(args):
    cfg = SweepConfig.from_toml(args.config)
    res = run_sweep(cfg, csv_path=args.csv, jobs=args.jobs)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(res.to_json())
    if not args.csv:
        sys.stdout.write(res.to_csv())
    return 0


def cmd_gen_code(args):
    H = generate_regular(args.n, args.dv, args.dc, args.seed)
    save_alist(H, args.out)
    from .ldpc import build_encoder
    enc = build_encoder(H)
    print(f"wrote {args.out}: n={H.n} m={H.m} design rate={H.design_rate:.4g} "
          f"effective rate={enc.rate:.4g}")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="isidetect",
                                description="Graph-based detection for binary ISI channels")
    sub = p.add_subparsers(dest="command", required=True)

    def taps(sp):
        sp.add_argument("--taps", required=True,
                        help="comma-separated taps, or a name such as EPR4, PR4, CH1")

    c = sub.add_parser("classify", help="NC/WNC, LP distance and class label")
    taps(c)
    c.add_argument("--n", type=int, default=None)
    c.add_argument("--window", type=int, default=None)
    c.add_argument("--json", action="store_true")
    c.add_argument("--dot", help="write the PR Tanner graph in Graphviz format")
    c.set_defaults(func=cmd_classify)

    a = sub.add_parser("analyze", help="dominant half-integral error events")
    taps(a)
    a.add_argument("--window", type=int, default=8)
    a.add_argument("--n", type=int, default=100, help="block length for the all-1/2 event")
    g = a.add_mutually_exclusive_group()
    g.add_argument("--sigma", type=float)
    g.add_argument("--snr-db", type=float, default=10.0)
    a.set_defaults(func=cmd_analyze)

    d = sub.add_parser("detect", help="detect one received block")
    taps(d)
    d.add_argument("--method", choices=["lp", "msa", "spa", "viterbi"], default="lp")
    d.add_argument("--selective", action="store_true")
    d.add_argument("--received")
    d.add_argument("--received-file")
    d.add_argument("--bits", help="transmit these bits instead of reading samples")
    d.add_argument("--code", help="alist file of the code layer")
    d.add_argument("--sigma", type=float)
    d.add_argument("--snr-db", type=float)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--max-iters", type=int, default=50)
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_detect)

    s = sub.add_parser("simulate", help="Monte-Carlo sweep from a TOML config")
    s.add_argument("--config", required=True)
    s.add_argument("--csv")
    s.add_argument("--json")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_simulate)

    gc = sub.add_parser("gen-code", help="random regular LDPC code in alist format")
    gc.add_argument("--n", type=int, required=True)
    gc.add_argument("--dv", type=int, default=3)
    gc.add_argument("--dc", type=int, default=4)
    gc.add_argument("--seed", type=int, default=0)
    gc.add_argument("--out", required=True)
    gc.set_defaults(func=cmd_gen_code)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
