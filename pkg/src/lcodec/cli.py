"""Command line entry point: ``lcodec {info,train,simulate,oracle-check}``.

A ``--config FILE`` of ``key = value`` lines may supply any long option of
the chosen subcommand; flags on the command line take precedence.
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import checks, gf2
from .codes import CodeError, code_from_alist, get_code, poly_to_str
from .neural import save_model
from .sim import SweepConfig, default_seed, parse_grid, run_sweep, summary_lines
from .training import TrainConfig, train


def _add_code_args(p):
    p.add_argument("--code", default="hamming-7-4", help="builtin code name")
    p.add_argument("--h-alist", help="parity-check matrix in alist format")
    p.add_argument("--g-alist", help="generator matrix (N x K) in alist format")


def _bool(text: str) -> bool:
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lcodec", description="Syndrome-based soft decoding workbench")
    parser.add_argument("--config", help="key = value file with default option values")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="print code parameters and rank checks")
    _add_code_args(p)

    p = sub.add_parser("train", help="train a neural noise estimator")
    _add_code_args(p)
    p.add_argument("--arch", choices=["vanilla", "gru"], default="vanilla")
    p.add_argument("--ebn0", type=float, default=4.0)
    p.add_argument("--batch-size", type=int, default=128)
    p.add_argument("--batches", type=int, default=10_000)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--beta1", type=float, default=0.9)
    p.add_argument("--beta2", type=float, default=0.999)
    p.add_argument("--eps", type=float, default=1e-8)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--hidden-mult", type=float, default=None)
    p.add_argument("--layers", type=int, default=None, help="vanilla: number of layers")
    p.add_argument("--levels", type=int, default=None, help="gru: stacked levels")
    p.add_argument("--steps", type=int, default=None, help="gru: time steps")
    p.add_argument("--seed", type=int, default=default_seed())
    p.add_argument("--permute", action="store_true")
    p.add_argument("--out", help="model file to write (required)")

    p = sub.add_parser("simulate", help="Monte Carlo BER sweep")
    _add_code_args(p)
    p.add_argument("--channel", choices=["awgn", "bsc"], default="awgn")
    p.add_argument("--ebn0", default="1:6:0.5", help="start:stop:step or comma list (dB)")
    p.add_argument("--sigma", default=None, help="comma list of noise std values instead of --ebn0")
    p.add_argument("--decoders", default="map-oracle",
                   help="comma list: identity, map-oracle, mmse-oracle, bp[-I], osd-L, nn:PATH; suffix +perm/+soft")
    p.add_argument("--min-codewords", type=int, default=10_000)
    p.add_argument("--min-bit-errors", type=int, default=0)
    p.add_argument("--max-codewords", type=int, default=1_000_000)
    p.add_argument("--batch-size", type=int, default=1000)
    p.add_argument("--seed", type=int, default=default_seed())
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--paired", type=_bool, default=True)
    p.add_argument("--timing", type=_bool, default=True)
    p.add_argument("--csv", default=None, help="write the report here")

    p = sub.add_parser("oracle-check", help="run the exact oracle and permutation property checks")
    _add_code_args(p)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--ebn0", type=float, default=4.0)
    p.add_argument("--seed", type=int, default=default_seed())
    return parser


def read_config(path) -> dict[str, str]:
    out = {}
    with open(path) as fh:
        for no, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{no}: expected 'key = value'")
            key, value = (t.strip() for t in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def _apply_config(parser, argv, config_path):
    values = read_config(config_path)
    ns, _ = parser.parse_known_args(argv)
    sub = parser._subparsers._group_actions[0].choices[ns.command]
    known = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, raw in values.items():
        if key not in known:
            raise ValueError(f"{config_path}: unknown option {key!r} for {ns.command}")
        act = known[key]
        if isinstance(act, argparse._StoreTrueAction):
            defaults[key] = _bool(raw)
        else:
            defaults[key] = act.type(raw) if act.type else raw
    sub.set_defaults(**defaults)


def _load_code(args):
    if args.h_alist or args.g_alist:
        def read(p):
            if p is None:
                return None
            with open(p) as fh:
                return fh.read()
        return code_from_alist(read(args.h_alist), read(args.g_alist), name=args.code)
    return get_code(args.code)


def cmd_info(args) -> int:
    code = _load_code(args)
    print(f"code {code.name}: N={code.n} K={code.k} rate={code.rate:.4f}")
    if code.generator_poly is not None:
        g = code.generator_poly
        print(f"g(x) = {poly_to_str(g)}")
        print("g coefficients (x^0 first): " + "".join(str((g >> d) & 1) for d in range(g.bit_length())))
    print(f"rank(H)={gf2.rank_mod2(code.H)} rank(G)={gf2.rank_mod2(code.G)} "
          f"rank(B)={gf2.rank_mod2(np.vstack([code.H, code.A]))}")
    print(f"parity layout: {code.parity_layout}")
    return 0


def cmd_train(args) -> int:
    if not args.out:
        raise ValueError("train needs --out")
    code = _load_code(args)
    cfg = TrainConfig(ebn0_db=args.ebn0, batch_size=args.batch_size, batch_count=args.batches, lr=args.lr,
                      beta1=args.beta1, beta2=args.beta2, eps=args.eps, gamma=args.gamma, seed=args.seed,
                      permute=args.permute, log_every=max(args.batches // 20, 1))
    hyper = {}
    if args.hidden_mult is not None:
        hyper["hidden_mult"] = args.hidden_mult
    if args.arch == "vanilla" and args.layers is not None:
        hyper["n_layers"] = args.layers
    if args.arch == "gru":
        if args.levels is not None:
            hyper["levels"] = args.levels
        if args.steps is not None:
            hyper["steps"] = args.steps
    net, losses = train(code, None, args.arch, cfg, **hyper)
    meta = {"code": code.name, "permute": args.permute, "ebn0_db": args.ebn0, "seed": args.seed,
            "batches": args.batches, "final_loss": float(losses[-min(100, len(losses)):].mean())}
    with open(args.out, "w") as fh:
        fh.write(save_model(net, meta))
    print(f"wrote {args.out}: {net.arch} net, {net.num_params()} parameters, final loss {meta['final_loss']:.5f}")
    return 0


def cmd_simulate(args) -> int:
    cfg = SweepConfig(
        code=args.code, h_alist=args.h_alist, g_alist=args.g_alist, channel=args.channel,
        ebn0=parse_grid(args.ebn0),
        sigmas=[float(v) for v in args.sigma.split(",")] if args.sigma else None,
        decoders=[d.strip() for d in args.decoders.split(",") if d.strip()],
        min_codewords=args.min_codewords, min_bit_errors=args.min_bit_errors,
        max_codewords=args.max_codewords, batch_size=args.batch_size, seed=args.seed,
        workers=args.workers, paired=args.paired, timing=args.timing, output=args.csv,
    )
    report = run_sweep(cfg)
    for line in summary_lines(report):
        print(line)
    return 0


def cmd_oracle_check(args) -> int:
    code = _load_code(args)
    results = checks.run_all(code, args.trials, args.ebn0, args.seed)
    for name, ok in results:
        print(f"{name}: {'PASS' if ok else 'FAIL'}")
    return 0 if all(ok for _, ok in results) else 1


COMMANDS = {"info": cmd_info, "train": cmd_train, "simulate": cmd_simulate, "oracle-check": cmd_oracle_check}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    try:
        pre, _ = parser.parse_known_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if pre.config:
            _apply_config(parser, argv, pre.config)
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (OSError, ValueError) as exc:
        print(f"lcodec: error: {exc}", file=sys.stderr)
        return 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return COMMANDS[args.command](args)
    except (CodeError, ValueError, OSError, RuntimeError) as exc:
        print(f"lcodec: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
