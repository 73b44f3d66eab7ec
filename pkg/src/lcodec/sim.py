"""Monte Carlo BER/WER/MSE sweeps over Eb/N0 and CSV reporting.

Every batch of trials draws its randomness from a Philox stream keyed by
``(seed, point index, batch index[, decoder index])``. Batches are merged
in index order and the stopping rule is evaluated after each one, so the
tallies do not depend on how many worker processes computed them.
"""

from __future__ import annotations

import csv
import io
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import ndtr

from . import codes as codes_mod
from .baselines import OsdDecoder, TannerGraph, bp_decode
from .channel import AwgnChannel, BscChannel, bipolar, ebn0_to_sigma
from .codes import LinearCode, encode
from .decoder import IdentityEstimator, MapOracle, MmseOracle, SyndromeDecoder
from .neural import load_model

CSV_HEADER = ["ebn0_db", "decoder", "codewords", "bit_errors", "word_errors", "ber", "wer", "mse", "seed",
              "elapsed_s"]


class SimError(RuntimeError):
    pass


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` (inclusive of stop) or a comma-separated list."""
    text = text.strip()
    if ":" in text:
        start, stop, step = (float(v) for v in text.split(":"))
        if step <= 0:
            raise ValueError("grid step must be positive")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 10) for i in range(max(count, 0))]
    return [float(v) for v in text.split(",") if v.strip()]


def default_seed() -> int:
    return int(os.environ.get("LCODEC_SEED", "0"))


@dataclass
class SweepConfig:
    code: str = "hamming-7-4"
    h_alist: str | None = None
    g_alist: str | None = None
    channel: str = "awgn"
    ebn0: list[float] = field(default_factory=lambda: parse_grid("1:6:0.5"))
    sigmas: list[float] | None = None
    decoders: list[str] = field(default_factory=lambda: ["map-oracle"])
    min_codewords: int = 10_000
    min_bit_errors: int = 0
    max_codewords: int = 1_000_000
    batch_size: int = 1000
    seed: int = field(default_factory=default_seed)
    workers: int = 1
    paired: bool = True
    timing: bool = True
    output: str | None = None

    def __post_init__(self):
        if not (self.sigmas or self.ebn0):
            raise ValueError("Eb/N0 grid is empty")
        if self.min_codewords < 1 or self.batch_size < 1 or self.workers < 1:
            raise ValueError("min_codewords, batch_size and workers must be positive")
        if self.max_codewords < self.min_codewords:
            self.max_codewords = self.min_codewords


@dataclass
class PointResult:
    ebn0_db: float
    decoder: str
    codewords: int
    bit_errors: int
    word_errors: int
    ber: float
    wer: float
    mse: float | None
    seed: int
    elapsed_s: float


@dataclass
class SimReport:
    n: int
    k: int
    points: list[PointResult] = field(default_factory=list)

    def get(self, decoder: str, ebn0_db: float | None = None) -> PointResult:
        for p in self.points:
            if p.decoder == decoder and (ebn0_db is None or p.ebn0_db == ebn0_db):
                return p
        raise KeyError((decoder, ebn0_db))


def wilson_interval(errors: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    p = errors / trials
    denom = 1.0 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if errors == 0 else max(0.0, centre - half)
    hi = 1.0 if errors == trials else min(1.0, centre + half)
    return lo, hi


def q_function(x: float) -> float:
    return float(ndtr(-x))


# --------------------------------------------------------------------------
# Decoder construction from spec strings:
#   identity | map-oracle | mmse-oracle | bp[-ITERS] | osd-ORDER | nn:PATH
# with optional "+perm" and "+soft" suffixes for syndrome-pipeline decoders.


def load_code(cfg: SweepConfig) -> LinearCode:
    if cfg.h_alist or cfg.g_alist:
        def read(p):
            if p is None:
                return None
            with open(p) as fh:
                return fh.read()
        return codes_mod.code_from_alist(read(cfg.h_alist), read(cfg.g_alist), name=cfg.code)
    return codes_mod.get_code(cfg.code)


def make_sim_channel(cfg: SweepConfig, code: LinearCode, point):
    """Channel for a grid point; BSC points use the hard-decision crossover."""
    sigma = point if cfg.sigmas else ebn0_to_sigma(point, code.rate)
    if cfg.channel == "awgn":
        return AwgnChannel(sigma)
    if cfg.channel == "bsc":
        return BscChannel(q_function(1.0 / sigma))
    raise SimError(f"unknown channel {cfg.channel!r}")


class _Baseline:
    def __init__(self, fn):
        self.fn = fn
        self.soft = False

    def run(self, y):
        return self.fn(y), None


class _Syndrome:
    def __init__(self, dec: SyndromeDecoder):
        self.dec = dec
        self.soft = dec.mode == "soft"

    def run(self, y):
        r = self.dec(y)
        return r.x_hat_hard, (r.x_hat_soft if self.soft else None)


def build_decoder(spec: str, code: LinearCode, channel):
    base, *flags = spec.split("+")
    unknown = set(flags) - {"perm", "soft"}
    if unknown:
        raise SimError(f"unknown decoder flag(s) {sorted(unknown)} in {spec!r}")
    permute = "perm" in flags
    mode = "soft" if "soft" in flags else "hard"
    if base == "identity":
        F = IdentityEstimator(code)
    elif base == "map-oracle":
        F = MapOracle(code, channel)
    elif base == "mmse-oracle":
        F = MmseOracle(code, channel)
        mode = "soft"
    elif base.startswith("nn:"):
        with open(base[3:]) as fh:
            F, meta = load_model(fh.read(), code.n, code.k)
        permute = permute or bool(meta.get("permute"))
    elif base == "bp" or base.startswith("bp-"):
        iters = int(base[3:]) if base != "bp" else 5
        graph = TannerGraph(code.H)
        return _Baseline(lambda y: bipolar(bp_decode(graph, channel.llr(y), iters)[1]))
    elif base.startswith("osd-"):
        osd = OsdDecoder(code, int(base[4:]))
        return _Baseline(lambda y: osd.decode_llr(channel.llr(y)))
    else:
        raise SimError(f"unknown decoder {spec!r}")
    return _Syndrome(SyndromeDecoder(code, F, channel, mode=mode, permute=permute, name=spec))


# --------------------------------------------------------------------------
# Batch execution


def batch_rng(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


_WORKER: dict = {}


def _worker_init(cfg_dict):
    cfg = SweepConfig(**cfg_dict)
    _WORKER.clear()
    _WORKER["cfg"] = cfg
    _WORKER["code"] = load_code(cfg)
    _WORKER["decoders"] = {}


def _decoders_for(point_idx):
    cache = _WORKER["decoders"]
    if point_idx not in cache:
        cfg, code = _WORKER["cfg"], _WORKER["code"]
        points = cfg.sigmas or cfg.ebn0
        ch = make_sim_channel(cfg, code, points[point_idx])
        cache.clear()
        cache[point_idx] = (ch, [build_decoder(s, code, ch) for s in cfg.decoders])
    return cache[point_idx]


def _draw(code, ch, rng, size):
    m = rng.integers(0, 2, size=(size, code.k), dtype=np.uint8)
    x = bipolar(encode(code, m))
    z = ch.sample_noise(rng, x.shape)
    return x, x * z


def _run_batch(point_idx: int, batch_idx: int) -> np.ndarray:
    """Tallies ``[bit_errors, word_errors, squared_error]`` per decoder."""
    cfg, code = _WORKER["cfg"], _WORKER["code"]
    ch, decoders = _decoders_for(point_idx)
    out = np.zeros((len(decoders), 3))
    if cfg.paired:
        shared = _draw(code, ch, batch_rng(cfg.seed, point_idx, batch_idx), cfg.batch_size)
    for d, dec in enumerate(decoders):
        if cfg.paired:
            x, y = shared
        else:
            x, y = _draw(code, ch, batch_rng(cfg.seed, point_idx, batch_idx, d), cfg.batch_size)
        hard, soft = dec.run(y)
        err = hard != x
        out[d, 0] = err.sum()
        out[d, 1] = err.any(axis=-1).sum()
        if soft is not None:
            out[d, 2] = ((soft - x) ** 2).sum()
    return out


def _done(tallies, codewords, cfg) -> bool:
    if codewords >= cfg.max_codewords:
        return True
    return codewords >= cfg.min_codewords and bool((tallies[:, 0] >= cfg.min_bit_errors).all())


def run_sweep(cfg: SweepConfig) -> SimReport:
    code = load_code(cfg)
    cfg_dict = asdict(cfg)
    points = cfg.sigmas or cfg.ebn0
    report = SimReport(code.n, code.k)
    pool = None
    if cfg.workers > 1:
        pool = ProcessPoolExecutor(max_workers=cfg.workers, initializer=_worker_init, initargs=(cfg_dict,))
    _worker_init(cfg_dict)
    try:
        for p_idx, point in enumerate(points):
            t0 = time.perf_counter()
            ch, decoders = _decoders_for(p_idx)
            tallies = np.zeros((len(cfg.decoders), 3))
            codewords = 0
            b = 0
            done = False
            while not done:
                if pool is None:
                    results = [_run_batch(p_idx, b)]
                else:
                    futs = [pool.submit(_run_batch, p_idx, b + i) for i in range(cfg.workers)]
                    results = [f.result() for f in futs]
                for res in results:
                    tallies += res
                    codewords += cfg.batch_size
                    b += 1
                    if _done(tallies, codewords, cfg):
                        done = True
                        break
            elapsed = time.perf_counter() - t0 if cfg.timing else 0.0
            ebn0_db = point if not cfg.sigmas else 10 * math.log10(1.0 / (2 * code.rate * point**2))
            for d, spec in enumerate(cfg.decoders):
                be, we, se = tallies[d]
                report.points.append(PointResult(
                    ebn0_db=float(ebn0_db),
                    decoder=spec,
                    codewords=codewords,
                    bit_errors=int(be),
                    word_errors=int(we),
                    ber=float(be / (codewords * code.n)),
                    wer=float(we / codewords),
                    mse=float(se / (codewords * code.n)) if decoders[d].soft else None,
                    seed=cfg.seed,
                    elapsed_s=elapsed,
                ))
    finally:
        if pool is not None:
            pool.shutdown()
    if cfg.output:
        write_csv(report, cfg.output)
    return report


# --------------------------------------------------------------------------
# CSV


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def report_to_csv(report: SimReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p in report.points:
        row = asdict(p)
        if row["elapsed_s"] is not None:
            row["elapsed_s"] = round(row["elapsed_s"], 6)
        w.writerow([_fmt(row[h]) for h in CSV_HEADER])
    return buf.getvalue()


def write_csv(report: SimReport, path) -> None:
    text = report_to_csv(report)
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise SimError(f"cannot write {path}: {exc.strerror}") from exc


def read_csv(path) -> list[PointResult]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for r in rows:
        out.append(PointResult(
            ebn0_db=float(r["ebn0_db"]),
            decoder=r["decoder"],
            codewords=int(r["codewords"]),
            bit_errors=int(r["bit_errors"]),
            word_errors=int(r["word_errors"]),
            ber=float(r["ber"]),
            wer=float(r["wer"]),
            mse=float(r["mse"]) if r["mse"] else None,
            seed=int(r["seed"]),
            elapsed_s=float(r["elapsed_s"]),
        ))
    return out


def summary_lines(report: SimReport) -> list[str]:
    lines = []
    for p in report.points:
        lo, hi = wilson_interval(p.bit_errors, p.codewords * report.n)
        lines.append(f"{p.ebn0_db:6.2f} dB  {p.decoder:<16} BER {p.ber:.3e} [{lo:.3e}, {hi:.3e}]  "
                     f"WER {p.wer:.3e}  ({p.codewords} words)")
    return lines
