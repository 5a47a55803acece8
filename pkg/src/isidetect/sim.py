"""Monte-Carlo BER/WER sweeps with per-trial seeding.

The random block and noise of trial ``k`` at SNR point ``i`` come from
``SeedSequence([master_seed, i, k])``, so every detector in a sweep sees
the same realisations and results do not depend on trial order.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .analysis import KNOWN_CHANNELS
from .channel import Channel, add_awgn, build_channel, transmit_noiseless
from .detect_lp import LpDetector
from .detect_mp import MIN_SUM, SUM_PRODUCT, MpConfig, MpDetector
from .ldpc import ParityCheckMatrix, build_encoder, generate_regular, load_alist
from .ml import viterbi_ml

DETECTORS = ("lp", "msa", "spa", "msa_selective", "spa_selective", "viterbi")
CSV_COLUMNS = ("snr_db", "detector", "trials", "bit_errors", "ber", "word_errors", "wer",
               "fractional", "frac_rate", "mean_iters", "se_ber", "se_wer")


def snr_to_sigma(value_db: float, mode: str = "snr_db", rate: float = 1.0) -> float:
    """Noise standard deviation for unit-power BPSK.

    ``snr_db``: ``sigma^2 = 10^(-snr/10)``. ``ebn0_db``: ``Eb = 1/R`` and
    ``N0 = 2 sigma^2``, so ``sigma^2 = 1 / (2 R 10^(ebn0/10))``.
    """
    if mode == "snr_db":
        return math.sqrt(10.0 ** (-value_db / 10.0))
    if mode in ("ebn0_db", "ebn0"):
        if not 0 < rate <= 1:
            raise ValueError(f"code rate must lie in (0, 1], got {rate}")
        return math.sqrt(1.0 / (2.0 * rate * 10.0 ** (value_db / 10.0)))
    raise ValueError(f"unknown SNR mode {mode!r}")


def random_channel(memory: int, rng) -> Channel:
    """I.i.d. Gaussian taps normalised to unit energy (leading tap nonzero a.s.)."""
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    h = rng.standard_normal(memory + 1)
    return build_channel(h / np.linalg.norm(h))


def resolve_channel(spec) -> Channel:
    if isinstance(spec, Channel):
        return spec
    if isinstance(spec, str):
        key = spec.upper()
        if key in KNOWN_CHANNELS:
            return build_channel(KNOWN_CHANNELS[key][0])
        from .channel import parse_taps
        return parse_taps(spec)
    return build_channel(spec)


@dataclass
class SweepConfig:
    taps: tuple
    n: int
    snr_points: tuple
    detectors: tuple = ("lp",)
    snr_mode: str = "snr_db"
    trials: int = 100
    seed: int = 0
    max_iters: int = 50
    code_file: str | None = None
    code_params: dict | None = None   # {"dv": 3, "dc": 4, "seed": 1}
    lp_method: str = "highs"

    def __post_init__(self):
        self.taps = tuple(float(h) for h in resolve_channel(self.taps).taps)
        self.snr_points = tuple(float(s) for s in self.snr_points)
        self.detectors = tuple(self.detectors)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.snr_points:
            raise ValueError("need at least one SNR point")
        bad = [d for d in self.detectors if d not in DETECTORS]
        if bad:
            raise ValueError(f"unknown detectors {bad}; choose from {DETECTORS}")
        if self.code_file and self.code_params:
            raise ValueError("give either code_file or code_params, not both")

    @property
    def channel(self) -> Channel:
        return build_channel(self.taps)

    def parity_check(self) -> ParityCheckMatrix | None:
        if self.code_file:
            H = load_alist(self.code_file)
        elif self.code_params:
            p = self.code_params
            H = generate_regular(self.n, int(p["dv"]), int(p["dc"]), p.get("seed", 0))
        else:
            return None
        if H.n != self.n:
            raise ValueError(f"code length {H.n} does not match n = {self.n}")
        return H

    @classmethod
    def from_dict(cls, d: dict) -> "SweepConfig":
        d = dict(d)
        code = d.pop("code", None)
        if isinstance(code, dict):
            if "file" in code:
                d["code_file"] = code["file"]
            else:
                d["code_params"] = code
        if "channel" in d:
            d["taps"] = d.pop("channel")
        return cls(**d)

    @classmethod
    def from_toml(cls, path) -> "SweepConfig":
        try:
            import tomllib
        except ModuleNotFoundError:  # Python < 3.11
            import tomli as tomllib
        with open(path, "rb") as fh:
            return cls.from_dict(tomllib.load(fh))


@dataclass
class TrialRecord:
    detector: str
    bit_errors: int
    word_error: bool
    fractional: bool
    iterations: int
    failed: bool = False


class TrialContext:
    """Channel, code and detectors of a sweep, built once per process."""

    def __init__(self, cfg: SweepConfig):
        self.cfg = cfg
        self.ch = cfg.channel
        self.H = cfg.parity_check()
        self.encoder = build_encoder(self.H) if self.H is not None else None
        self.rate = self.encoder.rate if self.encoder is not None else 1.0
        self._detectors = {}

    def detector(self, name):
        if name not in self._detectors:
            cfg, n, H = self.cfg, self.cfg.n, self.H
            if name == "lp":
                det = LpDetector(self.ch, n, H, method=cfg.lp_method)
            elif name == "viterbi":
                det = None
            else:
                algo = MIN_SUM if name.startswith("msa") else SUM_PRODUCT
                det = MpDetector(self.ch, n, H, MpConfig(
                    algorithm=algo, selective=name.endswith("selective"),
                    max_iters=cfg.max_iters))
            self._detectors[name] = det
        return self._detectors[name]

    def sigma(self, snr_index: int) -> float:
        return snr_to_sigma(self.cfg.snr_points[snr_index], self.cfg.snr_mode, self.rate)

    def realisation(self, snr_index: int, trial: int):
        rng = np.random.default_rng(np.random.SeedSequence(
            [int(self.cfg.seed), int(snr_index), int(trial)]))
        n = self.cfg.n
        if self.encoder is not None:
            bits = self.encoder.encode(rng.integers(0, 2, self.encoder.k))
        else:
            bits = rng.integers(0, 2, n).astype(np.int8)
        sigma = self.sigma(snr_index)
        r = add_awgn(transmit_noiseless(bits, self.ch), sigma, rng)
        return bits, r, sigma


def run_trial(ctx: TrialContext, snr_index: int, trial: int, detectors=None) -> list:
    """Score each detector on one realisation."""
    bits, r, sigma = ctx.realisation(snr_index, trial)
    out = []
    for name in detectors or ctx.cfg.detectors:
        try:
            if name == "viterbi":
                est, frac, iters = viterbi_ml(r, ctx.ch), False, 0
            else:
                det = ctx.detector(name)
                res = det.detect(r) if name == "lp" else det.detect(r, sigma)
                est, frac, iters = res.hard_bits, not res.integral, res.iterations
            errs = int(np.count_nonzero(est != bits))
            out.append(TrialRecord(name, errs, bool(errs or frac), frac, iters))
        except Exception:  # recorded, not fatal
            out.append(TrialRecord(name, len(bits), True, False, 0, failed=True))
    return out


@dataclass
class PointResult:
    snr_db: float
    detector: str
    trials: int = 0
    bit_errors: int = 0
    word_errors: int = 0
    fractional: int = 0
    failures: int = 0
    total_iters: int = 0
    n: int = 1

    def add(self, rec: TrialRecord):
        self.trials += 1
        self.bit_errors += rec.bit_errors
        self.word_errors += int(rec.word_error)
        self.fractional += int(rec.fractional)
        self.failures += int(rec.failed)
        self.total_iters += rec.iterations

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.trials * self.n)

    @property
    def wer(self) -> float:
        return self.word_errors / self.trials

    @property
    def frac_rate(self) -> float:
        return self.fractional / self.trials

    @property
    def mean_iters(self) -> float:
        return self.total_iters / self.trials

    @property
    def se_ber(self) -> float:
        return math.sqrt(self.ber * (1 - self.ber) / (self.trials * self.n))

    @property
    def se_wer(self) -> float:
        return math.sqrt(self.wer * (1 - self.wer) / self.trials)

    def row(self) -> dict:
        return {"snr_db": self.snr_db, "detector": self.detector, "trials": self.trials,
                "bit_errors": self.bit_errors, "ber": self.ber,
                "word_errors": self.word_errors, "wer": self.wer,
                "fractional": self.fractional, "frac_rate": self.frac_rate,
                "mean_iters": self.mean_iters, "se_ber": self.se_ber, "se_wer": self.se_wer}


@dataclass
class SweepResults:
    config: SweepConfig
    points: list = field(default_factory=list)
    records: dict = field(default_factory=dict)   # (snr_index, detector) -> [TrialRecord]

    def get(self, snr_db: float, detector: str) -> PointResult:
        for p in self.points:
            if p.detector == detector and p.snr_db == snr_db:
                return p
        raise KeyError((snr_db, detector))

    def series(self, detector: str, attr: str = "wer") -> list:
        return [getattr(self.get(s, detector), attr) for s in self.config.snr_points]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for p in self.points:
            w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in p.row().items()})
        return buf.getvalue()

    def to_json(self) -> str:
        cfg = asdict(self.config)
        return json.dumps({"config": cfg, "points": [p.row() for p in self.points]}, indent=2)


def _run_chunk(args):
    cfg, snr_index, trials = args
    ctx = TrialContext(cfg)
    return [(k, run_trial(ctx, snr_index, k)) for k in trials]


def run_sweep(cfg: SweepConfig, csv_path=None, jobs: int = 1,
              keep_records: bool = False) -> SweepResults:
    ctx = TrialContext(cfg)
    res = SweepResults(cfg)
    for i, snr in enumerate(cfg.snr_points):
        if jobs > 1:
            chunks = np.array_split(np.arange(cfg.trials), jobs)
            with ProcessPoolExecutor(jobs) as pool:
                parts = pool.map(_run_chunk, [(cfg, i, list(c)) for c in chunks])
            per_trial = sorted((x for part in parts for x in part), key=lambda kr: kr[0])
        else:
            per_trial = [(k, run_trial(ctx, i, k)) for k in range(cfg.trials)]
        for name in cfg.detectors:
            pt = PointResult(snr, name, n=cfg.n)
            recs = [next(r for r in recs if r.detector == name) for _, recs in per_trial]
            for rec in recs:
                pt.add(rec)
            res.points.append(pt)
            if keep_records:
                res.records[(i, name)] = recs
    if csv_path is not None:
        Path(csv_path).write_text(res.to_csv())
    return res
