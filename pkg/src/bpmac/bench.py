"""Latency benchmark and analytic memory model.

Each measured point is ``repetitions`` timed batches; a batch runs many
tag computations between two clock reads (clock resolution is far too
coarse for one tag).  Points report the mean per-tag time and a Student-t
99% confidence interval over the per-batch means.

BP-MAC is timed in three phases: ``preprocessing`` (masking tag for the
next nonce), ``latency-critical`` (table lookups and XORs once the
message exists) and ``overall`` (full ``sign``).  Baselines do all their
work once the message exists, so their single measurement is reported as
both latency-critical and overall.
"""

from __future__ import annotations

import csv
import gc
import json
import math
import random
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from scipy import stats

from .baselines import BASELINES
from .core import BPMac, KeyMaterial, MacParams, memory_footprint
from .prf import CountingCipher

LATENCY_CRITICAL = "latency-critical"
PREPROCESSING = "preprocessing"
OVERALL = "overall"

SCHEMES = ("bpmac", *BASELINES)
CSV_COLUMNS = ("scheme", "msg_len", "tag_len", "phase", "mean_ns", "ci99_low_ns", "ci99_high_ns")

# a batch must span this many clock ticks
MIN_TICKS_PER_BATCH = 100
MAX_BATCH = 10_000_000


class TimerResolutionError(RuntimeError):
    pass


@dataclass
class BenchConfig:
    schemes: tuple[str, ...] = SCHEMES
    msg_lens: tuple[int, ...] = tuple(range(1, 33))
    tag_lens: tuple[int, ...] = (4, 8, 12, 16)
    iterations: int = 100
    repetitions: int = 30
    warmup: int = 10
    min_batch_time: float = 0.0  # seconds; batches are also grown until they last this long
    constant_time: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.repetitions < 2:
            raise ValueError("repetitions must be >= 2")
        unknown = set(self.schemes) - set(SCHEMES)
        if unknown:
            raise ValueError(f"unknown scheme(s): {', '.join(sorted(unknown))}")


@dataclass(frozen=True)
class BenchRow:
    scheme: str
    msg_len: int
    tag_len: int
    phase: str
    mean_ns: float
    ci99_low_ns: float
    ci99_high_ns: float


def mean_ci99(samples) -> tuple[float, float, float]:
    """Mean and two-sided 99% Student-t interval."""
    n = len(samples)
    if n < 2:
        raise ValueError("need at least two samples")
    mean = math.fsum(samples) / n
    sd = math.sqrt(math.fsum((x - mean) ** 2 for x in samples) / (n - 1))
    half = stats.t.ppf(0.995, n - 1) * sd / math.sqrt(n)
    return mean, mean - half, mean + half


def linear_fit(xs, ys) -> tuple[float, float, float]:
    """Least-squares line; returns (slope, intercept, r_squared)."""
    fit = stats.linregress(xs, ys)
    return fit.slope, fit.intercept, fit.rvalue**2


def calibrate_batch(run, start: int, min_time: float = 0.0) -> int:
    """Smallest batch >= ``start`` (doubling) whose runtime spans enough clock ticks."""
    resolution = time.get_clock_info("perf_counter").resolution
    batch = max(1, start)
    while True:
        elapsed = run(batch)
        if elapsed >= MIN_TICKS_PER_BATCH * resolution and elapsed >= min_time:
            return batch
        batch *= 2
        if batch > MAX_BATCH:
            raise TimerResolutionError(
                f"clock resolution {resolution}s too coarse even with {MAX_BATCH} iterations per batch"
            )


def _measure_interleaved(runs, cfg: BenchConfig) -> list[list[float]]:
    """Per-operation nanoseconds for each run and repetition.

    ``run(k)`` returns seconds for k operations.  Every repetition visits
    all runs in a fresh random order, so bursts of host noise spread over
    the points instead of biasing whichever ones were running at the time.
    """
    order_rng = random.Random(cfg.seed)
    batches = []
    for run in runs:
        run(cfg.warmup)
        batches.append(calibrate_batch(run, cfg.iterations, cfg.min_batch_time))
    samples = [[] for _ in runs]
    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        order = list(range(len(runs)))
        for _ in range(cfg.repetitions):
            order_rng.shuffle(order)
            for i in order:
                samples[i].append(runs[i](batches[i]) * 1e9 / batches[i])
    finally:
        if gc_was_enabled:
            gc.enable()
    return samples


def _row(scheme, msg_len, tag_len, phase, samples) -> BenchRow:
    mean, lo, hi = mean_ci99(samples)
    return BenchRow(scheme, msg_len, tag_len, phase, mean, lo, hi)


def _bpmac_runs(mac: BPMac, msg: bytes):
    perf = time.perf_counter
    nonce = [0]

    def take(k):
        start = nonce[0]
        nonce[0] += k
        return range(start, start + k)

    def pre(k):
        prepare = mac.prepare
        ns = take(k)
        t0 = perf()
        for n in ns:
            prepare(n)
        return perf() - t0

    def crit(k):
        prepared = [mac.prepare(n) for n in take(k)]
        finish = mac.finish
        t0 = perf()
        for p in prepared:
            finish(msg, p)
        return perf() - t0

    def whole(k):
        sign = mac.sign
        ns = take(k)
        t0 = perf()
        for n in ns:
            sign(msg, n)
        return perf() - t0

    return {PREPROCESSING: pre, LATENCY_CRITICAL: crit, OVERALL: whole}


def _baseline_run(mac, msg: bytes):
    perf = time.perf_counter

    def whole(k):
        sign = mac.sign
        t0 = perf()
        for n in range(k):
            sign(msg, n)
        return perf() - t0

    return whole


def run_latency_bench(config: BenchConfig, keys: KeyMaterial | None = None) -> list[BenchRow]:
    rng = random.Random(config.seed)
    keys = keys or KeyMaterial(rng.randbytes(16), rng.randbytes(16))
    max_len = max(config.msg_lens)
    rows = []
    for scheme in config.schemes:
        points = []  # (msg_len, tag_len, phases, run); all measured in one interleaved pool
        for tag_len in config.tag_lens:
            for msg_len in config.msg_lens:
                # same message for every scheme and tag length at this size
                msg = random.Random(f"{config.seed}:{msg_len}").randbytes(msg_len)
                if scheme == "bpmac":
                    # a fresh context per point keeps nonce streams independent
                    mac = BPMac(keys, MacParams(tag_len, max_len), constant_time=config.constant_time)
                    for phase, run in _bpmac_runs(mac, msg).items():
                        points.append((msg_len, tag_len, (phase,), run))
                else:
                    mac = BASELINES[scheme](keys.k1, tag_len)
                    points.append((msg_len, tag_len, (LATENCY_CRITICAL, OVERALL), _baseline_run(mac, msg)))
        samples = _measure_interleaved([p[-1] for p in points], config)
        for (msg_len, tag_len, phases, _), s in zip(points, samples):
            rows.extend(_row(scheme, msg_len, tag_len, phase, s) for phase in phases)
    return rows


def latency_critical_cipher_calls(tag_len: int, msg_len: int, tags: int) -> tuple[int, int]:
    """Cipher calls made by ``tags`` consecutive signatures.

    Returns (calls inside the latency-critical step, calls overall).
    """
    counter = CountingCipher()
    keys = KeyMaterial(bytes(range(16)), bytes(range(16, 32)))
    mac = BPMac(keys, MacParams(tag_len, max(msg_len, 1)), cipher=counter)
    msg = bytes([0xA5]) * msg_len
    counter.reset()
    critical = 0
    for n in range(tags):
        prepared = mac.prepare(n)
        before = counter.calls
        mac.finish(msg, prepared)
        critical += counter.calls - before
    return critical, counter.calls


@dataclass(frozen=True)
class Crossover:
    tag_len: int
    first_in_band: int | None  # smallest M whose footprint reaches the band's low edge
    tipoff: int | None  # largest M whose footprint stays at or below the band's high edge
    tipoff_footprint: int | None


@dataclass
class MemoryModel:
    band: tuple[int, int]
    crossovers: list[Crossover]
    curves: dict[int, list[tuple[int, int]]] = field(default_factory=dict)


def run_memory_model(tag_lens, msg_lens, band) -> MemoryModel:
    low, high = band
    if low > high:
        raise ValueError("band low must not exceed high")
    msg_lens = sorted(msg_lens)
    model = MemoryModel((low, high), [])
    for L in tag_lens:
        curve = [(m, memory_footprint(MacParams(L, m))) for m in msg_lens]
        model.curves[L] = curve
        first = next((m for m, fp in curve if fp >= low), None)
        below = [(m, fp) for m, fp in curve if fp <= high]
        tip, tip_fp = below[-1] if below else (None, None)
        model.crossovers.append(Crossover(L, first, tip, tip_fp))
    return model


def emit_report(rows, fmt: str, path) -> Path:
    path = Path(path)
    if fmt == "csv":
        with path.open("w", newline="") as f:
            w = csv.writer(f)
            w.writerow(CSV_COLUMNS)
            for r in rows:
                w.writerow([getattr(r, c) for c in CSV_COLUMNS])
    elif fmt == "json":
        path.write_text(json.dumps([asdict(r) for r in rows], indent=1))
    elif fmt == "plot-data":
        series: dict[str, list] = {}
        for r in rows:
            series.setdefault(f"{r.scheme}/L{r.tag_len}/{r.phase}", []).append([r.msg_len, r.mean_ns])
        for pts in series.values():
            pts.sort()
        path.write_text(json.dumps(series, indent=1))
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    return path


def load_report(path, fmt: str) -> list[BenchRow]:
    path = Path(path)
    types = {f.name: f.type for f in fields(BenchRow)}
    conv = {"str": str, "int": int, "float": float}
    if fmt == "csv":
        with path.open(newline="") as f:
            reader = csv.DictReader(f)
            if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
                raise ValueError(f"unexpected CSV header {reader.fieldnames}")
            return [BenchRow(**{k: conv[types[k]](v) for k, v in rec.items()}) for rec in reader]
    if fmt == "json":
        return [BenchRow(**rec) for rec in json.loads(path.read_text())]
    raise ValueError(f"cannot load report format {fmt!r}")


def emit_memory_report(model: MemoryModel, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps({
        "band": list(model.band),
        "crossovers": [asdict(c) for c in model.crossovers],
        "curves": {str(L): pts for L, pts in model.curves.items()},
    }, indent=1))
    return path
