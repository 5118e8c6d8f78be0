"""Full latency sweep: all schemes, messages 1..32 bytes, tags 4/8/12/16.

Writes CSV + plot data and prints per-series summaries, including the
BP-MAC speedup of shorter tags (informational; depends heavily on the
machine and interpreter).

    python scripts/run_latency.py --out results/ --repetitions 30
"""

import argparse
from collections import defaultdict
from pathlib import Path

from bpmac import bench


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results")
    ap.add_argument("--iterations", type=int, default=100)
    ap.add_argument("--repetitions", type=int, default=30)
    ap.add_argument("--constant-time", action="store_true")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    cfg = bench.BenchConfig(iterations=args.iterations, repetitions=args.repetitions,
                            constant_time=args.constant_time, seed=args.seed)
    rows = bench.run_latency_bench(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    bench.emit_report(rows, "csv", out / "latency.csv")
    bench.emit_report(rows, "plot-data", out / "latency.plot.json")

    series = defaultdict(dict)
    for r in rows:
        series[r.scheme, r.tag_len, r.phase][r.msg_len] = r.mean_ns
    print(f"{'scheme':12} {'L':>3} {'phase':17} {'1 B (ns)':>10} {'32 B (ns)':>10} {'R^2':>6}")
    for (scheme, L, phase), pts in sorted(series.items()):
        xs = sorted(pts)
        _, _, r2 = bench.linear_fit(xs, [pts[x] for x in xs])
        print(f"{scheme:12} {L:>3} {phase:17} {pts[xs[0]]:>10.0f} {pts[xs[-1]]:>10.0f} {r2:>6.3f}")

    ref = series["bpmac", 16, bench.LATENCY_CRITICAL]
    print("\nBP-MAC latency-critical time saved vs 16-byte tags (min..max over lengths):")
    for L in (12, 8, 4):
        cur = series["bpmac", L, bench.LATENCY_CRITICAL]
        saved = [1 - cur[m] / ref[m] for m in ref]
        print(f"  L={L:>2}: {min(saved):6.1%} .. {max(saved):6.1%}")


if __name__ == "__main__":
    main()
