"""Memory footprint curves and tipoff points against a baseline band.

    python scripts/memory_crossover.py --band 1350 1600 --plot memory.png
"""

import argparse

from bpmac import bench


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--band", type=int, nargs=2, default=(1350, 1600))
    ap.add_argument("--max-len", type=int, default=64)
    ap.add_argument("--plot", help="write a PNG (needs matplotlib)")
    args = ap.parse_args()

    model = bench.run_memory_model((16, 12, 8, 4), range(1, args.max_len + 1), tuple(args.band))
    print(f"baseline band: {model.band[0]}..{model.band[1]} bytes")
    for c in model.crossovers:
        print(f"L={c.tag_len:>2}: enters band at M={c.first_in_band}, "
              f"last M within band {c.tipoff} ({c.tipoff_footprint} bytes)")

    if args.plot:
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(6, 4))
        for L, pts in model.curves.items():
            ax.plot([m for m, _ in pts], [fp for _, fp in pts], label=f"{L}-byte tags")
        ax.axhspan(*model.band, color="grey", alpha=0.2, label="baseline band")
        ax.set_xlabel("message length (bytes)")
        ax.set_ylabel("memory footprint (bytes)")
        ax.legend()
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)


if __name__ == "__main__":
    main()
