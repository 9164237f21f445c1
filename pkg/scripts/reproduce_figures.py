"""Regenerate every figure preset as CSV + SVG under an output directory.

    python scripts/reproduce_figures.py --out results --trials 200 --threads 4

Without --trials each point pools at least 1e5 queries, which takes a few
minutes per preset.
"""
import argparse
import subprocess
import sys
from pathlib import Path

from mvscn.presets import PRESETS

# x axis and series columns of each figure
LAYOUT = {
    "fig2": ("density_target", "arch,w_max,iterations"),
    "fig3": ("deletion_rate", "w_max,iterations"),
    "fig4": ("w_max", "arch"),
    "fig5": ("w_max", "arch"),
    "fig6": ("deletion_rate", "arch,w_max"),
    "fig7": ("deletion_rate", "arch,w_max"),
    "fig8": ("deletion_rate", "w_max,l"),
    "fig9": ("deletion_rate", "w_max,l"),
}


def mvscn(*args):
    subprocess.run([sys.executable, "-m", "mvscn", *args], check=True)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results")
    ap.add_argument("--trials", type=int, default=None)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("presets", nargs="*", default=list(PRESETS))
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in args.presets:
        csv_path, svg_path = out / f"{name}.csv", out / f"{name}.svg"
        extra = ["--trials", str(args.trials)] if args.trials else []
        print(f"{name}: sweeping", flush=True)
        mvscn("sweep", "--preset", name, "--seed", str(args.seed), "--threads", str(args.threads),
              "-o", str(csv_path), *extra)
        x, series = LAYOUT[name]
        mvscn("plot", str(csv_path), "--x", x, "--series", series, "--title", name, "-o", str(svg_path))
        print(f"{name}: wrote {csv_path} and {svg_path}")


if __name__ == "__main__":
    main()
