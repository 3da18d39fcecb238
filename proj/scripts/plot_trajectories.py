"""Plot trajectory CSVs written by `afsmc_cli run`.

Usage: python scripts/plot_trajectories.py OUT_DIR [SCENARIO ...] [--save DIR]
"""

import argparse
from pathlib import Path

import matplotlib.pyplot as plt
import pandas as pd

PANELS = [("x1", "x1"), ("x3", "x3"), ("u", "u (applied)"), ("s1", "s1")]


def scenarios(out_dir: Path) -> list[str]:
    names = {p.stem.rsplit("_", 1)[0] for p in out_dir.glob("*_*.csv") if p.name != "summary.csv"}
    return sorted(names)


def plot_scenario(out_dir: Path, name: str):
    fig, axes = plt.subplots(len(PANELS), 1, sharex=True, figsize=(8, 9))
    for csv in sorted(out_dir.glob(f"{name}_*.csv")):
        controller = csv.stem[len(name) + 1:]
        df = pd.read_csv(csv)
        for ax, (col, label) in zip(axes, PANELS):
            ax.plot(df["t"], df[col], label=controller, linewidth=1)
            ax.set_ylabel(label)
    axes[0].set_title(name)
    axes[0].legend()
    axes[-1].set_xlabel("t [s]")
    fig.tight_layout()
    return fig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out_dir", type=Path)
    ap.add_argument("scenario", nargs="*")
    ap.add_argument("--save", type=Path, help="write PNGs here instead of showing")
    args = ap.parse_args()

    names = args.scenario or scenarios(args.out_dir)
    if not names:
        raise SystemExit(f"no trajectory CSVs in {args.out_dir}")
    for name in names:
        fig = plot_scenario(args.out_dir, name)
        if args.save:
            args.save.mkdir(parents=True, exist_ok=True)
            fig.savefig(args.save / f"{name}.png", dpi=120)
            plt.close(fig)
    if not args.save:
        plt.show()


if __name__ == "__main__":
    main()
