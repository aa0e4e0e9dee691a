"""Queue-length figures for controller comparisons, written to image files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from bifuzzy.traffic import Comparison  # noqa: E402


def plot_queue_series(cmp: Comparison, out_dir: str | Path, fmt: str = "png") -> list[Path]:
    """One figure per arrival rate: mean queue per approach against cycle index."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for row in cmp.rows:
        fig, ax = plt.subplots(figsize=(5, 3.2))
        ax.plot(range(1, len(row.bfdes_queue) + 1), row.bfdes_queue, label="BFDES", lw=1.4)
        ax.plot(range(1, len(row.fdes_queue) + 1), row.fdes_queue, label="FDES", lw=1.4, ls="--")
        ax.set_xlabel("cycle")
        ax.set_ylabel("average queue (veh/approach)")
        ax.set_title(f"arrival rate {row.rate:g} veh/h")
        ax.legend(frameon=False)
        fig.tight_layout()
        path = out / f"queue_rate_{row.rate:g}.{fmt}"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    fig, ax = plt.subplots(figsize=(5, 3.2))
    rates = [r.rate for r in cmp.rows]
    ax.errorbar(rates, [r.bfdes_mean for r in cmp.rows], yerr=[r.bfdes_std for r in cmp.rows], marker="o", label="BFDES", capsize=3)
    ax.errorbar(rates, [r.fdes_mean for r in cmp.rows], yerr=[r.fdes_std for r in cmp.rows], marker="s", label="FDES", capsize=3)
    ax.set_xlabel("arrival rate (veh/h)")
    ax.set_ylabel("average delay (s/veh)")
    ax.legend(frameon=False)
    fig.tight_layout()
    path = out / f"delay_by_rate.{fmt}"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)
    return written
