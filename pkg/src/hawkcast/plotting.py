"""Static SVG figures. Output is byte-stable for identical inputs."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_RC = {"svg.hashsalt": "hawkcast", "svg.fonttype": "none"}


def _save(fig, path: str | Path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def forecast_plot(path, x, actual, predicted, title: str = "") -> None:
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(8, 3.5))
        ax.plot(x, actual, color="black", lw=1.2, label="actual")
        ax.plot(x, predicted, color="tab:red", lw=1.0, ls="--", label="predicted")
        ax.set_xlabel("time index")
        ax.set_title(title)
        ax.legend(loc="best", frameon=False)
        fig.tight_layout()
        _save(fig, path)


def front_plot(path, true_front, achieved, title: str = "") -> None:
    true_front = np.asarray(true_front)
    achieved = np.asarray(achieved)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(4.5, 4))
        ax.plot(true_front[:, 0], true_front[:, 1], ".", color="0.6", ms=2, label="true front")
        ax.plot(achieved[:, 0], achieved[:, 1], "o", mfc="none", color="tab:blue", ms=4, label="MOHHO")
        ax.set_xlabel("f1")
        ax.set_ylabel("f2")
        ax.set_title(title)
        ax.legend(loc="best", frameon=False)
        fig.tight_layout()
        _save(fig, path)
