"""Render curve tables to image files with matplotlib (Agg backend, no display)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# shell solid blue, volume dashed red, sampled dotted green
SCHEME_STYLE = {
    "shell": dict(color="tab:blue", linestyle="-"),
    "volume": dict(color="tab:red", linestyle="--"),
    "sample": dict(color="tab:green", linestyle=":"),
}

AXIS_LABELS = {
    "abscissa_deg": "angle (deg)",
    "tau": r"$\gamma\tau$",
    "N": "N",
}

QUANTITY_LABELS = {
    "g2": r"$g^{(2)}$",
    "chi": r"$\chi$",
    "intensity": r"$I / \Psi_R$",
    "G2": r"$G^{(2)}(0)$ (arb.)",
}


def plot_table(table, path, title=None, xlabel=None, log=False):
    fig, ax = plt.subplots(figsize=(5.5, 3.6))
    for col in table.columns:
        style = dict(SCHEME_STYLE.get(col.scheme, {}))
        if len(table.columns) > len({c.scheme for c in table.columns}):
            style.pop("color", None)
        ax.plot(table.abscissa, col.values, label=col.name, lw=1.4, **style)
    ax.set_xlabel(xlabel or AXIS_LABELS.get(table.abscissa_name, table.abscissa_name))
    quantities = {c.quantity for c in table.columns}
    if len(quantities) == 1:
        ax.set_ylabel(QUANTITY_LABELS.get(quantities.pop(), ""))
    if log:
        ax.set_xscale("log")
        ax.set_yscale("log")
    if title:
        ax.set_title(title, fontsize=10)
    ax.legend(fontsize=8, frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
