"""Sweep figures (engine order against the closed-form order per instance)."""
from __future__ import annotations


def sweep_figure(rows, path, title="sweep"):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    labels = [r.params for r in rows]
    eng = [r.order if r.order is not None else 0 for r in rows]
    orc = [r.oracle.order() if r.oracle is not None else 0 for r in rows]
    xs = range(len(rows))
    fig, ax = plt.subplots(figsize=(max(4.0, 0.7 * len(rows) + 2), 3.2))
    w = 0.38
    ax.bar([x - w / 2 for x in xs], eng, w, label="engine |Br_un/Br_0|", color="#4477aa")
    ax.bar([x + w / 2 for x in xs], orc, w, label="closed form", color="#cc6677")
    for x, r in zip(xs, rows):
        if r.agree is False:
            ax.annotate("x", (x, max(eng[x], orc[x])), ha="center", va="bottom", color="black")
        elif r.status.startswith("skipped"):
            ax.annotate("cap", (x, 0), ha="center", va="bottom", fontsize=7)
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=40, ha="right", fontsize=7)
    ax.set_ylabel("order")
    ax.set_title(title)
    ax.legend(fontsize=7)
    fig.tight_layout()
    # fixed metadata keeps the file byte-stable across runs
    fig.savefig(path, metadata={"Software": None} if str(path).endswith(".png") else None)
    plt.close(fig)
    return path
