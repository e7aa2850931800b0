"""Shared plotting helper for the demo scripts; figures go to demos/out/."""

from pathlib import Path

OUT = Path(__file__).parent / "out"


def savefig(name, panels, xlabel=""):
    """panels: list of (title, x, y, ylabel) drawn as stacked subplots."""
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("(matplotlib unavailable, skipping figure)")
        return
    OUT.mkdir(exist_ok=True)
    fig, axes = plt.subplots(len(panels), 1, figsize=(5, 2.6 * len(panels)),
                             sharex=True)
    if len(panels) == 1:
        axes = [axes]
    for ax, (title, x, y, ylabel) in zip(axes, panels):
        ax.plot(x, y)
        ax.set_title(title, fontsize=9)
        ax.set_ylabel(ylabel)
        ax.grid(alpha=0.3)
    axes[-1].set_xlabel(xlabel)
    fig.tight_layout()
    path = OUT / f"{name}.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    print(f"figure saved to {path}")
