"""
Plots of monodromy data

Figures are written to files; nothing is shown interactively.
"""
import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def setup_figure(title, figsize=(7, 6)):
    """
    Create a figure and axis with a title

    Returns:
        tuple: (fig, ax)
    """
    fig, ax = plt.subplots(figsize=figsize)
    ax.set_title(title, fontsize=13)
    return fig, ax


def save_figure(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_eigenvalues(results, path, title="Monodromy eigenvalues"):
    """
    Eigenvalues of several transport matrices against the unit circle

    Args:
        results: List of MonodromyResult
        path: Output image path
    """
    fig, ax = setup_figure(title)
    theta = np.linspace(0, 2 * np.pi, 400)
    ax.plot(np.cos(theta), np.sin(theta), color="gray", linewidth=0.8, alpha=0.6)
    colormap = plt.get_cmap("viridis")
    for idx, result in enumerate(results):
        z = result.eigenvalues
        ax.scatter(z.real, z.imag, s=40, alpha=0.8, color=colormap(idx / max(1, len(results) - 1)),
                   label=f"root {result.loop.root}, hbar={result.hbar:g}")
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.legend(loc="upper right", fontsize=8)
    return save_figure(fig, path)


def plot_eigenvalue_sweep(frame, path, title="Eigenvalue arguments"):
    """
    Eigenvalue arguments against hbar, one line per sorted eigenvalue

    Args:
        frame: DataFrame with columns hbar, index, argument
        path: Output image path
    """
    fig, ax = setup_figure(title)
    for idx, group in frame.groupby("index"):
        ax.plot(group["hbar"], group["argument"], marker="o", markersize=3, label=f"eigenvalue {idx}")
    ax.set_xlabel("hbar")
    ax.set_ylabel("argument / rad")
    ax.set_ylim(-np.pi - 0.2, np.pi + 0.2)
    ax.legend(fontsize=8)
    return save_figure(fig, path)


def plot_loops(loops, path, title="Loops around a hyperplane", samples=200):
    """
    Values of the encircled root function along each loop

    Args:
        loops: List of Loop sharing one root
        path: Output image path
    """
    fig, ax = setup_figure(title)
    theta = np.linspace(0, 2 * np.pi, samples)
    for loop in loops:
        values = [complex(np.dot(loop.direction, loop.point(t) - np.asarray(loop.base))) /
                  float(np.dot(loop.direction, loop.direction)) for t in theta]
        ax.plot([v.real for v in values], [v.imag for v in values], label=f"squash {loop.squash:g}")
    ax.scatter([0], [0], marker="x", color="red", zorder=3)
    ax.set_aspect("equal")
    ax.legend(fontsize=8)
    return save_figure(fig, path)
