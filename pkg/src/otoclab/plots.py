"""
SVG rendering of correlator decays, resonance curves and phase portraits.

Output bytes are reproducible for fixed input and library versions: the SVG
id salt is pinned and the date metadata dropped.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .errors import InvalidArgumentError  # noqa: E402

KINDS = ("decay-curve", "gamma-vs-k", "lambda-vs-k", "portrait", "area-vs-k")

_RC = {"svg.hashsalt": "otoclab", "svg.fonttype": "path", "path.simplify": False}


def _require(data):
    if data is None or len(data) == 0:
        raise InvalidArgumentError("nothing to plot")


def _column(records, name):
    return np.array([np.nan if getattr(r, name) is None else getattr(r, name) for r in records],
                    dtype=float)


def decay_figure(series, fit=None, label=None):
    """``|O1(t)|`` on a log axis, with the fitted line over its window if given."""
    _require(series)
    t, y = np.asarray(series.times), np.abs(series.o1)
    fig, ax = plt.subplots(figsize=(5, 3.6))
    pos = y > 0
    ax.semilogy(t[pos], y[pos], "o", ms=4, mfc="none",
                label=label or f"K={series.params.K:g}, D={series.params.D}")
    if fit is not None:
        tw = np.arange(fit.window[0], fit.window[1] + 1)
        ax.semilogy(tw, fit.predict(tw), "k--", lw=1.2, label=rf"$\gamma$={fit.exponent:.3f}")
    ax.set_xlabel("t")
    ax.set_ylabel(r"$|O_1(t)|$")
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig


def gamma_figure(records):
    _require(records)
    fig, ax = plt.subplots(figsize=(5, 3.6))
    ax.errorbar(_column(records, "K"), _column(records, "gamma"),
                yerr=_column(records, "gamma_stderr"), fmt="o-", ms=3, lw=1, capsize=2)
    ax.set_xlabel("K")
    ax.set_ylabel(r"$\gamma$")
    fig.tight_layout()
    return fig


def lambda_figure(records):
    """Resonance moduli per method as lines; ``exp(-gamma/2)`` as circles."""
    _require(records)
    K = _column(records, "K")
    fig, ax = plt.subplots(figsize=(5, 3.6))
    for name, color, label in (("lambda1_momentum_position", "black", "momentum-position"),
                               ("lambda1_fourier", "red", "Fourier"),
                               ("lambda1_ulam", "tab:green", "Ulam")):
        y = _column(records, name)
        if np.isfinite(y).any():
            ax.plot(K, y, "-", color=color, lw=1.2, label=label)
    g = _column(records, "gamma")
    if np.isfinite(g).any():
        e = np.exp(-g / 2)
        # |d exp(-g/2) / dg| = exp(-g/2) / 2
        ax.errorbar(K, e, yerr=0.5 * e * _column(records, "gamma_stderr"), fmt="o",
                    color="tab:blue", mfc="none", ms=4, capsize=2, label=r"$e^{-\gamma/2}$")
    ax.set_xlabel("K")
    ax.set_ylabel(r"$|\lambda_1|$")
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig


def area_figure(records):
    """Regular area (left axis) against the momentum-position resonance (right axis)."""
    _require(records)
    K = _column(records, "K")
    fig, ax = plt.subplots(figsize=(5, 3.6))
    ax.plot(K, _column(records, "a_reg"), "k-", lw=2)
    ax.set_xlabel("K")
    ax.set_ylabel(r"$A_{\rm reg}$")
    lam = _column(records, "lambda1_momentum_position")
    if np.isfinite(lam).any():
        ax2 = ax.twinx()
        ax2.plot(K, lam, "-", color="tab:cyan", lw=1)
        ax2.set_ylabel(r"$|\lambda_1|$")
    fig.tight_layout()
    return fig


def portrait_figure(q, p, K=None):
    _require(q)
    fig, ax = plt.subplots(figsize=(4, 4))
    ax.scatter(q, p, s=0.2, c="k", marker=".", linewidths=0)
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1)
    ax.set_xlabel("q")
    ax.set_ylabel("p")
    if K is not None:
        ax.set_title(f"K = {K:g}")
    fig.tight_layout()
    return fig


def _render(build, path, *args, **kw):
    path = Path(path)
    with plt.rc_context(_RC):
        fig = build(*args, **kw)
        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    return path


def decay_curve(series, path, fit=None, label=None):
    return _render(decay_figure, path, series, fit=fit, label=label)


def gamma_vs_k(records, path):
    return _render(gamma_figure, path, records)


def lambda_vs_k(records, path):
    return _render(lambda_figure, path, records)


def area_vs_k(records, path):
    return _render(area_figure, path, records)


def portrait(q, p, path, K=None):
    return _render(portrait_figure, path, q, p, K=K)


def emit_plot(data, kind, path, **kw):
    """Dispatch on ``kind``; ``data`` is a series, a record list, or ``(q, p)``."""
    if kind == "decay-curve":
        return decay_curve(data, path, **kw)
    if kind == "gamma-vs-k":
        return gamma_vs_k(data, path)
    if kind == "lambda-vs-k":
        return lambda_vs_k(data, path)
    if kind == "area-vs-k":
        return area_vs_k(data, path)
    if kind == "portrait":
        q, p = data
        return portrait(q, p, path, **kw)
    raise InvalidArgumentError(f"unknown plot kind {kind!r}; expected one of {KINDS}")
