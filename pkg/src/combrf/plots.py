"""Matplotlib figure rendering for the CLI report path.

Each helper writes one PNG next to the corresponding CSV. Figures are for
inspection; the CSVs remain the machine-readable record.
"""

from __future__ import annotations

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_response_figure(response, path, title="RF transfer function"):
    fig, ax = plt.subplots(figsize=(8, 4.5))
    mag_db = response.magnitude_db
    ax.plot(response.frequencies / 1e9, mag_db, lw=1.2)
    ax.set_xlabel("Frequency [GHz]")
    ax.set_ylabel("|H| [dB]")
    ax.set_title(title)
    finite = mag_db[np.isfinite(mag_db)]
    if len(finite):
        ax.set_ylim(max(finite.max() - 80.0, finite.min()), finite.max() + 3.0)
    ax.grid(True, alpha=0.3)
    _finish(fig, path)


def save_comb_figure(comb, path, title="Comb spectrum"):
    fig, ax = plt.subplots(figsize=(8, 4.5))
    freqs_thz = comb.frequencies / 1e12
    markerline, stemlines, baseline = ax.stem(freqs_thz, comb.powers_dbm)
    plt.setp(markerline, markersize=2.5)
    plt.setp(stemlines, linewidth=0.8)
    baseline.set_visible(False)
    ax.set_xlabel("Optical frequency [THz]")
    ax.set_ylabel("Power [dBm]")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    _finish(fig, path)


def save_trace_figure(report, path, title="Calibration error trace"):
    fig, ax = plt.subplots(figsize=(6, 4))
    iterations = np.arange(1, report.iterations + 1)
    ax.semilogy(iterations, np.maximum(report.error_trace, 1e-12), "o-", ms=4)
    ax.set_xlabel("Iteration")
    ax.set_ylabel("max |error| [dB]")
    ax.set_title(title + (" (converged)" if report.converged else " (not converged)"))
    ax.grid(True, which="both", alpha=0.3)
    _finish(fig, path)


def save_pattern_figure(patterns, path, title="Array factor"):
    """patterns: iterable of (label, ArrayPattern)."""
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for label, pattern in patterns:
        with np.errstate(divide="ignore"):
            mag_db = 20.0 * np.log10(pattern.magnitude)
        ax.plot(pattern.angles, mag_db, lw=1.0, label=label)
    ax.set_xlabel("Angle [deg]")
    ax.set_ylabel("Normalized pattern [dB]")
    ax.set_xlim(-90, 90)
    ax.set_ylim(-60, 2)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    _finish(fig, path)


def save_beamwidth_figure(sweep, path, title="Beamwidth vs element count"):
    """sweep: iterable of (n_elements, beamwidth_deg)."""
    counts = [m for m, _ in sweep]
    widths = [w for _, w in sweep]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.loglog(counts, widths, "o-", ms=5)
    ax.set_xlabel("Number of elements M")
    ax.set_ylabel("3 dB beamwidth [deg]")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    _finish(fig, path)


def save_channelizer_figure(channelized, composite, path, title="Channelized spectrum"):
    fig, axes = plt.subplots(2, 1, figsize=(8, 7), sharex=True)
    freqs_ghz = channelized.frequencies / 1e9
    for seg in channelized.segments:
        if seg.weight:
            with np.errstate(divide="ignore"):
                seg_db = 10.0 * np.log10(seg.power_linear)
            axes[0].plot(freqs_ghz, seg_db, lw=0.8)
    axes[0].set_ylabel("Segment power [dB]")
    axes[0].set_title(title)
    axes[0].grid(True, alpha=0.3)
    axes[1].plot(composite.frequencies / 1e9, composite.power, lw=1.0, color="k")
    axes[1].set_xlabel("RF frequency [GHz]")
    axes[1].set_ylabel("Composite power [dB]")
    axes[1].grid(True, alpha=0.3)
    floor = np.nanmax(composite.power[np.isfinite(composite.power)]) - 60.0
    axes[1].set_ylim(bottom=floor)
    _finish(fig, path)
