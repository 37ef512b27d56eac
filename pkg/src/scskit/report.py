"""Rendered family reports: plot-data CSVs plus figures.

The CSVs are the canonical output (same schemas as the spectral module
writers); the PNGs are a convenience view of the same data.
"""

from __future__ import annotations

import json
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .constructions import measured_alphabet
from .core import ScsFamily
from .spectral import (
    check_spectrum,
    pccf_fast,
    summarize,
    write_correlation_csv,
    write_spectrum_csv,
)


def _cross_envelopes(family: ScsFamily):
    """Pointwise max of |theta(tau)| over intra-set and inter-set ordered
    pairs; either is None when no such pair exists."""
    length = family.length
    ffts = [[np.fft.fft(seq.values) for seq in group] for group in family.sets]
    intra = np.zeros(length) if family.set_size > 1 else None
    inter = np.zeros(length) if family.num_sets > 1 else None
    for i, group in enumerate(ffts):
        for a in range(len(group)):
            for b in range(len(group)):
                if a != b:
                    mags = np.abs(np.fft.fft(group[a] * np.conj(group[b])) / length)
                    np.maximum(intra, mags, out=intra)
        for i2 in range(i + 1, len(ffts)):
            for fa in group:
                for fb in ffts[i2]:
                    mags = np.abs(np.fft.fft(fa * np.conj(fb)) / length)
                    np.maximum(inter, mags, out=inter)
                    np.maximum(inter, mags[(length - np.arange(length)) % length], out=inter)
    return intra, inter


def render_family_report(family: ScsFamily, outdir, window: int | None = None,
                         tol: float = 1e-9) -> list:
    """Write summary.json, representative CSVs, and three figures into
    outdir. Returns the list of written paths."""
    os.makedirs(outdir, exist_ok=True)
    written = []

    def path(name):
        p = os.path.join(outdir, name)
        written.append(p)
        return p

    summary = summarize(family, window=window, tol=tol)
    rec = {
        "L": family.length,
        "K": family.num_sets,
        "M": family.set_size,
        "n": family.constraint.n,
        "omega": family.constraint.sorted_forbidden(),
        "window": summary.window,
        "theta_a": summary.theta_a,
        "theta_c": summary.theta_c,
        "theta_max": summary.theta_max,
        "peak_auto": summary.peak_auto,
        "peak_cross": summary.peak_cross,
        "zcz_widths": [s.zcz_width for s in summary.per_set],
        "alphabet_order": family.alphabet_order,
        "alphabet_used": measured_alphabet(family),
    }
    with open(path("summary.json"), "w") as fh:
        json.dump(rec, fh, indent=2, sort_keys=True)
        fh.write("\n")

    first = family.sets[0][0]
    auto = pccf_fast(first, first)
    write_correlation_csv(auto, path("autocorr_0_0.csv"))
    if family.set_size > 1:
        write_correlation_csv(pccf_fast(first, family.sets[0][1]),
                              path("crosscorr_intra_0_0x0_1.csv"))
    if family.num_sets > 1:
        write_correlation_csv(pccf_fast(first, family.sets[1][0]),
                              path("crosscorr_inter_0_0x1_0.csv"))
    spec_report = check_spectrum(first, family.constraint, tol)
    write_spectrum_csv(spec_report, path("spectrum_0_0.csv"))

    taus = np.arange(family.length)

    fig, ax = plt.subplots(figsize=(8.0, 3.2))
    for j, seq in enumerate(family.sets[0]):
        mags = pccf_fast(seq, seq).magnitudes
        ax.plot(taus, mags, lw=0.9, alpha=0.8, label=f"member {j}" if j < 4 else None)
    ax.set_xlabel("shift")
    ax.set_ylabel("|autocorrelation|")
    ax.set_title(f"set 0 autocorrelation (L={family.length})")
    ax.grid(alpha=0.3)
    if family.set_size <= 4:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path("autocorrelation.png"), dpi=150)
    plt.close(fig)

    intra, inter = _cross_envelopes(family)
    if intra is not None or inter is not None:
        fig, ax = plt.subplots(figsize=(8.0, 3.2))
        if intra is not None:
            ax.plot(taus, intra, lw=0.9, label="intra-set envelope")
        if inter is not None:
            ax.plot(taus, inter, lw=0.9, label="inter-set envelope")
        ax.set_xlabel("shift")
        ax.set_ylabel("max |crosscorrelation|")
        ax.set_title("crosscorrelation envelopes")
        ax.grid(alpha=0.3)
        ax.legend(fontsize=8)
        fig.tight_layout()
        fig.savefig(path("crosscorrelation.png"), dpi=150)
        plt.close(fig)

    fig, ax = plt.subplots(figsize=(8.0, 3.2))
    freqs = np.arange(family.length)
    mask = family.constraint.marking_vector().astype(bool)
    ax.plot(freqs[~mask], spec_report.power[~mask], ".", ms=3, label="admissible")
    ax.plot(freqs[mask], spec_report.power[mask], "x", ms=4, color="tab:red",
            label="forbidden")
    ax.axhline(spec_report.admissible_power, color="gray", lw=0.8, ls="--",
               label=f"L/(L-n) = {spec_report.admissible_power:.6f}")
    ax.set_xlabel("carrier")
    ax.set_ylabel("power")
    ax.set_title("member (0,0) spectrum")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path("spectrum.png"), dpi=150)
    plt.close(fig)

    return written
