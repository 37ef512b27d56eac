"""Transforms, periodic correlations, and spectrum compliance checks.

The transform pair is unitary: both directions carry 1/sqrt(L), the forward
kernel is exp(-2*pi*i*f*t/L). Under this convention a length-L sequence with
n forbidden carriers and energy L puts power L/(L-n) on every admissible
carrier, and the periodic crosscorrelation can be evaluated either as the
time-domain sum or through the spectra; both routes are implemented and the
slow one is kept as an oracle for the fast one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    FREQUENCY,
    TIME,
    ComplexSeq,
    CorrelationProfile,
    CorrelationSummary,
    ScsFamily,
    SpectralConstraint,
    _fmt_float,
)


def dft(seq: ComplexSeq) -> ComplexSeq:
    """Unitary forward transform of a time-domain sequence."""
    if seq.domain != TIME:
        raise ValueError("dft expects a time-domain sequence")
    length = len(seq)
    return ComplexSeq.frequency(np.fft.fft(seq.values) / np.sqrt(length))


def idft(seq: ComplexSeq) -> ComplexSeq:
    """Unitary inverse transform of a frequency-domain sequence."""
    if seq.domain != FREQUENCY:
        raise ValueError("idft expects a frequency-domain sequence")
    length = len(seq)
    return ComplexSeq.time(np.fft.ifft(seq.values) * np.sqrt(length))


def _check_pair(c: ComplexSeq, d: ComplexSeq):
    if c.domain != TIME or d.domain != TIME:
        raise ValueError("correlations are defined on time-domain sequences")
    if len(c) != len(d):
        raise ValueError("sequence lengths differ")


def pccf(c: ComplexSeq, d: ComplexSeq) -> CorrelationProfile:
    """Periodic crosscorrelation by the direct O(L^2) sum.

    Slow on purpose; this is the reference the transform-based engine is
    tested against.
    """
    _check_pair(c, d)
    length = len(c)
    cv, dv = c.values, d.values
    out = np.empty(length, dtype=np.complex128)
    for tau in range(length):
        out[tau] = np.sum(cv * np.conj(np.roll(dv, -tau)))
    return CorrelationProfile(out)


def _corr_from_ffts(fc: np.ndarray, fd: np.ndarray) -> np.ndarray:
    # theta(tau) = (1/L) sum_f C_f conj(D_f) w^{-f tau}, an unnormalized
    # forward transform of the spectral product
    return np.fft.fft(fc * np.conj(fd)) / fc.size


def pccf_fast(c: ComplexSeq, d: ComplexSeq) -> CorrelationProfile:
    """Periodic crosscorrelation through the spectra.

    Handles any length (the underlying FFT is mixed-radix with a Bluestein
    fallback), so composite and prime L cost about the same.
    """
    _check_pair(c, d)
    return CorrelationProfile(_corr_from_ffts(np.fft.fft(c.values), np.fft.fft(d.values)))


def _peak(mags: np.ndarray, window: int, both_directions: bool) -> float:
    """Largest magnitude over shifts 0..window-1, optionally also counting
    the reversed pair ordering (whose profile is the index reflection)."""
    length = mags.size
    if window >= length:
        return float(mags.max())
    peak = float(mags[:window].max())
    if both_directions:
        idx = (length - np.arange(window)) % length
        peak = max(peak, float(mags[idx].max()))
    return peak


def _zcz_from_mags(auto_mags, cross_mags, length: int, tol: float) -> int:
    for m in cross_mags:
        if m[0] > tol:
            return 0
    for z in range(1, length):
        for m in auto_mags:
            if m[z] > tol:
                return z
        for m in cross_mags:
            if m[z] > tol:
                return z
    return length


def _set_profiles(ffts, length):
    """Autocorrelation and ordered-pair crosscorrelation magnitudes of one set."""
    autos = [np.abs(_corr_from_ffts(f, f)) for f in ffts]
    crosses = []
    for a in range(len(ffts)):
        for b in range(len(ffts)):
            if a != b:
                crosses.append(np.abs(_corr_from_ffts(ffts[a], ffts[b])))
    return autos, crosses


def zcz_width(seqs, tol: float = 1e-9) -> int:
    """Zero-correlation-zone width of one set of time-domain sequences.

    Largest Z such that all autocorrelations vanish for 0 < tau < Z and all
    ordered crosscorrelations vanish for 0 <= tau < Z. A set whose members
    already correlate at shift zero has Z = 0; a lone sequence always has
    Z >= 1 because the cross condition is vacuous.
    """
    seqs = list(seqs)
    if not seqs:
        raise ValueError("empty set")
    for s in seqs:
        if s.domain != TIME:
            raise ValueError("zcz is measured on time-domain sequences")
    length = len(seqs[0])
    ffts = [np.fft.fft(s.values) for s in seqs]
    autos, crosses = _set_profiles(ffts, length)
    return _zcz_from_mags(autos, crosses, length, tol)


@dataclass(frozen=True)
class FamilySummary:
    """Correlation peaks of a family, split the way multi-set figures of
    merit are defined: theta_a is the worst value seen inside any single set
    (auto sidelobes and intra-set crosscorrelations), theta_c the worst
    value between sets. peak_auto/peak_cross are the flat-family split
    instead (auto sidelobes vs all crosscorrelations), which is what the
    single-set floor inequalities apply to.
    """

    per_set: tuple
    theta_a: float
    theta_c: float
    theta_max: float
    peak_auto: float
    peak_cross: float
    window: int


def summarize(family: ScsFamily, window: int | None = None, tol: float = 1e-9) -> FamilySummary:
    """Sweep every correlation of the family and collect the peaks.

    window limits the shift range to 0..window-1 (auto sidelobes start at
    1); the zero-correlation-zone width is always measured to its natural
    extent regardless of window. Default window is the full period.
    """
    length = family.length
    w = length if window is None else int(window)
    if not 1 <= w <= length:
        raise ValueError("window must lie in [1, L]")

    ffts = [[np.fft.fft(seq.values) for seq in group] for group in family.sets]

    per_set = []
    peak_auto = 0.0
    for group in ffts:
        autos, crosses = _set_profiles(group, length)
        t_a = max((_peak(m[1:], w - 1, False) for m in autos), default=0.0) if w > 1 else 0.0
        t_c = max((_peak(m, w, False) for m in crosses), default=0.0)
        z = _zcz_from_mags(autos, crosses, length, tol)
        per_set.append(CorrelationSummary(t_a, t_c, max(t_a, t_c), w, z))
        peak_auto = max(peak_auto, t_a)

    theta_a = max(s.theta_max for s in per_set)

    inter = 0.0
    for i in range(len(ffts)):
        for i2 in range(i + 1, len(ffts)):
            for fa in ffts[i]:
                for fb in ffts[i2]:
                    mags = np.abs(_corr_from_ffts(fa, fb))
                    inter = max(inter, _peak(mags, w, True))

    intra_cross = max((s.theta_c for s in per_set), default=0.0)
    peak_cross = max(intra_cross, inter)
    return FamilySummary(
        per_set=tuple(per_set),
        theta_a=theta_a,
        theta_c=inter,
        theta_max=max(theta_a, inter),
        peak_auto=peak_auto,
        peak_cross=peak_cross,
        window=w,
    )


@dataclass(frozen=True)
class SpectrumReport:
    """Per-carrier power against the uniform admissible level."""

    constraint: SpectralConstraint
    power: np.ndarray
    admissible_power: float
    max_leakage: float
    max_deviation: float
    ok: bool


def check_spectrum(seq: ComplexSeq, constraint: SpectralConstraint, tol: float = 1e-9) -> SpectrumReport:
    """Check that forbidden carriers are empty and admissible ones sit at
    the uniform level L/(L-n). Accepts either domain; time input is
    transformed first."""
    if len(seq) != constraint.length:
        raise ValueError("sequence length does not match the constraint")
    spec = dft(seq) if seq.domain == TIME else seq
    power = np.abs(spec.values) ** 2
    mask = constraint.marking_vector().astype(bool)
    level = constraint.admissible_power
    max_leakage = float(power[mask].max()) if mask.any() else 0.0
    max_deviation = float(np.max(np.abs(power[~mask] - level)))
    ok = max_leakage <= tol and max_deviation <= tol
    power.setflags(write=False)
    return SpectrumReport(constraint, power, level, max_leakage, max_deviation, ok)


def check_unimodular(seq: ComplexSeq, tol: float = 1e-9) -> bool:
    return bool(np.max(np.abs(np.abs(seq.values) - 1.0)) <= tol)


def sum_of_squares_check(c: ComplexSeq, d: ComplexSeq, constraint: SpectralConstraint,
                         rel_tol: float = 1e-9, spectrum_tol: float = 1e-6):
    """Verify sum_tau |theta_cd(tau)|^2 == L^3/(L-n) for a compliant pair.

    Both sequences must satisfy the uniform-power condition; a violation is
    raised, not folded into the verdict, because the identity says nothing
    about non-compliant inputs. Returns (lhs, rhs, ok).
    """
    _check_pair(c, d)
    for name, s in (("first", c), ("second", d)):
        rep = check_spectrum(s, constraint, spectrum_tol)
        if not rep.ok:
            raise ValueError(
                f"{name} sequence violates the spectral constraint "
                f"(leakage {rep.max_leakage:.3e}, deviation {rep.max_deviation:.3e})"
            )
    mags = pccf_fast(c, d).magnitudes
    lhs = float(np.sum(mags ** 2))
    length = constraint.length
    rhs = length ** 3 / (length - constraint.n)
    return lhs, rhs, abs(lhs - rhs) <= rel_tol * rhs


# ---------------------------------------------------------------------------
# Plot-data exports.

def write_correlation_csv(profile: CorrelationProfile, path) -> None:
    """Rows tau,re,im,mag for tau = 0..L-1."""
    with open(path, "w") as fh:
        fh.write("tau,re,im,mag\n")
        for tau, v in enumerate(profile.values):
            fh.write(f"{tau},{_fmt_float(v.real)},{_fmt_float(v.imag)},{_fmt_float(abs(v))}\n")


def write_spectrum_csv(report: SpectrumReport, path) -> None:
    """Rows f,power,forbidden with forbidden as a 0/1 flag."""
    mask = report.constraint.marking_vector()
    with open(path, "w") as fh:
        fh.write("f,power,forbidden\n")
        for f, p in enumerate(report.power):
            fh.write(f"{f},{_fmt_float(p)},{int(mask[f])}\n")
