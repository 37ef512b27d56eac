"""Spectrally constrained sequence families from circular Florentine
rectangles: constructions, correlation analysis, and floor certification."""

from .bounds import (
    BoundsReport,
    InequalityCheck,
    ZczCapacity,
    bounds_from_params,
    closed_form_eta,
    combined_floor_check,
    correlation_tradeoff,
    difference_set_peak,
    evaluate_family,
    family_floor,
    format_table,
    interset_floor,
    optimality_factor,
    single_set_floors,
    zcz_capacity,
)
from .cfr import (
    CFR_N15_R4,
    Cfr,
    CfrViolation,
    InverseRows,
    SearchResult,
    cfr_from_prime,
    count_alignments,
    inverse_rows,
    load_cfr,
    search_cfr,
    verify_cfr,
    write_cfr,
)
from .constructions import (
    BaseMatrix,
    CyclicDifferenceSet,
    DifferenceSetCheck,
    FrameworkParams,
    dft_modulation,
    interleave,
    interleaved_family,
    measured_alphabet,
    modulated_base_matrices,
    multi_null_family,
    phase_ramp_family,
    qr_difference_set,
    to_time_domain,
    twisted_base_matrices,
    verify_difference_set,
    zcz_family,
)
from .core import (
    ComplexSeq,
    CorrelationProfile,
    CorrelationSummary,
    ScsFamily,
    SpectralConstraint,
    energy,
    load_family,
    load_sequence,
    save_family,
    save_sequence,
)
from .spectral import (
    FamilySummary,
    SpectrumReport,
    check_spectrum,
    check_unimodular,
    dft,
    idft,
    pccf,
    pccf_fast,
    sum_of_squares_check,
    summarize,
    write_correlation_csv,
    write_spectrum_csv,
    zcz_width,
)

__version__ = "0.1.0"
