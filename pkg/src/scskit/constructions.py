"""Sequence family constructions driven by circular Florentine rectangles.

Two routes produce families whose spectra are uniform off a forbidden
carrier set:

* a direct time-domain family of permutation-weighted phase ramps, one
  sequence per CFR row, with one forbidden carrier per period;
* an interleaving framework that lays N x N orthogonal-ish base matrices
  into N x P base matrices with zero columns at a chosen insert set, then
  reads the result row-interleaved as a frequency-domain sequence. The
  forbidden carriers land on a comb determined by the insert set alone.

The framework yields either one sequence per CFR row (with a per-column
phase twist) or, by modulating with the rows of a unitary-up-to-scale
matrix, N sequences per CFR row forming zero-correlation-zone sets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cfr import Cfr, InverseRows, inverse_rows, _is_prime
from .core import ComplexSeq, ScsFamily, SpectralConstraint
from .spectral import idft

TWISTED = "twisted"
MODULATED = "modulated"


@dataclass(frozen=True)
class FrameworkParams:
    """Geometry of the interleaving framework.

    order is the base-matrix side N; insert is the set of zeroed column
    indices inside one period P = order + len(insert). The output length is
    N*P and the forbidden carriers are {s + a*P : s in insert, a in 0..N-1}.
    """

    order: int
    insert: frozenset

    def __post_init__(self):
        object.__setattr__(self, "insert", frozenset(int(s) for s in self.insert))
        if self.order < 1:
            raise ValueError("order must be positive")
        if not self.insert:
            raise ValueError("insert set must be nonempty")
        if any(s < 0 or s >= self.period for s in self.insert):
            raise ValueError(f"insert entries must lie in [0, {self.period})")

    @property
    def t_count(self) -> int:
        return len(self.insert)

    @property
    def period(self) -> int:
        return self.order + len(self.insert)

    @property
    def length(self) -> int:
        return self.order * self.period

    @property
    def admissible_columns(self) -> tuple:
        return tuple(k for k in range(self.period) if k not in self.insert)

    def constraint(self) -> SpectralConstraint:
        forbidden = frozenset(s + a * self.period for s in self.insert for a in range(self.order))
        return SpectralConstraint(self.length, forbidden)


@dataclass(frozen=True)
class BaseMatrix:
    """One N x P base matrix: zero columns on the insert set, magnitude
    sqrt(P/N) everywhere else."""

    params: FrameworkParams
    variant: str
    entries: np.ndarray

    def __post_init__(self):
        if self.variant not in (TWISTED, MODULATED):
            raise ValueError(f"unknown variant {self.variant!r}")
        arr = np.array(self.entries, dtype=np.complex128)
        n, p = self.params.order, self.params.period
        if arr.shape != (n, p):
            raise ValueError(f"entries must be {n} x {p}")
        mags = np.abs(arr)
        want = np.sqrt(p / n)
        for k in range(p):
            if k in self.params.insert:
                if mags[:, k].max() > 1e-9:
                    raise ValueError(f"insert column {k} is not zero")
            elif np.max(np.abs(mags[:, k] - want)) > 1e-9 * want:
                raise ValueError(f"column {k} magnitude is off the sqrt(P/N) level")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)


def _unit_blocks(inv_row, params: FrameworkParams) -> np.ndarray:
    # a[j, t] = sqrt(P/N) * w_N^{j * g_t}; integer exponents keep the roots exact
    n = params.order
    g = np.asarray(inv_row, dtype=np.int64)
    j = np.arange(n, dtype=np.int64)[:, None]
    return np.sqrt(params.period / n) * np.exp(2j * np.pi * ((j * g[None, :]) % n) / n)


def twisted_base_matrices(inv: InverseRows, params: FrameworkParams) -> list:
    """One base matrix per CFR row: block a[:, t] lands in column l_t with
    an extra per-column twist w_{NP}^{l_t * g_t}. The twist is what turns
    the interleaved spectrum into a unimodular time sequence."""
    if inv.order != params.order:
        raise ValueError("CFR order does not match the framework order")
    n, p = params.order, params.period
    lcols = np.asarray(params.admissible_columns, dtype=np.int64)
    out = []
    for g_row in inv.rows:
        g = np.asarray(g_row, dtype=np.int64)
        blocks = _unit_blocks(g_row, params)
        twist = np.exp(2j * np.pi * ((lcols * g) % (n * p)) / (n * p))
        entries = np.zeros((n, p), dtype=np.complex128)
        entries[:, lcols] = blocks * twist[None, :]
        out.append(BaseMatrix(params, TWISTED, entries))
    return out


def _check_modulation(h: np.ndarray, n: int) -> None:
    if h.shape != (n, n):
        raise ValueError(f"modulation matrix must be {n} x {n}")
    if np.max(np.abs(np.abs(h) - 1.0)) > 1e-9:
        raise ValueError("modulation matrix entries must be unimodular")
    gram = h @ h.conj().T
    if np.max(np.abs(gram - n * np.eye(n))) > 1e-9 * n:
        raise ValueError("modulation matrix rows must be orthogonal")


def modulated_base_matrices(inv: InverseRows, params: FrameworkParams, h) -> list:
    """Per CFR row, one base matrix per modulation-matrix row c: block
    a[:, t] lands in column l_t scaled by h[c, t]. Returns a list of lists,
    outer over CFR rows, inner over c."""
    if inv.order != params.order:
        raise ValueError("CFR order does not match the framework order")
    n, p = params.order, params.period
    h = np.asarray(h, dtype=np.complex128)
    _check_modulation(h, n)
    lcols = np.asarray(params.admissible_columns, dtype=np.int64)
    out = []
    for g_row in inv.rows:
        blocks = _unit_blocks(g_row, params)
        group = []
        for c in range(n):
            entries = np.zeros((n, p), dtype=np.complex128)
            entries[:, lcols] = blocks * h[c][None, :]
            group.append(BaseMatrix(params, MODULATED, entries))
        out.append(group)
    return out


def interleave(base: BaseMatrix) -> ComplexSeq:
    """Read a base matrix row-interleaved as one frequency-domain sequence:
    carrier n = P*r + s takes entry (r, s)."""
    return ComplexSeq.frequency(base.entries.reshape(-1))


def to_time_domain(freq_sets, constraint: SpectralConstraint, variant: str,
                   alphabet_order: int | None = None, tol: float = 1e-9) -> ScsFamily:
    """Inverse-transform a nested list of frequency sequences into a family.

    The twisted variant is unimodular by design, so any magnitude straying
    from 1 is a bug upstream and raises with the worst offender's index.
    """
    time_sets = []
    worst = (0.0, None)
    for i, group in enumerate(freq_sets):
        row = []
        for j, fs in enumerate(group):
            u = idft(fs)
            dev = float(np.max(np.abs(np.abs(u.values) - 1.0)))
            if dev > worst[0]:
                worst = (dev, (i, j, int(np.argmax(np.abs(np.abs(u.values) - 1.0)))))
            row.append(u)
        time_sets.append(tuple(row))
    if variant == TWISTED and worst[0] > tol:
        i, j, t = worst[1]
        raise ValueError(
            f"unimodularity failed: set {i} member {j} sample {t} deviates by {worst[0]:.3e}"
        )
    return ScsFamily(tuple(time_sets), constraint, alphabet_order)


def _require_usable_order(n: int) -> None:
    if n % 2 == 0:
        raise ValueError(
            f"order {n} is even: even orders admit only one circular Florentine row, "
            "so the family would be degenerate"
        )
    if n < 3:
        raise ValueError("order must be at least 3")


def phase_ramp_family(cfr: Cfr) -> ScsFamily:
    """Direct time-domain family: one sequence per CFR row.

    Sequence m has samples w_{N+1}^{pi_m(i mod N) * i} for i = 0..N(N+1)-1.
    The single forbidden-carrier comb is {1 + a(N+1)} and every correlation
    magnitude is 0, N+1, or the length itself at the main peak.
    """
    n = cfr.order
    _require_usable_order(n)
    p = n + 1
    length = n * p
    i = np.arange(length, dtype=np.int64)
    sets = []
    for row in cfr.rows:
        perm = np.asarray(row, dtype=np.int64)
        exponents = (perm[i % n] * i) % p
        sets.append((ComplexSeq.time(np.exp(2j * np.pi * exponents / p)),))
    constraint = SpectralConstraint(length, frozenset(1 + a * p for a in range(n)))
    return ScsFamily(tuple(sets), constraint, alphabet_order=p)


def multi_null_family(cfr: Cfr, insert) -> ScsFamily:
    """Interleaved family with a general insert set: one unimodular
    sequence per CFR row, alphabet contained in the P-th roots of unity."""
    _require_usable_order(cfr.order)
    params = FrameworkParams(cfr.order, frozenset(insert))
    inv = inverse_rows(cfr)
    bases = twisted_base_matrices(inv, params)
    freq_sets = [[interleave(b)] for b in bases]
    family = to_time_domain(freq_sets, params.constraint(), TWISTED,
                            alphabet_order=params.period)
    _assert_alphabet(family)
    return family


def interleaved_family(cfr: Cfr, s0: int) -> ScsFamily:
    """Single-null interleaved family; the general engine with insert {s0}."""
    return multi_null_family(cfr, {int(s0)})


def dft_modulation(n: int) -> np.ndarray:
    """Unnormalized DFT matrix, the default modulation for ZCZ families."""
    jk = np.outer(np.arange(n), np.arange(n)) % n
    return np.exp(-2j * np.pi * jk / n)


def zcz_family(cfr: Cfr, insert=None, s0: int | None = None, h=None,
               num_sets: int | None = None) -> ScsFamily:
    """Zero-correlation-zone family: one set of N sequences per CFR row.

    Each set is built from one CFR row by modulating the base blocks with
    the rows of h (default: DFT). Sets have ZCZ width N; between sets every
    correlation magnitude is flat at P.
    """
    n = cfr.order
    _require_usable_order(n)
    if (insert is None) == (s0 is None):
        raise ValueError("give exactly one of insert or s0")
    params = FrameworkParams(n, frozenset(insert) if insert is not None else frozenset({int(s0)}))
    rows = cfr.num_rows if num_sets is None else int(num_sets)
    if not 1 <= rows <= cfr.num_rows:
        raise ValueError(f"num_sets must lie in [1, {cfr.num_rows}]")
    default_h = h is None
    hmat = dft_modulation(n) if default_h else np.asarray(h, dtype=np.complex128)
    inv = inverse_rows(cfr)
    sub = InverseRows(inv.order, inv.rows[:rows])
    groups = modulated_base_matrices(sub, params, hmat)
    freq_sets = [[interleave(b) for b in group] for group in groups]
    alphabet = params.length if default_h else None
    return to_time_domain(freq_sets, params.constraint(), MODULATED,
                          alphabet_order=alphabet)


def _assert_alphabet(family: ScsFamily) -> None:
    # every sample must be an alphabet_order-th root of unity
    order = family.alphabet_order
    for i, j, seq in family.members():
        k = np.round(np.angle(seq.values) * order / (2 * np.pi)).astype(np.int64) % order
        ref = np.exp(2j * np.pi * k / order)
        if np.max(np.abs(seq.values - ref)) > 1e-9:
            raise ValueError(f"set {i} member {j} strays off the order-{order} phase grid")


def measured_alphabet(family: ScsFamily) -> int | None:
    """Distinct phase values actually used, counted on the declared grid."""
    order = family.alphabet_order
    if order is None:
        return None
    buckets = set()
    for _, _, seq in family.members():
        k = np.round(np.angle(seq.values) * order / (2 * np.pi)).astype(np.int64) % order
        buckets.update(int(v) for v in k)
    return len(buckets)


# ---------------------------------------------------------------------------
# Cyclic difference sets. When the admissible columns of an insert pattern
# form one, the interleaved autocorrelation peak meets its floor exactly.

@dataclass(frozen=True)
class DifferenceSetCheck:
    is_ds: bool
    k: int
    lam: int | None


def verify_difference_set(elements, modulus: int) -> DifferenceSetCheck:
    """Count nonzero differences; a difference set hits every nonzero
    residue the same number of times."""
    elems = sorted(int(e) % modulus for e in elements)
    if len(set(elems)) != len(elems):
        raise ValueError("repeated elements")
    counts = [0] * modulus
    for a in elems:
        for b in elems:
            if a != b:
                counts[(a - b) % modulus] += 1
    lam = set(counts[1:])
    if len(lam) == 1:
        return DifferenceSetCheck(True, len(elems), lam.pop())
    return DifferenceSetCheck(False, len(elems), None)


@dataclass(frozen=True)
class CyclicDifferenceSet:
    """A (v, k, lam) cyclic difference set, verified on construction."""

    modulus: int
    elements: frozenset
    k: int
    lam: int

    def __post_init__(self):
        object.__setattr__(self, "elements", frozenset(int(e) for e in self.elements))
        chk = verify_difference_set(self.elements, self.modulus)
        if not chk.is_ds or chk.k != self.k or chk.lam != self.lam:
            raise ValueError(f"not a ({self.modulus},{self.k},{self.lam}) difference set")


def qr_difference_set(p: int) -> CyclicDifferenceSet:
    """Quadratic residues mod p, a (p, (p-1)/2, (p-3)/4) difference set for
    primes p = 3 mod 4."""
    if not _is_prime(p) or p % 4 != 3:
        raise ValueError("quadratic-residue difference sets need a prime p = 3 mod 4")
    elems = frozenset((x * x) % p for x in range(1, p))
    return CyclicDifferenceSet(p, elems, (p - 1) // 2, (p - 3) // 4)
