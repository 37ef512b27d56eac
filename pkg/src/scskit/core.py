"""Core types and file formats for spectrally constrained sequence work.

A sequence lives in one of two domains (time or frequency) and is tagged so
transforms cannot be applied twice. A spectral constraint is the set of
forbidden carrier indices for a given length. A family is K sets of M
time-domain sequences sharing one constraint.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

TIME = "time"
FREQUENCY = "frequency"


def _freeze(values) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("sequence values must be a non-empty 1-d array")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ComplexSeq:
    """A complex sequence tagged with the domain it lives in."""

    domain: str
    values: np.ndarray

    def __post_init__(self):
        if self.domain not in (TIME, FREQUENCY):
            raise ValueError(f"unknown domain {self.domain!r}")
        object.__setattr__(self, "values", _freeze(self.values))

    @classmethod
    def time(cls, values) -> "ComplexSeq":
        return cls(TIME, values)

    @classmethod
    def frequency(cls, values) -> "ComplexSeq":
        return cls(FREQUENCY, values)

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class SpectralConstraint:
    """Forbidden carrier set for sequences of a fixed length.

    The number of forbidden carriers must stay below the length, otherwise
    no energy can be placed at all.
    """

    length: int
    forbidden: frozenset

    def __post_init__(self):
        object.__setattr__(self, "forbidden", frozenset(int(f) for f in self.forbidden))
        if self.length < 1:
            raise ValueError("length must be positive")
        if any(f < 0 or f >= self.length for f in self.forbidden):
            raise ValueError("forbidden carriers must lie in [0, length)")
        if len(self.forbidden) >= self.length:
            raise ValueError("all carriers forbidden")

    @property
    def n(self) -> int:
        return len(self.forbidden)

    @property
    def admissible_power(self) -> float:
        """Per-carrier power L/(L-n) under the uniform allocation."""
        return self.length / (self.length - self.n)

    def marking_vector(self) -> np.ndarray:
        d = np.zeros(self.length, dtype=np.int64)
        for f in self.forbidden:
            d[f] = 1
        d.setflags(write=False)
        return d

    def sorted_forbidden(self) -> list:
        return sorted(self.forbidden)


@dataclass(frozen=True)
class ScsFamily:
    """K sets of M time-domain sequences under one spectral constraint.

    alphabet_order, when set, records that every sample phase is a multiple
    of 2*pi/alphabet_order.
    """

    sets: tuple
    constraint: SpectralConstraint
    alphabet_order: int | None = None

    def __post_init__(self):
        sets = tuple(tuple(s) for s in self.sets)
        if not sets or not sets[0]:
            raise ValueError("family needs at least one set with one sequence")
        m = len(sets[0])
        for group in sets:
            if len(group) != m:
                raise ValueError("all sets must hold the same number of sequences")
            for seq in group:
                if not isinstance(seq, ComplexSeq) or seq.domain != TIME:
                    raise ValueError("family members must be time-domain ComplexSeq")
                if len(seq) != self.constraint.length:
                    raise ValueError("member length does not match the constraint")
        if self.alphabet_order is not None and self.alphabet_order < 1:
            raise ValueError("alphabet_order must be positive")
        object.__setattr__(self, "sets", sets)

    @property
    def num_sets(self) -> int:
        return len(self.sets)

    @property
    def set_size(self) -> int:
        return len(self.sets[0])

    @property
    def length(self) -> int:
        return self.constraint.length

    def members(self):
        """Yield (set_index, member_index, sequence) over the whole family."""
        for i, group in enumerate(self.sets):
            for j, seq in enumerate(group):
                yield i, j, seq


@dataclass(frozen=True)
class CorrelationProfile:
    """Periodic correlation values theta(tau) for tau = 0..L-1."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _freeze(self.values))

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.values)

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class CorrelationSummary:
    """Peak correlation magnitudes of one set over a shift window."""

    theta_a: float
    theta_c: float
    theta_max: float
    window: int
    zcz_width: int


def energy(seq: ComplexSeq) -> float:
    return float(np.sum(np.abs(seq.values) ** 2))


# ---------------------------------------------------------------------------
# JSON formats. Floats are written with 17 significant digits so values
# round-trip exactly; the stock json encoder uses shortest-repr instead.

def _fmt_float(x) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("non-finite value in output")
    return format(x, ".17g")


def _emit(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_emit(v) for v in obj) + "]"
    if isinstance(obj, dict):
        return "{" + ",".join(json.dumps(str(k)) + ":" + _emit(v) for k, v in obj.items()) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _seq_record(seq: ComplexSeq, alphabet_order=None) -> dict:
    return {
        "length": len(seq),
        "domain": seq.domain,
        "alphabet_order": alphabet_order,
        "values": [[float(v.real), float(v.imag)] for v in seq.values],
    }


def _seq_from_record(rec) -> tuple:
    if not isinstance(rec, dict):
        raise ValueError("sequence record must be an object")
    for key in ("length", "domain", "values"):
        if key not in rec:
            raise ValueError(f"sequence record missing {key!r}")
    vals = rec["values"]
    if len(vals) != rec["length"]:
        raise ValueError("declared length does not match the value count")
    arr = np.array([complex(re, im) for re, im in vals], dtype=np.complex128)
    return ComplexSeq(rec["domain"], arr), rec.get("alphabet_order")


def save_sequence(seq: ComplexSeq, path, alphabet_order=None) -> None:
    with open(path, "w") as fh:
        fh.write(_emit(_seq_record(seq, alphabet_order)))
        fh.write("\n")


def load_sequence(path) -> ComplexSeq:
    with open(path) as fh:
        rec = json.load(fh)
    seq, _ = _seq_from_record(rec)
    return seq


def save_family(family: ScsFamily, path) -> None:
    """Write a family file: L, K, M, sorted forbidden carriers, then the sets."""
    rec = {
        "L": family.length,
        "K": family.num_sets,
        "M": family.set_size,
        "omega": family.constraint.sorted_forbidden(),
        "sets": [
            [_seq_record(seq, family.alphabet_order) for seq in group]
            for group in family.sets
        ],
    }
    with open(path, "w") as fh:
        fh.write(_emit(rec))
        fh.write("\n")


def load_family(path) -> ScsFamily:
    with open(path) as fh:
        rec = json.load(fh)
    for key in ("L", "K", "M", "omega", "sets"):
        if key not in rec:
            raise ValueError(f"family file missing {key!r}")
    constraint = SpectralConstraint(rec["L"], frozenset(rec["omega"]))
    if len(rec["sets"]) != rec["K"]:
        raise ValueError("declared K does not match the set count")
    alphabet = None
    sets = []
    for group in rec["sets"]:
        if len(group) != rec["M"]:
            raise ValueError("declared M does not match a set size")
        seqs = []
        for srec in group:
            seq, alpha = _seq_from_record(srec)
            alphabet = alpha if alphabet is None else alphabet
            seqs.append(seq)
        sets.append(tuple(seqs))
    return ScsFamily(tuple(sets), constraint, alphabet)
