"""Correlation floors for spectrally constrained families, and reports that
certify measured peaks against them.

Everything here is closed-form arithmetic in (M, L, n) plus measured peak
values; no sequences are touched except through a family summary. Floors
are stated for energy-L sequences under the uniform admissible power
L/(L-n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .spectral import FamilySummary, summarize

ETA_EQ_TOL = 1e-6


def _validate(m: int, length: int, n: int) -> None:
    if m < 1:
        raise ValueError("family size must be at least 1")
    if length < 2:
        raise ValueError("length must be at least 2")
    if n < 0 or n >= length:
        raise ValueError("forbidden-carrier count must lie in [0, length)")


def family_floor(m: int, length: int, n: int) -> float:
    """Smallest possible peak correlation magnitude of an M-sequence family
    under the constraint: L * sqrt(((M-1)L + n) / ((L-n)(ML-1))).

    Degenerates to 0 for a single unconstrained sequence and to the
    classical multi-sequence floor L*sqrt((M-1)/(ML-1)) when n = 0.
    """
    _validate(m, length, n)
    num = (m - 1) * length + n
    if num == 0:
        return 0.0
    return length * math.sqrt(num / ((length - n) * (m * length - 1)))


def optimality_factor(theta_max: float, m: int, length: int, n: int) -> float:
    """eta = measured peak / floor; 1 means the family is optimal."""
    floor = family_floor(m, length, n)
    if floor == 0.0:
        raise ValueError("floor is zero (single unconstrained sequence); eta undefined")
    return float(theta_max) / floor


def closed_form_eta(order: int, rows: int) -> float:
    """eta of the direct phase-ramp family in closed form: peak N+1 over
    the floor at (M=rows, L=N(N+1), n=N). Decreases toward 1 as the order
    grows with rows = N-1, which is what makes the prime ladder interesting."""
    if order < 2 or rows < 1:
        raise ValueError("need order >= 2 and rows >= 1")
    length = order * (order + 1)
    num = rows * length - 1
    den = (rows - 1) * length + order
    return math.sqrt(num / den)


def single_set_floors(length: int, n: int) -> tuple:
    """(auto sidelobe floor, crosscorrelation floor) for one set:
    L*sqrt(n/((L-n)(L-1))) and L/sqrt(L-n)."""
    _validate(1, length, n)
    theta_a = length * math.sqrt(n / ((length - n) * (length - 1)))
    theta_c = length / math.sqrt(length - n)
    return theta_a, theta_c


def interset_floor(length: int, n: int) -> float:
    """Floor on the between-set peak; met with equality exactly when every
    between-set correlation magnitude is flat."""
    _validate(1, length, n)
    return length / math.sqrt(length - n)


@dataclass(frozen=True)
class InequalityCheck:
    lhs: float
    rhs: float
    satisfied: bool

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs


def _ineq(lhs: float, rhs: float) -> InequalityCheck:
    tol = 1e-9 * max(abs(lhs), abs(rhs), 1.0)
    return InequalityCheck(lhs, rhs, lhs >= rhs - tol)


def correlation_tradeoff(theta_a: float, theta_c: float, m: int, length: int,
                         n: int, window: int) -> InequalityCheck:
    """Windowed tradeoff for one set of m sequences:
    (W-1)*theta_a^2 + (m-1)*W*theta_c^2 + L^2 >= m*L^2*W/(L-n)."""
    _validate(m, length, n)
    if not 1 <= window <= length:
        raise ValueError("window must lie in [1, L]")
    lhs = (window - 1) * theta_a ** 2 + (m - 1) * window * theta_c ** 2 + length ** 2
    rhs = m * length ** 2 * window / (length - n)
    return _ineq(lhs, rhs)


def combined_floor_check(theta_a: float, theta_c: float, m: int, length: int,
                         n: int) -> InequalityCheck:
    """Joint floor tying auto and cross peaks of one set:
    theta_a^2*(L-1) + theta_c^2*(m-1)*L >= L^2*(mL - L + n)/(L-n).

    Plugging both single-set floors in gives equality; plugging the family
    floor in for both peaks recovers it."""
    _validate(m, length, n)
    lhs = theta_a ** 2 * (length - 1) + theta_c ** 2 * (m - 1) * length
    rhs = length ** 2 * (m * length - length + n) / (length - n)
    return _ineq(lhs, rhs)


@dataclass(frozen=True)
class ZczCapacity:
    """Occupancy of the zero-correlation budget: M*Z cannot exceed L-n."""

    capacity: int
    occupancy: int
    verdict: str


def zcz_capacity(length: int, n: int, m: int, z: int) -> ZczCapacity:
    _validate(m, length, n)
    if z < 0:
        raise ValueError("zone width cannot be negative")
    cap = length - n
    occ = m * z
    if occ == cap:
        verdict = "optimal"
    elif occ < cap:
        verdict = "feasible"
    else:
        verdict = "infeasible"
    return ZczCapacity(cap, occ, verdict)


def difference_set_peak(period: int, weight: int, lam: int) -> float:
    """Auto peak P*sqrt(weight - lam) of an interleaved sequence whose
    admissible columns form a (period, weight, lam) difference set; equals
    the general floor period*sqrt(weight*(period-weight)/(period-1))."""
    if weight < 1 or weight >= period:
        raise ValueError("weight must lie in [1, period)")
    if lam * (period - 1) != weight * (weight - 1):
        raise ValueError(
            f"({period},{weight},{lam}) is inconsistent: lam*(P-1) must equal k*(k-1)"
        )
    return period * math.sqrt(weight - lam)


@dataclass(frozen=True)
class BoundsReport:
    """Floors, measured peaks, and verdicts for one family or one raw
    (M, L, n) point. Measured fields are None in raw mode."""

    length: int
    n: int
    m_total: int
    num_sets: int | None = None
    set_size: int | None = None
    window: int | None = None
    order: int | None = None
    theta_max: float | None = None
    theta_a: float | None = None
    theta_c: float | None = None
    peak_auto: float | None = None
    peak_cross: float | None = None
    zcz_widths: tuple | None = None
    theta_opti: float = 0.0
    theta_a_floor: float = 0.0
    theta_c_floor: float = 0.0
    eta: float | None = None
    tradeoff: tuple | None = None
    combined: InequalityCheck | None = None
    zcz: tuple | None = None
    verdicts: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        rec = {
            "L": self.length,
            "n": self.n,
            "M_total": self.m_total,
            "num_sets": self.num_sets,
            "set_size": self.set_size,
            "window": self.window,
            "order": self.order,
            "theta_max": self.theta_max,
            "theta_a": self.theta_a,
            "theta_c": self.theta_c,
            "peak_auto": self.peak_auto,
            "peak_cross": self.peak_cross,
            "zcz_widths": list(self.zcz_widths) if self.zcz_widths is not None else None,
            "theta_opti": self.theta_opti,
            "theta_a_floor": self.theta_a_floor,
            "theta_c_floor": self.theta_c_floor,
            "eta": self.eta,
            "verdicts": dict(self.verdicts),
        }
        if self.tradeoff is not None:
            rec["tradeoff"] = [
                {"lhs": c.lhs, "rhs": c.rhs, "satisfied": c.satisfied} for c in self.tradeoff
            ]
        if self.combined is not None:
            rec["combined"] = {
                "lhs": self.combined.lhs,
                "rhs": self.combined.rhs,
                "satisfied": self.combined.satisfied,
            }
        if self.zcz is not None:
            rec["zcz"] = [
                {"capacity": z.capacity, "occupancy": z.occupancy, "verdict": z.verdict}
                for z in self.zcz
            ]
        return rec


def _family_floor_verdict(eta: float, interset_optimal: bool | None) -> str:
    if eta <= 1.0 + ETA_EQ_TOL:
        return "optimal"
    if interset_optimal:
        return "asymptotically_optimal_candidate"
    return "suboptimal"


def bounds_from_params(m: int, length: int, n: int, theta_max: float | None = None,
                       order: int | None = None) -> BoundsReport:
    """Floors for a raw (M, L, n) point, with eta when a peak is supplied."""
    theta_opti = family_floor(m, length, n)
    theta_a_floor, theta_c_floor = single_set_floors(length, n)
    eta = None
    verdicts = {}
    if theta_max is not None and theta_opti > 0.0:
        eta = theta_max / theta_opti
        verdicts["family_floor"] = _family_floor_verdict(eta, None)
    return BoundsReport(
        length=length, n=n, m_total=m, order=order,
        theta_max=theta_max, theta_opti=theta_opti,
        theta_a_floor=theta_a_floor, theta_c_floor=theta_c_floor,
        eta=eta, verdicts=verdicts,
    )


def evaluate_family(family, window: int | None = None, tol: float = 1e-9,
                    summary: FamilySummary | None = None,
                    order: int | None = None) -> BoundsReport:
    """Measure a family and certify it against every floor.

    The family floor is applied to the flattened family (all K*M sequences
    in one pool); the windowed tradeoff and the zero-correlation budget are
    applied per set.
    """
    if summary is None:
        summary = summarize(family, window=window, tol=tol)
    length = family.length
    n = family.constraint.n
    m_total = family.num_sets * family.set_size
    theta_opti = family_floor(m_total, length, n)
    theta_a_floor, theta_c_floor = single_set_floors(length, n)

    tradeoff = tuple(
        correlation_tradeoff(s.theta_a, s.theta_c, family.set_size, length, n, s.window)
        for s in summary.per_set
    )
    zcz = tuple(
        zcz_capacity(length, n, family.set_size, s.zcz_width) for s in summary.per_set
    )
    combined = None
    if m_total > 1:
        combined = combined_floor_check(summary.peak_auto, summary.peak_cross,
                                        m_total, length, n)

    verdicts = {}
    interset_optimal = None
    if family.num_sets > 1:
        ifloor = interset_floor(length, n)
        interset_optimal = summary.theta_c <= ifloor * (1.0 + ETA_EQ_TOL)
        verdicts["interset_floor"] = "optimal" if interset_optimal else "suboptimal"
    if theta_opti > 0.0:
        eta = summary.theta_max / theta_opti
        verdicts["family_floor"] = _family_floor_verdict(eta, interset_optimal)
    else:
        eta = None
    worst_zcz = "optimal"
    for z in zcz:
        if z.verdict == "infeasible":
            worst_zcz = "infeasible"
            break
        if z.verdict == "feasible":
            worst_zcz = "feasible"
    verdicts["zcz"] = worst_zcz
    verdicts["tradeoff"] = "satisfied" if all(c.satisfied for c in tradeoff) else "violated"
    if combined is not None:
        verdicts["combined"] = "satisfied" if combined.satisfied else "violated"

    return BoundsReport(
        length=length, n=n, m_total=m_total,
        num_sets=family.num_sets, set_size=family.set_size,
        window=summary.window, order=order,
        theta_max=summary.theta_max, theta_a=summary.theta_a, theta_c=summary.theta_c,
        peak_auto=summary.peak_auto, peak_cross=summary.peak_cross,
        zcz_widths=tuple(s.zcz_width for s in summary.per_set),
        theta_opti=theta_opti, theta_a_floor=theta_a_floor,
        theta_c_floor=theta_c_floor, eta=eta,
        tradeoff=tradeoff, combined=combined, zcz=zcz, verdicts=verdicts,
    )


def format_table(reports) -> str:
    """Fixed-width table, one report per row: order, length, set count,
    measured peak, floor, eta."""
    header = f"{'N':>6} {'L':>8} {'sets':>5} {'theta_max':>11} {'theta_opti':>11} {'eta':>8}"
    lines = [header, "-" * len(header)]
    for rep in reports:
        order = str(rep.order) if rep.order is not None else "-"
        sets = str(rep.num_sets if rep.num_sets is not None else rep.m_total)
        tmax = f"{rep.theta_max:.4f}" if rep.theta_max is not None else "-"
        eta = f"{rep.eta:.4f}" if rep.eta is not None else "-"
        lines.append(
            f"{order:>6} {rep.length:>8} {sets:>5} {tmax:>11} {rep.theta_opti:>11.4f} {eta:>8}"
        )
    return "\n".join(lines)
