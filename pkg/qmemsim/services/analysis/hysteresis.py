"""Hysteresis curves of the memristor: voltage proxy <q> against current proxy
gamma(mu) q, partitioned into lobes at the zero crossings of the voltage.

A lobe is closed through its interpolated crossing points and its signed
area taken with the shoelace rule; the loop area is the sum of absolute lobe
areas. A run of exact zeros between opposite signs ends its lobe at the first
zero sample, which also starts the next lobe; a zero touched without a sign
change stays inside its lobe.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from qmemsim.config import AREA_TOLERANCE, CURVE_TOLERANCE, logger
from qmemsim.models.errors import DegenerateCurve
from qmemsim.models.records import ClassicalTrajectory, EnsembleStats, HysteresisCurve, Lobe
from qmemsim.utils.numerics import crossing_fraction, shoelace

PERIOD = 2.0 * math.pi
MIN_SAMPLES = 4
# Relative distance below which first and last samples count as the same point.
CLOSURE_TOLERANCE = 1e-9

Point = Tuple[float, float, float]


@dataclass
class _Segment:
    start: int
    end: int
    head: Optional[Point] = None
    tail: Optional[Point] = None

    def points(self, t: np.ndarray, v: np.ndarray, i: np.ndarray) -> List[Point]:
        pts = [] if self.head is None else [self.head]
        pts.extend((float(t[k]), float(v[k]), float(i[k])) for k in range(self.start, self.end + 1))
        if self.tail is not None:
            pts.append(self.tail)
        return pts


def _segments(t: np.ndarray, v: np.ndarray, i: np.ndarray) -> List[_Segment]:
    """Split at the same crossings sign_change_times reports."""
    n = len(v)
    segments: List[_Segment] = []
    current = _Segment(start=0, end=-1)
    last_sign = 0.0
    last_index = -1
    for j in range(n):
        s = float(np.sign(v[j]))
        if s == 0.0:
            continue
        if last_sign != 0.0 and s != last_sign:
            if last_index == j - 1:
                f = crossing_fraction(float(v[j - 1]), float(v[j]))
                crossing = (
                    float(t[j - 1] + f * (t[j] - t[j - 1])),
                    0.0,
                    float(i[j - 1] + f * (i[j] - i[j - 1])),
                )
                current.end = j - 1
                current.tail = crossing
                next_start = j
            else:
                zero = last_index + 1
                crossing = (float(t[zero]), 0.0, float(i[zero]))
                current.end = zero
                next_start = zero + 1
            segments.append(current)
            current = _Segment(start=next_start, end=-1, head=crossing)
        last_sign = s
        last_index = j
    current.end = n - 1
    segments.append(current)
    return segments


def _is_closed(v: np.ndarray, i: np.ndarray) -> bool:
    scale = max(float(np.max(np.abs(v))), float(np.max(np.abs(i))), 1.0)
    gap = math.hypot(float(v[0] - v[-1]), float(i[0] - i[-1]))
    return gap <= CLOSURE_TOLERANCE * scale


def _ends_share_sign(v: np.ndarray) -> bool:
    signs = np.sign(v[v != 0])
    return bool(signs[0] == signs[-1])


def _lobe(points: List[Point], start: int, end: int) -> Lobe:
    arr = np.asarray(points)
    return Lobe(
        t_start=float(arr[0, 0]),
        t_end=float(arr[-1, 0]),
        signed_area=shoelace(arr[:, 1], arr[:, 2]),
        start_index=start,
        end_index=end,
    )


def build_curve(
    times: np.ndarray,
    v: np.ndarray,
    i: np.ndarray,
    se_v: Optional[np.ndarray] = None,
    se_i: Optional[np.ndarray] = None,
) -> HysteresisCurve:
    """Hysteresis curve of arbitrary (v, i) samples.

    Raises DegenerateCurve if there are fewer than 4 samples or v never
    crosses zero. On a closed curve the partial lobes at both ends are joined
    into one lobe that wraps around (start_index > end_index).
    """
    times = np.asarray(times, dtype=float)
    v = np.asarray(v, dtype=float)
    i = np.asarray(i, dtype=float)
    if len(v) < MIN_SAMPLES:
        raise DegenerateCurve(f"hysteresis curve needs at least {MIN_SAMPLES} samples, got {len(v)}")
    segments = _segments(times, v, i)
    if len(segments) < 2:
        raise DegenerateCurve("voltage proxy never crosses zero")

    first, last = segments[0], segments[-1]
    # A closed curve whose start lies inside a lobe: join the partial lobes.
    wrap = _ends_share_sign(v) and _is_closed(v, i)
    lobes: List[Lobe] = []
    inner = segments[1:-1] if wrap else segments
    for seg in inner:
        lobes.append(_lobe(seg.points(times, v, i), seg.start, seg.end))
    if wrap:
        points = last.points(times, v, i) + first.points(times, v, i)
        lobes.append(_lobe(points, last.start, first.end))
    return HysteresisCurve(times=times, v=v, i=i, lobes=lobes, se_v=se_v, se_i=se_i)


def hysteresis_curve(stats: EnsembleStats) -> HysteresisCurve:
    """Ensemble hysteresis curve (e_q, e_gamma_q) with its standard errors."""
    return build_curve(stats.times, stats.e_q, stats.e_gamma_q, se_v=stats.se_q, se_i=stats.se_gamma_q)


def classical_curve(trajectory: ClassicalTrajectory) -> HysteresisCurve:
    """Hysteresis curve (q, gamma q) of the classical circuit."""
    return build_curve(trajectory.times, trajectory.q, trajectory.i_m)


def _first_period(curve: HysteresisCurve, period: float) -> HysteresisCurve:
    if curve.times[-1] < curve.times[0] + period * (1.0 - 1e-9):
        raise DegenerateCurve(
            f"curve spans {curve.times[-1] - curve.times[0]:.6g}, shorter than one period {period:.6g}"
        )
    keep = curve.times <= curve.times[0] + period * (1.0 + 1e-12)
    return build_curve(
        curve.times[keep],
        curve.v[keep],
        curve.i[keep],
        se_v=None if curve.se_v is None else curve.se_v[keep],
        se_i=None if curve.se_i is None else curve.se_i[keep],
    )


def loop_area_first_period(curve: HysteresisCurve, period: float = PERIOD) -> float:
    """Sum of absolute lobe areas of the samples with t in [t0, t0 + period]."""
    return _first_period(curve, period).total_area


def loop_area_standard_error(curve: HysteresisCurve, period: float = PERIOD) -> float:
    """Linear propagation of the per-sample standard errors into the
    first-period area, treating the errors of different samples as independent.

    The shoelace area A = 1/2 sum(v_j i_{j+1} - v_{j+1} i_j) has
    dA/di_j = (v_{j-1} - v_{j+1}) / 2 and dA/dv_j = (i_{j+1} - i_{j-1}) / 2.
    Returns 0 when the curve carries no errors.
    """
    sub = _first_period(curve, period)
    if sub.se_v is None and sub.se_i is None:
        return 0.0
    v, i = sub.v, sub.i
    dv = 0.5 * np.abs(np.roll(v, 1) - np.roll(v, -1))
    di = 0.5 * np.abs(np.roll(i, -1) - np.roll(i, 1))
    # The open ends see only one neighbour.
    dv[0], dv[-1] = 0.5 * abs(v[1] - v[0]), 0.5 * abs(v[-1] - v[-2])
    di[0], di[-1] = 0.5 * abs(i[1] - i[0]), 0.5 * abs(i[-1] - i[-2])
    variance = 0.0
    if sub.se_i is not None:
        variance += float(np.sum((dv * sub.se_i) ** 2))
    if sub.se_v is not None:
        variance += float(np.sum((di * sub.se_v) ** 2))
    return math.sqrt(variance)


@dataclass(frozen=True)
class ClassicalAgreement:
    """How closely a quantum ensemble loop follows the classical one."""

    area_quantum: float
    area_classical: float
    area_rel_diff: float
    curve_rel_l2: float
    agrees: bool

    def to_dict(self) -> dict:
        return {
            "area_quantum": self.area_quantum,
            "area_classical": self.area_classical,
            "area_rel_diff": self.area_rel_diff,
            "curve_rel_l2": self.curve_rel_l2,
            "agrees": self.agrees,
        }


def compare_to_classical(
    quantum: HysteresisCurve,
    classical: HysteresisCurve,
    period: float = PERIOD,
    area_tolerance: float = AREA_TOLERANCE,
    curve_tolerance: float = CURVE_TOLERANCE,
) -> ClassicalAgreement:
    """Relative area difference and relative L2 curve distance over the first period.

    The classical curve is interpolated onto the quantum sample times.
    """
    area_q = loop_area_first_period(quantum, period)
    area_c = loop_area_first_period(classical, period)
    keep = quantum.times <= quantum.times[0] + period * (1.0 + 1e-12)
    t = quantum.times[keep]
    vc = np.interp(t, classical.times, classical.v)
    ic = np.interp(t, classical.times, classical.i)
    gap = np.sqrt(np.sum((quantum.v[keep] - vc) ** 2 + (quantum.i[keep] - ic) ** 2))
    norm = np.sqrt(np.sum(vc**2 + ic**2))
    curve_rel = float(gap / norm) if norm > 0 else math.inf
    area_rel = abs(area_q - area_c) / area_c if area_c > 0 else math.inf
    agrees = area_rel <= area_tolerance and curve_rel <= curve_tolerance
    logger.info(
        "Classical agreement: area %.6g vs %.6g (rel %.3g), curve distance %.3g",
        area_q,
        area_c,
        area_rel,
        curve_rel,
    )
    return ClassicalAgreement(
        area_quantum=area_q,
        area_classical=area_c,
        area_rel_diff=float(area_rel),
        curve_rel_l2=curve_rel,
        agrees=bool(agrees),
    )
