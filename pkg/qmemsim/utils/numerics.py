"""Small numerical helpers: sign-change interpolation, shoelace areas and
golden-section search."""

import math
from typing import Callable, List, Tuple

import numpy as np

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


def crossing_fraction(y0: float, y1: float) -> float:
    """Fraction in [0, 1] where the segment from y0 to y1 crosses zero."""
    return y0 / (y0 - y1)


def sign_change_times(times: np.ndarray, values: np.ndarray) -> List[float]:
    """Times where `values` changes sign, by linear interpolation.

    A run of exact zeros counts once, at its first sample, and only when the
    signs on both sides of the run differ.
    """
    crossings: List[float] = []
    last_sign = 0.0
    last_index = -1
    for j, y in enumerate(values):
        s = float(np.sign(y))
        if s == 0.0:
            continue
        if last_sign != 0.0 and s != last_sign:
            if last_index == j - 1:
                f = crossing_fraction(float(values[j - 1]), float(y))
                crossings.append(float(times[j - 1] + f * (times[j] - times[j - 1])))
            else:
                # Zero run between opposite signs: crossing at its first sample.
                crossings.append(float(times[last_index + 1]))
        last_sign = s
        last_index = j
    return crossings


def shoelace(x: np.ndarray, y: np.ndarray) -> float:
    """Signed area of the closed polygon (x, y); positive when counter-clockwise."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 3:
        return 0.0
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def golden_section(
    f: Callable[[float], float], a: float, b: float, tol: float = 1e-5
) -> Tuple[float, float]:
    """Golden-section search.

    Given a function f with a single local minimum in the interval [a, b],
    returns a subinterval [c, d] containing the minimum with d - c <= tol.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        return a, b

    # Required steps to achieve tolerance
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)

    for _ in range(n - 1):
        if yc < yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)

    if yc < yd:
        return a, d
    return c, b
