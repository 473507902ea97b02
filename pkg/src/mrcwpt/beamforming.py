"""Transmitter current allocation strategies.

Three ways to spend the sum-power budget p_max:

* optimal   - closed-form beamforming; currents proportional to the
              coupling vector, so per-coil fields add constructively at
              the receiver.  Solves the constrained maximization of the
              delivered power exactly.
* equal     - the uncoordinated baseline: one common positive current on
              every transmitter, scaled to exhaust the budget.  Ignores
              coupling signs, which is precisely its weakness.
* selection - all power on the single transmitter with the largest
              squared coupling (ties broken toward the lowest index).

All three consume exactly p_max by construction.
"""

from __future__ import annotations

import enum

import numpy as np

from .circuit import CurrentAllocation


class Strategy(enum.Enum):
    OPTIMAL = "optimal"
    EQUAL = "equal"
    SELECTION = "selection"


def optimal_currents(h: np.ndarray, p_max: float, r_tx: float, r_rx: float,
                     w: float) -> CurrentAllocation:
    """Budget-saturating currents maximizing delivered power.

    i_n = h_n sqrt(p_max) / sqrt(S (r_tx + (w^2/r_rx) S)),  S = sum h^2.

    Raises ValueError when every coupling is zero: no current choice can
    deliver power, so the maximizer is undefined.
    """
    h = np.atleast_1d(np.asarray(h, dtype=float))
    s = float(np.dot(h, h))
    if s == 0.0:
        raise ValueError("degenerate coupling: all mutual inductances are zero")
    scale = np.sqrt(p_max / (s * (r_tx + (w * w / r_rx) * s)))
    return CurrentAllocation(re=h * scale)


def delivered_power_optimal(h: np.ndarray, p_max: float, r_tx: float,
                            r_rx: float, r_load: float, w: float):
    """Delivered power under optimal beamforming, directly from couplings.

    (r_load / r_rx) (1 - 1 / (1 + (w^2/(r_rx r_tx)) sum h^2)) p_max

    `h` may be (N,) for one receiver position or (K, N) for a batch; the
    sum runs over the last axis.  Zero coupling simply gives zero power.
    """
    h = np.asarray(h, dtype=float)
    s = np.sum(h * h, axis=-1)
    gain = (w * w / (r_rx * r_tx)) * s
    return (r_load / r_rx) * (gain / (1.0 + gain)) * p_max


def equal_currents(h: np.ndarray, p_max: float, r_tx: float, r_rx: float,
                   w: float) -> CurrentAllocation:
    """One common positive current c on all N transmitters.

    c is the positive root of N r_tx c^2 + (w^2/r_rx)(sum h)^2 c^2 = p_max.
    """
    h = np.atleast_1d(np.asarray(h, dtype=float))
    n = h.size
    sh = float(np.sum(h))
    c = np.sqrt(p_max / (n * r_tx + (w * w / r_rx) * sh * sh))
    return CurrentAllocation(re=np.full(n, c))


def transmitter_selection(h: np.ndarray, p_max: float, r_tx: float,
                          r_rx: float, w: float) -> CurrentAllocation:
    """Full budget on the transmitter with the largest h^2.

    The chosen transmitter carries the single-coil optimal current, signed
    like its coupling; everyone else is off.  np.argmax returns the first
    maximizer, which implements the lowest-index tie-break.
    """
    h = np.atleast_1d(np.asarray(h, dtype=float))
    idx = int(np.argmax(h * h))
    hb = h[idx]
    re = np.zeros(h.size)
    mag = np.sqrt(p_max / (r_tx + (w * w / r_rx) * hb * hb))
    re[idx] = mag if hb >= 0 else -mag
    return CurrentAllocation(re=re)


def allocate(strategy: Strategy, h: np.ndarray, p_max: float, r_tx: float,
             r_rx: float, w: float) -> CurrentAllocation:
    if strategy is Strategy.OPTIMAL:
        return optimal_currents(h, p_max, r_tx, r_rx, w)
    if strategy is Strategy.EQUAL:
        return equal_currents(h, p_max, r_tx, r_rx, w)
    if strategy is Strategy.SELECTION:
        return transmitter_selection(h, p_max, r_tx, r_rx, w)
    raise ValueError(f"unknown strategy: {strategy!r}")


def delivered_power(strategy: Strategy, h: np.ndarray, p_max: float,
                    r_tx: float, r_rx: float, r_load: float, w: float):
    """Delivered power for a strategy; vectorized over leading axes of h.

    For each receiver position the allocation is recomputed (beamforming
    adapts to where the receiver is).  The all-zero coupling case is well
    defined for every strategy: no power arrives.
    """
    h = np.asarray(h, dtype=float)
    front = w * w * r_load / (r_rx * r_rx)
    if strategy is Strategy.OPTIMAL:
        return delivered_power_optimal(h, p_max, r_tx, r_rx, r_load, w)
    if strategy is Strategy.EQUAL:
        n = h.shape[-1]
        sh = np.sum(h, axis=-1)
        c2 = p_max / (n * r_tx + (w * w / r_rx) * sh * sh)
        return front * sh * sh * c2
    if strategy is Strategy.SELECTION:
        hb = np.take_along_axis(
            h, np.argmax(h * h, axis=-1)[..., None], axis=-1)[..., 0]
        i2 = p_max / (r_tx + (w * w / r_rx) * hb * hb)
        return front * hb * hb * i2
    raise ValueError(f"unknown strategy: {strategy!r}")
