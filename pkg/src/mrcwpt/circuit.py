"""Phasor-domain circuit relations for the coupled transmitter/receiver set.

Transmitter currents are the free variables; every other quantity (the
induced receiver current, the source voltages needed to drive the chosen
currents, and the power bookkeeping) follows in closed form from
Kirchhoff's laws.  Currents are split into real and imaginary parts
because both parts contribute identically to delivered and drawn power.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CurrentAllocation:
    """Transmitter current phasors: i_n = re_n + j im_n (A)."""

    re: np.ndarray
    im: np.ndarray = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        re = np.atleast_1d(np.asarray(self.re, dtype=float))
        im = (np.zeros_like(re) if self.im is None
              else np.atleast_1d(np.asarray(self.im, dtype=float)))
        if re.shape != im.shape:
            raise ValueError("re and im must have equal length")
        if re.size == 0:
            raise ValueError("allocation must cover at least one transmitter")
        if not (np.all(np.isfinite(re)) and np.all(np.isfinite(im))):
            raise ValueError("currents must be finite")
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def __len__(self) -> int:
        return self.re.size

    @property
    def complex(self) -> np.ndarray:
        return self.re + 1j * self.im


@dataclass(frozen=True)
class CircuitSolution:
    """Everything Kirchhoff determines once the currents are fixed."""

    receiver_current: complex
    source_voltages: np.ndarray
    per_tx_power: np.ndarray
    load_power: float
    sum_power: float


def _check_h(alloc: CurrentAllocation, h: np.ndarray) -> np.ndarray:
    h = np.atleast_1d(np.asarray(h, dtype=float))
    if h.shape != alloc.re.shape:
        raise ValueError("mutual vector length must match allocation length")
    if not np.all(np.isfinite(h)):
        raise ValueError("mutual inductances must be finite")
    return h


def receiver_current(alloc: CurrentAllocation, h: np.ndarray, r_rx: float, w: float) -> complex:
    """Induced receiver current i0 = j w sum(h_n0 i_n) / r_rx."""
    h = _check_h(alloc, h)
    return 1j * w * complex(np.dot(h, alloc.complex)) / r_rx


def load_power(alloc: CurrentAllocation, h: np.ndarray, r_rx: float,
               r_load: float, w: float) -> float:
    """Power delivered to the load resistance.

    Equals r_load |i0|^2, expanded so only real arithmetic is needed:
    (w^2 r_load / r_rx^2) ((sum h re)^2 + (sum h im)^2).
    """
    h = _check_h(alloc, h)
    sr = float(np.dot(h, alloc.re))
    si = float(np.dot(h, alloc.im))
    return (w * w * r_load / (r_rx * r_rx)) * (sr * sr + si * si)


def sum_power(alloc: CurrentAllocation, h: np.ndarray, r_tx: float,
              r_rx: float, w: float) -> float:
    """Total active power drawn from all transmitter sources."""
    h = _check_h(alloc, h)
    sr = float(np.dot(h, alloc.re))
    si = float(np.dot(h, alloc.im))
    mag2 = float(np.dot(alloc.re, alloc.re) + np.dot(alloc.im, alloc.im))
    return r_tx * mag2 + (w * w / r_rx) * (sr * sr + si * si)


def per_transmitter_power(alloc: CurrentAllocation, h: np.ndarray,
                          h_cross: np.ndarray, r_tx: float, r_rx: float,
                          w: float) -> np.ndarray:
    """Active power drawn from each transmitter's source.

    p_n = (r_tx + (w^2/r_rx) h_n^2) |i_n|^2
          + (w^2/r_rx) sum_{k != n} h_n h_k (re_n re_k + im_n im_k)
          + w sum_{k != n} h_nk (im_n re_k - re_n im_k)

    The h_cross term vanishes for purely real (or purely imaginary)
    allocations, which is why the placement loops never compute it.
    """
    h = _check_h(alloc, h)
    n = len(alloc)
    h_cross = np.asarray(h_cross, dtype=float)
    if h_cross.shape != (n, n):
        raise ValueError("h_cross must be an N x N matrix")
    if not np.allclose(h_cross, h_cross.T, rtol=0, atol=0):
        raise ValueError("h_cross must be symmetric")
    if np.any(np.diagonal(h_cross) != 0.0):
        raise ValueError("h_cross must have a zero diagonal")
    re, im = alloc.re, alloc.im
    mag2 = re * re + im * im
    sr = float(np.dot(h, re))
    si = float(np.dot(h, im))
    # subtract the k = n contribution from the full sums
    cross_re = h * re * (sr - h * re) + h * im * (si - h * im)
    own = (r_tx + (w * w / r_rx) * h * h) * mag2
    exchange = w * (im * (h_cross @ re) - re * (h_cross @ im))
    return own + (w * w / r_rx) * cross_re + exchange


def source_voltages(alloc: CurrentAllocation, h: np.ndarray, h_cross: np.ndarray,
                    i0: complex, r_tx: float, r_rx: float, w: float) -> np.ndarray:
    """Source voltage phasors v_n = r_tx i_n - j w h_n i0 + j w sum_k h_nk i_k."""
    h = _check_h(alloc, h)
    i = alloc.complex
    h_cross = np.asarray(h_cross, dtype=float)
    return r_tx * i - 1j * w * h * i0 + 1j * w * (h_cross @ i)


def solve(alloc: CurrentAllocation, h: np.ndarray, h_cross: np.ndarray,
          r_tx: float, r_rx: float, r_load: float, w: float) -> CircuitSolution:
    """Assemble the complete circuit solution for a current choice."""
    i0 = receiver_current(alloc, h, r_rx, w)
    return CircuitSolution(
        receiver_current=i0,
        source_voltages=source_voltages(alloc, h, h_cross, i0, r_tx, r_rx, w),
        per_tx_power=per_transmitter_power(alloc, h, h_cross, r_tx, r_rx, w),
        load_power=load_power(alloc, h, r_rx, r_load, w),
        sum_power=sum_power(alloc, h, r_tx, r_rx, w),
    )
