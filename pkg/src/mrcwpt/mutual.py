"""Mutual inductance between parallel circular coils.

Two routes are provided.  The exact route evaluates the improper Bessel
integral

    h = mu0 pi b_a b_b e_a e_b * int_0^inf J0(d u) J1(e_a u) J1(e_b u) e^(-dz u) du

with d the lateral center distance and dz the vertical separation of the
coil planes.  The approximate route is the small-coil closed form

    h ~= beta (2 z0^2 - d^2) / (z0^2 + d^2)^(5/2)

valid when both coil radii are much smaller than the plane separation z0.
The approximation is what the placement solvers differentiate; the exact
integral is what every reported power number is computed from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import j0 as _j0, j1 as _j1, jn_zeros, roots_legendre

from .coils import MU0, CoilSpec

# 16-point Gauss-Legendre rule, the workhorse for every panel below.
_GL_NODES, _GL_WEIGHTS = roots_legendre(16)

# e^(-37) < 1e-16, so truncating the damped integrand at u = 37/dz loses
# less than machine precision relative to the accumulated value.
_DAMPED_CUTOFF = 37.0
_COPLANAR_BLOCKS = 96


@dataclass(frozen=True)
class CoilPose:
    """Coil center coordinates in m; orientation is fixed horizontal."""

    x: float
    y: float
    z: float = 0.0

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.x, self.y, self.z)):
            raise ValueError("pose coordinates must be finite")


# A mutual-inductance vector is a plain float array, one signed entry per
# transmitter.  Kept as an alias so signatures can name the concept.
MutualVector = np.ndarray


def bessel_j(order: int, x):
    """Bessel function of the first kind, orders 0 and 1 only.

    Accepts scalars or arrays.  Delegates to scipy's implementations,
    which are accurate to well below 1e-10 absolute over |x| <= 1e4.
    """
    if order == 0:
        return _j0(x)
    if order == 1:
        return _j1(x)
    raise ValueError("only orders 0 and 1 are supported")


@lru_cache(maxsize=None)
def coupling_beta(tx: CoilSpec, rx: CoilSpec) -> float:
    """Constant of the small-coil approximation: mu0 pi b_a b_b e_a^2 e_b^2 / 4."""
    return (MU0 * math.pi * tx.turns * rx.turns
            * tx.coil_radius**2 * rx.coil_radius**2 / 4.0)


def _panel_grid(u_max: float, panel: float):
    """Composite Gauss-Legendre nodes/weights covering [0, u_max]."""
    n = max(1, int(math.ceil(u_max / panel)))
    edges = np.linspace(0.0, u_max, n + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    u = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    wts = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    return u, wts


def _damped_integral_batch(e_a: float, e_b: float, dists: np.ndarray, dz: float) -> np.ndarray:
    """Vectorized J0*J1*J1*exp integral for many lateral distances at once.

    One panel grid is shared by all distances; its spacing resolves the
    fastest oscillation present (the largest d), so smaller distances are
    integrated on a finer-than-needed grid, which only helps accuracy.
    """
    dists = np.atleast_1d(np.asarray(dists, dtype=float))
    u_max = _DAMPED_CUTOFF / dz
    omega = float(np.max(dists)) + e_a + e_b
    panel = min(math.pi / omega, 2.0 / dz)
    u, wts = _panel_grid(u_max, panel)
    shared = _j1(e_a * u) * _j1(e_b * u) * np.exp(-dz * u) * wts
    flat = dists.ravel()
    out = np.empty(flat.shape, dtype=float)
    # chunked so the (positions x nodes) temporary stays modest
    chunk = max(1, int(8e6 // max(1, u.size)))
    for i in range(0, flat.size, chunk):
        blk = flat[i:i + chunk]
        out[i:i + chunk] = _j0(blk[:, None] * u[None, :]) @ shared
    return out.reshape(dists.shape)


def _coplanar_integral(e_a: float, e_b: float, d: float) -> float:
    """J0*J1*J1 integral with no damping (both coils at the same height).

    The integrand only decays like u^(-3/2), so the tail is summed in
    blocks delimited by the zeros of the fastest oscillating factor and
    accelerated with Wynn's epsilon algorithm.  Accuracy degrades when
    the coil edges nearly touch (d close to e_a + e_b), where the tail
    acquires a non-oscillating component; keep some edge clearance.
    """
    omega = d + e_a + e_b
    # block boundaries: consecutive zeros of the dominant oscillation
    zeros = jn_zeros(0, _COPLANAR_BLOCKS) / omega
    edges = np.concatenate([[0.0], zeros])
    partial = np.empty(_COPLANAR_BLOCKS)
    acc = 0.0
    for k in range(_COPLANAR_BLOCKS):
        # four sub-panels per block keep each panel under half an oscillation
        sub = np.linspace(edges[k], edges[k + 1], 5)
        smid = 0.5 * (sub[1:] + sub[:-1])
        shalf = 0.5 * (sub[1:] - sub[:-1])
        uu = (smid[:, None] + shalf[:, None] * _GL_NODES[None, :]).ravel()
        ww = (shalf[:, None] * _GL_WEIGHTS[None, :]).ravel()
        acc += float((_j0(d * uu) * _j1(e_a * uu) * _j1(e_b * uu)) @ ww)
        partial[k] = acc
    return _wynn_epsilon(partial)


def _wynn_epsilon(s: np.ndarray) -> float:
    """Limit estimate of a slowly converging partial-sum sequence.

    Builds the epsilon table column by column; even columns hold the
    accelerated sum estimates, odd columns are auxiliary.
    """
    e_prev = np.zeros(len(s) + 1)
    e_curr = np.asarray(s, dtype=float)
    best = float(e_curr[-1])
    col = 0
    while len(e_curr) > 1:
        diff = np.diff(e_curr)
        if np.any(diff == 0.0):  # sequence settled to machine precision
            break
        e_next = e_prev[1:len(e_curr)] + 1.0 / diff
        e_prev, e_curr = e_curr, e_next
        col += 1
        if col % 2 == 0:
            best = float(e_curr[-1])
    return best


def mutual_exact(a: CoilSpec, pose_a: CoilPose, b: CoilSpec, pose_b: CoilPose) -> float:
    """Exact mutual inductance in H between two parallel coils."""
    d = math.hypot(pose_a.x - pose_b.x, pose_a.y - pose_b.y)
    dz = abs(pose_a.z - pose_b.z)
    if dz == 0.0 and d == 0.0:
        raise ValueError("coincident coplanar coils have no mutual inductance "
                         "(the integral is the self-inductance case)")
    scale = MU0 * math.pi * a.turns * b.turns * a.coil_radius * b.coil_radius
    if dz == 0.0:
        return scale * _coplanar_integral(a.coil_radius, b.coil_radius, d)
    val = _damped_integral_batch(a.coil_radius, b.coil_radius, np.array([d]), dz)
    return scale * float(val[0])


def mutual_approx(beta: float, d, z0: float):
    """Small-coil closed form; d may be a scalar or an array."""
    if not z0 > 0:
        raise ValueError("z0 must be > 0")
    d2 = np.square(d)
    return beta * (2.0 * z0 * z0 - d2) / np.sqrt((z0 * z0 + d2) ** 5)


def mutual_field(positions: np.ndarray, receivers: np.ndarray, tx: CoilSpec,
                 rx: CoilSpec, dz: float, mode: str = "exact") -> np.ndarray:
    """Mutual inductance of every transmitter at every receiver point.

    Parameters
    ----------
    positions : (N, 2) array
        Transmitter centers in the z = 0 plane.
    receivers : (K, 2) array
        Receiver centers in the z = dz plane.
    dz : float
        Plane separation, > 0.

    Returns
    -------
    (K, N) array of signed mutual inductances in H.
    """
    if mode not in ("exact", "approx"):
        raise ValueError("mode must be 'exact' or 'approx'")
    if not dz > 0:
        raise ValueError("plane separation must be > 0")
    positions = np.atleast_2d(np.asarray(positions, dtype=float))
    receivers = np.atleast_2d(np.asarray(receivers, dtype=float))
    d = np.sqrt((receivers[:, None, 0] - positions[None, :, 0]) ** 2
                + (receivers[:, None, 1] - positions[None, :, 1]) ** 2)
    if mode == "approx":
        return mutual_approx(coupling_beta(tx, rx), d, dz)
    scale = MU0 * math.pi * tx.turns * rx.turns * tx.coil_radius * rx.coil_radius
    return scale * _damped_integral_batch(tx.coil_radius, rx.coil_radius, d, dz)


def _as_xy(obj) -> np.ndarray:
    """Coerce CoilPose sequences or coordinate arrays to an (N, 2) array."""
    if isinstance(obj, CoilPose):
        return np.array([[obj.x, obj.y]])
    if not isinstance(obj, np.ndarray):
        seq = list(obj)
        if seq and isinstance(seq[0], CoilPose):
            return np.array([[p.x, p.y] for p in seq])
        obj = np.asarray(seq, dtype=float)
    arr = np.atleast_2d(np.asarray(obj, dtype=float))
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] == 0:
        raise ValueError("expected CoilPose sequence or (N, 2) coordinates")
    return arr


def mutual_vector(placement, receiver, config, mode: str = "exact") -> MutualVector:
    """Per-transmitter coupling h_n0 for one receiver position.

    `placement` holds the transmitter centers at z = 0 (CoilPose sequence
    or (N, 2) array); `receiver` is one center in the plane at
    z = config.receiver_height.
    """
    positions = _as_xy(placement)
    rec = _as_xy(receiver)
    if rec.shape[0] != 1:
        raise ValueError("mutual_vector takes a single receiver position")
    out = mutual_field(positions, rec, config.tx_coil, config.rx_coil,
                       config.receiver_height, mode)
    return out[0]
