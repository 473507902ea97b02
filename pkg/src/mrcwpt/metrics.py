"""Delivered-power fields over a target region and their summary metrics.

A profile samples the delivered power at every grid point of a region,
with the current allocation recomputed per point (beamforming adapts to
the receiver location).  Summaries are taken over the emitted samples:
mean, min, max, and the min-max ratio xi.  For disk regions the raw grid
minimum is additionally polished by golden-section refinement and the
refined points join the sample set, so any consumer of the samples
reproduces the reported metrics exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .beamforming import Strategy, delivered_power
from .coils import SystemConfig
from .mutual import mutual_field

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Region:
    """Target region for the receiver at a fixed height above the coils.

    kind "line": receiver sweeps x in [-half_length, half_length], y = 0.
    kind "disk": receiver roams the disk of the given radius about the
    origin.  Sampling fields control the default grid resolution.
    """

    kind: str
    height: float
    half_length: float | None = None
    radius: float | None = None
    line_points: int = 2001
    disk_radial: int = 101
    disk_angular: int = 360

    def __post_init__(self) -> None:
        if self.kind not in ("line", "disk"):
            raise ValueError("region kind must be 'line' or 'disk'")
        if not self.height > 0:
            raise ValueError("region height must be > 0")
        if self.kind == "line":
            if self.half_length is None or not self.half_length > 0:
                raise ValueError("line region needs half_length > 0")
        else:
            if self.radius is None or not self.radius > 0:
                raise ValueError("disk region needs radius > 0")
        if self.kind == "line" and self.line_points < 2:
            raise ValueError("line_points must be >= 2")
        if self.kind == "disk" and (self.disk_radial < 2 or self.disk_angular < 3):
            raise ValueError("disk sampling too coarse")


@dataclass(frozen=True)
class RegionMetrics:
    p_avg: float
    p_min: float
    p_max: float
    xi: float

    def __post_init__(self) -> None:
        if not (self.p_min <= self.p_avg <= self.p_max):
            raise ValueError("metrics must satisfy p_min <= p_avg <= p_max")
        if not 0.0 <= self.xi <= 1.0:
            raise ValueError("xi must lie in [0, 1]")


@dataclass(frozen=True)
class PowerProfile:
    """Sampled field: rows of (x, y, delivered power)."""

    samples: np.ndarray
    strategy: Strategy
    placement: np.ndarray
    region: Region

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 2 or samples.shape[1] != 3 or samples.shape[0] == 0:
            raise ValueError("samples must be a non-empty (K, 3) array")
        if np.any(samples[:, 2] < 0):
            raise ValueError("delivered power cannot be negative")
        object.__setattr__(self, "samples", samples)


def golden_section_min(f, a: float, b: float, iters: int = 60):
    """Golden-section minimization of a scalar function on [a, b].

    Returns (x_min, f_min).  The function is assumed cheap; 60 shrinks
    bring the bracket below 1e-12 of its original width.
    """
    if b < a:
        a, b = b, a
    c1 = b - _INV_GOLDEN * (b - a)
    c2 = a + _INV_GOLDEN * (b - a)
    f1, f2 = f(c1), f(c2)
    for _ in range(iters):
        if f1 <= f2:
            b, c2, f2 = c2, c1, f1
            c1 = b - _INV_GOLDEN * (b - a)
            f1 = f(c1)
        else:
            a, c1, f1 = c1, c2, f2
            c2 = a + _INV_GOLDEN * (b - a)
            f2 = f(c2)
    return (c1, f1) if f1 <= f2 else (c2, f2)


def sample_points(region: Region) -> np.ndarray:
    """Default sample grid of a region as an (K, 2) array."""
    if region.kind == "line":
        x = np.linspace(-region.half_length, region.half_length, region.line_points)
        return np.stack([x, np.zeros_like(x)], axis=1)
    radii = np.linspace(0.0, region.radius, region.disk_radial)[1:]
    angles = np.linspace(0.0, 2.0 * math.pi, region.disk_angular, endpoint=False)
    r, a = np.meshgrid(radii, angles, indexing="ij")
    pts = np.stack([(r * np.cos(a)).ravel(), (r * np.sin(a)).ravel()], axis=1)
    return np.concatenate([np.zeros((1, 2)), pts], axis=0)


def profile(placement: np.ndarray, region: Region, config: SystemConfig,
            strategy: Strategy, mode: str = "exact") -> PowerProfile:
    """Delivered power at every region sample for a transmitter layout.

    `placement` is an (N, 2) array of transmitter centers at z = 0 (a 1D
    array of x coordinates is promoted with y = 0).  For disk regions the
    neighborhood of the grid minimum is refined along the radial and
    angular directions and the polished points are appended as samples.
    """
    placement = np.asarray(placement, dtype=float)
    if placement.ndim == 1:
        placement = np.stack([placement, np.zeros_like(placement)], axis=1)
    pts = sample_points(region)
    args = (config.power_budget, config.tx_resistance, config.rx_resistance,
            config.load_resistance, config.angular_frequency)

    def power_at(points: np.ndarray) -> np.ndarray:
        h = mutual_field(placement, points, config.tx_coil, config.rx_coil,
                         region.height, mode)
        return np.asarray(delivered_power(strategy, h, *args))

    p = power_at(pts)
    rows = [np.column_stack([pts, p])]
    if region.kind == "disk":
        rows.extend(_refine_disk_min(power_at, pts, p, region))
    samples = np.concatenate(rows, axis=0) if len(rows) > 1 else rows[0]
    return PowerProfile(samples=samples, strategy=strategy,
                        placement=placement, region=region)


def _refine_disk_min(power_at, pts: np.ndarray, p: np.ndarray, region: Region):
    """Golden-polish the disk grid minimum; returns extra sample rows."""
    k = int(np.argmin(p))
    x0, y0 = pts[k]
    r0 = math.hypot(x0, y0)
    th0 = math.atan2(y0, x0)
    dr = region.radius / (region.disk_radial - 1)
    dth = 2.0 * math.pi / region.disk_angular

    def radial(r: float) -> float:
        return float(power_at(np.array([[r * math.cos(th0), r * math.sin(th0)]]))[0])

    r_best, p_r = golden_section_min(
        radial, max(0.0, r0 - dr), min(region.radius, r0 + dr), iters=40)

    def angular(th: float) -> float:
        return float(power_at(np.array([[r_best * math.cos(th), r_best * math.sin(th)]]))[0])

    th_best, p_a = golden_section_min(angular, th0 - dth, th0 + dth, iters=40)
    extra = []
    if p_r < p[k]:
        extra.append(np.array([[r_best * math.cos(th0), r_best * math.sin(th0), p_r]]))
    if p_a < min(p_r, p[k]):
        extra.append(np.array([[r_best * math.cos(th_best), r_best * math.sin(th_best), p_a]]))
    return extra


def summarize(prof: PowerProfile) -> RegionMetrics:
    """Four summary metrics over the profile samples."""
    p = prof.samples[:, 2]
    p_min = float(p.min())
    p_max = float(p.max())
    xi = 0.0 if p_max == 0.0 else p_min / p_max
    # the sample mean lies in [p_min, p_max] mathematically; summation
    # rounding can push it an ulp past the bounds on near-flat profiles
    p_avg = float(min(max(float(p.mean()), p_min), p_max))
    return RegionMetrics(p_avg=p_avg, p_min=p_min, p_max=p_max, xi=xi)
