"""Max-min transmitter placement over a target disk.

Transmitters live in the z = 0 disk of radius rho; the receiver roams
the parallel disk at height z0.  The search is restricted to rotationally
symmetric layouts: concentric rings of equally spaced coils, optionally
with a stack of coils at the origin.  A layout built from rings of u
coils each is invariant under rotation by 2 pi / u, so both the
feasibility check and the certification only sample one wedge of that
angle instead of the full disk.

One candidate template is generated per prime ring size u <= n_tx
(rings of u coils, remainder at the origin).  Each template is optimized
independently by the same bisection-plus-gradient scheme as the line
case, with ring radii and ring rotations as variables; the template with
the best certified target wins.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .beamforming import Strategy, delivered_power
from .coils import SystemConfig
from .metrics import golden_section_min
from .mutual import mutual_field
from .placement_1d import g_of_tau

_RADIAL_GRID = 201
_ANGULAR_GRID = 121
_RADIUS_FLOOR = 1e-12


@dataclass(frozen=True)
class Ring:
    """count equally spaced transmitters on a circle.

    radius and rotation are None on catalog templates and concrete on
    optimized structures; rotation is the angle of the first coil and
    lives in [0, 2 pi / count).
    """

    count: int
    radius: float | None = None
    rotation: float | None = None

    def __post_init__(self) -> None:
        if self.count < 2:
            raise ValueError("a ring needs at least 2 transmitters")
        if self.radius is not None and not self.radius > 0:
            raise ValueError("ring radius must be > 0")
        if self.rotation is not None:
            if not 0.0 <= self.rotation < 2.0 * math.pi / self.count:
                raise ValueError("ring rotation must lie in [0, 2 pi / count)")


@dataclass(frozen=True)
class RingStructure:
    """Concentric rings plus an optional stack of coils at the origin.

    The first ring's rotation fixes the global orientation and is pinned
    to zero; only relative rotations of later rings are meaningful.
    """

    rings: tuple
    origin_count: int = 0

    def __post_init__(self) -> None:
        rings = tuple(self.rings)
        if any(not isinstance(r, Ring) for r in rings):
            raise ValueError("rings must be Ring instances")
        if self.origin_count < 0:
            raise ValueError("origin_count must be >= 0")
        if not rings and self.origin_count == 0:
            raise ValueError("structure places no transmitters")
        if rings and rings[0].rotation not in (None, 0.0):
            raise ValueError("first ring rotation is pinned to 0")
        object.__setattr__(self, "rings", rings)

    @property
    def n_tx(self) -> int:
        return sum(r.count for r in self.rings) + self.origin_count

    @property
    def is_template(self) -> bool:
        return any(r.radius is None or r.rotation is None for r in self.rings)

    def positions(self) -> np.ndarray:
        """Transmitter centers as an (n_tx, 2) array; rings first."""
        if self.is_template:
            raise ValueError("template structure has unset ring geometry")
        rows = []
        for ring in self.rings:
            k = np.arange(ring.count)
            ang = ring.rotation + 2.0 * math.pi * k / ring.count
            rows.append(np.stack([ring.radius * np.cos(ang),
                                  ring.radius * np.sin(ang)], axis=1))
        if self.origin_count:
            rows.append(np.zeros((self.origin_count, 2)))
        return np.concatenate(rows, axis=0)


@dataclass(frozen=True)
class StructureCatalog:
    n_tx: int
    structures: tuple

    def __post_init__(self) -> None:
        if any(s.n_tx != self.n_tx for s in self.structures):
            raise ValueError("catalog entries must place n_tx transmitters")
        object.__setattr__(self, "structures", tuple(self.structures))


def is_rotationally_symmetric(structure: RingStructure) -> bool:
    """True when some rotation by 2 pi / m, m >= 2, maps the layout to itself.

    A ring of count c is invariant under any multiple of 2 pi / c
    regardless of its own rotation, so the layout is symmetric exactly
    when the ring counts share a common divisor >= 2.  An origin stack is
    invariant under every rotation.
    """
    if not structure.rings:
        return True
    return math.gcd(*(r.count for r in structure.rings)) >= 2


def symmetry_order(structure: RingStructure) -> int:
    """Largest m with rotation 2 pi / m a symmetry; 0 means any rotation."""
    if not structure.rings:
        return 0
    return math.gcd(*(r.count for r in structure.rings))


def _primes_up_to(n: int):
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return [int(p) for p in np.nonzero(sieve)[0]]


def enumerate_structures(n_tx: int) -> StructureCatalog:
    """Candidate symmetric templates: one per prime ring size <= n_tx.

    Ring size u yields n_tx // u rings of u transmitters and n_tx mod u
    spares at the origin.  Prime ring sizes suffice: a composite u = a b
    ring layout is symmetric of order a already, so composite sizes add
    no symmetry class.  n_tx = 1 degenerates to the single origin coil.
    """
    if n_tx < 1:
        raise ValueError("n_tx must be >= 1")
    if n_tx == 1:
        only = RingStructure(rings=(), origin_count=1)
        return StructureCatalog(n_tx=1, structures=(only,))
    structures = []
    for u in _primes_up_to(n_tx):
        rings = tuple(Ring(count=u) for _ in range(n_tx // u))
        structures.append(RingStructure(rings=rings, origin_count=n_tx % u))
    return StructureCatalog(n_tx=n_tx, structures=tuple(structures))


@dataclass(frozen=True)
class SearchParams2D:
    """Bisection width, walk length, and restart count for ring search.

    Coordinate steps are tied to the problem size: radius steps are
    rho / 100 and rotation steps (2 pi / u) / 100, with finite-difference
    probes at half a step.
    """

    epsilon: float = 0.05
    itr_max: int = 200
    rpt_max: int = 12

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ValueError("epsilon must be > 0")
        if self.itr_max < 1 or self.rpt_max < 0:
            raise ValueError("itr_max >= 1 and rpt_max >= 0 required")


@dataclass(frozen=True)
class StructureResult:
    structure: RingStructure
    tau_star: float
    certified_min: float
    iterations: int
    seed: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.tau_star:
            raise ValueError("tau_star must be >= 0")
        if self.certified_min < self.tau_star / 1.01 - 1e-12:
            raise ValueError("certified minimum contradicts reported tau_star")


@dataclass(frozen=True)
class Placement2DResult:
    results: tuple
    selected_index: int

    @property
    def selected(self) -> StructureResult:
        return self.results[self.selected_index]


class _Wedge:
    """Receiver sample wedge shared by all evaluations of one template."""

    def __init__(self, rho: float, order: int):
        self.rho = rho
        self.angle = 2.0 * math.pi / max(order, 1)
        self.radii = np.linspace(0.0, rho, _RADIAL_GRID)
        self.angles = np.linspace(0.0, self.angle, _ANGULAR_GRID)
        r, a = np.meshgrid(self.radii, self.angles, indexing="ij")
        self.points = np.stack([(r * np.cos(a)).ravel(),
                                (r * np.sin(a)).ravel()], axis=1)

    def min_of(self, value_at) -> float:
        """Grid minimum of a field polished along radius and arc.

        value_at maps an (K, 2) point array to field values.
        """
        vals = np.asarray(value_at(self.points)).reshape(_RADIAL_GRID, _ANGULAR_GRID)
        i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
        best = float(vals[i, j])
        th = self.angles[j]

        def at(r, a):
            return float(value_at(np.array([[r * math.cos(a), r * math.sin(a)]]))[0])

        r_lo = self.radii[max(i - 1, 0)]
        r_hi = self.radii[min(i + 1, _RADIAL_GRID - 1)]
        r_ref, v_r = golden_section_min(lambda r: at(r, th), r_lo, r_hi, iters=36)
        r_star = r_ref if v_r < best else float(self.radii[i])
        best = min(best, v_r)
        a_lo = self.angles[max(j - 1, 0)]
        a_hi = self.angles[min(j + 1, _ANGULAR_GRID - 1)]
        _, v_a = golden_section_min(lambda a: at(r_star, a), a_lo, a_hi, iters=36)
        return min(best, v_a)


def _kernel_field_min(positions: np.ndarray, wedge: _Wedge, z0: float) -> float:
    """Wedge minimum of the squared-coupling kernel sum for a layout."""
    def field(pts: np.ndarray) -> np.ndarray:
        t2 = ((pts[:, None, :] - positions[None, :, :]) ** 2).sum(axis=2)
        return ((2.0 * z0 ** 2 - t2) ** 2 / (z0 ** 2 + t2) ** 5).sum(axis=1)

    return wedge.min_of(field)


def _delivered_min(positions: np.ndarray, wedge: _Wedge,
                   config: SystemConfig) -> float:
    """Wedge minimum of the exact-field delivered power for a layout."""
    def power(pts: np.ndarray) -> np.ndarray:
        h = mutual_field(positions, pts, config.tx_coil, config.rx_coil,
                         config.receiver_height, mode="exact")
        return np.asarray(delivered_power(
            Strategy.OPTIMAL, h, config.power_budget, config.tx_resistance,
            config.rx_resistance, config.load_resistance,
            config.angular_frequency))

    return wedge.min_of(power)


class _RingVariables:
    """Flat variable vector <-> concrete structure for one template."""

    def __init__(self, template: RingStructure, rho: float):
        self.template = template
        self.rho = rho
        self.q = len(template.rings)
        self.order = symmetry_order(template)
        self.sector = 2.0 * math.pi / self.order if self.order else 2.0 * math.pi
        self.n_vars = self.q + max(self.q - 1, 0)
        radial = np.full(self.q, rho / 100.0)
        angular = np.full(max(self.q - 1, 0), self.sector / 100.0)
        self.steps = np.concatenate([radial, angular])
        self.lower = np.concatenate([np.full(self.q, _RADIUS_FLOOR),
                                     np.zeros(max(self.q - 1, 0))])
        self.upper = np.concatenate([np.full(self.q, rho),
                                     np.full(max(self.q - 1, 0), self.sector)])

    def initial(self) -> np.ndarray:
        radii = (np.arange(1, self.q + 1) * self.rho) / (self.q + 1)
        angles = np.full(max(self.q - 1, 0), self.sector / 2.0)
        return np.concatenate([radii, angles])

    def random(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.lower, self.upper)

    def positions(self, v: np.ndarray) -> np.ndarray:
        rows = []
        for q, ring in enumerate(self.template.rings):
            phi = 0.0 if q == 0 else float(v[self.q + q - 1])
            k = np.arange(ring.count)
            ang = phi + 2.0 * math.pi * k / ring.count
            rows.append(np.stack([v[q] * np.cos(ang), v[q] * np.sin(ang)], axis=1))
        if self.template.origin_count:
            rows.append(np.zeros((self.template.origin_count, 2)))
        return np.concatenate(rows, axis=0)

    def concrete(self, v: np.ndarray) -> RingStructure:
        rings = []
        for q, ring in enumerate(self.template.rings):
            phi = 0.0 if q == 0 else float(v[self.q + q - 1]) % (2.0 * math.pi / ring.count)
            rings.append(Ring(count=ring.count, radius=float(v[q]), rotation=phi))
        return RingStructure(rings=tuple(rings),
                             origin_count=self.template.origin_count)


def _feasible_2d(g: float, var: _RingVariables, wedge: _Wedge, z0: float,
                 params: SearchParams2D, seed: int, structure_index: int,
                 bisect_index: int):
    """Variable vector whose wedge-min kernel field clears g, or None."""
    def objective(v: np.ndarray) -> float:
        return _kernel_field_min(var.positions(v), wedge, z0)

    for rpt in range(params.rpt_max + 1):
        if rpt == 0:
            v = var.initial()
        else:
            rng = np.random.default_rng([max(int(seed), 0), structure_index,
                                         bisect_index, rpt])
            v = var.random(rng)
        visited = set()
        quantum = var.steps * 1e-6
        for _ in range(params.itr_max):
            key = tuple(np.round(v / quantum).astype(np.int64))
            if key in visited:
                break
            visited.add(key)
            if objective(v) >= g:
                return v
            grad = np.empty(var.n_vars)
            for m in range(var.n_vars):
                probe = var.steps[m] / 2.0
                up, dn = v.copy(), v.copy()
                up[m] = min(v[m] + probe, var.upper[m])
                dn[m] = max(v[m] - probe, var.lower[m])
                grad[m] = objective(up) - objective(dn)
            v = np.clip(np.where(grad < 0.0, v - var.steps, v + var.steps),
                        var.lower, var.upper)
    return None


def optimize_structure(template: RingStructure, config: SystemConfig,
                       rho: float, params: SearchParams2D | None = None,
                       seed: int = 0, structure_index: int = 0) -> StructureResult:
    """Bisection on the power target for one ring template.

    Ring radii and relative rotations are the decision variables.  The
    feasibility walk scores candidates on the coupling-model kernel; the
    final structure is certified on the exact field over the wedge.
    """
    if not rho > 0:
        raise ValueError("rho must be > 0")
    params = params or SearchParams2D()
    wedge = _Wedge(rho, symmetry_order(template))
    z0 = config.receiver_height

    if not template.rings:
        structure = RingStructure(rings=(), origin_count=template.origin_count)
        certified = _delivered_min(structure.positions(), wedge, config)
        return StructureResult(structure=structure, tau_star=certified,
                               certified_min=certified, iterations=0, seed=seed)

    var = _RingVariables(template, rho)
    lo, hi = 0.0, config.power_budget
    best = None
    iterations = 0
    while hi - lo > params.epsilon:
        tau = 0.5 * (lo + hi)
        g = g_of_tau(tau, config)
        sol = None
        if not math.isinf(g):
            sol = _feasible_2d(g, var, wedge, z0, params, seed,
                               structure_index, iterations)
        if sol is not None:
            lo, best = tau, sol
        else:
            hi = tau
        iterations += 1
    if best is None:
        best = var.initial()
        lo = 0.0
    structure = var.concrete(best)
    certified = _delivered_min(structure.positions(), wedge, config)
    tau_star = min(lo, certified * 1.01)
    return StructureResult(structure=structure, tau_star=tau_star,
                           certified_min=certified, iterations=iterations,
                           seed=seed)


def optimize_placement_2d(n_tx: int, config: SystemConfig, rho: float,
                          params: SearchParams2D | None = None, seed: int = 0,
                          threads: int = 1) -> Placement2DResult:
    """Optimize every catalog template and select the best certified one.

    Templates are independent, so they may run on a thread pool; results
    are merged by catalog index, keeping the outcome identical to the
    sequential run.  Ties on tau_star go to the earlier catalog entry.
    """
    catalog = enumerate_structures(n_tx)

    def run(idx: int) -> StructureResult:
        return optimize_structure(catalog.structures[idx], config, rho,
                                  params, seed, structure_index=idx)

    indices = range(len(catalog.structures))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = tuple(pool.map(run, indices))
    else:
        results = tuple(run(i) for i in indices)
    taus = [r.tau_star for r in results]
    return Placement2DResult(results=results,
                             selected_index=int(np.argmax(taus)))
