import math

import numpy as np
import pytest

from mrcwpt import (Ring, RingStructure, SearchParams2D, Strategy,
                    delivered_power, enumerate_structures,
                    is_rotationally_symmetric, mutual_field,
                    optimize_placement_2d, optimize_structure, symmetry_order)

FAST = SearchParams2D(epsilon=2.0, itr_max=40, rpt_max=2)


def _disk_grid(rho, radial=41, angular=72, sector=2.0 * math.pi):
    radii = np.linspace(0.0, rho, radial)
    angles = np.linspace(0.0, sector, angular, endpoint=False)
    r, a = np.meshgrid(radii, angles, indexing="ij")
    return np.stack([(r * np.cos(a)).ravel(), (r * np.sin(a)).ravel()], axis=1)


def _power_min(positions, pts, system):
    h = mutual_field(positions, pts, system.tx_coil, system.rx_coil,
                     system.receiver_height, mode="approx")
    p = delivered_power(Strategy.OPTIMAL, h, system.power_budget,
                        system.tx_resistance, system.rx_resistance,
                        system.load_resistance, system.angular_frequency)
    return float(np.min(p))


def test_catalog_counts():
    for n, want in [(2, 1), (3, 2), (4, 2), (6, 3), (10, 4)]:
        assert len(enumerate_structures(n).structures) == want


def test_catalog_for_five():
    cat = enumerate_structures(5)
    shapes = [([r.count for r in s.rings], s.origin_count)
              for s in cat.structures]
    assert shapes == [([2, 2], 1), ([3], 2), ([5], 0)]
    assert all(s.n_tx == 5 for s in cat.structures)
    assert all(s.is_template for s in cat.structures if s.rings)
    assert all(is_rotationally_symmetric(s) for s in cat.structures)


def test_catalog_single_transmitter():
    cat = enumerate_structures(1)
    assert len(cat.structures) == 1
    assert cat.structures[0].origin_count == 1
    assert not cat.structures[0].rings


def test_symmetry_predicate():
    sym = RingStructure(rings=(Ring(2, 0.2, 0.0), Ring(2, 0.1, 0.3)), origin_count=1)
    assert is_rotationally_symmetric(sym)
    assert symmetry_order(sym) == 2
    mixed = RingStructure(rings=(Ring(2, 0.2, 0.0), Ring(3, 0.1, 0.3)))
    assert not is_rotationally_symmetric(mixed)
    assert symmetry_order(mixed) == 1
    even = RingStructure(rings=(Ring(4, 0.2, 0.0), Ring(6, 0.1, 0.2)))
    assert is_rotationally_symmetric(even)
    assert symmetry_order(even) == 2
    assert is_rotationally_symmetric(RingStructure(rings=(), origin_count=3))


def test_ring_positions():
    s = RingStructure(rings=(Ring(4, 1.0, 0.0),), origin_count=2)
    pts = s.positions()
    assert pts.shape == (6, 2)
    assert pts[0] == pytest.approx([1.0, 0.0])
    assert pts[1] == pytest.approx([0.0, 1.0], abs=1e-12)
    assert np.all(pts[4:] == 0.0)
    assert s.n_tx == 6


def test_structure_validation():
    with pytest.raises(ValueError):
        Ring(1, 0.1, 0.0)
    with pytest.raises(ValueError):
        Ring(3, -0.1, 0.0)
    with pytest.raises(ValueError):
        Ring(3, 0.1, 2.2)  # rotation outside [0, 2 pi / 3)
    with pytest.raises(ValueError):
        RingStructure(rings=(Ring(3, 0.1, 0.5),))  # first ring not at 0
    with pytest.raises(ValueError):
        RingStructure(rings=(), origin_count=0)
    template = enumerate_structures(5).structures[2]
    with pytest.raises(ValueError):
        template.positions()


def test_rotation_leaves_worst_case_unchanged(system):
    # rotating the layout by one angular grid step permutes the sampled
    # field values, so the grid minimum cannot move
    s = RingStructure(rings=(Ring(3, 0.13, 0.0),), origin_count=2)
    pts = _disk_grid(0.35, radial=31, angular=60)
    step = 2.0 * math.pi / 60
    c, si = math.cos(step), math.sin(step)
    rot = np.array([[c, -si], [si, c]])
    base = _power_min(s.positions(), pts, system)
    rotated = _power_min(s.positions() @ rot.T, pts, system)
    assert rotated == pytest.approx(base, rel=1e-6)


def test_wedge_equals_full_disk_for_symmetric_layout(system):
    # a 5-fold symmetric layout repeats its field five times around the
    # disk; sampling one wedge must find the same minimum
    s = RingStructure(rings=(Ring(5, 0.22, 0.0),))
    full = _disk_grid(0.35, radial=31, angular=60)
    wedge = _disk_grid(0.35, radial=31, angular=12, sector=2.0 * math.pi / 5)
    assert _power_min(s.positions(), wedge, system) == pytest.approx(
        _power_min(s.positions(), full, system), rel=1e-9)


def test_colocated_coils_get_identical_currents(system):
    from mrcwpt import mutual_vector, optimal_currents
    s = RingStructure(rings=(Ring(3, 0.13, 0.0),), origin_count=2)
    h = mutual_vector(s.positions(), np.array([0.11, -0.07]), system)
    alloc = optimal_currents(h, system.power_budget, system.tx_resistance,
                             system.rx_resistance, system.angular_frequency)
    assert h[3] == pytest.approx(h[4], rel=1e-12)
    assert alloc.re[3] == pytest.approx(alloc.re[4], rel=1e-12)


def test_optimize_structure_invariants(system):
    template = enumerate_structures(5).structures[2]  # single ring of 5
    res = optimize_structure(template, system, 0.35, FAST, seed=5)
    s = res.structure
    assert not s.is_template
    assert len(s.rings) == 1 and s.rings[0].count == 5
    assert 0.0 < s.rings[0].radius <= 0.35
    assert s.rings[0].rotation == 0.0
    assert res.tau_star <= res.certified_min * 1.01 + 1e-12
    assert 0.0 <= res.tau_star <= system.power_budget


def test_optimize_structure_deterministic(system):
    template = enumerate_structures(3).structures[1]  # ring of 3
    a = optimize_structure(template, system, 0.3, FAST, seed=9)
    b = optimize_structure(template, system, 0.3, FAST, seed=9)
    assert a == b


def test_threads_do_not_change_results(system):
    seq = optimize_placement_2d(3, system, 0.25, FAST, seed=4, threads=1)
    par = optimize_placement_2d(3, system, 0.25, FAST, seed=4, threads=2)
    assert seq == par


def test_single_transmitter_placement(system):
    res = optimize_placement_2d(1, system, 0.2, FAST, seed=0)
    assert res.selected_index == 0
    sel = res.selected
    assert sel.structure.origin_count == 1
    assert sel.tau_star == pytest.approx(sel.certified_min)
    assert sel.certified_min > 0.0


def test_rejects_bad_arguments(system):
    with pytest.raises(ValueError):
        enumerate_structures(0)
    with pytest.raises(ValueError):
        optimize_structure(enumerate_structures(2).structures[0], system, 0.0,
                           FAST)
    with pytest.raises(ValueError):
        SearchParams2D(epsilon=-1.0)
