"""Multiple-input single-output magnetic-resonant wireless power transfer.

Circuit model of coupled resonant coils, closed-form magnetic
beamforming currents, delivered-power field metrics, and max-min
transmitter placement over line and disk target regions.
"""

from .beamforming import (Strategy, allocate, delivered_power, equal_currents,
                          optimal_currents, transmitter_selection)
from .circuit import (CircuitSolution, CurrentAllocation, load_power,
                      per_transmitter_power, receiver_current, solve,
                      source_voltages, sum_power)
from .coils import (CoilSpec, ElectricalParams, SystemConfig, derive_electrical,
                    total_receiver_resistance)
from .metrics import (PowerProfile, Region, RegionMetrics, golden_section_min,
                      profile, sample_points, summarize)
from .mutual import (CoilPose, bessel_j, coupling_beta, mutual_approx,
                     mutual_exact, mutual_field, mutual_vector)
from .placement_1d import (PlacementResult, SearchParams, SymmetricPlacement1D,
                           certified_field_min, f_gradient, f_kernel,
                           feasibility_search, g_of_tau, optimize_placement_1d,
                           tau_from_threshold)
from .placement_2d import (Placement2DResult, Ring, RingStructure,
                           SearchParams2D, StructureCatalog, StructureResult,
                           enumerate_structures, is_rotationally_symmetric,
                           optimize_placement_2d, optimize_structure,
                           symmetry_order)

__version__ = "0.1.0"

__all__ = [
    "Strategy", "allocate", "delivered_power", "equal_currents",
    "optimal_currents", "transmitter_selection",
    "CircuitSolution", "CurrentAllocation", "load_power",
    "per_transmitter_power", "receiver_current", "solve", "source_voltages",
    "sum_power",
    "CoilSpec", "ElectricalParams", "SystemConfig", "derive_electrical",
    "total_receiver_resistance",
    "PowerProfile", "Region", "RegionMetrics", "golden_section_min", "profile",
    "sample_points", "summarize",
    "CoilPose", "bessel_j", "coupling_beta", "mutual_approx", "mutual_exact",
    "mutual_field", "mutual_vector",
    "PlacementResult", "SearchParams", "SymmetricPlacement1D",
    "certified_field_min", "f_gradient", "f_kernel", "feasibility_search",
    "g_of_tau", "optimize_placement_1d", "tau_from_threshold",
    "Placement2DResult", "Ring", "RingStructure", "SearchParams2D",
    "StructureCatalog", "StructureResult", "enumerate_structures",
    "is_rotationally_symmetric", "optimize_placement_2d", "optimize_structure",
    "symmetry_order",
    "__version__",
]
