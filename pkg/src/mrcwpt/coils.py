"""Coil descriptions and derived electrical parameters.

A coil is a multi-turn circular loop characterized by its radius, turn
count, wire radius, and the wire material's resistivity constant.  From
these we derive the series resistance, the self-inductance of the winding,
and the series compensator capacitance that puts the coil in resonance at
the operating frequency (l * c * w^2 = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

MU0 = 4e-7 * math.pi  # vacuum permeability, H/m


@dataclass(frozen=True)
class CoilSpec:
    """Physical description of one coil.

    Parameters
    ----------
    coil_radius : float
        Loop radius in m.
    turns : int
        Number of turns, >= 1.
    wire_radius : float
        Wire radius in m, strictly smaller than the loop radius.
    resistivity : float
        Wire material resistivity constant (per meter of wire).
    """

    coil_radius: float
    turns: int
    wire_radius: float
    resistivity: float

    def __post_init__(self) -> None:
        if not self.coil_radius > 0:
            raise ValueError("coil_radius must be > 0")
        if not self.wire_radius > 0:
            raise ValueError("wire_radius must be > 0")
        if not self.wire_radius < self.coil_radius:
            raise ValueError("wire_radius must be smaller than coil_radius")
        if self.turns < 1:
            raise ValueError("turns must be >= 1")
        if not self.resistivity > 0:
            raise ValueError("resistivity must be > 0")


@dataclass(frozen=True)
class ElectricalParams:
    """Derived electrical parameters of a coil at a fixed frequency."""

    resistance: float              # ohm
    self_inductance: float         # H
    compensator_capacitance: float  # F

    def __post_init__(self) -> None:
        if min(self.resistance, self.self_inductance, self.compensator_capacitance) <= 0:
            raise ValueError("electrical parameters must all be > 0")


@dataclass(frozen=True)
class SystemConfig:
    """Operating point shared by every computation.

    angular_frequency in rad/s, power_budget in W (sum over transmitter
    sources), receiver_height in m (vertical separation between the
    transmitter plane and the receiver plane), load_resistance in ohm.
    """

    angular_frequency: float
    power_budget: float
    receiver_height: float
    load_resistance: float
    tx_coil: CoilSpec
    rx_coil: CoilSpec

    def __post_init__(self) -> None:
        if not self.angular_frequency > 0:
            raise ValueError("angular_frequency must be > 0")
        if not self.power_budget > 0:
            raise ValueError("power_budget must be > 0")
        if not self.receiver_height > 0:
            raise ValueError("receiver_height must be > 0")
        if not self.load_resistance > 0:
            raise ValueError("load_resistance must be > 0")

    @property
    def tx_resistance(self) -> float:
        return derive_electrical(self.tx_coil, self.angular_frequency).resistance

    @property
    def rx_resistance(self) -> float:
        """Total receiver-side resistance (parasitic plus load)."""
        params = derive_electrical(self.rx_coil, self.angular_frequency)
        return total_receiver_resistance(params, self.load_resistance)


def derive_electrical(coil: CoilSpec, w: float) -> ElectricalParams:
    """Derive resistance, self-inductance and compensator capacitance.

    r = 2 sigma b e_coil / e_wire^2
    l = mu0 b^2 e_coil (ln(8 e_coil / e_wire) - 2)
    c = 1 / (l w^2)

    Raises ValueError when ln(8 e_coil / e_wire) <= 2, which would give a
    non-physical non-positive inductance.
    """
    if not w > 0:
        raise ValueError("angular frequency must be > 0")
    log_term = math.log(8.0 * coil.coil_radius / coil.wire_radius) - 2.0
    if log_term <= 0:
        raise ValueError("coil too tightly wound: ln(8 e_coil/e_wire) <= 2")
    r = 2.0 * coil.resistivity * coil.turns * coil.coil_radius / coil.wire_radius**2
    l = MU0 * coil.turns**2 * coil.coil_radius * log_term
    c = 1.0 / (l * w * w)
    return ElectricalParams(resistance=r, self_inductance=l, compensator_capacitance=c)


def total_receiver_resistance(params: ElectricalParams, load: float) -> float:
    """Receiver resistance seen by the circuit: parasitic + load."""
    if not load > 0:
        raise ValueError("load must be > 0")
    return params.resistance + load
