#!/usr/bin/env python3
"""Reproduce the line-region comparison tables.

Prints the four summary metrics for the evenly spread five-transmitter
layout under each current strategy, and for the single large centralized
coil, all on the exact coupling model.
"""

import argparse

import numpy as np

from mrcwpt import CoilSpec, Region, Strategy, SystemConfig, profile, summarize

TX = CoilSpec(coil_radius=0.05, turns=400, wire_radius=1e-4, resistivity=1.68e-8)
TX_CENTRAL = CoilSpec(coil_radius=0.25, turns=400, wire_radius=1e-4,
                      resistivity=1.68e-8)
RX = CoilSpec(coil_radius=0.025, turns=200, wire_radius=1e-4, resistivity=1.68e-8)


def system(tx: CoilSpec) -> SystemConfig:
    return SystemConfig(angular_frequency=42.6e6, power_budget=30.0,
                        receiver_height=0.2, load_resistance=100.0,
                        tx_coil=tx, rx_coil=RX)


def row(label, placement, cfg, strategy, region):
    m = summarize(profile(placement, region, cfg, strategy, mode="exact"))
    print(f"{label:12s} p_avg={m.p_avg:7.3f}  p_min={m.p_min:7.3f}  "
          f"p_max={m.p_max:7.3f}  xi={100 * m.xi:6.2f}%")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--half-length", type=float, default=1.0)
    parser.add_argument("--n-tx", type=int, default=5)
    args = parser.parse_args()

    region = Region(kind="line", height=0.2, half_length=args.half_length)
    uniform = np.stack([np.linspace(-args.half_length, args.half_length, args.n_tx),
                        np.zeros(args.n_tx)], axis=1)
    cfg = system(TX)
    row("OCUL", uniform, cfg, Strategy.OPTIMAL, region)
    row("ECUL", uniform, cfg, Strategy.EQUAL, region)
    row("TSUL", uniform, cfg, Strategy.SELECTION, region)
    row("centralized", np.zeros((1, 2)), system(TX_CENTRAL), Strategy.OPTIMAL, region)


if __name__ == "__main__":
    main()
