#!/usr/bin/env python3
"""Optimize every ring structure for the disk region and print the table."""

import argparse

from mrcwpt import (CoilSpec, Region, SearchParams2D, Strategy, SystemConfig,
                    optimize_placement_2d, profile, summarize)

TX = CoilSpec(coil_radius=0.05, turns=400, wire_radius=1e-4, resistivity=1.68e-8)
RX = CoilSpec(coil_radius=0.025, turns=200, wire_radius=1e-4, resistivity=1.68e-8)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-tx", type=int, default=5)
    parser.add_argument("--rho", type=float, default=0.35)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--metrics", action="store_true",
                        help="also print full-disk metrics per structure")
    args = parser.parse_args()

    cfg = SystemConfig(angular_frequency=42.6e6, power_budget=30.0,
                       receiver_height=0.2, load_resistance=100.0,
                       tx_coil=TX, rx_coil=RX)
    res = optimize_placement_2d(args.n_tx, cfg, args.rho, SearchParams2D(),
                                seed=args.seed, threads=args.threads)
    region = Region(kind="disk", height=cfg.receiver_height, radius=args.rho)
    for i, r in enumerate(res.results):
        s = r.structure
        rings = ", ".join(f"{ring.count}@{ring.radius:.4f}m/{ring.rotation:.3f}rad"
                          for ring in s.rings)
        mark = " <- selected" if i == res.selected_index else ""
        print(f"[{i}] rings: {rings}  origin: {s.origin_count}  "
              f"tau*={r.tau_star:.3f} W  certified={r.certified_min:.3f} W{mark}")
        if args.metrics:
            m = summarize(profile(s.positions(), region, cfg, Strategy.OPTIMAL,
                                  mode="exact"))
            print(f"     p_avg={m.p_avg:7.3f}  p_min={m.p_min:7.3f}  "
                  f"p_max={m.p_max:7.3f}  xi={100 * m.xi:6.2f}%")


if __name__ == "__main__":
    main()
