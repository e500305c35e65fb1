#!/usr/bin/env python3
"""Writes the synthetic latency samples under data/samples/.

The samples stand in for microsimulation output: latency rises with total
flow, more steeply at higher truck ratios, and the two-lane road is more
sensitive to stopping trucks relative to its free-flow time. A mild
quadratic term in total flow makes a plane over-estimate at low flow and
under-estimate at high flow. Output is deterministic.
"""
import csv
import pathlib

import numpy as np

ROADS = {
    # name: length km, speed limit km/h, max flow veh/h, truck, total, total^2, truck*total
    "two_lane": (0.5, 48.28, 3000, 4.0e-5, 1.0e-6, 1.2e-9, 1.0e-8),
    "three_lane": (2.0, 80.47, 5000, 3.0e-5, 1.0e-6, 6.0e-10, 4.0e-9),
}
RATIOS = (0.001, 0.01, 0.05, 0.1)
STEP = 50
NOISE_HOURS = 2.0e-4


def main():
    out_dir = pathlib.Path(__file__).resolve().parent.parent / "data" / "samples"
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20210614)
    for name, (length, speed, max_flow, c_truck, c_total, c_sq, c_cross) in ROADS.items():
        free_flow = length / speed
        rows = []
        for ratio in RATIOS:
            for total in range(STEP, max_flow + 1, STEP):
                truck = ratio * total
                latency = (free_flow + c_truck * truck + c_total * total + c_sq * total**2
                           + c_cross * truck * total + rng.normal(0.0, NOISE_HOURS))
                rows.append((truck, float(total), latency))
        with open(out_dir / f"{name}.csv", "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["truck_flow", "total_flow", "latency_hours"])
            for truck, total, latency in rows:
                writer.writerow([repr(truck), repr(total), repr(latency)])


if __name__ == "__main__":
    main()
