#!/usr/bin/env python3
"""
Example usage of the detector-pair simulator.
This script walks through the main results programmatically.
"""

import math

from dotenv import load_dotenv

from analysis import robustness_report, sudden_death_q, verify_incoherent_operation
from model import ChannelParams
from simulator import FIG1_PANELS, UnruhCoherenceSimulator


def main():
    """Example usage of the simulator."""

    # Load environment variables
    load_dotenv()

    print("🛰️ Unruh Coherence Example Usage")
    print("=" * 50)

    try:
        simulator = UnruhCoherenceSimulator()

        print("\n" + "=" * 50)
        print("📉 Coherence vs entanglement along q")
        print("=" * 50)

        for panel, (theta, nu2) in FIG1_PANELS.items():
            records, _ = simulator.sweep_q(theta, nu2, steps=5)
            print(f"\nPanel ({panel}): theta = {theta:.4f}, nu2 = {nu2}")
            print("-" * 40)
            for r in records:
                print(f"q = {r.q:.4f}  C_l1 = {r.c_l1:.6f}  C_RE = {r.c_re:.6f}  C = {r.concurrence:.6f}")

            death = sudden_death_q(theta, nu2)
            print(f"Entanglement sudden death at q* = {death.threshold:.7f}")

        print("\n" + "=" * 50)
        print("🧊 Frozen coherence scan")
        print("=" * 50)

        thetas = [k * math.pi / 16 for k in range(9)]
        nu2s = [k * 0.01 for k in range(6)]
        scan = simulator.frozen_scan(thetas, nu2s)
        print(f"Frozen points: {len(scan.frozen_points)} of {len(scan.grid)}")
        print(f"Only incoherent inputs or zero coupling froze: {scan.matches_prediction}")

        print("\n" + "=" * 50)
        print("💪 Robustness at extreme acceleration")
        print("=" * 50)

        report = robustness_report(math.pi / 4, ChannelParams(q=0.9999, nu2=1.44e-4))
        print(f"C_l1 = {report.c_l1:.7f}, concurrence = {report.concurrence:.7f}, gap = {report.gap:.7f}")

        cp = ChannelParams(q=0.5, nu2=0.04)
        print(f"Channel acts as an incoherent operation: {verify_incoherent_operation(math.pi / 4, cp)}")

        print("\n✅ Example completed successfully!")

    except Exception as e:
        print(f"❌ Error: {e}")
        print("\nMake sure you have:")
        print("1. Installed all dependencies (pip install -r requirements.txt)")
        print("2. Valid values in your .env file (see env_example.txt)")


if __name__ == "__main__":
    main()
