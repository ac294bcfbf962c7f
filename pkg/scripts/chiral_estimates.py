"""Order-of-magnitude estimates for the chiral mirror shift.

Prints the velocity ratio law, the shift for a dipole tuned to a 1 GHz
ordinary shift at 1 um, the distance law and the helix slopes.
"""
import argparse
import math

from rydchiral.chiral_shift import (
    CONSTANTS,
    ChiralSetup,
    closed_form_shift,
    dipole_for_ordinary_shift,
    helix_slope,
    ordinary_electric_shift,
    orbital_speed,
)

TWO_PI = 2 * math.pi


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--v", type=float, default=1e3, help="atom velocity (m/s)")
    ap.add_argument("--z", type=float, default=1e-6, help="atom-mirror distance (m)")
    args = ap.parse_args()

    d = dipole_for_ordinary_shift(TWO_PI * 1e9, args.z)
    print(f"dipole for a 1 GHz ordinary shift at z = {args.z:g} m: {d:.4e} C m "
          f"({d / (CONSTANTS.e * CONSTANTS.a0):.0f} e a0)")
    for v in (1.0, 1e3, 1e5):
        s = ChiralSetup(v, d, 1e10, args.z)
        ratio = closed_form_shift(s) / ordinary_electric_shift(d, args.z)
        print(f"v = {v:8.0f} m/s  chiral/ordinary = {ratio:.4e}  4v/c = {4 * v / CONSTANTS.c:.4e}")

    print("\nz (um)   ordinary (Hz)   chiral (Hz)")
    for z in (0.1, 0.3, 1.0, 3.0, 10.0):
        s = ChiralSetup(args.v, d, 1e10, z * 1e-6)
        print(f"{z:6.1f}   {ordinary_electric_shift(d, z * 1e-6) / TWO_PI:13.4e}   "
              f"{closed_form_shift(s) / TWO_PI:11.4e}")

    print(f"\norbital speed a_n omega_kn: n=1 {orbital_speed(1):.4e} m/s")
    for n in (30, 50, 100):
        print(f"n = {n:3d}: speed {orbital_speed(n):.4e} m/s, helix slope at v = {args.v:g} m/s: "
              f"{helix_slope(n, args.v):.4f}")


if __name__ == "__main__":
    main()
