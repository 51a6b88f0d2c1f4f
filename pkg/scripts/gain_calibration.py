"""Fit the amplifier gain from synthetic pump-power scans with multiplicative noise.

    python scripts/gain_calibration.py --b 2.2 --noise 0.02 --seed 1
"""

import argparse

import numpy as np

from ampsense import interferometer as ifm


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--b", type=float, default=2.2, help="true gain per sqrt(power)")
    parser.add_argument("--scale", type=float, default=1.0)
    parser.add_argument("--noise", type=float, default=0.02, help="relative noise RMS")
    parser.add_argument("--n-points", type=int, default=12)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    powers = np.linspace(0.1, 2.0, args.n_points)
    photons = args.scale * np.sinh(args.b * np.sqrt(powers)) ** 2
    photons *= 1 + args.noise * rng.standard_normal(powers.size)
    fit = ifm.calibrate_gain(list(zip(powers, photons)))
    print(f"b={fit.b:.4f} (true {args.b}) scale={fit.scale:.4f} residual_rms={fit.residual_rms:.4f}")
    print(f"G at full power = {fit.b * np.sqrt(powers[-1]):.3f}")


if __name__ == "__main__":
    main()
