"""Phase-sensitivity curves for the two amplifier gains and several efficiencies.

    python scripts/sensitivity_curves.py --out results/sensitivity.csv
"""

import argparse
import math
from pathlib import Path

import numpy as np

from ampsense import interferometer as ifm

PANELS = {
    "a": dict(g2=2.7, g2_corr=1.003, etas=(0.5, 0.29, 0.15)),
    "b": dict(g2=3.2, g2_corr=1.004, etas=(0.5, 0.25, 0.13)),
}


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("results/sensitivity.csv"))
    parser.add_argument("--n-points", type=int, default=721)
    args = parser.parse_args()
    args.out.parent.mkdir(parents=True, exist_ok=True)

    rows = []
    print("panel,g2,eta,best_phi_rad,best_mrad,snl_mrad,gain_db,sub_snl_width_pi")
    for panel, setup in PANELS.items():
        for eta in setup["etas"]:
            config = ifm.InterferometerConfig(g2=setup["g2"], g2_corr=setup["g2_corr"], eta=eta)
            curve = ifm.phase_sweep(config, -math.pi, math.pi, args.n_points)
            phi, best = ifm.best_sensitivity(config)
            gain = 20 * math.log10(curve.snl / best)
            width = ifm.sub_snl_width(config) / math.pi
            print(f"{panel},{setup['g2']},{eta},{phi:.4f},{best * 1e3:.3f},{curve.snl * 1e3:.3f},"
                  f"{gain:.2f},{width:.3f}")
            for p, d in zip(curve.phis, curve.delta_phi):
                rows.append((ord(panel) - ord("a"), eta, p, d))
    np.savetxt(args.out, np.array(rows), delimiter=",",
               header="panel_index,eta,phi_rad,delta_phi_rad", comments="")


if __name__ == "__main__":
    main()
