"""Dark-port states of the three interferometer scenarios and their separation.

Writes one long-format CSV of Wigner values per scenario and prints the
separation of neighbouring phases.

    python scripts/wigner_scenarios.py --outdir results/wigner
"""

import argparse
import math
from pathlib import Path

import numpy as np

from ampsense import wigner as wg


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", type=Path, default=Path("results/wigner"))
    parser.add_argument("--grid-points", type=int, default=121)
    parser.add_argument("--eta", type=float, default=0.5)
    parser.add_argument("--dopa-db", type=float, default=9.6)
    args = parser.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    phis = wg.DEFAULT_PHIS
    print("scenario,pair,separation")
    for scenario in wg.SCENARIOS:
        states = wg.scenario_states(scenario, phis, eta=args.eta, dopa_db=args.dopa_db)
        for k, value in enumerate(wg.separation_metric(states)):
            print(f"{scenario},{k},{value:.4f}")
        extent = max(8.0, max(abs(s.mean[0]) + 6 * math.sqrt(s.cov[0, 0]) for s in states))
        axis = np.linspace(-extent, extent, args.grid_points)
        rows = []
        for phi, state in zip(phis, states):
            grid = wg.wigner_grid(state, axis, axis)
            xx, pp = np.meshgrid(axis, axis, indexing="ij")
            rows.append(np.column_stack([np.full(xx.size, phi), xx.ravel(), pp.ravel(),
                                         grid.values.ravel()]))
        path = args.outdir / f"{scenario.replace('+', '_')}.csv"
        np.savetxt(path, np.vstack(rows), delimiter=",", header="phi_rad,x,p,wigner", comments="")

    # fraction of the lossless squeezed separation recovered by amplification
    lossless = wg.separation_metric(wg.scenario_states("squeezed", phis, eta=1.0))
    amplified = wg.separation_metric(wg.scenario_states("squeezed+amplified", phis, eta=args.eta,
                                                        dopa_db=args.dopa_db))
    print("recovery," + ",".join(f"{a / b:.3f}" for a, b in zip(amplified, lossless)))


if __name__ == "__main__":
    main()
