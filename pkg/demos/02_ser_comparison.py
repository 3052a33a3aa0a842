#!/usr/bin/env python3
"""Symbol error rate of the pair scheme against the two references.

Two symbols per frame on a 2x1 channel, 4-PAM, unit noise. The weight
decoder needs no knowledge of the dissolution factor; the "ml" decoder
exploits that the interference-free frame has a deterministic factor.
The MRC reference spends the whole 2P budget on one beamformed symbol;
successive decoding superposes both symbols and hits an error floor.

For publication-size runs use the CLI, e.g.
    idsim ser --k 2 --qs 2 --snr-db 0:2:40 --trials 100000 --out fig_ser.csv
"""

import numpy as np

from idsim import harness

grid = np.arange(0.0, 41.0, 5.0)
trials = 20_000

curves = {}
for decoder in ("weight", "ml"):
    cfg = harness.ExperimentConfig(
        experiment="ser", k=2, q_s=2, zeta_db_grid=grid, trials=trials, decoder=decoder
    )
    for row in harness.run_ser_sweep(cfg):
        curves.setdefault(row.scheme, {})[row.zeta_db] = row.ser

print(f"{trials} trials per point, per-symbol SER")
header = f"{'zeta(dB)':>8s} " + "".join(f"{name:>12s}" for name in curves)
print(header)
for z in grid:
    line = f"{z:8.0f} "
    for name in curves:
        line += f"{curves[name][z]:12.5f}"
    print(line)

print("\nNotes:")
print(" - successive decoding flattens out: equal-strength superposed symbols")
print("   stay ambiguous no matter the power.")
print(" - the beta-blind weight rule trails the exact-likelihood curve here")
print("   because a two-symbol frame has a deterministic dissolution factor")
print("   that the weight rule deliberately ignores.")
