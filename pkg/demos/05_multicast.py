#!/usr/bin/env python3
"""Three users, three symbols, two channel uses.

The transmitter sends s1 + s2 + alpha*s3 and then s2 - beta*s1, with
alpha*s3 dissolved into s2. Every user peels off (s1, s2) from its own
two observations; user 3 then strips them from the first one and reads
s3 from the alpha-scaled residual. Throughput: 1.5 symbols per use.
"""

import numpy as np

from idsim import harness, model, multicast

rng = np.random.default_rng(11)

P = 25.0
const = model.constellation_for_power(P, 2)
s1, s2, s3 = (float(x) for x in const.draw(rng, size=3))
frame = multicast.multicast_transmit(s1, s2, s3)
print(f"symbols: s1={s1:+.3f} s2={s2:+.3f} s3={s3:+.3f}  alpha={frame.alpha:.6f}")
print(f"sent: x1 = {frame.x1:+.4f} (= s1 + beta*s2), x2 = {frame.x2:+.4f}, beta = {frame.beta:+.4f}")

gains = model._signed_rayleigh(rng, 3)
sigma2 = 1.0
for user, h_i in enumerate(gains, start=1):
    got = multicast.multicast_receive_decode(frame, float(h_i), sigma2, rng, const)
    line = f"user {user} (h={h_i:+.3f}): pair -> ({got[0]:+.3f}, {got[1]:+.3f})"
    if user == 3:
        y = multicast.multicast_receive(frame, float(h_i), sigma2, rng)
        s3_hat = multicast.multicast_decode_s3(float(y[0]), float(h_i), got[0], got[1], frame.alpha, const)
        line += f", s3 -> {s3_hat:+.3f}"
    print(line)

print("\nSER sweep over fading (5000 frames per point):")
cfg = harness.ExperimentConfig(
    experiment="multicast", q_s=2, zeta_db_grid=np.arange(0.0, 31.0, 5.0), trials=5000
)
rows = harness.run_multicast(cfg)
users = {}
for r in rows:
    if r.scheme.startswith("user"):
        users.setdefault(r.scheme, {})[r.zeta_db] = r.ser
print(f"{'zeta(dB)':>8s} {'user1':>9s} {'user2':>9s} {'user3':>9s}")
for z in np.arange(0.0, 31.0, 5.0):
    print(f"{z:8.0f} {users['user1'][z]:9.4f} {users['user2'][z]:9.4f} {users['user3'][z]:9.4f}")
print(f"throughput: {rows[-1].bound_value} symbols per channel use")

print("\nrate slope of s3 vs (1/2) log2 P (one fixed gain, eps=0.2):")
res = multicast.s3_rate_slope([1e2, 1e4, 1e6], 0.2, trials=2000, rng=rng)
for p, slope in res:
    print(f"  P={p:8.0e}: slope {slope:.3f}")
print("s3 rides a clean scaled channel once the pair is stripped: one DoF.")
