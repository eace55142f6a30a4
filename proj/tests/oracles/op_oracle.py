#!/usr/bin/env python3
# Copyright 2026 The edgecache Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Reference predictions for the online-prediction models.

Writes a small random stream plus the predictions an exact solver makes on
it. Constrained fits enumerate every set of active nonnegativity rows in
coefficient space, which shares nothing with the library's solver.

usage: op_oracle.py OUT_DIR
"""
import itertools
import math
import sys
from pathlib import Path

import numpy as np
from scipy import special
from scipy.linalg import null_space

N, D, TAU, SLOTS, L = 3, 4, 10, 30, 2
PROB_FLOOR = 1e-6
SEED = 20240611


def stream(rng):
    ranks = np.arange(1, N + 1, dtype=float) ** -1.5
    pmf = ranks / ranks.sum()
    profiles = np.array([rng.dirichlet(50.0 * rng.permutation(pmf)) for _ in range(SLOTS)])
    counts = rng.poisson(400.0 * profiles).astype(np.int64)
    return profiles, counts


def design(series):
    """Stacked lag regression: rows for slots D..TAU-1, column k is lag k+1."""
    series = [np.atleast_1d(s) for s in series]
    y = np.concatenate(series[D:])
    H = np.column_stack([np.concatenate(series[D - k:len(series) - k]) for k in range(1, D + 1)])
    basis = np.column_stack([series[-k] for k in range(1, D + 1)])
    return H, y, basis


def objective(H, y, c):
    r = H @ c - y
    return float(r @ r)


def convex_ar(H, y, basis):
    """min ||Hc - y|| s.t. sum c = 1, basis c >= 0, by active-row enumeration."""
    best = None
    rows = basis.shape[0]
    for size in range(rows + 1):
        for S in itertools.combinations(range(rows), size):
            Z = null_space(basis[list(S)]) if S else np.eye(D)
            if Z.shape[1] == 0:
                continue
            # c = Z z with 1^T Z z = 1: KKT of the equality-constrained LS.
            G = Z.T @ H.T @ H @ Z
            e = Z.T @ np.ones(D)
            if np.linalg.norm(e) < 1e-12:
                continue
            K = np.block([[G, e[:, None]], [e[None, :], np.zeros((1, 1))]])
            rhs = np.concatenate([Z.T @ H.T @ y, [1.0]])
            z = np.linalg.lstsq(K, rhs, rcond=None)[0][:-1]
            c = Z @ z
            if abs(c.sum() - 1.0) > 1e-9 or (basis @ c).min() < -1e-11:
                continue
            f = objective(H, y, c)
            if best is None or f < best[0] - 1e-15:
                best = (f, c)
    return basis @ best[1]


def ball_on_subspace(H, y, basis, Z):
    G = Z.T @ H.T @ H @ Z
    b = Z.T @ H.T @ y
    M = Z.T @ basis.T @ basis @ Z
    z = np.linalg.solve(G, b)
    if np.linalg.norm(basis @ Z @ z) <= 1.0:
        return Z @ z
    lo, hi = 0.0, 1.0
    while np.linalg.norm(basis @ Z @ np.linalg.solve(G + hi * M, b)) > 1.0:
        lo, hi = hi, 4.0 * hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if np.linalg.norm(basis @ Z @ np.linalg.solve(G + mid * M, b)) > 1.0:
            lo = mid
        else:
            hi = mid
    return Z @ np.linalg.solve(G + hi * M, b)


def ball_ar(H, y, basis):
    """min ||Hc - y|| s.t. basis c >= 0, ||basis c|| <= 1."""
    best = None
    rows = basis.shape[0]
    for size in range(rows + 1):
        for S in itertools.combinations(range(rows), size):
            Z = null_space(basis[list(S)]) if S else np.eye(D)
            if Z.shape[1] == 0:
                continue
            c = ball_on_subspace(H, y, basis, Z)
            x = basis @ c
            if x.min() < -1e-11 or np.linalg.norm(x) > 1.0 + 1e-9:
                continue
            f = objective(H, y, c)
            if best is None or f < best[0] - 1e-15:
                best = (f, c)
    return basis @ best[1]


def to_profile(x):
    x = np.clip(x, 0.0, 1.0)
    return x / x.sum() if x.sum() > 0 else np.full(len(x), 1.0 / len(x))


def ppm(window, counts):
    H, y, basis = design(list(window))
    return to_profile(convex_ar(H, y, basis))


def gpm(window, counts):
    H, y, basis = design([np.sqrt(p) for p in window])
    return to_profile(ball_ar(H, y, basis) ** 2)


def rpm(window, counts):
    n_max = max(2.0, float(counts.max()))
    predicted = np.empty(N)
    for l in range(N):
        series = [math.log(max(1.0, float(n)) / n_max) for n in counts[l]]
        H, y, basis = design(series)
        coef = np.linalg.lstsq(H, y, rcond=None)[0]
        predicted[l] = math.floor(n_max * math.exp(basis[0] @ coef) * (1.0 + 1e-12))
    return predicted / predicted.sum() if predicted.sum() > 0 else np.full(N, 1.0 / N)


def ipm(window, counts):
    info = []
    for p in window:
        f = np.maximum(p, PROB_FLOOR)
        info.append(-np.log(f / f.sum()))
    H, y, basis = design(info)
    x = basis @ np.linalg.lstsq(H, y, rcond=None)[0]
    w = np.exp(-(x - x.min()))
    return w / w.sum()


class Network:
    """Interference-limited success probability with Rayleigh fading on a PPP."""

    def __init__(self, density=200.0, alpha=3.5, bandwidth=24000.0, rate=1.0):
        s0 = 2.0 ** (rate / bandwidth) - 1.0
        a = 2.0 / alpha
        pre = 2.0 * math.pi * density * s0 ** a / alpha
        # int_{1/s0}^inf u^(a-1) / (1 + u) du as a regularized incomplete beta.
        self.A = pre * special.beta(1.0 - a, a) * special.betainc(1.0 - a, a, s0 / (1.0 + s0))
        self.B = pre * math.pi / math.sin(math.pi * a)
        self.C = math.pi * density

    def g(self, q):
        return q * self.C / (q * self.A + (1.0 - q) * self.B + q * self.C)

    def best_asp(self, p):
        """Water-filling on the stationarity condition p_l g'(q_l) = mu."""
        beta = self.A + self.C - self.B

        def q_of(mu):
            return np.clip((np.sqrt(p * self.B * self.C / mu) - self.B) / beta, 0.0, 1.0)

        lo, hi = 1e-30, float(p.max() * self.C / self.B) * 2.0
        for _ in range(400):
            mid = math.sqrt(lo * hi)
            if q_of(mid).sum() > L:
                lo = mid
            else:
                hi = mid
        q = q_of(hi)
        return float(p @ self.g(q))


NET = None


def asppm(window, counts):
    series = [NET.best_asp(p) for p in window]
    H, y, _ = design(series)
    _, _, basis = design(list(window))
    return to_profile(convex_ar(H, y, basis))


MODELS = {"ppm": ppm, "gpm": gpm, "rpm": rpm, "ipm": ipm, "asppm": asppm}


def main():
    global NET
    out = Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(SEED)
    profiles, counts = stream(rng)
    NET = Network()

    with open(out / "op_stream.csv", "w") as f:
        f.write("slot," + ",".join(f"file_{i + 1}" for i in range(N)) + "\n")
        for t, p in enumerate(profiles):
            f.write(f"{t + 1}," + ",".join(repr(float(v)) for v in p) + "\n")
    with open(out / "op_counts.csv", "w") as f:
        f.write("slot," + ",".join(f"file_{i + 1}" for i in range(N)) + "\n")
        for t in range(SLOTS):
            f.write(f"{t + 1}," + ",".join(str(int(v)) for v in counts[t]) + "\n")
    with open(out / "op_golden.csv", "w") as f:
        f.write("model,slot," + ",".join(f"file_{i + 1}" for i in range(N)) + ",mse\n")
        for name, model in MODELS.items():
            for t in range(TAU, SLOTS):
                pred = model(profiles[t - TAU:t], counts[t - TAU:t].T)
                err = float(np.sum((pred - profiles[t]) ** 2))
                f.write(f"{name},{t + 1}," + ",".join(repr(float(v)) for v in pred) + f",{err!r}\n")


if __name__ == "__main__":
    main()
