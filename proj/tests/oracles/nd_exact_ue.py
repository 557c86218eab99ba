#!/usr/bin/env python3
# Copyright 2026 The qvuln Authors
#
#    Licensed under the Apache License, Version 2.0 (the "License");
#    you may not use this file except in compliance with the License.
#    You may obtain a copy of the License at
#
#        http://www.apache.org/licenses/LICENSE-2.0
#
#    Unless required by applicable law or agreed to in writing, software
#    distributed under the License is distributed on an "AS IS" BASIS,
#    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#    See the License for the specific language governing permissions and
#    limitations under the License.
"""Independent user-equilibrium reference for the Nguyen-Dupuis network.

Path-based formulation: every simple path of every OD pair is enumerated and the Beckmann
objective is minimized over path flows with SLSQP. Nothing here shares code with the C++
Frank-Wolfe solver. The printed values are frozen in nd_exact_ue.hpp.

    python3 nd_exact_ue.py > values.txt
"""
import numpy as np
from scipy.optimize import minimize

LINKS = [(1, 12, 12, 800), (1, 5, 10, 700), (12, 6, 10, 600), (12, 8, 15, 900), (4, 5, 8, 700),
         (5, 6, 12, 500), (6, 7, 6, 300), (7, 8, 8, 400), (4, 9, 12, 600), (5, 9, 12, 600),
         (6, 10, 12, 700), (7, 11, 12, 800), (8, 2, 13, 800), (9, 10, 10, 400), (10, 11, 9, 600),
         (11, 2, 8, 500), (9, 13, 12, 900), (11, 3, 12, 600), (13, 3, 12, 600)]
OD = [(1, 2, 1000.0), (1, 3, 1000.0), (4, 2, 1000.0), (4, 3, 1000.0)]
E = [0.578587674, 0.414455734, 0.390740581, 0.520525908, 0.587787588, 0.469242584, 0.692305679,
     0.573931895, 0.492372761, 0.456847007, 0.437271206, 0.591619883, 0.475428898, 0.323871159,
     0.459217702, 0.595198162, 0.372996692, 0.370180702, 0.51262055]
ALPHA, BETA = 0.15, 4.0

t0 = np.array([l[2] / 60.0 for l in LINKS])
cap0 = np.array([float(l[3]) for l in LINKS])


def simple_paths(o, d):
    out = []

    def rec(u, seen, path):
        if u == d:
            out.append(list(path))
            return
        for i, l in enumerate(LINKS):
            if l[0] == u and l[1] not in seen:
                seen.add(l[1])
                path.append(i)
                rec(l[1], seen, path)
                path.pop()
                seen.discard(l[1])

    rec(o, {o}, [])
    return out


PATHS, OWNER = [], []
for w, (o, d, _) in enumerate(OD):
    for p in simple_paths(o, d):
        PATHS.append(p)
        OWNER.append(w)
A = np.zeros((len(LINKS), len(PATHS)))
for j, p in enumerate(PATHS):
    A[p, j] = 1.0


def travel_time(x, cap):
    return t0 * (1 + ALPHA * (x / cap) ** BETA)


def tstt(cap):
    def objective(f):
        x = A @ f
        return np.sum(t0 * x + t0 * ALPHA * x ** (BETA + 1) / ((BETA + 1) * cap ** BETA))

    def gradient(f):
        return A.T @ travel_time(A @ f, cap)

    cons = [{"type": "eq", "fun": (lambda f, w=w: sum(f[j] for j in range(len(PATHS)) if OWNER[j] == w) - OD[w][2])}
            for w in range(len(OD))]
    f0 = np.zeros(len(PATHS))
    for w in range(len(OD)):
        js = [j for j in range(len(PATHS)) if OWNER[j] == w]
        f0[js] = OD[w][2] / len(js)
    res = minimize(objective, f0, jac=gradient, bounds=[(0, None)] * len(PATHS), constraints=cons,
                   method="SLSQP", options={"ftol": 1e-14, "maxiter": 2000})
    x = A @ res.x
    return float(x @ travel_time(x, cap))


def disrupted(*ids):
    cap = cap0.copy()
    for s in ids:
        cap[s - 1] *= E[s - 1]
    return tstt(cap)


if __name__ == "__main__":
    base = tstt(cap0)
    print(f"baseline {base:.10f}")
    for s in range(1, len(LINKS) + 1):
        print(f"single {s} {disrupted(s):.10f}")
    for s, t in [(16, 19), (2, 17)]:
        print(f"joint {s} {t} {disrupted(s, t):.10f}")
