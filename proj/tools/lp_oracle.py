#!/usr/bin/env python3
# Copyright 2026 The adfair Authors
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

"""Writes random multiple-task fair LP instances with optima from HiGHS.

The C++ tests compare solve_fair_lp against these objectives.
"""

import argparse
import json

import numpy as np
from scipy.optimize import linprog


def line_metric(rng, n):
    x = np.round(rng.random(n), 6)
    return np.abs(x[:, None] - x[None, :])


def random_instance(rng):
    n = int(rng.integers(2, 6))
    k = int(rng.integers(2, 5))
    c = int(rng.integers(1, k + 1))
    owner = list(range(c)) + list(rng.integers(0, c, k - c))
    categories = [[i for i in range(k) if owner[i] == j] for j in range(c)]
    bids = np.round(rng.random((n, k)), 6)
    bids[rng.random((n, k)) < 0.15] = 0.0
    metrics = [line_metric(rng, n) for _ in range(c)]
    return {
        "users": [f"u{u}" for u in range(n)],
        "k": k,
        "categories": categories,
        "bids": bids.tolist(),
        "metrics": [{"matrix": m.tolist()} for m in metrics],
    }, owner


def fair_opt(doc, owner):
    n, k = len(doc["users"]), doc["k"]
    bids = np.array(doc["bids"])
    rows, rhs = [], []
    for u in range(n):
        r = np.zeros(n * k)
        r[u * k:(u + 1) * k] = 1
        rows.append(r)
        rhs.append(1.0)
    for u in range(n):
        for v in range(n):
            if u == v:
                continue
            for i in range(k):
                r = np.zeros(n * k)
                r[u * k + i] = 1
                r[v * k + i] = -1
                rows.append(r)
                rhs.append(doc["metrics"][owner[i]]["matrix"][u][v])
    res = linprog(-bids.reshape(-1), A_ub=np.array(rows), b_ub=np.array(rhs),
                  bounds=(0, None), method="highs")
    assert res.status == 0
    return -res.fun


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--count", type=int, default=60)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--out", required=True)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)
    cases = []
    for _ in range(args.count):
        doc, owner = random_instance(rng)
        cases.append({"instance": doc, "objective": fair_opt(doc, owner)})
    with open(args.out, "w") as f:
        json.dump({"solver": "highs", "cases": cases}, f, indent=1)


if __name__ == "__main__":
    main()
