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

"""Synthetic ratings file plus its per-slot profiles by one-pass aggregation.

Rows are (user, item, rating, timestamp), tab separated, shuffled in time.
Items 1..100 are kept; timestamps fall into 30-day buckets counted from the
earliest kept rating; empty buckets are skipped.

usage: movielens_oracle.py OUT_DIR
"""
import random
import sys
from collections import defaultdict
from pathlib import Path

ROWS, ITEMS_KEPT, SLOT = 1000, 100, 30 * 86400


def main():
    out = Path(sys.argv[1])
    rng = random.Random(1998)
    start = 874724710
    rows = []
    for _ in range(ROWS):
        user = rng.randint(1, 943)
        item = rng.randint(1, 130)
        rating = rng.randint(1, 5)
        # A quiet stretch between the two spans leaves a bucket empty.
        day = rng.choice([rng.uniform(0, 120), rng.uniform(180, 300)])
        rows.append((user, item, rating, start + int(day * 86400)))
    with open(out / "ml_1000.tsv", "w") as f:
        f.write("user_id\titem_id\trating\ttimestamp\n")
        for r in rows:
            f.write("%d\t%d\t%d\t%d\n" % r)

    kept = [r for r in rows if 1 <= r[1] <= ITEMS_KEPT]
    t0 = min(r[3] for r in kept)
    sums = defaultdict(lambda: [0.0] * ITEMS_KEPT)
    for _, item, rating, ts in kept:
        sums[(ts - t0) // SLOT][item - 1] += rating
    with open(out / "ml_1000_golden.csv", "w") as f:
        f.write("slot," + ",".join(f"file_{i + 1}" for i in range(ITEMS_KEPT)) + "\n")
        for slot in sorted(sums):
            total = sum(sums[slot])
            f.write(f"{slot}," + ",".join(repr(v / total) for v in sums[slot]) + "\n")


if __name__ == "__main__":
    main()
