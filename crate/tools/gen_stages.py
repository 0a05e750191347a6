#!/usr/bin/env python3
"""Regenerates the bundled stage files under stages/.

Layouts are straight wall bars on a 40x30 grid; object placement is drawn
from a fixed per-stage seed so the output is reproducible.
"""
import json
import math
import random
from pathlib import Path

W, H = 40, 30
SPAWNS = [(18, 14), (21, 14), (18, 16), (21, 16)]

# (x0, y0, x1, y1) inclusive bars, horizontal or vertical.
BARS = {
    1: [(6, 8, 14, 8), (25, 21, 33, 21), (30, 3, 30, 9), (9, 19, 9, 25)],
    2: [(4, 6, 12, 6), (27, 6, 35, 6), (4, 23, 12, 23), (27, 23, 35, 23), (19, 3, 19, 9)],
    3: [(10, 4, 10, 11), (29, 18, 29, 25), (14, 22, 22, 22), (17, 7, 25, 7), (33, 10, 37, 10)],
    4: [(5, 10, 13, 10), (26, 19, 34, 19), (13, 21, 13, 27), (26, 2, 26, 8), (2, 16, 7, 16), (32, 12, 37, 12)],
}
CAMPS = {1: [(19, 11), (4, 27)], 2: [(20, 12), (36, 27)], 3: [(19, 18), (3, 3)], 4: [(20, 11), (36, 3), (3, 27)]}


def bar_cells(x0, y0, x1, y1):
    return [(x, y) for x in range(x0, x1 + 1) for y in range(y0, y1 + 1)]


def stage(n):
    rng = random.Random(1000 + n)
    walls = sorted({c for b in BARS[n] for c in bar_cells(*b)})
    taken = set(walls) | set(SPAWNS) | set(CAMPS[n])
    center = (19.5, 15)

    def place(count, min_dist=3.0, max_dist=99.0):
        out = []
        while len(out) < count:
            c = (rng.randrange(1, W - 1), rng.randrange(1, H - 1))
            d = math.dist((c[0] + 0.5, c[1] + 0.5), center)
            if c in taken or d < min_dist or d > max_dist:
                continue
            # keep a free ring around walls so objects are reachable by sliding
            if any((c[0] + dx, c[1] + dy) in walls for dx in (-1, 0, 1) for dy in (-1, 0, 1)):
                continue
            taken.add(c)
            out.append(c)
        return out

    goals = {"grocery": 4 + n, "treat": 2 + n, "disinfect": 3 + n, "crowd": 2 + n}
    vaccine_target = 2 * n
    pickups = []
    for kind, count in [
        ("vaccine_part", vaccine_target + 1),
        ("grocery", goals["grocery"] + 2),
        ("medicine_refill", 2),
        ("disinfectant_refill", 2),
        ("health_vitamin", 4),
        ("mask", 5),
        ("sanitizer", 3),
    ]:
        for (x, y) in place(count):
            pickups.append({"kind": kind, "x": x, "y": y})
    viruses = [{"x": x, "y": y, "strain": n} for (x, y) in place(goals["disinfect"] + 1, min_dist=10.0)]
    crowds = [list(c) for c in place(goals["crowd"] + 1, min_dist=6.0)]
    civilians = [list(c) for c in place(goals["treat"] + 1, min_dist=4.0)]
    return {
        "stage_index": n,
        "strain_level": n,
        "vaccine_target": vaccine_target,
        "goals": goals,
        "grid": {"width": W, "height": H},
        "walls": [list(c) for c in walls],
        "spawns": [list(c) for c in SPAWNS],
        "camps": [list(c) for c in CAMPS[n]],
        "pickups": pickups,
        "viruses": viruses,
        "crowds": crowds,
        "civilians": civilians,
    }


def main():
    out = Path(__file__).resolve().parent.parent / "stages"
    out.mkdir(exist_ok=True)
    for n in range(1, 5):
        doc = stage(n)
        (out / f"stage_{n}.json").write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    main()
