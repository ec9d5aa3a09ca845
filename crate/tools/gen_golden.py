#!/usr/bin/env python3
"""Hand-encoded strong-type boundedness maps, evaluated in exact rationals.

Writes one file per gamma to crates/core/tests/golden/. Row j holds the
statuses for 1/q = j/N and 1/p = i/N, i = 0..N, as a string over B, U, ?.
"""

import argparse
from fractions import Fraction
from pathlib import Path

GAMMAS = ["0.25", "0.5", "0.6", "0.75", "1", "1.5"]


def status(g: Fraction, u: Fraction, v: Fraction) -> str:
    if g > 1:
        return "B" if v <= u else "U"
    if g == 1:
        return "B" if v <= u and v != 1 else "U"
    c = 1 - g
    if u == c and 0 < v < min(g, c):
        return "?"
    if v <= u and v < g and u > c:
        return "B"
    if u == c and v == 0:
        return "B"
    return "U"


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--grid", type=int, default=200)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "crates/core/tests/golden")
    args = ap.parse_args()
    n = args.grid
    args.out.mkdir(parents=True, exist_ok=True)
    for gs in GAMMAS:
        g = Fraction(gs)
        lines = ["j,row"]
        for j in range(n + 1):
            v = Fraction(j, n)
            lines.append(f"{j}," + "".join(status(g, Fraction(i, n), v) for i in range(n + 1)))
        (args.out / f"strong_gamma_{gs}.csv").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
