"""Regenerate the weight-2 cusp form basis fixtures with PARI/GP.

Needs cypari2, which is not a runtime dependency of the package:

    pip install cypari2
    python tools/make_bases.py 22 28 30 33 35 37 --trunc 400
"""
import argparse
from fractions import Fraction
from math import lcm
from pathlib import Path

import cypari2

OUT = Path(__file__).resolve().parents[1] / "src" / "alweier" / "data" / "bases"


def integral_rows(pari, level, trunc):
    mf = pari(f"mfinit([{level}, 2], 1)")
    basis = pari.mfbasis(mf)
    rows = []
    for f in basis:
        coeffs = [Fraction(int(c.numerator()), int(c.denominator()))
                  for c in pari.mfcoefs(f, trunc)]
        assert coeffs[0] == 0
        den = lcm(*(c.denominator for c in coeffs))
        rows.append([int(c * den) for c in coeffs[1:]])
    return rows, pari.version()


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("levels", nargs="+", type=int)
    parser.add_argument("--trunc", type=int, default=400)
    args = parser.parse_args()
    pari = cypari2.Pari()
    OUT.mkdir(parents=True, exist_ok=True)
    for level in args.levels:
        rows, version = integral_rows(pari, level, args.trunc)
        lines = [
            f"# S_2(Gamma_0({level})) basis from PARI/GP {version} mfbasis(mfinit([{level},2],1)),"
            " rows scaled to clear denominators",
            f"level {level} genus {len(rows)} truncation {args.trunc}",
        ]
        lines += [",".join(map(str, r)) for r in rows]
        (OUT / f"s2_{level}.txt").write_text("\n".join(lines) + "\n")
        print(level, len(rows))


if __name__ == "__main__":
    main()
