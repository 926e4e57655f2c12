"""Regenerating and checking the table of W_N fixed points at the exceptional levels."""

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .fixedpoints import HeegnerPoint, enumerate_fixed_points, point_from_coordinates
from .weierstrass import exceptional_levels
from .wronskian import optimize_point

_INVERSE = re.compile(r"1/\((\d+)\*sqrt\(-(\d+)\)\)")
_SHIFTED = re.compile(r"(-?\d+)/(\d+) \+ sqrt\(-(\d+)\)/(\d+)")


@dataclass(frozen=True)
class PrintedPoint:
    text: str
    x: Fraction
    y_squared: Fraction


def default_table_path():
    return Path(__file__).resolve().parent / "data" / "table1.txt"


def parse_point(text: str) -> PrintedPoint:
    """Parse ``1/(k*sqrt(-m))`` or ``p/q + sqrt(-m)/k``.

    1/(k sqrt(-m)) is read in the upper half-plane, as i / (k sqrt(m)).
    """
    text = text.strip()
    m = _INVERSE.fullmatch(text)
    if m:
        k, r = int(m.group(1)), int(m.group(2))
        return PrintedPoint(text, Fraction(0), Fraction(1, k * k * r))
    m = _SHIFTED.fullmatch(text)
    if m:
        p, q, r, k = (int(v) for v in m.groups())
        return PrintedPoint(text, Fraction(p, q), Fraction(r, k * k))
    raise ValueError(f"cannot parse point {text!r}")


def load_table(path=None) -> dict:
    """Level -> list of PrintedPoint, in file order."""
    table = {}
    for line in Path(path or default_table_path()).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        level, rest = line.split("|")
        table[int(level)] = [parse_point(t) for t in rest.split(";")]
    return table


def normalized_points(N: int) -> list:
    """Enumerated fixed points after exact height optimization."""
    return [optimize_point(pt)[0] for pt in enumerate_fixed_points(N)]


@dataclass(frozen=True)
class RowComparison:
    N: int
    printed: list  # HeegnerPoint per printed entry
    computed: list  # optimized HeegnerPoint per enumerated point
    matched: bool  # same set of Gamma_0(N)-classes, no duplicates


def compare_row(N: int, printed) -> RowComparison:
    """Compare printed points with the enumeration up to Gamma_0(N)-equivalence.

    Two W_N fixed points of level N are equivalent exactly when their
    forms share (d, beta) and reduce to the same SL2(Z) form.
    """
    printed_pts = [point_from_coordinates(p.x, p.y_squared, N) for p in printed]
    computed = normalized_points(N)
    pkeys = [p.key() for p in printed_pts]
    ckeys = [p.key() for p in computed]
    ok = len(set(pkeys)) == len(pkeys) == len(ckeys) and set(pkeys) == set(ckeys)
    return RowComparison(N, printed_pts, computed, ok)


def format_point(pt: HeegnerPoint) -> str:
    return f"{pt.x} + i*sqrt({pt.y_squared})"


def table_levels():
    return exceptional_levels()
