from fractions import Fraction

import mpmath
import pytest

from alweier.fixedpoints import point_from_coordinates
from alweier.table1 import compare_row, load_table, normalized_points, parse_point, table_levels
from alweier.weierstrass import exceptional_levels


def test_parse_point():
    p = parse_point("1/(1*sqrt(-22))")
    assert (p.x, p.y_squared) == (0, Fraction(1, 22))
    p = parse_point("-6/13 + sqrt(-22)/286")
    assert (p.x, p.y_squared) == (Fraction(-6, 13), Fraction(22, 286**2))
    with pytest.raises(ValueError):
        parse_point("sqrt(-22)")


def test_transcription_covers_the_exceptional_levels():
    table = load_table()
    assert list(table) == exceptional_levels() == table_levels()
    assert len(table) == 40


def test_every_row_matches_up_to_equivalence():
    table = load_table()
    for N, printed in table.items():
        cmp = compare_row(N, printed)
        assert cmp.matched, N
        assert len(printed) == len(cmp.computed)


def test_rows_22_and_37_match_coordinates():
    table = load_table()
    for N in (22, 37):
        computed = {(p.x, p.y_squared) for p in normalized_points(N)}
        for p in table[N]:
            assert (p.x, p.y_squared) in computed
            with mpmath.workdps(30):
                y = mpmath.sqrt(mpmath.mpf(p.y_squared.numerator) / p.y_squared.denominator)
                match = [
                    q for q in normalized_points(N)
                    if abs(mpmath.mpf(q.x.numerator) / q.x.denominator - mpmath.mpf(p.x.numerator) / p.x.denominator) < 1e-12
                    and abs(mpmath.sqrt(mpmath.mpf(q.y_squared.numerator) / q.y_squared.denominator) - y) < 1e-12
                ]
                assert match


def test_printed_heights_are_reproduced():
    table = load_table()
    for N, printed in table.items():
        assert sorted(p.y_squared for p in printed) == sorted(p.y_squared for p in normalized_points(N)), N


def test_row_163_contains_the_quarter_point():
    table = load_table()
    cmp = compare_row(163, table[163])
    target = point_from_coordinates(Fraction(3, 4), Fraction(163, 652**2), 163).key()
    assert target in {p.key() for p in cmp.computed}
    assert len(cmp.computed) == 4


def test_a_wrong_row_is_detected():
    table = load_table()
    assert not compare_row(22, table[22][:1]).matched
    assert not compare_row(22, [table[22][0], table[22][0]]).matched
