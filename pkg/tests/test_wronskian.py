import random
from fractions import Fraction
from math import gcd

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from alweier.arith import xgcd
from alweier.fixedpoints import enumerate_fixed_points, point_from_coordinates, tau_complex
from alweier.table1 import load_table
from alweier.wronskian import (
    BasisError,
    TruncationError,
    WronskianVerdict,
    best_representative,
    derivative_row,
    highest_image,
    load_basis,
    optimize_point,
    verdict,
    verdict_at,
    wronskian_det,
)

from conftest import FIXTURE_LEVELS

NOT_W = WronskianVerdict.NOT_WEIERSTRASS
LIKELY_W = WronskianVerdict.LIKELY_WEIERSTRASS


def write_basis(path, level, genus, B, rows):
    text = f"# test file\nlevel {level} genus {genus} truncation {B}\n"
    text += "".join(",".join(str(v) for v in r) + "\n" for r in rows)
    path.write_text(text)
    return path


def random_gamma0(N, rng, bound=50):
    """Random element of Gamma_0(N) with entries bounded by ``bound``."""
    while True:
        c = N * rng.choice([k for k in range(-(bound // N), bound // N + 1) if k])
        d = rng.randint(-bound, bound)
        if gcd(c, d) != 1:
            continue
        _, u, v = xgcd(d, c)
        a, b = u, -v
        if max(abs(a), abs(b)) <= bound:
            return a, b, c, d


# ---- loading -----------------------------------------------------------

def test_load_round_trip(bases, tmp_path):
    b = bases[22]
    assert (b.level, b.genus, b.truncation) == (22, 2, 400)
    path = write_basis(tmp_path / "s2_22.txt", 22, 2, 200, [r[:200] for r in b.coeffs])
    again = load_basis(path)
    assert again.coeffs == tuple(r[:200] for r in b.coeffs)
    assert load_basis(path, truncation=50).truncation == 50


def test_load_errors(bases, tmp_path):
    rows = [r[:200] for r in bases[22].coeffs]
    with pytest.raises(BasisError, match="genus"):
        load_basis(write_basis(tmp_path / "a.txt", 22, 3, 200, rows + [rows[0]]))
    with pytest.raises(BasisError, match="dependent"):
        load_basis(write_basis(tmp_path / "b.txt", 22, 2, 200, [rows[0], rows[0]]))
    with pytest.raises(BasisError, match="below"):
        load_basis(write_basis(tmp_path / "c.txt", 22, 2, 15, [r[:15] for r in rows]))
    with pytest.raises(BasisError, match="header"):
        (tmp_path / "d.txt").write_text("level 22 genus 2\n1,2\n")
        load_basis(tmp_path / "d.txt")
    with pytest.raises(BasisError):
        (tmp_path / "e.txt").write_text("level 22 genus 2 truncation 20\n" + "1,x\n" * 2)
        load_basis(tmp_path / "e.txt")
    with pytest.raises(BasisError):
        load_basis(write_basis(tmp_path / "f.txt", 22, 2, 200, [rows[0], rows[1][:199]]))


def test_fixture_bases_are_cusp_form_bases(bases):
    for N, b in bases.items():
        # leading coefficients form an echelon basis scaled to integers
        assert all(any(r) for r in b.coeffs)
        assert b.genus == len(b.coeffs) and b.truncation == 400


# ---- representatives ---------------------------------------------------

def test_best_representative_examples():
    with mpmath.workdps(40):
        t, gamma = best_representative(mpmath.mpc(0, 1), 22)
        assert gamma == (1, 0, 0, 1) and t == mpmath.mpc(0, 1)
        y = mpmath.sqrt(88) / 44
        t, gamma = best_representative(mpmath.mpc(0, y), 22)
        assert gamma == (1, 0, 0, 1)
        tau = mpmath.mpf(-6) / 13 + 1j * mpmath.sqrt(22) / 286
        t, _ = best_representative(tau, 22)
        assert t.imag >= mpmath.sqrt(22) / 286
    with pytest.raises(ValueError):
        best_representative(mpmath.mpc(0.3, -0.1), 22)


def _exhaustive_min(F, N):
    """Smallest F(d, -c) = A |c tau + d|^2 over N | c, 0 < |c| <= 3N, all useful d."""
    A, B, C = F
    best = A  # identity
    for c in range(N, 3 * N + 1, N):
        for s in (1, -1):
            cc = s * c
            centre = Fraction(cc * B, 2 * A)  # -c x
            for d in range(int(centre) - 3, int(centre) + 4):
                if gcd(cc, d) == 1:
                    best = min(best, F(d, -cc))
    return best


def test_representative_optimality_on_table_points():
    table = load_table()
    checked = 0
    for N, printed in table.items():
        if N > 60:
            continue
        for p in printed:
            pt = point_from_coordinates(p.x, p.y_squared, N)
            best, gamma = optimize_point(pt)
            a, b, c, d = gamma
            assert a * d - b * c == 1 and c % N == 0
            # height of gamma * tau is y / |c tau + d|^2 = y A / F(d, -c)
            value = pt.form(d, -c)
            assert value == _exhaustive_min(pt.form, N)
            assert best.y_squared == pt.y_squared * Fraction(pt.form.a, value) ** 2
            assert -best.form.a <= best.form.b < best.form.a
            with mpmath.workdps(40):
                tau = tau_complex(pt, 40)
                t, g2 = best_representative(tau, N)
                assert abs(t.imag - tau_complex(best, 40).imag) < mpmath.mpf(10) ** -30
            checked += 1
    assert checked > 20


@settings(max_examples=200, deadline=None)
@given(
    st.sampled_from(FIXTURE_LEVELS),
    st.floats(-3, 3, allow_nan=False),
    st.floats(1e-3, 2, allow_nan=False),
)
def test_height_monotonicity(N, x, y):
    with mpmath.workdps(30):
        tau = mpmath.mpc(x, y)
        t, (a, b, c, d) = best_representative(tau, N)
        assert a * d - b * c == 1 and c % N == 0
        assert t.imag >= tau.imag * (1 - mpmath.mpf(10) ** -20)
        assert abs(t - (a * tau + b) / (c * tau + d)) < mpmath.mpf(10) ** -20
        assert -0.5 < t.real <= 0.5 + 1e-20


def test_highest_image_is_at_least_as_high(bases):
    for N in FIXTURE_LEVELS:
        for pt in enumerate_fixed_points(N):
            top, q = highest_image(pt)
            assert top.y_squared >= optimize_point(pt)[0].y_squared
            assert top.N == N


# ---- series ------------------------------------------------------------

def test_derivative_row_at_large_height(bases):
    basis = bases[22]
    with mpmath.workdps(40):
        row = derivative_row(basis, 0, mpmath.mpc(0, 10), g=1)
        a1 = basis.coeffs[0][0]
        lead = a1 * mpmath.exp(-20 * mpmath.pi)
        assert abs(row[0].mid - lead) <= 2 * abs(a1) * mpmath.exp(-20 * mpmath.pi)
        assert abs(row[0].mid - lead) <= abs(a1) * mpmath.exp(-39 * mpmath.pi)


def test_derivative_row_matches_numerical_differentiation(bases):
    basis = bases[33]
    B = 120
    tau = mpmath.mpc("0.137", "0.31")
    with mpmath.workdps(50):
        row = derivative_row(basis, 1, tau, trunc=B)
        coeffs = basis.coeffs[1][:B]

        def f(z):
            q = mpmath.exp(2j * mpmath.pi * z)
            return sum(a * q**n for n, a in enumerate(coeffs, start=1))

        for j, ball in enumerate(row):
            ref = mpmath.diff(f, tau, j) / mpmath.factorial(j)
            assert abs(ball.mid - ref) <= ball.rad + mpmath.mpf(10) ** -30


def test_radius_and_recomputation_at_n22(bases):
    basis = bases[22]
    pt = point_from_coordinates(0, Fraction(1, 22), 22)
    with mpmath.workdps(60):
        tau = tau_complex(pt, 60)
        for i in range(basis.genus):
            lo = derivative_row(basis, i, tau, trunc=200)
            hi = derivative_row(basis, i, tau, trunc=400)
            for a, b in zip(lo, hi):
                assert a.rad < mpmath.mpf(10) ** -20
                assert abs(a.mid - b.mid) <= a.rad + b.rad


def test_derivative_row_errors(bases):
    basis = bases[22]
    with pytest.raises(ValueError):
        derivative_row(basis, 0, mpmath.mpc(0.1, 0))
    with pytest.raises(TruncationError):
        derivative_row(basis, 0, mpmath.mpc(0, 0.001), trunc=30)
    with pytest.raises(TruncationError):
        derivative_row(basis, 0, mpmath.mpc(0, 0.05), trunc=60, tol=mpmath.mpf(10) ** -30)
    with pytest.raises(BasisError):
        derivative_row(basis, 0, mpmath.mpc(0, 1), trunc=401)


# ---- determinants and verdicts -------------------------------------------

def test_det_examples(bases):
    pt = point_from_coordinates(0, Fraction(1, 22), 22)
    ball = wronskian_det(bases[22], tau_complex(pt, 60), trunc=200)
    assert not ball.contains_zero()
    pt = point_from_coordinates(Fraction(1, 2), Fraction(37, 74**2), 37)
    res = verdict(bases[37], pt, trunc=200, use_atkin_lehner=False)
    assert not res.det.contains_zero() and res.verdict is NOT_W
    for pt in enumerate_fixed_points(35):
        res = verdict(bases[35], pt, trunc=200)
        assert res.det.contains_zero()
        assert abs(res.det.mid) < mpmath.mpf(10) ** -10 * res.hadamard


def test_verdict_examples(bases):
    for pt in enumerate_fixed_points(22):
        assert verdict(bases[22], pt).verdict is NOT_W
    for pt in enumerate_fixed_points(35):
        assert verdict(bases[35], pt).verdict is LIKELY_W
    with pytest.raises(ValueError):
        verdict(bases[22], enumerate_fixed_points(37)[0])


def test_verdict_invariance_under_gamma0(bases):
    rng = random.Random(11)
    for N in FIXTURE_LEVELS:
        for pt in enumerate_fixed_points(N):
            expected = verdict(bases[N], pt).verdict
            assert expected in (NOT_W, LIKELY_W)
            for _ in range(5):
                a, b, c, d = random_gamma0(N, rng)
                with mpmath.workdps(90):
                    tau = tau_complex(pt, 90)
                    moved = (a * tau + b) / (c * tau + d)
                    res = verdict_at(bases[N], moved, digits=80, trunc=200)
                assert res.verdict is expected, (N, pt.form, (a, b, c, d))


def test_truncation_soundness(bases):
    for N in (22, 28, 30, 33, 37):
        for pt in enumerate_fixed_points(N):
            lo = verdict(bases[N], pt, trunc=200)
            hi = verdict(bases[N], pt, trunc=400)
            assert lo.verdict is hi.verdict is NOT_W
            assert abs(lo.det.mid - hi.det.mid) <= lo.det.rad + hi.det.rad
            # the tail part shrinks; once it is gone the rounding part (which
            # grows slowly with B) is all that is left
            assert hi.det.rad <= lo.det.rad or hi.det.rad < mpmath.mpf(10) ** -50


def test_basis_change_invariance(bases):
    rng = random.Random(5)
    for N in FIXTURE_LEVELS:
        g = bases[N].genus
        m = [[int(i == j) for j in range(g)] for i in range(g)]
        for _ in range(6):
            i, j = rng.sample(range(g), 2)
            k = rng.choice([-2, -1, 1, 2])
            m[i] = [x + k * y for x, y in zip(m[i], m[j])]
        changed = bases[N].combine(m)
        for pt in enumerate_fixed_points(N):
            assert verdict(changed, pt).verdict is verdict(bases[N], pt).verdict
