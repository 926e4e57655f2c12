"""Numerical Wronskian test for Weierstrass points at W_N fixed points.

A point [tau] of X_0(N) is a Weierstrass point exactly when the g x g
matrix A[i][j] = f_i^(j)(tau) / j! built from a basis of S_2(Gamma_0(N))
is singular. Entries come from the q-expansions at infinity,

    f^(j)(tau) / j! = sum_n (2 pi i n)^j / j! * a(n) q^n,

so tau is first moved to a Gamma_0(N)-equivalent point of maximal height.
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd
from pathlib import Path

import mpmath

from .arith import exact_divisors, xgcd
from .balls import Ball, det, hadamard_bound
from .fixedpoints import HeegnerPoint, apply_atkin_lehner, atkin_lehner_matrix, tau_complex
from .quadforms import UnimodularMatrix, apply
from .weierstrass import genus0

DEFAULT_DIGITS = 60
LIKELY_ZERO_RATIO = mpmath.mpf("1e-8")


class BasisError(ValueError):
    pass


class TruncationError(ArithmeticError):
    """The series tail is too large: increase the truncation or the height."""


@dataclass(frozen=True)
class CuspFormBasis:
    level: int
    genus: int
    truncation: int
    coeffs: tuple  # genus rows of a(1), ..., a(truncation)

    def combine(self, matrix):
        """Basis given by integer combinations: row i = sum_k matrix[i][k] f_k."""
        rows = tuple(
            tuple(sum(m * row[n] for m, row in zip(mrow, self.coeffs)) for n in range(self.truncation))
            for mrow in matrix
        )
        return _checked(self.level, self.genus, self.truncation, rows)

    def truncated(self, B):
        if B > self.truncation:
            raise BasisError(f"basis only has {self.truncation} coefficients, {B} requested")
        return _checked(self.level, self.genus, B, tuple(r[:B] for r in self.coeffs))


def _rank(rows):
    """Rank over Q by fraction-free elimination."""
    m = [list(r) for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank]
        for i in range(rank + 1, len(m)):
            if m[i][col]:
                f = m[i][col]
                m[i] = [p[col] * x - f * y for x, y in zip(m[i], p)]
                g = 0
                for x in m[i]:
                    g = gcd(g, x)
                if g > 1:
                    m[i] = [x // g for x in m[i]]
        rank += 1
        col += 1
    return rank


def _checked(level, genus, B, rows):
    expected = genus0(level).g0
    if genus != expected or len(rows) != genus:
        raise BasisError(f"level {level} has genus {expected}, basis has {len(rows)} forms (header {genus})")
    if any(len(r) != B for r in rows):
        raise BasisError(f"every row must have {B} coefficients")
    if B < 10 * genus:
        raise BasisError(f"truncation {B} is below 10 * genus = {10 * genus}")
    if _rank(rows) != genus:
        raise BasisError("basis forms are linearly dependent")
    return CuspFormBasis(level, genus, B, rows)


def load_basis(path, truncation=None) -> CuspFormBasis:
    """Read a basis file.

    Format: optional ``#`` comment lines, a header
    ``level N genus g truncation B``, then g lines of B comma-separated
    integers a_i(1), ..., a_i(B).
    """
    lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise BasisError(f"{path}: empty basis file")
    head = lines[0].split()
    if len(head) != 6 or head[0::2] != ["level", "genus", "truncation"]:
        raise BasisError(f"{path}: bad header {lines[0]!r}")
    try:
        level, genus, B = (int(v) for v in head[1::2])
        rows = tuple(tuple(int(v) for v in ln.split(",")) for ln in lines[1:])
    except ValueError as exc:
        raise BasisError(f"{path}: {exc}") from None
    basis = _checked(level, genus, B, rows)
    if truncation is not None and truncation != B:
        basis = basis.truncated(truncation)
    return basis


def basis_path(directory, level):
    return Path(directory) / f"s2_{level}.txt"


def default_basis_dir():
    return Path(__file__).resolve().parent / "data" / "bases"


def _complete(c, d):
    """(a, b) with a d - b c = 1."""
    g, u, v = xgcd(d, c)
    # d u + c v = 1  ->  a = u, b = -v
    return u, -v


def best_representative(tau, N: int):
    """Gamma_0(N)-equivalent point of maximal height.

    Scans bottom rows (c, d) with N | c, |c| <= ceil(1 / Im tau) and d in
    [floor(-1 - c x), floor(1 - c x)], keeping the smallest |c tau + d|
    (ties: smaller |c|, then smaller |d|). The matrix is completed to
    gamma in Gamma_0(N) and followed by the translation that puts the real
    part in (-1/2, 1/2]. Returns ``(gamma * tau, gamma)``.
    """
    tau = mpmath.mpc(tau)
    x, y = tau.real, tau.imag
    if y <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    tol = mpmath.ldexp(1, 20 - mpmath.mp.prec)
    best, best_key = (0, 1), (mpmath.mpf(1), 0, 1)
    m = int(mpmath.ceil(1 / y))
    fx, fy = float(x), float(y)
    for c in range(N, m + 1, N):
        # window [floor(-1 - cx), floor(1 - cx)], widened by one against float
        # rounding; the extra d have |c tau + d| >= 1 and never win
        lo = math.floor(-1 - c * fx) - 1
        for d in range(lo, lo + 4):
            if gcd(c, d) != 1:
                continue
            # cheap double-precision screen; near-ties are decided at full precision
            if abs(complex(c * fx + d, c * fy)) > float(best_key[0]) * 1.001:
                continue
            v = abs(c * tau + d)
            key = (v, c, abs(d))
            if v < best_key[0] * (1 - tol) or (v <= best_key[0] * (1 + tol) and (c, abs(d)) < best_key[1:]):
                best, best_key = (c, d), key
    c, d = best
    a, b = _complete(c, d)
    t = (a * tau + b) / (c * tau + d)
    k = int(mpmath.ceil(t.real - mpmath.mpf(1) / 2))
    a, b = a - k * c, b - k * d
    return t - k, (a, b, c, d)


def optimize_point(pt: HeegnerPoint):
    """Exact counterpart of ``best_representative`` on the level-N form.

    For tau the root of [A, B, C], |c tau + d|^2 = F(d, -c) / A, so the
    scan minimizes an integer. Returns ``(point, gamma)`` where point is
    the form attached to gamma * tau with B in [-A, A), i.e. real part in
    (-1/2, 1/2].
    """
    F = pt.form
    A = F.a
    best, best_key = (0, 1), (A, 0, 1)
    c = pt.N
    # c^2 y^2 <= 1 with y^2 = d / (4 A^2)
    while c * c * pt.d <= 4 * A * A:
        cx = Fraction(-c * F.b, 2 * A)
        for d in range(math.floor(-1 - cx), math.floor(1 - cx) + 1):
            if gcd(c, d) != 1:
                continue
            key = (F(d, -c), c, abs(d))
            if key < best_key:
                best, best_key = (c, d), key
        c += pt.N
    c, d = best
    a, b = _complete(c, d)
    # the form of gamma * tau is F o gamma^-1, gamma^-1 = (d, -b; -c, a)
    g = apply(F, UnimodularMatrix(d, -b, -c, a))
    # F o (1, k; 0, 1) moves the root by -k
    k = -((g.a + g.b) // (2 * g.a))
    g = apply(g, UnimodularMatrix(1, k, 0, 1))
    return HeegnerPoint(g, pt.d, pt.N, pt.beta), (a - k * c, b - k * d, c, d)


def _divisor_counts(B):
    counts = [0] * (B + 1)
    for i in range(1, B + 1):
        for j in range(i, B + 1, i):
            counts[j] += 1
    return counts


def coefficient_constant(row):
    """C with |a(n)| <= C n d(n) for the stored coefficients."""
    counts = _divisor_counts(len(row))
    return max(Fraction(abs(a), n * counts[n]) for n, a in enumerate(row, start=1))


def tail_bound(C, r, B, j):
    """Bound for sum_{n > B} (2 pi n)^j / j! * C n d(n) r^n, using d(n) <= 2 sqrt(n)."""
    k = j + mpmath.mpf(3) / 2
    rho = (1 + mpmath.mpf(1) / (B + 1)) ** k * r
    if rho >= 1:
        raise TruncationError(f"tail does not contract at truncation {B} (ratio {mpmath.nstr(rho, 5)})")
    lead = 2 * mpmath.mpf(C.numerator) / C.denominator * (B + 1) ** k * r ** (B + 1) / (1 - rho)
    return lead * (2 * mpmath.pi) ** j / mpmath.factorial(j)


def derivative_row(basis: CuspFormBasis, i: int, tau, g=None, trunc=None, tol=None):
    """Balls around f_i^(j)(tau) / j! for j = 0, ..., g - 1.

    ``i`` is 0-based. The radius covers the series tail beyond ``trunc``
    and the rounding error of the partial sum. Raises TruncationError when
    the tail bound is infinite or exceeds ``tol``.
    """
    tau = mpmath.mpc(tau)
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    g = basis.genus if g is None else g
    B = basis.truncation if trunc is None else trunc
    if B > basis.truncation:
        raise BasisError(f"basis only has {basis.truncation} coefficients, {B} requested")
    coeffs = basis.coeffs[i][:B]
    two_pi_i = 2j * mpmath.pi
    q = mpmath.exp(two_pi_i * tau)
    r = mpmath.exp(-2 * mpmath.pi * tau.imag) * (1 + mpmath.ldexp(1, 4 - mpmath.mp.prec))
    sums = [mpmath.mpc(0)] * g
    abs_sums = [mpmath.mpf(0)] * g
    qn = mpmath.mpc(1)
    for n, a in enumerate(coeffs, start=1):
        qn *= q
        if not a:
            continue
        base = a * qn
        w = mpmath.mpc(1)
        for j in range(g):
            term = base * w
            sums[j] += term
            abs_sums[j] += abs(term)
            w = w * two_pi_i * n / (j + 1)
    C = coefficient_constant(coeffs)
    ulp = mpmath.ldexp(1, 4 - mpmath.mp.prec)
    out = []
    for j in range(g):
        tail = tail_bound(C, r, B, j) if C else mpmath.mpf(0)
        if tol is not None and tail > tol:
            raise TruncationError(f"tail bound {mpmath.nstr(tail, 5)} exceeds {tol} (j = {j})")
        rounding = ulp * (B + g + 4) * abs_sums[j]
        out.append(Ball(sums[j], tail + rounding))
    return out


def derivative_matrix(basis: CuspFormBasis, tau, trunc=None, tol=None):
    return [derivative_row(basis, i, tau, trunc=trunc, tol=tol) for i in range(basis.genus)]


def wronskian_det(basis: CuspFormBasis, tau, trunc=None, digits=DEFAULT_DIGITS) -> Ball:
    """Ball containing det [f_i^(j)(tau) / j!]."""
    with mpmath.workdps(digits):
        return det(derivative_matrix(basis, tau, trunc=trunc))


class WronskianVerdict(str, Enum):
    NOT_WEIERSTRASS = "NotWeierstrass"
    LIKELY_WEIERSTRASS = "LikelyWeierstrass"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class WronskianResult:
    tau: object  # evaluation point, mpc
    via_q: int  # W_Q applied before optimizing (1 = none)
    det: Ball
    hadamard: object
    verdict: WronskianVerdict

    def as_dict(self, digits=20):
        return {
            "tau": [mpmath.nstr(self.tau.real, digits), mpmath.nstr(self.tau.imag, digits)],
            "via_atkin_lehner": self.via_q,
            "det_mid": [mpmath.nstr(self.det.mid.real, digits), mpmath.nstr(self.det.mid.imag, digits)],
            "det_rad": mpmath.nstr(self.det.rad, 6),
            "hadamard": mpmath.nstr(self.hadamard, 6),
            "verdict": self.verdict.value,
        }


def classify_det(ball: Ball, hadamard) -> WronskianVerdict:
    if not ball.contains_zero():
        return WronskianVerdict.NOT_WEIERSTRASS
    if abs(ball.mid) < LIKELY_ZERO_RATIO * hadamard:
        return WronskianVerdict.LIKELY_WEIERSTRASS
    return WronskianVerdict.INCONCLUSIVE


def _apply_matrix(m, tau):
    a, b, c, d = m
    return (a * tau + b) / (c * tau + d)


def evaluation_point(tau, N: int, use_atkin_lehner=True):
    """Highest point among the optimized images of tau under W_Q, Q || N.

    Each W_Q is an automorphism of X_0(N), so [tau] is a Weierstrass point
    exactly when [W_Q tau] is. Returns ``(tau', Q)``; Q = 1 means tau
    itself was optimized.
    """
    # W_Q is defined on classes, so map an already optimized representative
    tau, _ = best_representative(mpmath.mpc(tau), N)
    qs = exact_divisors(N) if use_atkin_lehner else [1]
    best, best_q = None, 1
    tol = mpmath.ldexp(1, 20 - mpmath.mp.prec)
    for Q in qs:
        image = tau if Q == 1 else _apply_matrix(atkin_lehner_matrix(Q, N), tau)
        t, _ = best_representative(image, N)
        if best is None or t.imag > best.imag * (1 + tol):
            best, best_q = t, Q
    return best, best_q


def verdict_at(basis: CuspFormBasis, tau, digits=DEFAULT_DIGITS, trunc=None, use_atkin_lehner=True):
    """Wronskian verdict at an arbitrary tau in the upper half-plane."""
    with mpmath.workdps(digits):
        t, q = evaluation_point(tau, basis.level, use_atkin_lehner)
        rows = derivative_matrix(basis, t, trunc=trunc)
        ball = det(rows)
        had = hadamard_bound(rows)
        return WronskianResult(t, q, ball, had, classify_det(ball, had))


def default_truncation(basis: CuspFormBasis) -> int:
    return min(basis.truncation, max(200, 20 * basis.genus))


def highest_image(pt: HeegnerPoint, use_atkin_lehner=True):
    """Exact version of ``evaluation_point`` for a W_N fixed point.

    Returns ``(point, Q)`` with point the optimized image of maximal height
    (smallest Q on ties).
    """
    best, best_q = None, 1
    for Q in exact_divisors(pt.N) if use_atkin_lehner else [1]:
        cand, _ = optimize_point(apply_atkin_lehner(pt, Q))
        if best is None or cand.y_squared > best.y_squared:
            best, best_q = cand, Q
    return best, best_q


def verdict(basis: CuspFormBasis, pt: HeegnerPoint, digits=DEFAULT_DIGITS, trunc=None, use_atkin_lehner=True):
    """Wronskian verdict for a W_N fixed point.

    The series are summed at the highest optimized representative among
    the W_Q images of the point.
    """
    if basis.level != pt.N:
        raise ValueError(f"basis level {basis.level} does not match point level {pt.N}")
    if trunc is None:
        trunc = default_truncation(basis)
    target, q = highest_image(pt, use_atkin_lehner)
    with mpmath.workdps(digits):
        tau = tau_complex(target, digits)
        rows = derivative_matrix(basis, tau, trunc=trunc)
        ball = det(rows)
        had = hadamard_bound(rows)
        return WronskianResult(tau, q, ball, had, classify_det(ball, had))
