"""Deciding when fixed points of W_Q are Weierstrass points of X_0(N).

The executable certificate is nu(Q; N) > 4: by Schoeneberg's criterion
with p = 2 the fixed points are then Weierstrass points. The closed-form
clauses for Q in {2, 3, 4} and for Q > 4 under the elliptic condition are
implemented as separate predicates so they can be checked against it.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd, prod

from .arith import divisors, euler_phi, is_exact_divisor, is_squarefree, kronecker, prime_divisors
from .fixedpoints import elliptic_condition, nu, nu_elliptic_case

S1 = frozenset({3, 4, 7, 8, 11, 12, 16, 19, 27, 28, 43, 67, 163})
S2 = frozenset({5, 6, 8, 9, 10, 12, 13, 16, 18, 22, 25, 28, 37, 58})
S3 = frozenset({11, 19, 23, 27, 31, 43, 67, 163})
S4 = frozenset({
    14, 17, 20, 21, 24, 30, 32, 33, 34, 36, 39, 40, 42, 45, 46, 48, 49,
    52, 55, 57, 60, 63, 64, 70, 72, 73, 78, 82, 85, 88, 93, 97, 100, 102,
    112, 130, 133, 142, 148, 177, 190, 193, 232, 253,
})
CLASS_NUMBER_SETS = {1: S1, 2: S2, 3: S3, 4: S4}

_EXCEPTIONAL = (
    22, 28, 30, 33, 34, 37, 40, 42, 43, 45, 46, 48, 52, 57, 58, 60, 64, 67,
    70, 72, 73, 78, 82, 85, 88, 93, 97, 100, 102, 112, 130, 133, 142, 148,
    163, 177, 190, 193, 232, 253,
)


def exceptional_levels() -> list:
    """Levels where the fixed points of W_N are not settled by nu(N) > 4."""
    return list(_EXCEPTIONAL)


@dataclass(frozen=True)
class GenusData:
    N: int
    g0: int
    index_mu: int
    e2: int
    e3: int
    cusps: int


def genus0(N: int) -> GenusData:
    """Genus of X_0(N) with the index, elliptic point and cusp counts."""
    if N < 1:
        raise ValueError("N must be positive")
    ps = prime_divisors(N)
    mu = N
    for p in ps:
        mu = mu // p * (p + 1)
    e2 = 0 if N % 4 == 0 else prod(1 + kronecker(-4, p) for p in ps)
    e3 = 0 if N % 9 == 0 else prod(1 + kronecker(-3, p) for p in ps)
    cusps = sum(euler_phi(gcd(d, N // d)) for d in divisors(N))
    twelve_g = 12 + mu - 3 * e2 - 4 * e3 - 6 * cusps
    if twelve_g % 12:
        raise ArithmeticError(f"non-integral genus at N = {N}")
    return GenusData(N, twelve_g // 12, mu, e2, e3, cusps)


def quotient_genus(N: int, Q: int) -> Fraction:
    """Genus of X_0(N) / W_Q by Riemann-Hurwitz."""
    return Fraction(2 * genus0(N).g0 + 2 - nu(Q, N).total, 4)


def schoeneberg(g: int, g_star: int, p: int) -> bool:
    """True when fixed points of an order-p automorphism are Weierstrass points."""
    if p < 2:
        raise ValueError("order p must be at least 2")
    return g_star != g // p


class Status(str, Enum):
    ALL_WEIERSTRASS = "AllWeierstrass"
    NO_FIXED_POINTS = "NoFixedPoints"
    UNDETERMINED = "UndeterminedByCriterion"
    GENUS_TOO_SMALL = "GenusTooSmall"


@dataclass(frozen=True)
class Verdict:
    N: int
    Q: int
    status: Status
    nu: int
    g0: int
    g_plus: Fraction
    reason: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "N": self.N,
            "Q": self.Q,
            "status": self.status.value,
            "nu": self.nu,
            "g0": self.g0,
            "g_plus": str(self.g_plus),
            "reason": self.reason,
        }


def _count_mod(ps, modulus, residues):
    return sum(1 for p in ps if p % modulus in residues)


def clause_small_q(N: int, Q: int):
    """Sufficient conditions for Q in {2, 3, 4}; returns a clause label or None.

    Assumes nu(Q; N) > 0. Clause (3) parses "M is not square-free with
    M != 9" as (M not square-free) and (M != 9).
    """
    M = N // Q
    ps = prime_divisors(M)
    if Q == 2:
        s0, s1, s2 = (_count_mod(ps, 8, {r}) for r in (1, 3, 5))
        if (s0 > 1 and s1 == 0 and s2 == 0) or s0 + s1 > 2 or s0 + s2 > 2:
            return "Q=2"
    elif Q == 3:
        if _count_mod(ps, 12, {1, 7}) > 1:
            return "Q=3"
    elif Q == 4:
        s = _count_mod(ps, 4, {1})
        t = _count_mod(ps, 4, {3})
        if not is_squarefree(M) and M != 9:
            return "Q=4:not-squarefree"
        if is_squarefree(M) and 6 * s + 4 * t > 11:
            return "Q=4:squarefree"
    return None


def clause_large_q(N: int, Q: int):
    """Sufficient conditions for Q > 4 under the elliptic condition."""
    s = len(prime_divisors(N // Q))
    case = nu_elliptic_case(Q, N)
    if case == 1:
        if Q != 7:
            return "1a"
        if N % 4 == 0 or s > 1:
            return "1b"
    elif case == 2:
        if Q not in S2 and Q not in S4:
            return "2a"
        if (Q in S2 and s > 2) or (Q in S4 and s > 1):
            return "2b"
    else:
        if Q not in S2:
            return "3a"
        if s > 1:
            return "3b"
    return None


def theorem_clause(N: int, Q: int):
    """The closed-form clause certifying (N, Q), or None when none applies."""
    if Q == N or Q < 2:
        return None
    if Q <= 4:
        return clause_small_q(N, Q)
    if not elliptic_condition(N, Q):
        return None
    return clause_large_q(N, Q)


def classify(N: int, Q: int) -> Verdict:
    """Status of the fixed points of W_Q on X_0(N)."""
    if not is_exact_divisor(Q, N) or Q < 2:
        raise ValueError(f"{Q} is not an exact divisor of {N} greater than 1")
    report = nu(Q, N)
    g0 = genus0(N).g0
    g_plus = quotient_genus(N, Q)
    reason = {"nu": report.as_dict()}
    if Q > 4 and Q != N:
        reason["elliptic_condition"] = elliptic_condition(N, Q)
    if g0 < 2:
        status = Status.GENUS_TOO_SMALL
        reason["rule"] = "g0 < 2"
    elif report.total == 0:
        status = Status.NO_FIXED_POINTS
        reason["rule"] = "nu = 0"
    elif report.total > 4:
        status = Status.ALL_WEIERSTRASS
        reason["rule"] = "nu > 4"
        reason["schoeneberg"] = {"g": g0, "g_star": str(g_plus), "floor_g_over_2": g0 // 2}
    else:
        status = Status.UNDETERMINED
        reason["rule"] = "0 < nu <= 4"
    if status is Status.ALL_WEIERSTRASS:
        reason["theorem_clause"] = theorem_clause(N, Q)
    if Q == N:
        reason["exceptional_level"] = N in _EXCEPTIONAL
    return Verdict(N, Q, status, report.total, g0, g_plus, reason)
