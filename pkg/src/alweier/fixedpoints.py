"""Fixed points of Atkin-Lehner involutions W_Q on X_0(N).

Counts nu(Q; N) for every exact divisor Q of N, and enumerates the fixed
points of the full involution W_N as CM points (-B + sqrt(-d)) / (2A)
attached to forms [A, B, C] with N | A.
"""

from dataclasses import asdict, dataclass
from fractions import Fraction
from math import gcd, prod

import mpmath

from .arith import factorize, is_exact_divisor, kronecker, prime_divisors
from .quadforms import (
    QuadForm,
    class_number,
    content,
    discriminant,
    lift_to_level,
    reduce,
    reduced_forms,
    represent_coprime_to,
)


def delta(N: int) -> Fraction:
    """Multiplier with nu(N; N) = delta(N) * h(-4N)."""
    if N % 8 == 7:
        return Fraction(2)
    if N % 8 == 3 and N > 3:
        return Fraction(4, 3)
    return Fraction(1)


@dataclass(frozen=True)
class NuReport:
    N: int
    Q: int
    total: int
    term_main: int
    term_hQ: int
    term_Q2: int
    term_Q3: int
    term_Q4: int

    def as_dict(self):
        return asdict(self)


def _check_exact(Q, N):
    if not is_exact_divisor(Q, N):
        raise ValueError(f"{Q} is not an exact divisor of {N}")


def _c_odd(p, Q):
    if Q % 4 == 3:
        return 1 + kronecker(-Q, p)
    return 1 + kronecker(-4 * Q, p)


def _c1_two(Q, N):
    if Q % 4 == 1:
        return 1 if N % 4 else 0
    # Q = 3 (mod 4)
    if N % 4:
        return 2
    if N % 8:
        return 3 + kronecker(-Q, 2)
    return 3 * (1 + kronecker(-Q, 2))


def _c2_two(Q):
    return 1 + kronecker(-Q, 2)


def nu(Q: int, N: int) -> NuReport:
    """Number of fixed points of W_Q on X_0(N), term by term.

    The five summands are kept separately in the report. For Q = N every
    product is empty.
    """
    _check_exact(Q, N)
    if Q < 2:
        raise ValueError("W_1 is the identity; Q must be at least 2")
    M = N // Q
    ps = prime_divisors(M)

    c1 = [(_c1_two(Q, N) if p == 2 else _c_odd(p, Q)) for p in ps]
    term_main = prod(c1) * class_number(4 * Q)

    term_hQ = 0
    if Q >= 4 and Q % 4 == 3:
        c2 = [(_c2_two(Q) if p == 2 else _c_odd(p, Q)) for p in ps]
        term_hQ = prod(c2) * class_number(Q)

    term_Q2 = prod(1 + kronecker(-4, p) for p in ps) if Q == 2 else 0
    term_Q3 = prod(1 + kronecker(-3, p) for p in ps) if Q == 3 else 0
    term_Q4 = 0
    if Q == 4:
        term_Q4 = prod(p ** (k // 2) + p ** ((k - 1) // 2) for p, k in factorize(M).factors)

    total = term_main + term_hQ + term_Q2 + term_Q3 + term_Q4
    return NuReport(N, Q, total, term_main, term_hQ, term_Q2, term_Q3, term_Q4)


def elliptic_condition(N: int, Q: int) -> bool:
    """Splitting criterion for W_Q (Q > 3) to have fixed points.

    (-Q/p) = 1 for every odd prime p | M, Q = 3 (mod 4) if 4 || M, and
    Q = 7 (mod 8) if 8 | M, where M = N / Q.
    """
    _check_exact(Q, N)
    if Q <= 3:
        raise ValueError("the elliptic condition is only stated for Q > 3")
    M = N // Q
    if M == 1:
        raise ValueError("need M = N/Q > 1")
    if any(kronecker(-Q, p) != 1 for p in prime_divisors(M) if p != 2):
        return False
    if M % 8 == 0:
        return Q % 8 == 7
    if M % 4 == 0:
        return Q % 4 == 3
    return True


def _split_M(Q, N):
    _check_exact(Q, N)
    M = N // Q
    if M == 1:
        raise ValueError("need M = N/Q > 1")
    return M, prime_divisors(M)


def nu_special(Q: int, N: int) -> int:
    """Closed forms of nu(Q; N) for Q in {2, 3, 4}."""
    if Q not in (2, 3, 4):
        raise ValueError(f"nu_special handles Q in {{2, 3, 4}}, got {Q}")
    M, ps = _split_M(Q, N)
    if Q == 2:
        residues = [p % 8 for p in ps]
        s0, s1, s2 = residues.count(1), residues.count(3), residues.count(5)
        if 7 in residues or (s1 and s2):
            return 0
        return (s2 == 0) * 2 ** (s0 + s1) + (s1 == 0) * 2 ** (s0 + s2)
    if Q == 3:
        if M % 8 == 0 or any(p % 12 in (5, 11) for p in ps):
            return 0
        s = sum(1 for p in ps if p % 12 in (1, 7))
        return 2 ** (s + 1)
    s = sum(1 for p in ps if p % 4 == 1)
    t = sum(1 for p in ps if p % 4 == 3)
    local = prod(p ** (k // 2) + p ** ((k - 1) // 2) for p, k in factorize(M).factors)
    return local if t else local + 2**s


def alpha(N: int) -> int:
    if N % 4:
        return 1
    return 2 if N % 8 else 3


def nu_elliptic_case(Q: int, N: int) -> int:
    """Which of the three closed forms applies to (N, Q) with Q > 4."""
    if Q % 8 == 7 or (Q % 8 == 3 and N % 2):
        return 1
    if Q % 4 == 1 and N % 2 == 0:
        return 2
    return 3


def nu_elliptic(Q: int, N: int) -> int:
    """nu(Q; N) for Q > 4 when the elliptic condition holds."""
    if Q <= 4:
        raise ValueError("nu_elliptic needs Q > 4")
    M, ps = _split_M(Q, N)
    if not elliptic_condition(N, Q):
        raise ValueError(f"(N, Q) = ({N}, {Q}) fails the elliptic condition")
    s = len(ps)
    case = nu_elliptic_case(Q, N)
    if case == 1:
        return 2**s * (alpha(N) * class_number(4 * Q) + class_number(Q))
    if case == 2:
        return 2 ** (s - 1) * class_number(4 * Q)
    return 2**s * class_number(4 * Q)


@dataclass(frozen=True)
class HeegnerPoint:
    """CM point tau = (-B + sqrt(-d)) / (2A) for a level-N form [A, B, C]."""

    form: QuadForm
    d: int
    N: int
    beta: int

    def __post_init__(self):
        A, B, C = self.form
        if A <= 0 or self.form.a % self.N:
            raise ValueError(f"{self.form} is not a level-{self.N} form")
        if discriminant(self.form) != -self.d:
            raise ValueError(f"{self.form} does not have discriminant -{self.d}")
        if (B - self.beta) % (2 * self.N):
            raise ValueError(f"B = {B} is not {self.beta} mod {2 * self.N}")
        if content(self.form) != 1:
            raise ValueError(f"{self.form} is imprimitive")

    @property
    def x(self) -> Fraction:
        return Fraction(-self.form.b, 2 * self.form.a)

    @property
    def y_squared(self) -> Fraction:
        return Fraction(self.d, 4 * self.form.a**2)

    def reduced_class(self) -> QuadForm:
        """Reduced SL2(Z) representative; with (d, beta) it labels the point."""
        return reduce(self.form)[0]

    def key(self):
        return self.d, self.beta % (2 * self.N), tuple(self.reduced_class())

    def as_dict(self, digits=30):
        tau = tau_complex(self, digits)
        A, B, C = self.form
        return {
            "A": A, "B": B, "C": C, "d": self.d, "beta": self.beta,
            "tau_re": mpmath.nstr(tau.real, digits),
            "tau_im": mpmath.nstr(tau.imag, digits),
        }


def branches(N: int) -> list:
    """The (d, beta) pairs whose level-N forms carry W_N fixed points."""
    out = [(4 * N, 0)]
    if N % 4 == 3:
        out.append((N, N))
    return out


def enumerate_fixed_points(N: int) -> list:
    """Gamma_0(N)-inequivalent fixed points of W_N on X_0(N), N >= 5.

    Each reduced form of discriminant -4N (and -N when N = 3 mod 4) is
    moved to a representative with first coefficient prime to N and then
    lifted to level N.
    """
    if N < 5:
        raise ValueError("fixed point enumeration needs N >= 5")
    points = []
    for d, beta in branches(N):
        for f in reduced_forms(d):
            g, _ = represent_coprime_to(f, N)
            points.append(HeegnerPoint(lift_to_level(g, N, d, beta), d, N, beta))
    return points


def tau_complex(pt: HeegnerPoint, digits: int = 30):
    """(-B + i sqrt(d)) / (2A) as an mpmath complex at ``digits`` digits."""
    if digits < 15:
        raise ValueError("precision must be at least 15 digits")
    A, B, _ = pt.form
    with mpmath.workdps(digits + 5):
        return mpmath.mpc(-B, mpmath.sqrt(pt.d)) / (2 * A)


def level_form_from_point(x: Fraction, y_squared: Fraction) -> QuadForm:
    """Primitive [A, B, C], A > 0, with root x + i*y in the upper half-plane."""
    x, y2 = Fraction(x), Fraction(y_squared)
    # tau^2 - 2x tau + (x^2 + y^2)
    coeffs = [Fraction(1), -2 * x, x * x + y2]
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    g = gcd(gcd(ints[0], ints[1]), ints[2])
    return QuadForm(*(v // g for v in ints))


def point_from_coordinates(x, y_squared, N: int) -> HeegnerPoint:
    """The HeegnerPoint at x + i*sqrt(y_squared), validated as a W_N fixed point."""
    f = level_form_from_point(x, y_squared)
    d = -discriminant(f)
    for dd, beta in branches(N):
        if dd == d:
            return HeegnerPoint(f, d, N, beta)
    raise ValueError(f"{f} has discriminant -{d}, not a W_{N} fixed point discriminant")


def atkin_lehner_matrix(Q: int, N: int):
    """Integer matrix (Q x, y; N, Q) of determinant Q representing W_Q."""
    _check_exact(Q, N)
    M = N // Q
    x = pow(Q, -1, M) if M > 1 else 1
    y = (Q * x - 1) // M
    return (Q * x, y, N, Q)


def apply_atkin_lehner(pt: HeegnerPoint, Q: int) -> HeegnerPoint:
    """Image of the point under W_Q (it is again a W_N fixed point).

    W_Q commutes with W_N, so W_Q permutes the fixed points of W_N.
    """
    if Q == 1:
        return pt
    a, b, c, d = atkin_lehner_matrix(Q, pt.N)
    A, B, C = pt.form
    # tau' = W tau is a root of f o adj(W), adj(W) = (d, -b; -c, a)
    p, q, r, s = d, -b, -c, a
    g = QuadForm(
        A * p * p + B * p * r + C * r * r,
        2 * A * p * q + B * (p * s + q * r) + 2 * C * r * s,
        A * q * q + B * q * s + C * s * s,
    )
    k = content(g)
    g = QuadForm(g.a // k, g.b // k, g.c // k)
    if g.a < 0:
        g = QuadForm(-g.a, -g.b, -g.c)
    d_new = -discriminant(g)
    for dd, beta in branches(pt.N):
        if dd == d_new:
            return HeegnerPoint(g, d_new, pt.N, beta)
    raise ArithmeticError(f"W_{Q} image {g} left the fixed point set")
