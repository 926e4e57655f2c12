"""Positive definite binary quadratic forms [a, b, c] = a x^2 + b x y + c y^2."""

from functools import lru_cache
from itertools import product
from math import gcd, isqrt
from typing import NamedTuple, Optional

from .arith import prime_divisors, solve_linear_congruence, xgcd


class QuadForm(NamedTuple):
    a: int
    b: int
    c: int

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def __str__(self):
        return f"[{self.a},{self.b},{self.c}]"


class UnimodularMatrix(NamedTuple):
    p: int
    q: int
    r: int
    s: int

    def det(self):
        return self.p * self.s - self.q * self.r

    def __matmul__(self, other):
        p, q, r, s = self
        P, Q, R, S = other
        return UnimodularMatrix(p * P + q * R, p * Q + q * S, r * P + s * R, r * Q + s * S)

    def inverse(self):
        p, q, r, s = self
        return UnimodularMatrix(s, -q, -r, p)


IDENTITY = UnimodularMatrix(1, 0, 0, 1)
S_MATRIX = UnimodularMatrix(0, -1, 1, 0)


def translation(k: int) -> UnimodularMatrix:
    return UnimodularMatrix(1, k, 0, 1)


def discriminant(f) -> int:
    a, b, c = f
    return b * b - 4 * a * c


def content(f) -> int:
    return gcd(gcd(f[0], f[1]), f[2])


def is_primitive(f) -> bool:
    return content(f) == 1


def apply(f, gamma) -> QuadForm:
    """The form (x, y) -> f(p x + q y, r x + s y)."""
    a, b, c = f
    p, q, r, s = gamma
    return QuadForm(
        a * p * p + b * p * r + c * r * r,
        2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
        a * q * q + b * q * s + c * s * s,
    )


def is_reduced(f) -> bool:
    a, b, c = f
    if not abs(b) <= a <= c:
        return False
    if (abs(b) == a or a == c) and b < 0:
        return False
    return True


def reduce(f):
    """Gauss reduction of a positive definite form.

    Returns ``(g, gamma)`` with ``g`` reduced and ``apply(f, gamma) == g``.
    """
    a, b, c = f
    if a <= 0 or b * b - 4 * a * c >= 0:
        raise ValueError(f"{tuple(f)} is not positive definite")
    gamma = IDENTITY
    while True:
        # bring b into (-a, a]
        k = (a - b) // (2 * a)
        if k:
            b, c = b + 2 * a * k, a * k * k + b * k + c
            gamma = gamma @ translation(k)
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
            gamma = gamma @ S_MATRIX
            continue
        return QuadForm(a, b, c), gamma


def reduced_forms(d: int) -> list:
    """Primitive reduced forms of discriminant -d, ordered by (a, b)."""
    if d <= 0 or d % 4 not in (0, 3):
        raise ValueError(f"-{d} is not a discriminant")
    forms = []
    bmax = isqrt(d // 3)
    for b in range(-bmax, bmax + 1):
        if (b - d) % 2:
            continue
        ac = (b * b + d) // 4
        a = max(abs(b), 1)
        while a * a <= ac:
            if ac % a == 0:
                c = ac // a
                f = QuadForm(a, b, c)
                if is_reduced(f) and is_primitive(f):
                    forms.append(f)
            a += 1
    forms.sort(key=lambda f: (f.a, f.b))
    return forms


@lru_cache(maxsize=None)
def class_number(d: int) -> int:
    """h(-d), the number of classes of primitive forms of discriminant -d."""
    return len(reduced_forms(d))


def equivalent(f, g) -> Optional[UnimodularMatrix]:
    """A matrix gamma in SL2(Z) with apply(f, gamma) == g, or None."""
    if discriminant(f) != discriminant(g):
        return None
    rf, gf = reduce(f)
    rg, gg = reduce(g)
    if rf != rg:
        return None
    return gf @ gg.inverse()


def complete_to_sl2(x: int, y: int) -> UnimodularMatrix:
    """A matrix in SL2(Z) with first column (x, y); needs gcd(x, y) = 1."""
    g, u, v = xgcd(x, y)
    if g != 1:
        raise ValueError(f"gcd({x}, {y}) != 1")
    # x*u + y*v = 1, so det [[x, -v], [y, u]] = 1
    return UnimodularMatrix(x, -v, y, u)


def _search_box(bound):
    pts = [(x, y) for x, y in product(range(-bound, bound + 1), repeat=2)
           if gcd(x, y) == 1]
    pts.sort(key=lambda v: (max(abs(v[0]), abs(v[1])), abs(v[0]) + abs(v[1]), -v[0], -v[1]))
    return pts


def coprime_search_bound(N: int) -> int:
    return 2 * len(prime_divisors(N)) + 2


def represent_coprime_to(f, N: int):
    """An equivalent form whose first coefficient is prime to N.

    Searches f(x, y) over primitive vectors with |x|, |y| up to
    ``coprime_search_bound(N)`` and completes the winner to a matrix in
    SL2(Z). Returns ``(g, gamma)`` with ``g = apply(f, gamma)``.
    """
    f = QuadForm(*f)
    if not is_primitive(f):
        raise ValueError(f"{f} is imprimitive")
    if gcd(f.a, N) == 1:
        return f, IDENTITY
    bound = coprime_search_bound(N)
    while True:
        for x, y in _search_box(bound):
            if gcd(f(x, y), N) == 1:
                gamma = complete_to_sl2(x, y)
                return apply(f, gamma), gamma
        # never reached for the bound above; kept so the search cannot give up
        bound *= 2


def lift_to_level(f, N: int, d: int, beta: int) -> QuadForm:
    """Move f into the set of forms [A, B, C] with N | A and B = beta (mod 2N).

    Solves 2 a K + b = -beta (mod 2N) and returns f o [[K, -1], [1, 0]].
    """
    a, b, c = f
    if gcd(a, N) != 1:
        raise ValueError(f"gcd({a}, {N}) != 1")
    if discriminant(f) != -d:
        raise ValueError(f"{tuple(f)} does not have discriminant -{d}")
    if (-d - beta * beta) % (4 * N):
        raise ValueError(f"-{d} is not {beta}^2 mod {4 * N}")
    sol = solve_linear_congruence(2 * a, -beta - b, 2 * N)
    # solvable: b and beta have the same parity
    K = sol[0]
    return apply(f, UnimodularMatrix(K, -1, 1, 0))
