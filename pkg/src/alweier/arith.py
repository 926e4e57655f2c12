"""Exact elementary number theory used by the counting formulas."""

from math import gcd, isqrt
from typing import NamedTuple, Optional

_TRIAL_LIMIT = 10**6
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class Factorization(NamedTuple):
    value: int
    factors: tuple  # ((p, e), ...) with p increasing

    def primes(self):
        return [p for p, _ in self.factors]

    def __int__(self):
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with the first twelve prime bases.

    Deterministic for n < 3.3 * 10**24, far beyond the levels handled here.
    """
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"pollard rho failed on {n}")


def _split(n: int, out: dict):
    if n == 1:
        return
    if is_probable_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_rho(n)
    _split(d, out)
    _split(n // d, out)


def factorize(n: int) -> Factorization:
    """Factor ``n >= 1``: trial division up to 10**6, then Pollard rho."""
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    m = n
    found = {}
    p = 2
    while p * p <= m and p <= _TRIAL_LIMIT:
        while m % p == 0:
            found[p] = found.get(p, 0) + 1
            m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        if m <= _TRIAL_LIMIT**2 or is_probable_prime(m):
            found[m] = found.get(m, 0) + 1
        else:
            _split(m, found)
    return Factorization(n, tuple(sorted(found.items())))


def prime_divisors(n: int) -> list:
    return factorize(n).primes()


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n).factors)


def divisors(n: int) -> list:
    divs = [1]
    for p, e in factorize(n).factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def euler_phi(n: int) -> int:
    out = n
    for p in prime_divisors(n):
        out -= out // p
    return out


def exact_divisors(n: int) -> list:
    """All Q with Q | n and gcd(Q, n/Q) = 1, in increasing order."""
    return [q for q in divisors(n) if gcd(q, n // q) == 1]


def is_exact_divisor(q: int, n: int) -> bool:
    return q >= 1 and n % q == 0 and gcd(q, n // q) == 1


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n).

    Completely multiplicative extension of the Jacobi symbol. For the
    factor 2 the rule is (a/2) = 0 for a even, +1 for a = +-1 (mod 8) and
    -1 for a = +-3 (mod 8). (a/-1) is -1 for negative a, and (a/0) is 1
    exactly when a = +-1.
    """
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n) for odd positive n
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre_euler(a: int, p: int) -> int:
    """Legendre symbol by Euler's criterion, odd prime p."""
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def xgcd(a: int, b: int):
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def solve_linear_congruence(a: int, b: int, m: int) -> Optional[tuple]:
    """Solve ``a*x = b (mod m)``.

    Returns ``(x0, m // g)`` with ``x0`` the least non-negative solution and
    ``g = gcd(a, m)``, or ``None`` when ``g`` does not divide ``b``.
    """
    if m < 1:
        raise ValueError(f"modulus must be positive, got {m}")
    g = gcd(a, m)
    if b % g:
        return None
    mod = m // g
    if mod == 1:
        return 0, 1
    x0 = (b // g) * pow(a // g, -1, mod) % mod
    return x0, mod


def _square_mod_prime_power(a: int, p: int, k: int) -> bool:
    """Is ``a`` a square modulo ``p**k``?"""
    q = p**k
    a %= q
    if a == 0:
        return True
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    if v % 2:
        return False
    k -= v
    if p != 2:
        return legendre_euler(a, p) == 1
    if k == 1:
        return True
    if k == 2:
        return a % 4 == 1
    return a % 8 == 1


def sqrt_neg_mod(N: int, Q: int) -> bool:
    """Does ``x**2 = -Q (mod N)`` have a solution?

    Decided prime power by prime power from the factorization of N.
    """
    if N < 1 or Q < 1:
        raise ValueError("N and Q must be positive")
    return all(_square_mod_prime_power(-Q, p, e) for p, e in factorize(N).factors)


def sqrt_neg_mod_bruteforce(N: int, Q: int) -> bool:
    """Exhaustive residue scan for small N; reference for tests."""
    return any((x * x + Q) % N == 0 for x in range(N))


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n
