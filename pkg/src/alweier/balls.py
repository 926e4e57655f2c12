"""Complex midpoint-radius balls over mpmath.

Every operation widens the radius by the rounding error of the midpoint
computation, bounded by ``ulp * |result|`` with a safety factor. Radii are
mpf values rounded with a relative slack so they stay upper bounds.
"""

from dataclasses import dataclass

import mpmath

mpf = mpmath.mpf
mpc = mpmath.mpc


def _ulp():
    return mpmath.ldexp(1, 2 - mpmath.mp.prec)


def _up(x):
    # relative slack covering rounding in the radius arithmetic itself
    return x * (1 + _ulp())


@dataclass(frozen=True)
class Ball:
    mid: mpc
    rad: mpf

    @classmethod
    def exact(cls, z):
        return cls(mpc(z), mpf(0))

    def __add__(self, other):
        other = _ball(other)
        m = self.mid + other.mid
        return Ball(m, _up(self.rad + other.rad + _ulp() * abs(m)))

    __radd__ = __add__

    def __neg__(self):
        return Ball(-self.mid, self.rad)

    def __sub__(self, other):
        return self + (-_ball(other))

    def __rsub__(self, other):
        return _ball(other) - self

    def __mul__(self, other):
        other = _ball(other)
        m = self.mid * other.mid
        r = abs(self.mid) * other.rad + abs(other.mid) * self.rad + self.rad * other.rad
        return Ball(m, _up(r + 2 * _ulp() * abs(m)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _ball(other)
        am = abs(other.mid)
        if am <= other.rad:
            raise ZeroDivisionError("divisor ball contains zero")
        inv_mid = 1 / other.mid
        inv = Ball(inv_mid, _up(other.rad / (am * (am - other.rad)) + 2 * _ulp() * abs(inv_mid)))
        return self * inv

    def upper(self):
        """Upper bound of |z| over the ball."""
        return _up(abs(self.mid) + self.rad)

    def contains_zero(self):
        return abs(self.mid) <= self.rad


def _ball(z):
    return z if isinstance(z, Ball) else Ball.exact(z)


def det(rows):
    """Determinant of a square matrix of balls.

    Cofactor expansion for size <= 5, Gaussian elimination beyond that.
    """
    n = len(rows)
    if n <= 5:
        return _cofactor(rows)
    return _gauss(rows)


def _cofactor(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = Ball.exact(0)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in rows[1:]]
        term = rows[0][j] * _cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def _gauss(rows):
    a = [list(r) for r in rows]
    n = len(a)
    out = Ball.exact(1)
    for k in range(n):
        piv = max(range(k, n), key=lambda i: abs(a[i][k].mid))
        if a[piv][k].contains_zero():
            # no certified pivot: expand the remaining Schur complement
            return _cofactor_tail(a, k, out)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            out = -out
        out = out * a[k][k]
        for i in range(k + 1, n):
            factor = a[i][k] / a[k][k]
            a[i] = [a[i][j] - factor * a[k][j] if j > k else Ball.exact(0) for j in range(n)]
    return out


def _cofactor_tail(a, k, out):
    sub = [row[k:] for row in a[k:]]
    return out * _cofactor(sub)


def hadamard_bound(rows):
    """Product of row Euclidean norms, an upper bound for |det|."""
    out = mpf(1)
    for row in rows:
        out *= mpmath.sqrt(sum(b.upper() ** 2 for b in row))
    return _up(out)
