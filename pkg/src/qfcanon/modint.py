"""Scalar arithmetic over Z/p^k: p-adic order, signs, square roots."""

from dataclasses import dataclass
from functools import lru_cache
import math

from sympy import isprime

from .errors import NoPair, NotASquare, NotCoprime, NotOdd, NotOddPrime, NotPrime

INF = math.inf


@lru_cache(maxsize=256)
def _check_prime(p):
    if p < 2 or not isprime(p):
        raise NotPrime(f"{p} is not prime")
    return p


@dataclass(frozen=True)
class PrimePower:
    p: int
    k: int

    def __post_init__(self):
        _check_prime(self.p)
        if self.k < 1:
            raise ValueError(f"exponent must be positive, got {self.k}")

    @property
    def modulus(self):
        return self.p ** self.k

    @property
    def kp(self):
        return completion_offset(self.p)

    def reduce(self, t):
        return t % self.modulus

    def with_k(self, k):
        return PrimePower(self.p, k)


@dataclass(frozen=True)
class IntSymbol:
    order: float
    sign: int


def completion_offset(p):
    """k_p: 1 for odd primes, 3 for p = 2."""
    return 3 if p == 2 else 1


def padic_split(t, p):
    """Return (ord_p(t), cop_p(t)) so that t = p**ord * cop; (INF, 0) for t = 0."""
    if t == 0:
        return INF, 0
    o = 0
    while t % p == 0:
        t //= p
        o += 1
    return o, t


def ord_p(t, p):
    return padic_split(t, p)[0]


def cop_p(t, p):
    return padic_split(t, p)[1]


def legendre(t, p):
    if p == 2:
        raise NotOddPrime("legendre symbol needs an odd prime")
    t %= p
    if t == 0:
        raise NotCoprime(f"{p} divides the argument")
    return 1 if pow(t, (p - 1) // 2, p) == 1 else -1


def kronecker2(t):
    """Kronecker symbol (2/t) for odd t: +1 iff t = +-1 mod 8."""
    if t % 2 == 0:
        raise NotOdd(f"{t} is even")
    return 1 if t % 8 in (1, 7) else -1


def sgn_p(t, p):
    if t == 0:
        return 0
    u = cop_p(t, p)
    if p == 2:
        return u % 8
    return legendre(u, p)


def unit_sign(u, p):
    """+1/-1 sign of a unit: Legendre for odd p, Kronecker (2/u) for p = 2."""
    return kronecker2(u) if p == 2 else legendre(u, p)


def int_symbol(t, pk):
    t = pk.reduce(t)
    if t == 0:
        return IntSymbol(INF, 0)
    return IntSymbol(ord_p(t, pk.p), sgn_p(t, pk.p))


def inv_mod(a, m):
    try:
        return pow(a, -1, m)
    except ValueError:
        raise NotCoprime(f"{a} is not invertible mod {m}") from None


@lru_cache(maxsize=None)
def sigma_p(p):
    """Smallest quadratic non-residue mod an odd prime, by linear scan."""
    if p == 2:
        raise NotOddPrime("sigma_p needs an odd prime")
    _check_prime(p)
    s = 2
    while legendre(s, p) == 1:
        s += 1
    return s


@lru_cache(maxsize=None)
def nonresidue_sum_pair(p):
    """Least non-residue t1 such that t2 = 1 - t1 (mod p) is also a non-residue."""
    if p == 2:
        raise NotOddPrime("needs an odd prime")
    _check_prime(p)
    for t1 in range(2, p):
        t2 = (1 - t1) % p
        if t2 and legendre(t1, p) == -1 and legendre(t2, p) == -1:
            return t1, t2
    raise NoPair(f"no pair of non-residues sums to 1 mod {p}")


def _tonelli_shanks(u, p):
    # u is a nonzero quadratic residue mod odd prime p
    if p % 4 == 3:
        return pow(u, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    c = pow(sigma_p(p), q, p)
    r = pow(u, (q + 1) // 2, p)
    t = pow(u, q, p)
    m = s
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        r = r * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return r


def _unit_sqrt_odd(u, p, r):
    """Root of the unit u modulo p^r, Hensel-lifted from a root mod p."""
    y = _tonelli_shanks(u % p, p)
    j = 1
    while j < r:
        j = min(2 * j, r)
        m = p ** j
        y = (y - (y * y - u) * inv_mod(2 * y, m)) % m
    return y


def _unit_sqrt_two(u, r):
    """Root of the odd u modulo 2^r; needs u = 1 mod 2^min(3, r)."""
    y = 1
    for j in range(3, r):
        if (y * y - u) % (1 << (j + 1)):
            y += 1 << (j - 1)
    return y % (1 << r)


def is_square(t, pk):
    t = pk.reduce(t)
    if t == 0:
        return True
    p, k = pk.p, pk.k
    o, u = padic_split(t, p)
    if o % 2:
        return False
    if p == 2:
        w = min(3, k - o)
        return u % (1 << w) == 1
    return legendre(u, p) == 1


def sqrt_mod(t, pk):
    """Least x >= 0 with x^2 = t (mod p^k); raises NotASquare when none exists."""
    p, k = pk.p, pk.k
    t = pk.reduce(t)
    if t == 0:
        return 0
    if not is_square(t, pk):
        raise NotASquare(f"{t} is not a square mod {p}^{k}")
    o, u = padic_split(t, p)
    r = k - o
    y = _unit_sqrt_two(u, r) if p == 2 else _unit_sqrt_odd(u, p, r)
    # every root is p^(o/2) times a root of u mod p^r, plus a multiple of p^(k-o/2)
    mr = p ** r
    cands = {y % mr, -y % mr}
    if p == 2 and r >= 2:
        h = mr >> 1
        cands |= {(y + h) % mr, (h - y) % mr}
    y = min(c for c in cands if (c * c - u) % mr == 0)
    return p ** (o // 2) * y % pk.modulus
