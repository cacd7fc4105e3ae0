"""Diagonalization over Q, real signature and the p-signature (oddity for p = 2)."""

from dataclasses import dataclass
from fractions import Fraction

from .errors import Degenerate, ZeroInput
from .matmod import as_form, det_int
from .modint import kronecker2, legendre, padic_split


@dataclass(frozen=True)
class RatDiagForm:
    entries: tuple


def rational_diagonalize(q):
    """(RatDiagForm, V) with V' q V diagonal, V an invertible rational matrix."""
    a = as_form(q).tolist()
    n = len(a)
    if det_int(a) == 0:
        raise Degenerate("form is singular")
    M = [[Fraction(v) for v in r] for r in a]
    V = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def add(i, j, c):
        # b_i <- b_i + c b_j
        for r in M:
            r[i] += c * r[j]
        M[i] = [x + c * y for x, y in zip(M[i], M[j])]
        for r in V:
            r[i] += c * r[j]

    for t in range(n):
        if M[t][t] == 0:
            j = next((j for j in range(t + 1, n) if M[j][j] != 0), None)
            if j is not None:
                add(t, j, Fraction(1))
                if M[t][t] == 0:
                    add(t, j, Fraction(1))
            else:
                j = next(j for j in range(t + 1, n) if M[t][j] != 0)
                add(t, j, Fraction(1))
        d = M[t][t]
        for j in range(t + 1, n):
            if M[t][j]:
                add(j, t, -M[t][j] / d)
    return RatDiagForm(tuple(M[i][i] for i in range(n))), V


def signature(q):
    entries = rational_diagonalize(q)[0].entries
    return sum(1 if e > 0 else -1 for e in entries)


def _split_rational(x, p):
    x = Fraction(x)
    if x == 0:
        raise ZeroInput("zero has no p-adic decomposition")
    on, a = padic_split(x.numerator, p)
    od, b = padic_split(x.denominator, p)
    return on - od, a, b


def is_antisquare(x, p):
    """x = p^alpha a/b with alpha odd and the units a, b of opposite square class.

    For p = 2 the square class of an odd unit is read through the Kronecker
    symbol (2/u); comparing raw residues mod 8 would make the count depend on
    the elimination order.
    """
    alpha, a, b = _split_rational(x, p)
    if alpha % 2 == 0:
        return False
    if p == 2:
        return kronecker2(a) != kronecker2(b)
    return legendre(a, p) != legendre(b, p)


def p_signature(q, p):
    """p^alpha_1 + ... + p^alpha_n + 4m mod 8 (odd p); sum of odd parts + 4m (p = 2)."""
    entries = rational_diagonalize(q)[0].entries
    total = 0
    for e in entries:
        alpha, a, b = _split_rational(e, p)
        if p == 2:
            # odd part a/b read mod 8
            total += a * pow(b, -1, 8)
        else:
            total += pow(p, alpha % 2, 8)
        if is_antisquare(e, p):
            total += 4
    return total % 8
