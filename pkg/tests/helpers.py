"""Shared generators for the test suite."""

import random

from hypothesis import strategies as st

from qfcanon.matmod import IntQuadForm, as_form, congruence, random_gl
from qfcanon.modint import completion_offset, padic_split


def default_k(q, p):
    return padic_split(as_form(q).det(), p)[0] + completion_offset(p)


def random_form(rng, n, lo=-50, hi=50):
    """Random symmetric integer matrix with nonzero determinant."""
    while True:
        a = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                a[i][j] = a[j][i] = rng.randint(lo, hi)
        q = IntQuadForm(a)
        if q.det() != 0:
            return q


def block_form(rng, p, n_max=6, scales=(0, 0, 1, 1, 2, 3)):
    """Random direct sum of scaled Type I / Type II blocks, the shapes that stress p = 2."""
    target = rng.randint(1, n_max)
    blocks, n = [], 0
    while n < target:
        s = rng.choice(scales)
        if p == 2 and rng.random() < 0.35 and n + 2 <= n_max:
            a, b, c = rng.choice([(1, 1, 1), (1, 1, 2), (0, 1, 0), (2, 3, 1), (4, 1, 1)])
            blocks.append([[2 * a * 2 ** s, b * 2 ** s], [b * 2 ** s, 2 * c * 2 ** s]])
            n += 2
        else:
            u = rng.choice([1, 3, 5, 7] if p == 2 else range(1, p))
            blocks.append([[u * p ** s]])
            n += 1
    a = [[0] * n for _ in range(n)]
    o = 0
    for b in blocks:
        for i in range(len(b)):
            for j in range(len(b)):
                a[o + i][o + j] = b[i][j]
        o += len(b)
    return IntQuadForm(a)


def conjugate(q, pk, rng):
    """V'qV for a fresh random V in GL_n(Z/p^k), as an integer form."""
    v = random_gl(q.n, pk, rng)
    return IntQuadForm(congruence(v.tolist(), q.tolist(), pk.modulus)), v


def seeded(seed):
    return random.Random(seed)


# hypothesis draws seeds; the generator itself stays an ordinary Random
seeds = st.integers(0, 2 ** 32).map(seeded)
