"""Canonical forms over Z/p^k, with the transformation that produces them."""

import random

from qfcanon.canon import canonicalize
from qfcanon.matmod import IntQuadForm, as_form, congruence, random_gl
from qfcanon.modint import PrimePower
from qfcanon.symbols import canonical_symbol, two_symbol


def show(q, p, k=None, seed=0):
    c, w = canonicalize(q, p, k, random.Random(seed))
    m = c.modulus.modulus
    print(f"p = {p}, k = {c.modulus.k}")
    print("form:\n" + "\n".join(" ".join(f"{v:4d}" for v in r) for r in as_form(q).tolist()))
    print("canonical:\n" + str(c))
    print("blocks:", c.blocks)
    # the witness is checked when built; check it once more by hand
    assert congruence(w.u.tolist(), as_form(q).tolist(), m) == [[v % m for v in r] for r in c.matrix.tolist()]
    print("U'QU = canonical form mod", m)
    print()
    return c


if __name__ == "__main__":
    q = [[2, 1, 0, 3], [1, -4, 5, 0], [0, 5, 6, 1], [3, 0, 1, 8]]
    for p in (2, 3, 5):
        show(q, p)

    # 3 + 5 and 1 + 7 land on the same canonical form over Z/16
    print(show(IntQuadForm.diag(3, 5), 2, 4).blocks == show(IntQuadForm.diag(1, 7), 2, 4).blocks)

    # a random change of basis does not move the canonical form
    rng = random.Random(1)
    d = IntQuadForm.diag(1, 3, 6, 12, 4, 40)
    k = 11
    v = random_gl(6, PrimePower(2, k), rng)
    hidden = congruence(v.tolist(), d.tolist(), 2 ** k)
    a = canonicalize(d, 2, k, rng)[0]
    b = canonicalize(hidden, 2, k, rng)[0]
    print("same canonical form after a random change of basis:", a.blocks == b.blocks)
    print("2-symbol:", two_symbol(d).format())
    print("canonical 2-symbol:", canonical_symbol(d, 2).format())
