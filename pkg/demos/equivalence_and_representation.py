"""Deciding equivalence with a witness, cross-checked by brute force, and primitive representations."""

import random

from qfcanon.blockdiag import T_MINUS, T_PLUS
from qfcanon.canon import transform_between
from qfcanon.errors import Inequivalent, NoRepresentation
from qfcanon.matmod import IntQuadForm, direct_sum_rows
from qfcanon.modint import PrimePower
from qfcanon.oracle import brute_equivalent, represented_values
from qfcanon.represent import represent_general

rng = random.Random(0)

# forms with a Type II part that are equivalent to diagonal ones over Z/8
for tau, t, name, row in ((1, T_MINUS, "T-", (3, 3, 3)), (7, T_PLUS, "T+", (1, 3, 3))):
    q1 = direct_sum_rows([[tau]], t.matrix())
    w = transform_between(q1, IntQuadForm.diag(*row), 2, 3, rng)
    print(f"{tau} + {name}  ~  {row}  via U =", w.u.tolist())

# 1 + 1 and 1 + 2 differ over Z/3: the canonical route and brute force agree
try:
    transform_between(IntQuadForm.diag(1, 1), IntQuadForm.diag(1, 2), 3)
except Inequivalent as e:
    print("inequivalent:", e)
print("brute force finds a witness:", brute_equivalent([[1, 0], [0, 1]], [[1, 0], [0, 2]], PrimePower(3, 1)))

# primitive representations, certified absent when the search comes up empty
q, pk = IntQuadForm.diag(1, 4), PrimePower(2, 3)
for t in range(8):
    try:
        r = represent_general(q, t, pk, rng)
        print(f"{t} = x'Qx at x = {r.vector}")
    except NoRepresentation as e:
        print(f"{t}: none ({e})")
print("brute force values:", sorted(represented_values(q, pk)))
