from itertools import product

import pytest

from qfcanon.blockdiag import T_MINUS
from qfcanon.errors import UniverseTooLarge
from qfcanon.matmod import IntQuadForm, congruence, identity
from qfcanon.modint import PrimePower
from qfcanon.oracle import (brute_equivalent, brute_represent, enumerate_gl, gl_order, orbit_partition_n2,
                            represented_values)


def test_enumerate_gl_examples():
    assert sorted(u.tolist()[0][0] for u in enumerate_gl(1, PrimePower(2, 2))) == [1, 3]
    assert sum(1 for _ in enumerate_gl(2, PrimePower(3, 1))) == 48 == gl_order(2, 3, 1)
    assert sum(1 for _ in enumerate_gl(2, PrimePower(2, 3))) == 1536 == gl_order(2, 2, 3)


@pytest.mark.parametrize("n,p,k", [(1, 5, 2), (2, 2, 1), (2, 2, 2), (2, 5, 1), (3, 2, 1)])
def test_enumeration_matches_group_order(n, p, k):
    mats = [tuple(map(tuple, u.tolist())) for u in enumerate_gl(n, PrimePower(p, k))]
    assert len(mats) == len(set(mats)) == gl_order(n, p, k)


def test_universe_limits():
    with pytest.raises(UniverseTooLarge):
        next(enumerate_gl(3, PrimePower(3, 2)))
    with pytest.raises(UniverseTooLarge):
        brute_equivalent(identity(4), identity(4), PrimePower(2, 1))


def test_brute_equivalent_examples():
    pk = PrimePower(2, 3)
    w = brute_equivalent(IntQuadForm.diag(1, 3).tolist(), IntQuadForm.diag(1, 3).tolist(), pk)
    assert w.u.tolist() == identity(2)
    w = brute_equivalent([[3, 0], [0, 5]], [[1, 0], [0, 7]], pk)
    assert congruence(w.u.tolist(), [[3, 0], [0, 5]], 8) == [[1, 0], [0, 7]]
    assert brute_equivalent([[1, 0], [0, 1]], [[1, 0], [0, 3]], pk) is None


def test_brute_equivalent_agrees_with_scan_of_the_group():
    # the column search must find exactly the pairs that a full scan of GL_2(Z/4) finds
    pk = PrimePower(2, 2)
    group = [u.tolist() for u in enumerate_gl(2, pk)]
    forms = [[[a, b], [b, c]] for a, b, c in product(range(4), repeat=3)]
    for q1 in forms[::5]:
        images = {tuple(map(tuple, congruence(u, q1, 4))) for u in group}
        for q2 in forms[::3]:
            assert (brute_equivalent(q1, q2, pk) is not None) == (tuple(map(tuple, q2)) in images)


def test_brute_represent_examples():
    assert brute_represent([[1, 0], [0, 1]], 2, PrimePower(3, 2)) == (1, 1)
    assert brute_represent(T_MINUS.matrix(), 2, PrimePower(2, 3)) == (1, 0)
    assert brute_represent([[1, 0], [0, 4]], 3, PrimePower(2, 3)) is None
    # x odd gives 1 or 5; x even with y odd gives 0 or 4
    assert represented_values([[1, 0], [0, 4]], PrimePower(2, 3)) == {0, 1, 4, 5}


def test_orbit_partition_sizes():
    pk = PrimePower(3, 1)
    lab = orbit_partition_n2(pk)
    # nondegenerate binary forms over F_3 fall into two classes by discriminant
    nondeg = {f: o for f, o in lab.items() if (f[0] * f[2] - f[1] ** 2) % 3}
    assert len(set(nondeg.values())) == 2
    assert len(lab) == 27
