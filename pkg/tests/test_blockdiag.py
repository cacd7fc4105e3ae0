import random

import pytest
from hypothesis import given, strategies as st

from qfcanon.blockdiag import (BlockDiagForm, TypeI, TypeII, assemble, block_diagonalize, sort_blocks)
from qfcanon.errors import NotSymmetric
from qfcanon.matmod import IntQuadForm, ModMatrix, congruence, identity
from qfcanon.modint import PrimePower, int_symbol

from helpers import default_k, random_form, seeds


def check_shape(d, p):
    for b in d.blocks:
        if b.kind == "I":
            assert b.unit % p
        else:
            assert p == 2 and b.b % 2


def test_hyperbolic_plane_stays_type_two():
    d, w = block_diagonalize(IntQuadForm([[0, 1], [1, 0]]), PrimePower(2, 3))
    assert d.blocks == (TypeII(0, 1, 0),)
    assert w.u.tolist() == identity(2)


def test_hyperbolic_plane_diagonalizes_for_odd_p():
    # frozen: pivot after b1 <- b1 + b2, then one elimination
    d, w = block_diagonalize(IntQuadForm([[0, 1], [1, 0]]), PrimePower(3, 2))
    assert [b.unit for b in d.blocks] == [2, 4]
    assert d.assemble().det() == 8
    assert w.u.det() == 1


def test_diagonal_input_is_fixed():
    d, w = block_diagonalize(IntQuadForm.diag(3, 6, 9), PrimePower(3, 3))
    assert [(b.unit, b.scale) for b in d.blocks] == [(1, 1), (2, 1), (1, 2)]
    assert w.u.tolist() == identity(3)


def test_sort_examples():
    pk = PrimePower(3, 3)
    d, w = sort_blocks(BlockDiagForm(pk, (TypeI(1, 2), TypeI(2, 0)), 0))
    assert d.blocks == (TypeI(2, 0), TypeI(1, 2))
    assert w.u.tolist() == [[0, 1], [1, 0]]
    d, w = sort_blocks(BlockDiagForm(pk, (TypeI(2, 0), TypeI(1, 2)), 0))
    assert w.u.tolist() == identity(2)
    pk = PrimePower(2, 4)
    d, w = sort_blocks(BlockDiagForm(pk, (TypeI(1, 1), TypeII(1, 1, 1)), 0))
    assert d.blocks == (TypeII(1, 1, 1), TypeI(1, 1))
    assert w.u.tolist() == [[0, 0, 1], [1, 0, 0], [0, 1, 0]]


def test_assemble_examples():
    pk = PrimePower(2, 4)
    assert assemble(BlockDiagForm(pk, (TypeI(3, 1),), 0)).tolist() == [[6]]
    assert assemble(BlockDiagForm(pk, (TypeII(0, 1, 0, 2),), 0)).tolist() == [[0, 4], [4, 0]]
    assert assemble(BlockDiagForm(pk, (), 0)).tolist() == []
    assert assemble(BlockDiagForm(pk, (TypeI(1),), 2)).tolist() == [[1, 0, 0], [0, 0, 0], [0, 0, 0]]


def test_zero_dimensions_are_counted():
    d, _ = block_diagonalize(IntQuadForm([[1, 0, 0], [0, 8, 0], [0, 0, 0]]), PrimePower(2, 3))
    assert d.zero_dim == 2 and d.blocks == (TypeI(1),)


def test_rejects_asymmetric():
    with pytest.raises(NotSymmetric):
        block_diagonalize([[1, 2], [3, 4]], PrimePower(3, 2))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_random_forms_block_diagonalize(p):
    rng = random.Random(p)
    for _ in range(250):
        q = random_form(rng, rng.randint(1, 6))
        pk = PrimePower(p, default_k(q, p))
        d, w = block_diagonalize(q, pk)
        assert w.u.det() == 1
        assert congruence(w.u.tolist(), q.tolist(), pk.modulus) == d.assemble().tolist()
        check_shape(d, p)
        if p != 2:
            assert all(b.kind == "I" for b in d.blocks)
        assert d.zero_dim == 0
        # u in SL_n preserves the determinant exactly mod p^k
        assert int_symbol(d.assemble().det(), pk) == int_symbol(q.det(), pk)


@given(st.sampled_from([2, 3, 5]), st.integers(1, 6), st.integers(1, 6), seeds)
def test_block_diagonalize_property(p, n, k, rng):
    pk = PrimePower(p, k)
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            a[i][j] = a[j][i] = rng.randrange(pk.modulus) * rng.choice([1, p, p * p])
    d, w = block_diagonalize(a, pk)
    assert w.u.det() == 1
    assert ModMatrix(a, pk).congruence(w.u).tolist() == d.assemble().tolist()
    assert sum(b.dim for b in d.blocks) + d.zero_dim == n
    check_shape(d, p)
    s, ws = sort_blocks(d)
    assert [b.scale for b in s.blocks] == sorted(b.scale for b in s.blocks)
    assert ws.target == tuple(tuple(r) for r in s.assemble().tolist())
