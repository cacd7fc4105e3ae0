import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from qfcanon.blockdiag import T_MINUS, T_PLUS, TypeI, TypeII
from qfcanon.canon import (TABLE_1, absorb_type2_dim3, can_block, canonicalize, canonicalize_compartment,
                           canp2_pair, compartment_dim3, compartment_target, sign_walk_step,
                           transform_between, type2_canonical)
from qfcanon.errors import Degenerate, Inequivalent, PrecisionTooLow
from qfcanon.matmod import IntQuadForm, congruence, identity
from qfcanon.modint import PrimePower, kronecker2, sigma_p
from qfcanon.oracle import brute_equivalent
from qfcanon.symbols import canonical_symbol

from helpers import block_form, conjugate, default_k, random_form, seeds


def diag_of(blocks):
    return [b.unit for b in blocks]


def lexmin_in_class(scales, taus):
    """Least unit tuple over the given scales whose diagonal has the same canonical 2-symbol."""
    want = canonical_symbol(IntQuadForm.diag(*[t * 2 ** s for t, s in zip(taus, scales)]), 2)
    for cand in product((1, 3, 5, 7), repeat=len(scales)):
        if canonical_symbol(IntQuadForm.diag(*[t * 2 ** s for t, s in zip(cand, scales)]), 2) == want:
            return cand


# ---- single blocks and pairs

def test_can_block_examples():
    b, w = can_block(TypeI(4), PrimePower(3, 2))
    # x^2 * 4 = 1 mod 9 has the roots 4 and 5; the least one is returned
    assert b == TypeI(1) and w.u.tolist() == [[4]]
    assert 5 * 5 * 4 % 9 == 1
    b, w = can_block(TypeII(0, 1, 0), PrimePower(2, 3))
    assert b == T_PLUS
    b, w = can_block(TypeI(11), PrimePower(2, 5))
    assert b == TypeI(3)


def test_canp2_pair_examples():
    out, w = canp2_pair(1, 1, 5, 3)
    assert out == (1, 1) and w.u.tolist() == identity(2)
    out, w = canp2_pair(2, 2, 3, 2)
    assert out == (1, 1)
    out, w = canp2_pair(1, 2, 3, 2)
    assert out == (1, 2) == (1, sigma_p(3))


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_canp2_pair_all_classes(p):
    for t1 in range(1, p):
        for t2 in range(1, p):
            (u1, u2), w = canp2_pair(t1, t2, p, 3)
            assert u1 == 1 and u2 == (1 if kronecker_like(t1 * t2, p) else sigma_p(p))


def kronecker_like(t, p):
    return pow(t, (p - 1) // 2, p) == 1


def test_type2_canonical_examples():
    b, w = type2_canonical(T_MINUS, 3)
    assert b == T_MINUS
    b, w = type2_canonical(TypeII(0, 1, 0), 3)
    assert b == T_PLUS and w.target == ((2, 1), (1, 4))
    b, w = type2_canonical(TypeII(2, 3, 1), 4)
    assert b == T_PLUS
    assert brute_equivalent([[4, 3], [3, 2]], T_PLUS.matrix(), PrimePower(2, 4)) is not None


def test_absorb_examples():
    for tau, t, row in ((1, T_MINUS, (3, 3, 3)), (7, T_PLUS, (1, 3, 3))):
        out, w = absorb_type2_dim3(tau, t, 3)
        assert all(x % 2 for x in out)
        assert canonical_symbol(IntQuadForm.diag(*out), 2) == canonical_symbol(IntQuadForm.diag(*row), 2)


def test_sign_walk_step_examples():
    out, w = sign_walk_step("i", [TypeI(1), TypeI(1, 2)], 5)
    assert out == [TypeI(5), TypeI(5, 2)]
    out, w = sign_walk_step("ii", [TypeI(1), T_MINUS], 4)
    assert out == [TypeI(5), T_PLUS.at_scale(1)]
    out, w = sign_walk_step("iv", [T_MINUS, T_MINUS], 3)
    assert out == [T_PLUS, T_PLUS]
    out, w = sign_walk_step("iii", [T_MINUS, TypeI(1)], 4)
    assert out[0] == T_PLUS and out[1].unit % 8 == 5
    with pytest.raises(PrecisionTooLow):
        sign_walk_step("i", [TypeI(1), TypeI(1, 2)], 4)


def walk_inputs(shape):
    units, ts = (1, 3, 5, 7), (T_MINUS, T_PLUS)
    if shape == "i":
        return [(TypeI(a), TypeI(b, 2)) for a, b in product(units, units)]
    if shape == "ii":
        return [(TypeI(a), t) for a, t in product(units, ts)]
    if shape == "iii":
        return [(t, TypeI(a, 1)) for t, a in product(ts, units)]
    return list(product(ts, ts))


@pytest.mark.parametrize("shape,k", [("i", 5), ("ii", 4), ("iii", 4), ("iv", 3)])
def test_sign_walk_steps_keep_the_class(shape, k):
    for first, second in walk_inputs(shape):
        out, w = sign_walk_step(shape, [first, second], k)
        # the witness verifies on construction; the symbol class is unchanged
        src = [list(r) for r in w.source]
        dst = [list(r) for r in w.target]
        assert canonical_symbol(src, 2) == canonical_symbol(dst, 2)
        if shape == "iv":
            assert out[1] == T_PLUS


# ---- compartments

def test_table_1_matches_class_minimum():
    for (sign, odd), row in TABLE_1.items():
        assert compartment_target(((0, 3),), sign, odd) == row
        assert kronecker2(row[0] * row[1] * row[2]) == sign and sum(row) % 8 == odd


@pytest.mark.parametrize("row", sorted(TABLE_1.items()))
def test_compartment_dim3_examples(row):
    (sign, odd), want = row
    rng = random.Random(odd)
    triples = [t for t in product((1, 3, 5, 7), repeat=3)
               if kronecker2(t[0] * t[1] * t[2]) == sign and sum(t) % 8 == odd]
    for t in triples:
        lift = [x + 8 * rng.randrange(4) for x in t]
        got, w = compartment_dim3(*lift, 4, rng)
        assert got == want
        assert w.target == tuple(tuple(r) for r in IntQuadForm.diag(*want).tolist())


def test_canonicalize_compartment_examples():
    out, w = canonicalize_compartment([(0, 3), (0, 5)], 4)
    assert diag_of(out) == [1, 7]
    out, w = canonicalize_compartment([(0, 5)], 4)
    assert diag_of(out) == [5]
    # frozen from the class enumeration below
    out, w = canonicalize_compartment([(0, 1), (0, 3), (0, 3), (1, 1)], 6)
    assert diag_of(out) == [1, 1, 5, 5]
    assert tuple(diag_of(out)) == lexmin_in_class((0, 0, 0, 1), (1, 3, 3, 1))


def test_compartment_witness_starts_from_the_input_order():
    out, w = canonicalize_compartment([(1, 1), (0, 13), (0, 9)], 6)
    assert w.source == ((2, 0, 0), (0, 13, 0), (0, 0, 9))
    assert congruence(w.u.tolist(), IntQuadForm.diag(2, 13, 9).tolist(), 64) == \
        [list(r) for r in w.target]
    got, w = compartment_dim3(9, 11, 5, 4, random.Random(1))
    assert congruence(w.u.tolist(), IntQuadForm.diag(9, 11, 5).tolist(), 16) == \
        IntQuadForm.diag(*got).tolist()


def test_compartment_minimum_against_class_enumeration():
    rng = random.Random(3)
    for scales in [(0,), (0, 0), (0, 1), (0, 0, 1), (0, 1, 1), (0, 1, 2), (0, 0, 0, 1), (0, 1, 1, 2),
                   (0, 0, 1, 1)]:
        reps = {}
        for taus in product((1, 3, 5, 7), repeat=len(scales)):
            q = IntQuadForm.diag(*[t * 2 ** s for t, s in zip(taus, scales)])
            reps.setdefault(canonical_symbol(q, 2), taus)
        for taus in reps.values():
            q = IntQuadForm.diag(*[t * 2 ** s for t, s in zip(taus, scales)])
            c, _ = canonicalize(q, 2, None, rng)
            assert [b.kind for b in c.blocks] == ["I"] * len(scales)
            assert tuple(diag_of(c.blocks)) == taus


# ---- whole forms

def test_canonicalize_examples():
    c, w = canonicalize(IntQuadForm.diag(9, 1, 3), 3, 4)
    assert c.matrix.tolist() == [[1, 0, 0], [0, 3, 0], [0, 0, 9]]
    assert all(sorted(r) == [0, 0, 1] for r in w.u.tolist())
    c, _ = canonicalize(IntQuadForm.diag(2, 2), 3, 2)
    assert c.matrix.tolist() == [[1, 0], [0, 1]]
    c, _ = canonicalize(IntQuadForm.diag(2, 2), 3)
    assert c.matrix.tolist() == [[1, 0], [0, 1]]
    c, _ = canonicalize([[0, 1], [1, 0]], 2, 3)
    assert c.blocks == (T_PLUS,)
    c, _ = canonicalize(IntQuadForm.diag(3, 5), 2, 4)
    assert c.matrix.tolist() == [[1, 0], [0, 7]]
    c, _ = canonicalize(IntQuadForm.diag(1, 4), 2, 5)
    assert c.matrix.tolist() == [[1, 0], [0, 4]]
    assert (1, 1) == lexmin_in_class((0, 2), (1, 1))
    c, _ = canonicalize(T_MINUS.matrix(), 2)
    assert c.blocks == (T_MINUS,)
    c, _ = canonicalize([[1]], 5)
    assert c.matrix.tolist() == [[1]]


def test_canonical_input_is_a_fixed_point():
    for q, p in ((IntQuadForm.diag(1, 2, 3), 3), (IntQuadForm.diag(1, 7, 4), 2)):
        c, _ = canonicalize(q, p)
        c2, w2 = canonicalize(c.matrix.tolist(), p, c.modulus.k)
        assert c2.blocks == c.blocks


def test_canonicalize_errors():
    with pytest.raises(PrecisionTooLow):
        canonicalize(IntQuadForm.diag(1, 9), 3, 2)
    with pytest.raises(PrecisionTooLow):
        canonicalize(IntQuadForm.diag(1, 4), 2, 4)
    with pytest.raises(Degenerate):
        canonicalize([[1, 1], [1, 1]], 2)


def test_transform_between_examples():
    for a, b, k in (((3, 5), (1, 7), 4), ((1, 4), (5, 20), 5)):
        w = transform_between(IntQuadForm.diag(*a), IntQuadForm.diag(*b), 2, k)
        m = 2 ** k
        assert congruence(w.u.tolist(), IntQuadForm.diag(*a).tolist(), m) == \
            [[v % m for v in r] for r in IntQuadForm.diag(*b).tolist()]
    for p in (3, 5, 7):
        with pytest.raises(Inequivalent):
            transform_between(IntQuadForm.diag(1, 1), IntQuadForm.diag(1, sigma_p(p)), p)


def test_transform_between_self():
    q = IntQuadForm([[2, 1, 0], [1, 4, 3], [0, 3, 6]])
    for p in (2, 3, 5):
        w = transform_between(q, q, p)
        m = w.pk.modulus
        assert w.target == tuple(tuple(v % m for v in r) for r in w.source)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_symbol_consistency(p):
    rng = random.Random(20 + p)
    for _ in range(100):
        q = block_form(rng, p, 5)
        c, w = canonicalize(q, p, None, rng)
        assert canonical_symbol(c.matrix.tolist(), p) == canonical_symbol(q, p)
        if p == 2:
            types = {}
            for b in c.blocks:
                types.setdefault(b.scale, set()).add(b.kind)
            assert all(len(v) == 1 for v in types.values())


@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 5), st.booleans(), seeds)
def test_invariance_and_idempotence(p, n, structured, rng):
    q = block_form(rng, p, n) if structured else random_form(rng, n, -20, 20)
    pk = PrimePower(p, default_k(q, p) + rng.randrange(3))
    c, w = canonicalize(q, p, pk.k, rng)
    q2, _ = conjugate(q, pk, rng)
    c2, _ = canonicalize(q2, p, pk.k, rng)
    assert c2.blocks == c.blocks
    c3, _ = canonicalize(c.matrix.tolist(), p, pk.k, rng)
    assert c3.blocks == c.blocks
    # p^k-equivalence really follows from the symbol: transform between the two directly
    w2 = transform_between(q, q2, p, pk.k, rng)
    assert w2.target == tuple(tuple(v % pk.modulus for v in r) for r in q2.tolist())
