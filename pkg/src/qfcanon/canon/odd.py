"""Canonical forms for odd p: each scale becomes I, or I with a trailing sigma_p."""

from ..blockdiag import TypeI, block_diag_rows
from ..errors import Degenerate, PrecisionTooLow
from ..matmod import ModMatrix, Witness, as_form, congruence, extend_primitive, mat_mul
from ..modint import PrimePower, inv_mod, legendre, nonresidue_sum_pair, padic_split, sigma_p, sqrt_mod
from ._stage import Stage


def unit_target(tau, p):
    return 1 if legendre(tau, p) == 1 else sigma_p(p)


def scale_unit(tau, target, pk):
    """x with x^2 tau = target (mod p^k); tau and target in the same square class."""
    return sqrt_mod(target * inv_mod(tau, pk.modulus) % pk.modulus, pk)


def canp2_pair_rows(t1, t2, pk):
    """(V, (1, tau)) with V' diag(t1, t2) V = diag(1, tau), tau in {1, sigma_p}."""
    p, m = pk.p, pk.modulus
    l1, l2 = legendre(t1, p), legendre(t2, p)
    if l1 == 1:
        x = scale_unit(t1, 1, pk)
        tgt = unit_target(t2, p)
        y = scale_unit(t2, tgt, pk)
        return [[x, 0], [0, y]], (1, tgt)
    if l2 == 1:
        V, out = canp2_pair_rows(t2, t1, pk)
        # swap first: columns of V act on (e2, e1)
        return [[V[1][0], V[1][1]], [V[0][0], V[0][1]]], out
    # both non-residues: 1 = n1 + (1 - n1) with both summands non-residues
    n1, _ = nonresidue_sum_pair(p)
    x = scale_unit(t1, n1, pk)
    y = scale_unit(t2, (1 - n1) % m, pk)
    E = extend_primitive([x, y], pk).tolist()
    S = congruence(E, [[t1, 0], [0, t2]], m)
    # S[0][0] = 1; clear the off-diagonal entry
    c = S[0][1] % m
    W = [[1, -c % m], [0, 1]]
    S2 = congruence(W, S, m)
    d = S2[1][1]
    tgt = unit_target(d, p)
    z = scale_unit(d, tgt, pk)
    V = mat_mul(mat_mul(E, W, m), [[1, 0], [0, z]], m)
    return V, (1, tgt)


def canp2_pair(t1, t2, p, k):
    """Pair step: diag(t1, t2) -> diag(1, tau) with a witness."""
    pk = PrimePower(p, k)
    V, out = canp2_pair_rows(t1, t2, pk)
    return out, Witness([[t1, 0], [0, t2]], [[out[0], 0], [0, out[1]]], ModMatrix(V, pk), pk)


def odd_precision(q, p, k):
    d = as_form(q).det()
    if d == 0:
        raise Degenerate("form is singular")
    o = padic_split(d, p)[0]
    if k is None:
        return o + 1
    if k <= o:
        raise PrecisionTooLow(f"need k > ord_p(det) = {o}")
    return k


def canonical_blocks_odd(symbol):
    p = symbol.p
    out = []
    for i, sign, n in symbol.entries:
        out += [TypeI(1, i)] * (n - 1) + [TypeI(1 if sign > 0 else sigma_p(p), i)]
    return out


def run_odd(q, p, k=None):
    """Stage holding can_p(q) and the transformation, for an odd prime p."""
    q = as_form(q)
    k = odd_precision(q, p, k)
    pk = PrimePower(p, k)
    blocks, zero_dim, U = block_diag_rows(q.tolist(), p, k)
    if zero_dim:
        raise Degenerate("form vanishes modulo p^k in some direction")
    st = Stage(q.tolist(), blocks, U, pk)
    st.sort()
    i = 0
    while i < len(st.blocks):
        s = st.blocks[i].scale
        j = i
        while j < len(st.blocks) and st.blocks[j].scale == s:
            j += 1
        rel = PrimePower(p, k - s)
        if j - i == 1:
            b = st.blocks[i]
            tgt = unit_target(b.unit, p)
            x = scale_unit(b.unit, tgt, rel)
            st.replace(i, 1, [[x]], [TypeI(tgt, s)])
        for a in range(i, j - 1):
            t1, t2 = st.blocks[a].unit, st.blocks[a + 1].unit
            V, (u1, u2) = canp2_pair_rows(t1, t2, rel)
            st.replace(a, 2, V, [TypeI(u1, s), TypeI(u2, s)])
        i = j
    return st
