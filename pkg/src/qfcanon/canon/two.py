"""Canonical forms for p = 2.

Pipeline on the block diagonal form, each step a verified local transformation:
normalize blocks (Type I units to {1,3,5,7}, Type II to T+ or T-), sort by
scale, absorb Type II blocks into Type I at mixed scales, consolidate the sign
of each Type II scale onto its first block, walk minus signs to the front of
each train, and finally rewrite every compartment into its lexicographically
least diagonal.  The target itself is read off the canonical 2-symbol.
"""

from collections import Counter
from functools import lru_cache
import random

from ..blockdiag import T_MINUS, T_PLUS, TypeI, TypeII, assemble_rows, block_diag_rows
from ..errors import Degenerate, PrecisionTooLow, RetriesExhausted
from ..matmod import (Witness, ModMatrix, as_form, congruence, embed, extend_primitive,
                      identity, inverse_rows, mat_mul)
from ..modint import PrimePower, inv_mod, kronecker2, padic_split, sqrt_mod
from ..represent import lift_representation, represent_type2, search_blocks
from ..symbols import canonical_two_symbol, partition, two_symbol_from_blocks
from ._stage import Stage

# (sign, oddity) of a three-dimensional unimodular odd form -> least diagonal
TABLE_1 = {
    (1, 1): (1, 1, 7), (1, 3): (1, 1, 1), (1, 5): (3, 3, 7), (1, 7): (1, 3, 3),
    (-1, 1): (3, 3, 3), (-1, 3): (1, 3, 7), (-1, 5): (1, 1, 3), (-1, 7): (1, 1, 5),
}


def block_sign(b):
    return kronecker2(b.unit if b.kind == "I" else b.det())


# ---------------------------------------------------------------- single blocks

def unit_scaling(tau, kr):
    """x with x^2 tau = tau mod 8 (mod 2^kr)."""
    pk = PrimePower(2, kr)
    return sqrt_mod((tau % 8) * inv_mod(tau, pk.modulus) % pk.modulus, pk)


def type2_canonical_rows(b, kr):
    """(V, T) with V' [[2a,b],[b,2c]] V = T (mod 2^kr), T = T- if det = 3 mod 8 else T+.

    Computed at precision 2^(kr+1) so that the final diagonal entry 2y is exact
    modulo 2^kr: represent 2, complete to a unit triangular basis, fix the
    determinant by a square root, then shear the off-diagonal entry to 1.
    """
    s = kr + 1
    ms = 1 << s
    det = b.det()
    lam = 3 if det % 8 == 3 else 7
    x1, x2 = represent_type2(b, 2, s).vector
    q = b.matrix()
    P = identity(2)
    if x1 % 2 == 0:
        P = [[0, 1], [1, 0]]
        q = congruence(P, q)
        x1, x2 = x2, x1
    U1 = [[x1, 0], [x2, inv_mod(x1, ms)]]
    q1 = congruence(U1, q, ms)
    x = sqrt_mod(lam * inv_mod(det, ms) % ms, PrimePower(2, s))
    V2 = [[1, 0], [0, x]]
    q2 = congruence(V2, q1, ms)
    w = ((1 - q2[0][1]) // 2) % ms
    W = [[1, w], [0, 1]]
    V = mat_mul(mat_mul(mat_mul(P, U1), V2), W, ms)
    return V, (T_MINUS if lam == 3 else T_PLUS)


def type2_canonical(b, k):
    """Normalize one Type II block at scale 0 to T- or T+, with witness."""
    pk = PrimePower(2, k)
    V, t = type2_canonical_rows(b, k)
    return t, Witness(b.matrix(), t.matrix(), ModMatrix(V, pk), pk)


def normalize_rows(blocks, kr):
    """Block diagonal V bringing every block to its normal shape (relative scales)."""
    n = sum(b.dim for b in blocks)
    V = identity(n)
    out, off = [], 0
    for b in blocks:
        r = kr - b.scale
        if b.kind == "I":
            V[off][off] = unit_scaling(b.unit, r) if r > 0 else 1
            out.append(TypeI(b.unit % 8, b.scale))
        else:
            v, t = type2_canonical_rows(b, r)
            for i in range(2):
                for j in range(2):
                    V[off + i][off + j] = v[i][j]
            out.append(t.at_scale(b.scale))
        off += b.dim
    return V, out


def _local(blocks, Vm, kr):
    """Apply Vm to the relative blocks, re-diagonalize and normalize."""
    m = 1 << kr
    S = congruence(Vm, assemble_rows(blocks, 2, m), m)
    bl, zd, W = block_diag_rows(S, 2, kr)
    if zd:
        raise Degenerate("local step lost rank")
    Vn, out = normalize_rows(bl, kr)
    return mat_mul(mat_mul(Vm, W, m), Vn, m), out


# ---------------------------------------------------------------- absorption and walking

def absorb_rows(tau, t, kr):
    """tau + T (same scale) -> three odd diagonal entries."""
    m = 1 << kr
    Vt, tc = type2_canonical_rows(t, kr)
    V = embed(3, 1, Vt)
    if tc == T_PLUS:
        # move T+ to [[8,1],[1,2]], which has the same determinant class
        Vx, _ = type2_canonical_rows(TypeII(4, 1, 1), kr)
        V = mat_mul(V, embed(3, 1, inverse_rows(Vx, 2, m)), m)
        x = 8
    else:
        x = 2
    r = -tau * inv_mod(x + 1, m) % m
    Vm = [[1, 1, 1], [r, 1, 0], [0, 1, 1]]
    base = [TypeI(tau), TypeII(x // 2, 1, 1)]
    V2, out = _local(base, Vm, kr)
    assert all(b.kind == "I" for b in out)
    return mat_mul(V, V2, m), out


def absorb_type2_dim3(tau, t, k):
    pk = PrimePower(2, k)
    V, out = absorb_rows(tau, t, k)
    src = assemble_rows([TypeI(tau), t], 2, pk.modulus)
    return [b.unit for b in out], Witness(src, assemble_rows(out, 2, pk.modulus), ModMatrix(V, pk), pk)


def walk_i_rows(t1, t2, kr):
    """t1 + 4 t2 -> (t1+4) + 4 (t2+4) (classes mod 8)."""
    m = 1 << kr
    x = -t1 * inv_mod(t2, m) % m
    return _local([TypeI(t1), TypeI(t2, 2)], [[1, 4], [1, x]], kr)


def walk_ii_rows(tau, t, kr):
    """tau + 2T -> (tau+4) + 2T' with T' of the opposite sign."""
    return _local([TypeI(tau), t.at_scale(1)], [[1, 0, 0], [1, 1, 0], [0, 0, 1]], kr)


def walk_iii_rows(t, tau, kr):
    """T + 2 tau -> T' + 2 (5 tau) with T' of the opposite sign."""
    return _local([t.at_scale(0), TypeI(tau, 1)], [[1, 0, 0], [0, 1, 0], [0, 1, 1]], kr)


def walk_iv_rows(t1, t2, kr):
    """T1 + T2 at one scale -> sign carried by the first block, second T+."""
    if t2 == T_MINUS and t1 == T_PLUS:
        P = [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]
        return P, [T_MINUS, T_PLUS]
    if t2 == T_MINUS and t1 == T_MINUS:
        return _local([t1, t2], [[1, 0, 0, 0], [0, 1, 0, 0], [0, 1, 1, 0], [0, 0, 0, 1]], kr)
    return identity(4), [t1, t2]


_WALK_THRESHOLD = {"i": 5, "ii": 4, "iii": 4, "iv": 3}


def sign_walk_step(shape, blocks, k):
    """One of the four elementary sign moves on a pair of adjacent blocks, with witness.

    shape "i": (tau1, 4 tau2); "ii": (tau, 2T); "iii": (T, 2 tau); "iv": (T1, T2).
    Blocks are given at scale 0 / relative scales as in the shape.
    """
    if k < _WALK_THRESHOLD[shape]:
        raise PrecisionTooLow(f"shape {shape} needs k >= {_WALK_THRESHOLD[shape]}")
    a, b = blocks
    fn = {"i": lambda: walk_i_rows(a.unit, b.unit, k),
          "ii": lambda: walk_ii_rows(a.unit, b, k),
          "iii": lambda: walk_iii_rows(a, b.unit, k),
          "iv": lambda: walk_iv_rows(a, b, k)}[shape]
    V, out = fn()
    src = {"i": [a.at_scale(0), b.at_scale(2)], "ii": [a.at_scale(0), b.at_scale(1)],
           "iii": [a.at_scale(0), b.at_scale(1)], "iv": [a, b]}[shape]
    pk = PrimePower(2, k)
    m = pk.modulus
    return out, Witness(assemble_rows(src, 2, m), assemble_rows(out, 2, m), ModMatrix(V, pk), pk)


# ---------------------------------------------------------------- canonical targets

def _comp_invariants(entries):
    """(dims per relative scale, sign product, oddity with minus signs walked to the front)."""
    if not entries:
        return None
    lo = entries[0][0]
    dims, signs, odd = Counter(), {}, 0
    for s, tau in entries:
        dims[s] += 1
        signs[s] = signs.get(s, 1) * kronecker2(tau)
        odd += tau
    e = 1
    for s, sg in signs.items():
        e *= sg
        if sg < 0:
            odd += 4 * (s - lo)
    return tuple(sorted(dims.items())), e, odd % 8


def compartment_target(scale_dims, sign, oddity):
    """Lexicographically least tuple of units in {1,3,5,7} for a compartment class.

    scale_dims lists (scale, dim) in increasing scale; the class is fixed by the
    product of signs and the oddity after walking every minus sign to the
    first scale.
    """
    lo = scale_dims[0][0]
    slots = [s for s, n in scale_dims for _ in range(n)]
    N = len(slots)

    @lru_cache(maxsize=None)
    def feasible(pos, sg, om, e):
        # sg: sign so far within the scale of slot pos-1
        if pos == N:
            if sg < 0:
                om += 4 * (slots[-1] - lo)
            return om % 8 == oddity and e * sg == sign
        if pos > 0 and slots[pos] != slots[pos - 1]:
            if sg < 0:
                om += 4 * (slots[pos - 1] - lo)
            e, sg = e * sg, 1
        return any(feasible(pos + 1, sg * kronecker2(t), (om + t) % 8, e) for t in (1, 3, 5, 7))

    out, sg, om, e = [], 1, 0, 1
    for pos in range(N):
        if pos > 0 and slots[pos] != slots[pos - 1]:
            if sg < 0:
                om += 4 * (slots[pos - 1] - lo)
            e, sg = e * sg, 1
        for t in (1, 3, 5, 7):
            if feasible(pos + 1, sg * kronecker2(t), (om + t) % 8, e):
                out.append(t)
                sg, om = sg * kronecker2(t), (om + t) % 8
                break
        else:
            raise ValueError("no diagonal realizes this compartment class")
    return tuple(out)


def canonical_blocks_two(csym):
    """Canonical block sequence determined by a canonical 2-symbol."""
    comps = {c[0]: c for c in csym.compartments}
    terms = {t[0]: t for t in csym.terms}
    out = []
    done = set()
    for s, sign, dim, typ in csym.terms:
        if s in done:
            continue
        if typ == "II":
            cnt = dim // 2
            out += ([T_MINUS.at_scale(s)] + [T_PLUS.at_scale(s)] * (cnt - 1)) if sign < 0 \
                else [T_PLUS.at_scale(s)] * cnt
            done.add(s)
            continue
        lo, hi, total = comps[s]
        sd = [(j, terms[j][2]) for j in range(lo, hi + 1)]
        e, om = 1, total
        for j in range(lo, hi + 1):
            e *= terms[j][1]
            if terms[j][1] < 0:
                om += 4 * (j - lo)
        taus = compartment_target(sd, e, om % 8)
        slots = [j for j, n in sd for _ in range(n)]
        out += [TypeI(t, j) for t, j in zip(taus, slots)]
        done.update(range(lo, hi + 1))
    return out


# ---------------------------------------------------------------- pipeline stages

def _normalize_all(st):
    for i, b in enumerate(list(st.blocks)):
        V, nb = normalize_rows([b.at_scale(0)], st.k - b.scale)
        if nb[0] != b.at_scale(0):
            st.replace(i, 1, V, nb, base_scale=b.scale)


def _demix(st):
    while True:
        for i in range(len(st.blocks) - 1):
            a, b = st.blocks[i], st.blocks[i + 1]
            if a.kind == "I" and b.kind == "II" and a.scale == b.scale:
                V, nb = absorb_rows(a.unit, b.at_scale(0), st.k - a.scale)
                st.replace(i, 2, V, nb, base_scale=a.scale)
                break
        else:
            return


def _consolidate_type2(st):
    i = 0
    while i < len(st.blocks):
        if st.blocks[i].kind != "II":
            i += 1
            continue
        s = st.blocks[i].scale
        j = i
        while j < len(st.blocks) and st.blocks[j].kind == "II" and st.blocks[j].scale == s:
            j += 1
        for a in range(j - 1, i, -1):
            t1, t2 = st.blocks[a - 1].at_scale(0), st.blocks[a].at_scale(0)
            if t2 == T_MINUS:
                V, nb = walk_iv_rows(t1, t2, st.k - s)
                st.replace(a - 1, 2, V, nb, base_scale=s)
        i = j


def _units(st):
    """Trains as lists of units: ("C", lo, hi) compartments and ("T", s, s) Type II scales."""
    sym = two_symbol_from_blocks(st.blocks)
    ts = partition(sym)
    out = []
    for lo, hi in ts.trains:
        units, s = [], lo
        while s <= hi:
            c = ts.compartment_of(s)
            if c is not None:
                units.append(("C", c[0], c[1]))
                s = c[1] + 1
            else:
                if sym.term_at(s) is not None:
                    units.append(("T", s, s))
                s += 1
        out.append(units)
    return out


def _unit_sign(st, u):
    sg = 1
    for b in st.blocks:
        if u[1] <= b.scale <= u[2]:
            sg *= block_sign(b)
    return sg


def _flip(st, left, right):
    """Flip the signs of two neighbouring units of a train."""
    r = left[2]
    i = max(idx for idx, b in enumerate(st.blocks) if b.scale == r)
    a, b = st.blocks[i], st.blocks[i + 1]
    kr = st.k - r
    if left[0] == "C" and right[0] == "C":
        V, nb = walk_i_rows(a.unit, b.unit, kr)
    elif left[0] == "C":
        V, nb = walk_ii_rows(a.unit, b.at_scale(0), kr)
    else:
        V, nb = walk_iii_rows(a.at_scale(0), b.unit, kr)
    st.replace(i, 2, V, nb, base_scale=r)


def _walk_signs(st):
    for units in _units(st):
        for idx in range(len(units) - 1, 0, -1):
            if _unit_sign(st, units[idx]) < 0:
                _flip(st, units[idx - 1], units[idx])


def _sample_rep(blocks, t, kr, rng, tries=256):
    """Random primitive representation of t by relative Type I blocks, lifted mod 2^kr."""
    o = padic_split(t, 2)[0]
    mm = min(kr, o + 3)
    mod = 1 << mm
    coeffs = [(1 << b.scale) * b.unit for b in blocks]
    y = None
    for _ in range(tries):
        cand = [rng.randrange(mod) for _ in blocks]
        if any(c & 1 for c in cand) and sum(c * v * v for c, v in zip(coeffs, cand)) % mod == t % mod:
            y = cand
            break
    if y is None:
        y = search_blocks(blocks, 0, t, 2, mm, rng)
        if y is None:
            return None
    D = assemble_rows(blocks, 2, 1 << kr)
    return list(lift_representation(y, mm, D, t, PrimePower(2, kr)).vector)


def _settle(blocks, kr):
    """Normalize, sort and de-mix relative blocks; (V, blocks) or None if a pure Type II scale remains."""
    D = assemble_rows(blocks, 2, 1 << kr)
    sub = Stage(D, blocks, identity(len(D)), PrimePower(2, kr))
    _normalize_all(sub)
    sub.sort()
    _demix(sub)
    if any(b.kind == "II" for b in sub.blocks):
        return None
    return sub.U, sub.blocks


def canonicalize_compartment_rows(entries, target, kr, rng, prefer=None, budget=64):
    """(V, blocks) rewriting a diagonal compartment into the target diagonal.

    entries and target are lists of (relative scale, unit), both sorted by
    scale and of the same class.  Entries are split off one at a time: a
    random primitive representation of the wanted value is completed to a
    basis, the complement re-diagonalized, and kept only when it is still of
    the class the remaining target needs.
    """
    m = 1 << kr
    pk = PrimePower(2, kr)
    n = len(entries)
    cur = [TypeI(t, s) for s, t in entries]
    V = identity(n)
    placed = []
    for j in range(n - 1):
        s0 = cur[j].scale
        rem = Counter(target)
        rem.subtract(Counter(placed))
        cands = sorted({t for (s, t), c in rem.items() if c > 0 and s == s0})
        if j == 0 and prefer:
            cands = [c for c in prefer if c in cands] + [c for c in cands if c not in prefer]
        sub = cur[j:]
        D = assemble_rows(sub, 2, m)
        done = False
        for cand in cands:
            rest = rem.copy()
            rest[(s0, cand)] -= 1
            want = _comp_invariants(sorted(x for x, c in rest.items() for _ in range(max(c, 0))))
            for _ in range(budget):
                y = _sample_rep(sub, (1 << s0) * cand, kr, rng)
                if y is None:
                    break
                E = extend_primitive(y, pk).tolist()
                S = congruence(E, D, m)
                bl, zd, W = block_diag_rows(S, 2, kr)
                if zd or bl[0].kind != "I" or bl[0].scale != s0:
                    continue
                settled = _settle(bl[1:], kr)
                if settled is None:
                    continue
                Vr, restb = settled
                if _comp_invariants([(b.scale, b.unit) for b in restb]) != want:
                    continue
                L = mat_mul(mat_mul(E, W, m), embed(len(sub), 1, Vr), m)
                x = unit_scaling(bl[0].unit, kr - s0)
                L = mat_mul(L, embed(len(sub), 0, [[x]]), m)
                for row in V:
                    seg = row[j:]
                    row[j:] = [sum(a * L[i][c] for i, a in enumerate(seg)) % m for c in range(len(sub))]
                cur[j:] = [TypeI(cand, s0)] + restb
                placed.append((s0, cand))
                done = True
                break
            if done:
                break
        if not done:
            raise RetriesExhausted("could not split the compartment", stage="compartment")
    order = sorted(range(n), key=lambda i: (cur[i].scale, cur[i].unit))
    P = [[int(order[c] == r) for c in range(n)] for r in range(n)]
    V = mat_mul(V, P, m)
    cur = [cur[i] for i in order]
    if [(b.scale, b.unit) for b in cur] != sorted(target):
        raise RetriesExhausted("compartment did not reach its target", stage="compartment")
    return V, cur


def _canon_compartments(st, target, rng):
    sym = two_symbol_from_blocks(st.blocks)
    for lo, hi in partition(sym).compartments:
        idx = [i for i, b in enumerate(st.blocks) if lo <= b.scale <= hi]
        i, j = idx[0], idx[-1] + 1
        cur = [(b.scale - lo, b.unit) for b in st.blocks[i:j]]
        tgt = [(b.scale - lo, b.unit) for b in target if lo <= b.scale <= hi]
        if cur == tgt:
            continue
        V, nb = canonicalize_compartment_rows(cur, tgt, st.k - lo, rng)
        st.replace(i, j - i, V, nb, base_scale=lo)


def two_precision(q, k):
    d = as_form(q).det()
    if d == 0:
        raise Degenerate("form is singular")
    o = padic_split(d, 2)[0]
    if k is None:
        return o + 3
    if k < o + 3:
        raise PrecisionTooLow(f"need k >= ord_2(det) + 3 = {o + 3}")
    return k


def run_two(q, k=None, rng=None):
    """Stage holding can_2(q) and the accumulated transformation."""
    rng = rng or random.Random(0)
    q = as_form(q)
    k = two_precision(q, k)
    pk = PrimePower(2, k)
    blocks, zero_dim, U = block_diag_rows(q.tolist(), 2, k)
    if zero_dim:
        raise Degenerate("form vanishes modulo 2^k in some direction")
    st = Stage(q.tolist(), blocks, U, pk)
    _normalize_all(st)
    st.sort()
    _demix(st)
    target = canonical_blocks_two(canonical_two_symbol(two_symbol_from_blocks(st.blocks)))
    _consolidate_type2(st)
    _walk_signs(st)
    _consolidate_type2(st)
    _canon_compartments(st, target, rng)
    if st.blocks != target:
        raise RetriesExhausted("pipeline did not reach the canonical blocks", stage="final")
    return st


def canonicalize_compartment(entries, k, rng=None, prefer=None):
    """Rewrite a diagonal compartment [(scale, unit), ...] into its canonical diagonal."""
    rng = rng or random.Random(0)
    lo = min(s for s, _ in entries)
    order = sorted(range(len(entries)), key=lambda i: (entries[i][0], entries[i][1]))
    rel = [(entries[i][0] - lo, entries[i][1]) for i in order]
    # column j of P picks input slot order[j], so P' diag(entries) P is the sorted diagonal
    P = [[int(order[j] == i) for j in range(len(order))] for i in range(len(order))]
    pk = PrimePower(2, k)
    # normalize units first so the class computation sees residues mod 8
    scal = [unit_scaling(t, k - lo - s) for s, t in rel]
    rel8 = [(s, t % 8) for s, t in rel]
    e, om = _comp_invariants(rel8)[1:]
    sd = sorted(Counter(s for s, _ in rel8).items())
    taus = compartment_target(sd, e, om)
    slots = [s for s, n in sd for _ in range(n)]
    tgt = list(zip(slots, taus))
    kr = k - lo
    m = pk.modulus
    V0 = [[scal[i] if i == j else 0 for j in range(len(rel))] for i in range(len(rel))]
    if rel8 == tgt:
        V1, out = identity(len(rel)), [TypeI(t, s) for s, t in rel8]
    else:
        V1, out = canonicalize_compartment_rows(rel8, tgt, kr, rng, prefer=prefer)
    src = assemble_rows([TypeI(t, s) for s, t in entries], 2, m)
    dst = assemble_rows([b.at_scale(b.scale + lo) for b in out], 2, m)
    U = mat_mul(P, mat_mul(V0, V1, m), m)
    return [b.at_scale(b.scale + lo) for b in out], Witness(src, dst, ModMatrix(U, pk), pk)


def compartment_dim3(t1, t2, t3, k, rng=None):
    """Three odd units at one scale -> the tabulated least triple, with witness."""
    sign = kronecker2(t1 * t2 * t3)
    odd = (t1 + t2 + t3) % 8
    want = TABLE_1[(sign, odd)]
    # the 1+1+7 class is the one where splitting off 1 can leave a Type II rest
    prefer = [7] if want == (1, 1, 7) else None
    out, w = canonicalize_compartment([(0, t1), (0, t2), (0, t3)], k, rng, prefer=prefer)
    assert tuple(b.unit for b in out) == want
    return want, w
