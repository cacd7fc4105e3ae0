"""Diagonal (odd p) and Type I / Type II block diagonal (p = 2) forms over Z/p^k."""

from dataclasses import dataclass

from .errors import NotSymmetric
from .matmod import (IntQuadForm, ModMatrix, Witness, as_form, direct_sum_rows, identity,
                     is_symmetric, rows_of)
from .modint import inv_mod, padic_split


@dataclass(frozen=True)
class TypeI:
    """The 1x1 block p^scale * unit."""
    unit: int
    scale: int = 0

    dim = 1
    kind = "I"

    def matrix(self):
        return [[self.unit]]

    def scaled(self, p):
        return [[p ** self.scale * self.unit]]

    def at_scale(self, scale):
        return TypeI(self.unit, scale)


@dataclass(frozen=True)
class TypeII:
    """The 2x2 block 2^scale * [[2a, b], [b, 2c]] with b odd."""
    a: int
    b: int
    c: int
    scale: int = 0

    dim = 2
    kind = "II"

    def matrix(self):
        return [[2 * self.a, self.b], [self.b, 2 * self.c]]

    def scaled(self, p):
        s = p ** self.scale
        return [[2 * self.a * s, self.b * s], [self.b * s, 2 * self.c * s]]

    def det(self):
        return 4 * self.a * self.c - self.b * self.b

    def at_scale(self, scale):
        return TypeII(self.a, self.b, self.c, scale)


# the two canonical Type II blocks
T_MINUS = TypeII(1, 1, 1)
T_PLUS = TypeII(1, 1, 2)


def assemble_rows(blocks, p, m, zero_dim=0):
    out = []
    for b in blocks:
        out = direct_sum_rows(out, b.scaled(p))
    if zero_dim:
        out = direct_sum_rows(out, [[0] * zero_dim for _ in range(zero_dim)])
    return [[v % m for v in r] for r in out]


@dataclass(frozen=True)
class BlockDiagForm:
    pk: object
    blocks: tuple
    zero_dim: int = 0

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))

    @property
    def n(self):
        return sum(b.dim for b in self.blocks) + self.zero_dim

    def assemble(self):
        return ModMatrix(assemble_rows(self.blocks, self.pk.p, self.pk.modulus, self.zero_dim), self.pk)

    def scales(self):
        return sorted({b.scale for b in self.blocks})

    def __str__(self):
        parts = []
        for b in self.blocks:
            s = f"{self.pk.p}^{b.scale}*" if b.scale else ""
            if b.kind == "I":
                parts.append(f"{s}{b.unit}")
            else:
                parts.append(f"{s}[[{2 * b.a},{b.b}],[{b.b},{2 * b.c}]]")
        parts += ["0"] * self.zero_dim
        return " + ".join(parts) if parts else "(empty)"


def _signed_swap(M, U, t, i):
    """Basis change b_t <- b_i, b_i <- -b_t (determinant 1)."""
    if i == t:
        return
    for row in M:
        row[t], row[i] = row[i], -row[t]
    M[t], M[i] = M[i], [-v for v in M[t]]
    for row in U:
        row[t], row[i] = row[i], -row[t]


def _order(v, p, k):
    if v == 0:
        return k
    o = 0
    while v % p == 0:
        v //= p
        o += 1
    return o


def block_diag_rows(M, p, k):
    """Core elimination.  Returns (blocks, zero_dim, U) with U' M U block diagonal.

    M is a symmetric list-of-lists; entries are reduced mod p^k first.  Pivot
    choice: the least-index diagonal entry of minimal order, otherwise (p odd)
    fold the lexicographically least minimal off-diagonal entry onto the
    diagonal, or (p = 2) split off a Type II block there.
    """
    m = p ** k
    n = len(M)
    M = [[v % m for v in r] for r in M]
    U = identity(n)
    blocks = []
    t = 0
    while t < n:
        best, where = k, None
        for i in range(t, n):
            o = _order(M[i][i], p, k)
            if o < best:
                best, where = o, (i, i)
        for i in range(t, n):
            for j in range(i + 1, n):
                o = _order(M[i][j], p, k)
                if o < best:
                    best, where = o, (i, j)
        if where is None:
            break
        o = best
        i, j = where
        if i == j:
            _signed_swap(M, U, t, i)
            d = M[t][t]
            mo = m // p ** o
            u = d // p ** o
            uinv = inv_mod(u, m)
            cs = [0] * n
            for j2 in range(t + 1, n):
                cs[j2] = (M[t][j2] // p ** o) * uinv % m
            for r in range(t + 1, n):
                mr = M[r][t]
                if mr:
                    row = M[r]
                    for j2 in range(t + 1, n):
                        if cs[j2]:
                            row[j2] = (row[j2] - cs[j2] * mr) % m
            for r in range(t + 1, n):
                M[r][t] = M[t][r] = 0
            for row in U:
                ut = row[t]
                if ut:
                    for j2 in range(t + 1, n):
                        if cs[j2]:
                            row[j2] = (row[j2] - cs[j2] * ut) % m
            blocks.append(TypeI(u % mo, o))
            t += 1
        elif p != 2:
            # b_i <- b_i + b_j brings the minimal order onto the diagonal
            for row in M:
                row[i] = (row[i] + row[j]) % m
            M[i] = [(x + y) % m for x, y in zip(M[i], M[j])]
            for row in U:
                row[i] = (row[i] + row[j]) % m
        else:
            _signed_swap(M, U, t, i)
            if j == t:
                j = i
            _signed_swap(M, U, t + 1, j)
            s = 2 ** o
            mo = m // s
            b00, b01, b11 = M[t][t] // s, M[t][t + 1] // s, M[t + 1][t + 1] // s
            det0 = b00 * b11 - b01 * b01
            dinv = inv_mod(det0, mo)
            # inverse of [[b00, b01], [b01, b11]] mod 2^(k-o)
            i00, i01, i11 = b11 * dinv % mo, -b01 * dinv % mo, b00 * dinv % mo
            rs = {}
            for l in range(t + 2, n):
                x, y = M[t][l] // s, M[t + 1][l] // s
                if x or y:
                    rs[l] = ((i00 * x + i01 * y) % mo, (i01 * x + i11 * y) % mo)
            for r in range(t + 2, n):
                a0, a1 = M[r][t], M[r][t + 1]
                if a0 or a1:
                    row = M[r]
                    for l, (rl, sl) in rs.items():
                        row[l] = (row[l] - rl * a0 - sl * a1) % m
            for r in range(t + 2, n):
                M[r][t] = M[t][r] = M[r][t + 1] = M[t + 1][r] = 0
            for row in U:
                u0, u1 = row[t], row[t + 1]
                if u0 or u1:
                    for l, (rl, sl) in rs.items():
                        row[l] = (row[l] - rl * u0 - sl * u1) % m
            blocks.append(TypeII(M[t][t] // (2 * s) % (mo // 2 or 1), M[t][t + 1] // s % mo,
                                 M[t + 1][t + 1] // (2 * s) % (mo // 2 or 1), o))
            t += 2
    return blocks, n - t, U


def block_diagonalize(q, pk):
    """Block diagonal form of q over Z/p^k with a determinant-1 witness."""
    rows = rows_of(q)
    if not is_symmetric(rows):
        raise NotSymmetric("Gram matrix must be symmetric")
    blocks, zero_dim, U = block_diag_rows(rows, pk.p, pk.k)
    d = BlockDiagForm(pk, blocks, zero_dim)
    return d, Witness(rows, d.assemble().entries, ModMatrix(U, pk), pk)


def sort_permutation(blocks):
    """Block order by ascending scale, Type I before Type II at equal scale (stable)."""
    return sorted(range(len(blocks)), key=lambda i: (blocks[i].scale, blocks[i].dim))


def permutation_matrix(blocks, order, n):
    """U whose columns pick out the basis vectors of blocks in the given order."""
    offs, o = [], 0
    for b in blocks:
        offs.append(o)
        o += b.dim
    U = [[0] * n for _ in range(n)]
    col = 0
    for bi in order:
        for d in range(blocks[bi].dim):
            U[offs[bi] + d][col] = 1
            col += 1
    for r in range(col, n):
        U[r][r] = 1
    return U


def sort_blocks(d):
    order = sort_permutation(d.blocks)
    U = permutation_matrix(d.blocks, order, d.n)
    out = BlockDiagForm(d.pk, [d.blocks[i] for i in order], d.zero_dim)
    return out, Witness(d.assemble().entries, out.assemble().entries, ModMatrix(U, d.pk), d.pk)


def assemble(d):
    return d.assemble()


def form_p_order(q, p):
    """ord_p of the determinant of an integral form (INF when singular)."""
    return padic_split(as_form(q).det(), p)[0]


__all__ = ["TypeI", "TypeII", "T_MINUS", "T_PLUS", "BlockDiagForm", "block_diagonalize",
           "sort_blocks", "assemble", "IntQuadForm"]
