"""Dense matrices over Z/p^k and the witness record.

Matrices are stored as tuples of row tuples of Python ints.  The plain
list-based helpers (mat_mul, congruence, ...) are what the algorithms use
internally; ModMatrix and IntQuadForm are the typed values at the API edge.
"""

from dataclasses import dataclass

from .errors import (DimensionMismatch, ModulusMismatch, NotInvertible, NotPrimitive,
                     NotSquare, NotSymmetric, RetriesExhausted, WitnessError)
from .modint import PrimePower, inv_mod


def rows_of(x):
    """Rows of any matrix-like value as a list of lists of ints."""
    if isinstance(x, (ModMatrix, IntQuadForm)):
        return [list(r) for r in x.entries]
    return [[int(v) for v in r] for r in x]


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(c) for c in zip(*a)]


def mat_mul(a, b, m=None):
    bt = list(zip(*b))
    if m is None:
        return [[sum(x * y for x, y in zip(r, c)) for c in bt] for r in a]
    return [[sum(x * y for x, y in zip(r, c)) % m for c in bt] for r in a]


def congruence(u, a, m=None):
    """u' a u, reduced mod m when given."""
    return mat_mul(transpose(u), mat_mul(a, u, m), m)


def reduce_mat(a, m):
    return [[v % m for v in r] for r in a]


def is_symmetric(a):
    n = len(a)
    return all(len(r) == n for r in a) and all(a[i][j] == a[j][i] for i in range(n) for j in range(i))


def det_int(a):
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if any(len(r) != n for r in a):
        raise NotSquare("determinant of a non-square matrix")
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def det_mod(a, m):
    return det_int(rows_of(a)) % m


def _minor(a, i, j):
    return [r[:j] + r[j + 1:] for k, r in enumerate(a) if k != i]


def adjugate(a):
    n = len(a)
    if n == 1:
        return [[1]]
    return [[(-1) ** (i + j) * det_int(_minor(a, j, i)) for j in range(n)] for i in range(n)]


def inverse_rows(a, p, m):
    """Inverse of a mod m = p^k (lists of ints)."""
    n = len(a)
    if any(len(r) != n for r in a):
        raise NotSquare("inverse of a non-square matrix")
    d = det_int(a) % m
    if d % p == 0:
        raise NotInvertible(f"determinant {d} is not a unit mod {p}")
    if n <= 4:
        dinv = inv_mod(d, m)
        return [[v * dinv % m for v in r] for r in adjugate(a)]
    # Gauss-Jordan with a unit pivot in each column
    aug = [[v % m for v in r] + [int(i == j) for j in range(n)] for i, r in enumerate(a)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] % p)
        aug[c], aug[piv] = aug[piv], aug[c]
        s = inv_mod(aug[c][c], m)
        aug[c] = [v * s % m for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(x - f * y) % m for x, y in zip(aug[i], aug[c])]
    return [r[n:] for r in aug]


def direct_sum_rows(a, b):
    na, nb = len(a), len(b)
    out = [list(r) + [0] * nb for r in a]
    out += [[0] * na + list(r) for r in b]
    return out


def embed(n, offset, v):
    """I + v + I: the n x n identity with v placed on the diagonal at offset."""
    u = identity(n)
    for i, r in enumerate(v):
        for j, x in enumerate(r):
            u[offset + i][offset + j] = x
    return u


@dataclass(frozen=True)
class ModMatrix:
    entries: tuple
    pk: PrimePower

    def __post_init__(self):
        m = self.pk.modulus
        rows = tuple(tuple(int(v) % m for v in r) for r in self.entries)
        if rows and len({len(r) for r in rows}) != 1:
            raise DimensionMismatch("ragged matrix")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def identity(cls, n, pk):
        return cls(identity(n), pk)

    @property
    def rows(self):
        return len(self.entries)

    @property
    def cols(self):
        return len(self.entries[0]) if self.entries else 0

    @property
    def n(self):
        return self.rows

    @property
    def p(self):
        return self.pk.p

    @property
    def k(self):
        return self.pk.k

    def tolist(self):
        return [list(r) for r in self.entries]

    def flat(self):
        return [v for r in self.entries for v in r]

    @property
    def T(self):
        return ModMatrix(transpose(self.entries), self.pk)

    def __matmul__(self, other):
        if other.pk != self.pk:
            raise ModulusMismatch("matrices over different rings")
        if self.cols != other.rows:
            raise DimensionMismatch("inner dimensions differ")
        return ModMatrix(mat_mul(self.entries, other.entries, self.pk.modulus), self.pk)

    def congruence(self, u):
        """u' self u."""
        return ModMatrix(congruence(rows_of(u), self.entries, self.pk.modulus), self.pk)

    def is_symmetric(self):
        return is_symmetric(self.entries)

    def det(self):
        if self.rows != self.cols:
            raise NotSquare("determinant of a non-square matrix")
        return det_mod(self.entries, self.pk.modulus)

    def inverse(self):
        return ModMatrix(inverse_rows(self.tolist(), self.pk.p, self.pk.modulus), self.pk)

    def is_invertible(self):
        return self.rows == self.cols and self.det() % self.pk.p != 0

    def __str__(self):
        w = max((len(str(v)) for r in self.entries for v in r), default=1)
        return "\n".join(" ".join(str(v).rjust(w) for v in r) for r in self.entries)


@dataclass(frozen=True)
class IntQuadForm:
    """Gram matrix of an integral quadratic form (exact integers, symmetric)."""
    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.entries)
        if not is_symmetric([list(r) for r in rows]):
            raise NotSymmetric("Gram matrix must be square and symmetric")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def diag(cls, *values):
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def n(self):
        return len(self.entries)

    def det(self):
        return det_int(self.tolist())

    def tolist(self):
        return [list(r) for r in self.entries]

    def mod(self, pk):
        return ModMatrix(self.entries, pk)

    def __str__(self):
        w = max((len(str(v)) for r in self.entries for v in r), default=1)
        return "\n".join(" ".join(str(v).rjust(w) for v in r) for r in self.entries)


def as_form(q):
    """Coerce a Gram matrix (IntQuadForm, ModMatrix, nested lists, array) to IntQuadForm."""
    if isinstance(q, IntQuadForm):
        return q
    return IntQuadForm(rows_of(q))


@dataclass(frozen=True)
class Witness:
    """U with U' source U = target (mod p^k); verified at construction."""
    source: tuple
    target: tuple
    u: ModMatrix
    pk: PrimePower

    def __post_init__(self):
        m = self.pk.modulus
        src = tuple(tuple(r) for r in rows_of(self.source))
        tgt = tuple(tuple(v % m for v in r) for r in rows_of(self.target))
        u = self.u if isinstance(self.u, ModMatrix) else ModMatrix(self.u, self.pk)
        object.__setattr__(self, "source", src)
        object.__setattr__(self, "target", tgt)
        object.__setattr__(self, "u", u)
        if u.pk != self.pk:
            raise ModulusMismatch("witness matrix over a different ring")
        n = len(src)
        if u.rows != n or u.cols != n or len(tgt) != n:
            raise DimensionMismatch("witness dimensions do not match")
        if u.det() % self.pk.p == 0:
            raise WitnessError("witness matrix is not invertible")
        got = congruence(u.tolist(), [list(r) for r in src], m)
        if [tuple(r) for r in got] != list(tgt):
            raise WitnessError("U' source U does not reduce to the target")

    @property
    def target_matrix(self):
        return ModMatrix(self.target, self.pk)

    def then(self, other):
        """Compose with a witness whose source is this witness's target."""
        if other.pk != self.pk:
            raise ModulusMismatch("witnesses over different rings")
        return Witness(self.source, other.target, self.u @ other.u, self.pk)


def is_primitive(v, p):
    return any(x % p for x in v)


def extend_primitive(v, pk):
    """Matrix in SL_n(Z/p^k) whose first column is the primitive vector v."""
    p, m = pk.p, pk.modulus
    v = [x % m for x in v]
    n = len(v)
    i = next((j for j, x in enumerate(v) if x % p), None)
    if i is None:
        raise NotPrimitive(f"{v} has no unit component")
    if n == 1:
        # SL_1 is trivial; the best available is the unit itself
        return ModMatrix([[v[0]]], pk)
    w = list(v)
    w[0], w[i] = w[i], w[0]
    a = identity(n)
    for r in range(n):
        a[r][0] = w[r]
    a[1][1] = inv_mod(w[0], m)
    if i != 0:
        # undo the coordinate swap on the rows; negating column 1 keeps det = 1
        a[0], a[i] = a[i], a[0]
        for r in range(n):
            a[r][1] = -a[r][1]
    return ModMatrix(a, pk)


def direct_sum(a, b):
    if a.pk != b.pk:
        raise ModulusMismatch("direct sum over different rings")
    return ModMatrix(direct_sum_rows(a.entries, b.entries), a.pk)


def apply_local(d, start_block, v):
    """Apply v to the run of blocks of d starting at start_block.

    Returns the transformed matrix and the witness with U = I + v + I.
    """
    pk = d.pk
    v = v if isinstance(v, ModMatrix) else ModMatrix(v, pk)
    if v.rows != v.cols:
        raise NotSquare("local transformation must be square")
    if not v.is_invertible():
        raise NotInvertible("local transformation is not invertible")
    dims = [b.dim for b in d.blocks]
    if not 0 <= start_block <= len(dims):
        raise DimensionMismatch("start block out of range")
    offset = sum(dims[:start_block])
    run, j = 0, start_block
    while run < v.rows and j < len(dims):
        run += dims[j]
        j += 1
    if run != v.rows:
        raise DimensionMismatch("local transformation does not cover whole blocks")
    src = d.assemble()
    u = ModMatrix(embed(src.n, offset, v.entries), pk)
    w = Witness(src.entries, src.congruence(u).entries, u, pk)
    return w.target_matrix, w


def random_gl(n, pk, rng, budget=1000):
    """Uniformly random invertible n x n matrix mod p^k, by rejection."""
    m = pk.modulus
    for _ in range(budget):
        a = [[rng.randrange(m) for _ in range(n)] for _ in range(n)]
        if det_int(a) % pk.p:
            return ModMatrix(a, pk)
    raise RetriesExhausted("no invertible matrix drawn", stage="random_gl")
