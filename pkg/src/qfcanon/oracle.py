"""Brute-force ground truth on tiny rings: GL_n enumeration, orbits, representations.

Nothing here uses the block diagonalization or the symbol machinery, so it can
serve as an independent check on both.
"""

from itertools import product

import numpy as np

from .errors import UniverseTooLarge
from .matmod import ModMatrix, Witness, det_int, rows_of

# bound on p^k per dimension for the enumerable universes
_LIMITS = {1: 10 ** 6, 2: 32, 3: 8}


def gl_order(n, p, k):
    """|GL_n(Z/p^k)| = p^(n^2 (k-1)) * prod_{i<n} (p^n - p^i)."""
    out = p ** (n * n * (k - 1))
    for i in range(n):
        out *= p ** n - p ** i
    return out


def _check_universe(n, pk):
    if n not in _LIMITS or pk.modulus > _LIMITS[n]:
        raise UniverseTooLarge(f"n={n} over Z/{pk.modulus} is too large to enumerate")


def enumerate_gl(n, pk):
    """Every invertible n x n matrix mod p^k, once each, in row-major product order."""
    _check_universe(n, pk)
    m, p = pk.modulus, pk.p
    for flat in product(range(m), repeat=n * n):
        a = [list(flat[i * n:(i + 1) * n]) for i in range(n)]
        if det_int(a) % p:
            yield ModMatrix(a, pk)


def _vectors(n, m):
    """All vectors mod m, first coordinate varying fastest."""
    v = np.array(list(product(range(m), repeat=n)), dtype=np.int64).reshape(-1, n)
    return np.ascontiguousarray(v[:, ::-1])


def brute_equivalent(q1, q2, pk):
    """Some U with U' q1 U = q2 mod p^k, or None.

    Exhaustive search column by column: column j must satisfy
    u_j' q1 u_j = q2[j][j] and u_i' q1 u_j = q2[i][j] for the earlier columns,
    and the finished matrix must be invertible.
    """
    a = rows_of(q1)
    b = rows_of(q2)
    n = len(a)
    _check_universe(n, pk)
    m, p = pk.modulus, pk.p
    A = np.array(a, dtype=np.int64) % m
    B = np.array(b, dtype=np.int64) % m
    if (A == B).all():
        return Witness(a, b, ModMatrix.identity(n, pk), pk)
    V = _vectors(n, m)
    AV = V @ A % m                       # row v -> (A v)'
    qv = np.einsum("ij,ij->i", AV, V) % m
    prim = (V % p).any(axis=1)

    def extend(cols):
        j = len(cols)
        if j == n:
            u = [[int(cols[c][r]) for c in range(n)] for r in range(n)]
            return u if det_int(u) % p else None
        mask = prim & (qv == B[j, j])
        for i, c in enumerate(cols):
            mask &= (AV @ c) % m == B[i, j]
        for idx in np.flatnonzero(mask):
            got = extend(cols + [V[idx]])
            if got is not None:
                return got
        return None

    u = extend([])
    if u is None:
        return None
    return Witness(a, b, ModMatrix(u, pk), pk)


def brute_represent(q, t, pk):
    """First primitive x (first coordinate varying fastest) with x' q x = t mod p^k, or None."""
    a = rows_of(q)
    n = len(a)
    m, p = pk.modulus, pk.p
    if m ** n > 2 ** 22:
        raise UniverseTooLarge("too many vectors to scan")
    V = _vectors(n, m)
    A = np.array(a, dtype=np.int64) % m
    vals = np.einsum("ij,ij->i", V @ A % m, V) % m
    hits = np.flatnonzero(((V % p).any(axis=1)) & (vals == t % m))
    if len(hits) == 0:
        return None
    return tuple(int(x) for x in V[hits[0]])


def represented_values(q, pk):
    """Set of all t mod p^k having a primitive representation by q."""
    a = rows_of(q)
    n = len(a)
    m, p = pk.modulus, pk.p
    if m ** n > 2 ** 22:
        raise UniverseTooLarge("too many vectors to scan")
    V = _vectors(n, m)
    A = np.array(a, dtype=np.int64) % m
    vals = np.einsum("ij,ij->i", V @ A % m, V) % m
    return set(int(v) for v in np.unique(vals[(V % p).any(axis=1)]))


def _gl2_arrays(pk):
    m, p = pk.modulus, pk.p
    g = np.array(list(product(range(m), repeat=4)), dtype=np.int64)
    det = (g[:, 0] * g[:, 3] - g[:, 1] * g[:, 2]) % p
    return g[det != 0]


def orbit_partition_n2(pk, forms=None):
    """GL_2(Z/p^k) orbits on binary forms (a, b, c) = [[a, b], [b, c]] mod p^k.

    Returns a dict mapping each form in `forms` (default: all of them) to an
    orbit label, computed by applying every group element to a representative.
    """
    _check_universe(2, pk)
    m = pk.modulus
    g = _gl2_arrays(pk)
    u11, u12, u21, u22 = g[:, 0], g[:, 1], g[:, 2], g[:, 3]
    if forms is None:
        forms = [(a, b, c) for a in range(m) for b in range(m) for c in range(m)]
    label = {}
    nxt = 0
    for f in forms:
        if f in label:
            continue
        a, b, c = f
        # U' Q U for U = [[u11, u12], [u21, u22]]
        na = (a * u11 * u11 + 2 * b * u11 * u21 + c * u21 * u21) % m
        nb = (a * u11 * u12 + b * (u11 * u22 + u21 * u12) + c * u21 * u22) % m
        nc = (a * u12 * u12 + 2 * b * u12 * u22 + c * u22 * u22) % m
        for img in set(zip(na.tolist(), nb.tolist(), nc.tolist())):
            label[img] = nxt
        nxt += 1
    return {f: label[f] for f in forms}
