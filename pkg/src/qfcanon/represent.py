"""Primitive representations x'Qx = t over Z/p^k.

Existence is decided exactly: after block diagonalization, a primitive
representation modulo p^m with m = ord_p(t) + k_p (m = k when t = 0) lifts to
one modulo p^k by scaling with a unit square root, so a dynamic program over
the blocks' achievable values mod p^m settles the question.
"""

from dataclasses import dataclass

from .blockdiag import assemble_rows, block_diag_rows
from .errors import NoRepresentation, PreconditionViolated, ThresholdNotMet
from .matmod import ModMatrix, is_primitive, rows_of
from .modint import INF, PrimePower, completion_offset, inv_mod, padic_split, sqrt_mod


@dataclass(frozen=True)
class Representation:
    vector: tuple
    target: int
    form: ModMatrix

    def __post_init__(self):
        pk = self.form.pk
        v = tuple(x % pk.modulus for x in self.vector)
        object.__setattr__(self, "vector", v)
        object.__setattr__(self, "target", self.target % pk.modulus)
        if len(v) != self.form.n:
            raise ValueError("vector length does not match the form")
        if not is_primitive(v, pk.p):
            raise ValueError(f"{v} is not primitive")
        if quad_value(self.form.entries, v) % pk.modulus != self.target:
            raise ValueError(f"{v} does not represent {self.target}")


def quad_value(q, x):
    return sum(x[i] * q[i][j] * x[j] for i in range(len(x)) for j in range(len(x)))


def _form_order(q, p):
    return min((padic_split(v, p)[0] for r in q for v in r), default=INF)


def represent_type1(tau, s, t, pk):
    """Unit x with p^s * tau * x^2 = t (mod p^k)."""
    p, m = pk.p, pk.modulus
    o, u = padic_split(p ** s * tau, p)
    form = ModMatrix([[p ** s * tau]], pk)
    t %= m
    if t == 0:
        if o >= pk.k:
            return Representation((1,), t, form)
        raise NoRepresentation(f"p^{o}*unit times a unit square is never 0 mod {p}^{pk.k}", p, pk.k)
    ot, ct = padic_split(t, p)
    if ot != o:
        raise NoRepresentation(f"orders differ ({o} vs {ot})", p, pk.k)
    r = PrimePower(p, pk.k - o)
    try:
        x = sqrt_mod(ct * inv_mod(u, r.modulus) % r.modulus, r)
    except ArithmeticError:
        raise NoRepresentation(f"{t} is not {p ** s * tau} times a square", p, pk.k) from None
    return Representation((x,), t, form)


def represent_type2(block, t, k):
    """Primitive (x, y) with 2a x^2 + 2b xy + 2c y^2 = t (mod 2^k), for ord_2(t) = 1."""
    if padic_split(t, 2)[0] != 1:
        raise PreconditionViolated("needs ord_2(t) = 1")
    q = block.matrix()
    pk = PrimePower(2, k)
    mm = min(k, 4)
    mod = 1 << mm
    for y in range(mod):
        for x in range(mod):
            if (x | y) & 1 and (2 * block.a * x * x + 2 * block.b * x * y + 2 * block.c * y * y - t) % mod == 0:
                return lift_representation((x, y), mm, q, t, pk)
    raise NoRepresentation("no representation mod 16", 2, mm)


def lift_representation(x, m, q, t, pk):
    """Turn a primitive representation of t mod p^m into one mod p^k (k >= m)."""
    p, k = pk.p, pk.k
    q = rows_of(q)
    mod = pk.modulus
    t %= mod
    ot = padic_split(t, p)[0] if t else INF
    need = max(_form_order(q, p), ot) + completion_offset(p)
    if m < k and m < need:
        raise ThresholdNotMet(f"precision {m} below the lifting threshold {need}")
    a = quad_value(q, x)
    if (a - t) % p ** min(m, k):
        raise ValueError(f"{tuple(x)} does not represent {t} mod {p}^{m}")
    form = ModMatrix(q, pk)
    if m >= k:
        return Representation(tuple(x), t, form)
    ca = padic_split(a % mod, p)[1]
    ct = padic_split(t, p)[1]
    r = PrimePower(p, k - ot)
    u = sqrt_mod(ct * inv_mod(ca, r.modulus) % r.modulus, r)
    return Representation(tuple(u * v for v in x), t, form)


def _block_options(b, p, m, rng):
    """Achievable (value mod p^m, primitive?) pairs of one block, with a witness each."""
    mod = p ** m
    span = p ** max(1, m - b.scale)
    s = p ** b.scale
    opts = {}
    if b.dim == 1:
        xs = list(range(span))
        if rng is not None:
            rng.shuffle(xs)
        c = s * b.unit
        for x in xs:
            key = (c * x * x % mod, x % p != 0)
            if key not in opts:
                opts[key] = (x,)
    else:
        pairs = [(x, y) for y in range(span) for x in range(span)]
        if rng is not None:
            rng.shuffle(pairs)
        a2, bb, c2 = 2 * b.a * s, b.b * s, 2 * b.c * s
        for x, y in pairs:
            key = ((a2 * x * x + 2 * bb * x * y + c2 * y * y) % mod, (x | y) & 1 == 1)
            if key not in opts:
                opts[key] = (x, y)
    return opts


def search_blocks(blocks, zero_dim, t, p, m, rng=None):
    """Coordinates y (block basis) with sum of block values = t mod p^m, y primitive.

    Exhaustive over achievable values, so None certifies non-existence.
    """
    mod = p ** m
    t %= mod
    parts = [_block_options(b, p, m, rng) for b in blocks]
    parts += [{(0, False): (0,), (0, True): (1,)}] * zero_dim
    layers = [{(0, False): None}]
    for opts in parts:
        cur = {}
        prev = layers[-1]
        for (v0, f0) in prev:
            for (v1, f1) in opts:
                key = ((v0 + v1) % mod, f0 or f1)
                if key not in cur:
                    cur[key] = ((v0, f0), (v1, f1))
        layers.append(cur)
    key = (t, True)
    if key not in layers[-1]:
        return None
    coords = []
    for i in range(len(parts), 0, -1):
        prev_key, opt_key = layers[i][key]
        coords = list(parts[i - 1][opt_key]) + coords
        key = prev_key
    return coords


def _sample_odd(blocks, zero_dim, t, pk, rng, budget):
    """Random coordinates for all but one unit-scale slot, closed by a square root."""
    p, mod = pk.p, pk.modulus
    ot = padic_split(t, p)[0] if t else pk.k
    offs, o = [], 0
    for b in blocks:
        offs.append(o)
        o += b.dim
    n = o + zero_dim
    slots = [i for i, b in enumerate(blocks) if b.scale <= ot]
    if not slots:
        return None
    for _ in range(budget):
        j = rng.choice(slots)
        y = [rng.randrange(mod) for _ in range(n)]
        rest = sum(p ** b.scale * b.unit * y[offs[i]] ** 2 for i, b in enumerate(blocks) if i != j)
        try:
            r = represent_type1(blocks[j].unit, blocks[j].scale, (t - rest) % mod, pk)
        except NoRepresentation:
            continue
        y[offs[j]] = r.vector[0]
        return y
    return None


def represent_in_blocks(blocks, zero_dim, t, pk, rng=None):
    """Primitive y with y' D y = t mod p^k, D the block diagonal form given."""
    p, k = pk.p, pk.k
    t %= pk.modulus
    kp = completion_offset(p)
    m = k if t == 0 else min(k, padic_split(t, p)[0] + kp)
    y = search_blocks(blocks, zero_dim, t, p, m, rng)
    if y is None:
        raise NoRepresentation(f"no primitive representation of {t} mod {p}^{m}", p, m)
    d = assemble_rows(blocks, p, pk.modulus, zero_dim)
    return lift_representation(y, m, d, t, pk).vector


def represent_general(q, t, pk, rng=None, budget=64):
    """A primitive representation of t by q over Z/p^k.

    Raises NoRepresentation when none exists (certified by exhaustion).
    """
    rows = rows_of(q)
    form = ModMatrix(rows, pk)
    p, mod = pk.p, pk.modulus
    t %= mod
    blocks, zero_dim, U = block_diag_rows(rows, p, pk.k)
    y = None
    if p != 2 and len(blocks) + zero_dim >= 3 and rng is not None:
        y = _sample_odd(blocks, zero_dim, t, pk, rng, budget)
    if y is None:
        # deterministic order here: the first hit is small, first coordinate fastest
        y = represent_in_blocks(blocks, zero_dim, t, pk)
    x = [sum(U[i][j] * y[j] for j in range(len(y))) % mod for i in range(len(y))]
    return Representation(tuple(x), t, form)


__all__ = ["Representation", "represent_type1", "represent_type2", "lift_representation",
           "represent_general", "represent_in_blocks", "search_blocks"]
