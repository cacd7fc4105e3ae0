"""p-symbols, 2-symbols, trains and compartments, sign walking, canonical 2-symbols.

Scales are recorded by their exponent i (the constituent p^i D_i); the string
format writes the power p^i itself, e.g. ``1^-2 [2^+2 4^+3]_7 [16^+1]_1 32^+2``.
"""

from collections import defaultdict
from dataclasses import dataclass, replace
import re

from .blockdiag import block_diag_rows
from .errors import Degenerate, NotSameTrain, PrecisionTooLow, SymbolParseError
from .matmod import as_form
from .modint import kronecker2, legendre, padic_split


def _sign_char(s):
    return "+" if s > 0 else "-"


def _compact(q, sign, dim):
    if sign < 0:
        return f"{q}^-{dim}"
    return f"{q}" if dim == 1 else f"{q}^{dim}"


# ---------------------------------------------------------------- odd p

@dataclass(frozen=True)
class PSymbolOdd:
    p: int
    entries: tuple    # (scale, sign, dim), scales increasing

    def format(self):
        return " ".join(f"{self.p ** i}^{_sign_char(s)}{n}" for i, s, n in self.entries)

    __str__ = format


def default_precision(q, p):
    """ord_p(det q) + k_p; raises Degenerate for singular q."""
    d = as_form(q).det()
    if d == 0:
        raise Degenerate("form is singular")
    return padic_split(d, p)[0] + (3 if p == 2 else 1)


def _check_k(q, p, k):
    k0 = default_precision(q, p)
    if k is None:
        return k0
    if k < k0:
        raise PrecisionTooLow(f"precision {k} below ord_p(det)+k_p = {k0}")
    return k


def p_symbol_from_blocks(blocks, p):
    units, dims = defaultdict(lambda: 1), defaultdict(int)
    for b in blocks:
        units[b.scale] *= b.unit
        dims[b.scale] += 1
    return PSymbolOdd(p, tuple((i, legendre(units[i], p), dims[i]) for i in sorted(dims)))


def p_symbol(q, p, k=None):
    """p-symbol of a nonsingular form for an odd prime p."""
    if p == 2:
        raise ValueError("use two_symbol for p = 2")
    q = as_form(q)
    k = _check_k(q, p, k)
    blocks, _, _ = block_diag_rows(q.tolist(), p, k)
    return p_symbol_from_blocks(blocks, p)


# ---------------------------------------------------------------- p = 2

@dataclass(frozen=True)
class SymbolTerm:
    scale: int
    sign: int
    dim: int
    type: str        # "I" or "II"
    oddity: int = 0


@dataclass(frozen=True)
class TwoSymbol:
    terms: tuple     # nonzero-dimensional terms, scales increasing

    def term_at(self, i):
        return next((t for t in self.terms if t.scale == i), None)

    def format(self):
        return format_two_symbol(self)

    __str__ = format


@dataclass(frozen=True)
class TrainStructure:
    trains: tuple          # (lo, hi) scale intervals, inclusive
    compartments: tuple    # (lo, hi) scale intervals, inclusive

    def train_of(self, i):
        return next((t for t in self.trains if t[0] <= i <= t[1]), None)

    def compartment_of(self, i):
        return next((c for c in self.compartments if c[0] <= i <= c[1]), None)


@dataclass(frozen=True)
class CanonicalTwoSymbol:
    terms: tuple           # (scale, sign, dim, type)
    compartments: tuple    # (lo, hi, total oddity)

    def format(self):
        """Compact notation: plus signs dropped, and a dimension of 1 dropped with them."""
        comp = {c[0]: c for c in self.compartments}
        out, i = [], 0
        while i < len(self.terms):
            s = self.terms[i][0]
            if s in comp:
                lo, hi, tot = comp[s]
                inner = []
                while i < len(self.terms) and self.terms[i][0] <= hi:
                    sc, sg, n, _ = self.terms[i]
                    inner.append(_compact(2 ** sc, sg, n))
                    i += 1
                out.append("[" + " ".join(inner) + f"]_{tot}")
            else:
                sc, sg, n, _ = self.terms[i]
                out.append(_compact(2 ** sc, sg, n))
                i += 1
        return " ".join(out)

    __str__ = format


def two_symbol_from_blocks(blocks):
    dets, dims, odd, typ1 = defaultdict(lambda: 1), defaultdict(int), defaultdict(int), set()
    for b in blocks:
        i = b.scale
        dims[i] += b.dim
        if b.kind == "I":
            dets[i] *= b.unit
            odd[i] += b.unit
            typ1.add(i)
        else:
            dets[i] *= b.det()
    terms = []
    for i in sorted(dims):
        t1 = i in typ1
        terms.append(SymbolTerm(i, kronecker2(dets[i]), dims[i], "I" if t1 else "II",
                                odd[i] % 8 if t1 else 0))
    return TwoSymbol(tuple(terms))


def two_symbol(q, k=None):
    """2-symbol of a nonsingular form, computed mod 2^k (default ord_2(det) + 3)."""
    q = as_form(q)
    k = _check_k(q, 2, k)
    blocks, _, _ = block_diag_rows(q.tolist(), 2, k)
    return two_symbol_from_blocks(blocks)


def partition(sym):
    """Trains and compartments, with missing scales read as zero-dimensional Type II forms."""
    if not sym.terms:
        return TrainStructure((), ())
    lo, hi = sym.terms[0].scale, sym.terms[-1].scale
    present = {t.scale for t in sym.terms}
    typ1 = {t.scale for t in sym.terms if t.type == "I"}
    comps, trains = [], []
    start = None
    for i in range(lo, hi + 2):
        if i in typ1 and start is None:
            start = i
        elif i not in typ1 and start is not None:
            comps.append((start, i - 1))
            start = None
    start = lo
    for i in range(lo, hi + 1):
        if i == hi or (i not in typ1 and i + 1 not in typ1):
            trains.append((start, i))
            start = i + 1
    trains = [t for t in trains if any(t[0] <= s <= t[1] for s in present)]
    return TrainStructure(tuple(trains), tuple(comps))


def oddity_fuse(sym, trains=None):
    """Total oddity of each compartment: ((lo, hi), total mod 8) pairs."""
    ts = trains or partition(sym)
    return tuple((c, sum(t.oddity for t in sym.terms if c[0] <= t.scale <= c[1]) % 8)
                 for c in ts.compartments)


def fused(sym):
    """Same symbol with each compartment's oddity carried by its first term."""
    totals = {c[0]: tot for c, tot in oddity_fuse(sym)}
    terms = []
    for t in sym.terms:
        if t.type == "I":
            t = replace(t, oddity=totals.get(t.scale, 0))
        terms.append(t)
    return TwoSymbol(tuple(terms))


def walk_shifts(ts, i, j):
    """Compartments (by first scale) whose oddity shifts by 4 when walking i -> j."""
    lo, hi = min(i, j), max(i, j)
    out = []
    for c in ts.compartments:
        steps = sum(1 for r in range(lo, hi) if c[0] <= r <= c[1] or c[0] <= r + 1 <= c[1])
        if steps % 2:
            out.append(c[0])
    return out


def sign_walk_symbol(sym, i, j):
    """Flip the signs at scales i and j of one train, shifting oddities along the walk."""
    ts = partition(sym)
    for s in (i, j):
        t = sym.term_at(s)
        if t is None:
            raise NotSameTrain(f"no nonzero-dimensional form at scale {s}")
    if ts.train_of(i) != ts.train_of(j):
        raise NotSameTrain(f"scales {i} and {j} lie in different trains")
    if i == j:
        return sym
    shifted = set(walk_shifts(ts, i, j))
    terms = []
    for t in sym.terms:
        if t.scale in (i, j):
            t = replace(t, sign=-t.sign)
        if t.scale in shifted:
            t = replace(t, oddity=(t.oddity + 4) % 8)
        terms.append(t)
    return TwoSymbol(tuple(terms))


def canonical_two_symbol(sym):
    """At most one minus sign per train, sitting on its earliest nonzero form."""
    ts = partition(sym)
    for lo, hi in ts.trains:
        while True:
            neg = [t.scale for t in sym.terms if lo <= t.scale <= hi and t.sign < 0]
            first = min(t.scale for t in sym.terms if lo <= t.scale <= hi)
            if len(neg) >= 2:
                sym = sign_walk_symbol(sym, neg[-2], neg[-1])
            elif len(neg) == 1 and neg[0] != first:
                sym = sign_walk_symbol(sym, first, neg[0])
            else:
                break
    totals = oddity_fuse(sym, ts)
    return CanonicalTwoSymbol(tuple((t.scale, t.sign, t.dim, t.type) for t in sym.terms),
                              tuple((c[0], c[1], tot) for c, tot in totals))


def canonical_symbol(q, p, k=None):
    """PSymbolOdd for odd p, CanonicalTwoSymbol for p = 2."""
    if p == 2:
        return canonical_two_symbol(two_symbol(q, k))
    return p_symbol(q, p, k)


def equivalent(q1, q2, p):
    """Whether q1 and q2 are equivalent over Z/p^k for every k."""
    q1, q2 = as_form(q1), as_form(q2)
    if q1.n != q2.n:
        return False
    return canonical_symbol(q1, p) == canonical_symbol(q2, p)


def symbol_difference(q1, q2, p):
    """Human-readable first invariant on which q1 and q2 differ, or None; scales are exponents."""
    q1, q2 = as_form(q1), as_form(q2)
    if q1.n != q2.n:
        return f"dimension {q1.n} vs {q2.n}"
    s1, s2 = canonical_symbol(q1, p), canonical_symbol(q2, p)
    if s1 == s2:
        return None
    a = s1.entries if p != 2 else s1.terms
    b = s2.entries if p != 2 else s2.terms
    for x, y in zip(a, b):
        if x != y:
            if x[0] != y[0]:
                return f"scale {x[0]} vs {y[0]}"
            if x[2] != y[2]:
                return f"dimension at scale {x[0]}: {x[2]} vs {y[2]}"
            if x[1] != y[1]:
                return f"sign at scale {x[0]}: {_sign_char(x[1])} vs {_sign_char(y[1])}"
            return f"type at scale {x[0]}: {x[3]} vs {y[3]}"
    if len(a) != len(b):
        return "number of scales"
    for x, y in zip(s1.compartments, s2.compartments):
        if x != y:
            return f"compartment oddity at scale {x[0]}: {x[2]} vs {y[2]}"
    return "symbols differ"


# ---------------------------------------------------------------- text format

def format_two_symbol(sym):
    """Compartments bracketed with total oddity; zero-dimensional forms inside a train shown."""
    ts = partition(sym)
    totals = {c[0]: tot for c, tot in oddity_fuse(sym, ts)}
    by_scale = {t.scale: t for t in sym.terms}
    out = []
    for lo, hi in ts.trains:
        i = lo
        while i <= hi:
            if i in totals:
                c = ts.compartment_of(i)
                inner = [f"{2 ** s}^{_sign_char(by_scale[s].sign)}{by_scale[s].dim}"
                         for s in range(c[0], c[1] + 1)]
                out.append("[" + " ".join(inner) + f"]_{totals[i]}")
                i = c[1] + 1
                continue
            t = by_scale.get(i)
            if t is not None:
                out.append(f"{2 ** i}^{_sign_char(t.sign)}{t.dim}")
            elif lo < i < hi:
                out.append(f"{2 ** i}^+0")
            i += 1
    return " ".join(out)


_TOKEN = re.compile(r"\s*(?:(\[)|(\])(?:_(\d+))?|(\d+)(?:\^([+-]?)(\d+))?(?:_(\d+))?)")


def _scale_exp(v, p=2):
    o, u = padic_split(v, p)
    if u != 1:
        raise SymbolParseError(f"{v} is not a power of {p}")
    return o


def parse_two_symbol(text):
    """Inverse of format_two_symbol; compartment totals are put on the first term.

    Also reads the compact notation, where a missing sign means + and a missing
    dimension means 1.
    """
    pos, inside, comp, terms = 0, False, [], []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise SymbolParseError(f"cannot parse symbol near {text[pos:]!r}")
        pos = m.end()
        if m.group(1):
            if inside:
                raise SymbolParseError("nested brackets")
            inside, comp = True, []
        elif m.group(2):
            if not inside or not comp:
                raise SymbolParseError("unbalanced or empty brackets")
            inside = False
            given = sum(t.oddity for t in comp) % 8
            if m.group(3) is not None:
                total = int(m.group(3)) % 8
                if any(t.oddity for t in comp) and given != total:
                    raise SymbolParseError("term oddities disagree with the compartment total")
                comp = [replace(comp[0], oddity=total)] + [replace(t, oddity=0) for t in comp[1:]]
            terms += comp
        else:
            scale = _scale_exp(int(m.group(4)))
            sign = -1 if m.group(5) == "-" else 1
            dim = int(m.group(6)) if m.group(6) is not None else 1
            odd = int(m.group(7)) % 8 if m.group(7) is not None else 0
            if inside:
                if dim == 0:
                    raise SymbolParseError("zero-dimensional form inside a compartment")
                comp.append(SymbolTerm(scale, sign, dim, "I", odd))
            elif dim:
                if odd:
                    raise SymbolParseError("Type II form with nonzero oddity")
                if dim % 2:
                    raise SymbolParseError("Type II form of odd dimension")
                terms.append(SymbolTerm(scale, sign, dim, "II", 0))
            elif sign < 0:
                raise SymbolParseError("zero-dimensional form with sign -")
    if inside:
        raise SymbolParseError("unclosed bracket")
    scales = [t.scale for t in terms]
    if scales != sorted(set(scales)):
        raise SymbolParseError("scales must be strictly increasing")
    return TwoSymbol(tuple(terms))
