"""Canonical forms can_p(Q) with explicit transformations."""

from dataclasses import dataclass

from ..blockdiag import BlockDiagForm, TypeI, TypeII
from ..errors import Inequivalent
from ..matmod import ModMatrix, Witness, as_form, inverse_rows
from ..modint import PrimePower, completion_offset, legendre, padic_split, sigma_p, sqrt_mod, inv_mod
from ..symbols import symbol_difference
from .odd import canp2_pair, run_odd
from .two import (TABLE_1, absorb_type2_dim3, canonicalize_compartment, compartment_dim3,
                  compartment_target, run_two, sign_walk_step, type2_canonical)


@dataclass(frozen=True)
class CanonicalForm:
    form: BlockDiagForm
    modulus: PrimePower

    @property
    def blocks(self):
        return self.form.blocks

    @property
    def matrix(self):
        return self.form.assemble()

    def __str__(self):
        return str(self.matrix)


def _finish(st):
    form = BlockDiagForm(st.pk, st.blocks, 0)
    return CanonicalForm(form, st.pk), st.witness()


def canonicalize_odd(q, p, k=None):
    return _finish(run_odd(q, p, k))


def canonicalize_two(q, k=None, rng=None):
    return _finish(run_two(q, k, rng))


def canonicalize(q, p, k=None, rng=None):
    """(can_p(q), witness) over Z/p^k; k defaults to ord_p(det q) + k_p."""
    q = as_form(q)
    if p == 2:
        return canonicalize_two(q, k, rng)
    return canonicalize_odd(q, p, k)


def can_block(b, pk):
    """Canonical shape of a single block at scale 0, with witness."""
    p, m = pk.p, pk.modulus
    if isinstance(b, TypeII):
        return type2_canonical(b, pk.k)
    tau = b.unit % m
    if p == 2:
        tgt = tau % 8
    else:
        tgt = 1 if legendre(tau, p) == 1 else sigma_p(p)
    x = sqrt_mod(tgt * inv_mod(tau, m) % m, pk)
    return TypeI(tgt), Witness([[tau]], [[tgt]], ModMatrix([[x]], pk), pk)


def transform_between(q1, q2, p, k=None, rng=None):
    """Witness W with W' q1 W = q2 (mod p^k), or Inequivalent."""
    q1, q2 = as_form(q1), as_form(q2)
    diff = symbol_difference(q1, q2, p)
    if diff is not None:
        raise Inequivalent(f"forms differ: {diff}", diff)
    if k is None:
        k = padic_split(q1.det(), p)[0] + completion_offset(p)
    c1, w1 = canonicalize(q1, p, k, rng)
    c2, w2 = canonicalize(q2, p, k, rng)
    if c1.blocks != c2.blocks:
        raise Inequivalent("canonical forms differ", "canonical form")
    pk = w1.pk
    u2inv = ModMatrix(inverse_rows(w2.u.tolist(), p, pk.modulus), pk)
    # w1: q1 -> C, w2: q2 -> C, so (U1 U2^-1)' q1 (U1 U2^-1) = q2
    return Witness(q1.tolist(), q2.tolist(), w1.u @ u2inv, pk)


__all__ = ["CanonicalForm", "canonicalize", "canonicalize_odd", "canonicalize_two", "can_block",
           "canp2_pair", "type2_canonical", "absorb_type2_dim3", "sign_walk_step",
           "compartment_dim3", "canonicalize_compartment", "compartment_target", "TABLE_1",
           "transform_between"]
