"""Mutable working state of a canonicalization run: current blocks plus accumulated U."""

from ..blockdiag import assemble_rows, permutation_matrix, sort_permutation
from ..errors import WitnessError
from ..matmod import ModMatrix, Witness, congruence


class Stage:
    def __init__(self, source, blocks, U, pk):
        self.source = source
        self.blocks = list(blocks)
        self.U = U
        self.pk = pk
        self.p = pk.p
        self.k = pk.k
        self.m = pk.modulus

    def offset(self, idx):
        return sum(b.dim for b in self.blocks[:idx])

    def replace(self, start, count, V, new_blocks, base_scale=0):
        """Swap blocks[start:start+count] for new_blocks, transforming by the local V.

        V and new_blocks may be given relative to base_scale; V'SV = S_new is
        checked on the scaled blocks modulo p^k before anything changes.
        """
        p, m = self.p, self.m
        new_blocks = [b.at_scale(b.scale + base_scale) for b in new_blocks]
        old = self.blocks[start:start + count]
        a = sum(b.dim for b in old)
        if len(V) != a or sum(b.dim for b in new_blocks) != a:
            raise WitnessError("local transformation has the wrong size")
        got = congruence(V, assemble_rows(old, p, m), m)
        if got != assemble_rows(new_blocks, p, m):
            raise WitnessError("local step does not produce the claimed blocks")
        off = self.offset(start)
        for row in self.U:
            seg = row[off:off + a]
            if any(seg):
                row[off:off + a] = [sum(x * V[i][j] for i, x in enumerate(seg)) % m
                                    for j in range(a)]
        self.blocks[start:start + count] = new_blocks

    def reorder(self, order):
        P = permutation_matrix(self.blocks, order, sum(b.dim for b in self.blocks))
        self.replace(0, len(self.blocks), P, [self.blocks[i] for i in order])

    def sort(self):
        order = sort_permutation(self.blocks)
        if order != list(range(len(self.blocks))):
            self.reorder(order)

    def witness(self):
        target = assemble_rows(self.blocks, self.p, self.m)
        return Witness(self.source, target, ModMatrix(self.U, self.pk), self.pk)
