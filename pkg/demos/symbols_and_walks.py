"""2-adic symbols: trains, compartments, sign walking and the canonical symbol."""

from qfcanon.symbols import canonical_two_symbol, oddity_fuse, parse_two_symbol, partition, sign_walk_symbol

s = parse_two_symbol("1^+2 [2^-2 4^+3]_3 8^+0 [16^+1]_1 32^+2")
print("symbol:      ", s.format())
ts = partition(s)
print("trains:      ", ts.trains)
print("compartments:", ts.compartments)
print("oddity fusion:", oddity_fuse(s))

# move a sign from scale 2 to scale 16; the compartment totals shift by 4
w = sign_walk_symbol(s, 1, 4)
print("walked:      ", w.format())
print("canonical:   ", canonical_two_symbol(s).format())
print("walk keeps the class:", canonical_two_symbol(w) == canonical_two_symbol(s))
