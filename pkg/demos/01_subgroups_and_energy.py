# Subgroups of Z_p^* and their additive structure
#
# Build the order-6 subgroup of Z_13^* (the quadratic residues), look at how it
# meets its own translates, and count additive energy a few different ways.

import itertools

from shiftlab import circ, energy, energy_k, make_field, subgroup_of_order, tensor_set
from shiftlab.bounds_lab import shifted_intersection, sumset

F = make_field(13)
print("primitive root:", F.g)
R = subgroup_of_order(F, 6)
print("R =", R.elems)

# Translates of R meet R in a handful of points.
for mu in range(1, 13):
    print(mu, shifted_intersection(R, [mu]).elems)

# (R o R)(x) counts y in R with y + x in R.
table = circ(R, R)
print({x: table[x] for x in range(13)})

# Energy from the convolution table, and by brute force over quadruples.
quads = sum(1 for a, b, c, d in itertools.product(R, repeat=4) if (a + b - c - d) % 13 == 0)
print("E(R) =", energy(R, R), "quadruples:", quads)
print("E_3(R) =", energy_k(R, 3), "E_4(R) =", energy_k(R, 4))

# Tensor sets sit between |R|^2 and |R|^3 in size.
T = tensor_set(R, R, 2)
print("|R (x)_2 R| =", len(T))

# R - R is everything, since -1 is a square mod 13.
print("R - R =", sumset(R, R, "minus").elems)
