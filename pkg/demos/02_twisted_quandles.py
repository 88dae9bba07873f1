"""
Twisted-group quandles and their displacement structure
=======================================================

A group G and an automorphism phi define a quandle on the elements of G
by x*y = y * phi(y^-1 x).  The key derived object is the displacement
subgroup: the set of values e*a = a * phi(a^-1), closed up as a subgroup.
It equals the orbit of the identity under all point symmetries, and it is
always normal in G.
"""

import numpy as np

from gaq import (
    GroupAutomorphism,
    cyclic_group,
    generalized_alexander,
    identity_automorphism,
    inner_orbit,
    point_symmetry,
    quandle_power,
)

# The identity twist produces the trivial quandle: x*y = x.
z5 = cyclic_group(5)
trivial = generalized_alexander(z5, identity_automorphism(z5))
print("trivial quandle row 2:", list(trivial.quandle.table[2]))

# Negation on Z5 produces the dihedral quandle x*y = 2y - x.
negation = GroupAutomorphism(z5, (-np.arange(5)) % 5)
dihedral = generalized_alexander(z5, negation)
print("dihedral quandle table:")
print(dihedral.quandle.table)

# The point symmetry at the identity recovers the twist itself.
print("s_0 equals the twist:",
      np.array_equal(point_symmetry(dihedral.quandle, 0), negation.images))

# Displacements and the subgroup they generate.
print("displacements:", list(map(int, dihedral.displacement)))
print("displacement subgroup:", list(map(int, dihedral.disp_subgroup.members)))
print("orbit of 0 under all symmetries:",
      list(map(int, inner_orbit(dihedral.quandle, 0))))

# On Z4 the negation twist only reaches the even elements, so the quandle
# splits into two orbits and the nested displacement subgroup collapses.
z4 = cyclic_group(4)
neg4 = GroupAutomorphism(z4, [0, 3, 2, 1])
half = generalized_alexander(z4, neg4)
print("Z4 displacement subgroup:", list(map(int, half.disp_subgroup.members)))
print("second displacement subgroup:",
      list(map(int, half.second_disp_subgroup.members)))
print("second level normal in G:", half.second_disp_normal)
print("second level covered by displacements:", half.second_disp_covered)

# Quandle powers iterate every point symmetry; for twisted-group quandles
# the m-th power is the quandle of the m-th power of the twist.
squared = quandle_power(dihedral.quandle, 2)
direct = generalized_alexander(z5, negation.power(2))
print("power identity holds:",
      np.array_equal(squared.table, direct.quandle.table))
