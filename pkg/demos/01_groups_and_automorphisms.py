"""
Building finite groups and enumerating their automorphisms
===========================================================

Groups live on 0..n-1 with the identity at index 0 and a dense
multiplication table.  Constructors cover the standard families,
products, and closures of permutation generators.
"""

import numpy as np

from gaq import (
    automorphism_group,
    conjugacy_class_representatives,
    cyclic_group,
    dicyclic_group,
    dihedral_group,
    fix_set,
    group_from_generators,
    subgroup_closure,
    symmetric_group,
)

# A dihedral group of order 8, straight from the family constructor.
d8 = dihedral_group(8)
print(d8, "element orders:", sorted(map(int, d8.element_orders)))

# The same group again, generated by a 4-cycle and a reflection.
regenerated = group_from_generators(4, [[1, 2, 3, 0], [0, 3, 2, 1]], name="<r,s>")
print(regenerated, "order:", regenerated.order)

# The quaternion group is the first dicyclic group; it has a unique
# element of order 2, which distinguishes it from the dihedral group.
q8 = dicyclic_group(8)
print(q8, "involutions:", int((q8.element_orders == 2).sum()))

# Subgroup machinery: closures, cosets, normality.
rotations = subgroup_closure(d8, [1])
print("closure of one rotation:", list(map(int, rotations.members)))

# Automorphism groups are enumerated explicitly.
for grp in (cyclic_group(12), q8, symmetric_group(4)):
    auts = automorphism_group(grp)
    reps = conjugacy_class_representatives(auts)
    print(f"|Aut({grp.name})| = {auts.order}, conjugacy classes: {len(reps)}")

# Fixed points of an automorphism: negation on Z12 fixes 0 and 6.
z12 = cyclic_group(12)
negation = next(a for a in automorphism_group(z12)
                if np.array_equal(a.images, (-np.arange(12)) % 12))
print("fixed points of negation on Z12:", list(map(int, fix_set(negation))))
