"""
Deciding quandle isomorphism with explicit witnesses
====================================================

The structural decider reduces quandle isomorphism of two twisted-group
quandles to:

  (1) a group isomorphism h between their displacement subgroups that
      intertwines the restricted twists, and
  (2) a pairing of the coset spaces under which h maps displacement
      values of one side onto those of the other.

The decider returns the full reconstructed isomorphism, verified entry by
entry.  The worked example below pairs two order-16 groups: the direct
product of the quaternions with Z2, and the semidirect product twisting
the second factor by conjugation.  Their quandles are isomorphic even
though the groups are not.
"""

import numpy as np

from gaq import (
    GroupAutomorphism,
    brute_force_quandle_iso,
    cyclic_group,
    direct_product,
    fingerprint,
    gaq_isomorphic,
    generalized_alexander,
    group_from_cayley_table,
    group_iso,
    semidirect_product,
)

# Quaternion units ordered [1, i, j, k, -1, -i, -j, -k].
SIGNS = {(1, 1): (1, 0), (2, 2): (1, 0), (3, 3): (1, 0),
         (1, 2): (0, 3), (2, 3): (0, 1), (3, 1): (0, 2),
         (2, 1): (1, 3), (3, 2): (1, 1), (1, 3): (1, 2)}
table = np.zeros((8, 8), dtype=int)
for s1 in range(2):
    for b1 in range(4):
        for s2 in range(2):
            for b2 in range(4):
                s3, b3 = SIGNS.get((b1, b2), (0, max(b1, b2)))
                table[s1 * 4 + b1, s2 * 4 + b2] = ((s1 + s2 + s3) % 2) * 4 + b3
q8 = group_from_cayley_table(table, name="Q8",
                             labels=["1", "i", "j", "k", "-1", "-i", "-j", "-k"])

z2 = cyclic_group(2)
conj_by_i = GroupAutomorphism(q8, [0, 1, 6, 7, 4, 5, 2, 3])
direct = direct_product(q8, z2, name="Q8xZ2")
twisted = semidirect_product(q8, z2, [np.arange(8), conj_by_i.images],
                             name="Q8:Z2")
print("groups isomorphic?", group_iso(direct, twisted) is not None)

# The twist cycles i -> j -> k on the first factor; on the twisted group it
# additionally multiplies by k in the flipped coset.
cycle = GroupAutomorphism(q8, [0, 2, 3, 1, 4, 6, 7, 5])
im_direct = np.zeros(16, dtype=int)
im_twisted = np.zeros(16, dtype=int)
for a in range(8):
    im_direct[a * 2] = cycle(a) * 2
    im_direct[a * 2 + 1] = cycle(a) * 2 + 1
    im_twisted[a * 2] = cycle(a) * 2
    im_twisted[a * 2 + 1] = q8.mul(cycle(a), 3) * 2 + 1

inst_a = generalized_alexander(direct, GroupAutomorphism(direct, im_direct))
inst_b = generalized_alexander(twisted, GroupAutomorphism(twisted, im_twisted))
print("fingerprints equal:", fingerprint(inst_a) == fingerprint(inst_b))

witness = gaq_isomorphic(inst_a, inst_b)
print("isomorphic:", witness is not None)
print("verified:", witness.verify(inst_a, inst_b))
print("coset representatives paired:",
      {a: b for a, b in witness.rep_pairing.items()})
print("full map:", list(map(int, witness.full_map)))

# The raw-table oracle knows nothing about the construction and agrees.
raw = brute_force_quandle_iso(inst_a.quandle, inst_b.quandle)
print("raw-table search agrees:", raw is not None)
