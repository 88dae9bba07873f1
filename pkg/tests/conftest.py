"""Shared fixtures: the quaternion group with named elements, and the two
order-16 groups (direct and twisted product of the quaternions with Z2)
together with the four twists used throughout the regression tests."""

from __future__ import annotations

import numpy as np
import pytest

from gaq.automorphisms import GroupAutomorphism
from gaq.groups import (
    FiniteGroup,
    cyclic_group,
    direct_product,
    group_from_cayley_table,
    semidirect_product,
)
from gaq.quandles import GAQInstance, generalized_alexander

QUATERNION_LABELS = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]


def quaternion_table() -> np.ndarray:
    """Multiplication table over [1, i, j, k, -1, -i, -j, -k]."""
    basis = {}
    for b in range(4):
        basis[(0, b)] = (0, b)
        basis[(b, 0)] = (0, b)
    basis[(1, 1)] = basis[(2, 2)] = basis[(3, 3)] = (1, 0)
    basis[(1, 2)] = (0, 3)
    basis[(2, 3)] = (0, 1)
    basis[(3, 1)] = (0, 2)
    basis[(2, 1)] = (1, 3)
    basis[(3, 2)] = (1, 1)
    basis[(1, 3)] = (1, 2)
    table = np.zeros((8, 8), dtype=int)
    for s1 in range(2):
        for b1 in range(4):
            for s2 in range(2):
                for b2 in range(4):
                    s3, b3 = basis[(b1, b2)]
                    table[s1 * 4 + b1, s2 * 4 + b2] = ((s1 + s2 + s3) % 2) * 4 + b3
    return table


@pytest.fixture(scope="session")
def q8() -> FiniteGroup:
    return group_from_cayley_table(quaternion_table(), name="Q8",
                                   labels=QUATERNION_LABELS)


@pytest.fixture(scope="session")
def q8_cycle(q8) -> GroupAutomorphism:
    """The automorphism of the quaternions cycling i -> j -> k -> i."""
    return GroupAutomorphism(q8, [0, 2, 3, 1, 4, 6, 7, 5])


class WorkedPair:
    """The two order-16 groups and four twists of the worked regression case."""

    def __init__(self, q8: FiniteGroup, q8_cycle: GroupAutomorphism):
        self.q8 = q8
        z2 = cyclic_group(2)
        conj_by_i = GroupAutomorphism(q8, [0, 1, 6, 7, 4, 5, 2, 3])
        self.direct = direct_product(q8, z2, name="Q8xZ2")
        self.twisted = semidirect_product(
            q8, z2, [np.arange(8), conj_by_i.images], name="Q8:Z2")

        def idx(a: int, i: int) -> int:
            return a * 2 + i

        self.idx = idx
        psi = q8_cycle
        im_direct = np.zeros(16, dtype=int)
        im_twisted = np.zeros(16, dtype=int)
        for a in range(8):
            im_direct[idx(a, 0)] = idx(psi(a), 0)
            im_direct[idx(a, 1)] = idx(psi(a), 1)
            im_twisted[idx(a, 0)] = idx(psi(a), 0)
            # on the twisted side the second-component twist picks up a factor k
            im_twisted[idx(a, 1)] = idx(q8.mul(psi(a), 3), 1)
        self.twist1_direct = GroupAutomorphism(self.direct, im_direct)
        self.twist1_twisted = GroupAutomorphism(self.twisted, im_twisted)

        flip = np.zeros(16, dtype=int)
        for a in range(8):
            flip[idx(a, 0)] = idx(a, 0)
            flip[idx(a, 1)] = idx(q8.mul(4, a), 1)  # negate the first component
        self.flip_direct = GroupAutomorphism(self.direct, flip)
        self.flip_twisted = GroupAutomorphism(self.twisted, flip)
        self.twist2_direct = self.flip_direct.compose(self.twist1_direct)
        self.twist2_twisted = self.flip_twisted.compose(self.twist1_twisted)

    def instances(self) -> tuple[GAQInstance, GAQInstance, GAQInstance, GAQInstance]:
        return (
            generalized_alexander(self.direct, self.twist1_direct),
            generalized_alexander(self.twisted, self.twist1_twisted),
            generalized_alexander(self.direct, self.twist2_direct),
            generalized_alexander(self.twisted, self.twist2_twisted),
        )


@pytest.fixture(scope="session")
def worked_pair(q8, q8_cycle) -> WorkedPair:
    return WorkedPair(q8, q8_cycle)
