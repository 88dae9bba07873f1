"""Quandles, twisted-group (generalized Alexander) quandles, and displacement
structure.

A quandle table stores x*y at table[x][y].  For a group G with automorphism
phi, the twisted operation x*y = y * phi(y^-1 x) produces a quandle on the
elements of G; GAQInstance packages that construction together with the
derived objects the isomorphism machinery consumes: the displacement map
a -> a*phi(a^-1) = e*a, the subgroup it generates (equal to the orbit of the
identity under all point symmetries), the coset partition by that subgroup,
and the same data one level down.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .automorphisms import GroupAutomorphism, restrict
from .errors import (
    InternalConsistencyError,
    NotASubgroup,
    QuandleAxiomError,
    SubgroupNotFixedPointwise,
)
from .groups import (
    CosetPartition,
    FiniteGroup,
    SubgroupHandle,
    left_cosets,
    is_normal,
    subgroup_closure,
)
from .permutations import IDX_DTYPE, cycle_type, perm_power


class Quandle:
    """A finite quandle as a dense operation table."""

    def __init__(self, table, *, validate: bool = True):
        arr = np.array(table, dtype=IDX_DTYPE)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise ValueError(f"table must be a nonempty square matrix, got {arr.shape}")
        if validate:
            _check_axioms(arr)
        arr.setflags(write=False)
        self.table = arr
        self.size = arr.shape[0]

    def point_symmetry(self, x: int) -> np.ndarray:
        """The permutation y -> y*x (column x of the table)."""
        return self.table[:, x].copy()

    @cached_property
    def symmetry_cycle_types(self) -> list[tuple[int, ...]]:
        return [cycle_type(self.table[:, x]) for x in range(self.size)]

    @cached_property
    def orbits(self) -> list[np.ndarray]:
        """Partition of the carrier into orbits of the inner automorphism group."""
        seen = np.zeros(self.size, dtype=bool)
        out = []
        for x in range(self.size):
            if not seen[x]:
                out.append(_orbit(self.table, x, seen))
        return out

    def inner_orbit(self, x: int) -> np.ndarray:
        seen = np.zeros(self.size, dtype=bool)
        return _orbit(self.table, x, seen)

    def __repr__(self) -> str:
        return f"Quandle(size={self.size})"


def _check_axioms(arr: np.ndarray) -> None:
    n = arr.shape[0]
    diag = np.diagonal(arr)
    bad = np.nonzero(diag != np.arange(n))[0]
    if bad.size:
        raise QuandleAxiomError("idempotence", (int(bad[0]),))
    ref = np.arange(n, dtype=IDX_DTYPE)
    col_sorted = np.sort(arr, axis=0)
    bad_cols = np.nonzero((col_sorted != ref[:, None]).any(axis=0))[0]
    if bad_cols.size:
        raise QuandleAxiomError("bijective point symmetry", (int(bad_cols[0]),))
    # (x*y)*z == (x*z)*(y*z), blocked over x to bound memory
    for x in range(n):
        lhs = arr[arr[x], :]  # [y, z] -> (x*y)*z
        rhs = arr[arr[x][None, :], arr]  # [y, z] -> (x*z)*(y*z)
        if not np.array_equal(lhs, rhs):
            y, z = np.argwhere(lhs != rhs)[0]
            raise QuandleAxiomError("self-distributivity", (x, int(y), int(z)))


def _orbit(table: np.ndarray, x: int, seen: np.ndarray) -> np.ndarray:
    members = [x]
    seen[x] = True
    head = 0
    while head < len(members):
        z = members[head]
        head += 1
        row = table[z]  # all s_y(z) = z*y
        fresh = np.unique(row[~seen[row]])
        if fresh.size:
            seen[fresh] = True
            members.extend(map(int, fresh))
    return np.sort(np.array(members, dtype=IDX_DTYPE))


def point_symmetry(quandle: Quandle, x: int) -> np.ndarray:
    return quandle.point_symmetry(x)


def inner_orbit(quandle: Quandle, x: int) -> np.ndarray:
    """Orbit of x under the group generated by all point symmetries.

    For a finite quandle, closing under the maps z -> z*y alone suffices: each
    point symmetry has finite order, so the forward closure is already closed
    under inverses.
    """
    return quandle.inner_orbit(x)


def quandle_power(quandle: Quandle, m: int) -> Quandle:
    """The quandle with operation x *m y = s_y^m(x)."""
    if m < 1:
        raise ValueError(f"power must be a positive integer, got {m}")
    n = quandle.size
    table = np.empty((n, n), dtype=IDX_DTYPE)
    for y in range(n):
        table[:, y] = perm_power(quandle.table[:, y], m)
    return Quandle(table)


# ---------------------------------------------------------------------------
# Twisted-group quandles


class GAQInstance:
    """A group with a chosen automorphism, the quandle they define, and caches.

    Attributes
    ----------
    group, twist, quandle : the defining data and the resulting table
    displacement : array d with d[a] = a * twist(a^-1), which equals e*a
    disp_subgroup : subgroup generated by the displacements; identical to the
        orbit of the identity under all point symmetries, and always a normal
        subgroup of the group as well as a subquandle
    cosets : left cosets of the group by that subgroup
    """

    def __init__(self, group: FiniteGroup, twist: GroupAutomorphism):
        if twist.group is not group:
            raise ValueError("twist must be an automorphism of the given group")
        self.group = group
        self.twist = twist
        t = group.table
        inv = group.inverse
        left = t[inv, :]  # [y, x] -> y^-1 x
        twisted = twist.images[left]  # [y, x] -> twist(y^-1 x)
        op = np.take_along_axis(t, twisted.astype(np.int64), axis=1)  # [y, x] -> y*twist(y^-1 x)
        self.quandle = Quandle(op.T)
        self.displacement = self.quandle.table[0].copy()
        expected = t[np.arange(group.order), twist.images[inv]]
        if not np.array_equal(self.displacement, expected):
            raise InternalConsistencyError("displacement row disagrees with a*twist(a^-1)")
        self.displacement.setflags(write=False)

    @property
    def size(self) -> int:
        return self.group.order

    def __repr__(self) -> str:
        return f"GAQInstance({self.group.name}, twist order {self.twist.order})"

    @cached_property
    def disp_subgroup(self) -> SubgroupHandle:
        orbit = self.quandle.inner_orbit(0)
        try:
            handle = SubgroupHandle(self.group, orbit)
        except NotASubgroup as exc:
            raise InternalConsistencyError(
                f"identity orbit is not a subgroup: {exc}") from exc
        if not is_normal(self.group, handle):
            raise InternalConsistencyError("displacement subgroup is not normal")
        if not handle.mask[self.quandle.table[np.ix_(orbit, orbit)]].all():
            raise InternalConsistencyError("displacement subgroup is not a subquandle")
        # independent computation: close the displacement image as a subgroup
        cross = subgroup_closure(self.group, np.unique(self.displacement))
        if not np.array_equal(cross.members, handle.members):
            raise InternalConsistencyError(
                "identity orbit and displacement closure disagree")
        return handle

    @cached_property
    def cosets(self) -> CosetPartition:
        return left_cosets(self.group, self.disp_subgroup)

    @cached_property
    def _restricted(self) -> tuple[FiniteGroup, np.ndarray, GroupAutomorphism]:
        sub_twist, to_parent = restrict(self.twist, self.disp_subgroup)
        return sub_twist.group, to_parent, sub_twist

    @property
    def disp_group(self) -> FiniteGroup:
        """Abstract group on the displacement subgroup (ascending re-index)."""
        return self._restricted[0]

    @property
    def disp_to_parent(self) -> np.ndarray:
        return self._restricted[1]

    @property
    def disp_twist(self) -> GroupAutomorphism:
        """The twist restricted to the displacement subgroup."""
        return self._restricted[2]

    @cached_property
    def nested(self) -> "GAQInstance":
        """The same construction applied to (disp_group, disp_twist)."""
        return GAQInstance(self.disp_group, self.disp_twist)

    @cached_property
    def second_disp_subgroup(self) -> SubgroupHandle:
        """Displacement subgroup of the nested instance, in parent indices."""
        inner = self.nested.disp_subgroup.members
        return SubgroupHandle(self.group, self.disp_to_parent[inner])

    @cached_property
    def second_disp_normal(self) -> bool:
        """Whether the second displacement subgroup is normal in the whole group."""
        return is_normal(self.group, self.second_disp_subgroup)

    @cached_property
    def second_disp_covered(self) -> bool:
        """Whether displacements of members of the displacement subgroup already
        exhaust the second displacement subgroup."""
        image = set(map(int, self.displacement[self.disp_subgroup.members]))
        return image == set(map(int, self.second_disp_subgroup.members))

    @cached_property
    def coset_displacements(self) -> list[dict[int, int]]:
        """Per coset block: displacement value -> least element attaining it."""
        out = []
        for block in self.cosets.blocks:
            values: dict[int, int] = {}
            for a in map(int, block):
                v = int(self.displacement[a])
                if v not in values:
                    values[v] = a
            out.append(values)
        return out


def generalized_alexander(group: FiniteGroup, twist: GroupAutomorphism) -> GAQInstance:
    """Quandle on a group with operation x*y = y * twist(y^-1 x)."""
    return GAQInstance(group, twist)


def quandle_from_triplet(group: FiniteGroup, sub: SubgroupHandle,
                         twist: GroupAutomorphism) -> Quandle:
    """Homogeneous quandle on left cosets: xH * yH = y twist(y^-1 x) H.

    The twist must fix the subgroup pointwise; well-definedness over coset
    representatives is checked exhaustively.
    """
    if not np.array_equal(twist.images[sub.members], sub.members):
        raise SubgroupNotFixedPointwise(
            "the automorphism must fix every member of the subgroup")
    partition = left_cosets(group, sub)
    t = group.table
    inv = group.inverse
    left = t[inv, :]
    twisted = twist.images[left]
    op = np.take_along_axis(t, twisted.astype(np.int64), axis=1).T  # [x, y]
    block_op = partition.block_of[op]
    nb = len(partition)
    table = np.empty((nb, nb), dtype=IDX_DTYPE)
    for bx in range(nb):
        for by in range(nb):
            vals = block_op[np.ix_(partition.blocks[bx], partition.blocks[by])]
            first = int(vals.flat[0])
            if (vals != first).any():
                raise InternalConsistencyError(
                    f"coset operation is not well-defined on blocks ({bx},{by})")
            table[bx, by] = first
    return Quandle(table)
