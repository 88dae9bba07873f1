"""Group automorphisms: enumeration, restriction, and conjugacy reduction.

Enumeration backtracks over the images of a short generating sequence, with
element-order and conjugacy-class pruning, closing each partial assignment to
the subgroup it generates so contradictions surface immediately.  The same
engine, parameterized by an optional pair of automorphisms to intertwine,
drives group-isomorphism search elsewhere in the package.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import AutBudgetExceeded, InternalConsistencyError, SubgroupNotInvariant
from .groups import FiniteGroup, SubgroupHandle, subgroup_closure
from .permutations import (
    IDX_DTYPE,
    compose,
    identity_perm,
    inverse_perm,
    is_permutation,
    perm_order,
    perm_power,
)

DEFAULT_AUT_BUDGET = 2_000_000


def _primary_partitions(grp: FiniteGroup) -> dict[int, list[int]]:
    """For an abelian group, the partition of exponents per prime.

    Derived from element-order counts: the number of x with x^(p^k) = e is
    p to the sum of min(part, k) over the partition, so successive ratios
    recover how many parts are at least k.
    """
    orders = grp.element_orders
    n = grp.order
    partitions: dict[int, list[int]] = {}
    p = 2
    remaining = n
    primes = []
    while p * p <= remaining:
        if remaining % p == 0:
            primes.append(p)
            while remaining % p == 0:
                remaining //= p
        p += 1
    if remaining > 1:
        primes.append(remaining)
    for p in primes:
        heights = []
        m_prev = 1
        k = 1
        while True:
            pk = p ** k
            m_k = int(sum(1 for o in orders if pk % int(o) == 0))
            if m_k == m_prev:
                break
            ratio = m_k // m_prev
            height = ratio.bit_length() - 1 if p == 2 else round(
                np.log(ratio) / np.log(p))
            heights.append(height)
            m_prev = m_k
            k += 1
        width = heights[0] if heights else 0
        partitions[p] = [sum(1 for h in heights if h >= i)
                         for i in range(1, width + 1)]
    return partitions


def abelian_automorphism_count(grp: FiniteGroup) -> int:
    """Order of Aut for an abelian group, from the type of each primary part.

    For a p-group of type e_1 <= ... <= e_n the count is the product of
    (p^d_k - p^(k-1)), (p^e_j)^(n-d_j), and (p^(e_i-1))^(n-c_i+1), where d_k
    and c_k index the last and first parts equal to e_k; coprime parts
    contribute independently.
    """
    if not grp.is_abelian:
        raise ValueError("count formula applies to abelian groups only")
    total = 1
    for p, partition in _primary_partitions(grp).items():
        exps = sorted(partition)
        n = len(exps)
        if n == 0:
            continue
        d = [max(l for l in range(n) if exps[l] == exps[k]) + 1 for k in range(n)]
        c = [min(l for l in range(n) if exps[l] == exps[k]) + 1 for k in range(n)]
        for k in range(n):
            total *= p ** d[k] - p ** k
        for j in range(n):
            total *= (p ** exps[j]) ** (n - d[j])
        for i in range(n):
            total *= (p ** (exps[i] - 1)) ** (n - c[i] + 1)
    return total


def is_automorphism(grp: FiniteGroup, images) -> bool:
    """True iff the image array is a bijective homomorphism of the group."""
    arr = np.asarray(images)
    if not is_permutation(arr, grp.order):
        return False
    return bool(np.array_equal(arr[grp.table], grp.table[np.ix_(arr, arr)]))


class GroupAutomorphism:
    """An automorphism of a fixed group, stored as a permutation of indices."""

    __slots__ = ("group", "images", "_order")

    def __init__(self, group: FiniteGroup, images, *, validate: bool = True):
        arr = np.asarray(images, dtype=IDX_DTYPE)
        if validate and not is_automorphism(group, arr):
            raise ValueError("image array is not an automorphism of the group")
        arr.setflags(write=False)
        self.group = group
        self.images = arr
        self._order = None

    def __call__(self, x: int) -> int:
        return int(self.images[x])

    def compose(self, other: "GroupAutomorphism") -> "GroupAutomorphism":
        """self applied after other."""
        return GroupAutomorphism(self.group, compose(self.images, other.images),
                                 validate=False)

    def inverse(self) -> "GroupAutomorphism":
        return GroupAutomorphism(self.group, inverse_perm(self.images), validate=False)

    def power(self, k: int) -> "GroupAutomorphism":
        return GroupAutomorphism(self.group, perm_power(self.images, k), validate=False)

    @property
    def order(self) -> int:
        if self._order is None:
            self._order = perm_order(self.images)
        return self._order

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(self.group.order)))

    def fixed_points(self) -> np.ndarray:
        return np.nonzero(self.images == np.arange(self.group.order))[0]

    def __eq__(self, other) -> bool:
        return (isinstance(other, GroupAutomorphism)
                and self.group is other.group
                and np.array_equal(self.images, other.images))

    def __hash__(self) -> int:
        return hash((id(self.group), self.images.tobytes()))

    def __repr__(self) -> str:
        return f"GroupAutomorphism({self.group.name}, {list(map(int, self.images))})"


def identity_automorphism(grp: FiniteGroup) -> GroupAutomorphism:
    return GroupAutomorphism(grp, identity_perm(grp.order), validate=False)


def fix_set(aut: GroupAutomorphism) -> np.ndarray:
    """Indices fixed by the automorphism; always contains 0."""
    return aut.fixed_points()


# ---------------------------------------------------------------------------
# Generator-image backtracking engine


def generating_sequence(grp: FiniteGroup) -> list[int]:
    """Greedy short generating sequence.

    Each step picks the element whose addition grows the generated subgroup
    the most, breaking ties by smallest index, so the result is deterministic.
    """
    cached = grp.__dict__.get("_generating_sequence")
    if cached is not None:
        return cached
    seq: list[int] = []
    current = {0}
    while len(current) < grp.order:
        best_x, best_size, best_members = -1, -1, None
        for x in range(grp.order):
            if x in current:
                continue
            handle = subgroup_closure(grp, list(current) + [x])
            if handle.order > best_size:
                best_x, best_size, best_members = x, handle.order, handle.members
        seq.append(best_x)
        current = set(map(int, best_members))
    grp.__dict__["_generating_sequence"] = seq
    return seq


def _candidate_keys(grp: FiniteGroup, twist: np.ndarray | None) -> list:
    """Per-element invariants any isomorphic image must share."""
    sigs = grp.class_signatures
    keys = [sigs[int(grp.class_of[x])] for x in range(grp.order)]
    if twist is not None:
        # length of the orbit of x under the automorphism being intertwined
        for x in range(grp.order):
            y = int(twist[x])
            length = 1
            while y != x:
                y = int(twist[y])
                length += 1
            keys[x] = (keys[x], length)
    return keys


def search_isomorphisms(src: FiniteGroup, dst: FiniteGroup,
                        src_twist=None, dst_twist=None) -> Iterator[np.ndarray]:
    """Yield every group isomorphism src -> dst as an image array.

    When twists are supplied, only maps f with f(src_twist(x)) =
    dst_twist(f(x)) are produced.  Backtracking assigns images to a greedy
    generating sequence of src in ascending candidate order and closes each
    assignment over products (and twist orbits) before descending, so the
    output order is deterministic.
    """
    if src.order != dst.order:
        return
    n = src.order
    tw_src = None if src_twist is None else np.asarray(getattr(src_twist, "images", src_twist))
    tw_dst = None if dst_twist is None else np.asarray(getattr(dst_twist, "images", dst_twist))

    src_keys = _candidate_keys(src, tw_src)
    dst_keys = _candidate_keys(dst, tw_dst)
    if sorted(map(repr, src_keys)) != sorted(map(repr, dst_keys)):
        return

    gens = generating_sequence(src)
    candidates = [
        sorted(y for y in range(n) if dst_keys[y] == src_keys[g]) for g in gens
    ]

    mul_src = src.rows
    mul_dst = dst.rows
    tws = None if tw_src is None else list(map(int, tw_src))
    twd = None if tw_dst is None else list(map(int, tw_dst))

    fmap = [-1] * n
    used = [False] * n
    assigned: list[int] = []

    def extend(a: int, b: int) -> bool:
        stack = [(a, b)]
        while stack:
            x, y = stack.pop()
            cur = fmap[x]
            if cur != -1:
                if cur != y:
                    return False
                continue
            if used[y]:
                return False
            fmap[x] = y
            used[y] = True
            assigned.append(x)
            if tws is not None:
                stack.append((tws[x], twd[y]))
            row_x = mul_src[x]
            row_y = mul_dst[y]
            for c in assigned:
                fc = fmap[c]
                stack.append((row_x[c], row_y[fc]))
                stack.append((mul_src[c][x], mul_dst[fc][y]))
        return True

    def undo(marker: int) -> None:
        while len(assigned) > marker:
            x = assigned.pop()
            used[fmap[x]] = False
            fmap[x] = -1

    def rec(i: int) -> Iterator[np.ndarray]:
        if i == len(gens):
            if len(assigned) != n:  # gens generate src, so closure must be total
                raise InternalConsistencyError("partial map did not close over the group")
            yield np.array(fmap, dtype=IDX_DTYPE)
            return
        g = gens[i]
        if fmap[g] != -1:
            yield from rec(i + 1)
            return
        for cand in candidates[i]:
            if used[cand]:
                continue
            marker = len(assigned)
            if extend(g, cand):
                yield from rec(i + 1)
            undo(marker)

    if n == 1:
        yield np.zeros(1, dtype=IDX_DTYPE)
        return
    marker0 = len(assigned)
    if extend(0, 0):  # identity maps to identity in any isomorphism
        yield from rec(0)
    undo(marker0)


# ---------------------------------------------------------------------------
# Automorphism groups


class AutomorphismGroup:
    """All automorphisms of a group, fully enumerated and sorted."""

    def __init__(self, group: FiniteGroup, elements: Sequence[GroupAutomorphism]):
        self.group = group
        self.elements = list(elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    @cached_property
    def matrix(self) -> np.ndarray:
        return np.stack([a.images for a in self.elements])

    @cached_property
    def index(self) -> dict[bytes, int]:
        return {a.images.tobytes(): i for i, a in enumerate(self.elements)}

    @cached_property
    def generators(self) -> list[int]:
        """Indices of a greedy generating subset of the automorphism group."""
        m = self.order
        n = self.group.order
        ident = identity_perm(n).tobytes()
        closed = {ident}
        gens: list[int] = []
        for i in range(m):
            key = self.elements[i].images.tobytes()
            if key in closed:
                continue
            gens.append(i)
            closed.add(key)
            queue = [key]
            matrix = self.matrix
            lookup = self.index
            while queue:
                cur = queue.pop()
                cur_arr = matrix[lookup[cur]]
                for j in gens:
                    for prod in (compose(cur_arr, matrix[j]), compose(matrix[j], cur_arr)):
                        pk = prod.tobytes()
                        if pk not in closed:
                            closed.add(pk)
                            queue.append(pk)
            if len(closed) == m:
                break
        return gens

    @cached_property
    def conjugacy_class_ids(self) -> np.ndarray:
        """Union-find orbit ids of conjugation by the generator subset."""
        m = self.order
        parent = list(range(m))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        matrix = self.matrix
        lookup = self.index
        for gi in self.generators:
            g = matrix[gi]
            g_inv = inverse_perm(g)
            conjugated = g[matrix[:, g_inv]]  # row i = g ∘ a_i ∘ g^-1
            for i in range(m):
                j = lookup[np.ascontiguousarray(conjugated[i]).tobytes()]
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
        return np.array([find(i) for i in range(m)], dtype=np.int32)

    def conjugacy_class_representatives(self) -> list[GroupAutomorphism]:
        """One representative per conjugation orbit, each the least image array
        in its class; the list is sorted the same way."""
        ids = self.conjugacy_class_ids
        seen: set[int] = set()
        reps = []
        for i in range(self.order):  # elements are pre-sorted ascending
            root = int(ids[i])
            if root not in seen:
                seen.add(root)
                reps.append(self.elements[i])
        return reps

    def class_size(self, rep: GroupAutomorphism) -> int:
        ids = self.conjugacy_class_ids
        root = ids[self.index[rep.images.tobytes()]]
        return int((ids == root).sum())


def automorphism_group(grp: FiniteGroup,
                       budget: int = DEFAULT_AUT_BUDGET) -> AutomorphismGroup:
    """Enumerate Aut(G) explicitly.

    Raises AutBudgetExceeded once more than `budget` automorphisms are found,
    which callers treat as a skip signal rather than an answer.
    """
    cache_key = "_automorphism_group"
    cached = grp.__dict__.get(cache_key)
    if cached is not None and cached[0] >= min(budget, cached[1]):
        if cached[1] > budget:
            raise AutBudgetExceeded(grp.name, budget)
        return cached[2]

    if grp.is_abelian:
        # closed-form count lets oversized abelian groups trip the budget
        # without enumerating anything
        exact = abelian_automorphism_count(grp)
        if exact > budget:
            grp.__dict__[cache_key] = (budget, exact, None)
            raise AutBudgetExceeded(grp.name, budget)

    found: list[np.ndarray] = []
    for images in search_isomorphisms(grp, grp):
        found.append(images)
        if len(found) > budget:
            grp.__dict__[cache_key] = (budget, len(found), None)
            raise AutBudgetExceeded(grp.name, budget)

    stack = np.stack(found)
    batch_lhs = stack[:, grp.table]
    batch_rhs = grp.table[stack[:, :, None], stack[:, None, :]]
    if not np.array_equal(batch_lhs, batch_rhs):
        raise InternalConsistencyError("enumerated map failed the homomorphism check")

    order_keys = [a.astype(">u2").tobytes() for a in found]
    ordered = [found[i] for i in np.argsort(order_keys)]
    auts = AutomorphismGroup(grp, [GroupAutomorphism(grp, a, validate=False)
                                   for a in ordered])
    grp.__dict__[cache_key] = (budget, auts.order, auts)
    return auts


def conjugacy_class_representatives(auts: AutomorphismGroup) -> list[GroupAutomorphism]:
    return auts.conjugacy_class_representatives()


def restrict(aut: GroupAutomorphism, sub: SubgroupHandle
             ) -> tuple[GroupAutomorphism, np.ndarray]:
    """Restriction to an invariant subgroup, as an automorphism of the abstract
    group on that subgroup.  Returns (restricted automorphism, sub->parent map).
    """
    if not sub.mask[aut.images[sub.members]].all():
        raise SubgroupNotInvariant(
            f"automorphism does not map the subgroup of order {sub.order} onto itself")
    sub_group, to_parent = sub.as_group
    parent_to_sub = np.full(aut.group.order, -1, dtype=IDX_DTYPE)
    parent_to_sub[to_parent] = np.arange(to_parent.size, dtype=IDX_DTYPE)
    images = parent_to_sub[aut.images[to_parent]]
    return GroupAutomorphism(sub_group, images, validate=False), to_parent
