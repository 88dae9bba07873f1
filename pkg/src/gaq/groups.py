"""Finite groups as dense multiplication tables over 0-based element indices.

Every group lives on the index set 0..n-1 with the identity pinned at index 0;
constructors relabel if the input puts the identity elsewhere.  Tables are
validated exhaustively (Latin square, associativity, identity, inverses) at
construction and are immutable afterwards.  Derived data such as element
orders, the center, and conjugacy classes is computed on demand and cached.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import (
    ActionNotHomomorphism,
    ClosureBudgetExceeded,
    ExtensionDataError,
    NoIdentity,
    NotASubgroup,
    NotAssociative,
    NotLatinSquare,
    UnsupportedSpec,
)
from .permutations import (
    IDX_DTYPE,
    compose,
    identity_perm,
    inverse_perm,
    is_permutation,
    perm_power,
)

MAX_ORDER = 512

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61)


def _as_images(obj) -> np.ndarray:
    """Accept either a raw image array or an object carrying .images."""
    images = getattr(obj, "images", obj)
    return np.asarray(images, dtype=IDX_DTYPE)


def _relabel_table(table: np.ndarray, new_of_old: np.ndarray) -> np.ndarray:
    inv = inverse_perm(new_of_old)
    return new_of_old[table[np.ix_(inv, inv)]]


class FiniteGroup:
    """A finite group given by its full multiplication table.

    table[x][y] is the index of x*y.  The identity is element 0.
    """

    def __init__(self, table, name: str = "G", labels: Sequence[str] | None = None):
        arr = np.array(table, dtype=IDX_DTYPE)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise ValueError(f"table must be a nonempty square matrix, got shape {arr.shape}")
        n = arr.shape[0]
        if n > MAX_ORDER:
            raise ValueError(f"order {n} exceeds the supported cap of {MAX_ORDER}")
        if arr.min() < 0 or arr.max() >= n:
            raise ValueError("table entries must lie in 0..n-1")
        if labels is not None and len(labels) != n:
            raise ValueError(f"expected {n} labels, got {len(labels)}")

        ref = np.arange(n, dtype=IDX_DTYPE)
        row_sorted = np.sort(arr, axis=1)
        bad_rows = np.nonzero((row_sorted != ref).any(axis=1))[0]
        if bad_rows.size:
            raise NotLatinSquare("row", int(bad_rows[0]))
        col_sorted = np.sort(arr, axis=0)
        bad_cols = np.nonzero((col_sorted != ref[:, None]).any(axis=0))[0]
        if bad_cols.size:
            raise NotLatinSquare("column", int(bad_cols[0]))

        left_ids = np.nonzero((arr == ref).all(axis=1))[0]
        ident = None
        for e in left_ids:
            if (arr[:, e] == ref).all():
                ident = int(e)
                break
        if ident is None:
            raise NoIdentity("no two-sided identity element found")
        if ident != 0:
            swap = ref.copy()
            swap[0], swap[ident] = swap[ident], swap[0]
            arr = _relabel_table(arr, swap)
            if labels is not None:
                labels = list(labels)
                labels[0], labels[ident] = labels[ident], labels[0]

        # Associativity, blocked by the left operand to bound memory.
        for x in range(n):
            lhs = arr[arr[x], :]
            rhs = arr[x][arr]
            if not np.array_equal(lhs, rhs):
                y, z = np.argwhere(lhs != rhs)[0]
                raise NotAssociative((x, int(y), int(z)))

        inv = np.argmax(arr == 0, axis=1).astype(IDX_DTYPE)
        if not (arr[inv, np.arange(n)] == 0).all():
            raise NotAssociative((0, 0, 0))  # unreachable for a validated table

        arr.setflags(write=False)
        inv.setflags(write=False)
        self.table = arr
        self.inverse = inv
        self.order = n
        self.name = str(name)
        self.labels = list(labels) if labels is not None else None

    # -- elementary operations ------------------------------------------------

    def mul(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def inv(self, x: int) -> int:
        return int(self.inverse[x])

    def conjugate(self, g: int, x: int) -> int:
        """g * x * g^-1."""
        return int(self.table[self.table[g, x], self.inverse[g]])

    def element_order(self, x: int) -> int:
        acc = int(x)
        k = 1
        while acc != 0:
            acc = int(self.table[acc, x])
            k += 1
        return k

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels is not None else str(x)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"

    # -- cached derived data ---------------------------------------------------

    @cached_property
    def rows(self) -> list[list[int]]:
        """Plain-list copy of the table for hot Python loops."""
        return [list(map(int, row)) for row in self.table]

    @cached_property
    def inverse_list(self) -> list[int]:
        return list(map(int, self.inverse))

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int32)
        orders[0] = 1
        acc = np.arange(n)
        k = 1
        while (orders == 0).any():
            k += 1
            acc = self.table[acc, np.arange(n)]
            fresh = (acc == 0) & (orders == 0)
            orders[fresh] = k
        return orders

    @cached_property
    def exponent(self) -> int:
        result = 1
        for o in np.unique(self.element_orders):
            result = result * int(o) // np.gcd(result, int(o))
        return result

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def center(self) -> np.ndarray:
        return np.nonzero((self.table == self.table.T).all(axis=1))[0]

    @cached_property
    def conjugacy_classes(self) -> list[np.ndarray]:
        n = self.order
        assigned = np.full(n, -1, dtype=np.int32)
        classes: list[np.ndarray] = []
        g = np.arange(n)
        for x in range(n):
            if assigned[x] >= 0:
                continue
            orbit = np.unique(self.table[self.table[g, x], self.inverse[g]])
            assigned[orbit] = len(classes)
            classes.append(orbit)
        return classes

    @cached_property
    def class_of(self) -> np.ndarray:
        out = np.zeros(self.order, dtype=np.int32)
        for i, cls in enumerate(self.conjugacy_classes):
            out[cls] = i
        return out

    @cached_property
    def derived_subgroup(self) -> np.ndarray:
        n = self.order
        g = np.arange(n)
        comms = self.table[
            self.table[self.table[g[:, None], g[None, :]], self.inverse[g][:, None]],
            self.inverse[g][None, :],
        ]
        return subgroup_closure(self, np.unique(comms)).members

    @cached_property
    def class_signatures(self) -> list[tuple]:
        """Per-conjugacy-class invariants preserved by any isomorphism.

        Signature: (element order, class size, signatures of the classes hit by
        the power maps x -> x^p for primes p dividing the exponent).
        """
        orders = self.element_orders
        classes = self.conjugacy_classes
        base = [(int(orders[cls[0]]), len(cls)) for cls in classes]
        primes = [p for p in _PRIMES if self.exponent % p == 0]
        sigs = []
        for cls in classes:
            x = int(cls[0])
            powers = []
            for p in primes:
                xp = x
                for _ in range(p - 1):
                    xp = int(self.table[xp, x])
                powers.append(base[int(self.class_of[xp])])
            sigs.append((base[int(self.class_of[x])], tuple(powers)))
        return sigs

    @cached_property
    def structure_fingerprint(self) -> tuple:
        """Cheap isomorphism-invariant summary used to prune group comparisons."""
        orders = self.element_orders
        order_profile = tuple(sorted((int(o), int(c)) for o, c in
                                     zip(*np.unique(orders, return_counts=True))))
        class_profile = tuple(sorted(self.class_signatures))
        return (
            self.order,
            order_profile,
            self.is_abelian,
            int(self.center.size),
            int(self.derived_subgroup.size),
            class_profile,
        )

    def subgroup(self, members) -> "SubgroupHandle":
        return SubgroupHandle(self, members)


class SubgroupHandle:
    """A verified subgroup of a parent group, kept as a sorted index set."""

    def __init__(self, parent: FiniteGroup, members):
        members = np.unique(np.asarray(list(members), dtype=IDX_DTYPE))
        if members.size == 0 or members[0] != 0:
            raise NotASubgroup("a subgroup must contain the identity (index 0)")
        mask = np.zeros(parent.order, dtype=bool)
        mask[members] = True
        if not mask[parent.inverse[members]].all():
            raise NotASubgroup("member set is not closed under inversion")
        if not mask[parent.table[np.ix_(members, members)]].all():
            raise NotASubgroup("member set is not closed under multiplication")
        members.setflags(write=False)
        self.parent = parent
        self.members = members
        self.mask = mask

    @property
    def order(self) -> int:
        return int(self.members.size)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask[x])

    def __repr__(self) -> str:
        return f"SubgroupHandle(order={self.order} of {self.parent.name})"

    @cached_property
    def as_group(self) -> tuple[FiniteGroup, np.ndarray]:
        """The abstract group on this subgroup plus the sub->parent index map.

        Elements are re-indexed in ascending parent order, so parent identity 0
        maps to sub index 0.
        """
        to_parent = self.members.copy()
        parent_to_sub = np.full(self.parent.order, -1, dtype=IDX_DTYPE)
        parent_to_sub[to_parent] = np.arange(to_parent.size, dtype=IDX_DTYPE)
        sub_table = parent_to_sub[self.parent.table[np.ix_(to_parent, to_parent)]]
        labels = None
        if self.parent.labels is not None:
            labels = [self.parent.labels[int(x)] for x in to_parent]
        sub = FiniteGroup(sub_table, name=f"{self.parent.name}|sub{self.order}", labels=labels)
        to_parent.setflags(write=False)
        return sub, to_parent


class CosetPartition:
    """Left cosets gS of a subgroup, as index blocks plus an element->block map."""

    def __init__(self, parent: FiniteGroup, subgroup: SubgroupHandle):
        n = parent.order
        block_of = np.full(n, -1, dtype=np.int32)
        blocks: list[np.ndarray] = []
        for g in range(n):
            if block_of[g] >= 0:
                continue
            blk = np.sort(parent.table[g, subgroup.members])
            block_of[blk] = len(blocks)
            blocks.append(blk)
        size = subgroup.order
        if any(b.size != size for b in blocks) or len(blocks) * size != n:
            raise NotASubgroup("coset blocks do not partition the group evenly")
        self.parent = parent
        self.subgroup = subgroup
        self.blocks = blocks
        self.block_of = block_of

    def __len__(self) -> int:
        return len(self.blocks)


# ---------------------------------------------------------------------------
# Constructors


def group_from_cayley_table(table, name: str = "G",
                            labels: Sequence[str] | None = None) -> FiniteGroup:
    """Validate a raw multiplication table, relabeling the identity to index 0."""
    return FiniteGroup(table, name=name, labels=labels)


def group_from_generators(degree: int, gens: Sequence, name: str = "G",
                          budget: int = 2 ** 14) -> FiniteGroup:
    """Close a set of permutations of 0..degree-1 under composition.

    Elements are enumerated breadth-first over words (identity first, then
    generators in input order), which makes the resulting table deterministic
    across runs and platforms.
    """
    if degree < 1:
        raise ValueError("degree must be positive")
    gen_arrays = []
    for i, g in enumerate(gens):
        arr = _as_images(g)
        if not is_permutation(arr, degree):
            raise ValueError(f"generator {i} is not a permutation of 0..{degree - 1}")
        gen_arrays.append(arr)

    ident = identity_perm(degree)
    elements = [ident]
    index = {ident.tobytes(): 0}
    head = 0
    while head < len(elements):
        current = elements[head]
        head += 1
        for g in gen_arrays:
            prod = compose(current, g)
            key = prod.tobytes()
            if key not in index:
                if len(elements) >= budget:
                    raise ClosureBudgetExceeded(budget)
                index[key] = len(elements)
                elements.append(prod)

    n = len(elements)
    matrix = np.stack(elements)
    table = np.empty((n, n), dtype=IDX_DTYPE)
    for x in range(n):
        products = matrix[x][matrix]  # row y is element x composed after y
        for y in range(n):
            table[x, y] = index[products[y].tobytes()]
    return FiniteGroup(table, name=name)


def direct_product(g: FiniteGroup, h: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """Componentwise product; element (a, b) is indexed as a*|h| + b."""
    nh = h.order
    table = (g.table[:, None, :, None].astype(np.int32) * nh
             + h.table[None, :, None, :]).reshape(g.order * nh, g.order * nh)
    labels = None
    if g.labels is not None and h.labels is not None:
        labels = [f"({la},{lb})" for la in g.labels for lb in h.labels]
    return FiniteGroup(table, name=name or f"{g.name}x{h.name}", labels=labels)


def semidirect_product(n_grp: FiniteGroup, h_grp: FiniteGroup, action: Sequence,
                       name: str | None = None) -> FiniteGroup:
    """Group on N x H with (n1,h1)(n2,h2) = (n1 * act[h1](n2), h1*h2).

    action[h] must be an automorphism of N for each h, and h -> action[h] must
    be a homomorphism into Aut(N).  Element (a, b) is indexed as a*|H| + b.
    """
    if len(action) != h_grp.order:
        raise ActionNotHomomorphism("action must assign one automorphism per element of H")
    act = np.stack([_as_images(a) for a in action])
    for h in range(h_grp.order):
        if not is_permutation(act[h], n_grp.order):
            raise ActionNotHomomorphism(f"action[{h}] is not a permutation")
        if not np.array_equal(act[h][n_grp.table],
                              n_grp.table[np.ix_(act[h], act[h])]):
            raise ActionNotHomomorphism(f"action[{h}] is not an automorphism of N")
    for h1 in range(h_grp.order):
        for h2 in range(h_grp.order):
            if not np.array_equal(compose(act[h1], act[h2]),
                                  act[h_grp.mul(h1, h2)]):
                raise ActionNotHomomorphism(
                    f"action({h1}*{h2}) differs from action({h1})∘action({h2})")

    nh = h_grp.order
    twisted = n_grp.table[np.arange(n_grp.order)[:, None, None],
                          act[None, :, :]]  # [n1, h1, n2] = n1 * act[h1](n2)
    table = (twisted[:, :, :, None].astype(np.int32) * nh
             + h_grp.table[None, :, None, :]).reshape(n_grp.order * nh, n_grp.order * nh)
    labels = None
    if n_grp.labels is not None and h_grp.labels is not None:
        labels = [f"({la},{lb})" for la in n_grp.labels for lb in h_grp.labels]
    return FiniteGroup(table, name=name or f"{n_grp.name}:{h_grp.name}", labels=labels)


def cyclic_extension(base: FiniteGroup, twist, power_element: int, prime: int,
                     name: str | None = None) -> FiniteGroup:
    """Extension of a cyclic group of prime order by `base`.

    Builds the group generated by `base` and a new element t with
    t x t^-1 = twist(x) and t^prime = power_element.  This requires
    twist(power_element) == power_element and twist^prime equal to conjugation
    by power_element; both are checked.  Element (q, i) with 0 <= i < prime is
    indexed as q*prime + i.  Semidirect products with cyclic prime quotient are
    the special case power_element == 0, but non-split extensions (dicyclic
    groups, for instance) arise for other choices.
    """
    if prime < 2 or any(prime % d == 0 for d in range(2, prime)):
        raise ExtensionDataError(f"{prime} is not prime")
    theta = _as_images(twist)
    if not is_permutation(theta, base.order):
        raise ExtensionDataError("twist is not a permutation of the base group")
    if not np.array_equal(theta[base.table], base.table[np.ix_(theta, theta)]):
        raise ExtensionDataError("twist is not an automorphism of the base group")
    z = int(power_element)
    if theta[z] != z:
        raise ExtensionDataError("twist must fix the power element")
    conj_z = base.table[base.table[z, np.arange(base.order)], base.inverse[z]]
    if not np.array_equal(perm_power(theta, prime), conj_z):
        raise ExtensionDataError(
            "twist^prime must equal conjugation by the power element")

    powers = np.stack([perm_power(theta, i) for i in range(prime)])
    nq = base.order
    n = nq * prime
    table = np.empty((n, n), dtype=IDX_DTYPE)
    i_idx = np.arange(prime)
    for i1 in range(prime):
        carry = (i1 + i_idx) // prime  # 0 or 1
        i_out = (i1 + i_idx) % prime
        for q1 in range(nq):
            # rows for element (q1, i1): result (q1 * theta^i1(q2) * z^carry, i_out)
            prod = base.table[q1, powers[i1]]  # over q2
            with_carry = np.where(carry[None, :] == 1,
                                  base.table[prod][:, [z]], prod[:, None])
            table[q1 * prime + i1, :] = (with_carry * prime + i_out[None, :]).reshape(-1)
    return FiniteGroup(table, name=name or f"{base.name}.{prime}")


# ---------------------------------------------------------------------------
# Standard families


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise UnsupportedSpec(f"cyclic group order must be positive, got {n}")
    idx = np.arange(n, dtype=np.int32)
    return FiniteGroup(np.add.outer(idx, idx) % n, name=f"Z{n}")


def abelian_group(factors: Sequence[int]) -> FiniteGroup:
    """Direct product of cyclic groups, one per listed factor."""
    factors = list(factors)
    if not factors:
        return cyclic_group(1)
    if any(f < 1 for f in factors):
        raise UnsupportedSpec(f"abelian factors must be positive, got {factors}")
    grp = cyclic_group(factors[0])
    for f in factors[1:]:
        grp = direct_product(grp, cyclic_group(f))
    grp.name = "x".join(f"Z{f}" for f in factors)
    return grp


def dihedral_group(order: int) -> FiniteGroup:
    if order < 2 or order % 2 != 0:
        raise UnsupportedSpec(f"dihedral groups have even order >= 2, got {order}")
    half = order // 2
    rot = cyclic_group(half)
    negation = (-np.arange(half)) % half
    grp = semidirect_product(rot, cyclic_group(2),
                             [identity_perm(half), negation.astype(IDX_DTYPE)])
    grp.name = f"D{order}"
    return grp


def dicyclic_group(order: int) -> FiniteGroup:
    if order < 4 or order % 4 != 0:
        raise UnsupportedSpec(f"dicyclic groups have order divisible by 4, got {order}")
    half = order // 2
    base = cyclic_group(half)
    negation = ((-np.arange(half)) % half).astype(IDX_DTYPE)
    grp = cyclic_extension(base, negation, half // 2, 2)
    grp.name = "Q8" if order == 8 else f"Dic{order // 4}"
    return grp


def symmetric_group(n: int) -> FiniteGroup:
    if not 1 <= n <= 5:
        raise UnsupportedSpec(f"symmetric groups are supported for degree 1..5, got {n}")
    perms = [np.array(p, dtype=IDX_DTYPE) for p in itertools.permutations(range(n))]
    index = {p.tobytes(): i for i, p in enumerate(perms)}
    m = len(perms)
    table = np.empty((m, m), dtype=IDX_DTYPE)
    for x in range(m):
        for y in range(m):
            table[x, y] = index[compose(perms[x], perms[y]).tobytes()]
    return FiniteGroup(table, name=f"S{n}")


_FAMILIES = {
    "cyclic": lambda arg: cyclic_group(int(arg)),
    "abelian": lambda arg: abelian_group([int(f) for f in arg]),
    "dihedral": lambda arg: dihedral_group(int(arg)),
    "dicyclic": lambda arg: dicyclic_group(int(arg)),
    "symmetric": lambda arg: symmetric_group(int(arg)),
}


def standard_family(kind: str, arg) -> FiniteGroup:
    """Dispatch on a family name: cyclic(n), abelian(factors), dihedral(order),
    dicyclic(order), symmetric(n)."""
    try:
        builder = _FAMILIES[kind]
    except KeyError:
        raise UnsupportedSpec(f"unknown family {kind!r}; expected one of "
                              f"{sorted(_FAMILIES)}") from None
    return builder(arg)


# ---------------------------------------------------------------------------
# Subgroup machinery


def subgroup_closure(grp: FiniteGroup, seed) -> SubgroupHandle:
    """Smallest subgroup containing the seed indices."""
    mask = np.zeros(grp.order, dtype=bool)
    mask[0] = True
    seed = np.asarray(list(seed), dtype=np.int64)
    if seed.size:
        mask[seed] = True
    while True:
        members = np.nonzero(mask)[0]
        grown = mask.copy()
        grown[grp.table[np.ix_(members, members)]] = True
        grown[grp.inverse[members]] = True
        if (grown == mask).all():
            break
        mask = grown
    return SubgroupHandle(grp, np.nonzero(mask)[0])


def is_normal(grp: FiniteGroup, sub: SubgroupHandle) -> bool:
    g = np.arange(grp.order)
    conjugated = grp.table[grp.table[g[:, None], sub.members[None, :]],
                           grp.inverse[g][:, None]]
    return bool(sub.mask[conjugated].all())


def left_cosets(grp: FiniteGroup, sub: SubgroupHandle) -> CosetPartition:
    return CosetPartition(grp, sub)


def element_order(grp: FiniteGroup, x: int) -> int:
    return grp.element_order(x)
