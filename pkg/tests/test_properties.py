"""Invariant checks across sampled groups, twists, and instances."""

import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaq.automorphisms import automorphism_group, restrict
from gaq.catalog import load_catalog
from gaq.groups import direct_product, left_cosets, semidirect_product, subgroup_closure
from gaq.iso import brute_force_quandle_iso, fingerprint, gaq_isomorphic
from gaq.permutations import (
    compose,
    cycle_type,
    identity_perm,
    inverse_perm,
    perm_order,
    perm_power,
)
from gaq.quandles import generalized_alexander, quandle_power

permutation_arrays = st.integers(min_value=1, max_value=20).flatmap(
    lambda n: st.permutations(list(range(n))))


class TestPermutationAlgebra:
    @given(permutation_arrays)
    def test_inverse_cancels(self, p):
        p = np.array(p)
        n = p.size
        assert np.array_equal(compose(p, inverse_perm(p)), identity_perm(n))
        assert np.array_equal(compose(inverse_perm(p), p), identity_perm(n))

    @given(permutation_arrays, st.integers(min_value=0, max_value=12))
    def test_power_by_squaring_matches_iteration(self, p, k):
        p = np.array(p)
        step = identity_perm(p.size)
        for _ in range(k):
            step = compose(p, step)
        assert np.array_equal(perm_power(p, k), step)

    @given(permutation_arrays)
    def test_order_annihilates(self, p):
        p = np.array(p)
        assert np.array_equal(perm_power(p, perm_order(p)), identity_perm(p.size))

    @given(permutation_arrays)
    def test_cycle_type_sums_to_degree(self, p):
        p = np.array(p)
        assert sum(cycle_type(p)) == p.size

    @given(permutation_arrays)
    def test_conjugation_preserves_cycle_type(self, p):
        rng = random.Random(0)
        q = np.array(rng.sample(range(len(p)), len(p)))
        conj = compose(compose(q, np.array(p)), inverse_perm(q))
        assert cycle_type(conj) == cycle_type(np.array(p))


def _sample_instances(max_order, rng, count):
    """Random (group, twist) instances drawn from the shipped catalog."""
    out = []
    while len(out) < count:
        order = rng.randint(2, max_order)
        groups = load_catalog(order, check_distinct=False)
        grp = rng.choice(groups)
        auts = automorphism_group(grp)
        twist = rng.choice(auts.elements)
        out.append((grp, auts, twist))
    return out


@pytest.fixture(scope="module")
def sampled():
    rng = random.Random(20240817)
    return _sample_instances(16, rng, 25), rng


class TestInstanceInvariants:
    def test_axioms_and_identity_symmetry(self, sampled):
        instances, _ = sampled
        for grp, _, twist in instances:
            inst = generalized_alexander(grp, twist)  # validates the axioms
            assert np.array_equal(inst.quandle.table[:, 0], twist.images)

    def test_displacements_live_in_subgroup(self, sampled):
        instances, _ = sampled
        for grp, _, twist in instances:
            inst = generalized_alexander(grp, twist)
            assert inst.disp_subgroup.mask[inst.displacement].all()

    def test_twist_preserves_displacement_subgroup(self, sampled):
        instances, _ = sampled
        for grp, _, twist in instances:
            inst = generalized_alexander(grp, twist)
            restricted, to_parent = restrict(twist, inst.disp_subgroup)
            assert to_parent.size == inst.disp_subgroup.order

    def test_conjugate_twists_merge_and_conjugator_is_iso(self, sampled):
        instances, rng = sampled
        for grp, auts, twist in instances[:10]:
            alpha = rng.choice(auts.elements)
            conj = alpha.compose(twist).compose(alpha.inverse())
            a = generalized_alexander(grp, twist)
            b = generalized_alexander(grp, conj)
            assert fingerprint(a) == fingerprint(b)
            witness = gaq_isomorphic(a, b)
            assert witness is not None
            f = alpha.images
            assert np.array_equal(f[a.quandle.table],
                                  b.quandle.table[np.ix_(f, f)])

    def test_power_composition(self, sampled):
        instances, _ = sampled
        for grp, _, twist in instances[:8]:
            inst = generalized_alexander(grp, twist)
            twice = quandle_power(quandle_power(inst.quandle, 2), 3)
            once = quandle_power(inst.quandle, 6)
            assert np.array_equal(twice.table, once.table)

    def test_fingerprint_blocks_no_isomorphic_pair(self, sampled):
        # unequal fingerprints must imply the brute-force search also fails
        instances, _ = sampled
        insts = [generalized_alexander(g, t) for g, _, t in instances[:10]]
        for i in range(len(insts)):
            for j in range(i + 1, len(insts)):
                if insts[i].size != insts[j].size:
                    continue
                if fingerprint(insts[i]) != fingerprint(insts[j]):
                    assert brute_force_quandle_iso(insts[i].quandle,
                                                   insts[j].quandle) is None


class TestGroupInvariants:
    def test_direct_equals_semidirect_with_trivial_action(self, sampled):
        instances, _ = sampled
        for grp, _, _ in instances[:5]:
            other = load_catalog(3)[0]
            action = [np.arange(grp.order)] * 3
            assert np.array_equal(semidirect_product(grp, other, action).table,
                                  direct_product(grp, other).table)

    def test_closure_idempotent_and_lagrange(self, sampled):
        instances, rng = sampled
        for grp, _, _ in instances[:8]:
            seed = rng.sample(range(grp.order), min(2, grp.order))
            sub = subgroup_closure(grp, seed)
            again = subgroup_closure(grp, list(map(int, sub.members)))
            assert np.array_equal(sub.members, again.members)
            assert grp.order % sub.order == 0
            part = left_cosets(grp, sub)
            assert {b.size for b in part.blocks} == {sub.order}

    def test_aut_closure_spot_check(self, sampled):
        instances, rng = sampled
        for grp, auts, _ in instances[:5]:
            keys = {a.images.tobytes() for a in auts}
            for _ in range(10):
                a, b = rng.choice(auts.elements), rng.choice(auts.elements)
                assert a.compose(b).images.tobytes() in keys
