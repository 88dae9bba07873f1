"""Finite groups, twisted-group quandles, isomorphism testing, classification."""

from .errors import GAQError
from .groups import (
    CosetPartition,
    FiniteGroup,
    SubgroupHandle,
    abelian_group,
    cyclic_extension,
    cyclic_group,
    dicyclic_group,
    dihedral_group,
    direct_product,
    element_order,
    group_from_cayley_table,
    group_from_generators,
    is_normal,
    left_cosets,
    semidirect_product,
    standard_family,
    subgroup_closure,
    symmetric_group,
)
from .automorphisms import (
    AutomorphismGroup,
    GroupAutomorphism,
    automorphism_group,
    conjugacy_class_representatives,
    fix_set,
    identity_automorphism,
    is_automorphism,
    restrict,
)
from .quandles import (
    GAQInstance,
    Quandle,
    generalized_alexander,
    inner_orbit,
    point_symmetry,
    quandle_from_triplet,
    quandle_power,
)
from .iso import (
    Fingerprint,
    IsoWitness,
    brute_force_quandle_iso,
    fingerprint,
    gaq_isomorphic,
    intertwining_isomorphisms,
    match_coset_displacements,
)
from .catalog import (
    CatalogEntry,
    group_iso,
    known_group_count,
    load_catalog,
    validate_catalog,
)
from .pipeline import (
    ClassificationReport,
    PipelineConfig,
    classify_order,
    classify_orders,
    iso_query,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
