"""Exception hierarchy for the gaq package."""

from __future__ import annotations


class GAQError(Exception):
    """Base class for all errors raised by this package."""


# ---------------------------------------------------------------------------
# Group construction


class GroupConstructionError(GAQError):
    pass


class NotLatinSquare(GroupConstructionError):
    """A row or column of a multiplication table is not a permutation."""

    def __init__(self, axis: str, index: int):
        self.axis = axis
        self.index = index
        super().__init__(f"{axis} {index} of the table is not a permutation of 0..n-1")


class NoIdentity(GroupConstructionError):
    """No element acts as a two-sided identity."""


class NotAssociative(GroupConstructionError):
    """Associativity fails for some triple; the triple is reported."""

    def __init__(self, triple: tuple[int, int, int]):
        self.triple = triple
        x, y, z = triple
        super().__init__(f"associativity fails at ({x}*{y})*{z} != {x}*({y}*{z})")


class ClosureBudgetExceeded(GroupConstructionError):
    """Generator closure grew past the configured element cap."""

    def __init__(self, budget: int):
        self.budget = budget
        super().__init__(f"generator closure exceeded the cap of {budget} elements")


class ActionNotHomomorphism(GroupConstructionError):
    """The action defining a semidirect product is not a homomorphism."""


class ExtensionDataError(GroupConstructionError):
    """Invalid data for a cyclic extension of prime degree."""


class UnsupportedSpec(GAQError):
    """Unknown family name or out-of-range parameter for a standard group."""


class NotASubgroup(GAQError):
    """A member set is not closed under multiplication and inversion."""


# ---------------------------------------------------------------------------
# Automorphisms


class AutBudgetExceeded(GAQError):
    """Automorphism enumeration found more elements than the budget allows."""

    def __init__(self, group_name: str, budget: int):
        self.group_name = group_name
        self.budget = budget
        super().__init__(f"Aut({group_name}) has more than {budget} elements")


class SubgroupNotInvariant(GAQError):
    """restrict() was asked for a subgroup the automorphism does not map onto itself."""


class SubgroupNotFixedPointwise(GAQError):
    """A quandle triplet requires the automorphism to fix the subgroup pointwise."""


# ---------------------------------------------------------------------------
# Quandles


class QuandleAxiomError(GAQError):
    """A candidate operation table violates one of the quandle axioms."""

    def __init__(self, axiom: str, witness: tuple):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"quandle axiom violated ({axiom}) at {witness}")


class InternalConsistencyError(GAQError):
    """A provable invariant failed; this always signals an implementation bug."""


class WitnessVerificationFailed(InternalConsistencyError):
    """A reconstructed isomorphism failed its exhaustive verification."""


class SearchBudgetExceeded(GAQError):
    """Backtracking search hit its node cap before reaching a verdict.

    Deliberately distinct from a negative answer: callers must treat this as
    "unknown", never as "not isomorphic".
    """

    def __init__(self, budget: int):
        self.budget = budget
        super().__init__(f"search exceeded the node budget of {budget}")


# ---------------------------------------------------------------------------
# Catalog


class CatalogError(GAQError):
    pass


class CatalogParseError(CatalogError):
    def __init__(self, source: str, line: int, message: str):
        self.source = source
        self.line = line
        super().__init__(f"{source}:{line}: {message}")


class OrderMismatch(CatalogError):
    """A catalog entry realizes a group of a different order than declared."""


class DuplicateGroup(CatalogError):
    """Two entries of the same order realize isomorphic groups."""


class CountMismatch(CatalogError):
    """The number of catalog entries disagrees with the pinned group count."""


class IsomorphicDuplicates(CatalogError):
    """Validation found isomorphic entries within one order."""


class CatalogInvalid(CatalogError):
    """Classification refused because catalog validation failed."""


# ---------------------------------------------------------------------------
# Pipeline


class CorruptCache(GAQError):
    """A cache entry could not be decoded; the caller recomputes and warns."""
