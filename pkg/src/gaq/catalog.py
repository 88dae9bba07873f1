"""Catalog of all groups of each supported order.

Groups ship as JSON lines, one entry per line, in one of two shapes:

    {"order": n, "id": k, "name": s, "degree": d, "gens": [[...], ...]}
    {"order": n, "id": k, "name": s, "cayley": [[...], ...]}

Generator image arrays are 0-based permutations of 0..degree-1; entries are
realized by deterministic breadth-first closure, so a file always produces
bit-identical tables.  Completeness of the shipped data cannot be proven
internally; it is pinned against a bundled table of known group counts per
order (1..127), and validation additionally checks pairwise non-isomorphism,
so a corrupted file fails loudly instead of silently skewing counts.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .automorphisms import search_isomorphisms
from .errors import (
    CatalogParseError,
    CountMismatch,
    DuplicateGroup,
    GroupConstructionError,
    IsomorphicDuplicates,
    OrderMismatch,
)
from .groups import FiniteGroup, group_from_cayley_table, group_from_generators

_DATA_PACKAGE = "gaq.data"
GROUPS_FILENAME = "small_groups.jsonl"
COUNTS_FILENAME = "group_counts.json"


@dataclass(frozen=True)
class CatalogEntry:
    order: int
    local_id: int
    name: str
    source: str  # "builtin" for the shipped file, else the file path
    degree: Optional[int] = None
    gens: Optional[tuple[tuple[int, ...], ...]] = None
    cayley: Optional[tuple[tuple[int, ...], ...]] = None

    def realize(self) -> FiniteGroup:
        if self.cayley is not None:
            return group_from_cayley_table(self.cayley, name=self.name)
        return group_from_generators(self.degree, [list(g) for g in self.gens],
                                     name=self.name)

    def to_json_line(self) -> str:
        obj: dict = {"order": self.order, "id": self.local_id, "name": self.name}
        if self.cayley is not None:
            obj["cayley"] = [list(row) for row in self.cayley]
        else:
            obj["degree"] = self.degree
            obj["gens"] = [list(g) for g in self.gens]
        return json.dumps(obj, separators=(", ", ": "))


def _builtin_text() -> str:
    return resources.files(_DATA_PACKAGE).joinpath(GROUPS_FILENAME).read_text("utf-8")


def _source_text(path: Optional[str]) -> tuple[str, str]:
    if path is None:
        return "builtin", _builtin_text()
    return str(path), Path(path).read_text("utf-8")


def catalog_hash(path: Optional[str] = None) -> str:
    """Content hash of a catalog source, used as a cache key component."""
    _, text = _source_text(path)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def parse_catalog(text: str, source: str) -> list[CatalogEntry]:
    entries = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CatalogParseError(source, lineno, f"invalid JSON: {exc}") from None
        if not isinstance(obj, dict):
            raise CatalogParseError(source, lineno, "entry must be a JSON object")
        try:
            order = int(obj["order"])
            local_id = int(obj["id"])
            name = str(obj["name"])
        except (KeyError, TypeError, ValueError) as exc:
            raise CatalogParseError(source, lineno, f"bad header field: {exc}") from None
        if "cayley" in obj:
            cayley = obj["cayley"]
            if (not isinstance(cayley, list)
                    or any(not isinstance(r, list) for r in cayley)):
                raise CatalogParseError(source, lineno, "cayley must be a list of rows")
            entries.append(CatalogEntry(order, local_id, name, source,
                                        cayley=tuple(tuple(int(v) for v in r)
                                                     for r in cayley)))
            continue
        try:
            degree = int(obj["degree"])
            gens = obj["gens"]
        except (KeyError, TypeError, ValueError) as exc:
            raise CatalogParseError(source, lineno, f"bad definition field: {exc}") from None
        if not isinstance(gens, list) or any(not isinstance(g, list) for g in gens):
            raise CatalogParseError(source, lineno, "gens must be a list of image arrays")
        entries.append(CatalogEntry(order, local_id, name, source, degree=degree,
                                    gens=tuple(tuple(int(v) for v in g) for g in gens)))
    return entries


def serialize_catalog(entries: Sequence[CatalogEntry]) -> str:
    return "".join(e.to_json_line() + "\n" for e in entries)


def load_entries(order: Optional[int] = None,
                 path: Optional[str] = None) -> list[CatalogEntry]:
    source, text = _source_text(path)
    entries = parse_catalog(text, source)
    if order is not None:
        entries = [e for e in entries if e.order == order]
    return sorted(entries, key=lambda e: (e.order, e.local_id))


@lru_cache(maxsize=None)
def _known_counts() -> dict[int, int]:
    text = resources.files(_DATA_PACKAGE).joinpath(COUNTS_FILENAME).read_text("utf-8")
    payload = json.loads(text)
    return {int(k): int(v) for k, v in payload["counts"].items()}


def known_group_count(order: int) -> Optional[int]:
    """Pinned number of groups of the given order, or None beyond the table."""
    return _known_counts().get(order)


def shipped_orders(path: Optional[str] = None) -> list[int]:
    return sorted({e.order for e in load_entries(path=path)})


# ---------------------------------------------------------------------------
# Group isomorphism (catalog-level)


def group_iso(ga: FiniteGroup, gb: FiniteGroup) -> Optional[np.ndarray]:
    """First group isomorphism found by generator-image backtracking, or None.

    The cheap structure fingerprint prunes almost every non-isomorphic pair
    before any search starts.
    """
    if ga.order != gb.order:
        return None
    if ga.structure_fingerprint != gb.structure_fingerprint:
        return None
    for images in search_isomorphisms(ga, gb):
        return images
    return None


# ---------------------------------------------------------------------------
# Loading and validation

_load_cache: dict = {}


def load_catalog(order: int, path: Optional[str] = None, *,
                 check_distinct: bool = True) -> list[FiniteGroup]:
    """Realize all catalog groups of one order, in local_id order.

    Raises CatalogParseError, OrderMismatch, or (when check_distinct)
    DuplicateGroup.
    """
    key = (catalog_hash(path), order, check_distinct)
    cached = _load_cache.get(key)
    if cached is not None:
        return cached
    entries = load_entries(order=order, path=path)
    groups = []
    for entry in entries:
        try:
            grp = entry.realize()
        except GroupConstructionError as exc:
            raise OrderMismatch(
                f"entry {entry.order}/{entry.local_id} ({entry.name}) "
                f"does not define a group: {exc}") from exc
        if grp.order != entry.order:
            raise OrderMismatch(
                f"entry {entry.order}/{entry.local_id} ({entry.name}) realizes a "
                f"group of order {grp.order}")
        groups.append(grp)
    if check_distinct:
        dup = _find_isomorphic_pair(groups)
        if dup is not None:
            i, j = dup
            raise DuplicateGroup(
                f"entries {entries[i].local_id} and {entries[j].local_id} of order "
                f"{order} are isomorphic")
    _load_cache[key] = groups
    return groups


def _find_isomorphic_pair(groups: Sequence[FiniteGroup]) -> Optional[tuple[int, int]]:
    buckets: dict = {}
    for i, grp in enumerate(groups):
        buckets.setdefault(grp.structure_fingerprint, []).append(i)
    for indices in buckets.values():
        for a in range(len(indices)):
            for b in range(a + 1, len(indices)):
                i, j = indices[a], indices[b]
                if group_iso(groups[i], groups[j]) is not None:
                    return i, j
    return None


@dataclass
class CatalogProblem:
    kind: str  # "parse", "order_mismatch", "count_mismatch", "isomorphic_duplicates"
    message: str


@dataclass
class CatalogValidation:
    order: int
    entry_count: int
    expected_count: Optional[int]
    problems: list[CatalogProblem]

    @property
    def ok(self) -> bool:
        return not self.problems

    def raise_first(self) -> None:
        if self.ok:
            return
        problem = self.problems[0]
        exc_type = {
            "parse": CatalogParseError,
            "order_mismatch": OrderMismatch,
            "count_mismatch": CountMismatch,
            "isomorphic_duplicates": IsomorphicDuplicates,
        }[problem.kind]
        if exc_type is CatalogParseError:
            raise CatalogParseError("catalog", 0, problem.message)
        raise exc_type(problem.message)


def validate_catalog(order: int, path: Optional[str] = None) -> CatalogValidation:
    """Check one order of a catalog: parseable, right orders, count pinned to
    the bundled table, and pairwise non-isomorphic."""
    problems: list[CatalogProblem] = []
    expected = known_group_count(order)
    try:
        groups = load_catalog(order, path, check_distinct=False)
    except CatalogParseError as exc:
        return CatalogValidation(order, 0, expected,
                                 [CatalogProblem("parse", str(exc))])
    except OrderMismatch as exc:
        return CatalogValidation(order, 0, expected,
                                 [CatalogProblem("order_mismatch", str(exc))])

    if expected is None:
        problems.append(CatalogProblem(
            "count_mismatch",
            f"no pinned group count for order {order}; refusing to certify"))
    elif len(groups) != expected:
        problems.append(CatalogProblem(
            "count_mismatch",
            f"order {order}: catalog has {len(groups)} entries, expected {expected}"))

    dup = _find_isomorphic_pair(groups)
    if dup is not None:
        problems.append(CatalogProblem(
            "isomorphic_duplicates",
            f"order {order}: entries {dup[0]} and {dup[1]} are isomorphic"))
    return CatalogValidation(order, len(groups), expected, problems)
