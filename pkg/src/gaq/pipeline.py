"""Classification of twisted-group quandles by order, reports, and caching.

For each group of the requested order the pipeline enumerates the automorphism
group (within a budget), keeps one automorphism per conjugacy class (conjugate
twists provably give isomorphic quandles, so this only removes duplicates),
builds the quandle instances, buckets them by fingerprint across all groups of
the order, and merges within each bucket using the structural decider.  Every
group contributes the trivial quandle through the identity twist, so the
cross-group merge is mandatory, not an optimization.  A budget trip never
degrades into a wrong number: the affected group lands in the skip list and
the order's count is suppressed.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from . import catalog as catalog_mod
from .automorphisms import GroupAutomorphism, automorphism_group
from .errors import (
    AutBudgetExceeded,
    CatalogInvalid,
    CorruptCache,
    InternalConsistencyError,
    SearchBudgetExceeded,
)
from .iso import brute_force_quandle_iso, fingerprint, gaq_isomorphic
from .quandles import GAQInstance, generalized_alexander

SCHEMA_VERSION = 1

AUT_BUDGET_ENV = "GAQ_AUT_BUDGET"
NODE_BUDGET_ENV = "GAQ_NODE_BUDGET"


@dataclass(frozen=True)
class PipelineConfig:
    aut_budget: int = 2_000_000
    node_budget: int = 10 ** 8
    oracle: bool = False
    threads: int = 1
    conjugacy_reduction: bool = True
    catalog_path: Optional[str] = None
    cache_dir: Optional[str] = None

    @classmethod
    def from_env(cls, **overrides) -> "PipelineConfig":
        """Defaults, with budgets overridable through environment variables."""
        values = dict(overrides)
        if "aut_budget" not in values and os.environ.get(AUT_BUDGET_ENV):
            values["aut_budget"] = int(os.environ[AUT_BUDGET_ENV])
        if "node_budget" not in values and os.environ.get(NODE_BUDGET_ENV):
            values["node_budget"] = int(os.environ[NODE_BUDGET_ENV])
        return cls(**values)

    def result_key(self) -> str:
        """Hash over the fields that influence classification results."""
        payload = json.dumps({
            "aut_budget": self.aut_budget,
            "node_budget": self.node_budget,
            "conjugacy_reduction": self.conjugacy_reduction,
        }, sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass
class ClassRecord:
    group_id: int
    group_name: str
    twist: tuple[int, ...]
    member_count: int
    disp_size: int
    twist_order: int
    fixed_count: int
    second_disp_normal: bool
    second_disp_covered: bool

    def to_json_dict(self) -> dict:
        return {
            "group_id": self.group_id,
            "group_name": self.group_name,
            "twist": list(self.twist),
            "member_count": self.member_count,
            "disp_size": self.disp_size,
            "twist_order": self.twist_order,
            "fixed_count": self.fixed_count,
            "second_disp_normal": self.second_disp_normal,
            "second_disp_covered": self.second_disp_covered,
        }


@dataclass
class SkippedGroup:
    group_id: int
    group_name: str
    reason: str

    def to_json_dict(self) -> dict:
        return {"group_id": self.group_id, "group_name": self.group_name,
                "reason": self.reason}


@dataclass
class ClassificationReport:
    order: int
    class_count: Optional[int]
    classes: list[ClassRecord]
    skipped: list[SkippedGroup]
    seconds: float
    catalog_hash: str
    config_key: str
    schema: int = SCHEMA_VERSION

    @property
    def partial(self) -> bool:
        return bool(self.skipped)

    def to_json_dict(self) -> dict:
        return {
            "schema": self.schema,
            "order": self.order,
            "class_count": self.class_count,
            "partial": self.partial,
            "classes": [c.to_json_dict() for c in self.classes],
            "skipped": [s.to_json_dict() for s in self.skipped],
            "seconds": round(self.seconds, 3),
            "catalog_hash": self.catalog_hash,
            "config_key": self.config_key,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "ClassificationReport":
        if obj.get("schema") != SCHEMA_VERSION:
            raise CorruptCache(f"unsupported schema {obj.get('schema')!r}")
        classes = [ClassRecord(
            group_id=c["group_id"], group_name=c["group_name"],
            twist=tuple(c["twist"]), member_count=c["member_count"],
            disp_size=c["disp_size"], twist_order=c["twist_order"],
            fixed_count=c["fixed_count"],
            second_disp_normal=c["second_disp_normal"],
            second_disp_covered=c["second_disp_covered"],
        ) for c in obj["classes"]]
        skipped = [SkippedGroup(s["group_id"], s["group_name"], s["reason"])
                   for s in obj["skipped"]]
        return cls(order=obj["order"], class_count=obj["class_count"],
                   classes=classes, skipped=skipped, seconds=obj["seconds"],
                   catalog_hash=obj["catalog_hash"], config_key=obj["config_key"])

    def render_text(self) -> str:
        lines = []
        if self.class_count is not None:
            head = f"order {self.order}: {self.class_count} quandle classes"
        else:
            head = f"order {self.order}: PARTIAL (count suppressed)"
        lines.append(f"{head}  [{self.seconds:.2f}s]")
        for skip in self.skipped:
            lines.append(f"  skipped group {skip.group_id} ({skip.group_name}): "
                         f"{skip.reason}")
        return "\n".join(lines)


def render_counts_table(reports: Sequence[ClassificationReport],
                        band: int = 16) -> str:
    """Aligned two-row bands: orders on top, class counts (or '?') below."""
    lines = []
    for start in range(0, len(reports), band):
        chunk = reports[start:start + band]
        cells = [(str(r.order),
                  "?" if r.class_count is None else str(r.class_count))
                 for r in chunk]
        widths = [max(len(a), len(b)) for a, b in cells]
        top = "  ".join(a.rjust(w) for (a, _), w in zip(cells, widths))
        bot = "  ".join(b.rjust(w) for (_, b), w in zip(cells, widths))
        lines.append(f"order  | {top}")
        lines.append(f"count  | {bot}")
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"


# ---------------------------------------------------------------------------
# Instance construction (optionally fanned out to worker processes)


def _twist_reps_for_group(grp, aut_budget: int, conjugacy_reduction: bool
                          ) -> list[np.ndarray]:
    auts = automorphism_group(grp, budget=aut_budget)
    if conjugacy_reduction:
        return [a.images for a in auts.conjugacy_class_representatives()]
    return [a.images for a in auts.elements]


def _aut_worker(args: tuple) -> tuple[int, Optional[list], Optional[str]]:
    """Process-pool worker: returns (group_id, twist image lists, skip reason)."""
    gid, table, name, aut_budget, conjugacy_reduction = args
    from .groups import FiniteGroup  # re-import inside the worker process

    grp = FiniteGroup(table, name=name)
    try:
        reps = _twist_reps_for_group(grp, aut_budget, conjugacy_reduction)
    except AutBudgetExceeded as exc:
        return gid, None, str(exc)
    return gid, [list(map(int, images)) for images in reps], None


@dataclass
class _Instance:
    group_id: int
    group_name: str
    twist_images: tuple[int, ...]
    inst: GAQInstance


def _build_instances(order: int, config: PipelineConfig
                     ) -> tuple[list[_Instance], list[SkippedGroup]]:
    groups = catalog_mod.load_catalog(order, config.catalog_path,
                                      check_distinct=False)
    results: dict[int, tuple[Optional[list], Optional[str]]] = {}
    if config.threads > 1 and len(groups) > 1:
        jobs = [(gid, np.asarray(grp.table).tolist(), grp.name,
                 config.aut_budget, config.conjugacy_reduction)
                for gid, grp in enumerate(groups)]
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            for gid, reps, reason in pool.map(_aut_worker, jobs):
                results[gid] = (reps, reason)
    else:
        for gid, grp in enumerate(groups):
            try:
                reps = _twist_reps_for_group(grp, config.aut_budget,
                                             config.conjugacy_reduction)
                results[gid] = ([list(map(int, r)) for r in reps], None)
            except AutBudgetExceeded as exc:
                results[gid] = (None, str(exc))

    instances: list[_Instance] = []
    skipped: list[SkippedGroup] = []
    for gid, grp in enumerate(groups):
        reps, reason = results[gid]
        if reps is None:
            skipped.append(SkippedGroup(gid, grp.name, reason))
            continue
        for images in reps:
            twist = GroupAutomorphism(grp, images, validate=False)
            instances.append(_Instance(gid, grp.name, tuple(images),
                                       generalized_alexander(grp, twist)))
    return instances, skipped


# ---------------------------------------------------------------------------
# Classification


def classify_order(order: int, config: Optional[PipelineConfig] = None
                   ) -> ClassificationReport:
    """Count the isomorphism classes of twisted-group quandles of one order."""
    config = config or PipelineConfig()
    started = time.perf_counter()

    validation = catalog_mod.validate_catalog(order, config.catalog_path)
    if not validation.ok:
        raise CatalogInvalid(
            f"catalog failed validation for order {order}: "
            + "; ".join(p.message for p in validation.problems))

    instances, skipped = _build_instances(order, config)

    buckets: dict = {}
    for idx, item in enumerate(instances):
        buckets.setdefault(fingerprint(item.inst), []).append(idx)

    class_of = [-1] * len(instances)
    class_members: list[list[int]] = []
    for fp in sorted(buckets):
        reps_in_bucket: list[int] = []
        for idx in buckets[fp]:
            placed = False
            for rep_idx in reps_in_bucket:
                if gaq_isomorphic(instances[idx].inst,
                                  instances[rep_idx].inst) is not None:
                    cid = class_of[rep_idx]
                    class_of[idx] = cid
                    class_members[cid].append(idx)
                    placed = True
                    break
            if not placed:
                class_of[idx] = len(class_members)
                class_members.append([idx])
                reps_in_bucket.append(idx)

    if config.oracle:
        _oracle_recheck(instances, class_of, config.node_budget)

    records = []
    for members in class_members:
        rep = instances[members[0]]
        fp = fingerprint(rep.inst)
        records.append(ClassRecord(
            group_id=rep.group_id, group_name=rep.group_name,
            twist=rep.twist_images, member_count=len(members),
            disp_size=fp.disp_size, twist_order=fp.twist_order,
            fixed_count=fp.fixed_count,
            second_disp_normal=fp.second_disp_normal,
            second_disp_covered=fp.second_disp_covered,
        ))
    records.sort(key=lambda r: (r.group_id, r.twist))

    report = ClassificationReport(
        order=order,
        class_count=None if skipped else len(class_members),
        classes=records,
        skipped=skipped,
        seconds=time.perf_counter() - started,
        catalog_hash=catalog_mod.catalog_hash(config.catalog_path),
        config_key=config.result_key(),
    )
    if config.cache_dir:
        cache_store(report, config.cache_dir)
    return report


def _oracle_recheck(instances: list[_Instance], class_of: list[int],
                    node_budget: int) -> None:
    """Re-check every merge and non-merge decision against the raw-table oracle."""
    for i in range(len(instances)):
        for j in range(i + 1, len(instances)):
            same = class_of[i] == class_of[j]
            found = brute_force_quandle_iso(instances[i].inst.quandle,
                                            instances[j].inst.quandle,
                                            node_budget=node_budget)
            if (found is not None) != same:
                raise InternalConsistencyError(
                    f"oracle disagrees on instances {i} and {j}: "
                    f"engine said same={same}")


def classify_orders(orders: Iterable[int],
                    config: Optional[PipelineConfig] = None
                    ) -> list[ClassificationReport]:
    config = config or PipelineConfig()
    reports = []
    for order in orders:
        cached = cache_load(order, config) if config.cache_dir else None
        reports.append(cached if cached is not None else classify_order(order, config))
    return reports


# ---------------------------------------------------------------------------
# Caching


def _cache_path(cache_dir: str, order: int, cat_hash: str, config_key: str) -> Path:
    return Path(cache_dir) / f"classify-{order}-{cat_hash[:16]}-{config_key}.json"


def cache_store(report: ClassificationReport, cache_dir: str) -> Path:
    path = _cache_path(cache_dir, report.order, report.catalog_hash,
                       report.config_key)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(report.to_json_dict(), indent=2, sort_keys=True),
                   encoding="utf-8")
    os.replace(tmp, path)  # single-writer atomic publish
    return path


def cache_load(order: int, config: PipelineConfig
               ) -> Optional[ClassificationReport]:
    if not config.cache_dir:
        return None
    cat_hash = catalog_mod.catalog_hash(config.catalog_path)
    path = _cache_path(config.cache_dir, order, cat_hash, config.result_key())
    if not path.exists():
        return None
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
        report = ClassificationReport.from_json_dict(obj)
        if report.order != order or report.catalog_hash != cat_hash:
            raise CorruptCache("cache entry does not match its key")
        return report
    except (json.JSONDecodeError, KeyError, TypeError, CorruptCache) as exc:
        warnings.warn(f"discarding corrupt cache entry {path}: {exc}",
                      stacklevel=2)
        return None


# ---------------------------------------------------------------------------
# Pairwise isomorphism queries


@dataclass
class IsoQueryResult:
    verdict: str  # "yes", "no", or "unknown"
    witness: Optional[dict]

    def to_json_dict(self) -> dict:
        return {"schema": SCHEMA_VERSION, "verdict": self.verdict,
                "witness": self.witness}


def resolve_instance(order: int, group_id: int, twist_source: str,
                     config: Optional[PipelineConfig] = None) -> GAQInstance:
    """Build an instance from a catalog reference and a twist description.

    twist_source is either the literal "identity" or a path to a JSON file
    holding a 0-based image array.
    """
    config = config or PipelineConfig()
    groups = catalog_mod.load_catalog(order, config.catalog_path,
                                      check_distinct=False)
    if not 0 <= group_id < len(groups):
        raise ValueError(f"order {order} has groups 0..{len(groups) - 1}, "
                         f"got id {group_id}")
    grp = groups[group_id]
    if twist_source in ("identity", "id"):
        images = list(range(grp.order))
    else:
        images = json.loads(Path(twist_source).read_text(encoding="utf-8"))
        if isinstance(images, dict):
            images = images["images"]
    twist = GroupAutomorphism(grp, np.asarray(images))
    return generalized_alexander(grp, twist)


def iso_query(spec_a: tuple[int, int, str], spec_b: tuple[int, int, str],
              config: Optional[PipelineConfig] = None) -> IsoQueryResult:
    config = config or PipelineConfig()
    inst_a = resolve_instance(*spec_a, config=config)
    inst_b = resolve_instance(*spec_b, config=config)
    try:
        witness = gaq_isomorphic(inst_a, inst_b)
    except (AutBudgetExceeded, SearchBudgetExceeded):
        return IsoQueryResult("unknown", None)
    if witness is None:
        return IsoQueryResult("no", None)
    return IsoQueryResult("yes", witness.to_json_dict())
