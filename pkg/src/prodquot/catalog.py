"""The small-groups catalog: loading, validation and identification.

File format: UTF-8, LF-terminated lines, one JSON object per line.  Group
records look like ``{"order":O,"id":I,"degree":D,"gens":[[...],...]}`` with
1-based permutation images and an optional ``"name"``; a line
``{"manifest":true,"order":O,"count":K}`` declares order ``O`` complete with
``K`` groups.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, NamedTuple, Optional

from .constructors import PermGenSet, group_from_permutations
from .errors import CatalogError, GroupError, NotFound, OrderIncomplete
from .groups import GroupTable
from .morphisms import isomorphism

log = logging.getLogger(__name__)

CATALOG_ENV = "PRODQUOT_CATALOG"

# orders the classification drivers touch
REQUIRED_ORDERS = (
    4, 6, 8, 9, 10, 12, 15, 16, 18, 20, 24, 27, 30, 32, 36, 40, 45, 48, 54, 60,
    64, 72, 80, 90, 96, 108, 120, 144, 160, 168, 192,
)


class GroupId(NamedTuple):
    order: int
    id: int

    def __str__(self) -> str:
        return f"G({self.order},{self.id})"


@dataclass(frozen=True)
class CatalogEntry:
    group_id: GroupId
    perm_gens: PermGenSet
    name: Optional[str] = None


@dataclass
class Catalog:
    entries: dict[GroupId, CatalogEntry]
    manifest: dict[int, int]
    content_hash: str = ""
    path: Optional[str] = None
    _tables: dict = field(default_factory=dict, repr=False)
    _fingerprints: dict = field(default_factory=dict, repr=False)

    def is_complete(self, order: int) -> bool:
        return order in self.manifest and len(self.ids_of_order(order)) == self.manifest[order]

    def ids_of_order(self, order: int) -> list[int]:
        return sorted(gid.id for gid in self.entries if gid.order == order)

    def orders(self) -> list[int]:
        return sorted({gid.order for gid in self.entries} | set(self.manifest))

    def group(self, order: int, gid: int) -> GroupTable:
        """Group table of entry ``(order, gid)``; cached."""
        key = GroupId(order, gid)
        table = self._tables.get(key)
        if table is None:
            try:
                entry = self.entries[key]
            except KeyError:
                raise NotFound(f"no catalog entry {key}") from None
            table = group_from_permutations(entry.perm_gens, cap=max(order, 1), name=entry.name or str(key))
            self._tables[key] = table
        return table

    def groups_of_order(self, order: int) -> Iterable[tuple[GroupId, GroupTable]]:
        for i in self.ids_of_order(order):
            yield GroupId(order, i), self.group(order, i)

    def fingerprint(self, gid: GroupId):
        fp = self._fingerprints.get(gid)
        if fp is None:
            fp = self.group(*gid).fingerprint
            self._fingerprints[gid] = fp
        return fp

    def forget_tables(self, order: Optional[int] = None) -> None:
        """Drop cached tables (all, or one order) to bound memory in long sweeps."""
        if order is None:
            self._tables.clear()
        else:
            for k in [k for k in self._tables if k.order == order]:
                del self._tables[k]

    def coverage(self, orders: Iterable[int]) -> dict[str, list[int]]:
        orders = sorted(set(orders))
        return {
            "complete": [o for o in orders if self.is_complete(o)],
            "incomplete": [o for o in orders if not self.is_complete(o)],
        }


def default_catalog_path() -> Path:
    env = os.environ.get(CATALOG_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("prodquot") / "data" / "catalog.jsonl"))


def load_catalog(path=None) -> Catalog:
    path = Path(path) if path is not None else default_catalog_path()
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise CatalogError(f"cannot read catalog {path}: {exc}") from None
    return parse_catalog(raw, str(path))


def parse_catalog(raw: bytes, path: Optional[str] = None) -> Catalog:
    entries: dict[GroupId, CatalogEntry] = {}
    manifest: dict[int, int] = {}
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CatalogError(f"catalog is not UTF-8: {exc}") from None
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            if rec.get("manifest"):
                order, count = int(rec["order"]), int(rec["count"])
                if order in manifest:
                    raise CatalogError(f"line {lineno}: duplicate manifest for order {order}")
                manifest[order] = count
                continue
            gid = GroupId(int(rec["order"]), int(rec["id"]))
            perms = PermGenSet.from_one_based(int(rec["degree"]), rec["gens"])
        except CatalogError:
            raise
        except (ValueError, KeyError, TypeError, GroupError) as exc:
            raise CatalogError(f"line {lineno}: {exc}") from None
        if gid in entries:
            raise CatalogError(f"line {lineno}: duplicate entry {gid}")
        entries[gid] = CatalogEntry(gid, perms, rec.get("name"))
    return Catalog(entries, manifest, hashlib.sha256(raw).hexdigest(), path)


def dump_catalog(cat: Catalog) -> str:
    lines = []
    for order in cat.orders():
        for i in cat.ids_of_order(order):
            e = cat.entries[GroupId(order, i)]
            rec = {"order": order, "id": i, "degree": e.perm_gens.degree, "gens": e.perm_gens.one_based()}
            if e.name:
                rec["name"] = e.name
            lines.append(json.dumps(rec, separators=(",", ":")))
        if order in cat.manifest:
            lines.append(json.dumps({"manifest": True, "order": order, "count": cat.manifest[order]}, separators=(",", ":")))
    return "\n".join(lines) + "\n"


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)
    complete_orders: list[int] = field(default_factory=list)
    incomplete_orders: list[int] = field(default_factory=list)
    entries_checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.errors


def validate_catalog(
    cat: Catalog, orders: Optional[Iterable[int]] = None, check_isomorphism: bool = True
) -> ValidationReport:
    """Recompute every entry's order, check manifests and pairwise non-isomorphism."""
    report = ValidationReport()
    if not cat.entries and not cat.manifest:
        report.errors.append("catalog is empty")
        return report
    selected = sorted(set(orders)) if orders is not None else cat.orders()
    for order in selected:
        ids = cat.ids_of_order(order)
        for i in ids:
            gid = GroupId(order, i)
            try:
                G = cat.group(order, i)
            except GroupError as exc:
                report.errors.append(f"{gid}: {exc}")
                continue
            report.entries_checked += 1
            if G.order != order:
                report.errors.append(f"{gid}: generators give a group of order {G.order}")
        if order in cat.manifest:
            count = cat.manifest[order]
            if len(ids) != count:
                report.errors.append(f"order {order}: manifest declares {count} groups, found {len(ids)}")
            elif ids != list(range(1, count + 1)):
                report.errors.append(f"order {order}: ids are not 1..{count}")
            else:
                report.complete_orders.append(order)
                if check_isomorphism:
                    report.errors.extend(_pairwise_distinct(cat, order, ids))
        else:
            report.incomplete_orders.append(order)
        cat.forget_tables(order)
    return report


def _pairwise_distinct(cat: Catalog, order: int, ids: list[int]) -> list[str]:
    errors = []
    buckets: dict = {}
    for i in ids:
        gid = GroupId(order, i)
        try:
            fp = cat.fingerprint(gid)
        except GroupError:
            continue
        buckets.setdefault(fp, []).append(gid)
    for members in buckets.values():
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                ga, gb = members[a], members[b]
                if isomorphism(cat.group(*ga), cat.group(*gb)) is not None:
                    errors.append(f"{ga} and {gb} are isomorphic")
    return errors


def identify(G: GroupTable, cat: Catalog) -> GroupId:
    """The catalog id of the isomorphism class of ``G``."""
    n = G.order
    if not cat.is_complete(n):
        raise OrderIncomplete(n)
    fp = G.fingerprint
    for i in cat.ids_of_order(n):
        gid = GroupId(n, i)
        if cat.fingerprint(gid) != fp:
            continue
        if isomorphism(G, cat.group(n, i)) is not None:
            return gid
    raise NotFound(f"no catalog entry of order {n} is isomorphic to the given group")
