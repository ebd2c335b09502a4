"""Classification drivers for unmixed and mixed actions, and the records they emit."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

from .catalog import Catalog, GroupId, identify, load_catalog
from .groups import ElementSet, GroupTable
from .mixed import find_mixed_vector, is_nonsplit_extension, lemma_deriv2_prune
from .moduli import OrbitCount, count_components_mixed, count_components_unmixed
from .signatures import BranchSignature, enumerate_admissible_tuples, rh_genus, surface_invariants
from .vectors import EXISTS, GeneratingVector, find_condition_U_pair, find_generating_vectors, may_admit

log = logging.getLogger(__name__)

# g_F -> (n, |G| / alpha, alpha cap from the bound on |Aut(F)|)
UNMIXED_CASES: dict[int, tuple[tuple[int, ...], int, int]] = {
    3: ((2, 2), 2, 84),
    4: ((3,), 3, 40),
    5: ((2,), 4, 48),
}

# (g_C, n, |G|); the subgroup G° has index 2
MIXED_CASES: tuple[tuple[int, tuple[int, ...], int], ...] = (
    (5, (2, 2), 16),
    (7, (3,), 36),
    (9, (2,), 64),
)


@dataclass
class SurfaceRecord:
    kind: str
    g_F: int
    g_C: int
    group_id: GroupId
    m: Optional[BranchSignature]
    n: BranchSignature
    chi: int
    K2: int
    g_alb: int
    dimension: int
    subgroup_id: Optional[GroupId] = None
    components: Optional[int] = None
    witness: tuple[GeneratingVector, ...] = ()
    notes: list[str] = field(default_factory=list)

    def sort_key(self):
        m = self.m.periods if self.m is not None else ()
        sub = self.subgroup_id or GroupId(0, 0)
        return (self.g_F, self.group_id.order, self.group_id.id, m, self.n.periods, sub)


@dataclass
class Classification:
    records: list[SurfaceRecord]
    complete_orders: list[int]
    incomplete_orders: list[int]

    @property
    def exhaustive(self) -> bool:
        return not self.incomplete_orders

    @property
    def status(self) -> str:
        return "exhaustive" if self.exhaustive else "partial"


def unmixed_candidates(g_F: int, alpha_cap: Optional[int] = None) -> list[tuple[BranchSignature, int]]:
    """``(m, |G|)`` for every admissible ``m`` of the given case."""
    _, factor, cap = UNMIXED_CASES[g_F]
    cap = cap if alpha_cap is None else alpha_cap
    return [(BranchSignature(0, m), factor * a) for m, a in enumerate_admissible_tuples(cap)]


def unmixed_record(G: GroupTable, gid: GroupId, m: BranchSignature, n: BranchSignature) -> Optional[SurfaceRecord]:
    """The record for ``(G, m, n)`` if some pair of vectors satisfies (U)."""
    pair = find_condition_U_pair(G, m, n)
    if pair is None:
        return None
    g_F = rh_genus(0, G.order, m.periods)
    g_C = rh_genus(1, G.order, n.periods)
    chi, K2 = surface_invariants(g_C, g_F, G.order)
    return SurfaceRecord(
        kind="unmixed",
        g_F=g_F,
        g_C=g_C,
        group_id=gid,
        m=m,
        n=n,
        chi=chi,
        K2=K2,
        g_alb=g_F,
        dimension=m.r + n.r - 3,
        witness=pair,
    )


# worker-side state for parallel sweeps
_worker_catalog: Optional[Catalog] = None


def _init_worker(path: str) -> None:
    global _worker_catalog
    _worker_catalog = load_catalog(path)


def _unmixed_task(args) -> list[SurfaceRecord]:
    gid, jobs, n = args
    G = _worker_catalog.group(*gid)
    out = []
    for m in jobs:
        rec = unmixed_record(G, gid, m, n)
        if rec is not None:
            out.append(_strip_group(rec))
    _worker_catalog.forget_tables()
    return out


def _strip_group(rec: SurfaceRecord) -> SurfaceRecord:
    # witnesses crossing a process boundary should not drag their table along
    return replace(rec, witness=tuple(replace(v, group=None) for v in rec.witness))


def classify_unmixed(
    g_F: int,
    catalog: Catalog,
    alpha_cap: Optional[int] = None,
    jobs: int = 1,
) -> Classification:
    """Every ``(G, m)`` with ``n`` fixed by ``g_F`` that carries a pair satisfying (U).

    Abelian groups are included.  Orders missing from the catalog are
    reported, and the groups that are present are still searched.
    """
    if g_F not in UNMIXED_CASES:
        raise ValueError(f"g_F must be one of {sorted(UNMIXED_CASES)}")
    n = BranchSignature(1, UNMIXED_CASES[g_F][0])
    by_order: dict[int, list[BranchSignature]] = {}
    for m, order in unmixed_candidates(g_F, alpha_cap):
        by_order.setdefault(order, []).append(m)
    coverage = catalog.coverage(by_order)

    tasks = []
    for order in sorted(by_order):
        for i in catalog.ids_of_order(order):
            tasks.append((GroupId(order, i), by_order[order]))

    records: list[SurfaceRecord] = []
    if jobs > 1 and catalog.path:
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(catalog.path,)) as pool:
            results = pool.map(_unmixed_task, [(gid, ms, n) for gid, ms in tasks], chunksize=4)
            for recs in results:
                records.extend(recs)
    else:
        last_order = None
        for gid, ms in tasks:
            if last_order is not None and gid.order != last_order:
                catalog.forget_tables(last_order)
            last_order = gid.order
            G = catalog.group(*gid)
            for m in ms:
                rec = unmixed_record(G, gid, m, n)
                if rec is not None:
                    records.append(rec)
        if last_order is not None:
            catalog.forget_tables(last_order)
    records.sort(key=SurfaceRecord.sort_key)
    return Classification(records, coverage["complete"], coverage["incomplete"])


def admissible_mixed_subgroups(
    G: GroupTable, n: BranchSignature, prune: bool = True
) -> list[tuple[ElementSet, GeneratingVector]]:
    """Index-2 subgroups ``G°`` over which ``G`` is nonsplit and carries a vector passing (M1), (M2).

    With ``prune`` the abelian groups and, for ``n = (2)``, the cases covered
    by the involution-centralizer lemma are skipped without search.
    """
    if prune and G.is_abelian:
        return []
    out = []
    for H in G.index_two_subgroups():
        if not is_nonsplit_extension(G, H):
            continue
        if prune and n.periods == (2,) and lemma_deriv2_prune(G, H):
            continue
        V = find_mixed_vector(G, H, n, mode=EXISTS)
        if V is not None:
            out.append((H, V))
    return out


def classify_mixed(
    catalog: Catalog,
    cases: Sequence[tuple[int, tuple[int, ...], int]] = MIXED_CASES,
    prune: bool = True,
) -> Classification:
    """Records ``(G, G°, n)`` for the factor-swapping actions, one per isomorphism type of ``G°``."""
    records: list[SurfaceRecord] = []
    needed: set[int] = set()
    for g_C, n_periods, order in cases:
        needed.update((order, order // 2))
        n = BranchSignature(1, n_periods)
        for gid, G in catalog.groups_of_order(order):
            seen: set[GroupId] = set()
            for H, V in admissible_mixed_subgroups(G, n, prune):
                sub_table, _ = G.subgroup_table(H)
                sub_id = identify(sub_table, catalog)
                if sub_id in seen:
                    continue
                seen.add(sub_id)
                assert rh_genus(1, len(H), n.periods) == g_C
                chi, K2 = surface_invariants(g_C, g_C, order)
                records.append(
                    SurfaceRecord(
                        kind="mixed",
                        g_F=g_C,
                        g_C=g_C,
                        group_id=gid,
                        subgroup_id=sub_id,
                        m=None,
                        n=n,
                        chi=chi,
                        K2=K2,
                        g_alb=g_C,
                        dimension=n.r,
                        witness=(V,),
                    )
                )
            catalog.forget_tables(order)
    coverage = catalog.coverage(needed)
    records.sort(key=SurfaceRecord.sort_key)
    return Classification(records, coverage["complete"], coverage["incomplete"])


def mixed_subgroups_for(G: GroupTable, catalog: Catalog, record: SurfaceRecord) -> list[ElementSet]:
    """The index-2 subgroups of ``G`` of the record's type that carry admissible vectors."""
    out = []
    for H, _ in admissible_mixed_subgroups(G, record.n, prune=False):
        sub_table, _ = G.subgroup_table(H)
        if identify(sub_table, catalog) == record.subgroup_id:
            out.append(H)
    return out


def count_components(record: SurfaceRecord, catalog: Catalog, state_cap: Optional[int] = None) -> OrbitCount:
    G = catalog.group(*record.group_id)
    kwargs = {} if state_cap is None else {"state_cap": state_cap}
    if record.kind == "unmixed":
        return count_components_unmixed(G, record.m, record.n, **kwargs)
    return count_components_mixed(G, mixed_subgroups_for(G, catalog, record), record.n, **kwargs)


def attach_components(records: Iterable[SurfaceRecord], catalog: Catalog) -> list[SurfaceRecord]:
    out = []
    for rec in records:
        res = count_components(rec, catalog)
        out.append(replace(rec, components=res.components, notes=rec.notes + res.notes))
    return out


def groups_generated_by(catalog: Catalog, order: int, signature: BranchSignature) -> list[GroupId]:
    """Catalog ids of the given order admitting a generating vector of the given type."""
    out = []
    for gid, G in catalog.groups_of_order(order):
        if may_admit(G, signature) and find_generating_vectors(G, signature, EXISTS) is not None:
            out.append(gid)
    catalog.forget_tables(order)
    return out
