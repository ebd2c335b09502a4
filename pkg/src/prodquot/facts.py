"""Group-theoretic checks that back the nonexistence arguments of the mixed case.

Each function is a small sweep over catalog groups; the results are plain
ids, counts and subgroups so they can be compared directly with expected
tables.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .catalog import Catalog, GroupId, identify
from .classify import groups_generated_by
from .groups import ElementSet, GroupTable
from .mixed import is_nonsplit_extension
from .morphisms import isomorphism
from .presentation import Presentation, parse_word, evaluate_word
from .signatures import BranchSignature
from .todd_coxeter import group_from_presentation


def _matches(G: GroupTable, members: ElementSet, target: GroupTable) -> bool:
    if len(members) != target.order:
        return False
    sub, _ = G.subgroup_table(members)
    return sub.fingerprint == target.fingerprint and isomorphism(sub, target) is not None


def nonabelian_generated(catalog: Catalog, order: int, periods: Sequence[int]) -> list[GroupId]:
    """Nonabelian groups of the given order admitting a ``(0 | periods)`` vector."""
    sig = BranchSignature.of(0, periods)
    return [gid for gid in groups_generated_by(catalog, order, sig) if not catalog.group(*gid).is_abelian]


def groups_with_normal_subgroup(catalog: Catalog, order: int, sub_id: GroupId) -> list[GroupId]:
    """Groups of the given order with a normal subgroup isomorphic to ``sub_id``."""
    if order % sub_id.order:
        return []
    target = catalog.group(*sub_id)
    out = []
    for gid, G in catalog.groups_of_order(order):
        # index-2 subgroups are normal and much cheaper to list than the lattice
        if 2 * sub_id.order == order:
            normals = G.index_two_subgroups()
        else:
            normals = G.normal_subgroups(order=sub_id.order)
        if any(_matches(G, N, target) for N in normals):
            out.append(gid)
    catalog.forget_tables(order)
    return out


def involution_counts(catalog: Catalog, order: int, ids: Iterable[int]) -> dict[int, int]:
    return {i: catalog.group(order, i).count_elements_of_order(2) for i in ids}


def noncentral_derived_involutions(G: GroupTable) -> bool:
    """Some element of order 2 in ``[G, G]`` is not central."""
    centre = G.center
    ords = G.elem_order
    return any(ords[d] == 2 and d not in centre for d in G.derived_subgroup)


def one_two_generated(catalog: Catalog, order: int = 32) -> dict[int, int]:
    """Ids of the ``(1 | 2)``-generated groups of the given order, with their involution counts."""
    ids = [gid.id for gid in groups_generated_by(catalog, order, BranchSignature(1, (2,)))]
    return involution_counts(catalog, order, ids)


def nonsplit_extension_pairs(
    catalog: Catalog, sub_ids: Iterable[int], sub_order: int = 32
) -> list[tuple[int, int]]:
    """Pairs ``(t, s)`` with ``G(2k, s)`` a nonsplit extension of ``G(k, t)`` by ``Z_2``."""
    targets = {t: catalog.group(sub_order, t) for t in sub_ids}
    pairs = set()
    for gid, G in catalog.groups_of_order(2 * sub_order):
        for H in G.index_two_subgroups():
            if not is_nonsplit_extension(G, H):
                continue
            for t, T in targets.items():
                if (t, gid.id) not in pairs and _matches(G, H, T):
                    pairs.add((t, gid.id))
    catalog.forget_tables(2 * sub_order)
    return sorted(pairs)


def normal_subgroups_of_types(
    G: GroupTable, catalog: Catalog, sub_ids: Iterable[GroupId]
) -> list[tuple[ElementSet, GroupId, ElementSet]]:
    """``(N, id(N), [N, N])`` for every normal subgroup ``N`` isomorphic to one of ``sub_ids``."""
    sub_ids = list(sub_ids)
    out = []
    for order in sorted({s.order for s in sub_ids}):
        for N in G.normal_subgroups(order=order):
            sub, _ = G.subgroup_table(N)
            sid = identify(sub, catalog)
            if sid in sub_ids:
                out.append((N, sid, G.subgroup_commutator(N, N)))
    return out


def subgroup_from_words(G: GroupTable, p: Presentation, words: Sequence[str]) -> ElementSet:
    """Subgroup of a presented group generated by words in the presentation's generators."""
    gens = G.generator_hint
    return G.closure(evaluate_word(G, gens, parse_word(w, p.generators)) for w in words)


def element_from_word(G: GroupTable, p: Presentation, word: str) -> int:
    return evaluate_word(G, G.generator_hint, parse_word(word, p.generators))


def centralizes(G: GroupTable, y: int, elems: Iterable[int]) -> bool:
    rows = G.rows
    return all(rows[y][x] == rows[x][y] for x in elems)


def extension_subgroup_report(
    p: Presentation, catalog: Catalog, sub_ids: Sequence[GroupId], outside: str = "y"
) -> dict:
    """Normal subgroups of the given types in a presented group and their commutator data.

    For each such subgroup ``N`` the report lists ``id(N)``, whether ``N`` is
    one of ``<x, z, w, v, u>`` and ``<x*y, z, w, v, u>``, whether
    ``[N, N] = <v, u>``, and whether the element ``outside`` lies outside
    ``N`` and commutes with ``[N, N]``.
    """
    G = group_from_presentation(p)
    candidates = {
        "<x,z,w,v,u>": subgroup_from_words(G, p, ["x", "z", "w", "v", "u"]),
        "<xy,z,w,v,u>": subgroup_from_words(G, p, ["x*y", "z", "w", "v", "u"]),
    }
    vu = subgroup_from_words(G, p, ["v", "u"])
    y = element_from_word(G, p, outside)
    subgroups = []
    for N, sid, D in normal_subgroups_of_types(G, catalog, sub_ids):
        label: Optional[str] = next((k for k, S in candidates.items() if S == N), None)
        subgroups.append(
            {
                "id": sid,
                "generated_by": label,
                "derived_is_vu": D == vu,
                "derived_order": len(D),
                "outside_element_centralizes": y not in N and centralizes(G, y, D),
            }
        )
    return {"group_id": identify(G, catalog), "subgroups": subgroups}
