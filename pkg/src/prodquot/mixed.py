"""Conditions on index-2 extensions used for actions that swap the two factors.

Throughout, ``H`` is an index-2 subgroup of ``G`` given as an element set and
vectors are base-genus-1 generating vectors of ``H``.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .groups import ElementSet, GroupTable
from .signatures import BranchSignature
from .vectors import GeneratingVector, iter_candidates, SearchDomain


def outside(G: GroupTable, H: ElementSet) -> list[int]:
    return [g for g in range(G.order) if g not in H]


def is_nonsplit_extension(G: GroupTable, H: ElementSet) -> bool:
    """No element of order 2 lies outside ``H``."""
    ords = G.elem_order
    return all(ords[g] != 2 for g in range(G.order) if g not in H)


def _outside_conjugates(G: GroupTable, H: ElementSet, x: int) -> set[int]:
    out_idx = outside(G, H)
    return set(G.conj_table[out_idx, x].tolist())


def check_M1(G: GroupTable, H: ElementSet, branch: Sequence[int]) -> bool:
    """No branch element is conjugate to a branch element by an element outside ``H``."""
    targets = set(branch)
    return all(not (_outside_conjugates(G, H, x) & targets) for x in targets)


def outside_squares(G: GroupTable, H: ElementSet) -> set[int]:
    rows = G.rows
    return {rows[g][g] for g in range(G.order) if g not in H}


def subgroup_stabilizer_union(G: GroupTable, H: ElementSet, branch: Sequence[int]) -> set[int]:
    """Union of the ``H``-conjugates of the cyclic subgroups ``<l_j>``.

    Empty for an empty branch list, so (M2) holds vacuously there.
    """
    ct = G.conj_table
    hs = sorted(H)
    out: set[int] = set()
    for x in set(branch):
        for y in G.cyclic_subgroup(x):
            out.update(ct[hs, y].tolist())
    return out


def check_M2(G: GroupTable, H: ElementSet, branch: Sequence[int]) -> bool:
    """No square of an element outside ``H`` lies in an ``H``-conjugate of some ``<l_j>``."""
    return not (outside_squares(G, H) & subgroup_stabilizer_union(G, H, branch))


def lemma_deriv2_prune(G: GroupTable, H: ElementSet) -> bool:
    """True when no ``(1 | 2)`` vector of ``H`` can satisfy (M1).

    Such a vector has ``l_1 = [h_2, h_1]`` of order 2 in ``[H, H]``; if every
    involution of ``[G, G]`` is central, or one outside element centralizes
    every involution of ``[H, H]``, then ``l_1`` always has an outside
    element commuting with it.
    """
    ords = G.elem_order
    centre = G.center
    if all(x in centre for x in G.derived_subgroup if ords[x] == 2):
        return True
    inv_h = [x for x in G.subgroup_commutator(H, H) if ords[x] == 2]
    rows = G.rows
    for y in outside(G, H):
        if all(rows[y][x] == rows[x][y] for x in inv_h):
            return True
    return False


def find_mixed_vector(
    G: GroupTable,
    H: ElementSet,
    n: BranchSignature,
    mode: str = "exists",
) -> "Optional[GeneratingVector] | list[GeneratingVector]":
    """Vectors of type ``n`` generating ``H`` and passing (M1) and (M2).

    ``exists`` restricts the first branch element to ``H``-class
    representatives (both conditions are invariant under conjugation by
    ``H``); ``all`` enumerates everything.
    """
    dom = SearchDomain(G, H)
    squares = outside_squares(G, H)
    found = []
    for branch, handles in iter_candidates(G, n, up_to_conjugacy=(mode == "exists"), within=H):
        if not check_M1(G, H, branch):
            continue
        if squares & subgroup_stabilizer_union(G, H, branch):
            continue
        if not dom.generates(branch + handles):
            continue
        V = GeneratingVector(n, branch, handles, G)
        if mode == "exists":
            return V
        found.append(V)
    return None if mode == "exists" else found
