"""Generating vectors: search, verification and the stabilizer condition.

A vector of type ``(0 | m_1..m_r)`` is a tuple ``(g_1, ..., g_r)`` with
``|g_i| = m_i``, ``g_1 ... g_r = 1`` generating the group.  A vector of type
``(1 | n_1..n_s)`` is ``(l_1, ..., l_s; h_1, h_2)`` with ``|l_j| = n_j``,
``l_1 ... l_s [h_1, h_2] = 1`` generating the group.

Stabilizer sets are encoded as bitmasks over conjugacy classes: the union of
all conjugates of ``<x>`` is the union of the classes of the powers of ``x``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence
from weakref import WeakKeyDictionary

from .groups import ElementSet, GroupTable, abelian_invariants_from_orders
from .signatures import BranchSignature

EXISTS = "exists"
ALL = "all"


@dataclass(frozen=True)
class GeneratingVector:
    signature: BranchSignature
    branch: tuple[int, ...]
    handles: tuple[int, ...] = ()
    group: Optional[GroupTable] = field(default=None, compare=False, repr=False)

    @property
    def elements(self) -> tuple[int, ...]:
        return self.branch + self.handles

    def is_valid(self, G: Optional[GroupTable] = None, within: Optional[ElementSet] = None) -> bool:
        G = G if G is not None else self.group
        return is_generating_vector(G, self.signature.base_genus, self.branch, self.handles, within)


def long_relation(G: GroupTable, base_genus: int, branch: Sequence[int], handles: Sequence[int]) -> int:
    """Value of ``g_1 ... g_r [h_1, h_2]`` (just the product when the base genus is 0)."""
    x = G.product(branch)
    if base_genus == 1:
        x = G.m(x, G.commutator(handles[0], handles[1]))
    return x


def is_generating_vector(
    G: GroupTable,
    base_genus: int,
    branch: Sequence[int],
    handles: Sequence[int] = (),
    within: Optional[ElementSet] = None,
    periods: Optional[Sequence[int]] = None,
) -> bool:
    """Full check of the defining conditions (orders, long relation, generation)."""
    if len(handles) != 2 * base_genus:
        return False
    if periods is not None and [G.elem_order[g] for g in branch] != list(periods):
        return False
    if any(G.elem_order[g] < 2 for g in branch):
        return False
    if long_relation(G, base_genus, branch, handles) != G.identity:
        return False
    elems = list(branch) + list(handles)
    if within is not None:
        return all(x in within for x in elems) and G.closure(elems) == within
    return G.generates(elems)


# -- stabilizer masks --------------------------------------------------------

_MASKS: "WeakKeyDictionary[GroupTable, list[int]]" = WeakKeyDictionary()


def power_class_masks(G: GroupTable) -> list[int]:
    """``mask[x]``: bit ``c`` set iff class ``c`` contains a nontrivial power of ``x``."""
    masks = _MASKS.get(G)
    if masks is None:
        class_of = G.class_of
        masks = []
        for x in range(G.order):
            bits = 0
            for y in G.cyclic_subgroup(x)[1:]:
                bits |= 1 << class_of[y]
            masks.append(bits)
        _MASKS[G] = masks
    return masks


def branch_mask(G: GroupTable, branch: Sequence[int]) -> int:
    masks = power_class_masks(G)
    out = 0
    for g in branch:
        out |= masks[g]
    return out


def mask_members(G: GroupTable, mask: int) -> ElementSet:
    out = {G.identity}
    for c, cls in enumerate(G.conjugacy_classes):
        if mask >> c & 1:
            out |= cls
    return frozenset(out)


def stabilizer_union(G: GroupTable, V: GeneratingVector) -> ElementSet:
    """Union of all conjugates of the cyclic subgroups ``<g_i>`` over the branch elements."""
    return mask_members(G, branch_mask(G, V.branch))


def check_condition_U(G: GroupTable, V: GeneratingVector, W: GeneratingVector) -> bool:
    """The two stabilizer unions meet only in the identity."""
    return branch_mask(G, V.branch) & branch_mask(G, W.branch) == 0


# -- cheap necessary conditions ----------------------------------------------


def _cyclic_quotient_orders(periods: Sequence[int]) -> list[int]:
    """Element orders of ``(Z_m1 x ... x Z_mr) / <(1, ..., 1)>``, one entry per element."""
    if not periods:
        return [1]
    elems = list(itertools.product(*(range(m) for m in periods)))
    diag = tuple(1 % m for m in periods)
    sub = set()
    x = tuple(0 for _ in periods)
    while x not in sub:
        sub.add(x)
        x = tuple((a + b) % m for a, b, m in zip(x, diag, periods))
    out = []
    for e in elems:
        k, y = 1, e
        while y not in sub:
            y = tuple((a + b) % m for a, b, m in zip(y, e, periods))
            k += 1
        out.append(k)
    return out


def _rank_profile(divisors: Sequence[int]) -> dict[tuple[int, int], int]:
    """``(p, j) -> number of cyclic factors of order at least p^j``."""
    prof: dict[tuple[int, int], int] = {}
    for q in divisors:
        p = min(d for d in range(2, q + 1) if q % d == 0)
        e, t = 0, q
        while t > 1:
            t //= p
            e += 1
        for j in range(1, e + 1):
            prof[(p, j)] = prof.get((p, j), 0) + 1
    return prof


def abelianization_allows(G: GroupTable, signature: BranchSignature) -> bool:
    """Necessary condition: ``G^ab`` is a quotient of the abelianized orbifold group.

    That group is ``Z^(2g') + (Z_m1 x ... x Z_mr)/<(1,...,1)>``; a finite abelian
    group is a quotient of a finitely generated one iff, for every prime power
    ``p^j``, it has no more cyclic factors of order at least ``p^j``.
    """
    free = 2 * signature.base_genus
    target = _rank_profile(abelian_invariants_from_orders(_cyclic_quotient_orders(signature.periods)))
    mine = _rank_profile(G.abelianization_type)
    return all(count <= free + target.get(key, 0) for key, count in mine.items())


def orders_present(G: GroupTable, periods: Sequence[int]) -> bool:
    spec = G.order_spectrum
    return all(spec.get(m, 0) > 0 for m in periods)


def may_admit(G: GroupTable, signature: BranchSignature) -> bool:
    """Cheap filters that every group admitting the signature passes."""
    if any(G.order % m for m in signature.periods):
        return False
    return orders_present(G, signature.periods) and abelianization_allows(G, signature)


# -- enumeration ---------------------------------------------------------------


class SearchDomain:
    """The elements a search ranges over: the whole group or a subgroup."""

    def __init__(self, G: GroupTable, within: Optional[ElementSet]):
        self.G = G
        self.within = within
        self.members = sorted(within) if within is not None else list(range(G.order))
        self.size = len(self.members)
        self._by_order: dict[int, list[int]] = {}
        self._class_id: Optional[list[int]] = None
        self._generated: dict[frozenset, bool] = {}

    def of_order(self, m: int) -> list[int]:
        lst = self._by_order.get(m)
        if lst is None:
            ords = self.G.elem_order
            lst = [x for x in self.members if ords[x] == m]
            self._by_order[m] = lst
        return lst

    def class_ids(self) -> list[int]:
        """Conjugacy class (within the domain) of every element, ``-1`` outside."""
        if self._class_id is None:
            G = self.G
            if self.within is None:
                self._class_id = list(G.class_of)
            else:
                ids = [-1] * G.order
                ct = G.conj_table
                members = self.members
                k = 0
                for x in members:
                    if ids[x] >= 0:
                        continue
                    for y in ct[members, x].tolist():
                        ids[y] = k
                    k += 1
                self._class_id = ids
        return self._class_id

    def reps(self, elems: Sequence[int]) -> list[int]:
        ids = self.class_ids()
        seen = set()
        out = []
        for x in elems:
            if ids[x] not in seen:
                seen.add(ids[x])
                out.append(x)
        return out

    def generates(self, elems: Sequence[int]) -> bool:
        # vectors repeat their element sets a lot, so memoize by set
        key = frozenset(elems)
        ok = self._generated.get(key)
        if ok is None:
            ok = self._generated[key] = self.G.closure_size(list(key)) == self.size
        return ok


def iter_candidates(
    G: GroupTable,
    signature: BranchSignature,
    up_to_conjugacy: bool = False,
    within: Optional[ElementSet] = None,
    periods: Optional[Sequence[int]] = None,
) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Tuples satisfying the order and long-relation conditions, generation unchecked.

    ``periods`` overrides the order in which the signature's periods are
    assigned to branch positions.  With ``up_to_conjugacy`` the first branch
    element (or ``h_1`` when there are no branch points) runs over class
    representatives of the domain only.
    """
    dom = SearchDomain(G, within)
    periods = tuple(periods) if periods is not None else signature.periods
    rows, inv, ords = G.rows, G.inv_list, G.elem_order
    e = G.identity
    if signature.base_genus == 0:
        r = len(periods)
        if r == 0:
            return
        lists = [dom.of_order(m) for m in periods[:-1]]
        if lists and up_to_conjugacy:
            lists[0] = dom.reps(lists[0])
        last = periods[-1]
        for prefix in itertools.product(*lists):
            x = e
            for g in prefix:
                x = rows[x][g]
            y = inv[x]
            if ords[y] == last:
                yield prefix + (y,), ()
        return

    # base genus 1: l_1 ... l_s [h_1, h_2] = 1
    s = len(periods)
    comm = G.commutator_table
    members = dom.members
    if s == 0:
        h1_list = dom.reps(members) if up_to_conjugacy else members
        for h1 in h1_list:
            crow = comm[h1].tolist()
            for h2 in members:
                if crow[h2] == e:
                    yield (), (h1, h2)
        return
    lists = [dom.of_order(m) for m in periods[:-1]]
    first_reps = up_to_conjugacy
    if lists and first_reps:
        lists[0] = dom.reps(lists[0])
    last = periods[-1]
    if s == 1 and up_to_conjugacy:
        # restrict l_1 itself to class representatives
        allowed = set(dom.reps(dom.of_order(last)))
    else:
        allowed = None
    for h1 in members:
        crow = comm[h1].tolist()
        for h2 in members:
            c_inv = inv[crow[h2]]
            for prefix in itertools.product(*lists):
                x = e
                for g in prefix:
                    x = rows[x][g]
                y = rows[inv[x]][c_inv]
                if ords[y] == last and (allowed is None or y in allowed):
                    yield prefix + (y,), (h1, h2)


def find_generating_vectors(
    G: GroupTable,
    signature: BranchSignature,
    mode: str = EXISTS,
    within: Optional[ElementSet] = None,
):
    """Generating vectors of the given type for ``G`` (or for the subgroup ``within``).

    ``exists`` returns the first witness (first branch element restricted to
    class representatives) or None; ``all`` returns every vector, unpruned.
    """
    if mode not in (EXISTS, ALL):
        raise ValueError(f"unknown mode {mode!r}")
    target = G if within is None else None
    size = G.order if within is None else len(within)
    if any(size % m for m in signature.periods):
        return None if mode == EXISTS else []
    if target is not None and not may_admit(G, signature):
        return None if mode == EXISTS else []
    dom = SearchDomain(G, within)
    out = []
    for branch, handles in iter_candidates(G, signature, up_to_conjugacy=(mode == EXISTS), within=within):
        if dom.generates(branch + handles):
            V = GeneratingVector(signature, branch, handles, G)
            if mode == EXISTS:
                return V
            out.append(V)
    return None if mode == EXISTS else out


def count_generating_vectors(G: GroupTable, signature: BranchSignature) -> int:
    return len(find_generating_vectors(G, signature, ALL))


def masks_by_vector(
    G: GroupTable,
    signature: BranchSignature,
    within: Optional[ElementSet] = None,
) -> dict[int, list[tuple[tuple[int, ...], tuple[int, ...]]]]:
    """Candidate tuples (generation unchecked) grouped by stabilizer mask, up to conjugacy."""
    out: dict[int, list] = {}
    masks = power_class_masks(G)
    for branch, handles in iter_candidates(G, signature, up_to_conjugacy=True, within=within):
        m = 0
        for g in branch:
            m |= masks[g]
        out.setdefault(m, []).append((branch, handles))
    return out


def find_condition_U_pair(
    G: GroupTable, m: BranchSignature, n: BranchSignature
) -> Optional[tuple[GeneratingVector, GeneratingVector]]:
    """A pair ``(V, W)`` of types ``m`` and ``n`` satisfying (U), or None.

    Candidates are bucketed by stabilizer mask (invariant under conjugation),
    and generation is only tested for buckets that could pair up.
    """
    if not (may_admit(G, m) and may_admit(G, n)):
        return None
    w_buckets = masks_by_vector(G, n)
    if not w_buckets:
        return None
    v_buckets = masks_by_vector(G, m)
    dom = SearchDomain(G, None)
    witness: dict[tuple[str, int], Optional[tuple]] = {}

    def first_generating(tag: str, mask: int, bucket) -> Optional[tuple]:
        key = (tag, mask)
        if key not in witness:
            witness[key] = next((t for t in bucket if dom.generates(t[0] + t[1])), None)
        return witness[key]

    for vm in sorted(v_buckets):
        partners = [wm for wm in sorted(w_buckets) if vm & wm == 0]
        if not partners:
            continue
        v = first_generating("V", vm, v_buckets[vm])
        if v is None:
            continue
        for wm in partners:
            w = first_generating("W", wm, w_buckets[wm])
            if w is not None:
                return (
                    GeneratingVector(m, v[0], v[1], G),
                    GeneratingVector(n, w[0], w[1], G),
                )
    return None
