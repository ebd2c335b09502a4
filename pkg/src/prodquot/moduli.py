"""Hurwitz moves on generating vectors and counting of moduli components.

Vectors are handled as raw index tuples: a genus-0 vector is the tuple of its
branch elements, a genus-1 vector is ``(l_1, ..., l_s, h_1, h_2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .errors import EmptyFamily, MoveError, OrbitCapExceeded
from .groups import ElementSet, GroupTable
from .mixed import find_mixed_vector
from .morphisms import Automorphism, automorphism_group
from .signatures import BranchSignature
from .vectors import ALL, branch_mask, find_generating_vectors

DEFAULT_STATE_CAP = 10_000_000

GENUS1_MOVES = ("t_alpha", "t_beta", "t_gamma", "rho")


def apply_sigma(G: GroupTable, i: int, branch: Sequence[int]) -> tuple[int, ...]:
    """``sigma_i`` (1-based): ``g_i -> g_{i+1}``, ``g_{i+1} -> g_{i+1}^-1 g_i g_{i+1}``."""
    if not 1 <= i < len(branch):
        raise MoveError(f"sigma_{i} needs 1 <= i <= r-1 (r = {len(branch)})")
    out = list(branch)
    a, b = branch[i - 1], branch[i]
    out[i - 1] = b
    out[i] = G.rows[G.rows[G.inv_list[b]][a]][b]
    return tuple(out)


def apply_genus1_move(
    G: GroupTable, move: str, branch: Sequence[int], handles: Sequence[int]
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """One of ``t_alpha``, ``t_beta`` (s = 1, 2) and ``t_gamma``, ``rho`` (s = 2)."""
    s = len(branch)
    if len(handles) != 2:
        raise MoveError("genus-1 moves need two handle elements")
    rows, inv = G.rows, G.inv_list

    def mul(*xs: int) -> int:
        x = G.identity
        for y in xs:
            x = rows[x][y]
        return x

    h1, h2 = handles
    if move in ("t_alpha", "t_beta"):
        if s not in (1, 2):
            raise MoveError(f"{move} applies to vectors with one or two branch points")
        if move == "t_alpha":
            return tuple(branch), (h1, mul(h2, h1))
        return tuple(branch), (mul(h1, inv[h2]), h2)
    if move in ("t_gamma", "rho"):
        if s != 2:
            raise MoveError(f"{move} applies to vectors with two branch points")
        l1, l2 = branch
        if move == "t_gamma":
            new_l2 = mul(h1, inv[h2], inv[h1], l2, h1, h2, inv[h1])
            return (l1, new_l2), (mul(inv[h2], l1, h1), h2)
        new_l1 = mul(inv[h2], inv[h1], l2, h1, h2)
        new_l2 = mul(inv[h1], inv[h2], l1, h2, h1)
        return (new_l1, new_l2), (inv[h1], inv[h2])
    raise MoveError(f"unknown move {move!r}")


def genus1_moves_for(s: int) -> tuple[str, ...]:
    if s == 2:
        return GENUS1_MOVES
    if s == 1:
        return ("t_alpha", "t_beta")
    raise MoveError("genus-1 moves are defined for one or two branch points")


def dimension(kind: str, r: int, s: int) -> int:
    """``r + s - 3`` for unmixed families, ``s`` for mixed ones."""
    if kind == "unmixed":
        return r + s - 3
    if kind == "mixed":
        return s
    raise ValueError(f"unknown kind {kind!r}")


# -- orbit machinery -------------------------------------------------------------


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[max(a, b)] = min(a, b)

    def count(self) -> int:
        return sum(1 for i in range(len(self.parent)) if self.find(i) == i)


def hurwitz_orbits(
    seeds: Iterable[tuple[int, ...]],
    moves: Sequence[Callable[[tuple[int, ...]], tuple[int, ...]]],
    state_cap: int = DEFAULT_STATE_CAP,
) -> dict[tuple[int, ...], int]:
    """Label every state reachable from ``seeds`` with its orbit number.

    Every move is a bijection of a finite set, so forward closure already
    yields whole orbits.  Orbits are numbered in order of their first seed.
    """
    label: dict[tuple[int, ...], int] = {}
    n_orbits = 0
    for seed in seeds:
        if seed in label:
            continue
        label[seed] = n_orbits
        stack = [seed]
        while stack:
            x = stack.pop()
            for mv in moves:
                y = mv(x)
                if y not in label:
                    label[y] = n_orbits
                    if len(label) > state_cap:
                        raise OrbitCapExceeded(f"orbit search visited more than {state_cap} states")
                    stack.append(y)
        n_orbits += 1
    return label


def _sigma_moves(G: GroupTable, r: int):
    return [lambda v, i=i: apply_sigma(G, i, v) for i in range(1, r)]


def _genus1_tuple_moves(G: GroupTable, s: int):
    def make(name):
        def mv(v):
            b, h = apply_genus1_move(G, name, v[:s], v[s:])
            return b + h

        return mv

    return [make(name) for name in genus1_moves_for(s)]


@dataclass
class OrbitCount:
    components: int
    dimension: int
    family_size: int
    orbit_states: int
    automorphisms: int
    rejected_automorphisms: int = 0
    notes: list[str] = field(default_factory=list)


def _apply_aut(phi: Automorphism, v: tuple[int, ...]) -> tuple[int, ...]:
    img = phi.image
    return tuple(img[x] for x in v)


def count_components_unmixed(
    G: GroupTable,
    m: BranchSignature,
    n: BranchSignature,
    auts: Optional[Sequence[Automorphism]] = None,
    state_cap: int = DEFAULT_STATE_CAP,
) -> OrbitCount:
    """Number of classes of admissible pairs ``(V, W)`` under Hurwitz moves and ``Aut(G)``.

    Condition (U) only depends on the conjugacy classes of the cyclic
    subgroups generated by the branch elements, which the Hurwitz moves
    preserve, so it is a property of a pair of Hurwitz orbits.  The classes
    are the ``Aut(G)``-orbits on admissible pairs of orbits.
    """
    if m.base_genus != 0 or n.base_genus != 1:
        raise ValueError("unmixed counting needs a genus-0 and a genus-1 signature")
    vs = [v.branch for v in find_generating_vectors(G, m, ALL)]
    ws = [w.branch + w.handles for w in find_generating_vectors(G, n, ALL)]
    if not vs or not ws:
        raise EmptyFamily(f"no generating vectors of types {m} and {n}")
    s = n.r
    v_label = hurwitz_orbits(vs, _sigma_moves(G, m.r), state_cap)
    w_label = hurwitz_orbits(ws, _genus1_tuple_moves(G, s), state_cap)
    v_rep = _orbit_reps(v_label)
    w_rep = _orbit_reps(w_label)
    v_mask = [branch_mask(G, v) for v in v_rep]
    w_mask = [branch_mask(G, w[:s]) for w in w_rep]
    pairs = [(a, b) for a in range(len(v_rep)) for b in range(len(w_rep)) if v_mask[a] & w_mask[b] == 0]
    if not pairs:
        raise EmptyFamily(f"no pair of types {m}, {n} satisfies the stabilizer condition")
    if auts is None:
        auts = automorphism_group(G)
    index = {p: i for i, p in enumerate(pairs)}
    uf = _UnionFind(len(pairs))
    v_img = [[v_label[_apply_aut(phi, v)] for v in v_rep] for phi in auts]
    w_img = [[w_label[_apply_aut(phi, w)] for w in w_rep] for phi in auts]
    for k in range(len(auts)):
        for i, (a, b) in enumerate(pairs):
            uf.union(i, index[(v_img[k][a], w_img[k][b])])
    family = sum(
        _orbit_sizes(v_label)[a] * _orbit_sizes(w_label)[b] for a, b in pairs
    )
    return OrbitCount(
        components=uf.count(),
        dimension=dimension("unmixed", m.r, n.r),
        family_size=family,
        orbit_states=len(v_label) + len(w_label),
        automorphisms=len(auts),
    )


def _orbit_reps(label: dict[tuple[int, ...], int]) -> list[tuple[int, ...]]:
    reps: dict[int, tuple[int, ...]] = {}
    for v, k in label.items():
        if k not in reps:
            reps[k] = v
    return [reps[k] for k in range(len(reps))]


def _orbit_sizes(label: dict[tuple[int, ...], int]) -> list[int]:
    sizes = [0] * (max(label.values()) + 1 if label else 0)
    for k in label.values():
        sizes[k] += 1
    return sizes


def count_components_mixed(
    G: GroupTable,
    subgroups: Sequence[ElementSet],
    n: BranchSignature,
    auts: Optional[Sequence[Automorphism]] = None,
    state_cap: int = DEFAULT_STATE_CAP,
) -> OrbitCount:
    """Classes of vectors passing (M1), (M2) under Hurwitz moves and ``Aut(G)``.

    The family is the union over the given index-2 subgroups of their
    admissible vectors; a vector determines its subgroup as the subgroup it
    generates.  An automorphism image is kept only if it lands back in the
    family, and rejections are reported.
    """
    if n.base_genus != 1:
        raise ValueError("mixed counting needs a genus-1 signature")
    s = n.r
    family: set[tuple[int, ...]] = set()
    for H in subgroups:
        for V in find_mixed_vector(G, H, n, mode=ALL):
            family.add(V.branch + V.handles)
    if not family:
        raise EmptyFamily(f"no admissible vectors of type {n}")
    seeds = sorted(family)
    label = hurwitz_orbits(seeds, _genus1_tuple_moves(G, s), state_cap)
    notes = []
    if set(label) != family:
        notes.append("Hurwitz moves left the admissible family")
    if auts is None:
        auts = automorphism_group(G)
    reps = _orbit_reps(label)
    uf = _UnionFind(len(reps))
    rejected = 0
    for phi in auts:
        for a, v in enumerate(reps):
            w = _apply_aut(phi, v)
            b = label.get(w)
            if b is None:
                rejected += 1
                continue
            uf.union(a, b)
    if rejected:
        notes.append(f"{rejected} automorphism images fell outside the family and were ignored")
    return OrbitCount(
        components=uf.count(),
        dimension=dimension("mixed", 0, s),
        family_size=len(family),
        orbit_states=len(label),
        automorphisms=len(auts),
        rejected_automorphisms=rejected,
        notes=notes,
    )
