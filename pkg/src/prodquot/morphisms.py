"""Isomorphisms and automorphisms by backtracking over generator images."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .groups import GroupTable


@dataclass(frozen=True)
class Automorphism:
    """A bijection of element indices preserving multiplication."""

    parent: GroupTable
    image: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.image[x]

    def compose(self, other: "Automorphism") -> "Automorphism":
        """``self o other`` (apply ``other`` first)."""
        return Automorphism(self.parent, tuple(self.image[y] for y in other.image))

    def inverse(self) -> "Automorphism":
        inv = [0] * len(self.image)
        for x, y in enumerate(self.image):
            inv[y] = x
        return Automorphism(self.parent, tuple(inv))

    def is_inner(self) -> bool:
        G = self.parent
        return any(all(G.conjugate(g, x) == self.image[x] for x in range(G.order)) for g in range(G.order))

    def __hash__(self) -> int:
        return hash(self.image)

    def __eq__(self, other) -> bool:
        return isinstance(other, Automorphism) and self.image == other.image


def inner_automorphism(G: GroupTable, x: int) -> Automorphism:
    """``Int_x(g) = x g x^-1``."""
    return Automorphism(G, tuple(G.conj_table[x].tolist()))


def is_homomorphism(G: GroupTable, H: GroupTable, image) -> bool:
    rows_g, rows_h = G.rows, H.rows
    return all(image[rows_g[a][b]] == rows_h[image[a]][image[b]] for a in range(G.order) for b in range(G.order))


def _extend(G: GroupTable, H: GroupTable, gens: list[int], imgs: list[int]) -> Optional[list[int]]:
    """Extend ``gens -> imgs`` to an injective homomorphism on ``<gens>``, or None.

    Defines phi(x g) = phi(x) phi(g) along a breadth-first traversal; a map that
    is consistent for every (x, generator) pair is a homomorphism.
    """
    rows_g, rows_h = G.rows, H.rows
    inv_g, inv_h = G.element_invariants, H.element_invariants
    phi = [-1] * G.order
    used = bytearray(H.order)
    phi[G.identity] = H.identity
    used[H.identity] = 1
    elems = [G.identity]
    pairs = list(zip(gens, imgs))
    for x in elems:
        px = phi[x]
        rg, rh = rows_g[x], rows_h[px]
        for g, h in pairs:
            y = rg[g]
            py = rh[h]
            cur = phi[y]
            if cur < 0:
                if used[py] or inv_g[y] != inv_h[py]:
                    return None
                phi[y] = py
                used[py] = 1
                elems.append(y)
            elif cur != py:
                return None
    return phi


def _backtrack(G: GroupTable, H: GroupTable, restrict_first: bool) -> Iterator[list[int]]:
    if G.order != H.order:
        return
    if G.order == 1:
        yield [H.identity]
        return
    gens = list(G.small_generating_set)
    inv_g, inv_h = G.element_invariants, H.element_invariants
    by_label: dict[tuple, list[int]] = {}
    for h in range(H.order):
        by_label.setdefault(inv_h[h], []).append(h)
    cands = [by_label.get(inv_g[g], []) for g in gens]
    if restrict_first:
        reps = set(H.class_representatives(cands[0]))
        cands[0] = [h for h in cands[0] if h in reps]

    imgs: list[int] = []

    def rec(k: int) -> Iterator[list[int]]:
        for h in cands[k]:
            imgs.append(h)
            phi = _extend(G, H, gens[: k + 1], imgs)
            if phi is not None:
                if k + 1 == len(gens):
                    # gens generate G, so phi is total and injective
                    yield phi
                else:
                    yield from rec(k + 1)
            imgs.pop()

    yield from rec(0)


def isomorphism(G: GroupTable, H: GroupTable) -> Optional[list[int]]:
    """A multiplication-preserving bijection ``G -> H`` as an image list, or None."""
    if G.order != H.order or G.fingerprint != H.fingerprint:
        return None
    for phi in _backtrack(G, H, restrict_first=True):
        return phi
    return None


def are_isomorphic(G: GroupTable, H: GroupTable) -> bool:
    return isomorphism(G, H) is not None


def automorphism_group(G: GroupTable) -> list[Automorphism]:
    """Every automorphism of ``G`` (identity first)."""
    auts = [Automorphism(G, tuple(phi)) for phi in _backtrack(G, G, restrict_first=False)]
    auts.sort(key=lambda a: (a.image != tuple(range(G.order)), a.image))
    return auts
