"""Building group tables: from permutations, from element-level products, named families."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Optional, Sequence

import numpy as np

from .errors import GroupError, InvalidParameters
from .groups import GroupTable

DEFAULT_ORDER_CAP = 192


@dataclass(frozen=True)
class PermGenSet:
    """Permutation generators as 0-based image tuples on ``range(degree)``."""

    degree: int
    generators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.degree < 1:
            raise GroupError("degree must be positive")
        for g in self.generators:
            if len(g) != self.degree or sorted(g) != list(range(self.degree)):
                raise GroupError(f"not a permutation of degree {self.degree}: {g}")

    @classmethod
    def from_one_based(cls, degree: int, gens: Sequence[Sequence[int]]) -> "PermGenSet":
        return cls(degree, tuple(tuple(i - 1 for i in g) for g in gens))

    def one_based(self) -> list[list[int]]:
        return [[i + 1 for i in g] for g in self.generators]


def group_from_permutations(
    perms: PermGenSet, cap: int = DEFAULT_ORDER_CAP, name: Optional[str] = None
) -> GroupTable:
    """Enumerate the group generated by ``perms`` and tabulate its multiplication.

    Products act on the right: ``(x*y)[i] = y[x[i]]``.  Element 0 is the
    identity and the elements appear in breadth-first order from the
    generators, which are recorded in ``generator_hint``.
    """
    d = perms.degree
    ident = tuple(range(d))
    elements = [ident]
    index = {ident: 0}
    gens = list(perms.generators)
    for x in elements:
        for g in gens:
            y = tuple(g[v] for v in x)
            if y not in index:
                index[y] = len(elements)
                elements.append(y)
                if len(elements) > cap:
                    raise GroupError(f"generated group exceeds the order cap {cap}")
    n = len(elements)
    E = np.array(elements, dtype=np.int64).reshape(n, d)
    # prod[i, j, :] = E[j][E[i]]
    prod = E[np.arange(n)[None, :, None], E[:, None, :]]
    base = _base_points(E)
    weights = d ** np.arange(len(base), dtype=np.int64)
    if len(base) * np.log2(max(d, 2)) < 62:
        keys = E[:, base] @ weights
        order = np.argsort(keys)
        sorted_keys = keys[order]
        pkeys = prod[:, :, base] @ weights
        mul = order[np.searchsorted(sorted_keys, pkeys)]
    else:
        mul = np.array([[index[tuple(prod[i, j])] for j in range(n)] for i in range(n)])
    hint = [index[g] for g in gens]
    return GroupTable(mul, identity=0, generator_hint=hint, name=name)


def _base_points(E: np.ndarray) -> list[int]:
    """Points whose images separate all the enumerated permutations."""
    n, d = E.shape
    if n == 1:
        return [0]
    base: list[int] = []
    labels = np.zeros(n, dtype=np.int64)
    distinct = 1
    for pt in range(d):
        trial = labels * d + E[:, pt]
        _, new_labels = np.unique(trial, return_inverse=True)
        count = new_labels.max() + 1
        if count > distinct:
            base.append(pt)
            labels, distinct = new_labels.astype(np.int64), count
            if distinct == n:
                break
    return base


def group_from_function(
    elements: Sequence[Hashable],
    mul_fn: Callable[[Hashable, Hashable], Hashable],
    identity: Hashable,
    generators: Optional[Sequence[Hashable]] = None,
    name: Optional[str] = None,
) -> GroupTable:
    """Tabulate a group given by an explicit element list and product function."""
    elements = [identity] + [e for e in elements if e != identity]
    pos = {e: i for i, e in enumerate(elements)}
    if len(pos) != len(elements):
        raise GroupError("duplicate elements")
    try:
        mul = [[pos[mul_fn(a, b)] for b in elements] for a in elements]
    except KeyError as exc:
        raise GroupError(f"product left the element set: {exc}") from None
    hint = [pos[g] for g in generators] if generators is not None else None
    return GroupTable(mul, identity=0, generator_hint=hint, name=name)


def cyclic(n: int) -> GroupTable:
    if n < 1:
        raise InvalidParameters("cyclic group order must be positive")
    return group_from_function(range(n), lambda a, b: (a + b) % n, 0, [1 % n], name=f"C{n}")


def metacyclic(p: int, q: int, r: int) -> GroupTable:
    """``D_{p,q,r} = <x, y | x^p = y^q = 1, x y x^-1 = y^r>`` of order ``p*q``.

    Elements are ``y^j x^i`` stored as ``(j, i)``.
    """
    if p < 1 or q < 1 or pow(r, p, q) != 1 % q:
        raise InvalidParameters(f"r^p must be 1 mod q (p={p}, q={q}, r={r})")
    r %= q
    rpow = [pow(r, i, q) for i in range(p)]

    def mul(a, b):
        (j, i), (l, k) = a, b
        return ((j + l * rpow[i]) % q, (i + k) % p)

    elems = [(j, i) for i in range(p) for j in range(q)]
    gens = [(0, 1 % p), (1 % q, 0)]
    return group_from_function(elems, mul, (0, 0), gens, name=f"D_{p},{q},{r}")


def dihedral(n: int) -> GroupTable:
    """Dihedral group of order ``2n``."""
    if n < 1:
        raise InvalidParameters("dihedral parameter must be positive")
    g = metacyclic(2, n, -1 % n if n > 1 else 0)
    g.name = f"D{n}"
    return g


def quaternion8() -> GroupTable:
    # x^4 = 1, y^2 = x^2, y x y^-1 = x^-1; elements x^i y^j as (i, j)
    def mul(a, b):
        (i, j), (k, l) = a, b
        if j:
            k = -k
        i2 = i + k
        if j and l:
            i2 += 2
        return (i2 % 4, (j + l) % 2)

    elems = [(i, j) for j in range(2) for i in range(4)]
    return group_from_function(elems, mul, (0, 0), [(1, 0), (0, 1)], name="Q8")


def symmetric(n: int) -> GroupTable:
    if not 1 <= n <= 5:
        raise InvalidParameters("symmetric(n) supports 1 <= n <= 5")
    if n <= 2:
        return group_from_permutations(
            PermGenSet(n, (tuple(range(n))[::-1],)) if n == 2 else PermGenSet(1, ()), name=f"S{n}"
        )
    cycle = tuple(list(range(1, n)) + [0])
    swap = tuple([1, 0] + list(range(2, n)))
    return group_from_permutations(PermGenSet(n, (swap, cycle)), name=f"S{n}")


def alternating(n: int) -> GroupTable:
    if not 1 <= n <= 5:
        raise InvalidParameters("alternating(n) supports 1 <= n <= 5")
    if n <= 2:
        return group_from_permutations(PermGenSet(max(n, 1), ()), name=f"A{n}")
    gens = []
    for k in range(n - 2):
        # 3-cycles (0 1 k+2)
        img = list(range(n))
        img[0], img[1], img[k + 2] = 1, k + 2, 0
        gens.append(tuple(img))
    return group_from_permutations(PermGenSet(n, tuple(gens)), name=f"A{n}")


def direct_product(G: GroupTable, H: GroupTable) -> GroupTable:
    rg, rh = G.rows, H.rows

    def mul(a, b):
        return (rg[a[0]][b[0]], rh[a[1]][b[1]])

    elems = list(itertools.product(range(G.order), range(H.order)))
    gens = None
    if G.generator_hint is not None and H.generator_hint is not None:
        gens = [(g, H.identity) for g in G.generator_hint] + [(G.identity, h) for h in H.generator_hint]
    name = f"{G.name} x {H.name}" if G.name and H.name else None
    return group_from_function(elems, mul, (G.identity, H.identity), gens, name=name)


def semidirect_product(A: GroupTable, B: GroupTable, action: Sequence) -> GroupTable:
    """``A`` acting on the normal factor ``B``; ``action[a]`` is an automorphism of ``B``.

    Elements ``(b, a)`` multiply as ``(b1, a1)(b2, a2) = (b1 * action[a1](b2), a1 a2)``.
    Each entry of ``action`` may be an :class:`~prodquot.morphisms.Automorphism` or
    a plain image sequence.
    """
    imgs = [tuple(getattr(phi, "image", phi)) for phi in action]
    if len(imgs) != A.order:
        raise InvalidParameters("action must list one automorphism per element of A")
    rb, ra = B.rows, A.rows
    for phi in imgs:
        if sorted(phi) != list(range(B.order)) or any(
            phi[rb[x][y]] != rb[phi[x]][phi[y]] for x in range(B.order) for y in range(B.order)
        ):
            raise InvalidParameters("action entries must be automorphisms of B")
    for a1 in range(A.order):
        for a2 in range(A.order):
            composed = tuple(imgs[a1][imgs[a2][x]] for x in range(B.order))
            if composed != imgs[ra[a1][a2]]:
                raise InvalidParameters("action is not a homomorphism A -> Aut(B)")

    def mul(u, v):
        (b1, a1), (b2, a2) = u, v
        return (rb[b1][imgs[a1][b2]], ra[a1][a2])

    elems = list(itertools.product(range(B.order), range(A.order)))
    return group_from_function(elems, mul, (B.identity, A.identity))


def element_words(G: GroupTable, gens: Optional[Sequence[int]] = None) -> list[list[int]]:
    """A shortest positive word (list of generator positions) for every element."""
    if gens is None:
        gens = G.generator_hint if G.generator_hint is not None else G.small_generating_set
    words: list[Optional[list[int]]] = [None] * G.order
    words[G.identity] = []
    queue = [G.identity]
    for x in queue:
        for k, g in enumerate(gens):
            y = G.rows[x][g]
            if words[y] is None:
                words[y] = words[x] + [k]
                queue.append(y)
    if any(w is None for w in words):
        raise GroupError("generators do not generate the group")
    return words  # type: ignore[return-value]


def format_word(word: Sequence[int], names: Optional[Sequence[str]] = None) -> str:
    """Compress a positive generator word into ``a^2*b`` form; ``1`` for the empty word."""
    if not word:
        return "1"
    parts = []
    for k, run in itertools.groupby(word):
        e = len(list(run))
        label = names[k] if names is not None else f"g{k + 1}"
        parts.append(label if e == 1 else f"{label}^{e}")
    return "*".join(parts)
