"""Todd-Coxeter enumeration of the cosets of the trivial subgroup.

HLT strategy: cosets are scanned in order, each relator is traced from every
live coset and gaps are filled by new definitions.  Deductions are processed
eagerly against the cyclic conjugates of the relators, and coincidences are
resolved with a union-find forwarding array.
"""

from __future__ import annotations

from typing import Optional

from .constructors import PermGenSet, group_from_permutations
from .errors import CapExceeded
from .groups import GroupTable
from .presentation import Presentation

DEFAULT_COSET_CAP = 50_000


class CosetTable:
    def __init__(self, presentation: Presentation, coset_cap: int = DEFAULT_COSET_CAP):
        if coset_cap < 1:
            raise ValueError("coset_cap must be >= 1")
        self.ngens = len(presentation.generators)
        self.ncols = 2 * self.ngens
        self.cap = coset_cap
        # column of letter (g, s): 2g for s=+1, 2g+1 for s=-1; inverse column is col ^ 1
        self.relators = [[2 * g + (s < 0) for g, s in rel] for rel in presentation.relators]
        self.conjugates: list[list[list[int]]] = [[] for _ in range(self.ncols)]
        seen = set()
        for rel in self.relators:
            for w in (rel, [c ^ 1 for c in reversed(rel)]):
                for i in range(len(w)):
                    rot = tuple(w[i:] + w[:i])
                    if rot not in seen:
                        seen.add(rot)
                        self.conjugates[rot[0]].append(list(rot))
        self.table: list[list[int]] = [[-1] * self.ncols]
        self.forward: list[int] = [0]
        self.live = 1
        self.deductions: list[tuple[int, int]] = []

    def _rep(self, c: int) -> int:
        fwd = self.forward
        root = c
        while fwd[root] != root:
            root = fwd[root]
        while fwd[c] != root:
            fwd[c], c = root, fwd[c]
        return root

    def _define(self, c: int, x: int) -> None:
        if self.live >= self.cap:
            raise CapExceeded(f"coset enumeration exceeded {self.cap} live cosets")
        d = len(self.table)
        self.table.append([-1] * self.ncols)
        self.forward.append(d)
        self.live += 1
        self.table[c][x] = d
        self.table[d][x ^ 1] = c
        self.deductions.append((c, x))

    def _scan_and_fill(self, c: int, w: list[int]) -> None:
        table = self.table
        f = b = c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] >= 0:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self._coincidence(f, b)
                return
            while j >= i and table[b][w[j] ^ 1] >= 0:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self._coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                self.deductions.append((f, w[i]))
                return
            self._define(f, w[i])

    def _scan(self, c: int, w: list[int]) -> None:
        """Trace ``w`` from ``c`` without defining; record deductions or coincidences."""
        table = self.table
        f = b = c
        i, j = 0, len(w) - 1
        while i <= j and table[f][w[i]] >= 0:
            f = table[f][w[i]]
            i += 1
        if i > j:
            if f != b:
                self._coincidence(f, b)
            return
        while j >= i and table[b][w[j] ^ 1] >= 0:
            b = table[b][w[j] ^ 1]
            j -= 1
        if j < i:
            self._coincidence(f, b)
        elif i == j:
            table[f][w[i]] = b
            table[b][w[i] ^ 1] = f
            self.deductions.append((f, w[i]))

    def _process_deductions(self) -> None:
        while self.deductions:
            c, x = self.deductions.pop()
            if self._rep(c) != c:
                continue
            for w in self.conjugates[x]:
                if self._rep(c) != c:
                    break
                self._scan(c, w)
            d = self.table[c][x]
            if d < 0 or self._rep(d) != d:
                continue
            for w in self.conjugates[x ^ 1]:
                if self._rep(d) != d:
                    break
                self._scan(d, w)

    def _merge(self, k: int, l: int, queue: list[int]) -> None:
        k, l = self._rep(k), self._rep(l)
        if k == l:
            return
        lo, hi = min(k, l), max(k, l)
        self.forward[hi] = lo
        self.live -= 1
        queue.append(hi)

    def _coincidence(self, a: int, b: int) -> None:
        table = self.table
        queue: list[int] = []
        self._merge(a, b, queue)
        qi = 0
        while qi < len(queue):
            e = queue[qi]
            qi += 1
            for x in range(self.ncols):
                f = table[e][x]
                if f < 0:
                    continue
                if table[f][x ^ 1] == e:
                    table[f][x ^ 1] = -1
                e1, f1 = self._rep(e), self._rep(f)
                if table[e1][x] >= 0:
                    self._merge(f1, table[e1][x], queue)
                elif table[f1][x ^ 1] >= 0:
                    self._merge(e1, table[f1][x ^ 1], queue)
                else:
                    table[e1][x] = f1
                    table[f1][x ^ 1] = e1
                    self.deductions.append((e1, x))

    def run(self) -> None:
        c = 0
        while c < len(self.table):
            if self._rep(c) == c:
                for w in self.relators:
                    if self._rep(c) != c:
                        break
                    self._scan_and_fill(c, w)
                    self._process_deductions()
                if self._rep(c) == c:
                    for x in range(self.ncols):
                        if self.table[c][x] < 0:
                            self._define(c, x)
                            self._process_deductions()
            c += 1

    def compact(self) -> list[list[int]]:
        """Live cosets renumbered ``0..N-1`` in order of first appearance."""
        live = [c for c in range(len(self.table)) if self._rep(c) == c]
        pos = {c: i for i, c in enumerate(live)}
        return [[pos[self._rep(self.table[c][x])] for x in range(self.ncols)] for c in live]


def coset_enumeration(presentation: Presentation, coset_cap: int = DEFAULT_COSET_CAP) -> PermGenSet:
    """Regular permutation action of the generators on the cosets of the trivial subgroup."""
    ct = CosetTable(presentation, coset_cap)
    ct.run()
    rows = ct.compact()
    n = len(rows)
    gens = tuple(tuple(rows[c][2 * g] for c in range(n)) for g in range(ct.ngens))
    return PermGenSet(n, gens)


def group_from_presentation(
    presentation: Presentation, coset_cap: int = DEFAULT_COSET_CAP, order_cap: Optional[int] = None
) -> GroupTable:
    """Group table of a finite presentation; ``generator_hint[k]`` is generator ``k``."""
    perms = coset_enumeration(presentation, coset_cap)
    cap = order_cap if order_cap is not None else max(perms.degree, 1)
    return group_from_permutations(perms, cap=cap)
