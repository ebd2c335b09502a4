"""Finite groups as dense Cayley tables.

Elements are the integers ``0..n-1``; every structural query in the package
addresses elements by index.  Subgroups and other element sets are returned as
``frozenset`` objects of indices.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import GroupError

ElementSet = frozenset


class GroupTable:
    """A finite group given by its multiplication table.

    ``mul[a, b]`` is the index of the product ``a*b``.  The table is validated
    on construction (Latin square, two-sided identity); the full associativity
    check is available through :meth:`verify_axioms`.
    """

    def __init__(
        self,
        mul,
        identity: Optional[int] = None,
        generator_hint: Optional[Sequence[int]] = None,
        name: Optional[str] = None,
    ):
        mul = np.array(mul, dtype=np.int32)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
            raise GroupError("multiplication table must be a non-empty square array")
        n = mul.shape[0]
        if mul.min() < 0 or mul.max() >= n:
            raise GroupError("table entries out of range")
        full = np.arange(n)
        if not (np.all(np.sort(mul, axis=1) == full) and np.all(np.sort(mul, axis=0) == full[:, None])):
            raise GroupError("multiplication table is not a Latin square")
        if identity is None:
            cand = np.nonzero(np.all(mul == full, axis=1))[0]
            if len(cand) != 1:
                raise GroupError("no two-sided identity")
            identity = int(cand[0])
        if not (np.all(mul[identity] == full) and np.all(mul[:, identity] == full)):
            raise GroupError(f"element {identity} is not a two-sided identity")
        mul.setflags(write=False)
        self.mul = mul
        self.order = n
        self.identity = int(identity)
        inv = np.argmax(mul == self.identity, axis=1).astype(np.int32)
        inv.setflags(write=False)
        self.inv = inv
        self.generator_hint = list(generator_hint) if generator_hint is not None else None
        self.name = name
        # plain nested lists: scalar lookups in hot loops are much cheaper than numpy
        self.rows: list[list[int]] = mul.tolist()
        self.inv_list: list[int] = inv.tolist()

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<GroupTable{label} order={self.order}>"

    def __len__(self) -> int:
        return self.order

    # -- arithmetic -------------------------------------------------------

    def m(self, a: int, b: int) -> int:
        return self.rows[a][b]

    def product(self, elems: Iterable[int]) -> int:
        rows = self.rows
        x = self.identity
        for g in elems:
            x = rows[x][g]
        return x

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inv_list[x], -k
        k %= self.elem_order[x]
        rows = self.rows
        result = self.identity
        while k:
            if k & 1:
                result = rows[result][x]
            x = rows[x][x]
            k >>= 1
        return result

    def commutator(self, x: int, y: int) -> int:
        """``[x, y] = x y x^-1 y^-1``."""
        rows, inv = self.rows, self.inv_list
        return rows[rows[rows[x][y]][inv[x]]][inv[y]]

    def conjugate(self, g: int, x: int) -> int:
        """``g x g^-1``."""
        return self.rows[self.rows[g][x]][self.inv_list[g]]

    # -- element orders ---------------------------------------------------

    @cached_property
    def elem_order(self) -> list[int]:
        n = self.order
        order = np.zeros(n, dtype=np.int64)
        cur = np.arange(n)
        col = np.arange(n)
        for k in range(1, n + 1):
            hit = (cur == self.identity) & (order == 0)
            order[hit] = k
            if order.all():
                break
            cur = self.mul[cur, col]
        return order.tolist()

    def count_elements_of_order(self, k: int) -> int:
        if k < 1:
            raise ValueError("element order must be positive")
        return sum(1 for o in self.elem_order if o == k)

    def elements_of_order(self, k: int) -> list[int]:
        return [x for x, o in enumerate(self.elem_order) if o == k]

    @cached_property
    def order_spectrum(self) -> dict[int, int]:
        return dict(sorted(Counter(self.elem_order).items()))

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*self.elem_order)

    def cyclic_subgroup(self, x: int) -> list[int]:
        """Powers ``x^0, x^1, ..., x^(k-1)`` in order."""
        out = [self.identity]
        y = x
        while y != self.identity:
            out.append(y)
            y = self.rows[y][x]
        return out

    # -- subgroups --------------------------------------------------------

    def closure(self, gens: Iterable[int]) -> ElementSet:
        """Smallest subgroup containing ``gens``."""
        return frozenset(self._closure_list(list(gens)))

    def _closure_list(self, gens: list[int]) -> list[int]:
        rows = self.rows
        seen = bytearray(self.order)
        seen[self.identity] = 1
        elems = [self.identity]
        gens = [g for g in set(gens) if g != self.identity]
        for x in elems:
            r = rows[x]
            for g in gens:
                y = r[g]
                if not seen[y]:
                    seen[y] = 1
                    elems.append(y)
        return elems

    def closure_size(self, gens: Sequence[int]) -> int:
        return len(self._closure_list(list(gens)))

    def generates(self, gens: Sequence[int], target: Optional[int] = None) -> bool:
        """True iff ``gens`` generate a subgroup of order ``target`` (default: the group)."""
        return self.closure_size(gens) == (self.order if target is None else target)

    def is_subgroup(self, members: Iterable[int]) -> bool:
        s = set(members)
        if self.identity not in s:
            return False
        rows = self.rows
        return all(rows[a][b] in s for a in s for b in s)

    @cached_property
    def small_generating_set(self) -> list[int]:
        """Greedy generating set: repeatedly add the element whose closure grows fastest."""
        if self.order == 1:
            return []
        gens: list[int] = []
        current = frozenset([self.identity])
        while len(current) < self.order:
            best, best_size = None, -1
            # prefer elements of large order; ties broken by index for determinism
            for x in sorted(range(self.order), key=lambda t: (-self.elem_order[t], t)):
                if x in current:
                    continue
                size = self.closure_size(gens + [x])
                if size > best_size:
                    best, best_size = x, size
                    if size == self.order:
                        break
            gens.append(best)
            current = self.closure(gens)
        return gens

    # -- conjugacy ----------------------------------------------------------

    @cached_property
    def conj_table(self) -> np.ndarray:
        """``conj_table[g, x] = g x g^-1``."""
        t = self.mul[self.mul, self.inv[:, None]]
        t.setflags(write=False)
        return t

    @cached_property
    def _classes(self) -> tuple[list[ElementSet], list[int]]:
        class_of = [-1] * self.order
        classes: list[ElementSet] = []
        ct = self.conj_table
        for x in range(self.order):
            if class_of[x] >= 0:
                continue
            cls = frozenset(ct[:, x].tolist())
            for y in cls:
                class_of[y] = len(classes)
            classes.append(cls)
        return classes, class_of

    @property
    def conjugacy_classes(self) -> list[ElementSet]:
        return self._classes[0]

    @property
    def class_of(self) -> list[int]:
        return self._classes[1]

    def conjugacy_class(self, x: int) -> ElementSet:
        return self.conjugacy_classes[self.class_of[x]]

    def class_representatives(self, elems: Optional[Iterable[int]] = None) -> list[int]:
        """Smallest index of each conjugacy class meeting ``elems``."""
        if elems is None:
            elems = range(self.order)
        seen = set()
        reps = []
        for x in sorted(elems):
            c = self.class_of[x]
            if c not in seen:
                seen.add(c)
                reps.append(x)
        return reps

    def centralizer(self, x: int) -> ElementSet:
        col = self.mul[:, x]
        row = self.mul[x, :]
        return frozenset(np.nonzero(col == row)[0].tolist())

    @cached_property
    def center(self) -> ElementSet:
        return frozenset(x for x in range(self.order) if len(self.conjugacy_class(x)) == 1)

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    @cached_property
    def commutator_table(self) -> np.ndarray:
        """``commutator_table[x, y] = [x, y]``."""
        xy = self.mul
        t = self.mul[self.mul[xy, self.inv[:, None]], self.inv[None, :]]
        t.setflags(write=False)
        return t

    @cached_property
    def derived_subgroup(self) -> ElementSet:
        return self.closure(np.unique(self.commutator_table).tolist())

    def subgroup_commutator(self, a: Iterable[int], b: Iterable[int]) -> ElementSet:
        """``[A, B]``: subgroup generated by commutators of members of ``a`` and ``b``."""
        a, b = list(a), list(b)
        comms = np.unique(self.commutator_table[np.ix_(a, b)]).tolist()
        return self.closure(comms)

    @cached_property
    def derived_series(self) -> list[ElementSet]:
        series = [frozenset(range(self.order))]
        while True:
            nxt = self.subgroup_commutator(series[-1], series[-1])
            if len(nxt) == len(series[-1]):
                return series
            series.append(nxt)

    @cached_property
    def lower_central_series(self) -> list[ElementSet]:
        whole = range(self.order)
        series = [frozenset(whole)]
        while True:
            nxt = self.subgroup_commutator(whole, series[-1])
            if len(nxt) == len(series[-1]):
                return series
            series.append(nxt)

    def normal_closure(self, elems: Iterable[int]) -> ElementSet:
        gens = set()
        ct = self.conj_table
        for x in elems:
            gens.update(ct[:, x].tolist())
        return self.closure(gens)

    def is_normal(self, members: Iterable[int]) -> bool:
        s = frozenset(members)
        ct = self.conj_table
        idx = np.fromiter(s, dtype=np.int64)
        return set(np.unique(ct[:, idx]).tolist()) <= s

    def normal_subgroups(self, order: Optional[int] = None) -> list[ElementSet]:
        """All normal subgroups, optionally only those of the given order.

        Every normal subgroup is a join of normal closures of single classes, so
        the lattice is grown by joining those closures until it stops changing.
        Joins never shrink, so with ``order`` given anything whose size does not
        divide it is pruned.
        """
        atoms = []
        seen_atoms = set()
        for cls in self.conjugacy_classes:
            x = min(cls)
            if x == self.identity:
                continue
            nc = self.normal_closure([x])
            if nc not in seen_atoms:
                seen_atoms.add(nc)
                atoms.append(nc)
        trivial = frozenset([self.identity])
        found = {trivial}
        frontier = [trivial]
        while frontier:
            nxt = []
            for n_sub in frontier:
                for a in atoms:
                    if a <= n_sub:
                        continue
                    joined = self.closure(n_sub | a)
                    if order is not None and order % len(joined):
                        continue
                    if joined not in found:
                        found.add(joined)
                        nxt.append(joined)
            frontier = nxt
        out = [s for s in found if order is None or len(s) == order]
        return sorted(out, key=lambda s: (len(s), sorted(s)))

    @cached_property
    def _square_closure(self) -> ElementSet:
        squares = np.unique(self.mul[np.arange(self.order), np.arange(self.order)]).tolist()
        return self.closure(squares)

    def index_two_subgroups(self) -> list[ElementSet]:
        """Kernels of the surjections onto the group of order 2.

        These correspond to hyperplanes of the elementary abelian quotient by
        the subgroup generated by squares.
        """
        q = self._square_closure
        if self.order % 2 or len(q) == self.order:
            return []
        # coordinates of every element in the F_2-vector space G/Q
        coord = [-1] * self.order
        for x in q:
            coord[x] = 0
        basis: list[int] = []
        span = list(q)
        for x in range(self.order):
            if coord[x] >= 0:
                continue
            bit = 1 << len(basis)
            basis.append(x)
            rows = self.rows
            new = []
            for y in span:
                z = rows[y][x]
                coord[z] = coord[y] | bit
                new.append(z)
            span.extend(new)
        rank = len(basis)
        subgroups = []
        for functional in range(1, 1 << rank):
            members = frozenset(x for x in range(self.order) if bin(coord[x] & functional).count("1") % 2 == 0)
            subgroups.append(members)
        return sorted(subgroups, key=lambda s: sorted(s))

    # -- quotients and structure -------------------------------------------

    def quotient_orders(self, normal: Iterable[int]) -> list[int]:
        """Order of the coset ``xN`` in ``G/N`` for every element ``x``."""
        n_set = set(normal)
        out = []
        rows = self.rows
        for x in range(self.order):
            k, y = 1, x
            while y not in n_set:
                y = rows[y][x]
                k += 1
            out.append(k)
        return out

    def quotient_is_abelian(self, normal: Iterable[int]) -> bool:
        n_set = frozenset(normal)
        comms = set(np.unique(self.commutator_table).tolist())
        return comms <= n_set

    @cached_property
    def abelianization_type(self) -> list[int]:
        """Elementary divisors (prime powers, sorted) of ``G/[G,G]``."""
        return abelian_invariants_from_orders(self.quotient_orders(self.derived_subgroup))

    def subgroup_table(self, members: Iterable[int], name: Optional[str] = None) -> tuple["GroupTable", list[int]]:
        """Re-index a subgroup as its own table; also returns new-index -> old-index."""
        elems = sorted(members)
        if self.identity in elems:
            elems.remove(self.identity)
        elems.insert(0, self.identity)
        pos = {x: i for i, x in enumerate(elems)}
        try:
            sub = [[pos[self.rows[a][b]] for b in elems] for a in elems]
        except KeyError:
            raise GroupError("element set is not closed under multiplication") from None
        return GroupTable(sub, identity=0, name=name), elems

    # -- validation ---------------------------------------------------------

    def verify_axioms(self) -> bool:
        """Full group-axiom check: identity, inverses, associativity on all triples."""
        n = self.order
        e = self.identity
        idx = np.arange(n)
        if not np.all(self.mul[idx, self.inv] == e):
            return False
        left = self.mul[self.mul]  # (ab)c indexed [a, b, c]
        right = self.mul[idx[:, None, None], self.mul[None, :, :]]  # a(bc)
        return bool(np.array_equal(left, right))

    # -- invariants -----------------------------------------------------------

    @cached_property
    def element_invariants(self) -> list[tuple]:
        """Automorphism-invariant label of each element (used for pruning)."""
        n = self.order
        sq = self.mul[np.arange(n), np.arange(n)]
        roots = np.bincount(sq, minlength=n).tolist()
        cube = self.mul[sq, np.arange(n)]
        croots = np.bincount(cube, minlength=n).tolist()
        cls_size = [len(self.conjugacy_classes[c]) for c in self.class_of]
        ords = self.elem_order
        sq_l = sq.tolist()
        derived = self.derived_subgroup
        out = []
        for x in range(n):
            out.append(
                (
                    ords[x],
                    cls_size[x],
                    roots[x],
                    croots[x],
                    cls_size[sq_l[x]],
                    x in derived,
                    x in self.center,
                )
            )
        return out

    @cached_property
    def fingerprint(self) -> "Fingerprint":
        return Fingerprint(
            order=self.order,
            order_spectrum=tuple(sorted(self.order_spectrum.items())),
            center_order=len(self.center),
            derived_series_orders=tuple(len(s) for s in self.derived_series),
            abelianization_type=tuple(self.abelianization_type),
            class_size_multiset=tuple(sorted(Counter(len(c) for c in self.conjugacy_classes).items())),
            lower_central_orders=tuple(len(s) for s in self.lower_central_series),
            element_profile=tuple(sorted(Counter(self.element_invariants).items())),
        )


@dataclass(frozen=True)
class Fingerprint:
    """Isomorphism invariants; equal for isomorphic groups (necessary condition only)."""

    order: int
    order_spectrum: tuple
    center_order: int
    derived_series_orders: tuple
    abelianization_type: tuple
    class_size_multiset: tuple
    lower_central_orders: tuple = ()
    element_profile: tuple = ()


def abelian_invariants_from_orders(orders: Sequence[int]) -> list[int]:
    """Elementary divisors of an abelian group from its element orders.

    ``orders`` may list every coset of a quotient ``G/N`` once per member (as
    :meth:`GroupTable.quotient_orders` does); the repetition factor is the
    number of entries of order 1.
    """
    counts = Counter(orders)
    mult = counts[1]
    group_order = len(orders) // mult
    divisors: list[int] = []
    for p in _prime_factors(group_order):
        # #{x : x^(p^k) = 1} = p^(sum_i min(k, e_i)); successive differences
        # count the cyclic factors of order >= p^k
        at_least = []
        prev = 0
        k = 1
        target = _ilog(_p_part(group_order, p), p)
        while prev < target:
            c = sum(cnt for o, cnt in counts.items() if (p**k) % o == 0) // mult
            s = _ilog(c, p)
            at_least.append(s - prev)
            prev = s
            k += 1
        at_least.append(0)
        for k in range(len(at_least) - 1):
            divisors.extend([p ** (k + 1)] * (at_least[k] - at_least[k + 1]))
    return sorted(divisors)


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _ilog(n: int, p: int) -> int:
    """Exact ``log_p(n)`` for a power ``n`` of ``p``."""
    k = 0
    while n > 1:
        if n % p:
            raise ValueError(f"{n} is not a power of {p}")
        n //= p
        k += 1
    return k


def _p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q
