"""Branching signatures and Riemann-Hurwitz arithmetic, all in exact rationals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import SignatureError

MAX_PERIODS = 8


@dataclass(frozen=True, order=True)
class BranchSignature:
    """``(g' | m_1, ..., m_r)`` with nondecreasing periods."""

    base_genus: int
    periods: tuple[int, ...]

    def __post_init__(self):
        if self.base_genus not in (0, 1):
            raise SignatureError("base genus must be 0 or 1")
        if any(m < 2 for m in self.periods):
            raise SignatureError("periods must be at least 2")
        if tuple(sorted(self.periods)) != self.periods:
            raise SignatureError("periods must be nondecreasing")
        if self.base_genus == 0 and not self.periods:
            raise SignatureError("a genus-0 signature needs branch points")

    @classmethod
    def of(cls, base_genus: int, periods: Iterable[int]) -> "BranchSignature":
        return cls(base_genus, tuple(sorted(periods)))

    @property
    def r(self) -> int:
        return len(self.periods)

    def __str__(self) -> str:
        return f"({self.base_genus} | {format_periods(self.periods)})"


def format_periods(periods: Sequence[int], compact: bool = True) -> str:
    """``(2, 2, 4, 4)`` becomes ``2^2,4^2`` (or ``2,2,4,4`` with ``compact=False``)."""
    if not compact:
        return ",".join(map(str, periods))
    parts = []
    i = 0
    while i < len(periods):
        j = i
        while j < len(periods) and periods[j] == periods[i]:
            j += 1
        parts.append(str(periods[i]) if j - i == 1 else f"{periods[i]}^{j - i}")
        i = j
    return ",".join(parts)


def parse_periods(text: str) -> tuple[int, ...]:
    """Inverse of :func:`format_periods`; accepts ``2,2,4,4`` or ``2^2,4^2``."""
    out: list[int] = []
    for part in text.replace(" ", "").split(","):
        if not part:
            continue
        base, _, exp = part.partition("^")
        try:
            m, e = int(base), int(exp) if exp else 1
        except ValueError:
            raise SignatureError(f"bad period list {text!r}") from None
        if m < 2 or e < 1:
            raise SignatureError(f"bad period list {text!r}")
        out.extend([m] * e)
    return tuple(sorted(out))


def theta(m: Sequence[int]) -> Fraction:
    """``-2 + sum(1 - 1/m_i)``."""
    if any(x < 2 for x in m):
        raise SignatureError("periods must be at least 2")
    return -2 + sum((1 - Fraction(1, x) for x in m), Fraction(0))


def alpha(m: Sequence[int]) -> Fraction:
    """``2 / theta(m)``; only defined for hyperbolic ``m``."""
    t = theta(m)
    if t <= 0:
        raise SignatureError(f"nonhyperbolic signature {tuple(m)}: theta = {t}")
    return 2 / t


def rh_genus(base_genus: int, order: int, periods: Sequence[int]) -> int:
    """Genus of a curve with a ``G``-action of the given branching type."""
    if base_genus == 0:
        twice = order * theta(periods)
    elif base_genus == 1:
        twice = order * sum((1 - Fraction(1, x) for x in periods), Fraction(0))
    else:
        twice = order * (2 * base_genus - 2 + sum((1 - Fraction(1, x) for x in periods), Fraction(0)))
    # 2g - 2 = twice
    if twice.denominator != 1 or twice.numerator % 2:
        raise SignatureError(f"non-integral genus for |G|={order}, periods={tuple(periods)}")
    return 1 + twice.numerator // 2


def surface_invariants(g_c: int, g_f: int, order: int) -> tuple[int, int]:
    """``(chi, K^2)`` of ``(C x F)/G`` for a free action."""
    num = (g_c - 1) * (g_f - 1)
    if order <= 0 or num % order:
        raise SignatureError(f"|G|={order} does not divide (g_C-1)(g_F-1)={num}")
    chi = num // order
    return chi, 8 * chi


def enumerate_admissible_tuples(alpha_cap: int) -> list[tuple[tuple[int, ...], int]]:
    """Nondecreasing ``m`` with ``theta > 0``, integral ``alpha <= alpha_cap`` and ``m_i | alpha``.

    Sorted by length, then lexicographically.
    """
    out: list[tuple[tuple[int, ...], int]] = []
    # for fixed alpha the periods are divisors of alpha summing to
    # sum(1 - 1/m_i) = 2 + 2/alpha, which also bounds the length by 8
    for a in range(2, alpha_cap + 1):
        divisors = [d for d in range(2, a + 1) if a % d == 0]
        target = 2 + Fraction(2, a)

        def rec(prefix: list[int], start: int, remaining: Fraction) -> None:
            if remaining == 0:
                if len(prefix) >= 3:
                    out.append((tuple(prefix), a))
                return
            if len(prefix) == MAX_PERIODS:
                return
            for i in range(start, len(divisors)):
                step = 1 - Fraction(1, divisors[i])
                if step > remaining:
                    break
                prefix.append(divisors[i])
                rec(prefix, i, remaining - step)
                prefix.pop()

        rec([], 0, target)
    out.sort(key=lambda e: (len(e[0]), e[0]))
    return out
