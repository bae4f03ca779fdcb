"""Integer arithmetic of divisor classes on a smooth quintic surface.

A class is ``h*C + sum(m_i * L_i)`` where ``C`` is the hyperplane class and
``L_0 .. L_74`` are the lines of the Fermat quintic. Intersection numbers come
from a symmetric 76x76 table over the basis ``(C, L_0, ..., L_74)``.

Since the canonical class of a quintic surface is ``C``:

* chi(O(D)) = D.(D - C)/2 + 5
* p_a(D)    = D.(D + C)/2 + 1
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

__all__ = [
    "NUM_LINES",
    "CHI_OX",
    "DivisorClass",
    "IntersectionTable",
    "intersect",
    "self_intersection",
    "chi",
    "pa",
    "k_invariant",
    "serre_partner",
    "window_bound",
    "default_table",
]

NUM_LINES = 75
CHI_OX = 5
HYPERPLANE_DEGREE = 5


@dataclass(frozen=True)
class DivisorClass:
    """``h_mult * C + sum line_mults[i] * L_i``; coefficients may be negative."""

    h_mult: int = 0
    line_mults: tuple[int, ...] = (0,) * NUM_LINES

    def __post_init__(self):
        if len(self.line_mults) != NUM_LINES:
            raise ValueError(f"expected {NUM_LINES} line multiplicities")

    @classmethod
    def zero(cls) -> "DivisorClass":
        return cls()

    @classmethod
    def hyperplane(cls, n: int = 1) -> "DivisorClass":
        return cls(n)

    @classmethod
    def line(cls, index: int, mult: int = 1) -> "DivisorClass":
        m = [0] * NUM_LINES
        m[index] = mult
        return cls(0, tuple(m))

    @classmethod
    def from_lines(cls, indices: Iterable[int], h_mult: int = 0) -> "DivisorClass":
        """Sum of the given lines; repeated indices add multiplicity."""
        m = [0] * NUM_LINES
        for i in indices:
            m[i] += 1
        return cls(h_mult, tuple(m))

    @property
    def vector(self) -> np.ndarray:
        return np.array((self.h_mult,) + self.line_mults, dtype=np.int64)

    def support(self) -> dict[int, int]:
        return {i: m for i, m in enumerate(self.line_mults) if m}

    def is_line_supported(self) -> bool:
        return self.h_mult == 0

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(
            self.h_mult + other.h_mult,
            tuple(a + b for a, b in zip(self.line_mults, other.line_mults)),
        )

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(-self.h_mult, tuple(-a for a in self.line_mults))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return self + (-other)

    def __mul__(self, n: int) -> "DivisorClass":
        return DivisorClass(self.h_mult * n, tuple(a * n for a in self.line_mults))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        parts = []
        if self.h_mult:
            parts.append(f"{self.h_mult}C")
        for i, m in self.support().items():
            parts.append(f"{m}L{i}" if m != 1 else f"L{i}")
        return "DivisorClass(" + (" + ".join(parts) or "0") + ")"


class IntersectionTable:
    """Symmetric intersection matrix over ``(C, L_0, ..., L_74)``."""

    def __init__(self, line_matrix):
        L = np.asarray(line_matrix, dtype=np.int64)
        if L.shape != (NUM_LINES, NUM_LINES):
            raise ValueError("line intersection matrix must be 75x75")
        if not np.array_equal(L, L.T):
            raise ValueError("intersection matrix must be symmetric")
        T = np.empty((NUM_LINES + 1, NUM_LINES + 1), dtype=np.int64)
        T[0, 0] = HYPERPLANE_DEGREE
        T[0, 1:] = 1
        T[1:, 0] = 1
        T[1:, 1:] = L
        T.setflags(write=False)
        self.matrix = T

    def __call__(self, d1: DivisorClass, d2: DivisorClass) -> int:
        return int(d1.vector @ self.matrix @ d2.vector)

    def row(self, d: DivisorClass) -> np.ndarray:
        """Intersection numbers of ``d`` with every basis class."""
        return self.matrix @ d.vector


_DEFAULT: IntersectionTable | None = None


def default_table() -> IntersectionTable:
    """The intersection table of the 75 lines on the Fermat quintic."""
    global _DEFAULT
    if _DEFAULT is None:
        from .fermat import line_intersection_matrix

        _DEFAULT = IntersectionTable(line_intersection_matrix())
    return _DEFAULT


def intersect(d1: DivisorClass, d2: DivisorClass, table: IntersectionTable | None = None) -> int:
    return (table or default_table())(d1, d2)


def self_intersection(d: DivisorClass, table: IntersectionTable | None = None) -> int:
    return intersect(d, d, table)


def chi(d: DivisorClass, table: IntersectionTable | None = None) -> int:
    """Euler characteristic of O_X(d) by Riemann-Roch."""
    c = DivisorClass.hyperplane()
    twice = intersect(d, d - c, table)
    assert twice % 2 == 0, "D.(D-C) must be even"
    return twice // 2 + CHI_OX


def pa(d: DivisorClass, table: IntersectionTable | None = None) -> int:
    """Arithmetic genus ``D.(D+C)/2 + 1``."""
    c = DivisorClass.hyperplane()
    twice = intersect(d, d + c, table)
    assert twice % 2 == 0, "D.(D+C) must be even"
    return twice // 2 + 1


def k_invariant(d: DivisorClass, table: IntersectionTable | None = None) -> int:
    """``C.D + 1 - p_a(D)``; equivalently chi(O_X(D)) = 5 - k."""
    return intersect(DivisorClass.hyperplane(), d, table) + 1 - pa(d, table)


def serre_partner(i: int, d: DivisorClass) -> tuple[int, DivisorClass]:
    """h^i(O(D)) = h^(2-i)(O(C - D))."""
    if not 0 <= i <= 2:
        raise ValueError("cohomological degree must be 0, 1 or 2")
    return 2 - i, DivisorClass.hyperplane() - d


def window_bound(d: DivisorClass | int, table: IntersectionTable | None = None) -> int:
    """Smallest positive k with 5k > C.D + 5.

    Vanishing of h^1(lC - D) for 0 <= l <= k then forces vanishing for every
    twist. Accepts a class or the degree ``C.D`` directly.
    """
    cd = d if isinstance(d, int) else intersect(DivisorClass.hyperplane(), d, table)
    if cd < 1:
        raise ValueError("window bound needs C.D >= 1")
    return (cd + 5) // HYPERPLANE_DEGREE + 1
