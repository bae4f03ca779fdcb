"""Numerical criterion for O_X(D) to be aCM and initialized on a smooth quintic.

With ``k = C.D + 1 - p_a(D)`` the bundle is aCM and initialized exactly when

* (i)    0 <= k <= 4;
* (ii)   k in {0, 1}: C.D = 10 - k and h0(O_C(D - C)) = 0;
* (iii)  k = 2: (a) C.D = 1 or 4 <= C.D <= 8; (b) if C.D = 7,
  h0(O_X(2C - D)) = 1; (c) if C.D = 8, h0(O_C(D - C)) = 0 and h0(O_C(D)) = 3;
* (iv)   k in {3, 4}: (a) k - 1 <= C.D <= 10 - k; (b) if 8 - k <= C.D <= 10 - k,
  h0(O_C(D)) = 5 - k.

Everything here is plain arithmetic on supplied numbers, so the data may come
from the Fermat oracle or from any other smooth quintic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Hashable, Mapping

__all__ = [
    "ABSENT",
    "AbsentInputError",
    "ClassifierInput",
    "Verdict",
    "classify",
    "necessary_ranges",
    "Trichotomy",
    "degree_one_trichotomy",
    "DegreeTwoStructure",
    "DegreeTwoResult",
    "degree_two_structure",
    "dichotomy_check",
]


class _Absent:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ABSENT"

    def __bool__(self):
        return False


ABSENT = _Absent()


class AbsentInputError(LookupError):
    """A clause needed a side input that was not supplied."""


@dataclass(frozen=True)
class ClassifierInput:
    CD: int
    Pa: int
    h0_C_D: int | _Absent = ABSENT
    h0_C_DminusC: int | _Absent = ABSENT
    h0_X_2CminusD: int | _Absent = ABSENT

    @property
    def k(self) -> int:
        return self.CD + 1 - self.Pa

    def consult(self, name: str) -> int:
        value = getattr(self, name)
        if value is ABSENT:
            raise AbsentInputError(f"clause needs {name}, which was not supplied (CD={self.CD}, Pa={self.Pa})")
        return value


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    clause_trace: tuple[tuple[str, bool], ...] = field(default=())

    @property
    def failed_clause(self) -> str | None:
        return next((cid for cid, ok in self.clause_trace if not ok), None)


def classify(data: ClassifierInput) -> Verdict:
    """Evaluate the criterion, consulting side inputs only when a clause needs them."""
    if data.CD < 1:
        raise ValueError("the criterion needs a non-zero effective divisor (C.D >= 1)")
    k, cd = data.k, data.CD
    trace: list[tuple[str, bool]] = []

    def clause(cid: str, ok: bool) -> bool:
        trace.append((cid, bool(ok)))
        return bool(ok)

    def verdict() -> Verdict:
        return Verdict(all(ok for _, ok in trace), tuple(trace))

    if not clause("i", 0 <= k <= 4):
        return verdict()
    if k <= 1:
        clause("ii", cd == 10 - k and data.consult("h0_C_DminusC") == 0)
    elif k == 2:
        if clause("iii-a", cd == 1 or 4 <= cd <= 8):
            if cd == 7:
                clause("iii-b", data.consult("h0_X_2CminusD") == 1)
            elif cd == 8:
                clause("iii-c", data.consult("h0_C_DminusC") == 0 and data.consult("h0_C_D") == 3)
    else:
        if clause("iv-a", k - 1 <= cd <= 10 - k) and 8 - k <= cd <= 10 - k:
            clause("iv-b", data.consult("h0_C_D") == 5 - k)
    return verdict()


_RANGES = {
    -3: frozenset(range(3, 7)),
    -2: frozenset(range(2, 8)),
    -1: frozenset({1}) | frozenset(range(4, 9)),
    0: frozenset(range(6, 10)),
    1: frozenset(range(7, 11)),
}


def necessary_ranges(relation: int) -> frozenset[int]:
    """Admissible C.D values for aCM initialized O_X(D) given p_a(D) - C.D.

    Outside -3..1 no value is admissible.
    """
    return _RANGES.get(relation, frozenset())


@dataclass(frozen=True)
class Trichotomy:
    """For C.D = 1: (a) h0(D) > 0; (b) h0(D) = 1, h0(C - D) = 2, h1(D) = 0; (c) D^2 = -3."""

    a: bool
    b: bool
    c: bool

    @property
    def consistent(self) -> bool:
        return self.a == self.b == self.c


def degree_one_trichotomy(CD: int, self_intersection: int, h0_D: int, h0_C_minus_D: int, h1_D: int) -> Trichotomy:
    if CD != 1:
        raise ValueError("the trichotomy concerns classes of degree C.D = 1")
    return Trichotomy(
        a=h0_D > 0,
        b=h0_D == 1 and h0_C_minus_D == 2 and h1_D == 0,
        c=self_intersection == -3,
    )


class DegreeTwoStructure(enum.Enum):
    CASE_A = "double curve"
    CASE_B = "two disjoint curves"
    NEITHER = "neither"


@dataclass(frozen=True)
class DegreeTwoResult:
    structure: DegreeTwoStructure
    self_intersection: int

    @property
    def equivalence_holds(self) -> bool:
        """D^2 <= -6 exactly in the two special cases."""
        special = self.structure is not DegreeTwoStructure.NEITHER
        return (self.self_intersection <= -6) == special


def degree_two_structure(
    mults: Mapping[Hashable, int], pairing: Callable[[Hashable, Hashable], int]
) -> DegreeTwoResult:
    """Classify an effective degree-2 divisor built from degree-1 curves.

    ``mults`` maps each curve to its multiplicity; ``pairing`` gives
    intersection numbers, including each curve's self-intersection.
    """
    parts = {c: m for c, m in mults.items() if m}
    if sum(parts.values()) != 2 or any(m < 0 for m in parts.values()):
        raise ValueError("expected an effective divisor with C.D = 2")
    curves = list(parts)
    d2 = sum(parts[x] * parts[y] * pairing(x, y) for x in curves for y in curves)
    if len(curves) == 1:
        structure = DegreeTwoStructure.CASE_A
    elif pairing(curves[0], curves[1]) == 0:
        structure = DegreeTwoStructure.CASE_B
    else:
        structure = DegreeTwoStructure.NEITHER
    return DegreeTwoResult(structure, d2)


def dichotomy_check(h1_minus_D: int, two_disjoint_lines: bool, h0_D_minus_C: int, h1_D: int) -> bool | None:
    """If h0(D - C) = 0 and h1(D) = 0: h1(-D) = 0 or D is two disjoint lines.

    Returns ``None`` when the hypotheses fail (nothing to check).
    """
    if h0_D_minus_C != 0 or h1_D != 0:
        return None
    return h1_minus_D == 0 or two_disjoint_lines
