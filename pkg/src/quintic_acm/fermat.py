"""The Fermat quintic x0^5 + x1^5 + x2^5 + x3^5 = 0 and its 75 lines.

Line coding: a pairing splits the coordinates as ``(i j | k l)`` and the line
is ``{x_i + z^a x_j = 0, x_k + z^b x_l = 0}`` with ``z`` a fixed primitive 5th
root of unity. The canonical index is ``25*pairing + 5*a + b``::

    pairing 0: (01|23)    pairing 1: (02|13)    pairing 2: (03|12)

Each line lies in exactly two "special planes" ``x_p + z^e x_q = 0``; each
special plane cuts the surface in five lines, so for any line ``L`` the four
other lines ``R`` of either plane satisfy ``L + R ~ C``.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .fields import (
    DEFAULT_PRIMES,
    CyclotomicField,
    ModularField,
    power_to_basis,
    zadd,
    zis_zero,
    zmul,
    zsub,
)
from .lattice import NUM_LINES, DivisorClass, IntersectionTable, default_table
from .linalg import monomial_index, monomials, rank_exact, rank_mod_p

__all__ = [
    "PAIRINGS",
    "PAIRING_LABELS",
    "Line",
    "Plane",
    "Configuration",
    "Residual",
    "HyperplaneSection",
    "NonGenericError",
    "HyperplaneSearchError",
    "enumerate_lines",
    "line",
    "line_index",
    "incidence",
    "incidence_rank_test",
    "line_intersection_matrix",
    "special_planes",
    "residual_assignment",
    "connected_components",
    "min_decomposition_pairing",
    "generic_hyperplane",
    "restrict_points",
    "line_table_text",
]

PAIRINGS = ((0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2))
PAIRING_LABELS = ("(01|23)", "(02|13)", "(03|12)")
COORD_PAIRS = tuple(itertools.combinations(range(4), 2))


class NonGenericError(RuntimeError):
    """A hyperplane section is not generic enough for the requested data."""


class HyperplaneSearchError(RuntimeError):
    """No valid hyperplane found within the retry budget."""


def _minus_zeta(e):
    c = [0, 0, 0, 0, 0]
    c[e % 5] = -1
    return power_to_basis(c)


def _zeta(e):
    c = [0, 0, 0, 0, 0]
    c[e % 5] = 1
    return power_to_basis(c)


_ZZ0 = (0, 0, 0, 0)
_ZZ1 = (1, 0, 0, 0)


@dataclass(frozen=True)
class Line:
    pairing: int
    a: int
    b: int

    @property
    def index(self) -> int:
        return 25 * self.pairing + 5 * self.a + self.b

    @property
    def coords(self) -> tuple[int, int, int, int]:
        """``(i, j, k, l)``: the line is x_i + z^a x_j = x_k + z^b x_l = 0."""
        return PAIRINGS[self.pairing]

    def equations(self):
        """The two defining linear forms as 4-vectors of Z[zeta] elements."""
        i, j, k, l = self.coords
        f1 = [_ZZ0] * 4
        f2 = [_ZZ0] * 4
        f1[i], f1[j] = _ZZ1, _zeta(self.a)
        f2[k], f2[l] = _ZZ1, _zeta(self.b)
        return tuple(f1), tuple(f2)

    def points(self):
        """Two points spanning the line (x_j = 1 resp. x_l = 1)."""
        i, j, k, l = self.coords
        p1 = [_ZZ0] * 4
        p2 = [_ZZ0] * 4
        p1[j], p1[i] = _ZZ1, _minus_zeta(self.a)
        p2[l], p2[k] = _ZZ1, _minus_zeta(self.b)
        return tuple(p1), tuple(p2)

    def planes(self) -> tuple["Plane", "Plane"]:
        i, j, k, l = self.coords
        return Plane((i, j), self.a), Plane((k, l), self.b)

    def label(self) -> str:
        return f"{PAIRING_LABELS[self.pairing]} a={self.a} b={self.b}"


@dataclass(frozen=True)
class Plane:
    """Special plane x_p + z^e x_q = 0 for the coordinate pair (p, q)."""

    pair: tuple[int, int]
    exponent: int

    @property
    def index(self) -> int:
        return 5 * COORD_PAIRS.index(self.pair) + self.exponent

    def lines(self) -> tuple[int, ...]:
        """Indices of the five lines cut out by this plane."""
        p, q = self.pair
        out = []
        for pi, (i, j, k, l) in enumerate(PAIRINGS):
            if (i, j) == (p, q):
                out = [25 * pi + 5 * self.exponent + b for b in range(5)]
            elif (k, l) == (p, q):
                out = [25 * pi + 5 * a + self.exponent for a in range(5)]
        return tuple(out)


def line(index: int) -> Line:
    if not 0 <= index < NUM_LINES:
        raise IndexError(f"line index {index} out of range 0..74")
    return Line(index // 25, (index // 5) % 5, index % 5)


def line_index(pairing: int, a: int, b: int) -> int:
    return Line(pairing, a % 5, b % 5).index


def _eval_fermat(x):
    total = _ZZ0
    for c in x:
        p = _ZZ1
        for _ in range(5):
            p = zmul(p, c)
        total = zadd(total, p)
    return total


def _on_surface(ln: Line) -> bool:
    # a binary quintic vanishing at 6 points of P^1 is identically zero
    p1, p2 = ln.points()
    for s, t in [(1, 0), (0, 1), (1, 1), (1, 2), (2, 1), (1, -1)]:
        x = [zadd(zmul((s, 0, 0, 0), u), zmul((t, 0, 0, 0), v)) for u, v in zip(p1, p2)]
        if not zis_zero(_eval_fermat(x)):
            return False
    return True


@lru_cache(maxsize=None)
def enumerate_lines() -> tuple[Line, ...]:
    """All 75 lines in canonical order, each checked to lie on the surface."""
    lines = tuple(Line(p, a, b) for p in range(3) for a in range(5) for b in range(5))
    for ln in lines:
        if not _on_surface(ln):
            raise AssertionError(f"{ln} does not lie on the Fermat quintic")
    assert len(set(lines)) == NUM_LINES
    return lines


@lru_cache(maxsize=None)
def special_planes() -> tuple[Plane, ...]:
    return tuple(Plane(pq, e) for pq in COORD_PAIRS for e in range(5))


def _relations(ln: Line):
    i, j, k, l = ln.coords
    # x_p = -z^e x_q
    return ((i, j, ln.a), (k, l, ln.b))


def incidence(l1: Line | int, l2: Line | int) -> int:
    """Intersection number of two lines: -3 if equal, else 1 if they meet, else 0.

    Same pairing: the lines meet iff exactly one exponent agrees. Different
    pairings: the four relations x_p = -z^e x_q form a 4-cycle on the
    coordinates, which has a nonzero solution iff the signed exponent sum
    around the cycle vanishes mod 5.
    """
    l1 = line(l1) if isinstance(l1, int) else l1
    l2 = line(l2) if isinstance(l2, int) else l2
    if l1 == l2:
        return -3
    if l1.pairing == l2.pairing:
        return int((l1.a == l2.a) != (l1.b == l2.b))
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(4)}
    for p, q, e in _relations(l1) + _relations(l2):
        adj[p].append((q, e))
        adj[q].append((p, -e))
    total, prev, v = 0, None, 0
    for _ in range(4):
        nxt, e = next((w, e) for w, e in adj[v] if w != prev)
        total += e
        prev, v = v, nxt
    assert v == 0
    return int(total % 5 == 0)


def incidence_rank_test(l1: Line | int, l2: Line | int, field=None) -> int:
    """Incidence from the rank of the 4x4 matrix of defining forms.

    rank 2: same line, rank 3: meeting lines, rank 4: disjoint.
    """
    l1 = line(l1) if isinstance(l1, int) else l1
    l2 = line(l2) if isinstance(l2, int) else l2
    rows = list(l1.equations()) + list(l2.equations())
    field = field or CyclotomicField()
    if isinstance(field, ModularField):
        M = np.array([[field.from_zz(x) for x in r] for r in rows], dtype=np.int64)
        r = rank_mod_p(M, field.p)
    else:
        r = rank_exact([list(row) for row in rows])
    return {2: -3, 3: 1, 4: 0}[r]


@lru_cache(maxsize=None)
def _line_matrix() -> np.ndarray:
    enumerate_lines()
    M = np.array([[incidence(i, j) for j in range(NUM_LINES)] for i in range(NUM_LINES)], dtype=np.int64)
    M.setflags(write=False)
    return M


def line_intersection_matrix() -> np.ndarray:
    """75x75 matrix of line intersection numbers (-3 on the diagonal)."""
    return _line_matrix()


# ---------------------------------------------------------------------------
# configurations


@dataclass(frozen=True)
class Configuration:
    """A multiset of lines, stored as a sorted tuple of indices with repeats."""

    lines: tuple[int, ...]

    def __init__(self, lines: Iterable[int]):
        lines = tuple(sorted(int(i) for i in lines))
        for i in lines:
            if not 0 <= i < NUM_LINES:
                raise IndexError(f"line index {i} out of range 0..74")
        object.__setattr__(self, "lines", lines)

    @property
    def multiplicities(self) -> dict[int, int]:
        return dict(Counter(self.lines))

    @property
    def reduced(self) -> bool:
        return len(set(self.lines)) == len(self.lines)

    @property
    def degree(self) -> int:
        """C.D = total multiplicity."""
        return len(self.lines)

    @property
    def max_multiplicity(self) -> int:
        return max(Counter(self.lines).values(), default=0)

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.lines)))

    def divisor_class(self) -> DivisorClass:
        return DivisorClass.from_lines(self.lines)

    def __add__(self, other: "Configuration") -> "Configuration":
        return Configuration(self.lines + other.lines)

    def __len__(self) -> int:
        return len(self.lines)

    def __repr__(self) -> str:
        return f"Configuration({list(self.lines)})"


@dataclass(frozen=True)
class Residual:
    """``D + complement ~ k * C`` obtained by completing each line to a plane section."""

    k: int
    complement: Configuration
    choices: tuple[int, ...]


@lru_cache(maxsize=None)
def _plane_rest(index: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    ln = line(index)
    return tuple(tuple(i for i in pl.lines() if i != index) for pl in ln.planes())


def _residual_for(lines: Sequence[int], choices: Sequence[int]) -> Counter:
    c: Counter = Counter()
    for i, ch in zip(lines, choices):
        c.update(_plane_rest(i)[ch])
    return c


def _check_residual(d: Configuration, res: Residual, table: IntersectionTable) -> None:
    total = d.divisor_class() + res.complement.divisor_class()
    target = DivisorClass.hyperplane(res.k)
    if not np.array_equal(table.row(total), table.row(target)):
        raise AssertionError(f"residual of {d} fails the intersection check")


def residual_assignment(d: Configuration, *, allow_nonreduced: bool = False,
                        choices: Sequence[int] | None = None) -> Residual:
    """Complete ``d`` to ``k = |d|`` special plane sections.

    Each line picks one of its two planes; choice vectors are searched in
    lexicographic order. The first assignment with a reduced complement wins;
    otherwise the one minimizing the largest multiplicity. A fixed ``choices``
    vector skips the search.
    """
    if not d.reduced and not allow_nonreduced:
        raise ValueError("residual_assignment expects a reduced configuration")
    lines = d.lines
    if choices is not None:
        best = tuple(choices)
    else:
        best, best_mult = None, None
        for ch in itertools.product((0, 1), repeat=len(lines)):
            c = _residual_for(lines, ch)
            m = max(c.values(), default=0)
            if m <= 1:
                best = ch
                break
            if best_mult is None or m < best_mult:
                best, best_mult = ch, m
    comp = Configuration(_residual_for(lines, best).elements())
    res = Residual(len(lines), comp, best)
    _check_residual(d, res, default_table())
    return res


def connected_components(d: Configuration) -> int:
    """Number of connected components of the incidence graph on the support."""
    verts = d.support()
    parent = {v: v for v in verts}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    M = _line_matrix()
    for a, b in itertools.combinations(verts, 2):
        if M[a, b] == 1:
            parent[find(a)] = find(b)
    return len({find(v) for v in verts})


def min_decomposition_pairing(d: Configuration) -> float:
    """Minimum of D1.D2 over effective splittings D = D1 + D2, D1, D2 != 0.

    Returns ``inf`` for a single line (no splitting exists).
    """
    mult = d.multiplicities
    support = sorted(mult)
    counts = np.array([mult[i] for i in support], dtype=np.int64)
    if counts.sum() <= 1:
        return float("inf")
    T = _line_matrix()[np.ix_(support, support)]
    grids = np.array(list(itertools.product(*[range(c + 1) for c in counts])), dtype=np.int64)
    keep = (grids.sum(axis=1) > 0) & (grids.sum(axis=1) < counts.sum())
    d1 = grids[keep]
    d2 = counts[None, :] - d1
    values = np.einsum("ki,ij,kj->k", d1, T, d2)
    return int(values.min())


# ---------------------------------------------------------------------------
# hyperplane sections


@dataclass(frozen=True)
class HyperplaneSection:
    """A plane h.x = 0 cutting a smooth plane quintic out of the surface.

    Plane coordinates drop the coordinate ``pivot``: the frame is
    ``x_i = h_pivot * u_i`` (i != pivot), ``x_pivot = -sum h_i u_i``; the
    plane point of a surface point ``x`` is then ``(x_i)_{i != pivot}`` up to
    scaling.
    """

    coeffs: tuple[int, int, int, int]
    seed: int
    validation: dict = field(compare=False, hash=False, default_factory=dict)

    @property
    def pivot(self) -> int:
        return max(i for i, c in enumerate(self.coeffs) if c)

    @property
    def others(self) -> tuple[int, ...]:
        return tuple(i for i in range(4) if i != self.pivot)

    def quintic(self) -> dict[tuple[int, int, int], int]:
        """Integer coefficients of the restricted ternary quintic."""
        return _restricted_quintic(self.coeffs)

    def describe(self) -> dict:
        return {"coeffs": list(self.coeffs), "seed": self.seed, "validation": self.validation}


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def _poly_pow(a: dict, n: int) -> dict:
    out = {(0, 0, 0): 1}
    for _ in range(n):
        out = _poly_mul(out, a)
    return out


@lru_cache(maxsize=None)
def _restricted_quintic(coeffs) -> dict:
    piv = max(i for i, c in enumerate(coeffs) if c)
    others = [i for i in range(4) if i != piv]
    hp = coeffs[piv]
    f: dict = {}
    unit = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    for pos, i in enumerate(others):
        e = tuple(5 * x for x in unit[pos])
        f[e] = f.get(e, 0) + hp ** 5
    lin = {unit[pos]: -coeffs[i] for pos, i in enumerate(others) if coeffs[i]}
    for e, c in _poly_pow(lin, 5).items():
        f[e] = f.get(e, 0) + c
    return {e: c for e, c in f.items() if c}


def _partial(f: dict, var: int) -> dict:
    out = {}
    for e, c in f.items():
        if e[var]:
            ne = list(e)
            ne[var] -= 1
            out[tuple(ne)] = c * e[var]
    return out


def jacobian_matrix(f: dict) -> list[list[int]]:
    """84 x 66 integer matrix: degree-6 multiples of the three partials, in degree 10."""
    idx10 = monomial_index(3, 10)
    rows = []
    for var in range(3):
        g = _partial(f, var)
        for mu in monomials(3, 6):
            row = [0] * len(idx10)
            for e, c in g.items():
                row[idx10[tuple(x + y for x, y in zip(e, mu))]] += c
            rows.append(row)
    return rows


def jacobian_rank(f: dict, fld) -> int:
    rows = jacobian_matrix(f)
    if isinstance(fld, ModularField):
        return rank_mod_p(np.array(rows, dtype=object).astype(np.int64) % fld.p, fld.p)
    return rank_exact([[(x, 0, 0, 0) for x in row] for row in rows])


def has_small_factor(f: dict) -> bool:
    """True if the ternary quintic has a factor of degree <= 2 over Q(zeta).

    The form has rational coefficients, so a factor over Q(zeta) of degree
    <= 2 has a Galois orbit of size 1, 2 or 4 whose product is a rational
    factor of degree 1, 2 or 4; a rational factor of degree <= 4 is the test.
    """
    import sympy

    u = sympy.symbols("u0:3")
    expr = sum(c * u[0] ** e[0] * u[1] ** e[1] * u[2] ** e[2] for e, c in f.items())
    _, factors = sympy.factor_list(expr, *u)
    return any(sympy.Poly(g, *u).total_degree() <= 4 for g, _ in factors)


def _point_on_hyperplane(ln: Line, coeffs) -> tuple:
    """Intersection point of a line with h.x = 0 in Z[zeta]^4 (None if contained)."""
    p1, p2 = ln.points()
    h = [(c, 0, 0, 0) for c in coeffs]
    hp1 = _ZZ0
    hp2 = _ZZ0
    for hc, x, y in zip(h, p1, p2):
        hp1 = zadd(hp1, zmul(hc, x))
        hp2 = zadd(hp2, zmul(hc, y))
    if zis_zero(hp1) and zis_zero(hp2):
        return None
    return tuple(zsub(zmul(hp2, x), zmul(hp1, y)) for x, y in zip(p1, p2))


def _validate(coeffs, fields) -> dict | None:
    for ln in enumerate_lines():
        if _point_on_hyperplane(ln, coeffs) is None:
            return None
    f = _restricted_quintic(coeffs)
    if has_small_factor(f):
        return None
    ranks = {}
    for fld in fields:
        r = jacobian_rank(f, fld)
        key = str(fld.p) if isinstance(fld, ModularField) else "exact"
        ranks[key] = r
        if r != 66:
            return None
    return {"contains_no_line": True, "no_factor_deg_le_2": True, "jacobian_rank_deg10": ranks}


@lru_cache(maxsize=64)
def generic_hyperplane(seed: int = 0, primes: tuple[int, ...] = DEFAULT_PRIMES,
                       exact: bool = False, retries: int = 25, bound: int = 9) -> HyperplaneSection:
    """A validated smooth hyperplane section with small integer coefficients.

    Tries ``seed, seed + 1, ...``; each candidate must contain no line, have
    no factor of degree <= 2, and pass the degree-10 Jacobian rank test (66)
    in every requested field.
    """
    fields = [ModularField(p) for p in primes]
    if exact:
        fields.append(CyclotomicField())
    for attempt in range(retries):
        s = seed + attempt
        rng = random.Random(s)
        coeffs = tuple(rng.choice([c for c in range(-bound, bound + 1) if c]) for _ in range(4))
        record = _validate(coeffs, fields)
        if record is not None:
            record["attempts"] = attempt + 1
            return HyperplaneSection(coeffs, s, record)
    raise HyperplaneSearchError(f"no valid hyperplane within {retries} tries from seed {seed}")


def _to_field(a, fld):
    return fld.from_zz(a) if isinstance(fld, ModularField) else a


def _fmul(x, y, fld):
    return x * y % fld.p if isinstance(fld, ModularField) else zmul(x, y)


def _fsub(x, y, fld):
    return (x - y) % fld.p if isinstance(fld, ModularField) else zsub(x, y)


def _fzero(x, fld):
    return x == 0 if isinstance(fld, ModularField) else zis_zero(x)


def _eval_ternary(f: dict, pt, fld):
    total = 0 if isinstance(fld, ModularField) else _ZZ0
    for e, c in f.items():
        term = _to_field((c, 0, 0, 0), fld)
        for x, k in zip(pt, e):
            for _ in range(k):
                term = _fmul(term, x, fld)
        total = (total + term) % fld.p if isinstance(fld, ModularField) else zadd(total, term)
    return total


@lru_cache(maxsize=None)
def _section_point(index: int, coeffs: tuple, fld) -> tuple:
    """Plane coordinates of the point where line ``index`` meets the section."""
    x = _point_on_hyperplane(line(index), coeffs)
    if x is None:
        raise NonGenericError(f"line {index} lies in the hyperplane")
    section_others = [i for i in range(4) if i != max(i for i, c in enumerate(coeffs) if c)]
    f = _restricted_quintic(coeffs)
    pt = tuple(_to_field(x[c], fld) for c in section_others)
    if not _fzero(_eval_ternary(f, pt, fld), fld):
        raise AssertionError("restricted point is not on the plane quintic")
    if all(_fzero(_eval_ternary(_partial(f, v), pt, fld), fld) for v in range(3)):
        raise NonGenericError(f"point of line {index} is singular on the section")
    return pt


def restrict_points(d: Configuration, section: HyperplaneSection, fld=None) -> list[tuple]:
    """The points D n C as plane coordinates over ``fld``, one per line.

    Raises ``NonGenericError`` when two points coincide or a point is a
    singular point of the plane quintic.
    """
    if not d.reduced:
        raise ValueError("restrict_points expects a reduced configuration")
    fld = fld or ModularField(DEFAULT_PRIMES[0])
    pts = [_section_point(i, section.coeffs, fld) for i in d.lines]
    for p, q in itertools.combinations(pts, 2):
        minors = [_fsub(_fmul(p[r], q[s], fld), _fmul(p[s], q[r], fld), fld) for r, s in ((0, 1), (0, 2), (1, 2))]
        if all(_fzero(m, fld) for m in minors):
            raise NonGenericError("two lines meet the hyperplane in the same point")
    return pts


def line_table_text() -> str:
    """Tab-separated table: index, pairing, a, b, incidence row."""
    M = _line_matrix()
    sym = {-3: "*", 0: "0", 1: "1"}
    out = ["index\tpairing\ta\tb\tincidence"]
    for ln in enumerate_lines():
        row = "".join(sym[int(v)] for v in M[ln.index])
        out.append(f"{ln.index}\t{PAIRING_LABELS[ln.pairing]}\t{ln.a}\t{ln.b}\t{row}")
    return "\n".join(out)
