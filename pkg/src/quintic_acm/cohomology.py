"""Brute-force cohomology of line bundles O_X(M) on the Fermat quintic.

Every class handled here is ``nC + P - N`` with ``P`` and ``N`` effective
line configurations. Completing ``P`` to full special-plane sections gives
``P + P' ~ kC``, so ``M ~ (n + k)C - (N + P')`` and

    h^0(O_X(M)) = dim I(N + P')_{n+k} - dim S_{n+k-5},

a kernel dimension of an explicit linear system. ``h^2`` is ``h^0`` of the
Serre partner ``C - M`` and ``h^1`` is assembled from Riemann-Roch; it is
never computed directly.

Curve-side quantities live on a validated smooth plane section ``C``: a
reduced configuration ``D`` cuts out ``C.D`` distinct points ``Delta`` and

    h^0(O_C(m h - Delta)) = dim{ternary forms of degree m through Delta}
                            - dim S^3_{m-5}.

With the default modular backend each dimension is computed over three
primes; any disagreement is escalated to exact arithmetic over Q(zeta).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .fermat import (
    Configuration,
    HyperplaneSection,
    NonGenericError,
    Residual,
    connected_components,
    generic_hyperplane,
    residual_assignment,
    restrict_points,
)
from .fields import DEFAULT_PRIMES, CyclotomicField, ModularField, zmul
from .lattice import DivisorClass, chi, intersect, pa, window_bound
from .linalg import FormSpace, formspace_dim, rank_exact, rank_mod_p
from .vanishing import ideal_dim_in_field

__all__ = [
    "InconsistencyError",
    "OracleConfig",
    "ConsistencyLog",
    "CohomologyProfile",
    "CurveDivisor",
    "OracleBundle",
    "Oracle",
    "h0_minus",
    "h0_plus",
    "profile",
    "acm_decide",
    "initialized_check",
    "curve_h0_twist",
    "curve_side_inputs",
    "oracle_bundle",
    "default_oracle",
]

IDEAL_DIM = "IDEAL-DIM"
RESIDUAL = "RESIDUAL"
SERRE = "SERRE"
RR = "RR"
COMBINATORIAL = "COMBINATORIAL"


class InconsistencyError(RuntimeError):
    """An internal cross-check failed; ``diagnostics`` holds the evidence."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}

    def __str__(self):
        base = super().__str__()
        if not self.diagnostics:
            return base
        detail = ", ".join(f"{k}={v!r}" for k, v in self.diagnostics.items())
        return f"{base} [{detail}]"


@dataclass(frozen=True)
class OracleConfig:
    mode: str = "modular"
    primes: tuple[int, ...] = DEFAULT_PRIMES
    hyperplane_seed: int = 0
    hyperplane_retries: int = 8

    def __post_init__(self):
        if self.mode not in ("modular", "exact"):
            raise ValueError(f"unknown field mode {self.mode!r}")
        if self.mode == "modular" and len(self.primes) < 1:
            raise ValueError("modular mode needs at least one prime")
        for p in self.primes:
            if p % 5 != 1:
                raise ValueError(f"prime {p} is not 1 mod 5")

    def describe(self) -> dict:
        out = {"mode": self.mode, "hyperplane_seed": self.hyperplane_seed}
        if self.mode == "modular":
            out["primes"] = list(self.primes)
        return out


@dataclass
class ConsistencyLog:
    """Counts of executed cross-checks plus every escalation to exact mode."""

    checks: Counter = field(default_factory=Counter)
    escalations: list = field(default_factory=list)

    def check(self, name: str, ok: bool, message: str = "", **diagnostics) -> None:
        self.checks[name] += 1
        if not ok:
            raise InconsistencyError(f"{name} check failed: {message}".rstrip(": "), diagnostics)

    def merge(self, other: "ConsistencyLog") -> None:
        self.checks.update(other.checks)
        self.escalations.extend(other.escalations)

    def summary(self) -> dict:
        return {"checks": dict(sorted(self.checks.items())), "escalations": list(self.escalations)}


@dataclass(frozen=True)
class CohomologyProfile:
    """``(h0, h1, h2, chi)`` of one twist with a provenance tag per entry."""

    twist: str
    l: int | None
    sign: str | None
    lines: tuple[int, ...]
    h0: int
    h1: int
    h2: int
    chi: int
    provenance: dict = field(compare=False, hash=False, default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "twist": self.twist,
            "h0": self.h0,
            "h1": self.h1,
            "h2": self.h2,
            "chi": self.chi,
            "provenance": dict(self.provenance),
        }


@dataclass(frozen=True)
class CurveDivisor:
    """Distinct smooth points of the plane quintic, one tuple per field."""

    points: dict = field(hash=False)
    degree: int
    section: HyperplaneSection
    lines: tuple[int, ...] | None = None

    def __post_init__(self):
        for pts in self.points.values():
            if len(pts) != self.degree:
                raise ValueError("degree must equal the number of points")


@dataclass(frozen=True)
class OracleBundle:
    CD: int
    Pa: int
    h0_C_D: int
    h0_C_DminusC: int
    h0_X_2CminusD: int
    h0_X_D: int
    h0_X_DminusC: int
    acm: bool
    initialized: bool
    profiles: tuple = field(default=(), compare=False)
    hyperplane: dict = field(default_factory=dict, compare=False)

    def as_dict(self) -> dict:
        return {
            "CD": self.CD,
            "Pa": self.Pa,
            "h0_C_D": self.h0_C_D,
            "h0_C_DminusC": self.h0_C_DminusC,
            "h0_X_2CminusD": self.h0_X_2CminusD,
            "h0_X_D": self.h0_X_D,
            "h0_X_DminusC": self.h0_X_DminusC,
            "acm": self.acm,
            "initialized": self.initialized,
        }


def _as_config(d) -> Configuration:
    return d if isinstance(d, Configuration) else Configuration(d)


def _require_reduced(d: Configuration) -> None:
    if not d.reduced:
        raise ValueError(f"{d} is not reduced")
    if d.degree == 0:
        raise ValueError("configuration must be non-empty")


def _ternary_rows_exact(points, m: int):
    mons = FormSpace(3, m).monomials()
    rows = []
    for pt in points:
        powers = [[(1, 0, 0, 0)] for _ in range(3)]
        for v in range(3):
            for _ in range(m):
                powers[v].append(zmul(powers[v][-1], pt[v]))
        row = []
        for e in mons:
            val = zmul(zmul(powers[0][e[0]], powers[1][e[1]]), powers[2][e[2]])
            row.append(val)
        rows.append(row)
    return rows


class Oracle:
    """Cohomology oracle over a fixed field configuration and hyperplane section."""

    def __init__(self, config: OracleConfig | None = None):
        self.config = config or OracleConfig()
        if self.config.mode == "exact":
            self.fields = (CyclotomicField(),)
        else:
            self.fields = tuple(ModularField(p) for p in self.config.primes)
        self.log = ConsistencyLog()
        self._ideal_cache: dict = {}
        self._residual_cache: dict = {}
        self._section: HyperplaneSection | None = None

    # -- field consensus ---------------------------------------------------

    def _consensus(self, what: str, compute) -> int:
        values = [compute(f) for f in self.fields]
        if len(set(values)) == 1:
            if len(values) > 1:
                self.log.checks["consensus"] += 1
            return values[0]
        exact = compute(CyclotomicField())
        self.log.escalations.append({"quantity": what, "modular": values, "exact": exact})
        self.log.check(
            "escalation",
            all(v >= exact for v in values),
            "modular dimension below the characteristic-zero value",
            quantity=what,
            modular=values,
            exact=exact,
        )
        return exact

    def ideal_dim(self, mults: dict[int, int] | Configuration, n: int) -> int:
        """dim of degree-n forms vanishing to the given order along each line."""
        if isinstance(mults, Configuration):
            mults = mults.multiplicities
        if n < 0:
            return 0
        key = (tuple(sorted((i, m) for i, m in mults.items() if m > 0)), n)
        hit = self._ideal_cache.get(key)
        if hit is not None:
            return hit
        value = self._consensus(
            f"ideal_dim{key}", lambda f: ideal_dim_in_field(dict(key[0]), n, f)
        )
        if len(self._ideal_cache) > 200_000:
            self._ideal_cache.clear()
        self._ideal_cache[key] = value
        return value

    # -- surface side ------------------------------------------------------

    def residual(self, d: Configuration) -> Residual:
        res = self._residual_cache.get(d.lines)
        if res is None:
            res = residual_assignment(d, allow_nonreduced=not d.reduced)
            if len(self._residual_cache) > 100_000:
                self._residual_cache.clear()
            self._residual_cache[d.lines] = res
        return res

    def _h0_twisted_ideal(self, degree: int, mults: Counter, what: str) -> int:
        value = self.ideal_dim(dict(mults), degree) - formspace_dim(4, degree - 5)
        self.log.check(
            "nonnegative_h0", value >= 0, "ideal dimension below quintic multiples",
            quantity=what, degree=degree, value=value,
        )
        return value

    def h0_class(self, m: DivisorClass, residual: Residual | None = None) -> int:
        """h^0(O_X(M)) for an arbitrary class supported on C and the lines."""
        pos = [i for i, x in enumerate(m.line_mults) for _ in range(max(x, 0))]
        neg = Counter({i: -x for i, x in enumerate(m.line_mults) if x < 0})
        degree = m.h_mult
        if pos:
            p = Configuration(pos)
            res = residual or self.residual(p)
            degree += res.k
            neg.update(Counter(res.complement.lines))
        if degree < 0:
            return 0
        return self._h0_twisted_ideal(degree, neg, repr(m))

    def h0_minus(self, l: int, d) -> int:
        """h^0(O_X(lC - D)) = dim I(D)_l - dim S_{l-5}."""
        d = _as_config(d)
        if l < 0:
            return 0
        return self._h0_twisted_ideal(l, Counter(d.lines), f"{l}C-D")

    def h0_plus(self, l: int, d, residual: Residual | None = None) -> int:
        """h^0(O_X(lC + D)) through the residual identity lC + D ~ (l + k)C - D'."""
        d = _as_config(d)
        res = residual or self.residual(d)
        return self._h0_twisted_ideal(l + res.k, Counter(res.complement.lines), f"{l}C+D")

    def profile(self, l: int, sign: str, d) -> CohomologyProfile:
        """Cohomology of O_X(lC - D) (sign '-') or O_X(lC + D) (sign '+')."""
        d = _as_config(d)
        _require_reduced(d)
        cls = d.divisor_class()
        if sign == "-":
            h0 = self.h0_minus(l, d)
            h2 = self.h0_plus(1 - l, d)
            prov = {"h0": IDEAL_DIM, "h2": f"{SERRE}+{RESIDUAL}"}
            m = DivisorClass.hyperplane(l) - cls
        elif sign == "+":
            h0 = self.h0_plus(l, d)
            h2 = self.h0_minus(1 - l, d)
            prov = {"h0": RESIDUAL, "h2": f"{SERRE}+{IDEAL_DIM}"}
            m = DivisorClass.hyperplane(l) + cls
        else:
            raise ValueError("sign must be '+' or '-'")
        prov["h1"] = RR
        twist = f"{l}C{sign}D"
        return self._assemble(twist, l, sign, d.lines, m, h0, h2, prov)

    def class_profile(self, m: DivisorClass) -> CohomologyProfile:
        """Cohomology of an arbitrary class ``nC + sum m_i L_i``."""
        h0 = self.h0_class(m)
        h2 = self.h0_class(DivisorClass.hyperplane() - m)
        prov = {"h0": RESIDUAL, "h2": f"{SERRE}+{RESIDUAL}", "h1": RR}
        lines = tuple(i for i, x in enumerate(m.line_mults) if x)
        return self._assemble(repr(m), None, None, lines, m, h0, h2, prov)

    def _assemble(self, twist, l, sign, lines, m, h0, h2, prov) -> CohomologyProfile:
        x = chi(m)
        h1 = h0 + h2 - x
        self.log.check(
            "riemann_roch", h1 >= 0, "negative h1 from h0 + h2 - chi",
            twist=twist, lines=lines, h0=h0, h2=h2, chi=x,
        )
        return CohomologyProfile(twist, l, sign, tuple(lines), h0, h1, h2, x, prov)

    def acm_profiles(self, d) -> list[CohomologyProfile]:
        """Profiles of O_X(lC - D) over the finite window 0 <= l <= window_bound."""
        d = _as_config(d)
        _require_reduced(d)
        return [self.profile(l, "-", d) for l in range(window_bound(d.degree) + 1)]

    def acm_decide(self, d) -> bool:
        return all(p.h1 == 0 for p in self.acm_profiles(d))

    def initialized_check(self, d) -> bool:
        """h^0(O_X(D - C)) = 0 (h^0(O_X(D)) >= 1 holds for effective D)."""
        d = _as_config(d)
        _require_reduced(d)
        return self.h0_plus(-1, d) == 0

    def alternate_residual(self, d: Configuration) -> Residual | None:
        """Residual with every plane choice flipped, for independent recomputation."""
        primary = self.residual(d)
        flipped = tuple(1 - c for c in primary.choices)
        alt = residual_assignment(d, allow_nonreduced=True, choices=flipped)
        if alt.complement.max_multiplicity > 2:
            return None
        return alt

    def cross_checks(self, d) -> None:
        """Combinatorial identity for h^0(C + D) and a Serre-duality recomputation."""
        d = _as_config(d)
        _require_reduced(d)
        h0_c_plus_d = self.h0_plus(1, d)
        expected = pa(d.divisor_class()) + 3 + connected_components(d)
        self.log.check(
            "combinatorial", h0_c_plus_d == expected, "h0(C+D) != pa + 3 + components",
            lines=d.lines, h0=h0_c_plus_d, expected=expected,
        )
        alt = self.alternate_residual(d)
        if alt is not None:
            # h^2(O_X(-D)) = h^0(O_X(C + D)), the latter through another residual
            h2_minus_d = self.profile(0, "-", d).h2
            other = self.h0_plus(1, d, residual=alt)
            self.log.check(
                "serre", h2_minus_d == other, "Serre partner disagrees across residuals",
                lines=d.lines, primary=h2_minus_d, alternate=other,
            )

    # -- curve side ----------------------------------------------------------

    @property
    def section(self) -> HyperplaneSection:
        if self._section is None:
            self._section = generic_hyperplane(self.config.hyperplane_seed, primes=self._section_primes())
        return self._section

    def _section_primes(self) -> tuple[int, ...]:
        return self.config.primes if self.config.mode == "modular" else DEFAULT_PRIMES

    def curve_divisor(self, d) -> CurveDivisor:
        """The point divisor cut on the section; re-draws the section when not generic."""
        d = _as_config(d)
        _require_reduced(d)
        section = self.section
        for attempt in range(self.config.hyperplane_retries):
            try:
                pts = {f: tuple(restrict_points(d, section, f)) for f in self.fields}
                return CurveDivisor(pts, d.degree, section, d.lines)
            except NonGenericError:
                section = generic_hyperplane(section.seed + 1, primes=self._section_primes())
        raise NonGenericError(f"no generic section for {d} after {self.config.hyperplane_retries} draws")

    def _forms_through(self, points, m: int, fld) -> int:
        n = formspace_dim(3, m)
        if not points or m < 0:
            return n
        if isinstance(fld, ModularField):
            M = FormSpace(3, m).evaluation_matrix(points, fld.p)
            return n - rank_mod_p(M, fld.p)
        return n - rank_exact(_ternary_rows_exact(points, m))

    def curve_h0_twist(self, m: int, delta: CurveDivisor | None) -> int:
        """h^0(O_C(m h - Delta)) on the plane quintic."""
        if m < 0:
            return 0
        sub = formspace_dim(3, m - 5)
        if delta is None or delta.degree == 0:
            return formspace_dim(3, m) - sub

        def compute(fld):
            pts = delta.points.get(fld)
            if pts is None:
                if delta.lines is None:
                    raise KeyError(f"curve divisor has no points over {fld}")
                pts = restrict_points(Configuration(delta.lines), delta.section, fld)
            return self._forms_through(list(pts), m, fld) - sub

        return self._consensus(f"curve_h0({m}h-Delta, deg {delta.degree})", compute)

    def _curve_inputs(self, d: Configuration) -> tuple[int, int, CurveDivisor]:
        delta = self.curve_divisor(d)
        deg = delta.degree
        h0_d = deg - 5 + self.curve_h0_twist(2, delta)
        h0_d_minus_c = deg - 10 + self.curve_h0_twist(3, delta)
        diag = dict(lines=d.lines, h0_C_D=h0_d, h0_C_DminusC=h0_d_minus_c)
        self.log.check("curve_nonnegative", h0_d >= 0 and h0_d_minus_c >= 0, "negative curve h0", **diag)
        self.log.check("curve_effective", h0_d >= 1, "effective divisor without sections", **diag)
        self.log.check("gonality_bound", h0_d < 2 or deg >= h0_d + 2, "deg < h0 + 2 with h0 >= 2", **diag)
        return h0_d, h0_d_minus_c, delta

    def curve_side_inputs(self, d) -> tuple[int, int]:
        """(h0(O_C(D)), h0(O_C(D - C))) through Riemann-Roch on the genus-6 curve."""
        d = _as_config(d)
        _require_reduced(d)
        h0_d, h0_d_minus_c, _ = self._curve_inputs(d)
        return h0_d, h0_d_minus_c

    # -- assembly ------------------------------------------------------------

    def oracle_bundle(self, d, *, checks: bool = True) -> OracleBundle:
        """Every side input of the classifier for a reduced configuration."""
        d = _as_config(d)
        _require_reduced(d)
        cls = d.divisor_class()
        profiles = self.acm_profiles(d)
        acm = all(p.h1 == 0 for p in profiles)
        h0_x_d = self.h0_plus(0, d)
        h0_x_d_minus_c = self.h0_plus(-1, d)
        initialized = h0_x_d_minus_c == 0
        h0_c_d, h0_c_d_minus_c, delta = self._curve_inputs(d)
        if checks:
            self.cross_checks(d)
            self.log.check(
                "initialized", initialized == (h0_x_d >= 1 and h0_x_d_minus_c == 0),
                "initialized flag inconsistent", lines=d.lines,
            )
        return OracleBundle(
            CD=intersect(DivisorClass.hyperplane(), cls),
            Pa=pa(cls),
            h0_C_D=h0_c_d,
            h0_C_DminusC=h0_c_d_minus_c,
            h0_X_2CminusD=self.h0_minus(2, d),
            h0_X_D=h0_x_d,
            h0_X_DminusC=h0_x_d_minus_c,
            acm=acm,
            initialized=initialized,
            profiles=tuple(profiles),
            hyperplane=delta.section.describe(),
        )


# ---------------------------------------------------------------------------
# module-level convenience wrappers over a shared default oracle

_DEFAULT: Oracle | None = None


def default_oracle() -> Oracle:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = Oracle()
    return _DEFAULT


def h0_minus(l: int, d: Iterable[int] | Configuration) -> int:
    return default_oracle().h0_minus(l, d)


def h0_plus(l: int, d: Iterable[int] | Configuration) -> int:
    return default_oracle().h0_plus(l, d)


def profile(l: int, sign: str, d: Iterable[int] | Configuration) -> CohomologyProfile:
    return default_oracle().profile(l, sign, d)


def acm_decide(d: Iterable[int] | Configuration) -> bool:
    return default_oracle().acm_decide(d)


def initialized_check(d: Iterable[int] | Configuration) -> bool:
    return default_oracle().initialized_check(d)


def curve_h0_twist(m: int, delta: CurveDivisor | None) -> int:
    return default_oracle().curve_h0_twist(m, delta)


def curve_side_inputs(d: Iterable[int] | Configuration) -> tuple[int, int]:
    return default_oracle().curve_side_inputs(d)


def oracle_bundle(d: Sequence[int] | Configuration) -> OracleBundle:
    return default_oracle().oracle_bundle(d)
