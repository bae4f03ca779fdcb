"""Named property suites over the lattice, the line model and the oracle.

Each suite returns a ``SuiteResult`` with the number of instances checked and
the counterexamples found. Suites share one oracle and one scan so profiles
are computed once.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import comb
from typing import Callable

import numpy as np

from .classifier import (
    DegreeTwoStructure,
    classify,
    degree_one_trichotomy,
    degree_two_structure,
    dichotomy_check,
    necessary_ranges,
)
from .cohomology import Oracle, OracleConfig
from .fermat import (
    Configuration,
    connected_components,
    enumerate_lines,
    incidence,
    incidence_rank_test,
    line_index,
    min_decomposition_pairing,
    residual_assignment,
    restrict_points,
    special_planes,
)
from .fields import ModularField
from .lattice import NUM_LINES, DivisorClass, chi, intersect, pa, self_intersection, window_bound
from .linalg import formspace_dim
from .scan import ScanReport, ScanSpec, classifier_input, run_scan

__all__ = ["SuiteResult", "VerifyContext", "SUITES", "run_suites", "ulrich_search"]

DISJOINT_PAIR = (line_index(0, 0, 0), line_index(1, 0, 1))


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    counterexamples: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    vacuous: bool = False

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def expect(self, ok: bool, witness) -> None:
        self.checked += 1
        if not ok and len(self.counterexamples) < 20:
            self.counterexamples.append(witness)
        elif not ok:
            self.details["more_counterexamples"] = self.details.get("more_counterexamples", 0) + 1

    def status(self) -> str:
        if not self.passed:
            return "FAIL"
        return "PASS (vacuous)" if self.vacuous else "PASS"

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status(),
            "checked": self.checked,
            "details": self.details,
            "counterexamples": self.counterexamples,
        }


class VerifyContext:
    """Shared oracle and scan for the suites."""

    def __init__(self, *, sample: int = 300, seed: int = 0, full: bool = False,
                 config: OracleConfig | None = None):
        self.oracle = Oracle(config or OracleConfig())
        self.seed = seed
        self.sample = sample
        self.full = full
        self._scan: ScanReport | None = None

    @property
    def scan(self) -> ScanReport:
        if self._scan is None:
            cfg = self.oracle.config
            top = 3 if self.full else 2
            base = run_scan(ScanSpec(1, top, field_mode=cfg.mode, primes=cfg.primes,
                                     hyperplane_seed=cfg.hyperplane_seed), oracle=self.oracle)
            extra = run_scan(ScanSpec(3 if not self.full else 4, 10, sample=self.sample, seed=self.seed,
                                      field_mode=cfg.mode, primes=cfg.primes,
                                      hyperplane_seed=cfg.hyperplane_seed), oracle=self.oracle)
            base.records.extend(extra.records)
            base.log.merge(extra.log)
            self._scan = base
        return self._scan

    def records(self) -> list[dict]:
        return [r for r in self.scan.records if "error" not in r]


# ---------------------------------------------------------------------------
# lattice and line model


def suite_lattice_identities(ctx: VerifyContext) -> SuiteResult:
    res = SuiteResult("lattice identities")
    rng = random.Random(ctx.seed)
    c = DivisorClass.hyperplane()
    classes = [DivisorClass(rng.randint(-2, 2), tuple(rng.choice((0, 0, 0, 0, 1, -1, 2)) for _ in range(NUM_LINES)))
               for _ in range(60)]
    for d1 in classes:
        d = intersect(d1, d1)
        res.expect(intersect(d1, d1 + c) % 2 == 0 and intersect(d1, d1 - c) % 2 == 0, ("parity", repr(d1)))
        res.expect(2 * pa(d1) - 2 == intersect(d1, c + d1), ("adjunction", repr(d1)))
        res.expect(chi(d1) == (d - intersect(d1, c)) // 2 + 5, ("chi", repr(d1)))
    for d1, d2 in itertools.combinations(classes[:30], 2):
        res.expect(pa(d1 + d2) == pa(d1) + pa(d2) + intersect(d1, d2) - 1, ("genus additivity", repr(d1), repr(d2)))
    positive = [x for x in classes + [c, c * 2] if intersect(x, x) > 0]
    for d1, d2 in itertools.combinations(positive, 2):
        res.expect(intersect(d1, d2) ** 2 >= intersect(d1, d1) * intersect(d2, d2), ("hodge index", repr(d1), repr(d2)))
    res.details["positive_pairs"] = comb(len(positive), 2)
    return res


def suite_line_model(ctx: VerifyContext) -> SuiteResult:
    res = SuiteResult("Fermat line model")
    lines = enumerate_lines()
    res.expect(len(lines) == 75, ("line count", len(lines)))
    planes = special_planes()
    res.expect(len(planes) == 30 and all(len(p.lines()) == 5 for p in planes), "30 planes of 5 lines")
    per_line = np.zeros(NUM_LINES, dtype=int)
    for p in planes:
        for i in p.lines():
            per_line[i] += 1
    res.expect(bool((per_line == 2).all()), "each line in two planes")
    fld = ModularField(ctx.oracle.config.primes[0])
    for a, b in itertools.combinations(range(NUM_LINES), 2):
        res.expect(incidence(a, b) == incidence_rank_test(a, b, fld), ("incidence", a, b))
    for i in range(NUM_LINES):
        res.expect(intersect(DivisorClass.line(i), DivisorClass.line(i)) == -3, ("self-intersection", i))
    for r in ctx.records()[:3000]:
        d = Configuration(r["lines"])
        if r["components"] == 1 and d.degree > 1:
            res.expect(min_decomposition_pairing(d) >= 1, ("connected implies 1-connected", r["lines"]))
        residual_assignment(d)  # raises on an intersection-vector mismatch
    return res


def suite_ideal_dimensions(ctx: VerifyContext) -> SuiteResult:
    res = SuiteResult("ideal dimension monotonicity")
    o = ctx.oracle
    rng = random.Random(ctx.seed + 1)
    for _ in range(25):
        lines = rng.sample(range(NUM_LINES), rng.randint(1, 5))
        for n in range(0, 6):
            a, b = o.ideal_dim(Configuration(lines), n), o.ideal_dim(Configuration(lines), n + 1)
            res.expect(a <= b, ("degree", lines, n))
            fewer = o.ideal_dim(Configuration(lines[:-1]), n)
            res.expect(fewer >= a, ("adding lines", lines, n))
            doubled = o.ideal_dim({**{i: 1 for i in lines}, lines[0]: 2}, n)
            res.expect(doubled <= a, ("multiplicity", lines, n))
    return res


# ---------------------------------------------------------------------------
# surface statements


def suite_disjoint_pair(ctx: VerifyContext) -> SuiteResult:
    res = SuiteResult("disjoint line pair example")
    o = ctx.oracle
    d1, d2 = DISJOINT_PAIR
    c = DivisorClass.hyperplane()
    D = Configuration(DISJOINT_PAIR)
    bundle = o.oracle_bundle(D)
    verdict = classify(classifier_input(bundle))
    facts = {
        "D1.D2": intersect(DivisorClass.line(d1), DivisorClass.line(d2)),
        "C.D1": intersect(c, DivisorClass.line(d1)),
        "C.D2": intersect(c, DivisorClass.line(d2)),
        "components": connected_components(D),
        "h1(-D)": o.profile(0, "-", D).h1,
        "min_decomposition_pairing": min_decomposition_pairing(D),
        "oracle_accepts": bundle.acm and bundle.initialized,
        "classifier_accepts": verdict.accepted,
    }
    res.details = facts
    expected = {"D1.D2": 0, "C.D1": 1, "C.D2": 1, "components": 2, "h1(-D)": 1,
                "min_decomposition_pairing": 0, "oracle_accepts": False, "classifier_accepts": False}
    for key, val in expected.items():
        res.expect(facts[key] == val, (key, facts[key], val))
    return res


def _trichotomy(o: Oracle, m: DivisorClass):
    prof = o.class_profile(m)
    h0_c_minus = o.h0_class(DivisorClass.hyperplane() - m)
    return degree_one_trichotomy(intersect(DivisorClass.hyperplane(), m), self_intersection(m), prof.h0, h0_c_minus, prof.h1)


def suite_degree_one(ctx: VerifyContext) -> SuiteResult:
    res = SuiteResult("degree-one trichotomy")
    o = ctx.oracle
    counts = {"lines": 0, "L+L'-L''": 0, "C-4 lines": 0, "all_hold": 0}
    for i in range(NUM_LINES):
        t = _trichotomy(o, DivisorClass.line(i))
        res.expect(t.a and t.b and t.c, ("line", i, t))
        counts["lines"] += 1
        counts["all_hold"] += t.a
    rng = random.Random(ctx.seed + 2)
    for _ in range(40):
        a, b, c = rng.sample(range(NUM_LINES), 3)
        m = DivisorClass.line(a) + DivisorClass.line(b) - DivisorClass.line(c)
        t = _trichotomy(o, m)
        res.expect(t.consistent, ("L+L'-L''", (a, b, c), t))
        counts["L+L'-L''"] += 1
        counts["all_hold"] += t.a
    quads = [tuple(p.lines()[:4]) for p in special_planes()[:6]]
    quads += [tuple(rng.sample(range(NUM_LINES), 4)) for _ in range(30)]
    for q in quads:
        m = DivisorClass.hyperplane() - DivisorClass.from_lines(q)
        t = _trichotomy(o, m)
        res.expect(t.consistent, ("C-4 lines", q, t))
        counts["C-4 lines"] += 1
        counts["all_hold"] += t.a
    res.details = counts
    return res


def suite_degree_two(ctx: VerifyContext) -> SuiteResult:
    res = SuiteResult("degree-two structure")
    pairing = lambda x, y: intersect(DivisorClass.line(x), DivisorClass.line(y))
    tally = {s.name: 0 for s in DegreeTwoStructure}
    for i in range(NUM_LINES):
        r = degree_two_structure({i: 2}, pairing)
        res.expect(r.structure is DegreeTwoStructure.CASE_A and r.self_intersection == -12 and r.equivalence_holds,
                   ("double line", i, r))
        tally[r.structure.name] += 1
    for a, b in itertools.combinations(range(NUM_LINES), 2):
        r = degree_two_structure({a: 1, b: 1}, pairing)
        res.expect(r.equivalence_holds and r.self_intersection == self_intersection(DivisorClass.from_lines((a, b))),
                   ("pair", a, b, r))
        tally[r.structure.name] += 1
    res.details = tally
    return res


def suite_hyperplane_vanishing(ctx: VerifyContext) -> SuiteResult:
    res = SuiteResult("no hyperplane through large configurations")
    o = ctx.oracle
    for r in ctx.records():
        k = r["k"]
        if 0 <= k <= 4 and r["CD"] >= 7 - k:
            res.expect(o.h0_minus(1, r["lines"]) == 0, ("h0(C-D) != 0", r["lines"], k))
    res.vacuous = res.checked == 0
    return res


def suite_genus_nonnegative(ctx: VerifyContext) -> SuiteResult:
    res = SuiteResult("h1(-D) = 0 forces p_a >= 0")
    for r in ctx.records():
        if r["profiles"][0]["h"][1] == 0:
            res.expect(r["Pa"] >= 0, (r["lines"], r["Pa"]))
    return res


def _extra(o: Oracle, lines) -> dict:
    plus = o.profile(0, "+", lines)
    return {"h1_D": plus.h1, "h0_D_minus_C": o.h0_plus(-1, lines), "h1_minus_D": o.profile(0, "-", lines).h1}


def suite_connectedness_dichotomy(ctx: VerifyContext) -> SuiteResult:
    res = SuiteResult("connectedness dichotomy")
    o = ctx.oracle
    skipped = 0
    for r in ctx.records():
        x = _extra(o, r["lines"])
        two_disjoint = r["CD"] == 2 and r["components"] == 2
        out = dichotomy_check(x["h1_minus_D"], two_disjoint, x["h0_D_minus_C"], x["h1_D"])
        if out is None:
            skipped += 1
            continue
        res.expect(out, (r["lines"], x))
        if r["CD"] == 3:
            res.expect(x["h1_minus_D"] == 0, ("three lines use the first branch", r["lines"], x))
    res.details["hypotheses_unmet"] = skipped
    return res


def suite_h1_transfer(ctx: VerifyContext) -> SuiteResult:
    res = SuiteResult("h1 vanishing transfers to -D when D^2 > -6")
    o = ctx.oracle
    for r in ctx.records():
        if r["D2"] <= -6:
            continue
        x = _extra(o, r["lines"])
        if x["h1_D"] == 0 and x["h0_D_minus_C"] == 0:
            res.expect(x["h1_minus_D"] == 0, (r["lines"], x))
    return res


def ulrich_search(o: Oracle, records: list[dict]) -> list[dict]:
    """Accepted k = 0 records, each with h0(D + tC) for t = 0, 1, 2."""
    out = []
    for r in records:
        if r.get("oracle", {}).get("accepted") and r["k"] == 0:
            out.append({"lines": r["lines"], "h0": [o.h0_plus(t, r["lines"]) for t in range(3)]})
    return out


def suite_section_bound(ctx: VerifyContext) -> SuiteResult:
    res = SuiteResult("section bound and Ulrich sections")
    accepted = [r for r in ctx.records() if r["oracle"]["accepted"]]
    for r in accepted:
        res.expect(r["bundle"]["h0_X_D"] <= 5, ("h0 > 5", r["lines"], r["bundle"]["h0_X_D"]))
    res.details["max_h0"] = max((r["bundle"]["h0_X_D"] for r in accepted), default=None)
    ulrich = ulrich_search(ctx.oracle, ctx.records())
    for u in ulrich:
        res.expect(u["h0"] == [5 * comb(t + 2, 2) for t in range(3)], ("Ulrich", u))
    res.details["ulrich"] = len(ulrich)
    res.details["ulrich_status"] = "checked" if ulrich else "vacuous"
    return res


def suite_finite_window(ctx: VerifyContext) -> SuiteResult:
    res = SuiteResult("finite aCM window")
    o = ctx.oracle
    acm = [r for r in ctx.records() if r["oracle"]["acm"]]
    for r in acm[:400]:
        wb = window_bound(r["CD"])
        for l in (wb + 1, wb + 2):
            res.expect(o.profile(l, "-", r["lines"]).h1 == 0, ("beyond window", r["lines"], l))
    res.details["acm_records"] = len(acm)
    return res


def suite_necessity_table(ctx: VerifyContext) -> SuiteResult:
    res = SuiteResult("necessary (p_a - C.D, C.D) ranges")
    for r in ctx.records():
        if r["oracle"]["accepted"] or r["verdict"]["accepted"]:
            res.expect(r["CD"] in necessary_ranges(r["Pa"] - r["CD"]), (r["lines"], r["Pa"] - r["CD"], r["CD"]))
    return res


def suite_curve_gonality(ctx: VerifyContext) -> SuiteResult:
    res = SuiteResult("plane quintic genus and gonality")
    o = ctx.oracle
    res.expect(o.curve_h0_twist(2, None) == 6, ("h0(K_C)", o.curve_h0_twist(2, None)))
    res.expect(o.curve_h0_twist(1, None) == 3, ("h0(O_C(1))", o.curve_h0_twist(1, None)))
    rng = random.Random(ctx.seed + 3)
    degrees = {2: 0, 3: 0, 4: 0}
    for deg in (2, 3):
        for _ in range(40):
            lines = rng.sample(range(NUM_LINES), deg)
            h0_d, _ = o.curve_side_inputs(lines)
            res.expect(h0_d == 1, ("degree", deg, lines, h0_d))
            degrees[deg] += 1
    for i in range(NUM_LINES):
        # h - p for the point p where line i meets C
        delta = o.curve_divisor([i])
        h0 = o.curve_h0_twist(1, delta)
        res.expect(h0 == 2 and 4 >= h0 + 2, ("hyperplane minus point", i, h0))
        degrees[4] += 1
    res.details = {"divisors_by_degree": degrees, "bound_checks": o.log.checks.get("gonality_bound", 0)}
    return res


def suite_oracle_consistency(ctx: VerifyContext) -> SuiteResult:
    res = SuiteResult("oracle internal consistency")
    o = ctx.oracle
    rng = random.Random(ctx.seed + 4)
    recs = ctx.records()
    for r in rng.sample(recs, min(60, len(recs))):
        lines = r["lines"]
        for l in range(0, 4):
            res.expect(o.h0_minus(l, lines) <= o.h0_minus(l + 1, lines), ("h0(lC-D) monotone", lines, l))
            res.expect(o.h0_plus(l - 1, lines) <= o.h0_plus(l, lines), ("h0(lC+D) monotone", lines, l))
        # Serre pairing of the computed profiles
        for l in range(-1, 3):
            p, q = o.profile(l, "-", lines), o.profile(1 - l, "+", lines)
            res.expect(p.h0 == q.h2 and p.h1 == q.h1 and p.h2 == q.h0, ("serre", lines, l))
        if r["oracle"]["acm"]:
            # chi(O_X(D)) = 5 - k and h1(D) = 0, so h0(D) = 5 - k - h0(C - D)
            res.expect(r["bundle"]["h0_X_D"] == 5 - r["k"] - o.h0_minus(1, lines), ("h0(D) = 5 - k - h0(C-D)", lines))
    res.details = o.log.summary()["checks"]
    res.details["escalations"] = len(o.log.escalations)
    res.expect(not ctx.scan.failures, ("scan consistency failures", [f["lines"] for f in ctx.scan.failures]))
    return res


def suite_classifier_agreement(ctx: VerifyContext) -> SuiteResult:
    res = SuiteResult("classifier agrees with oracle")
    for r in ctx.scan.records:
        res.expect(r.get("agreement", False), (r["lines"], r.get("verdict"), r.get("oracle"), r.get("error")))
    anomalies = ctx.scan.anomalies()
    res.details = {"records": len(ctx.scan.records), "accepted": len(ctx.scan.accepted), "anomalies": anomalies}
    for key, items in anomalies.items():
        for lines in items:
            res.expect(False, (key, lines))
    return res


SUITES: dict[str, Callable[[VerifyContext], SuiteResult]] = {
    "lattice": suite_lattice_identities,
    "lines": suite_line_model,
    "ideal-dims": suite_ideal_dimensions,
    "disjoint-pair": suite_disjoint_pair,
    "degree-one": suite_degree_one,
    "degree-two": suite_degree_two,
    "hyperplane-vanishing": suite_hyperplane_vanishing,
    "genus-nonnegative": suite_genus_nonnegative,
    "dichotomy": suite_connectedness_dichotomy,
    "h1-transfer": suite_h1_transfer,
    "section-bound": suite_section_bound,
    "window": suite_finite_window,
    "necessity": suite_necessity_table,
    "gonality": suite_curve_gonality,
    "consistency": suite_oracle_consistency,
    "agreement": suite_classifier_agreement,
}


def run_suites(ctx: VerifyContext, names: list[str] | None = None) -> list[SuiteResult]:
    names = names or list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suites: {unknown}")
    return [SUITES[n](ctx) for n in names]
