"""Classifier-versus-oracle scans over line configurations of the Fermat quintic."""

from __future__ import annotations

import itertools
import json
import platform
import random
from collections import Counter
from dataclasses import asdict, dataclass, field
from math import comb
from typing import Callable, Iterable, Sequence

import numpy as np

from . import __version__
from .classifier import ClassifierInput, Verdict, classify, necessary_ranges
from .cohomology import ConsistencyLog, InconsistencyError, Oracle, OracleBundle, OracleConfig
from .fermat import Configuration, connected_components, generic_hyperplane, line_intersection_matrix
from .fields import DEFAULT_PRIMES
from .lattice import NUM_LINES, self_intersection

__all__ = [
    "EXHAUSTIVE_LIMIT",
    "ScanSpec",
    "ScanReport",
    "classifier_input",
    "evaluate",
    "configurations",
    "run_scan",
    "summary_table",
]

EXHAUSTIVE_LIMIT = 3
SCHEMA_VERSION = 1
PROVENANCE_LEGEND = {
    "h0 of lC-D": "IDEAL-DIM",
    "h2 of lC-D": "SERRE+RESIDUAL",
    "h1": "RR",
}


@dataclass(frozen=True)
class ScanSpec:
    min_size: int = 1
    max_size: int = 1
    sample: int | None = None
    seed: int = 0
    field_mode: str = "modular"
    primes: tuple[int, ...] = DEFAULT_PRIMES
    hyperplane_seed: int = 0
    override_exhaustive_limit: bool = False
    jobs: int = 1

    def __post_init__(self):
        if not 1 <= self.min_size <= self.max_size <= NUM_LINES:
            raise ValueError(f"bad size range {self.min_size}..{self.max_size}")
        if self.sample is None and self.max_size > EXHAUSTIVE_LIMIT and not self.override_exhaustive_limit:
            raise ValueError(
                f"exhaustive scans are limited to size <= {EXHAUSTIVE_LIMIT}; "
                "use --sample or --override-exhaustive-limit"
            )
        if self.sample is not None and self.sample < 1:
            raise ValueError("sample count must be positive")

    @property
    def mode(self) -> str:
        return "exhaustive" if self.sample is None else "sample"

    def oracle_config(self) -> OracleConfig:
        return OracleConfig(self.field_mode, tuple(self.primes), self.hyperplane_seed)

    def describe(self) -> dict:
        out = {
            "sizes": [self.min_size, self.max_size],
            "mode": self.mode,
            "field": self.oracle_config().describe(),
        }
        if self.sample is not None:
            out["sample"] = self.sample
            out["seed"] = self.seed
        return out


def classifier_input(bundle: OracleBundle) -> ClassifierInput:
    return ClassifierInput(
        CD=bundle.CD,
        Pa=bundle.Pa,
        h0_C_D=bundle.h0_C_D,
        h0_C_DminusC=bundle.h0_C_DminusC,
        h0_X_2CminusD=bundle.h0_X_2CminusD,
    )


def _verdict_dict(v: Verdict) -> dict:
    return {"accepted": v.accepted, "trace": [[cid, ok] for cid, ok in v.clause_trace]}


def evaluate(oracle: Oracle, lines: Sequence[int]) -> dict:
    """One scan record: lattice data, profiles, oracle bundle, verdict, agreement."""
    d = Configuration(lines)
    cls = d.divisor_class()
    record = {
        "lines": list(d.lines),
        "CD": d.degree,
        "D2": self_intersection(cls),
        "components": connected_components(d),
    }
    try:
        bundle = oracle.oracle_bundle(d)
    except InconsistencyError as exc:
        record.update({"error": str(exc), "diagnostics": _jsonable(exc.diagnostics), "agreement": False})
        return record
    verdict = classify(classifier_input(bundle))
    expected = bundle.acm and bundle.initialized
    record.update(
        {
            "Pa": bundle.Pa,
            "k": bundle.CD + 1 - bundle.Pa,
            "profiles": [
                {"twist": p.twist, "h": [p.h0, p.h1, p.h2], "chi": p.chi} for p in bundle.profiles
            ],
            "bundle": bundle.as_dict(),
            "verdict": _verdict_dict(verdict),
            "oracle": {"acm": bundle.acm, "initialized": bundle.initialized, "accepted": expected},
            "agreement": verdict.accepted == expected,
            "hyperplane_seed": bundle.hyperplane.get("seed"),
        }
    )
    return record


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


# ---------------------------------------------------------------------------
# configuration sources


def _connected_sample(rng: random.Random, size: int, adjacency: list[list[int]]) -> tuple[int, ...]:
    """Grow a configuration by repeatedly adding a line meeting the current set."""
    chosen = [rng.randrange(NUM_LINES)]
    while len(chosen) < size:
        frontier = sorted({j for i in chosen for j in adjacency[i]} - set(chosen))
        if not frontier:
            frontier = sorted(set(range(NUM_LINES)) - set(chosen))
        chosen.append(rng.choice(frontier))
    return tuple(sorted(chosen))


def _dense_sample(rng: random.Random, size: int, adjacency: list[list[int]]) -> tuple[int, ...]:
    """Grow a configuration favouring lines that meet many chosen lines."""
    chosen = [rng.randrange(NUM_LINES)]
    while len(chosen) < size:
        hits = Counter(j for i in chosen for j in adjacency[i] if j not in chosen)
        if not hits:
            pool = sorted(set(range(NUM_LINES)) - set(chosen))
            chosen.append(rng.choice(pool))
            continue
        pool = sorted(hits)
        chosen.append(rng.choices(pool, weights=[hits[j] ** 3 for j in pool])[0])
    return tuple(sorted(chosen))


def configurations(spec: ScanSpec) -> list[tuple[int, ...]]:
    """Canonically sorted configurations of the scan.

    Sampling cycles through uniform draws, connected growth along the
    incidence graph and dense growth favouring lines that meet many chosen
    ones. Uniform draws of many lines almost never reach small k.
    """
    sizes = range(spec.min_size, spec.max_size + 1)
    if spec.sample is None:
        out = [c for n in sizes for c in itertools.combinations(range(NUM_LINES), n)]
        return out
    total = sum(comb(NUM_LINES, n) for n in sizes)
    if spec.sample > total:
        raise ValueError(f"sample of {spec.sample} exceeds the {total} configurations in range")
    M = line_intersection_matrix()
    adjacency = [[j for j in range(NUM_LINES) if M[i, j] == 1] for i in range(NUM_LINES)]
    rng = random.Random(spec.seed)
    seen: set[tuple[int, ...]] = set()
    draw = 0
    while len(seen) < spec.sample:
        size = rng.randint(spec.min_size, spec.max_size)
        strategy = draw % 3
        if strategy == 0:
            c = tuple(sorted(rng.sample(range(NUM_LINES), size)))
        elif strategy == 1:
            c = _connected_sample(rng, size, adjacency)
        else:
            c = _dense_sample(rng, size, adjacency)
        draw += 1
        seen.add(c)
    return sorted(seen, key=lambda c: (len(c), c))


# ---------------------------------------------------------------------------
# running


@dataclass
class ScanReport:
    spec: ScanSpec
    records: list[dict]
    log: ConsistencyLog
    hyperplanes: list[dict] = field(default_factory=list)

    @property
    def disagreements(self) -> list[dict]:
        return [r for r in self.records if not r.get("agreement", False) and "error" not in r]

    @property
    def failures(self) -> list[dict]:
        return [r for r in self.records if "error" in r]

    @property
    def accepted(self) -> list[dict]:
        return [r for r in self.records if r.get("oracle", {}).get("accepted")]

    @property
    def exit_status(self) -> int:
        return 0 if not self.disagreements and not self.failures else 1

    def cells(self) -> dict[tuple[int, int], dict]:
        """Counts per (k, C.D) cell."""
        table: dict[tuple[int, int], Counter] = {}
        for r in self.records:
            if "error" in r:
                continue
            cell = table.setdefault((r["k"], r["CD"]), Counter())
            cell["count"] += 1
            cell["oracle_accepted"] += int(r["oracle"]["accepted"])
            cell["classifier_accepted"] += int(r["verdict"]["accepted"])
            cell["disagreements"] += int(not r["agreement"])
        return {key: dict(val) for key, val in sorted(table.items())}

    def anomalies(self) -> dict:
        """Statements expected to hold on every accepted record."""
        outside_table, over_bound, curve_vanishing = [], [], []
        for r in self.accepted:
            if r["CD"] not in necessary_ranges(r["Pa"] - r["CD"]):
                outside_table.append(r["lines"])
            if r["bundle"]["h0_X_D"] > 5:
                over_bound.append(r["lines"])
            if r["k"] in (3, 4) and r["bundle"]["h0_C_DminusC"] != 0:
                curve_vanishing.append(r["lines"])
        return {
            "outside_necessary_ranges": outside_table,
            "h0_above_five": over_bound,
            "k34_nonzero_h0_C_DminusC": curve_vanishing,
        }

    def summary(self) -> dict:
        return {
            "records": len(self.records),
            "oracle_accepted": len(self.accepted),
            "cells": [
                {"k": k, "CD": cd, **counts} for (k, cd), counts in self.cells().items()
            ],
            "disagreements": [r["lines"] for r in self.disagreements],
            "consistency_failures": [{"lines": r["lines"], "error": r["error"]} for r in self.failures],
            "consistency": self.log.summary(),
            "anomalies": self.anomalies(),
        }

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "environment": {
                "package_version": __version__,
                "python": platform.python_version(),
                "numpy": np.__version__,
                "spec": self.spec.describe(),
                "hyperplanes": self.hyperplanes,
                "zeta": "fixed primitive 5th root of unity; in F_p the image is g^((p-1)/5) for the least g giving a root != 1",
                "line_index": "25 * pairing + 5 * a + b; pairings (01|23), (02|13), (03|12)",
                "provenance": PROVENANCE_LEGEND,
            },
            "summary": self.summary(),
            "records": self.records,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)


def _evaluate_chunk(args) -> tuple[list[dict], dict, list]:
    config, chunk = args
    oracle = Oracle(config)
    records = [evaluate(oracle, c) for c in chunk]
    return records, dict(oracle.log.checks), oracle.log.escalations


def run_scan(
    spec: ScanSpec,
    configs: Iterable[Sequence[int]] | None = None,
    progress: Callable[[int, int], None] | None = None,
    oracle: Oracle | None = None,
) -> ScanReport:
    """Evaluate every configuration of ``spec`` (or the given ones)."""
    configs = list(configs) if configs is not None else configurations(spec)
    log = ConsistencyLog()
    records: list[dict] = []
    if spec.jobs > 1 and oracle is None:
        from concurrent.futures import ProcessPoolExecutor

        size = max(1, len(configs) // (spec.jobs * 8))
        chunks = [configs[i:i + size] for i in range(0, len(configs), size)]
        with ProcessPoolExecutor(spec.jobs) as pool:
            for recs, checks, esc in pool.map(_evaluate_chunk, [(spec.oracle_config(), c) for c in chunks]):
                records.extend(recs)
                log.checks.update(checks)
                log.escalations.extend(esc)
                if progress:
                    progress(len(records), len(configs))
    else:
        oracle = oracle or Oracle(spec.oracle_config())
        before = ConsistencyLog(Counter(oracle.log.checks), list(oracle.log.escalations))
        for n, c in enumerate(configs, 1):
            records.append(evaluate(oracle, c))
            if progress and (n % 500 == 0 or n == len(configs)):
                progress(n, len(configs))
        log.checks = oracle.log.checks - before.checks
        log.escalations = oracle.log.escalations[len(before.escalations):]
    records.sort(key=lambda r: (len(r["lines"]), r["lines"]))
    primes = spec.primes if spec.field_mode == "modular" else DEFAULT_PRIMES
    seeds = sorted({r["hyperplane_seed"] for r in records if r.get("hyperplane_seed") is not None})
    hyperplanes = [generic_hyperplane(s, primes=tuple(primes)).describe() for s in seeds]
    return ScanReport(spec, records, log, hyperplanes)


def summary_table(report: ScanReport) -> str:
    """Aligned text table of the (k, C.D) cells."""
    header = ("k", "CD", "count", "oracle_acc", "classifier_acc", "disagree")
    rows = [header]
    for (k, cd), c in report.cells().items():
        rows.append(
            (k, cd, c.get("count", 0), c.get("oracle_accepted", 0), c.get("classifier_accepted", 0), c.get("disagreements", 0))
        )
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(header))]
    lines = ["  ".join(str(v).rjust(w) for v, w in zip(r, widths)) for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    lines.append("")
    lines.append(
        f"records={len(report.records)} accepted={len(report.accepted)} "
        f"disagreements={len(report.disagreements)} failures={len(report.failures)} "
        f"escalations={len(report.log.escalations)}"
    )
    return "\n".join(lines)
