"""Command-line interface: ``quintic-acm lines | classify | cohomology | scan | verify-paper``.

Every option can also be set through an environment variable named
``QUINTIC_ACM_<COMMAND>_<OPTION>``, e.g. ``QUINTIC_ACM_SCAN_SEED=7``.
"""

from __future__ import annotations

import json
import sys

import click

from .classifier import ABSENT, AbsentInputError, ClassifierInput, classify
from .cohomology import InconsistencyError, Oracle, OracleConfig
from .fermat import Configuration, line_table_text
from .fields import DEFAULT_PRIMES
from .lattice import NUM_LINES, k_invariant, self_intersection, window_bound
from .scan import ScanSpec, classifier_input, run_scan, summary_table

ENV_PREFIX = "QUINTIC_ACM"

LINE_INDEX_HELP = (
    "Lines are indexed 25*pairing + 5*a + b for the line "
    "{x_i + z^a x_j = 0, x_k + z^b x_l = 0}, pairings (01|23), (02|13), (03|12), "
    "z a fixed primitive 5th root of unity."
)


def _parse_lines(text: str) -> tuple[int, ...]:
    try:
        out = tuple(int(t) for t in text.replace(" ", "").split(",") if t)
    except ValueError:
        raise click.BadParameter(f"expected comma-separated line indices, got {text!r}")
    for i in out:
        if not 0 <= i < NUM_LINES:
            raise click.BadParameter(f"line index {i} outside 0..{NUM_LINES - 1}")
    if len(set(out)) != len(out):
        raise click.BadParameter("configuration must be reduced (no repeated lines)")
    if not out:
        raise click.BadParameter("configuration must be non-empty")
    return out


def _parse_size(text: str) -> tuple[int, int]:
    for sep in ("..", "-", ":"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            return int(lo), int(hi)
    return int(text), int(text)


def _parse_primes(text: str | None) -> tuple[int, ...]:
    if not text:
        return DEFAULT_PRIMES
    return tuple(int(t) for t in text.split(",") if t)


def field_options(f):
    f = click.option("--hyperplane-seed", type=int, default=0, show_default=True,
                     help="Seed of the validated hyperplane section.")(f)
    f = click.option("--primes", default=None,
                     help="Comma-separated primes = 1 mod 5 for modular mode.")(f)
    f = click.option("--field", "field_mode", type=click.Choice(["modular", "exact"]), default="modular",
                     show_default=True, help="Coefficient field backend.")(f)
    return f


def _config(field_mode, primes, hyperplane_seed) -> OracleConfig:
    try:
        return OracleConfig(field_mode, _parse_primes(primes), hyperplane_seed)
    except ValueError as exc:
        raise click.BadParameter(str(exc))


@click.group(help=__doc__ + "\n" + LINE_INDEX_HELP, context_settings={"auto_envvar_prefix": ENV_PREFIX})
@click.version_option(package_name="artifact")
def main():
    pass


@main.command("lines", help="Print the 75 lines with pairings, exponents and incidence rows.\n\n" + LINE_INDEX_HELP)
@click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of a tab-separated table.")
def cmd_lines(as_json):
    text = line_table_text()
    if as_json:
        rows = text.splitlines()[1:]
        out = []
        for row in rows:
            idx, pairing, a, b, inc = row.split("\t")
            out.append({"index": int(idx), "pairing": pairing, "a": int(a), "b": int(b), "incidence": inc})
        click.echo(json.dumps(out, indent=1))
    else:
        click.echo(text)


@main.command("classify", help="Oracle bundle and classifier verdict for a configuration.\n\n"
              "LINES is a comma-separated list of line indices. Without LINES, --cd and --pa "
              "(plus any side inputs) classify manually entered data for any smooth quintic.")
@click.argument("lines", required=False)
@click.option("--cd", type=int, default=None, help="Override C.D.")
@click.option("--pa", type=int, default=None, help="Override p_a(D).")
@click.option("--h0-c-d", type=int, default=None, help="Override h0(O_C(D)).")
@click.option("--h0-c-dminusc", type=int, default=None, help="Override h0(O_C(D-C)).")
@click.option("--h0-x-2cminusd", type=int, default=None, help="Override h0(O_X(2C-D)).")
@field_options
def cmd_classify(lines, cd, pa, h0_c_d, h0_c_dminusc, h0_x_2cminusd, field_mode, primes, hyperplane_seed):
    record: dict = {}
    overrides = {"CD": cd, "Pa": pa, "h0_C_D": h0_c_d, "h0_C_DminusC": h0_c_dminusc,
                 "h0_X_2CminusD": h0_x_2cminusd}
    if lines:
        config = _parse_lines(lines)
        oracle = Oracle(_config(field_mode, primes, hyperplane_seed))
        try:
            bundle = oracle.oracle_bundle(config)
        except InconsistencyError as exc:
            click.echo(json.dumps({"lines": list(config), "error": str(exc)}, indent=1, default=str))
            sys.exit(3)
        base = classifier_input(bundle).__dict__.copy()
        record.update({"lines": list(config), "bundle": bundle.as_dict(),
                       "hyperplane": bundle.hyperplane})
    else:
        if cd is None or pa is None:
            raise click.UsageError("give LINES or both --cd and --pa")
        base = {k: ABSENT for k in overrides}
    for key, val in overrides.items():
        if val is not None:
            base[key] = val
    data = ClassifierInput(**base)
    try:
        verdict = classify(data)
    except AbsentInputError as exc:
        raise click.UsageError(str(exc))
    record.update({
        "k": data.k,
        "verdict": {"accepted": verdict.accepted, "trace": [[c, ok] for c, ok in verdict.clause_trace]},
    })
    if lines:
        expected = bundle.acm and bundle.initialized
        record["oracle_accepted"] = expected
        record["agreement"] = verdict.accepted == expected
    click.echo(json.dumps(record, indent=1, default=str))


@main.command("cohomology", help="Cohomology profiles h0/h1/h2 of O_X(lC - D) and O_X(lC + D).")
@click.argument("lines")
@click.option("--twist", "twists", type=int, multiple=True,
              help="Twist l (repeatable); defaults to the aCM window 0..window_bound.")
@click.option("--sign", type=click.Choice(["-", "+", "both"]), default="both", show_default=True)
@field_options
def cmd_cohomology(lines, twists, sign, field_mode, primes, hyperplane_seed):
    config = Configuration(_parse_lines(lines))
    oracle = Oracle(_config(field_mode, primes, hyperplane_seed))
    cls = config.divisor_class()
    twists = twists or tuple(range(window_bound(config.degree) + 1))
    signs = ("-", "+") if sign == "both" else (sign,)
    click.echo(f"D = {list(config.lines)}  C.D = {config.degree}  D^2 = {self_intersection(cls)}  "
               f"k = {k_invariant(cls)}  window = 0..{window_bound(config.degree)}")
    click.echo(f"{'twist':>8} {'h0':>4} {'h1':>4} {'h2':>4} {'chi':>5}  provenance")
    try:
        for s in signs:
            for l in twists:
                p = oracle.profile(l, s, config)
                tags = " ".join(f"{k}:{v}" for k, v in p.provenance.items())
                click.echo(f"{p.twist:>8} {p.h0:>4} {p.h1:>4} {p.h2:>4} {p.chi:>5}  {tags}")
    except InconsistencyError as exc:
        click.echo(f"internal inconsistency: {exc}", err=True)
        sys.exit(3)


@main.command("scan", help="Classifier-versus-oracle scan; exit status 1 on any disagreement "
              "or internal-consistency failure.")
@click.option("--size", default="1", show_default=True, help="Configuration size or range, e.g. 3 or 4-10.")
@click.option("--sample", type=int, default=None, help="Number of seeded random configurations.")
@click.option("--seed", type=int, default=0, show_default=True, help="Sampling seed.")
@field_options
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write the JSON report here.")
@click.option("--override-exhaustive-limit", is_flag=True, help="Allow exhaustive scans beyond size 3.")
@click.option("--jobs", type=int, default=1, show_default=True, help="Worker processes.")
@click.option("--quiet", is_flag=True, help="Suppress progress output.")
def cmd_scan(size, sample, seed, field_mode, primes, hyperplane_seed, out, override_exhaustive_limit, jobs, quiet):
    lo, hi = _parse_size(size)
    cfg = _config(field_mode, primes, hyperplane_seed)
    try:
        spec = ScanSpec(lo, hi, sample, seed, cfg.mode, cfg.primes, cfg.hyperplane_seed,
                        override_exhaustive_limit, jobs)
    except ValueError as exc:
        raise click.BadParameter(str(exc))

    def progress(done, total):
        if not quiet:
            click.echo(f"  {done}/{total}", err=True)

    report = run_scan(spec, progress=progress)
    if out:
        with open(out, "w") as fh:
            fh.write(report.dumps())
    click.echo(summary_table(report))
    if report.disagreements:
        click.echo("disagreements: " + json.dumps([r["lines"] for r in report.disagreements]))
    for r in report.failures:
        click.echo(f"consistency failure {r['lines']}: {r['error']}")
    sys.exit(report.exit_status)


@main.command("verify-paper", help="Run the named property suites; exit status 1 if any fails.")
@click.option("--suite", "suites", multiple=True, help="Suite name (repeatable); default all.")
@click.option("--sample", type=int, default=300, show_default=True,
              help="Random configurations of 3-10 lines added to the exhaustive sizes 1-2.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--full", is_flag=True, help="Scan size 3 exhaustively as well.")
@field_options
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write suite results as JSON.")
def cmd_verify_paper(suites, sample, seed, full, field_mode, primes, hyperplane_seed, out):
    from .verify import SUITES, VerifyContext, run_suites

    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        raise click.BadParameter(f"unknown suites {unknown}; choose from {sorted(SUITES)}")
    ctx = VerifyContext(sample=sample, seed=seed, full=full, config=_config(field_mode, primes, hyperplane_seed))
    results = run_suites(ctx, list(suites) or None)
    width = max(len(r.name) for r in results)
    for r in results:
        click.echo(f"{r.name:<{width}}  {r.status():<15} checked={r.checked}")
        for cx in r.counterexamples:
            click.echo(f"    counterexample: {cx}")
    if out:
        with open(out, "w") as fh:
            json.dump([r.as_dict() for r in results], fh, indent=1, sort_keys=True, default=str)
    sys.exit(0 if all(r.passed for r in results) else 1)


if __name__ == "__main__":
    main()
