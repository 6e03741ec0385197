"""Command-line interface: ingestion, compatibility checks, reports, and the HTTP service."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import bench as bench_mod
from .elicitation import (ConstraintSystem, SortingSpec, check_ws_compatibility)
from .errors import HisortError, NotCompatible
from .hierarchy import CriterionHierarchy
from .parsimony import enumerate_minimal_sets
from .ror import assignment_report
from .smaa import aggregate_loss, compute_cai, sample_models
from .statements import load_statements
from .tables import PerformanceTable, normalize


def _fail(exc: Exception, as_json: bool, code: int):
    if as_json:
        click.echo(json.dumps({"error": type(exc).__name__, "message": str(exc)}))
    else:
        click.echo(f"error: {exc}", err=True)
    sys.exit(code)


def _guard(func, as_json: bool):
    try:
        return func()
    except NotCompatible as exc:
        _fail(exc, as_json, 2)
    except HisortError as exc:
        _fail(exc, as_json, 1)
    except (OSError, ValueError, KeyError) as exc:
        _fail(exc, as_json, 1)


def _load(data, hierarchy_path, classes):
    hierarchy = CriterionHierarchy.from_json(hierarchy_path)
    raw = PerformanceTable.from_csv(data)
    norm = normalize(raw, hierarchy)
    spec = SortingSpec.uniform(hierarchy, classes)
    return hierarchy, raw, norm, spec


def _write(text: str, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=not text.endswith("\n"))


data_opt = click.option("--data", required=True, type=click.Path(exists=True),
                        help="performance table CSV")
hier_opt = click.option("--hierarchy", "hierarchy_path", required=True,
                        type=click.Path(exists=True), help="criteria hierarchy JSON")
prefs_opt = click.option("--prefs", required=True, type=click.Path(exists=True),
                         help="preference statements JSON")
classes_opt = click.option("--classes", default=4, show_default=True,
                           help="classes per sorting node")
out_opt = click.option("--out", default=None, type=click.Path(), help="output file")
json_opt = click.option("--json", "as_json", is_flag=True, help="machine-readable output")


@click.group()
def main():
    """Hierarchical sorting with interacting criteria."""


@main.command(name="normalize")
@data_opt
@hier_opt
@out_opt
@json_opt
def normalize_cmd(data, hierarchy_path, out, as_json):
    """Rescale a raw table to the common [0, 1] scale."""

    def run():
        hierarchy = CriterionHierarchy.from_json(hierarchy_path)
        norm = normalize(PerformanceTable.from_csv(data), hierarchy)
        if as_json and not out:
            doc = {a: norm.row(a) for a in norm.alternatives}
            click.echo(json.dumps(doc, indent=2))
        else:
            target = out or "normalized.csv"
            norm.to_csv(target)
            if not as_json:
                click.echo(f"wrote {target}")

    _guard(run, as_json)


@main.command()
@data_opt
@hier_opt
@prefs_opt
@classes_opt
@click.option("--ws", is_flag=True, help="also check the weighted-sum baseline")
@json_opt
def check(data, hierarchy_path, prefs, classes, ws, as_json):
    """Compatibility of the statements: maximize the separation eps."""

    def run():
        hierarchy, _, norm, spec = _load(data, hierarchy_path, classes)
        statements = load_statements(prefs)
        cs = ConstraintSystem(hierarchy, spec, norm, statements)
        result = cs.check_compatibility()
        doc = {"compatible": result.compatible, "eps_star": result.epsilon_star}
        if ws:
            root_only = [s for s in statements
                         if getattr(s, "node", None) == hierarchy.root.id
                         and type(s).__name__ in ("AssignExact", "AssignInterval")]
            ws_result = check_ws_compatibility(root_only, spec, norm, hierarchy)
            doc["ws"] = {"compatible": ws_result.compatible,
                         "eps_star": ws_result.epsilon_star}
        if as_json:
            click.echo(json.dumps(doc, indent=2))
        else:
            click.echo(f"eps* = {result.epsilon_star}")
            click.echo("compatible" if result.compatible else "incompatible")
            if ws:
                click.echo(f"weighted-sum eps* = {doc['ws']['eps_star']} "
                           f"({'compatible' if doc['ws']['compatible'] else 'incompatible'})")
        if not result.compatible:
            sys.exit(2)

    _guard(run, as_json)


@main.command(name="minimal-sets")
@data_opt
@hier_opt
@prefs_opt
@classes_opt
@out_opt
@json_opt
def minimal_sets(data, hierarchy_path, prefs, classes, out, as_json):
    """Enumerate minimum-cardinality sets of interacting pairs and their core."""

    def run():
        hierarchy, _, norm, spec = _load(data, hierarchy_path, classes)
        cs = ConstraintSystem(hierarchy, spec, norm, load_statements(prefs))
        report = enumerate_minimal_sets(cs)
        _write(report.to_json(), out)

    _guard(run, as_json)


@main.command()
@data_opt
@hier_opt
@prefs_opt
@classes_opt
@out_opt
@json_opt
def ror(data, hierarchy_path, prefs, classes, out, as_json):
    """Necessary and possible class assignments over all compatible models."""

    def run():
        hierarchy, _, norm, spec = _load(data, hierarchy_path, classes)
        cs = ConstraintSystem(hierarchy, spec, norm, load_statements(prefs))
        report = assignment_report(cs)
        if as_json or out:
            _write(report.to_json(), out)
        else:
            for r in report.ranges:
                necessary = f" necessary C{r.necessary}" if r.necessary else ""
                click.echo(f"{r.node:>8} {r.alternative:<16} "
                           f"[C{r.at_least}, C{r.at_most}]{necessary}")

    _guard(run, as_json)


@main.command()
@data_opt
@hier_opt
@prefs_opt
@classes_opt
@click.option("--n", default=10_000, show_default=True, help="number of sampled models")
@click.option("--seed", default=0, show_default=True)
@out_opt
@json_opt
def smaa(data, hierarchy_path, prefs, classes, n, seed, out, as_json):
    """Class acceptability indices from sampled compatible models."""

    def run():
        hierarchy, _, norm, spec = _load(data, hierarchy_path, classes)
        cs = ConstraintSystem(hierarchy, spec, norm, load_statements(prefs))
        cai = compute_cai(sample_models(cs, n, seed))
        if as_json and not out:
            click.echo(cai.to_json())
        else:
            target = out or "cai.csv"
            cai.to_csv(target)
            if not as_json:
                click.echo(f"wrote {target}")

    _guard(run, as_json)


@main.command()
@data_opt
@hier_opt
@prefs_opt
@classes_opt
@click.option("--node", required=True, help="hierarchy node to aggregate at")
@click.option("--distance", default="unit", show_default=True,
              type=click.Choice(["unit", "absolute", "sqrt"]))
@click.option("--n", default=10_000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@out_opt
@json_opt
def aggregate(data, hierarchy_path, prefs, classes, node, distance, n, seed, out, as_json):
    """Loss-minimizing final assignment from the acceptability indices."""

    def run():
        hierarchy, _, norm, spec = _load(data, hierarchy_path, classes)
        cs = ConstraintSystem(hierarchy, spec, norm, load_statements(prefs))
        cai = compute_cai(sample_models(cs, n, seed), nodes=(node,))
        final = aggregate_loss(cai, node, distance)
        _write(json.dumps(final.to_dict(), indent=2), out)

    _guard(run, as_json)


@main.command(name="bench")
@data_opt
@hier_opt
@click.option("--truth", required=True, type=click.Path(exists=True),
              help="JSON map alternative -> class")
@click.option("--config", default=None, type=click.Path(exists=True),
              help="JSON forecast configuration")
@click.option("--seed", default=0, show_default=True)
@out_opt
@json_opt
def bench_cmd(data, hierarchy_path, truth, config, seed, out, as_json):
    """Subsample-and-forecast comparison of the four model families."""

    def run():
        hierarchy = CriterionHierarchy.from_json(hierarchy_path)
        raw = PerformanceTable.from_csv(data)
        labels = {k: int(v) for k, v in
                  json.loads(Path(truth).read_text(encoding="utf-8")).items()}
        kwargs = {"seed": seed}
        if config:
            doc = json.loads(Path(config).read_text(encoding="utf-8"))
            for key in ("k_values", "runs", "thresholds", "samples", "seed", "delta"):
                if key in doc:
                    kwargs[key] = tuple(doc[key]) if key in ("k_values", "thresholds") \
                        else doc[key]
        cfg = bench_mod.ForecastConfig(**kwargs)
        report = bench_mod.run_forecast(cfg, raw, hierarchy, labels)
        _write(report.to_json(), out)

    _guard(run, as_json)


@main.command()
@click.option("--store", default="./sessions", show_default=True,
              help="directory holding session files")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(store, host, port):
    """Run the HTTP API."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(store), host=host, port=port)


if __name__ == "__main__":
    main()
