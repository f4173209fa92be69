"""Command-line interface.

Exit codes: 0 success, 1 validation error, 2 runtime error. All output is
deterministic given identical inputs and seeds; learned networks and
chart descriptions are written as JSON documents.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from dcaw.errors import DcawError, ValidationFailure


class _Cli(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except ValidationFailure as exc:
            click.echo(f"validation error: {exc}", err=True)
            sys.exit(1)
        except DcawError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)


@click.group(cls=_Cli)
def main() -> None:
    """Defect causal analysis workbench."""


def _load_json(path: str) -> dict:
    return json.loads(Path(path).read_text())


def _echo_doc(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


@main.command("validate-model")
@click.argument("model_file", type=click.Path(exists=True))
def validate_model_cmd(model_file: str) -> None:
    """Validate a cause-effect model document."""
    from dcaw.schema import compile_model, parse_model

    model = parse_model(_load_json(model_file))
    compiled = compile_model(model)
    click.echo(f"model ok: {len(model.problems)} problems, {len(model.causes)} causes, "
               f"{len(model.effects)} effects")
    for warning in compiled.warnings:
        click.echo(f"warning: {warning}")


@main.command("compile")
@click.argument("model_file", type=click.Path(exists=True))
@click.option("-o", "--out", type=click.Path(), help="Write the network document here.")
def compile_cmd(model_file: str, out: str | None) -> None:
    """Compile a model document into a (untrained) network document."""
    from dcaw.bn.network import network_to_document
    from dcaw.schema import compile_model, parse_model

    compiled = compile_model(parse_model(_load_json(model_file)))
    for warning in compiled.warnings:
        click.echo(f"warning: {warning}", err=True)
    _echo_doc(network_to_document(compiled.network), out)
    if out:
        click.echo(f"wrote {out} ({len(compiled.network.variables)} variables)")


def _print_learned(network, trace, iterations: int, converged: bool) -> None:
    click.echo(f"iterations={iterations} converged={str(converged).lower()} "
               f"objective={trace[-1]:.6f}")
    from dcaw.bn.network import Cpt

    for cpd in network.cpds:
        if isinstance(cpd, Cpt) and not cpd.parents:
            states = network.var(cpd.child).states
            cells = " ".join(f"{s}={p:.4f}" for s, p in zip(states, cpd.rows[0]))
            click.echo(f"{cpd.child}: {cells}")
        elif not isinstance(cpd, Cpt):
            links = " ".join(f"{p}={w:.4f}" for p, w in zip(cpd.parents, cpd.link_probs))
            click.echo(f"{cpd.child}: noisy-or {links} leak={cpd.leak:.4f}")
        else:
            click.echo(f"{cpd.child}: {cpd.rows.shape[0]} rows learned")


@main.command("learn")
@click.option("--structure", type=click.Path(exists=True),
              help="Network document holding the structure and starting parameters.")
@click.option("--model", "model_file", type=click.Path(exists=True),
              help="Cause-effect model document (compiled before learning).")
@click.option("--records", type=click.Path(exists=True),
              help="Learning records CSV (header of variable ids).")
@click.option("--citations", type=click.Path(exists=True),
              help="Citation records CSV (problem column plus 0/1 cause/effect columns).")
@click.option("--alpha", default=1.0, show_default=True, help="Pseudo-count smoothing.")
@click.option("--tol", default=1e-6, show_default=True, help="Convergence tolerance.")
@click.option("--max-iters", default=200, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--restarts", default=1, show_default=True)
@click.option("-o", "--out", type=click.Path(), help="Write the learned network here.")
def learn_cmd(structure, model_file, records, citations, alpha, tol, max_iters,
              seed, restarts, out) -> None:
    """Learn parameters with EM (handles missing values)."""
    from dcaw.bn.network import network_from_json, network_to_document
    from dcaw.errors import InvalidRecordError
    from dcaw.learn import LearnConfig, em_learn, initialize_parameters, read_records_csv
    from dcaw.schema import compile_model, parse_model, read_citations_csv, records_to_assignments
    from dcaw.session.versions import train_version

    config = LearnConfig(max_iterations=max_iters, tolerance=tol,
                         pseudo_count=alpha, seed=seed)
    if structure and records:
        net = network_from_json(Path(structure).read_text())
        record_set = read_records_csv(Path(records).read_text())
        if restarts > 1:
            best = None
            for k in range(restarts):
                start = initialize_parameters(net, seed=seed + k)
                result = em_learn(start, record_set, config)
                if best is None or result.loglik_trace[-1] > best.loglik_trace[-1]:
                    best = result
            result = best
        else:
            result = em_learn(net, record_set, config)
        learned, trace = result.network, result.loglik_trace
        iterations, converged = result.iterations, result.converged
    elif model_file and citations:
        model = parse_model(_load_json(model_file))
        compiled = compile_model(model)
        cite_records = read_citations_csv(model, Path(citations).read_text())
        record_set = records_to_assignments(model, compiled, cite_records)
        learned, meta = train_version(model, record_set, config, restarts)
        trace = meta["loglik_trace"]
        iterations, converged = meta["iterations"], meta["converged"]
    else:
        raise InvalidRecordError(
            "learn needs either --structure with --records, or --model with --citations"
        )
    _print_learned(learned, trace, iterations, converged)
    if out:
        _echo_doc(network_to_document(learned), out)
        click.echo(f"wrote {out}")


@main.command("diagnose")
@click.option("--model", "model_file", required=True, type=click.Path(exists=True))
@click.option("--network", "network_file", required=True, type=click.Path(exists=True),
              help="Trained network document.")
@click.option("--problem", required=True)
@click.option("--evidence", multiple=True, metavar="CAUSE=true|false",
              help="Repeatable cause evidence.")
def diagnose_cmd(model_file, network_file, problem, evidence) -> None:
    """Rank cause categories and causes for a problem."""
    from dcaw.bn.network import network_from_json
    from dcaw.errors import InvalidEvidenceError
    from dcaw.schema import compile_model, diagnose, parse_model

    model = parse_model(_load_json(model_file))
    compiled = compile_model(model)
    trained = network_from_json(Path(network_file).read_text())
    parsed: dict[str, str] = {}
    for item in evidence:
        if "=" not in item:
            raise InvalidEvidenceError(f"evidence must look like cause=true|false, got {item!r}")
        key, _, value = item.partition("=")
        parsed[key] = value
    view = diagnose(compiled, trained, problem, parsed)
    click.echo(json.dumps(view.as_dict(), indent=2))


def _read_defects(defects_path: str, iteration: str | None):
    from dcaw.analytics import read_defects_csv

    defects = read_defects_csv(Path(defects_path).read_text())
    if iteration:
        defects = [d for d in defects if d.iteration_id == iteration]
    return defects


def _read_stats(units_path: str, effort_path: str | None):
    from dcaw.analytics import read_effort_csv, read_units_csv
    from dcaw.analytics.defects import build_iteration_stats

    units = read_units_csv(Path(units_path).read_text())
    if effort_path:
        hours = read_effort_csv(Path(effort_path).read_text())
    else:
        hours = {it: 1.0 for it in units}
    return build_iteration_stats(units, hours)


@main.command("pareto")
@click.option("--defects", "defects_path", required=True, type=click.Path(exists=True))
@click.option("--iteration", default=None)
@click.option("--chart-data", type=click.Path(), help="Write the chart description here.")
def pareto_cmd(defects_path, iteration, chart_data) -> None:
    """Pareto chart of defect natures."""
    from dcaw.analytics import pareto

    result = pareto(_read_defects(defects_path, iteration))
    width = 40
    top = result.entries[0].count
    for entry in result.entries:
        bar = "#" * max(1, round(width * entry.count / top))
        click.echo(f"{entry.category:26s} {entry.count:4d}  {entry.share:6.1%} "
                   f"cum {entry.cumulative_share:6.1%}  {bar}")
    click.echo(f"total {result.total}")
    if chart_data:
        _echo_doc(result.as_dict(), chart_data)


@main.command("uchart")
@click.option("--defects", "defects_path", required=True, type=click.Path(exists=True))
@click.option("--units", "units_path", required=True, type=click.Path(exists=True))
@click.option("--effort", "effort_path", type=click.Path(exists=True))
@click.option("--iteration", required=True)
@click.option("--by", type=click.Choice(["fp", "hour"]), default="fp", show_default=True)
@click.option("--chart-data", type=click.Path(), help="Write the chart description here.")
def uchart_cmd(defects_path, units_path, effort_path, iteration, by, chart_data) -> None:
    """U-chart of defect rates with Poisson control limits."""
    from dcaw.analytics import u_chart, u_chart_across_iterations

    stats = _read_stats(units_path, effort_path)
    if by == "fp":
        if iteration not in stats:
            raise DcawError(f"no units for iteration {iteration!r}")
        result = u_chart(stats[iteration], _read_defects(defects_path, iteration))
    else:
        result = u_chart_across_iterations(
            list(stats.values()), _read_defects(defects_path, None)
        )
    click.echo(f"center line: {result.center_line:.4f} defects per {result.unit_kind}")
    scale = max(max(p.ucl for p in result.points), max(p.rate for p in result.points))
    width = 44
    for p in result.points:
        bar = round(width * p.rate / scale) if scale else 0
        limit = round(width * p.ucl / scale) if scale else 0
        line = ["-"] * (width + 1)
        if 0 <= limit <= width:
            line[limit] = "|"
        for i in range(min(bar, width) + 1):
            line[i] = "#"
        flag = "  <-- out of control" if p.flagged else ""
        click.echo(f"{p.unit_id:12s} u={p.rate:7.3f} {''.join(line)}{flag}")
    if chart_data:
        _echo_doc(result.as_dict(), chart_data)


@main.command("density")
@click.option("--defects", "defects_path", required=True, type=click.Path(exists=True))
@click.option("--units", "units_path", required=True, type=click.Path(exists=True))
@click.option("--iteration", required=True)
def density_cmd(defects_path, units_path, iteration) -> None:
    """Defects per function point for an iteration."""
    from dcaw.analytics import defect_density

    stats = _read_stats(units_path, None)
    if iteration not in stats:
        raise DcawError(f"no units for iteration {iteration!r}")
    value = defect_density(stats[iteration], _read_defects(defects_path, iteration))
    click.echo(f"{iteration}: {value:.4f} defects per fp")


@main.command("efficiency")
@click.option("--defects", "defects_path", required=True, type=click.Path(exists=True))
@click.option("--effort", "effort_path", required=True, type=click.Path(exists=True))
@click.option("--iteration", required=True)
def efficiency_cmd(defects_path, effort_path, iteration) -> None:
    """Defects found per inspection hour for an iteration."""
    from dcaw.analytics import read_effort_csv

    hours = read_effort_csv(Path(effort_path).read_text())
    if iteration not in hours:
        raise DcawError(f"no inspection effort for iteration {iteration!r}")
    defects = _read_defects(defects_path, iteration)
    click.echo(f"{iteration}: {len(defects) / hours[iteration]:.4f} defects per hour")


@main.command("report")
@click.option("--store-path", envvar="DCAW_STORE", required=True, type=click.Path(exists=True))
@click.option("--session", "session_id", required=True)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text",
              show_default=True)
@click.option("-o", "--out", type=click.Path())
def report_cmd(store_path, session_id, fmt, out) -> None:
    """Render a completed session's meeting report."""
    from dcaw.service.store import Store
    from dcaw.session.report import ReportContext, generate_report, render_report_text

    store = Store(store_path)
    session = store.get_session(session_id)
    ctx = ReportContext(
        defects_by_id={d.id: d for d in store.list_defects()},
        stats_by_iteration={s.iteration_id: s for s in store.list_iteration_stats()},
    )
    report = generate_report(session, ctx)
    text = (json.dumps(report, indent=2) + "\n") if fmt == "json" else render_report_text(report)
    if out:
        Path(out).write_text(text)
        click.echo(f"wrote {out}")
    else:
        click.echo(text, nl=False)


@main.command("serve")
@click.option("--port", default=8040, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--store-path", envvar="DCAW_STORE", required=True, type=click.Path())
def serve_cmd(port, host, store_path) -> None:
    """Run the HTTP service."""
    import uvicorn

    from dcaw.service.api import create_app
    from dcaw.service.store import Store

    uvicorn.run(create_app(Store(store_path)), host=host, port=port)


if __name__ == "__main__":
    main()
