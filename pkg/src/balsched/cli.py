"""Command-line surface: validate, evaluate, balance, improve, report,
and fixture management for instance files.

Exit codes: 0 on success, 1 on validation failure, 2 on I/O or usage
errors. All output is deterministic for a given input.
"""

from __future__ import annotations

import sys

import click

from . import balance as balance_mod
from . import fixtures as fixtures_mod
from .core import (
    collect_violations,
    makespan,
    schedule_violations,
    validate_instance,
)
from .fileio import (
    InstanceFile,
    SchemaError,
    export_balance_curve,
    load_instance,
    render_gantt,
    save_instance,
)
from .homebuilding import (
    DETAIL_TYPES,
    horizon_requirement_table,
    team_schedule_violations,
)
from .improve import (
    ImproveParams,
    capacity_vector,
    improvement_loop,
    violated_months,
)
from .jit import penalty_max, penalty_sum, schedule_windows


def _load(path) -> InstanceFile:
    """Load an instance file, translating failures into exit codes."""
    try:
        return load_instance(path)
    except SchemaError as exc:
        for issue in exc.issues:
            click.echo(f"error: {issue}", err=True)
        sys.exit(1)
    except OSError as exc:
        click.echo(f"error: cannot read {path}: {exc.strerror}", err=True)
        sys.exit(2)


def _instance_violations(instance: InstanceFile) -> list[str]:
    if instance.mode == "modular":
        violations = collect_violations(
            instance.universe, instance.jobs, instance.processors, instance.grid
        )
        if not violations:
            validated = validate_instance(
                instance.universe, instance.jobs, instance.processors,
                instance.grid,
            )
            violations = schedule_violations(validated, instance.schedule)
        return violations
    return team_schedule_violations(
        instance.team_schedule, instance.project.buildings
    )


def _validated(instance: InstanceFile) -> None:
    violations = _instance_violations(instance)
    if violations:
        for v in violations:
            click.echo(f"invalid: {v}", err=True)
        sys.exit(1)


@click.group()
def main():
    """Interval-balanced scheduling of modular jobs and serial building."""


@main.command()
@click.argument("file", type=click.Path())
def validate(file):
    """Check an instance file against all structural rules."""
    instance = _load(file)
    _validated(instance)
    click.echo("OK")


@main.command()
@click.argument("file", type=click.Path())
def evaluate(file):
    """Makespan, window penalties, or the monthly requirement table."""
    instance = _load(file)
    _validated(instance)
    click.echo(f"mode: {instance.mode}")
    if instance.mode == "modular":
        validated = validate_instance(
            instance.universe, instance.jobs, instance.processors, instance.grid
        )
        click.echo(f"makespan: {makespan(validated, instance.schedule)}")
        if instance.window_jobs:
            result = schedule_windows(instance.window_jobs)
            weights = instance.penalty_weights
            click.echo(
                "window jobs: "
                + ("feasible" if result.feasible else "infeasible")
            )
            if result.infeasible_jobs:
                click.echo(
                    "outside window: " + " ".join(result.infeasible_jobs)
                )
            by_machine: dict[int, list] = {}
            for job in instance.window_jobs:
                by_machine.setdefault(job.machine, []).append(job)
            for machine in sorted(by_machine):
                jobs = sorted(by_machine[machine], key=lambda j: j.position)
                cells = "  ".join(
                    f"{j.id} C={result.completions[j.id]:.2f}" for j in jobs
                )
                click.echo(f"machine {machine}: {cells}")
            if weights:
                click.echo(
                    "penalty sum: "
                    f"{penalty_sum(instance.window_jobs, result.completions, weights):.2f}"
                )
                click.echo(
                    "penalty max: "
                    f"{penalty_max(instance.window_jobs, result.completions, weights):.2f}"
                )
    else:
        table = horizon_requirement_table(instance.project, instance.team_schedule)
        click.echo(f"months: {len(table.months)}")
        click.echo("peak requirements:")
        for detail in DETAIL_TYPES:
            month, value = table.peak(detail)
            click.echo(f"  {detail}: {value:.2f} (month {month})")
        click.echo(render_gantt(instance.project, instance.team_schedule), nl=False)


@main.command()
@click.argument("file", type=click.Path())
def balance(file):
    """Balance verdict against the reference profile or capacity."""
    instance = _load(file)
    _validated(instance)
    if instance.mode == "modular":
        if instance.reference_profile is None or instance.proximity_threshold is None:
            click.echo(
                "error: instance has no reference profile / threshold", err=True
            )
            sys.exit(1)
        validated = validate_instance(
            instance.universe, instance.jobs, instance.processors, instance.grid
        )
        verdict = balance_mod.balance_verdict(
            validated,
            instance.schedule,
            instance.reference_profile,
            instance.proximity_threshold,
        )
        click.echo(
            "interval deltas: " + " ".join(str(d) for d in verdict.deltas)
        )
        click.echo(f"max delta: {verdict.max_delta}")
        click.echo(f"threshold: {verdict.threshold}")
        if verdict.satisfied:
            click.echo("balance: satisfied")
        else:
            click.echo(
                "violating intervals: "
                + " ".join(str(i) for i in verdict.violating)
            )
            click.echo("balance: violated")
    else:
        if not instance.capacity:
            click.echo("error: instance has no capacity profile", err=True)
            sys.exit(1)
        table = horizon_requirement_table(instance.project, instance.team_schedule)
        cap = capacity_vector(dict(instance.capacity))
        months = violated_months(table.to_array(), cap, table.months)
        for detail in sorted(instance.capacity):
            month, value = table.peak(detail)
            click.echo(
                f"peak {detail}: {value:.2f} (month {month}) "
                f"capacity {instance.capacity[detail]:.2f}"
            )
        if months:
            click.echo("violated months: " + " ".join(str(m) for m in months))
            click.echo("balance: violated")
        else:
            click.echo("balance: satisfied")


@main.command()
@click.argument("file", type=click.Path())
@click.option("--budget", type=float, default=None, help="Cost budget per iteration.")
@click.option("--max-iters", type=int, default=None, help="Iteration cap.")
@click.option("--out", type=click.Path(), default=None,
              help="Write the improved instance to this file.")
def improve(file, budget, max_iters, out):
    """Repair a home-building schedule under the correction budget."""
    instance = _load(file)
    _validated(instance)
    if instance.mode != "homebuilding":
        click.echo("error: improve needs a homebuilding instance", err=True)
        sys.exit(1)
    if not instance.capacity:
        click.echo("error: instance has no capacity profile", err=True)
        sys.exit(1)
    params = instance.improve_params or ImproveParams()
    params = ImproveParams(
        budget=params.budget if budget is None else budget,
        max_iters=params.max_iters if max_iters is None else max_iters,
    )
    result = improvement_loop(
        instance.project, instance.team_schedule, instance.capacity, params
    )
    for record in result.trace:
        moves = []
        for group, j in zip(record.groups, record.selection.chosen):
            variant = group.variants[j]
            if variant.kind != "none":
                moves.append(variant.describe(group.targets[0]))
        chosen = ", ".join(moves) if moves else "none"
        status = "accepted" if record.accepted else "rejected"
        click.echo(
            f"iteration {record.iteration}: V {record.v_before:.4f} -> "
            f"{record.v_after:.4f} {status}; chosen: {chosen} "
            f"(profit {record.selection.total_profit:.4f}, "
            f"cost {record.selection.total_cost:.2f})"
        )
    click.echo(f"stop: {result.stop_reason}")
    table = horizon_requirement_table(instance.project, result.schedule)
    for detail in sorted(instance.capacity):
        month, value = table.peak(detail)
        click.echo(f"final peak {detail}: {value:.2f} (month {month})")
    if out:
        updated = InstanceFile(
            mode=instance.mode,
            project=instance.project,
            team_schedule=result.schedule,
            capacity=instance.capacity,
            correction_groups=instance.correction_groups,
            improve_params=instance.improve_params,
            reference_requirements=instance.reference_requirements,
        )
        try:
            save_instance(updated, out)
        except OSError as exc:
            click.echo(f"error: cannot write {out}: {exc.strerror}", err=True)
            sys.exit(2)
        click.echo(f"wrote {out}")


@main.command()
@click.argument("file", type=click.Path())
@click.option("--detail", required=True, help="Detail type, e.g. d1.")
@click.option("--capacity", required=True, type=float,
              help="Monthly capacity for the detail.")
@click.option("--csv", "csv_path", required=True, type=click.Path(),
              help="Where to write the balance curve.")
def report(file, detail, capacity, csv_path):
    """Per-month required-vs-capacity curve for one detail type."""
    instance = _load(file)
    _validated(instance)
    if instance.mode != "homebuilding":
        click.echo("error: report needs a homebuilding instance", err=True)
        sys.exit(1)
    table = horizon_requirement_table(instance.project, instance.team_schedule)
    try:
        export_balance_curve(table, capacity, detail, csv_path)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except OSError as exc:
        click.echo(f"error: cannot write {csv_path}: {exc.strerror}", err=True)
        sys.exit(2)
    month, value = table.peak(detail)
    click.echo(f"peak {detail}: {value:.2f} (month {month})")
    click.echo(f"wrote {csv_path}")


@main.group()
def fixtures():
    """List or emit the bundled instances."""


@fixtures.command(name="list")
def fixtures_list():
    """Names of all bundled instances."""
    for name in fixtures_mod.list_fixtures():
        click.echo(name)


@fixtures.command(name="emit")
@click.argument("name")
@click.option("--out", type=click.Path(), default=None,
              help="Target path (default: <name>.json).")
def fixtures_emit(name, out):
    """Write a bundled instance to a JSON file."""
    try:
        instance = fixtures_mod.build_fixture(name)
    except KeyError as exc:
        raise click.UsageError(str(exc.args[0]))
    path = out or f"{name}.json"
    try:
        save_instance(instance, path)
    except OSError as exc:
        click.echo(f"error: cannot write {path}: {exc.strerror}", err=True)
        sys.exit(2)
    click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()
