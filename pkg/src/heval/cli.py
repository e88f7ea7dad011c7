"""Batch driver: campaign creation, score import, reports (CSV/JSON plus
optional figures), synthetic annotation fixtures, bundled reference checks,
and the HTTP service.

Exit codes: 0 success, 2 validation error, 3 I/O error, 4 verification
failure.  Errors print as one line: ``error: <Class>: <message>``.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import fixtures, reports, rubric, simulate as sim, stats, store as store_mod
from .rubric import RubricError
from .store import CampaignStore, StoreError

EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_VERIFY = 4

DIR_ARG = click.argument(
    "directory",
    envvar="HEVAL_CAMPAIGN_DIR",
    type=click.Path(path_type=Path),
)


@click.group()
def cli():
    """Human evaluation workbench for machine translation."""


@cli.command()
@DIR_ARG
@click.option("--source", "source_file", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--engine", "engines", multiple=True, required=True, help="id=output-file, repeatable")
@click.option("--doc-size", default=100, show_default=True)
@click.option("--seed", default=0, show_default=True)
def init(directory: Path, source_file: Path, engines: tuple[str, ...], doc_size: int, seed: int):
    """Create a campaign from a source corpus and per-engine output files."""
    outputs = {}
    for spec in engines:
        if "=" not in spec:
            raise StoreError(f"--engine expects id=file, got {spec!r}")
        eid, path = spec.split("=", 1)
        if eid in outputs:
            raise store_mod.DuplicateEngine(eid)
        with open(path, encoding="utf-8") as f:
            outputs[eid] = f.readlines()
    with open(source_file, encoding="utf-8") as f:
        source = f.readlines()
    store = CampaignStore.create(
        directory, source, outputs, document_size=doc_size, rng_seed=seed
    )
    n = len(store.campaign.sentences)
    docs = len(store.campaign.document_ids)
    click.echo(f"campaign {store.campaign.id}: {n} sentences, "
               f"{len(outputs)} engines, {docs} documents, seed {seed}")


@cli.command("import-scores")
@DIR_ARG
@click.argument("csv_file", type=click.Path(exists=True, path_type=Path))
@click.option("--measure", type=click.Choice(["adequacy", "fluency"]), required=True)
def import_scores(directory: Path, csv_file: Path, measure: str):
    """Import external adequacy/fluency scores from CSV."""
    store = CampaignStore.open(directory)
    count = store.import_external_scores(
        csv_file.read_text(encoding="utf-8"), measure=measure
    )
    click.echo(f"imported {count} {measure} scores")


@cli.command()
@DIR_ARG
@click.option("--kind", type=click.Choice(list(reports.REPORT_KINDS)), required=True)
@click.option("--judge", default=None)
@click.option("--subset", default=None, help="comma-separated engine ids")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", type=click.Path(path_type=Path), default=None, help="write to file instead of stdout")
@click.option("--figure", type=click.Path(path_type=Path), default=None, help="also render a chart to this file")
def report(directory: Path, kind: str, judge, subset, fmt: str, out, figure):
    """Compute a report and print it as CSV or JSON."""
    store = CampaignStore.open(directory)
    campaign = store.campaign
    if subset:
        campaign = campaign.restrict(subset.split(","))
    rep = reports.build_report(campaign, kind, judge=judge)
    text = reports.to_csv(rep) if fmt == "csv" else reports.to_json(rep)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
    if figure:
        reports.render_figure(rep, figure)


@cli.command()
@DIR_ARG
@click.option("--judges", "n_judges", default=2, show_default=True)
@click.option("--profile", default="independent-uniform", show_default=True,
              help="identical | independent-uniform | perturb:p,delta")
@click.option("--seed", default=0, show_default=True)
@click.option("--offset", "offsets", multiple=True,
              help="engine quality offset, id=delta, repeatable")
@click.option("--na-rate", default=0.0, show_default=True)
def simulate(directory: Path, n_judges: int, profile: str, seed: int,
             offsets: tuple[str, ...], na_rate: float):
    """Generate synthetic annotations for every (judge, sentence, engine)."""
    store = CampaignStore.open(directory)
    prof = sim.Profile.parse(profile)
    engine_offsets = {}
    for spec in offsets:
        if "=" not in spec:
            raise StoreError(f"--offset expects id=delta, got {spec!r}")
        eid, delta = spec.split("=", 1)
        engine_offsets[eid] = int(delta)
    judge_ids = [f"J{i + 1}" for i in range(n_judges)]
    result = sim.simulate_annotations(
        store.campaign, judge_ids, prof, seed,
        engine_offsets=engine_offsets, na_rate=na_rate,
    )
    for judge_id in judge_ids:
        if judge_id not in store.campaign.judges:
            store.add_judge(judge_id, judge_id=judge_id)
    for ann in result.annotations:
        store.record_annotation(
            ann.judge_id, ann.sentence_index, ann.engine_id,
            rubric.validate_vector(ann.scores),
        )
    click.echo(f"simulated {len(result.annotations)} annotations "
               f"(judges {','.join(judge_ids)}, profile {profile}, seed {seed})")


@cli.command("verify-paper")
def verify_paper():
    """Recompute the bundled reference case and compare against its known values."""
    score_checks = fixtures.score_checks()
    pct_checks = fixtures.agreement_checks()
    failed = 0
    for check in score_checks + pct_checks:
        status = "ok" if check.ok else "FAIL"
        if not check.ok:
            failed += 1
        click.echo(f"{status:4} {check.name}: computed {check.computed:.4f}, "
                   f"expected {check.expected:.2f} (tol {check.tolerance})")
    click.echo(f"{sum(c.ok for c in score_checks)}/{len(score_checks)} score checks matched, "
               f"{sum(c.ok for c in pct_checks)}/{len(pct_checks)} percentage checks matched")
    if failed:
        sys.exit(EXIT_VERIFY)


@cli.command()
@DIR_ARG
@click.option("--listen", default="127.0.0.1:8000", show_default=True)
def serve(directory: Path, listen: str):
    """Run the annotation service for one campaign directory."""
    import uvicorn

    from .service import create_app

    directory = Path(directory)
    if (directory / CampaignStore.CONFIG).exists():
        app = create_app(directory.parent, preload=[directory])
    else:
        app = create_app(directory)
    host, _, port = listen.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000), log_level="warning")


def main():
    try:
        cli(standalone_mode=False)
    except click.ClickException as exc:
        click.echo(f"error: Usage: {exc.format_message()}", err=True)
        sys.exit(EXIT_VALIDATION)
    except click.Abort:
        sys.exit(EXIT_VALIDATION)
    except (StoreError, RubricError, stats.StatsError) as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    except OSError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(EXIT_IO)


if __name__ == "__main__":
    main()
