import subprocess
import sys

import pytest


def run_cli(*args, env=None):
    return subprocess.run(
        [sys.executable, "-c", "from heval.cli import main; main()", *map(str, args)],
        capture_output=True,
        text=True,
        env=env,
    )


@pytest.fixture()
def corpus(tmp_path):
    n = 30
    src = tmp_path / "source.txt"
    src.write_text("".join(f"source sentence {i}\n" for i in range(n)), encoding="utf-8")
    files = {}
    for k in range(1, 4):
        p = tmp_path / f"engine{k}.txt"
        p.write_text("".join(f"output {i} variant {k}\n" for i in range(n)), encoding="utf-8")
        files[f"E{k}"] = p
    return tmp_path, src, files, n


def init_campaign(tmp_path, src, files, seed=0):
    d = tmp_path / "camp"
    args = ["init", d, "--source", src, "--doc-size", 10, "--seed", seed]
    for eid, path in files.items():
        args += ["--engine", f"{eid}={path}"]
    res = run_cli(*args)
    assert res.returncode == 0, res.stderr
    return d


def test_init_reports_shape(corpus):
    tmp_path, src, files, n = corpus
    d = init_campaign(tmp_path, src, files)
    assert (d / "campaign.json").exists()
    assert (d / "journal.jsonl").exists()


def test_init_line_mismatch_exits_2(corpus, tmp_path):
    _, src, files, _ = corpus
    short = tmp_path / "short.txt"
    short.write_text("only one line\n", encoding="utf-8")
    res = run_cli(
        "init", tmp_path / "bad", "--source", src,
        "--engine", f"E1={files['E1']}", "--engine", f"E2={short}",
    )
    assert res.returncode == 2
    assert res.stderr.startswith("error: LineCountMismatch")


def test_init_missing_source_exits_2(tmp_path):
    res = run_cli("init", tmp_path / "x", "--source", tmp_path / "nope.txt",
                  "--engine", "E1=whatever")
    assert res.returncode == 2


def test_simulate_then_reports(corpus):
    tmp_path, src, files, n = corpus
    d = init_campaign(tmp_path, src, files)
    res = run_cli("simulate", d, "--judges", 2, "--profile", "identical", "--seed", 3)
    assert res.returncode == 0, res.stderr
    assert "seed 3" in res.stdout

    ranking = run_cli("report", d, "--kind", "ranking")
    assert ranking.returncode == 0
    counts = [int(line.split(",")[2]) for line in ranking.stdout.splitlines()[1:]]
    assert sum(counts) == 2 * n  # both judges conserve the sentence total

    agreement = run_cli("report", d, "--kind", "agreement")
    assert agreement.returncode == 0
    assert all(
        line.endswith("100.00") for line in agreement.stdout.splitlines()[1:]
    )


def test_report_subset_and_json(corpus):
    tmp_path, src, files, n = corpus
    d = init_campaign(tmp_path, src, files)
    run_cli("simulate", d, "--judges", 1, "--profile", "independent-uniform")
    res = run_cli("report", d, "--kind", "ranking", "--subset", "E2,E3",
                  "--format", "json")
    assert res.returncode == 0
    import json

    rep = json.loads(res.stdout)
    assert sorted({r["engine"] for r in rep["rows"]}) == ["E2", "E3"]
    assert sum(r["count"] for r in rep["rows"]) == n


def test_report_deterministic_bytes(corpus):
    tmp_path, src, files, _ = corpus
    d = init_campaign(tmp_path, src, files, seed=5)
    run_cli("simulate", d, "--judges", 2, "--profile", "perturb:0.2,1", "--seed", 7)
    a = run_cli("report", d, "--kind", "system")
    b = run_cli("report", d, "--kind", "system")
    assert a.stdout == b.stdout


def test_report_writes_figure_next_to_csv(corpus, tmp_path):
    tmp_path_, src, files, _ = corpus
    d = init_campaign(tmp_path_, src, files)
    run_cli("simulate", d, "--judges", 2, "--profile", "independent-uniform")
    out = tmp_path / "ranking.csv"
    fig = tmp_path / "ranking.png"
    res = run_cli("report", d, "--kind", "ranking", "--out", out, "--figure", fig)
    assert res.returncode == 0, res.stderr
    assert out.read_text().startswith("judge,engine,count")
    assert fig.stat().st_size > 0


def test_import_scores_and_correlation(corpus, tmp_path):
    tmp_path_, src, files, n = corpus
    d = init_campaign(tmp_path_, src, files)
    run_cli("simulate", d, "--judges", 1, "--profile", "independent-uniform")
    rows = ["sentence,engine,measure,level"]
    for s in range(n):
        for k in range(1, 4):
            rows.append(f"{s},E{k},adequacy,{(s + k) % 5 + 1}")
            rows.append(f"{s},E{k},fluency,{(s + 2 * k) % 5 + 1}")
    csv_path = tmp_path / "scores.csv"
    csv_path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    res = run_cli("import-scores", d, csv_path, "--measure", "adequacy")
    assert res.returncode == 2  # file mixes measures against the flag

    adequacy_only = "\n".join(r for r in rows if "fluency" not in r) + "\n"
    csv_path.write_text(adequacy_only, encoding="utf-8")
    res = run_cli("import-scores", d, csv_path, "--measure", "adequacy")
    assert res.returncode == 0, res.stderr

    fl = "sentence,engine,measure,level\n" + "\n".join(
        r for r in rows[1:] if ",fluency," in r
    ) + "\n"
    csv_path.write_text(fl, encoding="utf-8")
    assert run_cli("import-scores", d, csv_path, "--measure", "fluency").returncode == 0

    rep = run_cli("report", d, "--kind", "correlation")
    assert rep.returncode == 0, rep.stderr
    assert rep.stdout.splitlines()[0] == "judge,engine,measure,n,r,ci_low,ci_high"
    assert len(rep.stdout.splitlines()) == 1 + 1 * 2 * 3


def test_campaign_dir_from_environment(corpus, tmp_path):
    import os

    tmp_path_, src, files, _ = corpus
    d = init_campaign(tmp_path_, src, files)
    run_cli("simulate", d, "--judges", 1, "--profile", "identical")
    env = dict(os.environ, HEVAL_CAMPAIGN_DIR=str(d))
    res = run_cli("report", "--kind", "system", env=env)
    assert res.returncode == 0, res.stderr


def test_verify_paper_passes():
    res = run_cli("verify-paper")
    assert res.returncode == 0, res.stdout + res.stderr
    assert "10/10 score checks matched" in res.stdout
    assert "7/7 percentage checks matched" in res.stdout
