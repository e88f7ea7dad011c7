"""Report assembly: turn campaign state into the five result sets (system,
documents, ranking, agreement, correlation) and render them as CSV, JSON, or
matplotlib figures.

Row order is deterministic (judges sorted by id, engines in registry order),
so identical campaign state always yields byte-identical report output.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Optional

from . import analytics, stats
from .rubric import format_score, round_half_up
from .store import Campaign, StoreError, MEASURES

REPORT_KINDS = ("system", "documents", "ranking", "agreement", "correlation")

HEADERS = {
    "system": ["judge", "engine", "score"],
    "documents": ["doc", "judge", "engine", "score"],
    "ranking": ["judge", "engine", "count"],
    "agreement": ["scope", "engine", "count", "total", "percentage"],
    "correlation": ["judge", "engine", "measure", "n", "r", "ci_low", "ci_high"],
}


def _judges(campaign: Campaign, judge: Optional[str]) -> list[str]:
    if judge is not None:
        campaign.require_judge(judge)
        return [judge]
    return sorted(campaign.judges)


def _fmt4(x: float) -> str:
    return f"{x:.4f}"


def build_report(
    campaign: Campaign, kind: str, judge: Optional[str] = None
) -> dict:
    """Compute one report kind over the campaign (already subset-restricted
    if a subset was requested).  Returns {"kind", "rows", ...extras}."""
    if kind not in REPORT_KINDS:
        raise StoreError(f"unknown report kind {kind!r}")
    judges = _judges(campaign, judge)
    engine_ids = campaign.engine_ids

    if kind == "system":
        rows = []
        for j in judges:
            scores = analytics.system_scores(analytics.score_matrix(campaign, j), campaign)
            for eid in engine_ids:
                if eid in scores:
                    rows.append(
                        {"judge": j, "engine": eid,
                         "score": format_score(scores[eid], places=4)}
                    )
        return {"kind": kind, "rows": rows}

    if kind == "documents":
        rows = []
        for j in judges:
            scores = analytics.document_scores(
                analytics.score_matrix(campaign, j), campaign
            )
            for doc in campaign.document_ids:
                for eid in engine_ids:
                    if (doc, eid) in scores:
                        rows.append(
                            {"doc": doc, "judge": j, "engine": eid,
                             "score": format_score(scores[(doc, eid)], places=4)}
                        )
        return {"kind": kind, "rows": rows}

    if kind == "ranking":
        rows = []
        excluded: dict[str, list[int]] = {}
        for j in judges:
            table = analytics.rank_sentences(
                analytics.score_matrix(campaign, j), engine_ids
            )
            counts = analytics.highest_rank_counts(table)
            excluded[j] = table.excluded
            for eid in engine_ids:
                rows.append({"judge": j, "engine": eid, "count": counts[eid]})
        return {"kind": kind, "rows": rows, "excluded_sentences": excluded}

    if kind == "agreement":
        if len(judges) != 2:
            raise StoreError(
                f"agreement report needs exactly 2 judges, have {len(judges)}"
            )
        j1, j2 = judges
        t1 = analytics.rank_sentences(analytics.score_matrix(campaign, j1), engine_ids)
        t2 = analytics.rank_sentences(analytics.score_matrix(campaign, j2), engine_ids)
        rows = []
        overall = stats.highest_rank_agreement(t1, t2)
        rows.append(
            {"scope": "highest_rank", "engine": "",
             "count": overall.numerator, "total": overall.denominator,
             "percentage": str(round_half_up(overall.percentage, places=2))}
        )
        for eid in engine_ids:
            res = stats.enginewise_rank_agreement(t1, t2, eid)
            rows.append(
                {"scope": "engine_rank", "engine": eid,
                 "count": res.numerator, "total": res.denominator,
                 "percentage": str(round_half_up(res.percentage, places=2))}
            )
        return {"kind": kind, "rows": rows, "judges": [j1, j2]}

    # correlation
    rows = []
    for j in judges:
        for measure in MEASURES:
            results = stats.heval_vs_external(campaign, j, measure)
            for eid in engine_ids:
                res = results[eid]
                rows.append(
                    {"judge": j, "engine": eid, "measure": measure, "n": res.n,
                     "r": _fmt4(res.r) if res.r is not None else "",
                     "ci_low": _fmt4(res.ci_low) if res.ci_low is not None else "",
                     "ci_high": _fmt4(res.ci_high) if res.ci_high is not None else ""}
                )
    return {"kind": kind, "rows": rows}


def to_csv(report: dict) -> str:
    header = HEADERS[report["kind"]]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in report["rows"]:
        w.writerow([row[col] for col in header])
    return buf.getvalue()


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def render_figure(report: dict, path: str | Path) -> None:
    """Bar/line chart of a report, written next to the delimited output."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    kind = report["kind"]
    rows = report["rows"]
    fig, ax = plt.subplots(figsize=(8, 5))

    if kind in ("system", "ranking"):
        value_col = "score" if kind == "system" else "count"
        judges = sorted({r["judge"] for r in rows})
        engines = list(dict.fromkeys(r["engine"] for r in rows))
        width = 0.8 / max(len(judges), 1)
        for i, j in enumerate(judges):
            values = [
                float(r[value_col])
                for e in engines
                for r in rows
                if r["judge"] == j and r["engine"] == e
            ]
            positions = [k + i * width for k in range(len(engines))]
            ax.bar(positions, values, width=width, label=j)
        ax.set_xticks([k + 0.4 - width / 2 for k in range(len(engines))])
        ax.set_xticklabels(engines)
        ax.set_ylabel("mean score" if kind == "system" else "highest-rank count")
        ax.legend()
    elif kind == "documents":
        judges = sorted({r["judge"] for r in rows})
        engines = list(dict.fromkeys(r["engine"] for r in rows))
        for j in judges:
            for e in engines:
                pts = [
                    (r["doc"], float(r["score"]))
                    for r in rows
                    if r["judge"] == j and r["engine"] == e
                ]
                if pts:
                    ax.plot(*zip(*pts), marker="o", label=f"{j}/{e}")
        ax.set_xlabel("document")
        ax.set_ylabel("mean score")
        ax.legend(fontsize="small")
    else:
        plt.close(fig)
        raise StoreError(f"no figure rendering for report kind {kind!r}")

    ax.set_title(f"{kind} report")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
