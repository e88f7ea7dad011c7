"""HTTP/JSON service: campaign administration, blinded judge work queues,
annotation submission, and report retrieval.

Judge-facing payloads never contain engine identity; assignments are handed
out as opaque tokens the server maps back to (judge, sentence, engine).
All mutations funnel through one lock (the store's single-writer contract).
"""

from __future__ import annotations

import hashlib
import threading
from pathlib import Path
from typing import Optional

from fastapi import Body, FastAPI, HTTPException, Query, Response
from fastapi.responses import JSONResponse, PlainTextResponse

from . import reports, rubric
from .store import (
    Campaign,
    CampaignStore,
    StoreError,
    UnknownEngine,
    UnknownJudge,
    UnknownSentence,
    blinded_order,
)

RUBRIC_PAYLOAD = {
    "features": [
        {"ordinal": f.ordinal, "short_name": f.short_name, "description": f.description}
        for f in rubric.FEATURES
    ],
    "scale_labels": {str(k): v for k, v in rubric.SCALE_LABELS.items()},
    "not_applicable": "null encodes a feature absent from the source sentence",
}


def _assignment_token(campaign: Campaign, judge_id: str, sentence: int, engine: str) -> str:
    key = f"{campaign.id}:{campaign.rng_seed}:{judge_id}:{sentence}:{engine}"
    return hashlib.sha256(key.encode()).hexdigest()[:32]


def create_app(root: str | Path, preload: Optional[list[str | Path]] = None) -> FastAPI:
    root = Path(root)
    app = FastAPI(title="heval", version="1")
    stores: dict[str, CampaignStore] = {}
    tokens: dict[str, dict[str, tuple[str, int, str]]] = {}
    lock = threading.Lock()

    for directory in preload or []:
        store = CampaignStore.open(directory)
        stores[store.campaign.id] = store

    def get_store(cid: str) -> CampaignStore:
        if cid not in stores:
            directory = root / cid
            if not (directory / CampaignStore.CONFIG).exists():
                raise HTTPException(status_code=404, detail=f"unknown campaign {cid!r}")
            stores[cid] = CampaignStore.open(directory)
        return stores[cid]

    def token_map(store: CampaignStore) -> dict[str, tuple[str, int, str]]:
        cid = store.campaign.id
        if cid not in tokens:
            tokens[cid] = {}
        return tokens[cid]

    def resolve_token(store: CampaignStore, assignment_id: str):
        mapping = token_map(store)
        if assignment_id not in mapping:
            # tokens are deterministic; rebuild the map after e.g. a restart
            campaign = store.campaign
            for judge_id in campaign.judges:
                for s in range(len(campaign.sentences)):
                    for eid in campaign.engine_ids:
                        mapping[_assignment_token(campaign, judge_id, s, eid)] = (
                            judge_id, s, eid,
                        )
        return mapping.get(assignment_id)

    @app.exception_handler(StoreError)
    async def store_error(request, exc: StoreError):
        status = 404 if isinstance(exc, (UnknownJudge, UnknownSentence, UnknownEngine)) else 400
        return JSONResponse(
            status_code=status,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.exception_handler(rubric.RubricError)
    async def rubric_error(request, exc: rubric.RubricError):
        body = {"error": type(exc).__name__, "detail": str(exc)}
        if isinstance(exc, rubric.OutOfRange):
            body["ordinal"] = exc.ordinal
        return JSONResponse(status_code=400, content=body)

    @app.post("/v1/campaigns")
    def create_campaign(body: dict = Body(...)):
        with lock:
            cid = body.get("id", "campaign")
            store = CampaignStore.create(
                root / cid,
                body["source"],
                {eid: lines for eid, lines in body["outputs"].items()},
                document_size=body.get("document_size", 100),
                rng_seed=body.get("seed", 0),
                display_names=body.get("display_names"),
            )
            stores[store.campaign.id] = store
        return {"campaign_id": store.campaign.id}

    @app.post("/v1/campaigns/{cid}/judges")
    def add_judge(cid: str, body: dict = Body(...)):
        store = get_store(cid)
        with lock:
            judge = store.add_judge(body["name"], judge_id=body.get("id"))
        return {"judge_id": judge.id}

    @app.get("/v1/campaigns/{cid}/assignments/next")
    def next_assignment(cid: str, judge: str = Query(...)):
        store = get_store(cid)
        campaign = store.campaign
        campaign.require_judge(judge)
        done = sum(1 for key in campaign.annotations if key[0] == judge)
        total = len(campaign.sentences) * len(campaign.engines)
        for sentence in campaign.sentences:
            for eid in blinded_order(campaign, judge, sentence.index):
                if (judge, sentence.index, eid) in campaign.annotations:
                    continue
                token = _assignment_token(campaign, judge, sentence.index, eid)
                token_map(store)[token] = (judge, sentence.index, eid)
                return {
                    "assignment_id": token,
                    "sentence_index": sentence.index,
                    "source_text": sentence.source_text,
                    "target_text": campaign.outputs[(eid, sentence.index)],
                    "progress": {"done": done, "total": total},
                    "rubric": RUBRIC_PAYLOAD,
                }
        return Response(status_code=204)

    @app.post("/v1/campaigns/{cid}/annotations")
    def submit_annotation(cid: str, body: dict = Body(...)):
        store = get_store(cid)
        key = resolve_token(store, body.get("assignment_id", ""))
        if key is None:
            raise HTTPException(status_code=404, detail="unknown assignment_id")
        judge_id, sentence_index, engine_id = key
        vector = rubric.validate_vector(body.get("scores", []))
        with lock:
            existing = store.campaign.annotations.get(key)
            if existing is not None and not body.get("overwrite", False):
                return JSONResponse(
                    status_code=409,
                    content={
                        "error": "AlreadyAnnotated",
                        "detail": "a newer revision exists; pass overwrite=true to replace",
                        "revision": existing.revision,
                    },
                )
            rec = store.record_annotation(judge_id, sentence_index, engine_id, vector)
        score = rubric.final_score(vector).value
        return {
            "revision": rec.revision,
            "final_score": rubric.format_score(score, places=4),
        }

    @app.get("/v1/campaigns/{cid}/reports/{kind}")
    def report(
        cid: str,
        kind: str,
        judge: Optional[str] = Query(default=None),
        subset: Optional[str] = Query(default=None),
    ):
        store = get_store(cid)
        campaign = store.campaign
        if subset:
            campaign = campaign.restrict(subset.split(","))
        return reports.build_report(campaign, kind, judge=judge)

    @app.get("/v1/campaigns/{cid}/export/{what}")
    def export(cid: str, what: str):
        from . import store as store_mod

        store = get_store(cid)
        if what == "annotations":
            text = store_mod.export_annotations(store.campaign)
        elif what == "scores":
            text = store_mod.export_external_scores(store.campaign)
        else:
            raise HTTPException(status_code=404, detail=f"unknown export {what!r}")
        return PlainTextResponse(text, media_type="text/csv")

    return app
