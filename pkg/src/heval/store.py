"""Campaign storage: corpora, per-engine outputs, judges, annotations and
external adequacy/fluency scores.

A campaign lives in one directory: immutable corpus files plus an append-only
JSON-lines journal.  Replaying the journal from empty reproduces the current
state, so the journal is both the write-ahead log and the audit trail.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import random
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Iterable, Optional

from . import rubric
from .rubric import AnnotationVector, final_score, format_score

MEASURES = ("adequacy", "fluency")

# 13 syntactic construct categories a test sentence may be tagged with.
CONSTRUCTS = (
    "Simple Construct",
    "Infinitive Construct",
    "Gerund Construct",
    "Participle Construct",
    "Appositional Construct",
    "Initial Adverb",
    "Initial PP",
    "Coordinate Construct",
    "Copula",
    "Wh Structure",
    "That Clause",
    "Relative Clause",
    "Discourse Construct",
)

ANNOTATION_CSV_HEADER = (
    ["judge", "sentence", "engine"]
    + [f"f{i}" for i in range(1, 12)]
    + ["final_score"]
)
EXTERNAL_CSV_HEADER = ["sentence", "engine", "measure", "level"]


class StoreError(ValueError):
    """Base class for campaign store failures."""


class EmptyCorpus(StoreError):
    pass


class DuplicateEngine(StoreError):
    def __init__(self, engine_id: str):
        super().__init__(f"duplicate engine id {engine_id!r}")
        self.engine_id = engine_id


class LineCountMismatch(StoreError):
    def __init__(self, engine_id: str, expected: int, got: int):
        super().__init__(
            f"engine {engine_id!r}: expected {expected} output lines, got {got}"
        )
        self.engine_id = engine_id
        self.expected = expected
        self.got = got


class UnknownJudge(StoreError):
    def __init__(self, judge_id: str):
        super().__init__(f"unknown judge {judge_id!r}")
        self.judge_id = judge_id


class UnknownSentence(StoreError):
    def __init__(self, index: object):
        super().__init__(f"unknown sentence index {index!r}")
        self.index = index


class UnknownEngine(StoreError):
    def __init__(self, engine_id: str):
        super().__init__(f"unknown engine {engine_id!r}")
        self.engine_id = engine_id


class OutOfScale(StoreError):
    def __init__(self, level: object, lo: int, hi: int):
        super().__init__(f"external score {level!r} outside scale {lo}..{hi}")
        self.level = level


class SchemaViolation(StoreError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


@dataclass(frozen=True)
class Engine:
    id: str
    display_name: str


@dataclass(frozen=True)
class Judge:
    id: str
    display_name: str


@dataclass(frozen=True)
class SentenceUnit:
    index: int
    source_text: str
    document_id: int
    construct_tag: Optional[str] = None


@dataclass(frozen=True)
class AnnotationRecord:
    judge_id: str
    sentence_index: int
    engine_id: str
    vector: AnnotationVector
    revision: int
    timestamp: str


@dataclass(frozen=True)
class ExternalScoreRecord:
    sentence_index: int
    engine_id: str
    measure: str
    level: int
    revision: int
    timestamp: str


@dataclass
class Campaign:
    """In-memory campaign state.  Mutations go through the record_* methods so
    a wrapping store can journal them; single-writer, multiple-reader."""

    id: str
    engines: list[Engine]
    sentences: list[SentenceUnit]
    outputs: dict[tuple[str, int], str]
    document_size: int = 100
    rng_seed: int = 0
    scale_bounds: tuple[int, int] = (1, 5)
    judges: dict[str, Judge] = field(default_factory=dict)
    annotations: dict[tuple[str, int, str], AnnotationRecord] = field(
        default_factory=dict
    )
    external_scores: dict[tuple[int, str, str], ExternalScoreRecord] = field(
        default_factory=dict
    )

    @property
    def engine_ids(self) -> list[str]:
        return [e.id for e in self.engines]

    @property
    def document_ids(self) -> list[int]:
        return sorted({s.document_id for s in self.sentences})

    def require_engine(self, engine_id: str) -> Engine:
        for e in self.engines:
            if e.id == engine_id:
                return e
        raise UnknownEngine(engine_id)

    def require_sentence(self, index: int) -> SentenceUnit:
        if not isinstance(index, int) or not 0 <= index < len(self.sentences):
            raise UnknownSentence(index)
        return self.sentences[index]

    def require_judge(self, judge_id: str) -> Judge:
        if judge_id not in self.judges:
            raise UnknownJudge(judge_id)
        return self.judges[judge_id]

    def add_judge(self, display_name: str, judge_id: Optional[str] = None) -> Judge:
        if judge_id is None:
            judge_id = f"J{len(self.judges) + 1}"
        if judge_id in self.judges:
            raise StoreError(f"judge id {judge_id!r} already registered")
        judge = Judge(id=judge_id, display_name=display_name)
        self.judges[judge_id] = judge
        return judge

    def record_annotation(
        self,
        judge_id: str,
        sentence_index: int,
        engine_id: str,
        vector: AnnotationVector,
        timestamp: Optional[str] = None,
    ) -> AnnotationRecord:
        self.require_judge(judge_id)
        self.require_sentence(sentence_index)
        self.require_engine(engine_id)
        key = (judge_id, sentence_index, engine_id)
        prev = self.annotations.get(key)
        rec = AnnotationRecord(
            judge_id=judge_id,
            sentence_index=sentence_index,
            engine_id=engine_id,
            vector=vector,
            revision=(prev.revision + 1) if prev else 1,
            timestamp=timestamp or _now(),
        )
        self.annotations[key] = rec
        return rec

    def record_external_score(
        self,
        sentence_index: int,
        engine_id: str,
        measure: str,
        level: int,
        timestamp: Optional[str] = None,
    ) -> ExternalScoreRecord:
        self.require_sentence(sentence_index)
        self.require_engine(engine_id)
        if measure not in MEASURES:
            raise StoreError(f"unknown measure {measure!r}")
        lo, hi = self.scale_bounds
        if not isinstance(level, int) or not lo <= level <= hi:
            raise OutOfScale(level, lo, hi)
        key = (sentence_index, engine_id, measure)
        prev = self.external_scores.get(key)
        rec = ExternalScoreRecord(
            sentence_index=sentence_index,
            engine_id=engine_id,
            measure=measure,
            level=level,
            revision=(prev.revision + 1) if prev else 1,
            timestamp=timestamp or _now(),
        )
        self.external_scores[key] = rec
        return rec

    def restrict(self, engine_ids: Iterable[str]) -> "Campaign":
        """View of the campaign limited to an engine subset, in registry order.
        Analytics over the view recompute ranks within the subset."""
        wanted = list(engine_ids)
        if not wanted:
            raise StoreError("engine subset must be non-empty")
        for eid in wanted:
            self.require_engine(eid)
        keep = [e for e in self.engines if e.id in set(wanted)]
        ids = {e.id for e in keep}
        return Campaign(
            id=self.id,
            engines=keep,
            sentences=self.sentences,
            outputs={k: v for k, v in self.outputs.items() if k[0] in ids},
            document_size=self.document_size,
            rng_seed=self.rng_seed,
            scale_bounds=self.scale_bounds,
            judges=self.judges,
            annotations={
                k: v for k, v in self.annotations.items() if k[2] in ids
            },
            external_scores={
                k: v for k, v in self.external_scores.items() if k[1] in ids
            },
        )


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _read_lines(stream: IO[str] | Iterable[str]) -> list[str]:
    return [line.rstrip("\r\n") for line in stream]


def build_campaign(
    source_lines: IO[str] | Iterable[str],
    outputs: dict[str, IO[str] | Iterable[str]]
    | Iterable[tuple[str, IO[str] | Iterable[str]]],
    campaign_id: str = "campaign",
    document_size: int = 100,
    rng_seed: int = 0,
    display_names: Optional[dict[str, str]] = None,
    scale_bounds: tuple[int, int] = (1, 5),
) -> Campaign:
    """Assemble a campaign from a source stream and one output stream per
    engine.  Every engine must cover every sentence (dense matrix)."""
    source = _read_lines(source_lines)
    if not source or all(not s.strip() for s in source):
        raise EmptyCorpus("source corpus has no sentences")
    if document_size < 1:
        raise StoreError("document_size must be >= 1")

    pairs = list(outputs.items()) if isinstance(outputs, dict) else list(outputs)
    engines: list[Engine] = []
    seen: set[str] = set()
    names = display_names or {}
    for eid, _ in pairs:
        if eid in seen:
            raise DuplicateEngine(eid)
        seen.add(eid)
        engines.append(Engine(id=eid, display_name=names.get(eid, eid)))
    if not engines:
        raise EmptyCorpus("no engine outputs supplied")

    sentences = [
        SentenceUnit(index=i, source_text=text, document_id=i // document_size)
        for i, text in enumerate(source)
    ]
    matrix: dict[tuple[str, int], str] = {}
    for eid, stream in pairs:
        lines = _read_lines(stream)
        if len(lines) != len(source):
            raise LineCountMismatch(eid, len(source), len(lines))
        for i, text in enumerate(lines):
            matrix[(eid, i)] = text

    return Campaign(
        id=campaign_id,
        engines=engines,
        sentences=sentences,
        outputs=matrix,
        document_size=document_size,
        rng_seed=rng_seed,
        scale_bounds=scale_bounds,
    )


def corpus_stats(campaign: Campaign) -> dict[str, int]:
    """Sentence/word/unique-word counts over the source corpus.

    Tokens are maximal runs of non-whitespace, compared case-sensitively;
    punctuation is retained.
    """
    words = 0
    unique: set[str] = set()
    for s in campaign.sentences:
        tokens = s.source_text.split()
        words += len(tokens)
        unique.update(tokens)
    return {
        "sentences": len(campaign.sentences),
        "words": words,
        "unique_words": len(unique),
    }


def blinded_order(campaign: Campaign, judge_id: str, sentence_index: int) -> list[str]:
    """Deterministic per-(judge, sentence) permutation of the engine ids.

    Derived from the campaign seed so it is stable across restarts; judge-facing
    payloads use display positions from this order, never engine identity.
    """
    campaign.require_judge(judge_id)
    campaign.require_sentence(sentence_index)
    key = f"{campaign.rng_seed}:{judge_id}:{sentence_index}".encode()
    rng = random.Random(int.from_bytes(hashlib.sha256(key).digest()[:8], "big"))
    order = campaign.engine_ids
    rng.shuffle(order)
    return order


# --- annotation / external-score CSV interchange ---------------------------


def export_annotations(campaign: Campaign) -> str:
    """Current annotations as CSV; NA serialized as an empty field and the
    final score with 4 decimal places.  Row order is deterministic."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ANNOTATION_CSV_HEADER)
    order = {eid: i for i, eid in enumerate(campaign.engine_ids)}
    for key in sorted(
        campaign.annotations, key=lambda k: (k[0], k[1], order[k[2]])
    ):
        rec = campaign.annotations[key]
        row = [rec.judge_id, rec.sentence_index, rec.engine_id]
        row += ["" if s is None else s for s in rec.vector.scores]
        row.append(format_score(final_score(rec.vector).value, places=4))
        w.writerow(row)
    return buf.getvalue()


def import_annotations(campaign: Campaign, text: str) -> list[AnnotationRecord]:
    """Parse and apply an annotation CSV.  All-or-nothing: the file is fully
    validated against the campaign before any record is applied."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ANNOTATION_CSV_HEADER:
        raise SchemaViolation(1, "bad or missing header")
    parsed: list[tuple[str, int, str, AnnotationVector]] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(ANNOTATION_CSV_HEADER):
            raise SchemaViolation(lineno, f"expected {len(ANNOTATION_CSV_HEADER)} fields")
        judge_id, sent_raw, engine_id = row[0], row[1], row[2]
        try:
            sentence_index = int(sent_raw)
        except ValueError:
            raise SchemaViolation(lineno, f"bad sentence index {sent_raw!r}")
        if not 0 <= sentence_index < len(campaign.sentences):
            raise SchemaViolation(lineno, f"sentence {sentence_index} not in campaign")
        if engine_id not in campaign.engine_ids:
            raise SchemaViolation(lineno, f"engine {engine_id!r} not in campaign")
        raw: list[Optional[int]] = []
        for cell in row[3:14]:
            if cell == "":
                raw.append(None)
            else:
                try:
                    raw.append(int(cell))
                except ValueError:
                    raise SchemaViolation(lineno, f"bad feature score {cell!r}")
        try:
            vector = rubric.validate_vector(raw)
        except rubric.RubricError as exc:
            raise SchemaViolation(lineno, str(exc))
        parsed.append((judge_id, sentence_index, engine_id, vector))

    applied = []
    for judge_id, sentence_index, engine_id, vector in parsed:
        if judge_id not in campaign.judges:
            campaign.add_judge(judge_id, judge_id=judge_id)
        applied.append(
            campaign.record_annotation(judge_id, sentence_index, engine_id, vector)
        )
    return applied


def export_external_scores(campaign: Campaign) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(EXTERNAL_CSV_HEADER)
    order = {eid: i for i, eid in enumerate(campaign.engine_ids)}
    for key in sorted(
        campaign.external_scores, key=lambda k: (k[0], order[k[1]], k[2])
    ):
        rec = campaign.external_scores[key]
        w.writerow([rec.sentence_index, rec.engine_id, rec.measure, rec.level])
    return buf.getvalue()


def parse_external_scores(
    campaign: Campaign, text: str, measure: Optional[str] = None
) -> list[tuple[int, str, str, int]]:
    """Validate an external-score CSV without applying it.  When ``measure``
    is given, rows may omit agreement with it only via the measure column."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != EXTERNAL_CSV_HEADER:
        raise SchemaViolation(1, "bad or missing header")
    parsed = []
    lo, hi = campaign.scale_bounds
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 4:
            raise SchemaViolation(lineno, "expected 4 fields")
        sent_raw, engine_id, row_measure, level_raw = row
        try:
            sentence_index = int(sent_raw)
            level = int(level_raw)
        except ValueError:
            raise SchemaViolation(lineno, "sentence and level must be integers")
        if not 0 <= sentence_index < len(campaign.sentences):
            raise SchemaViolation(lineno, f"sentence {sentence_index} not in campaign")
        if engine_id not in campaign.engine_ids:
            raise SchemaViolation(lineno, f"engine {engine_id!r} not in campaign")
        if row_measure not in MEASURES:
            raise SchemaViolation(lineno, f"unknown measure {row_measure!r}")
        if measure is not None and row_measure != measure:
            raise SchemaViolation(lineno, f"expected measure {measure!r}")
        if not lo <= level <= hi:
            raise SchemaViolation(lineno, f"level {level} outside scale {lo}..{hi}")
        parsed.append((sentence_index, engine_id, row_measure, level))
    return parsed


# --- durable store ----------------------------------------------------------


class CampaignStore:
    """Directory-backed campaign: immutable corpus files, a JSON config, and
    an append-only journal of judges, annotations and external scores."""

    CONFIG = "campaign.json"
    JOURNAL = "journal.jsonl"
    CORPUS_DIR = "corpus"
    SOURCE_FILE = "source.txt"

    def __init__(self, directory: str | Path, campaign: Campaign):
        self.directory = Path(directory)
        self.campaign = campaign

    # construction

    @classmethod
    def create(
        cls,
        directory: str | Path,
        source_lines: IO[str] | Iterable[str],
        outputs: dict[str, IO[str] | Iterable[str]],
        document_size: int = 100,
        rng_seed: int = 0,
        display_names: Optional[dict[str, str]] = None,
        scale_bounds: tuple[int, int] = (1, 5),
    ) -> "CampaignStore":
        directory = Path(directory)
        if (directory / cls.CONFIG).exists():
            raise StoreError(f"campaign already exists at {directory}")
        campaign = build_campaign(
            source_lines,
            outputs,
            campaign_id=directory.name or "campaign",
            document_size=document_size,
            rng_seed=rng_seed,
            display_names=display_names,
            scale_bounds=scale_bounds,
        )
        corpus_dir = directory / cls.CORPUS_DIR
        corpus_dir.mkdir(parents=True, exist_ok=True)
        (corpus_dir / cls.SOURCE_FILE).write_text(
            "".join(s.source_text + "\n" for s in campaign.sentences),
            encoding="utf-8",
        )
        for engine in campaign.engines:
            (corpus_dir / f"{engine.id}.txt").write_text(
                "".join(
                    campaign.outputs[(engine.id, i)] + "\n"
                    for i in range(len(campaign.sentences))
                ),
                encoding="utf-8",
            )
        config = {
            "id": campaign.id,
            "engines": [
                {"id": e.id, "display_name": e.display_name}
                for e in campaign.engines
            ],
            "document_size": campaign.document_size,
            "rng_seed": campaign.rng_seed,
            "scale_bounds": list(campaign.scale_bounds),
        }
        (directory / cls.CONFIG).write_text(
            json.dumps(config, indent=2) + "\n", encoding="utf-8"
        )
        (directory / cls.JOURNAL).touch()
        return cls(directory, campaign)

    @classmethod
    def open(cls, directory: str | Path) -> "CampaignStore":
        directory = Path(directory)
        config_path = directory / cls.CONFIG
        if not config_path.exists():
            raise StoreError(f"no campaign at {directory}")
        config = json.loads(config_path.read_text(encoding="utf-8"))
        corpus_dir = directory / cls.CORPUS_DIR
        with open(corpus_dir / cls.SOURCE_FILE, encoding="utf-8") as f:
            source = _read_lines(f)
        outputs: dict[str, list[str]] = {}
        for spec in config["engines"]:
            with open(corpus_dir / f"{spec['id']}.txt", encoding="utf-8") as f:
                outputs[spec["id"]] = _read_lines(f)
        campaign = build_campaign(
            source,
            outputs,
            campaign_id=config["id"],
            document_size=config["document_size"],
            rng_seed=config["rng_seed"],
            display_names={e["id"]: e["display_name"] for e in config["engines"]},
            scale_bounds=tuple(config.get("scale_bounds", (1, 5))),
        )
        store = cls(directory, campaign)
        store._replay()
        return store

    # journal

    @property
    def journal_path(self) -> Path:
        return self.directory / self.JOURNAL

    def _replay(self) -> None:
        with open(self.journal_path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    event = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise SchemaViolation(lineno, f"bad journal line: {exc}")
                self._apply(event)

    def _apply(self, event: dict) -> None:
        kind = event["type"]
        if kind == "judge":
            self.campaign.add_judge(event["display_name"], judge_id=event["judge"])
        elif kind == "annotation":
            vector = rubric.validate_vector(
                [None if s is None else int(s) for s in event["scores"]]
            )
            rec = self.campaign.record_annotation(
                event["judge"],
                event["sentence"],
                event["engine"],
                vector,
                timestamp=event["timestamp"],
            )
            if rec.revision != event["revision"]:
                raise StoreError(
                    f"journal revision {event['revision']} does not follow "
                    f"current revision history for {event['judge']}/"
                    f"{event['sentence']}/{event['engine']}"
                )
        elif kind == "external":
            self.campaign.record_external_score(
                event["sentence"],
                event["engine"],
                event["measure"],
                event["level"],
                timestamp=event["timestamp"],
            )
        else:
            raise StoreError(f"unknown journal event type {kind!r}")

    def _append(self, event: dict) -> None:
        line = json.dumps(event, ensure_ascii=False)
        with open(self.journal_path, "a", encoding="utf-8") as f:
            f.write(line + "\n")
            f.flush()
            os.fsync(f.fileno())

    # mutations (journal write precedes in-memory visibility of the ack)

    def add_judge(self, display_name: str, judge_id: Optional[str] = None) -> Judge:
        judge = self.campaign.add_judge(display_name, judge_id=judge_id)
        self._append(
            {"type": "judge", "judge": judge.id, "display_name": judge.display_name}
        )
        return judge

    def record_annotation(
        self,
        judge_id: str,
        sentence_index: int,
        engine_id: str,
        vector: AnnotationVector,
    ) -> AnnotationRecord:
        rec = self.campaign.record_annotation(
            judge_id, sentence_index, engine_id, vector
        )
        self._append(
            {
                "type": "annotation",
                "judge": rec.judge_id,
                "sentence": rec.sentence_index,
                "engine": rec.engine_id,
                "scores": list(rec.vector.scores),
                "revision": rec.revision,
                "timestamp": rec.timestamp,
            }
        )
        return rec

    def record_external_score(
        self, sentence_index: int, engine_id: str, measure: str, level: int
    ) -> ExternalScoreRecord:
        rec = self.campaign.record_external_score(
            sentence_index, engine_id, measure, level
        )
        self._append(
            {
                "type": "external",
                "sentence": rec.sentence_index,
                "engine": rec.engine_id,
                "measure": rec.measure,
                "level": rec.level,
                "revision": rec.revision,
                "timestamp": rec.timestamp,
            }
        )
        return rec

    def import_annotations(self, text: str) -> list[AnnotationRecord]:
        # validate against a throwaway copy first so a bad file changes nothing
        probe = self.campaign.restrict(self.campaign.engine_ids)
        probe.judges = dict(self.campaign.judges)
        probe.annotations = dict(self.campaign.annotations)
        import_annotations(probe, text)

        applied = []
        rows = list(csv.reader(io.StringIO(text)))[1:]
        for row in rows:
            if not row:
                continue
            judge_id = row[0]
            if judge_id not in self.campaign.judges:
                self.add_judge(judge_id, judge_id=judge_id)
            raw = [None if c == "" else int(c) for c in row[3:14]]
            applied.append(
                self.record_annotation(
                    judge_id, int(row[1]), row[2], rubric.validate_vector(raw)
                )
            )
        return applied

    def import_external_scores(self, text: str, measure: Optional[str] = None) -> int:
        parsed = parse_external_scores(self.campaign, text, measure=measure)
        for sentence_index, engine_id, row_measure, level in parsed:
            self.record_external_score(sentence_index, engine_id, row_measure, level)
        return len(parsed)
