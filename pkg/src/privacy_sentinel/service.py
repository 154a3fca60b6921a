"""Event-sourced engine and its HTTP facade.

The engine owns all mutable state: knowledge base, contingency table, posts
and per-user thresholds. Every mutation is validated first, written to the
event log, then applied by the same handler replay uses, so rebuilding from
the log (plus the genesis snapshot) always lands on a byte-identical
snapshot. 4xx paths never touch the log.

``create_app`` wraps an engine in a small JSON API:

  POST   /api/v1/posts                   compose a draft, maybe warn
  POST   /api/v1/posts/{id}/decision     publish or retract past a warning
  DELETE /api/v1/posts/{id}              delete a published post
  POST   /api/v1/incident-reports        post-deletion regret dialog
  GET    /api/v1/heuristics              learned heuristics with risk stats
  GET    /api/v1/contingency-table       raw evidence counts
  GET    /api/v1/risk-index              one cell's full risk assessment
  GET    /api/v1/users/{id}/threshold    a user's warning threshold
  GET    /api/v1/vocabulary              attribute/audience/incident lists
  GET    /api/v1/snapshot                current state snapshot
  GET    /api/v1/health                  liveness probe
"""

from __future__ import annotations

import threading
import time
from pathlib import Path

from .awareness import (
    PostStore,
    ThresholdState,
    generate_warning,
    publish_or_retract,
)
from .config import EngineConfig
from .criticality import criticality_result
from .errors import (
    ConflictError,
    InsufficientEvidenceError,
    IntegrityError,
    NotFoundError,
    ParseError,
    SentinelError,
    StateError,
    ValidationError,
)
from .events import EventLog, EventRecord
from .knowledge import (
    ContingencyTable,
    KnowledgeBase,
    load_snapshot,
    record_incident,
    snapshot,
)
from .lexicon import Lexicon, default_lexicon, extract_sas, load_lexicon
from .model import (
    CONSEQUENCE_LABELS,
    AudienceCircle,
    IncidentReport,
    Post,
    PostStatus,
    SurveillanceAttribute,
    UnwantedIncident,
    parse_consequence,
    sas_from_json,
    sas_to_json,
)

_HTTP_STATUS = "pending"  # draft-with-warning, as shown on the wire


def _wire_status(post: Post) -> str:
    if post.status is PostStatus.DRAFT:
        return _HTTP_STATUS
    return post.status.value


def parse_annotations(value) -> frozenset[SurveillanceAttribute] | None:
    """Accept an annotation list of attribute names or attribute objects."""
    if value is None:
        return None
    if not isinstance(value, list):
        raise ValidationError("annotations must be a list or null")
    out = set()
    for item in value:
        if isinstance(item, str):
            out.add(SurveillanceAttribute.from_attribute_name(item))
        elif isinstance(item, dict):
            out.add(SurveillanceAttribute.from_json(item))
        else:
            raise ValidationError(f"bad annotation entry: {item!r}")
    return frozenset(out)


class Engine:
    """The full awareness loop behind one lock.

    Validation happens before anything is written; the apply step is shared
    between the live path and replay, which is what makes the event log the
    single source of truth.
    """

    def __init__(
        self,
        config: EngineConfig | None = None,
        lexicon: Lexicon | None = None,
        genesis: bytes | None = None,
        log_path: Path | str | None = None,
    ):
        self.config = config or EngineConfig()
        if lexicon is not None:
            self.lexicon = lexicon
        elif self.config.lexicon_path:
            self.lexicon = load_lexicon(Path(self.config.lexicon_path))
        else:
            self.lexicon = default_lexicon()

        if genesis is None and self.config.snapshot_path:
            snap = Path(self.config.snapshot_path)
            if snap.exists():
                genesis = snap.read_bytes()
        if genesis is not None:
            self.kb, self.table = load_snapshot(genesis)
        else:
            self.kb, self.table = KnowledgeBase(), ContingencyTable()
        self._genesis = snapshot(self.kb, self.table)

        self.store = PostStore()
        self.thresholds: dict[str, ThresholdState] = {}
        self._awaiting_report: dict[str, frozenset] = {}
        self._reported: set[str] = set()
        self._lock = threading.RLock()

        if log_path is None:
            log_path = self.config.log_path
        self.log = EventLog(log_path)
        for record in self.log:
            self._apply(record)

    # -- helpers -----------------------------------------------------------

    def threshold_for(self, user_id: str) -> ThresholdState:
        state = self.thresholds.get(user_id)
        return state if state is not None else self.config.initial_threshold()

    def post(self, post_id: str) -> Post:
        return self.store.get(post_id)

    def snapshot(self) -> bytes:
        return snapshot(self.kb, self.table)

    def replayed(self) -> "Engine":
        """Fresh engine rebuilt from genesis plus this engine's event log."""
        clone = Engine(config=self.config, lexicon=self.lexicon,
                       genesis=self._genesis, log_path=None)
        for record in self.log:
            clone._apply(record)
        return clone

    def _commit(self, kind: str, payload: dict, at: float | None = None):
        record = self.log.append(kind, payload, at=at)
        return self._apply(record)

    # -- event application (shared by live path and replay) ----------------

    def _apply(self, record: EventRecord):
        return getattr(self, "_apply_" + record.kind)(record.payload, record.at)

    def _apply_post_created(self, payload: dict, at: float):
        annotations = payload["annotations"]
        post = Post(
            id=payload["post_id"],
            author=payload["user_id"],
            text=payload["text"],
            declared_audience=self.kb.audience(payload["declared_audience"]),
            created_at=at,
            annotations=None if annotations is None else sas_from_json(annotations),
            status=PostStatus(payload["status"]),
        )
        self.store.add(post)
        self.store.claim_id(post.id)
        return post

    def _apply_warning_raised(self, payload: dict, at: float):
        self.store.warnings[payload["post_id"]] = payload
        return payload

    def _apply_user_action(self, payload: dict, at: float):
        post = self.post(payload["post_id"])
        status = (
            PostStatus.PUBLISHED
            if payload["action"] == "publish"
            else PostStatus.RETRACTED
        )
        before = self.threshold_for(post.author)
        post, after = publish_or_retract(self.store, before, post.id, status)
        self.thresholds[post.author] = after
        window_closed = before.decisions_in_window + 1 >= before.tau
        return {
            "status": status.value,
            "phi": after.phi,
            "phi_before": before.phi,
            "window_closed": window_closed,
            "user_id": post.author,
        }

    def _apply_threshold_adjusted(self, payload: dict, at: float):
        # Audit marker; the threshold moved in the user_action that precedes it.
        return None

    def _apply_post_deleted(self, payload: dict, at: float):
        self.store.set_status(payload["post_id"], PostStatus.DELETED)
        if payload["prompt"]:
            self._awaiting_report[payload["post_id"]] = sas_from_json(
                payload["detected_sas"]
            )
        return payload

    def _apply_incident_reported(self, payload: dict, at: float):
        post_id = payload["post_id"]
        self._reported.add(post_id)
        sas = self._awaiting_report.pop(post_id, frozenset())
        if not payload["regretted"]:
            return {"matches": []}
        report = IncidentReport(
            post_id=post_id,
            regretted=True,
            uin=UnwantedIncident.from_label(payload["uin"]),
            unintended_audience=AudienceCircle.from_label(
                payload["unintended_audience"]
            ),
            consequence=parse_consequence(payload["consequence_level"]),
        )
        matches = record_incident(report, sas, self.kb, self.table)
        return {"matches": [m.to_json() for m in matches]}

    # -- mutations ---------------------------------------------------------

    def compose_post(
        self,
        user_id: str,
        text: str,
        declared_audience: str,
        annotations=None,
    ) -> dict:
        if not isinstance(user_id, str) or not user_id.strip():
            raise ValidationError("user_id must be a non-empty string")
        if not isinstance(text, str):
            raise ValidationError("text must be a string")
        parsed = (
            annotations
            if annotations is None or isinstance(annotations, frozenset)
            else parse_annotations(annotations)
        )
        with self._lock:
            audience = self.kb.audience(str(declared_audience))
            now = time.time()
            post_id = self.store.next_post_id()
            draft = Post(
                id=post_id,
                author=user_id,
                text=text,
                declared_audience=audience,
                created_at=now,
                annotations=parsed,
            )
            message = generate_warning(
                draft,
                self.kb,
                self.table,
                self.threshold_for(user_id),
                self.lexicon,
                alpha=self.config.alpha,
                n_min=self.config.n_min,
            )
            status = "pending" if message.items else "published"
            self._commit(
                "post_created",
                {
                    "post_id": post_id,
                    "user_id": user_id,
                    "text": text,
                    "declared_audience": audience.id,
                    "annotations": None if parsed is None else sas_to_json(parsed),
                    "status": "draft" if message.items else "published",
                },
                at=now,
            )
            if message.items:
                self._commit("warning_raised", message.detail_json(), at=now)
            return {
                "post_id": post_id,
                "status": status,
                "warning": message.to_json(),
            }

    def decide(self, post_id: str, action: str) -> dict:
        if action not in ("publish", "retract"):
            raise ValidationError(
                f"action must be 'publish' or 'retract', got {action!r}"
            )
        with self._lock:
            post = self.post(post_id)
            if post.status is not PostStatus.DRAFT:
                raise ConflictError(
                    f"post {post_id} is {_wire_status(post)}, not pending"
                )
            result = self._commit(
                "user_action", {"post_id": post_id, "action": action}
            )
            if result["window_closed"]:
                self._commit(
                    "threshold_adjusted",
                    {
                        "user_id": result["user_id"],
                        "phi_before": result["phi_before"],
                        "phi_after": result["phi"],
                    },
                )
            return {"status": result["status"], "phi": result["phi"]}

    def delete_post(self, post_id: str) -> dict:
        with self._lock:
            post = self.post(post_id)
            if post.status is not PostStatus.PUBLISHED:
                raise ConflictError(
                    f"post {post_id} is {_wire_status(post)}, not published"
                )
            sas = extract_sas(post, self.lexicon)
            payload = {
                "post_id": post_id,
                "user_id": post.author,
                "prompt": bool(sas),
                "detected_sas": sas_to_json(sas),
            }
            self._commit("post_deleted", payload)
            return {
                "prompt_incident_report": payload["prompt"],
                "detected_sas": payload["detected_sas"],
            }

    def submit_incident_report(
        self,
        post_id: str,
        regretted: bool,
        uin: str | None = None,
        unintended_audience: str | None = None,
        consequence_level: str | None = None,
    ) -> dict:
        if not isinstance(regretted, bool):
            raise ValidationError("regretted must be a boolean")
        with self._lock:
            post = self.post(post_id)
            if post.status is not PostStatus.DELETED:
                raise StateError(f"post {post_id} is {_wire_status(post)}, not deleted")
            if post_id in self._reported:
                raise ConflictError(f"post {post_id} already has an incident report")
            if post_id not in self._awaiting_report:
                raise StateError(
                    f"post {post_id} was deleted without an incident prompt"
                )
            payload: dict = {"post_id": post_id, "regretted": regretted}
            if regretted:
                details = {
                    "uin": uin,
                    "unintended_audience": unintended_audience,
                    "consequence_level": consequence_level,
                }
                for key, value in details.items():
                    if not isinstance(value, str) or not value.strip():
                        raise ValidationError(
                            f"regretted report requires a non-empty {key}"
                        )
                # Validate eagerly; the log must never hold a bad report.
                parse_consequence(consequence_level)
                payload.update(details)
                payload["sas"] = sas_to_json(self._awaiting_report[post_id])
            elif any(v is not None for v in (uin, unintended_audience, consequence_level)):
                raise ValidationError(
                    "non-regretted report must not carry incident details"
                )
            return self._commit("incident_reported", payload)

    # -- read-only views ---------------------------------------------------

    def heuristics_view(self) -> dict:
        items = []
        for ph_id in sorted(self.kb.heuristics):
            ph = self.kb.heuristics[ph_id]
            cells = []
            for uin_id in self.table.incidents_for(ph_id):
                freq = self.table.cell(ph_id, uin_id)
                result = criticality_result(freq, alpha=self.config.alpha)
                cells.append(
                    {
                        "uin": self.kb.incident(uin_id).to_json(),
                        "counts": list(freq.counts),
                        "risk": result.to_json(),
                    }
                )
            items.append(
                {
                    "id": ph.id,
                    "sas": sas_to_json(ph.sas),
                    "audience": ph.audience.to_json(),
                    "uins": [
                        self.kb.incident(uin_id).to_json()
                        for uin_id in sorted(u.id for u in ph.uins)
                    ],
                    "cells": cells,
                }
            )
        return {"heuristics": items}

    def contingency_view(self) -> dict:
        return {
            "cells": [
                {"ph": ph_id, "uin": uin_id, "counts": list(counts)}
                for (ph_id, uin_id), counts in sorted(self.table.nonzero_cells())
            ],
            "total_reports": self.table.grand_total(),
        }

    def risk_index(self, ph_id: str, uin_id: str, alpha: float | None = None) -> dict:
        ph = self.kb.heuristic(ph_id)
        uin = self.kb.incident(uin_id)
        freq = self.table.cell(ph.id, uin.id)
        if freq.n == 0:
            raise InsufficientEvidenceError(
                f"no reports recorded for ({ph.id}, {uin.id})"
            )
        result = criticality_result(
            freq, alpha=self.config.alpha if alpha is None else alpha
        )
        doc = result.to_json()
        doc.update(
            {
                "ph": ph.id,
                "uin": uin.id,
                "counts": list(freq.counts),
                "severity": result.ci_upper,
            }
        )
        return doc

    def threshold_view(self, user_id: str) -> dict:
        state = self.threshold_for(user_id)
        doc = state.to_json()
        doc["user_id"] = user_id
        doc["decisions_in_window"] = state.decisions_in_window
        return doc

    def vocabulary_view(self) -> dict:
        return {
            "attributes": sas_to_json(list(SurveillanceAttribute)),
            "audiences": [
                self.kb.audiences[a].to_json() for a in sorted(self.kb.audiences)
            ],
            "incidents": [
                self.kb.incidents[i].to_json() for i in sorted(self.kb.incidents)
            ],
            "consequence_levels": list(CONSEQUENCE_LABELS),
        }

    def close(self) -> None:
        self.log.close()


_ERROR_STATUS = (
    (NotFoundError, 404),
    (InsufficientEvidenceError, 404),
    (ConflictError, 409),
    (StateError, 409),
    (ParseError, 400),
    (ValidationError, 400),
    (IntegrityError, 500),
)


def _status_for(exc: SentinelError) -> int:
    for kind, code in _ERROR_STATUS:
        if isinstance(exc, kind):
            return code
    return 500


def create_app(
    engine: Engine | None = None,
    config: EngineConfig | None = None,
    static_dir: Path | str | None = None,
):
    """Build the FastAPI application around an engine."""
    from fastapi import Body, FastAPI, Query, Request
    from fastapi.exceptions import RequestValidationError
    from fastapi.responses import JSONResponse, Response

    if engine is None:
        engine = Engine(config=config)

    app = FastAPI(title="privacy-sentinel", docs_url=None, redoc_url=None)
    app.state.engine = engine

    @app.exception_handler(SentinelError)
    async def handle_domain_error(request: Request, exc: SentinelError):
        return JSONResponse(status_code=_status_for(exc), content={"error": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def handle_malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": "malformed request"})

    def _field(body: dict, name: str):
        if name not in body:
            raise ValidationError(f"missing field: {name}")
        return body[name]

    @app.post("/api/v1/posts")
    async def compose_post(body: dict = Body(...)):
        return engine.compose_post(
            user_id=_field(body, "user_id"),
            text=_field(body, "text"),
            declared_audience=_field(body, "declared_audience"),
            annotations=body.get("annotations"),
        )

    @app.post("/api/v1/posts/{post_id}/decision")
    async def decide(post_id: str, body: dict = Body(...)):
        action = _field(body, "action")
        if not isinstance(action, str):
            raise ValidationError("action must be a string")
        return engine.decide(post_id, action)

    @app.delete("/api/v1/posts/{post_id}")
    async def delete_post(post_id: str):
        return engine.delete_post(post_id)

    @app.post("/api/v1/incident-reports")
    async def incident_report(body: dict = Body(...)):
        return engine.submit_incident_report(
            post_id=_field(body, "post_id"),
            regretted=_field(body, "regretted"),
            uin=body.get("uin"),
            unintended_audience=body.get("unintended_audience"),
            consequence_level=body.get("consequence_level"),
        )

    @app.get("/api/v1/heuristics")
    async def heuristics():
        return engine.heuristics_view()

    @app.get("/api/v1/contingency-table")
    async def contingency_table():
        return engine.contingency_view()

    @app.get("/api/v1/risk-index")
    async def risk_index(
        ph: str = Query(...),
        uin: str = Query(...),
        alpha: float | None = Query(default=None),
    ):
        return engine.risk_index(ph, uin, alpha)

    @app.get("/api/v1/users/{user_id}/threshold")
    async def threshold(user_id: str):
        return engine.threshold_view(user_id)

    @app.get("/api/v1/vocabulary")
    async def vocabulary():
        return engine.vocabulary_view()

    @app.get("/api/v1/snapshot")
    async def snapshot_view():
        return Response(content=engine.snapshot(), media_type="application/json")

    @app.get("/api/v1/health")
    async def health():
        return {"status": "ok", "events": len(engine.log)}

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
