#!/usr/bin/env python3
"""Record JSON fixtures for the frontend tests from a live demo service.

Runs one scripted session against a demo-seeded engine over HTTP and
writes every notable response (and the incident-report request) under
test/fixtures/. Re-run after changing the service wire format.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from privacy_sentinel.config import EngineConfig
from privacy_sentinel.demo import demo_snapshot
from privacy_sentinel.service import Engine, create_app

FIXTURES = Path(__file__).resolve().parent.parent / "test" / "fixtures"

RISKY_TEXT = (
    "Had such a bad day at the office... I want to quit this job!! "
    "But then I remember I have bills to pay and I instantly get my act together:)"
)
INNOCUOUS_TEXT = "lovely weather today"


def dump(name: str, payload: object) -> None:
    path = FIXTURES / name
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {path.relative_to(FIXTURES.parent.parent)}")


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    engine = Engine(config=EngineConfig(), genesis=demo_snapshot())
    app = create_app(engine=engine)
    with TestClient(app) as http:
        dump("vocabulary.json", http.get("/api/v1/vocabulary").json())
        dump("heuristics.json", http.get("/api/v1/heuristics").json())
        dump("threshold.json", http.get("/api/v1/users/demo-user/threshold").json())

        pending = http.post(
            "/api/v1/posts",
            json={
                "user_id": "demo-user",
                "text": RISKY_TEXT,
                "declared_audience": "public",
            },
        ).json()
        dump("compose_pending.json", pending)

        dump(
            "compose_published.json",
            http.post(
                "/api/v1/posts",
                json={
                    "user_id": "demo-user",
                    "text": INNOCUOUS_TEXT,
                    "declared_audience": "public",
                },
            ).json(),
        )

        post_id = pending["post_id"]
        dump(
            "decision_publish.json",
            http.post(
                f"/api/v1/posts/{post_id}/decision", json={"action": "publish"}
            ).json(),
        )
        dump("delete_response.json", http.delete(f"/api/v1/posts/{post_id}").json())

        report_request = {
            "post_id": post_id,
            "regretted": True,
            "uin": "Job loss",
            "unintended_audience": "Work colleagues",
            "consequence_level": "moderate",
        }
        dump("report_request.json", report_request)
        dump(
            "report_response.json",
            http.post("/api/v1/incident-reports", json=report_request).json(),
        )
    engine.close()


if __name__ == "__main__":
    main()
