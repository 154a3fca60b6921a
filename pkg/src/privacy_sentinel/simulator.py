"""Deterministic synthetic-population harness.

Simulated agents post, regret, report and react to warnings against a fresh
engine, so the estimator's convergence, interval coverage and threshold
dynamics can be measured without human participants. Every run is fully
seeded: each agent draws from its own substream keyed by (seed, agent
position), so two runs with the same config produce byte-identical reports
(runtime aside).

By default the simulator calls the engine library directly; an HTTP backend
drives the same loop through the JSON API for end-to-end smoke testing.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import EngineConfig
from .criticality import true_index
from .errors import ValidationError
from .model import SurveillanceAttribute, sas_to_json
from .service import Engine

CONSEQUENCE_NAMES = ("catastrophic", "major", "moderate", "minor", "insignificant")


@dataclass(frozen=True)
class UinSpec:
    """One incident an agent may suffer, with its ground-truth severity."""

    uin: str
    probability: float
    consequences: tuple[float, float, float, float, float]

    def __post_init__(self):
        if not 0.0 <= self.probability <= 1.0:
            raise ValidationError(
                f"incident probability must be in [0,1], got {self.probability}"
            )
        if len(self.consequences) != 5:
            raise ValidationError("consequence distribution needs 5 probabilities")
        if any(p < 0 for p in self.consequences):
            raise ValidationError("consequence probabilities cannot be negative")
        if abs(sum(self.consequences) - 1.0) > 1e-9:
            raise ValidationError("consequence distribution must sum to 1")

    @property
    def true_index(self) -> float:
        return true_index(self.consequences)


@dataclass(frozen=True)
class ScenarioSpec:
    """A disclosure pattern agents post about, plus what can go wrong."""

    name: str
    sas: frozenset[SurveillanceAttribute]
    audience: str
    incidents: tuple[UinSpec, ...]

    def __post_init__(self):
        if not self.name:
            raise ValidationError("scenario needs a name")
        if not self.sas:
            raise ValidationError("scenario attribute set must be non-empty")
        if not self.audience.strip():
            raise ValidationError("scenario audience must be non-empty")
        total = sum(spec.probability for spec in self.incidents)
        if total > 1.0 + 1e-9:
            raise ValidationError(
                f"incident probabilities sum to {total:.4f}, must be <= 1"
            )


@dataclass(frozen=True)
class AgentSpec:
    id: str
    post_rate: float
    heed_probability: float
    scenario_mix: dict[str, float]

    def __post_init__(self):
        if not self.id:
            raise ValidationError("agent needs an id")
        if self.post_rate < 0:
            raise ValidationError("post_rate cannot be negative")
        if not 0.0 <= self.heed_probability <= 1.0:
            raise ValidationError("heed_probability must be in [0,1]")
        if not self.scenario_mix or any(w < 0 for w in self.scenario_mix.values()):
            raise ValidationError("scenario_mix needs non-negative weights")
        if sum(self.scenario_mix.values()) <= 0:
            raise ValidationError("scenario_mix weights must not all be zero")


@dataclass(frozen=True)
class SimConfig:
    scenarios: tuple[ScenarioSpec, ...]
    agents: tuple[AgentSpec, ...]
    steps: int
    seed: int = 0
    engine: EngineConfig = field(default_factory=EngineConfig)

    def __post_init__(self):
        if self.steps < 1:
            raise ValidationError("steps must be at least 1")
        if not self.scenarios or not self.agents:
            raise ValidationError("need at least one scenario and one agent")
        names = [s.name for s in self.scenarios]
        if len(set(names)) != len(names):
            raise ValidationError("scenario names must be unique")
        known = set(names)
        for agent in self.agents:
            missing = set(agent.scenario_mix) - known
            if missing:
                raise ValidationError(
                    f"agent {agent.id} references unknown scenarios: {sorted(missing)}"
                )

    @classmethod
    def from_json(cls, doc: dict) -> "SimConfig":
        try:
            scenarios = tuple(
                ScenarioSpec(
                    name=s["name"],
                    sas=frozenset(
                        SurveillanceAttribute.from_attribute_name(a) for a in s["sas"]
                    ),
                    audience=s["audience"],
                    incidents=tuple(
                        UinSpec(
                            uin=i["uin"],
                            probability=float(i["probability"]),
                            consequences=tuple(float(p) for p in i["consequences"]),
                        )
                        for i in s.get("incidents", [])
                    ),
                )
                for s in doc["scenarios"]
            )
            agents = tuple(
                AgentSpec(
                    id=a["id"],
                    post_rate=float(a.get("post_rate", 1.0)),
                    heed_probability=float(a.get("heed_probability", 0.5)),
                    scenario_mix={k: float(v) for k, v in a["scenario_mix"].items()},
                )
                for a in doc["agents"]
            )
            engine = EngineConfig(**doc.get("engine", {}))
            return cls(
                scenarios=scenarios,
                agents=agents,
                steps=int(doc["steps"]),
                seed=int(doc.get("seed", 0)),
                engine=engine,
            )
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed simulation config: {exc}") from None


# -- backends --------------------------------------------------------------


class LibraryBackend:
    """Drive a private engine instance through direct calls."""

    def __init__(self, config: EngineConfig):
        self.engine = Engine(config=config)

    def compose(self, user_id, text, audience_id, annotations):
        return self.engine.compose_post(user_id, text, audience_id, annotations)

    def decide(self, post_id, action):
        return self.engine.decide(post_id, action)

    def delete(self, post_id):
        return self.engine.delete_post(post_id)

    def report(self, post_id, uin, audience, level):
        return self.engine.submit_incident_report(
            post_id,
            regretted=True,
            uin=uin,
            unintended_audience=audience,
            consequence_level=level,
        )

    def phi(self, user_id):
        return self.engine.threshold_for(user_id).phi

    def heuristics(self):
        return self.engine.heuristics_view()


class HttpBackend:
    """Drive a running service through the JSON API.

    Accepts any httpx-compatible client, so tests can pass one wired to an
    in-process ASGI transport.
    """

    def __init__(self, base_url: str | None = None, client=None):
        if client is None:
            import httpx

            client = httpx.Client(base_url=base_url.rstrip("/"), timeout=30.0)
        self.client = client

    def _check(self, response):
        if response.status_code != 200:
            raise ValidationError(
                f"service call failed ({response.status_code}): {response.text}"
            )
        return response.json()

    def compose(self, user_id, text, audience_id, annotations):
        return self._check(
            self.client.post(
                "/api/v1/posts",
                json={
                    "user_id": user_id,
                    "text": text,
                    "declared_audience": audience_id,
                    "annotations": annotations,
                },
            )
        )

    def decide(self, post_id, action):
        return self._check(
            self.client.post(
                f"/api/v1/posts/{post_id}/decision", json={"action": action}
            )
        )

    def delete(self, post_id):
        return self._check(self.client.delete(f"/api/v1/posts/{post_id}"))

    def report(self, post_id, uin, audience, level):
        return self._check(
            self.client.post(
                "/api/v1/incident-reports",
                json={
                    "post_id": post_id,
                    "regretted": True,
                    "uin": uin,
                    "unintended_audience": audience,
                    "consequence_level": level,
                },
            )
        )

    def phi(self, user_id):
        return self._check(self.client.get(f"/api/v1/users/{user_id}/threshold"))["phi"]

    def heuristics(self):
        return self._check(self.client.get("/api/v1/heuristics"))


# -- post synthesis --------------------------------------------------------


def synthesize_post(scenario: ScenarioSpec, rng: np.random.Generator) -> dict:
    """Compose-request fields whose extracted attributes are exactly the
    scenario's, regardless of lexicon contents (annotations pin them)."""
    nonce = int(rng.integers(0, 1_000_000))
    return {
        "text": f"simulated {scenario.name} post #{nonce}",
        "annotations": [sa.attribute for sa in sorted(scenario.sas, key=lambda s: s.canonical)],
    }


# -- the run loop ----------------------------------------------------------


class _TraceWriter:
    def __init__(self, path: Path):
        self.handle = path.open("w", newline="", encoding="utf-8")
        self.writer = csv.writer(self.handle)
        self.writer.writerow(
            ["step", "agent", "post_id", "warned", "action", "incident",
             "consequence", "phi"]
        )

    def row(self, *values):
        self.writer.writerow(values)

    def close(self):
        self.handle.close()


def run_simulation(
    config: SimConfig,
    backend=None,
    trace_path: Path | str | None = None,
) -> dict:
    """Run the full loop and return the simulation report.

    Per step and agent, draws happen in a fixed order (post count, scenario,
    heed, incident, consequence) from the agent's own substream, so the
    stream stays aligned however the engine responds.
    """
    started = time.perf_counter()
    if backend is None:
        backend = LibraryBackend(config.engine)
    trace = _TraceWriter(Path(trace_path)) if trace_path else None

    scenario_by_name = {s.name: s for s in config.scenarios}
    rngs = [
        np.random.default_rng([config.seed, index])
        for index in range(len(config.agents))
    ]
    mixes = []
    for agent in config.agents:
        names = sorted(agent.scenario_mix)
        weights = np.array([agent.scenario_mix[n] for n in names], dtype=float)
        mixes.append((names, np.cumsum(weights / weights.sum())))
    consequence_cum = {
        (scenario.name, spec.uin): np.cumsum(spec.consequences)
        for scenario in config.scenarios
        for spec in scenario.incidents
    }

    totals = {"posts": 0, "warnings": 0, "published": 0, "retracted": 0, "reports": 0}
    agent_stats = [
        {"id": agent.id, "posts": 0, "warnings": 0, "retracted": 0,
         "phi_trajectory": []}
        for agent in config.agents
    ]

    for step in range(config.steps):
        for index, agent in enumerate(config.agents):
            rng = rngs[index]
            whole = int(agent.post_rate)
            frac = agent.post_rate - whole
            n_posts = whole + (1 if frac > 0 and rng.random() < frac else 0)
            for _ in range(n_posts):
                names, mix_cum = mixes[index]
                pick = 0
                if len(names) > 1:
                    pick = int(np.searchsorted(mix_cum, rng.random(), side="right"))
                scenario = scenario_by_name[names[min(pick, len(names) - 1)]]
                fieldsets = synthesize_post(scenario, rng)
                result = backend.compose(
                    agent.id, fieldsets["text"], "public", fieldsets["annotations"]
                )
                post_id = result["post_id"]
                totals["posts"] += 1
                agent_stats[index]["posts"] += 1

                action = "auto-publish"
                if result["status"] == "pending":
                    totals["warnings"] += 1
                    agent_stats[index]["warnings"] += 1
                    heed = rng.random() < agent.heed_probability
                    action = "retract" if heed else "publish"
                    backend.decide(post_id, action)
                published = action in ("publish", "auto-publish")
                if published:
                    totals["published"] += 1
                else:
                    totals["retracted"] += 1
                    agent_stats[index]["retracted"] += 1

                incident = None
                level = None
                if published:
                    draw = rng.random()
                    edge = 0.0
                    for spec in scenario.incidents:
                        edge += spec.probability
                        if draw < edge:
                            incident = spec
                            break
                    if incident is not None:
                        cum = consequence_cum[(scenario.name, incident.uin)]
                        rank = int(np.searchsorted(cum, rng.random(), side="right"))
                        level = CONSEQUENCE_NAMES[min(rank, 4)]
                        backend.delete(post_id)
                        backend.report(
                            post_id, incident.uin, scenario.audience, level
                        )
                        totals["reports"] += 1
                if trace:
                    trace.row(
                        step, agent.id, post_id,
                        int(action not in ("auto-publish",)),
                        action, incident.uin if incident else "", level or "",
                        f"{backend.phi(agent.id):.4f}",
                    )
            agent_stats[index]["phi_trajectory"].append(backend.phi(agent.id))

    scenario_stats = _collect_scenario_stats(config, backend.heuristics())
    if trace:
        trace.close()

    report = {
        "seed": config.seed,
        "steps": config.steps,
        "agents": agent_stats,
        "scenario_stats": scenario_stats,
        "totals": totals,
        "runtime_seconds": time.perf_counter() - started,
    }
    return report


def _collect_scenario_stats(config: SimConfig, heuristics_doc: dict) -> list[dict]:
    """Final estimate vs ground truth for every (scenario, incident) pair."""
    stats = []
    for scenario in config.scenarios:
        wanted_sas = sas_to_json(scenario.sas)
        audience_key = " ".join(scenario.audience.split()).lower()
        entry = next(
            (
                h
                for h in heuristics_doc["heuristics"]
                if h["sas"] == wanted_sas and h["audience"]["id"] == audience_key
            ),
            None,
        )
        for spec in scenario.incidents:
            uin_key = " ".join(spec.uin.split()).lower()
            cell = None
            if entry is not None:
                cell = next(
                    (c for c in entry["cells"] if c["uin"]["id"] == uin_key), None
                )
            row = {
                "scenario": scenario.name,
                "uin": spec.uin,
                "true_index": spec.true_index,
                "estimate": None,
                "ci_lower": None,
                "ci_upper": None,
                "abs_error": None,
                "covered": False,
                "n": 0,
            }
            if cell is not None:
                risk = cell["risk"]
                row.update(
                    {
                        "estimate": risk["point"],
                        "ci_lower": risk["ci_lower"],
                        "ci_upper": risk["ci_upper"],
                        "abs_error": abs(risk["point"] - spec.true_index),
                        "covered": risk["ci_lower"]
                        <= spec.true_index
                        <= risk["ci_upper"],
                        "n": risk["n"],
                    }
                )
            stats.append(row)
    return stats


def canonical_json(report: dict) -> bytes:
    """Report bytes with runtime stripped; equal seeds give equal bytes."""
    doc = {k: v for k, v in report.items() if k != "runtime_seconds"}
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


def load_sim_config(path: Path | str) -> SimConfig:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ValidationError(f"cannot read simulation config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"simulation config is not valid JSON: {exc}") from None
    return SimConfig.from_json(doc)
