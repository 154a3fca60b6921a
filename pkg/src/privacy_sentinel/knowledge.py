"""Privacy-heuristics store and evidence table.

The knowledge base holds the heuristics plus the open audience/incident
vocabularies; the contingency table holds sparse per-(heuristic, incident)
consequence counts. Reported regrets flow in through ``record_incident``,
which applies the three matching rules:

  exact         same attribute set, same audience, incident already known
  new-incident  same attribute set, same audience, incident not yet attached
  absorbing     heuristic's attributes are a strict subset of the reported
                set, same audience, incident already known

If nothing matches, a fresh heuristic is created. Every matched (or created)
heuristic gets the reported consequence level counted once.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from enum import Enum

from .criticality import ConsequenceFrequency
from .errors import ConflictError, IntegrityError, NotFoundError, ParseError, ValidationError
from .model import (
    PREDEFINED_AUDIENCES,
    PREDEFINED_INCIDENTS,
    SCALE_SIZE,
    AudienceCircle,
    ConsequenceLevel,
    IncidentReport,
    PrivacyHeuristic,
    UnwantedIncident,
    canonical_id,
    sas_from_json,
    sas_to_json,
)

SNAPSHOT_VERSION = 1


class MatchMode(Enum):
    EXACT = "exact"
    NEW_INCIDENT = "new-incident"
    ABSORBING = "absorbing"


_MODE_ORDER = {MatchMode.EXACT: 0, MatchMode.NEW_INCIDENT: 1, MatchMode.ABSORBING: 2}


@dataclass(frozen=True)
class MatchResult:
    heuristic: PrivacyHeuristic
    mode: MatchMode
    created: bool = False

    def to_json(self) -> dict:
        return {
            "ph_id": self.heuristic.id,
            "mode": self.mode.value,
            "created": self.created,
        }


class KnowledgeBase:
    """Heuristics registry plus audience/incident vocabularies.

    Mutations are serialized on an internal lock; reads are plain dict
    lookups and safe alongside them.
    """

    def __init__(self):
        self._lock = threading.RLock()
        self.heuristics: dict[str, PrivacyHeuristic] = {}
        self.audiences: dict[str, AudienceCircle] = {}
        self.incidents: dict[str, UnwantedIncident] = {}
        self._ph_counter = 0
        for audience in PREDEFINED_AUDIENCES:
            self.audiences[audience.id] = audience
        for incident in PREDEFINED_INCIDENTS:
            self.incidents[incident.id] = incident

    # -- vocabularies ------------------------------------------------------

    def register_audience(self, label: str, predefined: bool = False) -> AudienceCircle:
        """Register (or fetch) an audience circle by label."""
        with self._lock:
            key = canonical_id(label)
            if key in self.audiences:
                return self.audiences[key]
            circle = AudienceCircle.from_label(label, predefined=predefined)
            self.audiences[circle.id] = circle
            return circle

    def register_incident(self, label: str, predefined: bool = False) -> UnwantedIncident:
        """Register (or fetch) an unwanted incident by label."""
        with self._lock:
            key = canonical_id(label)
            if key in self.incidents:
                return self.incidents[key]
            incident = UnwantedIncident.from_label(label, predefined=predefined)
            self.incidents[incident.id] = incident
            return incident

    def audience(self, audience_id: str) -> AudienceCircle:
        try:
            return self.audiences[audience_id]
        except KeyError:
            raise NotFoundError(f"unknown audience: {audience_id!r}") from None

    def incident(self, incident_id: str) -> UnwantedIncident:
        try:
            return self.incidents[incident_id]
        except KeyError:
            raise NotFoundError(f"unknown incident: {incident_id!r}") from None

    def heuristic(self, ph_id: str) -> PrivacyHeuristic:
        try:
            return self.heuristics[ph_id]
        except KeyError:
            raise NotFoundError(f"unknown heuristic: {ph_id!r}") from None

    # -- heuristics --------------------------------------------------------

    def _next_ph_id(self) -> str:
        self._ph_counter += 1
        return f"ph-{self._ph_counter:06d}"

    def add_heuristic(
        self,
        sas,
        audience: AudienceCircle,
        uin: UnwantedIncident,
    ) -> PrivacyHeuristic:
        """Insert a fresh heuristic for a scenario nothing matched."""
        sas = frozenset(sas)
        if not sas:
            raise ValidationError("heuristic attribute set must be non-empty")
        with self._lock:
            for ph in self.heuristics.values():
                if ph.sas == sas and ph.audience == audience:
                    raise ConflictError(
                        f"heuristic for this attribute set and audience exists: {ph.id}"
                    )
            self.register_audience(audience.label, predefined=audience.predefined)
            self.register_incident(uin.label, predefined=uin.predefined)
            ph = PrivacyHeuristic(
                id=self._next_ph_id(), sas=sas, audience=audience, uins={uin}
            )
            self.heuristics[ph.id] = ph
            return ph

    def match_heuristics(
        self,
        sas,
        audience: AudienceCircle,
        uin: UnwantedIncident,
    ) -> list[MatchResult]:
        """All heuristics matching a reported scenario, exact matches first."""
        sas = frozenset(sas)
        if not sas:
            raise ValidationError("reported attribute set must be non-empty")
        results = []
        for ph in self.heuristics.values():
            if ph.audience != audience:
                continue
            if ph.sas == sas:
                mode = MatchMode.EXACT if uin in ph.uins else MatchMode.NEW_INCIDENT
                results.append(MatchResult(ph, mode))
            elif ph.sas < sas and uin in ph.uins:
                results.append(MatchResult(ph, MatchMode.ABSORBING))
        results.sort(key=lambda m: (_MODE_ORDER[m.mode], m.heuristic.id))
        return results

    def applicable_heuristics(self, post_sas) -> list[PrivacyHeuristic]:
        """Heuristics whose attribute set is contained in the post's, by id."""
        post_sas = frozenset(post_sas)
        found = [ph for ph in self.heuristics.values() if ph.sas <= post_sas]
        found.sort(key=lambda ph: ph.id)
        return found


class ContingencyTable:
    """Sparse (heuristic, incident) -> consequence counts. Missing cells are
    all-zero."""

    def __init__(self):
        self._cells: dict[tuple[str, str], list[int]] = {}

    def cell(self, ph_id: str, uin_id: str) -> ConsequenceFrequency:
        counts = self._cells.get((ph_id, uin_id))
        if counts is None:
            return ConsequenceFrequency.zero()
        return ConsequenceFrequency(tuple(counts))

    def set_counts(self, ph_id: str, uin_id: str, counts) -> None:
        counts = list(counts)
        if len(counts) != SCALE_SIZE or any(
            not isinstance(c, int) or c < 0 for c in counts
        ):
            raise ValidationError(f"bad counts tuple: {counts!r}")
        if any(counts):
            self._cells[(ph_id, uin_id)] = counts
        else:
            self._cells.pop((ph_id, uin_id), None)

    def increment(self, ph_id: str, uin_id: str, level: ConsequenceLevel) -> None:
        counts = self._cells.setdefault((ph_id, uin_id), [0] * SCALE_SIZE)
        counts[level.rank - 1] += 1

    def nonzero_cells(self):
        """Iterate ((ph_id, uin_id), counts) for cells with any evidence."""
        for key, counts in self._cells.items():
            if any(counts):
                yield key, tuple(counts)

    def incidents_for(self, ph_id: str) -> list[str]:
        return sorted(
            uin_id
            for (cell_ph, uin_id), counts in self._cells.items()
            if cell_ph == ph_id and any(counts)
        )

    def grand_total(self) -> int:
        return sum(sum(counts) for counts in self._cells.values())


def get_uins(
    ph: PrivacyHeuristic | str,
    kb: KnowledgeBase,
    table: ContingencyTable,
) -> list[tuple[UnwantedIncident, ConsequenceFrequency]]:
    """Incidents with recorded evidence for a heuristic, with their counts."""
    ph_id = ph if isinstance(ph, str) else ph.id
    kb.heuristic(ph_id)  # not-found check
    return [
        (kb.incident(uin_id), table.cell(ph_id, uin_id))
        for uin_id in table.incidents_for(ph_id)
    ]


def record_incident(
    report: IncidentReport,
    sas,
    kb: KnowledgeBase,
    table: ContingencyTable,
) -> list[MatchResult]:
    """Fold one regret report into the knowledge base and evidence table.

    Applies every matching heuristic (attaching the incident first for
    new-incident matches) or creates a fresh heuristic when nothing matches.
    The whole update runs under the store lock, all-or-nothing for readers.
    """
    if not report.regretted:
        raise ValidationError("report is not regretted; nothing to record")
    sas = frozenset(sas)
    if not sas:
        raise ValidationError("reported attribute set must be non-empty")

    with kb._lock:
        audience = kb.register_audience(
            report.unintended_audience.label,
            predefined=report.unintended_audience.predefined,
        )
        uin = kb.register_incident(report.uin.label, predefined=report.uin.predefined)

        matches = kb.match_heuristics(sas, audience, uin)
        if not matches:
            ph = kb.add_heuristic(sas, audience, uin)
            matches = [MatchResult(ph, MatchMode.EXACT, created=True)]

        for match in matches:
            if match.mode is MatchMode.NEW_INCIDENT:
                match.heuristic.uins.add(uin)
            table.increment(match.heuristic.id, uin.id, report.consequence)
        return matches


# -- persistence -----------------------------------------------------------


def snapshot(kb: KnowledgeBase, table: ContingencyTable) -> bytes:
    """Deterministic JSON snapshot of the store and evidence table."""
    doc = {
        "version": SNAPSHOT_VERSION,
        "heuristics": [
            kb.heuristics[ph_id].to_json() for ph_id in sorted(kb.heuristics)
        ],
        "incidents": [kb.incidents[i].to_json() for i in sorted(kb.incidents)],
        "audiences": [kb.audiences[a].to_json() for a in sorted(kb.audiences)],
        "cells": [
            {"ph": ph_id, "uin": uin_id, "counts": list(counts)}
            for (ph_id, uin_id), counts in sorted(table.nonzero_cells())
        ],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


def load_snapshot(raw: bytes | str) -> tuple[KnowledgeBase, ContingencyTable]:
    """Rebuild a store from ``snapshot`` output, verifying invariants."""
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"snapshot is not valid JSON: {exc}", line=exc.lineno) from None
    if not isinstance(doc, dict) or doc.get("version") != SNAPSHOT_VERSION:
        raise ParseError(f"unsupported snapshot version: {doc.get('version')!r}")

    kb = KnowledgeBase()
    table = ContingencyTable()
    try:
        for item in doc.get("audiences", []):
            circle = AudienceCircle(
                id=item["id"], label=item["label"], predefined=bool(item["predefined"])
            )
            kb.audiences[circle.id] = circle
        for item in doc.get("incidents", []):
            incident = UnwantedIncident(
                id=item["id"], label=item["label"], predefined=bool(item["predefined"])
            )
            kb.incidents[incident.id] = incident

        max_counter = 0
        seen_scenarios = set()
        for item in doc.get("heuristics", []):
            sas = sas_from_json(item["sas"])
            audience = kb.audience(item["audience"])
            uins = {kb.incident(uin_id) for uin_id in item["uins"]}
            ph = PrivacyHeuristic(id=item["id"], sas=sas, audience=audience, uins=uins)
            scenario = (ph.sas, ph.audience.id)
            if scenario in seen_scenarios:
                raise IntegrityError(
                    f"duplicate heuristic for attribute set and audience: {ph.id}"
                )
            seen_scenarios.add(scenario)
            if ph.id in kb.heuristics:
                raise IntegrityError(f"duplicate heuristic id: {ph.id}")
            kb.heuristics[ph.id] = ph
            prefix, _, num = ph.id.partition("-")
            if prefix == "ph" and num.isdigit():
                max_counter = max(max_counter, int(num))
        kb._ph_counter = max_counter

        for item in doc.get("cells", []):
            counts = item["counts"]
            if len(counts) != SCALE_SIZE:
                raise IntegrityError(f"cell must have {SCALE_SIZE} counts: {item!r}")
            if any(not isinstance(c, int) or isinstance(c, bool) or c < 0 for c in counts):
                raise IntegrityError(f"negative or non-integer count in cell: {item!r}")
            ph = kb.heuristic(item["ph"])
            uin = kb.incident(item["uin"])
            if any(counts) and uin not in ph.uins:
                raise IntegrityError(
                    f"cell ({ph.id}, {uin.id}) has evidence but the incident "
                    f"is not attached to the heuristic"
                )
            table.set_counts(ph.id, uin.id, counts)
    except (KeyError, TypeError, ValidationError) as exc:
        raise ParseError(f"malformed snapshot entry: {exc}") from None
    except NotFoundError as exc:
        raise IntegrityError(str(exc)) from None

    return kb, table
