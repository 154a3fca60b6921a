"""Adaptive risk warnings for drafted posts.

``generate_warning`` runs the full check: extract the post's surveillance
attributes, find every heuristic contained in them, score each attached
incident from the evidence table, keep items at or above the user's
threshold, deduplicate on (incident, audience) keeping the worst, and sort
by severity. ``record_user_action`` folds accept/ignore decisions back into
the threshold: after each full window the threshold steps toward whichever
reaction dominated.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from enum import Enum

from .criticality import CriticalityResult, criticality_result
from .errors import NotFoundError, StateError, ValidationError
from .knowledge import ContingencyTable, KnowledgeBase
from .lexicon import Lexicon, extract_sas
from .model import (
    AudienceCircle,
    Post,
    PostStatus,
    PrivacyHeuristic,
    UnwantedIncident,
    sas_to_json,
)

DEFAULT_PHI = 0.5
DEFAULT_DELTA = 0.05
DEFAULT_TAU = 10
DEFAULT_PHI_MIN = 0.05
DEFAULT_PHI_MAX = 0.95


@dataclass(frozen=True)
class ThresholdState:
    """Per-user warning threshold plus the feedback counters for one window.

    ``tau`` decisions make a window. When it closes, the threshold moves up
    by ``delta`` if ignores outnumbered accepts (the user finds warnings too
    chatty), down if accepts outnumbered ignores (the user wants more), and
    stays put on a tie. The result is clamped to [phi_min, phi_max] and the
    counters reset.
    """

    phi: float = DEFAULT_PHI
    delta: float = DEFAULT_DELTA
    tau: int = DEFAULT_TAU
    phi_min: float = DEFAULT_PHI_MIN
    phi_max: float = DEFAULT_PHI_MAX
    accepted: int = 0
    ignored: int = 0

    def __post_init__(self):
        if not 0.0 <= self.phi_min <= self.phi_max <= 1.0:
            raise ValidationError(
                f"need 0 <= phi_min <= phi_max <= 1, got "
                f"[{self.phi_min}, {self.phi_max}]"
            )
        if not self.phi_min <= self.phi <= self.phi_max:
            raise ValidationError(
                f"phi {self.phi} outside [{self.phi_min}, {self.phi_max}]"
            )
        if self.delta < 0:
            raise ValidationError(f"delta must be non-negative, got {self.delta}")
        if self.tau < 1:
            raise ValidationError(f"tau must be at least 1, got {self.tau}")
        if self.accepted < 0 or self.ignored < 0:
            raise ValidationError("feedback counters cannot be negative")

    @property
    def decisions_in_window(self) -> int:
        return self.accepted + self.ignored

    def to_json(self) -> dict:
        return {
            "phi": self.phi,
            "delta": self.delta,
            "tau": self.tau,
            "phi_min": self.phi_min,
            "phi_max": self.phi_max,
            "accepted": self.accepted,
            "ignored": self.ignored,
        }


class UserActionKind(Enum):
    ACCEPTED = "accepted"
    IGNORED = "ignored"


@dataclass(frozen=True)
class UserAction:
    post_id: str
    kind: UserActionKind
    at: float = field(default_factory=time.time)


@dataclass(frozen=True)
class WarningItem:
    """One incident the user is warned about, for one audience."""

    uin: UnwantedIncident
    audience: AudienceCircle
    heuristic: PrivacyHeuristic
    result: CriticalityResult

    @property
    def severity(self) -> float:
        return self.result.ci_upper

    def to_json(self) -> dict:
        return {
            "uin": self.uin.label,
            "audience": self.audience.label,
            "severity": round(self.severity, 3),
        }


@dataclass(frozen=True)
class WarningMessage:
    post_id: str
    items: tuple[WarningItem, ...]
    phi: float
    sas: frozenset

    def __bool__(self) -> bool:
        return bool(self.items)

    def to_json(self) -> dict:
        return {
            "post_id": self.post_id,
            "items": [item.to_json() for item in self.items],
        }

    def detail_json(self) -> dict:
        doc = self.to_json()
        doc["phi"] = self.phi
        doc["sas"] = sas_to_json(self.sas)
        return doc


def generate_warning(
    post: Post,
    kb: KnowledgeBase,
    table: ContingencyTable,
    state: ThresholdState,
    lexicon: Lexicon | None = None,
    alpha: float = 0.05,
    n_min: int = 1,
) -> WarningMessage:
    """Score a draft against the knowledge base and keep items over threshold.

    Cells with fewer than ``n_min`` observations are skipped; there is no
    defensible interval for them. Items tie on (incident, audience) keep
    only the highest severity, and the survivors come back sorted worst
    first (id-ordered on exact ties, so output is deterministic).
    """
    sas = extract_sas(post, lexicon)
    best: dict[tuple[str, str], WarningItem] = {}
    for ph in kb.applicable_heuristics(sas):
        for uin_id in table.incidents_for(ph.id):
            freq = table.cell(ph.id, uin_id)
            if freq.n < n_min:
                continue
            result = criticality_result(freq, alpha=alpha)
            if result.ci_upper < state.phi:
                continue
            item = WarningItem(
                uin=kb.incident(uin_id),
                audience=ph.audience,
                heuristic=ph,
                result=result,
            )
            key = (uin_id, ph.audience.id)
            kept = best.get(key)
            if kept is None or item.severity > kept.severity:
                best[key] = item
    items = sorted(
        best.values(), key=lambda it: (-it.severity, it.uin.id, it.audience.id)
    )
    return WarningMessage(post_id=post.id, items=tuple(items), phi=state.phi, sas=sas)


def record_user_action(state: ThresholdState, action: UserAction) -> ThresholdState:
    """Count one accept/ignore and close the window when it fills."""
    if action.kind is UserActionKind.ACCEPTED:
        state = replace(state, accepted=state.accepted + 1)
    else:
        state = replace(state, ignored=state.ignored + 1)
    if state.decisions_in_window < state.tau:
        return state
    phi = state.phi
    if state.ignored > state.accepted:
        phi += state.delta
    elif state.ignored < state.accepted:
        phi -= state.delta
    phi = min(max(phi, state.phi_min), state.phi_max)
    return replace(state, phi=phi, accepted=0, ignored=0)


class PostStore:
    """Posts by id, with the warning (if any) raised for each draft."""

    def __init__(self):
        self.posts: dict[str, Post] = {}
        self.warnings: dict[str, WarningMessage] = {}
        self._counter = 0

    def next_post_id(self) -> str:
        self._counter += 1
        return f"post-{self._counter:06d}"

    def claim_id(self, post_id: str) -> None:
        """Keep the id counter ahead of externally supplied ids."""
        prefix, _, num = post_id.partition("-")
        if prefix == "post" and num.isdigit():
            self._counter = max(self._counter, int(num))

    def add(self, post: Post, warning: WarningMessage | None = None) -> None:
        if post.id in self.posts:
            raise StateError(f"post already exists: {post.id}")
        self.posts[post.id] = post
        if warning is not None and warning.items:
            self.warnings[post.id] = warning

    def get(self, post_id: str) -> Post:
        try:
            return self.posts[post_id]
        except KeyError:
            raise NotFoundError(f"unknown post: {post_id!r}") from None

    def set_status(self, post_id: str, status: PostStatus) -> Post:
        post = self.get(post_id).with_status(status)
        self.posts[post_id] = post
        return post


_DECISION_FOR_STATUS = {
    PostStatus.PUBLISHED: UserActionKind.IGNORED,
    PostStatus.RETRACTED: UserActionKind.ACCEPTED,
}


def publish_or_retract(
    store: PostStore,
    state: ThresholdState,
    post_id: str,
    status: PostStatus,
) -> tuple[Post, ThresholdState]:
    """Resolve a draft. Publishing past a warning counts as an ignore,
    retracting as an accept; drafts that never warned leave the threshold
    alone."""
    if status not in _DECISION_FOR_STATUS:
        raise ValidationError(f"cannot resolve a draft to {status.value!r}")
    post = store.get(post_id)
    if post.status is not PostStatus.DRAFT:
        raise StateError(f"post {post_id} is {post.status.value}, not a draft")
    post = store.set_status(post_id, status)
    if post_id in store.warnings:
        action = UserAction(post_id=post_id, kind=_DECISION_FOR_STATUS[status])
        state = record_user_action(state, action)
    return post, state


def render_warning(message: WarningMessage) -> dict:
    """Wire shape for a warning: labels only, severity at three decimals."""
    return message.to_json()


def warning_json(message: WarningMessage) -> dict:
    return render_warning(message)
