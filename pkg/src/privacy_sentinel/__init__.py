"""Adaptive privacy-risk awareness for self-disclosure in social platforms.

The engine learns recurrent regrettable disclosure patterns from reports on
deleted posts, estimates how severe each associated incident tends to be,
and warns users before they publish similar content, tuning its own warning
threshold to each user's reactions.
"""

from .awareness import (
    ThresholdState,
    UserAction,
    UserActionKind,
    WarningItem,
    WarningMessage,
    generate_warning,
    publish_or_retract,
    record_user_action,
)
from .config import EngineConfig, load_config
from .demo import demo_snapshot, demo_state
from .criticality import (
    ConsequenceFrequency,
    CriticalityResult,
    confidence_interval,
    criticality_estimate,
    criticality_result,
    criticality_variance,
    empirical_cdf,
    severity_score,
    true_index,
)
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
from .events import EventLog, EventRecord, read_events
from .knowledge import (
    ContingencyTable,
    KnowledgeBase,
    MatchMode,
    MatchResult,
    get_uins,
    load_snapshot,
    record_incident,
    snapshot,
)
from .lexicon import Lexicon, default_lexicon, extract_sas, load_lexicon
from .model import (
    AudienceCircle,
    ConsequenceLevel,
    IncidentReport,
    Post,
    PostStatus,
    PrivacyHeuristic,
    SurveillanceAttribute,
    UnwantedIncident,
)
from .service import Engine, create_app

__version__ = "0.1.0"

__all__ = [
    "AudienceCircle",
    "ConflictError",
    "ConsequenceFrequency",
    "ConsequenceLevel",
    "ContingencyTable",
    "CriticalityResult",
    "Engine",
    "EngineConfig",
    "EventLog",
    "EventRecord",
    "IncidentReport",
    "InsufficientEvidenceError",
    "IntegrityError",
    "KnowledgeBase",
    "Lexicon",
    "MatchMode",
    "MatchResult",
    "NotFoundError",
    "ParseError",
    "Post",
    "PostStatus",
    "PrivacyHeuristic",
    "SentinelError",
    "StateError",
    "SurveillanceAttribute",
    "ThresholdState",
    "UnwantedIncident",
    "UserAction",
    "UserActionKind",
    "ValidationError",
    "WarningItem",
    "WarningMessage",
    "confidence_interval",
    "create_app",
    "criticality_estimate",
    "criticality_result",
    "criticality_variance",
    "default_lexicon",
    "demo_snapshot",
    "demo_state",
    "empirical_cdf",
    "extract_sas",
    "generate_warning",
    "get_uins",
    "load_config",
    "load_lexicon",
    "load_snapshot",
    "publish_or_retract",
    "read_events",
    "record_incident",
    "record_user_action",
    "severity_score",
    "snapshot",
    "true_index",
]
