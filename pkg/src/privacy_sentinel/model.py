"""Core vocabulary of the engine: disclosure attributes, severity scale,
audiences, incidents, posts, heuristics and regret reports.

Everything here is a plain value type. Identity rules matter: attributes are a
closed enumeration, audience circles and incidents are open vocabularies keyed
by canonical ids, and heuristics are unique per (attribute set, audience).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from enum import Enum

from .errors import ValidationError


class SurveillanceAttribute(Enum):
    """Closed taxonomy of self-disclosure attributes, grouped in 9 dimensions.

    Equality and hashing are by member identity; the (dimension, attribute)
    pair is the display form.
    """

    # Demographics
    AGE = ("Demographics", "Age")
    GENDER = ("Demographics", "Gender")
    NATIONALITY = ("Demographics", "Nationality")
    RACIAL_ORIGIN = ("Demographics", "Racial origin")
    ETHNICITY = ("Demographics", "Ethnicity")
    LITERACY_LEVEL = ("Demographics", "Literacy level")
    EMPLOYMENT_STATUS = ("Demographics", "Employment status")
    INCOME_LEVEL = ("Demographics", "Income level")
    FAMILY_STATUS = ("Demographics", "Family status")
    # Sexual Profile
    SEXUAL_PREFERENCE = ("Sexual Profile", "Sexual preference")
    # Political Attitudes
    SUPPORTED_PARTY = ("Political Attitudes", "Supported party")
    POLITICAL_IDEOLOGY = ("Political Attitudes", "Political ideology")
    # Religious Beliefs
    SUPPORTED_RELIGION = ("Religious Beliefs", "Supported religion")
    # Health Factors and Condition
    SMOKING = ("Health Factors and Condition", "Smoking")
    ALCOHOL_DRINKING = ("Health Factors and Condition", "Alcohol drinking")
    DRUG_USE = ("Health Factors and Condition", "Drug use")
    CHRONIC_DISEASES = ("Health Factors and Condition", "Chronic diseases")
    DISABILITIES = ("Health Factors and Condition", "Disabilities")
    OTHER_HEALTH_FACTORS = ("Health Factors and Condition", "Other health factors")
    # Location
    HOME_LOCATION = ("Location", "Home location")
    WORK_LOCATION = ("Location", "Work location")
    FAVORITE_PLACES = ("Location", "Favorite places")
    VISITED_PLACES = ("Location", "Visited places")
    # Administrative
    PERSONAL_IDENTIFICATION_NUMBER = ("Administrative", "Personal Identification Number")
    # Contact
    EMAIL_ADDRESS = ("Contact", "Email address")
    PHONE_NUMBER = ("Contact", "Phone number")
    # Sentiment
    NEGATIVE = ("Sentiment", "Negative")
    NEUTRAL = ("Sentiment", "Neutral")
    POSITIVE = ("Sentiment", "Positive")

    @property
    def dimension(self) -> str:
        return self.value[0]

    @property
    def attribute(self) -> str:
        return self.value[1]

    @property
    def canonical(self) -> str:
        """Stable sort key, also used in serialized attribute sets."""
        return f"{self.dimension}/{self.attribute}"

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "attribute": self.attribute}

    @classmethod
    def from_attribute_name(cls, name: str) -> "SurveillanceAttribute":
        """Look up a member by its attribute display name, case-insensitive."""
        try:
            return _BY_ATTRIBUTE_NAME[name.strip().lower()]
        except (KeyError, AttributeError):
            raise ValidationError(
                f"unknown surveillance attribute: {name!r}"
            ) from None

    @classmethod
    def from_json(cls, obj: dict) -> "SurveillanceAttribute":
        try:
            member = cls.from_attribute_name(obj["attribute"])
        except (TypeError, KeyError):
            raise ValidationError(f"malformed attribute encoding: {obj!r}") from None
        wanted = str(obj.get("dimension", "")).strip().lower()
        if wanted and member.dimension.lower() != wanted:
            raise ValidationError(
                f"attribute {member.attribute!r} belongs to dimension "
                f"{member.dimension!r}, not {obj['dimension']!r}"
            )
        return member


_BY_ATTRIBUTE_NAME = {
    sa.attribute.lower(): sa for sa in SurveillanceAttribute
}

DIMENSIONS = tuple(dict.fromkeys(sa.dimension for sa in SurveillanceAttribute))

SENTIMENT_ATTRIBUTES = frozenset(
    sa for sa in SurveillanceAttribute if sa.dimension == "Sentiment"
)


def sas_to_json(sas) -> list[dict]:
    """Serialize an attribute set as a sorted array (canonical order)."""
    return [sa.to_json() for sa in sorted(sas, key=lambda s: s.canonical)]


def sas_from_json(items) -> frozenset[SurveillanceAttribute]:
    return frozenset(SurveillanceAttribute.from_json(obj) for obj in items)


class ConsequenceLevel(Enum):
    """Five-point ordinal severity scale; rank 1 is the most severe."""

    CATASTROPHIC = 1
    MAJOR = 2
    MODERATE = 3
    MINOR = 4
    INSIGNIFICANT = 5

    @property
    def rank(self) -> int:
        return self.value

    @property
    def label(self) -> str:
        return self.name.lower()

    def __lt__(self, other):
        if isinstance(other, ConsequenceLevel):
            return self.value < other.value
        return NotImplemented


#: Number of consequence levels. The scale is fixed; counts tuples, the
#: estimator and the serialized formats all assume exactly five ranks.
SCALE_SIZE = 5

CONSEQUENCE_LABELS = tuple(level.label for level in ConsequenceLevel)


def parse_consequence(label: str) -> ConsequenceLevel:
    """Parse a consequence-level name, case-insensitive."""
    if isinstance(label, str):
        key = label.strip().lower()
        for level in ConsequenceLevel:
            if level.label == key:
                return level
    raise ValidationError(
        f"unknown consequence level {label!r}; expected one of: "
        + ", ".join(CONSEQUENCE_LABELS)
    )


def canonical_id(label: str) -> str:
    """Canonical identifier for an open-vocabulary label.

    Lower-cased with whitespace runs collapsed, so 'Work  Colleagues ' and
    'work colleagues' dedupe to the same entry.
    """
    return " ".join(str(label).split()).lower()


@dataclass(frozen=True, eq=False)
class AudienceCircle:
    """A collection of recipients a post may reach. Identity is the id."""

    id: str
    label: str
    predefined: bool = False

    def __eq__(self, other):
        return isinstance(other, AudienceCircle) and self.id == other.id

    def __hash__(self):
        return hash(("audience", self.id))

    @classmethod
    def from_label(cls, label: str, predefined: bool = False) -> "AudienceCircle":
        label = " ".join(str(label).split())
        if not label:
            raise ValidationError("audience label must be non-empty")
        return cls(id=canonical_id(label), label=label, predefined=predefined)

    def to_json(self) -> dict:
        return {"id": self.id, "label": self.label, "predefined": self.predefined}


@dataclass(frozen=True, eq=False)
class UnwantedIncident:
    """A negative outcome of disclosure. Identity is the id."""

    id: str
    label: str
    predefined: bool = False

    def __eq__(self, other):
        return isinstance(other, UnwantedIncident) and self.id == other.id

    def __hash__(self):
        return hash(("incident", self.id))

    @classmethod
    def from_label(cls, label: str, predefined: bool = False) -> "UnwantedIncident":
        label = " ".join(str(label).split())
        if not label:
            raise ValidationError("incident label must be non-empty")
        return cls(id=canonical_id(label), label=label, predefined=predefined)

    def to_json(self) -> dict:
        return {"id": self.id, "label": self.label, "predefined": self.predefined}


PREDEFINED_AUDIENCES = (
    AudienceCircle.from_label("Public", predefined=True),
    AudienceCircle.from_label("Friends", predefined=True),
    AudienceCircle.from_label("Family", predefined=True),
    AudienceCircle.from_label("Work colleagues", predefined=True),
)

PREDEFINED_INCIDENTS = (
    UnwantedIncident.from_label("Job loss", predefined=True),
    UnwantedIncident.from_label("Reputation damage", predefined=True),
    UnwantedIncident.from_label("Harassment", predefined=True),
    UnwantedIncident.from_label("Unjustified discrimination", predefined=True),
)


class PostStatus(Enum):
    DRAFT = "draft"
    PUBLISHED = "published"
    RETRACTED = "retracted"
    DELETED = "deleted"


@dataclass(frozen=True)
class Post:
    """A user post. Immutable; lifecycle transitions produce a new value.

    ``annotations``, when present, is an explicit attribute set that overrides
    any text analysis.
    """

    id: str
    author: str
    text: str
    declared_audience: AudienceCircle
    created_at: float = field(default_factory=time.time)
    annotations: frozenset[SurveillanceAttribute] | None = None
    status: PostStatus = PostStatus.DRAFT

    def with_status(self, status: PostStatus) -> "Post":
        return replace(self, status=status)


@dataclass(eq=False)
class PrivacyHeuristic:
    """A recurrent disclosure pattern: attribute set, unintended audience and
    the incidents reported for it. The risk evidence itself lives in the
    contingency table, not here.
    """

    id: str
    sas: frozenset[SurveillanceAttribute]
    audience: AudienceCircle
    uins: set[UnwantedIncident] = field(default_factory=set)

    def __post_init__(self):
        self.sas = frozenset(self.sas)
        if not self.sas:
            raise ValidationError("heuristic attribute set must be non-empty")
        self.uins = set(self.uins)

    def __eq__(self, other):
        return isinstance(other, PrivacyHeuristic) and self.id == other.id

    def __hash__(self):
        return hash(("heuristic", self.id))

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "sas": sas_to_json(self.sas),
            "audience": self.audience.id,
            "uins": sorted(uin.id for uin in self.uins),
        }


@dataclass(frozen=True)
class IncidentReport:
    """Outcome of the post-deletion dialog.

    A regretted report carries the incident, the audience that should not
    have seen the post, and the perceived consequence level; a non-regretted
    one carries none of them. Partially filled reports cannot be built.
    """

    post_id: str
    regretted: bool
    uin: UnwantedIncident | None = None
    unintended_audience: AudienceCircle | None = None
    consequence: ConsequenceLevel | None = None

    def __post_init__(self):
        details = (self.uin, self.unintended_audience, self.consequence)
        if self.regretted and any(d is None for d in details):
            raise ValidationError(
                "regretted report requires incident, unintended audience "
                "and consequence level"
            )
        if not self.regretted and any(d is not None for d in details):
            raise ValidationError(
                "non-regretted report must not carry incident details"
            )


def sa_subset(a, b) -> bool:
    """True iff every attribute in ``a`` is also in ``b``."""
    return frozenset(a) <= frozenset(b)
