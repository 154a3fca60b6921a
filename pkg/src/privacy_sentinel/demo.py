"""Seeded walkthrough state: five heuristics with a worked evidence table.

The first heuristic is the workplace-vent pattern used throughout the docs:
attribute set {Work location, Employment status, Negative} disclosed to work
colleagues, with 108 job-loss reports counting (50, 48, 10, 0, 0) and 322
reputation-damage reports counting (0, 0, 44, 188, 90). Those two cells give
the reference risk figures (index 0.843 with interval [0.782, 0.904], and
0.214 with [0.180, 0.249]). The other four rows exist so dashboards and
demos have more than one row to show.
"""

from __future__ import annotations

from .knowledge import ContingencyTable, KnowledgeBase, snapshot
from .model import SurveillanceAttribute as SA

DEMO_ROWS = (
    {
        "sas": (SA.WORK_LOCATION, SA.EMPLOYMENT_STATUS, SA.NEGATIVE),
        "audience": "Work colleagues",
        "cells": {
            "Job loss": (50, 48, 10, 0, 0),
            "Reputation damage": (0, 0, 44, 188, 90),
        },
    },
    {
        "sas": (SA.ALCOHOL_DRINKING, SA.NEGATIVE),
        "audience": "Public",
        "cells": {"Job loss": (0, 0, 79, 55, 0)},
    },
    {
        "sas": (
            SA.HOME_LOCATION,
            SA.WORK_LOCATION,
            SA.EMPLOYMENT_STATUS,
            SA.NEGATIVE,
        ),
        "audience": "Work colleagues",
        "cells": {"Reputation damage": (120, 88, 7, 0, 0)},
    },
    {
        "sas": (SA.SEXUAL_PREFERENCE,),
        "audience": "Public",
        "cells": {"Unjustified discrimination": (300, 33, 0, 0, 0)},
    },
    {
        "sas": (SA.CHRONIC_DISEASES, SA.NEGATIVE),
        "audience": "Work colleagues",
        "cells": {"Job loss": (0, 310, 70, 0, 0)},
    },
)


def demo_state() -> tuple[KnowledgeBase, ContingencyTable]:
    """Build the walkthrough knowledge base and evidence table."""
    kb = KnowledgeBase()
    table = ContingencyTable()
    for row in DEMO_ROWS:
        audience = kb.register_audience(row["audience"], predefined=True)
        labels = list(row["cells"])
        ph = kb.add_heuristic(
            row["sas"], audience, kb.register_incident(labels[0], predefined=True)
        )
        for label in labels[1:]:
            ph.uins.add(kb.register_incident(label, predefined=True))
        for label, counts in row["cells"].items():
            table.set_counts(ph.id, kb.register_incident(label).id, list(counts))
    return kb, table


def demo_snapshot() -> bytes:
    """The walkthrough state as genesis-snapshot bytes."""
    kb, table = demo_state()
    return snapshot(kb, table)
