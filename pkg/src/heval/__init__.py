"""Human evaluation workbench for machine translation.

Judges score translations on an 11-feature linguistic rubric (0-4 or NA);
the workbench turns those annotations into sentence scores, document and
system aggregates, per-sentence engine rankings, inter-annotator agreement,
and correlation against external adequacy/fluency measures.
"""

from .rubric import (
    AnnotationVector,
    FEATURES,
    SCALE_LABELS,
    SentenceScore,
    final_score,
    scale_label,
    validate_vector,
)
from .store import Campaign, CampaignStore, build_campaign

__all__ = [
    "AnnotationVector",
    "Campaign",
    "CampaignStore",
    "FEATURES",
    "SCALE_LABELS",
    "SentenceScore",
    "build_campaign",
    "final_score",
    "scale_label",
    "validate_vector",
]
