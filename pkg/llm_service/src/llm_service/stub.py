"""Deterministic rule-based labeling used in --stub mode.

The stub exists so protocol conformance can be exercised without any
model weights or accelerator; it applies a fixed keyword rule and is
stateless, so identical inputs always produce identical outputs.
"""

NEGATIVE_CUES = ("broken", "blocked", "unusable", "awful", "filthy",
                 "refused")
POSITIVE_CUES = ("excellent", "wonderful", "great", "spotless")
UNRELATED_CUES = ("freeway", "highway", "downtown", "budget")


def rule_label(text: str) -> str:
    """One lowercase label per text; the keyword tiers are checked
    negative -> positive -> unrelated, defaulting to neutral."""
    lowered = text.lower()
    if any(cue in lowered for cue in NEGATIVE_CUES):
        return "negative"
    if any(cue in lowered for cue in POSITIVE_CUES):
        return "positive"
    if any(cue in lowered for cue in UNRELATED_CUES):
        return "unrelated"
    return "neutral"
