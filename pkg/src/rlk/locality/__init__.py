"""Inductive-locality analysis over lifted feedback templates."""

from .schema import ALPHA, SchemaSet, TemplateSchema, canonical_schema, is_variant
from .lifted import b_step, backchain, backchain_raw, generate_initial
from .checker import (
    FeedbackEvent, Verdict, check_locality, freeze, is_feedback_event, justifies, self_justifying,
)
from .ground import GroundTemplate, ground_templates, is_instance

__all__ = [
    "ALPHA", "SchemaSet", "TemplateSchema", "canonical_schema", "is_variant",
    "b_step", "backchain", "backchain_raw", "generate_initial",
    "FeedbackEvent", "Verdict", "check_locality", "freeze", "is_feedback_event",
    "justifies", "self_justifying", "GroundTemplate", "ground_templates", "is_instance",
]
