"""Code tutor: LLM-backed correctness checks and anti-cheating code reviews
for introductory Python exercises, plus the evaluation harness and REST
service around them."""

from .bank import Bank, DatasetRecord, ErrorType, Exercise, load_bank, save_bank, static_filter
from .gateway import (
    GatewayError,
    HttpGateway,
    LlmRequest,
    LlmUsage,
    MockGateway,
    PricingTable,
    approximate_tokens,
    estimate_cost,
    gateway_from_env,
)
from .judge import CorrectnessVerdict, run_submission_flow
from .outcomes import EmptySubmission, InvalidSubmission, LooksGood
from .profiles import PromptProfile, builtin_profile, load_profile
from .review import REDACTION_TEXT, ReviewComment, run_review_pipeline
from .service import create_app
from .validation import ValidationReport, strip_comments, validate_source

__version__ = "0.1.0"

__all__ = [
    "Bank",
    "DatasetRecord",
    "ErrorType",
    "Exercise",
    "load_bank",
    "save_bank",
    "static_filter",
    "GatewayError",
    "HttpGateway",
    "LlmRequest",
    "LlmUsage",
    "MockGateway",
    "PricingTable",
    "approximate_tokens",
    "estimate_cost",
    "gateway_from_env",
    "CorrectnessVerdict",
    "run_submission_flow",
    "EmptySubmission",
    "InvalidSubmission",
    "LooksGood",
    "PromptProfile",
    "builtin_profile",
    "load_profile",
    "REDACTION_TEXT",
    "ReviewComment",
    "run_review_pipeline",
    "create_app",
    "ValidationReport",
    "strip_comments",
    "validate_source",
    "__version__",
]
