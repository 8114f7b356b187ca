"""Short-circuit outcomes shared by the review and correctness flows.

A submission handled under the improved profile can stop before any LLM call
(empty source, or source rejected by the local validator) or right after the
cheap first call (the reviewer decided no review is needed). Each stop gets a
small typed outcome so callers can branch without string matching.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .gateway import LlmUsage
from .validation import ValidationReport

LOOKS_GOOD_TEXT = {
    "en": "Looks good! Your code passed review with no comments.",
    "ko": "잘했어요! 리뷰에서 고칠 점을 찾지 못했어요.",
}

EMPTY_SUBMISSION_TEXT = {
    "en": "The submission is empty. Write some code first, then ask again.",
    "ko": "제출된 코드가 비어 있어요. 먼저 코드를 작성한 뒤 다시 요청해 주세요.",
}


@dataclass(frozen=True)
class EmptySubmission:
    """The submitted source was blank (or comments only); nothing was sent out."""

    message: str = EMPTY_SUBMISSION_TEXT["en"]


@dataclass(frozen=True)
class InvalidSubmission:
    """The local validator rejected the source; nothing was sent out."""

    report: ValidationReport

    @property
    def message(self) -> str:
        first = self.report.findings[0]
        return f"line {first.line}: {first.message}"


@dataclass(frozen=True)
class LooksGood:
    """The necessity check answered no, so no review was generated."""

    usage: LlmUsage
    body_markdown: str = LOOKS_GOOD_TEXT["en"]
    raw_verdict: str = field(default="no", repr=False)
