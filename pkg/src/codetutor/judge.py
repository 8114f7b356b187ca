"""Correctness checking of submissions against the exercise and its solution.

The judge prompt carries the exercise description, every input/output example
verbatim, the reference solution, and the submitted code, and demands a rigid
reply format (a VERDICT line, an optional TYPE line, then the reason). The
four error labels are each named exactly once in the prompt so the model
echoes them back verbatim in the TYPE line.

Programs are graded on printed output, so the prompt explicitly rules out the
classic false negative where `'Hello'` and `"Hello"` in source are treated as
different outputs.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass

from .bank import ErrorType, Exercise
from .gateway import LlmUsage
from .outcomes import EMPTY_SUBMISSION_TEXT, EmptySubmission, InvalidSubmission
from .profiles import PromptProfile
from .review import RenderedPrompt, UnparseableVerdict, _profile_request, _send
from .validation import strip_comments, validate_source

__all__ = [
    "ErrorType",
    "CorrectnessVerdict",
    "render_judge_prompt",
    "parse_judge_response",
    "run_submission_flow",
    "JUDGE_ROLE_TEXT",
]

log = logging.getLogger(__name__)

JUDGE_ROLE_TEXT = (
    "You are a strict automatic grader for introductory Python exercises. "
    "You judge only whether the submitted code solves the exercise; you never "
    "give advice and you never write code."
)

_VERDICT_RE = re.compile(r"\s*VERDICT:\s*(CORRECT|WRONG|ERROR)\b", re.IGNORECASE)
_TYPE_RE = re.compile(r"\s*TYPE:\s*([A-Za-z]+)\s*$")

_STATES = ("correct", "wrong", "error")


@dataclass(frozen=True)
class CorrectnessVerdict:
    state: str
    reason: str = ""
    error_type: ErrorType | None = None
    usage: LlmUsage = LlmUsage()

    def __post_init__(self):
        if self.state not in _STATES:
            raise ValueError(f"state must be one of {_STATES}, got {self.state!r}")
        if self.state == "correct" and self.error_type is not None:
            raise ValueError("a correct verdict cannot carry an error type")

    def to_dict(self) -> dict:
        return {
            "state": self.state,
            "reason": self.reason,
            "error_type": self.error_type.value if self.error_type else None,
        }


def render_judge_prompt(exercise: Exercise, submitted_code: str) -> RenderedPrompt:
    pairs = list(zip(exercise.input_examples, exercise.output_examples))
    if pairs:
        blocks = [f"Input:\n{inp}\nOutput:\n{out}" for inp, out in pairs]
        examples = "\n\n".join(blocks)
    else:
        examples = "(none)"
    user = (
        f"Exercise:\n{exercise.description}\n"
        "\n"
        "Input and output examples (the program must satisfy every pair):\n"
        f"{examples}\n"
        "\n"
        "Reference solution:\n"
        f"```python\n{exercise.solution}\n```\n"
        "\n"
        "Submitted code:\n"
        f"```python\n{submitted_code}\n```\n"
        "\n"
        "Grade the submitted code against the exercise. Printed text that "
        "differs from the expected output only by the quote style around the "
        "same characters (single versus double quotes) counts as equal. Judge "
        "strictly: flag answers that print constants instead of computing them "
        "(HardCoding), ignore a stated requirement (RequirementNotMet), compute "
        "a wrong value (ComputationError), or add code the exercise never asked "
        "for (UnnecessaryCode).\n"
        "\n"
        "Reply in exactly this format:\n"
        "VERDICT: CORRECT or WRONG or ERROR\n"
        "TYPE: one of the four labels above (only when the verdict is not CORRECT)\n"
        "Then give the reason on the following lines."
    )
    return RenderedPrompt(system_text=JUDGE_ROLE_TEXT, user_text=user)


def parse_judge_response(text: str) -> CorrectnessVerdict:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise UnparseableVerdict(text)
    match = _VERDICT_RE.match(lines[0])
    if not match:
        raise UnparseableVerdict(text)
    state = match.group(1).lower()

    error_type = None
    rest = lines[1:]
    if rest:
        type_match = _TYPE_RE.match(rest[0])
        if type_match:
            rest = rest[1:]
            name = type_match.group(1)
            try:
                error_type = ErrorType(name)
            except ValueError:
                log.warning("ignoring unknown error type label %r", name)
    if state == "correct":
        error_type = None
    return CorrectnessVerdict(state=state, reason="\n".join(rest).strip(), error_type=error_type)


def run_submission_flow(
    exercise: Exercise,
    submitted_code: str,
    profile: PromptProfile,
    gateway,
) -> EmptySubmission | InvalidSubmission | CorrectnessVerdict:
    """Judge one submission.

    The improved profile stops empty/invalid sources locally and judges the
    comment-stripped code; the initial profile sends the raw source straight
    to the model.
    """
    if profile.gates_submissions:
        stripped = strip_comments(submitted_code)
        if not stripped.strip():
            return EmptySubmission(
                EMPTY_SUBMISSION_TEXT.get(profile.locale, EMPTY_SUBMISSION_TEXT["en"])
            )
        report = validate_source(submitted_code)
        if not report.valid:
            return InvalidSubmission(report)
        code = stripped
    else:
        code = submitted_code

    req = _profile_request(profile, render_judge_prompt(exercise, code), gateway.model_id)
    text, usage = _send(gateway, req, "judge")
    total = usage
    try:
        verdict = parse_judge_response(text)
    except UnparseableVerdict:
        log.warning("judge verdict unparseable, retrying once: %r", text[:80])
        text, retry_usage = _send(gateway, req, "judge")
        total = total + retry_usage
        try:
            verdict = parse_judge_response(text)
        except UnparseableVerdict:
            return CorrectnessVerdict(
                state="error", reason="judge response unparseable", usage=total
            )
    return CorrectnessVerdict(
        state=verdict.state,
        reason=verdict.reason,
        error_type=verdict.error_type,
        usage=total,
    )
