"""Review flow: prompt rendering, response parsing, and leak redaction.

The flow makes at most two LLM calls. A cheap necessity check first (the
model answers yes/no), then the full review generation only when needed.
Under the improved profile, empty and structurally invalid submissions are
stopped locally before any call is made.

The review prompt asks for a markdown body plus a trailing section headed
``### Code to fix`` whose bullets are ``- line <n>: <hint>``. That section is
parsed out so clients can decorate an editor gutter instead of showing raw
markup. Any fenced code block in the body that looks like the reference
solution is replaced with a fixed placeholder so the flow cannot hand the
answer to the learner.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass

from .bank import Exercise
from .gateway import GatewayError, LlmRequest, LlmUsage
from .outcomes import (
    EMPTY_SUBMISSION_TEXT,
    LOOKS_GOOD_TEXT,
    EmptySubmission,
    InvalidSubmission,
    LooksGood,
)
from .profiles import PromptProfile
from .validation import strip_comments, validate_source

log = logging.getLogger(__name__)

REDACTION_TEXT = "[code withheld — try it yourself]"
LEAK_THRESHOLD = 0.6

_PLACEHOLDER_RE = re.compile(r"\{\{([A-Za-z_][A-Za-z0-9_]*)\}\}")
_RNP_RE = re.compile(r"(yes|no)\b", re.IGNORECASE)
_FIX_HEADING_RE = re.compile(r"^\s{0,3}#{1,6}\s*.*code\s+to\s+fix", re.IGNORECASE)
_HEADING_RE = re.compile(r"^\s{0,3}#{1,6}\s")
_BULLET_RE = re.compile(r"^\s*[-*]\s*line\s+(\d+)\s*:\s*(.+?)\s*$", re.IGNORECASE)
_FENCE_RE = re.compile(r"```[^\n]*\n(.*?)```", re.DOTALL)


class PlaceholderUnresolved(Exception):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"template references unknown placeholder {{{{{name}}}}}")


class UnparseableVerdict(Exception):
    def __init__(self, raw: str):
        self.raw = raw
        super().__init__(f"response does not start with yes or no: {raw[:80]!r}")


def render_template(template: str, values: dict[str, str]) -> str:
    """Substitute ``{{name}}`` placeholders in a single pass.

    Substituted values are never re-scanned, so learner code containing
    ``{{...}}`` cannot smuggle in another placeholder.
    """

    def repl(match: re.Match) -> str:
        name = match.group(1)
        if name not in values:
            raise PlaceholderUnresolved(name)
        return values[name]

    return _PLACEHOLDER_RE.sub(repl, template)


@dataclass(frozen=True)
class RenderedPrompt:
    system_text: str
    user_text: str

    @property
    def text(self) -> str:
        return self.system_text + "\n\n" + self.user_text


def format_io_examples(exercise: Exercise) -> str:
    pairs = list(zip(exercise.input_examples, exercise.output_examples))
    if not pairs:
        return "(none)"
    blocks = [f"Input:\n{inp}\nOutput:\n{out}" for inp, out in pairs]
    return "\n\n".join(blocks)


def _template_values(profile: PromptProfile, exercise: Exercise, submitted_code: str) -> dict:
    values = {
        "exercise_description": exercise.description,
        "submitted_code": submitted_code,
        "solution": exercise.solution,
        "io_examples": format_io_examples(exercise),
    }
    if profile.max_sentences is not None:
        values["max_sentences"] = str(profile.max_sentences)
    return values


def render_rnp_prompt(
    profile: PromptProfile, exercise: Exercise, submitted_code: str
) -> RenderedPrompt:
    user = render_template(profile.rnp_template, _template_values(profile, exercise, submitted_code))
    return RenderedPrompt(system_text=profile.role_text, user_text=user)


def render_rcg_prompt(
    profile: PromptProfile, exercise: Exercise, submitted_code: str
) -> RenderedPrompt:
    values = _template_values(profile, exercise, submitted_code)
    parts = [f"### {name}\n{render_template(text, values)}" for name, text in profile.rcg_sections]
    return RenderedPrompt(system_text=profile.role_text, user_text="\n\n".join(parts))


def parse_rnp_response(text: str) -> bool:
    """Read the yes/no verdict; True means a review is needed."""
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        match = _RNP_RE.match(stripped)
        if not match:
            raise UnparseableVerdict(text)
        return match.group(1).lower() == "yes"
    raise UnparseableVerdict(text)


@dataclass(frozen=True)
class FixLine:
    line: int
    hint: str

    def to_dict(self) -> dict:
        return {"line": self.line, "hint": self.hint}


@dataclass(frozen=True)
class ParsedReview:
    body_markdown: str
    fix_lines: tuple[FixLine, ...]
    dropped_fix_lines: int


def parse_review_response(text: str, line_count: int) -> ParsedReview:
    """Split the fix-line section out of a review body.

    The section runs from the "Code to fix" heading to the next heading (or
    the end of the text) and is removed from the body wholesale. Bullets with
    line numbers outside [1, line_count] are dropped and counted; bullet-like
    lines that do not match the grammar are ignored.
    """
    lines = text.splitlines()
    heading_at = next((i for i, ln in enumerate(lines) if _FIX_HEADING_RE.match(ln)), None)
    if heading_at is None:
        return ParsedReview(text.rstrip(), (), 0)

    end = next(
        (i for i in range(heading_at + 1, len(lines)) if _HEADING_RE.match(lines[i])),
        len(lines),
    )
    fixes: list[FixLine] = []
    dropped = 0
    for raw in lines[heading_at + 1 : end]:
        match = _BULLET_RE.match(raw)
        if not match:
            continue
        number = int(match.group(1))
        if 1 <= number <= line_count:
            fixes.append(FixLine(line=number, hint=match.group(2)))
        else:
            dropped += 1
    body = "\n".join(lines[:heading_at] + lines[end:]).rstrip()
    return ParsedReview(body, tuple(fixes), dropped)


def jaccard_3gram(a_tokens: list[str], b_tokens: list[str]) -> float:
    """Jaccard similarity of the token 3-gram sets of two token lists."""
    ta = {tuple(a_tokens[i : i + 3]) for i in range(len(a_tokens) - 2)}
    tb = {tuple(b_tokens[i : i + 3]) for i in range(len(b_tokens) - 2)}
    union = ta | tb
    if not union:
        return 1.0 if list(a_tokens) == list(b_tokens) else 0.0
    return len(ta & tb) / len(union)


def leak_score(block_source: str, solution_source: str) -> float:
    a = strip_comments(block_source).split()
    b = strip_comments(solution_source).split()
    if a and a == b:
        return 1.0
    return jaccard_3gram(a, b)


def redact_solution_leak(
    body_markdown: str, solution: str, threshold: float = LEAK_THRESHOLD
) -> tuple[str, int]:
    """Replace fenced code blocks that resemble the solution. Returns (body, count)."""
    count = 0

    def repl(match: re.Match) -> str:
        nonlocal count
        if leak_score(match.group(1), solution) >= threshold:
            count += 1
            return REDACTION_TEXT
        return match.group(0)

    return _FENCE_RE.sub(repl, body_markdown), count


@dataclass(frozen=True)
class ReviewComment:
    """A generated review. fix_lines index into the comment-stripped source."""

    body_markdown: str
    fix_lines: tuple[FixLine, ...]
    usage: LlmUsage
    redactions: int = 0
    dropped_fix_lines: int = 0


def _profile_request(profile: PromptProfile, prompt: RenderedPrompt, model_id: str) -> LlmRequest:
    return LlmRequest(
        system_text=prompt.system_text,
        user_text=prompt.user_text,
        max_output_tokens=profile.max_output_tokens,
        temperature=profile.temperature,
        top_p=profile.top_p,
        model_id=model_id,
    )


def _send(gateway, req: LlmRequest, stage: str) -> tuple[str, LlmUsage]:
    try:
        return gateway.send(req)
    except GatewayError as exc:
        exc.stage = stage
        raise


def run_review_pipeline(
    exercise: Exercise,
    submitted_code: str,
    profile: PromptProfile,
    gateway,
    leak_threshold: float = LEAK_THRESHOLD,
) -> EmptySubmission | InvalidSubmission | LooksGood | ReviewComment:
    """Run the review flow for one submission.

    Review prompts always carry comment-stripped code. The improved profile
    additionally rejects empty and invalid sources before spending a call;
    the initial profile sends everything to the model as-is.
    """
    stripped = strip_comments(submitted_code)
    if profile.gates_submissions:
        if not stripped.strip():
            return EmptySubmission(
                EMPTY_SUBMISSION_TEXT.get(profile.locale, EMPTY_SUBMISSION_TEXT["en"])
            )
        report = validate_source(submitted_code)
        if not report.valid:
            return InvalidSubmission(report)

    rnp_req = _profile_request(
        profile, render_rnp_prompt(profile, exercise, stripped), gateway.model_id
    )
    text, usage = _send(gateway, rnp_req, "rnp")
    total = usage
    try:
        needed = parse_rnp_response(text)
    except UnparseableVerdict:
        log.warning("necessity verdict unparseable, retrying once: %r", text[:80])
        text, retry_usage = _send(gateway, rnp_req, "rnp")
        total = total + retry_usage
        try:
            needed = parse_rnp_response(text)
        except UnparseableVerdict:
            needed = True  # fail open: an extra review beats a silent skip
    if not needed:
        return LooksGood(
            usage=total,
            body_markdown=LOOKS_GOOD_TEXT.get(profile.locale, LOOKS_GOOD_TEXT["en"]),
            raw_verdict=text.strip(),
        )

    rcg_req = _profile_request(
        profile, render_rcg_prompt(profile, exercise, stripped), gateway.model_id
    )
    body_text, rcg_usage = _send(gateway, rcg_req, "rcg")
    total = total + rcg_usage
    parsed = parse_review_response(body_text, line_count=len(stripped.splitlines()))
    body, redactions = redact_solution_leak(parsed.body_markdown, exercise.solution, leak_threshold)
    if redactions:
        log.info("redacted %d solution-like code block(s) from a review", redactions)
    return ReviewComment(
        body_markdown=body,
        fix_lines=parsed.fix_lines,
        usage=total,
        redactions=redactions,
        dropped_fix_lines=parsed.dropped_fix_lines,
    )
