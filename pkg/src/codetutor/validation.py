"""Structural source validation that gates LLM calls, plus comment stripping.

The validator is a cheap structural approximation, not a grammar parser: it
rejects obviously broken code before an LLM call is spent. False Valid is
acceptable (the judge catches it downstream); the rules stay conservative to
minimize false Invalid.
"""

from __future__ import annotations

import re
import subprocess
from dataclasses import dataclass, field
from enum import Enum


class ValidationErrorKind(Enum):
    EmptySource = "EmptySource"
    UnbalancedDelimiter = "UnbalancedDelimiter"
    UnterminatedString = "UnterminatedString"
    MissingColon = "MissingColon"
    BadIndentation = "BadIndentation"


@dataclass(frozen=True)
class Finding:
    kind: ValidationErrorKind
    line: int
    message: str


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]

    @property
    def valid(self) -> bool:
        return not self.findings

    @property
    def verdict(self) -> str:
        return "Valid" if self.valid else "Invalid"

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "findings": [
                {"kind": f.kind.value, "line": f.line, "message": f.message}
                for f in self.findings
            ],
        }


_OPENERS = "([{"
_CLOSERS = ")]}"
_MATCHING = {")": "(", "]": "[", "}": "{"}

# Statement keywords that must be followed by ':' on their logical line.
_COLON_KEYWORDS = frozenset(
    ["if", "elif", "else", "for", "while", "def", "class", "try", "except", "finally", "with"]
)

_FIRST_TOKEN_RE = re.compile(r"[ \t]*([A-Za-z_][A-Za-z0-9_]*)")


@dataclass
class _StringState:
    quote: str
    triple: bool
    line: int  # opening line


@dataclass
class _LineScan:
    number: int
    raw: str
    starts_in_string: bool
    depth_at_start: int
    comment_col: int | None = None
    colon_at_depth0: bool = False
    continues_next: bool = False


@dataclass
class _ScanResult:
    lines: list[_LineScan] = field(default_factory=list)
    stray_closers: list[tuple[int, str]] = field(default_factory=list)
    unclosed_openers: list[tuple[int, str]] = field(default_factory=list)
    unterminated_strings: list[int] = field(default_factory=list)


def _scan(source: str) -> _ScanResult:
    """Single pass over the source tracking string, comment, and bracket state.

    Both strip_comments and validate_source consume this scan, so a comment
    can never be classified differently by the two operations.
    """
    result = _ScanResult()
    stack: list[tuple[str, int]] = []
    string: _StringState | None = None
    escape = False

    for number, raw in enumerate(source.split("\n"), start=1):
        info = _LineScan(
            number=number,
            raw=raw,
            starts_in_string=string is not None,
            depth_at_start=len(stack),
        )
        i = 0
        n = len(raw)
        while i < n:
            ch = raw[i]
            if string is not None:
                if escape:
                    escape = False
                    i += 1
                    continue
                if ch == "\\":
                    escape = True
                    i += 1
                    continue
                if string.triple:
                    if ch == string.quote and raw.startswith(string.quote * 3, i):
                        string = None
                        i += 3
                        continue
                else:
                    if ch == string.quote:
                        string = None
                i += 1
                continue
            if ch == "#":
                info.comment_col = i
                break
            if ch in "\"'":
                if raw.startswith(ch * 3, i):
                    string = _StringState(ch, True, number)
                    i += 3
                else:
                    string = _StringState(ch, False, number)
                    i += 1
                continue
            if ch in _OPENERS:
                stack.append((ch, number))
            elif ch in _CLOSERS:
                if stack and stack[-1][0] == _MATCHING[ch]:
                    stack.pop()
                else:
                    result.stray_closers.append((number, ch))
                    if stack:
                        stack.pop()  # assume a typo and resync
            elif ch == ":" and not stack:
                info.colon_at_depth0 = True
            elif ch == "\\" and i == n - 1:
                info.continues_next = True
            i += 1

        if string is not None:
            if escape:
                # Backslash-newline inside a string continues it to the next line.
                escape = False
            elif not string.triple:
                result.unterminated_strings.append(string.line)
                string = None
        result.lines.append(info)

    if string is not None:
        result.unterminated_strings.append(string.line)
    result.unclosed_openers = [(line, ch) for ch, line in stack]
    return result


def strip_comments(source: str) -> str:
    """Remove '#' comments that are not inside string literals.

    A line whose comment is removed is right-trimmed; a line left blank by the
    removal is dropped entirely. Lines without comments are preserved byte for
    byte, so the operation is idempotent.
    """
    scan = _scan(source)
    kept: list[str] = []
    for info in scan.lines:
        if info.comment_col is None:
            kept.append(info.raw)
            continue
        remainder = info.raw[: info.comment_col].rstrip()
        if remainder:
            kept.append(remainder)
    return "\n".join(kept)


def validate_source(source: str) -> ValidationReport:
    """Run the structural checks and report all findings ordered by line.

    Checks, in order of detection:
      * EmptySource - nothing left after comments and whitespace are removed.
      * UnbalancedDelimiter - stray closers, and openers never closed. The
        never-closed check is skipped when an unterminated string was found,
        since bracket state is unreliable past the broken literal.
      * UnterminatedString - a quote that does not close on its line, or a
        triple quote open at end of input; reported at the opening line.
      * MissingColon - a logical line whose first token is a block keyword
        (if/for/def/...) with no ':' at bracket depth 0 anywhere on it.
      * BadIndentation - a logical line whose indent (tabs expanded to 4)
        neither extends the current level nor pops to a previously seen one.

    Logical lines group physical lines joined by open brackets or trailing
    backslashes; blank and comment-only lines are skipped.
    """
    if not strip_comments(source).strip():
        finding = Finding(ValidationErrorKind.EmptySource, 1, "source contains no code")
        return ValidationReport(findings=(finding,))

    scan = _scan(source)
    findings: list[Finding] = []

    for line, ch in scan.stray_closers:
        findings.append(
            Finding(ValidationErrorKind.UnbalancedDelimiter, line, f"unmatched {ch!r}")
        )
    if not scan.unterminated_strings:
        for line, ch in scan.unclosed_openers:
            findings.append(
                Finding(ValidationErrorKind.UnbalancedDelimiter, line, f"{ch!r} is never closed")
            )
    for line in scan.unterminated_strings:
        findings.append(
            Finding(ValidationErrorKind.UnterminatedString, line, "string literal is not terminated")
        )

    findings.extend(_check_statements(scan.lines))
    findings.sort(key=lambda f: f.line)
    return ValidationReport(findings=tuple(findings))


def _is_blank_or_comment(info: _LineScan) -> bool:
    text = info.raw if info.comment_col is None else info.raw[: info.comment_col]
    return not text.strip()


def _logical_starts(lines: list[_LineScan]) -> list[int]:
    """Indices of physical lines that begin a new logical line."""
    starts = []
    prev_continues = False
    for idx, info in enumerate(lines):
        if info.starts_in_string or info.depth_at_start > 0 or prev_continues:
            prev_continues = info.continues_next
            continue
        prev_continues = info.continues_next
        if _is_blank_or_comment(info):
            continue
        starts.append(idx)
    return starts


def _check_statements(lines: list[_LineScan]) -> list[Finding]:
    findings: list[Finding] = []
    starts = _logical_starts(lines)
    indent_stack = [0]

    for pos, idx in enumerate(starts):
        info = lines[idx]
        end = starts[pos + 1] if pos + 1 < len(starts) else len(lines)

        match = _FIRST_TOKEN_RE.match(info.raw)
        if match and match.group(1) in _COLON_KEYWORDS:
            if not any(lines[j].colon_at_depth0 for j in range(idx, end)):
                findings.append(
                    Finding(
                        ValidationErrorKind.MissingColon,
                        info.number,
                        f"'{match.group(1)}' statement has no ':'",
                    )
                )

        expanded = info.raw.expandtabs(4)
        indent = len(expanded) - len(expanded.lstrip(" "))
        if indent > indent_stack[-1]:
            indent_stack.append(indent)
        elif indent < indent_stack[-1]:
            while indent_stack and indent_stack[-1] > indent:
                indent_stack.pop()
            if not indent_stack or indent_stack[-1] != indent:
                findings.append(
                    Finding(
                        ValidationErrorKind.BadIndentation,
                        info.number,
                        "indent does not match any enclosing block level",
                    )
                )
                indent_stack.append(indent)  # resync to avoid cascading findings
    return findings


_KIND_HINTS = [
    ("unterminated", ValidationErrorKind.UnterminatedString),
    ("string", ValidationErrorKind.UnterminatedString),
    ("colon", ValidationErrorKind.MissingColon),
    ("expected ':'", ValidationErrorKind.MissingColon),
    ("indent", ValidationErrorKind.BadIndentation),
    ("empty", ValidationErrorKind.EmptySource),
    ("paren", ValidationErrorKind.UnbalancedDelimiter),
    ("bracket", ValidationErrorKind.UnbalancedDelimiter),
    ("never closed", ValidationErrorKind.UnbalancedDelimiter),
    ("unmatched", ValidationErrorKind.UnbalancedDelimiter),
]

_LINE_NO_RE = re.compile(r"line\s+(\d+)", re.IGNORECASE)


def validate_with_command(source: str, command: str, timeout: float = 15.0) -> ValidationReport:
    """Delegate validation to an external command (disabled by default).

    The command receives the source on stdin. Exit status 0 means Valid;
    nonzero means Invalid with one finding whose kind is mapped from the first
    output line (exact kind name, else keyword heuristics, else
    UnbalancedDelimiter). Empty sources are still rejected locally.
    """
    if not strip_comments(source).strip():
        finding = Finding(ValidationErrorKind.EmptySource, 1, "source contains no code")
        return ValidationReport(findings=(finding,))

    proc = subprocess.run(
        command,
        shell=True,
        input=source.encode("utf-8"),
        capture_output=True,
        timeout=timeout,
    )
    if proc.returncode == 0:
        return ValidationReport(findings=())

    output = (proc.stdout or proc.stderr).decode("utf-8", errors="replace")
    first_line = output.strip().splitlines()[0] if output.strip() else "external validator failed"
    kind = _map_kind(first_line)
    line_match = _LINE_NO_RE.search(output)
    line = int(line_match.group(1)) if line_match else 1
    return ValidationReport(findings=(Finding(kind, line, first_line[:200]),))


def _map_kind(text: str) -> ValidationErrorKind:
    lowered = text.lower()
    for kind in ValidationErrorKind:
        if kind.value.lower() in lowered:
            return kind
    for hint, kind in _KIND_HINTS:
        if hint in lowered:
            return kind
    return ValidationErrorKind.UnbalancedDelimiter


def make_validator(external_cmd: str | None = None):
    """Return the validation callable for the configured mode."""
    if external_cmd:
        return lambda source: validate_with_command(source, external_cmd)
    return validate_source
