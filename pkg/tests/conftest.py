"""Shared builders for exercises, records, banks, and random program sources."""

import random
from pathlib import Path

from codetutor.bank import Bank, DatasetRecord, ErrorType, Exercise

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def make_exercise(ex_id="sum-to-n", **over) -> Exercise:
    fields = dict(
        id=ex_id,
        title="Sum 1 to n",
        description="Read a positive integer n and print the sum of 1..n.",
        input_examples=("3", "10"),
        output_examples=("6", "55"),
        solution="n = int(input())\ntotal = 0\nfor i in range(1, n + 1):\n    total += i\nprint(total)",
        category_path=("loops",),
    )
    fields.update(over)
    return Exercise(**fields)


def make_record(ex_id="sum-to-n", sub_code="print(6)", error_type=ErrorType.HardCoding, **over):
    fields = dict(
        ex_id=ex_id,
        title="Sum 1 to n",
        desc="Read a positive integer n and print the sum of 1..n.",
        solution="n = int(input())\ntotal = 0\nfor i in range(1, n + 1):\n    total += i\nprint(total)",
        sub_code=sub_code,
        solved_subs=1,
        total_subs=4,
        accuracy=0.25,
        error_type=error_type,
    )
    fields.update(over)
    return DatasetRecord(**fields)


def make_bank(exercises=None, records=()) -> Bank:
    if exercises is None:
        exercises = [make_exercise()]
    return Bank(exercises={e.id: e for e in exercises}, records=tuple(records))


# ---------------------------------------------------------------------------
# Random program corpus for comment-invariance / idempotence properties
# ---------------------------------------------------------------------------

_SIMPLE_STMTS = [
    "x = 1",
    "y = x + 2",
    "name = input()",
    "print(x)",
    'print("hello")',
    "total = total + x",
    "items = [1, 2, 3]",
    "pair = (x, y)",
]

_BLOCK_HEADS = [
    "if x > 0:",
    "for i in range(3):",
    "while x < 10:",
    "def helper():",
]


def random_program(rng: random.Random, allow_broken: bool = True) -> str:
    """A small plausible program, sometimes deliberately broken."""
    lines = []
    for _ in range(rng.randint(1, 5)):
        if rng.random() < 0.35:
            head = rng.choice(_BLOCK_HEADS)
            lines.append(head)
            for _ in range(rng.randint(1, 2)):
                lines.append("    " + rng.choice(_SIMPLE_STMTS))
        else:
            lines.append(rng.choice(_SIMPLE_STMTS))
    source = "\n".join(lines)

    if allow_broken and rng.random() < 0.5:
        kind = rng.randrange(5)
        if kind == 0:
            source = source.replace(":", "", 1)
        elif kind == 1:
            source += "\nprint(x"
        elif kind == 2:
            source += '\nmsg = "unterminated'
        elif kind == 3:
            source += "\n        over_indented = 1"
        else:
            source = ""
    return source


def sprinkle_comments(rng: random.Random, source: str) -> str:
    """Insert full-line comments and append trailing ones where that is safe."""
    out = []
    for line in source.split("\n"):
        if rng.random() < 0.3:
            indent = " " * rng.choice([0, 2, 4, 8])
            out.append(f"{indent}# {rng.choice(['note', 'todo', 'debug', 'loop here'])}")
        if line and "#" not in line and rng.random() < 0.4:
            line = line + "  # inline note"
        out.append(line)
    if rng.random() < 0.3:
        out.append("# trailing remark")
    return "\n".join(out)
