"""Exercise bank: problems, instructor solutions, and the submission data frame.

A bank is one UTF-8 JSON document with top-level `exercises` and `records`
arrays, so the whole evaluation harness is reproducible from a fixture file.
Banks are immutable after load and safe to share across request handlers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

from .validation import strip_comments

DEFAULT_CATEGORY = ["uncategorized"]


class ErrorType(Enum):
    """The four learner error categories tracked by the data frame."""

    UnnecessaryCode = "UnnecessaryCode"
    RequirementNotMet = "RequirementNotMet"
    HardCoding = "HardCoding"
    ComputationError = "ComputationError"


class BankError(Exception):
    """Base class for bank loading problems."""


class FileUnreadable(BankError):
    pass


class SchemaViolation(BankError):
    def __init__(self, reason: str, section: str | None = None, index: int | None = None):
        self.reason = reason
        self.section = section
        self.index = index
        where = f" ({section}[{index}])" if section is not None and index is not None else ""
        super().__init__(f"{reason}{where}")


class DanglingExerciseRef(BankError):
    def __init__(self, ex_id: str):
        self.ex_id = ex_id
        super().__init__(f"record references unknown exercise {ex_id!r}")


@dataclass(frozen=True)
class Exercise:
    id: str
    title: str
    description: str
    input_examples: tuple[str, ...]
    output_examples: tuple[str, ...]
    solution: str
    category_path: tuple[str, ...] = tuple(DEFAULT_CATEGORY)


@dataclass(frozen=True)
class DatasetRecord:
    ex_id: str
    title: str
    desc: str
    solution: str
    sub_code: str
    solved_subs: int
    total_subs: int
    accuracy: float
    error_type: ErrorType | None = None


@dataclass(frozen=True)
class Bank:
    exercises: dict[str, Exercise]
    records: tuple[DatasetRecord, ...]


@dataclass
class ExerciseSummary:
    id: str
    title: str


@dataclass
class CategoryNode:
    name: str
    children: list["CategoryNode"] = field(default_factory=list)
    exercises: list[ExerciseSummary] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "children": [child.to_dict() for child in self.children],
            "exercises": [{"id": s.id, "title": s.title} for s in self.exercises],
        }


def _require(condition: bool, reason: str, section: str, index: int) -> None:
    if not condition:
        raise SchemaViolation(reason, section, index)


def _parse_exercise(obj: dict, index: int) -> Exercise:
    _require(isinstance(obj, dict), "exercise is not an object", "exercises", index)
    for key in ("id", "title", "description", "input_examples", "output_examples", "solution"):
        _require(key in obj, f"exercise missing field {key!r}", "exercises", index)
    ex_id = obj["id"]
    _require(isinstance(ex_id, str) and ex_id != "", "exercise id must be a non-empty string", "exercises", index)
    inputs = obj["input_examples"]
    outputs = obj["output_examples"]
    _require(
        isinstance(inputs, list) and isinstance(outputs, list),
        "input_examples and output_examples must be arrays",
        "exercises",
        index,
    )
    _require(
        len(inputs) == len(outputs) and len(inputs) >= 1,
        "input_examples and output_examples must have equal length >= 1",
        "exercises",
        index,
    )
    _require(
        isinstance(obj["solution"], str) and obj["solution"].strip() != "",
        "solution must be non-empty",
        "exercises",
        index,
    )
    category = obj.get("category_path") or DEFAULT_CATEGORY
    _require(
        isinstance(category, list) and all(isinstance(c, str) for c in category),
        "category_path must be an array of strings",
        "exercises",
        index,
    )
    return Exercise(
        id=ex_id,
        title=str(obj["title"]),
        description=str(obj["description"]),
        input_examples=tuple(str(x) for x in inputs),
        output_examples=tuple(str(x) for x in outputs),
        solution=obj["solution"],
        category_path=tuple(category),
    )


def _parse_record(obj: dict, index: int) -> DatasetRecord:
    _require(isinstance(obj, dict), "record is not an object", "records", index)
    for key in ("ex_id", "title", "desc", "solution", "sub_code", "solved_subs", "total_subs", "accuracy"):
        _require(key in obj, f"record missing field {key!r}", "records", index)
    solved = obj["solved_subs"]
    total = obj["total_subs"]
    _require(
        isinstance(solved, int) and isinstance(total, int) and solved >= 0 and total >= 0,
        "solved_subs and total_subs must be counts >= 0",
        "records",
        index,
    )
    _require(solved <= total, "solved_subs must not exceed total_subs", "records", index)
    # Recompute accuracy so stored frames stay internally consistent.
    expected = solved / total if total > 0 else 0.0
    stated = obj["accuracy"]
    _require(isinstance(stated, (int, float)), "accuracy must be a number", "records", index)
    _require(
        math.isclose(float(stated), expected, abs_tol=1e-9),
        f"accuracy {stated} does not match solved/total ({expected})",
        "records",
        index,
    )
    error_type = obj.get("error_type")
    if error_type is not None:
        try:
            error_type = ErrorType(error_type)
        except ValueError:
            raise SchemaViolation(f"unknown error_type {error_type!r}", "records", index) from None
    return DatasetRecord(
        ex_id=str(obj["ex_id"]),
        title=str(obj["title"]),
        desc=str(obj["desc"]),
        solution=str(obj["solution"]),
        sub_code=str(obj["sub_code"]),
        solved_subs=solved,
        total_subs=total,
        accuracy=expected,
        error_type=error_type,
    )


def bank_from_dict(doc: dict) -> Bank:
    if not isinstance(doc, dict):
        raise SchemaViolation("bank document must be an object")
    if "exercises" not in doc or "records" not in doc:
        raise SchemaViolation("bank document must have 'exercises' and 'records' arrays")
    if not isinstance(doc["exercises"], list) or not isinstance(doc["records"], list):
        raise SchemaViolation("'exercises' and 'records' must be arrays")

    exercises: dict[str, Exercise] = {}
    for index, obj in enumerate(doc["exercises"]):
        exercise = _parse_exercise(obj, index)
        _require(exercise.id not in exercises, f"duplicate exercise id {exercise.id!r}", "exercises", index)
        exercises[exercise.id] = exercise

    records = []
    for index, obj in enumerate(doc["records"]):
        record = _parse_record(obj, index)
        if record.ex_id not in exercises:
            raise DanglingExerciseRef(record.ex_id)
        records.append(record)

    return Bank(exercises=exercises, records=tuple(records))


def load_bank(path: str | Path) -> Bank:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FileUnreadable(f"cannot read bank file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"bank file is not valid JSON: {exc}") from exc
    return bank_from_dict(doc)


def bank_to_dict(bank: Bank) -> dict:
    return {
        "exercises": [
            {
                "id": ex.id,
                "title": ex.title,
                "description": ex.description,
                "input_examples": list(ex.input_examples),
                "output_examples": list(ex.output_examples),
                "solution": ex.solution,
                "category_path": list(ex.category_path),
            }
            for ex in bank.exercises.values()
        ],
        "records": [
            {
                "ex_id": rec.ex_id,
                "title": rec.title,
                "desc": rec.desc,
                "solution": rec.solution,
                "sub_code": rec.sub_code,
                "solved_subs": rec.solved_subs,
                "total_subs": rec.total_subs,
                "accuracy": rec.accuracy,
                "error_type": rec.error_type.value if rec.error_type else None,
            }
            for rec in bank.records
        ],
    }


def save_bank(bank: Bank, path: str | Path) -> None:
    """Write the canonical form: fixed key order, two-space indent, UTF-8."""
    text = json.dumps(bank_to_dict(bank), indent=2, ensure_ascii=False) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def _dedup_key(code: str) -> str:
    # Trailing whitespace and blank lines never distinguish submissions.
    lines = [line.rstrip() for line in code.split("\n")]
    return "\n".join(line for line in lines if line)


def static_filter(records: list[DatasetRecord]) -> list[DatasetRecord]:
    """Strip comments from every submission and drop repeat submissions.

    Duplicates share (ex_id, normalized code); the first occurrence wins and
    the survivors keep their original order.
    """
    seen: set[tuple[str, str]] = set()
    survivors: list[DatasetRecord] = []
    for record in records:
        stripped = strip_comments(record.sub_code)
        key = (record.ex_id, _dedup_key(stripped))
        if key in seen:
            continue
        seen.add(key)
        survivors.append(replace(record, sub_code=stripped))
    return survivors


def list_tree(bank: Bank) -> list[CategoryNode]:
    """Group exercises by category_path into nested nodes, id + title only."""
    roots: list[CategoryNode] = []

    def child(nodes: list[CategoryNode], name: str) -> CategoryNode:
        for node in nodes:
            if node.name == name:
                return node
        node = CategoryNode(name=name)
        nodes.append(node)
        return node

    for exercise in bank.exercises.values():
        nodes = roots
        node = None
        for name in exercise.category_path or DEFAULT_CATEGORY:
            node = child(nodes, name)
            nodes = node.children
        assert node is not None
        node.exercises.append(ExerciseSummary(id=exercise.id, title=exercise.title))
    return roots
