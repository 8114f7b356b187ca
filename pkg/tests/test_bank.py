"""Exercise bank loading, round-trips, the dedup filter, and the category tree."""

import json
import random

import pytest

from codetutor.bank import (
    DanglingExerciseRef,
    ErrorType,
    FileUnreadable,
    SchemaViolation,
    bank_from_dict,
    bank_to_dict,
    list_tree,
    load_bank,
    save_bank,
    static_filter,
)
from codetutor.validation import strip_comments
from conftest import FIXTURES, make_bank, make_exercise, make_record


def test_load_fixture_bank():
    bank = load_bank(FIXTURES / "bank.json")
    assert len(bank.exercises) == 5
    assert len(bank.records) == 8
    assert bank.exercises["sum-to-n"].title == "Sum 1 to n"
    assert all(r.error_type is not None for r in bank.records)
    assert bank.records[0].error_type is ErrorType.HardCoding


def test_accuracy_is_recomputed():
    bank = load_bank(FIXTURES / "bank.json")
    for record in bank.records:
        expected = record.solved_subs / record.total_subs if record.total_subs else 0.0
        assert record.accuracy == expected


def test_round_trip_through_file(tmp_path):
    bank = load_bank(FIXTURES / "bank.json")
    out = tmp_path / "copy.json"
    save_bank(bank, out)
    again = load_bank(out)
    assert again == bank
    # a second save is byte-identical
    other = tmp_path / "copy2.json"
    save_bank(again, other)
    assert out.read_bytes() == other.read_bytes()


def test_missing_file_is_file_unreadable(tmp_path):
    with pytest.raises(FileUnreadable):
        load_bank(tmp_path / "nope.json")


def test_bad_json_is_schema_violation(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{nope", encoding="utf-8")
    with pytest.raises(SchemaViolation):
        load_bank(path)


def _minimal_doc():
    return {
        "exercises": [
            {
                "id": "e1",
                "title": "t",
                "description": "d",
                "input_examples": ["1"],
                "output_examples": ["1"],
                "solution": "print(1)",
                "category_path": ["basics"],
            }
        ],
        "records": [
            {
                "ex_id": "e1",
                "title": "t",
                "desc": "d",
                "solution": "print(1)",
                "sub_code": "print(2)",
                "solved_subs": 1,
                "total_subs": 2,
                "accuracy": 0.5,
                "error_type": "ComputationError",
            }
        ],
    }


def test_minimal_doc_parses():
    bank = bank_from_dict(_minimal_doc())
    assert bank.records[0].error_type is ErrorType.ComputationError


def test_missing_exercise_field_rejected():
    doc = _minimal_doc()
    del doc["exercises"][0]["solution"]
    with pytest.raises(SchemaViolation) as excinfo:
        bank_from_dict(doc)
    assert "solution" in str(excinfo.value)


def test_accuracy_mismatch_rejected():
    doc = _minimal_doc()
    doc["records"][0]["accuracy"] = 0.9
    with pytest.raises(SchemaViolation):
        bank_from_dict(doc)


def test_unknown_error_type_rejected():
    doc = _minimal_doc()
    doc["records"][0]["error_type"] = "TypoError"
    with pytest.raises(SchemaViolation):
        bank_from_dict(doc)


def test_unlabeled_record_allowed():
    doc = _minimal_doc()
    doc["records"][0]["error_type"] = None
    assert bank_from_dict(doc).records[0].error_type is None


def test_dangling_record_reference_rejected():
    doc = _minimal_doc()
    doc["records"][0]["ex_id"] = "ghost"
    with pytest.raises(DanglingExerciseRef):
        bank_from_dict(doc)


def test_solved_cannot_exceed_total():
    doc = _minimal_doc()
    doc["records"][0]["solved_subs"] = 5
    with pytest.raises(SchemaViolation):
        bank_from_dict(doc)


def test_serialized_key_order_is_stable():
    doc = bank_to_dict(bank_from_dict(_minimal_doc()))
    assert list(doc.keys()) == ["exercises", "records"]
    assert list(doc["exercises"][0].keys())[0] == "id"


class TestStaticFilter:
    def test_comment_variants_collapse(self):
        base = make_record(sub_code="print(6)")
        commented = make_record(sub_code="print(6)  # answer")
        padded = make_record(sub_code="\nprint(6)\n\n")
        other = make_record(sub_code="print(7)")
        survivors = static_filter([base, commented, padded, other])
        assert [r.sub_code for r in survivors] == ["print(6)", "print(7)"]

    def test_first_occurrence_wins(self):
        a = make_record(sub_code="print(6)", total_subs=4, solved_subs=1, accuracy=0.25)
        b = make_record(sub_code="# same\nprint(6)", total_subs=8, solved_subs=2, accuracy=0.25)
        survivors = static_filter([a, b])
        assert len(survivors) == 1
        assert survivors[0].total_subs == 4

    def test_same_code_different_exercise_is_kept(self):
        a = make_record(ex_id="e1", sub_code="print(6)")
        b = make_record(ex_id="e2", sub_code="print(6)")
        assert len(static_filter([a, b])) == 2

    def test_output_records_are_comment_stripped(self):
        survivors = static_filter([make_record(sub_code="x = 1  # note\nprint(x)")])
        assert survivors[0].sub_code == "x = 1\nprint(x)"

    def test_agrees_with_brute_force_recount(self):
        rng = random.Random(77)
        snippets = ["print(6)", "print(7)", "x = 1\nprint(x)", "total = 0"]
        records = []
        for _ in range(200):
            code = rng.choice(snippets)
            if rng.random() < 0.5:
                code += "  # noise"
            if rng.random() < 0.3:
                code = "# header\n" + code + "\n"
            records.append(make_record(ex_id=rng.choice(["e1", "e2"]), sub_code=code))

        survivors = static_filter(records)

        def norm(code):
            cleaned = strip_comments(code)
            lines = [ln.rstrip() for ln in cleaned.splitlines()]
            return "\n".join(ln for ln in lines if ln)

        expected_keys, expected = set(), []
        for record in records:
            key = (record.ex_id, norm(record.sub_code))
            if key not in expected_keys:
                expected_keys.add(key)
                expected.append(key)
        assert [(r.ex_id, norm(r.sub_code)) for r in survivors] == expected


class TestListTree:
    def test_nested_grouping(self):
        bank = load_bank(FIXTURES / "bank.json")
        tree = list_tree(bank)
        names = [node.name for node in tree]
        assert names == ["basics", "loops", "strings"]
        basics = tree[0]
        assert [child.name for child in basics.children] == ["output", "conditionals"]

    def test_leaf_count_matches_exercise_count(self):
        bank = load_bank(FIXTURES / "bank.json")

        def count(nodes):
            return sum(len(n.exercises) + count(n.children) for n in nodes)

        assert count(list_tree(bank)) == len(bank.exercises)

    def test_default_category_used_when_path_empty(self):
        bank = make_bank([make_exercise(category_path=())])
        tree = list_tree(bank)
        assert tree[0].name == "uncategorized"
        assert tree[0].exercises[0].id == "sum-to-n"

    def test_to_dict_has_no_solution(self):
        bank = load_bank(FIXTURES / "bank.json")
        text = json.dumps([n.to_dict() for n in list_tree(bank)])
        assert "solution" not in text
