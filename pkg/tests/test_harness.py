"""Failure rates, latency stats, cost comparison, and report emission."""

import math
import random

import pytest

from codetutor.bank import ErrorType
from codetutor.gateway import LlmUsage, MockGateway, PricingTable
from codetutor.harness import (
    CostComparison,
    EmptySample,
    EvalRecord,
    FileUnwritable,
    LatencyStats,
    MissingLabel,
    cost_bench,
    emit_report,
    failure_rate,
    latency_bench,
    latency_report_doc,
    parse_report_json,
    percentile,
    run_eval,
)
from codetutor.judge import CorrectnessVerdict
from codetutor.profiles import builtin_profile
from conftest import make_bank, make_exercise, make_record

TYPES = list(ErrorType)


def entry(label, state="wrong"):
    return EvalRecord(
        record=make_record(error_type=label),
        verdict=CorrectnessVerdict(state=state),
        usage=LlmUsage(),
        profile_name="improved",
    )


def fixture_108():
    """108 labeled records: 23 failing HardCoding, 19 failing UnnecessaryCode."""
    records = []
    records += [entry(ErrorType.HardCoding, "wrong")] * 23
    records += [entry(ErrorType.UnnecessaryCode, "wrong")] * 19
    records += [entry(ErrorType.HardCoding, "correct")] * 6
    records += [entry(ErrorType.UnnecessaryCode, "correct")] * 10
    records += [entry(ErrorType.ComputationError, "correct")] * 30
    records += [entry(ErrorType.RequirementNotMet, "correct")] * 20
    assert len(records) == 108
    return records


class TestFailureRate:
    def test_documented_rates_on_108_fixture(self):
        report = failure_rate(fixture_108())
        assert report.n_total == 108
        rates = {row.error_type: row for row in report.rows}
        assert rates[ErrorType.HardCoding].n_i == 23
        assert abs(rates[ErrorType.HardCoding].r_i - 21.30) <= 0.005
        assert rates[ErrorType.UnnecessaryCode].n_i == 19
        assert abs(rates[ErrorType.UnnecessaryCode].r_i - 17.59) <= 0.005

    def test_boundary_rates(self):
        all_fail = [entry(ErrorType.HardCoding, "wrong")] * 5
        report = failure_rate(all_fail)
        assert report.rows[0].r_i == 100.00
        none_fail = [entry(ErrorType.HardCoding, "correct")] * 5
        report = failure_rate(none_fail)
        assert report.rows[0].n_i == 0
        assert report.rows[0].r_i == 0.00

    def test_rows_ordered_by_descending_count(self):
        records = (
            [entry(ErrorType.ComputationError)] * 3
            + [entry(ErrorType.HardCoding)] * 5
            + [entry(ErrorType.RequirementNotMet)] * 4
        )
        report = failure_rate(records)
        assert [row.error_type for row in report.rows] == [
            ErrorType.HardCoding,
            ErrorType.RequirementNotMet,
            ErrorType.ComputationError,
        ]

    def test_unlabeled_record_raises(self):
        with pytest.raises(MissingLabel):
            failure_rate([entry(ErrorType.HardCoding), entry(None)])

    def test_empty_input_gives_empty_report(self):
        report = failure_rate([])
        assert report.n_total == 0
        assert report.rows == ()

    def test_agrees_with_brute_force_recount(self):
        rng = random.Random(13)
        for _ in range(20):
            n = rng.randrange(1, 1000)
            records = [
                entry(rng.choice(TYPES), rng.choice(["correct", "wrong", "error"]))
                for _ in range(n)
            ]
            report = failure_rate(records)
            assert report.n_total == n
            for row in report.rows:
                count = 0
                for item in records:
                    if item.record.error_type is row.error_type and item.verdict.state != "correct":
                        count += 1
                assert row.n_i == count
                assert row.r_i == round(count / n * 100, 2)
            assert sum(row.n_i for row in report.rows) <= n


class TestPercentiles:
    def test_documented_triplet(self):
        stats = LatencyStats.from_samples([1.0, 2.0, 3.0])
        assert (stats.mean_ms, stats.min_ms, stats.max_ms) == (2.0, 1.0, 3.0)
        assert stats.p50_ms == 2.0
        assert stats.p90_ms == 3.0

    def test_nearest_rank_matches_oracle(self):
        rng = random.Random(5)
        for _ in range(50):
            values = sorted(rng.uniform(0, 100) for _ in range(rng.randrange(1, 40)))
            for p in (10, 50, 90, 100):
                rank = math.ceil(p / 100 * len(values))
                assert percentile(values, p) == values[rank - 1]

    def test_stats_invariants_hold(self):
        rng = random.Random(6)
        for _ in range(50):
            samples = [rng.uniform(0, 500) for _ in range(rng.randrange(1, 30))]
            stats = LatencyStats.from_samples(samples)
            assert stats.min_ms <= stats.p50_ms <= stats.p90_ms <= stats.max_ms
            assert stats.min_ms <= stats.mean_ms <= stats.max_ms

    def test_empty_sample_raises(self):
        with pytest.raises(EmptySample):
            LatencyStats.from_samples([])


def review_bank(n_records=4):
    exercise = make_exercise()
    records = [make_record(sub_code=f"print({i})") for i in range(n_records)]
    return make_bank([exercise], records)


def latency_mock():
    return MockGateway(
        {
            "latency": {"base_ms": 50.0, "per_output_token_ms": 0.5},
            "default": {"text": "yes — check line 1.\n### Code to fix\n- line 1: recheck"},
        }
    )


class TestLatencyBench:
    def test_improved_mean_strictly_below_initial(self):
        bank = review_bank()
        initial = latency_bench(bank, builtin_profile("initial"), latency_mock())
        improved = latency_bench(bank, builtin_profile("improved"), latency_mock())
        assert improved.stats.mean_ms < initial.stats.mean_ms

    def test_latency_model_is_exact_per_run(self):
        bank = review_bank(n_records=1)
        result = latency_bench(bank, builtin_profile("improved"), latency_mock())
        # two calls per run at 50 + 0.5 x 512 each
        assert result.stats.mean_ms == 2 * (50.0 + 0.5 * 512)

    def test_deterministic_across_runs(self):
        bank = review_bank()
        a = latency_bench(bank, builtin_profile("improved"), latency_mock())
        b = latency_bench(bank, builtin_profile("improved"), latency_mock())
        assert a.stats == b.stats

    def test_trials_multiply_sample_count(self):
        bank = review_bank(n_records=3)
        result = latency_bench(bank, builtin_profile("improved"), latency_mock(), trials=4)
        assert result.stats.count == 12

    def test_gateway_failures_collected_not_raised(self):
        bank = review_bank(n_records=3)
        gw = MockGateway(
            {
                "responses": [
                    {"text": "no"},
                    {"fail": "Auth"},
                    {"text": "no"},
                ]
            }
        )
        result = latency_bench(bank, builtin_profile("improved"), gw)
        assert result.stats.count == 2
        assert len(result.failures) == 1
        assert result.failures[0].kind == "Auth"
        assert result.failures[0].index == 1

    def test_empty_bank_raises_empty_sample(self):
        bank = make_bank([make_exercise()], [])
        with pytest.raises(EmptySample):
            latency_bench(bank, builtin_profile("improved"), latency_mock())

    def test_short_circuited_runs_contribute_no_sample(self):
        bank = make_bank([make_exercise()], [make_record(sub_code="if x\n    pass")])
        with pytest.raises(EmptySample):
            latency_bench(bank, builtin_profile("improved"), latency_mock())


def pinned_script(entries):
    return MockGateway({"responses": entries})


class TestCostBench:
    def test_equal_usage_gives_zero_delta(self):
        bank = review_bank(n_records=1)
        pricing = PricingTable({"mock-model": (0.1, 0.1)})
        calls = [{"text": "yes", "input_tokens": 400, "output_tokens": 100},
                 {"text": "review", "input_tokens": 400, "output_tokens": 100}]
        gw = pinned_script(calls + calls)
        comparison = cost_bench(
            bank, [builtin_profile("initial"), builtin_profile("improved")], gw, pricing
        )
        assert comparison.delta_pct == pytest.approx(0.0)

    def test_ten_percent_delta_from_documented_means(self):
        # initial run sums to 1000 tokens -> 0.100 USD; improved to 900 -> 0.090
        bank = review_bank(n_records=1)
        pricing = PricingTable({"mock-model": (0.1, 0.1)})
        gw = pinned_script(
            [
                {"text": "yes", "input_tokens": 400, "output_tokens": 100},
                {"text": "review", "input_tokens": 400, "output_tokens": 100},
                {"text": "yes", "input_tokens": 400, "output_tokens": 50},
                {"text": "review", "input_tokens": 400, "output_tokens": 50},
            ]
        )
        comparison = cost_bench(
            bank, [builtin_profile("initial"), builtin_profile("improved")], gw, pricing
        )
        initial, improved = comparison.profiles
        assert initial.mean_cost.usd == pytest.approx(0.100)
        assert improved.mean_cost.usd == pytest.approx(0.090)
        assert comparison.delta_pct == pytest.approx(10.00)

    def test_delta_absent_without_initial_profile(self):
        bank = review_bank(n_records=1)
        pricing = PricingTable({"mock-model": (0.1, 0.1)})
        gw = MockGateway({"default": {"text": "no", "input_tokens": 10, "output_tokens": 1}})
        comparison = cost_bench(bank, [builtin_profile("improved")], gw, pricing)
        assert comparison.delta_pct is None

    def test_short_circuit_runs_count_as_zero_cost(self):
        bank = make_bank(
            [make_exercise()],
            [make_record(sub_code="print(1)"), make_record(sub_code="if x\n    pass")],
        )
        pricing = PricingTable({"mock-model": (0.1, 0.1)})
        gw = MockGateway({"default": {"text": "no", "input_tokens": 500, "output_tokens": 500}})
        comparison = cost_bench(bank, [builtin_profile("improved")], gw, pricing)
        (improved,) = comparison.profiles
        assert improved.count == 2
        # one run cost 0.1, the invalid one cost nothing
        assert improved.mean_cost.usd == pytest.approx(0.05)


class TestRunEval:
    def test_verdicts_and_short_circuits(self):
        bank = make_bank(
            [make_exercise()],
            [
                make_record(sub_code="print(6)"),
                make_record(sub_code=""),
                make_record(sub_code="if x\n    pass"),
            ],
        )
        gw = MockGateway({"default": {"text": "VERDICT: WRONG\nTYPE: HardCoding\nconstant."}})
        results, failures = run_eval(bank, builtin_profile("improved"), gw)
        assert failures == []
        assert [r.verdict.state for r in results] == ["wrong", "error", "error"]
        assert results[0].verdict.error_type is ErrorType.HardCoding
        assert results[1].usage.call_count == 0
        assert gw.call_count == 1

    def test_worker_pool_preserves_record_order(self):
        bank = review_bank(n_records=8)
        gw = MockGateway({"default": {"text": "VERDICT: CORRECT"}})
        results, _ = run_eval(bank, builtin_profile("improved"), gw, workers=4)
        assert [r.record.sub_code for r in results] == [f"print({i})" for i in range(8)]


class TestEmitReport:
    def test_failure_rate_csv_contract(self):
        text = emit_report(failure_rate(fixture_108()), fmt="csv")
        lines = text.splitlines()
        assert lines[0] == "error_type,n_i,N,R_i"
        assert "HardCoding,23,108,21.30" in lines
        assert "UnnecessaryCode,19,108,17.59" in lines

    def test_empty_report_is_header_only(self):
        text = emit_report(failure_rate([]), fmt="csv")
        assert text == "error_type,n_i,N,R_i\n"

    def test_same_report_twice_is_byte_identical(self, tmp_path):
        report = failure_rate(fixture_108())
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        emit_report(report, fmt="csv", path=a)
        emit_report(report, fmt="csv", path=b)
        assert a.read_bytes() == b.read_bytes()

    def test_json_round_trip_is_byte_equal(self):
        docs = [
            failure_rate(fixture_108()).to_dict(),
            latency_report_doc(
                [latency_bench(review_bank(), builtin_profile("improved"), latency_mock())]
            ),
            CostComparison(profiles=(), delta_pct=8.53).to_dict(),
        ]
        for doc in docs:
            text = emit_report(doc, fmt="json")
            assert emit_report(parse_report_json(text), fmt="json") == text

    def test_fixed_decimal_formatting(self):
        doc = {"kind": "cost", "profiles": [], "delta_pct_vs_initial": 8.5}
        text = emit_report(doc, fmt="json")
        assert '"delta_pct_vs_initial": 8.50' in text
        stats = LatencyStats.from_samples([612.0])
        text = emit_report(latency_report_doc([type("R", (), {"profile_name": "improved", "stats": stats, "failures": ()})()]), fmt="json")
        assert '"mean_ms": 612.0' in text

    def test_latency_csv_columns(self):
        result = latency_bench(review_bank(), builtin_profile("improved"), latency_mock())
        text = emit_report(latency_report_doc([result]), fmt="csv")
        lines = text.splitlines()
        assert lines[0] == "profile,count,mean_ms,min_ms,max_ms,p50_ms,p90_ms"
        assert lines[1].startswith("improved,4,612.0")

    def test_cost_csv_leaves_initial_delta_blank(self):
        bank = review_bank(n_records=1)
        pricing = PricingTable({"mock-model": (0.1, 0.1)})
        gw = MockGateway({"default": {"text": "no", "input_tokens": 100, "output_tokens": 1}})
        comparison = cost_bench(
            bank, [builtin_profile("initial"), builtin_profile("improved")], gw, pricing
        )
        lines = emit_report(comparison, fmt="csv").splitlines()
        assert lines[0].endswith("delta_pct_vs_initial")
        assert lines[1].startswith("initial,") and lines[1].endswith(",")
        assert lines[2].startswith("improved,") and not lines[2].endswith(",")

    def test_unwritable_path_raises(self, tmp_path):
        with pytest.raises(FileUnwritable):
            emit_report(failure_rate([]), fmt="csv", path=tmp_path / "missing" / "out.csv")

    def test_unknown_format_rejected(self):
        with pytest.raises(ValueError):
            emit_report(failure_rate([]), fmt="yaml")
