"""Evaluation harness: failure rates, latency statistics, and cost comparison.

Everything here is measurement plumbing over the two flows. Benchmarks run
each dataset record through the review pipeline under a profile and collect
gateway-reported latency and token usage; the failure-rate report counts
judged outcomes per error label as R_i = n_i / N x 100.

Reports are emitted deterministically: stable field order, fixed decimal
places per field (rates 2 d.p., USD 5 d.p., milliseconds 1 d.p., token means
1 d.p.), and the JSON form re-emits byte-identically after a parse.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .bank import Bank, DatasetRecord, ErrorType
from .gateway import CostEstimate, GatewayError, LlmUsage, PricingTable, estimate_cost
from .judge import CorrectnessVerdict, run_submission_flow
from .outcomes import EmptySubmission, InvalidSubmission
from .profiles import PromptProfile
from .review import run_review_pipeline


class EmptySample(Exception):
    pass


class MissingLabel(Exception):
    def __init__(self, record_ref: str):
        self.record_ref = record_ref
        super().__init__(f"record {record_ref} has no error_type label")


class FileUnwritable(Exception):
    pass


@dataclass(frozen=True)
class EvalRecord:
    record: DatasetRecord
    verdict: CorrectnessVerdict
    usage: LlmUsage
    profile_name: str


@dataclass(frozen=True)
class BenchFailure:
    ex_id: str
    index: int
    kind: str
    message: str

    def to_dict(self) -> dict:
        return {"ex_id": self.ex_id, "index": self.index, "kind": self.kind}


# ---------------------------------------------------------------------------
# Failure rate (per error type)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FailureRateRow:
    error_type: ErrorType
    n_i: int
    r_i: float  # percentage, already rounded to 2 decimals


@dataclass(frozen=True)
class FailureRateReport:
    n_total: int
    rows: tuple[FailureRateRow, ...]

    def to_dict(self) -> dict:
        return {
            "kind": "failure_rate",
            "n_total": self.n_total,
            "rows": [
                {"error_type": row.error_type.value, "n_i": row.n_i, "r_i": row.r_i}
                for row in self.rows
            ],
        }


def failure_rate(eval_records) -> FailureRateReport:
    """Count, per labeled error type, the records whose verdict is not correct.

    N is the number of evaluated records; every record must carry a label.
    Rows cover each label present in the input (n_i may be 0 when every
    record with that label was judged correct) and are ordered by descending
    n_i, ties broken by label declaration order.
    """
    records = list(eval_records)
    labels: Counter = Counter()
    failing: Counter = Counter()
    for position, entry in enumerate(records):
        label = entry.record.error_type
        if label is None:
            raise MissingLabel(f"{entry.record.ex_id}[{position}]")
        labels[label] += 1
        if entry.verdict.state != "correct":
            failing[label] += 1

    n_total = len(records)
    order = {error_type: rank for rank, error_type in enumerate(ErrorType)}
    present = sorted(labels, key=lambda t: (-failing[t], order[t]))
    rows = tuple(
        FailureRateRow(
            error_type=label,
            n_i=failing[label],
            r_i=round(failing[label] / n_total * 100, 2),
        )
        for label in present
    )
    return FailureRateReport(n_total=n_total, rows=rows)


def run_eval(
    bank: Bank, profile: PromptProfile, gateway, workers: int = 1
) -> tuple[list[EvalRecord], list[BenchFailure]]:
    """Judge every dataset record; gateway failures are collected, not raised."""

    def job(index: int, record: DatasetRecord):
        outcome = run_submission_flow(
            bank.exercises[record.ex_id], record.sub_code, profile, gateway
        )
        verdict = _as_verdict(outcome)
        return EvalRecord(
            record=record, verdict=verdict, usage=verdict.usage, profile_name=profile.name
        )

    return _run_indexed(bank.records, job, workers)


def _as_verdict(outcome) -> CorrectnessVerdict:
    if isinstance(outcome, CorrectnessVerdict):
        return outcome
    if isinstance(outcome, EmptySubmission):
        return CorrectnessVerdict(state="error", reason="empty submission")
    if isinstance(outcome, InvalidSubmission):
        return CorrectnessVerdict(state="error", reason=outcome.message)
    raise TypeError(f"unexpected outcome {type(outcome).__name__}")


def _run_indexed(records, job, workers: int):
    """Run job(index, record) over records, in order, tolerating GatewayError."""
    results = []
    failures = []

    def wrapped(pair):
        index, record = pair
        try:
            return index, job(index, record), None
        except GatewayError as exc:
            return index, None, BenchFailure(record.ex_id, index, exc.kind, str(exc))

    indexed = list(enumerate(records))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(wrapped, indexed))
    else:
        outcomes = [wrapped(pair) for pair in indexed]
    for _, result, failure in sorted(outcomes, key=lambda item: item[0]):
        if failure is not None:
            failures.append(failure)
        else:
            results.append(result)
    return results, failures


# ---------------------------------------------------------------------------
# Latency
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatencyStats:
    count: int
    mean_ms: float
    min_ms: float
    max_ms: float
    p50_ms: float
    p90_ms: float

    @classmethod
    def from_samples(cls, samples: list[float]) -> "LatencyStats":
        if not samples:
            raise EmptySample("no latency samples collected")
        ordered = sorted(samples)
        return cls(
            count=len(ordered),
            mean_ms=sum(ordered) / len(ordered),
            min_ms=ordered[0],
            max_ms=ordered[-1],
            p50_ms=percentile(ordered, 50),
            p90_ms=percentile(ordered, 90),
        )

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "mean_ms": self.mean_ms,
            "min_ms": self.min_ms,
            "max_ms": self.max_ms,
            "p50_ms": self.p50_ms,
            "p90_ms": self.p90_ms,
        }


def percentile(sorted_values: list[float], p: float) -> float:
    """Nearest-rank percentile over an ascending, non-empty list."""
    if not sorted_values:
        raise EmptySample("percentile of an empty sample")
    rank = max(1, math.ceil(p / 100 * len(sorted_values)))
    return sorted_values[min(rank, len(sorted_values)) - 1]


@dataclass(frozen=True)
class LatencyBenchResult:
    profile_name: str
    stats: LatencyStats
    failures: tuple[BenchFailure, ...]


def latency_bench(
    bank: Bank, profile: PromptProfile, gateway, trials: int = 1, workers: int = 1
) -> LatencyBenchResult:
    """Collect per-run gateway latency for each record, `trials` times over.

    A sample is the summed gateway latency of one review-pipeline run.
    Runs stopped locally (empty/invalid source under the improved profile)
    never reach the gateway and contribute no sample.
    """

    def job(index: int, record: DatasetRecord):
        outcome = run_review_pipeline(
            bank.exercises[record.ex_id], record.sub_code, profile, gateway
        )
        usage = getattr(outcome, "usage", None)
        if usage is not None and usage.call_count > 0:
            return usage.latency_ms
        return None

    samples: list[float] = []
    failures: list[BenchFailure] = []
    for _ in range(max(1, trials)):
        results, round_failures = _run_indexed(bank.records, job, workers)
        samples.extend(value for value in results if value is not None)
        failures.extend(round_failures)
    return LatencyBenchResult(
        profile_name=profile.name,
        stats=LatencyStats.from_samples(samples),
        failures=tuple(failures),
    )


def latency_report_doc(results: list[LatencyBenchResult], trials: int = 1) -> dict:
    return {
        "kind": "latency",
        "trials": trials,
        "profiles": [
            {
                "profile": result.profile_name,
                **result.stats.to_dict(),
                "failures": len(result.failures),
            }
            for result in results
        ],
    }


# ---------------------------------------------------------------------------
# Cost
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProfileCost:
    profile_name: str
    count: int
    mean_input_tokens: float
    mean_output_tokens: float
    mean_cost: CostEstimate
    failures: tuple[BenchFailure, ...]


@dataclass(frozen=True)
class CostComparison:
    profiles: tuple[ProfileCost, ...]
    delta_pct: float | None

    def to_dict(self) -> dict:
        return {
            "kind": "cost",
            "profiles": [
                {
                    "profile": entry.profile_name,
                    "count": entry.count,
                    "mean_input_tokens": entry.mean_input_tokens,
                    "mean_output_tokens": entry.mean_output_tokens,
                    "input_usd": entry.mean_cost.input_usd,
                    "output_usd": entry.mean_cost.output_usd,
                    "total_usd": entry.mean_cost.usd,
                    "failures": len(entry.failures),
                }
                for entry in self.profiles
            ],
            "delta_pct_vs_initial": self.delta_pct,
        }


def cost_bench(
    bank: Bank,
    profiles: list[PromptProfile],
    gateway,
    pricing: PricingTable,
    workers: int = 1,
) -> CostComparison:
    """Mean per-run cost for each profile, plus the saving relative to `initial`.

    Every evaluated record counts toward the mean; a run stopped before the
    gateway is a zero-cost run (that saving is part of what the improved
    profile buys). delta% = (initial - improved) / initial x 100 on the mean
    total cost, present when both named profiles are in the list.
    """

    def job_factory(profile: PromptProfile):
        def job(index: int, record: DatasetRecord):
            outcome = run_review_pipeline(
                bank.exercises[record.ex_id], record.sub_code, profile, gateway
            )
            return getattr(outcome, "usage", None) or LlmUsage()

        return job

    entries = []
    means: dict[str, float] = {}
    for profile in profiles:
        usages, failures = _run_indexed(bank.records, job_factory(profile), workers)
        if not usages:
            raise EmptySample(f"no records evaluated for profile {profile.name!r}")
        total = LlmUsage()
        for usage in usages:
            total = total + usage
        count = len(usages)
        total_cost = estimate_cost(total, pricing, gateway.model_id)
        mean_cost = CostEstimate(
            usd=total_cost.usd / count,
            input_usd=total_cost.input_usd / count,
            output_usd=total_cost.output_usd / count,
        )
        entries.append(
            ProfileCost(
                profile_name=profile.name,
                count=count,
                mean_input_tokens=total.input_tokens / count,
                mean_output_tokens=total.output_tokens / count,
                mean_cost=mean_cost,
                failures=tuple(failures),
            )
        )
        means[profile.name] = mean_cost.usd

    delta = None
    if "initial" in means and "improved" in means and means["initial"] > 0:
        delta = (means["initial"] - means["improved"]) / means["initial"] * 100
    return CostComparison(profiles=tuple(entries), delta_pct=delta)


# ---------------------------------------------------------------------------
# Report emission
# ---------------------------------------------------------------------------

_CSV_HEADERS = {
    "failure_rate": ["error_type", "n_i", "N", "R_i"],
    "latency": ["profile", "count", "mean_ms", "min_ms", "max_ms", "p50_ms", "p90_ms"],
    "cost": [
        "profile",
        "count",
        "mean_input_tokens",
        "mean_output_tokens",
        "input_usd",
        "output_usd",
        "total_usd",
        "delta_pct_vs_initial",
    ],
}


def _decimals_for(key: str | None) -> int | None:
    if key is None:
        return None
    lowered = key.lower()
    if lowered.endswith("usd"):
        return 5
    if lowered.endswith("_ms"):
        return 1
    if lowered == "r_i" or lowered.endswith("_pct") or lowered == "delta_pct_vs_initial":
        return 2
    if lowered.endswith("_tokens"):
        return 1
    return None


def _format_scalar(value, key: str | None) -> str:
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, int):
        return str(value)
    decimals = _decimals_for(key)
    if decimals is None:
        return json.dumps(value)
    return f"{value:.{decimals}f}"


def _write_json(value, key: str | None, indent: int, out: io.StringIO) -> None:
    pad = " " * indent
    child_pad = " " * (indent + 2)
    if isinstance(value, dict):
        if not value:
            out.write("{}")
            return
        out.write("{\n")
        for position, (child_key, child) in enumerate(value.items()):
            out.write(f"{child_pad}{json.dumps(child_key, ensure_ascii=False)}: ")
            _write_json(child, child_key, indent + 2, out)
            out.write(",\n" if position < len(value) - 1 else "\n")
        out.write(pad + "}")
    elif isinstance(value, list):
        if not value:
            out.write("[]")
            return
        out.write("[\n")
        for position, child in enumerate(value):
            out.write(child_pad)
            _write_json(child, key, indent + 2, out)
            out.write(",\n" if position < len(value) - 1 else "\n")
        out.write(pad + "]")
    else:
        out.write(_format_scalar(value, key))


def report_to_json_text(doc: dict) -> str:
    out = io.StringIO()
    _write_json(doc, None, 0, out)
    out.write("\n")
    return out.getvalue()


def parse_report_json(text: str) -> dict:
    return json.loads(text)


def _csv_cell(row: dict, column: str):
    value = row.get(column)
    if value is None:
        return ""
    if isinstance(value, float):
        decimals = _decimals_for(column)
        return f"{value:.{decimals}f}" if decimals is not None else repr(value)
    return value


def report_to_csv_text(doc: dict) -> str:
    kind = doc.get("kind")
    if kind not in _CSV_HEADERS:
        raise ValueError(f"no CSV layout for report kind {kind!r}")
    columns = _CSV_HEADERS[kind]
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    if kind == "failure_rate":
        for row in doc.get("rows", []):
            writer.writerow(
                [
                    row["error_type"],
                    row["n_i"],
                    doc["n_total"],
                    f"{float(row['r_i']):.2f}",
                ]
            )
    else:
        delta = doc.get("delta_pct_vs_initial")
        for row in doc.get("profiles", []):
            cells = dict(row)
            if kind == "cost":
                is_initial = row.get("profile") == "initial"
                cells["delta_pct_vs_initial"] = None if is_initial else delta
            writer.writerow([_csv_cell(cells, column) for column in columns])
    return out.getvalue()


def emit_report(report, fmt: str = "json", path: str | Path | None = None) -> str:
    """Serialize a report (object with to_dict, or a plain doc) and optionally write it."""
    doc = report.to_dict() if hasattr(report, "to_dict") else report
    if fmt == "json":
        text = report_to_json_text(doc)
    elif fmt == "csv":
        text = report_to_csv_text(doc)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path is not None:
        try:
            Path(path).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise FileUnwritable(f"cannot write report to {path}: {exc}") from exc
    return text
