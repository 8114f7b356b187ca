"""Command line entry points: run the service, or run the benchmarks.

The eval subcommands default to the improved profile and read gateway
configuration from the environment (LLM_API_KEY, LLM_MODEL, LLM_BASE_URL,
LLM_MOCK_SCRIPT); `--mock <script>` forces the scripted offline gateway.
"""

from __future__ import annotations

import os
import sys

import click

from .bank import BankError, load_bank
from .gateway import GatewayError, MockGateway, PricingTable, gateway_from_env
from .harness import (
    EmptySample,
    MissingLabel,
    cost_bench,
    emit_report,
    failure_rate,
    latency_bench,
    latency_report_doc,
    run_eval,
)
from .profiles import PROFILE_NAMES, ProfileError, load_profile
from .service import create_app

_FORMATS = click.Choice(["json", "csv"])


def _fail(exc: Exception) -> "click.ClickException":
    return click.ClickException(str(exc))


def _load_bank(path: str):
    try:
        return load_bank(path)
    except BankError as exc:
        raise _fail(exc)


def _gateway(mock: str | None):
    try:
        if mock:
            return MockGateway(mock)
        return gateway_from_env()
    except (OSError, ValueError) as exc:
        raise _fail(exc)


def _profiles(spec: str, locale: str):
    try:
        return [load_profile(name.strip(), locale) for name in spec.split(",") if name.strip()]
    except ProfileError as exc:
        raise _fail(exc)


def _emit(report, fmt: str, out: str | None) -> None:
    text = emit_report(report, fmt=fmt, path=out)
    if out:
        click.echo(f"wrote {out}", err=True)
    else:
        click.echo(text, nl=False)


def _warn_failures(failures) -> None:
    if failures:
        click.echo(f"warning: {len(failures)} record(s) failed at the gateway", err=True)


@click.group()
def main() -> None:
    """Code tutor service and evaluation tools."""


@main.command()
@click.option("--bank", "bank_path", default=lambda: os.environ.get("BANK_PATH"), help="Exercise bank JSON file.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=lambda: int(os.environ.get("PORT", "8000")), help="Listen port [env PORT, default 8000].")
@click.option("--profile", default=lambda: os.environ.get("PROFILE_DEFAULT", "improved"), help="Default flow profile [env PROFILE_DEFAULT].")
@click.option("--locale", default="en", show_default=True, type=click.Choice(["en", "ko"]))
@click.option("--mock", "mock_script", default=None, help="Mock gateway script (JSON); overrides env.")
@click.option("--rate-limit", default=10, show_default=True, help="Requests per minute per client for LLM-bound endpoints.")
@click.option("--cors-origin", "cors_origins", multiple=True, help="Allowed CORS origin (repeatable; default *).")
def serve(bank_path, host, port, profile, locale, mock_script, rate_limit, cors_origins):
    """Run the REST service."""
    try:
        import uvicorn
    except ImportError as exc:  # pragma: no cover - uvicorn is a hard dep
        raise _fail(exc)

    if profile not in PROFILE_NAMES:
        raise click.ClickException(f"profile must be one of {list(PROFILE_NAMES)}, got {profile!r}")
    bank = _load_bank(bank_path) if bank_path else None
    if bank is None:
        click.echo("no bank configured; serving /health only until one is loaded", err=True)
    app = create_app(
        bank=bank,
        gateway=_gateway(mock_script),
        default_profile=profile,
        locale=locale,
        rate_limit_per_min=rate_limit,
        cors_origins=list(cors_origins) or None,
    )
    uvicorn.run(app, host=host, port=port, log_level="info")


@main.group()
def eval() -> None:
    """Benchmarks over a labeled exercise bank."""


@eval.command("failure-rate")
@click.option("--bank", "bank_path", required=True, help="Exercise bank JSON file.")
@click.option("--profile", default="improved", show_default=True, help="Profile name or profile file.")
@click.option("--locale", default="en", type=click.Choice(["en", "ko"]))
@click.option("--mock", "mock_script", default=None, help="Mock gateway script (JSON).")
@click.option("--workers", default=1, show_default=True)
@click.option("--format", "fmt", type=_FORMATS, default="json", show_default=True)
@click.option("--out", default=None, help="Write the report here instead of stdout.")
def failure_rate_cmd(bank_path, profile, locale, mock_script, workers, fmt, out):
    """Judge every record and report failure rates per error type."""
    bank = _load_bank(bank_path)
    gateway = _gateway(mock_script)
    (chosen,) = _profiles(profile, locale)
    try:
        records, failures = run_eval(bank, chosen, gateway, workers=workers)
        report = failure_rate(records)
    except (MissingLabel, GatewayError) as exc:
        raise _fail(exc)
    _warn_failures(failures)
    _emit(report, fmt, out)


@eval.command("latency")
@click.option("--bank", "bank_path", required=True, help="Exercise bank JSON file.")
@click.option("--profiles", default="initial,improved", show_default=True, help="Comma-separated profile names/files.")
@click.option("--locale", default="en", type=click.Choice(["en", "ko"]))
@click.option("--trials", default=1, show_default=True)
@click.option("--mock", "mock_script", default=None, help="Mock gateway script (JSON).")
@click.option("--workers", default=1, show_default=True)
@click.option("--format", "fmt", type=_FORMATS, default="json", show_default=True)
@click.option("--out", default=None)
def latency_cmd(bank_path, profiles, locale, trials, mock_script, workers, fmt, out):
    """Run the review flow per record and report latency statistics."""
    bank = _load_bank(bank_path)
    gateway = _gateway(mock_script)
    results = []
    try:
        for chosen in _profiles(profiles, locale):
            result = latency_bench(bank, chosen, gateway, trials=trials, workers=workers)
            _warn_failures(result.failures)
            results.append(result)
    except (EmptySample, GatewayError) as exc:
        raise _fail(exc)
    _emit(latency_report_doc(results, trials=trials), fmt, out)


@eval.command("cost")
@click.option("--bank", "bank_path", required=True, help="Exercise bank JSON file.")
@click.option("--pricing", "pricing_path", required=True, help="Pricing table JSON file.")
@click.option("--profiles", default="initial,improved", show_default=True, help="Comma-separated profile names/files.")
@click.option("--locale", default="en", type=click.Choice(["en", "ko"]))
@click.option("--mock", "mock_script", default=None, help="Mock gateway script (JSON).")
@click.option("--workers", default=1, show_default=True)
@click.option("--format", "fmt", type=_FORMATS, default="json", show_default=True)
@click.option("--out", default=None)
def cost_cmd(bank_path, pricing_path, profiles, locale, mock_script, workers, fmt, out):
    """Run the review flow per record and compare mean per-run cost."""
    bank = _load_bank(bank_path)
    gateway = _gateway(mock_script)
    try:
        pricing = PricingTable.load(pricing_path)
    except (OSError, ValueError, KeyError) as exc:
        raise _fail(exc)
    try:
        comparison = cost_bench(bank, _profiles(profiles, locale), gateway, pricing, workers=workers)
    except (EmptySample, GatewayError) as exc:
        raise _fail(exc)
    for entry in comparison.profiles:
        _warn_failures(entry.failures)
    _emit(comparison, fmt, out)


if __name__ == "__main__":
    sys.exit(main())
