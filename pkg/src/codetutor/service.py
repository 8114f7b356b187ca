"""REST service: exercises, correctness checks, and code reviews over HTTP.

The service is the single proxy between browsers and the LLM provider, so
the API key never reaches a client. The request schema is deliberately
rigid: the only learner-supplied text that can reach a prompt is `source`
(extra fields are rejected), and no response ever carries an exercise
solution — GET payloads omit it and review bodies pass through the leak
redactor.

Error bodies are one flat shape: {"code", "message", "details"?} with code
in {NotFound, EmptyCode, InvalidCode, Upstream, BadRequest}.
"""

from __future__ import annotations

import threading
import time

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict

from .bank import Bank, list_tree
from .gateway import GatewayError, MockGateway
from .judge import CorrectnessVerdict, run_submission_flow
from .outcomes import EmptySubmission, InvalidSubmission, LooksGood
from .profiles import PROFILE_NAMES, builtin_profile
from .review import LEAK_THRESHOLD, ReviewComment, run_review_pipeline
from .validation import strip_comments

_ERROR_STATUS = {
    "NotFound": 404,
    "EmptyCode": 400,
    "InvalidCode": 400,
    "Upstream": 502,
    "BadRequest": 400,
}


class ApiError(Exception):
    def __init__(self, code: str, message: str, details: dict | None = None):
        if code not in _ERROR_STATUS:
            raise ValueError(f"unknown error code {code!r}")
        self.code = code
        self.message = message
        self.details = details
        super().__init__(message)

    def response(self) -> JSONResponse:
        body = {"code": self.code, "message": self.message}
        if self.details is not None:
            body["details"] = self.details
        return JSONResponse(status_code=_ERROR_STATUS[self.code], content=body)


class SubmissionRequest(BaseModel):
    """The whole client→LLM surface: an exercise id, code, optional profile."""

    model_config = ConfigDict(extra="forbid")

    exercise_id: str
    source: str
    profile: str | None = None


class TokenBucket:
    """Per-client-address limiter: `capacity` requests per minute."""

    def __init__(self, capacity: int, clock=time.monotonic):
        self.capacity = capacity
        self.clock = clock
        self._lock = threading.Lock()
        self._state: dict[str, tuple[float, float]] = {}

    def allow(self, client: str) -> bool:
        now = self.clock()
        with self._lock:
            tokens, stamp = self._state.get(client, (float(self.capacity), now))
            tokens = min(self.capacity, tokens + (now - stamp) / 60.0 * self.capacity)
            if tokens < 1.0:
                self._state[client] = (tokens, now)
                return False
            self._state[client] = (tokens - 1.0, now)
            return True


def create_app(
    bank: Bank | None = None,
    gateway=None,
    default_profile: str = "improved",
    locale: str = "en",
    leak_threshold: float = LEAK_THRESHOLD,
    rate_limit_per_min: int = 10,
    cors_origins: list[str] | None = None,
) -> FastAPI:
    app = FastAPI(title="codetutor", docs_url=None, redoc_url=None)
    app.state.bank = bank
    app.state.gateway = gateway
    app.state.default_profile = default_profile
    app.state.locale = locale
    app.state.leak_threshold = leak_threshold
    app.state.bucket = TokenBucket(rate_limit_per_min)

    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins if cors_origins is not None else ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def on_api_error(request: Request, exc: ApiError):
        return exc.response()

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        return ApiError("BadRequest", "malformed request body", {"errors": exc.errors()}).response()

    def current_bank() -> Bank:
        if app.state.bank is None:
            raise ApiError("NotFound", "exercise bank not loaded")
        return app.state.bank

    def find_exercise(exercise_id: str):
        exercise = current_bank().exercises.get(exercise_id)
        if exercise is None:
            raise ApiError("NotFound", f"no exercise with id {exercise_id!r}")
        return exercise

    def resolve_profile(name: str | None):
        chosen = name or app.state.default_profile
        if chosen not in PROFILE_NAMES:
            raise ApiError(
                "BadRequest", f"profile must be one of {list(PROFILE_NAMES)}, got {chosen!r}"
            )
        return builtin_profile(chosen, app.state.locale)

    def check_rate(request: Request) -> None:
        client = request.client.host if request.client else "unknown"
        if not app.state.bucket.allow(client):
            raise _RateLimited()

    def require_nonblank(source: str) -> None:
        # The empty-code stop is absolute at the API boundary, whichever
        # profile the caller picked; benchmarks use the library directly.
        if not strip_comments(source).strip():
            raise ApiError("EmptyCode", "the submitted source is empty")

    class _RateLimited(Exception):
        pass

    @app.exception_handler(_RateLimited)
    async def on_rate_limited(request: Request, exc: _RateLimited):
        return JSONResponse(status_code=429, content={"detail": "rate limit exceeded"})

    @app.get("/health")
    async def health():
        if app.state.bank is None:
            return JSONResponse(status_code=503, content={"status": "loading"})
        return {
            "status": "ok",
            "profile": app.state.default_profile,
            "mock": isinstance(app.state.gateway, MockGateway),
            "exercises": len(app.state.bank.exercises),
        }

    @app.get("/exercises")
    async def exercises():
        return {"tree": [node.to_dict() for node in list_tree(current_bank())]}

    @app.get("/exercises/{exercise_id}")
    async def exercise_detail(exercise_id: str):
        exercise = find_exercise(exercise_id)
        return {
            "id": exercise.id,
            "title": exercise.title,
            "description": exercise.description,
            "input_examples": list(exercise.input_examples),
            "output_examples": list(exercise.output_examples),
            "category_path": list(exercise.category_path),
        }

    @app.post("/submissions")
    async def submissions(body: SubmissionRequest, request: Request):
        check_rate(request)
        exercise = find_exercise(body.exercise_id)
        profile = resolve_profile(body.profile)
        require_nonblank(body.source)
        try:
            outcome = run_submission_flow(exercise, body.source, profile, app.state.gateway)
        except GatewayError as exc:
            raise ApiError("Upstream", f"{exc.kind}: {exc}") from exc
        return _submission_payload(outcome)

    @app.post("/reviews")
    async def reviews(body: SubmissionRequest, request: Request):
        check_rate(request)
        exercise = find_exercise(body.exercise_id)
        profile = resolve_profile(body.profile)
        require_nonblank(body.source)
        try:
            outcome = run_review_pipeline(
                exercise,
                body.source,
                profile,
                app.state.gateway,
                leak_threshold=app.state.leak_threshold,
            )
        except GatewayError as exc:
            raise ApiError("Upstream", f"{exc.kind}: {exc}") from exc
        return _review_payload(outcome)

    return app


def _submission_payload(outcome) -> dict:
    if isinstance(outcome, EmptySubmission):
        raise ApiError("EmptyCode", outcome.message)
    if isinstance(outcome, InvalidSubmission):
        raise ApiError("InvalidCode", outcome.message, details=outcome.report.to_dict())
    assert isinstance(outcome, CorrectnessVerdict)
    payload = outcome.to_dict()
    payload["usage"] = outcome.usage.to_dict()
    return payload


def _review_payload(outcome) -> dict:
    if isinstance(outcome, EmptySubmission):
        raise ApiError("EmptyCode", outcome.message)
    if isinstance(outcome, InvalidSubmission):
        raise ApiError("InvalidCode", outcome.message, details=outcome.report.to_dict())
    if isinstance(outcome, LooksGood):
        return {
            "review_needed": False,
            "body_markdown": outcome.body_markdown,
            "fix_lines": [],
            "redaction": {"leaked": False, "redactions": 0},
            "dropped_fix_lines": 0,
            "usage": outcome.usage.to_dict(),
        }
    assert isinstance(outcome, ReviewComment)
    return {
        "review_needed": True,
        "body_markdown": outcome.body_markdown,
        "fix_lines": [fix.to_dict() for fix in outcome.fix_lines],
        "redaction": {"leaked": outcome.redactions > 0, "redactions": outcome.redactions},
        "dropped_fix_lines": outcome.dropped_fix_lines,
        "usage": outcome.usage.to_dict(),
    }
