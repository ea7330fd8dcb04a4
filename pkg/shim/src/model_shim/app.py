"""HTTP layer: one POST endpoint, JSON in, JSON out.

Status codes: 200 with the task's response body; 400 for anything
malformed (bad JSON, non-object body, unknown task, payload violating the
task contract); 503 when the backend has no model behind it.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .backends import Backend
from .protocol import TASKS, MalformedRequest, ModelNotLoaded


def create_app(backend: Backend) -> FastAPI:
    app = FastAPI(title="model-shim", docs_url=None, redoc_url=None)

    @app.post("/v1/infer")
    async def infer(request: Request) -> JSONResponse:
        try:
            body = await request.json()
        except Exception:
            return JSONResponse({"error": "body is not valid JSON"}, status_code=400)
        if not isinstance(body, dict):
            return JSONResponse(
                {"error": "body must be a JSON object"}, status_code=400
            )
        task = body.get("task")
        if task not in TASKS:
            return JSONResponse(
                {"error": f"unknown task {task!r}; expected one of {list(TASKS)}"},
                status_code=400,
            )
        payload = body.get("payload")
        if not isinstance(payload, dict):
            return JSONResponse(
                {"error": "payload must be a JSON object"}, status_code=400
            )
        try:
            result = backend.handle(task, payload)
        except MalformedRequest as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        except ModelNotLoaded as exc:
            return JSONResponse(
                {"error": f"model not loaded: {exc}"}, status_code=503
            )
        return JSONResponse(result)

    return app
