"""Reverse proxy translating friendly data URLs into broker queries.

Only GET and HEAD are routed; every other method 405s before any broker
call is made. HEAD is served as GET with the body dropped.
"""

from __future__ import annotations

from datetime import datetime
from typing import Callable, Protocol

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from ..model import utcnow
from ..retriever import BadRequest, broker_query, parse_path


class BrokerClient(Protocol):
    """The httpx.Client surface the proxy needs (TestClient also satisfies it)."""

    def get(self, url: str, *, params: dict, headers: dict): ...


def build_retriever_app(
    broker_client: BrokerClient,
    clock: Callable[[], datetime] = utcnow,
) -> FastAPI:
    app = FastAPI(title="Data retriever", docs_url=None, redoc_url=None)

    @app.get("/health")
    def health() -> dict[str, str]:
        return {"status": "ok"}

    @app.api_route("/retriever/{rest:path}", methods=["GET", "HEAD"])
    def retrieve(rest: str, request: Request) -> Response:
        # raw_path keeps percent-encoding, which the grammar distinguishes
        raw = request.scope.get("raw_path")
        path = raw.decode("latin-1") if raw else request.url.path
        try:
            parsed = parse_path(path, request.url.query)
        except BadRequest as exc:
            return JSONResponse({"rule": exc.rule, "detail": str(exc)}, status_code=400)
        broker_path, params, media = broker_query(parsed, clock())
        upstream = broker_client.get(broker_path, params=params, headers={"Accept": media})
        if upstream.status_code != 200:
            return JSONResponse(
                {"detail": f"broker answered {upstream.status_code}"}, status_code=502
            )
        if request.method == "HEAD":
            return Response(b"", media_type=media)
        return Response(upstream.content, media_type=media)

    return app
