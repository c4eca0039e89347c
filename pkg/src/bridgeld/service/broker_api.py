"""Wire-compatible subset of the NGSI-LD API over the in-process broker."""

from __future__ import annotations

from typing import Any, Optional, Union

from fastapi import FastAPI, Header, Query, Request, Response
from fastapi.responses import JSONResponse

from ..model import entity_from_json, parse_datetime
from ..ngsi_broker import (
    BrokerError,
    ContextBroker,
    EntityRejected,
    NotAcceptable,
    SubscriptionNotFound,
    negotiate,
)

_JSON_LD = "application/ld+json"
_MEDIA = {"json": "application/json", "jsonld": _JSON_LD}


def _problem(status: int, detail: str) -> JSONResponse:
    return JSONResponse({"detail": detail}, status_code=status)


def build_broker_app(broker: ContextBroker) -> FastAPI:
    app = FastAPI(title="NGSI-LD context broker", docs_url=None, redoc_url=None)

    @app.get("/health")
    def health() -> dict[str, str]:
        return {"status": "ok"}

    @app.get("/ngsi-ld/v1/entities")
    def query_entities(
        type: str = Query(...),
        limit: int = Query(1000, ge=0),
        offset: int = Query(0, ge=0),
        accept: Optional[str] = Header(None),
    ) -> Response:
        try:
            flavor = negotiate(accept)
        except NotAcceptable as exc:
            return _problem(406, str(exc))
        body = broker.query_entities(type, accept=accept, limit=limit, offset=offset)
        return JSONResponse(body, media_type=_MEDIA[flavor])

    @app.post("/ngsi-ld/v1/entityOperations/upsert")
    def upsert(payload: Union[list[dict[str, Any]], dict[str, Any]]) -> Response:
        documents = payload if isinstance(payload, list) else [payload]
        created: list[str] = []
        for doc in documents:
            try:
                entity = entity_from_json(doc)
                action = broker.upsert_entity(entity)
            except EntityRejected as exc:
                return JSONResponse(
                    {"detail": "entity rejected", "diagnostics": list(exc.diagnostics)},
                    status_code=400,
                )
            except ValueError as exc:
                return _problem(400, str(exc))
            if action == "created":
                created.append(entity.id)
        if created:
            return JSONResponse(created, status_code=201)
        return Response(status_code=204)

    @app.get("/ngsi-ld/v1/temporal/entities")
    def temporal(
        type: str = Query(...),
        timerel: str = Query(...),
        timeAt: str = Query(...),
        accept: Optional[str] = Header(None),
    ) -> Response:
        if timerel != "after":
            return _problem(400, f"unsupported timerel {timerel!r}; only 'after' is served")
        try:
            since = parse_datetime(timeAt)
        except ValueError as exc:
            return _problem(400, f"bad timeAt: {exc}")
        try:
            flavor = negotiate(accept)
        except NotAcceptable as exc:
            return _problem(406, str(exc))
        records = broker.temporal_records(type, since)
        body = broker.render_temporal(records, flavor)
        return JSONResponse(body, media_type=_MEDIA[flavor])

    @app.post("/ngsi-ld/v1/subscriptions", status_code=201)
    def subscribe(payload: dict[str, Any], request: Request) -> Response:
        entity_type = payload.get("entityType")
        callback = payload.get("callbackUrl")
        if entity_type is None:
            entities = payload.get("entities") or []
            if entities and isinstance(entities[0], dict):
                entity_type = entities[0].get("type")
        if callback is None:
            callback = (
                (payload.get("notification") or {}).get("endpoint") or {}
            ).get("uri")
        if not entity_type or not callback:
            return _problem(400, "subscription needs an entity type and a callback URI")
        try:
            subscription = broker.create_subscription(str(entity_type), str(callback))
        except BrokerError as exc:
            # a malformed callback URL is a client error, not a server fault
            return _problem(400, str(exc))
        return JSONResponse(
            subscription.to_dict(),
            status_code=201,
            headers={"Location": f"/ngsi-ld/v1/subscriptions/{subscription.id}"},
        )

    @app.get("/ngsi-ld/v1/subscriptions")
    def list_subscriptions() -> list[dict[str, Any]]:
        return [s.to_dict() for s in broker.subscriptions()]

    @app.delete("/ngsi-ld/v1/subscriptions/{subscription_id}")
    def unsubscribe(subscription_id: str) -> Response:
        try:
            broker.delete_subscription(subscription_id)
        except SubscriptionNotFound as exc:
            return _problem(404, str(exc))
        return Response(status_code=204)

    return app
