"""Catalog service: CKAN-style action API, harvester hooks, RDF export,
OAI-PMH endpoint, quality reports, and the static entry form.

CKAN envelope convention: every action response is {"success": bool, ...}
with "result" on success and "error" {"message", "__type"} on failure.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Callable, Optional

from fastapi import FastAPI, Header, Query, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..catalog import (
    AuthorizationError,
    CatalogError,
    CatalogStore,
    Conflict,
    FailedDependency,
    NotFoundError,
    organization_from_dict,
    organization_to_dict,
    package_from_dict,
    package_to_dict,
)
from ..dcat_export import (
    MEDIA_TYPES,
    UnknownFormat,
    UnknownProfile,
    dataset_graph,
    export_dataset,
)
from ..harvester import AdminCredentials, BadNotification, Harvester
from ..mqa import BadInput, Weights, emit_dqv, score_dataset
from ..oaipmh import OaiEndpoint
from ..rdf import serialize_graph
from ..vocab import Vocabularies

log = logging.getLogger(__name__)

# Accept values that switch /mqa/<id> from the JSON summary to DQV RDF
_RDF_ACCEPT = {media: fmt for fmt, media in MEDIA_TYPES.items() if fmt != "rdf"}


def _ok(result: Any) -> dict[str, Any]:
    return {"success": True, "result": result}


def _fail(status: int, message: str, error_type: str) -> JSONResponse:
    return JSONResponse(
        {"success": False, "error": {"message": message, "__type": error_type}},
        status_code=status,
    )


def _catalog_error(exc: CatalogError) -> JSONResponse:
    if isinstance(exc, AuthorizationError):
        return _fail(403, str(exc), "Authorization Error")
    if isinstance(exc, NotFoundError):
        return _fail(404, str(exc), "Not Found Error")
    if isinstance(exc, Conflict):
        return _fail(409, str(exc), "Conflict Error")
    if isinstance(exc, FailedDependency):
        return _fail(424, str(exc), "Failed Dependency Error")
    return _fail(500, str(exc), "Catalog Error")


def _negotiated_format(accept: Optional[str]) -> Optional[str]:
    """First RDF media type named in Accept, or None for the JSON summary."""
    if not accept:
        return None
    for part in accept.split(","):
        media = part.split(";", 1)[0].strip().lower()
        if media in _RDF_ACCEPT:
            return _RDF_ACCEPT[media]
    return None


def build_catalog_app(
    store: CatalogStore,
    harvester: Optional[Harvester] = None,
    oai: Optional[OaiEndpoint] = None,
    base_iri: str = "http://127.0.0.1:8084",
    weights: Optional[Weights] = None,
    vocabularies: Optional[Vocabularies] = None,
    form_dir: Optional[Path] = None,
    live_head: Optional[Callable[[str], int]] = None,
) -> FastAPI:
    app = FastAPI(title="Open data catalog", docs_url=None, redoc_url=None)

    @app.get("/health")
    def health() -> dict[str, str]:
        return {"status": "ok"}

    # --- CKAN action API --------------------------------------------------

    @app.post("/api/3/action/organization_create")
    def organization_create(
        body: dict[str, Any], authorization: Optional[str] = Header(None)
    ):
        try:
            organization = organization_from_dict(body)
            store.organization_create(organization, token=authorization)
        except CatalogError as exc:
            return _catalog_error(exc)
        except (KeyError, ValueError) as exc:
            return _fail(409, f"bad organization document: {exc}", "Validation Error")
        return _ok(organization_to_dict(store.organization_show(organization.id)))

    def _package_upsert(body: dict[str, Any], authorization: Optional[str]):
        try:
            package = package_from_dict(body)
            store.package_upsert(package, token=authorization)
        except CatalogError as exc:
            return _catalog_error(exc)
        except (KeyError, ValueError) as exc:
            return _fail(409, f"bad package document: {exc}", "Validation Error")
        return _ok(package_to_dict(store.package_show(package.id)))

    @app.post("/api/3/action/package_create")
    def package_create(body: dict[str, Any], authorization: Optional[str] = Header(None)):
        return _package_upsert(body, authorization)

    @app.post("/api/3/action/package_update")
    def package_update(body: dict[str, Any], authorization: Optional[str] = Header(None)):
        return _package_upsert(body, authorization)

    @app.get("/api/3/action/package_show")
    def package_show(id: str = Query(...)):
        try:
            return _ok(package_to_dict(store.package_show(id)))
        except NotFoundError as exc:
            return _catalog_error(exc)

    @app.get("/api/3/action/package_list")
    def package_list():
        return _ok(store.package_list())

    @app.get("/api/3/action/organization_show")
    def organization_show(id: str = Query(...)):
        try:
            return _ok(organization_to_dict(store.organization_show(id)))
        except NotFoundError as exc:
            return _catalog_error(exc)

    @app.get("/api/3/action/organization_list")
    def organization_list():
        return _ok(store.organization_list())

    # --- harvester hooks --------------------------------------------------

    def _creds(user: str, token: str) -> AdminCredentials:
        return AdminCredentials(user_name=user, api_token=token)

    if harvester is not None:

        @app.post("/ngsi-ld/subscribe")
        def subscribe(user: str = Query(""), token: str = Query("")):
            try:
                subscription_id = harvester.handle_subscribe(_creds(user, token))
            except AuthorizationError as exc:
                return JSONResponse({"detail": str(exc)}, status_code=403)
            except ValueError as exc:
                return JSONResponse({"detail": str(exc)}, status_code=400)
            return {"subscriptionId": subscription_id}

        def _unsubscribe(user: str, token: str):
            try:
                harvester.handle_unsubscribe(_creds(user, token))
            except AuthorizationError as exc:
                return JSONResponse({"detail": str(exc)}, status_code=403)
            except NotFoundError as exc:
                return JSONResponse({"detail": str(exc)}, status_code=404)
            except ValueError as exc:
                return JSONResponse({"detail": str(exc)}, status_code=400)
            return {"unsubscribed": True}

        @app.post("/ngsi-ld/unsubscribe")
        def unsubscribe(user: str = Query(""), token: str = Query("")):
            return _unsubscribe(user, token)

        # upstream documentation spells the endpoint with a transposition;
        # serve that spelling too so copy-pasted clients keep working
        @app.post("/ngsi-ld/unsusbcribe")
        def unsubscribe_alias(user: str = Query(""), token: str = Query("")):
            return _unsubscribe(user, token)

        @app.post("/ngsi-ld/notifications")
        def notifications(payload: dict[str, Any]):
            try:
                return harvester.handle_notification(payload)
            except AuthorizationError as exc:
                return JSONResponse({"detail": str(exc)}, status_code=403)
            except BadNotification as exc:
                return JSONResponse({"detail": str(exc)}, status_code=400)

        @app.get("/harvest/status")
        def harvest_status():
            return harvester.status()

    # --- RDF export / OAI-PMH / quality reports ---------------------------

    @app.api_route("/dataset/{ref}.{fmt}", methods=["GET", "HEAD"])
    def export(ref: str, fmt: str, request: Request, profiles: Optional[str] = Query(None)):
        try:
            payload, media = export_dataset(
                store, ref, fmt, profile=profiles, base_iri=base_iri, vocabularies=vocabularies
            )
        except NotFoundError as exc:
            return JSONResponse({"detail": str(exc)}, status_code=404)
        except (UnknownFormat, UnknownProfile) as exc:
            return JSONResponse({"detail": str(exc)}, status_code=406)
        if request.method == "HEAD":
            return Response(b"", media_type=media)
        return Response(payload, media_type=media)

    if oai is not None:

        @app.get("/oai")
        def oai_endpoint(request: Request):
            return Response(
                oai.handle(dict(request.query_params)), media_type="text/xml"
            )

    @app.api_route("/mqa/{ref}", methods=["GET", "HEAD"])
    def quality(
        ref: str,
        request: Request,
        live: bool = Query(False),
        accept: Optional[str] = Header(None),
    ):
        try:
            graph = dataset_graph(store, ref, base_iri, vocabularies)
            report = score_dataset(
                graph,
                live_checks=live,
                weights=weights,
                vocabularies=vocabularies,
                head=live_head,
            )
        except NotFoundError as exc:
            return JSONResponse({"detail": str(exc)}, status_code=404)
        except BadInput as exc:
            return JSONResponse({"detail": str(exc)}, status_code=422)
        fmt = _negotiated_format(accept)
        if fmt is None:
            if request.method == "HEAD":
                return Response(b"", media_type="application/json")
            return JSONResponse(report.to_dict())
        body = serialize_graph(emit_dqv(report), fmt)
        if request.method == "HEAD":
            return Response(b"", media_type=MEDIA_TYPES[fmt])
        return Response(body, media_type=MEDIA_TYPES[fmt])

    if form_dir is not None and Path(form_dir).is_dir():
        app.mount("/form", StaticFiles(directory=str(form_dir), html=True), name="form")
    elif form_dir is not None:
        log.warning("form directory %s missing; /form not mounted", form_dir)

    return app
