"""Registry service: dataset publication, vocabularies, quality preview.

The quality preview scores the graph the dataset WOULD produce, without
publishing anything, so the entry form can show a score before submit.
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from ..mapping import catalogue_to_organization, dataset_to_package, distribution_to_resource, package_to_dcat
from ..model import AccessRights, DescriptionRequest, Language, Violation
from ..mqa import Weights, score_dataset
from ..rdf import RdfGraph
from ..registry import PublishError, Registry, ValidationFailed
from ..vocab import Vocabularies
from .schemas import (
    DatasetDescription,
    HealthResponse,
    QualityReportModel,
    RegisterResponse,
    ValidationProblem,
    ViolationModel,
    VocabulariesResponse,
)

_ACCESS_RIGHTS_LABELS = {m.value for m in AccessRights} | {"Publich"}
_LANGUAGE_LABELS = {m.value for m in Language}


def _to_request(body: DatasetDescription) -> tuple[Optional[DescriptionRequest], list[Violation]]:
    violations: list[Violation] = []
    if body.access_rights not in _ACCESS_RIGHTS_LABELS:
        violations.append(
            Violation("accessRights", "vocabulary", f"unknown access rights value {body.access_rights!r}")
        )
    if body.language not in _LANGUAGE_LABELS:
        violations.append(
            Violation("language", "vocabulary", f"unknown language value {body.language!r}")
        )
    if violations:
        return None, violations
    return body.to_request(), []


def _violation_response(violations) -> JSONResponse:
    problem = ValidationProblem(
        violations=[ViolationModel.from_violation(v) for v in violations]
    )
    return JSONResponse(problem.model_dump(), status_code=422)


def preview_graph(registry: Registry, req: DescriptionRequest) -> RdfGraph:
    """The DCAT graph this request would yield after publish + harvest."""
    bundle = registry.build(req)
    organization, _ = catalogue_to_organization(bundle.catalogue)
    resources = [distribution_to_resource(d)[0] for d in bundle.distributions]
    package, _ = dataset_to_package(bundle.dataset, organization.id, resources)
    return package_to_dcat(package, registry.cfg.catalog_base)


def build_registry_app(
    registry: Registry,
    weights: Optional[Weights] = None,
    vocabularies: Optional[Vocabularies] = None,
) -> FastAPI:
    app = FastAPI(title="Dataset registry", docs_url=None, redoc_url=None)
    # the entry form is served from the catalog origin
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )

    @app.get("/registry/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse()

    @app.get("/registry/vocabularies", response_model=VocabulariesResponse)
    def list_vocabularies() -> dict:
        return registry.vocabulary_payload()

    @app.post("/registry/datasets", response_model=RegisterResponse, status_code=201)
    def register(body: DatasetDescription):
        req, violations = _to_request(body)
        if violations:
            return _violation_response(violations)
        try:
            bundle, receipt = registry.register(req)
        except ValidationFailed as exc:
            return _violation_response(exc.violations)
        except PublishError as exc:
            return JSONResponse(
                {
                    "detail": "publication aborted",
                    "failedEntity": exc.failed_entity,
                    "cause": exc.cause,
                    "receipt": [{"id": i, "action": a} for i, a in exc.receipt],
                },
                status_code=502,
            )
        ids = bundle.ids()
        return {
            "catalogueId": ids["catalogueId"],
            "datasetId": ids["datasetId"],
            "distributionIds": ids["distributionIds"],
            "receipt": [{"id": i, "action": a} for i, a in receipt],
        }

    @app.post("/mqa/preview", response_model=QualityReportModel)
    def preview(body: DatasetDescription):
        req, violations = _to_request(body)
        if violations:
            return _violation_response(violations)
        try:
            graph = preview_graph(registry, req)
        except ValidationFailed as exc:
            return _violation_response(exc.violations)
        report = score_dataset(graph, weights=weights, vocabularies=vocabularies)
        return report.to_dict()

    return app
