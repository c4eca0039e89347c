"""Metadata quality scoring over a dataset's DCAT-AP graph.

Five dimensions, 405 points maximum. Per-metric weights, rating thresholds
and the format classifications live in a JSON data file so they can be
corrected without touching code. Distribution-level metrics pass only when
every distribution passes, which keeps the total monotone under deletions.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Mapping, Optional, Union

from .model import QualityMetricResult, QualityRating, QualityReport, is_http_url
from .rdf import DCAT, DCT, DQV, PV, RDF, XSD, BlankNode, IRI, Literal, Object, RdfGraph, Subject
from .vocab import Vocabularies, default_vocabularies

LIVE_CHECK_CONCURRENCY = 8


class BadInput(ValueError):
    pass


@dataclass(frozen=True)
class Weights:
    max_total: int
    ratings: tuple[tuple[QualityRating, int], ...]
    dimensions: Mapping[str, Mapping[str, int]]
    non_proprietary: frozenset[str]
    machine_readable: frozenset[str]

    def metric_dimension(self, metric: str) -> str:
        for dimension, metrics in self.dimensions.items():
            if metric in metrics:
                return dimension
        raise KeyError(metric)


def load_weights(path: Optional[Union[str, Path]] = None) -> Weights:
    if path is None:
        text = resources.files("bridgeld.mqadata").joinpath("mqa_weights.json").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    doc = json.loads(text)
    weights = Weights(
        max_total=int(doc["maxTotal"]),
        ratings=tuple(
            (QualityRating(entry["rating"]), int(entry["min"])) for entry in doc["ratings"]
        ),
        dimensions={
            dimension: dict(metrics) for dimension, metrics in doc["dimensions"].items()
        },
        non_proprietary=frozenset(doc["nonProprietaryFormats"]),
        machine_readable=frozenset(doc["machineReadableFormats"]),
    )
    configured = sum(sum(metrics.values()) for metrics in weights.dimensions.values())
    if configured != weights.max_total:
        raise ValueError(
            f"weight table sums to {configured}, expected {weights.max_total}"
        )
    return weights


_DEFAULT_WEIGHTS: Optional[Weights] = None


def default_weights() -> Weights:
    global _DEFAULT_WEIGHTS
    if _DEFAULT_WEIGHTS is None:
        _DEFAULT_WEIGHTS = load_weights()
    return _DEFAULT_WEIGHTS


def rating_for(total: int, weights: Optional[Weights] = None) -> QualityRating:
    weights = weights or default_weights()
    if total < 0 or total > weights.max_total:
        raise ValueError(f"total {total} outside 0..{weights.max_total}")
    for rating, minimum in weights.ratings:
        if total >= minimum:
            return rating
    return QualityRating.BAD


def _default_head(url: str) -> int:
    import httpx

    try:
        return httpx.head(url, follow_redirects=True, timeout=10.0).status_code
    except Exception:
        return 599


def _term_text(term: Object) -> str:
    if isinstance(term, IRI):
        return term.value
    if isinstance(term, Literal):
        return term.lexical
    return ""


def _format_token(term: Object) -> str:
    text = _term_text(term)
    return text.rsplit("/", 1)[-1] if "/" in text else text


class _DatasetView:
    """Read helpers over the one dcat:Dataset node and its distributions."""

    def __init__(self, graph: RdfGraph):
        datasets = graph.subjects(predicate=RDF.term("type"), obj=DCAT.term("Dataset"))
        if len(datasets) != 1:
            raise BadInput(f"expected exactly one dataset node, found {len(datasets)}")
        self.graph = graph
        self.dataset = datasets[0]
        self.distributions: list[Subject] = [
            o
            for o in graph.objects(self.dataset, DCAT.term("distribution"))
            if isinstance(o, (IRI, BlankNode))
        ]

    def has(self, subject: Subject, predicate: IRI) -> bool:
        return any(True for _ in self.graph.triples(subject=subject, predicate=predicate))

    def values(self, subject: Subject, predicate: IRI) -> list[Object]:
        return list(self.graph.objects(subject, predicate))

    def dataset_has(self, predicate: IRI) -> bool:
        return self.has(self.dataset, predicate)

    def every_distribution(self, check: Callable[[Subject], bool]) -> bool:
        if not self.distributions:
            return False
        return all(check(d) for d in self.distributions)


def _collect_urls(view: _DatasetView) -> set[str]:
    urls = set()
    for distribution in view.distributions:
        for predicate in (DCAT.term("accessURL"), DCAT.term("downloadURL")):
            for obj in view.values(distribution, predicate):
                urls.add(_term_text(obj))
    return urls


def score_dataset(
    graph: RdfGraph,
    live_checks: bool = False,
    weights: Optional[Weights] = None,
    vocabularies: Optional[Vocabularies] = None,
    head: Optional[Callable[[str], int]] = None,
) -> QualityReport:
    weights = weights or default_weights()
    vocabularies = vocabularies or default_vocabularies()
    view = _DatasetView(graph)

    if live_checks:
        prober = head or _default_head
        urls = sorted(_collect_urls(view))
        with ThreadPoolExecutor(max_workers=LIVE_CHECK_CONCURRENCY) as pool:
            statuses = dict(zip(urls, pool.map(prober, urls)))

        def url_ok(term: Object) -> bool:
            return statuses.get(_term_text(term), 599) < 400

    else:

        def url_ok(term: Object) -> bool:
            return is_http_url(_term_text(term))

    def urls_pass(distribution: Subject, predicate: IRI) -> bool:
        values = view.values(distribution, predicate)
        return bool(values) and all(url_ok(v) for v in values)

    def aligned_format(distribution: Subject) -> bool:
        formats = view.values(distribution, DCT.term("format"))
        media = view.values(distribution, DCAT.term("mediaType"))
        if not formats or not media:
            return False
        formats_ok = all(
            isinstance(v, IRI) and vocabularies.file_types.has_iri(v.value) for v in formats
        )
        media_ok = all(
            isinstance(v, IRI) and vocabularies.media_types.has_iri(v.value) for v in media
        )
        return formats_ok and media_ok

    def format_class(distribution: Subject, allowed: frozenset[str]) -> bool:
        formats = view.values(distribution, DCT.term("format"))
        return bool(formats) and all(_format_token(v) in allowed for v in formats)

    def known_licence(distribution: Subject) -> bool:
        licences = view.values(distribution, DCT.term("license"))
        return bool(licences) and all(
            isinstance(v, IRI) and vocabularies.licences.has_iri(v.value) for v in licences
        )

    access_rights = view.values(view.dataset, DCT.term("accessRights"))
    checks: dict[str, bool] = {
        "keywordAvailability": view.dataset_has(DCAT.term("keyword")),
        "categoryAvailability": view.dataset_has(DCAT.term("theme")),
        "spatialAvailability": view.dataset_has(DCT.term("spatial")),
        "temporalAvailability": view.dataset_has(DCT.term("temporal")),
        "accessUrlStatusCode": view.every_distribution(
            lambda d: urls_pass(d, DCAT.term("accessURL"))
        ),
        "downloadUrlAvailability": view.every_distribution(
            lambda d: view.has(d, DCAT.term("downloadURL"))
        ),
        "downloadUrlStatusCode": view.every_distribution(
            lambda d: urls_pass(d, DCAT.term("downloadURL"))
        ),
        "formatAvailability": view.every_distribution(lambda d: view.has(d, DCT.term("format"))),
        "mediaTypeAvailability": view.every_distribution(
            lambda d: view.has(d, DCAT.term("mediaType"))
        ),
        "formatMediaTypeVocabularyAlignment": view.every_distribution(aligned_format),
        "formatMediaTypeNonProprietary": view.every_distribution(
            lambda d: format_class(d, weights.non_proprietary)
        ),
        "formatMediaTypeMachineReadable": view.every_distribution(
            lambda d: format_class(d, weights.machine_readable)
        ),
        "dcatApCompliance": (
            view.dataset_has(DCT.term("title"))
            and view.dataset_has(DCT.term("description"))
            and view.every_distribution(lambda d: view.has(d, DCAT.term("accessURL")))
        ),
        "licenceAvailability": view.every_distribution(
            lambda d: view.has(d, DCT.term("license"))
        ),
        "knownLicence": view.every_distribution(known_licence),
        "accessRightsAvailability": bool(access_rights),
        "accessRightsVocabularyAlignment": bool(access_rights)
        and all(
            isinstance(v, IRI) and vocabularies.access_rights.has_iri(v.value)
            for v in access_rights
        ),
        "contactPointAvailability": view.dataset_has(DCAT.term("contactPoint")),
        "publisherAvailability": view.dataset_has(DCT.term("publisher")),
        "rightsAvailability": view.every_distribution(lambda d: view.has(d, DCT.term("rights"))),
        "byteSizeAvailability": view.every_distribution(
            lambda d: view.has(d, DCAT.term("byteSize"))
        ),
        "dateIssuedAvailability": view.dataset_has(DCT.term("issued"))
        and view.every_distribution(lambda d: view.has(d, DCT.term("issued"))),
        "dateModifiedAvailability": view.dataset_has(DCT.term("modified"))
        and view.every_distribution(lambda d: view.has(d, DCT.term("modified"))),
    }

    per_metric: list[QualityMetricResult] = []
    dimension_points = {dimension: 0 for dimension in weights.dimensions}
    for dimension, metrics in weights.dimensions.items():
        for metric, weight in metrics.items():
            passed = checks[metric]
            points = weight if passed else 0
            dimension_points[dimension] += points
            per_metric.append(QualityMetricResult(metric, dimension, points, weight, passed))
    total = sum(dimension_points.values())
    return QualityReport(
        findability=dimension_points["findability"],
        accessibility=dimension_points["accessibility"],
        interoperability=dimension_points["interoperability"],
        reusability=dimension_points["reusability"],
        contextuality=dimension_points["contextuality"],
        total=total,
        rating=rating_for(total, weights),
        per_metric=tuple(per_metric),
        max_total=weights.max_total,
    )


def emit_dqv(report: QualityReport) -> RdfGraph:
    """Machine-readable report: one measurement node per metric plus a score node."""
    graph = RdfGraph()
    for index, metric in enumerate(report.per_metric):
        node = BlankNode(f"measurement{index}")
        graph.add(node, RDF.term("type"), DQV.term("QualityMeasurement"))
        graph.add(node, DQV.term("isMeasurementOf"), PV.term(metric.name))
        graph.add(
            node,
            DQV.term("value"),
            Literal("true" if metric.passed else "false", datatype=XSD.term("boolean")),
        )
        graph.add(node, PV.term("score"), Literal(str(metric.points), datatype=XSD.term("integer")))
    score = BlankNode("score")
    graph.add(score, RDF.term("type"), PV.term("Score"))
    graph.add(score, PV.term("score"), Literal(str(report.total), datatype=XSD.term("integer")))
    graph.add(
        score, PV.term("maxScore"), Literal(str(report.max_total), datatype=XSD.term("integer"))
    )
    graph.add(score, PV.term("rating"), Literal(report.rating.value))
    for dimension in ("findability", "accessibility", "interoperability", "reusability", "contextuality"):
        graph.add(
            score,
            PV.term(dimension),
            Literal(str(getattr(report, dimension)), datatype=XSD.term("integer")),
        )
    return graph
