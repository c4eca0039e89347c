"""Field-level transformations between entity views, catalog records and RDF.

One function per direction the pipeline needs: Catalogue/Dataset/Distribution
views into catalog records, and catalog packages into DCAT-AP graphs. All
functions are pure; anything dropped on the way out is reported as an issue.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .model import (
    CatalogOrganization,
    CatalogPackage,
    CatalogResource,
    CatalogueEntity,
    DatasetEntity,
    DistributionEntity,
    Interval,
    is_absolute_uri,
    isoformat_utc,
    slugify,
)
from .rdf import DCAT, DCT, OWL, RDF, XSD, IRI, Literal, Object, RdfGraph
from .vocab import Vocabularies, default_vocabularies


class IssueSeverity(Enum):
    SKIP = "skip"
    WARN = "warn"


@dataclass(frozen=True)
class MappingIssue:
    """A source field that did not make it into the target record."""

    source_field: str
    severity: IssueSeverity
    message: str


def _unmapped(field: str, populated: bool, reason: str) -> MappingIssue:
    # A populated source field that gets dropped is worth a warning; an empty
    # one is only recorded as skipped.
    severity = IssueSeverity.WARN if populated else IssueSeverity.SKIP
    return MappingIssue(field, severity, reason)


def encode_extra(values: Sequence[str]) -> str:
    """CKAN extras are flat text: single values stay plain, several become a JSON array."""
    if len(values) == 1:
        return values[0]
    return json.dumps(list(values))


def decode_extra(raw: str) -> list[str]:
    if raw.startswith("["):
        return [str(item) for item in json.loads(raw)]
    return [raw]


def catalogue_to_organization(
    c: CatalogueEntity,
) -> tuple[CatalogOrganization, list[MappingIssue]]:
    issues = [_unmapped("publisher", bool(c.publisher), "no organization-side publisher field")]
    extras = {"url": c.homepage} if c.homepage else {}
    org = CatalogOrganization(
        id=c.id,
        name=slugify(c.title),
        title=c.title,
        description=c.description,
        extras=extras,
        packages=tuple(c.dataset),
    )
    return org, issues


def dataset_to_package(
    d: DatasetEntity,
    org_id: str,
    resources: Sequence[CatalogResource] = (),
) -> tuple[CatalogPackage, list[MappingIssue]]:
    issues: list[MappingIssue] = []
    tags: list[str] = []
    for keyword in d.keyword:
        trimmed = keyword.strip()
        if trimmed and trimmed not in tags:
            tags.append(trimmed)
    extras: dict[str, str] = {}
    if d.access_rights:
        extras["access_rights"] = d.access_rights
    if d.language:
        extras["language"] = encode_extra(d.language)
    if d.spatial:
        extras["spatial"] = encode_extra(d.spatial)
    if d.temporal is not None:
        extras["temporal_start"] = isoformat_utc(d.temporal.start)
        if d.temporal.end is not None:
            extras["temporal_end"] = isoformat_utc(d.temporal.end)
    if d.theme:
        extras["theme"] = encode_extra(d.theme)
    if d.has_version:
        extras["has_version"] = d.has_version
    if d.version_notes:
        extras["version_notes"] = d.version_notes
    extras["issued"] = isoformat_utc(d.date_created)
    extras["modified"] = isoformat_utc(d.date_modified)
    package = CatalogPackage(
        id=d.id,
        name=slugify(d.title),
        title=d.title,
        notes=d.description,
        owner_org=org_id,
        metadata_created=isoformat_utc(d.date_created),
        metadata_modified=isoformat_utc(d.date_modified),
        author=", ".join(d.creator) if d.creator else None,
        license_id=d.license,
        maintainer=", ".join(d.data_provider) if d.data_provider else None,
        url=d.landing_page,
        tags=tuple(tags),
        resources=tuple(resources),
        extras=extras,
    )
    return package, issues


def distribution_to_resource(
    x: DistributionEntity,
) -> tuple[CatalogResource, list[MappingIssue]]:
    issues = [_unmapped("availability", bool(x.availability), "no resource-side availability field")]
    resource = CatalogResource(
        id=x.id,
        name=x.title,
        description=x.description,
        url=x.access_url,
        access_url=x.access_url,
        download_url=x.download_url,
        created=isoformat_utc(x.date_created),
        last_modified=isoformat_utc(x.date_modified),
        size=x.byte_size,
        mimetype=x.media_type,
        format=x.format.value,
        license=x.license,
        rights=x.rights,
    )
    return resource, issues


# --- catalog package -> DCAT-AP graph ------------------------------------

DATASET_PREDICATES = frozenset(
    {
        DCT.term("description"),
        DCT.term("title"),
        DCT.term("accessRights"),
        DCAT.term("keyword"),
        DCAT.term("landingPage"),
        DCT.term("language"),
        DCT.term("publisher"),
        DCT.term("spatial"),
        DCT.term("temporal"),
        DCAT.term("theme"),
        OWL.term("versionInfo"),
        DCAT.term("contactPoint"),
        DCT.term("issued"),
        DCT.term("modified"),
    }
)

DISTRIBUTION_PREDICATES = frozenset(
    {
        DCT.term("description"),
        DCT.term("title"),
        DCAT.term("accessURL"),
        DCAT.term("byteSize"),
        DCAT.term("downloadURL"),
        DCT.term("license"),
        DCAT.term("mediaType"),
        DCT.term("rights"),
        DCT.term("issued"),
        DCT.term("modified"),
        DCT.term("format"),
    }
)

ALLOWED_PREDICATES = frozenset(
    DATASET_PREDICATES | DISTRIBUTION_PREDICATES | {RDF.term("type"), DCAT.term("distribution")}
)


def dataset_iri(base_iri: str, package_name: str) -> IRI:
    return IRI(f"{base_iri.rstrip('/')}/dataset/{package_name}")


def resource_iri(dataset: IRI, resource_name: str) -> IRI:
    return IRI(f"{dataset.value}/distribution/{slugify(resource_name)}")


def _uri_or_literal(value: str) -> Object:
    return IRI(value) if is_absolute_uri(value) else Literal(value)


def _datetime_literal(value: str) -> Literal:
    return Literal(value, datatype=XSD.term("dateTime"))


def _resolved(value: str, vocabulary) -> Object:
    """Controlled-vocabulary token -> IRI; anything else passes through as-is."""
    if value in vocabulary:
        return IRI(vocabulary.resolve(value))
    return _uri_or_literal(value)


def package_to_dcat(
    p: CatalogPackage,
    base_iri: str,
    vocabularies: Optional[Vocabularies] = None,
) -> RdfGraph:
    if vocabularies is None:
        vocabularies = default_vocabularies()
    graph = RdfGraph()
    subject = dataset_iri(base_iri, p.name)
    graph.add(subject, RDF.term("type"), DCAT.term("Dataset"))
    graph.add(subject, DCT.term("title"), Literal(p.title))
    graph.add(subject, DCT.term("description"), Literal(p.notes))
    extras = p.extras
    if "access_rights" in extras:
        graph.add(subject, DCT.term("accessRights"), _uri_or_literal(extras["access_rights"]))
    for tag in p.tags:
        graph.add(subject, DCAT.term("keyword"), Literal(tag))
    if p.url:
        graph.add(subject, DCAT.term("landingPage"), _uri_or_literal(p.url))
    if "language" in extras:
        for language in decode_extra(extras["language"]):
            graph.add(subject, DCT.term("language"), _uri_or_literal(language))
    graph.add(subject, DCT.term("publisher"), _uri_or_literal(p.owner_org))
    if "spatial" in extras:
        for location in decode_extra(extras["spatial"]):
            graph.add(subject, DCT.term("spatial"), _uri_or_literal(location))
    # the predicate set stays within the mapping tables, so the coverage
    # interval is carried as bare dateTime literals instead of a period node
    if "temporal_start" in extras:
        graph.add(subject, DCT.term("temporal"), _datetime_literal(extras["temporal_start"]))
        if "temporal_end" in extras:
            graph.add(subject, DCT.term("temporal"), _datetime_literal(extras["temporal_end"]))
    if "theme" in extras:
        for theme in decode_extra(extras["theme"]):
            graph.add(subject, DCAT.term("theme"), _uri_or_literal(theme))
    if "version_notes" in extras:
        graph.add(subject, OWL.term("versionInfo"), Literal(extras["version_notes"]))
    if p.maintainer:
        graph.add(subject, DCAT.term("contactPoint"), Literal(p.maintainer))
    if "issued" in extras:
        graph.add(subject, DCT.term("issued"), _datetime_literal(extras["issued"]))
    if "modified" in extras:
        graph.add(subject, DCT.term("modified"), _datetime_literal(extras["modified"]))
    for resource in p.resources:
        node = resource_iri(subject, resource.name)
        graph.add(subject, DCAT.term("distribution"), node)
        graph.add(node, RDF.term("type"), DCAT.term("Distribution"))
        graph.add(node, DCT.term("title"), Literal(resource.name))
        graph.add(node, DCT.term("description"), Literal(resource.description))
        graph.add(node, DCAT.term("accessURL"), _uri_or_literal(resource.access_url))
        if resource.size is not None:
            graph.add(node, DCAT.term("byteSize"), Literal(str(resource.size), datatype=XSD.term("decimal")))
        graph.add(node, DCAT.term("downloadURL"), _uri_or_literal(resource.download_url))
        if resource.license:
            graph.add(node, DCT.term("license"), _resolved(resource.license, vocabularies.licences))
        if resource.mimetype:
            graph.add(node, DCAT.term("mediaType"), _resolved(resource.mimetype, vocabularies.media_types))
        if resource.rights:
            graph.add(node, DCT.term("rights"), _uri_or_literal(resource.rights))
        graph.add(node, DCT.term("issued"), _datetime_literal(resource.created))
        graph.add(node, DCT.term("modified"), _datetime_literal(resource.last_modified))
        if resource.format:
            graph.add(node, DCT.term("format"), _resolved(resource.format, vocabularies.file_types))
    return graph
