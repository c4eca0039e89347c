"""Shared fixtures and oracle tables for the test suite.

The mapping row tables below are the reference for what every source field
must turn into on the catalog side and in the exported graph.  Tests iterate
the rows; the expected values are written out by hand so a regression in the
mapping layer cannot hide behind its own helpers.
"""

from __future__ import annotations

import dataclasses
import json
import random
import socket
from datetime import datetime, timedelta, timezone
from importlib import resources as importlib_resources
from typing import Callable, Optional

from bridgeld.catalog import CatalogStore
from bridgeld.mapping import (
    catalogue_to_organization,
    dataset_to_package,
    distribution_to_resource,
    package_to_dcat,
)
from bridgeld.model import (
    CatalogOrganization,
    CatalogPackage,
    CatalogResource,
    CatalogueEntity,
    DatasetEntity,
    DescriptionRequest,
    DistributionEntity,
    DistributionFormat,
    Interval,
    isoformat_utc,
)
from bridgeld.rdf import IRI, Literal, RdfGraph
from bridgeld.registry import RegistryConfig, build_entities
from bridgeld.vocab import default_vocabularies

FROZEN_NOW = datetime(2025, 6, 15, 12, 0, 0, tzinfo=timezone.utc)


class FakeClock:
    """Deterministic clock the tests advance by hand."""

    def __init__(self, start: datetime = FROZEN_NOW):
        self.now = start

    def __call__(self) -> datetime:
        return self.now

    def advance(self, seconds: float) -> datetime:
        self.now += timedelta(seconds=seconds)
        return self.now


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


REGISTRY_CFG = RegistryConfig(
    owner_title="Open Context Data",
    owner_description="Context data published as open data",
    owner_homepage="https://example.org/opendata",
    retriever_base="http://127.0.0.1:8083",
    catalog_base="http://127.0.0.1:8084",
)


def parking_document() -> dict:
    text = (
        importlib_resources.files("bridgeld.fixtures")
        .joinpath("parkingspot_request.json")
        .read_text("utf-8")
    )
    return json.loads(text)


def parking_request() -> DescriptionRequest:
    return DescriptionRequest.from_dict(parking_document())


def fixture_package(
    byte_size: Optional[int] = None, now: datetime = FROZEN_NOW
) -> CatalogPackage:
    """Catalog record for the bundled request, composed without the services."""
    bundle = build_entities(parking_request(), REGISTRY_CFG, now)
    organization, _ = catalogue_to_organization(bundle.catalogue)
    mapped = []
    for distribution in bundle.distributions:
        if byte_size is not None:
            distribution = dataclasses.replace(distribution, byte_size=byte_size)
        resource, _ = distribution_to_resource(distribution)
        mapped.append(resource)
    package, _ = dataset_to_package(bundle.dataset, organization.id, mapped)
    return package


def fixture_graph(byte_size: Optional[int] = None) -> RdfGraph:
    return package_to_dcat(fixture_package(byte_size), REGISTRY_CFG.catalog_base)


# --- vocabulary IRIs used as literal expectations -------------------------

_AUTHORITY = "http://publications.europa.eu/resource/authority"
ACCESS_PUBLIC_IRI = _AUTHORITY + "/access-right/PUBLIC"
LANG_ENG_IRI = _AUTHORITY + "/language/ENG"
LANG_SPA_IRI = _AUTHORITY + "/language/SPA"
COUNTRY_ESP_IRI = _AUTHORITY + "/country/ESP"
THEME_TRAN_IRI = _AUTHORITY + "/data-theme/TRAN"
THEME_ENVI_IRI = _AUTHORITY + "/data-theme/ENVI"

_DCT = "http://purl.org/dc/terms/"
_DCAT = "http://www.w3.org/ns/dcat#"
_OWL = "http://www.w3.org/2002/07/owl#"
_XSD = "http://www.w3.org/2001/XMLSchema#"

RDF_TYPE = IRI("http://www.w3.org/1999/02/22-rdf-syntax-ns#type")
XSD_DATETIME = IRI(_XSD + "dateTime")
XSD_DECIMAL = IRI(_XSD + "decimal")


def dct(name: str) -> IRI:
    return IRI(_DCT + name)


def dnode_of(graph: RdfGraph) -> IRI:
    """The single dcat:Dataset subject of an exported graph."""
    subjects = graph.subjects(predicate=RDF_TYPE, obj=IRI(_DCAT + "Dataset"))
    assert len(subjects) == 1, subjects
    return subjects[0]


def dcat(name: str) -> IRI:
    return IRI(_DCAT + name)


def owl(name: str) -> IRI:
    return IRI(_OWL + name)


# predicate whitelist, spelled out row by row rather than imported
DATASET_PREDICATE_ORACLE = frozenset(
    {
        dct("description"),
        dct("title"),
        dct("accessRights"),
        dct("language"),
        dct("publisher"),
        dct("spatial"),
        dct("temporal"),
        dct("issued"),
        dct("modified"),
        dcat("keyword"),
        dcat("landingPage"),
        dcat("theme"),
        dcat("contactPoint"),
        owl("versionInfo"),
    }
)
DISTRIBUTION_PREDICATE_ORACLE = frozenset(
    {
        dct("description"),
        dct("title"),
        dct("license"),
        dct("rights"),
        dct("issued"),
        dct("modified"),
        dct("format"),
        dcat("accessURL"),
        dcat("byteSize"),
        dcat("downloadURL"),
        dcat("mediaType"),
    }
)
PREDICATE_ORACLE = (
    DATASET_PREDICATE_ORACLE
    | DISTRIBUTION_PREDICATE_ORACLE
    | {RDF_TYPE, dcat("distribution")}
)


# --- fixed mapping case ---------------------------------------------------

T_CREATED = datetime(2025, 6, 1, 8, 30, 0, tzinfo=timezone.utc)
T_MODIFIED = datetime(2025, 6, 10, 9, 45, 0, tzinfo=timezone.utc)
T_DIST_CREATED = datetime(2025, 6, 1, 9, 0, 0, tzinfo=timezone.utc)
T_DIST_MODIFIED = datetime(2025, 6, 12, 16, 20, 0, tzinfo=timezone.utc)

MAPPING_BASE = "http://127.0.0.1:8084"


@dataclasses.dataclass(frozen=True)
class MappingCase:
    catalogue: CatalogueEntity
    dataset: DatasetEntity
    dist_json: DistributionEntity
    dist_ld: DistributionEntity
    org: CatalogOrganization
    org_issues: tuple
    res_json: CatalogResource
    res_json_issues: tuple
    res_ld: CatalogResource
    res_ld_issues: tuple
    package: CatalogPackage
    package_issues: tuple
    graph: RdfGraph
    dnode: IRI
    node_json: IRI
    node_ld: IRI


def build_mapping_case() -> MappingCase:
    catalogue = CatalogueEntity(
        id="urn:ngsi-ld:Catalogue:open-context-catalogue",
        title="Open Context Catalogue",
        description="Context data the city publishes as open data.",
        homepage="https://example.org/opendata",
        publisher="Municipal IT Office",
        dataset=("urn:ngsi-ld:Dataset:parking-spot-occupancy",),
    )
    dataset = DatasetEntity(
        id="urn:ngsi-ld:Dataset:parking-spot-occupancy",
        title="Parking spot occupancy",
        description="Live occupancy of on-street parking spots.",
        distribution=(
            "urn:ngsi-ld:Distribution:parking-spot-occupancy:json",
            "urn:ngsi-ld:Distribution:parking-spot-occupancy:jsonld",
        ),
        date_created=T_CREATED,
        date_modified=T_MODIFIED,
        access_rights=ACCESS_PUBLIC_IRI,
        creator=("Sensor Team", "Data Office"),
        keyword=("parking", "occupancy"),
        landing_page="http://127.0.0.1:8084/dataset/parking-spot-occupancy",
        language=(LANG_ENG_IRI, LANG_SPA_IRI),
        license="CC_BY_4_0",
        publisher="Open Context Data",
        spatial=(COUNTRY_ESP_IRI,),
        temporal=Interval(start=T_CREATED, end=T_MODIFIED),
        theme=(THEME_TRAN_IRI, THEME_ENVI_IRI),
        has_version="1.0.0",
        version_notes="first public cut",
        data_provider=("Mobility Department",),
    )
    dist_json = DistributionEntity(
        id="urn:ngsi-ld:Distribution:parking-spot-occupancy:json",
        title="Parking JSON feed",
        description="Plain JSON entity snapshots.",
        access_url="https://data.example.org/parking.json",
        download_url="https://files.example.org/parking.json",
        format=DistributionFormat.JSON,
        media_type="application/json",
        date_created=T_DIST_CREATED,
        date_modified=T_DIST_MODIFIED,
        availability="http://publications.europa.eu/resource/authority/planned-availability/AVAILABLE",
        byte_size=2048,
        license="CC_BY_4_0",
        rights=ACCESS_PUBLIC_IRI,
    )
    dist_ld = DistributionEntity(
        id="urn:ngsi-ld:Distribution:parking-spot-occupancy:jsonld",
        title="Parking JSON-LD feed",
        description="JSON-LD entity snapshots with context.",
        access_url="https://data.example.org/parking.jsonld",
        download_url="https://files.example.org/parking.jsonld",
        format=DistributionFormat.JSON_LD,
        media_type="application/ld+json",
        date_created=T_DIST_CREATED,
        date_modified=T_DIST_MODIFIED,
    )
    org, org_issues = catalogue_to_organization(catalogue)
    res_json, res_json_issues = distribution_to_resource(dist_json)
    res_ld, res_ld_issues = distribution_to_resource(dist_ld)
    package, package_issues = dataset_to_package(dataset, org.id, (res_json, res_ld))
    graph = package_to_dcat(package, MAPPING_BASE)
    dnode = IRI(MAPPING_BASE + "/dataset/parking-spot-occupancy")
    return MappingCase(
        catalogue=catalogue,
        dataset=dataset,
        dist_json=dist_json,
        dist_ld=dist_ld,
        org=org,
        org_issues=tuple(org_issues),
        res_json=res_json,
        res_json_issues=tuple(res_json_issues),
        res_ld=res_ld,
        res_ld_issues=tuple(res_ld_issues),
        package=package,
        package_issues=tuple(package_issues),
        graph=graph,
        dnode=dnode,
        node_json=IRI(dnode.value + "/distribution/parking-json-feed"),
        node_ld=IRI(dnode.value + "/distribution/parking-json-ld-feed"),
    )


def _objects(case: MappingCase, subject: IRI, predicate: IRI) -> list:
    return sorted(case.graph.objects(subject, predicate), key=repr)


def _all_objects(case: MappingCase) -> set:
    return {obj for _, _, obj in case.graph}


def _issue_for(issues, field: str):
    found = [issue for issue in issues if issue.source_field == field]
    assert len(found) == 1, f"expected exactly one issue for {field!r}, got {found}"
    return found[0]


def _dt(value: datetime) -> Literal:
    return Literal(isoformat_utc(value), datatype=XSD_DATETIME)


# each row: (source field, pair builder).  The builder returns
# (actual, expected) tuples that the tests assert for equality.
PairBuilder = Callable[[MappingCase], list]

TABLE1: list[tuple[str, PairBuilder]] = [
    ("id", lambda c: [(c.org.id, c.catalogue.id)]),
    (
        "title",
        lambda c: [
            (c.org.title, "Open Context Catalogue"),
            (c.org.name, "open-context-catalogue"),
        ],
    ),
    ("description", lambda c: [(c.org.description, c.catalogue.description)]),
    ("homepage", lambda c: [(dict(c.org.extras), {"url": "https://example.org/opendata"})]),
    (
        "publisher",
        lambda c: [
            (_issue_for(c.org_issues, "publisher").severity.value, "warn"),
            ("Municipal IT Office" in dict(c.org.extras).values(), False),
        ],
    ),
    ("dataset", lambda c: [(c.org.packages, ("urn:ngsi-ld:Dataset:parking-spot-occupancy",))]),
]

TABLE2: list[tuple[str, PairBuilder]] = [
    (
        "id",
        lambda c: [
            (c.package.id, c.dataset.id),
            (IRI(c.dataset.id) in _all_objects(c), False),
            (Literal(c.dataset.id) in _all_objects(c), False),
        ],
    ),
    (
        "description",
        lambda c: [
            (c.package.notes, c.dataset.description),
            (_objects(c, c.dnode, dct("description")), [Literal(c.dataset.description)]),
        ],
    ),
    (
        "title",
        lambda c: [
            (c.package.title, "Parking spot occupancy"),
            (c.package.name, "parking-spot-occupancy"),
            (_objects(c, c.dnode, dct("title")), [Literal("Parking spot occupancy")]),
            (Literal("parking-spot-occupancy") in _all_objects(c), False),
        ],
    ),
    (
        "accessRights",
        lambda c: [
            (c.package.extras["access_rights"], ACCESS_PUBLIC_IRI),
            (_objects(c, c.dnode, dct("accessRights")), [IRI(ACCESS_PUBLIC_IRI)]),
        ],
    ),
    (
        "creator",
        lambda c: [
            (c.package.author, "Sensor Team, Data Office"),
            (dct("creator") in c.graph.predicates(), False),
        ],
    ),
    (
        "distribution",
        lambda c: [
            (c.package.resources, (c.res_json, c.res_ld)),
            (
                set(c.graph.objects(c.dnode, dcat("distribution"))),
                {c.node_json, c.node_ld},
            ),
        ],
    ),
    (
        "keyword",
        lambda c: [
            (c.package.tags, ("parking", "occupancy")),
            (
                set(c.graph.objects(c.dnode, dcat("keyword"))),
                {Literal("parking"), Literal("occupancy")},
            ),
        ],
    ),
    (
        "landingPage",
        lambda c: [
            (c.package.url, c.dataset.landing_page),
            (
                _objects(c, c.dnode, dcat("landingPage")),
                [IRI("http://127.0.0.1:8084/dataset/parking-spot-occupancy")],
            ),
        ],
    ),
    (
        "language",
        lambda c: [
            (
                json.loads(c.package.extras["language"]),
                [LANG_ENG_IRI, LANG_SPA_IRI],
            ),
            (
                set(c.graph.objects(c.dnode, dct("language"))),
                {IRI(LANG_ENG_IRI), IRI(LANG_SPA_IRI)},
            ),
        ],
    ),
    (
        "license",
        lambda c: [
            (c.package.license_id, "CC_BY_4_0"),
            (_objects(c, c.dnode, dct("license")), []),
        ],
    ),
    (
        "publisher",
        lambda c: [
            (c.package.owner_org, c.org.id),
            (_objects(c, c.dnode, dct("publisher")), [IRI(c.org.id)]),
        ],
    ),
    (
        "spatial",
        lambda c: [
            (c.package.extras["spatial"], COUNTRY_ESP_IRI),
            (_objects(c, c.dnode, dct("spatial")), [IRI(COUNTRY_ESP_IRI)]),
        ],
    ),
    (
        "temporal",
        lambda c: [
            (c.package.extras["temporal_start"], "2025-06-01T08:30:00+00:00"),
            (c.package.extras["temporal_end"], "2025-06-10T09:45:00+00:00"),
            (
                set(c.graph.objects(c.dnode, dct("temporal"))),
                {_dt(T_CREATED), _dt(T_MODIFIED)},
            ),
        ],
    ),
    (
        "theme",
        lambda c: [
            (json.loads(c.package.extras["theme"]), [THEME_TRAN_IRI, THEME_ENVI_IRI]),
            (
                set(c.graph.objects(c.dnode, dcat("theme"))),
                {IRI(THEME_TRAN_IRI), IRI(THEME_ENVI_IRI)},
            ),
        ],
    ),
    (
        "hasVersion",
        lambda c: [
            (c.package.extras["has_version"], "1.0.0"),
            (Literal("1.0.0") in _all_objects(c), False),
        ],
    ),
    (
        "versionNotes",
        lambda c: [
            (c.package.extras["version_notes"], "first public cut"),
            (_objects(c, c.dnode, owl("versionInfo")), [Literal("first public cut")]),
        ],
    ),
    (
        "dataProvider",
        lambda c: [
            (c.package.maintainer, "Mobility Department"),
            (_objects(c, c.dnode, dcat("contactPoint")), [Literal("Mobility Department")]),
        ],
    ),
    (
        "dateCreated",
        lambda c: [
            (c.package.metadata_created, "2025-06-01T08:30:00+00:00"),
            (c.package.extras["issued"], "2025-06-01T08:30:00+00:00"),
            (_objects(c, c.dnode, dct("issued")), [_dt(T_CREATED)]),
        ],
    ),
    (
        "dateModified",
        lambda c: [
            (c.package.metadata_modified, "2025-06-10T09:45:00+00:00"),
            (c.package.extras["modified"], "2025-06-10T09:45:00+00:00"),
            (_objects(c, c.dnode, dct("modified")), [_dt(T_MODIFIED)]),
        ],
    ),
]


def _licence_iri(token: str) -> IRI:
    return IRI(default_vocabularies().licences.resolve(token))


def _media_iri(value: str) -> IRI:
    return IRI(default_vocabularies().media_types.resolve(value))


def _file_type_iri(token: str) -> IRI:
    return IRI(default_vocabularies().file_types.resolve(token))


TABLE3: list[tuple[str, PairBuilder]] = [
    (
        "description",
        lambda c: [
            (c.res_json.description, c.dist_json.description),
            (c.res_ld.description, c.dist_ld.description),
            (
                _objects(c, c.node_json, dct("description")),
                [Literal("Plain JSON entity snapshots.")],
            ),
            (
                _objects(c, c.node_ld, dct("description")),
                [Literal("JSON-LD entity snapshots with context.")],
            ),
        ],
    ),
    (
        "title",
        lambda c: [
            (c.res_json.name, "Parking JSON feed"),
            (c.res_ld.name, "Parking JSON-LD feed"),
            (_objects(c, c.node_json, dct("title")), [Literal("Parking JSON feed")]),
            (_objects(c, c.node_ld, dct("title")), [Literal("Parking JSON-LD feed")]),
        ],
    ),
    (
        "accessUrl",
        lambda c: [
            (c.res_json.url, "https://data.example.org/parking.json"),
            (c.res_json.access_url, "https://data.example.org/parking.json"),
            (c.res_ld.url, "https://data.example.org/parking.jsonld"),
            (c.res_ld.access_url, "https://data.example.org/parking.jsonld"),
            (
                _objects(c, c.node_json, dcat("accessURL")),
                [IRI("https://data.example.org/parking.json")],
            ),
            (
                _objects(c, c.node_ld, dcat("accessURL")),
                [IRI("https://data.example.org/parking.jsonld")],
            ),
        ],
    ),
    (
        "availability",
        lambda c: [
            (_issue_for(c.res_json_issues, "availability").severity.value, "warn"),
            (_issue_for(c.res_ld_issues, "availability").severity.value, "skip"),
            (IRI(c.dist_json.availability) in _all_objects(c), False),
            (Literal(c.dist_json.availability) in _all_objects(c), False),
        ],
    ),
    (
        "byteSize",
        lambda c: [
            (c.res_json.size, 2048),
            (c.res_ld.size, None),
            (
                _objects(c, c.node_json, dcat("byteSize")),
                [Literal("2048", datatype=XSD_DECIMAL)],
            ),
            (_objects(c, c.node_ld, dcat("byteSize")), []),
        ],
    ),
    (
        "downloadURL",
        lambda c: [
            (c.res_json.download_url, "https://files.example.org/parking.json"),
            (c.res_ld.download_url, "https://files.example.org/parking.jsonld"),
            (
                _objects(c, c.node_json, dcat("downloadURL")),
                [IRI("https://files.example.org/parking.json")],
            ),
            (
                _objects(c, c.node_ld, dcat("downloadURL")),
                [IRI("https://files.example.org/parking.jsonld")],
            ),
        ],
    ),
    (
        "license",
        lambda c: [
            (c.res_json.license, "CC_BY_4_0"),
            (c.res_ld.license, None),
            (_objects(c, c.node_json, dct("license")), [_licence_iri("CC_BY_4_0")]),
            (_objects(c, c.node_ld, dct("license")), []),
        ],
    ),
    (
        "mediaType",
        lambda c: [
            (c.res_json.mimetype, "application/json"),
            (c.res_ld.mimetype, "application/ld+json"),
            (
                _objects(c, c.node_json, dcat("mediaType")),
                [_media_iri("application/json")],
            ),
            (
                _objects(c, c.node_ld, dcat("mediaType")),
                [_media_iri("application/ld+json")],
            ),
        ],
    ),
    (
        "rights",
        lambda c: [
            (c.res_json.rights, ACCESS_PUBLIC_IRI),
            (c.res_ld.rights, None),
            (_objects(c, c.node_json, dct("rights")), [IRI(ACCESS_PUBLIC_IRI)]),
            (_objects(c, c.node_ld, dct("rights")), []),
        ],
    ),
    (
        "dateCreated",
        lambda c: [
            (c.res_json.created, "2025-06-01T09:00:00+00:00"),
            (_objects(c, c.node_json, dct("issued")), [_dt(T_DIST_CREATED)]),
            (_objects(c, c.node_ld, dct("issued")), [_dt(T_DIST_CREATED)]),
        ],
    ),
    (
        "dateModified",
        lambda c: [
            (c.res_json.last_modified, "2025-06-12T16:20:00+00:00"),
            (_objects(c, c.node_json, dct("modified")), [_dt(T_DIST_MODIFIED)]),
            (_objects(c, c.node_ld, dct("modified")), [_dt(T_DIST_MODIFIED)]),
        ],
    ),
    (
        "format",
        lambda c: [
            (c.res_json.format, "JSON"),
            (c.res_ld.format, "JSON_LD"),
            (_objects(c, c.node_json, dct("format")), [_file_type_iri("JSON")]),
            (_objects(c, c.node_ld, dct("format")), [_file_type_iri("JSON_LD")]),
        ],
    ),
]

TABLE1_SOURCES = {"id", "title", "description", "homepage", "publisher", "dataset"}
TABLE2_SOURCES = {
    "id",
    "description",
    "title",
    "accessRights",
    "creator",
    "distribution",
    "keyword",
    "landingPage",
    "language",
    "license",
    "publisher",
    "spatial",
    "temporal",
    "theme",
    "hasVersion",
    "versionNotes",
    "dataProvider",
    "dateCreated",
    "dateModified",
}
TABLE3_SOURCES = {
    "description",
    "title",
    "accessUrl",
    "availability",
    "byteSize",
    "downloadURL",
    "license",
    "mediaType",
    "rights",
    "dateCreated",
    "dateModified",
    "format",
}


def run_mapping_rows(case: MappingCase) -> int:
    """Assert every row of all three tables; returns the number of rows."""
    count = 0
    for table in (TABLE1, TABLE2, TABLE3):
        for source, pairs in table:
            for actual, expected in pairs(case):
                assert actual == expected, f"row {source!r}: {actual!r} != {expected!r}"
            count += 1
    return count


def census(package: CatalogPackage) -> int:
    """Expected triple count: one per populated mapped field plus the type
    and link triples, counted straight off the catalog record."""

    def fan(raw: str) -> int:
        return len(json.loads(raw)) if raw.startswith("[") else 1

    extras = package.extras
    n = 3  # type, title, description
    n += 1  # publisher is mandatory
    for single in ("access_rights", "temporal_start", "temporal_end", "version_notes", "issued", "modified"):
        n += 1 if single in extras else 0
    for multi in ("language", "spatial", "theme"):
        n += fan(extras[multi]) if multi in extras else 0
    n += len(set(package.tags))
    n += 1 if package.url else 0
    n += 1 if package.maintainer else 0
    for resource in package.resources:
        n += 2  # link + type
        n += 6  # title, description, accessURL, downloadURL, issued, modified
        n += 1 if resource.size is not None else 0
        n += 1 if resource.license else 0
        n += 1 if resource.mimetype else 0
        n += 1 if resource.rights else 0
        n += 1 if resource.format else 0
    return n


# --- catalog seeding ------------------------------------------------------

def simple_package(index: int, owner: str = "urn:ngsi-ld:Catalogue:city") -> CatalogPackage:
    stamp = isoformat_utc(FROZEN_NOW + timedelta(minutes=index))
    return CatalogPackage(
        id=f"urn:ngsi-ld:Dataset:pkg-{index:04d}",
        name=f"pkg-{index:04d}",
        title=f"Feed {index}",
        notes=f"Synthetic record number {index}.",
        owner_org=owner,
        metadata_created=isoformat_utc(FROZEN_NOW),
        metadata_modified=stamp,
        extras={"issued": isoformat_utc(FROZEN_NOW), "modified": stamp},
    )


def seeded_store(count: int, clock=None) -> CatalogStore:
    store = CatalogStore(clock=clock or FakeClock())
    org = CatalogOrganization(
        id="urn:ngsi-ld:Catalogue:city",
        name="city-sensors",
        title="City Sensors",
        description="All municipal context feeds.",
    )
    store.organization_create(org)
    for index in range(count):
        store.package_upsert(simple_package(index))
    return store


# --- randomized packages for the round-trip checks ------------------------

_WORDS = [
    "sensor",
    "parking",
    "air",
    "noise",
    "traffic",
    "Santander",
    "café",
    "straße",
    "部屋",
    "Ωμέγα",
]
_DECORATIONS = ["", ' with "quotes"', " back\\slash", "\nsecond line", "\ttabbed", " <angle> & amp"]


def _text(rng: random.Random, decorate: bool = True) -> str:
    words = " ".join(rng.choice(_WORDS) for _ in range(rng.randint(1, 5)))
    return words + (rng.choice(_DECORATIONS) if decorate else "")


def _stamp(rng: random.Random) -> str:
    moment = datetime(
        2025, rng.randint(1, 12), rng.randint(1, 28), rng.randint(0, 23),
        rng.randint(0, 59), rng.randint(0, 59), tzinfo=timezone.utc,
    )
    return isoformat_utc(moment)


def _random_resource(rng: random.Random, index: int) -> CatalogResource:
    url = f"https://data.example.org/{index}/{rng.randint(0, 9999)}/file"
    return CatalogResource(
        id=f"urn:ngsi-ld:Distribution:r-{index}-{rng.randint(0, 99999)}",
        name=f"feed {index} {rng.choice(_WORDS)}",
        description=_text(rng),
        url=url,
        access_url=url,
        download_url=rng.choice([url, url + ".bin"]),
        created=_stamp(rng),
        last_modified=_stamp(rng),
        size=rng.choice([None, rng.randint(0, 10**9)]),
        mimetype=rng.choice([None, "application/json", "text/csv"]),
        format=rng.choice([None, "JSON", "CSV", "bespoke format"]),
        license=rng.choice([None, "CC_BY_4_0", "custom terms"]),
        rights=rng.choice([None, ACCESS_PUBLIC_IRI, "internal use only"]),
    )


def random_package(rng: random.Random, index: int) -> CatalogPackage:
    extras: dict[str, str] = {}
    if rng.random() < 0.8:
        extras["access_rights"] = rng.choice([ACCESS_PUBLIC_IRI, "restricted by contract"])
    if rng.random() < 0.7:
        languages = rng.sample([LANG_ENG_IRI, LANG_SPA_IRI], rng.randint(1, 2))
        extras["language"] = languages[0] if len(languages) == 1 else json.dumps(languages)
    if rng.random() < 0.6:
        extras["spatial"] = COUNTRY_ESP_IRI
    if rng.random() < 0.7:
        themes = rng.sample([THEME_TRAN_IRI, THEME_ENVI_IRI], rng.randint(1, 2))
        extras["theme"] = themes[0] if len(themes) == 1 else json.dumps(themes)
    if rng.random() < 0.6:
        extras["temporal_start"] = _stamp(rng)
        if rng.random() < 0.5:
            extras["temporal_end"] = _stamp(rng)
    if rng.random() < 0.5:
        extras["version_notes"] = _text(rng)
    if rng.random() < 0.9:
        extras["issued"] = _stamp(rng)
        extras["modified"] = _stamp(rng)
    tags = tuple(dict.fromkeys(rng.choice(_WORDS) for _ in range(rng.randint(0, 4))))
    resources = tuple(_random_resource(rng, i) for i in range(rng.randint(0, 3)))
    return CatalogPackage(
        id=f"urn:ngsi-ld:Dataset:rand-{index:03d}",
        name=f"rand-{index:03d}",
        title=_text(rng),
        notes=_text(rng),
        owner_org=rng.choice(["urn:ngsi-ld:Catalogue:city", "City of Example"]),
        metadata_created=_stamp(rng),
        metadata_modified=_stamp(rng),
        author=rng.choice([None, _text(rng, decorate=False)]),
        license_id=rng.choice([None, "CC_BY_4_0"]),
        maintainer=rng.choice([None, _text(rng, decorate=False)]),
        url=rng.choice([None, f"https://portal.example.org/dataset/rand-{index:03d}"]),
        tags=tags,
        resources=resources,
        extras=extras,
    )
