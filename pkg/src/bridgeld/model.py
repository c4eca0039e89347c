"""Shared domain types, identifier schemes and validation for the connector suite."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Mapping, Optional, Sequence

from dateutil.relativedelta import relativedelta

ENTITY_TYPE_PATTERN = re.compile(
    r"^https://smartdatamodels\.org/dataModel\.(?P<subject>[^/]+)/(?P<type>[^/]+)$"
)

URN_PATTERN = re.compile(r"^urn:[A-Za-z0-9][A-Za-z0-9-]{0,31}:\S+$")

SLUG_MAX_LENGTH = 100


class SlugifyError(ValueError):
    """Raised when a title contains nothing usable for a slug."""


def slugify(title: str) -> str:
    """Turn a free-text title into a lowercase [a-z0-9-_] slug.

    Runs of any other characters collapse into a single "-"; the result is
    trimmed of leading/trailing "-" and truncated to 100 characters.
    """
    lowered = title.lower()
    collapsed = re.sub(r"[^a-z0-9_-]+", "-", lowered)
    trimmed = collapsed.strip("-")
    truncated = trimmed[:SLUG_MAX_LENGTH].rstrip("-")
    if not truncated:
        raise SlugifyError(f"title {title!r} yields an empty slug")
    return truncated


def is_urn(value: str) -> bool:
    return bool(URN_PATTERN.match(value))


def is_absolute_uri(value: str) -> bool:
    return bool(re.match(r"^[A-Za-z][A-Za-z0-9+.-]*:\S+$", value))


def is_http_url(value: str) -> bool:
    return bool(re.match(r"^https?://[^\s/]+", value))


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


def isoformat_utc(dt: datetime) -> str:
    """UTC ISO-8601 with seconds precision, the wire form used everywhere."""
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc).isoformat(timespec="seconds")


def parse_datetime(text: str) -> datetime:
    dt = datetime.fromisoformat(text.replace("Z", "+00:00"))
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt


class AccessRights(Enum):
    PUBLIC = "Public"
    RESTRICTED = "Restricted"
    PRIVATE = "Private"

    @classmethod
    def from_label(cls, label: str) -> "AccessRights":
        # "Publich" appears in the wild as a misspelling of Public
        if label == "Publich":
            return cls.PUBLIC
        for member in cls:
            if member.value == label:
                return member
        raise ValueError(f"unknown access rights value {label!r}")


class Language(Enum):
    ENGLISH = "English"
    SPANISH = "Spanish"
    GERMAN = "German"
    FRENCH = "French"

    @classmethod
    def from_label(cls, label: str) -> "Language":
        for member in cls:
            if member.value == label:
                return member
        raise ValueError(f"unknown language value {label!r}")


class DistributionFormat(Enum):
    JSON = "JSON"
    JSON_LD = "JSON_LD"

    @property
    def media_type(self) -> str:
        return "application/json" if self is DistributionFormat.JSON else "application/ld+json"

    @property
    def url_extension(self) -> str:
        return "json" if self is DistributionFormat.JSON else "jsonld"


class TemporalUnit(Enum):
    YEAR = "year"
    MONTHS = "months"
    WEEKS = "weeks"
    DAYS = "days"
    HOURS = "hours"


@dataclass(frozen=True)
class TemporalWindow:
    """A look-back window expressed in exactly one time unit."""

    unit: TemporalUnit
    value: int

    def __post_init__(self) -> None:
        if self.value <= 0:
            raise ValueError("temporal window value must be positive")

    def cutoff(self, now: datetime) -> datetime:
        """Start of the closed interval [now - window, now]."""
        if self.unit is TemporalUnit.YEAR:
            return now - relativedelta(years=self.value)
        if self.unit is TemporalUnit.MONTHS:
            return now - relativedelta(months=self.value)
        if self.unit is TemporalUnit.WEEKS:
            return now - relativedelta(weeks=self.value)
        if self.unit is TemporalUnit.DAYS:
            return now - relativedelta(days=self.value)
        return now - relativedelta(hours=self.value)


@dataclass(frozen=True)
class Violation:
    """One failed validation rule, named by field and rule."""

    field: str
    rule: str
    message: str


@dataclass(frozen=True)
class DescriptionRequest:
    """The human-authored dataset description captured by the entry form."""

    entity_type: str
    description: str
    creators: tuple[str, ...] = ()
    providers: tuple[str, ...] = ()
    themes: tuple[str, ...] = ()
    access_rights: AccessRights = AccessRights.PUBLIC
    language: Language = Language.ENGLISH
    locations: tuple[str, ...] = ()
    keywords: tuple[str, ...] = ()

    @property
    def subject(self) -> str:
        match = ENTITY_TYPE_PATTERN.match(self.entity_type)
        if not match:
            raise ValueError(f"entity type {self.entity_type!r} is not a data-model URI")
        return match.group("subject")

    @property
    def type_name(self) -> str:
        match = ENTITY_TYPE_PATTERN.match(self.entity_type)
        if not match:
            raise ValueError(f"entity type {self.entity_type!r} is not a data-model URI")
        return match.group("type")

    @property
    def title(self) -> str:
        """Dataset display title derived from the data-model URI, e.g. Parking:ParkingSpot."""
        return f"{self.subject}:{self.type_name}"

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "DescriptionRequest":
        def as_tuple(key: str) -> tuple[str, ...]:
            value = doc.get(key) or []
            if isinstance(value, str):
                value = [part.strip() for part in value.split(",") if part.strip()]
            return tuple(str(item) for item in value)

        return cls(
            entity_type=str(doc.get("entityType", "")),
            description=str(doc.get("description", "")),
            creators=as_tuple("creators"),
            providers=as_tuple("providers"),
            themes=as_tuple("themes"),
            access_rights=AccessRights.from_label(str(doc.get("accessRights", "Public"))),
            language=Language.from_label(str(doc.get("language", "English"))),
            locations=as_tuple("locations"),
            keywords=as_tuple("keywords"),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "entityType": self.entity_type,
            "description": self.description,
            "creators": list(self.creators),
            "providers": list(self.providers),
            "themes": list(self.themes),
            "accessRights": self.access_rights.value,
            "language": self.language.value,
            "locations": list(self.locations),
            "keywords": list(self.keywords),
        }


def validate_description(req: DescriptionRequest, vocabularies=None) -> list[Violation]:
    """Check every DescriptionRequest invariant; violations are data, not errors."""
    from . import vocab

    if vocabularies is None:
        vocabularies = vocab.default_vocabularies()
    violations: list[Violation] = []
    if not ENTITY_TYPE_PATTERN.match(req.entity_type):
        violations.append(
            Violation(
                "entityType",
                "pattern",
                "entityType must match https://smartdatamodels.org/dataModel.<subject>/<type>",
            )
        )
    if not req.description.strip():
        violations.append(Violation("description", "non-empty", "description is required"))
    for token in req.themes:
        if token not in vocabularies.themes:
            violations.append(
                Violation("themes", "vocabulary", f"unknown theme token {token!r}")
            )
    for token in req.locations:
        if token not in vocabularies.countries:
            violations.append(
                Violation("locations", "vocabulary", f"unknown location token {token!r}")
            )
    for keyword in req.keywords:
        if not keyword.strip():
            violations.append(
                Violation("keywords", "non-empty", "keywords must not contain empty entries")
            )
    return violations


@dataclass(frozen=True)
class PropertyValue:
    """An NGSI-LD Property value, optionally stamped with an observation time."""

    value: Any
    observed_at: Optional[datetime] = None


@dataclass(frozen=True)
class NgsiEntity:
    """A generic NGSI-LD entity: identity, Properties and Relationships."""

    id: str
    type: str
    properties: Mapping[str, PropertyValue] = field(default_factory=dict)
    relationships: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    modified_at: Optional[datetime] = None

    def validation_errors(self) -> list[str]:
        errors = []
        if not is_urn(self.id):
            errors.append(f"id {self.id!r} is not a valid URN")
        if not self.type:
            errors.append("type must be non-empty")
        for name, targets in self.relationships.items():
            for target in targets:
                if not is_urn(target):
                    errors.append(f"relationship {name!r} target {target!r} is not a valid URN")
        return errors


NGSI_CORE_CONTEXT = "https://uri.etsi.org/ngsi-ld/v1/ngsi-ld-core-context.jsonld"

_RESERVED_ENTITY_KEYS = {"id", "type", "modifiedAt", "createdAt", "@context"}


def entity_to_json(entity: NgsiEntity, with_context: bool = False) -> dict[str, Any]:
    """Serialize to the normalized NGSI-LD JSON representation."""
    doc: dict[str, Any] = {"id": entity.id, "type": entity.type}
    for name, prop in entity.properties.items():
        attr: dict[str, Any] = {"type": "Property", "value": prop.value}
        if prop.observed_at is not None:
            attr["observedAt"] = isoformat_utc(prop.observed_at)
        doc[name] = attr
    for name, targets in entity.relationships.items():
        obj: Any = targets[0] if len(targets) == 1 else list(targets)
        doc[name] = {"type": "Relationship", "object": obj}
    if entity.modified_at is not None:
        doc["modifiedAt"] = isoformat_utc(entity.modified_at)
    if with_context:
        doc["@context"] = [NGSI_CORE_CONTEXT]
    return doc


def entity_from_json(doc: Mapping[str, Any]) -> NgsiEntity:
    properties: dict[str, PropertyValue] = {}
    relationships: dict[str, tuple[str, ...]] = {}
    for name, raw in doc.items():
        if name in _RESERVED_ENTITY_KEYS:
            continue
        if not isinstance(raw, Mapping):
            properties[name] = PropertyValue(raw)
            continue
        kind = raw.get("type")
        if kind == "Relationship":
            obj = raw.get("object")
            targets = tuple(obj) if isinstance(obj, (list, tuple)) else (str(obj),)
            relationships[name] = targets
        else:
            observed = raw.get("observedAt")
            properties[name] = PropertyValue(
                raw.get("value"),
                parse_datetime(observed) if observed else None,
            )
    modified = doc.get("modifiedAt")
    return NgsiEntity(
        id=str(doc.get("id", "")),
        type=str(doc.get("type", "")),
        properties=properties,
        relationships=relationships,
        modified_at=parse_datetime(modified) if modified else None,
    )


def catalogue_urn(title: str) -> str:
    return f"urn:ngsi-ld:Catalogue:{slugify(title)}"


def dataset_urn(title: str) -> str:
    return f"urn:ngsi-ld:Dataset:{slugify(title)}"


def distribution_urn(dataset_title: str, fmt: DistributionFormat) -> str:
    return f"urn:ngsi-ld:Distribution:{slugify(dataset_title)}:{fmt.url_extension}"


@dataclass(frozen=True)
class Interval:
    """A temporal coverage interval with an optional open end."""

    start: datetime
    end: Optional[datetime] = None


@dataclass(frozen=True)
class CatalogueEntity:
    """View over an NGSI-LD entity of type Catalogue."""

    id: str
    title: str
    description: str
    homepage: Optional[str] = None
    publisher: Optional[str] = None
    dataset: tuple[str, ...] = ()

    TYPE = "Catalogue"

    def to_entity(self, modified_at: Optional[datetime] = None) -> NgsiEntity:
        properties = {"title": PropertyValue(self.title), "description": PropertyValue(self.description)}
        if self.homepage:
            properties["homepage"] = PropertyValue(self.homepage)
        if self.publisher:
            properties["publisher"] = PropertyValue(self.publisher)
        relationships = {"dataset": self.dataset} if self.dataset else {}
        return NgsiEntity(self.id, self.TYPE, properties, relationships, modified_at)

    @classmethod
    def from_entity(cls, entity: NgsiEntity) -> "CatalogueEntity":
        require_entity_type(entity, cls.TYPE)
        props = entity.properties
        return cls(
            id=entity.id,
            title=_text(props, "title"),
            description=_text(props, "description"),
            homepage=_opt_text(props, "homepage"),
            publisher=_opt_text(props, "publisher"),
            dataset=entity.relationships.get("dataset", ()),
        )


@dataclass(frozen=True)
class DatasetEntity:
    """View over an NGSI-LD entity of type Dataset (DCAT-AP subject data model)."""

    id: str
    title: str
    description: str
    distribution: tuple[str, str]
    date_created: datetime
    date_modified: datetime
    access_rights: Optional[str] = None
    creator: tuple[str, ...] = ()
    keyword: tuple[str, ...] = ()
    landing_page: Optional[str] = None
    language: tuple[str, ...] = ()
    license: Optional[str] = None
    publisher: Optional[str] = None
    spatial: tuple[str, ...] = ()
    temporal: Optional[Interval] = None
    theme: tuple[str, ...] = ()
    has_version: Optional[str] = None
    version_notes: Optional[str] = None
    data_provider: tuple[str, ...] = ()

    TYPE = "Dataset"

    def __post_init__(self) -> None:
        if len(self.distribution) != 2:
            raise ValueError("a Dataset carries exactly two Distribution targets")
        if self.date_modified < self.date_created:
            raise ValueError("dateModified must not precede dateCreated")

    def to_entity(self) -> NgsiEntity:
        properties: dict[str, PropertyValue] = {
            "title": PropertyValue(self.title),
            "description": PropertyValue(self.description),
            "dateCreated": PropertyValue(isoformat_utc(self.date_created)),
            "dateModified": PropertyValue(isoformat_utc(self.date_modified)),
        }
        if self.access_rights:
            properties["accessRights"] = PropertyValue(self.access_rights)
        if self.creator:
            properties["creator"] = PropertyValue(list(self.creator))
        if self.keyword:
            properties["keyword"] = PropertyValue(list(self.keyword))
        if self.landing_page:
            properties["landingPage"] = PropertyValue(self.landing_page)
        if self.language:
            properties["language"] = PropertyValue(list(self.language))
        if self.license:
            properties["license"] = PropertyValue(self.license)
        if self.publisher:
            properties["publisher"] = PropertyValue(self.publisher)
        if self.spatial:
            properties["spatial"] = PropertyValue(list(self.spatial))
        if self.temporal is not None:
            value = {"start": isoformat_utc(self.temporal.start)}
            if self.temporal.end is not None:
                value["end"] = isoformat_utc(self.temporal.end)
            properties["temporal"] = PropertyValue(value)
        if self.theme:
            properties["theme"] = PropertyValue(list(self.theme))
        if self.has_version:
            properties["hasVersion"] = PropertyValue(self.has_version)
        if self.version_notes:
            properties["versionNotes"] = PropertyValue(self.version_notes)
        if self.data_provider:
            properties["dataProvider"] = PropertyValue(list(self.data_provider))
        return NgsiEntity(
            self.id,
            self.TYPE,
            properties,
            {"distribution": self.distribution},
            self.date_modified,
        )

    @classmethod
    def from_entity(cls, entity: NgsiEntity) -> "DatasetEntity":
        require_entity_type(entity, cls.TYPE)
        props = entity.properties
        distribution = entity.relationships.get("distribution", ())
        temporal = None
        if "temporal" in props and isinstance(props["temporal"].value, Mapping):
            raw = props["temporal"].value
            temporal = Interval(
                start=parse_datetime(raw["start"]),
                end=parse_datetime(raw["end"]) if raw.get("end") else None,
            )
        return cls(
            id=entity.id,
            title=_text(props, "title"),
            description=_text(props, "description"),
            distribution=tuple(distribution),  # type: ignore[arg-type]
            date_created=parse_datetime(_text(props, "dateCreated")),
            date_modified=parse_datetime(_text(props, "dateModified")),
            access_rights=_opt_text(props, "accessRights"),
            creator=_text_list(props, "creator"),
            keyword=_text_list(props, "keyword"),
            landing_page=_opt_text(props, "landingPage"),
            language=_text_list(props, "language"),
            license=_opt_text(props, "license"),
            publisher=_opt_text(props, "publisher"),
            spatial=_text_list(props, "spatial"),
            temporal=temporal,
            theme=_text_list(props, "theme"),
            has_version=_opt_text(props, "hasVersion"),
            version_notes=_opt_text(props, "versionNotes"),
            data_provider=_text_list(props, "dataProvider"),
        )


@dataclass(frozen=True)
class DistributionEntity:
    """View over an NGSI-LD entity of type Distribution."""

    id: str
    title: str
    description: str
    access_url: str
    download_url: str
    format: DistributionFormat
    media_type: str
    date_created: datetime
    date_modified: datetime
    availability: Optional[str] = None
    byte_size: Optional[int] = None
    license: Optional[str] = None
    rights: Optional[str] = None

    TYPE = "Distribution"

    def __post_init__(self) -> None:
        if self.media_type != self.format.media_type:
            raise ValueError(
                f"media type {self.media_type!r} does not match format {self.format.value}"
            )
        if self.byte_size is not None and self.byte_size < 0:
            raise ValueError("byteSize must be non-negative")

    def to_entity(self) -> NgsiEntity:
        properties: dict[str, PropertyValue] = {
            "title": PropertyValue(self.title),
            "description": PropertyValue(self.description),
            "accessUrl": PropertyValue(self.access_url),
            "downloadURL": PropertyValue(self.download_url),
            "format": PropertyValue(self.format.value),
            "mediaType": PropertyValue(self.media_type),
            "dateCreated": PropertyValue(isoformat_utc(self.date_created)),
            "dateModified": PropertyValue(isoformat_utc(self.date_modified)),
        }
        if self.availability:
            properties["availability"] = PropertyValue(self.availability)
        if self.byte_size is not None:
            properties["byteSize"] = PropertyValue(self.byte_size)
        if self.license:
            properties["license"] = PropertyValue(self.license)
        if self.rights:
            properties["rights"] = PropertyValue(self.rights)
        return NgsiEntity(self.id, self.TYPE, properties, {}, self.date_modified)

    @classmethod
    def from_entity(cls, entity: NgsiEntity) -> "DistributionEntity":
        require_entity_type(entity, cls.TYPE)
        props = entity.properties
        byte_size = props["byteSize"].value if "byteSize" in props else None
        return cls(
            id=entity.id,
            title=_text(props, "title"),
            description=_text(props, "description"),
            access_url=_text(props, "accessUrl"),
            download_url=_text(props, "downloadURL"),
            format=DistributionFormat(_text(props, "format")),
            media_type=_text(props, "mediaType"),
            date_created=parse_datetime(_text(props, "dateCreated")),
            date_modified=parse_datetime(_text(props, "dateModified")),
            availability=_opt_text(props, "availability"),
            byte_size=int(byte_size) if byte_size is not None else None,
            license=_opt_text(props, "license"),
            rights=_opt_text(props, "rights"),
        )


class EntityViewError(ValueError):
    """An NGSI-LD entity does not fit the requested typed view."""


def require_entity_type(entity: NgsiEntity, expected: str) -> None:
    if entity.type != expected:
        raise EntityViewError(f"entity {entity.id} has type {entity.type!r}, expected {expected!r}")


def _text(props: Mapping[str, PropertyValue], name: str) -> str:
    if name not in props:
        raise EntityViewError(f"missing required property {name!r}")
    return str(props[name].value)


def _opt_text(props: Mapping[str, PropertyValue], name: str) -> Optional[str]:
    if name not in props or props[name].value is None:
        return None
    return str(props[name].value)


def _text_list(props: Mapping[str, PropertyValue], name: str) -> tuple[str, ...]:
    if name not in props:
        return ()
    value = props[name].value
    if isinstance(value, (list, tuple)):
        return tuple(str(item) for item in value)
    return (str(value),)


@dataclass(frozen=True)
class CatalogOrganization:
    """CKAN-side organization record (the Catalogue's counterpart)."""

    id: str
    name: str
    title: str
    description: str
    extras: Mapping[str, str] = field(default_factory=dict)
    packages: tuple[str, ...] = ()


@dataclass(frozen=True)
class CatalogResource:
    """CKAN-side resource record (the Distribution's counterpart)."""

    id: str
    name: str
    description: str
    url: str
    access_url: str
    download_url: str
    created: str
    last_modified: str
    size: Optional[int] = None
    mimetype: Optional[str] = None
    format: Optional[str] = None
    license: Optional[str] = None
    rights: Optional[str] = None

    def __post_init__(self) -> None:
        if self.url != self.access_url:
            raise ValueError("resource url and access_url must be identical")


@dataclass(frozen=True)
class CatalogPackage:
    """CKAN-side package record (the Dataset's counterpart)."""

    id: str
    name: str
    title: str
    notes: str
    owner_org: str
    metadata_created: str
    metadata_modified: str
    author: Optional[str] = None
    license_id: Optional[str] = None
    maintainer: Optional[str] = None
    url: Optional[str] = None
    tags: tuple[str, ...] = ()
    resources: tuple[CatalogResource, ...] = ()
    extras: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class QualityMetricResult:
    name: str
    dimension: str
    points: int
    max_points: int
    passed: bool


class QualityRating(Enum):
    EXCELLENT = "Excellent"
    GOOD = "Good"
    SUFFICIENT = "Sufficient"
    BAD = "Bad"


@dataclass(frozen=True)
class QualityReport:
    """Per-dimension metadata quality scores, capped at the 405-point ceiling."""

    findability: int
    accessibility: int
    interoperability: int
    reusability: int
    contextuality: int
    total: int
    rating: QualityRating
    per_metric: tuple[QualityMetricResult, ...]
    max_total: int = 405

    def __post_init__(self) -> None:
        dimensions = (
            self.findability
            + self.accessibility
            + self.interoperability
            + self.reusability
            + self.contextuality
        )
        if dimensions != self.total:
            raise ValueError("total must equal the sum of the five dimensions")
        if self.total > self.max_total:
            raise ValueError("total exceeds the maximum")

    def to_dict(self) -> dict[str, Any]:
        return {
            "findability": self.findability,
            "accessibility": self.accessibility,
            "interoperability": self.interoperability,
            "reusability": self.reusability,
            "contextuality": self.contextuality,
            "total": self.total,
            "maxTotal": self.max_total,
            "rating": self.rating.value,
            "perMetric": [
                {
                    "name": metric.name,
                    "dimension": metric.dimension,
                    "points": metric.points,
                    "maxPoints": metric.max_points,
                    "passed": metric.passed,
                }
                for metric in self.per_metric
            ],
        }
