"""Dataset registry: turns one description request into four linked entities.

A deployment owns a single Catalogue; each registered data type yields one
Dataset plus its JSON and JSON-LD Distributions, published to the broker with
the Dataset last so no notification ever references missing entities.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from datetime import datetime
from typing import Callable, Optional, Protocol, Sequence

from .model import (
    CatalogueEntity,
    DatasetEntity,
    DescriptionRequest,
    DistributionEntity,
    DistributionFormat,
    Interval,
    NgsiEntity,
    Violation,
    catalogue_urn,
    dataset_urn,
    distribution_urn,
    slugify,
    utcnow,
    validate_description,
)
from .vocab import ACCESS_RIGHTS_TOKENS, LANGUAGE_TOKENS, Vocabularies, default_vocabularies


@dataclass(frozen=True)
class RegistryConfig:
    owner_title: str
    owner_description: str
    owner_homepage: str
    retriever_base: str
    catalog_base: str
    owner_publisher: str = ""
    default_license: str = "CC_BY_4_0"


class ValidationFailed(ValueError):
    def __init__(self, violations: Sequence[Violation]):
        super().__init__("; ".join(f"{v.field}: {v.message}" for v in violations))
        self.violations = list(violations)


class PublishError(RuntimeError):
    def __init__(self, failed_entity: str, cause: str, receipt: Sequence[tuple[str, str]]):
        super().__init__(f"publish failed at {failed_entity}: {cause}")
        self.failed_entity = failed_entity
        self.cause = cause
        self.receipt = list(receipt)


class BrokerHandle(Protocol):
    def upsert_entity(self, entity: NgsiEntity) -> str: ...


def build_access_urls(
    entity_type: str,
    fmt: DistributionFormat,
    retriever_base: str,
) -> tuple[str, str]:
    base = retriever_base.rstrip("/")
    url = f"{base}/retriever/realtime/__{entity_type}__.{fmt.url_extension}"
    # both URLs resolve through the proxy, so access and download coincide
    return url, url


@dataclass(frozen=True)
class EntityBundle:
    catalogue: CatalogueEntity
    dataset: DatasetEntity
    distributions: tuple[DistributionEntity, DistributionEntity]

    def in_publish_order(self) -> tuple[NgsiEntity, ...]:
        return (
            self.catalogue.to_entity(),
            self.distributions[0].to_entity(),
            self.distributions[1].to_entity(),
            self.dataset.to_entity(),
        )

    def ids(self) -> dict[str, object]:
        return {
            "catalogueId": self.catalogue.id,
            "datasetId": self.dataset.id,
            "distributionIds": [d.id for d in self.distributions],
        }


def build_entities(
    req: DescriptionRequest,
    cfg: RegistryConfig,
    now: datetime,
    date_created: Optional[datetime] = None,
    catalogue_datasets: Sequence[str] = (),
    vocabularies: Optional[Vocabularies] = None,
) -> EntityBundle:
    violations = validate_description(req, vocabularies)
    if violations:
        raise ValidationFailed(violations)
    if vocabularies is None:
        vocabularies = default_vocabularies()
    created = date_created or now
    title = req.title
    dataset_id = dataset_urn(title)
    access_rights_iri = vocabularies.access_rights.resolve(
        ACCESS_RIGHTS_TOKENS[req.access_rights]
    )
    language_iri = vocabularies.languages.resolve(LANGUAGE_TOKENS[req.language])
    distributions = []
    for fmt in (DistributionFormat.JSON, DistributionFormat.JSON_LD):
        access_url, download_url = build_access_urls(req.entity_type, fmt, cfg.retriever_base)
        label = "JSON" if fmt is DistributionFormat.JSON else "JSON-LD"
        distributions.append(
            DistributionEntity(
                id=distribution_urn(title, fmt),
                title=f"{title} {label}",
                description=f"{label} representation of {title} context data",
                access_url=access_url,
                download_url=download_url,
                format=fmt,
                media_type=fmt.media_type,
                date_created=created,
                date_modified=now,
                byte_size=None,
                license=cfg.default_license,
                rights=access_rights_iri,
            )
        )
    dataset = DatasetEntity(
        id=dataset_id,
        title=title,
        description=req.description,
        distribution=(distributions[0].id, distributions[1].id),
        date_created=created,
        date_modified=now,
        access_rights=access_rights_iri,
        creator=req.creators,
        keyword=tuple(k.strip() for k in req.keywords if k.strip()),
        landing_page=f"{cfg.catalog_base.rstrip('/')}/dataset/{slugify(title)}",
        language=(language_iri,),
        license=cfg.default_license,
        publisher=cfg.owner_publisher or cfg.owner_title,
        spatial=tuple(vocabularies.countries.resolve(c) for c in req.locations),
        temporal=Interval(start=created),
        theme=tuple(vocabularies.themes.resolve(t) for t in req.themes),
        data_provider=req.providers,
    )
    dataset_ids = list(catalogue_datasets)
    if dataset_id not in dataset_ids:
        dataset_ids.append(dataset_id)
    catalogue = CatalogueEntity(
        id=catalogue_urn(cfg.owner_title),
        title=cfg.owner_title,
        description=cfg.owner_description,
        homepage=cfg.owner_homepage,
        publisher=cfg.owner_publisher or cfg.owner_title,
        dataset=tuple(dataset_ids),
    )
    return EntityBundle(catalogue, dataset, (distributions[0], distributions[1]))


def publish(entities: EntityBundle, broker: BrokerHandle) -> list[tuple[str, str]]:
    receipt: list[tuple[str, str]] = []
    for entity in entities.in_publish_order():
        try:
            action = broker.upsert_entity(entity)
        except Exception as exc:
            raise PublishError(entity.id, str(exc), receipt) from exc
        receipt.append((entity.id, action))
    return receipt


class Registry:
    """Stateful front end: remembers creation dates and the Catalogue roster."""

    def __init__(
        self,
        cfg: RegistryConfig,
        broker: BrokerHandle,
        clock: Callable[[], datetime] = utcnow,
        vocabularies: Optional[Vocabularies] = None,
    ):
        self.cfg = cfg
        self._broker = broker
        self._clock = clock
        self._vocabularies = vocabularies or default_vocabularies()
        self._created: dict[str, datetime] = {}
        self._datasets: list[str] = []
        self._lock = threading.Lock()

    def build(self, req: DescriptionRequest) -> EntityBundle:
        violations = validate_description(req, self._vocabularies)
        if violations:
            raise ValidationFailed(violations)
        now = self._clock()
        with self._lock:
            dataset_id = dataset_urn(req.title)
            return build_entities(
                req,
                self.cfg,
                now,
                date_created=self._created.get(dataset_id),
                catalogue_datasets=tuple(self._datasets),
                vocabularies=self._vocabularies,
            )

    def register(self, req: DescriptionRequest) -> tuple[EntityBundle, list[tuple[str, str]]]:
        bundle = self.build(req)
        receipt = publish(bundle, self._broker)
        with self._lock:
            self._created.setdefault(bundle.dataset.id, bundle.dataset.date_created)
            if bundle.dataset.id not in self._datasets:
                self._datasets.append(bundle.dataset.id)
        return bundle, receipt

    def vocabulary_payload(self) -> dict[str, list[dict[str, str]]]:
        """Token/label/IRI lists for the entry form's choice widgets."""

        def listing(vocabulary) -> list[dict[str, str]]:
            return [
                {"token": e.token, "iri": e.iri, "label": e.label} for e in vocabulary
            ]

        return {
            "themes": listing(self._vocabularies.themes),
            "languages": listing(self._vocabularies.languages),
            "countries": listing(self._vocabularies.countries),
            "accessRights": listing(self._vocabularies.access_rights),
            "licences": listing(self._vocabularies.licences),
        }
