"""Connector between broker notifications and the catalog.

Subscribes to Dataset entities, and on each notification pulls the Dataset's
Catalogue and Distributions back out of the broker, maps everything to catalog
records and upserts them. Credentials are checked against the catalog's token
store at subscribe time and held in memory for notification-time writes.
"""

from __future__ import annotations

import logging
import threading
import time
from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Optional, Protocol, Sequence

from .catalog import AuthorizationError, CatalogStore, NotFoundError
from .mapping import catalogue_to_organization, dataset_to_package, distribution_to_resource
from .model import (
    CatalogueEntity,
    DatasetEntity,
    DistributionEntity,
    NgsiEntity,
    entity_from_json,
)
from .ngsi_broker import Subscription

log = logging.getLogger(__name__)

DATASET_TYPE = "Dataset"
CATALOGUE_TYPE = "Catalogue"


class BadNotification(ValueError):
    pass


@dataclass(frozen=True)
class AdminCredentials:
    user_name: str
    api_token: str

    def __post_init__(self) -> None:
        if not self.user_name or not self.api_token:
            raise ValueError("both user name and API token are required")


class BrokerPort(Protocol):
    def create_subscription(self, entity_type: str, callback_url: str) -> Subscription: ...

    def delete_subscription(self, subscription_id: str) -> None: ...

    def current_entities(self, entity_type: str) -> Sequence[NgsiEntity]: ...

    def get_entity(self, entity_id: str) -> Optional[NgsiEntity]: ...


class Harvester:
    def __init__(
        self,
        broker: BrokerPort,
        catalog: CatalogStore,
        self_base: str,
        retries: int = 2,
        retry_delay: float = 2.0,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self._broker = broker
        self._catalog = catalog
        self._callback = f"{self_base.rstrip('/')}/ngsi-ld/notifications"
        self._retries = retries
        self._retry_delay = retry_delay
        self._sleep = sleep
        self._creds: Optional[AdminCredentials] = None
        self._subscription_id: Optional[str] = None
        self._lock = threading.Lock()
        self._dataset_locks: dict[str, threading.Lock] = {}
        self._summaries: deque[dict[str, Any]] = deque(maxlen=1000)
        self._seen_notifications: deque[str] = deque(maxlen=10_000)
        self._seen_set: set[str] = set()

    def _check_creds(self, creds: AdminCredentials) -> None:
        tokens = self._catalog.tokens
        if tokens is None or not tokens.valid(creds.user_name, creds.api_token):
            raise AuthorizationError(f"unknown user or token for {creds.user_name!r}")

    # --- subscription lifecycle -------------------------------------------

    def handle_subscribe(self, creds: AdminCredentials) -> str:
        self._check_creds(creds)
        subscription = self._broker.create_subscription(DATASET_TYPE, self._callback)
        with self._lock:
            self._creds = creds
            self._subscription_id = subscription.id
        return subscription.id

    def handle_unsubscribe(self, creds: AdminCredentials) -> None:
        self._check_creds(creds)
        with self._lock:
            subscription_id = self._subscription_id
        if subscription_id is None:
            raise NotFoundError("no active subscription")
        self._broker.delete_subscription(subscription_id)
        with self._lock:
            self._subscription_id = None

    @property
    def subscription_id(self) -> Optional[str]:
        with self._lock:
            return self._subscription_id

    # --- notifications ----------------------------------------------------

    def _already_seen(self, notification_id: Optional[str]) -> bool:
        if not notification_id:
            return False
        with self._lock:
            if notification_id in self._seen_set:
                return True
            if len(self._seen_notifications) == self._seen_notifications.maxlen:
                self._seen_set.discard(self._seen_notifications[0])
            self._seen_notifications.append(notification_id)
            self._seen_set.add(notification_id)
            return False

    def _dataset_lock(self, dataset_id: str) -> threading.Lock:
        with self._lock:
            return self._dataset_locks.setdefault(dataset_id, threading.Lock())

    def _fetch_with_retry(self, fetch: Callable[[], Optional[Any]], what: str) -> Any:
        attempts = self._retries + 1
        for attempt in range(attempts):
            found = fetch()
            if found is not None:
                return found
            if attempt + 1 < attempts:
                self._sleep(self._retry_delay)
        raise NotFoundError(what)

    def _fetch_distribution(self, target: str) -> DistributionEntity:
        entity = self._fetch_with_retry(
            lambda: self._broker.get_entity(target),
            f"distribution {target} not found in broker",
        )
        return DistributionEntity.from_entity(entity)

    def _fetch_catalogue(self, dataset_id: str) -> CatalogueEntity:
        def lookup() -> Optional[NgsiEntity]:
            for entity in self._broker.current_entities(CATALOGUE_TYPE):
                if dataset_id in entity.relationships.get("dataset", ()):
                    return entity
            return None

        entity = self._fetch_with_retry(
            lookup, f"no catalogue references dataset {dataset_id}"
        )
        return CatalogueEntity.from_entity(entity)

    def _upsert_dataset(self, dataset: DatasetEntity, creds: AdminCredentials) -> dict[str, Any]:
        catalogue = self._fetch_catalogue(dataset.id)
        distributions = [self._fetch_distribution(t) for t in dataset.distribution]
        organization, _ = catalogue_to_organization(catalogue)
        try:
            self._catalog.organization_show(organization.id)
        except NotFoundError:
            self._catalog.organization_create(organization, token=creds.api_token)
        resources = []
        for distribution in distributions:
            resource, _ = distribution_to_resource(distribution)
            resources.append(resource)
        package, _ = dataset_to_package(dataset, organization.id, resources)
        action = self._catalog.package_upsert(package, token=creds.api_token)
        return {
            "organizationId": organization.id,
            "packageId": package.id,
            "resourceIds": [r.id for r in resources],
            "action": action,
        }

    def handle_notification(self, payload: dict[str, Any]) -> dict[str, Any]:
        with self._lock:
            creds = self._creds
        if creds is None:
            raise AuthorizationError("harvester has no stored credentials; subscribe first")
        data = payload.get("data")
        if not isinstance(data, list) or not data:
            raise BadNotification("notification carries no data array")
        datasets = []
        for doc in data:
            if not isinstance(doc, dict):
                raise BadNotification("notification data entries must be objects")
            entity = entity_from_json(doc)
            if entity.type == DATASET_TYPE:
                datasets.append(entity)
        if not datasets:
            raise BadNotification("notification contains no Dataset entity")
        summary: dict[str, Any] = {
            "notificationId": payload.get("id"),
            "subscriptionId": payload.get("subscriptionId"),
            "upserts": [],
            "failures": [],
        }
        if self._already_seen(payload.get("id")):
            summary["duplicate"] = True
            return summary
        for entity in datasets:
            with self._dataset_lock(entity.id):
                try:
                    dataset = DatasetEntity.from_entity(entity)
                    summary["upserts"].append(self._upsert_dataset(dataset, creds))
                except (NotFoundError, ValueError) as exc:
                    log.warning("skipping dataset %s: %s", entity.id, exc)
                    summary["failures"].append({"datasetId": entity.id, "error": str(exc)})
        with self._lock:
            self._summaries.append(summary)
        return summary

    def status(self) -> dict[str, Any]:
        with self._lock:
            return {
                "subscriptionId": self._subscription_id,
                "subscribed": self._subscription_id is not None,
                "summaries": list(self._summaries),
            }
