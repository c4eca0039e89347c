"""In-process NGSI-LD context broker.

Holds current entities, an append-only temporal log of full snapshots, and
subscriptions whose webhook notifications are delivered off the upsert path by
a background dispatcher. Federation is a list of in-process child handles
whose query results are merged under the local store.
"""

from __future__ import annotations

import heapq
import itertools
import logging
import threading
import time
import uuid
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Callable, Iterable, Optional, Protocol, Sequence

from .model import (
    NgsiEntity,
    TemporalWindow,
    entity_to_json,
    is_http_url,
    isoformat_utc,
    utcnow,
)

log = logging.getLogger(__name__)

PAGE_LIMIT = 1000

JSON_MT = "application/json"
JSONLD_MT = "application/ld+json"


class BrokerError(Exception):
    pass


class EntityRejected(BrokerError):
    def __init__(self, diagnostics: Sequence[str]):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = list(diagnostics)


class NotAcceptable(BrokerError):
    pass


class SubscriptionNotFound(BrokerError):
    pass


class FederationError(BrokerError):
    pass


def negotiate(accept: Optional[str]) -> str:
    """Pick json or jsonld from an Accept header; anything else is refused."""
    if accept is None or not accept.strip():
        return "json"
    for part in accept.split(","):
        media = part.split(";")[0].strip().lower()
        if media in ("*/*", "application/*", JSON_MT):
            return "json"
        if media == JSONLD_MT:
            return "jsonld"
    raise NotAcceptable(f"cannot serve Accept {accept!r}; offer {JSON_MT} or {JSONLD_MT}")


@dataclass(frozen=True)
class Subscription:
    id: str
    entity_type: str
    callback_url: str
    active: bool
    created_at: datetime

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "type": "Subscription",
            "entities": [{"type": self.entity_type}],
            "notification": {"endpoint": {"uri": self.callback_url}},
            "isActive": self.active,
            "createdAt": isoformat_utc(self.created_at),
        }


@dataclass(frozen=True)
class TemporalRecord:
    entity_id: str
    snapshot: NgsiEntity
    recorded_at: datetime


class FederatedSource(Protocol):
    def current_entities(self, entity_type: str) -> Sequence[NgsiEntity]: ...


@dataclass
class _Delivery:
    notification_id: str
    url: str
    payload: dict[str, Any]
    attempt: int
    due_at: float


class NotificationDispatcher:
    """Delivers webhook notifications with bounded queueing and spaced retries.

    The queue drops its oldest entry past max_pending; a delivery that fails
    after the last retry delay is dropped and logged. send() must return
    truthiness for success and never raise for ordinary transport failures.
    """

    def __init__(
        self,
        send: Callable[[str, dict], bool],
        retry_delays: Sequence[float] = (1.0, 5.0, 25.0),
        max_pending: int = 10_000,
    ):
        self._send = send
        self._delays = tuple(retry_delays)
        self._max_pending = max_pending
        self._heap: list[tuple[float, int, _Delivery]] = []
        self._tick = itertools.count()
        self._lock = threading.Lock()
        self._wakeup = threading.Condition(self._lock)
        self._in_flight = 0
        self._closed = False
        self._worker = threading.Thread(target=self._run, name="notification-dispatch", daemon=True)
        self._worker.start()

    def submit(self, url: str, payload: dict[str, Any]) -> str:
        notification_id = str(uuid.uuid4())
        delivery = _Delivery(notification_id, url, payload, attempt=0, due_at=0.0)
        with self._wakeup:
            if len(self._heap) >= self._max_pending:
                # oldest-dropped overflow: evict the entry queued earliest
                oldest = min(range(len(self._heap)), key=lambda i: self._heap[i][1])
                dropped = self._heap.pop(oldest)[2]
                heapq.heapify(self._heap)
                log.warning("notification queue full, dropped %s", dropped.notification_id)
            heapq.heappush(self._heap, (delivery.due_at, next(self._tick), delivery))
            self._wakeup.notify()
        return notification_id

    def _run(self) -> None:
        while True:
            with self._wakeup:
                while not self._heap and not self._closed:
                    self._wakeup.wait()
                if self._closed and not self._heap:
                    return
                due_at, _, delivery = self._heap[0]
                delay = due_at - time.monotonic()
                if delay > 0:
                    self._wakeup.wait(timeout=delay)
                    continue
                heapq.heappop(self._heap)
                self._in_flight += 1
            try:
                ok = False
                try:
                    ok = bool(self._send(delivery.url, delivery.payload))
                except Exception:
                    log.exception("notification send to %s raised", delivery.url)
                if not ok:
                    self._retry(delivery)
            finally:
                with self._wakeup:
                    self._in_flight -= 1
                    self._wakeup.notify_all()

    def _retry(self, delivery: _Delivery) -> None:
        if delivery.attempt >= len(self._delays):
            log.error(
                "notification %s to %s dropped after %d attempts",
                delivery.notification_id,
                delivery.url,
                delivery.attempt + 1,
            )
            return
        delay = self._delays[delivery.attempt]
        delivery.attempt += 1
        delivery.due_at = time.monotonic() + delay
        with self._wakeup:
            heapq.heappush(self._heap, (delivery.due_at, next(self._tick), delivery))
            self._wakeup.notify()

    def drain(self, timeout: float = 10.0) -> bool:
        """Block until nothing is queued or in flight; False on timeout."""
        deadline = time.monotonic() + timeout
        with self._wakeup:
            while self._heap or self._in_flight:
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    return False
                self._wakeup.wait(timeout=min(remaining, 0.05))
        return True

    def close(self) -> None:
        with self._wakeup:
            self._closed = True
            self._wakeup.notify_all()


class ContextBroker:
    """Entity store + temporal log + subscriptions, with optional federation."""

    def __init__(
        self,
        dispatcher: Optional[NotificationDispatcher] = None,
        clock: Callable[[], datetime] = utcnow,
    ):
        self._entities: dict[str, NgsiEntity] = {}
        self._log: list[TemporalRecord] = []
        self._subscriptions: dict[str, Subscription] = {}
        self._children: list[FederatedSource] = []
        self._lock = threading.RLock()
        self._clock = clock
        self._dispatcher = dispatcher

    # --- entities ---------------------------------------------------------

    def upsert_entity(self, entity: NgsiEntity) -> str:
        errors = entity.validation_errors()
        if errors:
            raise EntityRejected(errors)
        now = self._clock()
        with self._lock:
            action = "updated" if entity.id in self._entities else "created"
            stored = NgsiEntity(
                id=entity.id,
                type=entity.type,
                properties=dict(entity.properties),
                relationships=dict(entity.relationships),
                modified_at=now,
            )
            self._entities[entity.id] = stored
            recorded_at = now
            for record in reversed(self._log):
                if record.entity_id == entity.id:
                    # the log is monotone per entity even if the clock is not
                    if recorded_at < record.recorded_at:
                        recorded_at = record.recorded_at
                    break
            self._log.append(TemporalRecord(entity.id, stored, recorded_at))
            targets = [
                s for s in self._subscriptions.values() if s.active and s.entity_type == stored.type
            ]
        for subscription in targets:
            self._notify(subscription, stored, now)
        return action

    def _notify(self, subscription: Subscription, entity: NgsiEntity, now: datetime) -> None:
        if self._dispatcher is None:
            return
        payload = {
            "id": f"urn:ngsi-ld:Notification:{uuid.uuid4()}",
            "subscriptionId": subscription.id,
            "notifiedAt": isoformat_utc(now),
            "data": [entity_to_json(entity, with_context=True)],
        }
        self._dispatcher.submit(subscription.callback_url, payload)

    def current_entities(self, entity_type: str) -> list[NgsiEntity]:
        """Federated view: local entities win over same-id child results."""
        with self._lock:
            merged = {
                e.id: e for e in self._entities.values() if e.type == entity_type
            }
            children = list(self._children)
        for child in children:
            for entity in child.current_entities(entity_type):
                merged.setdefault(entity.id, entity)
        return list(merged.values())

    def get_entity(self, entity_id: str) -> Optional[NgsiEntity]:
        with self._lock:
            return self._entities.get(entity_id)

    def query_entities(
        self,
        entity_type: str,
        accept: Optional[str] = None,
        limit: int = PAGE_LIMIT,
        offset: int = 0,
    ) -> list[dict[str, Any]]:
        flavor = negotiate(accept)
        limit = max(0, min(limit, PAGE_LIMIT))
        entities = self.current_entities(entity_type)
        page = entities[offset : offset + limit]
        return [entity_to_json(e, with_context=flavor == "jsonld") for e in page]

    # --- temporal ---------------------------------------------------------

    def temporal_records(
        self,
        entity_type: str,
        since: datetime,
        until: Optional[datetime] = None,
    ) -> list[TemporalRecord]:
        if until is None:
            until = self._clock()
        with self._lock:
            return [
                r
                for r in self._log
                if r.snapshot.type == entity_type and since <= r.recorded_at <= until
            ]

    def query_temporal(
        self,
        entity_type: str,
        window: TemporalWindow,
        now: Optional[datetime] = None,
        accept: Optional[str] = None,
    ) -> list[dict[str, Any]]:
        """Per-entity history over the closed interval [now - window, now]."""
        flavor = negotiate(accept)
        if now is None:
            now = self._clock()
        return self.render_temporal(
            self.temporal_records(entity_type, window.cutoff(now), now),
            flavor,
        )

    @staticmethod
    def render_temporal(records: Sequence[TemporalRecord], flavor: str) -> list[dict[str, Any]]:
        grouped: dict[str, list[TemporalRecord]] = {}
        for record in records:
            grouped.setdefault(record.entity_id, []).append(record)
        documents = []
        for entity_id, history in grouped.items():
            doc: dict[str, Any] = {
                "id": entity_id,
                "type": history[0].snapshot.type,
                "history": [
                    {
                        "recordedAt": isoformat_utc(r.recorded_at),
                        "entity": entity_to_json(r.snapshot),
                    }
                    for r in history
                ],
            }
            if flavor == "jsonld":
                from .model import NGSI_CORE_CONTEXT

                doc["@context"] = [NGSI_CORE_CONTEXT]
            documents.append(doc)
        return documents

    # --- subscriptions ----------------------------------------------------

    def create_subscription(self, entity_type: str, callback_url: str) -> Subscription:
        if not is_http_url(callback_url):
            raise BrokerError(f"callback {callback_url!r} is not an absolute http(s) URL")
        with self._lock:
            for existing in self._subscriptions.values():
                if (
                    existing.active
                    and existing.entity_type == entity_type
                    and existing.callback_url == callback_url
                ):
                    return existing
            subscription = Subscription(
                id=f"urn:ngsi-ld:Subscription:{uuid.uuid4()}",
                entity_type=entity_type,
                callback_url=callback_url,
                active=True,
                created_at=self._clock(),
            )
            self._subscriptions[subscription.id] = subscription
            return subscription

    def delete_subscription(self, subscription_id: str) -> None:
        with self._lock:
            if subscription_id not in self._subscriptions:
                raise SubscriptionNotFound(subscription_id)
            del self._subscriptions[subscription_id]

    def subscriptions(self) -> list[Subscription]:
        with self._lock:
            return list(self._subscriptions.values())

    # --- federation -------------------------------------------------------

    def register_federated(self, child: FederatedSource) -> None:
        with self._lock:
            if any(existing is child for existing in self._children):
                raise FederationError("child broker already registered")
            self._children.append(child)
