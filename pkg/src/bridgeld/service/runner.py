"""Builds the wired component suite and hosts it across four HTTP ports.

build_suite() is also the seam the demo and the tests use: with
in_process=True the services talk to each other through in-process test
clients instead of sockets, which keeps the pipeline hermetic.
"""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Optional

import httpx
import uvicorn
from fastapi import FastAPI

from ..catalog import CatalogStore, TokenStore
from ..config import AppConfig
from ..harvester import AdminCredentials, Harvester
from ..model import utcnow
from ..mqa import Weights, load_weights
from ..ngsi_broker import ContextBroker, NotificationDispatcher
from ..oaipmh import OaiEndpoint
from ..registry import Registry, RegistryConfig
from ..vocab import Vocabularies, default_vocabularies
from .broker_api import build_broker_app
from .catalog_api import build_catalog_app
from .registry_api import build_registry_app
from .retriever_api import build_retriever_app

log = logging.getLogger(__name__)


def _http_send(url: str, payload: dict[str, Any]) -> bool:
    try:
        return httpx.post(url, json=payload, timeout=10.0).status_code < 400
    except httpx.HTTPError as exc:
        log.warning("notification delivery to %s failed: %s", url, exc)
        return False


@dataclass
class Suite:
    config: AppConfig
    broker: ContextBroker
    registry: Registry
    store: CatalogStore
    harvester: Harvester
    oai: OaiEndpoint
    dispatcher: NotificationDispatcher
    weights: Weights
    vocabularies: Vocabularies
    broker_app: FastAPI
    registry_app: FastAPI
    catalog_app: FastAPI
    retriever_app: FastAPI


def build_suite(
    config: AppConfig,
    in_process: bool = False,
    send: Optional[Callable[[str, dict], bool]] = None,
    broker_client: Any = None,
    clock: Callable[[], Any] = utcnow,
    vocabularies: Optional[Vocabularies] = None,
    form_dir: Optional[Path] = None,
) -> Suite:
    vocabularies = vocabularies or default_vocabularies()
    weights = load_weights(config.mqa.weight_file)

    tokens: Optional[TokenStore] = None
    if config.catalog.token_file:
        tokens = TokenStore.from_file(config.catalog.token_file)
    elif config.harvester.token:
        tokens = TokenStore({config.harvester.user: config.harvester.token})

    store = CatalogStore(tokens=tokens)
    if config.catalog.persist_file and Path(config.catalog.persist_file).exists():
        store.load(config.catalog.persist_file)

    # the catalog client is bound after the catalog app exists; deliveries
    # submitted before that moment fail and ride the dispatcher's retries
    holder: dict[str, Any] = {}
    if send is None:
        if in_process:

            def send(url: str, payload: dict[str, Any]) -> bool:
                client = holder.get("catalog_client")
                if client is None:
                    return False
                try:
                    return client.post("/ngsi-ld/notifications", json=payload).status_code < 400
                except Exception:
                    return False

        else:
            send = _http_send

    dispatcher = NotificationDispatcher(send)
    broker = ContextBroker(dispatcher=dispatcher, clock=clock)

    registry_cfg = RegistryConfig(
        owner_title=config.registry.owner_title,
        owner_description=config.registry.owner_description,
        owner_homepage=config.registry.owner_homepage,
        retriever_base=config.registry.retriever_base,
        catalog_base=config.registry.catalog_base,
        owner_publisher=config.registry.owner_publisher,
        default_license=config.registry.default_license,
    )
    registry = Registry(registry_cfg, broker, clock=clock, vocabularies=vocabularies)

    harvester = Harvester(
        broker,
        store,
        config.harvester.self_base,
        retries=config.harvester.retries,
        retry_delay=config.harvester.retry_delay,
    )
    oai = OaiEndpoint(
        store,
        base_url=f"{config.catalog.base_url.rstrip('/')}/oai",
        base_iri=config.catalog.base_url,
        page_size=config.oai.page_size,
        clock=clock,
    )

    broker_app = build_broker_app(broker)
    if broker_client is None:
        if in_process:
            from fastapi.testclient import TestClient

            broker_client = TestClient(broker_app)
        else:
            broker_client = httpx.Client(base_url=config.retriever.broker_url, timeout=30.0)
    retriever_app = build_retriever_app(broker_client, clock=clock)

    registry_app = build_registry_app(registry, weights=weights, vocabularies=vocabularies)
    catalog_app = build_catalog_app(
        store,
        harvester=harvester,
        oai=oai,
        base_iri=config.catalog.base_url,
        weights=weights,
        vocabularies=vocabularies,
        form_dir=form_dir,
    )
    if in_process:
        from fastapi.testclient import TestClient

        holder["catalog_client"] = TestClient(catalog_app)

    return Suite(
        config=config,
        broker=broker,
        registry=registry,
        store=store,
        harvester=harvester,
        oai=oai,
        dispatcher=dispatcher,
        weights=weights,
        vocabularies=vocabularies,
        broker_app=broker_app,
        registry_app=registry_app,
        catalog_app=catalog_app,
        retriever_app=retriever_app,
    )


class ServerGroup:
    """Runs the four apps under uvicorn, one daemon thread each."""

    def __init__(self, suite: Suite):
        self.suite = suite
        config = suite.config
        self._plan = [
            ("broker", suite.broker_app, config.broker.port),
            ("registry", suite.registry_app, config.registry.port),
            ("retriever", suite.retriever_app, config.retriever.port),
            ("catalog", suite.catalog_app, config.catalog.port),
        ]
        self._servers: list[uvicorn.Server] = []
        self._threads: list[threading.Thread] = []

    def start(self, timeout: float = 15.0) -> None:
        for name, app, port in self._plan:
            server = uvicorn.Server(
                uvicorn.Config(app, host="127.0.0.1", port=port, log_level="warning")
            )
            thread = threading.Thread(target=server.run, name=f"uvicorn-{name}", daemon=True)
            self._servers.append(server)
            self._threads.append(thread)
            thread.start()
        deadline = time.monotonic() + timeout
        while time.monotonic() < deadline:
            if all(s.started for s in self._servers):
                break
            dead = [
                plan[0]
                for plan, server, thread in zip(self._plan, self._servers, self._threads)
                if not thread.is_alive() and not server.started
            ]
            if dead:
                self.stop()
                raise RuntimeError(
                    f"service(s) failed to start: {', '.join(dead)} "
                    "(port conflict or bad config; see log output)"
                )
            time.sleep(0.05)
        else:
            self.stop()
            raise RuntimeError("services did not come up within the startup timeout")

        config = self.suite.config
        if config.harvester.auto_subscribe:
            creds = AdminCredentials(config.harvester.user, config.harvester.token)
            subscription_id = self.suite.harvester.handle_subscribe(creds)
            log.info("auto-subscribed as %s: %s", creds.user_name, subscription_id)

    def wait(self) -> None:
        while all(t.is_alive() for t in self._threads):
            time.sleep(0.25)

    def stop(self, drain_timeout: float = 5.0) -> None:
        # finish in-flight notifications before taking the receivers down
        self.suite.dispatcher.drain(drain_timeout)
        self.suite.dispatcher.close()
        for server in self._servers:
            server.should_exit = True
        for thread in self._threads:
            thread.join(timeout=5.0)
        persist_file = self.suite.config.catalog.persist_file
        if persist_file:
            self.suite.store.persist(persist_file)


def serve(config: AppConfig, form_dir: Optional[Path] = None) -> None:
    suite = build_suite(config, form_dir=form_dir)
    group = ServerGroup(suite)
    group.start()
    log.info(
        "serving: broker :%d registry :%d retriever :%d catalog :%d",
        config.broker.port,
        config.registry.port,
        config.retriever.port,
        config.catalog.port,
    )
    try:
        group.wait()
    except KeyboardInterrupt:
        log.info("interrupt received, draining")
    finally:
        group.stop()
