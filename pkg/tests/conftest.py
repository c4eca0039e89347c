import pytest
from hypothesis import settings

import support
from bridgeld.config import (
    AppConfig,
    BrokerSection,
    CatalogSection,
    HarvesterSection,
    RegistrySection,
    RetrieverSection,
)
from bridgeld.service.runner import ServerGroup, build_suite

# property tests share the process with socket servers, so wall-clock
# deadlines would only produce flaky failures
settings.register_profile("suite", deadline=None)
settings.load_profile("suite")


@pytest.fixture
def clock():
    return support.FakeClock()


@pytest.fixture(scope="session")
def mapping_case():
    return support.build_mapping_case()


def live_config() -> AppConfig:
    broker_port = support.free_port()
    registry_port = support.free_port()
    retriever_port = support.free_port()
    catalog_port = support.free_port()
    broker_url = f"http://127.0.0.1:{broker_port}"
    catalog_base = f"http://127.0.0.1:{catalog_port}"
    return AppConfig(
        broker=BrokerSection(port=broker_port),
        registry=RegistrySection(
            port=registry_port,
            broker_url=broker_url,
            retriever_base=f"http://127.0.0.1:{retriever_port}",
            catalog_base=catalog_base,
        ),
        retriever=RetrieverSection(port=retriever_port, broker_url=broker_url),
        catalog=CatalogSection(port=catalog_port, base_url=catalog_base),
        harvester=HarvesterSection(
            self_base=catalog_base,
            auto_subscribe=True,
            user="ckan-admin",
            token="live-token",
            retries=2,
            retry_delay=0.05,
        ),
    )


@pytest.fixture(scope="session")
def live_group():
    """All four services on real sockets, subscribed and ready."""
    config = live_config()
    group = ServerGroup(build_suite(config))
    group.start()
    try:
        yield config, group
    finally:
        group.stop()
