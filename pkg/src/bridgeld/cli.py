"""Command line front end: service runner, thin HTTP clients, and a hermetic
end-to-end demo of the whole publication pipeline."""

from __future__ import annotations

import dataclasses
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Any, Optional

import click
import httpx

from .config import AppConfig, ConfigError, load_config

DEFAULT_REGISTRY = "http://127.0.0.1:8082"
DEFAULT_CATALOG = "http://127.0.0.1:8084"


def _fail(message: str) -> "click.ClickException":
    return click.ClickException(message)


def _print_violations(payload: dict[str, Any]) -> None:
    for violation in payload.get("violations", []):
        click.echo(
            f"  {violation.get('field')}: {violation.get('message')} "
            f"[{violation.get('rule')}]",
            err=True,
        )


@click.group()
def main() -> None:
    """Publish NGSI-LD context data as open-data datasets."""


@main.command()
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="YAML config file; BRIDGELD_* environment variables override it.",
)
def serve(config_path: Optional[str]) -> None:
    """Run broker, registry, retriever and catalog services."""
    from .service import runner

    try:
        cfg = load_config(config_path)
    except ConfigError as exc:
        raise _fail(f"bad config: {exc}")
    form_dir = Path("frontend") / "dist"
    try:
        runner.serve(cfg, form_dir=form_dir if form_dir.is_dir() else None)
    except RuntimeError as exc:
        raise _fail(str(exc))


@main.command()
@click.argument("request_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--registry", "registry_url", default=DEFAULT_REGISTRY, show_default=True)
def register(request_file: str, registry_url: str) -> None:
    """Publish the dataset description in REQUEST_FILE; prints the entity ids."""
    try:
        document = json.loads(Path(request_file).read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise _fail(f"cannot read request file: {exc}")
    try:
        response = httpx.post(
            f"{registry_url.rstrip('/')}/registry/datasets", json=document, timeout=30.0
        )
    except httpx.HTTPError as exc:
        raise _fail(f"registry unreachable: {exc}")
    if response.status_code == 422:
        click.echo("request rejected:", err=True)
        _print_violations(response.json())
        sys.exit(1)
    if response.status_code not in (200, 201):
        raise _fail(f"registry answered {response.status_code}: {response.text}")
    body = response.json()
    click.echo(body["catalogueId"])
    click.echo(body["datasetId"])
    for distribution_id in body["distributionIds"]:
        click.echo(distribution_id)


@main.command()
@click.argument("dataset")
@click.option(
    "--format",
    "fmt",
    default="ttl",
    show_default=True,
    type=click.Choice(["rdf", "xml", "ttl", "n3", "jsonld"]),
)
@click.option("--catalog", "catalog_url", default=DEFAULT_CATALOG, show_default=True)
def export(dataset: str, fmt: str, catalog_url: str) -> None:
    """Print DATASET's RDF description in the chosen serialization."""
    try:
        response = httpx.get(
            f"{catalog_url.rstrip('/')}/dataset/{dataset}.{fmt}", timeout=30.0
        )
    except httpx.HTTPError as exc:
        raise _fail(f"catalog unreachable: {exc}")
    if response.status_code != 200:
        raise _fail(f"export failed ({response.status_code}): {response.text}")
    sys.stdout.write(response.text)


@main.command()
@click.argument("dataset")
@click.option("--live", is_flag=True, help="Probe access/download URLs with HEAD requests.")
@click.option("--catalog", "catalog_url", default=DEFAULT_CATALOG, show_default=True)
@click.option(
    "--dqv",
    "dqv_path",
    type=click.Path(dir_okay=False, writable=True),
    default=None,
    help="Also write the DQV report (Turtle) to this file.",
)
def score(dataset: str, live: bool, catalog_url: str, dqv_path: Optional[str]) -> None:
    """Print DATASET's metadata quality score."""
    base = catalog_url.rstrip("/")
    params = {"live": "true"} if live else {}
    try:
        response = httpx.get(f"{base}/mqa/{dataset}", params=params, timeout=60.0)
    except httpx.HTTPError as exc:
        raise _fail(f"catalog unreachable: {exc}")
    if response.status_code != 200:
        raise _fail(f"scoring failed ({response.status_code}): {response.text}")
    report = response.json()
    _print_report(report)
    if dqv_path:
        rdf = httpx.get(
            f"{base}/mqa/{dataset}",
            params=params,
            headers={"Accept": "text/turtle"},
            timeout=60.0,
        )
        if rdf.status_code != 200:
            raise _fail(f"DQV fetch failed ({rdf.status_code})")
        Path(dqv_path).write_bytes(rdf.content)
        click.echo(f"DQV report written to {dqv_path}", err=True)


def _print_report(report: dict[str, Any]) -> None:
    for dimension in (
        "findability",
        "accessibility",
        "interoperability",
        "reusability",
        "contextuality",
    ):
        click.echo(f"{dimension:>16}: {report[dimension]}")
    for metric in report.get("perMetric", []):
        if not metric["passed"]:
            click.echo(f"{'':>16}  missing: {metric['name']} ({metric['maxPoints']} pts)")
    click.echo(f"{'total':>16}: {report['total']}/{report['maxTotal']} ({report['rating']})")


def _demo_config() -> AppConfig:
    cfg = AppConfig()
    return dataclasses.replace(
        cfg,
        harvester=dataclasses.replace(
            cfg.harvester, user="ckan-admin", token="demo-token", retry_delay=0.05
        ),
    )


@main.command()
def demo() -> None:
    """Run the full pipeline in-process: register, notify, harvest, export, score."""
    from fastapi.testclient import TestClient

    from .service.runner import build_suite

    suite = build_suite(_demo_config(), in_process=True)
    registry_client = TestClient(suite.registry_app)
    catalog_client = TestClient(suite.catalog_app)
    retriever_client = TestClient(suite.retriever_app)
    broker_client = TestClient(suite.broker_app)

    response = catalog_client.post(
        "/ngsi-ld/subscribe", params={"user": "ckan-admin", "token": "demo-token"}
    )
    if response.status_code != 200:
        raise _fail(f"subscribe failed: {response.text}")
    click.echo(f"subscribed: {response.json()['subscriptionId']}")

    request_doc = json.loads(
        resources.files("bridgeld.fixtures")
        .joinpath("parkingspot_request.json")
        .read_text("utf-8")
    )
    response = registry_client.post("/registry/datasets", json=request_doc)
    if response.status_code != 201:
        raise _fail(f"registration failed: {response.text}")
    body = response.json()
    click.echo(f"catalogue:    {body['catalogueId']}")
    click.echo(f"dataset:      {body['datasetId']}")
    for distribution_id in body["distributionIds"]:
        click.echo(f"distribution: {distribution_id}")

    if not suite.dispatcher.drain(timeout=10.0):
        raise _fail("notification delivery did not settle")
    status = catalog_client.get("/harvest/status").json()
    upserts = [u for s in status["summaries"] for u in s.get("upserts", [])]
    if not upserts:
        raise _fail("harvest produced no catalog records")
    package_name = catalog_client.get("/api/3/action/package_list").json()["result"][0]
    click.echo(f"harvested:    package {package_name}")

    # stand in for the sensor network: push a few payload entities
    parking_type = request_doc["entityType"]
    spots = [
        {
            "id": f"urn:ngsi-ld:ParkingSpot:santander:daoiz-velarde-1-{i}",
            "type": parking_type,
            "status": {"type": "Property", "value": "free" if i % 2 else "occupied"},
            "category": {"type": "Property", "value": ["onstreet"]},
        }
        for i in range(3)
    ]
    response = broker_client.post("/ngsi-ld/v1/entityOperations/upsert", json=spots)
    if response.status_code not in (201, 204):
        raise _fail(f"payload upsert failed: {response.text}")

    live_url = f"/retriever/realtime/__{parking_type}__.json"
    response = retriever_client.get(live_url)
    if response.status_code != 200:
        raise _fail(f"retriever probe failed: {response.text}")
    live_count = len(response.json())
    window_url = f"/retriever/temporal/__{parking_type}__.json"
    response = retriever_client.get(window_url, params={"hours": 1})
    if response.status_code != 200:
        raise _fail(f"temporal probe failed: {response.text}")
    click.echo(
        f"retriever:    {live_count} live entities, "
        f"{len(response.json())} temporal histories"
    )

    response = catalog_client.get(f"/dataset/{package_name}.ttl")
    if response.status_code != 200:
        raise _fail(f"export failed: {response.text}")
    click.echo(f"export:       {len(response.text.splitlines())} lines of Turtle")

    response = catalog_client.get(f"/mqa/{package_name}")
    if response.status_code != 200:
        raise _fail(f"scoring failed: {response.text}")
    report = response.json()
    _print_report(report)


if __name__ == "__main__":
    main()
