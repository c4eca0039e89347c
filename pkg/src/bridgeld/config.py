"""One YAML document configures the whole suite, one section per service.

Environment variables override file values by the BRIDGELD_<SECTION>_<KEY>
convention, e.g. BRIDGELD_CATALOG_TOKEN_FILE overrides catalog.tokenFile.
File keys are camelCase; dataclass fields are snake_case.
"""

from __future__ import annotations

import dataclasses
import os
import re
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping, Optional, Union, get_type_hints

import yaml


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class BrokerSection:
    port: int = 8081


@dataclass(frozen=True)
class RegistrySection:
    port: int = 8082
    broker_url: str = "http://127.0.0.1:8081"
    owner_title: str = "Open Context Data"
    owner_description: str = "Context data published as open data"
    owner_homepage: str = "https://example.org/opendata"
    owner_publisher: str = ""
    default_license: str = "CC_BY_4_0"
    retriever_base: str = "http://127.0.0.1:8083"
    catalog_base: str = "http://127.0.0.1:8084"


@dataclass(frozen=True)
class RetrieverSection:
    port: int = 8083
    broker_url: str = "http://127.0.0.1:8081"


@dataclass(frozen=True)
class CatalogSection:
    port: int = 8084
    base_url: str = "http://127.0.0.1:8084"
    token_file: Optional[str] = None
    persist_file: Optional[str] = None


@dataclass(frozen=True)
class HarvesterSection:
    self_base: str = "http://127.0.0.1:8084"
    auto_subscribe: bool = False
    user: str = "ckan-admin"
    token: str = ""
    retries: int = 2
    retry_delay: float = 2.0


@dataclass(frozen=True)
class MqaSection:
    weight_file: Optional[str] = None


@dataclass(frozen=True)
class OaiSection:
    page_size: int = 100


@dataclass(frozen=True)
class AppConfig:
    broker: BrokerSection = field(default_factory=BrokerSection)
    registry: RegistrySection = field(default_factory=RegistrySection)
    retriever: RetrieverSection = field(default_factory=RetrieverSection)
    catalog: CatalogSection = field(default_factory=CatalogSection)
    harvester: HarvesterSection = field(default_factory=HarvesterSection)
    mqa: MqaSection = field(default_factory=MqaSection)
    oai: OaiSection = field(default_factory=OaiSection)


_SECTIONS = {f.name: f.type for f in fields(AppConfig)}


def _snake(camel: str) -> str:
    return re.sub(r"(?<=[a-z0-9])([A-Z])", r"_\1", camel).lower()


def _coerce(section: str, name: str, target: type, value: Any) -> Any:
    origin = getattr(target, "__origin__", None)
    if origin is Union:  # Optional[str]
        if value is None:
            return None
        target = next(t for t in target.__args__ if t is not type(None))
    if target is bool:
        if isinstance(value, bool):
            return value
        text = str(value).strip().lower()
        if text in ("1", "true", "yes", "on"):
            return True
        if text in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{section}.{name}: {value!r} is not a boolean")
    try:
        if target is int:
            return int(value)
        if target is float:
            return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{section}.{name}: {value!r} is not a number") from None
    return str(value)


def _apply(section_name: str, current: Any, updates: Mapping[str, Any]) -> Any:
    # field annotations are strings under PEP 563; resolve to real types
    hints = get_type_hints(type(current))
    known = {f.name for f in fields(current)}
    resolved: dict[str, Any] = {}
    for key, value in updates.items():
        name = _snake(key)
        if name not in known:
            raise ConfigError(f"unknown key {key!r} in section {section_name!r}")
        resolved[name] = _coerce(section_name, name, hints[name], value)
    return dataclasses.replace(current, **resolved)


def load_config(
    path: Optional[Union[str, Path]] = None,
    env: Optional[Mapping[str, str]] = None,
) -> AppConfig:
    cfg = AppConfig()

    if path is not None:
        try:
            doc = yaml.safe_load(Path(path).read_text("utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except yaml.YAMLError as exc:
            raise ConfigError(f"config file {path} is not valid YAML: {exc}") from None
        if doc is None:
            doc = {}
        if not isinstance(doc, dict):
            raise ConfigError(f"config file {path} must hold a mapping of sections")
        for section_name, body in doc.items():
            if section_name not in _SECTIONS:
                raise ConfigError(f"unknown config section {section_name!r}")
            if body is None:
                continue
            if not isinstance(body, dict):
                raise ConfigError(f"section {section_name!r} must be a mapping")
            cfg = dataclasses.replace(
                cfg, **{section_name: _apply(section_name, getattr(cfg, section_name), body)}
            )

    environment = os.environ if env is None else env
    for variable, value in sorted(environment.items()):
        if not variable.startswith("BRIDGELD_"):
            continue
        rest = variable[len("BRIDGELD_") :].lower()
        section_name = rest.split("_", 1)[0]
        if section_name not in _SECTIONS or "_" not in rest:
            raise ConfigError(f"unrecognized environment override {variable}")
        key = rest.split("_", 1)[1]
        cfg = dataclasses.replace(
            cfg,
            **{section_name: _apply(section_name, getattr(cfg, section_name), {key: value})},
        )
    return cfg
