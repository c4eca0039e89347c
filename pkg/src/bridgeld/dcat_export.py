"""DCAT-AP export: serializes catalog packages as RDF in four formats.

The only profile is the quality-checked DCAT-AP one; both its hyphenated and
underscored spellings are accepted. ``rdf`` and ``xml`` are aliases and must
produce byte-identical output.
"""

from __future__ import annotations

import re
from typing import Optional

from .catalog import CatalogStore
from .mapping import package_to_dcat
from .rdf import (
    MEDIA_TYPES,
    SERIALIZATION_FORMATS,
    RdfGraph,
    UnknownFormat,
    serialize_graph,
)
from .vocab import Vocabularies

__all__ = [
    "DEFAULT_PROFILE",
    "PROFILES",
    "MEDIA_TYPES",
    "SERIALIZATION_FORMATS",
    "UnknownFormat",
    "UnknownProfile",
    "dataset_graph",
    "export_dataset",
    "serialize_graph",
]

DEFAULT_PROFILE = "dcat_ap_edp_mqa"
PROFILES = frozenset({"dcat_ap_edp_mqa", "dcat-ap-edp-mqa"})


class UnknownProfile(ValueError):
    pass


def normalize_profile(profile: Optional[str]) -> str:
    """Collapse the accepted profile spellings; empty means the default."""
    if profile is None or not profile.strip():
        return DEFAULT_PROFILE
    for token in re.split(r"[,\s]+", profile.strip()):
        if token not in PROFILES:
            raise UnknownProfile(f"unsupported profile {token!r}")
    return DEFAULT_PROFILE


def dataset_graph(
    store: CatalogStore,
    id_or_name: str,
    base_iri: str,
    vocabularies: Optional[Vocabularies] = None,
) -> RdfGraph:
    package = store.package_show(id_or_name)
    return package_to_dcat(package, base_iri, vocabularies)


def export_dataset(
    store: CatalogStore,
    id_or_name: str,
    fmt: str,
    profile: Optional[str] = None,
    base_iri: str = "http://localhost",
    vocabularies: Optional[Vocabularies] = None,
) -> tuple[bytes, str]:
    normalize_profile(profile)
    if fmt not in SERIALIZATION_FORMATS:
        raise UnknownFormat(fmt)
    graph = dataset_graph(store, id_or_name, base_iri, vocabularies)
    return serialize_graph(graph, fmt), MEDIA_TYPES[fmt]
