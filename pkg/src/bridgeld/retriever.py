"""URL grammar for the data proxy.

Public dataset URLs embed the entity type between literal "__" delimiters and
the output format after the final dot; temporal URLs add exactly one look-back
unit in the query string. Parsing is pure; the HTTP layer does the proxying.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime
from typing import Optional
from urllib.parse import parse_qsl, unquote

from .model import TemporalUnit, TemporalWindow, isoformat_utc

FORMATS = {
    "json": "application/json",
    "jsonld": "application/ld+json",
}

# singular and plural spellings both canonicalize onto the enum
_UNIT_ALIASES = {
    "year": TemporalUnit.YEAR,
    "years": TemporalUnit.YEAR,
    "month": TemporalUnit.MONTHS,
    "months": TemporalUnit.MONTHS,
    "week": TemporalUnit.WEEKS,
    "weeks": TemporalUnit.WEEKS,
    "day": TemporalUnit.DAYS,
    "days": TemporalUnit.DAYS,
    "hour": TemporalUnit.HOURS,
    "hours": TemporalUnit.HOURS,
}

# .* is greedy so the delimiter match ends at the last "__." in the path;
# an empty type still matches and is reported under its own rule
_PATH = re.compile(r"^/retriever/(?P<kind>realtime|temporal)/__(?P<url_type>.*)__\.(?P<format>[A-Za-z0-9]+)$")


class BadRequest(ValueError):
    """Path or query violates the grammar; rule names the failed constraint."""

    def __init__(self, rule: str, message: str):
        super().__init__(message)
        self.rule = rule


@dataclass(frozen=True)
class RetrieverRequest:
    kind: str
    url_type: str
    format: str
    window: Optional[TemporalWindow] = None

    @property
    def media_type(self) -> str:
        return FORMATS[self.format]


def parse_path(path: str, query: str = "") -> RetrieverRequest:
    match = _PATH.match(path)
    if match is None:
        # registry emits the type verbatim, but a client may have encoded it
        match = _PATH.match(unquote(path))
    if match is None:
        raise BadRequest("delimiters", "path must contain __<url_type>__.<format>")
    kind = match.group("kind")
    url_type = match.group("url_type")
    if "%" in url_type:
        # the type itself may arrive percent-encoded even when the rest of
        # the path matched verbatim
        url_type = unquote(url_type)
    fmt = match.group("format").lower()
    if fmt not in FORMATS:
        raise BadRequest("format", f"unknown format {fmt!r}; expected json or jsonld")
    if not url_type:
        raise BadRequest("url_type", "url_type must be non-empty")
    units: list[tuple[TemporalUnit, str]] = []
    for key, value in parse_qsl(query, keep_blank_values=True):
        unit = _UNIT_ALIASES.get(key.lower())
        if unit is not None:
            units.append((unit, value))
    if kind == "realtime":
        if units:
            raise BadRequest("units", "realtime requests take no temporal unit")
        return RetrieverRequest(kind, url_type, fmt)
    if len(units) != 1:
        raise BadRequest("units", "temporal requests take exactly one temporal unit")
    unit, raw_value = units[0]
    try:
        value = int(raw_value)
    except ValueError:
        raise BadRequest("value", f"unit value {raw_value!r} is not an integer") from None
    if value <= 0:
        raise BadRequest("value", "unit value must be positive")
    return RetrieverRequest(kind, url_type, fmt, TemporalWindow(unit, value))


def broker_query(request: RetrieverRequest, now: datetime) -> tuple[str, dict[str, str], str]:
    """The (path, params, accept) triple the proxy sends to the broker."""
    if request.kind == "realtime":
        return "/ngsi-ld/v1/entities", {"type": request.url_type}, request.media_type
    assert request.window is not None
    return (
        "/ngsi-ld/v1/temporal/entities",
        {
            "type": request.url_type,
            "timerel": "after",
            "timeAt": isoformat_utc(request.window.cutoff(now)),
        },
        request.media_type,
    )
