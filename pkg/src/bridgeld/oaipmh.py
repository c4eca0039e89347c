"""OAI-PMH 2.0 endpoint over the catalog: ListRecords only.

Each record wraps one dataset's RDF/XML export in <metadata>. The exporter
output is embedded verbatim (minus its XML declaration) so harvested payloads
are byte-identical to a direct export. Resumption tokens pin the catalog
snapshot they were issued against; any mutation in between invalidates them.
"""

from __future__ import annotations

import base64
import binascii
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Callable, Mapping, Optional

from xml.sax.saxutils import escape, quoteattr

from .catalog import CatalogStore
from .dcat_export import export_dataset
from .model import parse_datetime, utcnow

OAI_NS = "http://www.openarchives.org/OAI/2.0/"
SCHEMA_LOCATION = (
    "http://www.openarchives.org/OAI/2.0/ "
    "http://www.openarchives.org/OAI/2.0/OAI-PMH.xsd"
)
METADATA_PREFIX = "dcat_ap"
PAGE_SIZE = 100

# arguments the ListRecords verb accepts here; selective harvesting is out
_KNOWN_ARGUMENTS = {"verb", "metadataPrefix", "resumptionToken"}


class TokenError(ValueError):
    pass


@dataclass(frozen=True)
class ResumptionToken:
    cursor: int
    snapshot_at: str
    metadata_prefix: str

    def encode(self) -> str:
        raw = f"{self.cursor}|{self.snapshot_at}|{self.metadata_prefix}"
        return base64.urlsafe_b64encode(raw.encode("utf-8")).decode("ascii")

    @classmethod
    def decode(cls, text: str) -> "ResumptionToken":
        try:
            raw = base64.urlsafe_b64decode(text.encode("ascii")).decode("utf-8")
        except (binascii.Error, UnicodeError, ValueError) as exc:
            raise TokenError(f"undecodable token: {exc}") from exc
        parts = raw.split("|")
        if len(parts) != 3:
            raise TokenError("token does not carry three fields")
        cursor_text, snapshot_at, metadata_prefix = parts
        try:
            cursor = int(cursor_text)
        except ValueError as exc:
            raise TokenError("token cursor is not an integer") from exc
        if cursor < 0:
            raise TokenError("token cursor is negative")
        return cls(cursor, snapshot_at, metadata_prefix)


def _oai_timestamp(moment: datetime) -> str:
    return moment.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _day_granularity(iso_text: str) -> str:
    return parse_datetime(iso_text).strftime("%Y-%m-%d")


class OaiEndpoint:
    def __init__(
        self,
        store: CatalogStore,
        base_url: str,
        base_iri: str,
        page_size: int = PAGE_SIZE,
        clock: Callable[[], datetime] = utcnow,
    ):
        if page_size < 1:
            raise ValueError("page_size must be positive")
        self.store = store
        self.base_url = base_url
        self.base_iri = base_iri
        self.page_size = page_size
        self.clock = clock

    # --- envelope assembly -------------------------------------------------

    def _envelope(
        self,
        body: str,
        request_attributes: Mapping[str, str],
        now: Optional[datetime],
    ) -> bytes:
        moment = now if now is not None else self.clock()
        attrs = "".join(
            f" {name}={quoteattr(value)}" for name, value in request_attributes.items()
        )
        document = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<OAI-PMH xmlns="{OAI_NS}"'
            ' xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance"'
            f' xsi:schemaLocation="{SCHEMA_LOCATION}">\n'
            f"  <responseDate>{_oai_timestamp(moment)}</responseDate>\n"
            f"  <request{attrs}>{escape(self.base_url)}</request>\n"
            f"{body}"
            "</OAI-PMH>\n"
        )
        return document.encode("utf-8")

    def _error(
        self,
        code: str,
        message: str,
        request_attributes: Mapping[str, str],
        now: Optional[datetime],
    ) -> bytes:
        body = f'  <error code="{code}">{escape(message)}</error>\n'
        return self._envelope(body, request_attributes, now)

    def _record(self, name: str) -> str:
        package = self.store.package_show(name)
        payload, _ = export_dataset(self.store, name, "xml", base_iri=self.base_iri)
        text = payload.decode("utf-8")
        if text.startswith("<?xml"):
            text = text.split("\n", 1)[1]
        rdf_xml = "\n".join(f"        {line}" for line in text.rstrip("\n").split("\n"))
        return (
            "    <record>\n"
            "      <header>\n"
            f"        <identifier>{escape(package.id)}</identifier>\n"
            f"        <datestamp>{_day_granularity(package.metadata_modified)}</datestamp>\n"
            "      </header>\n"
            "      <metadata>\n"
            f"{rdf_xml}\n"
            "      </metadata>\n"
            "    </record>\n"
        )

    # --- verbs -------------------------------------------------------------

    def handle(self, params: Mapping[str, str], now: Optional[datetime] = None) -> bytes:
        verb = params.get("verb")
        if verb != "ListRecords":
            # request attributes are omitted on badVerb per protocol
            shown = verb if verb is not None else "(missing)"
            return self._error("badVerb", f"unsupported verb {shown}", {}, now)
        unknown = set(params) - _KNOWN_ARGUMENTS
        if unknown:
            names = ", ".join(sorted(unknown))
            return self._error("badArgument", f"illegal arguments: {names}", {}, now)
        return self.list_records(
            params.get("metadataPrefix"), params.get("resumptionToken"), now
        )

    def list_records(
        self,
        metadata_prefix: Optional[str],
        token_text: Optional[str] = None,
        now: Optional[datetime] = None,
    ) -> bytes:
        if token_text is not None and metadata_prefix is not None:
            return self._error(
                "badArgument",
                "resumptionToken is an exclusive argument",
                {},
                now,
            )
        if token_text is None and metadata_prefix is None:
            return self._error("badArgument", "metadataPrefix is required", {}, now)

        echo: dict[str, str] = {"verb": "ListRecords"}
        snapshot = self.store.snapshot_stamp()
        names = self.store.package_list()

        if token_text is not None:
            echo["resumptionToken"] = token_text
            try:
                token = ResumptionToken.decode(token_text)
            except TokenError as exc:
                return self._error("badResumptionToken", str(exc), echo, now)
            if token.metadata_prefix != METADATA_PREFIX:
                return self._error(
                    "badResumptionToken", "token names an unsupported prefix", echo, now
                )
            if token.snapshot_at != snapshot:
                return self._error(
                    "badResumptionToken", "catalog changed since token was issued", echo, now
                )
            if token.cursor >= len(names):
                return self._error("badResumptionToken", "token cursor out of range", echo, now)
            cursor = token.cursor
        else:
            echo["metadataPrefix"] = metadata_prefix or ""
            if metadata_prefix != METADATA_PREFIX:
                return self._error(
                    "cannotDisseminateFormat",
                    f"unsupported metadataPrefix {metadata_prefix!r}",
                    echo,
                    now,
                )
            cursor = 0

        if not names:
            return self._error("noRecordsMatch", "the catalog holds no datasets", echo, now)

        page = names[cursor : cursor + self.page_size]
        remaining = cursor + self.page_size < len(names)
        parts = ["  <ListRecords>\n"]
        parts.extend(self._record(name) for name in page)
        size_attrs = (
            f' completeListSize="{len(names)}" cursor="{cursor}"'
        )
        if remaining:
            next_token = ResumptionToken(
                cursor + self.page_size, snapshot, METADATA_PREFIX
            ).encode()
            parts.append(f"    <resumptionToken{size_attrs}>{next_token}</resumptionToken>\n")
        elif cursor > 0 or len(names) > self.page_size:
            # final page of a multi-page list: empty token closes the sequence
            parts.append(f"    <resumptionToken{size_attrs}/>\n")
        parts.append("  </ListRecords>\n")
        return self._envelope("".join(parts), echo, now)
