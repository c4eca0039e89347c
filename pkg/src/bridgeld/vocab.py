"""Bundled EU Publications Office vocabulary lists (no network fetch)."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from importlib import resources
from typing import Iterator, Mapping

from .model import AccessRights, Language

ACCESS_RIGHTS_TOKENS: Mapping[AccessRights, str] = {
    AccessRights.PUBLIC: "PUBLIC",
    AccessRights.RESTRICTED: "RESTRICTED",
    AccessRights.PRIVATE: "NON_PUBLIC",
}

LANGUAGE_TOKENS: Mapping[Language, str] = {
    Language.ENGLISH: "ENG",
    Language.SPANISH: "SPA",
    Language.GERMAN: "DEU",
    Language.FRENCH: "FRA",
}


class UnknownToken(KeyError):
    """A token is not present in the referenced vocabulary list."""


@dataclass(frozen=True)
class VocabEntry:
    token: str
    iri: str
    label: str


class Vocabulary:
    """One token -> IRI list, loaded from a TAB-separated data file."""

    def __init__(self, name: str, entries: list[VocabEntry]):
        self.name = name
        self._by_token = {entry.token: entry for entry in entries}
        self._iris = {entry.iri for entry in entries}

    def __contains__(self, token: str) -> bool:
        return token in self._by_token

    def __iter__(self) -> Iterator[VocabEntry]:
        return iter(self._by_token.values())

    def __len__(self) -> int:
        return len(self._by_token)

    def resolve(self, token: str) -> str:
        try:
            return self._by_token[token].iri
        except KeyError:
            raise UnknownToken(f"unknown token {token!r} in vocabulary {self.name}") from None

    def entry(self, token: str) -> VocabEntry:
        try:
            return self._by_token[token]
        except KeyError:
            raise UnknownToken(f"unknown token {token!r} in vocabulary {self.name}") from None

    def has_iri(self, iri: str) -> bool:
        return iri in self._iris

    def tokens(self) -> list[str]:
        return list(self._by_token)


def _load(name: str) -> Vocabulary:
    text = resources.files("bridgeld.vocabdata").joinpath(f"{name}.tsv").read_text("utf-8")
    entries = []
    for line in text.splitlines():
        if not line.strip():
            continue
        token, iri, label = line.split("\t")
        entries.append(VocabEntry(token, iri, label))
    return Vocabulary(name, entries)


@dataclass(frozen=True)
class Vocabularies:
    themes: Vocabulary
    languages: Vocabulary
    countries: Vocabulary
    access_rights: Vocabulary
    licences: Vocabulary
    file_types: Vocabulary
    media_types: Vocabulary

    def access_rights_iri(self, value: AccessRights) -> str:
        return self.access_rights.resolve(ACCESS_RIGHTS_TOKENS[value])

    def language_iri(self, value: Language) -> str:
        return self.languages.resolve(LANGUAGE_TOKENS[value])


@functools.lru_cache(maxsize=1)
def default_vocabularies() -> Vocabularies:
    return Vocabularies(
        themes=_load("themes"),
        languages=_load("languages"),
        countries=_load("countries"),
        access_rights=_load("access_rights"),
        licences=_load("licences"),
        file_types=_load("file_types"),
        media_types=_load("media_types"),
    )
