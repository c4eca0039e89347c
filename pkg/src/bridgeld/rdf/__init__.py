"""Minimal RDF triple model with deterministic serialization.

Serializers emit RDF/XML, Turtle (also served as Notation3) and JSON-LD;
independently written parsers for the same formats live in ``parse`` and back
the round-trip test oracle.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

_ABSOLUTE_IRI = re.compile(r"^[A-Za-z][A-Za-z0-9+.-]*:\S*$")


@dataclass(frozen=True)
class IRI:
    value: str

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class BlankNode:
    label: str


XSD_STRING = IRI("http://www.w3.org/2001/XMLSchema#string")


@dataclass(frozen=True)
class Literal:
    """A literal with lexical form plus optional datatype or language tag."""

    lexical: str
    datatype: Optional[IRI] = None
    language: Optional[str] = None

    def __post_init__(self) -> None:
        if self.language is not None and self.datatype is not None:
            raise ValueError("a literal carries either a language tag or a datatype")
        # xsd:string is the implicit datatype of plain literals
        if self.datatype == XSD_STRING:
            object.__setattr__(self, "datatype", None)


Subject = Union[IRI, BlankNode]
Object = Union[IRI, BlankNode, Literal]
Triple = tuple[Subject, IRI, Object]


class Namespace:
    def __init__(self, base: str):
        self._base = base

    def __getattr__(self, name: str) -> IRI:
        return IRI(self._base + name)

    def term(self, name: str) -> IRI:
        return IRI(self._base + name)

    @property
    def base(self) -> str:
        return self._base


RDF = Namespace("http://www.w3.org/1999/02/22-rdf-syntax-ns#")
DCT = Namespace("http://purl.org/dc/terms/")
DCAT = Namespace("http://www.w3.org/ns/dcat#")
OWL = Namespace("http://www.w3.org/2002/07/owl#")
XSD = Namespace("http://www.w3.org/2001/XMLSchema#")
DQV = Namespace("http://www.w3.org/ns/dqv#")
PV = Namespace("https://piveau.eu/ns/voc#")

PREFIXES: dict[str, str] = {
    "rdf": RDF.base,
    "dct": DCT.base,
    "dcat": DCAT.base,
    "owl": OWL.base,
    "xsd": XSD.base,
    "dqv": DQV.base,
    "pv": PV.base,
}


class RdfGraph:
    """A duplicate-free triple set that remembers insertion order.

    Insertion order fixes the first-use order of blank nodes, which the
    serializers rely on for stable output.
    """

    def __init__(self, triples: Iterable[Triple] = ()):
        self._triples: list[Triple] = []
        self._index: set[Triple] = set()
        for s, p, o in triples:
            self.add(s, p, o)

    def add(self, subject: Subject, predicate: IRI, obj: Object) -> None:
        for term in (subject, predicate, obj):
            if isinstance(term, IRI) and not _ABSOLUTE_IRI.match(term.value):
                raise ValueError(f"IRI {term.value!r} is not absolute")
        if not isinstance(predicate, IRI):
            raise ValueError("predicate must be an IRI")
        triple = (subject, predicate, obj)
        if triple not in self._index:
            self._index.add(triple)
            self._triples.append(triple)

    def add_all(self, triples: Iterable[Triple]) -> None:
        for s, p, o in triples:
            self.add(s, p, o)

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._index

    def triples(
        self,
        subject: Optional[Subject] = None,
        predicate: Optional[IRI] = None,
        obj: Optional[Object] = None,
    ) -> Iterator[Triple]:
        for s, p, o in self._triples:
            if subject is not None and s != subject:
                continue
            if predicate is not None and p != predicate:
                continue
            if obj is not None and o != obj:
                continue
            yield s, p, o

    def subjects(self, predicate: Optional[IRI] = None, obj: Optional[Object] = None) -> list[Subject]:
        seen: list[Subject] = []
        for s, _, _ in self.triples(predicate=predicate, obj=obj):
            if s not in seen:
                seen.append(s)
        return seen

    def objects(self, subject: Optional[Subject] = None, predicate: Optional[IRI] = None) -> list[Object]:
        return [o for _, _, o in self.triples(subject=subject, predicate=predicate)]

    def value(self, subject: Subject, predicate: IRI) -> Optional[Object]:
        for _, _, o in self.triples(subject=subject, predicate=predicate):
            return o
        return None

    def predicates(self) -> set[IRI]:
        return {p for _, p, _ in self._triples}

    def without(self, subject: Subject, predicate: IRI) -> "RdfGraph":
        """Copy of the graph with every (subject, predicate, *) triple removed."""
        return RdfGraph(
            (s, p, o) for s, p, o in self._triples if not (s == subject and p == predicate)
        )


from .serialize import (  # noqa: E402
    MEDIA_TYPES,
    SERIALIZATION_FORMATS,
    UnknownFormat,
    UnserializableGraph,
    serialize_graph,
)
from .parse import ParseError, parse_graph  # noqa: E402
from .isomorphism import isomorphic  # noqa: E402

__all__ = [
    "IRI",
    "BlankNode",
    "Literal",
    "RdfGraph",
    "Namespace",
    "RDF",
    "DCT",
    "DCAT",
    "OWL",
    "XSD",
    "DQV",
    "PV",
    "PREFIXES",
    "MEDIA_TYPES",
    "SERIALIZATION_FORMATS",
    "UnknownFormat",
    "UnserializableGraph",
    "ParseError",
    "serialize_graph",
    "parse_graph",
    "isomorphic",
]
