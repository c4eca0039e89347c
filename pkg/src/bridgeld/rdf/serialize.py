"""Deterministic RDF serializers: Turtle, RDF/XML and JSON-LD.

Subjects are ordered IRIs-first (lexicographic), then blank nodes in first-use
order; predicates sort after rdf:type; objects sort within a predicate. Two
calls on the same graph produce identical bytes.
"""

from __future__ import annotations

import json
import re
from importlib import resources
from typing import Mapping, Optional

from . import RDF, PREFIXES, BlankNode, IRI, Literal, Object, RdfGraph, Subject

SERIALIZATION_FORMATS = ("rdf", "xml", "ttl", "n3", "jsonld")

MEDIA_TYPES: Mapping[str, str] = {
    "rdf": "application/rdf+xml",
    "xml": "application/rdf+xml",
    "ttl": "text/turtle",
    "n3": "text/n3",
    "jsonld": "application/ld+json",
}

_LOCAL_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_-]*$")
_NCNAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_.-]*$")


class UnknownFormat(ValueError):
    """Requested serialization format is not one of rdf/xml/ttl/n3/jsonld."""


class UnserializableGraph(ValueError):
    """The graph cannot be represented in the requested concrete syntax."""


def serialize_graph(graph: RdfGraph, fmt: str) -> bytes:
    if fmt not in SERIALIZATION_FORMATS:
        raise UnknownFormat(f"unsupported serialization format {fmt!r}")
    if fmt in ("rdf", "xml"):
        return _to_rdfxml(graph)
    if fmt == "jsonld":
        return _to_jsonld(graph)
    # Notation3 is a superset of Turtle, so ttl output serves both
    return _to_turtle(graph)


def _bnode_labels(graph: RdfGraph) -> dict[BlankNode, str]:
    """Output labels b0, b1, ... assigned by first use in insertion order."""
    labels: dict[BlankNode, str] = {}
    for s, _, o in graph:
        for term in (s, o):
            if isinstance(term, BlankNode) and term not in labels:
                labels[term] = f"b{len(labels)}"
    return labels


def _ordered_subjects(graph: RdfGraph, labels: dict[BlankNode, str]) -> list[Subject]:
    subjects: list[Subject] = []
    for s, _, _ in graph:
        if s not in subjects:
            subjects.append(s)
    iris = sorted((s for s in subjects if isinstance(s, IRI)), key=lambda s: s.value)
    bnodes = [s for s in subjects if isinstance(s, BlankNode)]
    bnodes.sort(key=lambda b: labels[b])
    return [*iris, *bnodes]


def _object_sort_key(obj: Object, labels: dict[BlankNode, str]):
    if isinstance(obj, IRI):
        return (0, obj.value, "", "")
    if isinstance(obj, BlankNode):
        return (1, labels[obj], "", "")
    return (2, obj.lexical, obj.language or "", obj.datatype.value if obj.datatype else "")


def _ordered_predicates(graph: RdfGraph, subject: Subject) -> list[IRI]:
    predicates = sorted({p for _, p, _ in graph.triples(subject=subject)}, key=lambda p: p.value)
    rdf_type = RDF.term("type")
    if rdf_type in predicates:
        predicates.remove(rdf_type)
        predicates.insert(0, rdf_type)
    return predicates


def _qname(iri: IRI) -> Optional[str]:
    for prefix, base in PREFIXES.items():
        if iri.value.startswith(base):
            local = iri.value[len(base):]
            if _LOCAL_NAME.match(local):
                return f"{prefix}:{local}"
    return None


# --- Turtle ---------------------------------------------------------------

_TTL_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _ttl_quote(text: str) -> str:
    out = []
    for ch in text:
        if ch in _TTL_ESCAPES:
            out.append(_TTL_ESCAPES[ch])
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return '"' + "".join(out) + '"'


def _ttl_term(term: Object, labels: dict[BlankNode, str]) -> str:
    if isinstance(term, IRI):
        return _qname(term) or f"<{term.value}>"
    if isinstance(term, BlankNode):
        return f"_:{labels[term]}"
    quoted = _ttl_quote(term.lexical)
    if term.language:
        return f"{quoted}@{term.language}"
    if term.datatype:
        dt = _qname(term.datatype) or f"<{term.datatype.value}>"
        return f"{quoted}^^{dt}"
    return quoted


def _to_turtle(graph: RdfGraph) -> bytes:
    lines = [f"@prefix {prefix}: <{base}> ." for prefix, base in sorted(PREFIXES.items())]
    lines.append("")
    labels = _bnode_labels(graph)
    rdf_type = RDF.term("type")
    for subject in _ordered_subjects(graph, labels):
        subject_text = _ttl_term(subject, labels)
        predicate_parts = []
        for predicate in _ordered_predicates(graph, subject):
            objects = sorted(
                set(graph.objects(subject=subject, predicate=predicate)),
                key=lambda o: _object_sort_key(o, labels),
            )
            object_text = ", ".join(_ttl_term(o, labels) for o in objects)
            predicate_text = "a" if predicate == rdf_type else (_qname(predicate) or f"<{predicate.value}>")
            predicate_parts.append(f"{predicate_text} {object_text}")
        body = " ;\n    ".join(predicate_parts)
        lines.append(f"{subject_text} {body} .")
        lines.append("")
    if lines[-1] == "":
        lines.pop()
    return ("\n".join(lines) + "\n").encode("utf-8")


# --- RDF/XML --------------------------------------------------------------


def _xml_escape_text(text: str) -> str:
    out = []
    for ch in text:
        if ch == "&":
            out.append("&amp;")
        elif ch == "<":
            out.append("&lt;")
        elif ch == ">":
            out.append("&gt;")
        elif ch == "\r":
            out.append("&#xD;")
        elif ord(ch) < 0x20 and ch not in ("\t", "\n"):
            raise UnserializableGraph(f"control character {ch!r} cannot appear in XML content")
        else:
            out.append(ch)
    return "".join(out)


def _xml_escape_attr(text: str) -> str:
    return (
        _xml_escape_text(text)
        .replace('"', "&quot;")
        .replace("\n", "&#xA;")
        .replace("\t", "&#x9;")
    )


def _split_for_qname(iri: IRI, extra: dict[str, str]) -> str:
    """Map a predicate/type IRI onto an XML qname, inventing namespaces as needed."""
    known = _qname(iri)
    if known:
        return known
    value = iri.value
    for pos in range(len(value) - 1, 0, -1):
        if value[pos - 1] in "/#":
            local = value[pos:]
            if _NCNAME.match(local):
                base = value[:pos]
                for prefix, existing in extra.items():
                    if existing == base:
                        return f"{prefix}:{local}"
                prefix = f"ns{len(extra)}"
                extra[prefix] = base
                return f"{prefix}:{local}"
    raise UnserializableGraph(f"cannot derive an XML qname for {value!r}")


def _to_rdfxml(graph: RdfGraph) -> bytes:
    labels = _bnode_labels(graph)
    extra_ns: dict[str, str] = {}
    body_lines: list[str] = []
    for subject in _ordered_subjects(graph, labels):
        if isinstance(subject, IRI):
            opener = f'  <rdf:Description rdf:about="{_xml_escape_attr(subject.value)}">'
        else:
            opener = f'  <rdf:Description rdf:nodeID="{labels[subject]}">'
        body_lines.append(opener)
        for predicate in _ordered_predicates(graph, subject):
            qname = _split_for_qname(predicate, extra_ns)
            objects = sorted(
                set(graph.objects(subject=subject, predicate=predicate)),
                key=lambda o: _object_sort_key(o, labels),
            )
            for obj in objects:
                if isinstance(obj, IRI):
                    body_lines.append(f'    <{qname} rdf:resource="{_xml_escape_attr(obj.value)}"/>')
                elif isinstance(obj, BlankNode):
                    body_lines.append(f'    <{qname} rdf:nodeID="{labels[obj]}"/>')
                else:
                    attrs = ""
                    if obj.language:
                        attrs = f' xml:lang="{_xml_escape_attr(obj.language)}"'
                    elif obj.datatype:
                        attrs = f' rdf:datatype="{_xml_escape_attr(obj.datatype.value)}"'
                    body_lines.append(
                        f"    <{qname}{attrs}>{_xml_escape_text(obj.lexical)}</{qname}>"
                    )
        body_lines.append("  </rdf:Description>")
    ns_decls = [f'xmlns:{prefix}="{base}"' for prefix, base in sorted(PREFIXES.items())]
    ns_decls.extend(f'xmlns:{prefix}="{base}"' for prefix, base in sorted(extra_ns.items()))
    lines = [
        '<?xml version="1.0" encoding="utf-8"?>',
        "<rdf:RDF " + " ".join(ns_decls) + ">",
        *body_lines,
        "</rdf:RDF>",
    ]
    return ("\n".join(lines) + "\n").encode("utf-8")


# --- JSON-LD --------------------------------------------------------------


def _load_context() -> dict[str, str]:
    text = resources.files("bridgeld.rdfdata").joinpath("dcat_context.json").read_text("utf-8")
    return json.loads(text)["@context"]


_CONTEXT: Optional[dict[str, str]] = None


def _context() -> dict[str, str]:
    global _CONTEXT
    if _CONTEXT is None:
        _CONTEXT = _load_context()
    return _CONTEXT


def _compact(iri: IRI) -> str:
    for prefix, base in _context().items():
        if iri.value.startswith(base):
            local = iri.value[len(base):]
            if _LOCAL_NAME.match(local):
                return f"{prefix}:{local}"
    return iri.value


def _jsonld_node_id(subject: Subject, labels: dict[BlankNode, str]) -> str:
    if isinstance(subject, IRI):
        return subject.value
    return f"_:{labels[subject]}"


def _jsonld_value(obj: Object, labels: dict[BlankNode, str]) -> dict:
    if isinstance(obj, IRI):
        return {"@id": obj.value}
    if isinstance(obj, BlankNode):
        return {"@id": f"_:{labels[obj]}"}
    value: dict = {"@value": obj.lexical}
    if obj.language:
        value["@language"] = obj.language
    elif obj.datatype:
        value["@type"] = _compact(obj.datatype)
    return value


def _to_jsonld(graph: RdfGraph) -> bytes:
    labels = _bnode_labels(graph)
    rdf_type = RDF.term("type")
    nodes = []
    for subject in _ordered_subjects(graph, labels):
        node: dict = {"@id": _jsonld_node_id(subject, labels)}
        for predicate in _ordered_predicates(graph, subject):
            objects = sorted(
                set(graph.objects(subject=subject, predicate=predicate)),
                key=lambda o: _object_sort_key(o, labels),
            )
            if predicate == rdf_type:
                types = [o.value for o in objects if isinstance(o, IRI)]
                if types:
                    node["@type"] = types
                objects = [o for o in objects if not isinstance(o, IRI)]
                if not objects:
                    continue
            node[_compact(predicate)] = [_jsonld_value(o, labels) for o in objects]
        nodes.append(node)
    document = {"@context": dict(_context()), "@graph": nodes}
    return (json.dumps(document, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
