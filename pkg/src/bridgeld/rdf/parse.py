"""Parsers for the serialized RDF syntaxes.

Written against the syntax rules, not against the serializer, so a round-trip
through these checks real output bytes. Covers the subsets of Turtle, RDF/XML
and JSON-LD the suite exchanges; unsupported constructs raise ParseError.
"""

from __future__ import annotations

import json
import re
import xml.etree.ElementTree as ET
from typing import Optional, Union

from . import RDF, XSD, BlankNode, IRI, Literal, Object, RdfGraph, Subject
from .serialize import UnknownFormat

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
XML_NS = "http://www.w3.org/XML/1998/namespace"


class ParseError(ValueError):
    """Input is not well-formed in the declared syntax."""


def parse_graph(data: Union[bytes, str], fmt: str) -> RdfGraph:
    if fmt not in ("ttl", "n3", "rdf", "xml", "jsonld"):
        raise UnknownFormat(f"no parser for format {fmt!r}")
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from None
    if fmt in ("ttl", "n3"):
        return TurtleParser(data).parse()
    if fmt in ("rdf", "xml"):
        return _parse_rdfxml(data)
    return _parse_jsonld(data)


# --- Turtle ---------------------------------------------------------------

_PN_LOCAL = re.compile(r"[A-Za-z0-9_.%:\-]*")
_LANGTAG = re.compile(r"[a-zA-Z]+(-[a-zA-Z0-9]+)*")
_NUMBER = re.compile(r"[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?")
_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


class TurtleParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.prefixes: dict[str, str] = {}
        self.bnodes: dict[str, BlankNode] = {}
        self.anon = 0
        self.graph = RdfGraph()

    def parse(self) -> RdfGraph:
        self._skip_ws()
        while self.pos < len(self.text):
            if self._try_literal_token("@prefix"):
                self._prefix_decl()
            elif self._try_literal_token("@base"):
                raise ParseError("@base is not supported; use absolute IRIs")
            else:
                subject = self._subject()
                self._predicate_object_list(subject)
                self._expect(".")
            self._skip_ws()
        return self.graph

    # scanning helpers

    def _skip_ws(self) -> None:
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in " \t\r\n":
                self.pos += 1
            elif ch == "#":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self.pos += 1
            else:
                return

    def _fail(self, message: str):
        line = self.text.count("\n", 0, self.pos) + 1
        raise ParseError(f"line {line}: {message}")

    def _peek(self) -> str:
        if self.pos >= len(self.text):
            self._fail("unexpected end of input")
        return self.text[self.pos]

    def _expect(self, token: str) -> None:
        self._skip_ws()
        if not self.text.startswith(token, self.pos):
            self._fail(f"expected {token!r}")
        self.pos += len(token)

    def _try_literal_token(self, token: str) -> bool:
        if self.text.startswith(token, self.pos):
            after = self.pos + len(token)
            if after >= len(self.text) or self.text[after] in " \t\r\n":
                self.pos = after
                return True
        return False

    # productions

    def _prefix_decl(self) -> None:
        self._skip_ws()
        colon = self.text.find(":", self.pos)
        if colon < 0:
            self._fail("malformed @prefix")
        name = self.text[self.pos:colon]
        self.pos = colon + 1
        self._skip_ws()
        iri = self._iriref()
        self.prefixes[name] = iri.value
        self._expect(".")

    def _iriref(self) -> IRI:
        if self._peek() != "<":
            self._fail("expected IRI")
        end = self.text.find(">", self.pos)
        if end < 0:
            self._fail("unterminated IRI")
        raw = self.text[self.pos + 1:end]
        self.pos = end + 1
        raw = re.sub(r"\\u([0-9A-Fa-f]{4})", lambda m: chr(int(m.group(1), 16)), raw)
        raw = re.sub(r"\\U([0-9A-Fa-f]{8})", lambda m: chr(int(m.group(1), 16)), raw)
        return IRI(raw)

    def _pname(self) -> IRI:
        colon = self.text.find(":", self.pos)
        if colon < 0:
            self._fail("expected prefixed name")
        prefix = self.text[self.pos:colon]
        if prefix not in self.prefixes:
            self._fail(f"undeclared prefix {prefix!r}")
        match = _PN_LOCAL.match(self.text, colon + 1)
        local = match.group(0)
        # trailing dots belong to the statement terminator, not the name
        while local.endswith("."):
            local = local[:-1]
        self.pos = colon + 1 + len(local)
        return IRI(self.prefixes[prefix] + local)

    def _blank(self) -> BlankNode:
        self.pos += 2
        match = _PN_LOCAL.match(self.text, self.pos)
        label = match.group(0)
        while label.endswith("."):
            label = label[:-1]
        if not label:
            self._fail("blank node label missing")
        self.pos += len(label)
        if label not in self.bnodes:
            self.bnodes[label] = BlankNode(f"p{label}")
        return self.bnodes[label]

    def _fresh_bnode(self) -> BlankNode:
        self.anon += 1
        return BlankNode(f"anon{self.anon}")

    def _subject(self) -> Subject:
        self._skip_ws()
        ch = self._peek()
        if ch == "<":
            return self._iriref()
        if self.text.startswith("_:", self.pos):
            return self._blank()
        if ch == "[":
            return self._bnode_property_list()
        if ch == "(":
            return self._collection()
        return self._pname()

    def _predicate_object_list(self, subject: Subject) -> None:
        while True:
            self._skip_ws()
            predicate = self._predicate()
            while True:
                obj = self._object()
                self.graph.add(subject, predicate, obj)
                self._skip_ws()
                if self._peek() == ",":
                    self.pos += 1
                else:
                    break
            self._skip_ws()
            if self._peek() == ";":
                self.pos += 1
                self._skip_ws()
                # a dangling ; right before . or ] is allowed
                if self._peek() in ".]":
                    return
            else:
                return

    def _predicate(self) -> IRI:
        if self._try_literal_token("a"):
            return RDF.term("type")
        if self._peek() == "<":
            return self._iriref()
        return self._pname()

    def _object(self) -> Object:
        self._skip_ws()
        ch = self._peek()
        if ch == "<":
            return self._iriref()
        if self.text.startswith("_:", self.pos):
            return self._blank()
        if ch == "[":
            return self._bnode_property_list()
        if ch == "(":
            return self._collection()
        if ch in "\"'":
            return self._literal()
        if ch.isdigit() or ch in "+-." and _NUMBER.match(self.text, self.pos):
            return self._number()
        if self._try_literal_token("true"):
            return Literal("true", datatype=XSD.term("boolean"))
        if self._try_literal_token("false"):
            return Literal("false", datatype=XSD.term("boolean"))
        return self._pname()

    def _bnode_property_list(self) -> BlankNode:
        self.pos += 1
        node = self._fresh_bnode()
        self._skip_ws()
        if self._peek() == "]":
            self.pos += 1
            return node
        self._predicate_object_list(node)
        self._expect("]")
        return node

    def _collection(self) -> Subject:
        self.pos += 1
        items = []
        while True:
            self._skip_ws()
            if self._peek() == ")":
                self.pos += 1
                break
            items.append(self._object())
        nil = RDF.term("nil")
        if not items:
            return nil
        first = RDF.term("first")
        rest = RDF.term("rest")
        head = self._fresh_bnode()
        node = head
        for index, item in enumerate(items):
            self.graph.add(node, first, item)
            if index + 1 < len(items):
                nxt = self._fresh_bnode()
                self.graph.add(node, rest, nxt)
                node = nxt
            else:
                self.graph.add(node, rest, nil)
        return head

    def _string_body(self) -> str:
        quote = self.text[self.pos]
        long_quote = quote * 3
        if self.text.startswith(long_quote, self.pos):
            terminator, self.pos = long_quote, self.pos + 3
        else:
            terminator, self.pos = quote, self.pos + 1
        out = []
        while True:
            if self.pos >= len(self.text):
                self._fail("unterminated string")
            if self.text.startswith(terminator, self.pos):
                if len(terminator) == 1 or not self.text.startswith(quote, self.pos + 3):
                    self.pos += len(terminator)
                    return "".join(out)
            ch = self.text[self.pos]
            if ch == "\\":
                esc = self.text[self.pos + 1]
                if esc == "u":
                    out.append(chr(int(self.text[self.pos + 2:self.pos + 6], 16)))
                    self.pos += 6
                elif esc == "U":
                    out.append(chr(int(self.text[self.pos + 2:self.pos + 10], 16)))
                    self.pos += 10
                elif esc in _ESCAPES:
                    out.append(_ESCAPES[esc])
                    self.pos += 2
                else:
                    self._fail(f"bad escape \\{esc}")
            else:
                if len(terminator) == 1 and ch in "\n\r":
                    self._fail("newline in short string")
                out.append(ch)
                self.pos += 1

    def _literal(self) -> Literal:
        lexical = self._string_body()
        if self.text.startswith("@", self.pos):
            match = _LANGTAG.match(self.text, self.pos + 1)
            if not match:
                self._fail("malformed language tag")
            self.pos = match.end()
            return Literal(lexical, language=match.group(0))
        if self.text.startswith("^^", self.pos):
            self.pos += 2
            datatype = self._iriref() if self._peek() == "<" else self._pname()
            return Literal(lexical, datatype=datatype)
        return Literal(lexical)

    def _number(self) -> Literal:
        match = _NUMBER.match(self.text, self.pos)
        if not match:
            self._fail("malformed number")
        raw = match.group(0)
        self.pos = match.end()
        if "e" in raw.lower():
            return Literal(raw, datatype=XSD.term("double"))
        if "." in raw:
            return Literal(raw, datatype=XSD.term("decimal"))
        return Literal(raw, datatype=XSD.term("integer"))


# --- RDF/XML --------------------------------------------------------------


def _split_tag(tag: str) -> IRI:
    if not tag.startswith("{"):
        raise ParseError(f"unqualified XML name {tag!r}")
    namespace, local = tag[1:].split("}", 1)
    return IRI(namespace + local)


class _XmlState:
    def __init__(self):
        self.graph = RdfGraph()
        self.bnodes: dict[str, BlankNode] = {}
        self.anon = 0

    def labeled(self, node_id: str) -> BlankNode:
        if node_id not in self.bnodes:
            self.bnodes[node_id] = BlankNode(f"p{node_id}")
        return self.bnodes[node_id]

    def fresh(self) -> BlankNode:
        self.anon += 1
        return BlankNode(f"anon{self.anon}")


def _parse_rdfxml(data: str) -> RdfGraph:
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise ParseError(f"not well-formed XML: {exc}") from exc
    state = _XmlState()
    if root.tag == f"{{{RDF_NS}}}RDF":
        children = list(root)
    else:
        children = [root]
    lang = root.get(f"{{{XML_NS}}}lang")
    for child in children:
        _xml_node_element(child, state, lang)
    return state.graph


def _xml_node_element(el: ET.Element, state: _XmlState, lang: Optional[str]) -> Subject:
    lang = el.get(f"{{{XML_NS}}}lang", lang)
    about = el.get(f"{{{RDF_NS}}}about")
    node_id = el.get(f"{{{RDF_NS}}}nodeID")
    if about is not None:
        subject: Subject = IRI(about)
    elif node_id is not None:
        subject = state.labeled(node_id)
    else:
        subject = state.fresh()
    type_iri = _split_tag(el.tag)
    if type_iri.value != RDF_NS + "Description":
        state.graph.add(subject, RDF.term("type"), type_iri)
    for name, value in el.attrib.items():
        if name.startswith(f"{{{RDF_NS}}}") or name.startswith(f"{{{XML_NS}}}"):
            continue
        state.graph.add(subject, _split_tag(name), Literal(value, language=lang))
    for child in el:
        _xml_property_element(subject, child, state, lang)
    return subject


def _xml_property_element(subject: Subject, el: ET.Element, state: _XmlState, lang: Optional[str]) -> None:
    lang = el.get(f"{{{XML_NS}}}lang", lang)
    predicate = _split_tag(el.tag)
    resource = el.get(f"{{{RDF_NS}}}resource")
    node_id = el.get(f"{{{RDF_NS}}}nodeID")
    parse_type = el.get(f"{{{RDF_NS}}}parseType")
    datatype = el.get(f"{{{RDF_NS}}}datatype")
    if resource is not None:
        state.graph.add(subject, predicate, IRI(resource))
        return
    if node_id is not None:
        state.graph.add(subject, predicate, state.labeled(node_id))
        return
    if parse_type == "Resource":
        inner = state.fresh()
        state.graph.add(subject, predicate, inner)
        for child in el:
            _xml_property_element(inner, child, state, lang)
        return
    if parse_type is not None:
        raise ParseError(f"unsupported parseType {parse_type!r}")
    children = list(el)
    if children:
        if len(children) != 1:
            raise ParseError("property element with multiple node children")
        obj = _xml_node_element(children[0], state, lang)
        state.graph.add(subject, predicate, obj)
        return
    text = el.text or ""
    if datatype is not None:
        state.graph.add(subject, predicate, Literal(text, datatype=IRI(datatype)))
    else:
        state.graph.add(subject, predicate, Literal(text, language=lang))


# --- JSON-LD --------------------------------------------------------------

_ABSOLUTE = re.compile(r"^[A-Za-z][A-Za-z0-9+.-]*:")


def _parse_jsonld(data: str) -> RdfGraph:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    context: dict[str, str] = {}
    if isinstance(doc, dict) and "@context" in doc:
        raw = doc["@context"]
        if not isinstance(raw, dict):
            raise ParseError("only inline object @context is supported")
        for term, value in raw.items():
            if isinstance(value, str):
                context[term] = value
            elif isinstance(value, dict) and isinstance(value.get("@id"), str):
                context[term] = value["@id"]
    if isinstance(doc, list):
        nodes = doc
    elif "@graph" in doc:
        nodes = doc["@graph"]
    else:
        nodes = [doc]
    state = _XmlState()
    for node in nodes:
        _jsonld_node(node, context, state)
    return state.graph


def _jsonld_expand(term: str, context: dict[str, str]) -> Optional[str]:
    if term in context:
        return context[term]
    if ":" in term:
        prefix, local = term.split(":", 1)
        if prefix in context:
            return context[prefix] + local
    if _ABSOLUTE.match(term):
        return term
    return None


def _jsonld_subject(term: str, state: _XmlState) -> Subject:
    if term.startswith("_:"):
        return state.labeled(term[2:])
    return IRI(term)


def _jsonld_node(node: dict, context: dict[str, str], state: _XmlState) -> Subject:
    if not isinstance(node, dict):
        raise ParseError("graph entries must be node objects")
    if "@id" in node:
        subject = _jsonld_subject(node["@id"], state)
    else:
        subject = state.fresh()
    for key, raw in node.items():
        if key in ("@id", "@context"):
            continue
        if key == "@type":
            values = raw if isinstance(raw, list) else [raw]
            for value in values:
                expanded = _jsonld_expand(value, context)
                if expanded is None:
                    raise ParseError(f"cannot expand type {value!r}")
                state.graph.add(subject, RDF.term("type"), IRI(expanded))
            continue
        expanded = _jsonld_expand(key, context)
        if expanded is None:
            continue
        predicate = IRI(expanded)
        values = raw if isinstance(raw, list) else [raw]
        for value in values:
            state.graph.add(subject, predicate, _jsonld_object(value, context, state))
    return subject


def _jsonld_object(value, context: dict[str, str], state: _XmlState) -> Object:
    if isinstance(value, str):
        return Literal(value)
    if isinstance(value, bool):
        return Literal("true" if value else "false", datatype=XSD.term("boolean"))
    if isinstance(value, int):
        return Literal(str(value), datatype=XSD.term("integer"))
    if isinstance(value, float):
        return Literal(repr(value), datatype=XSD.term("double"))
    if not isinstance(value, dict):
        raise ParseError(f"unsupported JSON-LD value {value!r}")
    if "@value" in value:
        lexical = value["@value"]
        if not isinstance(lexical, str):
            return _jsonld_object(lexical, context, state)
        if "@language" in value:
            return Literal(lexical, language=value["@language"])
        if "@type" in value:
            expanded = _jsonld_expand(value["@type"], context)
            if expanded is None:
                raise ParseError(f"cannot expand datatype {value['@type']!r}")
            return Literal(lexical, datatype=IRI(expanded))
        return Literal(lexical)
    if set(value) <= {"@id"}:
        return _jsonld_subject(value["@id"], state)
    # embedded node with its own properties
    return _jsonld_node(value, context, state)
