"""Graph equality up to blank node renaming.

Ground triples are compared as sets; blank nodes are matched by iterated
signature refinement with a backtracking search over same-color candidates.
The graphs involved here are small, so the search is not tuned further.
"""

from __future__ import annotations

from typing import Union

from . import BlankNode, IRI, Literal, RdfGraph, Triple


def isomorphic(left: RdfGraph, right: RdfGraph) -> bool:
    if len(left) != len(right):
        return False
    ground_left, blank_left = _partition(left)
    ground_right, blank_right = _partition(right)
    if ground_left != ground_right:
        return False
    if len(blank_left) != len(blank_right):
        return False
    if not blank_left:
        return True
    colors_left = _refine(left)
    colors_right = _refine(right)
    if sorted(colors_left.values()) != sorted(colors_right.values()):
        return False
    nodes_left = sorted(colors_left, key=lambda b: (colors_left[b], b.label))
    nodes_right = list(colors_right)
    return _search(nodes_left, nodes_right, colors_left, colors_right, blank_left, blank_right)


def _partition(graph: RdfGraph) -> tuple[set[Triple], set[Triple]]:
    ground: set[Triple] = set()
    blank: set[Triple] = set()
    for triple in graph:
        s, _, o = triple
        if isinstance(s, BlankNode) or isinstance(o, BlankNode):
            blank.add(triple)
        else:
            ground.add(triple)
    return ground, blank


def _term_signature(term: Union[IRI, BlankNode, Literal], colors: dict[BlankNode, int]):
    if isinstance(term, BlankNode):
        return ("b", colors[term])
    if isinstance(term, IRI):
        return ("i", term.value)
    return ("l", term.lexical, term.language or "", term.datatype.value if term.datatype else "")


def _refine(graph: RdfGraph) -> dict[BlankNode, int]:
    bnodes = {term for s, _, o in graph for term in (s, o) if isinstance(term, BlankNode)}
    colors = {b: 0 for b in bnodes}
    for _ in range(len(bnodes) + 1):
        signatures = {}
        for b in bnodes:
            edges = []
            for s, p, o in graph:
                if s == b:
                    edges.append(("out", p.value, _term_signature(o, colors)))
                if o == b:
                    edges.append(("in", p.value, _term_signature(s, colors)))
            signatures[b] = (colors[b], tuple(sorted(edges)))
        ranks = {sig: rank for rank, sig in enumerate(sorted(set(signatures.values())))}
        refined = {b: ranks[signatures[b]] for b in bnodes}
        if refined == colors:
            break
        colors = refined
    return colors


def _search(
    nodes_left: list[BlankNode],
    nodes_right: list[BlankNode],
    colors_left: dict[BlankNode, int],
    colors_right: dict[BlankNode, int],
    triples_left: set[Triple],
    triples_right: set[Triple],
) -> bool:
    mapping: dict[BlankNode, BlankNode] = {}
    used: set[BlankNode] = set()

    def remap(term):
        return mapping[term] if isinstance(term, BlankNode) else term

    def assign(index: int) -> bool:
        if index == len(nodes_left):
            translated = {(remap(s), p, remap(o)) for s, p, o in triples_left}
            return translated == triples_right
        node = nodes_left[index]
        for candidate in nodes_right:
            if candidate in used or colors_right[candidate] != colors_left[node]:
                continue
            mapping[node] = candidate
            used.add(candidate)
            if assign(index + 1):
                return True
            del mapping[node]
            used.discard(candidate)
        return False

    return assign(0)
