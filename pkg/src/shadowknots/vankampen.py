"""Fundamental groups of polyhedra encoded by decorated trees.

Each portion contributes its local generators and internal relators, each
edge equates the boundary words of the two slots it joins, a D slot
contributes the empty word and a B slot contributes a fresh boundary
generator.  On a tree no basepoint bookkeeping is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Dict, List, Mapping

from .egraph import PORTIONS, DecoratedGraph, VertexKind, validate
from .fpgroup import Presentation, Word, concat, inverse, rename


@dataclass(frozen=True)
class Pi1Result:
    presentation: Presentation
    boundary_classes: Mapping[str, str]


def boundary_names(g: DecoratedGraph) -> Dict[str, str]:
    """``gamma`` for the first B vertex by id, then ``gamma2``, ``gamma3``, ..."""
    names = {}
    for i, vid in enumerate(sorted(g.vertices_of_kind(VertexKind.B))):
        names[vid] = "gamma" if i == 0 else f"gamma{i + 1}"
    return names


def slot_word(g: DecoratedGraph, vid: str, slot: int, gamma: Mapping[str, str]) -> Word:
    kind = g.kind(vid)
    word = PORTIONS[kind].slots[slot].word
    if kind is VertexKind.B:
        return rename(word, {"g": gamma[vid]})
    return rename(word, {s: f"{s}_{vid}" for s in PORTIONS[kind].local_generators})


def pi1_tree(g: DecoratedGraph) -> Pi1Result:
    report = validate(g)
    if not report.ok:
        raise ValueError("cannot compute pi1: " + "; ".join(report.messages()))
    gamma = boundary_names(g)
    generators: List[str] = []
    relators: List[Word] = []
    for vid, kind in g.vertices.items():
        spec = PORTIONS[kind]
        if kind is VertexKind.B:
            generators.append(gamma[vid])
            continue
        local = {s: f"{s}_{vid}" for s in spec.local_generators}
        generators.extend(local.values())
        relators.extend(rename(r, local) for r in spec.relators)
    for e in g.edges.values():
        wa = slot_word(g, *e.end_a, gamma)
        wb = slot_word(g, *e.end_b, gamma)
        relators.append(concat(wa, wb) if e.invert else concat(wa, inverse(wb)))
    pres = Presentation(tuple(generators), tuple(relators))
    return Pi1Result(pres, MappingProxyType(dict(gamma)))


def boundary_class(r: Pi1Result, b: str) -> str:
    if b not in r.boundary_classes:
        raise KeyError(f"{b!r} is not a B vertex")
    return r.boundary_classes[b]
