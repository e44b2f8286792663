"""Decorated encoding graphs.

An encoding graph is a tree whose vertices are portions of a simple
polyhedron (disks, pairs of pants, neighbourhoods of triple lines and of
true vertices) glued along boundary circles.  Each vertex kind has an
ordered list of *slots*; an edge attaches one slot of one vertex to one slot
of another and carries a half-integer decoration (the gleam of the region it
crosses) and an orientation flag.

The module also provides the ``.egf`` text format, validation, D-closures
and a couple of tree utilities used by the classification code.
"""

from __future__ import annotations

import enum
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

from .fpgroup import Word, parse_word


# ---------------------------------------------------------------------------
# half-integers
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class HalfInt:
    """An exact half-integer stored as a count of halves."""

    units: int

    @classmethod
    def of(cls, value: Union["HalfInt", int, Fraction, str]) -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, bool):
            raise TypeError("booleans are not decorations")
        if isinstance(value, int):
            return cls(2 * value)
        if isinstance(value, str):
            try:
                value = Fraction(value.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"cannot read decoration {value!r}") from exc
        if isinstance(value, Fraction):
            doubled = value * 2
            if doubled.denominator != 1:
                raise ValueError("decoration must be half-integral")
            return cls(int(doubled))
        raise TypeError(f"cannot make a half-integer from {value!r}")

    @property
    def value(self) -> Fraction:
        return Fraction(self.units, 2)

    @property
    def is_integer(self) -> bool:
        return self.units % 2 == 0

    def __add__(self, other):
        other = HalfInt.of(other)
        return HalfInt(self.units + other.units)

    __radd__ = __add__

    def __sub__(self, other):
        other = HalfInt.of(other)
        return HalfInt(self.units - other.units)

    def __rsub__(self, other):
        return HalfInt.of(other) - self

    def __neg__(self):
        return HalfInt(-self.units)

    def __mul__(self, k: int):
        if not isinstance(k, int) or isinstance(k, bool):
            return NotImplemented
        return HalfInt(self.units * k)

    __rmul__ = __mul__

    def __str__(self) -> str:
        if self.units % 2 == 0:
            return str(self.units // 2)
        return f"{self.units}/2"

    def __repr__(self) -> str:
        return f"HalfInt({self})"


ZERO = HalfInt(0)


# ---------------------------------------------------------------------------
# portion catalogue
# ---------------------------------------------------------------------------

class VertexKind(str, enum.Enum):
    B = "B"
    D = "D"
    P = "P"
    Y2 = "Y2"
    Y3 = "Y3"
    Y12 = "Y12"
    Y111 = "Y111"
    X1 = "X1"
    X2 = "X2"
    X3 = "X3"
    X4 = "X4"
    X5 = "X5"
    X6 = "X6"
    X7 = "X7"
    X8 = "X8"
    X9 = "X9"
    X10 = "X10"
    X11 = "X11"

    def __str__(self) -> str:
        return self.value

    @property
    def is_x(self) -> bool:
        return self.value.startswith("X")

    @property
    def valency(self) -> int:
        return len(PORTIONS[self].slots)


@dataclass(frozen=True)
class Slot:
    word: Word
    length: int


@dataclass(frozen=True)
class PortionSpec:
    kind: VertexKind
    local_generators: Tuple[str, ...]
    slots: Tuple[Slot, ...]
    relators: Tuple[Word, ...] = ()

    @property
    def local_generator_count(self) -> int:
        return len(self.local_generators)


def _spec(kind: VertexKind, gens: str, words: Sequence[str], rels: Sequence[str] = (),
          lengths: Optional[Sequence[int]] = None) -> PortionSpec:
    parsed = [parse_word(w) for w in words]
    if lengths is None:
        lengths = [len(w) for w in parsed]
    slots = tuple(Slot(w, n) for w, n in zip(parsed, lengths))
    return PortionSpec(kind, tuple(gens.split()) if gens else (), slots,
                       tuple(parse_word(r) for r in rels))


K = VertexKind
PORTIONS: Mapping[VertexKind, PortionSpec] = MappingProxyType({
    # B carries the boundary class of the cut end; its local generator is
    # renamed to gamma, gamma2, ... when a presentation is assembled.
    K.B: _spec(K.B, "g", ["g"], lengths=[0]),
    K.D: _spec(K.D, "", ["1"], lengths=[0]),
    K.P: _spec(K.P, "x y z", ["x", "y", "z"], rels=["x*y*z"]),
    K.Y2: _spec(K.Y2, "x", ["x^2"], lengths=[2]),
    K.Y3: _spec(K.Y3, "x", ["x^3"]),
    K.Y12: _spec(K.Y12, "x", ["x", "x^2"]),
    K.Y111: _spec(K.Y111, "x", ["x", "x", "x"]),
    K.X1: _spec(K.X1, "x y", ["x*y*x^-2*y^-2"]),
    K.X2: _spec(K.X2, "x y", ["x*y*x^2*y^-2"]),
    K.X3: _spec(K.X3, "x y", ["y", "x*y*x^-2*y^-1"]),
    K.X4: _spec(K.X4, "x y", ["y", "x*y*x^-2*y"]),
    K.X5: _spec(K.X5, "x y", ["y", "x*y*x^2*y^-1"]),
    K.X6: _spec(K.X6, "x y", ["x*y", "x^2*y^-2"]),
    K.X7: _spec(K.X7, "x y", ["x*y^2", "x^2*y^-1"]),
    K.X8: _spec(K.X8, "x y", ["x*y*x^-1*y^-1", "x", "y"]),
    K.X9: _spec(K.X9, "x y", ["x*y*x*y^-1", "x", "y"]),
    K.X10: _spec(K.X10, "x y", ["y", "x*y", "x^2*y^-1"]),
    K.X11: _spec(K.X11, "x y", ["x", "y", "x*y", "x*y^-1"]),
})

FORBIDDEN_KINDS = frozenset({K.Y2, K.Y3, K.X1, K.X2, K.X5, K.X6, K.X7})


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------

End = Tuple[str, int]


@dataclass(frozen=True)
class Edge:
    end_a: End
    end_b: End
    decoration: HalfInt = ZERO
    invert: bool = False

    def __post_init__(self):
        object.__setattr__(self, "end_a", (str(self.end_a[0]), int(self.end_a[1])))
        object.__setattr__(self, "end_b", (str(self.end_b[0]), int(self.end_b[1])))
        object.__setattr__(self, "decoration", HalfInt.of(self.decoration))

    @property
    def ends(self) -> Tuple[End, End]:
        return (self.end_a, self.end_b)

    def other(self, vid: str) -> End:
        if self.end_a[0] == vid:
            return self.end_b
        if self.end_b[0] == vid:
            return self.end_a
        raise KeyError(vid)

    def end_at(self, vid: str) -> End:
        if self.end_a[0] == vid:
            return self.end_a
        if self.end_b[0] == vid:
            return self.end_b
        raise KeyError(vid)


class DecoratedGraph:
    """An immutable decorated encoding graph."""

    __slots__ = ("_vertices", "_edges", "_incidence")

    def __init__(self, vertices: Mapping[str, Union[VertexKind, str]],
                 edges: Mapping[str, Edge]):
        self._vertices = MappingProxyType(
            {str(v): VertexKind(k) for v, k in sorted(vertices.items())})
        self._edges = MappingProxyType(dict(sorted(edges.items())))
        inc: Dict[str, List[str]] = {v: [] for v in self._vertices}
        for eid, e in self._edges.items():
            for vid, _ in e.ends:
                inc.setdefault(vid, []).append(eid)
        self._incidence = MappingProxyType({v: tuple(es) for v, es in inc.items()})

    @property
    def vertices(self) -> Mapping[str, VertexKind]:
        return self._vertices

    @property
    def edges(self) -> Mapping[str, Edge]:
        return self._edges

    def kind(self, vid: str) -> VertexKind:
        return self._vertices[vid]

    def incident(self, vid: str) -> Tuple[str, ...]:
        return self._incidence.get(vid, ())

    def edge_at(self, vid: str, slot: int) -> Optional[str]:
        for eid in self.incident(vid):
            e = self._edges[eid]
            for end in e.ends:
                if end == (vid, slot):
                    return eid
        return None

    def neighbors(self, vid: str) -> List[str]:
        out = []
        for eid in self.incident(vid):
            e = self._edges[eid]
            a, b = e.end_a[0], e.end_b[0]
            out.append(b if a == vid else a)
        return out

    def vertices_of_kind(self, *kinds: VertexKind) -> List[str]:
        return [v for v, k in self._vertices.items() if k in kinds]

    def replace(self, vertices: Optional[Mapping[str, VertexKind]] = None,
                edges: Optional[Mapping[str, Edge]] = None) -> "DecoratedGraph":
        return DecoratedGraph(self._vertices if vertices is None else vertices,
                              self._edges if edges is None else edges)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DecoratedGraph):
            return NotImplemented
        return dict(self._vertices) == dict(other._vertices) and \
            dict(self._edges) == dict(other._edges)

    def __hash__(self) -> int:
        return hash((tuple(self._vertices.items()), tuple(self._edges.items())))

    def __repr__(self) -> str:
        return f"DecoratedGraph({len(self._vertices)} vertices, {len(self._edges)} edges)"

    def component_of(self, vid: str, skip_edges: Iterable[str] = ()) -> Set[str]:
        """Vertices reachable from ``vid`` without crossing ``skip_edges``."""
        skip = set(skip_edges)
        seen = {vid}
        todo = [vid]
        while todo:
            v = todo.pop()
            for eid in self.incident(v):
                if eid in skip:
                    continue
                e = self._edges[eid]
                for w, _ in e.ends:
                    if w not in seen and w in self._vertices:
                        seen.add(w)
                        todo.append(w)
        return seen

    def is_tree(self) -> bool:
        if not self._vertices:
            return False
        if len(self._edges) != len(self._vertices) - 1:
            return False
        first = next(iter(self._vertices))
        return len(self.component_of(first)) == len(self._vertices)


class GraphBuilder:
    """Incremental construction helper with automatic ids."""

    def __init__(self):
        self.vertices: Dict[str, VertexKind] = {}
        self.edges: Dict[str, Edge] = {}
        self._counter = 0

    def fresh(self, prefix: str) -> str:
        while True:
            self._counter += 1
            name = f"{prefix}{self._counter}"
            if name not in self.vertices and name not in self.edges:
                return name

    def vertex(self, kind: Union[VertexKind, str], vid: Optional[str] = None) -> str:
        kind = VertexKind(kind)
        vid = vid or self.fresh(kind.value.lower())
        if vid in self.vertices:
            raise ValueError(f"duplicate vertex id {vid!r}")
        self.vertices[vid] = kind
        return vid

    def edge(self, a: End, b: End, decoration=0, invert: bool = False,
             eid: Optional[str] = None) -> str:
        eid = eid or self.fresh("e")
        if eid in self.edges:
            raise ValueError(f"duplicate edge id {eid!r}")
        self.edges[eid] = Edge(a, b, HalfInt.of(decoration), invert)
        return eid

    def build(self) -> DecoratedGraph:
        return DecoratedGraph(self.vertices, self.edges)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Finding:
    severity: str
    code: str
    message: str
    site: Optional[str] = None


@dataclass(frozen=True)
class ValidationReport:
    findings: Tuple[Finding, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.findings

    @property
    def errors(self) -> List[Finding]:
        return [f for f in self.findings if f.severity == "error"]

    def codes(self) -> List[str]:
        return [f.code for f in self.findings]

    def messages(self) -> List[str]:
        return [f.message for f in self.findings]


def _y12_pairs_through_pants(g: DecoratedGraph) -> List[Tuple[str, str]]:
    """Pairs of Y12 vertices whose length-1 slots face each other.

    The two are either joined directly through their slot-0 edges or through
    a path of P vertices only.  The D-closure of such a subgraph is an
    annulus (or a chain of pants capped to an annulus) with two Y12 ends,
    whose fundamental group is Z/2.
    """
    found = []
    for v in sorted(g.vertices_of_kind(K.Y12)):
        eid = g.edge_at(v, 0)
        if eid is None:
            continue
        # walk outward through P vertices, branching at each
        stack = [(g.edges[eid].other(v), eid)]
        seen = {v}
        while stack:
            (w, slot), via = stack.pop()
            if w in seen or w not in g.vertices:
                continue
            seen.add(w)
            kind = g.kind(w)
            if kind is K.Y12:
                if slot == 0 and v < w:
                    found.append((v, w))
                continue
            if kind is K.P:
                for nxt in g.incident(w):
                    if nxt != via:
                        stack.append((g.edges[nxt].other(w), nxt))
    return found


def validate(g: DecoratedGraph, strict_simply_connected: bool = False) -> ValidationReport:
    """Check slot usage, tree shape and (optionally) simple-connectivity exclusions."""
    findings: List[Finding] = []
    used: Dict[End, str] = {}
    for eid, e in g.edges.items():
        if e.end_a[0] == e.end_b[0]:
            findings.append(Finding("error", "self-loop",
                                    f"edge {eid} joins vertex {e.end_a[0]} to itself", eid))
        for vid, slot in e.ends:
            if vid not in g.vertices:
                findings.append(Finding("error", "unknown-vertex",
                                        f"edge {eid} uses unknown vertex {vid}", eid))
                continue
            kind = g.kind(vid)
            if not 0 <= slot < kind.valency:
                findings.append(Finding(
                    "error", "slot-out-of-range",
                    f"slot {slot} out of range ({kind} has {kind.valency})", eid))
                continue
            if (vid, slot) in used:
                findings.append(Finding(
                    "error", "duplicate-slot",
                    f"slot {vid}:{slot} used by edges {used[(vid, slot)]} and {eid}", eid))
            else:
                used[(vid, slot)] = eid
    for vid, kind in g.vertices.items():
        for slot in range(kind.valency):
            if (vid, slot) not in used:
                findings.append(Finding("error", "unused-slot",
                                        f"slot {vid}:{slot} is not attached", vid))
    if g.vertices:
        first = next(iter(g.vertices))
        if len(g.component_of(first)) != len(g.vertices):
            findings.append(Finding("error", "disconnected", "graph is not connected"))
        elif len(g.edges) != len(g.vertices) - 1:
            findings.append(Finding("error", "not-a-tree", "graph has a cycle (not a tree)"))
    else:
        findings.append(Finding("error", "empty", "graph has no vertices"))
    if strict_simply_connected:
        for vid, kind in g.vertices.items():
            if kind in FORBIDDEN_KINDS:
                findings.append(Finding("error", "forbidden-kind",
                                        f"forbidden-kind {kind}", vid))
        for v, w in _y12_pairs_through_pants(g):
            findings.append(Finding(
                "error", "forbidden-pattern",
                f"forbidden-pattern Y12 vertices {v} and {w} face each other "
                f"through their length-1 slots", v))
    return ValidationReport(tuple(findings))


# ---------------------------------------------------------------------------
# .egf format
# ---------------------------------------------------------------------------

class EgfSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


_ID = r"[A-Za-z0-9_.~@+-]+"
_VERTEX_RE = re.compile(rf"vertex\s+({_ID})\s+(\S+)\s*$")
_EDGE_RE = re.compile(
    rf"edge\s+({_ID})\s+({_ID}):(\S+)\s+({_ID}):(\S+)\s+gleam=(\S+)(\s+invert)?\s*$")


def parse_egf(text: str) -> DecoratedGraph:
    vertices: Dict[str, VertexKind] = {}
    edges: Dict[str, Edge] = {}
    used: Dict[End, str] = {}
    pending: List[Tuple[int, str, str, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.lstrip()
        if not stripped:
            continue
        col = len(line) - len(stripped) + 1
        if stripped.startswith("vertex"):
            m = _VERTEX_RE.match(stripped)
            if not m:
                raise EgfSyntaxError("expected 'vertex <id> <KIND>'", lineno, col)
            vid, kind = m.group(1), m.group(2)
            try:
                vertices_kind = VertexKind(kind)
            except ValueError:
                raise EgfSyntaxError(f"unknown kind {kind!r}", lineno,
                                     col + stripped.index(kind, 7)) from None
            if vid in vertices:
                raise EgfSyntaxError(f"duplicate vertex id {vid!r}", lineno, col)
            vertices[vid] = vertices_kind
        elif stripped.startswith("edge"):
            m = _EDGE_RE.match(stripped)
            if not m:
                raise EgfSyntaxError(
                    "expected 'edge <id> <v>:<slot> <v>:<slot> gleam=<p>[/2] [invert]'",
                    lineno, col)
            eid = m.group(1)
            if eid in edges:
                raise EgfSyntaxError(f"duplicate edge id {eid!r}", lineno, col)
            ends = []
            for gi in (2, 4):
                vid, slot_text = m.group(gi), m.group(gi + 1)
                if not re.fullmatch(r"\d+", slot_text):
                    raise EgfSyntaxError(f"bad slot index {slot_text!r}", lineno,
                                         col + m.start(gi + 1))
                ends.append((vid, int(slot_text)))
                pending.append((lineno, eid, vid, int(slot_text), col + m.start(gi)))
            gtext = m.group(6)
            if not re.fullmatch(r"[+-]?\d+(/\d+)?", gtext):
                raise EgfSyntaxError(f"bad decoration {gtext!r}", lineno, col + m.start(6))
            try:
                dec = HalfInt.of(Fraction(gtext))
            except ValueError:
                raise EgfSyntaxError("decoration must be half-integral", lineno,
                                     col + m.start(6)) from None
            edges[eid] = Edge(ends[0], ends[1], dec, bool(m.group(7)))
        else:
            raise EgfSyntaxError(f"unknown directive {stripped.split()[0]!r}", lineno, col)
    for lineno, eid, vid, slot, col in pending:
        if vid not in vertices:
            raise EgfSyntaxError(f"unknown vertex {vid!r}", lineno, col)
        kind = vertices[vid]
        if not 0 <= slot < kind.valency:
            raise EgfSyntaxError(f"slot {slot} out of range ({kind} has {kind.valency})",
                                 lineno, col)
        if (vid, slot) in used:
            raise EgfSyntaxError(
                f"duplicate slot use {vid}:{slot} (edges {used[(vid, slot)]} and {eid})",
                lineno, col)
        used[(vid, slot)] = eid
    return DecoratedGraph(vertices, edges)


def serialize_egf(g: DecoratedGraph) -> str:
    lines = [f"vertex {v} {k}" for v, k in sorted(g.vertices.items())]
    for eid, e in sorted(g.edges.items()):
        flag = " invert" if e.invert else ""
        lines.append(f"edge {eid} {e.end_a[0]}:{e.end_a[1]} {e.end_b[0]}:{e.end_b[1]} "
                     f"gleam={e.decoration}{flag}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# tree utilities
# ---------------------------------------------------------------------------

def d_closure(g: DecoratedGraph, keep: Iterable[str]) -> DecoratedGraph:
    """Cap every edge leaving ``keep`` with a fresh D vertex."""
    keep = set(keep)
    unknown = keep - set(g.vertices)
    if unknown:
        raise ValueError(f"unknown vertices {sorted(unknown)}")
    if not keep:
        raise ValueError("keep must be nonempty")
    if keep == set(g.vertices):
        raise ValueError("keep is the whole graph; nothing to close")
    start = next(iter(sorted(keep)))
    reach = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for w in g.neighbors(v):
            if w in keep and w not in reach:
                reach.add(w)
                todo.append(w)
    if reach != keep:
        raise ValueError("keep does not induce a connected subgraph")
    taken = set(g.vertices) | set(g.edges)
    vertices = {v: g.kind(v) for v in keep}
    edges: Dict[str, Edge] = {}
    for eid, e in g.edges.items():
        ina, inb = e.end_a[0] in keep, e.end_b[0] in keep
        if ina and inb:
            edges[eid] = e
        elif ina or inb:
            cap = f"{eid}.D"
            while cap in taken:
                cap += "_"
            taken.add(cap)
            vertices[cap] = K.D
            if ina:
                edges[eid] = Edge(e.end_a, (cap, 0), e.decoration, e.invert)
            else:
                edges[eid] = Edge((cap, 0), e.end_b, e.decoration, e.invert)
    return DecoratedGraph(vertices, edges)


@dataclass(frozen=True)
class Path:
    vertices: Tuple[str, ...]
    edges: Tuple[str, ...]

    def __len__(self) -> int:
        return len(self.edges)


def geodesic(g: DecoratedGraph, v: str, w: str) -> Path:
    """The unique simple path from ``v`` to ``w`` in the tree ``g``."""
    for x in (v, w):
        if x not in g.vertices:
            raise KeyError(f"unknown vertex {x!r}")
    if v == w:
        raise ValueError("geodesic needs two distinct vertices")
    parent: Dict[str, Tuple[str, str]] = {}
    seen = {v}
    queue = deque([v])
    while queue:
        x = queue.popleft()
        if x == w:
            break
        for eid in g.incident(x):
            y = g.edges[eid].other(x)[0]
            if y not in seen:
                seen.add(y)
                parent[y] = (x, eid)
                queue.append(y)
    if w not in seen:
        raise ValueError(f"{v} and {w} lie in different components")
    verts, edges = [w], []
    x = w
    while x != v:
        x, eid = parent[x]
        verts.append(x)
        edges.append(eid)
    return Path(tuple(reversed(verts)), tuple(reversed(edges)))


def one_sided_y12_count(g: DecoratedGraph, frm: str, to: str) -> int:
    """Number of Y12 vertices strictly between ``frm`` and ``to`` entered via slot 0."""
    if frm == to:
        return 0
    path = geodesic(g, frm, to)
    count = 0
    for i in range(1, len(path.vertices) - 1):
        vid = path.vertices[i]
        if g.kind(vid) is not K.Y12:
            continue
        entry = g.edges[path.edges[i - 1]].end_at(vid)
        if entry[1] == 0:
            count += 1
    return count
