"""Banded unlink diagrams and the shadows built from them.

A diagram is stored as a combinatorial planar map of the graph Gamma formed
by the unlink L and the band cores.  Nodes are crossings (four darts, one
opposite pair marked as the over strand), band ends (three darts: two on L,
one on a core) and bivalent helper points.  Every arc pairs two darts and is
labelled ``C<i>`` (component i of L) or ``B<j>`` (core of band j).  Cores
may cross each other and may cross L; two arcs of L never cross.

From the map we compute the shadow obtained by projecting Gamma to a disk
D0 and coning: its true vertices, the regions and their gleams, the
components of the resolved link L_b, an upper bound for the
shadow-complexity by collapsing from the boundary region, and the group of
the ribbon surface.

Conventions (rotations are counterclockwise):

* Faces are traced with ``next(d) = prev_ccw(alpha(d))``, which keeps the
  face on the left of each dart; the face of a dart ``x`` owns the corner
  between ``x`` and ``next_ccw(x)``.
* The disk D_i of component C<i> is the set of faces on the side of C<i>
  away from the outer face.  C<i> is oriented with D_i on its left.
* A crossing gives +1/2 to a corner running counterclockwise from an over
  dart to an under dart and -1/2 to the other two corners.
* ``twist B<j> h`` counts signed half twists of band j; its rectangle
  region has gleam ``h`` and each half twist is one crossing of sign
  ``sign(h)`` between the two band edges.
* Band edges carry the boundary orientation of the surface D_1..D_m plus
  bands, so the two edges of a band run antiparallel.
"""

from __future__ import annotations

import enum
import math
import random
import re
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .egraph import HalfInt
from .fpgroup import Presentation, concat, gen, inverse

_LABEL = re.compile(r"^(C|B)(\d+)$")


class BudError(ValueError):
    """An invalid map or diagram; ``site`` names the offending node, dart or label."""

    def __init__(self, message: str, site: Optional[str] = None, line: Optional[int] = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if site is not None:
            where.append(site)
        super().__init__(f"{': '.join(where)}: {message}" if where else message)
        self.message = message
        self.site = site
        self.line = line


class NodeKind(str, enum.Enum):
    CROSSING = "crossing"
    BANDEND = "bandend"
    POINT = "point"

    @property
    def degree(self) -> int:
        return {"crossing": 4, "bandend": 3, "point": 2}[self.value]


@dataclass(frozen=True)
class Node:
    nid: str
    kind: NodeKind
    rotation: Tuple[str, ...]
    over: Optional[Tuple[str, str]] = None


# ---------------------------------------------------------------------------
# combinatorial maps
# ---------------------------------------------------------------------------

class CombinatorialMap:
    """Rotation system plus dart pairing, with arc labels and an outer-face hint."""

    def __init__(self, nodes: Iterable[Node], arcs: Iterable[Tuple[str, str, str]],
                 outer: Optional[str] = None):
        self.nodes: Mapping[str, Node] = MappingProxyType({n.nid: n for n in nodes})
        owner: Dict[str, str] = {}
        position: Dict[str, int] = {}
        for n in self.nodes.values():
            if len(n.rotation) != n.kind.degree:
                raise BudError(f"{n.kind.value} needs {n.kind.degree} darts, "
                               f"got {len(n.rotation)}", site=n.nid)
            for i, d in enumerate(n.rotation):
                if d in owner:
                    raise BudError(f"dart {d!r} appears at two nodes", site=n.nid)
                owner[d] = n.nid
                position[d] = i
        pairing: Dict[str, str] = {}
        labels: Dict[str, str] = {}
        for a, b, label in arcs:
            if not _LABEL.match(label):
                raise BudError(f"bad arc label {label!r}", site=a)
            for d in (a, b):
                if d not in owner:
                    raise BudError(f"arc uses unknown dart {d!r}", site=d)
                if d in pairing:
                    raise BudError(f"dart {d!r} is on two arcs", site=d)
            if a == b:
                raise BudError("an arc needs two distinct darts", site=a)
            pairing[a], pairing[b] = b, a
            labels[a] = labels[b] = label
        unpaired = sorted(set(owner) - set(pairing))
        if unpaired:
            raise BudError(f"dart {unpaired[0]!r} is not on any arc", site=unpaired[0])
        for n in self.nodes.values():
            if n.kind is NodeKind.CROSSING:
                if n.over is None or len(n.over) != 2:
                    raise BudError("crossing needs an over pair", site=n.nid)
                if any(d not in n.rotation for d in n.over):
                    raise BudError("over darts must belong to the crossing", site=n.nid)
                i, j = (n.rotation.index(d) for d in n.over)
                if (i - j) % 4 != 2:
                    raise BudError("over darts must be opposite in the rotation", site=n.nid)
            elif n.over is not None:
                raise BudError("only crossings have an over pair", site=n.nid)
        if outer is not None and outer not in owner:
            raise BudError(f"outer hint {outer!r} is not a dart", site=outer)
        self._owner = owner
        self._position = position
        self.pairing: Mapping[str, str] = MappingProxyType(pairing)
        self.labels: Mapping[str, str] = MappingProxyType(labels)
        self.outer = outer

    @property
    def darts(self) -> List[str]:
        return sorted(self._owner)

    def node_of(self, d: str) -> Node:
        return self.nodes[self._owner[d]]

    def alpha(self, d: str) -> str:
        return self.pairing[d]

    def next_ccw(self, d: str) -> str:
        rot = self.node_of(d).rotation
        return rot[(self._position[d] + 1) % len(rot)]

    def prev_ccw(self, d: str) -> str:
        rot = self.node_of(d).rotation
        return rot[(self._position[d] - 1) % len(rot)]

    def through(self, d: str) -> str:
        """The dart continuing the strand that enters a crossing or point through ``d``."""
        node = self.node_of(d)
        if node.kind is NodeKind.BANDEND:
            raise ValueError("strands end at band ends")
        k = len(node.rotation) // 2
        return node.rotation[(self._position[d] + k) % len(node.rotation)]

    def is_over(self, d: str) -> bool:
        node = self.node_of(d)
        return node.over is not None and d in node.over

    def arcs(self) -> List[Tuple[str, str]]:
        return sorted((a, b) for a, b in self.pairing.items() if a < b)

    def connected(self) -> bool:
        if not self.nodes:
            return False
        start = next(iter(self.nodes))
        seen = {start}
        todo = [start]
        while todo:
            n = self.nodes[todo.pop()]
            for d in n.rotation:
                m = self._owner[self.pairing[d]]
                if m not in seen:
                    seen.add(m)
                    todo.append(m)
        return len(seen) == len(self.nodes)


def faces(cmap: CombinatorialMap) -> List[Tuple[str, ...]]:
    """Trace the faces of a connected planar map and check Euler's formula."""
    if not cmap.connected():
        raise BudError("the map is not connected")
    seen = set()
    out: List[Tuple[str, ...]] = []
    for d in cmap.darts:
        if d in seen:
            continue
        face = []
        x = d
        while x not in seen:
            seen.add(x)
            face.append(x)
            x = cmap.prev_ccw(cmap.alpha(x))
        if x != d:
            raise BudError("face tracing did not close up", site=d)
        out.append(tuple(face))
    v, e, f = len(cmap.nodes), len(cmap.pairing) // 2, len(out)
    if v - e + f != 2:
        raise BudError(f"Euler characteristic is {v - e + f} (V={v}, E={e}, F={f}); "
                       "the map is not planar")
    return out


# ---------------------------------------------------------------------------
# diagrams
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Core:
    """A band core traced from its first band end to its second."""

    band: str
    darts: Tuple[str, ...]          # darts leaving each node along the core
    start: str                      # core dart at the first band end
    end: str                        # core dart at the second band end


def _label_key(label: str) -> Tuple[str, int]:
    m = _LABEL.match(label)
    return (m.group(1), int(m.group(2)))


class BandedUnlinkDiagram:
    """A validated banded unlink diagram."""

    def __init__(self, cmap: CombinatorialMap, twists: Optional[Mapping[str, int]] = None):
        self.map = cmap
        labels = set(cmap.labels.values())
        self.components = sorted((l for l in labels if l.startswith("C")), key=_label_key)
        self.bands = sorted((l for l in labels if l.startswith("B")), key=_label_key)
        twists = dict(twists or {})
        for b in twists:
            if b not in self.bands:
                raise BudError(f"twist for unknown band {b!r}", site=b)
        self.twists: Mapping[str, int] = MappingProxyType(
            {b: int(twists.get(b, 0)) for b in self.bands})
        self._faces = faces(cmap)
        self._face_of = {d: i for i, f in enumerate(self._faces) for d in f}
        self._check_nodes()
        self.cores: Mapping[str, Core] = MappingProxyType(self._trace_cores())
        if cmap.outer is None:
            raise BudError("no outer face given")
        self.outer_face = self._face_of[cmap.outer]
        self.disk_faces: Mapping[str, Tuple[int, ...]] = MappingProxyType(self._find_disks())
        self.l_forward = frozenset(
            x for c, fs in self.disk_faces.items() for x, l in cmap.labels.items()
            if l == c and self._face_of[x] in fs)
        for b, h in self.twists.items():
            if h % 2:
                raise BudError("an odd number of half twists makes the surface "
                               "non-orientable", site=b)
        self._resolve()
        expected = 2 + self.n - self.m
        if len(self.resolved) != expected:
            raise BudError(f"the positive resolution has {len(self.resolved)} components, "
                           f"expected 2 + n - m = {expected}")

    @property
    def m(self) -> int:
        return len(self.components)

    @property
    def n(self) -> int:
        return len(self.bands)

    @property
    def face_list(self) -> List[Tuple[str, ...]]:
        return list(self._faces)

    def face_of(self, d: str) -> int:
        return self._face_of[d]

    # -- validation --------------------------------------------------------

    def _check_nodes(self) -> None:
        cm = self.map
        for n in cm.nodes.values():
            labs = [cm.labels[d] for d in n.rotation]
            if n.kind is NodeKind.CROSSING:
                a, b = n.over
                u = [d for d in n.rotation if d not in n.over]
                if cm.labels[a] != cm.labels[b] or cm.labels[u[0]] != cm.labels[u[1]]:
                    raise BudError("strand labels change through a crossing", site=n.nid)
                if cm.labels[a].startswith("C") and cm.labels[u[0]].startswith("C"):
                    raise BudError("two arcs of L cross", site=n.nid)
            elif n.kind is NodeKind.POINT:
                if labs[0] != labs[1]:
                    raise BudError("strand labels change through a point", site=n.nid)
            else:
                cs = [l for l in labs if l.startswith("C")]
                bs = [l for l in labs if l.startswith("B")]
                if len(cs) != 2 or len(bs) != 1 or cs[0] != cs[1]:
                    raise BudError("a band end joins one core to one component of L",
                                   site=n.nid)

    def _trace_cores(self) -> Dict[str, Core]:
        cm = self.map
        out: Dict[str, Core] = {}
        for n in sorted(cm.nodes.values(), key=lambda n: n.nid):
            if n.kind is not NodeKind.BANDEND:
                continue
            start = next(d for d in n.rotation if cm.labels[d].startswith("B"))
            band = cm.labels[start]
            if band in out:
                continue
            darts = [start]
            x = cm.alpha(start)
            steps = 0
            while cm.node_of(x).kind is not NodeKind.BANDEND:
                x = cm.through(x)
                darts.append(x)
                x = cm.alpha(x)
                steps += 1
                if steps > len(cm.pairing):
                    raise BudError("band core does not end", site=band)
            out[band] = Core(band, tuple(darts), start, x)
        for band in self.bands:
            if band not in out:
                raise BudError("band core is a closed loop without band ends", site=band)
        seen = defaultdict(int)
        for d, l in cm.labels.items():
            if l.startswith("B"):
                seen[l] += 1
        for band, core in out.items():
            if 2 * len(core.darts) != seen[band]:
                raise BudError("band label is used by more than one core", site=band)
        return out

    def _find_disks(self) -> Dict[str, Tuple[int, ...]]:
        """Faces of the disk bounded by each component: the side away from the outer face."""
        cm = self.map
        out: Dict[str, Tuple[int, ...]] = {}
        for comp in self.components:
            darts = [d for d, l in cm.labels.items() if l == comp]
            start = min(darts)
            seen = set()
            x = start
            while x not in seen:
                seen.add(x)
                y = cm.alpha(x)
                seen.add(y)
                node = cm.node_of(y)
                if node.kind is NodeKind.BANDEND:
                    x = next(d for d in node.rotation if cm.labels[d] == comp and d != y)
                else:
                    x = cm.through(y)
            if len(seen) != len(darts):
                raise BudError("component of L is not a single closed curve", site=comp)
            # flood fill from the outer face without crossing the component
            outside = {self.outer_face}
            todo = [self.outer_face]
            while todo:
                for d in self._faces[todo.pop()]:
                    if cm.labels[d] == comp:
                        continue
                    g = self._face_of[cm.alpha(d)]
                    if g not in outside:
                        outside.add(g)
                        todo.append(g)
            inside = tuple(i for i in range(len(self._faces)) if i not in outside)
            for d in darts:
                if (self._face_of[d] in outside) == (self._face_of[cm.alpha(d)] in outside):
                    raise BudError("component of L does not separate the plane", site=d)
            out[comp] = inside
        owner: Dict[int, str] = {}
        for comp, fs in out.items():
            for f in fs:
                if f in owner:
                    raise BudError(f"the disks of {owner[f]} and {comp} overlap", site=comp)
                owner[f] = comp
        return out

    # -- positive resolution -------------------------------------------------

    def l_piece(self, d: str) -> str:
        """Canonical name of the arc of L between band ends that contains dart ``d``."""
        cm = self.map
        comp = cm.labels[d]
        if not any(cm.node_of(x).kind is NodeKind.BANDEND
                   for x, l in cm.labels.items() if l == comp):
            return comp
        ends = []
        for x in (d, cm.alpha(d)):
            while cm.node_of(x).kind is not NodeKind.BANDEND:
                x = cm.alpha(cm.through(x))
            ends.append(x)
        return min(ends)

    def _resolve(self) -> None:
        cm = self.map
        parent: Dict[str, str] = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            parent[find(a)] = find(b)

        pieces = {self.l_piece(d) for d, l in cm.labels.items() if l.startswith("C")}
        for p in pieces:
            find(p)
        sides: Dict[Tuple[str, str], str] = {}
        for band, core in self.cores.items():
            lu = self.l_piece(cm.next_ccw(core.start))
            ru = self.l_piece(cm.prev_ccw(core.start))
            lv = self.l_piece(cm.prev_ccw(core.end))
            rv = self.l_piece(cm.next_ccw(core.end))
            union(lu, lv)
            union(ru, rv)
            sides[(band, "l")] = lu
            sides[(band, "r")] = ru
        roots = sorted({find(p) for p in pieces})
        index = {r: i + 1 for i, r in enumerate(roots)}
        self.resolved: Tuple[int, ...] = tuple(range(1, len(roots) + 1))
        self.side_component: Mapping[Tuple[str, str], int] = MappingProxyType(
            {k: index[find(v)] for k, v in sides.items()})
        self.piece_component: Mapping[str, int] = MappingProxyType(
            {p: index[find(p)] for p in pieces})

    # -- crossings ---------------------------------------------------------

    def _exit_darts(self) -> set:
        """Darts leaving their node in the direction of travel.

        Cores run from start to end; components of L run with their disk
        on the left.
        """
        exits = set(self.l_forward)
        for core in self.cores.values():
            exits.update(core.darts)
        return exits

    def crossing_signs(self) -> Dict[str, int]:
        """Sign of each crossing, with cores and components oriented as in ``_exit_darts``."""
        cm = self.map
        exits = self._exit_darts()
        signs: Dict[str, int] = {}
        for n in cm.nodes.values():
            if n.kind is not NodeKind.CROSSING:
                continue
            over = next(d for d in n.over if d in exits)
            under = next(d for d in n.rotation if d not in n.over and d in exits)
            signs[n.nid] = 1 if cm.next_ccw(over) == under else -1
        return signs

    def under_passages(self, band: str) -> List[Tuple[str, str, int]]:
        """Crossings where the core of ``band`` passes under L, in order along the core.

        Each entry is ``(crossing, component, sign)``.
        """
        cm = self.map
        signs = self.crossing_signs()
        out = []
        for x in self.cores[band].darts[1:]:
            n = cm.node_of(x)
            if n.kind is NodeKind.CROSSING and not cm.is_over(x):
                comp = cm.labels[n.over[0]]
                if comp.startswith("C"):
                    out.append((n.nid, comp, signs[n.nid]))
        return out

    def core_at(self, d: str) -> str:
        return self.map.labels[d]


# ---------------------------------------------------------------------------
# .bud text format
# ---------------------------------------------------------------------------

def parse_bud(text: str) -> BandedUnlinkDiagram:
    nodes: Dict[str, Tuple[NodeKind, Optional[Tuple[str, str]], int]] = {}
    rotations: Dict[str, Tuple[str, ...]] = {}
    arcs: List[Tuple[str, str, str]] = []
    twists: Dict[str, int] = {}
    outer = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "node":
                nid, kind = tok[1], NodeKind(tok[2])
                over = None
                if kind is NodeKind.CROSSING:
                    if len(tok) != 4 or not tok[3].startswith("over="):
                        raise BudError("crossing needs over=<dart>,<dart>", line=lineno)
                    over = tuple(tok[3][5:].split(","))
                elif len(tok) != 3:
                    raise BudError("unexpected fields", line=lineno)
                if nid in nodes:
                    raise BudError(f"duplicate node {nid!r}", line=lineno)
                nodes[nid] = (kind, over, lineno)
            elif tok[0] == "rot":
                rotations[tok[1]] = tuple(tok[2].split(","))
            elif tok[0] == "arc":
                if len(tok) != 4 or not tok[3].startswith("label="):
                    raise BudError("expected 'arc <dart> <dart> label=C<i>|B<j>'", line=lineno)
                arcs.append((tok[1], tok[2], tok[3][6:]))
            elif tok[0] == "twist":
                twists[tok[1]] = int(tok[2])
            elif tok[0] == "outer":
                outer = tok[1]
            else:
                raise BudError(f"unknown directive {tok[0]!r}", line=lineno)
        except (IndexError, ValueError) as exc:
            if isinstance(exc, BudError):
                raise
            raise BudError(f"cannot parse {line!r}", line=lineno) from None
    built = []
    for nid, (kind, over, lineno) in nodes.items():
        if nid not in rotations:
            raise BudError("node has no rotation", site=nid, line=lineno)
        built.append(Node(nid, kind, rotations[nid], over))
    for nid in rotations:
        if nid not in nodes:
            raise BudError("rotation for unknown node", site=nid)
    return BandedUnlinkDiagram(CombinatorialMap(built, arcs, outer), twists)


def serialize_bud(d: BandedUnlinkDiagram) -> str:
    cm = d.map
    lines = []
    for nid in sorted(cm.nodes):
        n = cm.nodes[nid]
        extra = f" over={n.over[0]},{n.over[1]}" if n.over else ""
        lines.append(f"node {nid} {n.kind.value}{extra}")
    for nid in sorted(cm.nodes):
        lines.append(f"rot {nid} {','.join(cm.nodes[nid].rotation)}")
    for a, b in cm.arcs():
        lines.append(f"arc {a} {b} label={cm.labels[a]}")
    for b in d.bands:
        if d.twists[b]:
            lines.append(f"twist {b} {d.twists[b]}")
    if cm.outer is not None:
        lines.append(f"outer {cm.outer}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# the shadow
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Region:
    rid: str
    role: str                 # disk-face | d0-face | boundary | band-rectangle | cap
    gleam: Optional[HalfInt]


@dataclass(frozen=True)
class ShadowReport:
    true_vertices: int
    crossings: int
    band_ends: int
    regions: Tuple[Region, ...]
    K_regions: Tuple[str, ...]
    gleam_sum_over_K: HalfInt
    resolved_component_count: int
    writhes: Mapping[int, int]
    linking: Mapping[Tuple[int, int], Fraction]

    def to_dict(self) -> Dict[str, object]:
        return {
            "true_vertices": self.true_vertices,
            "crossings": self.crossings,
            "band_ends": self.band_ends,
            "regions": [{"id": r.rid, "role": r.role,
                         "gleam": None if r.gleam is None else str(r.gleam)}
                        for r in self.regions],
            "K_regions": list(self.K_regions),
            "gleam_sum_over_K": str(self.gleam_sum_over_K),
            "resolved_component_count": self.resolved_component_count,
            "writhes": {str(k): v for k, v in sorted(self.writhes.items())},
            "linking": {f"{a}-{b}": str(v) for (a, b), v in sorted(self.linking.items())},
        }


_SIDE_DIRECTION = {"l": -1, "r": 1}


def _resolved_crossings(d: BandedUnlinkDiagram) -> List[Tuple[int, int, int]]:
    """Crossings of L_b as ``(component, component, sign)`` triples.

    A crossing of two cores gives four crossings of band edges, a crossing
    of a core with L gives two and each half twist gives one.
    """
    cm = d.map
    out = []
    signs = d.crossing_signs()
    for nid, eps in signs.items():
        n = cm.nodes[nid]
        strands = [n.over[0], next(x for x in n.rotation if x not in n.over)]
        options = []
        for x in strands:
            label = cm.labels[x]
            if label.startswith("C"):
                options.append([(d.piece_component[d.l_piece(x)], 1)])
            else:
                options.append([(d.side_component[(label, s)], _SIDE_DIRECTION[s])
                                for s in "lr"])
        for a, da in options[0]:
            for b, db in options[1]:
                out.append((a, b, eps * da * db))
    for band, h in d.twists.items():
        if h:
            a, b = d.side_component[(band, "l")], d.side_component[(band, "r")]
            sign = 1 if h > 0 else -1
            out.extend([(a, b, sign)] * abs(h))
    return out


def shadow_of(d: BandedUnlinkDiagram) -> ShadowReport:
    cm = d.map
    crossings = [n for n in cm.nodes.values() if n.kind is NodeKind.CROSSING]
    band_ends = [n for n in cm.nodes.values() if n.kind is NodeKind.BANDEND]
    face_gleam = [HalfInt(0)] * len(d.face_list)
    for n in crossings:
        for x in n.rotation:
            y = cm.next_ccw(x)
            units = 1 if cm.is_over(x) and not cm.is_over(y) else -1
            face_gleam[d.face_of(x)] = face_gleam[d.face_of(x)] + HalfInt(units)
    disk_rid: Dict[int, str] = {}
    for comp, fs in d.disk_faces.items():
        ordered = sorted(fs, key=lambda i: min(d.face_list[i]))
        for j, i in enumerate(ordered):
            disk_rid[i] = f"disk:{comp}" if j == 0 else f"disk:{comp}.{j}"
    regions: List[Region] = []
    K: List[str] = []
    for i, f in enumerate(d.face_list):
        if i == d.outer_face:
            regions.append(Region("outer", "boundary", None))
        elif i in disk_rid:
            regions.append(Region(disk_rid[i], "disk-face", face_gleam[i]))
            K.append(disk_rid[i])
        else:
            regions.append(Region(f"face:{min(f)}", "d0-face", face_gleam[i]))
    for band in d.bands:
        rid = f"band:{band}"
        regions.append(Region(rid, "band-rectangle", HalfInt.of(d.twists[band])))
        K.append(rid)
    writhe = {c: 0 for c in d.resolved}
    linking: Dict[Tuple[int, int], Fraction] = {}
    for a, b, s in _resolved_crossings(d):
        if a == b:
            writhe[a] += s
        else:
            key = (min(a, b), max(a, b))
            linking[key] = linking.get(key, Fraction(0)) + Fraction(s, 2)
    for c in d.resolved:
        rid = f"cap:{c}"
        regions.append(Region(rid, "cap", HalfInt.of(-writhe[c])))
        K.append(rid)
    gleams = {r.rid: r.gleam for r in regions}
    total = HalfInt(0)
    for rid in K:
        total = total + gleams[rid]
    return ShadowReport(
        true_vertices=len(crossings) + len(band_ends),
        crossings=len(crossings),
        band_ends=len(band_ends),
        regions=tuple(regions),
        K_regions=tuple(K),
        gleam_sum_over_K=total,
        resolved_component_count=len(d.resolved),
        writhes=MappingProxyType(writhe),
        linking=MappingProxyType({k: v for k, v in linking.items() if v}),
    )


def knot_group_of(d: BandedUnlinkDiagram) -> Presentation:
    """Presentation of the group of the ribbon surface built from the diagram.

    One generator ``x<i>`` per component C<i> of L, a Wirtinger meridian
    taken with the right-hand rule about C<i> oriented with its disk on
    the left.  A band from C<a> to C<b> whose core passes under components
    with signs e_1..e_k (in order from the start of the core) contributes
    ``x<b> = W x<a> W^-1`` with ``W = h_k ... h_1`` and ``h_i`` the
    generator of the i-th passage to the power e_i.  Crossings between
    cores and passages of a core over L do not contribute.  The closed
    2-knot has the same group because the caps add no relations.
    """
    cm = d.map
    name = {c: "x" + c[1:] for c in d.components}
    rels = []
    for band in d.bands:
        core = d.cores[band]
        a = name[cm.labels[cm.next_ccw(core.start)]]
        b = name[cm.labels[cm.next_ccw(core.end)]]
        w: List[Tuple[str, int]] = []
        for _, comp, eps in d.under_passages(band):
            w.insert(0, (name[comp], eps))
        rels.append(concat(w, gen(a), inverse(w), gen(b, -1)))
    gens = tuple(name[c] for c in d.components)
    return Presentation(gens, tuple(rels), gens[0] if gens else None)


# ---------------------------------------------------------------------------
# collapsing
# ---------------------------------------------------------------------------

def _walls(d: BandedUnlinkDiagram) -> Dict[str, str]:
    """Map every dart to the wall region of Gamma x [0, 1] above its arc.

    Walls are the edges of Gamma: arcs between band ends, unbroken by
    crossings and helper points.
    """
    cm = d.map
    wall: Dict[str, str] = {}
    for start in cm.darts:
        if start in wall:
            continue
        # walk in both directions to the ends of this edge of Gamma
        chain = [start]
        x = start
        while True:
            y = cm.alpha(x)
            chain.append(y)
            if cm.node_of(y).kind is NodeKind.BANDEND:
                break
            x = cm.through(y)
            if x == start:
                break
            chain.append(x)
        name = f"wall:{min(chain)}"
        for z in chain:
            wall[z] = name
        # continue backwards from the start when it sits at a crossing or point
        if cm.node_of(start).kind is not NodeKind.BANDEND and wall.get(cm.through(start)) is None:
            x = cm.through(start)
            back = []
            while x not in wall:
                back.append(x)
                y = cm.alpha(x)
                back.append(y)
                if cm.node_of(y).kind is NodeKind.BANDEND:
                    break
                x = cm.through(y)
            name = f"wall:{min(chain + back)}"
            for z in chain + back:
                wall[z] = name
    return wall


def collapse_bound(d: BandedUnlinkDiagram, order_seed: Optional[int] = None) -> int:
    """True vertices left after greedily collapsing from the boundary of D0.

    The model keeps one sheet per face of D0 and one wall per edge of Gamma.
    Triple lines are the arcs of the diagram (two faces and a wall) and the
    vertical lines above band ends (three walls); the boundary circle of D0
    is free.  Any region that is the only surviving sheet along some line is
    removed, repeatedly.  Bands and caps are never freed: their boundaries
    lie on walls that keep a face of D_1..D_m or another wall.  A true
    vertex survives when all six of its region germs survive.  Removal is
    monotone, so the result does not depend on the order, which
    ``order_seed`` randomizes for testing.
    """
    cm = d.map
    wall = _walls(d)
    face = [f"f{i}" for i in range(len(d.face_list))]
    lines: List[List[str]] = [[face[d.outer_face]]]
    for a, b in cm.arcs():
        lines.append([face[d.face_of(a)], face[d.face_of(b)], wall[a]])
    germs: Dict[str, List[str]] = {}
    for n in cm.nodes.values():
        if n.kind is NodeKind.POINT:
            continue
        corner = [face[d.face_of(x)] for x in n.rotation]
        walls_here = sorted({wall[x] for x in n.rotation})
        germs[n.nid] = corner + walls_here
        if n.kind is NodeKind.BANDEND:
            lines.append([wall[x] for x in n.rotation])
    alive = set(face) | set(wall.values())
    rng = random.Random(order_seed) if order_seed is not None else None
    while True:
        free = set()
        for sheets in lines:
            live = [s for s in sheets if s in alive]
            if len(live) == 1:
                free.add(live[0])
        if not free:
            break
        ordered = sorted(free)
        victim = rng.choice(ordered) if rng else ordered[0]
        alive.discard(victim)
    return sum(1 for g in germs.values() if all(s in alive for s in g))


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

class _Drawing:
    """Straight-line drawing used to build maps: rotations come from angles."""

    def __init__(self):
        self.pos: Dict[str, Tuple[float, float]] = {}
        self.kind: Dict[str, NodeKind] = {}
        self.over: Dict[str, Tuple[str, str]] = {}
        self.darts: Dict[str, List[Tuple[str, float, List[Tuple[float, float]]]]] = {}
        self.arcs: List[Tuple[str, str, str]] = []
        self.count = 0

    def node(self, nid: str, kind: NodeKind, x: float, y: float) -> str:
        self.pos[nid] = (x, y)
        self.kind[nid] = kind
        self.darts[nid] = []
        return nid

    def _dart(self, nid: str, toward: Tuple[float, float], path) -> str:
        self.count += 1
        name = f"{nid}.{len(self.darts[nid])}"
        x0, y0 = self.pos[nid]
        angle = math.atan2(toward[1] - y0, toward[0] - x0)
        self.darts[nid].append((name, angle, path))
        return name

    def arc(self, a: str, b: str, label: str, via: Sequence[Tuple[float, float]] = ()):
        pts = [self.pos[a], *via, self.pos[b]]
        da = self._dart(a, pts[1], pts)
        db = self._dart(b, pts[-2], list(reversed(pts)))
        self.arcs.append((da, db, label))
        return da, db

    def build(self, over_labels: Mapping[str, object], twists=None) -> BandedUnlinkDiagram:
        """Assemble the map.

        ``over_labels[crossing]`` names the band passing over, or for a core
        crossing itself the passage (1 or 2) that goes over.
        """
        labels = {}
        for a, b, l in self.arcs:
            labels[a] = labels[b] = l
        nodes = []
        for nid, ds in self.darts.items():
            rot = tuple(name for name, _, _ in sorted(ds, key=lambda t: t[1]))
            over = None
            if self.kind[nid] is NodeKind.CROSSING:
                spec = over_labels[nid]
                if isinstance(spec, int):
                    # darts are created in traversal order: passage 1 then passage 2
                    names = [name for name, _, _ in ds]
                    over = tuple(names[2 * spec - 2:2 * spec])
                else:
                    over = tuple(x for x in rot if labels[x] == spec)
            nodes.append(Node(nid, self.kind[nid], rot, over))
        self._check_simple()
        cmap = CombinatorialMap(nodes, self.arcs)
        paths = {name: path for ds in self.darts.values() for name, _, path in ds}
        fs = faces(cmap)
        areas = []
        for f in fs:
            pts = [p for x in f for p in paths[x][:-1]]
            areas.append(sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1)
                             in zip(pts, pts[1:] + pts[:1])) / 2)
        negative = [i for i, a in enumerate(areas) if a < 0]
        if len(negative) != 1:
            raise AssertionError("drawing is not planar")
        outer = min(fs[negative[0]])
        cmap = CombinatorialMap(nodes, self.arcs, outer)
        return BandedUnlinkDiagram(cmap, twists)


    def _check_simple(self) -> None:
        """Raise if two arcs of the drawing meet away from their nodes."""
        segs = []
        for a, _, _ in self.arcs:
            nid = a.rsplit(".", 1)[0]
            path = next(p for name, _, p in self.darts[nid] if name == a)
            segs.extend((p, q, a) for p, q in zip(path, path[1:]))

        def orient(p, q, r):
            v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
            return (v > 1e-12) - (v < -1e-12)

        for i, (p1, q1, a1) in enumerate(segs):
            for p2, q2, a2 in segs[i + 1:]:
                if {p1, q1} & {p2, q2}:
                    continue
                if (orient(p1, q1, p2) * orient(p1, q1, q2) < 0
                        and orient(p2, q2, p1) * orient(p2, q2, q1) < 0):
                    raise AssertionError(f"arcs {a1} and {a2} cross in the drawing")



def _loop(dr: _Drawing, center, radius, stops: Sequence[Tuple[str, float, NodeKind]],
          label: str) -> None:
    """A circle of L through band ends and crossings at the given angles (radians)."""
    cx, cy = center
    stops = sorted(stops, key=lambda e: e[1] % (2 * math.pi))
    for nid, t, kind in stops:
        dr.node(nid, kind, cx + radius * math.cos(t), cy + radius * math.sin(t))
    for i, (nid, t, _) in enumerate(stops):
        nxt, t2, _ = stops[(i + 1) % len(stops)]
        t, t2 = t % (2 * math.pi), t2 % (2 * math.pi)
        if t2 <= t:
            t2 += 2 * math.pi
        steps = max(4, int(24 * (t2 - t)))
        via = [(cx + radius * math.cos(t + (t2 - t) * s / steps),
                cy + radius * math.sin(t + (t2 - t) * s / steps)) for s in range(1, steps)]
        dr.arc(nid, nxt, label, via)


def gen_twist_spun(n: int, k: int) -> BandedUnlinkDiagram:
    """A banded unlink diagram for the k-twist spun torus knot T(2, 2n+1).

    Two unknots L1 (left) and L2 (right) and two bands.  The core of B1
    runs from L2 to L1 as a serpentine in the gap between them, dipping
    alternately through the disks of L1 and L2, 2n dips in all; it
    contributes the torus knot relation ``x1 = W x2 W^-1`` with
    ``W = (x2 x1)^n``.  The core of B2 leaves L1 at the top, crosses over
    the gap, weaves k times through the disk of L2 along its far side and
    returns under the gap to the bottom of L1; it contributes
    ``x1 = x2^k x1 x2^-k``.  Each dip passes under L on the way in and over
    on the way out, so there are 4n + 2k crossings and four band ends.
    The twist of B1 makes the linking number of the two components of the
    positive resolution zero.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")
    if not isinstance(k, int) or k < 0:
        raise ValueError("k must be a nonnegative integer")
    c1, c2, r = (-4.0, 0.0), (4.0, 0.0), 2.0
    dips = 2 * n
    levels = [1.2 - 2.4 * j / dips for j in range(dips + 1)]
    stops1: List[Tuple[str, float, NodeKind]] = []
    stops2: List[Tuple[str, float, NodeKind]] = []
    over: Dict[str, str] = {}
    # serpentine nodes: dip i enters at levels[i-1] and leaves at levels[i]
    serp = []
    for i in range(1, dips + 1):
        into_l1 = i % 2 == 1
        ids = []
        for j, y in ((0, levels[i - 1]), (1, levels[i])):
            nid = f"d{i}{'ab'[j]}"
            t = math.asin(y / r)
            if into_l1:
                stops1.append((nid, t, NodeKind.CROSSING))
            else:
                stops2.append((nid, math.pi - t, NodeKind.CROSSING))
            over[nid] = "B1" if j == 1 else ("C1" if into_l1 else "C2")
            ids.append(nid)
        serp.append((into_l1, ids))
    stops2.append(("f2", math.pi - math.asin(levels[0] / r), NodeKind.BANDEND))
    stops1.append(("f1", math.asin(levels[-1] / r), NodeKind.BANDEND))
    stops1 += [("g1", math.pi / 2, NodeKind.BANDEND), ("g2", 3 * math.pi / 2, NodeKind.BANDEND)]
    spread = math.radians(min(150.0, 25.0 * 2 * k))
    angles = [spread / 2 - spread * j / max(1, 2 * k - 1) for j in range(2 * k)]
    for j, t in enumerate(angles):
        nid = f"w{j + 1}"
        stops2.append((nid, t, NodeKind.CROSSING))
        over[nid] = "C2" if j % 2 == 0 else "B2"
    dr = _Drawing()
    _loop(dr, c1, r, stops1, "C1")
    _loop(dr, c2, r, stops2, "C2")
    # B1: serpentine from f2 to f1
    prev = "f2"
    for into_l1, (a, b) in serp:
        cx = c1[0] if into_l1 else c2[0]
        ya, yb = dr.pos[a][1], dr.pos[b][1]
        dr.arc(prev, a, "B1")
        inner = (cx + (0.9 if into_l1 else -0.9), (ya + yb) / 2)
        dr.arc(a, b, "B1", [inner])
        prev = b
    dr.arc(prev, "f1", "B1")
    # B2: over the top, weaving down the far side of L2, back under the bottom
    if k:
        lobes = [[(c2[0] + (r + (0.35 if i % 2 == 0 else -0.35)) * math.cos(t),
                   (r + (0.35 if i % 2 == 0 else -0.35)) * math.sin(t))]
                 for i, t in enumerate(
                     [angles[0] + 0.15] + [(a + b) / 2 for a, b in zip(angles, angles[1:])]
                     + [angles[-1] - 0.15])]
        prev = "g1"
        dr.arc(prev, "w1", "B2", [(-4.0, 3.6), (4.0, 3.6)] + lobes[0])
        prev = "w1"
        for j in range(2, 2 * k + 1):
            dr.arc(prev, f"w{j}", "B2", lobes[j - 1])
            prev = f"w{j}"
        dr.arc(prev, "g2", "B2", lobes[-1] + [(4.0, -3.6), (-4.0, -3.6)])
    else:
        dr.arc("g1", "g2", "B2", [(-4.0, 3.6), (7.0, 3.6), (7.0, -3.6), (-4.0, -3.6)])
    draft = dr.build(over)
    lk = shadow_of(draft).linking.get((1, 2), Fraction(0))
    # B2 separates the two components of the resolution, so its twists link them
    return dr.build(over, {"B2": int(-2 * lk)})


def gen_Kn(n: int) -> BandedUnlinkDiagram:
    """A one-band ribbon diagram for K_n.

    Two unknots L1 (left) and L2 (right) joined by one band.  The core
    leaves the bottom of L1, runs under both circles, weaves |n| times
    through the disk of L2 along its far side, crosses over the top, weaves
    |n| times through the disk of L1 along its near side and ends on the
    lower left of L2.  Each passage goes under L on the way in and over on
    the way out, except that the passages through L2 are reversed when
    needed so that the band word is ``x1^|n| x2^-n`` up to mirror image.
    This gives ``x2 = W x1 W^-1`` with that word W.
    """
    if not isinstance(n, int) or n == 0:
        raise ValueError("n must be a nonzero integer")
    a = abs(n)
    c1, c2, r = (-4.0, 0.0), (4.0, 0.0), 2.0
    spread = math.radians(min(150.0, 25.0 * 2 * a))
    step = spread / max(1, 2 * a - 1)
    # L2 far side, travelling counterclockwise; L1 near side, clockwise
    ang2 = [-spread / 2 + step * j for j in range(2 * a)]
    ang1 = [spread / 2 - step * j for j in range(2 * a)]
    stops1 = [("fa", 3 * math.pi / 2, NodeKind.BANDEND)]
    stops2 = [("fb", math.radians(200), NodeKind.BANDEND)]
    over: Dict[str, str] = {}
    for j, t in enumerate(ang2):
        stops2.append((f"p{j + 1}", t, NodeKind.CROSSING))
        over[f"p{j + 1}"] = "C2" if j % 2 == 0 else "B1"
    for j, t in enumerate(ang1):
        stops1.append((f"q{j + 1}", t, NodeKind.CROSSING))
        over[f"q{j + 1}"] = "C1" if j % 2 == 0 else "B1"
    dr = _Drawing()
    _loop(dr, c1, r, stops1, "C1")
    _loop(dr, c2, r, stops2, "C2")

    def lobe(center, angles, i, pad):
        if i == 0:
            t = angles[0] - pad
        elif i == len(angles):
            t = angles[-1] + pad
        else:
            t = (angles[i - 1] + angles[i]) / 2
        rr = r + 0.35 if i % 2 == 0 else r - 0.35
        return [(center[0] + rr * math.cos(t), center[1] + rr * math.sin(t))]

    pad2 = math.copysign(0.15, ang2[-1] - ang2[0]) if a > 0 else 0.15
    dr.arc("fa", "p1", "B1", [(-4.0, -3.6), (4.0, -3.6)] + lobe(c2, ang2, 0, pad2))
    for j in range(2, 2 * a + 1):
        dr.arc(f"p{j - 1}", f"p{j}", "B1", lobe(c2, ang2, j - 1, pad2))
    pad1 = -0.15
    dr.arc(f"p{2 * a}", "q1", "B1", lobe(c2, ang2, 2 * a, pad2)
           + [(4.0, 3.6), (-4.0 + 2.35 * math.cos(ang1[0] + 0.15), 3.6)]
           + lobe(c1, ang1, 0, pad1))
    for j in range(2, 2 * a + 1):
        dr.arc(f"q{j - 1}", f"q{j}", "B1", lobe(c1, ang1, j - 1, pad1))
    dr.arc(f"q{2 * a}", "fb", "B1", lobe(c1, ang1, 2 * a, pad1) + [(0.0, -2.4)])
    d = dr.build(over)
    signs = {comp: {e for _, c, e in d.under_passages("B1") if c == comp}
             for comp in ("C1", "C2")}
    if len(signs["C1"]) != 1 or len(signs["C2"]) != 1:
        raise AssertionError("passages through one disk have mixed signs")
    want = -signs["C1"].pop() * (1 if n > 0 else -1)
    if signs["C2"].pop() != want:
        for j in range(2 * a):
            nid = f"p{j + 1}"
            over[nid] = "B1" if over[nid] == "C2" else "C2"
        d = dr.build(over)
    return d
