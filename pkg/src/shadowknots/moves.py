"""A small rewriting engine for decorated graphs driven by a rule table.

Rules live in ``data/moves.rules``.  A rule's left-hand side is a pattern of
vertices, internal edges and *ports* (edges leaving the pattern); matching
respects vertex kinds, slots up to the symmetries of P (cyclic rotation)
and Y111 (any permutation), decoration literals and ``where`` constraints.
The right-hand side rebuilds the neighbourhood, reattaching every port to
a new slot with an updated decoration.

Moves never touch the boundary vertex B or any edge incident to it: those
regions belong to the knot.
"""

from __future__ import annotations

import ast
import enum
import itertools
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from .egraph import DecoratedGraph, Edge, HalfInt, VertexKind, validate
from .fpgroup import tietze_simplify
from .vankampen import pi1_tree

K = VertexKind


class MoveKind(str, enum.Enum):
    YV = "YV"
    IH = "IH"
    VerticalDiskAdd = "VerticalDiskAdd"
    HorizontalDiskAdd = "HorizontalDiskAdd"
    ConnectedSumReduce = "ConnectedSumReduce"
    GleamShift = "GleamShift"
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"
    F = "F"
    G = "G"
    H = "H"

    def __str__(self) -> str:
        return self.value


class RuleError(ValueError):
    pass


class MoveError(ValueError):
    pass


# ---------------------------------------------------------------------------
# decoration expressions
# ---------------------------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv}
_CMPOPS = {ast.Eq: operator.eq, ast.NotEq: operator.ne, ast.Lt: operator.lt,
           ast.LtE: operator.le, ast.Gt: operator.gt, ast.GtE: operator.ge}


def _eval(node: ast.AST, env: Mapping[str, Fraction]):
    if isinstance(node, ast.Expression):
        return _eval(node.body, env)
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return Fraction(node.value)
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise RuleError(f"unbound decoration variable {node.id!r}")
        return env[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, env)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval(node.left, env), _eval(node.right, env))
    if isinstance(node, ast.Compare) and len(node.ops) == 1 and type(node.ops[0]) in _CMPOPS:
        return _CMPOPS[type(node.ops[0])](_eval(node.left, env),
                                          _eval(node.comparators[0], env))
    raise RuleError(f"unsupported expression element {ast.dump(node)}")


@dataclass(frozen=True)
class Expr:
    text: str

    def __post_init__(self):
        try:
            tree = ast.parse(self.text, mode="eval")
        except SyntaxError as exc:
            raise RuleError(f"bad expression {self.text!r}") from exc
        object.__setattr__(self, "_tree", tree)

    def evaluate(self, env: Mapping[str, Fraction]):
        return _eval(self._tree, env)  # type: ignore[attr-defined]

    @property
    def variable(self) -> Optional[str]:
        body = self._tree.body  # type: ignore[attr-defined]
        return body.id if isinstance(body, ast.Name) else None


# ---------------------------------------------------------------------------
# rules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PatEdge:
    name: str
    a: Tuple[str, int]
    b: Tuple[str, int]
    gleam: Expr
    plain: bool = False
    invert: bool = False


@dataclass(frozen=True)
class PatPort:
    name: str
    at: Tuple[str, int]
    gleam: Expr
    flip: bool = False


@dataclass(frozen=True)
class PatThrough:
    a: str
    b: str
    gleam: Expr
    flip: bool = False


@dataclass
class Side:
    vertices: Dict[str, VertexKind] = field(default_factory=dict)
    edges: List[PatEdge] = field(default_factory=list)
    ports: List[PatPort] = field(default_factory=list)
    throughs: List[PatThrough] = field(default_factory=list)

    def port_names(self) -> List[str]:
        names = [p.name for p in self.ports]
        for t in self.throughs:
            names += [t.a, t.b]
        return sorted(names)


@dataclass
class MoveRule:
    kind: MoveKind
    inverse: bool
    lhs: Side
    rhs: Side
    where: List[Expr] = field(default_factory=list)
    justify: List[str] = field(default_factory=list)
    splits: bool = False

    @property
    def label(self) -> str:
        return f"{self.kind}{' inverse' if self.inverse else ''}"


def _end(text: str) -> Tuple[str, int]:
    v, _, s = text.partition(":")
    if not s.isdigit():
        raise RuleError(f"bad slot reference {text!r}")
    return v, int(s)


def _gleam_arg(tokens: Sequence[str]) -> Tuple[Expr, List[str]]:
    rest = []
    gleam = None
    for t in tokens:
        if t.startswith("gleam="):
            gleam = Expr(t[len("gleam="):])
        else:
            rest.append(t)
    if gleam is None:
        raise RuleError(f"missing gleam= in {' '.join(tokens)!r}")
    return gleam, rest


def parse_rules(text: str) -> Dict[Tuple[MoveKind, bool], MoveRule]:
    rules: Dict[Tuple[MoveKind, bool], MoveRule] = {}
    current: Optional[MoveRule] = None
    side: Optional[Side] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "rule":
                if current is not None:
                    raise RuleError("nested rule")
                kind = MoveKind(tok[1])
                inverse = len(tok) > 2 and tok[2] == "inverse"
                current = MoveRule(kind, inverse, Side(), Side())
                side = None
            elif current is None:
                raise RuleError(f"directive {tok[0]!r} outside a rule")
            elif tok[0] == "lhs":
                side = current.lhs
            elif tok[0] == "rhs":
                side = current.rhs
            elif tok[0] == "end":
                _check_rule(current)
                key = (current.kind, current.inverse)
                if key in rules:
                    raise RuleError(f"duplicate rule {current.label}")
                rules[key] = current
                current, side = None, None
            elif tok[0] == "where":
                current.where.append(Expr(" ".join(tok[1:])))
            elif tok[0] == "justify":
                current.justify.append(tok[1])
            elif tok[0] == "splits":
                current.splits = True
            elif side is None:
                raise RuleError(f"directive {tok[0]!r} before lhs/rhs")
            elif tok[0] == "vertex":
                side.vertices[tok[1]] = VertexKind(tok[2])
            elif tok[0] == "edge":
                gleam, rest = _gleam_arg(tok[4:])
                side.edges.append(PatEdge(tok[1], _end(tok[2]), _end(tok[3]), gleam,
                                          plain="plain" in rest, invert="invert" in rest))
            elif tok[0] == "port":
                gleam, rest = _gleam_arg(tok[3:])
                side.ports.append(PatPort(tok[1], _end(tok[2]), gleam, flip="flip" in rest))
            elif tok[0] == "through":
                gleam, rest = _gleam_arg(tok[3:])
                side.throughs.append(PatThrough(tok[1], tok[2], gleam, flip="flip" in rest))
            else:
                raise RuleError(f"unknown directive {tok[0]!r}")
        except (RuleError, ValueError, IndexError) as exc:
            raise RuleError(f"line {lineno}: {exc}") from None
    if current is not None:
        raise RuleError("unterminated rule")
    return rules


def _check_rule(rule: MoveRule) -> None:
    if rule.lhs.port_names() != rule.rhs.port_names():
        raise RuleError(f"rule {rule.label}: lhs and rhs interfaces differ")
    for side in (rule.lhs, rule.rhs):
        for e in side.edges:
            for v, _ in (e.a, e.b):
                if v not in side.vertices:
                    raise RuleError(f"rule {rule.label}: unknown pattern vertex {v!r}")
        for p in side.ports:
            if p.at[0] not in side.vertices:
                raise RuleError(f"rule {rule.label}: unknown pattern vertex {p.at[0]!r}")
    if rule.lhs.throughs and rule.lhs.vertices:
        raise RuleError(f"rule {rule.label}: a through pattern stands alone")


def load_rules(path: Optional[str] = None) -> Dict[Tuple[MoveKind, bool], MoveRule]:
    if path is None:
        text = resources.files("shadowknots").joinpath("data/moves.rules").read_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return parse_rules(text)


_DEFAULT_RULES: Optional[Dict[Tuple[MoveKind, bool], MoveRule]] = None


def default_rules() -> Dict[Tuple[MoveKind, bool], MoveRule]:
    global _DEFAULT_RULES
    if _DEFAULT_RULES is None:
        _DEFAULT_RULES = load_rules()
    return _DEFAULT_RULES


# ---------------------------------------------------------------------------
# matching
# ---------------------------------------------------------------------------

def slot_symmetries(kind: VertexKind) -> List[Tuple[int, ...]]:
    """Slot relabellings that leave the portion's presentation unchanged."""
    n = kind.valency
    if kind is K.P:
        return [tuple((i + r) % 3 for i in range(3)) for r in range(3)]
    if kind is K.Y111:
        return list(itertools.permutations(range(3)))
    return [tuple(range(n))]


@dataclass(frozen=True)
class Site:
    """A match of a rule's left-hand side in a graph."""

    kind: MoveKind
    inverse: bool
    vertices: Tuple[Tuple[str, str, Tuple[int, ...]], ...]
    edges: Tuple[Tuple[str, str], ...]
    ports: Tuple[Tuple[str, str], ...]

    def describe(self) -> str:
        vs = ", ".join(f"{p}={g}" for p, g, _ in self.vertices)
        es = ", ".join(f"{p}={g}" for p, g in self.edges + self.ports)
        return f"{self.kind}{'^-1' if self.inverse else ''}[{vs}; {es}]"


def _k_marked(g: DecoratedGraph) -> Tuple[FrozenSet[str], FrozenSet[str]]:
    bs = frozenset(g.vertices_of_kind(K.B))
    es = frozenset(eid for b in bs for eid in g.incident(b))
    return bs, es


def _bindings(rule: MoveRule, g: DecoratedGraph, site: Site) -> Optional[Dict[str, Fraction]]:
    env: Dict[str, Fraction] = {}
    checks: List[Tuple[Expr, Fraction]] = []
    emap = dict(site.edges)
    pmap = dict(site.ports)
    for e in rule.lhs.edges:
        checks.append((e.gleam, g.edges[emap[e.name]].decoration.value))
    for p in rule.lhs.ports:
        checks.append((p.gleam, g.edges[pmap[p.name]].decoration.value))
    for t in rule.lhs.throughs:
        checks.append((t.gleam, g.edges[pmap[t.a]].decoration.value))
    for expr, value in checks:
        var = expr.variable
        if var is not None:
            if var in env and env[var] != value:
                return None
            env[var] = value
        elif expr.evaluate({}) != value:
            return None
    for cond in rule.where:
        if not cond.evaluate(env):
            return None
    return env


def _match_vertices(rule: MoveRule, g: DecoratedGraph, banned_v: FrozenSet[str]):
    """Yield (vertex assignment, permutation) dicts for the lhs vertices."""
    names = list(rule.lhs.vertices)
    # order pattern vertices so that each one after the first is adjacent to
    # an earlier one through an internal edge
    order = [names[0]]
    while len(order) < len(names):
        for e in rule.lhs.edges:
            a, b = e.a[0], e.b[0]
            if (a in order) != (b in order):
                order.append(b if a in order else a)
                break
        else:
            raise RuleError(f"rule {rule.label}: lhs pattern is not connected")

    def extend(i, assign, perms):
        if i == len(order):
            yield dict(assign), dict(perms)
            return
        pname = order[i]
        kind = rule.lhs.vertices[pname]
        if i == 0:
            candidates = sorted(v for v in g.vertices_of_kind(kind) if v not in banned_v)
        else:
            candidates = set()
            for e in rule.lhs.edges:
                for mine, other in ((e.a, e.b), (e.b, e.a)):
                    if mine[0] == pname and other[0] in assign:
                        eid = g.edge_at(assign[other[0]], perms[other[0]][other[1]])
                        if eid is not None:
                            candidates.add(g.edges[eid].other(assign[other[0]])[0])
            candidates = sorted(candidates)
        for v in candidates:
            if v in assign.values() or v in banned_v or g.kind(v) is not kind:
                continue
            for perm in slot_symmetries(kind):
                assign[pname], perms[pname] = v, perm
                if _edges_consistent(rule, g, assign, perms):
                    yield from extend(i + 1, assign, perms)
                del assign[pname], perms[pname]

    yield from extend(0, {}, {})


def _edges_consistent(rule, g, assign, perms) -> bool:
    for e in rule.lhs.edges:
        if e.a[0] in assign and e.b[0] in assign:
            va, sa = assign[e.a[0]], perms[e.a[0]][e.a[1]]
            vb, sb = assign[e.b[0]], perms[e.b[0]][e.b[1]]
            eid = g.edge_at(va, sa)
            if eid is None:
                return False
            ge = g.edges[eid]
            if {ge.end_a, ge.end_b} != {(va, sa), (vb, sb)}:
                return False
    return True


def sites(g: DecoratedGraph, k: MoveKind, inverse: bool = False,
          justified: Iterable[str] = (), rules=None) -> List[Site]:
    """All matches of the rule for ``k`` in ``g``, in a deterministic order.

    ``justified`` is the set of edge ids for which the caller vouches for a
    compressing disk; rules with a ``justify`` clause only match there.
    """
    rules = rules or default_rules()
    k = MoveKind(k)
    if (k, inverse) not in rules:
        raise KeyError(f"no rule for {k}{' inverse' if inverse else ''}")
    rule = rules[(k, inverse)]
    justified = frozenset(justified)
    banned_v, banned_e = _k_marked(g)
    found: List[Site] = []
    if rule.lhs.throughs:
        (t,) = rule.lhs.throughs
        for eid in sorted(g.edges):
            if eid in banned_e:
                continue
            site = Site(k, inverse, (), (), ((t.a, eid), (t.b, eid)))
            if _accept(rule, g, site, justified, banned_e):
                found.append(site)
        return found
    for assign, perms in _match_vertices(rule, g, banned_v):
        emap, pmap = [], []
        ok = True
        inside = set(assign.values())
        for e in rule.lhs.edges:
            eid = g.edge_at(assign[e.a[0]], perms[e.a[0]][e.a[1]])
            emap.append((e.name, eid))
        for p in rule.lhs.ports:
            v, s = assign[p.at[0]], perms[p.at[0]][p.at[1]]
            eid = g.edge_at(v, s)
            if eid is None or g.edges[eid].other(v)[0] in inside:
                ok = False
                break
            pmap.append((p.name, eid))
        if not ok:
            continue
        used = [eid for _, eid in emap] + [eid for _, eid in pmap]
        if len(set(used)) != len(used):
            continue
        site = Site(k, inverse,
                    tuple((pn, assign[pn], perms[pn]) for pn in rule.lhs.vertices),
                    tuple(emap), tuple(pmap))
        if _accept(rule, g, site, justified, banned_e):
            found.append(site)
    unique = sorted(set(found), key=lambda s: s.describe())
    return unique


def _accept(rule, g, site, justified, banned_e) -> bool:
    for _, eid in site.edges + site.ports:
        if eid in banned_e:
            return False
    for e in rule.lhs.edges:
        if e.plain and g.edges[dict(site.edges)[e.name]].invert:
            return False
    for name in rule.justify:
        eid = dict(site.ports + site.edges).get(name)
        if eid not in justified:
            return False
    if _bindings(rule, g, site) is None:
        return False
    if rule.splits and not _split_ok(rule, g, site):
        return False
    return True


# ---------------------------------------------------------------------------
# rewriting
# ---------------------------------------------------------------------------

def _fresh(taken: set, prefix: str) -> str:
    i = 1
    while f"{prefix}{i}" in taken:
        i += 1
    name = f"{prefix}{i}"
    taken.add(name)
    return name


def _rewrite(rule: MoveRule, g: DecoratedGraph, site: Site) -> DecoratedGraph:
    env = _bindings(rule, g, site)
    if env is None:
        raise MoveError("site no longer satisfies the rule's constraints")
    matched_v = {gv for _, gv, _ in site.vertices}
    internal_e = {eid for _, eid in site.edges}
    pmap = dict(site.ports)
    # outside end, orientation and id of every port
    outside: Dict[str, Tuple[Tuple[str, int], bool, str]] = {}
    for t in rule.lhs.throughs:
        e = g.edges[pmap[t.a]]
        outside[t.a] = (e.end_a, e.invert, pmap[t.a])
        outside[t.b] = (e.end_b, False, pmap[t.a])
    for p in rule.lhs.ports:
        e = g.edges[pmap[p.name]]
        v = dict((pn, gv) for pn, gv, _ in site.vertices)[p.at[0]]
        outside[p.name] = (e.other(v), e.invert, pmap[p.name])

    vertices = {v: k for v, k in g.vertices.items() if v not in matched_v}
    edges = {eid: e for eid, e in g.edges.items()
             if eid not in internal_e and eid not in pmap.values()}
    taken_v = set(g.vertices)
    taken_e = set(g.edges)
    reuse_v = {pn: gv for pn, gv, _ in site.vertices}
    new_v: Dict[str, str] = {}
    for pname, kind in rule.rhs.vertices.items():
        if pname in reuse_v and reuse_v[pname] not in vertices:
            new_v[pname] = reuse_v[pname]
        else:
            new_v[pname] = _fresh(taken_v, pname)
        vertices[new_v[pname]] = kind

    def dec(expr: Expr) -> HalfInt:
        val = expr.evaluate(env)
        try:
            return HalfInt.of(Fraction(val))
        except ValueError:
            raise MoveError(f"rule {rule.label} produced a non-half-integral decoration") from None

    reuse_e = dict(site.edges)
    for e in rule.rhs.edges:
        eid = reuse_e.get(e.name)
        if eid is None or eid in edges:
            eid = _fresh(taken_e, e.name)
        edges[eid] = Edge((new_v[e.a[0]], e.a[1]), (new_v[e.b[0]], e.b[1]),
                          dec(e.gleam), e.invert)
    used_ids: set = set()
    for p in rule.rhs.ports:
        end, inv, eid = outside[p.name]
        if eid in used_ids or eid in edges:
            eid = _fresh(taken_e, "e")
        used_ids.add(eid)
        edges[eid] = Edge((new_v[p.at[0]], p.at[1]), end, dec(p.gleam), inv ^ p.flip)
    for t in rule.rhs.throughs:
        end_a, inv_a, eid = outside[t.a]
        end_b, inv_b, _ = outside[t.b]
        if eid in used_ids or eid in edges:
            eid = _fresh(taken_e, "e")
        used_ids.add(eid)
        edges[eid] = Edge(end_a, end_b, dec(t.gleam), inv_a ^ inv_b ^ t.flip)
    return DecoratedGraph(vertices, edges)


def _components(g: DecoratedGraph) -> List[set]:
    left = set(g.vertices)
    comps = []
    while left:
        comp = g.component_of(min(left))
        comps.append(comp)
        left -= comp
    return comps


def _restrict(g: DecoratedGraph, comp: set) -> DecoratedGraph:
    return DecoratedGraph({v: g.kind(v) for v in comp},
                          {eid: e for eid, e in g.edges.items() if e.end_a[0] in comp})


def certified_simply_connected(g: DecoratedGraph) -> bool:
    """True when the Tietze simplifier proves pi1 of the tree trivial."""
    return tietze_simplify(pi1_tree(g).presentation)[1]


def _split_ok(rule, g, site) -> bool:
    """A splitting move needs every piece without a B vertex to be simply connected.

    The discarded piece is glued back by a connected sum inside a simply
    connected shadow, so it cannot carry any fundamental group.
    """
    out = _rewrite(rule, g, site)
    for comp in _components(out):
        piece = _restrict(out, comp)
        if not piece.vertices_of_kind(K.B) and not certified_simply_connected(piece):
            return False
    return True


def apply(g: DecoratedGraph, k: MoveKind, s: Site, keep_K_side: Optional[str] = None,
          justified: Iterable[str] = (), rules=None) -> DecoratedGraph:
    """Rewrite ``g`` at site ``s``.

    For splitting moves ``keep_K_side`` names a vertex of the component to
    keep (the one containing the knot); it is required when the result is
    disconnected.
    """
    rules = rules or default_rules()
    k = MoveKind(k)
    if s.kind is not k:
        raise MoveError(f"site belongs to move {s.kind}, not {k}")
    rule = rules[(k, s.inverse)]
    justified = set(justified) | {eid for name in rule.justify
                                  for pn, eid in s.ports + s.edges if pn == name}
    if s not in sites(g, k, s.inverse, justified, rules):
        raise MoveError("stale site: it does not match the graph")
    out = _rewrite(rule, g, s)
    comps = _components(out)
    if len(comps) > 1:
        if keep_K_side is None:
            raise MoveError("the move disconnects the graph; keep_K_side is required")
        keep = next((c for c in comps if keep_K_side in c), None)
        if keep is None:
            raise MoveError(f"keep_K_side {keep_K_side!r} is not a vertex of the result")
        out = _restrict(out, keep)
    report = validate(out)
    if not report.ok:
        raise MoveError("move produced an invalid graph: " + "; ".join(report.messages()))
    return out


def null_homotopic_edges(g: DecoratedGraph) -> FrozenSet[str]:
    """Edges whose circle bounds on one side, by a Tietze certificate.

    Cutting the edge and replacing one side by a boundary vertex gives a
    tree whose fundamental group, if certified trivial, shows the circle is
    null-homotopic in that side.  These edges are safe places to add a
    compressing disk; the result is one source of ``justified`` tokens.
    """
    out = set()
    for eid, e in g.edges.items():
        for keep_end, cut_end in ((e.end_a, e.end_b), (e.end_b, e.end_a)):
            side = g.component_of(keep_end[0], skip_edges=[eid])
            if cut_end[0] in side:
                continue
            if any(g.kind(v) is K.B for v in side):
                continue
            vertices = {v: g.kind(v) for v in side}
            cap = "cut.B"
            while cap in vertices:
                cap += "_"
            vertices[cap] = K.B
            edges = {x: y for x, y in g.edges.items()
                     if y.end_a[0] in side and y.end_b[0] in side}
            edges[eid] = Edge(keep_end, (cap, 0), e.decoration, e.invert)
            sub = DecoratedGraph(vertices, edges)
            if tietze_simplify(pi1_tree(sub).presentation)[1]:
                out.add(eid)
                break
    return frozenset(out)
