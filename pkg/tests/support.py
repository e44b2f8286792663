"""Shared builders and oracles for the test suite."""

import itertools
import math
import random
from pathlib import Path

import networkx as nx

from shadowknots.egraph import DecoratedGraph, Edge, GraphBuilder, VertexKind as K
from shadowknots.fpgroup import gen
from shadowknots.homology import abelianization
from shadowknots.knotshadow import FAMILIES, KnotShadow, classify, family_graph
from shadowknots.vankampen import pi1_tree

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"

SURVIVING_FAMILIES = ("X3-i", "X4-iii", "X8-i", "X9-iv")

# boundary words of each slot, in slot order
PORTION_WORDS = {
    "P": ["x", "y", "z"], "Y2": ["x^2"], "Y3": ["x^3"], "Y12": ["x", "x^2"],
    "Y111": ["x", "x", "x"], "X3": ["y", "x*y*x^-2*y^-1"], "X4": ["y", "x*y*x^-2*y"],
    "X8": ["x*y*x^-1*y^-1", "x", "y"], "X9": ["x*y*x*y^-1", "x", "y"],
    "X10": ["y", "x*y", "x^2*y^-1"], "X11": ["x", "y", "x*y", "x*y^-1"],
    "X1": ["x*y*x^-2*y^-2"], "X2": ["x*y*x^2*y^-2"], "X5": ["y", "x*y*x^2*y^-1"],
    "X6": ["x*y", "x^2*y^-2"], "X7": ["x*y^2", "x^2*y^-1"],
}
PORTION_RELATORS = {"P": ["x*y*z"]}

# pi1 of each portion capped by disks, simplified by hand
CLOSURE_GROUPS = {
    "D": "gens: ; rels: ", "P": "gens: ; rels: ", "Y12": "gens: ; rels: ",
    "Y111": "gens: ; rels: ", "Y2": "gens: x ; rels: x^2", "Y3": "gens: x ; rels: x^3",
    "X1": "gens: x,y ; rels: x*y*x^-2*y^-2", "X2": "gens: x,y ; rels: x*y*x^2*y^-2",
    "X3": "gens: ; rels: ", "X4": "gens: ; rels: ", "X5": "gens: x ; rels: x^3",
    "X6": "gens: x ; rels: x^4", "X7": "gens: x ; rels: x^5", "X8": "gens: ; rels: ",
    "X9": "gens: ; rels: ", "X10": "gens: ; rels: ", "X11": "gens: ; rels: ",
}


def corpus_files(suffix):
    return sorted(CORPUS.glob(f"*{suffix}"))


def chain(*kinds_and_slots):
    """A path graph.  Arguments alternate kind and (in_slot, out_slot).

    ``chain(K.B, K.Y12, (0, 1), K.D)`` is B joined to slot 0 of a Y12 whose
    slot 1 is joined to D.  Leaves take no slot tuple.
    """
    b = GraphBuilder()
    items = list(kinds_and_slots)
    prev = None
    i = 0
    while i < len(items):
        kind = items[i]
        slots = (0, 0)
        if i + 1 < len(items) and isinstance(items[i + 1], tuple):
            slots = items[i + 1]
            i += 1
        vid = b.vertex(kind, f"v{len(b.vertices)}")
        if prev is not None:
            b.edge(prev, (vid, slots[0]))
        prev = (vid, slots[1])
        i += 1
    return b.build()


def portion_closure(kind, cap=K.D):
    """One portion with every slot capped by ``cap`` (each cap gets its own vertex)."""
    b = GraphBuilder()
    v = b.vertex(kind, "v")
    for s in range(kind.valency):
        b.edge((v, s), (b.vertex(cap, f"c{s}"), 0))
    return b.build()


def small_trees(max_vertices):
    """Every tree on at most ``max_vertices`` vertices over D, P, Y12, Y111 plus one B.

    Degree-1 vertices are the B vertex and D caps, degree-2 vertices are Y12
    in both orientations and degree-3 vertices are P or Y111.  Slots of P and
    Y111 are assigned in breadth-first order; their boundary circles are
    interchangeable, so no other assignment gives a different polyhedron.
    """
    for n in range(2, max_vertices + 1):
        for t in nx.nonisomorphic_trees(n):
            if max(d for _, d in t.degree()) > 3:
                continue
            leaves = [v for v in t if t.degree(v) == 1]
            twos = [v for v in t if t.degree(v) == 2]
            threes = [v for v in t if t.degree(v) == 3]
            for root in leaves:
                for k3 in itertools.product((K.P, K.Y111), repeat=len(threes)):
                    for flips in itertools.product((0, 1), repeat=len(twos)):
                        yield _tree_graph(t, root, leaves, dict(zip(threes, k3)),
                                          dict(zip(twos, flips)))


def _tree_graph(t, root, leaves, kind3, flip):
    kind = {root: K.B, **{v: K.D for v in leaves if v != root}, **kind3,
            **{v: K.Y12 for v in flip}}
    b = GraphBuilder()
    for v in t:
        b.vertex(kind[v], "b" if v == root else f"v{v}")
    next_slot = {v: 0 for v in t}

    def slot(v, toward_root):
        if kind[v] is K.Y12:
            return flip[v] if toward_root else 1 - flip[v]
        s = next_slot[v]
        next_slot[v] += 1
        return s

    name = {v: "b" if v == root else f"v{v}" for v in t}
    for u, w in nx.bfs_edges(t, root):
        b.edge((name[u], slot(u, False)), (name[w], slot(w, True)))
    return b.build()


def random_family_shadow(rng: random.Random, families=SURVIVING_FAMILIES) -> KnotShadow:
    """A surviving complexity-one shadow with random free parameters and g."""
    fam = FAMILIES[rng.choice(list(families))]
    params = dict.fromkeys(fam.params, 0)
    for p in fam.params:
        if p not in ("k0", "k1", "l"):
            params[p] = rng.randint(0, 2)
    return KnotShadow(family_graph(fam, params), rng.randint(1, 3))


def element_order(image, orders):
    """Order of an element of Z/d1 + ... + Z^r given in SNF coordinates (0 = infinite)."""
    total = 1
    for c, d in zip(image, orders):
        if d == 0:
            if c:
                return 0
        else:
            o = d // math.gcd(c, d)
            total = total * o // math.gcd(total, o)
    return total


def homology_signature(g: DecoratedGraph, gg=None):
    """Basis-free data of H1 and the boundary class of the B vertex ``b``.

    Returns H1, the quotient H1 / <[gamma]>, the order of [gamma] and, when
    ``gg`` is given and the tree has at most one true vertex, the
    classification of the shadow with boundary gleam ``gg``.
    """
    r = pi1_tree(g)
    p = r.presentation
    ab = abelianization(p)
    gamma = r.boundary_classes["b"]
    quotient = abelianization(p.with_relators(gen(gamma))).group
    verdict = None
    if gg is not None and sum(1 for k in g.vertices.values() if k.is_x) <= 1:
        verdict = classify(KnotShadow(g, gg))
    return ab.group, quotient, element_order(ab.image(gen(gamma)), ab.orders), verdict


def graph_signature(g: DecoratedGraph):
    """A networkx graph carrying kinds, slots, decorations and flags, for isomorphism tests."""
    h = nx.Graph()
    for v, k in g.vertices.items():
        h.add_node(v, kind=k.value)
    for eid, e in g.edges.items():
        mid = ("edge", eid)
        h.add_node(mid, kind=f"edge {e.decoration} {e.invert}")
        h.add_edge(mid, e.end_a[0], slot=e.end_a[1])
        h.add_edge(mid, e.end_b[0], slot=e.end_b[1])
    return h


def isomorphic(g1: DecoratedGraph, g2: DecoratedGraph) -> bool:
    return nx.is_isomorphic(graph_signature(g1), graph_signature(g2),
                            node_match=lambda a, b: a["kind"] == b["kind"],
                            edge_match=lambda a, b: a["slot"] == b["slot"])


def move_walk(key, applications, rng, rules):
    """Apply the rule ``key`` ``applications`` times along a random walk.

    When the rule has no site the walk takes a step with another rule, and it
    restarts from a fresh family shadow when the graph grows past 20 vertices
    or at random.  Yields ``(rule_key, before, after)`` signature pairs for
    every step, so callers see scrambling steps as well as target steps.
    Returns early (after 5000 steps) when the rule never finds a site.
    """
    from shadowknots.moves import apply, null_homotopic_edges, sites

    keys = sorted(rules, key=str)
    ks = random_family_shadow(rng)
    g, gg = ks.xprime, ks.g
    cur = homology_signature(g, gg)
    done = 0
    for _ in range(5000):
        if done >= applications:
            return
        justified = null_homotopic_edges(g)
        found = sites(g, key[0], key[1], justified, rules)
        step = key
        if not found:
            step = rng.choice(keys)
            found = sites(g, step[0], step[1], justified, rules)
        if found:
            keep = "b" if rules[step].splits else None
            g = apply(g, step[0], rng.choice(found), keep_K_side=keep,
                      justified=justified, rules=rules)
            new = homology_signature(g, gg)
            yield step, cur, new
            cur = new
            if step == key:
                done += 1
        if len(g.vertices) > 20 or rng.random() < 0.05:
            ks = random_family_shadow(rng)
            g, gg = ks.xprime, ks.g
            cur = homology_signature(g, gg)


def same_signature(a, b):
    """Signatures agree; a classification is compared only when both sides have one."""
    return a[:3] == b[:3] and (a[3] is None or b[3] is None or a[3] == b[3])


def renamed(g: DecoratedGraph, mapping):
    """The same graph with vertices renamed by ``mapping`` (others unchanged)."""
    def end(e):
        return (mapping.get(e[0], e[0]), e[1])
    return DecoratedGraph({mapping.get(v, v): k for v, k in g.vertices.items()},
                          {eid: Edge(end(e.end_a), end(e.end_b), e.decoration, e.invert)
                           for eid, e in g.edges.items()})
