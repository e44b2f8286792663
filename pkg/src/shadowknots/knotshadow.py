"""Knot groups and the complexity-one classification of 2-knot shadows.

A :class:`KnotShadow` is the normalized data the classifier works with: the
tree ``xprime`` encoding the complement of the knot's neighbourhood in the
shadow (its single B vertex is the boundary circle ``gamma``), the gleam
``g`` of the knot's positive disk region and whether the true vertex lies on
the knot.

The module also holds the fourteen complexity-one graph families together
with the grid verifier that re-derives which parameter tuples can encode a
2-knot.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Tuple

from .egraph import (DecoratedGraph, GraphBuilder, HalfInt, VertexKind, geodesic,
                     one_sided_y12_count, validate)
from .fpgroup import (Presentation, Word, concat, gen, inverse, power, rename,
                      tietze_simplify)
from .homology import is_Z_generated_by
from .vankampen import pi1_tree

K = VertexKind
MERIDIAN = "mu"

Chain2 = Mapping[str, int]


# ---------------------------------------------------------------------------
# gleams and the intersection form
# ---------------------------------------------------------------------------

def _gleam(gleams: Mapping[str, object], region: str) -> HalfInt:
    if region not in gleams:
        raise KeyError(f"region {region!r} has no gleam")
    return HalfInt.of(gleams[region])


def gleam_of_loop(c: Chain2, gleams: Mapping[str, object]) -> HalfInt:
    """Gleam of a loop bounding the 2-chain ``c``: the weighted gleam sum."""
    total = HalfInt(0)
    for region, coeff in c.items():
        total = total + _gleam(gleams, region) * int(coeff)
    return total


def intersection_pairing(a: Chain2, b: Chain2, gleams: Mapping[str, object]) -> HalfInt:
    """Intersection form of two 2-chains: sum of a_i * b_i * gl(R_i)."""
    total = HalfInt(0)
    for region in sorted(set(a) & set(b)):
        total = total + _gleam(gleams, region) * (int(a[region]) * int(b[region]))
    return total


# ---------------------------------------------------------------------------
# knot shadows
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KnotShadow:
    xprime: DecoratedGraph
    g: int
    vertex_on_K: bool = False

    def __post_init__(self):
        if not isinstance(self.g, int) or self.g < 0:
            raise ValueError("g must be a nonnegative integer")
        report = validate(self.xprime)
        if not report.ok:
            raise ValueError("xprime is not a valid tree: " + "; ".join(report.messages()))
        if len(self.xprime.vertices_of_kind(K.B)) != 1:
            raise ValueError("xprime must have exactly one B vertex")

    @property
    def boundary_vertex(self) -> str:
        return self.xprime.vertices_of_kind(K.B)[0]


def knot_group(ks: KnotShadow, budget: int = 10_000) -> Presentation:
    """Presentation of G(K) with meridian ``mu``, Tietze-simplified."""
    r = pi1_tree(ks.xprime)
    gamma = r.boundary_classes[ks.boundary_vertex]
    p = r.presentation
    raw = Presentation(p.generators + (MERIDIAN,),
                       p.relators + (concat(gen(gamma), gen(MERIDIAN, -ks.g)),),
                       MERIDIAN)
    simplified, _ = tietze_simplify(raw, budget=budget)
    return simplified


def normal_form(p: Presentation) -> Presentation:
    """Canonical form for comparing knot groups.

    Non-meridian generators are renamed ``x``, ``x2``, ... in their current
    order and every relator is replaced by its least cyclic/inverse
    representative; relators are then sorted.
    """
    others = [s for s in p.generators if s != p.meridian]
    mapping = {s: ("x" if i == 0 else f"x{i + 1}") for i, s in enumerate(others)}
    if p.meridian is not None:
        mapping[p.meridian] = MERIDIAN
    renamed = Presentation(tuple(mapping[s] for s in p.generators),
                           tuple(rename(r, mapping) for r in p.relators),
                           MERIDIAN if p.meridian is not None else None)
    return renamed.canonical()


def kn_target(n: int) -> Presentation:
    """The presentation <x, mu | x^2 mu^|n| x^-1 mu^-n> of the group of K_n."""
    if n == 0:
        raise ValueError("n must be nonzero")
    rel = concat(gen("x", 2), gen(MERIDIAN, abs(n)), gen("x", -1), gen(MERIDIAN, -n))
    return Presentation(("x", MERIDIAN), (rel,), MERIDIAN)


def unknot_group() -> Presentation:
    return Presentation((MERIDIAN,), (), MERIDIAN)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    kind: str
    n: Optional[int] = None
    reason: Optional[str] = None

    UNKNOT = "Unknot"
    KN = "Kn"
    INFINITE_CYCLIC = "InfiniteCyclicGroup"
    NOT_REALIZABLE = "NotRealizable"

    def to_dict(self) -> Dict[str, object]:
        out: Dict[str, object] = {"classification": self.kind}
        if self.n is not None:
            out["n"] = self.n
        if self.reason is not None:
            out["reason"] = self.reason
        return out

    def __str__(self) -> str:
        if self.kind == self.KN:
            return f"K_{self.n}"
        if self.reason:
            return f"{self.kind} ({self.reason})"
        return self.kind


ACCEPTED_X = (K.X3, K.X4, K.X8, K.X9)


def classify(ks: KnotShadow) -> Classification:
    """Decide which 2-knot a complexity-at-most-one shadow presents."""
    g = ks.xprime
    xs = [v for v, k in g.vertices.items() if k.is_x]
    if len(xs) > 1:
        raise ValueError("more than one true vertex: complexity exceeds one")
    if ks.vertex_on_K:
        return Classification(Classification.INFINITE_CYCLIC,
                              reason="true vertex on K")
    if ks.g == 0 or not xs:
        return Classification(Classification.UNKNOT)
    v0 = xs[0]
    kind = g.kind(v0)
    if kind not in ACCEPTED_X:
        return Classification(Classification.NOT_REALIZABLE,
                              reason=f"vertex kind {kind} cannot occur")
    r = pi1_tree(g)
    b = ks.boundary_vertex
    if not is_Z_generated_by(r.presentation, gen(r.boundary_classes[b])):
        return Classification(Classification.NOT_REALIZABLE, reason="H1 obstruction")
    if kind in (K.X3, K.X4):
        path = geodesic(g, b, v0)
        entry_slot = g.edges[path.edges[-1]].end_at(v0)[1]
        if entry_slot == 0:
            m = one_sided_y12_count(g, b, v0)
            n = (2 ** m) * ks.g
            return Classification(Classification.KN, n=n if kind is K.X3 else -n)
    return Classification(Classification.INFINITE_CYCLIC)


# ---------------------------------------------------------------------------
# complexity-one families
# ---------------------------------------------------------------------------

PARAM_NAMES = ("k0", "k1", "k2", "k3", "l", "m")


@dataclass(frozen=True)
class Family:
    """One complexity-one graph pattern.

    ``u_slot`` is the slot of the X vertex glued to the two-ended piece U
    (which contains the boundary circle gamma); ``v_slots`` lists the slots
    glued to the one-ended pieces V1, V2, ...
    """

    fid: str
    kind: VertexKind
    u_slot: int
    v_slots: Tuple[int, ...]
    expected_survivors: str       # "none" or "k0=k1=l=0"
    expected_group: str           # "none", "Z", "Kn+" or "Kn-"

    @property
    def params(self) -> Tuple[str, ...]:
        ks = tuple(f"k{i}" for i in range(len(self.v_slots) + 1))
        return ks + ("l", "m")


FAMILIES: Mapping[str, Family] = {f.fid: f for f in (
    Family("X3-i", K.X3, 0, (1,), "k0=k1=l=0", "Kn+"),
    Family("X3-ii", K.X3, 1, (0,), "k0=k1=l=0", "Z"),
    Family("X4-iii", K.X4, 0, (1,), "k0=k1=l=0", "Kn-"),
    Family("X4-iv", K.X4, 1, (0,), "k0=k1=l=0", "Z"),
    Family("X8-i", K.X8, 1, (2, 0), "k0=k1=l=0", "Z"),
    Family("X8-ii", K.X8, 0, (1, 2), "none", "none"),
    Family("X9-iii", K.X9, 1, (2, 0), "none", "none"),
    Family("X9-iv", K.X9, 2, (1, 0), "k0=k1=l=0", "Z"),
    Family("X9-v", K.X9, 0, (1, 2), "none", "none"),
    Family("X10-vi", K.X10, 0, (1, 2), "none", "none"),
    Family("X10-vii", K.X10, 1, (0, 2), "none", "none"),
    Family("X10-viii", K.X10, 2, (0, 1), "none", "none"),
    Family("X11-i", K.X11, 0, (1, 2, 3), "none", "none"),
    Family("X11-ii", K.X11, 2, (0, 1, 3), "none", "none"),
)}


def _gamma_i(i: int) -> str:
    return f"gamma{i}"


def family_presentation(fam: Family, params: Mapping[str, int]) -> Presentation:
    """pi1(X') assembled from the parametric presentations of U and the V_i.

    U contributes <gamma, gamma0 | (gamma^(2^m) gamma0^(2^l))^(2^k0)>, each
    V_i contributes <gamma_i | gamma_i^(2^k_i)>, and every cut end is equated
    with the X vertex's boundary word of the slot it is glued to.
    """
    from .egraph import PORTIONS
    spec = PORTIONS[fam.kind]
    local = {"x": "x", "y": "y"}
    m, l, k0 = params["m"], params["l"], params["k0"]
    rels: List[Word] = [power(concat(gen("gamma", 2 ** m), gen(_gamma_i(0), 2 ** l)), 2 ** k0)]
    rels.append(concat(gen(_gamma_i(0)), inverse(rename(spec.slots[fam.u_slot].word, local))))
    for i, slot in enumerate(fam.v_slots, start=1):
        rels.append(gen(_gamma_i(i), 2 ** params[f"k{i}"]))
        rels.append(concat(gen(_gamma_i(i)), inverse(rename(spec.slots[slot].word, local))))
    gens = ("x", "y", "gamma") + tuple(_gamma_i(i) for i in range(len(fam.v_slots) + 1))
    return Presentation(gens, tuple(rels))


def _chain(b: GraphBuilder, start: Tuple[str, int], count: int,
           enter_slot: int) -> Tuple[str, int]:
    """Attach ``count`` Y12 vertices in a row, each entered through ``enter_slot``."""
    end = start
    for _ in range(count):
        y = b.vertex(K.Y12)
        b.edge(end, (y, enter_slot))
        end = (y, 1 - enter_slot)
    return end


def family_graph(fam: Family, params: Mapping[str, int]) -> DecoratedGraph:
    """A concrete tree realizing ``family_presentation`` for the given parameters.

    U is a pair of pants whose three legs carry chains of Y12 vertices: m of
    them entered through the length-1 slot from the B side, l entered
    through the length-2 slot on the way to the X vertex, and k0 ending in a
    disk.  Each V_i is a chain of k_i Y12 vertices ending in a disk.
    """
    b = GraphBuilder()
    bv = b.vertex(K.B, "b")
    xv = b.vertex(fam.kind, "v0")
    p = b.vertex(K.P, "p")
    end = _chain(b, (bv, 0), params["m"], 0)
    b.edge(end, (p, 0))
    end = _chain(b, (p, 1), params["l"], 1)
    b.edge(end, (xv, fam.u_slot))
    end = _chain(b, (p, 2), params["k0"], 0)
    b.edge(end, (b.vertex(K.D), 0))
    for i, slot in enumerate(fam.v_slots, start=1):
        end = _chain(b, (xv, slot), params[f"k{i}"], 0)
        b.edge(end, (b.vertex(K.D), 0))
    return b.build()


def kn_graph(n: int, m: int = 0) -> KnotShadow:
    """A complexity-one shadow of K_n: family X3-i (n > 0) or X4-iii (n < 0).

    ``m`` one-sided Y12 vertices sit between gamma and the X vertex; the
    boundary gleam is g = |n| / 2^m, which must be an integer.
    """
    if n == 0:
        raise ValueError("n must be nonzero")
    g, rem = divmod(abs(n), 2 ** m)
    if rem:
        raise ValueError(f"|n| = {abs(n)} is not divisible by 2^{m}")
    fam = FAMILIES["X3-i" if n > 0 else "X4-iii"]
    params = dict.fromkeys(fam.params, 0)
    params["m"] = m
    return KnotShadow(family_graph(fam, params), g)


# ---------------------------------------------------------------------------
# grid verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CaseParams:
    max_param: int = 3
    max_g: int = 3


@dataclass
class GridReport:
    family: str
    survivors: List[Dict[str, int]]
    knot_groups: List[str]
    conclusion: str
    matches_paper: bool
    checked: int

    def to_dict(self) -> Dict[str, object]:
        return {"family": self.family, "survivors": self.survivors,
                "knot_groups": self.knot_groups, "conclusion": self.conclusion,
                "matches_paper": self.matches_paper, "checked": self.checked}


@lru_cache(maxsize=None)
def _h1_ok(fid: str, values: Tuple[int, ...]) -> bool:
    fam = FAMILIES[fid]
    params = dict(zip(fam.params, values))
    return is_Z_generated_by(family_presentation(fam, params), gen("gamma"))


def family_knot_group(fam: Family, params: Mapping[str, int], g: int) -> Presentation:
    p = family_presentation(fam, params)
    raw = Presentation(p.generators + (MERIDIAN,),
                       p.relators + (concat(gen("gamma"), gen(MERIDIAN, -g)),), MERIDIAN)
    return tietze_simplify(raw)[0]


def _expected_group(fam: Family, params: Mapping[str, int], g: int) -> Optional[Presentation]:
    if fam.expected_group == "Z":
        return unknot_group()
    if fam.expected_group in ("Kn+", "Kn-"):
        n = (2 ** params["m"]) * g
        return kn_target(n if fam.expected_group == "Kn+" else -n)
    return None


def _expected_survivor(fam: Family, params: Mapping[str, int]) -> bool:
    if fam.expected_survivors == "none":
        return False
    return params["k0"] == 0 and params["k1"] == 0 and params["l"] == 0


def verify_case_grid(family: str, bounds: CaseParams = CaseParams()) -> GridReport:
    """Evaluate the H1 condition over the whole parameter grid of one family."""
    if family not in FAMILIES:
        raise KeyError(f"unknown family {family!r}; known: {', '.join(FAMILIES)}")
    fam = FAMILIES[family]
    survivors: List[Dict[str, int]] = []
    groups: List[str] = []
    matches = True
    checked = 0
    rng = range(bounds.max_param + 1)
    for values in itertools.product(rng, repeat=len(fam.params)):
        params = dict(zip(fam.params, values))
        ok = _h1_ok(fam.fid, values)
        if ok != _expected_survivor(fam, params):
            matches = False
        for g in range(1, bounds.max_g + 1):
            checked += 1
            if not ok:
                continue
            survivors.append(dict(params, g=g))
            kg = family_knot_group(fam, params, g)
            groups.append(str(normal_form(kg)))
            expected = _expected_group(fam, params, g)
            if expected is None or normal_form(kg) != normal_form(expected):
                matches = False
    if not survivors:
        conclusion = "no survivors: the family encodes no 2-knot"
    else:
        free = [p for p in fam.params if p not in ("k0", "k1", "l")]
        pinned = sorted({k for k in ("k0", "k1", "l")
                         if all(s[k] == 0 for s in survivors)})
        desc = {"Z": "G(K) = Z",
                "Kn+": "G(K) = <x,mu | x^2 mu^n x^-1 mu^-n>, n = 2^m g",
                "Kn-": "G(K) = <x,mu | x^2 mu^|n| x^-1 mu^|n|>, n = -2^m g",
                "none": "unexpected survivors"}[fam.expected_group]
        conclusion = (f"survivors have {'='.join(pinned)}=0 with {', '.join(free)} and g free; "
                      f"{desc}")
    return GridReport(family, survivors, groups, conclusion, matches, checked)
