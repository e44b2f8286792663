import itertools
import random

import pytest

from shadowknots.alexander import alexander_poly, kn_alexander
from shadowknots.egraph import (DecoratedGraph, Edge, GraphBuilder, HalfInt, VertexKind as K,
                                validate)
from shadowknots.fpgroup import gen, parse_presentation, tietze_simplify
from shadowknots.homology import abelianization, is_Z_generated_by
from shadowknots.knotshadow import (FAMILIES, CaseParams, Classification, KnotShadow,
                                    classify, family_graph, family_knot_group,
                                    family_presentation, gleam_of_loop,
                                    intersection_pairing, kn_graph, kn_target, knot_group,
                                    normal_form, unknot_group, verify_case_grid)
from shadowknots.vankampen import pi1_tree

from support import chain, small_trees


def test_gleam_of_loop():
    assert gleam_of_loop({"R": 1}, {"R": 5}) == HalfInt.of(5)
    assert gleam_of_loop({}, {}) == HalfInt.of(0)
    assert gleam_of_loop({"R1": 1, "R2": -1}, {"R1": 3, "R2": 3}) == HalfInt.of(0)
    assert gleam_of_loop({"R": 2}, {"R": "1/2"}) == HalfInt.of(1)


def test_intersection_pairing():
    assert intersection_pairing({"R": 1}, {"R": 1}, {"R": 7}) == HalfInt.of(7)
    assert intersection_pairing({"R": 1}, {"S": 1}, {"R": 1, "S": 1}) == HalfInt.of(0)
    p2, k3, gl = 3, 2, "5/2"
    c1 = {"R": -p2, "A": 1}
    c3 = {"R": -(2 ** k3), "B": 4}
    gleams = {"R": gl, "A": 0, "B": 0}
    assert intersection_pairing(c1, c3, gleams) == HalfInt.of(gl) * (p2 * 2 ** k3)


def test_knot_shadow_requires_one_b_vertex():
    with pytest.raises(ValueError):
        KnotShadow(chain(K.D, K.D), 0)
    with pytest.raises(ValueError):
        KnotShadow(chain(K.B, K.D), -1)


def test_disk_knot_group():
    assert knot_group(KnotShadow(chain(K.B, K.D), 0)) == unknot_group()


def test_disk_with_nonzero_gleam_is_not_a_knot_group():
    # pi1 of the disk kills gamma, so mu^g = 1; H1 = Z/g rules this input out
    group = abelianization(knot_group(KnotShadow(chain(K.B, K.D), 2))).group
    assert group.rank == 0 and group.torsion == (2,)


def test_knot_group_of_first_family():
    fam = FAMILIES["X3-i"]
    params = dict.fromkeys(fam.params, 0)
    params["m"] = 1
    p = knot_group(KnotShadow(family_graph(fam, params), 1))
    target = parse_presentation("gens: x,mu ; rels: x^2*mu^2*x^-1*mu^-2")
    assert normal_form(p) == normal_form(target)


@pytest.mark.parametrize("fid", ["X3-ii", "X4-iv", "X8-i", "X9-iv"])
def test_infinite_cyclic_families(fid):
    fam = FAMILIES[fid]
    for m, g in itertools.product(range(3), range(1, 4)):
        params = dict.fromkeys(fam.params, 0)
        params["m"] = m
        p = knot_group(KnotShadow(family_graph(fam, params), g))
        assert normal_form(p) == normal_form(unknot_group())


def test_classify_examples():
    assert classify(kn_graph(3)) == Classification("Kn", n=3)
    ks = kn_graph(-2, m=1)
    assert ks.g == 1
    assert classify(ks) == Classification("Kn", n=-2)
    zero = KnotShadow(kn_graph(3).xprime, 0)
    assert classify(zero).kind == Classification.UNKNOT
    on_k = KnotShadow(kn_graph(3).xprime, 3, vertex_on_K=True)
    assert classify(on_k).kind == Classification.INFINITE_CYCLIC
    assert classify(KnotShadow(chain(K.B, K.D), 4)).kind == Classification.UNKNOT


def test_classify_rejects_x10():
    fam = FAMILIES["X10-vi"]
    ks = KnotShadow(family_graph(fam, dict.fromkeys(fam.params, 0)), 1)
    result = classify(ks)
    assert result.kind == Classification.NOT_REALIZABLE
    assert "X10" in result.reason


def test_classify_h1_obstruction():
    fam = FAMILIES["X3-i"]
    params = dict.fromkeys(fam.params, 0)
    params["k1"] = 1
    result = classify(KnotShadow(family_graph(fam, params), 1))
    assert result == Classification(Classification.NOT_REALIZABLE, reason="H1 obstruction")


def test_classify_refuses_two_true_vertices():
    b = GraphBuilder()
    v = b.vertex(K.X3, "v")
    w = b.vertex(K.X3, "w")
    b.edge((b.vertex(K.B, "b"), 0), (v, 0))
    b.edge((v, 1), (w, 1))
    b.edge((w, 0), (b.vertex(K.D, "d"), 0))
    with pytest.raises(ValueError):
        classify(KnotShadow(b.build(), 1))


def test_classification_text():
    assert Classification("Kn", n=3).to_dict() == {"classification": "Kn", "n": 3}
    assert str(Classification("Kn", n=-1)) == "K_-1"


def test_family_graph_matches_family_presentation():
    rng = random.Random(3)
    for fid, fam in FAMILIES.items():
        for _ in range(4):
            params = {p: rng.randint(0, 2) for p in fam.params}
            from_graph = abelianization(pi1_tree(family_graph(fam, params)).presentation)
            direct = abelianization(family_presentation(fam, params))
            assert from_graph.group == direct.group, (fid, params)
            assert (is_Z_generated_by(pi1_tree(family_graph(fam, params)).presentation,
                                      gen("gamma"))
                    == is_Z_generated_by(family_presentation(fam, params), gen("gamma")))


def test_grid_examples():
    report = verify_case_grid("X3-i", CaseParams(2, 2))
    assert {tuple(sorted(s.items())) for s in report.survivors} == {
        tuple(sorted({"k0": 0, "k1": 0, "l": 0, "m": m, "g": g}.items()))
        for m in range(3) for g in (1, 2)}
    assert report.matches_paper
    assert verify_case_grid("X8-ii", CaseParams(2, 2)).survivors == []
    assert verify_case_grid("X11-i", CaseParams(1, 2)).survivors == []
    with pytest.raises(KeyError):
        verify_case_grid("X12")


def test_survivor_knot_groups_abelianize_to_z():
    for fid, fam in FAMILIES.items():
        for s in verify_case_grid(fid, CaseParams(2, 2)).survivors:
            params = {p: s[p] for p in fam.params}
            group = abelianization(family_knot_group(fam, params, s["g"])).group
            assert group.is_infinite_cyclic, (fid, s)


@pytest.mark.parametrize("n,m", [(1, 0), (-1, 0), (2, 1), (-2, 1), (3, 0), (-3, 0)])
def test_classify_is_invariant_under_invert_flags(n, m):
    ks = kn_graph(n, m)
    base = classify(ks)
    eids = sorted(ks.xprime.edges)
    for flags in itertools.product((False, True), repeat=len(eids)):
        edges = {eid: Edge(e.end_a, e.end_b, e.decoration, flag)
                 for (eid, e), flag in zip(sorted(ks.xprime.edges.items()), flags)}
        g = DecoratedGraph(dict(ks.xprime.vertices), edges)
        assert classify(KnotShadow(g, ks.g)) == base


@pytest.mark.parametrize("n", [1, -1, 2, -2, 3, -3, 4, -4, 5, -5])
def test_classification_agrees_with_alexander(n):
    for m in range(3):
        if abs(n) % 2 ** m:
            continue
        ks = kn_graph(n, m)
        c = classify(ks)
        assert c == Classification("Kn", n=n)
        assert alexander_poly(knot_group(ks)) == kn_alexander(c.n)
        assert normal_form(knot_group(ks)) == normal_form(kn_target(n))


def test_unknot_iff_certificate_on_small_trees():
    count = 0
    for g in small_trees(6):
        if not validate(g, strict_simply_connected=True).ok:
            continue
        ks = KnotShadow(g, 0)
        certified = tietze_simplify(knot_group(ks))[0] == unknot_group()
        assert (classify(ks).kind == Classification.UNKNOT) == certified
        count += 1
    assert count > 0
