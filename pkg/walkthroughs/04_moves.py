"""
Rewriting shadows with moves
============================

Moves are rewrite rules on encoding graphs, read from a small rule table.
``sites`` lists the matches of a rule, and ``apply`` rewrites one of them.
The edge at the B vertex belongs to the knot and is never touched.
"""

from shadowknots import (KnotShadow, MoveKind, abelianization, apply, classify, kn_graph,
                         null_homotopic_edges, pi1_tree, serialize_egf, sites)

ks = kn_graph(3)
g = ks.xprime

# Adding a vertical compressing disk needs an edge whose circle bounds a
# disk on one side.  null_homotopic_edges certifies such edges.
justified = null_homotopic_edges(g)
print(sorted(justified))
site = sites(g, MoveKind.VerticalDiskAdd, justified=justified)[0]
print(site.describe())
grown = apply(g, MoveKind.VerticalDiskAdd, site, justified=justified)
print(serialize_egf(grown))

# Connected-sum reduction removes the gleam-0 disk again and keeps the
# piece that contains the knot.
site = sites(grown, MoveKind.ConnectedSumReduce)[0]
reduced = apply(grown, MoveKind.ConnectedSumReduce, site, keep_K_side="b")

# Homology and the classification are unchanged along the way.
for h in (g, grown, reduced):
    print(abelianization(pi1_tree(h).presentation).group, classify(KnotShadow(h, ks.g)))
