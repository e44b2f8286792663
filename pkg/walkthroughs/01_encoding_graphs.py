"""
Encoding graphs and their fundamental groups
============================================

An encoding graph is a tree of portions glued along boundary circles.  Van
Kampen along the tree edges turns it into a group presentation, and the
boundary circle of the B vertex gets a named class ``gamma``.
"""

from shadowknots import (GraphBuilder, VertexKind as K, abelianization, parse_egf,
                         pi1_tree, serialize_egf, tietze_simplify, validate)

# Build B - Y12 - D by hand.  The B vertex meets the length-2 slot of the
# Y12, so gamma is the square of the core of the Moebius band, and the disk
# on the length-1 slot kills the core itself.
b = GraphBuilder()
b.edge((b.vertex(K.B, "b"), 0), (b.vertex(K.Y12, "y"), 1))
b.edge(("y", 0), (b.vertex(K.D, "d"), 0))
g = b.build()
print(validate(g).ok)

# The .egf text form round-trips exactly.
text = serialize_egf(g)
print(text)
assert parse_egf(text) == g

# pi1 of the polyhedron, its Tietze simplification and its abelianization.
result = pi1_tree(g)
print(result.presentation)
print(result.boundary_classes)
simplified, certified_trivial = tietze_simplify(result.presentation)
print(simplified, certified_trivial)
print(abelianization(result.presentation).group)

# Swapping the slots caps the length-2 circle instead.  Only the square of
# the core dies, and the group is Z/2.
b = GraphBuilder()
b.edge((b.vertex(K.B, "b"), 0), (b.vertex(K.Y12, "y"), 0))
b.edge(("y", 1), (b.vertex(K.D, "d"), 0))
swapped = pi1_tree(b.build()).presentation
print(tietze_simplify(swapped)[0], abelianization(swapped).group)
