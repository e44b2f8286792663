"""
Knot shadows, knot groups and K_n
=================================

A knot shadow is an encoding graph together with the gleam ``g`` of the
region next to the knot.  Adjoining a meridian ``mu`` with the relation
``gamma = mu^g`` gives the knot group.
"""

from shadowknots import (KnotShadow, alexander_poly, classify, kn_alexander, kn_graph,
                         kn_target, knot_group, normal_form, tietze_simplify)

# The K_n shadows: one X3 (n > 0) or X4 (n < 0) portion, m one-sided Y12
# vertices and boundary gleam g with |n| = 2^m g.
for n, m in [(3, 0), (-2, 1), (4, 2)]:
    ks = kn_graph(n, m)
    group = tietze_simplify(knot_group(ks))[0]
    print(n, m, ks.g, classify(ks), normal_form(group) == normal_form(kn_target(n)))

# The Alexander polynomial comes from the Fox Jacobian of a deficiency-one
# presentation.  Mirror images share it, so K_n and K_-n are told apart by
# the shape 2 - t^n against 1 - t^n + t^2n.
for n in (1, -1, 2, -2):
    print(n, alexander_poly(kn_target(n)), kn_alexander(n))

# Gleam zero always gives the unknot, and a true vertex on the knot gives Z.
print(classify(KnotShadow(kn_graph(3).xprime, 0)))
print(classify(KnotShadow(kn_graph(3).xprime, 3, vertex_on_K=True)))
