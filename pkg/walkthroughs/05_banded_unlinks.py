"""
Banded unlink diagrams
======================

A banded unlink diagram is a planar map: circles of an unlink, bands
attached to them, and crossings.  Its shadow has one true vertex per
crossing and per band end, and its knot group comes from the band words.
"""

from shadowknots import (alexander_poly, collapse_bound, gen_Kn, gen_twist_spun, kn_alexander,
                         knot_group_of, serialize_bud, shadow_of, tietze_simplify)

# The k-twist spun trefoil-type torus knots T(2, 2n+1).
d = gen_twist_spun(1, 2)
report = shadow_of(d)
print(report.true_vertices, report.crossings, report.band_ends)
print(report.gleam_sum_over_K, dict(report.linking))
print(collapse_bound(d))

# The .bud text of a diagram.
print(serialize_bud(gen_Kn(1)))

# One-band ribbon diagrams for K_n reproduce the Alexander polynomials.
for n in (1, -1, 3, -3):
    group = tietze_simplify(knot_group_of(gen_Kn(n)))[0]
    print(n, alexander_poly(group), alexander_poly(group).equivalent(kn_alexander(n)))
