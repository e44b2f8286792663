"""Shadow calculus for 2-knots in the 4-sphere.

The package works with exact integers and rationals throughout.  Its layers:

* ``egraph``: decorated encoding graphs, validation and the ``.egf`` format.
* ``fpgroup``: words, presentations, Tietze moves and Fox derivatives.
* ``homology``: Smith normal form and abelianizations.
* ``vankampen``: the fundamental group of a tree-shaped polyhedron.
* ``knotshadow``: knot groups of shadows, the classifier and the case grid.
* ``alexander``: Laurent polynomials and Alexander polynomials.
* ``moves``: rule-driven graph moves.
* ``banded``: banded unlink diagrams, their shadows and generators.
* ``cli``: the ``shadowknots`` command.
"""

from .alexander import LaurentPoly, alexander_poly, kn_alexander
from .banded import (BandedUnlinkDiagram, BudError, ShadowReport, collapse_bound, gen_Kn,
                     gen_twist_spun, knot_group_of, parse_bud, serialize_bud, shadow_of)
from .egraph import (DecoratedGraph, EgfSyntaxError, GraphBuilder, HalfInt, ValidationReport,
                     VertexKind, parse_egf, serialize_egf, validate)
from .fpgroup import Presentation, parse_presentation, tietze_simplify
from .homology import AbelianGroup, abelianization, is_Z_generated_by, snf
from .knotshadow import (FAMILIES, CaseParams, Classification, KnotShadow, classify,
                         kn_graph, kn_target, knot_group, normal_form, verify_case_grid)
from .moves import MoveKind, apply, default_rules, load_rules, null_homotopic_edges, sites
from .vankampen import pi1_tree

__all__ = [
    "AbelianGroup", "BandedUnlinkDiagram", "BudError", "CaseParams", "Classification",
    "DecoratedGraph", "EgfSyntaxError", "FAMILIES", "GraphBuilder", "HalfInt", "KnotShadow",
    "LaurentPoly", "MoveKind", "Presentation", "ShadowReport", "ValidationReport",
    "VertexKind", "abelianization", "alexander_poly", "apply", "classify", "collapse_bound",
    "default_rules", "gen_Kn", "gen_twist_spun", "is_Z_generated_by", "kn_alexander",
    "kn_graph", "kn_target", "knot_group", "knot_group_of", "load_rules", "normal_form",
    "null_homotopic_edges", "parse_bud", "parse_egf", "parse_presentation", "pi1_tree",
    "serialize_bud", "serialize_egf", "shadow_of", "sites", "snf", "tietze_simplify",
    "validate", "verify_case_grid",
]

__version__ = "0.1.0"
