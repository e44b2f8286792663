"""Integer Laurent polynomials and Alexander polynomials via Fox calculus."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from .fpgroup import Presentation, fox_derivative
from .homology import abelianization


class LaurentPoly:
    """An integer Laurent polynomial in ``t``, stored as ``{exponent: coefficient}``."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Union[Mapping[int, int], Iterable[Tuple[int, int]], int] = ()):
        acc: Dict[int, int] = {}
        if isinstance(terms, int):
            terms = {0: terms}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for e, c in items:
            acc[int(e)] = acc.get(int(e), 0) + int(c)
        self._terms = {e: c for e, c in sorted(acc.items()) if c}

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exponent: coeff})

    @property
    def terms(self) -> Dict[int, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def min_exp(self) -> int:
        return min(self._terms) if self._terms else 0

    @property
    def max_exp(self) -> int:
        return max(self._terms) if self._terms else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def __add__(self, other) -> "LaurentPoly":
        other = other if isinstance(other, LaurentPoly) else LaurentPoly(other)
        return LaurentPoly(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        other = other if isinstance(other, LaurentPoly) else LaurentPoly(other)
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return LaurentPoly(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        other = other if isinstance(other, LaurentPoly) else LaurentPoly(other)
        acc: Dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(acc)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``t**k``."""
        return LaurentPoly({e + k: c for e, c in self._terms.items()})

    def reflect(self) -> "LaurentPoly":
        """Substitute ``t -> 1/t``."""
        return LaurentPoly({-e: c for e, c in self._terms.items()})

    def evaluate(self, t: Union[int, Fraction]) -> Fraction:
        if t == 0 and self.min_exp < 0:
            raise ZeroDivisionError("negative powers at t = 0")
        return sum((c * Fraction(t) ** e for e, c in self._terms.items()), Fraction(0))

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Quotient of an exact division; raises if ``other`` does not divide ``self``."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return LaurentPoly()
        num = dict(self.shift(-self.min_exp)._terms)
        den = other.shift(-other.min_exp)._terms
        dlead_e = max(den)
        dlead_c = den[dlead_e]
        quot: Dict[int, int] = {}
        while num:
            top = max(num)
            if top < dlead_e:
                raise ArithmeticError("polynomial division is not exact")
            q, r = divmod(num[top], dlead_c)
            if r:
                raise ArithmeticError("polynomial division is not exact")
            shift = top - dlead_e
            quot[shift] = q
            for e, c in den.items():
                num[e + shift] = num.get(e + shift, 0) - q * c
                if num[e + shift] == 0:
                    del num[e + shift]
        return LaurentPoly(quot).shift(self.min_exp - other.min_exp)

    def unit_normalize(self) -> "LaurentPoly":
        """Multiply by ``+-t^k`` so the lowest exponent is 0 with positive coefficient."""
        if self.is_zero():
            return self
        p = self.shift(-self.min_exp)
        return -p if p._terms[0] < 0 else p

    def equivalent(self, other: "LaurentPoly") -> bool:
        """Equality up to units and the symmetry ``t <-> 1/t``."""
        a = self.unit_normalize()
        return a == other.unit_normalize() or a == other.reflect().unit_normalize()

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: List[str] = []
        for e, c in sorted(self._terms.items()):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                tpart = "t" if e == 1 else f"t^{e}"
                body = tpart if mag == 1 else f"{mag}*{tpart}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


T = LaurentPoly.monomial(1)


def kn_alexander(n: int) -> LaurentPoly:
    """The normalized Alexander polynomial of K_n."""
    if n > 0:
        return LaurentPoly({0: 2, n: -1})
    if n < 0:
        a = -n
        return LaurentPoly({0: 1, a: -1, 2 * a: 1})
    raise ValueError("n must be nonzero")


def meridian_map(p: Presentation) -> Dict[str, int]:
    """Image of each generator in H1 = Z, normalized so the meridian maps to 1."""
    if p.meridian is None:
        raise ValueError("presentation has no meridian")
    ab = abelianization(p)
    if not ab.group.is_infinite_cyclic:
        raise ValueError(f"H1 is {ab.group}, not infinite cyclic")
    (mu,) = ab.coords[p.meridian]
    if mu not in (1, -1):
        raise ValueError("the meridian does not generate H1")
    return {s: ab.coords[s][0] * mu for s in p.generators}


def determinant(matrix: Sequence[Sequence[LaurentPoly]]) -> LaurentPoly:
    """Fraction-free (Bareiss) determinant over Z[t, 1/t]."""
    n = len(matrix)
    if n == 0:
        return LaurentPoly(1)
    a = [list(row) for row in matrix]
    sign = 1
    prev = LaurentPoly(1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return LaurentPoly()
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


def fox_matrix(p: Presentation, phi: Mapping[str, int]) -> List[List[LaurentPoly]]:
    """Abelianized Fox Jacobian: rows are relators, columns are generators."""
    rows = []
    for r in p.relators:
        row = []
        for s in p.generators:
            entry = LaurentPoly()
            for word, c in fox_derivative(r, s).items():
                entry = entry + LaurentPoly.monomial(sum(e * phi[sym] for sym, e in word), c)
            row.append(entry)
        rows.append(row)
    return rows


def alexander_poly(p: Presentation, drop: str = None) -> LaurentPoly:
    """Alexander polynomial of a deficiency-one presentation with a meridian.

    The column of ``drop`` (the meridian by default) is deleted from the Fox
    matrix and the remaining square determinant is unit-normalized.
    """
    if p.deficiency != 1:
        raise ValueError(f"deficiency is {p.deficiency}, expected 1")
    phi = meridian_map(p)
    drop = p.meridian if drop is None else drop
    if phi.get(drop) not in (1, -1):
        raise ValueError(f"generator {drop!r} does not map to a generator of H1")
    col = p.generators.index(drop)
    full = fox_matrix(p, phi)
    square = [[e for j, e in enumerate(row) if j != col] for row in full]
    return determinant(square).unit_normalize()
