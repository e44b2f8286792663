"""Smith normal form and abelianization of finitely presented groups.

Everything is plain Python integers, so entries such as ``2**(m + k0)`` never
overflow.  Matrices are lists of rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from .fpgroup import Presentation, Word, exponent_sum

IntMatrix = List[List[int]]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(len(a))]


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SnfResult:
    S: IntMatrix
    U: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> List[int]:
        return [self.S[i][i] for i in range(min(len(self.S), len(self.S[0]) if self.S else 0))]


def snf(M: Sequence[Sequence[int]]) -> SnfResult:
    """Smith normal form with transforms: ``U @ M @ V == S``.

    The diagonal of ``S`` is nonnegative and each entry divides the next.
    ``U`` and ``V`` are unimodular.  The zero matrix returns identities.
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    a = [list(map(int, r)) for r in M]
    U = identity(rows)
    V = identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):  # row dst += q * row src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, q):  # col dst += q * col src
        for r in a:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    for t in range(min(rows, cols)):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
    return SnfResult(a, U, V)


# ---------------------------------------------------------------------------
# abelian groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AbelianGroup:
    rank: int
    torsion: Tuple[int, ...] = ()

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    @property
    def is_infinite_cyclic(self) -> bool:
        return self.rank == 1 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class Abelianization:
    """The group together with the image of every generator.

    ``orders`` lists the cyclic factors in coordinate order: torsion
    factors first, then ``0`` for each free factor.  ``coords[g]`` gives the
    class of generator ``g`` in those coordinates, reduced modulo the order.
    """

    group: AbelianGroup
    orders: Tuple[int, ...]
    coords: Dict[str, Tuple[int, ...]]

    def image(self, w: Word) -> Tuple[int, ...]:
        acc = [0] * len(self.orders)
        for sym, e in w:
            for i, c in enumerate(self.coords[sym]):
                acc[i] += e * c
        return tuple(x % d if d else x for x, d in zip(acc, self.orders))


def relation_matrix(p: Presentation) -> IntMatrix:
    return [[exponent_sum(r, gname) for gname in p.generators] for r in p.relators]


def abelianization(p: Presentation) -> Abelianization:
    n = len(p.generators)
    mat = relation_matrix(p)
    if not mat:
        mat_for_snf: IntMatrix = [[0] * n] if n else []
    else:
        mat_for_snf = mat
    if n == 0:
        return Abelianization(AbelianGroup(0), (), {})
    res = snf(mat_for_snf)
    diag = res.diagonal + [0] * (n - len(res.diagonal))
    keep = [j for j, d in enumerate(diag) if d != 1]
    torsion_idx = [j for j in keep if diag[j] > 1]
    free_idx = [j for j in keep if diag[j] == 0]
    order_idx = torsion_idx + free_idx
    orders = tuple(diag[j] for j in order_idx)
    coords = {}
    for i, gname in enumerate(p.generators):
        row = res.V[i]
        coords[gname] = tuple(row[j] % diag[j] if diag[j] else row[j] for j in order_idx)
    group = AbelianGroup(len(free_idx), tuple(diag[j] for j in torsion_idx))
    return Abelianization(group, orders, coords)


def is_Z_generated_by(p: Presentation, w: Word) -> bool:
    """True iff H1 of ``p`` is infinite cyclic and the class of ``w`` generates it."""
    if not abelianization(p).group.is_infinite_cyclic:
        return False
    return abelianization(p.with_relators(w)).group.is_trivial
