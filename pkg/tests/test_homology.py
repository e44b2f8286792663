import itertools
import math

from hypothesis import given, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from shadowknots.fpgroup import gen, parse_presentation, parse_word
from shadowknots.homology import (AbelianGroup, abelianization, determinant, identity,
                                  is_Z_generated_by, matmul, snf)

matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


def check_snf(m):
    res = snf(m)
    rows, cols = len(m), len(m[0])
    assert matmul(matmul(res.U, m), res.V) == res.S
    assert abs(determinant(res.U)) == 1 and abs(determinant(res.V)) == 1
    for i in range(rows):
        for j in range(cols):
            if i != j:
                assert res.S[i][j] == 0
    d = res.diagonal
    assert all(x >= 0 for x in d)
    for a, b in zip(d, d[1:]):
        assert (a == 0 and b == 0) or (a != 0 and b % a == 0)
    return res


def test_zero_matrix():
    res = snf([[0, 0], [0, 0]])
    assert res.S == [[0, 0], [0, 0]]
    assert res.U == identity(2) and res.V == identity(2)


def test_examples():
    assert check_snf([[2, 0], [0, 3]]).diagonal == [1, 6]
    assert check_snf([[4, 6], [2, 8]]).diagonal == [2, 10]


def test_big_entries_stay_exact():
    m = [[2 ** 70, 3 ** 40], [6 ** 20, 5 ** 30]]
    res = check_snf(m)
    assert res.diagonal[0] == math.gcd(*[x for row in m for x in row])


@given(matrices)
def test_snf_against_sympy(m):
    res = check_snf(m)
    nonzero = [x for x in res.diagonal if x]
    oracle = [int(x) for x in invariant_factors(Matrix(m), domain=ZZ)]
    assert nonzero == [abs(x) for x in oracle if x]


def _determinantal_divisors(m):
    rows, cols = len(m), len(m[0])
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in itertools.combinations(range(rows), k):
            for cs in itertools.combinations(range(cols), k):
                g = math.gcd(g, int(Matrix([[m[i][j] for j in cs] for i in rs]).det()))
        out.append(g)
    return out


@given(st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c),
                           min_size=r, max_size=r))))
def test_snf_against_minors(m):
    d = snf(m).diagonal
    divisors = _determinantal_divisors(m)
    prod = 1
    for k, dk in enumerate(divisors):
        prod *= d[k]
        assert prod == dk


def test_abelianization_examples():
    def group(text):
        return abelianization(parse_presentation(text)).group
    assert group("gens: x ; rels: x^2") == AbelianGroup(0, (2,))
    assert group("gens: x,y ; rels: x*y*x^-2*y^-2") == AbelianGroup(1)
    ab = abelianization(parse_presentation("gens: x,y,gamma ; rels: gamma^2*y, x*y*x^-2*y^-1"))
    assert ab.group == AbelianGroup(1)
    assert ab.image(gen("gamma")) in ((1,), (-1,))


def test_abelian_group_text():
    assert str(AbelianGroup(2, (2, 6))) == "Z^2 + Z/2 + Z/6"
    assert str(AbelianGroup(0)) == "0"


def test_is_Z_generated_by_examples():
    p = parse_presentation("gens: x,y,gamma ; rels: gamma^2*y, x*y*x^-2*y^-1")
    assert is_Z_generated_by(p, gen("gamma"))
    q = parse_presentation("gens: x,y,gamma ; rels: gamma*x*y*x^-1*y^-1, x, y")
    assert not is_Z_generated_by(q, gen("gamma"))
    assert is_Z_generated_by(parse_presentation("gens: gamma ; rels: "), gen("gamma"))
    r = parse_presentation("gens: x,gamma ; rels: gamma*x^-2")
    assert not is_Z_generated_by(r, gen("gamma"))
    assert is_Z_generated_by(r, parse_word("x"))
