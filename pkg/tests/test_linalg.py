import random
from fractions import Fraction

import pytest

from mtc.scalars import CycField
from mtc.linalg import (Matrix, kron, solve_right, kernel_basis, rank,
                        partial_trace_left, invert, rank_factor, NoSolution)
from oracles import rank_oracle_fraction, partial_trace_left_oracle

F = CycField(4)


def rand_matrix(rng, r, c, field=F):
    return Matrix.from_rows(field, [[rng.randint(-3, 3) for _ in range(c)]
                                    for _ in range(r)])


def test_solve_right_identity():
    rng = random.Random(1)
    b = rand_matrix(rng, 3, 2)
    x = solve_right(Matrix.identity(F, 3), b)
    assert x == b


def test_solve_right_zero():
    z = Matrix.zeros(F, 2, 2)
    assert solve_right(z, Matrix.zeros(F, 2, 1)) == Matrix.zeros(F, 2, 1)


def test_solve_right_no_solution():
    a = Matrix.from_rows(F, [[1, 1], [0, 0]])
    b = Matrix.from_rows(F, [[0], [1]])
    # oracle: rank comparison of A and [A | B]
    ra = rank_oracle_fraction([[1, 1], [0, 0]])
    rab = rank_oracle_fraction([[1, 1, 0], [0, 0, 1]])
    assert ra < rab
    with pytest.raises(NoSolution):
        solve_right(a, b)


def test_solve_right_random_consistent():
    rng = random.Random(2)
    for _ in range(25):
        a = rand_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
        x0 = rand_matrix(rng, a.cols, rng.randint(1, 3))
        b = a * x0
        x = solve_right(a, b)
        assert a * x == b


def test_kernel_basis():
    assert kernel_basis(Matrix.identity(F, 3)) == []
    vecs = kernel_basis(Matrix.zeros(F, 2, 3))
    assert len(vecs) == 3
    for i, v in enumerate(vecs):
        assert v.data[i].is_one()
    a = Matrix.from_rows(F, [[1, 2, 3]])
    vecs = kernel_basis(a)
    assert len(vecs) == 2
    stack = vecs[0].hstack(vecs[1])
    assert rank(stack) == 2  # independence
    for v in vecs:
        assert (a * v).is_zero()


def test_kernel_random_property():
    rng = random.Random(3)
    for _ in range(25):
        a = rand_matrix(rng, rng.randint(1, 4), rng.randint(1, 5))
        vecs = kernel_basis(a)
        assert len(vecs) == a.cols - rank(a)
        for v in vecs:
            assert (a * v).is_zero()


def test_kron_identities():
    assert kron(Matrix.identity(F, 2), Matrix.identity(F, 3)) == Matrix.identity(F, 6)
    rng = random.Random(4)
    a = rand_matrix(rng, 2, 3)
    assert kron(a, Matrix.from_rows(F, [[1]])) == a


def test_kron_mixed_product():
    rng = random.Random(5)
    for _ in range(20):
        a = rand_matrix(rng, 2, 2)
        b = rand_matrix(rng, 2, 2)
        c = rand_matrix(rng, 2, 2)
        d = rand_matrix(rng, 2, 2)
        # oracle: direct multiplication
        assert kron(a, b) * kron(c, d) == kron(a * c, b * d)


def test_partial_trace_left():
    d, k = 2, 3
    assert partial_trace_left(Matrix.identity(F, d * k), d, k) == \
        Matrix.identity(F, k).scale(F.from_rational(d))
    rng = random.Random(6)
    p = rand_matrix(rng, d, d)
    q = rand_matrix(rng, k, k)
    assert partial_trace_left(kron(p, q), d, k) == q.scale(p.trace())
    # brute-force index sum oracle on a random 4x4 with d = k = 2
    m = rand_matrix(rng, 4, 4)
    entries = {(i, j): Fraction(m[i, j].num[0], m[i, j].den)
               for i in range(4) for j in range(4)}
    expected = partial_trace_left_oracle(entries, 2, 2)
    got = partial_trace_left(m, 2, 2)
    for a in range(2):
        for b in range(2):
            assert got[a, b] == F.from_rational(expected[(a, b)])


def test_invert_and_rank_factor():
    rng = random.Random(8)
    m = Matrix.from_rows(F, [[1, 2], [3, 5]])
    assert invert(m) * m == Matrix.identity(F, 2)
    with pytest.raises(NoSolution):
        invert(Matrix.from_rows(F, [[1, 2], [2, 4]]))
    for _ in range(10):
        a = rand_matrix(rng, 3, 4)
        b, c = rank_factor(a)
        assert b * c == a
        assert b.cols == rank(a)


def test_rank_matches_oracle():
    rng = random.Random(9)
    for _ in range(20):
        rows = [[rng.randint(-3, 3) for _ in range(4)] for _ in range(3)]
        m = Matrix.from_rows(F, rows)
        assert rank(m) == rank_oracle_fraction(rows)


def test_partial_trace_right():
    from mtc.linalg import partial_trace_right
    rng = random.Random(10)
    k, d = 3, 2
    p = rand_matrix(rng, k, k)
    q = rand_matrix(rng, d, d)
    assert partial_trace_right(kron(p, q), k, d) == p.scale(q.trace())
