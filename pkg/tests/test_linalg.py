from __future__ import annotations

import random
from fractions import Fraction

import pytest

from masseyq.linalg import (
    AffineCoset,
    Matrix,
    Subspace,
    coset_meets,
    fr,
    kernel_basis,
    member,
    rank,
    rref,
    solve,
    unit_vector,
    vec_is_zero,
    vector,
    zero_vector,
)
from oracles import ff_rref


def test_fr_accepts_ints_and_strings_but_not_floats():
    assert fr(3) == Fraction(3)
    assert fr("2/5") == Fraction(2, 5)
    assert fr(Fraction(1, 7)) == Fraction(1, 7)
    with pytest.raises(TypeError):
        fr(0.5)


def test_rref_collapses_dependent_rows():
    m = Matrix([[2, 4], [1, 2]])
    r, pivots = rref(m)
    assert r == Matrix([[1, 2], [0, 0]])
    assert pivots == (0,)
    assert rank(m) == 1


def test_rref_identity_fixed_point():
    m = Matrix.identity(3)
    r, pivots = rref(m)
    assert r == m
    assert pivots == (0, 1, 2)


def test_rref_fractional_pivots():
    m = Matrix([[fr("1/2"), 1], [1, 3]])
    r, pivots = rref(m)
    assert pivots == (0, 1)
    assert r == Matrix.identity(2)


def test_solve_picks_zero_free_variables():
    a = Matrix([[1, 1]])
    assert solve(a, vector([3])) == (Fraction(3), Fraction(0))


def test_solve_reports_inconsistency():
    a = Matrix([[1, 1], [1, 1]])
    assert solve(a, vector([1, 2])) is None


def test_solve_empty_shapes():
    a = Matrix([], cols=3)
    assert solve(a, vector([])) == zero_vector(3)
    b = Matrix([[0], [0]], cols=1)
    assert solve(b, vector([0, 0])) == zero_vector(1)
    assert solve(b, vector([1, 0])) is None


def test_kernel_of_sum_functional():
    k = kernel_basis(Matrix([[1, 1]]))
    assert k.basis == (vector([1, -1]),)
    assert k.dim == 1


def test_kernel_dimension_plus_rank_is_cols():
    rng = random.Random(11)
    for _ in range(40):
        rows = rng.randint(0, 5)
        cols = rng.randint(1, 5)
        m = Matrix(
            [[rng.randint(-4, 4) for _ in range(cols)] for _ in range(rows)],
            cols=cols,
        )
        k = kernel_basis(m)
        assert k.dim + rank(m) == cols
        for v in k.basis:
            assert vec_is_zero(m.matvec(v))


def test_rref_matches_fraction_free_oracle():
    rng = random.Random(23)
    for _ in range(60):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 5)
        entries = [
            [Fraction(rng.randint(-6, 6), rng.choice([1, 1, 2, 3])) for _ in range(cols)]
            for _ in range(rows)
        ]
        ours, our_pivots = rref(Matrix(entries, cols=cols))
        theirs, their_pivots = ff_rref(entries, cols)
        assert our_pivots == their_pivots
        assert tuple(ours.row(i) for i in range(ours.rows)) == theirs


def test_solve_solutions_actually_solve():
    rng = random.Random(5)
    solved = 0
    for _ in range(60):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        a = Matrix(
            [[rng.randint(-3, 3) for _ in range(cols)] for _ in range(rows)],
            cols=cols,
        )
        x = vector([rng.randint(-3, 3) for _ in range(cols)])
        b = a.matvec(x)
        got = solve(a, b)
        assert got is not None
        assert a.matvec(got) == b
        solved += 1
    assert solved == 60


def test_subspace_membership_and_sum():
    s = Subspace.span(2, [vector([1, 1])])
    assert member(vector([2, 2]), s)
    assert not member(vector([1, 0]), s)
    t = Subspace.span(2, [vector([1, 0])])
    assert (s + t).dim == 2
    assert member(vector([5, -7]), s + t)


def test_subspace_reduce_is_idempotent_and_kills_members():
    rng = random.Random(77)
    for _ in range(30):
        dim = rng.randint(1, 5)
        gens = [
            vector([rng.randint(-3, 3) for _ in range(dim)])
            for _ in range(rng.randint(0, 3))
        ]
        s = Subspace.span(dim, gens)
        v = vector([rng.randint(-3, 3) for _ in range(dim)])
        r = s.reduce(v)
        assert s.reduce(r) == r
        for g in gens:
            assert vec_is_zero(s.reduce(g))
        assert member(tuple(a - b for a, b in zip(v, r)), s)


def test_subspace_canonical_basis_is_presentation_independent():
    a = Subspace.span(3, [vector([1, 2, 0]), vector([0, 0, 1])])
    b = Subspace.span(3, [vector([2, 4, 2]), vector([0, 0, -5]), vector([1, 2, 3])])
    assert a == b
    assert a.basis == b.basis


def test_contains_subspace():
    big = Subspace.span(3, [unit_vector(3, 0), unit_vector(3, 1)])
    small = Subspace.span(3, [vector([1, 1, 0])])
    assert big.contains_subspace(small)
    assert not small.contains_subspace(big)


def test_affine_coset_example():
    point = unit_vector(2, 0)
    direction = Subspace.span(2, [vector([1, -1])])
    c = AffineCoset(point, direction)
    s = Subspace.span(2, [unit_vector(2, 1)])
    assert coset_meets(c, s)
    assert not c.contains_zero()


def test_affine_coset_zero_detection():
    direction = Subspace.span(2, [vector([1, -1])])
    c = AffineCoset(vector([2, -2]), direction)
    assert c.contains_zero()
    assert c.contains(zero_vector(2))


def test_affine_coset_point_is_reduced():
    direction = Subspace.span(2, [vector([1, -1])])
    a = AffineCoset(vector([1, 0]), direction)
    b = AffineCoset(vector([0, 1]), direction)
    assert a.point == b.point
    assert a == b


def test_affine_coset_containment():
    small = AffineCoset(vector([1, 0, 0]), Subspace.span(3, [vector([0, 1, 0])]))
    big = AffineCoset(
        vector([1, 0, 0]),
        Subspace.span(3, [vector([0, 1, 0]), vector([0, 0, 1])]),
    )
    assert small.contained_in(big)
    assert not big.contained_in(small)


def test_matrix_ops_consistency():
    a = Matrix([[1, 2], [3, 4], [5, 6]])
    t = a.transpose()
    assert t.rows == 2 and t.cols == 3
    assert t.transpose() == a
    i = Matrix.identity(2)
    assert a.matmul(i) == a
    v = vector([1, 1])
    assert a.matvec(v) == vector([3, 7, 11])
    from_cols = Matrix.from_columns(a.columns(), a.rows)
    assert from_cols == a


def test_matmul_agrees_with_matvec_on_columns():
    rng = random.Random(9)
    for _ in range(20):
        p, q, r = rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 4)
        a = Matrix([[rng.randint(-3, 3) for _ in range(q)] for _ in range(p)], cols=q)
        b = Matrix([[rng.randint(-3, 3) for _ in range(r)] for _ in range(q)], cols=r)
        ab = a.matmul(b)
        for j in range(r):
            assert ab.column(j) == a.matvec(b.column(j))
