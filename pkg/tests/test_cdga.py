from __future__ import annotations

import random
from fractions import Fraction

import pytest

from masseyq.cdga import (
    GeneratorDecl,
    build_free_cdga,
    build_morphism,
    build_table_algebra,
    identity_morphism,
    parse_polynomial,
    recap,
    tensor_embedding,
    tensor_polynomial_generator,
    tensor_retraction,
    validate_algebra,
    validate_morphism,
)
from masseyq.errors import (
    AlgebraValidationError,
    DegreeCapError,
    ParseError,
)
from oracles import random_free_cdga


def torus(cap=2):
    return build_free_cdga([("x", 1), ("y", 1)], {}, cap)


def heisenberg(cap=4):
    return build_free_cdga([("x", 1), ("y", 1), ("z", 1)], {"z": "x*y"}, cap)


# -- polynomial parsing ------------------------------------------------------


def test_parse_single_name():
    assert parse_polynomial("x") == [(Fraction(1), ("x",))]


def test_parse_signs_and_coefficients():
    got = parse_polynomial("3/2*x*y - z + 2*3*w")
    assert got == [
        (Fraction(3, 2), ("x", "y")),
        (Fraction(-1), ("z",)),
        (Fraction(6), ("w",)),
    ]


def test_parse_leading_minus_and_double_sign():
    assert parse_polynomial("-x") == [(Fraction(-1), ("x",))]
    assert parse_polynomial("- -x") == [(Fraction(1), ("x",))]


def test_parse_constant_zero_is_empty():
    assert parse_polynomial("0") == []
    assert parse_polynomial("0*x") == []


def test_parse_keeps_factor_order():
    assert parse_polynomial("y*x")[0][1] == ("y", "x")


def test_parse_rejects_juxtaposition():
    with pytest.raises(ParseError):
        parse_polynomial("x y")
    with pytest.raises(ParseError):
        parse_polynomial("2 x")


def test_parse_rejects_trailing_operator():
    with pytest.raises(ParseError):
        parse_polynomial("x +")
    with pytest.raises(ParseError):
        parse_polynomial("x*")


def test_parse_rejects_garbage():
    with pytest.raises(ParseError):
        parse_polynomial("x^2")
    with pytest.raises(ParseError):
        parse_polynomial("")


# -- free algebras -----------------------------------------------------------


def test_torus_basis_and_products():
    t = torus()
    assert t.dims == (1, 2, 1)
    assert t.basis_labels(1) == ("x", "y")
    assert t.basis_labels(2) == ("x*y",)
    x, y = t.generator("x"), t.generator("y")
    assert (x * x).is_zero()
    assert x * y == -(y * x)
    assert str(x * y) == "x*y"


def test_heisenberg_differential():
    h = heisenberg()
    assert h.dims == (1, 3, 3, 1, 0)
    x, y, z = (h.generator(n) for n in "xyz")
    assert z.d() == x * y
    assert (x * z).d().is_zero()
    assert (y * z).d().is_zero()
    assert ((x * y) * z).d().is_zero()
    assert validate_algebra(h) == []


def test_monomial_order_is_declaration_lex():
    h = heisenberg()
    assert h.basis_labels(2) == ("x*y", "x*z", "y*z")
    assert h.basis_labels(3) == ("x*y*z",)


def test_even_generator_powers():
    p = build_free_cdga([("u", 2)], {}, 8)
    assert p.dims == (1, 0, 1, 0, 1, 0, 1, 0, 1)
    assert p.basis_labels(4) == ("u*u",)
    u = p.generator("u")
    assert u * u == p.basis_element(4, 0)
    assert validate_algebra(p) == []


def test_unit_is_neutral():
    h = heisenberg()
    one = h.unit()
    for n in range(h.cap + 1):
        for i in range(h.dim(n)):
            e = h.basis_element(n, i)
            assert one * e == e
            assert e * one == e


def test_koszul_sign_mixed_degrees():
    a = build_free_cdga([("s", 1), ("u", 2)], {}, 5)
    s, u = a.generator("s"), a.generator("u")
    assert s * u == u * s
    assert (s * u) * s == a.zero(4)


def test_dd_zero_violation_is_named():
    with pytest.raises(AlgebraValidationError, match="d\\*d is nonzero on generator 't'"):
        build_free_cdga([("t", 1), ("u", 2)], {"t": "u", "u": "t*u"}, 6)


def test_odd_square_differential_collapses():
    a = build_free_cdga([("x", 1), ("z", 1)], {"z": "x*x"}, 3)
    assert a.generator("z").d().is_zero()


def test_differential_must_fit_cap():
    with pytest.raises(DegreeCapError):
        build_free_cdga([("x", 1), ("y", 1), ("z", 2)], {"z": "x*y*x"}, 2)
    # zero differential on a top-degree generator is fine
    a = build_free_cdga([("x", 1), ("w", 2)], {"w": "0"}, 2)
    assert a.dim(2) == 1 + 0  # w only; x*y absent, x*x vanishes


def test_duplicate_and_bad_generators_rejected():
    with pytest.raises(AlgebraValidationError):
        build_free_cdga([("x", 1), ("x", 2)], {}, 3)
    with pytest.raises(AlgebraValidationError):
        build_free_cdga([("x", 0)], {}, 2)
    with pytest.raises(AlgebraValidationError):
        build_free_cdga([("x-y", 1)], {}, 2)
    with pytest.raises(AlgebraValidationError):
        build_free_cdga([("x", 1)], {"q": "x"}, 2)


def test_from_polynomial_homogeneous_only():
    h = heisenberg()
    with pytest.raises(AlgebraValidationError, match="not homogeneous"):
        h.from_polynomial("x + x*y")


def test_from_polynomial_zero_needs_degree():
    h = heisenberg()
    with pytest.raises(AlgebraValidationError, match="zero polynomial"):
        h.from_polynomial("0")
    z = h.from_polynomial("0", expected_degree=2)
    assert z.is_zero() and z.degree == 2


def test_from_polynomial_unknown_name():
    h = heisenberg()
    with pytest.raises(ParseError, match="unknown name"):
        h.from_polynomial("x*q")


def test_from_polynomial_fractions_and_cancellation():
    h = heisenberg()
    e = h.from_polynomial("1/2*x*y + 1/2*y*x")
    assert e.is_zero() and e.degree == 2
    assert h.from_polynomial("3*x") == h.generator("x").scale(3)


def test_element_str_rendering():
    h = heisenberg()
    x, y = h.generator("x"), h.generator("y")
    assert str(x - y) == "x - y"
    assert str(-x) == "-x"
    assert str(x.scale(Fraction(3, 2))) == "3/2*x"
    assert str(h.zero(1)) == "0"
    assert str(h.unit()) == "1"
    assert str(h.unit().scale(2)) == "2"


def test_bar_parity():
    h = heisenberg()
    x = h.generator("x")
    assert x.bar() == -x
    assert (x * h.generator("y")).bar() == x * h.generator("y")


def test_recap_free():
    p = build_free_cdga([("u", 2)], {}, 4)
    q = recap(p, 8)
    assert q.dims == (1, 0, 1, 0, 1, 0, 1, 0, 1)
    h = recap(heisenberg(3), 4)
    assert h.dims == (1, 3, 3, 1, 0)
    assert h.generator("z").d() == h.generator("x") * h.generator("y")


# -- table algebras ----------------------------------------------------------


def two_points(cap=0):
    return build_table_algebra(
        dims=[2],
        products={
            (0, 0, 0, 0): [(0, 1)],
            (0, 1, 0, 1): [(1, 1)],
        },
        names=[["eN", "eS"]],
    )


def test_table_two_points_unit():
    a = two_points()
    assert a.unit().coords == (Fraction(1), Fraction(1))
    eN, eS = a.generator("eN"), a.generator("eS")
    assert eN * eN == eN
    assert eN * eS == a.zero(0)
    assert validate_algebra(a) == []


def test_table_requires_unit():
    with pytest.raises(AlgebraValidationError, match="unit"):
        build_table_algebra(dims=[1], products={})


def test_table_rejects_nonassociative():
    # e*e = f, e*f = 0, f*e = e breaks both associativity and commutativity
    with pytest.raises(AlgebraValidationError):
        build_table_algebra(
            dims=[1, 0, 1, 0, 1],
            products={
                (0, 0, 0, 0): [(0, 1)],
                (0, 0, 2, 0): [(0, 1)],
                (2, 0, 0, 0): [(0, 1)],
                (2, 0, 2, 0): [(0, 1)],
                (0, 0, 4, 0): [(0, 1)],
                (4, 0, 0, 0): [(0, 2)],
            },
        )


def test_table_rejects_anticommutative_odd_mismatch():
    # two odd classes whose products are not antisymmetric
    with pytest.raises(AlgebraValidationError, match="commutativity"):
        build_table_algebra(
            dims=[1, 2, 1],
            products={
                (0, 0, 0, 0): [(0, 1)],
                (0, 0, 1, 0): [(0, 1)],
                (0, 0, 1, 1): [(1, 1)],
                (1, 0, 0, 0): [(0, 1)],
                (1, 1, 0, 0): [(1, 1)],
                (0, 0, 2, 0): [(0, 1)],
                (2, 0, 0, 0): [(0, 1)],
                (1, 0, 1, 1): [(0, 1)],
                (1, 1, 1, 0): [(0, 1)],
            },
        )


def test_table_rejects_leibniz_violation():
    # d(e1) = e2 and e1*e2 = e3 closed, yet d(e1)*e2 = e2*e2 = e4 != 0
    unit_rows = {}
    for n in range(1, 5):
        unit_rows[(0, 0, n, 0)] = [(0, 1)]
        unit_rows[(n, 0, 0, 0)] = [(0, 1)]
    with pytest.raises(AlgebraValidationError, match="Leibniz"):
        build_table_algebra(
            dims=[1, 1, 1, 1, 1],
            products={
                (0, 0, 0, 0): [(0, 1)],
                **unit_rows,
                (1, 0, 2, 0): [(0, 1)],
                (2, 0, 1, 0): [(0, 1)],
                (2, 0, 2, 0): [(0, 1)],
            },
            differentials={(1, 0): [(0, 1)]},
        )


def test_table_rejects_out_of_range_keys():
    with pytest.raises(AlgebraValidationError, match="outside the cap"):
        build_table_algebra(dims=[1, 1], products={(1, 0, 1, 0): [(0, 1)]})
    with pytest.raises(AlgebraValidationError, match="missing basis"):
        build_table_algebra(dims=[1, 1], products={(0, 3, 1, 0): [(0, 1)]})


def test_table_truncated_polynomial_ring():
    # Q[u]/(u^3) with u in degree 2
    a = build_table_algebra(
        dims=[1, 0, 1, 0, 1, 0, 0],
        products={
            (0, 0, 0, 0): [(0, 1)],
            (0, 0, 2, 0): [(0, 1)],
            (2, 0, 0, 0): [(0, 1)],
            (0, 0, 4, 0): [(0, 1)],
            (4, 0, 0, 0): [(0, 1)],
            (2, 0, 2, 0): [(0, 1)],
        },
        names=[["e"], [], ["u"], [], ["usq"], [], []],
    )
    u = a.generator("u")
    assert u * u == a.generator("usq")
    assert (u * (u * u)).is_zero()
    assert validate_algebra(a) == []


# -- polynomial-generator extension ------------------------------------------


def test_tensor_free_base_recapped():
    t = torus(2)
    ext = tensor_polynomial_generator(t, "h", cap=6)
    assert ext.dims == (1, 2, 2, 2, 2, 2, 2)
    assert ext.basis_labels(2) == ("x*y", "h")
    assert ext.basis_labels(3) == ("x*h", "y*h")
    assert ext.basis_labels(4) == ("x*y*h", "h*h")
    h = ext.generator("h")
    x = ext.generator("x")
    assert h * x == x * h
    assert h.d().is_zero()
    assert validate_algebra(ext) == []


def test_tensor_heisenberg_differential():
    hb = heisenberg(4)
    ext = tensor_polynomial_generator(hb, "h", cap=8)
    z, h = ext.generator("z"), ext.generator("h")
    x, y = ext.generator("x"), ext.generator("y")
    assert (z * h).d() == x * y * h
    assert ext.dims[:5] == (1, 3, 4, 4, 4)


def test_tensor_table_base_padded():
    pts = two_points()
    ext = tensor_polynomial_generator(pts, "h", cap=4)
    assert ext.dims == (2, 0, 2, 0, 2)
    assert ext.basis_labels(2) == ("eN*h", "eS*h")
    eN, h = ext.generator("eN"), ext.generator("h")
    assert eN * h == ext.basis_element(2, 0)
    assert h == ext.basis_element(2, 0) + ext.basis_element(2, 1)
    assert validate_algebra(ext) == []


def test_tensor_name_collision_rejected():
    with pytest.raises(AlgebraValidationError, match="already exists"):
        tensor_polynomial_generator(torus(), "x")


def test_tensor_cap_below_base_rejected():
    with pytest.raises(DegreeCapError):
        tensor_polynomial_generator(heisenberg(4), "h", cap=3)


def test_tensor_block_index_round_trip():
    ext = tensor_polynomial_generator(heisenberg(4), "h", cap=8)
    info = ext.tensor_info
    for n in range(ext.cap + 1):
        for i in range(ext.dim(n)):
            j, b = info.split_index(n, i)
            assert info.index(n, j, b) == i


# -- morphisms ---------------------------------------------------------------


def test_identity_morphism():
    h = heisenberg()
    f = identity_morphism(h)
    x = h.generator("x")
    assert f.apply(x) == x
    assert validate_morphism(f) == []


def test_inclusion_of_subtorus():
    line = build_free_cdga([("x", 1)], {}, 2)
    t = torus(2)
    f = build_morphism(line, t, images={"x": t.generator("x")})
    assert f.apply(line.generator("x")) == t.generator("x")


def test_quotient_killing_z_is_rejected():
    h = heisenberg()
    with pytest.raises(AlgebraValidationError, match="commute with d"):
        build_morphism(
            h,
            h,
            images={
                "x": h.generator("x"),
                "y": h.generator("y"),
                "z": h.zero(1),
            },
        )


def test_swap_is_a_morphism():
    h = heisenberg()
    f = build_morphism(
        h,
        h,
        images={
            "x": -h.generator("y"),
            "y": h.generator("x"),
            "z": h.generator("z"),
        },
    )
    x, y = h.generator("x"), h.generator("y")
    assert f.apply(x * y) == x * y


def test_morphism_degree_mismatch_rejected():
    line = build_free_cdga([("x", 1)], {}, 2)
    p = build_free_cdga([("u", 2)], {}, 4)
    with pytest.raises(AlgebraValidationError, match="degree"):
        build_morphism(line, p, images={"x": p.generator("u")})


def test_matrix_morphism_multiplicativity_checked():
    p = build_free_cdga([("u", 2)], {}, 4)
    from masseyq.linalg import Matrix

    mats = [
        Matrix.identity(1),
        Matrix.zero(0, 0),
        Matrix.identity(1),
        Matrix.zero(0, 0),
        Matrix.zero(1, 1),
    ]
    with pytest.raises(AlgebraValidationError, match="multiplicative"):
        build_morphism(p, p, matrices=mats)


def test_embedding_retraction_round_trip():
    hb = heisenberg(4)
    ext = tensor_polynomial_generator(hb, "h", cap=8)
    emb = tensor_embedding(hb, ext)
    ret = tensor_retraction(ext, hb)
    for n in range(hb.cap + 1):
        for i in range(hb.dim(n)):
            e = hb.basis_element(n, i)
            assert ret.apply(emb.apply(e)) == e
    assert ret.apply(ext.generator("h")).is_zero()


def test_morphism_into_extension_multiplicative():
    hb = heisenberg(4)
    ext = tensor_polynomial_generator(hb, "h", cap=8)
    emb = tensor_embedding(hb, ext)
    x, y = hb.generator("x"), hb.generator("y")
    assert emb.apply(x * y) == emb.apply(x) * emb.apply(y)


# -- randomized structural checks --------------------------------------------


def test_random_free_algebras_validate():
    rng = random.Random(2024)
    for _ in range(25):
        gens, diffs, cap = random_free_cdga(rng)
        a = build_free_cdga(gens, diffs, cap)
        assert validate_algebra(a) == []


def test_random_elements_satisfy_leibniz():
    rng = random.Random(31)
    h = heisenberg(4)
    for _ in range(40):
        n1 = rng.randint(0, 2)
        n2 = rng.randint(0, min(2, 3 - n1 - 1))
        a = h.element(n1, [rng.randint(-3, 3) for _ in range(h.dim(n1))])
        b = h.element(n2, [rng.randint(-3, 3) for _ in range(h.dim(n2))])
        lhs = (a * b).d()
        rhs = a.d() * b + (a * b.d() if n1 % 2 == 0 else -(a * b.d()))
        assert lhs == rhs
