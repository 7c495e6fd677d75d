from __future__ import annotations

import pytest

from masseyq.cdga import validate_algebra
from masseyq.cohomology import CohomologyRing
from masseyq.errors import AlgebraValidationError
from masseyq.models import (
    BUILTIN_MODELS,
    builtin_datum,
    builtin_family,
    builtin_model,
    even_sphere,
    heisenberg,
    point,
    rotation_ambient,
    sphere_cohomology,
    torus,
    truncated_polynomial,
    two_points,
)


def test_every_bundled_model_validates():
    for name, make in sorted(BUILTIN_MODELS.items()):
        assert validate_algebra(make()) == [], name


def test_heisenberg_betti_numbers():
    ring = CohomologyRing(heisenberg())
    assert ring.betti() == (1, 2, 2, 1)


def test_torus_betti_numbers():
    ring = CohomologyRing(torus())
    assert ring.betti() == (1, 2, 1)


def test_even_sphere_collapses_to_two_classes():
    ring = CohomologyRing(even_sphere())
    assert ring.betti() == (1, 0, 1, 0, 0, 0, 0, 0)


def test_sphere_cohomology_table_matches_the_free_model():
    free = CohomologyRing(even_sphere(cap=4))
    table = CohomologyRing(sphere_cohomology(cap=4))
    assert free.betti() == table.betti() == (1, 0, 1, 0)
    assert table.algebra.dims == (1, 0, 1, 0, 0)


def test_truncated_polynomial_power_vanishes():
    a = truncated_polynomial()
    u = a.named_element("u")
    assert not (u * u * u).is_zero()
    ring = CohomologyRing(a)
    assert ring.betti() == (1, 0, 1, 0, 1, 0)


def test_point_is_one_dimensional():
    ring = CohomologyRing(point())
    assert ring.betti() == (1,)
    with pytest.raises(AlgebraValidationError):
        point(cap=0)


def test_two_points_has_orthogonal_idempotents():
    a = two_points()
    eN, eS = a.named_element("eN"), a.named_element("eS")
    assert (eN * eS).is_zero()
    assert eN * eN == eN
    assert a.unit() == eN + eS


def test_rotation_ambient_products_are_componentwise():
    a = rotation_ambient()
    h1, a1 = a.named_element("H1"), a.named_element("A1")
    assert h1 * h1 == a.named_element("H2")
    assert h1 * a1 == a.named_element("A2")
    assert a1 * a1 == a.named_element("A2")
    ring = CohomologyRing(a)
    assert ring.betti() == (1, 0, 2, 0, 2, 0, 2, 0, 2)


def test_rotation_ambient_needs_room_for_the_pairs():
    with pytest.raises(AlgebraValidationError):
        rotation_ambient(cap=2)


def test_builtin_lookup_normalizes_names():
    assert builtin_model("two_points").dims == (2, 0)
    assert builtin_model("Two-Points").dims == (2, 0)
    with pytest.raises(KeyError):
        builtin_model("moebius")
    with pytest.raises(KeyError):
        builtin_datum("nonexistent")
    with pytest.raises(KeyError):
        builtin_family("nonexistent")


def test_builtin_datum_and_family_construct():
    assert builtin_datum("rotation").name == "rotation"
    assert len(builtin_family("default")) == 8
    assert len(builtin_family("corrupted-demo")) == 1
