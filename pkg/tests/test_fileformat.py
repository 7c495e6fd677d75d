from __future__ import annotations

import os

import pytest

from masseyq.cohomology import CohomologyRing, triple_massey
from masseyq.errors import ParseError
from masseyq.fileformat import (
    load_algebra_document,
    load_datum,
    load_family,
    parse_algebra_document,
    parse_datum_document,
    parse_family_document,
    resolve_model_spec,
    tautological_from_parts,
)
from masseyq.models import heisenberg, rotation_datum
from masseyq.transfer import scan_families, validate_transfer_datum

DATA = os.path.join(os.path.dirname(__file__), "..", "data")


HEISENBERG_TEXT = """
# a comment
cap = 4
gen x : 1
gen y : 1
gen z : 1
d z = x*y
"""

TWO_POINTS_TEXT = """
[algebra]
cap = 1
basis 0 : eN eS
mul eN * eN = eN
mul eN * eS = 0
mul eS * eN = 0
mul eS * eS = eS
"""


def test_free_algebra_headerless():
    doc = parse_algebra_document(HEISENBERG_TEXT)
    ring = CohomologyRing(doc.algebra)
    assert ring.betti() == (1, 2, 2, 1)
    assert doc.bundles == []


def test_free_algebra_matches_builtin():
    doc = parse_algebra_document(HEISENBERG_TEXT)
    ring = CohomologyRing(doc.algebra)
    res = triple_massey(
        ring.class_from_polynomial("x"),
        ring.class_from_polynomial("x"),
        ring.class_from_polynomial("y"),
    )
    assert not res.vanishes
    assert CohomologyRing(heisenberg()).betti() == ring.betti()


def test_table_algebra_with_cap_padding():
    doc = parse_algebra_document(TWO_POINTS_TEXT)
    a = doc.algebra
    assert a.dims == (2, 0)
    en = a.named_element("eN")
    es = a.named_element("eS")
    assert (en * en - en).is_zero()
    assert (en * es).is_zero()
    assert (a.unit() - en - es).is_zero()


def test_bundles_section():
    doc = parse_algebra_document(
        HEISENBERG_TEXT + "\n[bundles]\nbundle c1 = x*z weight = 2\nbundle weight = 1\n"
    )
    assert len(doc.bundles) == 2
    assert doc.bundles[0].weight == 2
    assert doc.bundles[0].c1 == "x*z"
    assert doc.bundles[1].c1 is None


def test_load_bundled_files():
    doc = load_algebra_document(os.path.join(DATA, "heisenberg.alg"))
    assert CohomologyRing(doc.algebra).betti() == (1, 2, 2, 1)


def test_parse_error_carries_line_number():
    with pytest.raises(ParseError) as exc:
        parse_algebra_document("cap = 4\ngen x : 1\nwhat is this\n")
    assert "line 3" in str(exc.value)


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("", "empty"),
        ("gen x : 1\nbasis 0 : e", "mixing"),
        ("gen x : 1", "needs a cap"),
        ("cap = 2\ncap = 3\ngen x : 1", "cap given twice"),
        ("[what]\ncap = 2", "unexpected section"),
        ("[broken\ncap = 2", "malformed section header"),
        ("cap = 1\nbasis 0 : e\nbasis 0 : f", "second basis stanza"),
        ("cap = 1\nbasis 0 : e e", "repeats"),
        ("cap = 1\nbasis 0 : e\nmul e * f = e", "unknown basis name"),
        ("cap = 1\nbasis 0 : e\nmul e * e = e\nmul e * e = 0", "given twice"),
        ("cap = 1\nbasis 0 : e\nmul e * e = 2", "linear combinations"),
        ("cap = 0\nbasis 0 : e\ndiff e = e", "above cap"),
        ("cap = 2\nbasis 0 : e\nbasis 2 : f\nmul f * f = f", "above cap"),
        ("cap = 2\nbasis 0 : e\nbasis 2 : f\nmul e * e = f", "degree"),
    ],
)
def test_algebra_rejections(text, fragment):
    with pytest.raises(ParseError) as exc:
        parse_algebra_document(text)
    assert fragment in str(exc.value)


def test_datum_file_matches_builtin():
    datum = load_datum(os.path.join(DATA, "rotation.datum"))
    assert validate_transfer_datum(datum) == []
    ref = rotation_datum()
    assert datum.m == ref.m
    for n in range(9):
        assert datum.restrict.matrix(n) == ref.restrict.matrix(n)
    assert list(datum.push_matrices) == list(ref.push_matrices)


MINI_DATUM = """
[ambient]
cap = 3
basis 0 : e
basis 2 : f
mul e * e = e
mul e * f = f
mul f * e = f

[fixed-base]
cap = 1
basis 0 : e
mul e * e = e

[datum]
m = 1
chi = e*h
fixed-cap = 4
restrict[0] = 1
push[0] = 1
"""


def test_minimal_datum_parses():
    datum = parse_datum_document(MINI_DATUM, name="mini")
    assert datum.name == "mini"
    assert datum.push_top == 0
    assert datum.fixed.cap == 4


@pytest.mark.parametrize(
    "mangle,fragment",
    [
        (lambda t: t.replace("[fixed-base]", "[fixedbase]"), "needs a"),
        (lambda t: t.replace("m = 1\n", ""), "needs m"),
        (lambda t: t.replace("chi = e*h\n", ""), "needs chi"),
        (lambda t: t.replace("fixed-cap = 4\n", ""), "needs fixed-cap"),
        (lambda t: t.replace("restrict[0] = 1", "restrict[0] = 1 2"), "must be 1x1"),
        (lambda t: t.replace("push[0] = 1", "push[0] = 1 ; 2"), "must be 1x1"),
        (lambda t: t.replace("restrict[0]", "restrict[9]"), "beyond the shared cap"),
        (lambda t: t + "push[0] = 2\n", "given twice"),
        (lambda t: t.replace("push[0] = 1", "push[0] = 1 2 ; 3"), "different lengths"),
        (lambda t: t.replace("push[0] = 1", "push[0] = x"), "not a rational"),
        (lambda t: t + "wobble = 3\n", "unrecognized datum key"),
        (lambda t: t + "[extra]\n", "unexpected section"),
    ],
)
def test_datum_rejections(mangle, fragment):
    with pytest.raises(ParseError) as exc:
        parse_datum_document(mangle(MINI_DATUM))
    assert fragment in str(exc.value)


def test_omitted_matrices_are_zero_filled():
    text = MINI_DATUM.replace("restrict[0] = 1\n", "")
    datum = parse_datum_document(text)
    finding_text = " ".join(validate_transfer_datum(datum))
    assert "restriction" in finding_text


def test_family_file_resolves_relative_paths():
    configs = load_family(os.path.join(DATA, "demo.family"))
    assert [c.name for c in configs] == [
        "heisenberg-h",
        "heisenberg-twisted-line",
        "rotation-poles",
    ]
    assert configs[2].datum is not None
    report = scan_families(configs)
    assert report.findings == []
    assert [r.status for r in report.rows] == ["ok", "ok", "premise-failed"]


FAMILY_TEXT = """
[config]
name = one
model = builtin:heisenberg
triple = x | x | y
chi = h
m = 1
"""


def test_family_minimal():
    configs = parse_family_document(FAMILY_TEXT)
    assert len(configs) == 1
    assert configs[0].base is not None
    assert configs[0].expect is None


def test_family_tautological_datum():
    text = FAMILY_TEXT + "datum = tautological\nmin-cap = 10\n"
    configs = parse_family_document(text)
    cfg = configs[0]
    assert cfg.datum is not None
    assert cfg.base is None
    assert cfg.datum.fixed.cap >= 10
    report = scan_families(configs)
    assert report.rows[0].verdict == "non-vanishing"


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("", "at least one"),
        ("[config]\nmodel = builtin:torus", "needs a triple"),
        ("[config]\ntriple = x | y", "triple reads"),
        ("[config]\ntriple = x | x | y", "needs a model or a datum"),
        (
            "[config]\nmodel = builtin:torus\ntriple = x | x | y",
            "needs Euler data",
        ),
        (
            "[config]\nmodel = builtin:torus\ntriple = x | x | y\n"
            "chi = h\nm = 1\nbundle weight = 1",
            "not both",
        ),
        (
            "[config]\ndatum = builtin:rotation\ntriple = eN | eS | eN\nchi = h",
            "drop",
        ),
        (
            "[config]\ndatum = tautological\ntriple = x | x | y",
            "needs a model",
        ),
        ("[config]\ntriple = x | x | y\nwhimsy = 4", "unrecognized config key"),
        ("[family]\nother = 1\n[config]\ntriple = x | x | y", "unrecognized family line"),
        ("[oops]\nname = 1", "unexpected section"),
    ],
)
def test_family_rejections(text, fragment):
    with pytest.raises(ParseError) as exc:
        parse_family_document(text)
    assert fragment in str(exc.value)


def test_resolve_model_spec_variants(tmp_path):
    assert resolve_model_spec("builtin:torus").cap == 3
    assert resolve_model_spec("torus").cap == 3
    path = tmp_path / "tiny.alg"
    path.write_text("cap = 2\ngen u : 1\n")
    assert resolve_model_spec(str(path)).cap == 2
    assert resolve_model_spec("tiny.alg", str(tmp_path)).cap == 2
    with pytest.raises(ParseError):
        resolve_model_spec("no-such-thing-anywhere")
    with pytest.raises(ParseError):
        resolve_model_spec("builtin:nope")


def test_tautological_from_parts_needs_euler_data():
    base = heisenberg()
    with pytest.raises(ParseError):
        tautological_from_parts(base, ("x", "x", "y"), [], None, None, None)
    datum = tautological_from_parts(base, ("x", "x", "y"), [], "h", 1, None)
    assert datum.fixed.cap >= 9
