"""Document round-trips and rejection paths for the flat-file formats."""

from pathlib import Path

import pytest

from towercalc.complexes import direct_sum, homology_group, moore_complex, sphere_complex
from towercalc.errors import ParseError, ValidationError
from towercalc.exactalg import FpAbelianGroup
from towercalc.fracture import PrimePartition, fracture_cospan
from towercalc.gen import generate
from towercalc.sections import postnikov_tower
from towercalc.serialize import (
    complex_from_doc,
    complex_to_doc,
    cospan_from_doc,
    cospan_to_doc,
    load,
    matrix_from_doc,
    save,
    tower_from_doc,
    tower_to_doc,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def test_bundled_sphere_loads():
    assert load(FIXTURES / "sphere_2.json") == sphere_complex(2)


def test_bundled_moore_loads_with_its_torsion():
    x = load(FIXTURES / "moore_6.json")
    assert homology_group(x, 0) == FpAbelianGroup.cyclic(6)


def test_nonsquaring_differential_is_rejected_with_its_degree():
    with pytest.raises(ValidationError) as exc:
        load(FIXTURES / "invalid_d2.json")
    assert exc.value.location == "degree 2"


def test_bundled_tower_and_cospan_load():
    tower = load(FIXTURES / "tower_moore6.json")
    assert tower.length == 2
    cospan = load(FIXTURES / "cospan_fracture_moore6.json")
    assert cospan.tags == ("local:2", "rational", "local:3")


def test_complex_file_round_trip(tmp_path):
    for seed in range(25):
        doc = generate(seed)
        x = complex_from_doc(doc)
        path = tmp_path / f"c{seed}.json"
        save(x, path, name=doc["name"])
        assert load(path) == x


def test_tower_document_round_trip():
    t = postnikov_tower(direct_sum(moore_complex(6, 0), sphere_complex(2)), 3)
    assert tower_from_doc(tower_to_doc(t)) == t


def test_cospan_document_round_trip():
    s = fracture_cospan(moore_complex(6, 0), PrimePartition({2}, {3}))
    assert cospan_from_doc(cospan_to_doc(s)) == s


def test_metadata_survives():
    doc = complex_to_doc(sphere_complex(1), "named", metadata={"origin": "test"})
    assert doc["metadata"] == {"origin": "test"}
    assert complex_from_doc(doc) == sphere_complex(1)


def test_not_json_is_a_parse_error(tmp_path):
    path = tmp_path / "garbage.json"
    path.write_text("definitely { not json")
    with pytest.raises(ParseError):
        load(path)


def test_missing_file_is_a_parse_error(tmp_path):
    with pytest.raises(ParseError):
        load(tmp_path / "nope.json")


def test_unrecognized_shape_is_a_parse_error(tmp_path):
    path = tmp_path / "odd.json"
    path.write_text('{"something": 1}')
    with pytest.raises(ParseError) as exc:
        load(path)
    assert "unrecognized" in str(exc.value)


def test_entries_must_be_decimal_strings():
    with pytest.raises(ParseError):
        matrix_from_doc([[6]], 1, 1, "m")
    with pytest.raises(ParseError):
        matrix_from_doc([["six"]], 1, 1, "m")
    with pytest.raises(ParseError):
        matrix_from_doc([["6", "7"]], 1, 1, "m")


def test_matrix_locations_name_the_entry():
    with pytest.raises(ParseError) as exc:
        matrix_from_doc([["1", "x"]], 1, 2, "differentials[0]")
    assert exc.value.location == "differentials[0][0][1]"


def test_missing_keys_are_parse_errors():
    with pytest.raises(ParseError) as exc:
        complex_from_doc({"min_degree": 0, "degrees": []}, "doc")
    assert "differentials" in str(exc.value)


def test_differential_count_must_match():
    doc = {
        "name": "bad",
        "min_degree": 0,
        "degrees": [{"generators": 1, "relations": []},
                    {"generators": 1, "relations": []}],
        "differentials": [],
    }
    with pytest.raises(ParseError):
        complex_from_doc(doc, "doc")
