"""End-to-end command-line behavior: reports, exit codes, determinism."""

import json
from pathlib import Path

from towercalc.cli import main
from towercalc.complexes import ChainMap, direct_sum, moore_complex, sphere_complex, zero_complex
from towercalc.complexes import direct_sum_map
from towercalc.fracture import PrimePartition, fracture_cospan
from towercalc.sections import CospanSection
from towercalc.serialize import save

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
MOORE = str(FIXTURES / "moore_6.json")
SPHERE = str(FIXTURES / "sphere_2.json")
TOWER = str(FIXTURES / "tower_moore6.json")
COSPAN = str(FIXTURES / "cospan_fracture_moore6.json")


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


# ---------------------------------------------------------------------------
# happy paths


def test_homology_lists_the_torsion(capsys):
    code, out = run(capsys, "homology", MOORE)
    assert code == 0
    assert "degree=0 value=Z/6" in out


def test_fracture_reassembles_through_the_partition(capsys):
    code, out = run(capsys, "fracture", MOORE, "--primes-j", "2", "--primes-k", "3")
    assert code == 0
    assert "reassembly expected=Z/6 value=Z/6" in out


def test_seeded_hypercomplete_batch_all_pass(capsys):
    code, out = run(capsys, "hypercomplete", "--seed", "7", "--count", "50",
                    "--format", "machine")
    assert code == 0
    doc = json.loads(out)
    instances = doc["checks"][0]["children"]
    assert len(instances) == 50
    assert all(inst["passed"] for inst in instances)


def test_tower_and_milnor_on_the_bundled_tower(capsys):
    assert run(capsys, "tower", TOWER)[0] == 0
    assert run(capsys, "milnor", TOWER)[0] == 0


def test_section_checks_pass_on_the_bundled_documents(capsys):
    assert run(capsys, "section", "check-tower", TOWER)[0] == 0
    assert run(capsys, "section", "check-cospan", COSPAN)[0] == 0


def test_truncate_cover_layer_uct_homcx_hofib(capsys):
    assert run(capsys, "truncate", MOORE, "--n", "0")[0] == 0
    assert run(capsys, "cover", MOORE, "--k", "0")[0] == 0
    assert run(capsys, "layer", MOORE, "--k", "-1")[0] == 0
    assert run(capsys, "uct", MOORE, MOORE, "--n", "1")[0] == 0
    assert run(capsys, "homcx", SPHERE, MOORE)[0] == 0
    assert run(capsys, "hofib", SPHERE, "--k", "1")[0] == 0


# ---------------------------------------------------------------------------
# exit codes


def test_certified_failure_exits_one(capsys, tmp_path):
    x = direct_sum(moore_complex(2, 0), sphere_complex(0))
    good = fracture_cospan(x, PrimePartition({2}, {3}))
    leg = direct_sum_map(ChainMap.identity(sphere_complex(0)),
                         ChainMap.zero_map(moore_complex(3, 0), zero_complex()))
    bad = CospanSection(leg.source, good.x0, good.x2, leg, good.right, tags=good.tags)
    path = tmp_path / "bad_cospan.json"
    save(bad, path)
    code, out = run(capsys, "section", "check-cospan", str(path))
    assert code == 1
    assert "verdict: fail" in out
    assert "[FAIL] local_model" in out


def test_unusable_inputs_exit_two(capsys):
    assert main(["homology", str(FIXTURES / "absent.json")]) == 2
    assert main(["homology", str(FIXTURES / "invalid_d2.json")]) == 2
    assert main(["fracture", MOORE, "--primes-j", "abc", "--primes-k", "3"]) == 2
    # partition does not cover the torsion of Moore(6)
    assert main(["fracture", MOORE, "--primes-j", "2", "--primes-k", "5"]) == 2
    # tower command fed a plain complex
    assert main(["tower", MOORE]) == 2
    capsys.readouterr()


def test_verdict_and_exit_code_agree(capsys):
    for argv in (["homology", MOORE],
                 ["milnor", TOWER],
                 ["fracture", MOORE, "--primes-j", "2", "--primes-k", "3"]):
        code, out = run(capsys, *argv)
        assert (code == 0) == ("verdict: pass" in out)


# ---------------------------------------------------------------------------
# determinism and golden reports


def test_machine_reports_are_byte_identical_across_runs(capsys):
    _, first = run(capsys, "milnor", "--seed", "3", "--count", "5",
                   "--format", "machine")
    _, second = run(capsys, "milnor", "--seed", "3", "--count", "5",
                    "--format", "machine")
    assert first == second


def test_machine_reports_are_canonical_json_without_timing(capsys):
    _, out = run(capsys, "homology", MOORE, "--format", "machine")
    assert "elapsed" not in out
    doc = json.loads(out)
    assert json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n" == out


def test_report_flag_writes_the_machine_document(capsys, tmp_path):
    path = tmp_path / "report.json"
    _, out = run(capsys, "homology", MOORE, "--format", "machine",
                 "--report", str(path))
    assert path.read_text() == out


GOLDEN = [
    (["homology", MOORE], "homology_moore6.report.json"),
    (["fracture", MOORE, "--primes-j", "2", "--primes-k", "3"],
     "fracture_moore6.report.json"),
    (["milnor", TOWER], "milnor_tower_moore6.report.json"),
    (["section", "check-cospan", COSPAN], "section_cospan_moore6.report.json"),
]


def test_golden_reports_are_reproduced(capsys, tmp_path):
    for argv, name in GOLDEN:
        fresh = tmp_path / name
        assert main(argv + ["--report", str(fresh)]) == 0
        capsys.readouterr()
        assert fresh.read_bytes() == (FIXTURES / "golden" / name).read_bytes()


def test_golden_generated_document_is_reproduced(capsys):
    code, out = run(capsys, "generate", "--seed", "0")
    assert code == 0
    assert out == (FIXTURES / "golden" / "generated_seed0.json").read_text()


def test_generate_machine_format_is_canonical(capsys):
    _, out = run(capsys, "generate", "--seed", "4", "--format", "machine")
    doc = json.loads(out)
    assert doc["name"] == "generated_4"
    assert json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n" == out
