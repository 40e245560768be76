import json

import numpy as np
import pytest

from tetrabasis.cli import CSV_COLUMNS, fmt_number, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


class TestBuild:
    def test_json_schema_and_values(self, capsys):
        code, out = run_cli(capsys, "build", "--n", "2", "--m", "2", "--poly", "z1 z2")
        assert code == 0
        payload = json.loads(out)
        assert list(payload.keys()) == ["n", "polynomial", "fiducial", "columns"]
        assert payload["n"] == 2
        assert payload["polynomial"] == "z1 z2"
        fid = np.array([complex(re, im) for re, im in payload["fiducial"]])
        expected = np.array([1, (1 - 1j) / 2, (1 + 1j) / 2, 0]) / np.sqrt(2)
        np.testing.assert_allclose(fid, expected, atol=1e-9)
        assert len(payload["columns"]) == 4

    def test_deterministic_output(self, capsys):
        _, first = run_cli(capsys, "build", "--n", "3", "--m", "2",
                           "--poly", "z1 z3 + 3 z2 z3 + z1 z2 z3")
        _, second = run_cli(capsys, "build", "--n", "3", "--m", "2",
                            "--poly", "z1 z3 + 3 z2 z3 + z1 z2 z3")
        assert first == second


class TestVerify:
    def test_pass(self, capsys):
        code, out = run_cli(capsys, "verify", "--n", "2", "--m", "2", "--poly", "z1 z2")
        assert code == 0
        assert json.loads(out)["ok"] is True

    def test_tolerance_override(self, capsys):
        code, out = run_cli(capsys, "verify", "--n", "2", "--m", "2", "--poly", "z1 z2",
                            "--tolerance", "norm=1e-20")
        assert code == 1  # fp rounding exceeds an absurdly tight tolerance
        assert json.loads(out)["ok"] is False


class TestGeometry:
    def test_json_keys(self, capsys):
        code, out = run_cli(capsys, "geometry", "--n", "2", "--m", "2", "--poly", "z1 z2")
        assert code == 0
        payload = json.loads(out)
        assert list(payload.keys()) == ["class", "r", "lines", "chirality",
                                        "nonzero_components"]
        assert payload["class"] == ["regular_tetrahedron", "regular_tetrahedron"]
        assert abs(payload["r"] - np.sqrt(3) / 2) < 1e-9
        assert payload["chirality"] == {"1,2": -1}


class TestInvariants:
    def test_json_keys_and_values(self, capsys):
        code, out = run_cli(capsys, "invariants", "--n", "3", "--m", "2",
                            "--poly", "z1 z3 + 3 z2 z3 + z1 z2 z3")
        assert code == 0
        payload = json.loads(out)
        assert list(payload.keys()) == ["tangle", "concurrence_sq", "r", "chirality",
                                        "stab_order", "conjugate_flag"]
        assert abs(payload["tangle"] - np.sqrt(65) / 16) < 1e-9
        assert payload["stab_order"] == 6


class TestLevel:
    def test_formula_level_text(self, capsys):
        code, out = run_cli(capsys, "level", "--n", "3", "--m", "2",
                            "--poly", "2 z1 z3 + z1 z2 z3", "--format", "text")
        assert code == 0
        assert out.strip() == "4"

    def test_matrix_mode(self, capsys):
        code, out = run_cli(capsys, "level", "--n", "2", "--m", "2", "--poly", "z1 z2",
                            "--matrix", "--mode", "full")
        assert code == 0
        payload = json.loads(out)
        assert payload["formula_level"] == 3
        assert payload["matrix"]["level"] == 3
        assert payload["matrix"]["mode"] == "full"


class TestSearch:
    def test_csv_columns_and_rows(self, capsys):
        code, out = run_cli(capsys, "search", "--n", "2", "--m", "2",
                            "--filter", "regular", "--filter", "nonzero",
                            "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert lines[1].startswith("z1 z2,3,")
        assert lines[2].startswith("3 z1 z2,3,")
        assert len(lines) == 3

    def test_json_output(self, capsys):
        code, out = run_cli(capsys, "search", "--n", "2", "--m", "2", "--format", "json")
        payload = json.loads(out)
        assert code == 0
        assert [h["poly"] for h in payload["hits"]] == ["z1 z2", "3 z1 z2"]

    def test_n3_csv_carries_tangle_and_partner(self, capsys):
        code, out = run_cli(capsys, "search", "--n", "3", "--m", "2", "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 41  # header + 40 hits
        first = lines[1].split(",")
        assert first[0] == "z1 z2 z3 + z1 z3"
        assert first[1] == "4"
        assert abs(float(first[3]) - np.sqrt(145) / 16) < 1e-9
        assert first[9] == "3 z1 z2 z3 + 3 z1 z3"  # negated-coefficient partner


class TestClassify:
    def test_n2_single_class(self, capsys):
        code, out = run_cli(capsys, "classify", "--n", "2", "--m", "2",
                            "--filter", "regular", "--filter", "nonzero")
        assert code == 0
        payload = json.loads(out)
        assert len(payload["classes"]) == 1
        record = payload["classes"][0]
        assert record["representatives"] == ["z1 z2", "3 z1 z2"]


class TestWitness:
    def test_conjugation_needed(self, capsys):
        args = ["witness", "--n", "3", "--m", "2",
                "--poly", "z1 z3 + 3 z2 z3 + z1 z2 z3",
                "--target", "3 z1 z3 + z2 z3 + 3 z1 z2 z3"]
        code, out = run_cli(capsys, *args)
        assert code == 0
        assert json.loads(out)["witness"] is None
        code, out = run_cli(capsys, *args, "--conjugation")
        payload = json.loads(out)
        assert payload["witness"]["conjugated"] is True


class TestReproduce:
    def test_appA_passes(self, capsys):
        code, out = run_cli(capsys, "reproduce", "appA")
        assert code == 0
        assert "suite appA: PASS" in out

    def test_appD_documents_ppi_discrepancy(self, capsys):
        # the suite asserts the published permutation-invariance claim, which
        # the built state measurably does not satisfy; exit code reports it
        code, out = run_cli(capsys, "reproduce", "appD")
        assert code == 1
        assert "[FAIL] example 1 full permutation-phase invariance" in out
        failing = [line for line in out.splitlines() if "[FAIL]" in line]
        assert len(failing) == 1

    def test_table1_passes(self, capsys):
        code, out = run_cli(capsys, "reproduce", "table1")
        assert code == 0
        assert "suite table1: PASS" in out

    def test_json_format(self, capsys):
        code, out = run_cli(capsys, "reproduce", "appA", "--format", "json")
        payload = json.loads(out)
        assert payload["suite"] == "appA" and payload["pass"] is True

    def test_unknown_suite_usage_error(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["reproduce", "nosuchsuite"])
        assert err.value.code == 2


class TestUsageErrors:
    def test_unknown_command(self):
        with pytest.raises(SystemExit) as err:
            main(["frobnicate"])
        assert err.value.code == 2

    def test_unknown_flag(self):
        with pytest.raises(SystemExit) as err:
            main(["build", "--n", "2", "--poly", "z1 z2", "--bogus"])
        assert err.value.code == 2

    def test_malformed_polynomial(self, capsys):
        code = main(["build", "--n", "2", "--m", "2", "--poly", "z1 +"])
        assert code == 2

    def test_out_of_range_index(self, capsys):
        code = main(["build", "--n", "2", "--m", "2", "--poly", "z1 z7"])
        assert code == 2


class TestConfigFile:
    def test_config_defaults_and_flag_precedence(self, tmp_path, capsys):
        config = tmp_path / "run.cfg"
        config.write_text("n = 2\nm = 2\npoly = z1 z2\n")
        code, out = run_cli(capsys, "--config", str(config), "build")
        assert code == 0
        assert json.loads(out)["polynomial"] == "z1 z2"
        # explicit flag wins over the config value
        code, out = run_cli(capsys, "--config", str(config), "build",
                            "--poly", "3 z1 z2")
        assert json.loads(out)["polynomial"] == "3 z1 z2"


class TestNumberFormatting:
    def test_twelve_significant_digits(self):
        assert fmt_number(np.sqrt(2) / 2) == 0.707106781187
        assert fmt_number(1 / 3) == 0.333333333333
        assert fmt_number(None) is None
        assert fmt_number(7) == 7
