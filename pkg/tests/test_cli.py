import json

import pytest

from wittscaffold.cli import (
    EXIT_INVARIANT,
    EXIT_OK,
    EXIT_PRECISION,
    EXIT_VALIDATION,
    main,
    parse_monomial,
)


EXAMPLE_CFG = """\
# worked example parameters
p = 3
e0 = 6
a1 = pi0^-1
mu = pi0^-1
"""

P2_CFG = """\
p = 2
e0 = 4
a1 = pi0^-1
mu = pi0^-1
"""

REJECTED_CFG = """\
p = 3
e0 = 6
a1 = pi0^-2
mu = pi0^-1
"""


@pytest.fixture
def example_cfg(tmp_path):
    path = tmp_path / "example.cfg"
    path.write_text(EXAMPLE_CFG)
    return str(path)


@pytest.fixture
def p2_cfg(tmp_path):
    path = tmp_path / "p2.cfg"
    path.write_text(P2_CFG)
    return str(path)


@pytest.fixture
def rejected_cfg(tmp_path):
    path = tmp_path / "rejected.cfg"
    path.write_text(REJECTED_CFG)
    return str(path)


class TestMonomialParsing:
    def test_forms(self):
        assert parse_monomial("pi0^-1") == (1, -1)
        assert parse_monomial("2*pi0^-3") == (2, -3)
        assert parse_monomial("-1*pi0^2") == (-1, 2)
        assert parse_monomial("7") == (7, 0)

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_monomial("x1^2")


class TestValidate:
    def test_example_passes(self, example_cfg, capsys):
        assert main(["validate", "--config", example_cfg]) == EXIT_OK
        out = capsys.readouterr().out
        assert "-9/4 < -1" in out
        assert "54 > 38" in out
        assert "46/9" in out
        assert "inconsistent-as-printed" in out

    def test_rejection_names_inequality(self, rejected_cfg, capsys):
        assert main(["validate", "--config", rejected_cfg]) == EXIT_VALIDATION
        out = capsys.readouterr().out
        assert "second-bound" in out
        assert "9 > 16" in out

    def test_trivially_bad_mu(self, tmp_path, capsys):
        path = tmp_path / "m0.cfg"
        path.write_text("p = 3\ne0 = 6\na1 = pi0^-1\nmu = 1\n")
        assert main(["validate", "--config", str(path)]) == EXIT_VALIDATION
        assert "positive-m" in capsys.readouterr().out

    def test_zero_inputs_fail_validation_cleanly(self, tmp_path, capsys):
        path = tmp_path / "z.cfg"
        path.write_text("p = 3\ne0 = 6\na1 = 0\nmu = pi0^-1\n")
        assert main(["validate", "--config", str(path)]) == EXIT_VALIDATION
        assert "nonzero" in capsys.readouterr().out
        path.write_text("p = 3\ne0 = 6\na1 = pi0^-1\nmu = 0\n")
        assert main(["validate", "--config", str(path)]) == EXIT_VALIDATION
        assert "nonzero" in capsys.readouterr().out

    def test_p2_passes(self, p2_cfg):
        assert main(["validate", "--config", p2_cfg]) == EXIT_OK


class TestAnalyze:
    def test_example_json(self, example_cfg, capsys):
        assert main(["analyze", "--config", example_cfg, "--json"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        ram = report["ramification"]
        assert (ram["b1"], ram["m"], ram["b2"], ram["u2"]) == (1, 1, 10, 4)
        ms = report["module_structure"]
        assert ms["free"] is True
        assert ms["generator"]["printed"] == "pi0^3*x1^2*y2^2"
        assert ms["valuation_table"] == [1, 4, 7, 2, 5, 8, 3, 6, 0]
        assert report["scaffold_tables"]["w"] == [0, 0, 0, 1, 1, 1, 2, 2, 3]

    def test_p2_json(self, p2_cfg, capsys):
        assert main(["analyze", "--config", p2_cfg, "--json"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["ramification"]["b2"] == 5
        assert report["module_structure"]["free"] is True

    def test_json_deterministic(self, example_cfg, capsys):
        main(["analyze", "--config", example_cfg, "--json"])
        first = capsys.readouterr().out
        main(["analyze", "--config", example_cfg, "--json"])
        second = capsys.readouterr().out
        assert first == second

    def test_text_and_json_agree(self, example_cfg, capsys):
        main(["analyze", "--config", example_cfg, "--json"])
        report = json.loads(capsys.readouterr().out)
        main(["analyze", "--config", example_cfg])
        text = capsys.readouterr().out
        tables = report["scaffold_tables"]
        assert f"w = {tables['w']}" in text
        assert f"d = {tables['d']}" in text
        ram = report["ramification"]
        assert f"b2 = {ram['b2']}" in text
        vt = report["module_structure"]["valuation_table"]
        assert str(vt) in text

    def test_no_verdict_when_bound_fails(self, tmp_path, capsys):
        path = tmp_path / "nb.cfg"
        path.write_text("p = 3\ne0 = 6\na1 = pi0^-1\nmu = pi0^-2\n")
        assert main(["analyze", "--config", str(path), "--json"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["module_structure"]["free"] is None

    def test_validation_failure_exit(self, rejected_cfg, capsys):
        assert main(["analyze", "--config", rejected_cfg]) == EXIT_VALIDATION
        capsys.readouterr()


class TestAudit:
    def test_structural_checks_only(self, example_cfg, capsys):
        rc = main(["audit", "--config", example_cfg, "--sample", "0",
                   "--seed", "0", "--json"])
        assert rc == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["passed"] is True
        names = [c["name"] for c in report["galois"]]
        assert "witt-congruence" in names
        assert "digit-shift-and-drop" in names

    def test_deterministic_given_seed(self, p2_cfg, capsys):
        main(["audit", "--config", p2_cfg, "--sample", "5", "--seed", "7",
              "--json"])
        first = capsys.readouterr().out
        main(["audit", "--config", p2_cfg, "--sample", "5", "--seed", "7",
              "--json"])
        second = capsys.readouterr().out
        assert first == second

    def test_fault_injection_fails_witt_congruence(self, example_cfg, capsys):
        rc = main(["audit", "--config", example_cfg, "--sample", "0",
                   "--seed", "0", "--fault-inject", "sigma1", "--json"])
        assert rc == EXIT_INVARIANT
        report = json.loads(capsys.readouterr().out)
        assert report["passed"] is False
        assert "witt-congruence" in report["failed_names"]


class TestReproduceExample:
    def test_matches_golden(self, capsys):
        assert main(["reproduce-example"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "MATCH" in out

    def test_json_form(self, capsys):
        assert main(["reproduce-example", "--json"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["matched"] is True
        assert report["differences"] == {}


class TestPrecisionExhaustion:
    def test_exit_code(self, example_cfg, capsys):
        rc = main(["analyze", "--config", example_cfg,
                   "--precision", "108", "--guard-digits", "0"])
        assert rc == EXIT_PRECISION
        assert "precision exhausted" in capsys.readouterr().err


class TestConfigParsing:
    def test_unknown_key_rejected(self, tmp_path, capsys):
        path = tmp_path / "bad.cfg"
        path.write_text("p = 3\ne0 = 6\na1 = pi0^-1\nmu = pi0^-1\nbogus = 1\n")
        assert main(["validate", "--config", str(path)]) == EXIT_VALIDATION
        assert "unknown key" in capsys.readouterr().err

    def test_missing_key_rejected(self, tmp_path, capsys):
        path = tmp_path / "short.cfg"
        path.write_text("p = 3\ne0 = 6\n")
        assert main(["validate", "--config", str(path)]) == EXIT_VALIDATION
        assert "missing required" in capsys.readouterr().err

    def test_config_precision_and_format(self, tmp_path, capsys):
        path = tmp_path / "fmt.cfg"
        path.write_text(
            "p = 3\ne0 = 6\na1 = pi0^-1\nmu = pi0^-1\n"
            "precision = 120\nformat = json\n"
        )
        assert main(["validate", "--config", str(path)]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["config"]["precision_v2"] == 120
