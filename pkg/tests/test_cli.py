import io
import json

import pytest

from fdq.cli import RunConfig, config_load, run_command
from fdq.errors import ConfigError, UnknownSuite
from fdq.suites import property_suite, suite_names


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(argv, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


# -- single-shot commands -----------------------------------------------------------


def test_star_command():
    code, out, _ = run(["star", "--product", "weyl", "--n", "1", "q1", "p1"])
    assert code == 0
    assert out == "q1*p1 + (1/2*i)*l\n"


def test_functional_command():
    code, out, _ = run(["functional", "--delta", "0", "--product", "weyl",
                        "1/2*(p1^2+q1^2)", "--square"])
    assert code == 0
    assert out == "(-1/4)*l^2\n"


def test_deformed_functional_command():
    code, out, _ = run(["functional", "--delta", "0", "--deform",
                        "--product", "weyl", "1/2*(p1^2+q1^2)", "--square"])
    assert code == 0
    assert out == "1/4*l^2\n"


def test_morita_command():
    for diff, expected in (("3", "equivalent"), ("1/2", "not_equivalent"),
                           ("l", "not_equivalent")):
        code, out, _ = run(["morita", "--m", "1", "--diff", diff])
        assert code == 0
        assert out.strip() == expected


def test_commutator_command():
    code, out, _ = run(["commutator", "q1", "p1"])
    assert code == 0
    assert out == "(i)*l\n"


def test_starexp_command():
    code, out, _ = run(["starexp", "--order", "2", "q1"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "e0 = 1"
    assert lines[1] == "e1 = (-1)*q1"
    assert lines[2] == "e2 = 1/2*q1^2"


def test_schroedinger_command():
    code, out, _ = run(["schroedinger", "--kind", "weyl", "q1*p1"])
    assert code == 0
    assert out == "((-i)*q1*l)*d/dq1 + (-1/2*i)*l\n"


def test_fock_commands():
    code, out, _ = run(["fock", "--rep", "z1*zb1"])
    assert code == 0
    assert out == "(2*yb1*l)*d/dyb1\n"
    code, out, _ = run(["fock", "--inner", "yb1", "yb1"])
    assert code == 0
    assert out == "2*l\n"


def test_gns_command_json():
    code, out, _ = run(["gns", "--omega", '[["1","0"],["0","0"]]', "--json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["basis"] == ["E11", "E21"]


def test_project_command():
    code, out, _ = run(["project", "--K", "3",
                        "--p0", '[["1/2","1/2"],["1/2","1/2"]]',
                        "--deform", '[["0","1"],["0","0"]]'])
    assert code == 0
    assert "1/2 + (-1/4)*l + 1/8*l^2" in out


def test_axioms_command():
    code, out, _ = run(["axioms", "--product", "weyl", "--degree", "2",
                        "--K", "4"])
    assert code == 0
    assert "associativity: pass" in out


def test_rieffel_command(tmp_path):
    f_path = tmp_path / "f.json"
    e_path = tmp_path / "e.json"
    f_path.write_text(json.dumps(
        {"base": {"m": 1}, "rank": 2,
         "gram": [["1", "0"], ["0", "1"]]}))
    e_path.write_text(json.dumps(
        {"base": {"m": 1}, "rank": 1, "gram": [["1"]]}))
    code, out, _ = run(["rieffel", str(f_path), str(e_path)])
    assert code == 0
    assert "rank 2" in out


def test_json_output_is_valid_json():
    code, out, _ = run(["star", "--json", "q1", "p1"])
    assert code == 0
    payload = json.loads(out)
    assert payload["type"] == "observable"


# -- exit-code contract ---------------------------------------------------------------


def test_usage_error_exit_2():
    code, _, _ = run(["star", "q1"])          # missing argument
    assert code == 2
    code, _, _ = run(["nonsense"])
    assert code == 2


def test_core_error_exit_3_and_no_traceback():
    code, out, err = run(["star", "q1", "q1 + "])
    assert code == 3
    assert "Traceback" not in out and "Traceback" not in err
    assert err.startswith("error: ParseError:")


def test_suite_failures_exit_1(monkeypatch):
    # A fabricated failing suite exercises the exit-1 path deterministically.
    from fdq import suites as suites_mod

    def failing(config, rng):
        r = suites_mod._Runner("failing")
        r.check("always fails", False)
        return r

    monkeypatch.setitem(suites_mod._SUITES, "failing", failing)
    import fdq.cli as cli_mod
    monkeypatch.setattr(cli_mod, "suite_names",
                        lambda: list(suites_mod._SUITES) + ["all"])
    code, out, _ = run(["suite", "failing"])
    assert code == 1
    assert "FAIL always fails" in out


def test_error_mapping_golden(tmp_path):
    bad_spec = tmp_path / "bad_spec.json"
    bad_spec.write_text('{"type": "nonsense"}')
    bad_module = tmp_path / "bad_module.json"
    bad_module.write_text(json.dumps(
        {"base": {"m": 1}, "rank": 2,
         "gram": [["1", "l"], ["0", "1"]]}))
    other = tmp_path / "unit_module.json"
    other.write_text(json.dumps(
        {"base": {"m": 1}, "rank": 1, "gram": [["1"]]}))
    cases = [
        (["star", "q1", "q1 +"], "ParseError"),
        (["star", "q1", "z1 + q1"], "MixedChart"),
        (["star", "q1", "q7"], "UnknownVariable"),
        (["star", "--K", "0", "q1", "p1"], "ConfigError"),
        (["star", "--product", f"custom:{bad_spec}", "q1", "p1"],
         "SchemaError"),
        (["project", "--p0", '[["2","0"],["0","0"]]'], "DefectNotSmall"),
        (["gns", "--omega", '[["-1","0"],["0","0"]]'], "PositivityRefuted"),
        (["project", "--p0", '[["1","0"]]'], "ShapeMismatch"),
        (["morita", "--m", "2", "--diff", "3"], "RankMismatch"),
        (["rieffel", str(bad_module), str(other)], "NotHermitian"),
    ]
    for argv, name in cases:
        code, _, err = run(argv)
        assert code == 3, (argv, err)
        assert err.startswith(f"error: {name}:"), (argv, err)


def test_precision_exhausted_reachable(tmp_path):
    # Induction whose Gram products push all content past the truncation
    # order cannot certify its degeneracy space.
    f_path = tmp_path / "f.json"
    e_path = tmp_path / "e.json"
    f_path.write_text(json.dumps(
        {"base": {"m": 1}, "rank": 1, "gram": [["l^3"]]}))
    e_path.write_text(json.dumps(
        {"base": {"m": 1}, "rank": 1, "gram": [["l^3"]]}))
    code, _, err = run(["rieffel", str(f_path), str(e_path), "--K", "4"])
    assert code == 3
    assert err.startswith("error: PrecisionExhausted:")


def test_unknown_suite_error():
    cfg = RunConfig()
    with pytest.raises(UnknownSuite):
        property_suite("does-not-exist", cfg)


# -- config ------------------------------------------------------------------------------


def test_config_defaults():
    class Args:
        pass

    cfg = config_load(Args())
    assert (cfg.K, cfg.n, cfg.product, cfg.output) == (6, 1, "weyl", "text")


def test_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(K=0)
    with pytest.raises(ConfigError):
        RunConfig(n=0)
    with pytest.raises(ConfigError):
        RunConfig(product="bogus")
    with pytest.raises(ConfigError):
        RunConfig(output="yaml")


def test_config_file_and_flag_override(tmp_path):
    path = tmp_path / "fdq.conf"
    path.write_text("# comment\nK = 4\nproduct = wick\n")

    class Args:
        config = str(path)

    cfg = config_load(Args())
    assert cfg.K == 4 and cfg.product == "wick"

    class Args2:
        config = str(path)
        K = 8

    cfg2 = config_load(Args2())
    assert cfg2.K == 8 and cfg2.product == "wick"


def test_config_env_fallback(tmp_path, monkeypatch):
    path = tmp_path / "env.conf"
    path.write_text("n = 2\n")
    monkeypatch.setenv("FDQ_CONFIG", str(path))

    class Args:
        pass

    cfg = config_load(Args())
    assert cfg.n == 2


def test_config_rejects_unknown_keys(tmp_path):
    path = tmp_path / "bad.conf"
    path.write_text("verbosity = 3\n")

    class Args:
        config = str(path)

    with pytest.raises(ConfigError) as exc:
        config_load(Args())
    assert "verbosity" in str(exc.value)


def test_config_custom_product(tmp_path):
    import fdq.exprio as exprio
    from fdq.star import wick

    path = tmp_path / "wick.json"
    path.write_text(json.dumps(exprio.serialize(wick(1, 6))))
    code, out, _ = run(["star", "--product", f"custom:{path}", "q1", "q1"])
    assert code == 0
    assert out == "q1^2 + 1/2*l\n"


# -- determinism ---------------------------------------------------------------------------


def test_suite_output_deterministic():
    first = run(["suite", "morita", "--seed", "17"])
    second = run(["suite", "morita", "--seed", "17"])
    assert first[0] == second[0] == 0
    assert first[1] == second[1]


def test_suite_names_exposed():
    names = suite_names()
    assert "all" in names and "star-axioms" in names
