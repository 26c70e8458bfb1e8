import json

import pytest
from click.testing import CliRunner

from app.cli import cli


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(cli, list(args))


def test_integrate_sphere(runner):
    result = invoke(runner, "integrate", "--domain", "sphere", "rhoi^2")
    assert result.exit_code == 0
    assert result.output.strip() == "1/(q^4 + q^2 + 1)"


def test_integrate_json_envelope(runner):
    result = invoke(runner, "--format", "json", "integrate", "rhoi")
    payload = json.loads(result.stdout)
    assert result.exit_code == 0
    assert payload["version"] == "1.0"
    assert payload["command"] == "integrate"
    assert payload["result"] == {"value": "1/(q^2 + 1)", "status": "finite"}


def test_integrate_zero_by_invariance(runner):
    result = invoke(runner, "--format", "json", "integrate", "zb*rhoi^2")
    assert result.exit_code == 0
    assert json.loads(result.stdout)["result"] == {"value": "0", "status": "zero-by-invariance"}


def test_integrate_plane_status(runner):
    result = invoke(runner, "--format", "json", "integrate", "--domain", "plane", "rhoi^4")
    assert json.loads(result.stdout)["result"] == {"value": "1/(q^4 + q^2 + 1)", "status": "finite"}


def test_not_integrable(runner):
    result = invoke(runner, "--format", "json", "integrate", "z")
    assert result.exit_code == 2
    error = json.loads(result.stdout)["error"]
    assert error["code"] == "NotIntegrable"
    assert error["monomial"] == {"m": 0, "a": 0, "b": 1}


def test_parse_error_exit_code(runner):
    result = invoke(runner, "normalize", "z*)")
    assert result.exit_code == 1
    assert "ParseError" in result.output


def test_parse_error_json(runner):
    result = invoke(runner, "--format", "json", "normalize", "z*)")
    assert result.exit_code == 1
    assert json.loads(result.stdout)["error"]["position"] == 2


def test_simple_commands(runner):
    assert invoke(runner, "star", "z").output.strip() == "zb"
    assert invoke(runner, "d", "z").output.strip() == "dz"
    assert invoke(runner, "act", "del", "z*z").output.strip() == "((q^2 + 1)/q^2) * z"
    assert invoke(runner, "limit-classical", "--pole-order", "1", "lambda").output.strip() == "1"
    assert invoke(runner, "patch", "w*z").output.strip() == "(1)"


def test_mul_matches_normalize(runner):
    product = invoke(runner, "mul", "z", "zb")
    assert product.exit_code == 0
    assert product.output == invoke(runner, "normalize", "z*zb").output


def test_comm_and_pb(runner):
    assert invoke(runner, "comm", "z", "z").output.strip() == "0"
    result = invoke(runner, "--format", "json", "pb", "zb", "z")
    assert result.exit_code == 0
    assert json.loads(result.stdout)["result"]["kind"] == "Func"
    result = invoke(runner, "--format", "json", "pb", "zb", "dz")
    assert json.loads(result.stdout)["result"]["kind"] == "Form"


def test_unknown_suite(runner):
    result = invoke(runner, "verify", "--suite", "nope")
    assert result.exit_code == 2
    assert "UnknownSuite" in result.output


def test_verify_single_suite(runner):
    result = invoke(runner, "--max-degree", "1", "--format", "json", "verify", "--suite", "wpatch")
    assert result.exit_code == 0
    report = json.loads(result.stdout)["result"]
    assert report["failed"] == 0
    assert [s["suite"] for s in report["suites"]] == ["wpatch"]


def test_max_degree_range(runner):
    result = invoke(runner, "--max-degree", "13", "verify")
    assert result.exit_code == 2


def test_verify_sample_size_options(runner):
    result = invoke(runner, "--format", "json", "verify", "--suite", "poisson", "--words", "5", "--triples", "2")
    assert result.exit_code == 0
    report = json.loads(result.stdout)["result"]
    assert (report["words"], report["triples"]) == (5, 2)
    assert report["failed"] == 0


def test_classical_limit_kind(runner):
    result = invoke(runner, "--format", "json", "limit-classical", "rhoi")
    assert result.exit_code == 0
    assert json.loads(result.stdout)["result"]["kind"] == "Func"
