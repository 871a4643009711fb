import json

import pytest
from typer.testing import CliRunner

from primon.cli import app
from primon.specfun import _euler_gamma_cached, _zeta_cached


@pytest.fixture
def runner():
    try:
        return CliRunner(mix_stderr=False)
    except TypeError:
        # newer click keeps stderr apart already
        return CliRunner()


def rows(result):
    return result.stdout.strip().split("\r\n")


def test_version(runner):
    result = runner.invoke(app, ["--version"])
    assert result.exit_code == 0
    assert "primon" in result.stdout


def test_constants(runner):
    result = runner.invoke(app, ["--digits", "6", "constants", "--b", "2"])
    assert result.exit_code == 0
    assert "exp_gamma_over_zeta,1.08276" in result.stdout
    assert "zeta,1.64493" in result.stdout


def test_arith_commands(runner):
    assert "n=36,12" in runner.invoke(app, ["arith", "phi", "--n", "36"]).stdout
    assert "n=30,-1" in runner.invoke(app, ["arith", "mobius", "--n", "30"]).stdout
    assert "n=16,4" in runner.invoke(app, ["arith", "lambda", "--n", "16"]).stdout
    order = runner.invoke(app, ["arith", "order", "--a", "2", "--n", "15", "--orbit"])
    assert '"a=2,n=15",4,1 2 4 8' in order.stdout
    assert "n=360,2^3 3^2 5^1" in runner.invoke(app, ["arith", "factor", "--n", "360"]).stdout


def test_arith_json(runner):
    result = runner.invoke(app, ["--format", "json", "arith", "psi", "--n", "12", "--b", "2"])
    document = json.loads(result.stdout)
    assert document["rows"][0]["input"] == "n=12,b=2"
    assert document["rows"][0]["value"].startswith("24.0")


def test_domain_errors_exit_two(runner):
    result = runner.invoke(app, ["kms", "epsilon", "--beta", "1", "--q", "10"])
    assert result.exit_code == 2
    assert "β must be > 1" in result.stderr
    assert runner.invoke(app, ["arith", "phi", "--n", "0"]).exit_code == 2
    assert runner.invoke(app, ["arith", "order", "--a", "3", "--n", "15"]).exit_code == 2


def test_invalid_config_exits_two(runner):
    assert runner.invoke(app, ["--prec", "32", "constants"]).exit_code == 2
    assert runner.invoke(app, ["constants", "--b", "abc"]).exit_code == 2


def test_epsilon_json_has_provenance(runner):
    result = runner.invoke(
        app, ["--format", "json", "kms", "epsilon", "--beta", "3", "--q", "10,100"]
    )
    assert result.exit_code == 0
    document = json.loads(result.stdout)
    assert [row["n"] for row in document["rows"]] == [10, 100]
    assert document["rows"][0]["epsilon"].startswith("0.160")
    provenance = document["provenance"]
    assert provenance["precision"] == 128
    assert len(provenance["prime_table_checksum"]) == 8


def test_nicolas_scan(runner):
    result = runner.invoke(app, ["scan", "nicolas", "--qmax", "100"])
    assert result.exit_code == 0
    lines = rows(result)
    assert lines[0] == "n,p_n,log_N,ratio,threshold,epsilon,holds"
    assert len(lines) == 100
    assert all(line.endswith(",true") for line in lines[1:])
    assert "holds=true" in result.stderr


def test_failing_scan_exits_one(runner):
    result = runner.invoke(
        app, ["scan", "lower", "--b", "0.75", "--n-min", "100", "--n-max", "300", "--k-hat", "100"]
    )
    assert result.exit_code == 1
    assert ",false" in result.stdout


def test_scan_output_does_not_depend_on_threads(runner):
    outputs = set()
    for threads in ("1", "4", "16"):
        # every run starts cold so the constants are built under the worker pool
        _zeta_cached.cache_clear()
        _euler_gamma_cached.cache_clear()
        result = runner.invoke(
            app, ["--threads", threads, "scan", "conjecture", "--b", "2", "--qmax", "3000"]
        )
        assert result.exit_code == 0
        outputs.add(result.stdout)
    assert len(outputs) == 1


def test_table1(runner):
    result = runner.invoke(app, ["kms", "table1", "--pretty"])
    assert result.exit_code == 0
    lines = rows(result)
    assert lines[0] == "beta,q,epsilon,reference,agrees,mantissa,exponent"
    assert len(lines) == 1 + 12 + 4
    assert any(line.startswith("2.1,10000,") for line in lines)
    assert "suspected typo" in result.stderr


def test_primes_cache_lifecycle(runner, tmp_path):
    cache = tmp_path / "primes.bin"
    first = runner.invoke(app, ["--cache", str(cache), "primes", "--count", "500", "--list", "3"])
    assert first.exit_code == 0
    assert cache.exists()
    assert rows(first)[1].startswith("1,2,")
    second = runner.invoke(app, ["primes", "--count", "200", "--cache", str(cache)])
    assert second.exit_code == 0
    assert "count=500" in second.stderr


def test_cache_from_environment(runner, tmp_path):
    cache = tmp_path / "env.bin"
    result = runner.invoke(app, ["primes", "--count", "50"], env={"PRIMON_CACHE": str(cache)})
    assert result.exit_code == 0
    assert cache.exists()


def test_corrupt_cache_exits_two(runner, tmp_path):
    cache = tmp_path / "bad.bin"
    cache.write_bytes(b"not a prime table")
    result = runner.invoke(app, ["--cache", str(cache), "kms", "epsilon", "--beta", "3", "--q", "10"])
    assert result.exit_code == 2
    assert "truncated" in result.stderr


def test_quantum_verify(runner):
    result = runner.invoke(app, ["--format", "json", "quantum", "verify", "--q", "15", "--a", "2"])
    assert result.exit_code == 0
    (row,) = json.loads(result.stdout)["rows"]
    assert (row["q"], row["a"], row["r"]) == (15, 2, 4)
    assert row["unitary"] and row["multiplicative"]


def test_quantum_flow_and_phase(runner):
    assert runner.invoke(app, ["quantum", "flow", "--n", "64"]).exit_code == 0
    assert runner.invoke(app, ["quantum", "phase", "--num", "1", "--den", "5"]).exit_code == 0
    assert runner.invoke(app, ["quantum", "verify"]).exit_code == 2


def test_specfun_commands(runner):
    zeta = runner.invoke(app, ["--digits", "8", "specfun", "zeta", "--b", "2"])
    assert "b=2,1.6449341" in zeta.stdout
    li = runner.invoke(app, ["specfun", "li", "--x", "1000", "--ei"])
    assert li.exit_code == 0
    assert runner.invoke(app, ["specfun", "bertrand", "--b", "0.75", "--x", "1000"]).exit_code == 0
    assert runner.invoke(app, ["specfun", "cb", "--b", "0.75", "--count", "2000"]).exit_code == 0
    assert runner.invoke(app, ["specfun", "cb", "--b", "0.3", "--count", "100"]).exit_code == 2


def test_diagnostic_scans(runner):
    asymp = runner.invoke(app, ["scan", "asymp", "--b", "0.75", "--x", "100,1000,10000"])
    assert asymp.exit_code == 0
    assert rows(asymp)[0] == "x,value"
    gap = runner.invoke(app, ["scan", "gap", "--b", "0.75", "--x", "100,1000"])
    assert rows(gap)[0] == "x,value,scale"
    kb = runner.invoke(app, ["scan", "kb", "--b", "0.75", "--n", "500,1000", "--decompose"])
    assert kb.exit_code == 0
    assert "euler=" in kb.stderr
    prop1 = runner.invoke(app, ["scan", "prop1", "--b", "2", "--n", "10,100"])
    assert prop1.exit_code == 0
    sandwich = runner.invoke(app, ["scan", "sandwich", "--b", "2", "--n-max", "500"])
    assert sandwich.exit_code == 0
    assert rows(sandwich) == ["n"]


def test_report_written_to_file(runner, tmp_path):
    target = tmp_path / "out" / "nicolas.csv"
    result = runner.invoke(app, ["--out", str(target), "scan", "nicolas", "--qmax", "20"])
    assert result.exit_code == 0
    assert result.stdout == ""
    assert target.read_bytes().startswith(b"n,p_n,log_N,ratio,threshold,epsilon,holds\r\n")


@pytest.mark.parametrize(
    "args",
    [
        ["--prec", "256", "--format", "json", "specfun", "zeta", "--b", "2"],
        ["specfun", "zeta", "--b", "2", "--prec", "256", "--format", "json"],
        ["--prec", "64", "specfun", "zeta", "--format", "json", "--b", "2", "--prec", "256"],
    ],
)
def test_run_options_on_either_side_of_the_command(runner, args):
    result = runner.invoke(app, args)
    assert result.exit_code == 0
    assert json.loads(result.stdout)["provenance"]["precision"] == 256


def test_scan_accepts_format_after_the_command(runner):
    result = runner.invoke(app, ["scan", "nicolas", "--qmax", "100", "--format", "json"])
    assert result.exit_code == 0
    document = json.loads(result.stdout)
    assert len(document["rows"]) == 99
    tol = runner.invoke(app, ["kms", "epsilon", "--beta", "3", "--q", "10", "--tol", "1e-18"])
    assert tol.exit_code == 0
    primes = runner.invoke(app, ["primes", "--count", "100", "--list", "3", "--format", "json"])
    assert primes.exit_code == 0
    assert len(json.loads(primes.stdout)["rows"]) == 3


def test_invalid_trailing_run_option_exits_two(runner):
    assert runner.invoke(app, ["specfun", "zeta", "--b", "2", "--prec", "32"]).exit_code == 2
    assert runner.invoke(app, ["scan", "nicolas", "--qmax", "10", "--format", "xml"]).exit_code == 2


def test_empty_q_list_exits_two(runner):
    result = runner.invoke(app, ["kms", "epsilon", "--beta", "3", "--q", ","])
    assert result.exit_code == 2
    assert "at least one integer" in result.stderr
