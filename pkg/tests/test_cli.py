import io
import json
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mzinterp.cli import TOL_ENV, parse_complex, parse_rational_tuple, parse_tuple, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def value(text):
    v = json.loads(text)["value"]
    return complex(v["re"], v["im"])


# -- examples ------------------------------------------------------------------


def test_psi_example():
    code, out, _ = call("psi", "--s", "2,1", "--w", "3", "--method", "auto")
    assert code == 0
    data = json.loads(out)
    assert set(data) == {"value", "abs_error", "method", "work", "elapsed_ms"}
    assert abs(value(out) - 5 / 12) < 1e-12
    assert data["elapsed_ms"] is None


def test_g_example():
    code, out, _ = call("g", "--q", "1,1,1", "--w", "5")
    assert code == 0 and value(out) == 10 and json.loads(out)["method"] == "exact"


def test_delannoy_example():
    code, out, _ = call("delannoy", "--c", "2", "--d", "1")
    assert code == 0 and out == "m=2: 2\nm=3: 3\n"


def test_delannoy_csv():
    code, out, _ = call("delannoy", "--c", "1", "--d", "1", "--format", "csv", "--all-layers")
    assert out.splitlines() == ["c,d,m,D", "1,1,0,0", "1,1,1,1", "1,1,2,2"]
    code, out, _ = call("delannoy", "--c", "2", "--d", "2", "--table", "--format", "csv")
    rows = out.splitlines()
    assert rows[0] == "c,d,m,D" and "2,2,4,6" in rows and len(rows) == 1 + 14


def test_stuffle_rendering():
    code, out, _ = call("stuffle", "--flavor", "additive", "--a", "2", "--b", "3")
    assert code == 0 and out == "+1·(5) +1·(2,3) +1·(3,2)\n"
    code, out, _ = call("stuffle", "--flavor", "multiplicative", "--a", "1/2,1/3", "--b", "1/5", "--format", "json")
    terms = json.loads(out)["terms"]
    assert {"tuple": ["1/2", "1/15"], "coeff": 1} in terms and len(terms) == 5


def test_zeta_subcommand():
    code, out, _ = call("zeta", "--s", "2")
    assert abs(value(out) - 1.6449340668482264) < 1e-12
    code, out, _ = call("zeta", "--s", "1", "--N", "3")
    assert abs(value(out) - 11 / 6) < 1e-15


@pytest.mark.parametrize("method", ["explicit", "recursion", "series", "newton", "auto"])
def test_g_methods_agree(method):
    code, out, _ = call("g", "--q", "0.95,0.9", "--w", "2.5-0.5i", "--method", method)
    assert code == 0
    ref = value(call("g", "--q", "0.95,0.9", "--w", "2.5-0.5i", "--method", "explicit")[1])
    assert abs(value(out) - ref) < 1e-9


@pytest.mark.parametrize("method", ["series", "mellin", "shift", "auto"])
def test_psi_methods_agree(method):
    code, out, _ = call("psi", "--s", "2.5,1.5", "--w", "-0.4+1.1i", "--method", method)
    assert code == 0
    ref = value(call("psi", "--s", "2.5,1.5", "--w", "-0.4+1.1i", "--method", "series")[1])
    assert abs(value(out) - ref) < 1e-8


def test_verify_examples():
    code, out, _ = call("verify", "--suite", "delannoy", "--samples", "1")
    assert code == 0 and "suite delannoy (seed 0): pass" in out
    code, out, _ = call("verify", "--suite", "delannoy", "--samples", "1", "--format", "json")
    assert all(c["max_deviation"] == 0 for c in json.loads(out)["checks"])


def test_verify_harmonic_and_mellin():
    code, out, _ = call("verify", "--suite", "harmonic", "--seed", "42", "--samples", "100", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["passed"]
    assert all(c["max_deviation"] <= 1e-8 for c in data["checks"])
    code, out, _ = call("verify", "--suite", "mellin", "--seed", "7", "--samples", "20", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["passed"] and data["checks"][0]["max_deviation"] <= 1e-6


def test_verify_failure_sets_exit_code(monkeypatch):
    import mzinterp.verify as v

    monkeypatch.setitem(v.SUITES, "delannoy", lambda rng, n: [v.Check("always off", 1, 1.0, 0.0)])
    assert call("verify", "--suite", "delannoy")[0] == 1


# -- exit codes --------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        (),
        ("frobnicate",),
        ("psi", "--s", "2"),
        ("psi", "--s", "2", "--w", "1", "--bogus"),
        ("psi", "--s", "2", "--w", "1+"),
        ("g", "--q", "a,b", "--w", "1"),
        ("delannoy", "--c", "-1", "--d", "2"),
        ("verify", "--samples", "0"),
        ("zeta", "--s", "2", "--N", "-3"),
        ("psi", "--s", "2", "--w", "1", "--tol", "0"),
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert call(*argv)[0] == 2


@pytest.mark.parametrize(
    "argv,kind",
    [
        (("psi", "--s", "2", "--w", "-2"), "DomainError"),
        (("psi", "--s", "0.5", "--w", "1", "--method", "series"), "RegionError"),
        (("g", "--q", "0.5,2", "--w", "1.5", "--method", "explicit"), "DomainError"),
        (("zeta", "--s", "1"), "RegionError"),
    ],
)
def test_evaluation_errors_exit_1(argv, kind):
    code, out, err = call(*argv)
    assert code == 1 and out == ""
    payload = json.loads(err)["error"]
    assert payload["type"] == kind and payload["message"]


def test_convergence_error_carries_best_estimate():
    code, _, err = call("g", "--q", "0.2,0.9", "--w", "30.5", "--method", "newton", "--tol", "1e-300")
    payload = json.loads(err)["error"]
    assert code == 1 and payload["type"] == "ConvergenceError" and "best" in payload


# -- determinism and round-trip ----------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ("psi", "--s", "0.7+0.2i,1.3", "--w", "0.4-0.2i"),
        ("g", "--q", "0.3,1.7,0.9", "--w", "-2.2+1i", "--format", "csv"),
        ("verify", "--suite", "newton", "--seed", "3", "--samples", "5"),
        ("stuffle", "--flavor", "additive", "--a", "1,2,1/3", "--b", "3/2,1"),
        ("delannoy", "--c", "4", "--d", "3", "--table", "--format", "json"),
    ],
)
def test_identical_argv_gives_identical_bytes(argv):
    assert call(*argv) == call(*argv)


@pytest.mark.parametrize("argv", [("psi", "--s", "2.2,1.7", "--w", "0.3+0.9i"), ("g", "--q", "0.31,0.77", "--w", "1/3-2i")])
def test_json_round_trip(argv):
    out = call(*argv)[1]
    v = json.loads(out)["value"]
    again = json.loads(json.dumps(json.loads(out)))["value"]
    assert again == v
    for part in (v["re"], v["im"]):
        assert float(repr(part)) == part and float(f"{part:.17g}") == part


def test_plain_output_round_trips():
    out = call("g", "--q", "0.31,0.77", "--w", "1/3-2i", "--format", "plain")[1]
    lit = out.split()[0]
    ref = value(call("g", "--q", "0.31,0.77", "--w", "1/3-2i")[1])
    assert parse_complex(lit) == ref


def test_timing_flag():
    data = json.loads(call("g", "--q", "0.5", "--w", "2", "--timing")[1])
    assert isinstance(data["elapsed_ms"], float) and data["elapsed_ms"] >= 0


def test_tolerance_environment_variable(monkeypatch):
    monkeypatch.setenv(TOL_ENV, "1e-4")
    loose = json.loads(call("psi", "--s", "0.5", "--w", "0.7")[1])
    monkeypatch.setenv(TOL_ENV, "1e-10")
    tight = json.loads(call("psi", "--s", "0.5", "--w", "0.7")[1])
    assert loose["work"] < tight["work"]
    monkeypatch.setenv(TOL_ENV, "-3")
    assert call("psi", "--s", "0.5", "--w", "0.7")[0] == 2
    monkeypatch.setenv(TOL_ENV, "loose")
    assert call("psi", "--s", "0.5", "--w", "0.7")[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "mzinterp", "g", "--q", "1,1", "--w", "4"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and value(proc.stdout) == 6
    proc = subprocess.run([sys.executable, "-m", "mzinterp", "psi"], capture_output=True, text=True, check=False)
    assert proc.returncode == 2


# -- literal parsing -------------------------------------------------------------------


def test_complex_literals():
    assert parse_complex("1.7+0.3i") == 1.7 + 0.3j
    assert parse_complex("-0.4+1.1i") == -0.4 + 1.1j
    assert parse_complex("2") == 2
    assert parse_complex("-3e-2-4j") == -0.03 - 4j
    assert parse_complex("i") == 1j and parse_complex("-2.5i") == -2.5j
    assert parse_complex("1/3-2/7i") == complex(1 / 3, -2 / 7)
    assert parse_tuple("2,1.5-1i") == (2, 1.5 - 1j) and parse_tuple("") == ()
    assert parse_rational_tuple("1/2, 3") == (0.5, 3)
    for bad in ("", "1+", "1++2i", "abc", "1.2.3", "i1"):
        with pytest.raises(Exception):
            parse_complex(bad)


@given(st.complex_numbers(allow_nan=False, allow_infinity=False, max_magnitude=1e12))
def test_literal_round_trip(z):
    text = f"{z.real!r}{'+' if z.imag >= 0 else '-'}{abs(z.imag)!r}i"
    assert parse_complex(text) == z
