import json

import pytest

from qlab import cli, experiments
from qlab.errors import ParameterOutOfRange, UnknownExperiment

ALL = ["grover", "lowerbound", "qpe", "kitaev", "amplitude-estimate", "hhl-poisson", "ode-kappa",
       "heat", "trotter-tfim", "be-verify", "qsp-solve", "hamsim", "ground-state", "qsvt-inverse",
       "szegedy", "fixed-point-aa"]


def test_registry_complete():
    assert sorted(ALL) == experiments.names()


def test_unknown_experiment():
    with pytest.raises(UnknownExperiment):
        experiments.run("nope")


@pytest.mark.parametrize("name,params", [("grover", {"n": "1"}), ("grover", {"zz": "1"}),
                                         ("qpe", {"phi": "abc"}), ("ode-kappa", {"a": "1"}),
                                         ("qsvt-inverse", {"degree": "80"}), ("kitaev", {"phis": "0.12"})])
def test_parameter_out_of_range(name, params):
    with pytest.raises(ParameterOutOfRange):
        experiments.run(name, params)


def test_tuple_parameter_parsing():
    p = experiments.resolve_parameters("trotter-tfim", {"dts": "0.05,0.1"})
    assert p["dts"] == (0.05, 0.1)


def test_grover_k0():
    r = experiments.run("grover", {"n": "4", "k": "0"})
    assert r.metrics["success"] == pytest.approx(1 / 16)


def test_qpe_example():
    r = experiments.run("qpe", {"phi": "0.5625", "t": "4"})
    assert r.metrics["modal"] == 9 and r.metrics["modal_probability"] == pytest.approx(1, abs=1e-12)


def test_ode_example():
    r = experiments.run("ode-kappa", {"a": "-1", "dt": "0.1", "T": "10"})
    assert r.metrics["kappa"] < 20 and r.metrics["bound"] == pytest.approx(60) and r.passed


@pytest.mark.parametrize("name", ["heat", "amplitude-estimate"])
def test_uncriterioned_experiments_pass(name):
    assert experiments.run(name).passed


def test_cli_outputs_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["run", "qpe", "--param", "phi=0.5625", "--param", "t=4", "--out", str(a)]) == 0
    assert cli.main(["run", "qpe", "--param", "phi=0.5625", "--param", "t=4", "--out", str(b)]) == 0
    for f in ("report.json", "distribution.csv", "tail.csv"):
        assert (a / f).read_bytes() == (b / f).read_bytes()
    rep = json.loads((a / "report.json").read_text())
    assert rep["passed"] and "wall_time" not in rep and rep["parameters"]["phi"] == 0.5625
    assert "PASS" in capsys.readouterr().out


def test_cli_exit_codes(capsys):
    assert cli.main(["run", "nope"]) == 2
    assert cli.main(["run", "grover", "--param", "zz=1"]) == 2
    assert cli.main(["run", "grover", "--param", "novalue"]) == 2
    assert cli.main(["list"]) == 0
    assert "szegedy" in capsys.readouterr().out


def test_cli_failure_exit_code():
    # A deliberately coarse degree misses the Hamiltonian-simulation tolerance.
    assert cli.main(["run", "hamsim", "--param", "degree=10"]) == 1


def test_seed_changes_instance():
    a = experiments.run("grover", seed=0).metrics["marked"]
    b = [experiments.run("grover", seed=s).metrics["marked"] for s in range(1, 6)]
    assert any(x != a for x in b)
