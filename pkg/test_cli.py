import json

import numpy as np
import pytest

from fermiswap.core.config_loader import ConfigLoader, RunConfig
from fermiswap.core.runner import SynthesisRunner
from fermiswap.main import parse_args, run
from fermiswap.models.circuit import Circuit
from fermiswap.modules.hamiltonian import dump_hamiltonian, random_hamiltonian
from fermiswap.modules.slaterprep import random_slater, random_unitary
from fermiswap.utils.file_utils import dump_json, load_json


def _error_line(captured_err):
    lines = [line for line in captured_err.splitlines() if line.startswith('{"error"')]
    assert lines, captured_err
    return json.loads(lines[-1])


def test_parse_defaults():
    config = parse_args(["synth-slater", "--in", "u.json", "--out", "c.json"])
    assert config.command == "synth-slater"
    assert str(config.input_path) == "u.json"
    assert str(config.output_path) == "c.json"
    assert config.order == 1
    assert config.tolerance == 1e-10
    assert config.threads == 1


def test_parse_tolerance_override():
    config = parse_args(["verify", "--tol", "1e-9", "--in", "c.json"])
    assert config.tolerance == 1e-9


def test_parse_rejects_unsupported_order():
    with pytest.raises(SystemExit) as exc:
        parse_args(["synth-trotter", "--order", "3", "--in", "h.json"])
    assert exc.value.code == 2


def test_parse_rejects_unknown_flag():
    with pytest.raises(SystemExit) as exc:
        parse_args(["stats", "--bogus"])
    assert exc.value.code == 2


def test_seed_environment_override(monkeypatch):
    monkeypatch.setenv("FERMISWAP_SEED", "17")
    assert parse_args(["verify", "--seed", "3"]).seed == 17


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(command="verify", tolerance=0.0)
    with pytest.raises(ValueError):
        RunConfig(command="synth-trotter", t=float("inf"))


def test_config_file_defaults(config_dir, tmp_path):
    loaded = ConfigLoader(str(config_dir)).load()
    assert loaded.tolerances.zero_pivot == 1e-14
    assert loaded.limits.max_dense_qubits == 12
    assert ConfigLoader(str(tmp_path)).load().defaults.tol == 1e-10


def test_synth_trotter_and_verify(tmp_path):
    h_path = dump_hamiltonian(random_hamiltonian(4, 0), tmp_path / "h.json")
    out = tmp_path / "c.json"
    config = RunConfig(command="synth-trotter", input_path=h_path, output_path=out, t=0.01, order=1)
    assert run(config) == 0

    circuit = Circuit.from_dict(load_json(out))
    assert circuit.two_qubit_count == 6
    assert circuit.metadata["stats"]["two_qubit_count"] == 6

    report_path = tmp_path / "report.json"
    assert run(RunConfig(command="verify", input_path=out, output_path=report_path)) == 0
    report = load_json(report_path)
    assert report["check"] == "trotter_reference"
    assert report["pass"] is True
    assert report["metric"] <= 1e-10


def test_output_is_byte_identical(tmp_path):
    h_path = dump_hamiltonian(random_hamiltonian(3, 4), tmp_path / "h.json")
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    for out in (first, second):
        assert run(RunConfig(command="synth-trotter", input_path=h_path, output_path=out, order=2)) == 0
    assert first.read_bytes() == second.read_bytes()


def test_circuit_round_trip_is_lossless(tmp_path):
    h_path = dump_hamiltonian(random_hamiltonian(4, 9), tmp_path / "h.json")
    out = tmp_path / "c.json"
    run(RunConfig(command="synth-trotter", input_path=h_path, output_path=out, t=0.123456789))
    circuit = Circuit.from_dict(load_json(out))
    again = dump_json(circuit.to_dict(), tmp_path / "again.json")
    assert again.read_bytes() == out.read_bytes()


def test_tampered_circuit_fails_verification(tmp_path, capsys):
    h_path = dump_hamiltonian(random_hamiltonian(3, 0), tmp_path / "h.json")
    out = tmp_path / "c.json"
    run(RunConfig(command="synth-trotter", input_path=h_path, output_path=out))
    data = load_json(out)
    data["layers"][1][0]["params"][0] += 0.01
    dump_json(data, out)
    capsys.readouterr()
    assert run(RunConfig(command="verify", input_path=out)) == 1
    assert _error_line(capsys.readouterr().err)["error"] == "VerificationError"


def test_schema_violation_exits_two(tmp_path, capsys):
    bad = dump_json({"n_modes": 2, "T": [0.0, 0.0, 0.0, 0.0], "U": [0.0, 0.0]}, tmp_path / "h.json")
    capsys.readouterr()
    assert run(RunConfig(command="synth-trotter", input_path=bad, output_path=tmp_path / "c.json")) == 2
    error = _error_line(capsys.readouterr().err)
    assert error["error"] == "SchemaError"


def test_missing_input_exits_two(tmp_path):
    assert run(RunConfig(command="stats", input_path=tmp_path / "nope.json")) == 2


def test_hubbard_synthesis_and_verify(tmp_path):
    lattice = dump_json({"rows": 2, "cols": 2, "t": 1.0, "U": 4.0}, tmp_path / "hub.json")
    out = tmp_path / "c.json"
    assert run(RunConfig(command="synth-hubbard", input_path=lattice, output_path=out)) == 0
    assert run(RunConfig(command="verify", input_path=out)) == 0


def test_large_hubbard_reports_swap_layers(tmp_path):
    lattice = dump_json({"rows": 4, "cols": 4, "t": 1.0, "U": 4.0}, tmp_path / "hub.json")
    out = tmp_path / "c.json"
    assert run(RunConfig(command="synth-hubbard", input_path=lattice, output_path=out)) == 0
    meta = load_json(out)["metadata"]
    assert meta["layer_bound"] == 12
    assert meta["within_bound"] == (meta["swap_layers"] <= 12)


def test_slater_synthesis_and_verify(tmp_path):
    d = random_slater(5, 2, seed=2)
    q_path = dump_json(d.to_dict(), tmp_path / "q.json")
    out = tmp_path / "c.json"
    assert run(RunConfig(command="synth-slater", input_path=q_path, output_path=out)) == 0
    assert load_json(out)["metadata"]["scope"] == "slater"
    assert run(RunConfig(command="verify", input_path=out, threads=2)) == 0


def test_basis_rotation_synthesis_and_verify(tmp_path):
    u = random_unitary(4, seed=3)
    u_path = dump_json({"n": 4, "re": list(u.real.ravel()), "im": list(u.imag.ravel())}, tmp_path / "u.json")
    out = tmp_path / "c.json"
    assert run(RunConfig(command="synth-slater", input_path=u_path, output_path=out)) == 0
    assert load_json(out)["metadata"]["scope"] == "rotation"
    assert run(RunConfig(command="verify", input_path=out, tolerance=1e-9)) == 0


def test_stats_command(tmp_path):
    h_path = dump_hamiltonian(random_hamiltonian(5, 0), tmp_path / "h.json")
    circuit_path = tmp_path / "c.json"
    run(RunConfig(command="synth-trotter", input_path=h_path, output_path=circuit_path))
    stats_path = tmp_path / "stats.json"
    assert run(RunConfig(command="stats", input_path=circuit_path, output_path=stats_path)) == 0
    stats = load_json(stats_path)
    assert stats["two_qubit_count"] == 10
    assert stats["depth"] == 6


def _write_config(directory, text):
    (directory / "fermiswap.yaml").write_text(text)
    return directory


def test_parse_takes_defaults_from_config_file(tmp_path):
    _write_config(tmp_path, "defaults:\n  tol: 1.0e-9\n  t: 0.05\n  steps: 3\n  seed: 11\n")
    config = parse_args(["synth-trotter", "--in", "h.json", "--config-dir", str(tmp_path)])
    assert config.tolerance == 1e-9
    assert config.t == 0.05
    assert config.steps == 3
    assert config.seed == 11
    override = parse_args(["synth-trotter", "--in", "h.json", "--tol", "1e-8", "--config-dir", str(tmp_path)])
    assert override.tolerance == 1e-8


def test_parse_rejects_invalid_config_file(tmp_path):
    _write_config(tmp_path, "defaults:\n  threads: 0\n")
    with pytest.raises(SystemExit) as exc:
        parse_args(["verify", "--in", "c.json", "--config-dir", str(tmp_path)])
    assert exc.value.code == 2


def test_parse_accepts_fourth_order():
    assert parse_args(["synth-trotter", "--in", "h.json", "--order", "4", "--steps", "2"]).order == 4


def test_configured_limits_reach_verification(tmp_path, capsys):
    h_path = dump_hamiltonian(random_hamiltonian(4, 0), tmp_path / "h.json")
    out = tmp_path / "c.json"
    assert run(RunConfig(command="synth-trotter", input_path=h_path, output_path=out)) == 0
    config_dir = _write_config(tmp_path, "limits:\n  max_dense_qubits: 3\n")
    capsys.readouterr()
    assert run(RunConfig(command="verify", input_path=out, config_dir=config_dir)) == 2
    assert _error_line(capsys.readouterr().err)["error"] == "SizeLimitError"


def test_configured_symmetry_tolerance_reaches_loader(tmp_path, capsys):
    h_path = dump_json({"n_modes": 2, "T": [0.0, 1.0, 1.0 + 1e-9, 0.0], "U": [0.0, 0.0],
                        "V": [0.0, 0.0, 0.0, 0.0]}, tmp_path / "h.json")
    out = tmp_path / "c.json"
    assert run(RunConfig(command="synth-trotter", input_path=h_path, output_path=out)) == 2
    config_dir = _write_config(tmp_path, "tolerances:\n  symmetry: 1.0e-8\n")
    capsys.readouterr()
    assert run(RunConfig(command="synth-trotter", input_path=h_path, output_path=out,
                         config_dir=config_dir)) == 0


def test_verify_runs_dense_and_state_checks(tmp_path):
    h_path = dump_hamiltonian(random_hamiltonian(4, 2), tmp_path / "h.json")
    out = tmp_path / "c.json"
    run(RunConfig(command="synth-trotter", input_path=h_path, output_path=out))
    runner = SynthesisRunner(RunConfig(command="verify", input_path=out, seed=5, threads=2))
    assert runner.run() == 0
    assert runner.stats["checks_run"] == 2
    assert runner.stats["checks_passed"] == 2
    reports = runner.verify_circuit(Circuit.from_dict(load_json(out)))
    assert [r.check for r in reports] == ["trotter_reference", "trotter_reference_state"]


@pytest.mark.parametrize("order, steps", [(1, 3), (2, 2), (4, 1)])
def test_evolution_synthesis_and_verify(tmp_path, order, steps):
    h_path = dump_hamiltonian(random_hamiltonian(4, 7), tmp_path / "h.json")
    out = tmp_path / "c.json"
    config = RunConfig(command="synth-trotter", input_path=h_path, output_path=out, t=0.05,
                       order=order, steps=steps)
    assert run(config) == 0
    meta = load_json(out)["metadata"]
    assert meta["scope"] == "evolution"
    assert meta["steps"] == steps
    report_path = tmp_path / "report.json"
    assert run(RunConfig(command="verify", input_path=out, output_path=report_path)) == 0
    assert load_json(report_path)["check"] == "evolution_reference"


def test_spinless_hubbard_synthesis_and_verify(tmp_path):
    lattice = dump_json({"rows": 2, "cols": 3, "t": 1.0, "U": 2.0, "spinless": True}, tmp_path / "hub.json")
    out = tmp_path / "c.json"
    assert run(RunConfig(command="synth-hubbard", input_path=lattice, output_path=out, t=0.05)) == 0
    meta = load_json(out)["metadata"]
    assert meta["hubbard"]["spinless"] is True
    assert meta["n_modes"] == 6
    assert run(RunConfig(command="verify", input_path=out)) == 0


def test_synthesis_failure_exits_one(tmp_path, capsys, monkeypatch):
    from fermiswap.core import runner as runner_module
    from fermiswap.core.errors import SynthesisError

    def fail(inst, t):
        raise SynthesisError("Hubbard schedule left 1 terms unserviced")

    monkeypatch.setattr(runner_module, "synthesize_hubbard_trotter", fail)
    lattice = dump_json({"rows": 1, "cols": 2, "t": 1.0, "U": 2.0}, tmp_path / "hub.json")
    capsys.readouterr()
    assert run(RunConfig(command="synth-hubbard", input_path=lattice)) == 1
    assert _error_line(capsys.readouterr().err)["error"] == "SynthesisError"
