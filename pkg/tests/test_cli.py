"""CLI integration: exit codes, output contracts, determinism, figure files."""

import json

import pytest

from chainmech import powchain
from chainmech.cli import main
from chainmech.processes import tick_tock
from chainmech.report import build_report, report_to_json
from chainmech.symbolic import (
    format_stream,
    generate,
    machine_from_json,
    machine_to_json,
)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def tick_tock_file(tmp_path):
    path = tmp_path / "ticktock.txt"
    path.write_text(format_stream(generate(tick_tock(), 2000, seed=3)))
    return str(path)


@pytest.fixture
def zeros_file(tmp_path):
    path = tmp_path / "zeros.txt"
    path.write_text("alphabet: 01\n" + "0" * 2000 + "\n")
    return str(path)


class TestInferCommand:
    def test_tick_tock(self, capsys, tick_tock_file):
        code, out, _ = run(capsys, "infer", tick_tock_file)
        assert code == 0
        assert out.startswith("states: 2, C_mu: 1.000000\n")
        machine = machine_from_json(out.split("\n", 1)[1])
        assert machine.n_states == 2

    def test_all_zeros(self, capsys, zeros_file):
        code, out, _ = run(capsys, "infer", zeros_file)
        assert code == 0
        assert out.startswith("states: 1, C_mu: 0.000000\n")

    def test_malformed_header_exits_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("alfabet: 01\n0101\n")
        code, _, err = run(capsys, "infer", str(bad))
        assert code == 2
        assert "alphabet" in err

    def test_missing_file_exits_2(self, capsys, tmp_path):
        code, _, _ = run(capsys, "infer", str(tmp_path / "nope.txt"))
        assert code == 2

    def test_insufficient_data_exits_3(self, capsys, tmp_path):
        short = tmp_path / "short.txt"
        short.write_text("alphabet: 01\n0101\n")
        code, _, err = run(capsys, "infer", str(short))
        assert code == 3

    def test_json_format_round_trips(self, capsys, tick_tock_file):
        code, out, _ = run(capsys, "infer", tick_tock_file, "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["states"] == 2
        assert doc["c_mu"] == pytest.approx(1.0, abs=1e-12)
        machine = machine_from_json(json.dumps(doc["machine"]))
        assert json.loads(machine_to_json(machine)) == doc["machine"]


class TestReportCommand:
    def test_default_passes(self, capsys):
        code, out, _ = run(capsys, "report")
        assert code == 0
        assert "FAIL" not in out
        assert "target at difficulty 595921917085.42" in out

    def test_zero_tolerance_self_test(self, capsys):
        code, out, _ = run(capsys, "report", "--max-tol", "0")
        assert code == 1
        assert "FAIL" in out

    def test_json_matches_library_values(self, capsys):
        code, out, _ = run(capsys, "report", "--format", "json")
        assert code == 0
        assert json.loads(out) == json.loads(report_to_json(build_report()))

    def test_csv_and_figure_written(self, capsys, tmp_path):
        out_csv = tmp_path / "report.csv"
        code, _, _ = run(capsys, "report", "--format", "csv", "--out", str(out_csv))
        assert code == 0
        lines = out_csv.read_text().strip().split("\n")
        assert lines[0].startswith("label,reference,computed")
        assert len(lines) == len(build_report()) + 1
        figure = tmp_path / "report.png"
        assert figure.exists() and figure.stat().st_size > 1000

    def test_text_out_also_renders_figure(self, capsys, tmp_path):
        out_txt = tmp_path / "report.txt"
        code, _, _ = run(capsys, "report", "--out", str(out_txt))
        assert code == 0
        assert (tmp_path / "report.png").exists()


class TestMineCommand:
    def test_deterministic(self, capsys):
        code1, out1, _ = run(capsys, "mine", "--zeros", "1", "--seed", "7", "--mode", "sequential")
        code2, out2, _ = run(capsys, "mine", "--zeros", "1", "--seed", "7", "--mode", "sequential")
        assert code1 == code2 == 0
        assert out1 == out2
        assert "nonce:" in out1 and "attempts:" in out1

    def test_random_mode_seed_changes_result(self, capsys):
        _, out1, _ = run(capsys, "mine", "--zeros", "1", "--seed", "1", "--mode", "random")
        _, out2, _ = run(capsys, "mine", "--zeros", "1", "--seed", "2", "--mode", "random")
        assert out1 != out2

    def test_mined_result_validates(self, capsys):
        code, out, _ = run(capsys, "mine", "--zeros", "2", "--payload", "hello")
        assert code == 0
        fields = dict(
            line.split(": ", 1) for line in out.strip().split("\n") if ": " in line
        )
        target = powchain.target_for_zeros(2)
        root = powchain.merkle_root([b"hello"])
        header = powchain.BlockHeader(powchain.Hash256(0), root, int(fields["nonce"]))
        block = powchain.Block(header, (b"hello",), 1)
        assert powchain.validate_block(block, target)
        assert powchain.header_hash(header).hex == fields["hash"]

    def test_exhaustion_reported(self, capsys):
        code, out, _ = run(capsys, "mine", "--zeros", "18", "--max-attempts", "3")
        assert code == 0
        assert "exhausted after 3 attempts" in out

    def test_unknown_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["mine", "--bogus"])
        assert exc.value.code == 2


class TestChainCommand:
    def test_chain_json_round_trips(self, capsys):
        code, out, _ = run(capsys, "chain", "--blocks", "3", "--zeros", "1", "--seed", "5")
        assert code == 0
        chain = powchain.chain_from_json(out)
        assert chain.height == 3
        assert powchain.chain_to_json(chain) == out.rstrip("\n")

    def test_deterministic(self, capsys):
        _, out1, _ = run(capsys, "chain", "--blocks", "2", "--seed", "9")
        _, out2, _ = run(capsys, "chain", "--blocks", "2", "--seed", "9")
        assert out1 == out2


class TestChaosCommand:
    def test_lyapunov_fully_chaotic(self, capsys):
        code, out, _ = run(capsys, "chaos", "--map", "logistic", "--r", "4.0", "--lyapunov")
        assert code == 0
        value = float(out.split("\n")[0].split(": ")[1])
        assert value == pytest.approx(0.693, rel=0.02)
        assert "regime: chaotic" in out

    def test_orbit_output(self, capsys):
        code, out, _ = run(
            capsys, "chaos", "--r", "2.5", "--keep", "4", "--burn-in", "1000"
        )
        assert code == 0
        values = [float(v) for v in out.split()]
        assert len(values) == 4
        assert all(abs(v - 0.6) < 1e-6 for v in values)

    def test_deterministic(self, capsys):
        args = ["chaos", "--r", "3.9", "--keep", "6"]
        _, out1, _ = run(capsys, *args)
        _, out2, _ = run(capsys, *args)
        assert out1 == out2

    def test_scan_csv_and_figure(self, capsys, tmp_path):
        out_csv = tmp_path / "scan.csv"
        code, _, _ = run(
            capsys,
            "chaos", "--scan", "--r-min", "2.8", "--r-max", "3.2", "--steps", "5",
            "--keep", "8", "--iters", "10000", "--out", str(out_csv),
        )
        assert code == 0
        lines = out_csv.read_text().strip().split("\n")
        assert lines[0].startswith("r,lyapunov,regime,sample_0")
        assert len(lines) == 6
        figure = tmp_path / "scan.png"
        assert figure.exists() and figure.stat().st_size > 1000


class TestCollisionCommand:
    def test_reference_block_count(self, capsys):
        code, out, _ = run(capsys, "collision", "--blocks", "431616")
        assert code == 0
        value = float(out.split(": ")[1])
        assert value == pytest.approx(8.0e-67, rel=1e-2)

    def test_horizon(self, capsys):
        code, out, _ = run(capsys, "collision", "--horizon", "--interval", "10")
        assert code == 0
        lines = out.strip().split("\n")
        blocks = float(lines[0].split(": ")[1])
        years = float(lines[1].split(": ")[1])
        assert blocks == pytest.approx(3.4e38, rel=2e-2)
        assert years == pytest.approx(6.5e33, rel=2e-2)

    def test_no_mode_is_usage_error(self, capsys):
        code, _, err = run(capsys, "collision")
        assert code == 2

    def test_full_precision_flag(self, capsys):
        _, short, _ = run(capsys, "collision", "--blocks", "2")
        _, full, _ = run(capsys, "collision", "--blocks", "2", "--full-precision")
        assert len(full) > len(short)
        assert float(full.split(": ")[1]) == 4 / 2.0**257
