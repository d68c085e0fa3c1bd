import json

import pytest

from qpow.chain import load_chain, qpow_hash
from qpow.cli import main
from qpow.hashing import sha3_256


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_mine_then_verify_round_trip(tmp_path, capsys):
    chain_path = str(tmp_path / "chain.json")
    code, out, _ = run(capsys, "mine", "--chain", chain_path, "--blocks", "3",
                       "--qubits", "2", "--seed", "1")
    assert code == 0
    assert "created genesis block" in out
    assert out.count("attempts") == 3
    chain = load_chain(chain_path)
    assert len(chain) == 4

    code, out, _ = run(capsys, "verify", "--chain", chain_path)
    assert code == 0
    assert "3/3 mined blocks pass" in out


def test_mine_extends_existing_chain(tmp_path, capsys):
    chain_path = str(tmp_path / "chain.json")
    assert run(capsys, "mine", "--chain", chain_path, "--blocks", "1", "--qubits", "2")[0] == 0
    assert run(capsys, "mine", "--chain", chain_path, "--blocks", "2", "--qubits", "2")[0] == 0
    assert [b.index for b in load_chain(chain_path)] == [0, 1, 2, 3]


def test_mine_zero_blocks_writes_genesis_only(tmp_path, capsys):
    chain_path = str(tmp_path / "genesis.json")
    code, _, _ = run(capsys, "mine", "--chain", chain_path, "--blocks", "0", "--qubits", "2")
    assert code == 0
    chain = load_chain(chain_path)
    assert len(chain) == 1
    assert chain[0].payload == "genesis"
    assert chain[0].nonce == 0


def test_mine_deterministic_under_seed(tmp_path, capsys):
    paths = [str(tmp_path / f"chain{i}.json") for i in (0, 1)]
    for path in paths:
        assert run(capsys, "mine", "--chain", path, "--blocks", "2",
                   "--qubits", "2", "--seed", "7")[0] == 0
    chains = [load_chain(p) for p in paths]
    for a, b in zip(*chains):
        assert (a.nonce, a.pow_hash, a.payload) == (b.nonce, b.pow_hash, b.payload)


def test_mine_parallel_jobs_match_sequential(tmp_path, capsys):
    seq_path = str(tmp_path / "seq.json")
    par_path = str(tmp_path / "par.json")
    assert run(capsys, "mine", "--chain", seq_path, "--blocks", "1",
               "--qubits", "2", "--seed", "5")[0] == 0
    assert run(capsys, "mine", "--chain", par_path, "--blocks", "1",
               "--qubits", "2", "--seed", "5", "--jobs", "2")[0] == 0
    assert load_chain(seq_path)[1].pow_hash == load_chain(par_path)[1].pow_hash


def test_mining_failure_exit_code(tmp_path, capsys):
    chain_path = str(tmp_path / "hard.json")
    code, _, err = run(capsys, "mine", "--chain", chain_path, "--blocks", "1",
                       "--qubits", "2", "--difficulty", "64", "--max-attempts", "8")
    assert code == 1
    assert "mining failed" in err


def test_verify_detects_tampering(tmp_path, capsys):
    chain_path = str(tmp_path / "chain.json")
    run(capsys, "mine", "--chain", chain_path, "--blocks", "2", "--qubits", "2")
    data = json.loads(open(chain_path).read())
    data[1]["payload"] = "rewritten history"
    open(chain_path, "w").write(json.dumps(data))

    code, _, err = run(capsys, "verify", "--chain", chain_path)
    assert code == 1
    assert "block 1" in err
    assert "pow-hash" in err


def test_verify_missing_file_is_io_error(tmp_path, capsys):
    code, _, err = run(capsys, "verify", "--chain", str(tmp_path / "absent.json"))
    assert code == 2
    assert "error" in err


def test_verify_malformed_json_is_io_error(tmp_path, capsys):
    path = tmp_path / "garbage.json"
    path.write_text("[{]")
    code, _, err = run(capsys, "verify", "--chain", str(path))
    assert code == 2


def test_noisy_mine_then_verify_reports_fraction(tmp_path, capsys):
    chain_path = str(tmp_path / "noisy.json")
    code, _, _ = run(capsys, "mine", "--chain", chain_path, "--blocks", "8",
                     "--backend", "noisy", "--noise-preset", "transpiled-quito",
                     "--qubits", "4", "--seed", "3")
    assert code == 0
    code, out, _ = run(capsys, "verify", "--chain", chain_path)
    assert code in (0, 1)
    assert "mined blocks pass" in out


def test_hash_trace_is_deterministic_and_consistent(capsys):
    code1, out1, _ = run(capsys, "hash", "hello world", "--qubits", "4")
    code2, out2, _ = run(capsys, "hash", "hello world", "--qubits", "4")
    assert code1 == code2 == 0
    assert out1 == out2

    lines = dict(line.split(": ", 1) for line in out1.strip().splitlines())
    assert lines["h1"] == sha3_256(b"hello world").hex()
    assert bytes.fromhex(lines["h2"]) == qpow_hash(b"hello world", 4)
    assert len(lines["angles (pi/8 units)"].split()) == 64
    assert set(lines["outcome"].split()[0]) <= {"0", "1"}


def test_hash_dump_circuit(capsys):
    code, out, _ = run(capsys, "hash", "dump me", "--dump-circuit")
    assert code == 0
    gate_lines = [l for l in out.splitlines() if l.split(" ", 1)[0] in ("rx", "rz", "crx")]
    assert len(gate_lines) == 64


def test_hash_histogram_output(tmp_path, capsys):
    out_path = tmp_path / "hist.csv"
    code, out, _ = run(capsys, "hash", "histogram", "--shots", "5000",
                       "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text().strip().splitlines()
    assert lines[0] == "bitstring,count"
    counts = [int(l.split(",")[1]) for l in lines[1:]]
    assert sum(counts) == 5000


def test_bench_smoke_csv(tmp_path, capsys):
    out_path = tmp_path / "bench.csv"
    code, _, err = run(capsys, "bench", "--min-qubits", "2", "--max-qubits", "4",
                       "--reps", "1", "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text().strip().splitlines()
    assert lines[0] == "n,wall_time_s,reps"
    assert len(lines) == 4
    assert "fitted log10 slope" in err


def test_bench_rejects_bad_range(capsys):
    code, _, err = run(capsys, "bench", "--min-qubits", "5", "--max-qubits", "2")
    assert code == 2


def test_bench_rejects_oversized_n(capsys):
    code, _, err = run(capsys, "bench", "--min-qubits", "60", "--max-qubits", "60")
    assert code == 2
    assert "memory" in err


def test_advantage_csv_crossover_row(capsys):
    code, out, err = run(capsys, "advantage", "--min-qubits", "2", "--max-qubits", "25")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,classical_time_model,quantum_time_model,speed_ratio,accuracy,advantage"
    row20 = next(l for l in lines[1:] if l.startswith("20,"))
    assert float(row20.split(",")[3]) == pytest.approx(1.0, abs=0.01)
    assert "speed ratio reaches 1 at n = 20" in err
    assert "advantage stays below 1" in err
