import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from mforge.cli import main, parse_config
from mforge.sieve import load_prime_cache, primes_up_to


def run_cli(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_all_pass(capsys):
    code, out, _ = run_cli(["verify", "--identity", "all", "--limit", "2000"], capsys)
    assert code == 0
    lines = [l for l in out.splitlines() if l]
    assert len(lines) == 6
    assert all(l.startswith("[pass]") for l in lines)


def test_verify_single_identity(capsys):
    code, out, _ = run_cli(["verify", "--identity", "b", "--limit", "500"], capsys)
    assert code == 0
    assert out.count("[pass]") == 1


def test_verify_usage_error_limit_zero():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--identity", "b", "--limit", "0"])
    assert exc.value.code == 2


def test_unknown_flag_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--bogus"])
    assert exc.value.code == 2


def test_summatory_csv_format(tmp_path):
    out = tmp_path / "series.csv"
    code = main(["summatory", "--limit", "1000", "--checkpoints", "geometric:1.25",
                 "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x,M,G,Qsq,pi"
    assert lines[1] == "1,1,1,1,0"
    assert lines[-1].startswith("1000,")


def test_summatory_json_mirror(tmp_path):
    out = tmp_path / "series.ndjson"
    code = main(["summatory", "--limit", "100", "--format", "json", "--out", str(out)])
    assert code == 0
    rows = [json.loads(l) for l in out.read_text().splitlines()]
    assert rows[0] == {"x": 1, "M": 1, "G": 1, "Qsq": 1, "pi": 0}
    assert rows[-1]["x"] == 100 and rows[-1]["M"] == 1


def test_trace_round_trip(tmp_path):
    series = tmp_path / "series.csv"
    trace = tmp_path / "trace.csv"
    assert main(["summatory", "--limit", "100000", "--out", str(series)]) == 0
    assert main(["trace", "--in", str(series), "--out", str(trace)]) == 0
    lines = trace.read_text().splitlines()
    meta = [l for l in lines if l.startswith("#")]
    assert any("0.242528" in l for l in meta)
    assert any("1.826054" in l for l in meta)
    header = [l for l in lines if not l.startswith("#")][0]
    assert header == "x,q,gonek,r1,r2,rG1,rG2,twice_g,qhat_pred,qhat_exact"


def test_stats_excess_report(capsys):
    code, out, _ = run_cli(
        ["stats", "--x", "100000", "--report", "excess", "--m", "0"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x,m,count,empirical,predicted,abs_error"
    cells = lines[1].split(",")
    assert cells[:3] == ["100000", "0", "60794"]
    assert float(cells[4]) == pytest.approx(0.6079271, abs=1e-6)


def test_stats_missing_flag_is_usage_error(capsys):
    code, _, err = run_cli(["stats", "--x", "1000", "--report", "excess"], capsys)
    assert code == 2
    assert "--m" in err


def test_stats_exponent_report(capsys):
    code, out, _ = run_cli(
        ["stats", "--x", "4096", "--report", "exponent", "--p", "2", "--k", "2"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x,p,k,count,empirical,predicted"
    assert lines[1].split(",")[3] == "2048"


def test_stats_cdf_quantiles_monotone_small_sample(capsys):
    # sample smaller than the quantile grid: z column must stay sorted
    code, out, _ = run_cli(["stats", "--x", "150", "--report", "cdf"], capsys)
    assert code == 0
    zs = [float(l.split(",")[1]) for l in out.splitlines()[1:]]
    assert zs == sorted(zs)
    ecdf = [float(l.split(",")[2]) for l in out.splitlines()[1:]]
    assert ecdf[0] < 0.5 and ecdf[-1] == 1.0


def test_simulate_reproducible(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    args = ["simulate", "--seed", "7", "--trials", "5", "--x-max", "10000"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b), "--threads", "4"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == "trial,x,Mbar,lil_stat"


def test_simulate_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--x-max", "4"])
    assert exc.value.code == 2


def test_sieve_cache(tmp_path):
    out = tmp_path / "primes.bin"
    assert main(["sieve", "--limit", "10000", "--out", str(out)]) == 0
    assert np.array_equal(load_prime_cache(out), primes_up_to(10000))


def test_oeis_check_pass_and_fail(tmp_path, capsys, profile_1e4):
    good = tmp_path / "b008683.txt"
    mu = profile_1e4.mobius[:500]
    good.write_text("\n".join(f"{n} {int(mu[n-1])}" for n in range(1, 501)) + "\n")
    code, out, _ = run_cli(["oeis-check", "--sequence", "mu", "--bfile", str(good)], capsys)
    assert code == 0 and "match" in out

    bad = tmp_path / "b.txt"
    bad.write_text("# comment\n1 1\n2 -1\n3 5\n")
    code, out, _ = run_cli(["oeis-check", "--sequence", "mu", "--bfile", str(bad)], capsys)
    assert code == 1
    assert "index 3" in out


def test_oeis_check_g_sequence(tmp_path, capsys):
    path = tmp_path / "b341444.txt"
    vals = [1, -2, -2, 2, -2, 5, -2, -2, 2, 5]
    path.write_text("\n".join(f"{i+1} {v}" for i, v in enumerate(vals)) + "\n")
    code, out, _ = run_cli(["oeis-check", "--sequence", "g", "--bfile", str(path)], capsys)
    assert code == 0


FIXTURES = Path(__file__).parent / "data"


@pytest.mark.parametrize("sequence,fname", [
    ("mu", "b008683.txt"),
    ("lambda", "b008836.txt"),
    ("g", "b341444.txt"),
])
def test_oeis_check_oracle_fixtures(sequence, fname, capsys):
    # fixture files hold oracle-computed values (trial division / divisor-sum
    # recursion), so this crosses two independent routes end to end
    code, out, _ = run_cli(
        ["oeis-check", "--sequence", sequence, "--bfile", str(FIXTURES / fname)],
        capsys)
    assert code == 0, out
    assert "match" in out


def test_oeis_check_limit_caps_range(capsys):
    code, out, _ = run_cli(
        ["oeis-check", "--sequence", "g", "--bfile", str(FIXTURES / "b341444.txt"),
         "--limit", "50"], capsys)
    assert code == 0
    assert "up to 50" in out


def test_config_file_defaults_flags_override(tmp_path):
    cfg = tmp_path / "mforge.cfg"
    cfg.write_text("threads=3\ncheckpoints=geometric:2.0\n")
    config = parse_config(["--config", str(cfg), "summatory", "--limit", "50"])
    assert config.threads == 3
    # subcommand flag present -> flag value wins over config file
    config2 = parse_config(["--config", str(cfg), "--threads", "5",
                            "summatory", "--limit", "50"])
    assert config2.threads == 5


def test_env_threads_default(monkeypatch):
    monkeypatch.setenv("MFORGE_THREADS", "6")
    config = parse_config(["summatory", "--limit", "10"])
    assert config.threads == 6


def test_console_script_help():
    proc = subprocess.run([sys.executable, "-m", "mforge.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    for sub in ("sieve", "verify", "summatory", "stats", "simulate", "trace", "oeis-check"):
        assert sub in proc.stdout


def test_io_error_reported(capsys):
    code, _, err = run_cli(["trace", "--in", "/nonexistent/series.csv"], capsys)
    assert code == 1
