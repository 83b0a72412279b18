import subprocess
import sys

import pytest

from helpers import L1, N1, PF, s2_series
from holonomy.cli import EXIT_INCONSISTENT, EXIT_NO_RESULT, EXIT_OK, EXIT_PRECONDITION, main
from holonomy.diffop import DiffOp, read_operator, write_operator
from holonomy.exactalg import Poly
from holonomy.lattice.cache import read_series, write_series

w = Poly.x()


@pytest.fixture(autouse=True)
def cache_dir(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv("HOLONOMY_CACHE_DIR", str(d))
    return d


def test_gen_series_writes_cache(cache_dir, capsys):
    assert main(["gen-series", "--order", "16"]) == EXIT_OK
    text = (cache_dir / "chi3_16.txt").read_text()
    body = [ln for ln in text.splitlines() if not ln.startswith("#")]
    assert body == ["9 1", "10 0", "11 36", "12 4", "13 884", "14 196", "15 18532", "16 6084"]
    # second run is a no-op
    assert main(["gen-series", "--order", "16"]) == EXIT_OK
    assert "already holds" in capsys.readouterr().out


def test_gen_series_thread_independence(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert main(["gen-series", "--order", "30", "--out", str(a), "--threads", "1"]) == EXIT_OK
    assert main(["gen-series", "--order", "30", "--out", str(b), "--threads", "8"]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_gen_series_bad_order():
    assert main(["gen-series", "--order", "8"]) == EXIT_PRECONDITION


def test_corrupt_cache_is_rejected(cache_dir):
    assert main(["gen-series", "--order", "12"]) == EXIT_OK
    f = cache_dir / "chi3_12.txt"
    f.write_text(f.read_text().replace("12 4", "12 5"))
    assert main(["gen-series", "--order", "12"]) == EXIT_PRECONDITION


def test_config_file_with_flag_override(tmp_path, cache_dir):
    cfg = tmp_path / "job.cfg"
    cfg.write_text("# job\norder = 40\nthreads = 2\n")
    assert main(["gen-series", "--config", str(cfg), "--order", "14"]) == EXIT_OK
    assert (cache_dir / "chi3_14.txt").exists()
    assert not (cache_dir / "chi3_40.txt").exists()


def test_guess_roundtrip(tmp_path, capsys):
    s = tmp_path / "s2.txt"
    write_series(s, s2_series(30), "s2")
    out = tmp_path / "op.txt"
    assert main(["guess", "--series", str(s), "--out", str(out)]) == EXIT_OK
    assert read_operator(out).same_up_to_content(N1)
    assert "surplus verified" in capsys.readouterr().out


def test_guess_no_result(tmp_path):
    s = tmp_path / "s.txt"
    write_series(s, s2_series(30), "s2")
    assert main(["guess", "--series", str(s), "--degrees", "0,0"]) == EXIT_NO_RESULT


def test_missing_file_is_precondition(tmp_path):
    assert main(["analyze", "--op", str(tmp_path / "nope.txt")]) == EXIT_PRECONDITION
    assert main(["guess"]) == EXIT_PRECONDITION


def test_analyze(tmp_path, capsys):
    op = tmp_path / "pf.txt"
    write_operator(op, PF)
    assert main(["analyze", "--op", str(op)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "-1/6" in out and "3/4" in out and "infinity" in out.lower()


def test_factor(tmp_path, capsys):
    op = tmp_path / "l.txt"
    write_operator(op, (DiffOp.d() * L1).primitive())
    assert main(["factor", "--op", str(op), "--logderiv", "1/(w*(1-4*w))"]) == EXIT_OK
    assert "remainder 0" in capsys.readouterr().out
    assert main(["factor", "--op", str(op), "--logderiv", "1/w"]) == EXIT_NO_RESULT
    assert main(["factor", "--op", str(op)]) == EXIT_PRECONDITION


def test_desingularize(tmp_path, capsys):
    op = tmp_path / "a.txt"
    write_operator(op, DiffOp([0, 0, -1, w]))
    out = tmp_path / "b.txt"
    assert main(["desingularize", "--op", str(op), "--out", str(out)]) == EXIT_OK
    assert read_operator(out).order == 4
    assert "none (constant)" in capsys.readouterr().out


def test_oracle(tmp_path, capsys):
    s = tmp_path / "c.txt"
    assert main(["gen-series", "--order", "49", "--out", str(s)]) == EXIT_OK
    assert main(["oracle", "--w", "0.02", "--w", "0.05", "--series", str(s)]) == EXIT_OK
    short = tmp_path / "short.txt"
    write_series(short, read_series(s)[0].truncate(16))
    assert main(["oracle", "--w", "0.05", "--series", str(short)]) == EXIT_INCONSISTENT
    assert main(["oracle"]) == EXIT_PRECONDITION


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "holonomy", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "gen-series" in r.stdout
