import csv
import hashlib
import io
import json
import subprocess
import sys

import pytest

from addcomp.archive import dumps, load_pair, loads, save_pair
from addcomp.cli import DEFICIENCY_COLUMNS, main
from addcomp.construction import GrowthConfig, construct
from addcomp.errors import FormatError, IntegrityError, InvariantError


def _redigest(text: str) -> str:
    body = text[: text.rindex("digest: sha256:")]
    return body + "digest: sha256:" + hashlib.sha256(body.encode()).hexdigest() + "\n"


def test_round_trip(tmp_path, pairs):
    for p in list(pairs.values()) + [construct(GrowthConfig(2, policy="lemma-safe"))]:
        f = tmp_path / "p.txt"
        save_pair(p, f)
        q = load_pair(f)
        assert q == p and q.retries == p.retries
        save_pair(q, tmp_path / "q.txt")
        assert f.read_bytes() == (tmp_path / "q.txt").read_bytes()


def test_big_ints_are_decimal_strings():
    text = dumps(construct(GrowthConfig(2, policy="lemma-safe")))
    body = json.loads(text[: text.rindex("digest:")])
    assert len(body["u"][1]) > 70 and body["u"][1].isdigit()
    assert "e+" not in text


def test_truncated_rejected(pairs):
    text = dumps(pairs[3])
    for cut in (10, len(text) // 2, len(text) - 5):
        with pytest.raises(FormatError):
            loads(text[:cut])


def test_mutations_rejected(pairs):
    text = dumps(pairs[3])
    altered = text.replace('"25"', '"24"', 1)
    assert altered != text
    with pytest.raises(IntegrityError):
        loads(altered)
    with pytest.raises(InvariantError):
        loads(_redigest(altered))
    with pytest.raises(FormatError):
        loads(_redigest(text.replace('"format_version": 1', '"format_version": 9')))
    with pytest.raises(FormatError):
        loads(_redigest(text.replace('"25"', '"2.5e1"', 1)))


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_construct_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for f in (a, b):
        code, out, _ = run(["construct", "--blocks", "3", "--policy", "greedy-min", "--seed", "0", "--out", str(f)], capsys)
        assert code == 0 and "primes: [2, 11, 29]" in out
    assert a.read_bytes() == b.read_bytes()


def test_cli_verify(tmp_path, capsys, pairs):
    f = tmp_path / "p.txt"
    save_pair(pairs[4], f)
    code, out, _ = run(["verify", "--pair", str(f), "--coverage", "exhaustive"], capsys)
    assert code == 0 and "overall: PASS" in out
    code, out, _ = run(["verify", "--pair", str(f), "--coverage", "sampled:200", "--seed", "4"], capsys)
    assert code == 0
    f.write_text(f.read_text().replace('"25"', '"24"', 1))
    assert run(["verify", "--pair", str(f)], capsys)[0] == 1
    f.write_text(_redigest(f.read_text()))
    assert run(["verify", "--pair", str(f)], capsys)[0] == 1


def test_cli_analyze_and_export(tmp_path, capsys, pairs):
    f = tmp_path / "p.txt"
    save_pair(pairs[4], f)
    code, out, _ = run(["analyze", "--pair", str(f), "--checkpoints", "87,402"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["x"] for r in rows] == ["87", "402"]
    assert rows[0]["deficiency"] == "397" and rows[0]["identity_ok"] == "true"
    code, out, _ = run(["analyze", "--pair", str(f), "--auto-checkpoints"], capsys)
    assert code == 0 and len(out.splitlines()) >= 21

    dest = tmp_path / "d.csv"
    assert run(["export", "--pair", str(f), "--what", "deficiency", "--format", "csv", "--out", str(dest)], capsys)[0] == 0
    with open(dest) as fh:
        reader = csv.reader(fh)
        assert next(reader) == DEFICIENCY_COLUMNS
        assert len(list(reader)) >= 20
    code, out, _ = run(["export", "--pair", str(f), "--what", "dichotomy", "--format", "json", "--checkpoints", "402"], capsys)
    from fractions import Fraction
    from addcomp.analytics import count_B
    rb = Fraction(count_B(pairs[4], 804), count_B(pairs[4], 402))
    assert json.loads(out) == [{"x": "402", "ratio_a_num": "67", "ratio_a_den": "29",
                                "ratio_b_num": str(rb.numerator), "ratio_b_den": str(rb.denominator)}]
    code, out, _ = run(["export", "--pair", str(f), "--what", "gaps", "--format", "csv", "--checkpoints", "500"], capsys)
    assert out.split() == ["n", "1", "2", "3", "4"]


def test_cli_felso_and_fuzz(tmp_path, capsys, pairs):
    f = tmp_path / "p.txt"
    save_pair(pairs[4], f)
    code, out, _ = run(["felso", "--pair", str(f), "--k", "2", "--omega", "root:2"], capsys)
    assert code == 0 and "implied_c=397/42" in out and "within_omega=false" in out
    code, out, _ = run(["fuzz", "--trials", "200", "--size", "10", "--values", "30", "--seed", "1"], capsys)
    assert code == 0 and "overall: PASS" in out


def test_cli_exit_codes(tmp_path, capsys, pairs, monkeypatch):
    with pytest.raises(SystemExit) as exc:
        main(["construct"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--pair", "x", "--coverage", "sometimes"])
    assert exc.value.code == 2
    assert run(["construct", "--blocks", "1"], capsys)[0] == 2
    f = tmp_path / "p.txt"
    save_pair(pairs[4], f)
    assert run(["--limit", "100", "analyze", "--pair", str(f), "--checkpoints", "402"], capsys)[0] == 1
    monkeypatch.setenv("ADDCOMP_LIMIT", "100")
    assert run(["analyze", "--pair", str(f), "--checkpoints", "402"], capsys)[0] == 1
    assert run(["--limit", "1000", "analyze", "--pair", str(f), "--checkpoints", "402"], capsys)[0] == 0
    assert run(["verify", "--pair", str(tmp_path / "missing.txt")], capsys)[0] == 2


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "addcomp", "construct", "--blocks", "2"],
                         capture_output=True, text=True, check=True)
    assert out.stdout.rstrip().splitlines()[-1].startswith("digest: sha256:")
    assert loads(out.stdout) == construct(GrowthConfig(2))
