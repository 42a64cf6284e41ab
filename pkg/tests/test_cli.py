import json
import subprocess
import sys

import pytest

from boolforge import cli
from boolforge.io import read_table


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct(capsys, tmp_path):
    out = tmp_path / "F.bftt"
    code, o, _ = run(capsys, "construct", "--r", "3", "--m", "3", "--u", "1", "--s", "0", "--l", "0",
                     "--balanced", "-o", str(out))
    assert code == 0
    tt = read_table(out)
    assert tt.n == 12 and tt.weight() == 2048
    man = json.loads((tmp_path / "F.bftt.manifest.json").read_text())
    assert man["command"] == "construct" and man["moduli"] == {"9": "0x211"}
    assert man["parameters"]["balanced"] is True
    out1 = tmp_path / "f.bftt"
    code, _, _ = run(capsys, "construct", "--r", "1", "--m", "3", "--u", "1", "--s", "0", "-o", str(out1))
    assert code == 0 and read_table(out1).weight() == 28


def test_construct_invalid(capsys, tmp_path):
    code, _, err = run(capsys, "construct", "--r", "3", "--m", "3", "--u", "7", "-o", str(tmp_path / "x"))
    assert code == 2 and "coprime" in err
    code, _, _ = run(capsys, "construct", "--r", "3")
    assert code == 2


def test_analyze_all(capsys):
    code, o, _ = run(capsys, "analyze", "--r", "3", "--m", "3", "--u", "1", "--all")
    rep = json.loads(o)
    assert code == 0
    assert rep["weight"] == 2048 and rep["degree"] == 11 and rep["nonlinearity"] == 1982 and rep["ai"] == 6


def test_analyze_zero_table(capsys, tmp_path):
    from boolforge.boolfn import TruthTable
    from boolforge.io import write_table
    p = tmp_path / "z.bftt"
    write_table(p, TruthTable.zeros(6))
    code, o, _ = run(capsys, "analyze", "--table", str(p), "--ai")
    rep = json.loads(o)
    assert code == 0 and rep["weight"] == 0 and rep["degree"] == -1 and rep["ai"] == 0
    p.write_bytes(b"junk")
    assert run(capsys, "analyze", "--table", str(p))[0] == 2


def test_analyze_n16(capsys):
    code, o, _ = run(capsys, "analyze", "--r", "3", "--m", "4", "--u", "14")
    assert code == 0 and json.loads(o)["nonlinearity"] == 32406


def test_conjecture(capsys, tmp_path):
    code, o, _ = run(capsys, "conjecture", "--r", "3", "--m", "5", "--u", "all")
    rep = json.loads(o)
    assert code == 0 and rep["holds"] and len(rep["reports"]) == 30
    code, o, _ = run(capsys, "conjecture", "--r", "3", "--m", "3", "--u", "1", "--emit-counts")
    lines = o.strip().splitlines()
    assert lines[0] == "r,m,u,t,count,bound" and len(lines) == 8
    assert [int(x.split(",")[4]) for x in lines[1:]] == [185, 223, 223, 244, 223, 244, 244]
    assert run(capsys, "conjecture", "--r", "2", "--m", "3")[0] == 2
    assert run(capsys, "conjecture", "--r", "3", "--m", "3", "--u", "x")[0] == 2
    # m = 2 is outside the verified range and fails the bound
    assert run(capsys, "conjecture", "--r", "3", "--m", "2", "--u", "1")[0] == 1


def test_tables(capsys):
    code, o, _ = run(capsys, "tables", "--which", "I")
    rows = [line.split(",") for line in o.strip().splitlines()]
    assert code == 0 and rows[0][0] == "n" and len(rows[0]) == 12
    assert rows[1][1:] == "20 102 457 1930 7936 32211 129863 521671 2091509 8376484 33528475".split()
    code, o, _ = run(capsys, "tables", "--which", "II")
    lines = o.strip().splitlines()
    assert lines[0] == "n,u,nl_F,nl_CF,nl_prior_cited,bent_bound"
    got = [tuple(int(v) for v in line.split(",")[:4]) for line in lines[1:]]
    assert got == [(12, 1, 1982, 1970), (12, 6, 1964, 1970), (16, 1, 32408, 32530), (16, 14, 32406, 32530)]
    assert run(capsys, "tables", "--which", "IV")[0] == 2


def test_faa(capsys, tmp_path):
    out = tmp_path / "faa.json"
    code, _, _ = run(capsys, "faa", "--r", "3", "--m", "3", "--u", "all", "-o", str(out))
    rep = json.loads(out.read_text())
    assert code == 0 and rep["complete"] and rep["no_pair_found"] and rep["max_ed_sum"] == 10
    assert len(rep["results"]) == 6
    assert (tmp_path / "faa.json.manifest.json").exists()


def test_faa_budget_exhausted(capsys):
    code, o, _ = run(capsys, "faa", "--r", "3", "--m", "3", "--u", "all", "--budget", "0")
    rep = json.loads(o)
    assert code == 3 and not rep["complete"] and rep["no_pair_found"] is None


def test_cache_hit_and_verify(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("BOOLFORGE_CACHE_DIR", str(tmp_path / "cc"))
    a = run(capsys, "analyze", "--r", "3", "--m", "3", "--u", "3")
    b = run(capsys, "analyze", "--r", "3", "--m", "3", "--u", "3")
    c = run(capsys, "analyze", "--r", "3", "--m", "3", "--u", "3", "--verify-cache")
    assert a[1] == b[1] == c[1] and list((tmp_path / "cc").rglob("*.json"))
    # corrupt the entry: verify mode must notice
    entry = next((tmp_path / "cc").rglob("*.json"))
    entry.write_text(json.dumps({"weight": 1}))
    assert run(capsys, "analyze", "--r", "3", "--m", "3", "--u", "3", "--verify-cache")[0] == 1


def test_settings_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "cfg"
    cfg.write_text("# comment\njobs = 3\ncache_dir = /from/config\n")
    args = cli.build_parser().parse_args(["tables", "--which", "I", "--config", str(cfg)])
    env = {}
    s = cli.resolve_settings(args, env)
    assert s["jobs"] == "3" and s["cache_dir"] == "/from/config"
    env = {"BOOLFORGE_JOBS": "2"}
    assert cli.resolve_settings(args, env)["jobs"] == "2"
    args = cli.build_parser().parse_args(["tables", "--which", "I", "--config", str(cfg), "--jobs", "5"])
    assert cli.resolve_settings(args, env)["jobs"] == "5"
    args = cli.build_parser().parse_args(["tables", "--which", "I"])
    assert cli.resolve_settings(args, {"BOOLFORGE_CONFIG": str(cfg)})["jobs"] == "3"
    assert cli.resolve_settings(args, {})["jobs"] == "1"
    with pytest.raises(cli.UsageError):
        cli.resolve_settings(args, {"BOOLFORGE_JOBS": "0"})
    cfg.write_text("nonsense\n")
    args = cli.build_parser().parse_args(["tables", "--which", "I", "--config", str(cfg)])
    with pytest.raises(cli.UsageError):
        cli.resolve_settings(args, {})


def test_deterministic_payload(capsys, tmp_path):
    outs = []
    for i in range(2):
        p = tmp_path / f"o{i}.json"
        run(capsys, "conjecture", "--r", "3", "--m", "4", "--u", "all", "--no-cache", "--jobs", str(i + 1), "-o", str(p))
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "boolforge", "tables", "--which", "I"],
                       capture_output=True, text=True, timeout=120)
    assert r.returncode == 0 and "457" in r.stdout
    r = subprocess.run([sys.executable, "-m", "boolforge", "nosuch"], capture_output=True, text=True, timeout=120)
    assert r.returncode == 2


def test_audit_rate(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("BOOLFORGE_CACHE_DIR", str(tmp_path / "cc"))
    run(capsys, "analyze", "--r", "1", "--m", "3", "--u", "1")
    entry = next((tmp_path / "cc").rglob("*.json"))
    entry.write_text(json.dumps({"weight": 1}))
    # never audited: the stale value is served; always audited: the mismatch is caught
    assert run(capsys, "analyze", "--r", "1", "--m", "3", "--u", "1", "--audit-rate", "0")[1].strip() == '{"weight":1}'
    monkeypatch.setenv("BOOLFORGE_AUDIT_RATE", "1")
    assert run(capsys, "analyze", "--r", "1", "--m", "3", "--u", "1")[0] == 1
    assert run(capsys, "analyze", "--r", "1", "--m", "3", "--audit-rate", "2")[0] == 2
