import csv
import io

import pytest

from bjpm.cli import h0, main
from bjpm.detect_index import load

from conftest import G5_TEXT


@pytest.fixture
def files(tmp_path):
    (tmp_path / "b.txt").write_text("01\n1 0\n")
    (tmp_path / "g5.slp").write_text(G5_TEXT)
    (tmp_path / "g5.txt").write_text("01010101")
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def kv(out):
    return dict(line.split("=", 1) for line in out.splitlines())


def test_build_text(files, capsys):
    code, out, _ = run(capsys, "build", "--text", files / "b.txt", "--out", files / "x.bjpm")
    assert code == 0
    ix = load(files / "x.bjpm")
    assert str(ix.bmin) == "0110" and str(ix.bmax) == "1100"
    stats = kv(out)
    assert stats["n"] == "4" and stats["ones"] == "2" and float(stats["h0"]) == 1.0
    assert stats["method"] == "scan"


def test_build_slp_equals_text_build(files, capsys):
    run(capsys, "build", "--slp", files / "g5.slp", "--out", files / "a.bjpm")
    run(capsys, "build", "--text", files / "g5.txt", "--out", files / "b.bjpm")
    assert (files / "a.bjpm").read_bytes() == (files / "b.bjpm").read_bytes()


def test_methods_byte_identical(files, capsys):
    for method in ("scan", "grammar", "auto"):
        code, out, _ = run(
            capsys, "build", "--text", files / "g5.txt", "--out", files / f"{method}.bjpm",
            "--method", method,
        )
        assert code == 0 and kv(out)["method"] in ("scan", "grammar")
    blobs = {(files / f"{m}.bjpm").read_bytes() for m in ("scan", "grammar", "auto")}
    assert len(blobs) == 1


def test_build_compress_uses_grammar(files, capsys):
    _, out, _ = run(
        capsys, "build", "--text", files / "g5.txt", "--out", files / "c.bjpm", "--compress"
    )
    stats = kv(out)
    assert stats["method"] == "grammar"
    assert {"g", "ell", "b", "d", "work_counter"} <= stats.keys()


@pytest.mark.parametrize("content", ["", "  \n", "0120", "01x"])
def test_build_rejects_bad_text(files, capsys, content):
    (files / "bad.txt").write_text(content)
    code, _, err = run(capsys, "build", "--text", files / "bad.txt", "--out", files / "z.bjpm")
    assert code == 2 and "error" in err


def test_build_missing_file(files, capsys):
    code, _, _ = run(capsys, "build", "--text", files / "nope.txt", "--out", files / "z.bjpm")
    assert code == 2


def test_build_malformed_slp_reports_line(files, capsys):
    (files / "bad.slp").write_text("SLP 2 1\n0:0\n1:0 2\n")
    code, _, err = run(capsys, "build", "--slp", files / "bad.slp", "--out", files / "z.bjpm")
    assert code == 2 and "line 3" in err


def test_build_requires_one_input(files, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["build", "--out", str(files / "z.bjpm")])
    assert exc.value.code == 2
    capsys.readouterr()


def test_invariant_violation_exit_3(files, capsys, monkeypatch):
    import bjpm.cli as cli
    from bjpm.detect_index import InvariantError

    def broken(_table):
        raise InvariantError("boom")

    monkeypatch.setattr(cli, "encode", broken)
    code, _, err = run(capsys, "build", "--text", files / "b.txt", "--out", files / "z.bjpm")
    assert code == 3 and "invariant" in err


@pytest.mark.parametrize("m, c, expected", [(2, 1, "1\n"), (3, 1, "0\n"), (9, 0, "0\n")])
def test_query(files, capsys, m, c, expected):
    run(capsys, "build", "--text", files / "b.txt", "--out", files / "x.bjpm")
    code, out, _ = run(capsys, "query", files / "x.bjpm", m, c)
    assert code == 0 and out == expected


def test_query_bad_file(files, capsys):
    (files / "junk.bjpm").write_bytes(b"JUNK\x01")
    code, _, _ = run(capsys, "query", files / "junk.bjpm", 1, 1)
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["query", str(files / "junk.bjpm"), "x", "1"])
    assert exc.value.code == 2
    capsys.readouterr()


@pytest.mark.parametrize("m, c, expected", [(2, 1, "1\n3\n"), (2, 2, "2\n"), (1, 1, "2\n3\n"), (3, 1, "")])
def test_list(files, capsys, m, c, expected):
    run(capsys, "build", "--text", files / "b.txt", "--out", files / "x.bjpm", "--listing")
    code, out, _ = run(capsys, "list", files / "x.bjpl", m, c)
    assert code == 0 and out == expected


def test_list_custom_path_and_bad_file(files, capsys):
    _, out, _ = run(
        capsys, "build", "--text", files / "b.txt", "--out", files / "x.bjpm",
        "--listing", "--listing-out", files / "custom.idx",
    )
    assert "listing_bits" in kv(out)
    assert run(capsys, "list", files / "custom.idx", 2, 2)[1] == "2\n"
    assert run(capsys, "list", files / "x.bjpm", 2, 2)[0] == 2


def test_stats(files, capsys):
    code, out, _ = run(capsys, "stats", "--slp", files / "g5.slp", "--listing")
    stats = kv(out)
    assert code == 0
    assert stats["n"] == "8" and stats["g"] == "5" and "listing_bits" in stats
    assert int(stats["index_bits"]) >= 2 * 8


def test_h0_values():
    assert h0(4, 0) == 0.0 and h0(4, 4) == 0.0 and h0(4, 2) == 1.0
    assert 0.0 < h0(10, 1) < 1.0


def test_bench_csv(capsys):
    code, out, _ = run(capsys, "bench", "--family", "fib", "--sizes", "64,128", "--seed", "3")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0].keys()) == [
        "family", "n", "g", "ell", "b", "d", "method", "work_counter", "seconds",
    ]
    assert [(r["n"], r["method"]) for r in rows] == [
        ("64", "scan"), ("64", "grammar"), ("128", "scan"), ("128", "grammar"),
    ]


def test_bench_deterministic(capsys):
    outs = []
    for _ in range(2):
        _, out, _ = run(capsys, "bench", "--family", "random", "--sizes", "100,200", "--seed", "7")
        rows = list(csv.DictReader(io.StringIO(out)))
        outs.append([{k: v for k, v in r.items() if k != "seconds"} for r in rows])
    assert outs[0] == outs[1]


def test_bench_scan_quadratic_grammar_not(capsys):
    _, out, _ = run(capsys, "bench", "--family", "power", "--sizes", "1024,2048,4096,8192")
    rows = list(csv.DictReader(io.StringIO(out)))
    work = {(int(r["n"]), r["method"]): int(r["work_counter"]) for r in rows}
    for n in (1024, 2048, 4096):
        assert work[(2 * n, "scan")] / work[(n, "scan")] == pytest.approx(4.0, rel=0.01)
    assert (work[(8192, "grammar")] / work[(1024, "grammar")]) ** (1 / 3) < 3.2


@pytest.mark.parametrize("argv", [
    ["bench", "--family", "nope", "--sizes", "8"],
    ["bench", "--family", "power", "--sizes", "16,8"],
    ["bench", "--family", "power", "--sizes", "8", "--methods", "magic"],
])
def test_bench_usage_errors(capsys, argv):
    assert main(argv) == 2
    capsys.readouterr()


def test_hidden_oracle(files, capsys):
    _, out, _ = run(capsys, "oracle", "table", "--text", files / "b.txt")
    assert out == "min=0,1,2,2\nmax=1,2,2,2\n"
    assert run(capsys, "oracle", "list", 2, 1, "--text", files / "b.txt")[1] == "1\n3\n"
    assert run(capsys, "oracle", "detect", 3, 1, "--text", files / "b.txt")[1] == "0\n"
    assert run(capsys, "oracle", "detect", "--text", files / "b.txt")[0] == 2
    with pytest.raises(SystemExit):
        main(["--help"])
    assert "oracle" not in capsys.readouterr().out
