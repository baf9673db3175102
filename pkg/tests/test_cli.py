import pytest

import hetgraphlets.cli as cli

from hetgraphlets.cli import main

from conftest import DATA

G1 = ["--edges", str(DATA / "g1.edges"), "--types", str(DATA / "g1.types")]


@pytest.mark.parametrize("mode", ["typed", "pa"])
def test_verify_g1(mode, capsys):
    assert main(["verify", *G1, "--mode", mode]) == 0
    assert "matches oracle" in capsys.readouterr().out


def test_count_then_global(tmp_path):
    assert main(["count", *G1, "--out", str(tmp_path / "c.tgc")]) == 0
    assert (tmp_path / "c.tgc.ids").exists() and (tmp_path / "c.tgc.keys").exists()
    assert main(["global", "--counts", str(tmp_path / "c.tgc"), "--out", str(tmp_path / "g")]) == 0
    lines = (tmp_path / "g").read_text().splitlines()
    assert "21120 2 1 1 2 0 1" in lines
    assert "71122 7 1 1 2 2 1" in lines


def test_count_threads_identical(tmp_path):
    for n in (1, 3):
        assert main(["count", *G1, "--threads", str(n), "--mode", "pa", "--level", "graphlet",
                     "--out", str(tmp_path / f"{n}.tgc")]) == 0
    assert (tmp_path / "1.tgc").read_bytes() == (tmp_path / "3.tgc").read_bytes()


@pytest.mark.parametrize("model, extra", [("er", ["--p", "0.3"]), ("cl", []),
                                          ("sw", ["--k", "4"])])
def test_generate_deterministic(tmp_path, model, extra):
    for name in ("a", "b"):
        assert main(["generate", "--model", model, "--nodes", "10", "--types", "5",
                     "--seed", "1", *extra, "--out-prefix", str(tmp_path / name)]) == 0
    for ext in (".edges", ".types"):
        assert (tmp_path / f"a{ext}").read_bytes() == (tmp_path / f"b{ext}").read_bytes()


def test_permute_types(tmp_path):
    out = tmp_path / "p"
    assert main(["permute-types", "--types", str(DATA / "g1.types"), "--seed", "2",
                 "--out", str(out)]) == 0
    rows = [l.split() for l in out.read_text().splitlines()]
    assert [r[0] for r in rows] == ["1", "2", "3", "4"]
    assert sorted(r[1] for r in rows) == ["1", "1", "2", "2"]


def test_embed(tmp_path):
    assert main(["embed", *G1, "--key", "21120", "--dim", "2", "--out", str(tmp_path / "z")]) == 0
    rows = (tmp_path / "z").read_text().splitlines()
    assert len(rows) == 4
    z1, z2 = ([float(x) for x in r.split()[1:]] for r in rows[:2])
    assert z1 == pytest.approx(z2, abs=1e-12)
    assert rows[3] == "4 0 0"


def test_embed_unknown_key(tmp_path, capsys):
    assert main(["embed", *G1, "--key", "121111", "--dim", "2", "--out", str(tmp_path / "z")]) == 2
    assert "available keys" in capsys.readouterr().err


def test_stats(tmp_path, capsys):
    main(["count", *G1, "--out", str(tmp_path / "c")])
    capsys.readouterr()
    assert main(["stats", "--counts", str(tmp_path / "c"), "--top", "3"]) == 0
    out = capsys.readouterr().out
    assert "mean nonzeros per edge: 3.5000" in out
    assert "tailed-triangle  1" in out
    assert "top 3 keys" in out


def test_usage_and_data_errors(tmp_path, capsys):
    assert main(["bogus"]) == 1
    assert main(["count", *G1]) == 1
    assert main(["count", "--edges", "nope", "--types", "nope", "--out", "x"]) == 2
    (tmp_path / "bad").write_text("1 2\n2 x\n")
    assert main(["count", "--edges", str(tmp_path / "bad"), "--types", str(DATA / "g1.types"),
                 "--out", str(tmp_path / "o")]) == 2
    assert ":2:" in capsys.readouterr().err


def test_verify_refuses_big_graph(tmp_path):
    main(["generate", "--model", "er", "--nodes", "60", "--p", "0.1", "--types", "2",
          "--out-prefix", str(tmp_path / "big")])
    assert main(["verify", "--edges", str(tmp_path / "big.edges"),
                 "--types", str(tmp_path / "big.types")]) == 2
    assert main(["verify", "--edges", str(tmp_path / "big.edges"),
                 "--types", str(tmp_path / "big.types"), "--max-nodes", "60"]) == 0


def test_verify_reports_divergence(monkeypatch, capsys):
    real = cli.count_all

    def broken(g, mode, workers=1):
        t = real(g, mode, workers)
        t.counts[0] += 1
        return t

    monkeypatch.setattr(cli, "count_all", broken)
    assert main(["verify", *G1]) == 3
    out = capsys.readouterr().out
    assert "MISMATCH: edge (1, 2)" in out and "oracle=1 engine=2" in out


def test_directed_input_needs_symmetrize(tmp_path):
    (tmp_path / "d").write_text("% directed\n1 2\n2 3\n3 1\n")
    args = ["count", "--edges", str(tmp_path / "d"), "--types", str(DATA / "g1.types"),
            "--out", str(tmp_path / "o")]
    assert main(args) == 2
    assert main(args + ["--symmetrize"]) == 0
