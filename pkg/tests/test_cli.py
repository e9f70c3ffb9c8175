"""CLI tests: config handling, caching, exit codes, reports."""

import json
import os

import pytest

from padicbianchi import cli
from padicbianchi import cocycle as cc
from padicbianchi import padic


@pytest.fixture(scope="module")
def cache_dir(tmp_path_factory):
    """A warm cache for the M = 5 reference run (built once)."""
    cache = tmp_path_factory.mktemp("cache")
    out = tmp_path_factory.mktemp("out") / "seed.json"
    code = cli.main(["build", "--precision", "5", "--cache-dir", str(cache),
                     "--output", str(out)])
    assert code == 0
    assert json.loads(out.read_text())["cache"] == "miss"
    return cache


def run(tmp_path, name, argv):
    out = tmp_path / name
    code = cli.main(argv + ["--output", str(out)])
    return code, json.loads(out.read_text())


BASE = ["--precision", "5"]


class TestBuild:
    def test_cache_hit(self, cache_dir, tmp_path):
        code, rep = run(tmp_path, "b.json",
                        ["build"] + BASE + ["--cache-dir", str(cache_dir)])
        assert code == 0
        assert rep["cache"] == "hit"
        assert rep["eigen"]["lambda_p"] == "1"
        assert rep["lift_certificate"]["converged"]

    def test_corrupt_cache_rebuilds_with_warning(self, tmp_path):
        cache = tmp_path / "cache"
        # fake a cache entry with valid metadata but a broken payload
        cfg = cli.RunConfig(precision=5, cache_dir=str(cache))
        os.makedirs(cache)
        key = cfg.cache_key()
        (cache / (key + ".npz")).write_bytes(b"not a payload")
        (cache / (key + ".json")).write_text(json.dumps(
            {"format": cli.CACHE_FORMAT, "config": cfg.echo(),
             "phi_values": ["1"], "eigen": {"lambda_p": "1"}, "cert": {}}))
        code, rep = run(tmp_path, "b.json",
                        ["build"] + BASE + ["--cache-dir", str(cache)])
        assert code == 0
        assert rep["cache"] == "rebuilt"
        assert any("corrupt cache" in w for w in rep["warnings"])

    def test_dot_dump(self, cache_dir, tmp_path):
        dot = tmp_path / "tree.dot"
        code, rep = run(tmp_path, "b.json",
                        ["build"] + BASE + ["--cache-dir", str(cache_dir),
                                            "--dot-out", str(dot)])
        assert code == 0
        assert dot.read_text().startswith("graph btree")

    def test_jobs_flag_accepted(self, cache_dir, tmp_path):
        code, rep = run(tmp_path, "b.json",
                        ["build"] + BASE + ["--cache-dir", str(cache_dir),
                                            "--jobs", "4"])
        assert code == 0
        assert rep["config"]["jobs"] == 4

    def test_no_eigenpacket_diagnostic(self, tmp_path):
        code, rep = run(tmp_path, "b.json",
                        ["build", "--level", "3", "--prime", "3",
                         "--precision", "5",
                         "--cache-dir", str(tmp_path / "c")])
        assert code == 3
        assert rep["error"] == "no-new-eigenpacket"
        assert rep["spectrum"]["dimension"] == 1
        assert rep["spectrum"]["hecke_spectra"]


class TestConfig:
    def test_file_with_flag_override(self, cache_dir, tmp_path):
        conf = tmp_path / "run.conf"
        conf.write_text("precision = 5\n"
                        "cache-dir = %s\n"
                        "# a comment\n"
                        "embedding_data = 3:1,3:2\n" % cache_dir)
        code, rep = run(tmp_path, "b.json",
                        ["build", "--config", str(conf),
                         "--embedding-data", "3:1,7:1"])
        assert code == 0
        assert rep["config"]["embedding_data"] == "3:1,7:1"
        assert rep["config"]["precision"] == 5

    def test_unknown_key_rejected(self, tmp_path, capsys):
        conf = tmp_path / "run.conf"
        conf.write_text("frobnicate = 1\n")
        assert cli.main(["build", "--config", str(conf)]) == 4
        assert "unknown key" in capsys.readouterr().out

    @pytest.mark.parametrize("argv", [
        ["build", "--weight", "3", "--precision", "9"],
        ["build", "--precision", "4"],
        ["build", "--prime", "5", "--level", "5", "--precision", "5"],
        ["build", "--prime", "7", "--precision", "5"],
        ["build", "--field-disc", "6", "--precision", "5"],
    ])
    def test_bad_input_exit_code(self, argv, tmp_path, capsys):
        assert cli.main(argv + ["--cache-dir", str(tmp_path / "c")]) == 4
        assert json.loads(capsys.readouterr().out)["error"] == "bad-input"


class TestLinv:
    def test_certificate(self, cache_dir, tmp_path):
        code, rep = run(tmp_path, "l.json",
                        ["linv"] + BASE + ["--cache-dir", str(cache_dir)])
        assert code == 0
        cert = rep["certificate"]
        assert len(cert["entries"]) == 3
        li = cert["l_invariant"]
        assert li["valuation"] == 1
        assert int(li["coeffs"][0]) % 11 ** 4 == 91589443 % 11 ** 4

    def test_deterministic_output(self, cache_dir, tmp_path):
        argv = ["linv"] + BASE + ["--cache-dir", str(cache_dir)]
        out1, out2 = tmp_path / "l1.json", tmp_path / "l2.json"
        assert cli.main(argv + ["--output", str(out1)]) == 0
        assert cli.main(argv + ["--output", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_non_vanishing_exit(self, cache_dir, tmp_path, monkeypatch):
        def boom(fam, data=None):
            raise cc.NonVanishingError(["(3)"])
        monkeypatch.setattr(cc, "l_invariant", boom)
        code, rep = run(tmp_path, "l.json",
                        ["linv"] + BASE + ["--cache-dir", str(cache_dir)])
        assert code == 3
        assert rep["error"] == "non-vanishing-not-found"

    def test_precision_underflow_exit(self, cache_dir, tmp_path,
                                      monkeypatch):
        def boom(fam, data=None):
            raise padic.PrecisionError("inexact division")
        monkeypatch.setattr(cc, "l_invariant", boom)
        code, rep = run(tmp_path, "l.json",
                        ["linv"] + BASE + ["--cache-dir", str(cache_dir)])
        assert code == 2
        assert rep["error"] == "precision-underflow"


class TestAccept:
    def test_single_criterion_passes(self, cache_dir, tmp_path):
        code, rep = run(tmp_path, "a.json",
                        ["accept"] + BASE + ["--cache-dir", str(cache_dir),
                                             "--criteria", "1"])
        assert code == 0
        assert rep["all_pass"]
        assert rep["schema_valid"]
        (entry,) = rep["criteria"]
        assert entry["id"] == 1 and entry["passed"]
        assert entry["elapsed_sec"] < entry["runtime_limit_sec"]

    def test_fault_injection_flagged(self, cache_dir, tmp_path):
        code, rep = run(tmp_path, "a.json",
                        ["accept"] + BASE + ["--cache-dir", str(cache_dir),
                                             "--criteria", "2",
                                             "--inject-fault"])
        assert code == 1
        assert rep["fault_injected"]
        (entry,) = rep["criteria"]
        assert not entry["passed"]
        assert entry["detail"]["new_max_residual"] != "0"

    def test_bad_criteria_list(self, cache_dir, tmp_path):
        code, rep = run(tmp_path, "a.json",
                        ["accept"] + BASE + ["--cache-dir", str(cache_dir),
                                             "--criteria", "12"])
        assert code == 4

    def test_report_schema_in_repo(self, cache_dir, tmp_path):
        import jsonschema
        here = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
        with open(os.path.join(here, "schema",
                               "accept_report.schema.json")) as fh:
            shipped = json.load(fh)
        assert shipped == cli.ACCEPT_REPORT_SCHEMA
        code, rep = run(tmp_path, "a.json",
                        ["accept"] + BASE + ["--cache-dir", str(cache_dir),
                                             "--criteria", "5"])
        jsonschema.validate(rep, shipped)
        assert code == 0
