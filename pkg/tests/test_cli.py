"""CLI: subcommands, exit codes, config, cache round-trips."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffmc.base import FqPolynomial, finite_field, format_polynomial, parse_polynomial
from ffmc.cli import Config, build_parser, cache_roundtrip, load_config, run
from ffmc.errors import ConfigError


def _run(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSubcommands:
    def test_lfun_flagship(self, capsys):
        code, out, _ = _run(capsys, "lfun", "--q", "5",
                            "--kummer-f", "t^3-t", "--m", "2")
        assert code == 0
        report = json.loads(out)
        assert report["numerator"] == ["1", "2", "5"]

    def test_zeta_flagship(self, capsys):
        code, out, _ = _run(capsys, "zeta", "--q", "5", "--m", "2",
                            "--f", "t^3-t")
        assert code == 0
        report = json.loads(out)
        assert report["P"] == ["1", "2", "5"]
        assert report["h"] == "8"

    def test_places_q3(self, capsys):
        code, out, _ = _run(capsys, "places", "--q", "3", "--max-deg", "2")
        assert code == 0
        report = json.loads(out)
        assert report["count"] == "7"
        assert len(report["places"]) == 7

    def test_motive(self, capsys):
        code, out, _ = _run(capsys, "motive", "--q", "5", "--z1", "inf",
                            "--z2", "t,t-1", "--n", "4")
        assert code == 0
        report = json.loads(out)
        assert report["order"] == "4"
        assert report["duality_ok"] is True
        assert report["tower_ok"] is True
        assert report["frobenius_matrix"] == [["1"]]

    def test_verify(self, capsys, tmp_path):
        path = tmp_path / "sc.toml"
        path.write_text(
            '[base]\nq = 5\nf = "t^3-t"\nm = 2\nell = 3\nN = 1\nM = 1\n'
            '[checks]\nclass_tower = false\nselmer = false\n')
        code, out, err = _run(capsys, "verify", str(path))
        assert code == 0
        report = json.loads(out)
        assert report["passed"] is True
        assert "verify" in err  # timing goes to stderr, not the report

    def test_pretty_output_is_json(self, capsys):
        code, out, _ = _run(capsys, "--output", "pretty", "places",
                            "--q", "3", "--max-deg", "1")
        assert code == 0 and json.loads(out)["count"] == "4"


class TestExitCodes:
    def test_usage_error_is_2(self, capsys):
        assert _run(capsys, "places", "--q", "3")[0] == 2
        assert _run(capsys, "places", "--q", "3", "--max-deg", "2",
                    "--nope")[0] == 2

    def test_bad_value_is_2(self, capsys):
        code, _, err = _run(capsys, "zeta", "--q", "6", "--m", "2",
                            "--f", "t")
        assert code == 2 and "error" in err

    def test_missing_scenario_is_2(self, capsys):
        assert _run(capsys, "verify", "no-such-file.toml")[0] == 2

    def test_fail_verdict_is_1(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("FFMC_CACHE_DIR", str(tmp_path))
        # first run creates the cache; then corrupt it
        assert _run(capsys, "places", "--q", "3", "--max-deg", "2",
                    "--cache-roundtrip")[0] == 0
        (tmp_path / "places_q3_d2.txt").write_text("# broken\n")
        code, out, _ = _run(capsys, "places", "--q", "3", "--max-deg", "2",
                            "--cache-roundtrip")
        assert code == 1
        assert json.loads(out)["ok"] is False


class TestConfig:
    def test_defaults(self):
        cfg = load_config(None)
        assert cfg.output == "json" and cfg.workers == 1

    def test_strict_keys(self, tmp_path):
        path = tmp_path / "cfg.toml"
        path.write_text("bogus = 1\n")
        with pytest.raises(ConfigError, match="bogus"):
            load_config(str(path))

    def test_env_overrides_cache_dir(self, tmp_path, monkeypatch):
        path = tmp_path / "cfg.toml"
        path.write_text('cache_dir = "/from/config"\nworkers = 2\n')
        monkeypatch.setenv("FFMC_CACHE_DIR", "/from/env")
        cfg = load_config(str(path))
        assert cfg.cache_dir == "/from/env" and cfg.workers == 2

    def test_invalid_caps_rejected(self):
        with pytest.raises(ConfigError):
            Config(workers=0)
        with pytest.raises(ConfigError):
            Config(output="xml")


class TestCacheRoundtrip:
    def test_roundtrip_and_regeneration(self, tmp_path):
        F = finite_field(3)
        path = tmp_path / "places.txt"
        ok, diag = cache_roundtrip(str(path), F, 3)
        assert ok, diag
        path.unlink()  # empty dir: regenerated transparently
        ok, _ = cache_roundtrip(str(path), F, 3)
        assert ok

    def test_corrupted_header_fails_with_diagnostic(self, tmp_path):
        F = finite_field(3)
        path = tmp_path / "places.txt"
        path.write_text("# garbage\n")
        ok, diag = cache_roundtrip(str(path), F, 3)
        assert not ok and "header" in diag


@given(q=st.sampled_from([2, 3, 5, 7]),
       coeffs=st.lists(st.integers(min_value=0, max_value=12),
                       min_size=1, max_size=6))
@settings(max_examples=60, deadline=None)
def test_polynomial_parser_roundtrip(q, coeffs):
    F = finite_field(q)
    f = FqPolynomial.from_ints(F, coeffs)
    assert parse_polynomial(format_polynomial(f), F) == f
