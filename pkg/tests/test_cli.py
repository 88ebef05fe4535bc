"""End-to-end checks of the ``kfree`` command line: exit codes, output
formats, the reproducibility stanza, and cache behaviour."""

import json
import math
import os

import pytest

from kfreelab import bounds, census, sampler, thresholds
from kfreelab.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    cap = capsys.readouterr()
    return rc, cap.out, cap.err


def body_lines(text):
    return [ln for ln in text.splitlines() if ln and not ln.startswith("#")]


def csv_rows(text):
    lines = body_lines(text)
    return lines[0].split(","), [ln.split(",") for ln in lines[1:]]


# -- thresholds ---------------------------------------------------------------


def test_thresholds_text_output(capsys):
    rc, out, err = run(capsys, "thresholds", "--n", "10000", "--r", "2")
    assert rc == 0 and err == ""
    assert out.splitlines()[0].startswith("# kfree 0.1.0 seed=- rng=none shards=-")
    assert "0.4330127018922193" in out
    assert "ex_turan" in out and "25000000" in out


def test_thresholds_ell_row(capsys):
    rc, out, _ = run(capsys, "thresholds", "--n", "100", "--r", "2", "--ell", "2")
    assert rc == 0
    assert "t_ell" in out
    assert repr(2 * 2500.0 * math.log(100.0)) in out


def test_thresholds_small_n_is_domain_error(capsys):
    rc, out, err = run(capsys, "thresholds", "--n", "2", "--r", "2")
    assert rc == 2 and out == ""
    assert "log" in err


def test_formats_agree(capsys):
    rc, text, _ = run(capsys, "thresholds", "--n", "1000", "--r", "3")
    rc2, csvtext, _ = run(capsys, "thresholds", "--n", "1000", "--r", "3",
                          "--format", "csv")
    rc3, jtext, _ = run(capsys, "thresholds", "--n", "1000", "--r", "3",
                        "--format", "json")
    assert rc == rc2 == rc3 == 0
    header, rows = csv_rows(csvtext)
    assert header == ["quantity", "value"]
    doc = json.loads(jtext)
    assert set(doc) == {"meta", "columns", "rows"}
    assert doc["columns"] == ["quantity", "value"]
    assert [[str(c) for c in row] for row in doc["rows"]] == rows
    for quantity, value in rows:
        assert value in text


# -- census -------------------------------------------------------------------


def test_census_matches_library(capsys):
    rc, out, _ = run(capsys, "census", "--n", "5", "--r", "2", "--format", "csv")
    assert rc == 0
    header, rows = csv_rows(out)
    assert header == ["m", "free", "free_rcol", "rcol", "unique_rcol", "pair_sum"]
    table = census.run_census(5, 2)
    assert len(rows) == len(table.rows) == 11
    for got, w in zip(rows, table.rows):
        assert got == [str(w.m), str(w.free), str(w.free_rcol), str(w.rcol),
                       str(w.unique_rcol), str(w.pair_sum)]


def test_census_cache_roundtrip(tmp_path, capsys):
    args = ("census", "--n", "5", "--r", "2", "--cache-dir", str(tmp_path))
    rc1, out1, _ = run(capsys, *args)
    cache = tmp_path / "census_n5_r2.txt"
    assert rc1 == 0 and cache.exists()
    rc2, out2, _ = run(capsys, *args)
    assert rc2 == 0 and out2 == out1


def test_census_corrupt_cache_is_io_error(tmp_path, capsys):
    args = ("census", "--n", "4", "--r", "2", "--cache-dir", str(tmp_path))
    run(capsys, *args)
    cache = tmp_path / "census_n4_r2.txt"
    cache.write_text(cache.read_text().replace("checksum", "chequesum"))
    rc, _, err = run(capsys, *args)
    assert rc == 4 and "i/o error" in err


def test_census_too_large(capsys):
    rc, _, err = run(capsys, "census", "--n", "9", "--r", "2")
    assert rc == 3 and "size guard" in err


# -- sweep --------------------------------------------------------------------


def test_sweep_census_rows(capsys):
    rc, out, _ = run(capsys, "sweep", "--n", "6", "--r", "2", "--m", "6,9",
                     "--format", "csv")
    assert rc == 0
    header, rows = csv_rows(out)
    assert header == ["n", "r", "m", "engine", "fraction_or_estimate",
                      "stderr", "samples", "caveat"]
    assert rows[0] == ["6", "2", "6", "census", "0.7692307692307693", "0.0",
                       "1560", "0"]
    assert rows[1] == ["6", "2", "9", "census", "1.0", "0.0", "10", "0"]


def test_sweep_auto_grid_hits_extremal(capsys):
    rc, out, _ = run(capsys, "sweep", "--n", "6", "--r", "2", "--format", "csv")
    assert rc == 0
    _, rows = csv_rows(out)
    ms = [int(row[2]) for row in rows]
    assert ms == sorted(ms)
    assert ms[0] == 6 and ms[-1] == 9
    assert rows[-1][4] == "1.0"


def test_sweep_sampler_caveat_and_determinism(tmp_path, capsys):
    args = ("sweep", "--n", "6", "--r", "2", "--m", "4,9", "--engine", "sampler",
            "--steps", "4000", "--burn-in", "100", "--seed", "7",
            "--format", "csv")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    rc1, _, _ = run(capsys, *args, "--out", str(a))
    rc2, _, _ = run(capsys, *args, "--out", str(b))
    assert rc1 == rc2 == 0
    assert a.read_bytes() == b.read_bytes()
    _, rows = csv_rows(a.read_text())
    by_m = {row[2]: row for row in rows}
    assert by_m["4"][3] == "sampler" and by_m["4"][7] == "0"
    assert by_m["9"][7] == "1"  # 9 > 0.9 * ex_turan(6, 3)
    expected = sampler.retained_samples(
        sampler.ChainConfig(n=6, r=2, m=4, seed=7, burn_in=100, thin=10, chains=4),
        4000,
    )
    assert by_m["4"][6] == str(expected)


def test_sweep_census_too_large(capsys):
    rc, _, err = run(capsys, "sweep", "--n", "9", "--r", "2")
    assert rc == 3 and "sampler" in err


def test_sweep_grid_validation(capsys):
    rc, _, err = run(capsys, "sweep", "--n", "6", "--r", "2", "--m", "10")
    assert rc == 2 and "ex_turan" in err
    rc, _, err = run(capsys, "sweep", "--n", "6", "--r", "2", "--m", "3,x")
    assert rc == 2 and "comma-separated" in err
    rc, _, err = run(capsys, "sweep", "--n", "6", "--r", "2", "--m", " , ")
    assert rc == 2 and "empty" in err


# -- sample -------------------------------------------------------------------


def test_sample_dump_format(tmp_path, capsys):
    dump = tmp_path / "trace.csv"
    rc, out, _ = run(capsys, "sample", "--n", "6", "--r", "2", "--m", "5",
                     "--steps", "3000", "--burn-in", "200", "--thin", "50",
                     "--chains", "2", "--seed", "5", "--dump", str(dump))
    assert rc == 0
    lines = dump.read_text().splitlines()
    assert lines[0] == "# kfree 0.1.0 seed=5 rng=philox4x64 shards=-"
    assert lines[1] == "step,is_rcol,triangles,edges_hash"
    cfg = sampler.ChainConfig(n=6, r=2, m=5, seed=5, burn_in=200, thin=50, chains=2)
    assert len(lines) - 2 == sampler.retained_samples(cfg, 3000)
    for ln in lines[2:]:
        step, is_rcol, tri, digest = ln.split(",")
        assert int(step) > 200 and is_rcol in ("0", "1")
        assert int(tri) == 0 and len(digest) == 16
    assert "estimate" in out and "acceptance_rate" in out


def test_sample_infeasible_m(capsys):
    rc, _, err = run(capsys, "sample", "--n", "5", "--r", "2", "--m", "7")
    assert rc == 2 and "more than 6 edges" in err


# -- bounds -------------------------------------------------------------------


@pytest.fixture
def family_file(tmp_path):
    fam = bounds.ForbiddenFamily(6, ((0, 1), (2, 3)))
    path = tmp_path / "fam.json"
    path.write_text(bounds.family_to_json(fam))
    return str(path)


def test_bounds_janson(family_file, capsys):
    rc, out, _ = run(capsys, "bounds", "janson", "--family", family_file,
                     "--m", "2", "--format", "csv")
    assert rc == 0
    _, rows = csv_rows(out)
    got = dict(rows)
    fam = bounds.ForbiddenFamily(6, ((0, 1), (2, 3)))
    md = bounds.mu_delta_exact(fam, 2)
    assert got["mu"] == repr(md.mu)
    assert got["janson_upper"] == repr(bounds.janson_upper(md))


def test_bounds_exact_rational(family_file, capsys):
    rc, out, _ = run(capsys, "bounds", "exact", "--family", family_file, "--m", "2")
    assert rc == 0
    assert "13/15" in out
    assert repr(13 / 15) in out


def test_bounds_fkg_precondition_exit(family_file, capsys):
    rc, _, err = run(capsys, "bounds", "fkg", "--family", family_file,
                     "--m", "4", "--eta", "0.5")
    assert rc == 2 and "domain error" in err


def test_bounds_family_file_errors(tmp_path, capsys):
    rc, _, err = run(capsys, "bounds", "janson", "--family",
                     str(tmp_path / "missing.json"), "--m", "2")
    assert rc == 4
    bad = tmp_path / "bad.json"
    bad.write_text("{]")
    rc, _, err = run(capsys, "bounds", "janson", "--family", str(bad), "--m", "2")
    assert rc == 2


def test_bounds_scalar_subcommands(capsys):
    rc, out, _ = run(capsys, "bounds", "hoeffding", "--alpha", "0.2",
                     "--lam", "0.5", "--d", "6")
    assert rc == 0 and repr((2 * 0.2**0.5) ** 6) in out

    rc, out, _ = run(capsys, "bounds", "dsets", "--k", "2", "--alpha", "0.2",
                     "--lam", "0.5", "--sizes", "10,10", "--d", "4")
    assert rc == 0 and "tau" in out

    rc, out, _ = run(capsys, "bounds", "probe", "--n", "10000", "--r", "2",
                     "--m", str(thresholds.m_r(10**4, 2)))
    assert rc == 0
    want = bounds.heuristic_threshold_probe(10**4, 2, thresholds.m_r(10**4, 2))
    assert repr(want) in out

    rc, out, _ = run(capsys, "bounds", "pairsum", "--n", "4", "--r", "2",
                     "--m", "2")
    assert rc == 0 and str(census.pair_sum(4, 2, 2)) in out


def test_bounds_pairsum_gamma(capsys):
    rc, out, _ = run(capsys, "bounds", "pairsum", "--n", "5", "--r", "2",
                     "--m", "2", "--gamma", "0.1")
    assert rc == 0
    assert str(census.pair_sum(5, 2, 2, 0.1)) in out


# -- output plumbing ----------------------------------------------------------


def test_out_file_suppresses_stdout(tmp_path, capsys):
    dest = tmp_path / "t.csv"
    rc, out, _ = run(capsys, "thresholds", "--n", "1000", "--r", "2",
                     "--format", "csv", "--out", str(dest))
    assert rc == 0 and out == ""
    assert "theta" in dest.read_text()


def test_unwritable_out_is_io_error(tmp_path, capsys):
    dest = os.path.join(str(tmp_path), "no", "such", "dir", "x.csv")
    rc, _, err = run(capsys, "thresholds", "--n", "1000", "--r", "2",
                     "--out", dest)
    assert rc == 4 and "i/o error" in err
