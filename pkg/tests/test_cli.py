import filecmp
import hashlib
import json
import subprocess
import sys

import numpy as np
import pytest

import scskit as sk
from scskit.cli import main

from oracles import random_compliant


@pytest.fixture()
def cfr15(tmp_path, rect15):
    path = tmp_path / "r15.txt"
    sk.write_cfr(rect15, path)
    return str(path)


@pytest.fixture()
def cfr5(tmp_path, rect5):
    path = tmp_path / "r5.txt"
    sk.write_cfr(rect5, path)
    return str(path)


def _gen_small_family(tmp_path, cfr5, name="fam.json"):
    out = str(tmp_path / name)
    assert main(["gen-scs", "c2", "--cfr", cfr5, "--s0", "3", "-o", out]) == 0
    return out


# ---------------------------------------------------------------------------
# Top-level argument handling.

def test_no_command_is_usage_error(capsys):
    assert main([]) == 1
    capsys.readouterr()


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == 0
    assert "gen-scs" in capsys.readouterr().out


# ---------------------------------------------------------------------------
# gen-cfr

def test_gen_cfr_prime_stdout(capsys):
    assert main(["gen-cfr", "--prime", "7"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "7 6"
    rows = [tuple(int(v) for v in line.split()) for line in lines[1:]]
    assert sk.verify_cfr(rows) is None


def test_gen_cfr_prime_writes_file_and_config(tmp_path, capsys):
    out = str(tmp_path / "r7.txt")
    assert main(["gen-cfr", "--prime", "7", "-o", out]) == 0
    assert sk.load_cfr(out).num_rows == 6
    config = json.loads((tmp_path / "r7.config.json").read_text())
    assert config["command"] == "gen-cfr"
    assert config["source"] == {"prime": 7}
    assert "wrote" in capsys.readouterr().out


def test_gen_cfr_rejects_composite(capsys):
    assert main(["gen-cfr", "--prime", "9"]) == 1
    capsys.readouterr()


def test_gen_cfr_search_found(tmp_path, capsys):
    out = str(tmp_path / "r9.txt")
    assert main(["gen-cfr", "--search", "9", "--rows", "2", "-o", out]) == 0
    rect = sk.load_cfr(out)
    assert rect.order == 9 and rect.num_rows == 2
    config = json.loads((tmp_path / "r9.config.json").read_text())
    assert config["source"]["search"]["order"] == 9
    assert config["nodes"] > 0
    capsys.readouterr()


def test_gen_cfr_search_exhausted(capsys):
    assert main(["gen-cfr", "--search", "3", "--rows", "3"]) == 3
    assert "canonical search space exhausted" in capsys.readouterr().err


def test_gen_cfr_search_budget(capsys):
    assert main(["gen-cfr", "--search", "15", "--rows", "4", "--budget", "1000"]) == 2
    assert "budget" in capsys.readouterr().err


def test_gen_cfr_search_needs_rows(capsys):
    assert main(["gen-cfr", "--search", "9"]) == 1
    capsys.readouterr()


# ---------------------------------------------------------------------------
# gen-scs

def test_gen_scs_c1_summary(cfr15, capsys):
    assert main(["gen-scs", "c1", "--cfr", cfr15]) == 0
    out = capsys.readouterr().out
    fields = {}
    for line in out.splitlines():
        if "=" in line:
            key, _, value = line.partition("=")
            fields[key.strip()] = value.strip()
    assert fields["L"] == "240"
    assert fields["K x M"] == "4 x 1"
    assert fields["n"] == "15"
    assert fields["omega"].split()[:3] == ["1", "17", "33"]
    assert fields["alphabet"] == "16 (used 16)"
    assert float(fields["theta_max"]) == pytest.approx(16.0, abs=1e-6)


def test_gen_scs_window_flag(cfr5, capsys):
    assert main(["gen-scs", "c2", "--cfr", cfr5, "--s0", "3", "--window", "5"]) == 0
    out = capsys.readouterr().out
    assert "window        = 5" in out
    fields = dict(
        (line.partition("=")[0].strip(), line.partition("=")[2].strip())
        for line in out.splitlines() if "=" in line
    )
    # inside the zero zone the auto/intra peak vanishes; the inter-set
    # plateau remains
    assert float(fields["theta_a"]) <= 1e-9
    assert float(fields["theta_c"]) == pytest.approx(6.0, abs=1e-6)


def test_gen_scs_writes_family_spectrum_config(tmp_path, cfr15, capsys):
    out = str(tmp_path / "fam.json")
    assert main(["gen-scs", "c2", "--cfr", cfr15, "--s0", "7", "-o", out]) == 0
    capsys.readouterr()
    family = sk.load_family(out)
    assert family.length == 240
    assert (tmp_path / "fam.spectrum.csv").read_text().startswith("f,power,forbidden")
    config = json.loads((tmp_path / "fam.config.json").read_text())
    assert config["construction"] == "c2"
    assert config["s0"] == 7
    assert config["order"] == 15
    assert config["cfr_sha256"] == hashlib.sha256(open(cfr15, "rb").read()).hexdigest()
    assert sk.Cfr(15, tuple(tuple(r) for r in config["cfr_rows"])).num_rows == 4
    assert main(["verify", out]) == 0
    capsys.readouterr()


def test_gen_scs_regeneration_is_bit_identical(tmp_path, cfr5, capsys):
    a = str(tmp_path / "a" / "fam.json")
    b = str(tmp_path / "b" / "fam.json")
    (tmp_path / "a").mkdir()
    (tmp_path / "b").mkdir()
    for out in (a, b):
        assert main(["gen-scs", "c3", "--cfr", cfr5,
                     "--insert", "0,2,6,7,8,10", "-o", out]) == 0
    capsys.readouterr()
    assert filecmp.cmp(a, b, shallow=False)
    assert filecmp.cmp(a.replace(".json", ".spectrum.csv"),
                       b.replace(".json", ".spectrum.csv"), shallow=False)


def test_gen_scs_usage_errors(cfr15, capsys):
    assert main(["gen-scs", "c1", "--cfr", cfr15, "--s0", "3"]) == 1
    assert main(["gen-scs", "c2", "--cfr", cfr15]) == 1
    assert main(["gen-scs", "c3", "--cfr", cfr15]) == 1
    assert main(["gen-scs", "c2", "--cfr", cfr15, "--s0", "7",
                 "--corr-pair", "0,0,1,0"]) == 1
    assert main(["gen-scs", "c3", "--cfr", cfr15, "--insert", "1,x"]) == 1
    assert main(["gen-scs", "c1", "--cfr", "missing.txt"]) == 1
    capsys.readouterr()


def test_gen_scs_difference_set_line(cfr5, capsys):
    assert main(["gen-scs", "c3", "--cfr", cfr5, "--insert", "0,2,6,7,8,10"]) == 0
    assert "form a (11,5,2) difference set" in capsys.readouterr().out
    assert main(["gen-scs", "c4", "--cfr", cfr5, "--insert", "0,1"]) == 0
    assert "do not form a difference set" in capsys.readouterr().out


def test_gen_scs_corr_pair_csv(tmp_path, cfr5, capsys):
    out = str(tmp_path / "fam.json")
    assert main(["gen-scs", "c3", "--cfr", cfr5, "--insert", "0,2,6,7,8,10",
                 "-o", out, "--corr-pair", "0,0,1,0", "--corr-pair", "2,0,3,0"]) == 0
    capsys.readouterr()
    for name in ("fam.corr.0-0x1-0.csv", "fam.corr.2-0x3-0.csv"):
        lines = (tmp_path / name).read_text().splitlines()
        assert lines[0] == "tau,re,im,mag"
        assert len(lines) == 56


def test_gen_scs_c4_with_h_file(tmp_path, cfr5, capsys):
    h = sk.dft_modulation(5)[::-1]
    h_path = tmp_path / "h.json"
    h_path.write_text(json.dumps([[[z.real, z.imag] for z in row] for row in h]))
    assert main(["gen-scs", "c4", "--cfr", cfr5, "--insert", "0,5",
                 "--h-matrix", str(h_path), "--sets", "2"]) == 0
    out = capsys.readouterr().out
    assert "K x M         = 2 x 5" in out
    assert "zcz           = 5 5" in out


# ---------------------------------------------------------------------------
# bounds

def test_bounds_family_mode(tmp_path, cfr5, capsys):
    fam = _gen_small_family(tmp_path, cfr5)
    capsys.readouterr()
    assert main(["bounds", "--family", fam]) == 0
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert lines[0].split() == ["N", "L", "sets", "theta_max", "theta_opti", "eta"]
    # order 5 comes from the config sidecar
    assert lines[2].split()[0] == "5"
    assert "floors:" in out
    assert "verdicts:" in out


def test_bounds_family_infers_order_without_config(tmp_path, cfr5, capsys):
    fam = _gen_small_family(tmp_path, cfr5)
    capsys.readouterr()
    bare = tmp_path / "bare"
    bare.mkdir()
    moved = bare / "fam.json"
    moved.write_bytes(open(fam, "rb").read())
    assert main(["bounds", "--family", str(moved)]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[2].split()[0] == "5"


def test_bounds_raw_mode(tmp_path, capsys):
    out = str(tmp_path / "b.json")
    assert main(["bounds", "--M", "4", "--L", "240", "--n", "15",
                 "--theta-max", "16", "--order", "15", "-o", out]) == 0
    text = capsys.readouterr().out
    assert "14.0073" in text and "1.1423" in text
    assert "theta_opti=14.007297" in text
    rec = json.loads(open(out).read())
    assert rec["L"] == 240 and rec["M_total"] == 4
    assert rec["verdicts"]["family_floor"] == "suboptimal"
    assert abs(rec["eta"] - 1.142262) < 1e-5


def test_bounds_usage_errors(tmp_path, cfr5, capsys):
    fam = _gen_small_family(tmp_path, cfr5)
    capsys.readouterr()
    assert main(["bounds", "--M", "4", "--L", "240"]) == 1
    assert main(["bounds", "--family", fam, "--L", "240"]) == 1
    assert main(["bounds"]) == 1
    capsys.readouterr()


# ---------------------------------------------------------------------------
# verify

def test_verify_family_pass(tmp_path, cfr5, capsys):
    fam = _gen_small_family(tmp_path, cfr5)
    capsys.readouterr()
    assert main(["verify", fam]) == 0
    out = capsys.readouterr().out
    for name in ("load", "energy", "uniform-power", "unimodular", "correlation-energy"):
        assert f"PASS {name}" in out
    assert "FAIL" not in out
    assert "info zcz: widths 5 5 5 5" in out


def test_verify_family_catches_corruption(tmp_path, cfr5, capsys):
    fam = _gen_small_family(tmp_path, cfr5)
    rec = json.loads(open(fam).read())
    re, im = rec["sets"][0][0]["values"][5]
    rec["sets"][0][0]["values"][5] = [re * 1.01, im * 1.01]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(rec))
    capsys.readouterr()
    assert main(["verify", str(bad)]) == 4
    out = capsys.readouterr().out
    assert "FAIL uniform-power" in out
    assert "FAIL unimodular" in out


def test_verify_waiver_for_non_unimodular(tmp_path, capsys):
    constraint = sk.SpectralConstraint(30, frozenset({0, 3}))
    rng = np.random.default_rng(21)
    members = tuple(
        sk.ComplexSeq.time(random_compliant(constraint, rng)) for _ in range(2)
    )
    path = str(tmp_path / "rand.json")
    sk.save_family(sk.ScsFamily((members,), constraint), path)
    assert main(["verify", path]) == 4
    out = capsys.readouterr().out
    assert "FAIL unimodular" in out
    assert "PASS uniform-power" in out
    assert main(["verify", path, "--allow-non-unimodular"]) == 0
    capsys.readouterr()


def test_verify_cfr_pass(cfr15, capsys):
    assert main(["verify", cfr15]) == 0
    out = capsys.readouterr().out
    for name in ("axioms", "alignment-counts", "inverse-differences"):
        assert f"PASS {name}" in out


def test_verify_cfr_fail(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 2\n0 1 2\n2 0 1\n")
    assert main(["verify", str(bad)]) == 4
    assert "FAIL load" in capsys.readouterr().out


def test_verify_kind_override(tmp_path, cfr5, capsys):
    fam = _gen_small_family(tmp_path, cfr5)
    odd_name = tmp_path / "family.dat"
    odd_name.write_bytes(open(fam, "rb").read())
    assert main(["verify", str(odd_name), "--kind", "family"]) == 0
    capsys.readouterr()


def test_scs_tol_env(tmp_path, cfr5, capsys, monkeypatch):
    fam = _gen_small_family(tmp_path, cfr5)
    rec = json.loads(open(fam).read())
    re, im = rec["sets"][0][0]["values"][10]
    z = complex(re, im) * np.exp(1j * 1e-4)
    rec["sets"][0][0]["values"][10] = [z.real, z.imag]
    pert = str(tmp_path / "pert.json")
    open(pert, "w").write(json.dumps(rec))

    assert main(["verify", pert]) == 4
    monkeypatch.setenv("SCS_TOL", "1e-1")
    assert main(["verify", pert]) == 0
    monkeypatch.setenv("SCS_TOL", "abc")
    assert main(["verify", pert]) == 1
    monkeypatch.setenv("SCS_TOL", "-1")
    assert main(["verify", pert]) == 1
    capsys.readouterr()


# ---------------------------------------------------------------------------
# report

def test_report_command(tmp_path, cfr5, capsys):
    fam = str(tmp_path / "fam.json")
    assert main(["gen-scs", "c4", "--cfr", cfr5, "--insert", "0,5", "-o", fam]) == 0
    outdir = tmp_path / "rep"
    assert main(["report", "--family", fam, "--out", str(outdir)]) == 0
    capsys.readouterr()
    names = {
        "summary.json", "autocorr_0_0.csv", "crosscorr_intra_0_0x0_1.csv",
        "crosscorr_inter_0_0x1_0.csv", "spectrum_0_0.csv",
        "autocorrelation.png", "crosscorrelation.png", "spectrum.png",
    }
    assert {p.name for p in outdir.iterdir()} == names
    rec = json.loads((outdir / "summary.json").read_text())
    assert rec["L"] == 35 and rec["K"] == 4 and rec["M"] == 5
    assert rec["zcz_widths"] == [5, 5, 5, 5]
    assert rec["alphabet_used"] == 35
    assert abs(rec["theta_c"] - 7.0) < 1e-6
    for png in ("autocorrelation.png", "crosscorrelation.png", "spectrum.png"):
        assert (outdir / png).read_bytes()[:4] == b"\x89PNG"


def test_gen_scs_plot_renders_next_to_output(tmp_path, cfr5, capsys):
    fam = str(tmp_path / "fam.json")
    assert main(["gen-scs", "c2", "--cfr", cfr5, "--s0", "3",
                 "-o", fam, "--plot"]) == 0
    out = capsys.readouterr().out
    report_dir = tmp_path / "fam_report"
    assert (report_dir / "summary.json").exists()
    assert (report_dir / "spectrum.png").exists()
    # a one-member-per-set family has no intra-set crosscorrelation file
    assert not (report_dir / "crosscorr_intra_0_0x0_1.csv").exists()
    assert str(report_dir / "autocorrelation.png") in out


# ---------------------------------------------------------------------------
# Installed entry point.

def test_module_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "scskit", "gen-cfr", "--prime", "5"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "5 4"


def test_console_script_subprocess():
    proc = subprocess.run(["scs", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "gen-cfr" in proc.stdout
