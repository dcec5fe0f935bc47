import os

import pytest

from hopfcyclic.specfile import (parse_spec, ParseError, UnresolvedName,
                                 DimensionMismatch)
from hopfcyclic.fixtures import fixture_file_texts
from hopfcyclic.hopf import validate_hopf
from hopfcyclic.cli import main


MINIMAL = """
space H = 1
algebra H
  unit = 1*1
  mul 1 1 = 1*1
coalgebra H
  counit 1 = 1
  comul 1 = 1*1|1
hopf H
  antipode 1 = 1*1
"""


# -- parsing -------------------------------------------------------------------

def test_minimal_file_parses():
    spec = parse_spec(MINIMAL)
    assert "H" in spec.hopfs
    assert validate_hopf(spec.hopfs["H"]).ok

def test_fixture_files_parse_and_validate():
    for name, text in fixture_file_texts().items():
        spec = parse_spec(text)
        for hname, h in spec.hopfs.items():
            assert validate_hopf(h).ok, (name, hname)

def test_round_trip_all_fixtures():
    for name, text in fixture_file_texts().items():
        spec = parse_spec(text)
        canon = spec.to_text()
        again = parse_spec(canon)
        assert again.to_text() == canon, name

def test_unresolved_label_reported_with_line():
    bad = MINIMAL + "space A = a\nalgebra A\n  unit = 1*a\n  mul a a = 1*zz\n"
    with pytest.raises(UnresolvedName) as exc:
        parse_spec(bad)
    assert exc.value.line_no is not None

def test_dimension_mismatch():
    bad = MINIMAL + "character eps on H = 1 1\n"
    with pytest.raises(DimensionMismatch):
        parse_spec(bad)

def test_parse_error_on_garbage():
    with pytest.raises(ParseError):
        parse_spec("frobnicate X = 1\n")

def test_structure_line_outside_block():
    with pytest.raises(ParseError):
        parse_spec("mul a b = 1*c\n")


# -- CLI -----------------------------------------------------------------------

def write_fixtures(tmp_path):
    d = tmp_path / "fx"
    d.mkdir(exist_ok=True)
    for name, text in fixture_file_texts().items():
        (d / name).write_text(text)
    return d

def run_cli(args, capsys):
    code = main([str(a) for a in args])
    out = capsys.readouterr().out
    return code, out

def test_cli_validate_h4_exit_zero(tmp_path, capsys):
    d = write_fixtures(tmp_path)
    code, out = run_cli(["validate", d / "h4.hcy"], capsys)
    assert code == 0
    assert "VIOLATIONS" not in out

def test_cli_identities_corrupted_data_nonzero(tmp_path, capsys):
    d = write_fixtures(tmp_path)
    text = (d / "kz2.hcy").read_text().replace("antipode g = 1*g", "antipode g = 1*e")
    bad = d / "bad.hcy"
    bad.write_text(text)
    code, out = run_cli(["validate", bad], capsys)
    assert code == 1
    code, out = run_cli(["identities", bad, "--max-degree", "2",
                         "--out", str(d / "r.txt")], capsys)
    assert code == 1

def test_cli_cohomology_kz2_table(tmp_path, capsys):
    d = write_fixtures(tmp_path)
    os.chdir(tmp_path)
    code, out = run_cli(["cohomology", d / "kz2.hcy", "--max-degree", "6"], capsys)
    assert code == 0
    sect = out.split("== cohomology hopf_triv")[1].split("==")[0]
    hc = [l for l in sect.splitlines() if l.startswith("HC") and l.endswith("trusted")
          and not l.endswith("untrusted")]
    assert [l.split()[2] for l in hc] == ["1", "0", "1", "0", "1"]

def test_cli_parse_error_exit_two(tmp_path, capsys):
    p = tmp_path / "garbage.hcy"
    p.write_text("frobnicate\n")
    assert main([ "validate", str(p)]) == 2

def test_cli_cup_command(tmp_path, capsys):
    d = write_fixtures(tmp_path)
    os.chdir(tmp_path)
    code, out = run_cli(["cup", d / "kz2.hcy", "--kind", "coalgebra", "--p", "0", "--q", "2"], capsys)
    assert code == 0
    assert "b-closed=True" in out
    assert "explicit-match=True" in out
    code, out = run_cli(["cup", d / "kz2.hcy", "--kind", "traces", "--p", "0", "--q", "2"], capsys)
    assert code == 0
    assert "shuffle" in out

def test_cli_fixtures_command(tmp_path, capsys):
    os.chdir(tmp_path)
    code, out = run_cli(["fixtures", "--out", str(tmp_path / "fx2")], capsys)
    assert code == 0
    assert sorted(os.listdir(tmp_path / "fx2")) == sorted(fixture_file_texts())

def test_cache_round_trip_identical(tmp_path, capsys):
    from hopfcyclic.cli import build_declared_complex
    from hopfcyclic.specfile import parse_spec as ps
    d = write_fixtures(tmp_path)
    os.chdir(tmp_path)
    spec = ps((d / "kz2.hcy").read_text())
    text = spec.to_text()
    fresh, how1 = build_declared_complex(spec, text, "hopf_triv", 3,
                                         cache_dir=str(tmp_path / "cache"))
    cached, how2 = build_declared_complex(spec, text, "hopf_triv", 3,
                                          cache_dir=str(tmp_path / "cache"))
    rebuilt, how3 = build_declared_complex(spec, text, "hopf_triv", 3, no_cache=True,
                                           cache_dir=str(tmp_path / "cache"))
    assert how2 == "cached" and how3 == "built"
    for a, b in ((fresh, cached), (fresh, rebuilt)):
        assert a.dims() == b.dims()
        for n in range(a.N + 1):
            for i in range(n + 2):
                assert a.face(n, i) == b.face(n, i)
        for n in range(a.top + 1):
            assert a.tau(n) == b.tau(n)
        for n in range(1, a.top + 1):
            for j in range(n):
                assert a.degen(n, j) == b.degen(n, j)

def test_audit_byte_identical(tmp_path, capsys):
    d = write_fixtures(tmp_path)
    os.chdir(tmp_path)
    code1, out1 = run_cli(["audit", d / "trivial.hcy", "--max-degree", "3"], capsys)
    code2, out2 = run_cli(["audit", d / "trivial.hcy", "--max-degree", "3"], capsys)
    assert code1 == code2 == 0
    assert out1 == out2

PERMUTED_KZ2 = """
space H = g e
algebra H
  unit = 1*e
  mul e e = 1*e
  mul e g = 1*g
  mul g e = 1*g
  mul g g = 1*e
coalgebra H
  counit e = 1
  counit g = 1
  comul e = 1*e|e
  comul g = 1*g|g
hopf H
  antipode e = 1*e
  antipode g = 1*g
character eps on H = 1 1
grouplike one in H = 1*e
coefficients triv = mpi(eps, one)
complex hopf_triv = hopf(H, triv)
"""

def test_basis_permutation_same_dimension_table(tmp_path, capsys):
    d = write_fixtures(tmp_path)
    os.chdir(tmp_path)
    p = tmp_path / "kz2_permuted.hcy"
    p.write_text(PERMUTED_KZ2)
    code1, out1 = run_cli(["cohomology", d / "kz2.hcy", "--max-degree", "4", "--no-cache"], capsys)
    code2, out2 = run_cli(["cohomology", p, "--max-degree", "4", "--no-cache"], capsys)
    assert code1 == code2 == 0
    table1 = [l for l in out1.split("== cohomology hopf_triv")[1].split("==")[0].splitlines() if l]
    table2 = [l for l in out2.split("== cohomology hopf_triv")[1].split("==")[0].splitlines() if l]
    assert table1 == table2
