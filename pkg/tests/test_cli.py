import subprocess
import sys

import pytest

from polychrome.cli import main
from polychrome.colorings import catalog, format_coloring, parse_coloring
from polychrome.verify import TargetSpec, parse_color_table, verify_concrete


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_closed_bound(capsys):
    assert run(capsys, "bound", "--closed", "--d", "4")[:2] == (0, "6\n")


def test_pig_bound_csv(capsys):
    code, out, _ = run(capsys, "bound", "--pig", "--d", "3", "--puncture", "vertex:[111]", "--format", "csv")
    assert code == 0
    assert out == "d,i,puncture,kind,value\n3,1,vertex,pig,3\n"


def test_verify_residue_exit_codes(capsys):
    code, out, _ = run(capsys, "verify-residue", "--target", "d=4,i=1,puncture=vertex", "--catalog", "p4mv")
    assert code == 0 and out.startswith("verdict: polychromatic")
    code, out, _ = run(capsys, "verify-residue", "--target", "d=4,i=1,puncture=vertex", "--catalog", "p4me")
    assert code == 1 and "witness-missing" in out


def test_verify_concrete(capsys, tmp_path):
    spec = tmp_path / "c.txt"
    spec.write_text(format_coloring(catalog("p233")))
    code, out, _ = run(capsys, "verify-concrete", "--coloring", str(spec), "--target", "d=3,i=2", "--n", "5")
    assert code == 0 and "instances: 40" in out


def test_table_csv_reparses(capsys):
    code, out, _ = run(capsys, "table", "--catalog", "p24", "--target", "d=4,i=2")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 28
    table = parse_color_table(out, TargetSpec(4, 2))
    assert all(frozenset().union(*sets) == frozenset(range(5)) for _, _, _, sets in table.rows)


def test_search_simple_and_solution_files(capsys, tmp_path):
    code, out, _ = run(
        capsys, "search-simple", "--target", "d=3,i=2", "--r", "4", "--window", "2",
        "--fix", "000=0,100=1,010=2,001=3", "--mode", "all", "--solutions-dir", str(tmp_path),
    )
    assert code == 0 and "solutions: 5" in out
    files = sorted(tmp_path.iterdir())
    assert len(files) == 5
    sol = parse_coloring(files[0].read_text())
    assert verify_concrete(4, TargetSpec(3, 2), sol).polychromatic


def test_search_refute(capsys):
    code, out, _ = run(capsys, "search-simple", "--target", "d=3,i=2", "--r", "4", "--n", "5", "--mode", "refute")
    assert code == 0 and "status: UNSAT" in out
    code, _, _ = run(capsys, "search-simple", "--target", "d=3,i=2", "--r", "4", "--n", "5")
    assert code == 1


def test_search_budget_exit(capsys):
    code, out, _ = run(capsys, "search-simple", "--target", "d=3,i=2", "--r", "4", "--n", "5", "--max-nodes", "2")
    assert code == 3 and "EXHAUSTED-ENUMERATION" in out


def test_search_concrete(capsys):
    code, out, _ = run(capsys, "search-concrete", "--target", "d=2,i=1", "--r", "2", "--n", "2")
    assert code == 0 and "[*0] -> " in out


def test_shapes_outputs(capsys, tmp_path):
    code, out, _ = run(capsys, "shapes", "--gaps", "3,2,3,2,0")
    assert code == 0 and "origin=3,7 dims=1,4" in out
    svg = tmp_path / "s.svg"
    assert run(capsys, "shapes", "--gaps", "0,0,0,0", "--format", "svg", "--out", str(svg))[0] == 0
    assert svg.read_text().lstrip().startswith("<?xml")
    rep = tmp_path / "rep.txt"
    code, _, _ = run(capsys, "shapes", "--gaps", "0,1,0", "--catalog", "pd_lower", "--params", "d=2",
                     "--format", "report", "--out", str(rep))
    assert code == 0
    text = rep.read_text()
    assert text.startswith("# polychrome ") and "figure: rep.svg" in text
    assert (tmp_path / "rep.svg").exists()


def test_shapes_svg_needs_edges(capsys):
    code, _, err = run(capsys, "shapes", "--gaps", "0,0,0", "--i", "2", "--format", "svg")
    assert code == 2 and "--i" in err


def test_catalog_listing(capsys):
    code, out, _ = run(capsys, "catalog", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "name,params,summary" and len(out.splitlines()) == 8


@pytest.mark.parametrize("argv,flag", [
    (["verify-residue", "--catalog", "qmv", "--params", "k=3,z=1"], "--params"),
    (["verify-residue", "--catalog", "nope"], "--catalog"),
    (["verify-residue"], "--catalog"),
    (["verify-residue", "--catalog", "p233", "--coloring", "x.txt"], "--coloring"),
    (["verify-residue", "--catalog", "p233", "--target", "d=2,i=5"], "--target"),
    (["verify-concrete", "--catalog", "p233"], "--n"),
    (["search-simple", "--target", "d=3,i=2", "--r", "4", "--window", "0"], "--window"),
    (["bound", "--pig", "--d", "3", "--gaps", "1,2"], "--gaps"),
])
def test_usage_errors_name_the_flag(capsys, argv, flag):
    code, _, err = run(capsys, *argv)
    assert code == 2 and flag in err


def test_argparse_errors_exit_2():
    proc = subprocess.run([sys.executable, "-m", "polychrome", "bound"], capture_output=True, text=True)
    assert proc.returncode == 2


def test_outputs_are_reproducible(capsys):
    argv = ["search-simple", "--target", "d=3,i=2", "--r", "3", "--window", "3", "--mode", "all", "--seed", "4"]
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first
    a = run(capsys, "table", "--catalog", "p233")[1]
    assert run(capsys, "table", "--catalog", "p233")[1] == a


def test_report_header(capsys):
    code, out, _ = run(capsys, "verify-residue", "--catalog", "p233", "--wlog", "--format", "report")
    assert code == 0
    head = out.splitlines()[:2]
    assert head[0].startswith("# polychrome ")
    assert "catalog=p233" in head[1] and "wlog=True" in head[1]
