import json

import pytest

from mcsg import cli, core, oracle
from mcsg.render import RenderStyle, render_svg


@pytest.fixture
def inst_file(tmp_path):
    inst = core.generate_random(6, 2, 0.5, 3)
    path = tmp_path / "inst.json"
    path.write_text(core.instance_to_json(inst))
    return str(path), inst


def run(*args):
    return cli.main(list(args))


def test_solve_auto_exact2(inst_file, tmp_path, capsys):
    path, inst = inst_file
    out = tmp_path / "sol.json"
    assert run("solve", "--input", path, "--output", str(out)) == 0
    doc = json.loads(out.read_text())
    assert doc["algorithm"] == "exact2"
    assert doc["ratio_bound"] == 1.0
    assert doc["cost"] == pytest.approx(oracle.brute_force(inst).cost, rel=1e-9)


def test_solve_auto_collinear(tmp_path):
    inst = core.generate_collinear(7, 3, 0.4, 1)
    path = tmp_path / "c.json"
    path.write_text(core.instance_to_json(inst))
    out = tmp_path / "sol.json"
    assert run("solve", "--input", str(path), "--output", str(out)) == 0
    doc = json.loads(out.read_text())
    assert doc["algorithm"] == "dp"
    assert doc["ratio_bound"] == 1.0


def test_solve_auto_a2_for_planar_k3(tmp_path):
    inst = core.generate_random(6, 3, 0.5, 4)
    path = tmp_path / "p.json"
    path.write_text(core.instance_to_json(inst))
    out = tmp_path / "sol.json"
    assert run("solve", "--input", str(path), "--output", str(out)) == 0
    doc = json.loads(out.read_text())
    assert doc["algorithm"] == "a2"
    assert doc["ratio_bound"] == pytest.approx(2 - 1 / (3 + 2 * 1.21))


def test_exit_codes(tmp_path):
    big = core.generate_random(12, 2, 1.0, 0)
    path = tmp_path / "big.json"
    path.write_text(core.instance_to_json(big))
    assert run("solve", "--input", str(path), "--mode", "exact2") == 2
    assert run("solve", "--input", str(tmp_path / "missing.json")) == 1
    assert run("nonsense") == 1


def test_gen_and_bench(tmp_path, capsys):
    out = tmp_path / "g.json"
    assert run("gen", "random", "--n", "5", "--k", "3", "--fraction", "0.4",
               "--seed", "7", "--output", str(out)) == 0
    inst = core.load_instance(out.read_text())
    assert inst.n == 5 and inst.k == 3
    csv_out = tmp_path / "bench.csv"
    assert run("bench", "--family", "random", "--algos", "a1", "--seeds", "5",
               "--out", str(csv_out)) == 0
    header = csv_out.read_text().splitlines()[0]
    assert header == "seed,n,k,opt,algo,cost,ratio"


def test_gen_gadget_with_witness(tmp_path, capsys):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p mcnf 2 1\n+ 1 2\n")
    assign = tmp_path / "a.txt"
    assign.write_text("1 0\n")
    inst_out = tmp_path / "gadget.json"
    wit_out = tmp_path / "wit.json"
    assert run("gen", "gadget", "--cnf", str(cnf), "--out", str(inst_out),
               "--witness", str(assign), "--witness-out", str(wit_out)) == 0
    meta = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert meta["r"] == 2 and meta["active_points"] == 26
    wit = core.solution_from_json(wit_out.read_text())
    assert wit.cost == pytest.approx(meta["W"], rel=1e-9)


def test_exact2_with_merge_groups(tmp_path):
    inst = core.generate_random(6, 3, 0.6, 9)
    path = tmp_path / "i.json"
    path.write_text(core.instance_to_json(inst))
    groups = tmp_path / "g.json"
    groups.write_text(json.dumps([[0, 1]]))
    out = tmp_path / "s.json"
    assert run("exact2", "--input", str(path), "--pair", "1,3",
               "--merge-groups", str(groups), "--output", str(out)) == 0


def test_render_deterministic_and_colors(tmp_path):
    inst = core.Instance(3, [(0, 0, {1, 2}), (1, 0, {1, 2}), (2, 0, {3})])
    sol = core.make_solution(inst, [(0, 1)], "x")
    a = render_svg(inst, sol, RenderStyle())
    b = render_svg(inst, sol, RenderStyle())
    assert a == b
    text = a.decode()
    assert 'stroke="purple"' in text  # {r,b} edge
    assert text.count("<circle") == 3
    empty = render_svg(inst, core.make_solution(inst, [], "x"))
    assert b"<line" not in empty


def test_render_large_k_palette():
    inst = core.generate_random(5, 5, 0.4, 2)
    data = render_svg(inst)
    assert b"hsl(" in data


def test_prune_output(inst_file, capsys):
    path, _ = inst_file
    assert run("prune", "--input", path) == 0
    out = capsys.readouterr().out
    assert out.startswith("color 1:")
