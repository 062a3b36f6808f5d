import json

import pytest

from ordsemi.chains import ChainPair, InvalidInstance
from ordsemi.cli import main, parse_instance

WORKED = ["n=9", "range=0,2,4,6,8"]
WORKED_IMAGE = "0,4,0,8,4,4,4,2,4"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_instance_forms(tmp_path):
    assert parse_instance("n=5 range=1,3") == ChainPair.of(5, [1, 3])
    assert parse_instance("size=5 range=1,3") == ChainPair.of(5, [1, 3])
    assert parse_instance('{"size": 5, "range": [1, 3]}') == ChainPair.of(5, [1, 3])
    assert parse_instance("chain=a,b,c,d range=d,b") == ChainPair.of(4, [1, 3])
    f = tmp_path / "inst.json"
    f.write_text(json.dumps({"chain": [10, 20, 30], "range": [20, 30]}))
    assert parse_instance(str(f)) == ChainPair.of(3, [1, 2])
    for bad in ("n=5", "n=five range=1", "n=3 range=3", "n=3 range=a", "chain=a,a range=a",
                "chain=a,b range=c", "bogus"):
        with pytest.raises(InvalidInstance):
            parse_instance(bad)


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "n=5", "range=1,3")
    assert code == 0
    assert out.count("#") == 6 and out.strip().endswith("count: 6")
    assert "( 1 1 1 1 1 )" in out
    code, out, _ = run(capsys, "enumerate", *WORKED, "--count-only")
    assert (code, out.strip()) == (0, "715")
    code, out, _ = run(capsys, "enumerate", "n=4", "range=2", "--count-only")
    assert out.strip() == "1"
    code, out, _ = run(capsys, "enumerate", "n=5", "range=1,3", "--json")
    data = json.loads(out)
    assert data["count"] == 6 and data["images"][0] == [1, 1, 1, 1, 1]


def test_cap_gives_exit_two(capsys, monkeypatch):
    code, _, err = run(capsys, "enumerate", *WORKED, "--cap", "100")
    assert code == 2 and "cap" in err
    monkeypatch.setenv("ORDSEMI_CAP", "10")
    assert run(capsys, "enumerate", *WORKED, "--count-only")[0] == 2
    assert run(capsys, "cayley", *WORKED)[0] == 2


def test_adjusted(capsys):
    code, out, _ = run(capsys, "adjusted", "n=6", "range=1,4")
    assert (code, out.strip()) == (0, "[{0}] 1 [{2,3}] 4 [{5}]")
    code, out, _ = run(capsys, "adjusted", "n=6", "range=1,4", "--json")
    assert json.loads(out)["signature"] == [1, 2, 1]


def test_graph_worked_example(capsys, tmp_path):
    code, out, _ = run(capsys, "graph", *WORKED, "--image", WORKED_IMAGE, "--json")
    data = json.loads(out)
    assert code == 0 and data["components"] == 4 and not data["order_preserving"]
    dot = tmp_path / "g.dot"
    code, out, _ = run(capsys, "graph", *WORKED, "--image", WORKED_IMAGE, "--dot", str(dot))
    assert code == 0 and out.strip() == "components: 4"
    assert dot.read_text().startswith("digraph")
    code, out, _ = run(capsys, "graph", *WORKED, "--image", "4,4,4,4,4,4,4,4,4", "--json")
    assert json.loads(out)["components"] == 1


def test_graph_invalid_maps(capsys):
    # 3 is outside the range
    assert run(capsys, "graph", *WORKED, "--image", "0,3,0,8,4,4,4,2,4")[0] == 3
    assert run(capsys, "graph", *WORKED, "--image", "0,4")[0] == 3
    assert run(capsys, "graph", *WORKED, "--image", WORKED_IMAGE, "--monotone")[0] == 3
    assert run(capsys, "graph", *WORKED, "--image", "0,0,2,2,4,4,6,6,8", "--monotone")[0] == 0


def test_invalid_input_exit_three(capsys):
    assert run(capsys, "enumerate", "n=3", "range=2,1")[0] == 3
    assert run(capsys, "decide", "n=3 range=1,2", "n=3")[0] == 3
    assert run(capsys, "enumerate", "/no/such/file.json")[0] == 3
    with pytest.raises(SystemExit) as exc:
        main(["enumerate"])
    assert exc.value.code == 3
    capsys.readouterr()


def test_decide_mirror(capsys):
    code, out, _ = run(capsys, "decide", "n=3 range=1,2", "n=3 range=0,1")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "isomorphic" and data["mirror_clause_used"] is True


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "n=3 range=0,1", "n=3 range=0,2")
    assert code == 0 and json.loads(out)["isomorphic"] is False
    code, out, _ = run(capsys, "oracle", "n=3 range=1,2", "n=3 range=0,1")
    assert json.loads(out)["isomorphic"] is True
    code, _, err = run(capsys, "oracle", "n=5 range=0,1,2,3,4", "n=5 range=0,1,2,3,4", "--budget", "0")
    assert code == 2 and "budget" in err


def test_verify_sweep(capsys):
    code, out, _ = run(capsys, "verify", "--max-size", "5")
    assert code == 0
    assert "0 mismatches" in out and "0 skipped" in out
    code, out, _ = run(capsys, "verify", "--max-size", "4", "--json")
    data = json.loads(out)
    assert data["clean"] and "outcomes" not in data
    code, _, _ = run(capsys, "verify", "--max-size", "4", "--budget", "0")
    assert code == 2


def test_verify_instance_file(capsys, tmp_path):
    f = tmp_path / "fam.json"
    f.write_text(json.dumps([{"size": 3, "range": [1, 2]}, "n=3 range=0,1", "n=3 range=0,2"]))
    code, out, _ = run(capsys, "verify", "--instances", str(f), "--json", "--full")
    data = json.loads(out)
    assert code == 0 and data["pairs"] == 9 and len(data["outcomes"]) == 9


def test_verify_witness_file(capsys, tmp_path):
    code, out, _ = run(capsys, "oracle", "n=3 range=1,2", "n=3 range=0,1")
    wit = tmp_path / "w.json"
    wit.write_text(out)
    code, out, _ = run(capsys, "verify", "--witness", str(wit), "--a", "n=3 range=1,2", "--b", "n=3 range=0,1")
    assert code == 0 and json.loads(out)["verified"] is True
    wit.write_text(json.dumps({"mapping": [0, 1, 2, 3]}))
    code, out, _ = run(capsys, "verify", "--witness", str(wit), "--a", "n=3 range=1,2", "--b", "n=3 range=0,1")
    assert code == 1 and json.loads(out)["verified"] is False
    assert run(capsys, "verify", "--witness", str(wit))[0] == 3


def test_kclasses(capsys):
    code, out, _ = run(capsys, "kclasses", "n=5", "range=1,3", "--json")
    data = json.loads(out)
    assert code == 0
    assert sorted(r["shape"] for r in data["classes"]) == ["λ1", "λ2", "λ3", "λ4", "λ5"]
    assert data["class_sizes"]["observed"] == [1, 1, 2, 1, 1] and data["class_sizes"]["agree"]
    code, out, _ = run(capsys, "kclasses", "n=4", "range=0,1,2,3", "--json")
    assert {r["size"] for r in json.loads(out)["classes"]} == {1}
    code, out, _ = run(capsys, "kclasses", "n=6", "range=1,4")
    assert code == 0 and "λ3 size   3" in out


def test_cayley_json(capsys):
    code, out, _ = run(capsys, "cayley", "n=3", "range=1,2")
    data = json.loads(out)
    assert code == 0 and data["order"] == 4 and len(data["table"]) == 4


def test_outputs_are_deterministic(capsys):
    first = run(capsys, "verify", "--max-size", "4", "--json", "--full")[1]
    again = run(capsys, "verify", "--max-size", "4", "--json", "--full")[1]
    assert first == again


def test_labelled_json_normalises(capsys):
    code, out, _ = run(capsys, "adjusted", '{"chain": ["a", "b", "c"], "range": ["b", "c"]}', "--json")
    assert json.loads(out)["pair"] == {"size": 3, "range": [1, 2]}
