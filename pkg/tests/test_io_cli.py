import io
import json

import pytest

import shapes
from orbitor import cli
from orbitor.io import (SchemaError, canonical_dumps, complex_from_dict, complex_to_dict,
                        pair_from_dict, pair_to_dict, poset_to_dict, read_json_arg,
                        weights_from_dict)


def run(argv):
    inv = cli.parse_invocation(argv)
    buf = io.StringIO()
    code = cli.execute(inv, buf)
    return code, buf.getvalue()


@pytest.fixture
def cube_json(tmp_path, cube):
    path = tmp_path / "cube.json"
    path.write_text(canonical_dumps(pair_to_dict(cube)))
    return str(path)


@pytest.mark.parametrize("Q", [shapes.cube(), shapes.prism(), shapes.disconnected_poset()])
def test_canonical_round_trip(Q):
    text = canonical_dumps(complex_to_dict(Q))
    again = canonical_dumps(complex_to_dict(complex_from_dict(json.loads(text))))
    assert text == again


def test_pair_round_trip(cube):
    text = canonical_dumps(pair_to_dict(cube))
    assert canonical_dumps(pair_to_dict(pair_from_dict(json.loads(text)))) == text


def test_poset_export_loads():
    Q = complex_from_dict(poset_to_dict(shapes.cube()))
    assert Q.mode == "poset" and len(Q.faces) == 27


def test_schema_errors():
    with pytest.raises(SchemaError):
        complex_from_dict({"dimension": 2})
    with pytest.raises(SchemaError):
        pair_from_dict(complex_to_dict(shapes.square()))
    with pytest.raises(SchemaError):
        read_json_arg("{not json")
    with pytest.raises(SchemaError):
        weights_from_dict({"d": 2})


def test_analyze_toric_exit_codes(cube_json):
    code, out = run(["analyze-toric", "--input", cube_json, "--format", "json"])
    assert code == 0 and json.loads(out)["global"] == "torsion-free-even"
    code, out = run(["analyze-toric", "--input", cube_json, "--check", "bss"])
    assert code == 1 and "B_2" in out and "v126" in out


def test_text_and_json_agree(cube_json):
    _, js = run(["analyze-toric", "--input", cube_json, "--format", "json", "--check", "all"])
    _, text = run(["analyze-toric", "--input", cube_json, "--check", "all"])
    d = json.loads(js)
    for p, v in d["verdicts"].items():
        assert f"p={p}: {v['status']}" in text
    assert f"bss condition: {d['bss']['status']}" in text


def test_output_is_deterministic(cube_json):
    argv = ["analyze-toric", "--input", cube_json, "--format", "json", "--check", "all"]
    assert run(argv) == run(argv)


def test_induced_face_output(cube_json):
    code, out = run(["analyze-toric", "--input", cube_json, "--format", "json", "--face", "F6",
                     "--basis-hint", "[[1,0,0],[2,1,0],[0,0,1]]"])
    d = json.loads(out)["induced"]["F6"]
    assert d["lambda"] == {"F1": [-1, 1], "F2": [-1, 0], "F3": [0, 1], "F4": [-4, 1]}
    assert d["g"]["v236"] == 1


def test_grassmann_command():
    code, out = run(["grassmann", "--d", "2", "--n", "4", "--w", "1,1,1,1", "--r", "1",
                     "--format", "json"])
    assert code == 1 and json.loads(out)["inconclusive"] == [3]
    code, out = run(["grassmann", "--input", '{"d":2,"n":4,"w":[0,0,0,0],"r":1}', "--dot"])
    assert code == 0 and "digraph" in out


def test_qcw_command():
    cells = '{"cells":[{"dim":0,"order":1},{"dim":4,"order":3,"degree":0}]}'
    code, out = run(["qcw", "--input", cells, "--prime", "3", "--format", "json"])
    assert code == 1 and list(json.loads(out)["verdicts"]) == ["3"]
    code, _ = run(["qcw", "--input", cells, "--prime", "2"])
    assert code == 0


def test_retract_and_present(cube_json):
    code, out = run(["retract", "--input", cube_json, "--limit", "2", "--format", "json"])
    assert code == 0 and len(json.loads(out)["sequences"]) == 2
    code, out = run(["retract", "--input", cube_json, "--order",
                     "v235,v236,v345,v125,v346,v145,v126,v146"])
    assert code == 0 and "v146 in v146" in out
    code, out = run(["present", "--input", cube_json])
    assert code == 0 and "I = (x1*x3, x2*x4, x5*x6)" in out


def test_input_errors():
    assert cli.main(["analyze-toric", "--input", "{bad"]) == 2
    assert cli.main(["bogus"]) == 2
    assert cli.main([]) == 2
    assert cli.main(["qcw", "--input", '{"cells":[]}', "--prime", "4"]) == 2
    code, out = run(["analyze-toric", "--format", "json", "--input",
                     json.dumps({**complex_to_dict(shapes.square()),
                                 "lambda": {"F1": [1, 0], "F2": [1, 0], "F3": [1, 0], "F4": [0, 1]}})])
    assert code == 2 and "error" in json.loads(out)
