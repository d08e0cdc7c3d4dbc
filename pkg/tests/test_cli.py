import json
import subprocess
import sys

import pytest

from gptlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def verdict(capsys, tmp_path, *argv, name="v.json"):
    code, out = run(capsys, *argv)
    path = tmp_path / name
    path.write_text(out)
    return code, json.loads(out), path


def test_compat_no_and_verify(capsys, tmp_path):
    code, v, path = verdict(capsys, tmp_path, "compat", "--preset", "square_in_square")
    assert code == 1 and v["answer"] is False and "farkas" in v and "time" not in v
    assert run(capsys, "verify", str(path)) == (0, "pass: Farkas witness verified\n")


def test_embed_yes_and_verify(capsys, tmp_path):
    code, v, path = verdict(capsys, tmp_path, "embed", "--preset", "square_in_square")
    assert code == 0 and v["certificate"]["type"] == "simplex-embedding"
    assert run(capsys, "verify", str(path))[0] == 0


@pytest.mark.parametrize("cmd,preset,answer", [
    ("ek-compat", "triangle_in_ngon(12)", True),
    ("prep-nc", "triangle_in_ngon(12)", True),
    ("compat", "triangle_in_ngon(12)", False),
    ("embed", "square", False),
    ("prep-nc", "square", False),
    ("embed", "simplex(3)", True),
    ("ek-compat", "bloch_inner(20)", False),
    ("embed", "bloch_inner(20)", False),
])
def test_decisions_round_trip(capsys, tmp_path, cmd, preset, answer):
    code, v, path = verdict(capsys, tmp_path, cmd, "--preset", preset)
    assert v["answer"] is answer and code == (0 if answer else 1)
    assert run(capsys, "verify", str(path))[0] == 0


def test_steer_flips_with_ambient(capsys, tmp_path):
    code, v, path = verdict(capsys, tmp_path, "steer", "--preset", "square_tetra_pr", "--ambient", "max")
    assert code == 1 and v["question"] == "LHS"
    assert run(capsys, "verify", str(path))[0] == 0
    code, v, path = verdict(capsys, tmp_path, "steer", "--preset", "square_tetra_pr", "--ambient", "min")
    assert code == 0 and v["certificate"]["type"] == "lhs"
    assert run(capsys, "verify", str(path))[0] == 0


def test_tampered_lhs_weights_fail(capsys, tmp_path):
    _, v, _ = verdict(capsys, tmp_path, "steer", "--preset", "square_tetra_pr", "--ambient", "min")
    w = v["certificate"]["weights"]
    w[0], w[-1] = w[-1], w[0]
    w[0] = "1/2" if w[0] != "1/2" else "1/3"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(v))
    code, out = run(capsys, "verify", str(path))
    assert code == 1 and out.startswith("fail")


def test_tampered_farkas_and_input_fail(capsys, tmp_path):
    _, v, _ = verdict(capsys, tmp_path, "compat", "--preset", "square_in_square")
    bad = json.loads(json.dumps(v))
    bad["farkas"]["multipliers"] = ["0"] * len(bad["farkas"]["multipliers"])
    p = tmp_path / "a.json"
    p.write_text(json.dumps(bad))
    assert run(capsys, "verify", str(p))[0] == 1
    bad = json.loads(json.dumps(v))
    bad["input"]["label"] = "something else"
    p.write_text(json.dumps(bad))
    code, out = run(capsys, "verify", str(p))
    assert code == 1 and "digest" in out
    bad = json.loads(json.dumps(v))
    bad["farkas"]["lp"]["constraints"][0]["rhs"] = "5"
    p.write_text(json.dumps(bad))
    code, out = run(capsys, "verify", str(p))
    assert code == 1 and "does not match" in out


def test_perturbed_marginal_fails(capsys, tmp_path):
    _, v, _ = verdict(capsys, tmp_path, "ek-compat", "--preset", "square_in_square")
    m = v["input"]["M"][0]["effects"]
    # moving weight between the two outcomes keeps the measurement valid but breaks the certificate
    m[0]["constant"], m[1]["constant"] = "3/5", "2/5"
    m[0]["linear"] = ["2/5", "0"]
    m[1]["linear"] = ["-2/5", "0"]
    from gptlab.serialize import digest
    v["digest"] = digest(v["input"])
    p = tmp_path / "b.json"
    p.write_text(json.dumps(v))
    code, out = run(capsys, "verify", str(p))
    assert code == 1 and "rejected" in out


def test_output_is_byte_identical(capsys):
    a = run(capsys, "compat", "--preset", "square_in_square")[1]
    b = run(capsys, "compat", "--preset", "square_in_square")[1]
    assert a == b


def test_timing_flag(capsys):
    v = json.loads(run(capsys, "embed", "--preset", "square_in_square", "--timing")[1])
    assert isinstance(v["time"], float)


def test_file_and_stdin_input(capsys, tmp_path, monkeypatch):
    code, out = run(capsys, "preset", "square_in_square")
    assert code == 0
    p = tmp_path / "t.json"
    p.write_text(out)
    a = run(capsys, "embed", str(p))
    import io
    monkeypatch.setattr(sys, "stdin", io.StringIO(out))
    b = run(capsys, "embed", "-")
    assert a == b and a[0] == 0


def test_errors_exit_two(capsys):
    assert main(["embed", "--preset", "no_such_thing"]) == 2
    assert main(["embed"]) == 2
    assert main(["embed", "--preset", "square(3)"]) == 2


def test_tensor_and_chsh(capsys):
    code, out = run(capsys, "tensor", "square", "simplex(4)")
    v = json.loads(out)
    assert code == 0 and v["answer"] is True and v["min_vertices"] == v["max_vertices"] == 16
    code, out = run(capsys, "tensor", "square", "square")
    assert code == 1 and json.loads(out)["answer"] is False
    code, out = run(capsys, "chsh", "--preset", "square_tetra_pr", "--ambient", "max")
    assert code == 0 and json.loads(out) == {"question": "chsh", "value": "4"}


def test_crosscheck_commands(capsys, tmp_path):
    code, v, path = verdict(capsys, tmp_path, "crosscheck", "--preset", "square_tetra_pr", "--ambient", "max")
    assert code == 1 and v["agree"] is True
    assert run(capsys, "verify", str(path))[0] == 0
    code, v, path = verdict(capsys, tmp_path, "crosscheck", "--preset", "square_tetra_pr", "--ambient", "min")
    assert code == 2 and "inapplicable" in v
    assert run(capsys, "verify", str(path))[0] == 1
    code, out = run(capsys, "crosscheck", "--random", "4", "--seed", "3")
    s = json.loads(out)
    assert code == 0 and s["instances"] == s["agree"] == 4


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "gptlab", "embed", "--preset", "simplex(3)"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["answer"] is True
