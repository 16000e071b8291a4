import json

import jsonschema
import pytest

from bellframe import __version__, gallery
from bellframe.cli import REPORT_SCHEMA, main
from bellframe.suites import verdict_matrix

MODELS = [n for n, e in gallery.ENTRIES.items() if e.kind == "model"]


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def emit(capsys, tmp_path, name):
    path = tmp_path / f"{name}.json"
    assert run(capsys, "gallery", "emit", name, path)[0] == 0
    return path


@pytest.mark.parametrize("name", MODELS)
def test_check_json_report(name, capsys, tmp_path):
    path = emit(capsys, tmp_path, name)
    code, out, _ = run(capsys, "check", path, "--format", "json")
    report = json.loads(out)
    jsonschema.validate(report, REPORT_SCHEMA)
    expected = gallery.ENTRIES[name].expected
    got = {r["condition"]: r["verdict"] for r in report["reports"]}
    assert got == {k: v for k, v in expected.items() if k != "chsh"}
    assert code == (1 if "fail" in got.values() else 0)
    assert report["model_digest"] == gallery.build(name).digest()
    if "chsh" in expected:
        code, out, _ = run(capsys, "chsh", path, "--format", "json")
        report = json.loads(out)
        jsonschema.validate(report, REPORT_SCHEMA)
        assert code == 0 and report["chsh"]["value"] == expected["chsh"]


def test_emitted_model_checks_like_the_original(capsys, tmp_path):
    from bellframe.modelfile import load
    path = emit(capsys, tmp_path, "backyard_pingpong")
    assert verdict_matrix(load(path)) == verdict_matrix(gallery.build("backyard_pingpong"))


def test_check_text_output(capsys, tmp_path):
    path = emit(capsys, tmp_path, "backyard_pingpong")
    code, out, _ = run(capsys, "check", path, "--suite", "howard", "--max-witnesses", "1")
    assert code == 1
    assert "closure added regions:" in out
    assert "separability_of_states: fail" in out
    assert "more witnesses" in out
    code, out, _ = run(capsys, "check", path, "--suite", "separability")
    assert code == 0 and out.rstrip().endswith("summary: pass")


def test_check_past_override(capsys, tmp_path):
    path = emit(capsys, tmp_path, "simpsons_slice")
    assert run(capsys, "check", path, "--suite", "bell")[0] == 0
    assert run(capsys, "check", path, "--suite", "bell", "--past", "slice:S")[0] == 1
    assert run(capsys, "check", path, "--suite", "bell", "--past", "slice:T")[0] == 2


def test_check_skips_and_errors(capsys, tmp_path):
    path = emit(capsys, tmp_path, "markov_chain")
    code, out, _ = run(capsys, "check", path)
    assert code == 0 and "skipped bell" in out
    assert run(capsys, "check", path, "--suite", "bell")[0] == 2
    assert run(capsys, "check", tmp_path / "none.json")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{\"points\": []")
    assert run(capsys, "check", bad)[0] == 2


def test_chsh_behaviour_file(capsys, tmp_path):
    path = tmp_path / "t.txt"
    assert run(capsys, "gallery", "emit", "tsirelson_approx", path)[0] == 0
    code, out, _ = run(capsys, "chsh", path)
    assert code == 0 and "NotLocal (chsh)" in out and "(2.828" in out
    code, out, _ = run(capsys, "chsh", path, "--format", "json")
    report = json.loads(out)
    jsonschema.validate(report, REPORT_SCHEMA)
    assert report["chsh"]["local"] is False and len(report["chsh"]["certificate"]) == 16
    garbage = tmp_path / "g.txt"
    garbage.write_text("0 0 1\n")
    assert run(capsys, "chsh", garbage)[0] == 2


def test_chsh_local_model(capsys, tmp_path):
    path = emit(capsys, tmp_path, "deterministic_common_cause")
    code, out, _ = run(capsys, "chsh", path)
    assert code == 0 and "local polytope: member" in out
    report = json.loads(run(capsys, "chsh", path, "--format", "json")[1])
    jsonschema.validate(report, REPORT_SCHEMA)
    assert report["chsh"]["local"] is True


def test_conjecture_command(capsys, tmp_path):
    code, out, _ = run(capsys, "conjecture", "--trials", "0")
    assert code == 0 and "no counterexample in 0 trials" in out
    code, out, _ = run(capsys, "conjecture", "--trials", "50", "--seed", "3", "--format", "json")
    report = json.loads(out)
    jsonschema.validate(report, REPORT_SCHEMA)
    assert code == 0 and report["conjecture"]["trials"] == 50
    with pytest.raises(SystemExit) as exc:
        main(["conjecture", "--max-points", "0"])
    assert exc.value.code == 2


def test_conjecture_found_exits_3(capsys, tmp_path, divergent_search):
    code, out, _ = run(capsys, "conjecture", "--trials", "20", "--out", tmp_path)
    assert code == 3 and "counterexample trial" in out
    assert list(tmp_path.iterdir())


def test_gallery_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "gallery", "list")
    assert code == 0 and "backyard_pingpong" in out
    assert run(capsys, "gallery", "emit", "nope", tmp_path / "x.json")[0] == 2
    assert run(capsys, "gallery", "emit")[0] == 2


def test_usage_errors_exit_2():
    for argv in ([], ["frobnicate"], ["check"], ["check", "m.json", "--suite", "nope"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out
