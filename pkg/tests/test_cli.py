import json
from pathlib import Path

from setm.cli import main
from setm.hfset import enumerate_universe, format_set, hf_rank


def _cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_decode_code_of_two(capsys, tmp_path):
    code, text, _ = _cli(capsys, "encode", "-i", "{{},{{}}}")
    assert code == 0
    f = tmp_path / "code.txt"
    f.write_text(text)
    assert _cli(capsys, "decode", "-i", str(f)) == (0, "{{},{{}}}\n", "")


def test_run_end_machine(capsys, tmp_path):
    stm = tmp_path / "end.stm"
    assert main(["stdlib", "--emit", "end", "-o", str(stm)]) == 0
    code, out, err = _cli(capsys, "run", "-m", str(stm), "-i", "{{}}", "--fuel", "10")
    assert code == 0
    assert out.strip()
    assert "halted after" in err


def test_run_trace_matches_golden(capsys, tmp_path):
    trace = tmp_path / "t.trace"
    assert _cli(capsys, "run", "-m", "end", "-i", "{{}}", "--trace", str(trace))[0] == 0
    golden = (Path(__file__).parent / "golden" / "end_1.trace").read_text()
    assert trace.read_text() == golden


def test_usage_errors(capsys, tmp_path):
    assert _cli(capsys, "run")[0] == 2
    assert _cli(capsys)[0] == 2
    assert _cli(capsys, "run", "-m", "no_such_machine")[0] == 2
    assert _cli(capsys, "encode", "-i", "{{}")[0] == 2
    bad = tmp_path / "bad.rec"
    bad.write_text("(proj 2 1)\n  (bogus 1)")
    code, _, err = _cli(capsys, "rec", "eval", "-e", str(bad))
    assert code == 2 and "setm:" in err
    assert _cli(capsys, "equiv")[0] == 2


def test_undefined_exit(capsys):
    code, out, err = _cli(capsys, "run", "-m", "succ", "-i", "{{}}", "--fuel", "3")
    assert code == 1 and out == "" and err


def test_round_trip_through_text(capsys, tmp_path):
    for i, x in enumerate(enumerate_universe(3)):
        lit = format_set(x)
        code, text, _ = _cli(capsys, "encode", "-i", lit, "--seed", str(i % 3))
        assert code == 0
        f = tmp_path / f"c{i}.txt"
        f.write_text(text)
        assert _cli(capsys, "decode", "-i", str(f))[1] == lit + "\n"
        assert hf_rank(x) <= 3


def test_output_is_deterministic(capsys):
    runs = [_cli(capsys, "run", "-m", "copy", "-i", "{{},{{}}}", "-i", "{}", "--delimit") for _ in range(2)]
    assert runs[0] == runs[1]
    assert runs[0][0] == 0


def test_stdlib_list_and_emit(capsys):
    code, out, _ = _cli(capsys, "stdlib", "--list")
    assert code == 0 and "end" in out.split()
    code, out, _ = _cli(capsys, "stdlib", "--emit", "erase")
    assert code == 0 and out.strip()
    assert _cli(capsys, "stdlib", "--emit", "nope")[0] == 2


def test_rec_eval_and_compile(capsys, tmp_path):
    term = tmp_path / "t.rec"
    term.write_text("(upair (proj 2 1) (proj 2 2))")
    code, out, _ = _cli(capsys, "rec", "eval", "-e", str(term), "-a", "{}", "-a", "{{}}")
    assert (code, out) == (0, "{{},{{}}}\n")
    assert _cli(capsys, "rec", "eval", "-e", str(term), "-a", "{}")[0] == 2
    stm = tmp_path / "t.stm"
    code, _, err = _cli(capsys, "rec", "compile", "-e", str(term), "-o", str(stm))
    assert code == 0 and "rules" in err
    code, out, _ = _cli(capsys, "run", "-m", str(stm), "-i", "{}", "-i", "{{}}", "--fuel", "10000000")
    assert code == 0
    f = tmp_path / "o.txt"
    f.write_text(out)
    assert _cli(capsys, "decode", "-i", str(f))[1] == "{{},{{}}}\n"


def test_rec_eval_undefined(capsys, tmp_path):
    term = tmp_path / "t.rec"
    term.write_text("(mu (adjoin (proj 2 1) (proj 2 2)))")
    assert _cli(capsys, "rec", "eval", "-e", str(term), "-a", "{}", "--fuel", "500")[0] == 1


def test_equiv_report(capsys, tmp_path):
    term = tmp_path / "single.rec"
    term.write_text("(singleton (proj 1 1))")
    report = tmp_path / "r.json"
    code, out, _ = _cli(capsys, "equiv", "-e", str(term), "--rank", "1", "--seeds", "2", "--report", str(report))
    assert code == 0 and "single.rec" in out
    data = json.loads(report.read_text())
    assert all(r["verdict"] == "agree" for r in data[0]["records"])
