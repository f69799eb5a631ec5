import io
import json

import jsonschema
import pytest

from rostforge.cli import main
from rostforge.schemas import REPORT_SCHEMA, validate_report


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, _ = run(*argv, "--format", "json")
    report = json.loads(out)
    validate_report(report)
    return code, report


def test_rank_report():
    code, rep = run_json("rank", "--field", "Q", "--n", "1", "--i", "3")
    assert code == 0
    assert rep["schema"] == 1 and rep["command"] == "rank"
    assert rep["result"]["rank"] == {"finite": 1}
    assert "n=1, i>1, i odd" in rep["result"]["trace"][0]


def test_residue_command():
    code, rep = run_json("ksym", "residue", "--field", "F5(t)", "--at", "(t)", "{t, t-1}")
    assert code == 0
    assert rep["result"]["residue"]["value"] == "{4}"
    # in F5, -{4} = {4}; use an entry whose residue is not its own inverse
    _, classic = run_json("ksym", "residue", "--field", "F5(t)", "--at", "(t)", "{t, t+2}")
    _, rost = run_json("ksym", "residue", "--field", "F5(t)", "--at", "(t)", "--tame-sign", "rost", "{t, t+2}")
    assert classic["result"]["residue"]["value"] == "{2}"
    assert rost["result"]["residue"]["value"] in ("-{2}", "{3}")


def test_malformed_field_exits_2_with_caret():
    code, out, err = run("rank", "--field", "Q(", "--n", "1", "--i", "3")
    assert code == 2
    assert "^" in err and out == ""
    code, rep = run_json("rank", "--field", "Q(", "--n", "1", "--i", "3")
    assert code == 2 and rep["error"]["position"] == 2


def test_usage_errors_exit_2():
    assert run("rank", "--field", "Q")[0] == 2
    assert run("bogus")[0] == 2
    assert run("rank-table", "--field", "Q", "--n-range", "3..1")[0] == 2


def test_help_exits_0():
    assert run("--help")[0] == 0


def test_not_computable_exits_3():
    code, rep = run_json("ksym", "norm", "--ext", "Q[i^2+1]/Q", "{1+i, i}")
    assert code == 3 and rep["error"]["type"] == "NotComputable"
    code, rep = run_json("morph", "normalize", "--n", "1", "res[(3)] ∘ nrm[Q[i^2+1]/Q]")
    assert code == 3


def test_budget_exhaustion_exits_3():
    code, rep = run_json("morph", "normalize", "--field", "Q", "--budget", "0", "sym[{2}] ∘ sym[{3}]")
    assert code == 3 and rep["error"]["type"] == "NonTerminating"


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("ROSTFORGE_STEP_BUDGET", "0")
    code, rep = run_json("morph", "normalize", "--field", "Q", "sym[{2}] ∘ sym[{3}]")
    assert code == 3


def test_borel_command(tmp_path):
    fig = tmp_path / "borel.png"
    code, rep = run_json("borel", "--r1", "1", "--r2", "0", "--degrees", "2..10", "--figure", str(fig))
    assert code == 0
    ranks = {d["degree"]: d["rank"] for d in rep["result"]["k_ranks"]}
    assert [d for d, r in ranks.items() if r] == [5, 9]
    assert all(r in (0, 1) for r in ranks.values())
    assert fig.exists() and fig.stat().st_size > 0
    assert rep["figures"] == [str(fig)]


def test_chow_command():
    code, rep = run_json("chow", "--model", "A1", "--field", "F3", "--twist", "1", "--bound", "4")
    assert code == 0
    assert rep["result"]["invariant_factors"] == [2]
    code, out, _ = run("chow", "--model", "P1", "--field", "F3", "--codim", "1")
    assert "Z^1" in out


def test_rank_table_markdown_and_figures(tmp_path):
    fig = tmp_path / "table.png"
    code, out, _ = run("rank-table", "--field", "NF(3,1,1)", "--n-range", "-2..4", "--i-range", "-2..8",
                       "--format", "md", "--figure", str(fig))
    assert code == 0
    cases = [line.split("|")[1].strip() for line in out.splitlines() if line.startswith("| n")]
    assert cases[:4] == ["n=i=0", "n=i=1", "n=1, i>1, i even", "n=1, i>1, i odd"]
    assert fig.exists() and (tmp_path / "table-integers.png").exists()
    assert "| n \\ i | -2 |" in out


def test_rank_table_json_contains_both_tables():
    code, rep = run_json("rank-table", "--field", "Q[x^2+1]", "--n-range", "0..2", "--i-range", "0..3")
    assert code == 0
    assert set(rep["result"]["tables"]) == {"field", "integers"}
    assert len(rep["result"]["tables"]["field"]) == 12


def test_rank_table_non_number_field_has_one_table():
    code, rep = run_json("rank-table", "--field", "Q(t)", "--n-range", "0..1", "--i-range", "0..1")
    assert set(rep["result"]["tables"]) == {"field"}
    assert run("rank-table", "--field", "Q(t)", "--ring", "integers")[0] == 2


def test_morph_normalize_report():
    code, rep = run_json("morph", "normalize", "rst[Q->Q[i^2+1]] ∘ nrm[Q[i^2+1]/Q]")
    assert code == 0
    assert len(rep["result"]["summands"]) == 2
    assert rep["result"]["trace"][0]["rule"] == "R1c"


CORPUS = [
    ("rank", "--field", "Q", "--n", "1", "--i", "3"),
    ("rank", "--field", "Q", "--n", "1", "--i", "1", "--ring", "integers"),
    ("rank", "--field", "R", "--n", "3", "--i", "5"),
    ("rank", "--field", "Q(t,u)", "--n", "2", "--i", "4"),
    ("rank", "--field", "F5(t)", "--n", "1", "--i", "2", "--assume-conjectures"),
    ("rank", "--field", "Q(", "--n", "1", "--i", "3"),
    ("rank-table", "--field", "F7", "--n-range", "0..2", "--i-range", "0..2"),
    ("borel", "--r1", "0", "--r2", "1", "--degrees", "2..9"),
    ("borel", "--r1", "0", "--r2", "1", "--degrees", "1..9"),
    ("chow", "--field", "F5", "--bound", "2"),
    ("chow", "--field", "Q", "--bound", "2"),
    ("ksym", "normalize", "--field", "Q", "{6, -12} + {2, 2}"),
    ("ksym", "normalize", "--field", "Q", "{6, "),
    ("ksym", "residue", "--field", "Q", "--at", "(3)", "{2, 3}"),
    ("ksym", "residue", "--field", "Q", "--at", "(4)", "{2, 3}"),
    ("ksym", "norm", "--ext", "Q[i^2+1]/Q", "{1+2*i}"),
    ("ksym", "norm", "--ext", "Q[i^2+1]/Q: i->-i", "{1+2*i}"),
    ("morph", "normalize", "--field", "F5(t)", "--n", "1", "res[(t)] ∘ sym[{t+2}]"),
    ("morph", "normalize", "res[inf] ∘ sym[{t-1}] ∘ rst[Q(t)->Q(t): t->t^4]", "--n", "1"),
    ("morph", "normalize", "--field", "Q", "sym[{2}] ∘ res[(5)]"),
]


@pytest.mark.parametrize("argv", CORPUS)
def test_corpus_exit_codes_and_schema(argv):
    code, out, _ = run(*argv, "--format", "json")
    assert code in (0, 2, 3)
    report = json.loads(out)
    validate_report(report)
    assert ("result" in report) == (code == 0)


def test_schema_rejects_malformed_reports():
    with pytest.raises(jsonschema.ValidationError):
        validate_report({"schema": 2, "command": "rank", "result": {}})
    with pytest.raises(jsonschema.ValidationError):
        validate_report({"schema": 1, "command": "rank", "result": {"field": "Q"}})
    jsonschema.Draft202012Validator.check_schema(REPORT_SCHEMA)


def test_text_outputs():
    code, out, _ = run("ksym", "normalize", "--field", "Q", "{6, -12} + {2, 2}")
    assert out.strip() == "-{2, 3}"
    code, out, _ = run("morph", "normalize", "--field", "Q", "sym[{2}] ∘ sym[{3}]")
    assert out.splitlines()[0] == "sym[{2, 3}]"
