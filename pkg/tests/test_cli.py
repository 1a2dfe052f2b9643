import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from opfree import cli

ROOT = Path(__file__).resolve().parents[1]
JAMES = ROOT / "workspaces" / "james.json"


def _ws(**extra):
    base = json.loads(JAMES.read_text())
    base.update(extra)
    return base


def _write(tmp_path, ws):
    path = tmp_path / "ws.json"
    path.write_text(json.dumps(ws, indent=1))
    return str(path)


def test_james_workspace_report(capsys):
    assert cli.main(["run", "--workspace", str(JAMES)]) == 0
    out = capsys.readouterr().out
    assert "classes: 4" in out
    assert "words oracle: 4 expected, 4 reached, 4 classes" in out
    assert "c1 * c2 = c3" in out
    assert out.rstrip().endswith("status: ok")


def test_parse_error_reports_position(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "schema": "opfree-workspace/1",\n  "tasks": [,]\n}')
    assert cli.main(["run", "--workspace", str(path)]) == cli.EXIT_PARSE
    assert "line 3, column" in capsys.readouterr().err


def test_schema_version_is_required(tmp_path):
    ws = _ws(schema="opfree-workspace/0")
    assert cli.main(["run", "--workspace", _write(tmp_path, ws)]) == cli.EXIT_PARSE


def test_nonpositive_cap_is_a_parse_error(tmp_path):
    ws = _ws()
    ws["operads"]["E0"]["cap"] = 0
    assert cli.main(["run", "--workspace", _write(tmp_path, ws)]) == cli.EXIT_PARSE


def test_unknown_operad_is_a_resolve_error(tmp_path, capsys):
    ws = _ws()
    ws["maps"]["p"]["target"] = "Lie"
    assert cli.main(["run", "--workspace", _write(tmp_path, ws)]) == cli.EXIT_RESOLVE
    assert "unknown operad 'Lie'" in capsys.readouterr().err


def test_cap_violation_is_a_resolve_error(tmp_path):
    ws = _ws()
    ws["tasks"][0]["L"] = 4
    assert cli.main(["run", "--workspace", _write(tmp_path, ws)]) == cli.EXIT_RESOLVE


def test_law_failure_exit(tmp_path):
    ws = _ws()
    ws["monoids"] = {"bad": {"builder": "table", "elements": [0, 1, 2],
                             "table": [[0, 1, 2], [1, 2, 0], [2, 2, 2]], "unit": 0}}
    ws["operads"]["Com"] = {"builder": "com", "cap": 4}
    ws["algebras"]["B"] = {"kind": "monoid", "operad": "Com", "monoid": "bad"}
    ws["tasks"] = [{"id": "laws", "task": "check-laws", "objects": ["algebra:B"]}]
    assert cli.main(["run", "--workspace", _write(tmp_path, ws)]) == cli.EXIT_LAW


def test_oracle_mismatch_exit(tmp_path, capsys):
    ws = _ws()
    ws["tasks"][0].pop("oracle")
    ws["tasks"][0]["expect_classes"] = 5
    assert cli.main(["run", "--workspace", _write(tmp_path, ws)]) == cli.EXIT_MISMATCH
    assert "MISMATCH" in capsys.readouterr().out


def test_negative_control_that_passes_is_a_mismatch(tmp_path):
    ws = _ws()
    ws["tasks"] = [{"id": "laws", "task": "check-laws", "objects": ["map:p"], "expect": "fail"}]
    assert cli.main(["run", "--workspace", _write(tmp_path, ws)]) == cli.EXIT_MISMATCH


def test_explain(capsys):
    assert cli.main(["explain", "--workspace", str(JAMES), "james"]) == 0
    assert "James construction" in capsys.readouterr().out
    assert cli.main(["explain", "--workspace", str(JAMES), "nope"]) == cli.EXIT_RESOLVE


def test_task_filter_and_out(tmp_path):
    out = tmp_path / "r.txt"
    assert cli.main(["run", "--workspace", str(JAMES), "--task", "james", "--out", str(out)]) == 0
    assert "== task james (free) ==" in out.read_text()
    assert cli.main(["run", "--workspace", str(JAMES), "--task", "other"]) == cli.EXIT_RESOLVE


def test_cache_gives_identical_reports(tmp_path, caplog):
    cache = tmp_path / "cache"
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert cli.main(["run", "--workspace", str(JAMES), "--cache-dir", str(cache), "--out", str(a)]) == 0
    assert len(os.listdir(cache)) == 1
    with caplog.at_level("INFO", logger="opfree"):
        assert cli.main(["run", "--workspace", str(JAMES), "--cache-dir", str(cache), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert "cache hit" in caplog.text
    assert "cache" not in b.read_text()


def test_emit_dot_is_stable(tmp_path):
    ws = _ws(tasks=[{"id": "env", "task": "envelope", "map": "p", "L": 2}])
    path = _write(tmp_path, ws)
    for d in ("d1", "d2"):
        assert cli.main(["run", "--workspace", path, "--emit-dot", str(tmp_path / d)]) == 0
    one, two = (tmp_path / d / "env.dot" for d in ("d1", "d2"))
    assert one.read_bytes() == two.read_bytes()
    assert one.read_text().startswith("digraph")
    table = json.loads((tmp_path / "d1" / "env.category.json").read_text())
    ws2 = _ws(categories={"envtab": table},
              tasks=[{"id": "laws", "task": "check-laws", "objects": ["category:envtab"]}])
    assert cli.main(["run", "--workspace", _write(tmp_path, ws2)]) == 0


def test_report_is_independent_of_hash_seed(tmp_path):
    outs = []
    for seed in ("0", "12345"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        r = subprocess.run([sys.executable, "-m", "opfree", "run", "--workspace", str(JAMES)],
                           capture_output=True, env=env, check=True)
        outs.append(r.stdout)
    assert outs[0] == outs[1]


def test_parallel_jobs_match_serial(tmp_path):
    ws = _ws()
    ws["algebras"]["Y"] = {"kind": "pointed_set", "operad": "E0", "elements": ["*", "a", "b"], "base": "*"}
    ws["tasks"].append({"id": "james2", "task": "free", "map": "p", "algebra": "Y", "L": 2, "oracle": "words"})
    path = _write(tmp_path, ws)
    serial, parallel = cli.run(cli.parse_workspace(Path(path).read_text())), \
        cli.run(cli.parse_workspace(Path(path).read_text()), jobs=2)
    assert serial == parallel and serial[1] == 0


@pytest.mark.parametrize("task", cli.TASK_TYPES)
def test_every_task_type_is_explained(task):
    assert cli.EXPLAIN[task]


def _doc_blocks():
    text = (ROOT / "docs" / "workspace.md").read_text()
    return [json.loads(b.split("```", 1)[0]) for b in text.split("```json\n")[1:]]


def test_documented_examples_run(tmp_path):
    decl, *tasks = _doc_blocks()
    types = {t["task"] for t in tasks}
    assert types == set(cli.TASK_TYPES)
    ws = dict(decl, tasks=tasks)
    text, code = cli.run(cli.parse_workspace(json.dumps(ws)))
    assert code == 0, text
    assert text.count("status: ok") == len(tasks)
