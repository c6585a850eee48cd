"""Tests for the command-line interface.

Commands are driven through cli.main(argv), checking exit codes, the
JSON artifacts, the stdout renderings, and the checkpoint state files.
Artifacts must be reproducible: two runs with identical manifests agree
byte for byte once the two timing fields are removed.
"""

import json

from dplab.cli import main

SURFACE = {
    "ambient": "P(1,1,2,3)",
    "q": "3^1",
    "forms": {
        "f4": {"(4,0)": "2", "(2,2)": "1", "(0,4)": "2"},
        "f6": {"(6,0)": "1", "(4,2)": "2", "(0,6)": "1"},
    },
}

BUNDLE = {
    "q": "5",
    "weights": [0, 0, 1],
    "entries": {"(0,0)": ["1"], "(1,1)": ["2"], "(2,2)": ["2", "0", "1"]},
}


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def read_artifact(path):
    return json.loads(path.read_text())


def strip_timing(doc):
    doc = json.loads(json.dumps(doc))
    doc["manifest"].pop("wall_time_seconds")
    if "result" in doc:
        doc["result"]["stats"].pop("seconds")
    return doc


# ---------------------------------------------------------------------------
# search


def test_search_found_writes_artifact(tmp_path):
    out = tmp_path / "search.json"
    code = main(["search", "--q", "9", "--partition", "1,1,1,1,1,1,1",
                 "--out", str(out)])
    assert code == 0
    doc = read_artifact(out)
    assert doc["manifest"]["command"] == "search"
    assert doc["manifest"]["parameters"]["q"] == 9
    assert doc["manifest"]["parameters"]["mode"] == "randomized"
    assert doc["manifest"]["budgets"] == {"randomized_trials": 100000}
    assert doc["result"]["status"] == "found"
    assert len(doc["result"]["config"]["closed_points"]) == 7


def test_search_exhaustive_certificate(tmp_path):
    out = tmp_path / "cert.json"
    code = main(["search", "--q", "5", "--partition", "1,1,1,1,1,1",
                 "--exhaustive", "--out", str(out)])
    assert code == 0
    doc = read_artifact(out)
    assert doc["manifest"]["parameters"]["mode"] == "exhaustive"
    cert = doc["result"]["certificate"]
    assert doc["result"]["status"] == "not_found"
    assert cert["pools"] == {"1": 27}
    assert cert["pinned_rational_points"] == 4
    assert cert["description"].startswith("exhausted")


def test_search_inconclusive_exits_one(tmp_path):
    out = tmp_path / "search.json"
    code = main(["search", "--q", "2", "--partition", "1,1,1,1,1",
                 "--budget", "100", "--out", str(out)])
    assert code == 1
    doc = read_artifact(out)
    assert doc["result"]["status"] == "inconclusive"
    assert "randomized trials" in doc["result"]["reason"]


def test_search_exhausted_budget_exits_one(tmp_path):
    out = tmp_path / "search.json"
    code = main(["search", "--q", "5", "--partition", "1,1,1,1,1,1",
                 "--exhaustive", "--budget", "10", "--out", str(out)])
    assert code == 1
    doc = read_artifact(out)
    assert "budget 10 exhausted" in doc["result"]["reason"]


def test_search_usage_errors(capsys):
    assert main(["search", "--q", "9"]) == 2
    assert main(["search", "--q", "6", "--partition", "1,1"]) == 2
    assert main(["search", "--q", "9", "--partition", "0,1"]) == 2
    assert main(["search", "--q", "9", "--partition", "1", "--bogus"]) == 2
    capsys.readouterr()


def test_artifacts_are_reproducible(tmp_path):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    argv = ["search", "--q", "4", "--partition", "1,1,2", "--exhaustive"]
    assert main(argv + ["--out", str(first)]) == 0
    assert main(argv + ["--out", str(second)]) == 0
    a = strip_timing(read_artifact(first))
    b = strip_timing(read_artifact(second))
    assert json.dumps(a) == json.dumps(b)


def test_search_long_checkpoints_and_resumes(tmp_path, capsys):
    state = tmp_path / "state.json"
    out = tmp_path / "run.json"
    # An undersized budget interrupts the run but leaves the state file.
    code = main(["search", "--q", "5", "--partition", "1,1,1,1,1,1",
                 "--long", "--state", str(state), "--budget", "120",
                 "--checkpoint-every", "50", "--out", str(out)])
    assert code == 1
    saved = json.loads(state.read_text())
    assert saved["q"] == 5 and saved["partition"] == [1, 1, 1, 1, 1, 1]
    assert saved["path"]
    # The rerun resumes from the saved path and finishes the space.
    code = main(["search", "--q", "5", "--partition", "1,1,1,1,1,1",
                 "--long", "--state", str(state), "--checkpoint-every", "50",
                 "--out", str(out)])
    assert code == 0
    assert "resuming" in capsys.readouterr().err
    doc = read_artifact(out)
    assert doc["result"]["status"] == "not_found"
    assert doc["result"]["certificate"]["resumed_from"] == saved["path"]
    assert not state.exists()


def test_search_rejects_foreign_state(tmp_path):
    state = tmp_path / "state.json"
    state.write_text(json.dumps(
        {"q": 7, "partition": [1, 1, 1], "path": [0]}))
    code = main(["search", "--q", "5", "--partition", "1,1,1,1,1,1",
                 "--long", "--state", str(state),
                 "--out", str(tmp_path / "out.json")])
    assert code == 2


# ---------------------------------------------------------------------------
# trace-table


def test_trace_table_single_field(tmp_path):
    out = tmp_path / "rows.json"
    code = main(["trace-table", "--degree", "3", "--q", "2",
                 "--out", str(out)])
    assert code == 0
    doc = read_artifact(out)
    rows = doc["rows"]
    assert [r["trace"] for r in rows] == [-2, -1, 0, 1, 2, 3, 4, 5, 7]
    by_trace = {r["trace"]: r for r in rows}
    assert by_trace[7]["status"] == "absent"
    assert by_trace[7]["witness"]["kind"] == "certificate"
    assert all(by_trace[a]["status"] == "exists" for a in range(-2, 6))


def test_trace_table_qmax_sweep(tmp_path):
    out = tmp_path / "rows.json"
    code = main(["trace-table", "--degree", "3", "--qmax", "4",
                 "--out", str(out)])
    assert code == 0
    doc = read_artifact(out)
    assert doc["manifest"]["parameters"]["qs"] == [2, 3, 4]
    assert len(doc["rows"]) == 27
    assert {r["q"] for r in doc["rows"]} == {2, 3, 4}


def test_trace_table_unknown_rows_exit_one(tmp_path):
    out = tmp_path / "rows.json"
    code = main(["trace-table", "--degree", "2", "--q", "11",
                 "--budget", "0", "--out", str(out)])
    assert code == 1
    doc = read_artifact(out)
    assert any(r["status"] == "unknown" for r in doc["rows"])


def test_trace_table_needs_exactly_one_field_choice(tmp_path):
    assert main(["trace-table", "--degree", "3"]) == 2
    assert main(["trace-table", "--degree", "3", "--q", "2",
                 "--qmax", "4"]) == 2


def test_trace_table_state_reuses_finished_fields(tmp_path, capsys):
    state = tmp_path / "state.json"
    marker = [{"degree": 3, "q": 2, "trace": 99, "status": "exists",
               "witness": {"kind": "marker"}}]
    state.write_text(json.dumps({
        "command": "trace-table", "degree": 3, "budget": 2000, "seed": 0,
        "rows": {"2": marker},
    }))
    out = tmp_path / "rows.json"
    code = main(["trace-table", "--degree", "3", "--qmax", "3", "--long",
                 "--state", str(state), "--out", str(out)])
    assert code == 0
    doc = read_artifact(out)
    assert doc["rows"][0]["trace"] == 99
    assert sum(1 for r in doc["rows"] if r["q"] == 3) == 9
    assert not state.exists()
    capsys.readouterr()


def test_trace_table_rejects_mismatched_state(tmp_path):
    state = tmp_path / "state.json"
    state.write_text(json.dumps({
        "command": "trace-table", "degree": 3, "budget": 17, "seed": 0,
        "rows": {},
    }))
    code = main(["trace-table", "--degree", "3", "--qmax", "3", "--long",
                 "--state", str(state), "--out", str(tmp_path / "o.json")])
    assert code == 2


def test_trace_table_markdown(capsys):
    code = main(["trace-table", "--degree", "3", "--q", "2",
                 "--format", "md"])
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith("| degree | q | trace | status |")
    assert "| absent " in out


# ---------------------------------------------------------------------------
# table and sato-tate


def test_table_artifact(tmp_path):
    out = tmp_path / "table.json"
    code = main(["table", "--root", "e6", "--out", str(out)])
    assert code == 0
    doc = read_artifact(out)
    rows = doc["classes"]
    assert len(rows) == 25
    assert [r["number"] for r in rows] == list(range(1, 26))
    assert {r["index"] for r in rows} == {0, 1, 3, 5, 6}
    assert all(r["h1_order"] in (1, 4, 9) for r in rows)
    by_number = {r["number"]: r for r in rows}
    assert by_number[7]["eigenvalues"] == "1^2,2,8^4"
    assert by_number[7]["h1"] == "0"
    assert by_number[10]["h1"] == "0"
    assert by_number[12]["index"] == 5
    assert by_number[14]["index"] == 5
    assert by_number[16]["orbit_types"] == ["1^2", "5^3", "5_{1}^2"]
    assert by_number[25]["measure_inverse"] == 51840


def test_table_markdown_and_csv(capsys):
    assert main(["table", "--format", "md"]) == 0
    md = capsys.readouterr().out
    assert md.startswith("| number | label ")
    assert "C20" in md
    assert main(["table", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("number,label,index,order,measure_inverse")
    assert len(lines) == 26


def test_sato_tate_distribution(tmp_path):
    out = tmp_path / "st.json"
    code = main(["sato-tate", "--degree", "3", "--out", str(out)])
    assert code == 0
    doc = read_artifact(out)
    assert doc["group_order"] == 51840
    assert doc["classes"] == 25
    assert doc["total"] == "1"
    assert doc["distribution"]["-2"] == "1/648"
    assert doc["distribution"]["0"] == "9/40"
    assert doc["distribution"]["5"] == "1/1440"
    assert doc["distribution"]["7"] == "1/51840"


# ---------------------------------------------------------------------------
# count, twist, conic-bundle


def test_count_surface_file(tmp_path):
    surface = write_json(tmp_path / "s.json", SURFACE)
    out = tmp_path / "count.json"
    code = main(["count", "--surface", surface, "--out", str(out)])
    assert code == 0
    doc = read_artifact(out)
    assert doc["count"] == 25
    assert doc["trace"] == 5
    assert doc["divisible"] is True
    assert doc["manifest"]["parameters"]["sha256"]
    assert doc["surface"]["ambient"] == "P(1,1,2,3)"


def test_count_reports_byte_offsets(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"ambient": "P2", "q": bad}')
    assert main(["count", "--surface", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "malformed JSON at byte 23" in err


def test_count_rejects_structural_errors(tmp_path, capsys):
    cases = [
        {"ambient": "P3", "q": "3"},
        {"ambient": "P2", "q": "6"},
        {"ambient": "P(1,1,2,3)", "q": "3", "forms": {"f5": {}}},
        {"ambient": "P(1,1,2,3)", "q": "3",
         "forms": {"f4": {"bogus": "1"}}},
        {"ambient": "P(1,1,2,3)", "q": "3",
         "forms": {"f4": {"(1,0)": "1"}}},
        {"ambient": "P(1,1,2,3)", "q": "3",
         "forms": {"f4": {"(4,0)": "2^1:1"}}},
    ]
    for doc in cases:
        path = write_json(tmp_path / "s.json", doc)
        assert main(["count", "--surface", path]) == 2
    capsys.readouterr()


def test_twist_twin_identity(tmp_path):
    surface = write_json(tmp_path / "s.json", SURFACE)
    out = tmp_path / "twist.json"
    code = main(["twist", "--surface", surface, "--out", str(out)])
    assert code == 0
    doc = read_artifact(out)
    assert doc["twist_class"] == "nontrivial"
    assert doc["count"] == 25
    assert doc["count_sum"] == doc["twin_identity"] == 26
    assert doc["twin_identity_holds"] is True
    # The emitted twist is itself a valid input with the stated count.
    twisted = write_json(tmp_path / "t.json", doc["twist"])
    out2 = tmp_path / "count.json"
    assert main(["count", "--surface", twisted, "--out", str(out2)]) == 0
    assert read_artifact(out2)["count"] == doc["twist_count"]


def test_twist_trivial_scalar(tmp_path):
    surface = write_json(tmp_path / "s.json", SURFACE)
    out = tmp_path / "twist.json"
    code = main(["twist", "--surface", surface, "--alpha", "1",
                 "--out", str(out)])
    assert code == 0
    doc = read_artifact(out)
    assert doc["twist_class"] == "trivial"
    assert doc["twist_count"] == doc["count"]


def test_conic_bundle_report(tmp_path):
    bundle = write_json(tmp_path / "b.json", BUNDLE)
    out = tmp_path / "report.json"
    code = main(["conic-bundle", "--bundle", bundle, "--out", str(out)])
    assert code == 0
    doc = read_artifact(out)
    assert doc["count"] == 36
    assert doc["trace"] == 2 - doc["rational_singular"] == 2
    assert doc["singular_degree"] == 2
    assert [f["degree"] for f in doc["singular_fibers"]] == [2]


def test_conic_bundle_rejects_bad_input(tmp_path, capsys):
    even = dict(BUNDLE, q="4")
    path = write_json(tmp_path / "b.json", even)
    assert main(["conic-bundle", "--bundle", path]) == 2
    square = dict(BUNDLE, entries={"(0,0)": ["1"], "(1,1)": ["2"],
                                   "(2,2)": ["0", "0", "1"]})
    path = write_json(tmp_path / "b.json", square)
    assert main(["conic-bundle", "--bundle", path]) == 2
    bad_key = dict(BUNDLE, entries={"(0,3)": ["1"]})
    path = write_json(tmp_path / "b.json", bad_key)
    assert main(["conic-bundle", "--bundle", path]) == 2
    capsys.readouterr()


# ---------------------------------------------------------------------------
# selftest and top-level behaviour


def test_selftest_passes(tmp_path, capsys):
    out = tmp_path / "selftest.json"
    code = main(["selftest", "--out", str(out)])
    assert code == 0
    doc = read_artifact(out)
    assert doc["passed"] is True
    assert all(c["status"] == "ok" for c in doc["checks"])
    assert len(doc["checks"]) == 7
    capsys.readouterr()


def test_help_and_missing_subcommand(capsys):
    assert main(["--help"]) == 0
    assert main([]) == 2
    assert main(["bogus"]) == 2
    capsys.readouterr()


def test_threads_flag_is_recorded(tmp_path):
    out = tmp_path / "st.json"
    code = main(["sato-tate", "--degree", "3", "--threads", "4",
                 "--out", str(out)])
    assert code == 0
    assert read_artifact(out)["manifest"]["parameters"]["threads"] == 4
