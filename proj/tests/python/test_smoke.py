# Copyright 2026 The CodeHinter Authors
# SPDX-License-Identifier: Apache-2.0

import json
import math
import os
from pathlib import Path

import pytest

import codehinter

ROOT = Path(os.environ.get("CODEHINTER_SOURCE_DIR", Path(__file__).resolve().parents[2]))
CORPUS = ROOT / "exercises"
TRACES = ROOT / "tests" / "fixtures" / "traces"


def textbook_ochiai(ef, ep, nf, np):
    denom = math.sqrt((ef + nf) * (ef + ep))
    return ef / denom if denom else 0.0


def test_version():
    assert codehinter.__version__ == "0.1.0"


@pytest.mark.parametrize("counts", [(2, 1, 0, 2), (1, 1, 1, 1), (0, 3, 0, 1), (4, 2, 1, 6)])
def test_ochiai_matches_textbook(counts):
    assert codehinter.score(*counts) == pytest.approx(textbook_ochiai(*counts), abs=1e-12)


def test_dstar2_sentinel_is_infinite():
    assert math.isinf(codehinter.score(2, 0, 0, 3, "dstar2"))


def test_unknown_formula_raises_with_code():
    with pytest.raises(codehinter.CodeHinterError) as info:
        codehinter.score(1, 0, 0, 0, "jaccard")
    assert info.value.code == "unknown_formula"


def test_rank_orders_by_score_then_location():
    spectrum = {
        "subject_files": ["a.py"],
        "syntax_error": None,
        "records": [
            {"test_id": "t1", "outcome": "fail", "message": "boom",
             "covered": [{"file": "a.py", "line": 1}, {"file": "a.py", "line": 2}]},
            {"test_id": "t2", "outcome": "pass", "message": None,
             "covered": [{"file": "a.py", "line": 1}]},
        ],
    }
    ranking = codehinter.rank(spectrum)
    assert [e["line"] for e in ranking["entries"]] == [2, 1]
    assert ranking["entries"][0]["score"] == pytest.approx(1.0)


def test_canonical_fixtures_round_trip():
    for path in sorted(TRACES.glob("*.json")):
        text = path.read_text(encoding="utf-8")
        assert codehinter.canonical_trace(text) == text
        assert codehinter.parse_trace(text)["schema_version"] == "codehinter-trace/1"


def test_merge_is_right_biased():
    text = (TRACES / "mixed.json").read_text(encoding="utf-8")
    merged = json.loads(codehinter.merge_traces(text, text))
    assert merged == json.loads(text)


def test_corpus_lists_exercises():
    ids = codehinter.corpus_ids(CORPUS)
    assert len(ids) >= 10
    assert "running-sum" in ids


def test_scripted_session_reaches_green(tmp_path):
    project = tmp_path / "project"
    codehinter.materialize(CORPUS / "running-sum", "subtracts", project)
    wb = codehinter.Workbench(tmp_path / "data")
    sid = wb.create_session(project)
    assert wb.run_e2e(sid)["report"]["failed"] > 0
    assert wb.view(sid)["state"] == "TESTS_FAILED"
    located = wb.locate(sid)
    assert any(l["file"] == "solution.py" and l["line"] == 5 for l in located["locations"])
    card = wb.quiz(sid)
    assert len(card["options"]) == 3
    verdicts = []
    for choice in range(3):
        if choice:
            card = wb.quiz(sid)
        verdicts.append(wb.answer(sid, choice)["is_correct"])
    assert verdicts.count(True) == 1
    correct = verdicts.index(True)
    wb.apply_patch(sid, proposal_id=card["options"][correct]["proposal"]["id"])
    wb.run_e2e(sid)
    assert wb.view(sid)["state"] == "TESTS_PASSED"
    usage = wb.usage(sid)
    assert usage["counts"]["quiz_answered"] == 3
    assert usage["quiz_correct"] == 1
    assert [e["seq"] for e in wb.events(sid)] == list(range(1, len(wb.events(sid)) + 1))


def test_illegal_transition_is_reported(tmp_path):
    project = tmp_path / "project"
    codehinter.materialize(CORPUS / "running-sum", "subtracts", project)
    wb = codehinter.Workbench(tmp_path / "data")
    sid = wb.create_session(project)
    with pytest.raises(codehinter.CodeHinterError) as info:
        wb.locate(sid)
    assert info.value.code == "illegal_transition"
    assert info.value.details["state"] == "CREATED"
    assert wb.events(sid) == []
