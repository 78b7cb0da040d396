# Copyright 2026 The CodeHinter Authors
# SPDX-License-Identifier: Apache-2.0

"""Debugging assistant for Python exercises: fault localization, validated
fix quizzes, print-statement hints and event-sourced sessions."""

import json
import os
from pathlib import Path

_here = Path(__file__).resolve().parent
_adapter = _here / "codehinter-stub-adapter"
if _adapter.exists():
    os.environ.setdefault("CODEHINTER_STUB_ADAPTER", str(_adapter))

from . import _core  # noqa: E402

__version__ = _core.__version__
__all__ = [
    "CodeHinterError",
    "Workbench",
    "canonical_trace",
    "corpus_ids",
    "materialize",
    "merge_traces",
    "parse_trace",
    "rank",
    "score",
]


class CodeHinterError(_core.CodeHinterError):
    """A domain error. `code` is the machine-readable error code."""


def _details(exc):
    raw = getattr(exc, "details", "null")
    return json.loads(raw) if isinstance(raw, str) else raw


def _call(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except _core.CodeHinterError as exc:
        err = CodeHinterError(str(exc))
        err.code = getattr(exc, "code", "internal")
        err.details = _details(exc)
        raise err from None


def score(ef, ep, nf, np, formula="ochiai"):
    return _call(_core.score, ef, ep, nf, np, formula)


def rank(spectrum, formula="ochiai"):
    return json.loads(_call(_core.rank, json.dumps(spectrum), formula))


def parse_trace(text):
    return json.loads(_call(_core.parse_trace, text))


def canonical_trace(text):
    return _call(_core.canonical_trace, text)


def merge_traces(a, b):
    return _call(_core.merge_traces, a, b)


def corpus_ids(directory, verify=False):
    return _call(_core.corpus_ids, str(directory), verify)


def materialize(exercise_dir, variant, dest):
    return json.loads(_call(_core.materialize, str(exercise_dir), variant, str(dest)))


class Workbench:
    """Sessions stored under `data_dir`; every mutating call logs one event."""

    def __init__(self, data_dir, provider="stub"):
        self._wb = _call(_core.Workbench, str(data_dir), provider)

    def create_session(self, project_dir):
        return _call(self._wb.create_session, str(project_dir))

    def sessions(self):
        return _call(self._wb.sessions)

    def _json(self, name, *args, **kwargs):
        return json.loads(_call(getattr(self._wb, name), *args, **kwargs))

    def view(self, session_id):
        return self._json("view", session_id)

    def run_e2e(self, session_id):
        return self._json("run_e2e", session_id)

    def locate(self, session_id, formula="ochiai", top=3):
        return self._json("locate", session_id, formula, top)

    def quiz(self, session_id):
        return self._json("quiz", session_id)

    def answer(self, session_id, choice):
        return self._json("answer", session_id, choice)

    def prints(self, session_id):
        return self._json("prints", session_id)

    def run_prints(self, session_id):
        return self._json("run_prints", session_id)

    def apply_patch(self, session_id, proposal_id=None, proposal=None):
        body = {"proposal_id": proposal_id} if proposal_id is not None else {"proposal": proposal}
        return self._json("apply_patch", session_id, json.dumps(body))

    def solution(self, session_id):
        return self._json("solution", session_id)

    def pseudocode(self, session_id, record=True):
        return self._json("pseudocode", session_id, record)

    def visualizer(self, session_id, file=None, record=True):
        return self._json("visualizer", session_id, file, record)

    def chat(self, session_id, text):
        return self._json("chat", session_id, text)

    def events(self, session_id):
        return self._json("events", session_id)

    def usage(self, session_id):
        return self._json("usage", session_id)
