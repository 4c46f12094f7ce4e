"""Smoke test for the pyhochkit bindings. Run with pytest from the repo root."""

import json
from pathlib import Path

import pyhochkit

FIXTURES = Path(__file__).resolve().parent.parent / "crates" / "core" / "fixtures"


def test_hh_dims_dual_numbers():
    text = (FIXTURES / "algebra" / "dualnumbers.json").read_text()
    assert pyhochkit.hh_dims(text, 3) == [2, 1, 1, 1]


def test_run_returns_json_report():
    code, out = pyhochkit.run(["npotent", "--n", "1", str(FIXTURES / "ainf" / "qext.json")])
    assert code == 0
    report = json.loads(out)
    assert report["command"] == "npotent"
    assert "1-potent: yes" in report["summary"]


def test_broken_category_is_a_violation():
    code, out = pyhochkit.run(["check-ainf", str(FIXTURES / "ainf" / "broken.json")])
    assert code == 2
    assert json.loads(out)["status"] == "violation"


def test_bad_arguments_raise():
    try:
        pyhochkit.run(["no-such-command"])
    except ValueError:
        return
    raise AssertionError("expected ValueError")
