import csv
import json

import pytest
from pydantic import ValidationError

from localizability_sim import config
from localizability_sim.models.report_models import PropertyResult
from localizability_sim.utils import output_utils


def test_json_from_a_dict(results_dir):
    assert output_utils.save_json_to_results({"a": 1}, "a.json")
    assert json.loads((results_dir / "a.json").read_text()) == {"a": 1}


def test_json_from_a_model(results_dir):
    result = PropertyResult(name="extension_minimal_rigidity", cases=3, failures=0)
    assert output_utils.save_json_to_results(result, "p.json")
    assert json.loads((results_dir / "p.json").read_text())["cases"] == 3


def test_csv_with_header(results_dir):
    assert output_utils.save_csv_to_results([["0.1", 0.5]], ["B\\N", "3.2"], "t.csv")
    with open(results_dir / "t.csv", newline="") as f:
        assert list(csv.reader(f)) == [["B\\N", "3.2"], ["0.1", "0.5"]]


def test_save_failure_is_reported_not_raised(tmp_path, monkeypatch):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    monkeypatch.setattr(config, "RESULTS_DIR", blocker / "sub")
    assert output_utils.save_json_to_results({"a": 1}, "a.json") is False
    assert output_utils.save_csv_to_results([], ["h"], "a.csv") is False


def test_network_document_has_no_edges(results_dir, closer_net):
    assert output_utils.save_network(closer_net, "net.json")
    raw = json.loads((results_dir / "net.json").read_text())
    assert "edges" not in raw
    assert len(raw["nodes"]) == 5
    doc = output_utils.load_network_document(results_dir / "net.json")
    assert [n.label for n in doc.nodes] == ["r1", "r2", "v1", "v2", "q"]


def test_invalid_document_raises_validation_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"radius": -1, "nodes": []}))
    with pytest.raises(ValidationError):
        output_utils.load_network_document(path)
