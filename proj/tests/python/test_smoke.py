import json
import os
import subprocess
from pathlib import Path

import pytest

import surface_ledger as sl

FIXTURES = Path(os.environ["SURFACE_LEDGER_FIXTURES"])
MANIFEST = FIXTURES / "manifest.json"


def test_battery_exclusive_functions():
    nodes = (FIXTURES / "battery" / "nodes.csv").read_text()
    edges = (FIXTURES / "battery" / "edges.csv").read_text()
    got = sl.exclusive_functions(nodes, edges, "BA", ["BA", "GEO"])
    assert got == ["I_charging", "I_chargingTime", "I_dischargingTime"]
    with pytest.raises(sl.ValidationError, match="unknown standard"):
        sl.exclusive_functions(nodes, edges, "NOPE", ["BA", "GEO"])


def test_pipeline_summary(tmp_path):
    result = sl.run_pipeline(MANIFEST, tmp_path)
    assert result["agreement"] == pytest.approx(0.9674, abs=5e-4)
    assert result["cve_attributed"] == 175
    assert set(result["policies"]) == {"conservative", "aggressive"}
    assert (tmp_path / "ledger.csv").read_text() == result["ledger_csv"]


def test_policy_round_trip_and_presets():
    text = sl.serialize_policy("p", ["WEBGL", "SVG"])
    assert json.loads(text)["blocked"] == ["SVG", "WEBGL"]
    assert sl.parse_policy(text) == text
    assert sl.preset("conservative") == (FIXTURES / "presets" / "conservative.json").read_text()
    with pytest.raises(ValueError):
        sl.parse_policy('{"name": "p", "blocked": ["WCR"]}')
    doc = '{"name": "p", "blocked": ["WEBGL"], "per_origin": {"*.example.com": {"allow": ["WEBGL"]}}}'
    assert sl.effective_blocked(doc) == ["WEBGL"]
    assert sl.effective_blocked(doc, "https://maps.example.com") == []


def test_evaluate_preset():
    stats = sl.evaluate_policy(sl.preset("aggressive"), MANIFEST)
    assert stats["eloc_fraction"] == pytest.approx(0.7076, abs=0.02)
    assert stats["cve_fraction"] == pytest.approx(0.719, abs=0.03)


def test_render_break_rate():
    assert sl.render_break_rate(0.0) == "0%"
    assert sl.render_break_rate(0.004) == "<1%"
    assert sl.render_break_rate(0.6293) == "63%"


def test_missing_file_is_io_error(tmp_path):
    with pytest.raises(OSError):
        sl.build_catalog([tmp_path / "none.idl"], tmp_path / "none.csv")


def test_cli_exit_codes(tmp_path):
    cli = os.environ.get("SURFACE_LEDGER_CLI")
    if not cli:
        pytest.skip("SURFACE_LEDGER_CLI not set")
    ok = subprocess.run([cli, "policy", "preset", "aggressive"], capture_output=True, text=True)
    assert ok.returncode == 0
    assert ok.stdout == sl.preset("aggressive")
    bad = subprocess.run([cli, "policy", "preset", "lax"], capture_output=True, text=True)
    assert bad.returncode == 1
    assert bad.stderr.count("\n") == 1
    missing = subprocess.run([cli, "benefit", "--tests", str(tmp_path / "x"), "--usage", str(tmp_path / "y")],
                             capture_output=True, text=True)
    assert missing.returncode == 2
