"""E2E tests for the conelab command line."""

import json

import pytest

from tests.e2e.conftest import is_e2e_enabled

pytestmark = pytest.mark.skipif(
    not is_e2e_enabled(),
    reason="E2E tests require RUN_E2E_TESTS=1"
)


class TestCommandLine:
    """Run the entry script as a user would."""

    def test_version(self, conelab):
        result = conelab("--version")
        assert result.returncode == 0
        assert result.stdout.startswith("conelab ")

    def test_classify_writes_json_to_stdout_only(self, conelab):
        result = conelab("classify", "y^2 - x^3", "--at", "0,0", "--quiet")
        assert result.returncode == 0
        assert json.loads(result.stdout)["class"] == "Cusp"
        assert "INFO" not in result.stderr

    def test_parse_error_exit_code(self, conelab):
        result = conelab("parse", "x^1/2")
        assert result.returncode == 2
        assert result.stdout == ""
        assert "at byte 2" in result.stderr

    def test_closure_of_asymptotic_cubic(self, conelab):
        result = conelab("closure", "y*(1 - x^2) - 1")
        assert result.returncode == 0
        data = json.loads(result.stdout)
        assert data["singular_count"] == 1
        asymptotes = [a for p in data["infinity_points"] for a in p.get("asymptotes", [])]
        assert len(asymptotes) == 3

    def test_gallery_writes_report_and_figures(self, conelab, tmp_path):
        out = tmp_path / "report.json"
        result = conelab("gallery", "--filter", "deltoid", "--json", str(out), "--svg", str(tmp_path / "svg"), "-q")
        assert result.returncode == 0
        report = json.loads(out.read_text())
        assert report["ok"] is True
        assert report["passed"] == 3
        assert sorted(p.name for p in (tmp_path / "svg").iterdir()) == ["deltoid-2.svg", "deltoid-3.svg", "deltoid-4.svg"]

    def test_gallery_is_reproducible(self, conelab, tmp_path):
        first = conelab("gallery", "--filter", "node", "-q")
        second = conelab("gallery", "--filter", "node", "-q")
        assert first.returncode == second.returncode == 0
        assert first.stdout == second.stdout
