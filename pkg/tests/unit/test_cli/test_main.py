"""Tests for the conelab entry point."""

import json
from dataclasses import replace
from unittest.mock import patch

import pytest

from src import __version__
from src.config import RuntimeConfig, config
from src.cli.main import EXIT_ANALYSIS, EXIT_INPUT, EXIT_OK, attach_option_values, build_parser, run


class TestBuildParser:
    """Tests for subcommands and shared flags."""

    def test_global_flags_after_subcommand(self):
        args = build_parser().parse_args(["classify", "y^2 - x^3", "--at", "0,0", "--seed", "7", "--tol", "0.02"])
        assert args.command == "classify"
        assert args.seed == 7
        assert args.tol == 0.02

    def test_global_flags_before_subcommand(self):
        args = build_parser().parse_args(["--seed", "3", "parse", "x*y"])
        assert args.seed == 3

    def test_unset_flags_are_absent(self):
        args = build_parser().parse_args(["parse", "x*y"])
        assert not hasattr(args, "seed")
        assert not hasattr(args, "json")

    def test_json_without_path_means_stdout(self):
        args = build_parser().parse_args(["parse", "x*y", "--json"])
        assert args.json == "-"

    def test_negative_point_with_equals(self):
        args = build_parser().parse_args(["leading-form", "x^2 - y^2", "--at=-1,1"])
        assert args.at == "-1,1"

    def test_at_and_region_exclusive(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(attach_option_values(["classify", "y - x^2", "--at", "0,0", "--region", "-1:1,-1:1"]))

    def test_negative_values_attached_to_options(self):
        argv = attach_option_values(["classify", "x*y", "--region", "-2:2,-2:2", "--patch", "-x"])
        assert argv == ["classify", "x*y", "--region=-2:2,-2:2", "--patch=-x"]
        args = build_parser().parse_args(argv)
        assert args.region == "-2:2,-2:2"
        assert args.patch == ["-x"]

    def test_flags_after_value_options_untouched(self):
        argv = ["cone", "x*y", "--at", "0,0", "--quiet", "--json"]
        assert attach_option_values(argv) == argv


class TestRun:
    """Tests for dispatch, output and exit codes."""

    def test_parse_prints_json(self, capsys):
        assert run(["parse", "y^2 - x^3"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["polynomial"] == "-x^3 + y^2"
        assert data["variables"] == ["x", "y"]
        assert data["degree"] == 3

    def test_bad_expression_is_input_error(self, capsys):
        assert run(["parse", "x**2"]) == EXIT_INPUT
        assert capsys.readouterr().out == ""

    def test_missing_subcommand_is_input_error(self):
        assert run([]) == EXIT_INPUT

    def test_invalid_configuration_is_input_error(self, capsys):
        broken = replace(config, runtime=RuntimeConfig(seed=-1, threads=1))
        with patch("src.cli.main.config", broken):
            assert run(["parse", "x*y"]) == EXIT_INPUT
        assert capsys.readouterr().out == ""

    def test_version(self, capsys):
        assert run(["--version"]) == EXIT_OK
        assert __version__ in capsys.readouterr().out

    def test_classify_cusp(self, capsys):
        assert run(["classify", "y^2 - x^3", "--at", "0,0"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["class"] == "Cusp"
        assert data["rule"] == "planar-germ-dichotomy"

    def test_point_off_variety_is_analysis_error(self):
        assert run(["classify", "y - x^2", "--at", "0,1"]) == EXIT_ANALYSIS

    def test_classify_needs_target(self):
        assert run(["classify", "y - x^2"]) == EXIT_INPUT

    def test_wrong_point_length(self):
        assert run(["leading-form", "x^2 - y^2", "--at", "0,0,0"]) == EXIT_INPUT

    def test_json_to_file(self, tmp_path, capsys):
        out = tmp_path / "reports" / "lf.json"
        assert run(["leading-form", "x^2 - y^2", "--at=0,0", "--json", str(out)]) == EXIT_OK
        assert capsys.readouterr().out == ""
        data = json.loads(out.read_text())
        assert data["degree"] == 2
        assert sorted(f["multiplicity"] for f in data["factors"]) == [1, 1]

    def test_unwritable_output_is_input_error(self, tmp_path, capsys):
        blocker = tmp_path / "taken"
        blocker.write_text("")
        assert run(["parse", "x*y", "--json", str(blocker / "out.json")]) == EXIT_INPUT
        assert capsys.readouterr().out == ""

    def test_timings(self, capsys):
        assert run(["parse", "x*y", "--timings"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["timings"]["total_seconds"] >= 0

    def test_puiseux_isolated_point(self, capsys):
        assert run(["puiseux", "x^2 + y^2"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["verdict"] == "isolated"

    def test_negative_point_without_equals(self, capsys):
        assert run(["leading-form", "y^2 - x^2*(x + 1)", "--at", "-1,0"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["degree"] == 1

    def test_classify_curve_region(self, capsys):
        assert run(["classify", "x^2 - y^2*(1 - y)", "--region", "-2:2,-2:2"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert [v["class"] for v in data] == ["MultiBranch"]
