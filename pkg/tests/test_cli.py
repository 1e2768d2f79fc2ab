import json
import subprocess
import sys
from pathlib import Path

import pytest

from quasimeasure import canonical_negative_instance, instance_spec_from, random_instance
from quasimeasure.cli import main
from quasimeasure.instance_io import (
    ParseError,
    parse_instance,
    render_instance,
    resolve_target,
)

UNIFORM_DOC = """\
# canonical failing instance
ground: 1 2 3 4
set A: 1 2
set B: 2 3
coat: empty omega A B
value empty: 0/1
value omega: 1/1
value A: 1/2
value B: 1/2
value A&B: 1/4        # refinement element by expression; resolved to a mask
value A&!B: 1/4
value B&!A: 1/4
value omega&!A: 1/2
value omega&!B: 1/2
"""

POWER_SET_DOC = """\
ground: 1 2 3
set A: 1
set B: 2
set C: 3
set AB: 1 2
set AC: 1 3
set BC: 2 3
coat: empty omega A B C AB AC BC
value empty: 0/1
value omega: 1/1
value A: 1/2
value B: 1/4
value C: 1/4
value AB: 3/4
value AC: 3/4
value BC: 1/2
"""


@pytest.fixture
def uniform_path(tmp_path):
    path = tmp_path / "uniform.qm"
    path.write_text(UNIFORM_DOC, encoding="utf-8")
    return str(path)


@pytest.fixture
def power_set_path(tmp_path):
    path = tmp_path / "power.qm"
    path.write_text(POWER_SET_DOC, encoding="utf-8")
    return str(path)


class TestParsing:
    def test_document_matches_programmatic_instance(self):
        spec = parse_instance(UNIFORM_DOC)
        _, coat, qm = spec.build()
        _, ref_coat, ref_qm = canonical_negative_instance()
        assert coat.member_bits() == ref_coat.member_bits()
        assert qm.values == ref_qm.values
        assert spec.seed is None

    def test_value_outside_unit_interval(self):
        doc = UNIFORM_DOC.replace("value A: 1/2", "value A: 5/4")
        with pytest.raises(ParseError, match="value outside \\[0,1\\]"):
            parse_instance(doc)

    def test_missing_omega_in_coat(self):
        doc = UNIFORM_DOC.replace("coat: empty omega A B", "coat: empty A B")
        with pytest.raises(ParseError, match="coat must contain omega"):
            parse_instance(doc)

    def test_missing_empty_in_coat(self):
        doc = UNIFORM_DOC.replace("coat: empty omega A B", "coat: omega A B")
        with pytest.raises(ParseError, match="coat must contain empty"):
            parse_instance(doc)

    def test_duplicate_set_definition(self):
        doc = UNIFORM_DOC.replace("set B: 2 3", "set B: 2 3\nset A: 3 4")
        with pytest.raises(ParseError, match="duplicate set definition"):
            parse_instance(doc)

    def test_unknown_element_label(self):
        doc = UNIFORM_DOC.replace("set A: 1 2", "set A: 1 9")
        with pytest.raises(ParseError, match="unknown element label"):
            parse_instance(doc)

    def test_value_outside_refinement(self):
        doc = UNIFORM_DOC + "set D: 1 3\nvalue D: 1/2\n"
        with pytest.raises(ParseError, match="outside the refinement"):
            parse_instance(doc)

    def test_conflicting_values_for_same_mask(self):
        # B&!A and omega&!A&B denote the same set {3}.
        doc = UNIFORM_DOC + "value omega&!A&B: 1/8\n"
        with pytest.raises(ParseError, match="conflicting values"):
            parse_instance(doc)

    def test_agreeing_duplicate_is_accepted(self):
        doc = UNIFORM_DOC + "value omega&!A&B: 1/4\n"
        parse_instance(doc)

    def test_missing_refinement_value(self):
        doc = UNIFORM_DOC.replace("value omega&!B: 1/2\n", "")
        with pytest.raises(ParseError, match="missing values"):
            parse_instance(doc)

    def test_syntax_error_reports_line(self):
        doc = "ground: 1 2\nnot a directive\n"
        with pytest.raises(ParseError, match="line 2"):
            parse_instance(doc)

    def test_unknown_directive(self):
        with pytest.raises(ParseError, match="unknown directive"):
            parse_instance("ground: 1\nfrob: 3\n")

    def test_duplicate_ground(self):
        with pytest.raises(ParseError, match="duplicate ground"):
            parse_instance("ground: 1\nground: 2\n")

    def test_malformed_rational(self):
        doc = UNIFORM_DOC.replace("value A: 1/2", "value A: 0.5")
        with pytest.raises(ParseError, match="malformed rational"):
            parse_instance(doc)

    def test_seed_line_roundtrips(self):
        doc = UNIFORM_DOC + "seed: 42\n"
        spec = parse_instance(doc)
        assert spec.seed == 42
        assert parse_instance(render_instance(spec)) == spec


class TestRoundTrip:
    def test_generated_instances_roundtrip(self):
        for seed in range(25):
            _, _, qm = random_instance(seed, n=2 + seed % 4, coat_size=2 + seed % 6)
            spec = instance_spec_from(qm, seed=seed)
            assert parse_instance(render_instance(spec)) == spec

    def test_rendered_instance_rebuilds_same_values(self):
        _, _, qm = canonical_negative_instance()
        spec = instance_spec_from(qm)
        _, coat, rebuilt = parse_instance(render_instance(spec)).build()
        assert coat.member_bits() == qm.coat.member_bits()
        assert rebuilt.values == qm.values


class TestResolveTarget:
    def test_bare_element_label(self):
        spec = parse_instance(UNIFORM_DOC)
        ground = spec.ground()
        assert resolve_target("2", spec.names(), ground) == ground.subset(["2"])

    def test_label_list(self):
        spec = parse_instance(UNIFORM_DOC)
        ground = spec.ground()
        assert resolve_target("1 3", spec.names(), ground) == ground.subset(["1", "3"])

    def test_expression(self):
        spec = parse_instance(UNIFORM_DOC)
        ground = spec.ground()
        assert resolve_target("A&!B", spec.names(), ground) == ground.subset(["1"])
        assert resolve_target("empty", spec.names(), ground) == ground.empty()

    def test_unknown_target(self):
        spec = parse_instance(UNIFORM_DOC)
        with pytest.raises(ParseError):
            resolve_target("nope", spec.names(), spec.ground())


class TestRun:
    def test_check_passes_on_power_set(self, power_set_path, capsys):
        assert main(["check", power_set_path]) == 0
        out = capsys.readouterr().out
        assert "RESULT axioms: pass" in out

    def test_check_fails_restricted_on_uniform(self, uniform_path, capsys):
        assert main(["check", uniform_path, "--variant", "restricted"]) == 1
        out = capsys.readouterr().out
        assert "meet-envelope" in out
        assert "X={1,2} Y={2,3}" in out

    def test_check_literal_passes(self, uniform_path, capsys):
        assert main(["check", uniform_path, "--variant", "literal"]) == 0
        capsys.readouterr()

    def test_outer_prints_value_and_cover(self, uniform_path, capsys):
        assert main(["outer", uniform_path, "--set", "2"]) == 0
        out = capsys.readouterr().out
        assert "outer {2} = 1/2 cover {1,2}" in out

    def test_extend_fails_on_uniform(self, uniform_path, capsys):
        assert main(["extend", uniform_path]) == 1
        out = capsys.readouterr().out
        assert "pair-additivity" in out
        assert "table {1} = 1/2" in out

    def test_extend_passes_on_power_set(self, power_set_path, capsys):
        assert main(["extend", power_set_path]) == 0
        capsys.readouterr()

    def test_example_subcommand(self, capsys):
        assert main(["example", "--samples", "50", "--seed", "3"]) == 0
        out = capsys.readouterr().out
        assert "RESULT exponential: pass" in out

    def test_search_subcommand(self, capsys):
        assert main(["search", "--seeds", "0..40"]) == 0
        out = capsys.readouterr().out
        assert "search seeds 0..40" in out
        assert "counterexamples []" in out

    def test_input_errors_exit_two(self, tmp_path, capsys):
        missing = str(tmp_path / "nope.qm")
        assert main(["check", missing]) == 2
        bad = tmp_path / "bad.qm"
        bad.write_text("ground: 1\ncoat: empty\n", encoding="utf-8")
        assert main(["check", str(bad)]) == 2
        capsys.readouterr()

    def test_max_n_guard(self, uniform_path, capsys):
        assert main(["check", uniform_path, "--max-n", "2"]) == 2
        err = capsys.readouterr().err
        assert "exceeds" in err

    def test_outer_requires_known_target(self, uniform_path, capsys):
        assert main(["outer", uniform_path, "--set", "frob"]) == 2
        capsys.readouterr()

    def test_oversized_cover_enumeration_exits_two(self, tmp_path, capsys):
        _, _, qm = random_instance(5, n=5, coat_size=24)
        assert len(qm.coat) > 20
        doc = render_instance(instance_spec_from(qm))
        path = tmp_path / "big.qm"
        path.write_text(doc, encoding="utf-8")
        assert main(["check", str(path)]) == 2
        assert "enumeration" in capsys.readouterr().err
        # a bounded cover size keeps the run feasible
        assert main(["check", str(path), "--max-cover", "2"]) in (0, 1)
        capsys.readouterr()


class TestMachineFormat:
    def test_records_parse_and_have_fixed_keys(self, uniform_path, capsys):
        main(["check", uniform_path, "--format", "machine"])
        lines = capsys.readouterr().out.strip().splitlines()
        records = [json.loads(line) for line in lines]
        checks = [r for r in records if r["record"] == "check"]
        assert len(checks) == 5
        expected_keys = [
            "record", "suite", "check", "status", "witnesses",
            "witness", "lhs", "rhs", "relation", "note",
        ]
        for record in checks:
            assert list(record.keys()) == expected_keys
        assert records[-1]["record"] == "summary"
        meet = next(r for r in checks if r["check"] == "meet-envelope")
        assert meet["status"] == "fail"
        assert meet["lhs"] == "1/4"

    def test_byte_identical_reports(self, uniform_path, tmp_path):
        out1 = tmp_path / "a.jsonl"
        out2 = tmp_path / "b.jsonl"
        for target in (out1, out2):
            code = main([
                "check", uniform_path, "--format", "machine", "--out", str(target),
            ])
            assert code == 1
        assert out1.read_bytes() == out2.read_bytes()
        assert out1.read_bytes()  # non-empty

    def test_console_entry_point(self, uniform_path):
        proc = subprocess.run(
            [sys.executable, "-m", "quasimeasure.cli", "outer", uniform_path, "--set", "A&B"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert "outer {2} = 1/2" in proc.stdout

    def test_matches_golden_reports(self, tmp_path):
        golden_dir = Path(__file__).parent / "golden"
        instance = tmp_path / "golden_instance.qm"
        instance.write_text(UNIFORM_DOC, encoding="utf-8")
        cases = [
            ("uniform_check.jsonl", ["check", str(instance)]),
            ("uniform_outer.jsonl", ["outer", str(instance), "--set", "2"]),
            ("uniform_extend.jsonl", ["extend", str(instance)]),
        ]
        for golden_name, argv in cases:
            produced = tmp_path / golden_name
            main([*argv, "--format", "machine", "--out", str(produced)])
            assert produced.read_bytes() == (golden_dir / golden_name).read_bytes(), golden_name

    def test_byte_identical_across_processes(self, uniform_path):
        argv = [sys.executable, "-m", "quasimeasure.cli", "check", uniform_path,
                "--format", "machine"]
        first = subprocess.run(argv, capture_output=True)
        second = subprocess.run(argv, capture_output=True)
        assert first.returncode == second.returncode == 1
        assert first.stdout == second.stdout
        assert first.stdout.strip()
