"""CLI smoke tests: every command end to end, exit codes, and the JSON reports."""

from __future__ import annotations

import io
import json
import logging

import pytest

from logkit import cli
from logkit.log_model import cyclic_shift_family, serialize_log

TREFOIL = "a | b | c\nb | c | a\n"
FREE = "gen: x\n"


@pytest.fixture
def trefoil_file(log_file):
    return log_file(TREFOIL, "trefoil.log")


# --- check -------------------------------------------------------------------


def test_check_trefoil(trefoil_file, capsys):
    assert cli.main(["check", trefoil_file]) == 0
    out = capsys.readouterr().out
    assert "compressed: yes" in out
    assert "fig1: (a|b|c) (b|c|a)" in out
    assert "npc: false" in out
    assert "theorem2_applicable: false" in out
    assert "oracle: agrees" in out


def test_check_strict_exit_codes(trefoil_file, log_file):
    family = log_file(serialize_log(cyclic_shift_family(11)), "family.log")
    assert cli.main(["check", "--strict", trefoil_file]) == 1
    assert cli.main(["check", "--strict", family]) == 0


def test_check_json(trefoil_file, capsys):
    assert cli.main(["check", "--json", trefoil_file]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["verdict"]["npc"] is False
    assert payload["validation"]["shape"] == "Interval"
    assert payload["oracle_agrees"] is True


def test_check_reads_stdin(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(TREFOIL))
    assert cli.main(["check", "-"]) == 0
    assert "npc: false" in capsys.readouterr().out


@pytest.mark.parametrize("text", ["a | b\n", "gen: a\n", "# nothing\n"])
def test_check_rejects_bad_input(log_file, text):
    assert cli.main(["check", log_file(text)]) == 2


def test_missing_file_is_a_usage_error(tmp_path):
    assert cli.main(["check", str(tmp_path / "nope.log")]) == 2


# --- present / abelianize ------------------------------------------------------


def test_present_with_all_powers(trefoil_file, capsys):
    assert cli.main(["present", trefoil_file, "--all-powers", "3"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "gen: a b c"
    assert out[-3:] == ["rel: a^3", "rel: b^3", "rel: c^3"]


def test_present_algebra_format(trefoil_file, capsys):
    assert cli.main(["present", trefoil_file, "--power", "b:5", "--format", "algebra"]) == 0
    assert "b*b*b*b*b" in capsys.readouterr().out


def test_present_braid_json(capsys):
    assert cli.main(["present", "--braid", "3", "--all-powers", "2", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload == {
        "generators": ["s1", "s2"],
        "relators": ["s1 s2 s1 s2^-1 s1^-1 s2^-1", "s1^2"],
    }


@pytest.mark.parametrize(
    "argv",
    [
        ["present", "--braid", "3"],
        ["present", "IN", "--braid", "3", "--all-powers", "2"],
        ["present"],
        ["present", "IN", "--power", "z:3"],
        ["present", "IN", "--power", "a"],
        ["present", "IN", "--all-powers", "0"],
    ],
)
def test_present_usage_errors(trefoil_file, argv):
    argv = [trefoil_file if a == "IN" else a for a in argv]
    assert cli.main(argv) == 2


@pytest.mark.parametrize(
    "extra,expected",
    [([], "Z"), (["--all-powers", "4"], "Z_4"), (["--power", "a:2"], "Z_2")],
)
def test_abelianize(trefoil_file, capsys, extra, expected):
    assert cli.main(["abelianize", trefoil_file, *extra]) == 0
    assert capsys.readouterr().out.strip() == expected


# --- order / kernel ------------------------------------------------------------


@pytest.mark.parametrize("strategy", ["hlt", "felsch"])
def test_order(trefoil_file, capsys, strategy):
    assert cli.main(["order", trefoil_file, "--all-powers", "3", "--strategy", strategy]) == 0
    assert capsys.readouterr().out.strip() == "24"


def test_order_of_a_braid_quotient(capsys):
    assert cli.main(["order", "--braid", "3", "--all-powers", "4"]) == 0
    assert capsys.readouterr().out.strip() == "96"


def test_order_subgroup_index(trefoil_file, capsys):
    assert cli.main(["order", trefoil_file, "--all-powers", "3", "--subgroup", "a"]) == 0
    assert capsys.readouterr().out.strip() == "8"


def test_order_dumps_the_table(trefoil_file, capsys):
    assert cli.main(["order", trefoil_file, "--all-powers", "2", "--dump-table", "plain"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "6"
    assert lines[1].split() == ["coset", "a", "a^-1", "b", "b^-1", "c", "c^-1"]
    assert len(lines) == 2 + 6


def test_order_json(trefoil_file, capsys):
    argv = ["order", trefoil_file, "--all-powers", "2", "--json", "--dump-table", "json"]
    assert cli.main(argv) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["status"] == "finite"
    assert payload["order"] == 6
    assert payload["summary"] == "6"
    assert len(payload["table"]["rows"]) == 6


def test_order_exceeded_is_not_an_error(log_file, capsys):
    free = log_file(FREE, "free.txt")
    assert cli.main(["order", free, "--max-cosets", "100"]) == 0
    assert capsys.readouterr().out.strip() == "exceeded limit (consistent with infinite)"
    assert cli.main(["order", free, "--max-cosets", "100", "--strict"]) == 1


def test_order_ceiling_from_the_environment(log_file, monkeypatch, capsys):
    monkeypatch.setenv("LOGKIT_MAX_COSETS", "50")
    assert cli.main(["order", log_file(FREE, "free.txt"), "--json"]) == 0
    stats = json.loads(capsys.readouterr().out)["stats"]
    assert stats["stopped_by"] == "max_cosets"
    assert stats["peak"] <= 50


def test_kernel_with_order(trefoil_file, capsys):
    assert cli.main(["kernel", trefoil_file, "--all-powers", "3", "--n", "3", "--order"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("gen: ")
    assert out.splitlines()[-1] == "order: 8"


def test_kernel_json(trefoil_file, capsys):
    assert cli.main(["kernel", trefoil_file, "--n", "2", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert "a_1" in payload["kernel"]["generators"]
    assert "order" not in payload


def test_kernel_rejects_a_relator_outside_the_map(trefoil_file):
    assert cli.main(["kernel", trefoil_file, "--power", "a:2", "--n", "3"]) == 2


# --- family ------------------------------------------------------------------


def test_family_prints_the_log(capsys):
    assert cli.main(["family", "cyclic-shift", "--n", "11"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert "0 | 3 | 1" in out
    assert "9 | 1 | 10" in out


def test_family_range(capsys, caplog):
    with caplog.at_level(logging.WARNING, logger="logkit.cli"):
        assert cli.main(["family", "cyclic-shift", "--range", "9:11", "--json"]) == 0
    assert "threshold" not in caplog.text
    rows = json.loads(capsys.readouterr().out)
    assert [r["n"] for r in rows] == [9, 10, 11]
    assert [r["theorem2_applicable"] for r in rows] == [False, True, True]
    assert rows[0]["witness"].startswith("fig2")


def test_family_range_strict(capsys):
    assert cli.main(["family", "cyclic-shift", "--range", "10:12", "--strict"]) == 0
    assert cli.main(["family", "cyclic-shift", "--range", "9:12", "--strict"]) == 1


def test_family_range_must_be_ordered():
    assert cli.main(["family", "cyclic-shift", "--range", "12:9"]) == 2


# --- sphere / audit-diagram ------------------------------------------------------


def test_sphere_emits_json(capsys):
    assert cli.main(["sphere", "power", "--gen", "g", "--n", "4"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload["faces"]) == 2
    assert [f["sign"] for f in payload["faces"]] == ["+", "-"]


def test_sphere_audit(capsys):
    assert cli.main(["sphere", "edge", "--edge", "a|b|c", "--n", "5", "--audit", "--strict"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "valid: yes (closed)"
    assert "chi: 2" in out
    assert "total curvature: 4 (= 2 chi: yes)" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["sphere", "edge", "--n", "3"],
        ["sphere", "edge", "--edge", "a|b", "--n", "3"],
        ["sphere", "edge", "--edge", "a|a|c", "--n", "3"],
        ["sphere", "power", "--n", "1"],
    ],
)
def test_sphere_errors(argv):
    assert cli.main(argv) == 2


def test_audit_diagram_round_trip(tmp_path, capsys):
    assert cli.main(["sphere", "power", "--gen", "g", "--n", "3"]) == 0
    path = tmp_path / "sphere.json"
    path.write_text(capsys.readouterr().out, encoding="utf-8")
    angles = [{"face": f, "corner": k, "angle": "1/3"} for f in (0, 1) for k in range(3)]
    angle_path = tmp_path / "angles.json"
    angle_path.write_text(json.dumps(angles), encoding="utf-8")

    assert cli.main(["audit-diagram", str(path), "--angles", str(angle_path), "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["validity"]["valid"] is True
    assert payload["curvature"]["vertices"][0]["kappa"] == "4/3"
    assert payload["curvature"]["gauss_bonnet_holds"] is True


def test_audit_diagram_against_a_log_with_powers(tmp_path, log_file, capsys):
    assert cli.main(["sphere", "edge", "--edge", "a|b|c", "--n", "3"]) == 0
    path = tmp_path / "edge.json"
    path.write_text(capsys.readouterr().out, encoding="utf-8")
    edge_log = log_file("a | b | c\n", "edge.log")

    argv = ["audit-diagram", str(path), "--against", edge_log, "--all-powers", "3", "--strict"]
    assert cli.main(argv) == 0
    assert "valid: yes (closed)" in capsys.readouterr().out

    assert cli.main(["audit-diagram", str(path), "--against", edge_log, "--strict"]) == 1
    out = capsys.readouterr().out
    assert "valid: no (closed)" in out
    assert "not a relator" in out


def test_audit_diagram_rejects_bad_json(log_file):
    assert cli.main(["audit-diagram", log_file("{", "bad.json")]) == 2


# --- search and parser ----------------------------------------------------------


def test_search(capsys):
    assert cli.main(["search", "--max-vertices", "3", "--strict"]) == 0
    out = capsys.readouterr().out
    assert "disagreements: 0" in out


def test_search_ceiling():
    assert cli.main(["search", "--max-vertices", "9"]) == 2


def test_no_command_is_a_usage_error():
    assert cli.main([]) == 2


def test_help_exits_cleanly(capsys):
    assert cli.main(["--help"]) == 0
    assert "audit-diagram" in capsys.readouterr().out
