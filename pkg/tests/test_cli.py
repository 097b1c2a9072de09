import json
import subprocess
import sys

import pytest

from besg import jsonio

from .fixtures import write_fixture_files


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    return write_fixture_files(tmp_path_factory.mktemp("objects"))


def run_cli(*argv, expect=0):
    proc = subprocess.run([sys.executable, "-m", "besg.cli", *argv],
                          capture_output=True, text=True)
    assert proc.returncode == expect, proc.stderr or proc.stdout
    return proc


def output_json(proc):
    return json.loads(proc.stdout)


class TestValidate:
    def test_graph_and_besg(self, files):
        proc = run_cli("validate", "--graph", files["sk3.graph"],
                       "--besg", files["skn.besg"])
        data = output_json(proc)
        assert data["validated"][0]["classification"] == "string"

    def test_wire_inconsistent_rejected(self, files, tmp_path):
        from .fixtures import xyz_decoding, xyz_grammar

        path = tmp_path / "wireincons.besg.json"
        payload = {
            "kind": "besg",
            "alphabets": jsonio.alphabets_to_data(xyz_grammar().alphabets),
            "grammar": jsonio.grammar_to_data(xyz_grammar()),
            "decoding": jsonio.decoding_to_data(xyz_decoding()),
        }
        path.write_text(jsonio.canonical_json(payload))
        proc = run_cli("validate", "--besg", str(path), expect=2)
        assert "cardinality" in proc.stderr

    def test_summary_format(self, files):
        proc = run_cli("validate", "--graph", files["sk3.graph"],
                       "--format", "summary")
        assert "ok" in proc.stdout


class TestDeriveDecode:
    def test_derive_script(self, files, tmp_path):
        script = {"kind": "script", "steps": [["n0", 0], ["n2", 2]]}
        spath = tmp_path / "two.script.json"
        spath.write_text(jsonio.canonical_json(script))
        proc = run_cli("derive", "--grammar", files["skn.besg"],
                       "--script", str(spath), "--decode")
        data = output_json(proc)
        assert data["terminal"]
        labels = [v["label"] for v in data["decoded"]["vertices"]]
        assert labels.count("n") == 2 and labels.count("w") == 1

    def test_decode_empty_graph_identity(self, files):
        proc = run_cli("decode", "--graph", files["empty.graph"])
        data = output_json(proc)
        assert data["vertices"] == [] and data["edges"] == []

    def test_decode_with_besg(self, files, tmp_path):
        from besg.jsonio import canonical_json, graph_to_data

        from .fixtures import encoded_k_n

        path = tmp_path / "k3enc.graph.json"
        path.write_text(canonical_json(graph_to_data(encoded_k_n(3))))
        proc = run_cli("decode", "--graph", str(path),
                       "--besg", files["skn.besg"])
        data = output_json(proc)
        assert len(data["vertices"]) == 6


class TestDecisions:
    def test_member_yes_with_witness(self, files):
        proc = run_cli("member", "--grammar", files["skn.besg"],
                       "--graph", files["sk3.graph"])
        data = output_json(proc)
        assert data["member"] and data["witnesses"]

    def test_member_no(self, files):
        run_cli("member", "--grammar", files["skn.besg"],
                "--graph", files["sk12.graph"], expect=1)

    def test_enumerate(self, files):
        proc = run_cli("enumerate", "--besg", files["skn.besg"], "--bound", "4")
        assert output_json(proc)["count"] == 3

    def test_enumerate_wsize(self, files):
        proc = run_cli("enumerate", "--besg", files["skmn.besg"],
                       "--wsize", "4,4,0")
        assert output_json(proc)["count"] == 6

    def test_env_budget_cap(self, files):
        import os

        env = dict(os.environ, BESG_BUDGET="10")
        proc = subprocess.run(
            [sys.executable, "-m", "besg.cli", "enumerate",
             "--besg", files["skn.besg"], "--bound", "40"],
            capture_output=True, text=True, env=env)
        assert proc.returncode == 2
        assert "budget" in proc.stderr


class TestRewrites:
    def test_rewrite_graph(self, files):
        proc = run_cli("rewrite-graph", "--host", files["unitality-host.graph"],
                       "--rule", files["unitality.rule"])
        data = output_json(proc)
        labels = [v["label"] for v in data["result"]["vertices"]]
        assert "u" not in labels and "m" not in labels

    def test_rewrite_graph_no_match(self, files):
        run_cli("rewrite-graph", "--host", files["sk3.graph"],
                "--rule", files["unitality.rule"], expect=1)

    def test_rewrite_grammar(self, files):
        proc = run_cli("rewrite-grammar", "--host", files["graytails.besg"],
                       "--rule", files["complete-star.grammar_rule"])
        data = output_json(proc)
        assert data["matchings"] == 1
        assert len(data["result"]["grammar"]["productions"]) == 6

    def test_instantiate_length(self, files):
        proc = run_cli("instantiate", "--rule",
                       files["complete-star.grammar_rule"], "--length", "3")
        data = output_json(proc)
        assert len(data["L"]["vertices"]) == 9  # K_3 with outputs, decoded

    def test_certify(self, files):
        proc = run_cli("certify", "--host", files["graytails.besg"],
                       "--rule", files["complete-star.grammar_rule"],
                       "--tree", files["spine.tree"])
        data = output_json(proc)
        assert data["verified"] and len(data["replays"]) == 1

    def test_convert_bang(self, files):
        proc = run_cli("convert-bang", "--bang", files["skmn.bang"])
        data = output_json(proc)
        assert data["encoded"] and data["kind"] == "besg"


class TestRoundTripViaFiles:
    def test_file_round_trip(self, files, tmp_path):
        kind, obj = jsonio.read_file(files["skn.besg"])
        out = tmp_path / "again.json"
        jsonio.write_file(str(out), obj)
        assert out.read_text() == open(files["skn.besg"]).read()
