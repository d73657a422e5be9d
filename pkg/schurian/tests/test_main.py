import io
import json

import pytest

from schurian.main import run

pytestmark = pytest.mark.integration


def invoke(argv, stdin_text=""):
    out = io.StringIO()
    status = run(argv, stdin=io.StringIO(stdin_text), stdout=out)
    return status, out.getvalue()


def invoke_json(argv, stdin_text=""):
    status, text = invoke(argv, stdin_text)
    return status, json.loads(text)


def gen(*args):
    status, text = invoke(["gen", *args])
    assert status == 0
    return text


def test_gen_groupoid_pi1():
    status, report = invoke_json(["pi1"], gen("groupoid", "2"))
    assert status == 0
    assert report["generators"] == 1
    assert report["relators"] == 2
    assert report["abelianization"] == {"rank": 0, "torsion": []}
    assert report["base"] == "1"
    assert report["tree"] == ["e_2_1"]


def test_gen_ladder_hurewicz():
    status, report = invoke_json(["hurewicz", "--field", "q"], gen("ladder", "1", "0"))
    assert status == 0
    assert report["dimCharacters"] == 1
    assert report["dimHH1"] == 1
    assert report["rank"] == 1
    assert report["verdict"] == "isomorphism"


def test_gen_ladder_cw():
    status, report = invoke_json(["cw", "--emit", "json"], gen("ladder", "1", "0"))
    assert status == 0
    assert (report["vertices"], report["edges"], report["twoCells"], report["euler"]) == (4, 6, 2, 0)
    assert report["homology"] == {"rank": 1, "torsion": []}
    assert report["cells"][0]["boundary"] == ["beta1", "alpha0", "a1_to_b0^-1"]


def test_cw_dot(data_dir):
    status, text = invoke(["cw", str(data_dir / "groupoid_2.json"), "--emit", "dot"])
    assert status == 0
    assert text.startswith("digraph CW {")
    assert "// bigon" in text


def test_gen_is_deterministic():
    assert gen("ladder", "2", "1") == gen("ladder", "2", "1")
    assert json.loads(gen("--field", "gf:7", "groupoid", "3"))["field"] == {"type": "gf", "p": 7}


def test_validate(data_dir):
    status, report = invoke_json(["validate", str(data_dir / "ladder_1_0.json")])
    assert status == 0
    assert report == {"valid": True, "objects": 4, "homs": 6, "violations": []}
    status, report = invoke_json(["validate", str(data_dir / "broken_associativity.json")])
    assert status == 2
    assert not report["valid"]
    assert report["violations"][0]["kind"] == "associativity"


def test_invalid_category_on_load(data_dir):
    status, report = invoke_json(["pi1", str(data_dir / "broken_associativity.json")])
    assert status == 2
    assert report["violations"][0]["morphisms"] == ["h", "g", "f"]


def test_malformed_input_exit_code():
    status, report = invoke_json(["pi1"], "{not json")
    assert status == 2
    assert "line 1" in report["detail"]


def test_unknown_base(data_dir):
    status, report = invoke_json(["pi1", str(data_dir / "ladder_1_0.json"), "--base", "c9"])
    assert status == 2
    assert "c9" in report["detail"]


def test_pi1_simplify_and_base(data_dir):
    status, report = invoke_json(["pi1", str(data_dir / "ladder_1_0.json"), "--simplify", "--base", "a0"])
    assert status == 0
    assert report["simplified"] is True
    assert report["generatorNames"] == ["alpha1"]
    assert report["relatorWords"] == []


def test_abelian_agrees_with_cellular():
    status, report = invoke_json(["abelian"], gen("ladder", "2", "0"))
    assert status == 0
    assert report["agree"] is True
    assert report["abelianization"] == {"rank": 1, "torsion": []}


def test_characters_and_hh1():
    ladder = gen("ladder", "1", "0")
    status, report = invoke_json(["characters", "--field", "gf:7"], ladder)
    assert status == 0
    assert report["field"] == "gf:7"
    assert report["basis"] == [{"a1_to_b0": "0", "alpha1": "1", "gamma0": "0"}]
    status, report = invoke_json(["hh1"], ladder)
    assert status == 0
    assert (report["dimHH1"], report["dimDerivations"], report["dimInner"], report["dimCellular"]) == (1, 4, 3, 1)


def test_derivation_character():
    status, report = invoke_json(["derivation-character"], gen("ladder", "1", "0"))
    assert status == 0
    assert len(report["entries"]) == 1
    assert set(report["entries"][0]["character"]) == {"a1_to_b0", "alpha1", "gamma0"}


def test_hh1_of_disconnected_category():
    text = json.dumps({"objects": ["x", "y"]})
    status, report = invoke_json(["hh1"], text)
    assert status == 2
    assert "connected" in report["detail"]


def test_grading_check(data_dir):
    ladder = str(data_dir / "ladder_1_0.json")
    status, report = invoke_json(["grading", "check", ladder, "--grading", str(data_dir / "ladder_1_0_z.json")])
    assert status == 0
    assert report["valid"] is True
    status, report = invoke_json(["grading", "check", ladder, "--grading", str(data_dir / "groupoid_2_c2.json")])
    assert status == 2


def test_grading_connected(data_dir):
    status, report = invoke_json([
        "grading", "connected", str(data_dir / "groupoid_2.json"), "--grading", str(data_dir / "groupoid_2_c2.json"),
    ])
    assert status == 0
    assert report["connected"] is False
    assert report["loopDegrees"] == {"e_2_1": "0", "e_1_2": "0"}


def test_grading_universal(data_dir):
    status, report = invoke_json(["grading", "universal", str(data_dir / "ladder_1_0.json")])
    assert status == 0
    assert report["connectors"] == "spanning-tree"
    assert report["generators"] == ["a1_to_b0", "alpha1", "gamma0"]
    assert report["degrees"]["alpha1"] == ["alpha1"]
    assert report["connectorWalks"]["a1"] == ["beta1^-1"]


def test_grading_quotient(data_dir):
    ladder = str(data_dir / "ladder_1_0.json")
    status, report = invoke_json(["grading", "quotient", ladder, "--grading", str(data_dir / "ladder_1_0_c2.json")])
    assert status == 0
    assert report["ok"] is True
    assert report["images"] == {"a1_to_b0": "0", "alpha1": "1", "gamma0": "0"}
    status, report = invoke_json([
        "grading", "quotient", str(data_dir / "groupoid_2.json"), "--grading", str(data_dir / "groupoid_2_c2.json"),
    ])
    assert status == 1
    assert report["surjective"] is False


def test_grading_smash(data_dir):
    status, report = invoke_json([
        "grading", "smash", str(data_dir / "ladder_1_0.json"), "--grading", str(data_dir / "ladder_1_0_c2.json"),
    ])
    assert status == 0
    assert (report["objects"], report["components"], report["connected"], report["gradingConnected"]) == \
        (8, 1, True, True)
    status, report = invoke_json([
        "grading", "smash", str(data_dir / "groupoid_2.json"), "--grading", str(data_dir / "groupoid_2_c2.json"),
    ])
    assert (report["components"], report["gradingConnected"]) == (2, False)


def test_grading_smash_output_is_a_category(data_dir):
    _, report = invoke_json([
        "grading", "smash", str(data_dir / "groupoid_2.json"), "--grading", str(data_dir / "groupoid_2_c2.json"),
    ])
    status, validation = invoke_json(["validate"], json.dumps(report["category"]))
    assert status == 0
    assert validation["objects"] == 4


def test_grading_smash_needs_finite_group(data_dir):
    status, report = invoke_json([
        "grading", "smash", str(data_dir / "ladder_1_0.json"), "--grading", str(data_dir / "ladder_1_0_z.json"),
    ])
    assert status == 2
    assert "finite" in report["detail"]


def test_grading_conjugate(data_dir):
    status, report = invoke_json([
        "grading", "conjugate", str(data_dir / "ladder_1_0.json"),
        "--grading", str(data_dir / "ladder_1_0_c2.json"),
        "--conjugator", str(data_dir / "ladder_1_0_conjugator.json"),
    ])
    assert status == 0
    assert report["valid"] is True
    assert report["witness"]["verified"] is True
    # alpha1: a1 -> b1 with a = 1 at both ends
    assert report["grading"]["degrees"]["alpha1"] == "1"
    assert report["grading"]["degrees"]["beta1"] == "1"


def test_grading_conjugate_needs_conjugator(data_dir):
    status, _ = invoke_json(["grading", "conjugate", str(data_dir / "ladder_1_0.json")])
    assert status == 2


def test_grading_zgrading(data_dir):
    status, report = invoke_json([
        "grading", "zgrading", str(data_dir / "ladder_1_0.json"), "--grading", str(data_dir / "ladder_1_0_z.json"),
    ])
    assert status == 0
    assert report["conjugatorVerified"] is True
    assert report["conjugator"]["a0"] == []
    assert report["connectorWalks"]["a0"] == []


def test_usage_error():
    status, _ = invoke(["frobnicate"])
    assert status == 2
    status, _ = invoke(["gen", "ladder", "1"])
    assert status == 2
