import json
import os
import subprocess
import sys

import pytest
from gmpy2 import mpq

from osserman.catalog import clifford_tensor, constant_curvature, random_act, standard_structure
from osserman.cli import EXIT_INPUT, EXIT_OK, EXIT_VIOLATION, build_parser, main
from osserman.curvature import CONVENTION
from osserman.io import (
    TIMESTAMP_KEY, TensorFileError, dump_tensor, load_tensor, parse_rational, strip_timestamp, tensor_from_dict,
    tensor_to_dict,
)
from osserman.space import PseudoEuclideanSpace


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def comps(n, sig, items):
    return {"n": n, "signature": list(sig), "convention": CONVENTION,
            "components": [{"i": i, "j": j, "k": k, "l": l, "value": v} for (i, j, k, l), v in items]}


# ------------------------------------------------------------------------ io

def test_parse_rational():
    assert parse_rational("-3/4", "x") == mpq(-3, 4)
    assert parse_rational(" 7 ", "x") == 7
    for bad in ("0.5", "1/0", "abc", 1.5, None, True):
        with pytest.raises(TensorFileError):
            parse_rational(bad, "x")


@pytest.mark.parametrize("T", [
    constant_curvature(PseudoEuclideanSpace(2, 2), mpq(-2, 3)),
    random_act(PseudoEuclideanSpace(3, 1), 9),
    clifford_tensor(PseudoEuclideanSpace(4, 0), standard_structure((4, 0), 2), 1, [2, mpq(1, 5)]),
])
def test_round_trip(tmp_path, T):
    path = tmp_path / "t.json"
    dump_tensor(T, path)
    U = load_tensor(path)
    assert U.space == T.space and (U.R == T.R).all()
    assert tensor_to_dict(U) == tensor_to_dict(T)


def test_orbit_fill_in():
    # one listed component determines its whole orbit
    T = tensor_from_dict(comps(2, (2, 0), [((1, 2, 2, 1), "3")]))
    assert (T.R[0, 1, 1, 0], T.R[1, 0, 0, 1], T.R[0, 1, 0, 1], T.R[1, 0, 1, 0]) == (3, 3, -3, -3)


def test_listed_components_are_not_overwritten():
    d = comps(2, (2, 0), [((1, 2, 2, 1), "3"), ((2, 1, 2, 1), "3")])
    with pytest.raises(Exception, match="antisymmetry"):
        tensor_from_dict(d)
    assert not tensor_from_dict(d, validate=False).validate_symmetries().ok


@pytest.mark.parametrize("mutate, fragment", [
    (lambda d: d.update(convention="R_ijkl = <R(e_i,e_j)e_l, e_k>"), "convention"),
    (lambda d: d.update(n=3), "n:"),
    (lambda d: d["components"][0].update(value="1/0"), "components[0].value"),
    (lambda d: d["components"][0].update(k=9), "components[0].k"),
    (lambda d: d.update(field="quaternion"), "field"),
    (lambda d: d.update(constructor={"name": "constant_curvature"}), "exactly one"),
])
def test_malformed_files(mutate, fragment):
    d = comps(2, (1, 1), [((1, 2, 2, 1), "1")])
    mutate(d)
    with pytest.raises(TensorFileError, match=fragment.replace("[", r"\[").replace("]", r"\]")):
        tensor_from_dict(d)


def test_conflicting_duplicates():
    d = comps(2, (2, 0), [((1, 2, 2, 1), "1"), ((1, 2, 2, 1), "2")])
    with pytest.raises(TensorFileError, match="given twice"):
        tensor_from_dict(d)


def test_json_syntax_error_has_location(tmp_path):
    p = write(tmp_path, "bad.json", '{"n": 2,\n "signature": [1 1]}')
    with pytest.raises(TensorFileError, match=r"bad\.json:2:"):
        load_tensor(p)


def test_constructor_file():
    T = tensor_from_dict({"n": 3, "signature": [2, 1], "constructor": {"name": "constant_curvature",
                                                                        "parameters": {"k": "2/5"}}})
    assert (T.R == constant_curvature(PseudoEuclideanSpace(2, 1), mpq(2, 5)).R).all()


# ----------------------------------------------------------------------- cli

@pytest.fixture
def space_form_file(tmp_path):
    p = tmp_path / "cc.json"
    dump_tensor(constant_curvature(PseudoEuclideanSpace(2, 1), 2), p)
    return str(p)


def test_validate_exit_codes(tmp_path, space_form_file, capsys):
    assert main(["validate", space_form_file]) == EXIT_OK
    bad = write(tmp_path, "b.json", comps(4, (4, 0), [((1, 2, 3, 4), "1/5")]))
    assert main(["validate", bad]) == EXIT_VIOLATION
    assert "bianchi" in capsys.readouterr().out.lower()
    zero_den = write(tmp_path, "z.json", comps(2, (2, 0), [((1, 2, 2, 1), "1/0")]))
    assert main(["validate", zero_den]) == EXIT_INPUT
    assert "components[0].value" in capsys.readouterr().err
    assert main(["validate", str(tmp_path / "missing.json")]) == EXIT_INPUT


def test_report_is_deterministic_modulo_timestamp(tmp_path, space_form_file):
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        assert main(["report", space_form_file, "--samples", "6", "--seed", "3", "--out", str(out)], quiet=True) == 0
        outs.append(json.loads(out.read_text()))
    assert TIMESTAMP_KEY in outs[0]
    assert strip_timestamp(outs[0]) == strip_timestamp(outs[1])
    assert set(outs[0]["verdicts"].values()) == {"holds-on-samples"}
    assert outs[0]["osserman"]["certificate"]["a"] == ["0", "4", "-4", "1"]


def test_report_on_violating_tensor(tmp_path):
    p = tmp_path / "r.json"
    dump_tensor(random_act(PseudoEuclideanSpace(2, 1), 11), p)
    out = tmp_path / "rep.json"
    assert main(["report", str(p), "--samples", "6", "--out", str(out)], quiet=True) == EXIT_OK
    rep = json.loads(out.read_text())
    assert rep["osserman"]["verdict"] == "violated" and "witness" in rep["osserman"]
    assert rep["consistent"]


def test_help_shows_defaults():
    text = "".join(build_parser()._subparsers._group_actions[0].choices["scan"].format_help().split())
    assert "(default:20)" in text and "(default:duality-violation)" in text and "(default:2,1)" in text
    assert build_parser().parse_args(["scan"]).signature == (2, 1)


def test_seed_from_environment():
    env = {**os.environ, "OSSERMAN_SEED": "1234"}
    code = "from osserman.cli import build_parser; print(build_parser().parse_args(['scan']).seed)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "1234"


def test_scan_archive_reverifies(tmp_path):
    arch = tmp_path / "w.json"
    assert main(["scan", "--signature", "2,1", "--instances", "6", "--samples", "8", "--out", str(arch)],
                quiet=True) == EXIT_OK
    d = json.loads(arch.read_text())
    assert d["hits"] == len(d["witnesses"]) > 0
    assert all(w["reverified"] for w in d["witnesses"])


def test_scan_dimension_checks():
    assert main(["scan", "--signature", "2,1", "--dim", "4"], quiet=True) == EXIT_INPUT
    assert main(["scan", "--signature", "5,4", "--instances", "1"], quiet=True) == EXIT_INPUT


def test_console_script_runs(space_form_file):
    out = subprocess.run([sys.executable, "-m", "osserman.cli", "validate", space_form_file],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("ok")
