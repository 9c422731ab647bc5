import json
from fractions import Fraction

import pytest

from dessinkit.cli import main
from dessinkit.collapse import CompositionChain, collapse_rational
from dessinkit.config import RunConfig
from dessinkit.io import DessinFile, FormatError, load_dessin, save_dessin
from dessinkit.monodromy import is_isomorphic, iter_constellations, sigma_pullback


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


@pytest.fixture
def t0_files(tmp_path, t0):
    pulled = sigma_pullback(t0).drop_trivial(require_transitive=True)
    paths = {}
    for name, c in (("t0", t0), ("pulled", pulled)):
        paths[name] = tmp_path / f"{name}.json"
        save_dessin(DessinFile.from_constellation(c, name=name), paths[name])
    return paths


def test_dessin_round_trip(tmp_path):
    for c in iter_constellations(4, transitive=False):
        d = DessinFile.from_constellation(c, name="x", provenance="test")
        path = tmp_path / "d.json"
        save_dessin(d, path)
        back = load_dessin(path)
        assert back == d
        assert is_isomorphic(back.constellation(require_transitive=False), c)


def test_chain_round_trip():
    chain = collapse_rational(Fraction(1, 2))
    back = CompositionChain.from_json(json.loads(json.dumps(chain.to_json())))
    assert back.to_json() == chain.to_json()


@pytest.mark.parametrize(
    "obj, field",
    [
        ({"sigma0": [], "sigma1": []}, "'n'"),
        ({"n": 0, "sigma0": [], "sigma1": []}, "'n'"),
        ({"n": 3, "sigma1": []}, "sigma0"),
        ({"n": 3, "sigma0": [[1, 4]], "sigma1": []}, "sigma0"),
        ({"n": 3, "sigma0": [[1, 2], [2, 3]], "sigma1": []}, "sigma0"),
        ({"n": 3, "sigma0": [], "sigma1": "12"}, "sigma1"),
    ],
)
def test_format_errors_name_the_field(obj, field):
    with pytest.raises(FormatError, match=field):
        DessinFile.from_json(obj)


def test_config_from_env():
    cfg = RunConfig.from_env({"DESSINKIT_ORACLE_GUARD": "7", "DESSINKIT_STRICT_M_PRIME": "yes"})
    assert cfg.oracle_degree_guard == 7 and cfg.strict_m_prime
    with pytest.raises(ValueError, match="DESSINKIT_NIELSEN_BOUND"):
        RunConfig.from_env({"DESSINKIT_NIELSEN_BOUND": "many"})
    with pytest.raises(ValueError):
        RunConfig(expansion_bound=0)


def test_orbit_bound_command(capsys):
    code, rep, _ = run(capsys, "orbit-bound", "--psi", "11", "--mu", "2,2,2,2,1,1,1", "--form", "alternate")
    assert code == 0
    assert rep["command"] == "orbit-bound"
    assert rep["config"]["oracle_degree_guard"] == 9
    assert rep["result"]["lower_bound"] == 2
    assert rep["result"]["caveats"]


def test_sqct_command(capsys, t0_files):
    code, rep, _ = run(capsys, "sqct", "--input", str(t0_files["pulled"]))
    assert code == 0
    assert rep["result"]["size"] == 1
    assert rep["result"]["classes"][0]["triple"] == [[2, 2, 1], [5], [2, 2, 1]]


def test_pullback_command(capsys, t0_files):
    code, rep, _ = run(capsys, "pullback", "--input", str(t0_files["t0"]))
    assert code == 0 and rep["result"]["sigma_m1_trivial"]
    assert rep["result"]["dessin"]["n"] == 5


def test_compose_command(capsys, t0_files):
    code, rep, _ = run(capsys, "compose", "--outer", str(t0_files["t0"]), "--inner", str(t0_files["t0"]))
    assert code == 0
    assert rep["result"]["passport"][1] == [5] * 5


def test_nielsen_command(capsys, t0_files):
    code, rep, _ = run(capsys, "nielsen", "--a", str(t0_files["t0"]), "--b", str(t0_files["t0"]))
    assert code == 0 and rep["result"]["equal"]


def test_exists_command(capsys):
    code, rep, _ = run(capsys, "exists", "--alpha", "7", "--beta", "4,2,1", "--oracle")
    assert code == 0
    assert rep["result"]["eks_exists"] and rep["result"]["oracle_exists"]
    code, _, err = run(capsys, "exists", "--alpha", "3", "--beta", "2,1,1")
    assert code == 1 and "same integer" in err


def test_collapse_command(capsys, tmp_path):
    out = tmp_path / "chain.json"
    code, rep, _ = run(capsys, "--out", str(out), "collapse", "--minpoly=-2,0,1")
    assert code == 0 and rep is None
    rep = json.loads(out.read_text())
    assert rep["result"]["certificate"]["passed"]
    assert rep["result"]["chain"]["total_degree_odd"]
    code, rep, _ = run(capsys, "collapse", "--r", "1/3")
    assert rep["result"]["chain"]["degrees"] == [3]


def test_collapse_limit_is_a_usage_level_error(capsys):
    code, _, err = run(capsys, "collapse", "--points", "2,-1")
    assert code == 1 and "too large" in err


def test_lemmata_and_cl_census(capsys):
    code, rep, _ = run(capsys, "lemmata", "--t-max", "20")
    assert code == 0 and rep["result"]["lemmas"]["sum_f"]["fails_at"] == [1, 2, 3]
    code, rep, _ = run(capsys, "cl-census", "--t", "1", "--prime")
    assert code == 0 and rep["result"]["census_count"] == 4


def test_usage_errors_exit_one(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["orbit-bound", "--psi", "1,2", "--mu", "3"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 3, "sigma0": [[1, 9]], "sigma1": []}')
    code, _, err = run(capsys, "sqct", "--input", str(bad))
    assert code == 1 and "sigma0" in err
    code, _, err = run(capsys, "sqct", "--input", str(tmp_path / "missing.json"))
    assert code == 1


def test_intransitive_input(capsys, tmp_path):
    path = tmp_path / "split.json"
    path.write_text('{"n": 4, "sigma0": [[1, 2]], "sigma1": [[3, 4]]}')
    code, _, err = run(capsys, "pullback", "--input", str(path))
    assert code == 1 and "intransitive" in err
    code, rep, _ = run(capsys, "--allow-intransitive", "pullback", "--input", str(path))
    assert code == 0 and rep["config"]["require_transitive"] is False


def test_math_failure_exits_two(capsys, monkeypatch):
    import dessinkit.cli as cli

    real = cli.eks_exists
    monkeypatch.setattr(cli, "eks_exists", lambda a, b: not real(a, b))
    code, rep, _ = run(capsys, "exists", "--alpha", "7", "--beta", "4,2,1", "--oracle")
    assert code == 2
    assert rep["result"]["oracle_exists"] != rep["result"]["eks_exists"]
