import json

import pytest

from charcoords.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main, parse_n_range


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_n_ranges():
    assert parse_n_range("2..4") == [2, 3, 4]
    assert parse_n_range("5,2") == [2, 5]


def test_verify_lemmas_pass(capsys):
    code, out, _ = run(capsys, "verify-lemmas", "--n", "2..5", "--samples", "2")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["ok"]
    names = {c["name"] for c in doc["results"][0]["checks"]}
    assert {"parabolic_invariants", "cusp_cohomology_basis", "coboundary_invariance"} <= names


def test_verify_lemmas_rejects_n1(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify-lemmas", "--n", "1"])
    assert info.value.code == EXIT_USAGE


def test_verify_lemmas_failure_exit(capsys, monkeypatch):
    import charcoords.liealg as liealg

    monkeypatch.setattr(liealg, "clebsch_gordan_dims", lambda n: [1])
    code, out, _ = run(capsys, "verify-lemmas", "--n", "3", "--samples", "1")
    assert code == EXIT_FAILED
    assert not json.loads(out)["ok"]


def test_certify_fig8_n3(capsys):
    code, out, _ = run(capsys, "certify", "--builtin", "fig8", "--n", "3")
    assert code == EXIT_OK
    doc = json.loads(out)
    cert = doc["certificates"][0]
    assert cert["verdict"] == "certified" and cert["det_J"] != "0"
    assert doc["relators"] == [{"sign": 1, "word": "AbaBabABaB"}]


def test_certify_n2_contains_q1_lambda(capsys):
    code, out, _ = run(capsys, "certify", "--builtin", "fig8", "--n", "2")
    cert = json.loads(out)["certificates"][0]
    assert cert["Q"][0]["coeffs"] == ["0", "1"]
    assert cert["det_J"] in ("1", "-1")


def test_certify_specialized_tau_and_classes(capsys):
    code, out, _ = run(capsys, "certify", "--n", "2..3", "--tau", "specialize", "--gamma", "1,0", "--gamma", "1,1")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert len(doc["certificates"]) == 4
    assert doc["cusps"][0]["tau"] == {"field": ["1", "-1", "1"], "coeffs": ["2", "-4"]}


def test_certify_bad_manifold(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("gens: a b\nrel: abz\n")
    code, _, err = run(capsys, "certify", "--manifold", str(bad))
    assert code == EXIT_USAGE
    assert "bad.txt:2:" in err


def test_certify_non_parabolic(capsys, tmp_path):
    f = tmp_path / "np.txt"
    f.write_text("gens: a b\ncusp: a b\nmat a: 2 1 1 1\nmat b: 1 1 0 1\n")
    code, _, err = run(capsys, "certify", "--manifold", str(f), "--n", "2")
    assert code == EXIT_USAGE
    assert "trace" in err


def test_continue_n_cap(capsys):
    code, _, err = run(capsys, "continue", "--n", "5")
    assert code == EXIT_USAGE
    assert "cap" in err


def test_continue_is_deterministic(tmp_path, capsys):
    args = ["continue", "--builtin", "fig8", "--n", "2", "--trials", "5", "--sweeps", "2", "--seed", "7"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + ["--output", str(a)]) == EXIT_OK
    assert main(args + ["--output", str(b), "--jobs", "2"]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    res = doc["results"][0]
    assert res["isolation_probe"]["max_distance"] < 1e-8
    assert res["target_sweep"]["all_recovered"]
    capsys.readouterr()


def test_continue_n3_targets(capsys):
    code, out, _ = run(capsys, "continue", "--n", "3", "--target-perturb", "1e-3", "--trials", "3", "--sweeps", "2")
    assert code == EXIT_OK
    res = json.loads(out)["results"][0]
    assert all(t["converged"] and t["target_recovery"] < 1e-9 for t in res["target_sweep"]["trials"])
