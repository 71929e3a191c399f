import json
import math

import pytest

from ihskit.cli import run


def payload(result):
    assert result.stdout, result.stderr
    return json.loads(result.stdout)


def write_flagship(tmp_path):
    doc = tmp_path / "M.json"
    h = [1 if i in (16, 17) else 0 for i in range(23)]
    e = [1 if i == 22 else 0 for i in range(23)]
    doc.write_text(json.dumps({"label": "M", "basis": [h, e]}))
    return str(doc)


# ---------------------------------------------------------------------------
# lattice


def test_lattice_info_by_name():
    r = run(["lattice", "info", "--name", "L2"])
    assert r.exit_code == 0
    p = payload(r)
    assert p["signature"] == [3, 20]
    assert p["det"] == 2
    assert p["discriminant_group"] == [2]


def test_lattice_info_by_file(tmp_path):
    doc = tmp_path / "lat.json"
    doc.write_text(json.dumps({"label": "A1", "gram": [[-2]]}))
    r = run(["lattice", "info", "--file", str(doc)])
    assert r.exit_code == 0
    assert payload(r)["det"] == -2


def test_lattice_info_big_determinant_encoded_as_string(tmp_path):
    doc = tmp_path / "big.json"
    doc.write_text(json.dumps({"label": "B", "gram": [[2 ** 60, 0], [0, 1]]}))
    r = run(["lattice", "info", "--file", str(doc)])
    assert payload(r)["det"] == str(2 ** 60)


def test_lattice_unknown_name_exit_one():
    r = run(["lattice", "info", "--name", "NOPE"])
    assert r.exit_code == 1
    err = json.loads(r.stderr)
    assert err["error"]["kind"] == "LatticeError"


def test_lattice_missing_selector_exit_two():
    r = run(["lattice", "info"])
    assert r.exit_code == 2


def test_catalog_env_override(tmp_path, monkeypatch):
    alt = tmp_path / "cat.json"
    alt.write_text(json.dumps({"version": 1,
                               "lattices": [{"label": "Q", "gram": [[4]]}]}))
    monkeypatch.setenv("IHSKIT_CATALOG", str(alt))
    r = run(["lattice", "info", "--name", "Q"])
    assert r.exit_code == 0
    assert payload(r)["det"] == 4


# ---------------------------------------------------------------------------
# isometry


def test_isometry_info_and_factor(tmp_path):
    doc = tmp_path / "iso.json"
    doc.write_text(json.dumps({"lattice": {"label": "m", "gram": [[2, 0], [0, -2]]},
                               "matrix": [[1, 0], [0, -1]]}))
    r = run(["isometry", "info", "--file", str(doc)])
    p = payload(r)
    assert p["involution"] and p["spinor_norm"] == 1
    assert p["invariant_basis"] == [[1, 0]]

    r = run(["isometry", "factor", "--file", str(doc)])
    p = payload(r)
    assert p["count"] == 1
    assert p["count"] <= p["max_expected"]
    # Rational wire format: every coordinate as a num/den pair.
    assert p["mirrors"][0] == [{"num": "0", "den": "1"}, {"num": "2", "den": "1"}]


def test_isometry_rejects_non_isometry(tmp_path):
    doc = tmp_path / "bad.json"
    doc.write_text(json.dumps({"lattice": "U", "matrix": [[1, 1], [0, 1]]}))
    r = run(["isometry", "info", "--file", str(doc)])
    assert r.exit_code == 1


def test_isometry_admissible():
    r = run(["isometry", "admissible", "--m0", "Zh"])
    p = payload(r)
    assert p["t"] == -17
    assert p["spinor_norm"] == 1
    assert p["induced_gram"] == [[2, 0], [0, -2]]
    assert run(["isometry", "admissible", "--m0", "bogus"]).exit_code == 1


# ---------------------------------------------------------------------------
# delta and chambers


def test_delta_enum_flagship(tmp_path):
    r = run(["delta", "enum", "--lattice", write_flagship(tmp_path),
             "--ambient", "L2"])
    p = payload(r)
    assert p["completeness"] == {"kind": "exact"}
    assert p["count"] == 6
    assert [v["coords"] for v in p["vectors"]] == [
        [-2, -3], [-2, 3], [0, -1], [0, 1], [2, -3], [2, 3]]
    assert [v["norm"] for v in p["vectors"]] == [-10, -10, -2, -2, -10, -10]


def test_delta_requires_ambient(tmp_path):
    doc = tmp_path / "M.json"
    doc.write_text(json.dumps({"basis": [[1, 0], [0, 1]]}))
    r = run(["delta", "enum", "--lattice", str(doc)])
    assert r.exit_code == 2


def test_delta_ambient_in_document(tmp_path):
    doc = tmp_path / "M.json"
    doc.write_text(json.dumps({"ambient": {"label": "A", "gram": [[-2]]},
                               "basis": [[1]]}))
    r = run(["delta", "enum", "--lattice", str(doc)])
    assert payload(r)["count"] == 2


def test_chambers_rank2_payload(tmp_path):
    r = run(["chambers", "rank2", "--lattice", write_flagship(tmp_path),
             "--ambient", "L2", "--anchor", "1,0", "--m0", "1,0"])
    p = payload(r)
    assert [c["index"] for c in p["chambers"]] == [1, 2, 3, 4]
    assert [c["natural"] for c in p["chambers"]] == [False, True, True, False]
    assert p["chambers"][1]["ray_low"] == [3, -2]
    assert p["chambers"][0]["tag_low"]["kind"] == "isotropic"


def test_chambers_bad_anchor_exit_codes(tmp_path):
    m = write_flagship(tmp_path)
    assert run(["chambers", "rank2", "--lattice", m, "--ambient", "L2",
                "--anchor", "0,1"]).exit_code == 1  # negative square: domain
    assert run(["chambers", "rank2", "--lattice", m, "--ambient", "L2",
                "--anchor", "zz"]).exit_code == 2  # unparsable: input


def test_chambers_orbits(tmp_path):
    gens = tmp_path / "G.json"
    gens.write_text(json.dumps({"generators": [[[1, 0], [0, -1]]]}))
    r = run(["chambers", "orbits", "--lattice", write_flagship(tmp_path),
             "--ambient", "L2", "--anchor", "1,0", "--generators", str(gens)])
    p = payload(r)
    assert p["orbit_count"] == 2
    assert p["orbits"] == [[1, 4], [2, 3]]


def test_chambers_plot_deterministic(tmp_path):
    m = write_flagship(tmp_path)
    out1, out2 = tmp_path / "a.svg", tmp_path / "b.svg"
    for out in (out1, out2):
        r = run(["chambers", "plot", "--lattice", m, "--ambient", "L2",
                 "--anchor", "1,0", "--out", str(out)])
        assert r.exit_code == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert out1.read_text().startswith("<svg")


# ---------------------------------------------------------------------------
# forms


def test_forms_verify_all_green():
    r = run(["forms", "verify", "all"])
    p = payload(r)
    assert r.exit_code == 0
    assert p["all_passed"] is True
    assert {c["name"] for c in p["checks"]} == {
        "weight3_product_identity", "series_reference_tables"}


def test_forms_verify_alias():
    p = payload(run(["forms", "verify", "lemma33"]))
    assert [c["name"] for c in p["checks"]] == ["weight3_product_identity"]
    assert p["all_passed"] is True


def test_forms_verify_unknown_token():
    assert run(["forms", "verify", "bogus"]).exit_code == 2


def test_forms_expand():
    p = payload(run(["forms", "expand", "--series", "todd", "--weight", "2"]))
    assert p["terms"][0] == {"monomial": "1", "coeff": 1}
    coeffs = {t["monomial"]: t["coeff"] for t in p["terms"]}
    assert coeffs["c1F"] == {"num": "1", "den": "2"}
    assert run(["forms", "expand", "--series", "bogus"]).exit_code == 2


def test_forms_expand_text_format():
    r = run(["forms", "expand", "--series", "sigmoid", "--weight", "1",
             "--format", "text"])
    assert "1/4" in r.stdout and "c1N" in r.stdout


# ---------------------------------------------------------------------------
# zeta, torsion, invariant, numerology


def test_zeta_and_torsion(tmp_path):
    sdoc = tmp_path / "s.json"
    sdoc.write_text(json.dumps({"kind": "power", "a": 1, "p": 2, "w": 2}))
    p = payload(run(["zeta", "dzeta", "--spectrum", str(sdoc)]))
    assert abs(p["dzeta0"] + 2 * math.log(2 * math.pi)) < 1e-9

    spectra = tmp_path / "sp.json"
    spectra.write_text(json.dumps(
        {"1": {"kind": "finite", "entries": [[math.e, 1]]}}))
    p = payload(run(["torsion", "eq", "--spectra", str(spectra), "--dim", "4"]))
    assert abs(p["log"] + 1.0) < 1e-12


def test_zeta_bad_spectrum(tmp_path):
    sdoc = tmp_path / "s.json"
    sdoc.write_text(json.dumps({"kind": "mystery"}))
    assert run(["zeta", "dzeta", "--spectrum", str(sdoc)]).exit_code == 2
    sdoc.write_text("not json")
    assert run(["zeta", "dzeta", "--spectrum", str(sdoc)]).exit_code == 2


def test_invariant_assemble(tmp_path):
    ing = tmp_path / "ing.json"
    ing.write_text(json.dumps({"tau_iota": 2.0, "vol_X": 1.5, "A": 1.0,
                               "tau_O_fix": 1.0, "vol_fix": 1.0,
                               "vol_L2_H1": 1.0, "t": -17}))
    p = payload(run(["invariant", "assemble", "--ingredients", str(ing)]))
    assert p["invariant"] == pytest.approx(2.0 * 1.5 ** 27)
    assert p["exp_vol"] == 27

    ing.write_text(json.dumps({"tau_iota": 1.0}))
    assert run(["invariant", "assemble", "--ingredients", str(ing)]).exit_code == 2


def test_numerology_json_record():
    p = payload(run(["numerology", "--t", "-17"]))
    assert list(p) == ["t", "c1sq", "chi", "c2", "dim_def", "omega_int",
                       "exp_vol", "coef_curv16", "coef_curv8", "coef_prop32",
                       "coef_l34_plus", "coef_l34_minus"]
    assert p["c1sq"] == 288
    assert p["coef_prop32"] == {"num": "17", "den": "2"}
    assert run(["numerology", "--t", "2"]).exit_code == 1


# ---------------------------------------------------------------------------
# verify-all and plumbing


def test_verify_all_green_and_deterministic():
    r1, r2 = run(["verify-all"]), run(["verify-all"])
    assert r1.exit_code == 0
    assert r1.stdout == r2.stdout
    p = payload(r1)
    assert p["all_passed"] is True
    assert [c["name"] for c in p["checks"]] == [
        "weight3_product_identity", "series_reference_tables",
        "rank2_wall_and_chamber_example", "characteristic_integral_all_t"]


def test_out_flag_writes_file(tmp_path):
    out = tmp_path / "n.json"
    r = run(["numerology", "--t", "1", "--out", str(out)])
    assert r.exit_code == 0
    assert json.loads(out.read_text())["chi"] == 1


def test_unknown_command_exit_two():
    assert run(["frobnicate"]).exit_code == 2
    assert run([]).exit_code == 2
