import json

import pytest

from cstarframes import (
    InputError,
    instance_digest,
    load_instance,
    parse_instance,
    random_instance,
    report_payload_bytes,
    run_suite,
    save_instance,
)
from cstarframes.harness import paper_truncation_values, tensor_pair_instance
from cstarframes.serialize import dumps_stable, instance_to_dict


# -- profiles -----------------------------------------------------------------------


def test_unknown_profile_rejected():
    with pytest.raises(InputError):
        random_instance(0, "nonsense")


def test_paper_truncation_member_values():
    inst = random_instance(0, "paper-example-truncation(3)")
    assert inst.spec.block_dims == (1, 1, 1)
    expect = [4 / 3, 5 / 6, 2 / 3]
    for j, m in enumerate(inst.members):
        scal = m.entries[0].central_scalars()
        assert scal[j].real == pytest.approx(expect[j], abs=1e-15)
    assert paper_truncation_values(3) == pytest.approx(expect)


def test_profile_determinism():
    for profile in ("generic", "rank-deficient-K", "co-isometry-commuting"):
        a = random_instance(123, profile)
        b = random_instance(123, profile)
        assert instance_digest(a) == instance_digest(b)
        c = random_instance(124, profile)
        assert instance_digest(a) != instance_digest(c)


def test_generic_profile_constructs_frames():
    for seed in range(100):
        inst = random_instance(seed, "generic")
        frame = inst.frame()
        assert frame.n_members >= frame.rank
        assert frame.frame_op.is_positive(1e-9)
        assert "K" in inst.operators and "A" in inst.bounds


def test_coisometry_profile_commutes_exactly():
    inst = random_instance(5, "co-isometry-commuting")
    k = inst.operators["K"]
    t = inst.operators["T"]
    # central multiplications commute with every module operator; the
    # residual is pure matmul roundoff
    scale = max(1.0, k.norm() * t.norm())
    assert (k.compose(t) - t.compose(k)).norm() <= 1e-15 * scale
    ident_gap = t.compose(t.adjoint()).norm()
    assert abs(ident_gap - 1.0) <= 1e-12


# -- instance files ----------------------------------------------------------------------


def test_instance_round_trip(tmp_path):
    inst = random_instance(7, "generic")
    p = tmp_path / "inst.json"
    save_instance(inst, p)
    loaded = load_instance(p)
    assert instance_digest(loaded) == instance_digest(inst)
    # canonical: re-serializing the parsed file reproduces the bytes
    assert dumps_stable(instance_to_dict(loaded)) == p.read_text()


def test_tensor_pair_round_trip(tmp_path):
    inst = tensor_pair_instance(3)
    p = tmp_path / "pair.json"
    save_instance(inst, p)
    loaded = load_instance(p)
    assert loaded.right is not None
    assert instance_digest(loaded) == instance_digest(inst)


def test_parse_rejects_bad_fields():
    inst = random_instance(7, "generic")
    data = instance_to_dict(inst)
    bad = dict(data)
    bad["surprise"] = 1
    with pytest.raises(InputError, match="unknown fields"):
        parse_instance(bad)
    bad2 = json.loads(json.dumps(data))
    bad2["members"][0][0][0][0] = [1.0]  # not a [re, im] pair
    with pytest.raises(InputError, match=r"members\[0\]"):
        parse_instance(bad2)
    bad3 = json.loads(json.dumps(data))
    del bad3["rank"]
    with pytest.raises(InputError, match="rank"):
        parse_instance(bad3)


def test_load_reports_json_position(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{"algebra": [2, 1],\n  "rank": }')
    with pytest.raises(InputError, match="line 2"):
        load_instance(p)


def test_perturbation_field_round_trip(tmp_path):
    inst = random_instance(7, "generic")
    inst.perturbation = {"alpha": 0.2, "beta": 0.1, "gamma": 0.05}
    inst.h_members = list(inst.members)
    p = tmp_path / "pert.json"
    save_instance(inst, p)
    loaded = load_instance(p)
    assert loaded.perturbation == {"alpha": 0.2, "beta": 0.1, "gamma": 0.05}
    assert len(loaded.h_members) == len(inst.members)


# -- suites -----------------------------------------------------------------------------------


def test_unknown_suite_rejected():
    with pytest.raises(InputError):
        run_suite("no-such-suite")


def test_suite_report_shape():
    rep = run_suite("conjugation", trials=3, seed=11)
    assert rep["command"] == "suite"
    assert rep["suite"] == "conjugation"
    assert rep["summary"]["total"] == 3
    assert rep["summary"]["overall"] == "certified"
    assert "wall_clock_s" in rep
    payload = report_payload_bytes(rep)
    assert b"wall_clock_s" not in payload


def test_suite_determinism_bytes():
    rep1 = run_suite("douglas-equivalence", trials=5, seed=42, samples=20)
    rep2 = run_suite("douglas-equivalence", trials=5, seed=42, samples=20)
    assert report_payload_bytes(rep1) == report_payload_bytes(rep2)
    rep3 = run_suite("douglas-equivalence", trials=5, seed=43, samples=20)
    assert report_payload_bytes(rep1) != report_payload_bytes(rep3)


def test_suite_reports_are_strict_json():
    rep = run_suite("perturb1", trials=2, seed=3, samples=20)
    text = report_payload_bytes(rep).decode()
    parsed = json.loads(text)  # would fail on NaN/Infinity tokens
    assert parsed["summary"]["total"] == 2


def test_paper_example_suite():
    rep = run_suite("paper-example", seed=0, samples=50, n_terms=5)
    row = rep["trials"][0]
    assert row["status"] == "certified"
    assert row["max_equality_deviation"] <= 1e-12
