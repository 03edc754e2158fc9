import json

import numpy as np
import pytest

from pontryagin_triplets import (NonIsometric, SchemaError, construct_triplet,
                                 dump_instance, fixture_names, fixture_path,
                                 instance_to_dict, load_fixture, parse_instance,
                                 random_instance, verify_triplet)
from pontryagin_triplets.io import encode_matrix, instance_from_dict


def test_fixture_registry():
    assert fixture_names() == ["neutral2", "shift2", "simple_p2"]
    with pytest.raises(KeyError):
        fixture_path("missing")


def test_shift2_round_trip(shift2_file):
    inst = shift2_file.instance
    assert inst.label == "shift2" and inst.dim == 2
    assert inst.V.dim == 1 and inst.V.contains_pairs([1, 0], [0, 1])
    assert [n for n, _ in shift2_file.taus][:2] == ["graph-4", "graph-0"]
    assert shift2_file.tau("graph-4").matrix()[0, 0] == pytest.approx(4)
    assert shift2_file.colligation.p == 1
    again = instance_from_dict(json.loads(json.dumps(instance_to_dict(
        inst, taus=shift2_file.taus, colligation=shift2_file.colligation))))
    assert again.instance.V.same(inst.V)
    assert again.tau("graph-4").same(shift2_file.tau("graph-4"))


def test_neutral2_override(neutral2_file):
    assert neutral2_file.triplet is not None
    assert neutral2_file.get_triplet() is neutral2_file.triplet
    assert verify_triplet(neutral2_file.triplet).passed


def test_scaled_v_is_rejected(tmp_path):
    data = json.loads(fixture_path("shift2").read_text())
    data["V"]["images"] = [[[0, 0], [2, 0]]]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(data))
    with pytest.raises(NonIsometric) as info:
        parse_instance(p)
    assert info.value.defect > 0.1


def test_non_hermitian_gram():
    data = json.loads(fixture_path("shift2").read_text())
    data["space"]["gram"] = encode_matrix([[1, 1], [0, 1]])
    with pytest.raises(SchemaError) as info:
        instance_from_dict(data)
    assert any("Hermitian" in e for e in info.value.errors)


def test_schema_errors_are_collected():
    data = {"space": {"dim": 2, "gram": encode_matrix(np.eye(2))},
            "V": {"domain": [[1, 0]], "images": [[[0, 0], [1, 0]]]},
            "bogus": 1}
    with pytest.raises(SchemaError) as info:
        instance_from_dict(data)
    assert len(info.value.errors) >= 2
    with pytest.raises(SchemaError):
        instance_from_dict([])


def test_unreadable_file(tmp_path):
    with pytest.raises(SchemaError):
        parse_instance(tmp_path / "nope.json")
    p = tmp_path / "broken.json"
    p.write_text("{")
    with pytest.raises(SchemaError):
        parse_instance(p)


def test_dump_and_parse_random(tmp_path):
    inst = random_instance(4, 1, 2, degenerate=True, seed=3)
    t = construct_triplet(inst)
    p = tmp_path / "r.json"
    dump_instance(p, inst, triplet=t, seed=3)
    f = parse_instance(p)
    assert f.seed == 3 and f.label == inst.label
    assert f.instance.V.same(inst.V)
    np.testing.assert_allclose(f.triplet.ambient(1), t.ambient(1), atol=1e-12)


def test_load_fixture_by_filename():
    assert load_fixture("simple_p2.json").instance.space.neg_index == 1
