import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cstarframes import AlgebraSpec, InputError, certify_star_bessel, coordinate_frame
from cstarframes.serialize import (
    certificate_to_dict,
    decode_element,
    decode_operator,
    decode_vector,
    dumps_stable,
    encode_element,
    encode_operator,
    encode_vector,
    sanitize,
)
from cstarframes.hilbmod import ModuleOperator, ModuleVector
from cstarframes.sampling import random_operator, random_vector, stream

SPEC = AlgebraSpec((2, 1))

finite_complex = st.complex_numbers(
    min_magnitude=0, max_magnitude=10, allow_nan=False, allow_infinity=False
)


@settings(max_examples=40, deadline=None)
@given(
    b0=arrays(np.complex128, (2, 2), elements=finite_complex),
    b1=arrays(np.complex128, (1, 1), elements=finite_complex),
)
def test_element_encode_decode_roundtrip(b0, b1):
    a = SPEC.element([b0, b1])
    back = decode_element(SPEC, encode_element(a), "x")
    assert (back - a).norm() == 0.0


def test_vector_and_operator_roundtrip():
    rng = stream(200, 0)
    f = random_vector(SPEC, 3, rng)
    assert (decode_vector(SPEC, 3, encode_vector(f), "v") - f).norm() == 0.0
    t = random_operator(SPEC, 2, 3, rng)
    back = decode_operator(SPEC, encode_operator(t), "op")
    assert (back - t).norm() == 0.0
    assert back.in_rank == 2 and back.out_rank == 3


def test_decode_diagnostics_carry_field_paths():
    pair = [0.0, 0.0]
    good_block0 = [[pair, pair], [pair, pair]]
    with pytest.raises(InputError, match=r"root\[1\]"):
        decode_element(SPEC, [good_block0, "nope"], "root")
    bad_block0 = [[[1.0], pair], [pair, pair]]  # one-element scalar
    with pytest.raises(InputError, match=r"root\[0\]\[0\]\[0\].*two-element"):
        decode_element(SPEC, [bad_block0, [[pair]]], "root")


def test_sanitize_non_finite_floats():
    obj = {"a": math.inf, "b": [-math.inf, math.nan, 1.5], "c": "x", "d": np.float64(2.0)}
    out = sanitize(obj)
    assert out == {"a": "inf", "b": ["-inf", "nan", 1.5], "c": "x", "d": 2.0}
    text = dumps_stable(obj)
    json.loads(text)  # strict JSON


def test_falsified_certificate_serializes_witness_vector():
    fr = coordinate_frame(SPEC, 2)
    scaled = [m.scalar_mul(2.0) for m in fr.members]
    from cstarframes import FrameSeq

    cert = certify_star_bessel(FrameSeq(scaled), SPEC.unit(), 1e-9)
    assert cert.status == "falsified"
    d = certificate_to_dict(cert)
    assert d["status"] == "falsified"
    assert d["witness_vector"] is not None
    back = decode_vector(SPEC, 2, d["witness_vector"], "w")
    assert (back - cert.witness_vector).norm() == 0.0


def test_dumps_stable_is_deterministic():
    rng = stream(201, 0)
    t = random_operator(SPEC, 2, 2, rng)
    d1 = dumps_stable({"op": encode_operator(t), "v": 1.0})
    d2 = dumps_stable({"op": encode_operator(t), "v": 1.0})
    assert d1 == d2


def test_decode_rejects_non_finite_scalars():
    pair = [0.0, 0.0]
    block0 = [[[math.inf, 0.0], pair], [pair, pair]]
    with pytest.raises(InputError, match="non-finite"):
        decode_element(SPEC, [block0, [[pair]]], "root")
