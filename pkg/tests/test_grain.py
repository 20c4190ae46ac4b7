import random

import pytest

from slicerng.bitops import bits_to_bytes
from slicerng.grain import (
    GrainKeyIv,
    GrainKeyIvError,
    GrainScalar,
    GrainScalarPacked,
    GrainSliced,
    grain_constants,
)
from slicerng.vectors import GRAIN_VECTORS, verify_vectors

V0, V1 = GRAIN_VECTORS


def random_material(rng):
    return GrainKeyIv(rng.randbytes(10), rng.randbytes(8))


def test_constants_structure():
    consts = grain_constants()
    assert all(0 <= t < 80 for t in consts["LFSR_TAPS"])
    assert all(0 <= t < 80 for t in consts["NFSR_LINEAR_TAPS"])
    assert all(
        0 <= t < 80 for term in consts["NFSR_PRODUCT_TAPS"] for t in term
    )
    assert all(0 <= t < 80 for t in consts["H_LFSR_TAPS"])
    assert all(0 <= t < 80 for t in consts["OUTPUT_TAPS"])


def test_official_vectors_scalar():
    for rec in GRAIN_VECTORS:
        st = GrainScalar.from_key_iv(GrainKeyIv(rec.key, rec.iv))
        assert st.keystream_bytes(len(rec.ks), rec.bit_order) == rec.ks


def test_official_vectors_all_lanes():
    checked, failures = verify_vectors("grain")
    assert checked == len(GRAIN_VECTORS)
    assert failures == []


def test_initialisation_runs_160_clocks():
    st = GrainScalar.from_key_iv(GrainKeyIv(V0.key, V0.iv))
    assert st.init_clocks == 160


def test_distinct_keys_distinct_states():
    iv = bytes(8)
    a = GrainScalar.from_key_iv(GrainKeyIv(bytes(10), iv))
    b = GrainScalar.from_key_iv(GrainKeyIv(b"\x01" + bytes(9), iv))
    assert (a.b, a.s) != (b.b, b.s)


def test_key_iv_size_validation():
    with pytest.raises(GrainKeyIvError):
        GrainKeyIv(bytes(9), bytes(8))
    with pytest.raises(GrainKeyIvError):
        GrainKeyIv(bytes(10), bytes(7))


def test_packed_engine_agrees_with_reference():
    rng = random.Random(0xAA)
    for _ in range(6):
        m = random_material(rng)
        a = GrainScalar.from_key_iv(m)
        b = GrainScalarPacked.from_key_iv(m)
        assert a.keystream_bits(500) == b.keystream_bits(500)


def test_sliced_lockstep_lanes_uniform_words():
    mats = [GrainKeyIv(V0.key, V0.iv)] * 32
    eng = GrainSliced.from_key_ivs(mats, width=32)
    full = (1 << 32) - 1
    scalar_bits = GrainScalar.from_key_iv(mats[0]).keystream_bits(256)
    for word, bit in zip(eng.keystream_words(256), scalar_bits):
        assert word == (full if bit else 0)


def test_sliced_init_matches_scalar():
    rng = random.Random(2)
    mats = [random_material(rng) for _ in range(32)]
    eng = GrainSliced.from_key_ivs(mats, width=32)
    for j, m in enumerate(mats):
        expected = GrainScalar.from_key_iv(m)
        lane = eng.extract_lane(j)
        assert lane.b == expected.b and lane.s == expected.s, f"lane {j}"


@pytest.mark.parametrize("width", [32, 64])
def test_sliced_keystream_lane_equivalence(width):
    rng = random.Random(width + 1)
    mats = [random_material(rng) for _ in range(width)]
    eng = GrainSliced.from_key_ivs(mats, width=width)
    lanes = eng.keystream_lane_bits(4096)
    for j, m in enumerate(mats):
        assert lanes[j] == GrainScalarPacked.from_key_iv(m).keystream_bits(4096)


def test_vectors_in_lanes_among_random_materials():
    rng = random.Random(3)
    mats = [random_material(rng) for _ in range(16)]
    mats[0] = GrainKeyIv(V0.key, V0.iv)
    mats[9] = GrainKeyIv(V1.key, V1.iv)
    eng = GrainSliced.from_key_ivs(mats, width=32)
    lanes = eng.keystream_lane_bits(8 * len(V0.ks))
    assert bits_to_bytes(lanes[0], "lsb") == V0.ks
    assert bits_to_bytes(lanes[9], "lsb") == V1.ks


def test_lane_count_validation():
    with pytest.raises(GrainKeyIvError):
        GrainSliced.from_key_ivs([], width=32)
    with pytest.raises(GrainKeyIvError):
        GrainSliced.from_key_ivs(
            [GrainKeyIv(bytes(10), bytes(8))] * 33, width=32
        )


def test_lane_error_names_lane():
    mats = [GrainKeyIv(bytes(10), bytes(8))] * 2
    bad = type("Bad", (), {"key_bits": lambda self: (_ for _ in ()).throw(
        GrainKeyIvError("key must be 10 bytes")),
        "iv_bits": lambda self: [0] * 64})()
    with pytest.raises(GrainKeyIvError, match="lane 2"):
        GrainSliced.from_key_ivs([*mats, bad], width=32)


def test_keystream_determinism():
    m = GrainKeyIv(bytes(range(10)), bytes(range(8)))
    assert (
        GrainScalar.from_key_iv(m).keystream_bits(777)
        == GrainScalar.from_key_iv(m).keystream_bits(777)
    )
