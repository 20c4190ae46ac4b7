import random

import pytest

from slicerng.bitops import bits_to_bytes
from slicerng.mickey import (
    RTAPS,
    COMP0,
    COMP1,
    FB0,
    FB1,
    MickeyKeyIv,
    MickeyKeyIvError,
    MickeyScalar,
    MickeyScalarPacked,
    MickeySliced,
    mickey_constants,
)
from slicerng.vectors import MICKEY_VECTORS, verify_vectors

V0 = MICKEY_VECTORS[0]


def random_material(rng):
    return MickeyKeyIv(rng.randbytes(10), rng.randbytes(rng.randrange(0, 11)))


def test_constants_structure():
    consts = mickey_constants()
    assert len(consts["RTAPS"]) == 50
    assert all(0 <= i < 100 for i in RTAPS)
    # the comp sequences only act on interior positions
    assert COMP0[0] == COMP0[99] == 0
    assert COMP1[0] == COMP1[99] == 0
    assert len(COMP0) == len(COMP1) == len(FB0) == len(FB1) == 100


def test_official_vectors_scalar():
    for rec in MICKEY_VECTORS:
        st = MickeyScalar.from_key_iv(MickeyKeyIv(rec.key, rec.iv))
        assert st.keystream_bytes(len(rec.ks)) == rec.ks


def test_official_vectors_all_lanes():
    checked, failures = verify_vectors("mickey")
    assert checked == len(MICKEY_VECTORS)
    assert failures == []


def test_packed_engine_agrees_with_reference():
    rng = random.Random(0x77)
    for _ in range(6):
        material = random_material(rng)
        a = MickeyScalar.from_key_iv(material)
        b = MickeyScalarPacked.from_key_iv(material)
        assert a.keystream_bits(500) == b.keystream_bits(500)


def test_zero_state_single_clock_matches_packed():
    a = MickeyScalar()
    b = MickeyScalarPacked()
    a.clock_kg(False, 0)
    b.clock_kg(False, 0)
    assert sum(bit << i for i, bit in enumerate(a.r)) == b.r
    assert sum(bit << i for i, bit in enumerate(a.s)) == b.s


def test_clocking_is_deterministic():
    st1 = MickeyScalar.from_key_iv(MickeyKeyIv(V0.key, V0.iv))
    st2 = MickeyScalar.from_key_iv(MickeyKeyIv(V0.key, V0.iv))
    st1.clock_kg(True, 1)
    st2.clock_kg(True, 1)
    assert st1.r == st2.r and st1.s == st2.s


def test_hundred_clock_state_trace_matches_packed():
    a = MickeyScalar.from_key_iv(MickeyKeyIv(V0.key, V0.iv))
    b = MickeyScalarPacked.from_key_iv(MickeyKeyIv(V0.key, V0.iv))
    for clock in range(100):
        a.clock_kg(False, 0)
        b.clock_kg(False, 0)
        assert sum(bit << i for i, bit in enumerate(a.r)) == b.r, clock
        assert sum(bit << i for i, bit in enumerate(a.s)) == b.s, clock


def test_init_distinct_ivs_distinct_states():
    key = bytes(10)
    a = MickeyScalar.from_key_iv(MickeyKeyIv(key, b"\x01"))
    b = MickeyScalar.from_key_iv(MickeyKeyIv(key, b"\x02"))
    assert (a.r, a.s) != (b.r, b.s)


def test_oversize_iv_rejected():
    with pytest.raises(MickeyKeyIvError):
        MickeyKeyIv(bytes(10), bytes(11))
    with pytest.raises(MickeyKeyIvError):
        MickeyKeyIv(bytes(10), [0] * 81)
    with pytest.raises(MickeyKeyIvError):
        MickeyKeyIv(bytes(9), b"")


def test_bit_length_iv_matches_byte_iv():
    key = bytes(range(10))
    by_bytes = MickeyScalar.from_key_iv(MickeyKeyIv(key, b"\xa5"))
    by_bits = MickeyScalar.from_key_iv(
        MickeyKeyIv(key, [1, 0, 1, 0, 0, 1, 0, 1])
    )
    assert by_bytes.r == by_bits.r and by_bytes.s == by_bits.s


def test_sliced_lockstep_lanes():
    mats = [MickeyKeyIv(V0.key, V0.iv)] * 8
    eng = MickeySliced.from_key_ivs(mats, width=32)
    base = eng.extract_lane(0)
    for j in range(1, 8):
        lane = eng.extract_lane(j)
        assert lane.r == base.r and lane.s == base.s


def test_sliced_init_matches_scalar_init():
    rng = random.Random(5)
    mats = [MickeyKeyIv(rng.randbytes(10), rng.randbytes(4)) for _ in range(32)]
    eng = MickeySliced.from_key_ivs(mats, width=32)
    for j, m in enumerate(mats):
        expected = MickeyScalar.from_key_iv(m)
        lane = eng.extract_lane(j)
        assert lane.r == expected.r and lane.s == expected.s, f"lane {j}"


def test_sliced_init_ragged_iv_lengths():
    rng = random.Random(6)
    mats = [MickeyKeyIv(rng.randbytes(10), rng.randbytes(j % 4)) for j in range(12)]
    eng = MickeySliced.from_key_ivs(mats, width=32)
    for j, m in enumerate(mats):
        expected = MickeyScalar.from_key_iv(m)
        lane = eng.extract_lane(j)
        assert lane.r == expected.r and lane.s == expected.s


def test_sliced_init_invalid_lane_named():
    mats = [MickeyKeyIv(bytes(10), b"")] * 3 + [object()]
    mats[3] = type("Bad", (), {"iv_bits": lambda self: [0] * 81,
                               "key_bits": lambda self: [0] * 80})()
    with pytest.raises(MickeyKeyIvError, match="lane 3"):
        MickeySliced.from_key_ivs(mats, width=32)


def test_sliced_keystream_lockstep_words_uniform():
    mats = [MickeyKeyIv(V0.key, V0.iv)] * 32
    eng = MickeySliced.from_key_ivs(mats, width=32)
    full = (1 << 32) - 1
    scalar_bits = MickeyScalar.from_key_iv(mats[0]).keystream_bits(128)
    for word, bit in zip(eng.keystream_words(128), scalar_bits):
        assert word == (full if bit else 0)


@pytest.mark.parametrize("width", [32, 64])
def test_sliced_keystream_lane_equivalence(width):
    rng = random.Random(width)
    mats = [random_material(rng) for _ in range(width)]
    eng = MickeySliced.from_key_ivs(mats, width=width)
    lanes = eng.keystream_lane_bits(1024)
    for j, m in enumerate(mats):
        assert lanes[j] == MickeyScalarPacked.from_key_iv(m).keystream_bits(1024)


def test_zero_length_request_keeps_state():
    eng = MickeySliced.from_key_ivs([MickeyKeyIv(V0.key, V0.iv)], width=32)
    before = (list(eng.rregs), list(eng.sregs))
    assert eng.keystream_words(0) == []
    assert (eng.rregs, eng.sregs) == before


def test_vector_material_mixed_into_random_lanes():
    rng = random.Random(9)
    mats = [random_material(rng) for _ in range(16)]
    mats[7] = MickeyKeyIv(V0.key, V0.iv)
    eng = MickeySliced.from_key_ivs(mats, width=32)
    lane_bits = eng.keystream_lane_bits(8 * len(V0.ks))[7]
    assert bits_to_bytes(lane_bits) == V0.ks


def test_keystream_determinism():
    m = MickeyKeyIv(bytes(range(10)), b"\x42")
    a = MickeyScalar.from_key_iv(m).keystream_bits(999)
    b = MickeyScalar.from_key_iv(m).keystream_bits(999)
    assert a == b
