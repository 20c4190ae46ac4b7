import random

import pytest

from slicerng.crc8 import SMBUS, CrcSpec, UnequalLengthsError, crc8_scalar, crc8_sliced


def table_crc8(poly, init, refin, refout, xorout, message):
    """Independent table-driven oracle (classic 256-entry table)."""
    table = []
    for byte in range(256):
        crc = byte
        for _ in range(8):
            crc = ((crc << 1) ^ poly) & 0xFF if crc & 0x80 else (crc << 1) & 0xFF
        table.append(crc)

    def reflect(v, width):
        return int(f"{v:0{width}b}"[::-1], 2)

    crc = init
    for byte in message:
        if refin:
            byte = reflect(byte, 8)
        crc = table[crc ^ byte]
    if refout:
        crc = reflect(crc, 8)
    return crc ^ xorout


def test_empty_message_returns_init():
    assert crc8_scalar(SMBUS, b"") == 0x00
    assert crc8_scalar(CrcSpec(0x07, init=0xAB), b"") == 0xAB


def test_standard_check_value():
    # CRC-8/SMBus check value for "123456789"
    assert crc8_scalar(SMBUS, b"123456789") == 0xF4
    assert table_crc8(0x07, 0, False, False, 0, b"123456789") == 0xF4


def test_zero_byte_is_absorbing_with_zero_init():
    assert crc8_scalar(SMBUS, b"\x00") == 0x00
    assert crc8_scalar(SMBUS, b"\x00" * 17) == 0x00


def test_scalar_matches_table_oracle():
    rng = random.Random(0xC8C8)
    for _ in range(30):
        poly = rng.randrange(1, 256)
        init = rng.randrange(256)
        xorout = rng.randrange(256)
        reflect = rng.random() < 0.5
        spec = CrcSpec(poly, init=init, reflect=reflect, final_xor=xorout)
        msg = rng.randbytes(rng.randrange(0, 40))
        assert crc8_scalar(spec, msg) == table_crc8(
            poly, init, reflect, reflect, xorout, msg
        )


def test_reflected_catalogue_entry():
    # CRC-8/MAXIM-DOW: poly 0x31 reflected, check value 0xA1
    maxim = CrcSpec(0x31, init=0x00, reflect=True)
    assert crc8_scalar(maxim, b"123456789") == 0xA1


def test_sliced_lockstep_identical_messages():
    msg = b"slice me"
    out = crc8_sliced(SMBUS, [msg] * 32, width=32)
    assert out == [crc8_scalar(SMBUS, msg)] * 32


def test_sliced_all_zero_messages():
    out = crc8_sliced(SMBUS, [b"\x00" * 8] * 16, width=64)
    assert out == [0] * 16


@pytest.mark.parametrize("width", [32, 64])
def test_sliced_matches_scalar_per_lane(width):
    rng = random.Random(width)
    messages = [rng.randbytes(64) for _ in range(width)]
    out = crc8_sliced(SMBUS, messages, width=width)
    assert out == [crc8_scalar(SMBUS, m) for m in messages]


def test_sliced_random_spec_and_partial_lanes():
    rng = random.Random(17)
    spec = CrcSpec(0x9B, init=0xFF, reflect=True, final_xor=0x5A)
    messages = [rng.randbytes(9) for _ in range(11)]
    out = crc8_sliced(spec, messages, width=32)
    assert out == [crc8_scalar(spec, m) for m in messages]


def test_gf2_linearity_with_zero_init():
    rng = random.Random(3)
    spec = CrcSpec(0x07)  # init 0, unreflected, no final xor
    a = rng.randbytes(24)
    b = rng.randbytes(24)
    ab = bytes(x ^ y for x, y in zip(a, b))
    assert crc8_scalar(spec, ab) == crc8_scalar(spec, a) ^ crc8_scalar(spec, b)


def test_unequal_lengths_rejected():
    with pytest.raises(UnequalLengthsError):
        crc8_sliced(SMBUS, [b"abc", b"ab"])


def test_empty_batch():
    assert crc8_sliced(SMBUS, []) == []
