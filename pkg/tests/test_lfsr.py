import random

import pytest

from slicerng.lfsr import (
    FIBONACCI,
    GALOIS,
    FeedbackSpec,
    PRIMITIVE_TAPS,
    ScalarLfsr,
    SlicedLfsr,
    is_primitive,
    parse_spec,
    period_bruteforce,
    polynomial_order,
)

SPEC4 = FeedbackSpec(4, {0, 3})
SPEC8 = FeedbackSpec(8, PRIMITIVE_TAPS[8])
SPEC16 = FeedbackSpec(16, PRIMITIVE_TAPS[16])


def fib_reference(taps, n, seed, steps):
    """Independent table-free bit-at-a-time simulator (packed int state)."""
    mask = (1 << n) - 1
    state = seed & mask
    out = []
    for _ in range(steps):
        out.append(state & 1)
        fb = 0
        for t in taps:
            fb ^= (state >> t) & 1
        state = (state >> 1) | (fb << (n - 1))
    return out


def test_spec_validation():
    with pytest.raises(ValueError):
        FeedbackSpec(4, set())
    with pytest.raises(ValueError):
        FeedbackSpec(4, {0, 4})  # out of range
    with pytest.raises(ValueError):
        FeedbackSpec(4, {0, 2})  # missing n-1
    with pytest.raises(ValueError):
        FeedbackSpec(4, {1, 3})  # missing 0
    with pytest.raises(ValueError):
        FeedbackSpec(4, {0, 3}, "weird")


def test_parse_spec_forms():
    assert parse_spec("x^4+x^3+1") == SPEC4
    assert parse_spec("{0,3};n=4") == SPEC4
    assert parse_spec("x^8+x^7+x^2+x+1").taps == PRIMITIVE_TAPS[8]
    assert parse_spec(SPEC4.polynomial_text()) == SPEC4
    with pytest.raises(ValueError):
        parse_spec("garbage")


def test_zero_state_is_absorbing():
    for config in (FIBONACCI, GALOIS):
        l = ScalarLfsr(FeedbackSpec(4, {0, 3}, config), [0, 0, 0, 0])
        assert l.run(10) == [0] * 10
        assert l.state == [0, 0, 0, 0]
    sliced = SlicedLfsr.from_seeds(SPEC4, [0] * 8, width=32)
    assert sliced.run(10) == [0] * 10


def test_degree4_visits_all_nonzero_states():
    l = ScalarLfsr.from_seed(SPEC4, 1)
    seen = {tuple(l.state)}
    for _ in range(14):
        l.step()
        seen.add(tuple(l.state))
    assert len(seen) == 15
    l.step()
    assert tuple(l.state) == (1, 0, 0, 0)


def test_scalar_matches_independent_simulator():
    rng = random.Random(0x1F5)
    for _ in range(10):
        seed = rng.randrange(1, 1 << 8)
        l = ScalarLfsr.from_seed(SPEC8, seed)
        assert l.run(100) == fib_reference(SPEC8.taps, 8, seed, 100)


def test_sliced_lockstep_lanes_give_uniform_words():
    seeds = [0xBEEF & 0xFFFF] * 32
    sliced = SlicedLfsr.from_seeds(SPEC16, seeds, width=32)
    scalar = ScalarLfsr.from_seed(SPEC16, seeds[0])
    full = (1 << 32) - 1
    for _ in range(200):
        word = sliced.step()
        bit = scalar.step()
        assert word == (full if bit else 0)


@pytest.mark.parametrize("config", [FIBONACCI, GALOIS])
@pytest.mark.parametrize("width", [32, 64])
def test_sliced_lane_equivalence(config, width):
    rng = random.Random(width * 7 + (config == GALOIS))
    spec = FeedbackSpec(16, PRIMITIVE_TAPS[16], config)
    seeds = [rng.randrange(1 << 16) for _ in range(width)]
    sliced = SlicedLfsr.from_seeds(spec, seeds, width=width)
    words = sliced.run(1000)
    for j, seed in enumerate(seeds):
        expected = ScalarLfsr.from_seed(spec, seed).run(1000)
        got = [(w >> j) & 1 for w in words]
        assert got == expected, f"lane {j} diverged"


def test_sliced_lane_equivalence_long_run():
    spec = FeedbackSpec(24, PRIMITIVE_TAPS[24])
    rng = random.Random(99)
    seeds = [rng.randrange(1, 1 << 24) for _ in range(64)]
    sliced = SlicedLfsr.from_seeds(spec, seeds, width=64)
    words = sliced.run(10_000)
    for j in (0, 17, 63):
        expected = ScalarLfsr.from_seed(spec, seeds[j]).run(10_000)
        assert [(w >> j) & 1 for w in words] == expected


def test_randomized_spec_lane_equivalence():
    rng = random.Random(0xABC)
    for _ in range(8):
        n = rng.choice([5, 9, 12, 20])
        inner = rng.sample(range(1, n - 1), k=rng.randrange(0, min(4, n - 2)))
        spec = FeedbackSpec(n, {0, n - 1, *inner},
                            rng.choice([FIBONACCI, GALOIS]))
        seeds = [rng.randrange(1 << n) for _ in range(rng.randrange(1, 33))]
        steps = rng.randrange(1, 500)
        sliced = SlicedLfsr.from_seeds(spec, seeds, width=32)
        words = sliced.run(steps)
        for j, seed in enumerate(seeds):
            expected = ScalarLfsr.from_seed(spec, seed).run(steps)
            assert [(w >> j) & 1 for w in words] == expected


def test_period_of_primitive_polynomials():
    assert period_bruteforce(SPEC4, 1) == 15
    assert period_bruteforce(SPEC8, 1) == 255
    assert period_bruteforce(SPEC16, 1) == 65535


def test_period_galois_configuration():
    assert period_bruteforce(FeedbackSpec(4, {0, 3}, GALOIS), 1) == 15
    assert period_bruteforce(FeedbackSpec(8, PRIMITIVE_TAPS[8], GALOIS), 1) == 255


def test_period_nonprimitive_divides_order():
    spec = FeedbackSpec(8, {0, 7})  # x^8 + x^7 + 1, reducible
    order = polynomial_order(spec)
    assert order < 255
    for seed in (1, 0x35, 0xF0):
        period = period_bruteforce(spec, seed)
        assert order % period == 0
    assert not is_primitive(spec)


def test_primitive_table_order_crosscheck():
    for n, taps in PRIMITIVE_TAPS.items():
        assert polynomial_order(FeedbackSpec(n, taps)) == (1 << n) - 1


def test_period_refusals():
    with pytest.raises(ValueError):
        period_bruteforce(FeedbackSpec(25, {0, 24}), 1)
    with pytest.raises(ValueError):
        period_bruteforce(SPEC4, 0)


def test_xor_ops_theta_k():
    # single tap besides the output end: one combining XOR at most
    tiny = SlicedLfsr.from_seeds(FeedbackSpec(8, {0, 7}), [1, 2, 3], width=32)
    assert tiny.xor_ops_per_step() <= 1

    spec = FeedbackSpec(16, PRIMITIVE_TAPS[16])  # k = 4
    for width in (32, 64):
        sliced = SlicedLfsr.from_seeds(spec, [5, 6], width=width)
        assert sliced.xor_ops_per_step() == 3  # k-1 combining XORs

    gal = SlicedLfsr.from_seeds(FeedbackSpec(16, PRIMITIVE_TAPS[16], GALOIS),
                                [5], width=64)
    assert gal.xor_ops_per_step() == 4  # k injection XORs


def test_xor_ops_independent_of_width():
    spec = FeedbackSpec(24, PRIMITIVE_TAPS[24])
    counts = set()
    for width in (32, 64):
        sliced = SlicedLfsr.from_seeds(spec, [1] * 8, width=width)
        sliced.run(10)
        counts.add(sliced.xor_ops)
    assert len(counts) == 1


def test_determinism():
    spec = FeedbackSpec(16, PRIMITIVE_TAPS[16])
    a = ScalarLfsr.from_seed(spec, 0x1234).run(500)
    b = ScalarLfsr.from_seed(spec, 0x1234).run(500)
    assert a == b
