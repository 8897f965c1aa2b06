import numpy as np
import pytest

from stochmem.lfsr import (LfsrCycle, LfsrSpec, LfsrState, lfsr_next,
                           seed_state)


def _walk(spec, seed, steps):
    st = LfsrState(spec, seed)
    out = []
    for _ in range(steps):
        v, st = lfsr_next(st)
        out.append(v)
    return out, st


@pytest.mark.parametrize("width,taps", [(4, {4, 3}), (10, {10, 7})])
def test_period_is_maximal(width, taps):
    spec = LfsrSpec(width, frozenset(taps))
    period = (1 << width) - 1
    _, st = _walk(spec, 1, period)
    assert st.state == 1
    # no earlier return to the seed
    seen, cur = set(), LfsrState(spec, 1)
    for _ in range(period):
        v, cur = lfsr_next(cur)
        assert v not in seen
        seen.add(v)
    assert seen == set(range(1, 1 << width))


def test_width4_revisits_seed_after_15_steps():
    spec = LfsrSpec(4, frozenset({4, 3}))
    vals, st = _walk(spec, 1, 15)
    assert st.state == 1
    assert len(set(vals)) == 15


def test_zero_state_rejected():
    with pytest.raises(ValueError):
        LfsrState(LfsrSpec(), 0)


def test_non_maximal_taps_rejected():
    # x^4 + x^2 + 1 is not primitive
    with pytest.raises(ValueError):
        LfsrSpec(4, frozenset({4, 2}))


def test_tap_positions_validated():
    with pytest.raises(ValueError):
        LfsrSpec(4, frozenset({5}))
    with pytest.raises(ValueError):
        LfsrSpec(1, frozenset({1}))


def test_seed_state_folds_onto_nonzero_range():
    spec = LfsrSpec()
    assert seed_state(spec, 0).state == 1
    assert seed_state(spec, 1022).state == 1023
    assert seed_state(spec, 1023).state == 1


def test_cycle_matches_stepwise_walk():
    spec = LfsrSpec()
    cycle = LfsrCycle.for_spec(spec)
    start = 321
    vals, _ = _walk(spec, start, 50)
    pos = cycle.positions_for_states(np.array([start]))
    block = cycle.sequence_block(pos.astype(np.int64), 50)[0]
    assert block.tolist() == vals


def test_cycle_wraps_past_full_period():
    spec = LfsrSpec(4, frozenset({4, 3}))
    cycle = LfsrCycle.for_spec(spec)
    vals, _ = _walk(spec, 9, 40)
    pos = cycle.positions_for_states(np.array([9]))
    block = cycle.sequence_block(pos.astype(np.int64), 40)[0]
    assert block.tolist() == vals
