import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import FIG1_GRID, random_image
from reference import reference_walk
from touristwalk.image import GrayImage
from touristwalk.sampling import ALL, KSpec, select_starts
from touristwalk.walk import (DEAD_END, Rule, WalkConfig, WalkState, format_trajectory,
                              next_step, run_batch, run_walk, walk_outcomes)


def test_next_step_constant_image_goes_north():
    img = GrayImage(np.full((5, 5), 7, np.uint8))
    state = WalkState.initial((2, 2), 1)
    assert next_step(state, img, WalkConfig(1, Rule.MIN)) == (1, 2)


def test_next_step_mu0_stays(rng):
    img = random_image(rng, 6, 6)
    for p in [(0, 0), (3, 4), (5, 5)]:
        assert next_step(WalkState.initial(p, 0), img, WalkConfig(0, Rule.MIN)) == p


def test_next_step_tiny(tiny):
    # candidates from (0,0): E weight 10, SE weight 30, S weight 20
    assert next_step(WalkState.initial((0, 0), 1), tiny, WalkConfig(1, Rule.MIN)) == (0, 1)
    assert next_step(WalkState.initial((0, 0), 1), tiny, WalkConfig(1, Rule.MAX)) == (1, 1)


def test_next_step_dead_end():
    img = GrayImage(np.zeros((3, 3), np.uint8))
    # corner with its three ring neighbours all in memory
    state = WalkState((0, 0), ((0, 0), (1, 1), (1, 0), (0, 1)))
    assert next_step(state, img, WalkConfig(4)) is DEAD_END


def test_run_walk_tiny(tiny):
    traj = run_walk(tiny, (0, 0), WalkConfig(1, Rule.MIN), keep_path=True)
    assert (traj.tau, traj.rho) == (1, 2)
    assert traj.path[1:] == ((0, 1), (1, 0), (0, 1))


def test_run_walk_mu0_fixed_point(rng):
    img = random_image(rng, 5, 7)
    for x in range(5):
        for y in range(7):
            t = run_walk(img, (x, y), WalkConfig(0, Rule.MIN))
            assert (t.tau, t.rho) == (0, 1)


def test_fig1_structure():
    img = GrayImage(np.array(FIG1_GRID))
    traj = run_walk(img, (0, 2), WalkConfig(2, Rule.MIN), keep_path=True)
    assert (traj.tau, traj.rho) == (5, 4)
    cycle = traj.path[5:9]
    assert len(set(cycle)) == 4
    assert traj.path[9] == cycle[0]


def test_step_cap_and_dead_end_give_no_attractor():
    img = GrayImage(np.arange(36, dtype=np.uint8).reshape(6, 6) * 7)
    t = run_walk(img, (0, 0), WalkConfig(3, Rule.MAX, step_cap=2), keep_path=True)
    assert t.rho == 0 and t.tau == 2 and len(t.path) == 3
    # 2x2 image, mu=4: after three moves every pixel is in memory
    t = run_walk(GrayImage(np.array([[0, 10], [20, 30]])), (0, 0), WalkConfig(4, Rule.MIN))
    assert t.rho == 0 and t.tau == 3


def test_walk_config_validation():
    with pytest.raises(ValueError):
        WalkConfig(-1)
    with pytest.raises(ValueError):
        WalkConfig(1, step_cap=0)
    assert WalkConfig(1, "max").rule is Rule.MAX


def oracle_check(img, mu, rule):
    grid = img.pixels.tolist()
    taus, rhos = walk_outcomes(img, np.arange(img.size), WalkConfig(mu, rule))
    for code in range(img.size):
        p = divmod(code, img.width)
        tau, rho, _ = reference_walk(grid, p, mu, str(rule))
        assert (taus[code], rhos[code]) == (tau, rho), (grid, p, mu, rule)


@pytest.mark.parametrize("mu", range(5))
@pytest.mark.parametrize("rule", list(Rule))
def test_matches_reference_on_random_images(mu, rule):
    rng = np.random.default_rng(100 + mu)
    for _ in range(5):
        h, w = rng.integers(2, 7, 2)
        oracle_check(random_image(rng, h, w, levels=int(rng.choice([3, 16, 256]))), mu, rule)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(2, 6), st.integers(0, 6), st.sampled_from(list(Rule)),
       st.integers(0, 2**32 - 1))
def test_matches_reference_fuzz(h, w, mu, rule, seed):
    rng = np.random.default_rng(seed)
    oracle_check(random_image(rng, h, w, levels=int(rng.choice([2, 5, 256]))), mu, rule)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 10), st.integers(2, 10), st.integers(0, 6), st.sampled_from(list(Rule)),
       st.integers(0, 2**32 - 1))
def test_path_properties(h, w, mu, rule, seed):
    rng = np.random.default_rng(seed)
    img = random_image(rng, h, w, levels=int(rng.choice([2, 8, 256])))
    start = (int(rng.integers(h)), int(rng.integers(w)))
    traj = run_walk(img, start, WalkConfig(mu, rule), keep_path=True)
    path = traj.path
    # memory soundness: a pixel never reappears within mu steps
    for i in range(len(path)):
        for j in range(i + 1, min(len(path), i + mu)):
            assert path[i] != path[j]
    if traj.rho:
        assert traj.rho >= mu + 1
        # cycle closure: continuing rho more steps replays the last rho pixels
        cfg = WalkConfig(mu, rule)
        t = len(path) - 1
        state = WalkState(path[t], tuple(reversed(path[max(0, t - mu + 1):])) if mu else ())
        extra = []
        for _ in range(traj.rho):
            nxt = next_step(state, img, cfg)
            extra.append(nxt)
            state = state.advance(nxt, mu)
        assert tuple(extra) == path[t + 1 - traj.rho:]
        entry = traj.tau
        assert path[entry:entry + traj.rho] == path[entry + traj.rho:entry + 2 * traj.rho] or \
            entry + 2 * traj.rho > len(path)
        # the transient is minimal
        if entry > 0:
            assert path[entry - 1] != path[entry - 1 + traj.rho]


def test_run_walk_is_deterministic(rng):
    img = random_image(rng, 9, 9)
    cfg = WalkConfig(3, Rule.MAX)
    assert run_walk(img, (4, 4), cfg) == run_walk(img, (4, 4), cfg)


def test_run_batch_single_start(tiny):
    from touristwalk.sampling import StartSelection

    sel = StartSelection(ALL, 2, 2, np.array([0]))
    dist = run_batch(tiny, sel, WalkConfig(1, Rule.MIN))
    assert dist.counts == {(1, 2): 1} and dist.total == 1


def test_run_batch_constant_image():
    img = GrayImage(np.full((8, 8), 50, np.uint8))
    dist = run_batch(img, select_starts(img, ALL), WalkConfig(1, Rule.MIN))
    assert dist.total == 64
    assert sum(dist.counts.values()) == 64
    assert {rho for _, rho in dist.counts} == {2}
    grid = img.pixels.tolist()
    expected = {}
    for x in range(8):
        for y in range(8):
            tau, rho, _ = reference_walk(grid, (x, y), 1, "min")
            expected[(tau, rho)] = expected.get((tau, rho), 0) + 1
    assert dist.counts == expected


def test_batch_partition_independence(rng):
    img = random_image(rng, 20, 20)
    cfg = WalkConfig(3, Rule.MIN)
    sel = select_starts(img, KSpec((3,)))
    whole = run_batch(img, sel, cfg)
    from touristwalk.features import JointDistribution

    parts = np.array_split(sel.codes, 4)
    merged = None
    for part in parts[::-1]:
        d = JointDistribution.from_outcomes(*walk_outcomes(img, part, cfg), 3, Rule.MIN)
        merged = d if merged is None else merged.merge(d)
    assert merged == whole


def test_format_trajectory(tiny):
    traj = run_walk(tiny, (0, 0), WalkConfig(1, Rule.MIN), keep_path=True)
    text = format_trajectory(tiny, traj)
    assert text.splitlines() == ["0 0 0 0 0", "1 0 1 1 10", "2 1 0 2 20", "3 0 1 1 10",
                                 "tau=1 rho=2"]
