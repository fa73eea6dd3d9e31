"""Grid geometry, transition mechanics, and environment validation."""

import numpy as np
import pytest

from qirl_uav.channel import CarrierConfig, GroundUser, Position3
from qirl_uav.gridworld import (
    ACTION_DELTAS,
    N_ACTIONS,
    Action,
    EnvConfig,
    GridSpec,
    build,
    manhattan,
)

from conftest import make_channel_env, make_uniform_env


def test_action_deltas_match_enum_semantics():
    # forward/backward move along +y/-y, left/right along -x/+x
    assert ACTION_DELTAS[Action.FORWARD] == (0, 1)
    assert ACTION_DELTAS[Action.BACKWARD] == (0, -1)
    assert ACTION_DELTAS[Action.LEFT] == (-1, 0)
    assert ACTION_DELTAS[Action.RIGHT] == (1, 0)
    assert N_ACTIONS == 4


def test_manhattan():
    assert manhattan((0, 0), (2, 2)) == 4
    assert manhattan((3, 1), (1, 4)) == 5
    assert manhattan((2, 2), (2, 2)) == 0


def test_state_indexing_roundtrip():
    env = make_uniform_env(n1=3, n2=4, max_steps=5)
    seen = set()
    for i in range(3):
        for j in range(4):
            s = env.state_of(i, j)
            assert env.cell_of(s) == (i, j)
            seen.add(s)
    assert seen == set(range(env.n_states))
    with pytest.raises(ValueError):
        env.state_of(3, 0)
    with pytest.raises(ValueError):
        env.cell_of(12)


def test_cell_center_geometry():
    env = make_uniform_env(n1=4, n2=4, max_steps=6, cell_size=20.0)
    center = env.cell_center(env.state_of(2, 3))
    assert (center.x, center.y, center.z) == (50.0, 70.0, 100.0)


def test_step_moves_one_cell():
    env = make_uniform_env(n1=3, n2=3, max_steps=4, terminal=(2, 2))
    mid = env.state_of(1, 1)
    assert env.cell_of(env.step(mid, Action.FORWARD).next_state) == (1, 2)
    assert env.cell_of(env.step(mid, Action.BACKWARD).next_state) == (1, 0)
    assert env.cell_of(env.step(mid, Action.LEFT).next_state) == (0, 1)
    assert env.cell_of(env.step(mid, Action.RIGHT).next_state) == (2, 1)


def test_step_pays_entered_cell_reward():
    env = make_channel_env(3, 3, [(10.0, 10.0)], max_steps=4)
    mid = env.state_of(1, 1)
    out = env.step(mid, Action.LEFT)
    assert out.reward == float(env.rewards[out.next_state])
    assert not out.boundary_hit and not out.terminal


def test_rebound_keeps_state_and_flags_boundary():
    env = make_uniform_env(n1=3, n2=3, max_steps=4)
    corner = env.state_of(0, 0)
    for action in (Action.BACKWARD, Action.LEFT):
        out = env.step(corner, action)
        assert out.next_state == corner
        assert out.reward == 0.0
        assert out.boundary_hit and not out.terminal


def test_rebound_honors_configured_penalty():
    env = make_uniform_env(n1=3, n2=3, max_steps=4, boundary_penalty=-0.3)
    out = env.step(env.state_of(0, 0), Action.LEFT)
    assert out.reward == -0.3


def test_terminal_entry_pays_bonus_and_ends_episode():
    env = make_uniform_env(n1=3, n2=3, reward=1.0, max_steps=4, terminal=(2, 2))
    before = env.state_of(2, 1)
    out = env.step(before, Action.FORWARD)
    assert out.terminal
    assert out.next_state == env.terminal_state
    assert out.reward == env.terminal_bonus == 10.0


def test_terminal_bonus_is_ten_times_field_max():
    env = make_channel_env(3, 3, [(10.0, 10.0), (50.0, 30.0)], max_steps=4)
    assert env.terminal_bonus == 10.0 * float(env.rewards.max())
    assert np.all(env.rewards > 0.0)


def test_uniform_reward_overrides_channel_field():
    env = make_uniform_env(n1=3, n2=3, reward=0.7, max_steps=4)
    assert np.all(env.rewards == 0.7)
    assert env.terminal_bonus == 7.0


def test_step_rejects_terminal_state_and_bad_action():
    env = make_uniform_env()
    with pytest.raises(ValueError):
        env.step(env.terminal_state, Action.FORWARD)
    with pytest.raises(ValueError):
        env.step(env.start_state, 4)
    with pytest.raises(ValueError):
        env.step(-1, Action.FORWARD)


def _config(**overrides):
    base = dict(
        grid=GridSpec(3, 3, 20.0, Position3(10.0, 10.0, 0.0), 100.0),
        users=(),
        carrier=CarrierConfig(2e9),
        start_cell=(0, 0),
        terminal_cell=(2, 2),
        max_steps=4,
        total_bandwidth=10e6,
        uniform_reward=1.0,
    )
    base.update(overrides)
    return EnvConfig(**base)


def test_env_config_validation():
    with pytest.raises(ValueError):
        _config(start_cell=(3, 0))  # outside the grid
    with pytest.raises(ValueError):
        _config(terminal_cell=(0, 0))  # equal to start
    with pytest.raises(ValueError):
        _config(max_steps=3)  # below the start-terminal Manhattan distance
    with pytest.raises(ValueError):
        _config(uniform_reward=None)  # no users and no synthetic reward
    with pytest.raises(ValueError):
        _config(uniform_reward=-1.0)
    with pytest.raises(ValueError):
        _config(boundary_penalty=0.5)  # rebounds may not be rewarded
    with pytest.raises(ValueError):
        _config(total_bandwidth=0.0)


def test_env_config_rejects_oversubscribed_bandwidth():
    user = GroundUser(Position3(10, 10, 0), 1.0, 1.0, 6e6)
    with pytest.raises(ValueError):
        _config(users=(user, user), uniform_reward=None, total_bandwidth=10e6)


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(1, 3, 20.0, Position3(10, 10, 0), 100.0)
    with pytest.raises(ValueError):
        GridSpec(3, 3, 0.0, Position3(10, 10, 0), 100.0)
    with pytest.raises(ValueError):
        GridSpec(3, 3, 20.0, Position3(10, 10, 0), -5.0)


def test_build_channel_rewards_peak_under_user_cluster():
    env = make_channel_env(3, 3, [(50.0, 50.0)], max_steps=4)
    # single user under cell (2,2): that cell is closest, hence richest
    assert int(np.argmax(env.rewards)) == env.state_of(2, 2)
