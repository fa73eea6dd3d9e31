"""Deterministic episodic grid MDP whose cell rewards are uplink sum rates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .channel import CarrierConfig, GroundUser, Position3, sum_rate

TERMINAL_BONUS_FACTOR = 10.0


class Action(IntEnum):
    """Motion on the cell grid. Forward/backward move along +y/-y (index j),
    left/right along -x/+x (index i)."""

    FORWARD = 0
    BACKWARD = 1
    LEFT = 2
    RIGHT = 3


# (di, dj) per Action value; order must match the enum.
ACTION_DELTAS = ((0, 1), (0, -1), (-1, 0), (1, 0))

N_ACTIONS = len(Action)


@dataclass(frozen=True)
class GridSpec:
    """Grid geometry: n1 x n2 cells of cell_size meters, flown at a fixed
    altitude. origin is the center of cell (0, 0)."""

    n1: int
    n2: int
    cell_size: float
    origin: Position3
    altitude: float

    def __post_init__(self):
        if self.n1 < 2 or self.n2 < 2:
            raise ValueError("grid needs at least 2 cells per side")
        if self.cell_size <= 0.0:
            raise ValueError("cell_size must be positive")
        if self.altitude <= 0.0:
            raise ValueError("altitude must be positive")


@dataclass(frozen=True)
class EnvConfig:
    grid: GridSpec
    users: tuple[GroundUser, ...]
    carrier: CarrierConfig
    start_cell: tuple[int, int]
    terminal_cell: tuple[int, int]
    max_steps: int
    total_bandwidth: float
    uniform_reward: float | None = None  # synthetic override: every cell gets this
    boundary_penalty: float = 0.0

    def __post_init__(self):
        for name, (i, j) in (("start_cell", self.start_cell), ("terminal_cell", self.terminal_cell)):
            if not (0 <= i < self.grid.n1 and 0 <= j < self.grid.n2):
                raise ValueError(f"{name} ({i}, {j}) outside {self.grid.n1}x{self.grid.n2} grid")
        if self.start_cell == self.terminal_cell:
            raise ValueError("start_cell equals terminal_cell")
        if self.uniform_reward is None:
            if not self.users:
                raise ValueError("at least one ground user is required unless uniform_reward is set")
        elif self.uniform_reward <= 0.0:
            raise ValueError("uniform_reward must be positive")
        if self.total_bandwidth <= 0.0:
            raise ValueError("total_bandwidth must be positive")
        allocated = sum(u.bandwidth for u in self.users)
        if allocated > self.total_bandwidth * (1.0 + 1e-12):
            raise ValueError(
                f"user bandwidth sum {allocated:g} Hz exceeds total_bandwidth {self.total_bandwidth:g} Hz"
            )
        if self.max_steps < manhattan(self.start_cell, self.terminal_cell):
            raise ValueError("max_steps smaller than the start-terminal Manhattan distance")
        if self.boundary_penalty > 0.0:
            raise ValueError("boundary_penalty must be <= 0")


@dataclass(frozen=True)
class StepOutcome:
    next_state: int
    reward: float
    boundary_hit: bool
    terminal: bool


def manhattan(cell_a: tuple[int, int], cell_b: tuple[int, int]) -> int:
    return abs(cell_a[0] - cell_b[0]) + abs(cell_a[1] - cell_b[1])


class GridWorld:
    """Immutable environment: precomputed per-cell rewards, flattened states.

    State id of cell (i, j) is j * n1 + i. Entering a cell pays that cell's
    reward; entering the terminal cell pays the bonus (10x the max cell
    reward) instead and ends the episode. Moves off the grid rebound: same
    state, boundary penalty (default 0), episode continues.
    """

    def __init__(self, config: EnvConfig):
        self.config = config
        self.n1 = config.grid.n1
        self.n2 = config.grid.n2
        self.n_states = self.n1 * self.n2
        self.max_steps = config.max_steps
        self.boundary_penalty = config.boundary_penalty
        self.start_state = self.state_of(*config.start_cell)
        self.terminal_state = self.state_of(*config.terminal_cell)
        if config.uniform_reward is not None:
            self.rewards = np.full(self.n_states, float(config.uniform_reward))
        else:
            self.rewards = np.empty(self.n_states)
            for s in range(self.n_states):
                self.rewards[s] = sum_rate(self.cell_center(s), config.users, config.carrier)
        self.terminal_bonus = TERMINAL_BONUS_FACTOR * float(self.rewards.max())

    def state_of(self, i: int, j: int) -> int:
        if not (0 <= i < self.n1 and 0 <= j < self.n2):
            raise ValueError(f"cell ({i}, {j}) outside {self.n1}x{self.n2} grid")
        return j * self.n1 + i

    def cell_of(self, state: int) -> tuple[int, int]:
        self._check_state(state)
        return state % self.n1, state // self.n1

    def cell_center(self, state: int) -> Position3:
        i, j = self.cell_of(state)
        origin = self.config.grid.origin
        size = self.config.grid.cell_size
        return Position3(origin.x + i * size, origin.y + j * size, self.config.grid.altitude)

    def step(self, state: int, action: int) -> StepOutcome:
        """Deterministic transition. Stepping from the terminal cell is a
        contract violation: episodes end there."""
        self._check_state(state)
        if state == self.terminal_state:
            raise ValueError("cannot step from the terminal cell")
        if not 0 <= action < N_ACTIONS:
            raise ValueError(f"action {action} outside 0..{N_ACTIONS - 1}")
        i, j = self.cell_of(state)
        di, dj = ACTION_DELTAS[action]
        ti, tj = i + di, j + dj
        if not (0 <= ti < self.n1 and 0 <= tj < self.n2):
            return StepOutcome(state, self.boundary_penalty, True, False)
        nxt = self.state_of(ti, tj)
        if nxt == self.terminal_state:
            return StepOutcome(nxt, self.terminal_bonus, False, True)
        return StepOutcome(nxt, float(self.rewards[nxt]), False, False)

    def _check_state(self, state: int) -> None:
        if not 0 <= state < self.n_states:
            raise ValueError(f"state {state} outside 0..{self.n_states - 1}")


def build(config: EnvConfig) -> GridWorld:
    """Construct the environment (validates config, precomputes rewards)."""
    return GridWorld(config)
