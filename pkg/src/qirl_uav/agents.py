"""Tabular learners: the quantum-inspired agent (collapse selection plus
multiplicative amplitude-style reinforcement) and two Q-learning baselines."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gridworld import N_ACTIONS, GridWorld, StepOutcome
from .quantum import sample_index

ROW_SUM_TOL = 1e-6
MIN_TEMPERATURE = 1e-12


@dataclass
class QiRLConfig:
    """Hyperparameters for the quantum-inspired agent.

    reward_scale divides the reinforcement exponent k*(r + V(s')); None means
    "use the environment's terminal bonus", resolved at agent construction.
    alpha_decay is the c in alpha_k = alpha / (1 + c*k) over the update count,
    which satisfies the usual stochastic-approximation step-size conditions.
    """

    alpha: float = 0.1
    gamma: float = 1.0  # fixed: episodic, undiscounted
    k_plus: float = 1.0
    k_minus: float = -1.0
    reward_scale: float | None = None
    exponent_clamp: float = 10.0
    p_floor: float = 1e-4
    alpha_decay: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must lie in (0, 1]")
        if self.gamma != 1.0:
            raise ValueError("gamma is fixed at 1")
        if self.k_plus <= 0.0:
            raise ValueError("k_plus must be positive")
        if self.k_minus >= 0.0:
            raise ValueError("k_minus must be negative")
        if self.reward_scale is not None and self.reward_scale <= 0.0:
            raise ValueError("reward_scale must be positive")
        if self.exponent_clamp <= 0.0:
            raise ValueError("exponent_clamp must be positive")
        if not 0.0 <= self.p_floor <= 0.01:
            raise ValueError("p_floor must lie in [0, 0.01]")
        if self.alpha_decay < 0.0:
            raise ValueError("alpha_decay must be non-negative")

    def alpha_at(self, update_count: int) -> float:
        return self.alpha / (1.0 + self.alpha_decay * update_count)


@dataclass
class ExplorationSchedule:
    """Per-episode exploration parameter: max(floor, initial * decay^episode)."""

    kind: str  # "epsilon_greedy" or "boltzmann"
    initial: float
    decay: float
    floor: float

    def __post_init__(self):
        if self.kind not in ("epsilon_greedy", "boltzmann"):
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if self.initial < 0.0:
            raise ValueError("initial must be non-negative")
        if not 0.0 < self.decay <= 1.0:
            raise ValueError("decay must lie in (0, 1]")
        if self.floor < 0.0 or (self.kind == "boltzmann" and self.floor <= 0.0):
            raise ValueError("floor must be positive for boltzmann, non-negative otherwise")

    def value(self, episode: int) -> float:
        return max(self.floor, self.initial * self.decay**episode)


def default_epsilon_schedule() -> ExplorationSchedule:
    return ExplorationSchedule("epsilon_greedy", 1.0, 0.995, 0.01)


def default_boltzmann_schedule(terminal_bonus: float) -> ExplorationSchedule:
    return ExplorationSchedule("boltzmann", terminal_bonus, 0.995, 0.01 * terminal_bonus)


def value_table(n_states: int) -> np.ndarray:
    return np.zeros(n_states)


def preference_table(n_states: int) -> np.ndarray:
    """Per-state action probabilities, born uniform (the |h|^2 of an equal
    superposition)."""
    return np.full((n_states, N_ACTIONS), 1.0 / N_ACTIONS)


def q_table(n_states: int) -> np.ndarray:
    return np.zeros((n_states, N_ACTIONS))


def qirl_select(prefs: np.ndarray, state: int, rng: np.random.Generator) -> int:
    """Collapse the state's action distribution; one uniform consumed.

    Inlined four-way inverse-CDF walk, arithmetic-identical to
    quantum.sample_index (same running sums, same right-bisection rule) but
    without the small-array overhead; this sits on the innermost loop.
    """
    p0, p1, p2, p3 = prefs[state].tolist()
    if abs(p0 + p1 + p2 + p3 - 1.0) > ROW_SUM_TOL:
        raise ValueError(f"preference row for state {state} does not sum to 1")
    u = rng.random()
    c = p0
    if u < c:
        return 0
    c += p1
    if u < c:
        return 1
    c += p2
    if u < c:
        return 2
    return 3


def _apply_floor(row: np.ndarray, floor: float) -> None:
    """Lift entries to at least `floor`, renormalizing the unfloored mass.

    Iterative so the scaled entries cannot dip back under the floor; ends with
    an exact clamp, leaving the row sum within a few ulps of 1.
    """
    if floor <= 0.0:
        return
    p = row.tolist()
    n = len(p)
    floored = [v < floor for v in p]
    for _ in range(n):
        mass = 1.0 - floor * sum(floored)
        free_sum = 0.0
        for i in range(n):
            if not floored[i]:
                free_sum += p[i]
        scale = mass / free_sum
        newly = False
        for i in range(n):
            if not floored[i] and p[i] * scale < floor:
                floored[i] = True
                newly = True
        if not newly:
            for i in range(n):
                v = floor if floored[i] else p[i] * scale
                row[i] = v if v > floor else floor
            return


def qirl_update(
    values: np.ndarray,
    prefs: np.ndarray,
    state: int,
    action: int,
    reward: float,
    next_state: int,
    boundary_hit: bool,
    cfg: QiRLConfig,
    update_count: int = 0,
    cut: bool = False,
) -> None:
    """One TD(0) value step plus one multiplicative preference step, in place.

    The TD error is computed before the value write. The reinforcement factor
    exp(clamp(k * (reward + V(next_state)) / reward_scale)) reads the value
    table after the write (it differs only on rebounds, where next == state);
    k is k_minus when the move rebounded or the TD error is negative, else
    k_plus. The row is then renormalized and floored.

    cut marks the final transition of a budget-truncated episode: the TD
    target bootstraps 0 then (as on terminal entry, whose V never leaves 0),
    keeping learned values finite-horizon-consistent. Without it, undiscounted
    TD on positive-reward cycles has no fixed point and diverges. The
    preference factor still reads the stored V(next_state), so a truncated
    episode's last action is punished in proportion to the value it failed
    to cash in, exactly countering the boosts a loop collected on the way.
    """
    if not math.isfinite(reward):
        raise ValueError("reward must be finite")
    if cfg.reward_scale is None:
        raise ValueError("reward_scale unresolved; construct the config with a value or use QiRLAgent")
    alpha = cfg.alpha_at(update_count)
    v_state = float(values[state])
    v_next = float(values[next_state])
    delta = reward + (0.0 if cut else cfg.gamma * v_next) - v_state
    values[state] = v_state + alpha * delta
    if next_state == state:  # rebound: the factor reads the value just written
        v_next = v_state + alpha * delta
    k = cfg.k_minus if (boundary_hit or delta < 0.0) else cfg.k_plus
    exponent = k * (reward + v_next) / cfg.reward_scale
    exponent = min(max(exponent, -cfg.exponent_clamp), cfg.exponent_clamp)
    row = prefs[state]
    p = row.tolist()
    p[action] *= math.exp(exponent)
    total = p[0] + p[1] + p[2] + p[3]
    row[0] = p[0] / total
    row[1] = p[1] / total
    row[2] = p[2] / total
    row[3] = p[3] / total
    _apply_floor(row, cfg.p_floor)


def ql_select(
    q: np.ndarray,
    state: int,
    schedule: ExplorationSchedule,
    episode: int,
    rng: np.random.Generator,
) -> int:
    """Exploratory action choice for the baselines.

    epsilon-greedy consumes two uniforms per call (branch, then action or
    tie-break); Boltzmann consumes one. Softmax subtracts the row max before
    exponentiating, so extreme Q values cannot overflow.
    """
    value = schedule.value(episode)
    row = q[state].tolist()
    if schedule.kind == "epsilon_greedy":
        u_branch = rng.random()
        u_pick = rng.random()
        if u_branch < value:
            return min(int(u_pick * N_ACTIONS), N_ACTIONS - 1)
        top = max(row)
        ties = [i for i, v in enumerate(row) if v == top]
        return ties[min(int(u_pick * len(ties)), len(ties) - 1)]
    if value < MIN_TEMPERATURE:
        raise ValueError(f"temperature {value:g} below minimum {MIN_TEMPERATURE:g}")
    z = [v / value for v in row]
    top = max(z)
    w0, w1, w2, w3 = (math.exp(v - top) for v in z)
    total = w0 + w1 + w2 + w3
    u = rng.random()
    c = w0 / total
    if u < c:
        return 0
    c += w1 / total
    if u < c:
        return 1
    c += w2 / total
    if u < c:
        return 2
    return 3


def ql_update(
    q: np.ndarray,
    state: int,
    action: int,
    reward: float,
    next_state: int,
    alpha: float,
    gamma: float,
    terminal: bool = False,
) -> None:
    """Standard Q-learning backup.

    terminal covers any episode-ending transition (terminal entry or budget
    cut): those bootstrap from 0 instead of max Q(next)."""
    if not math.isfinite(reward):
        raise ValueError("reward must be finite")
    bootstrap = 0.0 if terminal else max(q[next_state].tolist())
    old = float(q[state, action])
    q[state, action] = old + alpha * (reward + gamma * bootstrap - old)


class QiRLAgent:
    """Owns the value and preference tables plus the update counter."""

    name = "qirl"

    def __init__(self, env: GridWorld, cfg: QiRLConfig | None = None):
        cfg = cfg if cfg is not None else QiRLConfig()
        if cfg.reward_scale is None:
            cfg = QiRLConfig(
                alpha=cfg.alpha,
                gamma=cfg.gamma,
                k_plus=cfg.k_plus,
                k_minus=cfg.k_minus,
                reward_scale=env.terminal_bonus,
                exponent_clamp=cfg.exponent_clamp,
                p_floor=cfg.p_floor,
                alpha_decay=cfg.alpha_decay,
            )
        self.cfg = cfg
        self.values = value_table(env.n_states)
        self.prefs = preference_table(env.n_states)
        self.updates = 0

    def select(self, state: int, rng: np.random.Generator) -> int:
        return qirl_select(self.prefs, state, rng)

    def update(self, state: int, action: int, outcome: StepOutcome, cut: bool = False) -> None:
        qirl_update(
            self.values,
            self.prefs,
            state,
            action,
            outcome.reward,
            outcome.next_state,
            outcome.boundary_hit,
            self.cfg,
            self.updates,
            cut,
        )
        self.updates += 1

    def end_episode(self) -> None:
        pass

    def greedy_action(self, state: int) -> int:
        return int(np.argmax(self.prefs[state]))


class QLearningAgent:
    """Q-table learner with an epsilon-greedy or Boltzmann schedule."""

    def __init__(self, env: GridWorld, schedule: ExplorationSchedule, alpha: float = 0.1, gamma: float = 1.0):
        if not 0.0 < alpha <= 1.0:
            raise ValueError("alpha must lie in (0, 1]")
        if not 0.0 <= gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        self.q = q_table(env.n_states)
        self.schedule = schedule
        self.alpha = alpha
        self.gamma = gamma
        self.episode = 0
        self.name = "ql_eps" if schedule.kind == "epsilon_greedy" else "ql_boltz"

    def select(self, state: int, rng: np.random.Generator) -> int:
        return ql_select(self.q, state, self.schedule, self.episode, rng)

    def update(self, state: int, action: int, outcome: StepOutcome, cut: bool = False) -> None:
        ql_update(
            self.q,
            state,
            action,
            outcome.reward,
            outcome.next_state,
            self.alpha,
            self.gamma,
            outcome.terminal or cut,
        )

    def end_episode(self) -> None:
        self.episode += 1

    def greedy_action(self, state: int) -> int:
        return int(np.argmax(self.q[state]))


@dataclass
class Rollout:
    """States visited by a deterministic policy, rewards collected, and
    whether the terminal cell was reached within the step budget."""

    states: list[int] = field(default_factory=list)
    rewards: list[float] = field(default_factory=list)
    total_return: float = 0.0
    reached_terminal: bool = False


def greedy_rollout(env: GridWorld, policy) -> Rollout:
    """Follow policy(state) -> action from the start cell.

    Runs until the terminal cell or the step budget; a stationary policy that
    revisits a state can never terminate, so budget exhaustion doubles as
    cycle truncation and leaves reached_terminal False.
    """
    out = Rollout(states=[env.start_state])
    s = env.start_state
    for _ in range(env.max_steps):
        step = env.step(s, policy(s))
        out.states.append(step.next_state)
        out.rewards.append(step.reward)
        out.total_return += step.reward
        s = step.next_state
        if step.terminal:
            out.reached_terminal = True
            break
    return out
