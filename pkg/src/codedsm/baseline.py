"""Replication baselines with the same round shape as the coded pipeline.

Full replication runs every machine on every node; partial replication
splits the nodes into K disjoint groups and pins one machine to each. Both
decide client outputs by the matching-report rule, so the only differences
from the coded pipeline are storage layout and fault tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

from .csm import DeliveryFailure, client_decide
from .field import ConfigurationError, uncounted
from .machine import TransitionFunction

MODES = ("full", "partial")


@dataclass(frozen=True)
class ReplicationConfig:
    machine: TransitionFunction
    mode: str
    n_nodes: int
    k_machines: int
    setting: str

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigurationError(f"mode must be one of {MODES}")
        if self.setting not in ("sync", "psync"):
            raise ConfigurationError("setting must be sync or psync")
        if self.k_machines < 1 or self.n_nodes < 1:
            raise ConfigurationError("need at least one machine and node")
        if self.mode == "partial":
            if self.n_nodes % self.k_machines:
                raise ConfigurationError(
                    f"partial replication needs K | N, got "
                    f"N={self.n_nodes}, K={self.k_machines}")

    @property
    def group_size(self) -> int:
        """Nodes per machine: q = N/K under partial, all N under full."""
        if self.mode == "partial":
            return self.n_nodes // self.k_machines
        return self.n_nodes

    @property
    def beta(self) -> int:
        """Design fault tolerance of the client decision rule."""
        q = self.group_size
        return (q - 1) // 2 if self.setting == "sync" else (q - 1) // 3

    def group(self, k: int) -> range:
        """Node indices responsible for machine k."""
        if self.mode == "full":
            return range(self.n_nodes)
        q = self.group_size
        return range(k * q, (k + 1) * q)

    def machines_of(self, i: int) -> range:
        """Machine indices node i executes and stores."""
        if self.mode == "full":
            return range(self.k_machines)
        k = i // self.group_size
        return range(k, k + 1)

    @property
    def storage_elements_per_node(self) -> int:
        per_machine = self.machine.state_dim
        return per_machine * (self.k_machines if self.mode == "full" else 1)


@dataclass(frozen=True)
class BaselineRound:
    """One replicated round: honest trajectory plus client-side view."""

    next_states: tuple[tuple[int, ...], ...]
    outputs: tuple[tuple[int, ...] | None, ...]
    reports: tuple
    failures: tuple[tuple[int, str], ...]

    @property
    def success(self) -> bool:
        return not self.failures

    def record(self, round_index: int, commands=None) -> dict:
        return {
            "round": round_index,
            "commands": None if commands is None else
                        [list(c) for c in commands],
            "outputs": [None if y is None else list(y)
                        for y in self.outputs],
            "success": self.success,
            "violation": "; ".join(r for _, r in self.failures) or None,
        }


def _decide_outputs(cfg: ReplicationConfig, reports):
    """Client decision per machine from that machine's replica group."""
    sd = cfg.machine.state_dim
    outputs = []
    failures = []
    for k in range(cfg.k_machines):
        pool = []
        for i in cfg.group(k):
            r = reports[i]
            if r is None or r.get(k) is None:
                pool.append(None)
            else:
                pool.append(tuple(r[k][sd:]))
        try:
            outputs.append(client_decide(pool, cfg.beta))
        except DeliveryFailure as exc:
            outputs.append(None)
            failures.append((k, str(exc)))
    return tuple(outputs), tuple(failures)


def run_replicated_round(states, commands, cfg: ReplicationConfig,
                         tamper=None) -> BaselineRound:
    """Execute one round of full or partial replication.

    ``tamper(i, report)`` may replace node i's report dict (machine index
    -> flat next-state+output vector), or return None to stay silent.
    Honest nodes advance their stored states from their own computation,
    so the returned trajectory is the uncoded ground truth.
    """
    if len(states) != cfg.k_machines or len(commands) != cfg.k_machines:
        raise ValueError("need one state and one command per machine")
    with uncounted():  # experimenter's ground truth, not protocol work
        truth = [cfg.machine.eval_all(s, x) for s, x in zip(states, commands)]
    sd = cfg.machine.state_dim
    reports = []
    for i in range(cfg.n_nodes):
        # replication means the node really recomputes every transition
        # it hosts; the redundancy is the cost being measured
        mine = {k: cfg.machine.eval_all(states[k], commands[k])
                for k in cfg.machines_of(i)}
        if tamper is not None:
            mine = tamper(i, mine)
        reports.append(mine)
    outputs, failures = _decide_outputs(cfg, reports)
    next_states = tuple(tuple(t[:sd]) for t in truth)
    return BaselineRound(next_states, outputs, tuple(reports), failures)


def run_full_round(states, commands, cfg: ReplicationConfig,
                   tamper=None) -> BaselineRound:
    if cfg.mode != "full":
        raise ConfigurationError("config is not full replication")
    return run_replicated_round(states, commands, cfg, tamper)


def run_partial_round(states, commands, cfg: ReplicationConfig,
                      tamper=None) -> BaselineRound:
    if cfg.mode != "partial":
        raise ConfigurationError("config is not partial replication")
    return run_replicated_round(states, commands, cfg, tamper)
