"""Coded state machine round pipeline.

States of K machines are stored across N nodes as evaluations of the
degree-(K-1) interpolating polynomial through the machine states. Every
node runs the transition function on its coded slice; the results are
evaluations of a composite polynomial of degree at most d(K-1), so the true
next states and outputs can be recovered by noisy interpolation as long as
the corrupted share stays under the decoding radius.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .field import ConfigurationError, Field, PrimeField
from .machine import TransitionFunction
from .poly import DensePoly, EvalDomain, multipoint_eval, np_matvec
from .rs import DecodeFailure, NoisyCodeword, decode

SETTINGS = ("sync", "psync")


class DeliveryFailure(Exception):
    """No output value reached the required number of matching reports."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(x).limit_denominator(10**6)


def max_machines(n_nodes: int, fault_fraction, degree: int,
                 setting: str) -> int:
    """Largest machine count a node budget supports at a fault fraction."""
    if setting not in SETTINGS:
        raise ConfigurationError(f"setting must be one of {SETTINGS}")
    if degree < 1:
        raise ConfigurationError("degree must be at least 1")
    frac = _as_fraction(fault_fraction)
    cap = Fraction(1, 2) if setting == "sync" else Fraction(1, 3)
    if not 0 <= frac < cap:
        raise ConfigurationError(
            f"fault fraction {fault_fraction} out of range for {setting} "
            f"(needs 0 <= f < {cap})")
    mult = 2 if setting == "sync" else 3
    k = (1 - mult * frac) * n_nodes / degree + 1 - Fraction(1, degree)
    return int(k)  # int() floors here since k >= 0


def check_budget(n_nodes: int, k_machines: int, degree: int, b: int,
                 setting: str) -> None:
    """Enforce the decoding, consensus, and delivery bounds for b faults."""
    if setting not in SETTINGS:
        raise ConfigurationError(f"setting must be one of {SETTINGS}")
    if b < 0:
        raise ConfigurationError("fault budget must be nonnegative")
    dd = degree * (k_machines - 1)
    if setting == "sync":
        if 2 * b + 1 > n_nodes - dd:
            raise ConfigurationError(
                f"decoding bound violated: 2*{b}+1 > {n_nodes}-{dd}")
        if b + 1 > n_nodes:
            raise ConfigurationError("consensus bound violated")
    else:
        if 3 * b + 1 > n_nodes - dd:
            raise ConfigurationError(
                f"decoding bound violated: 3*{b}+1 > {n_nodes}-{dd}")
        if 3 * b + 1 > n_nodes:
            raise ConfigurationError("consensus bound violated")
    if 2 * b + 1 > n_nodes:
        raise ConfigurationError("output-delivery bound violated")


@dataclass(frozen=True)
class CodingConfig:
    """Sizing and domain choices for one coded deployment."""

    field: Field
    machine: TransitionFunction
    domain: EvalDomain
    setting: str
    b: int

    def __post_init__(self):
        if self.machine.field != self.field:
            raise ConfigurationError("machine is over a different field")
        if self.domain.field != self.field:
            raise ConfigurationError("domain is over a different field")
        check_budget(self.n_nodes, self.k_machines,
                     self.machine.total_degree(), self.b, self.setting)

    @staticmethod
    def make(machine: TransitionFunction, k_machines: int, n_nodes: int,
             setting: str = "sync", fault_fraction=None,
             b: int | None = None) -> "CodingConfig":
        if b is None:
            frac = _as_fraction(fault_fraction if fault_fraction is not None
                                else 0)
            b = int(frac * n_nodes)
        domain = EvalDomain.default(machine.field, k_machines, n_nodes)
        return CodingConfig(machine.field, machine, domain, setting, b)

    @property
    def k_machines(self) -> int:
        return len(self.domain.omegas)

    @property
    def n_nodes(self) -> int:
        return len(self.domain.alphas)

    @property
    def degree_bound(self) -> int:
        return self.machine.total_degree() * (self.k_machines - 1)

    @property
    def fault_fraction(self) -> Fraction:
        return Fraction(self.b, self.n_nodes)

    @property
    def flat_dim(self) -> int:
        return self.machine.state_dim + self.machine.out_dim


@dataclass(frozen=True)
class RoundResult:
    """Outcome of decoding one round of coded execution."""

    success: bool
    next_states: tuple[tuple[int, ...], ...] | None
    outputs: tuple[tuple[int, ...], ...] | None
    g_values: tuple[tuple[int, ...] | None, ...]
    tau: frozenset[int] | None
    violation: str | None = None

    def record(self, round_index: int, commands=None) -> dict:
        """Plain-dict form for a JSON-lines round trace."""
        return {
            "round": round_index,
            "commands": None if commands is None else
                        [list(c) for c in commands],
            "g": [None if g is None else list(g) for g in self.g_values],
            "tau": None if self.tau is None else sorted(self.tau),
            "outputs": None if self.outputs is None else
                       [list(y) for y in self.outputs],
            "success": self.success,
            "violation": self.violation,
        }


def _encode_vectors(vectors, cfg: CodingConfig) -> tuple[tuple[int, ...], ...]:
    """Per-node evaluations of the interpolant through K same-shaped vectors."""
    k, n = cfg.k_machines, cfg.n_nodes
    if len(vectors) != k:
        raise ValueError(f"need {k} vectors, got {len(vectors)}")
    dim = len(vectors[0])
    for v in vectors:
        if len(v) != dim:
            raise ValueError("mixed vector dimensions")
        for x in v:
            cfg.field.check(x)
    if isinstance(cfg.field, PrimeField):
        coeff = cfg.domain.np_coeffs()
        cols = []
        for j in range(dim):
            col = np.array([v[j] for v in vectors], dtype=np.int64)
            cols.append(np_matvec(coeff, col, cfg.field.p))
        return tuple(tuple(int(cols[j][i]) for j in range(dim))
                     for i in range(n))
    rows = cfg.domain.coeffs()
    out = []
    for i in range(n):
        acc = [0] * dim
        for cik, v in zip(rows[i], vectors):
            for j in range(dim):
                acc[j] = cfg.field.add(acc[j], cfg.field.mul(cik, v[j]))
        out.append(tuple(acc))
    return tuple(out)


def encode_states(states, cfg: CodingConfig):
    if len(states) and len(states[0]) != cfg.machine.state_dim:
        raise ValueError("state dimension mismatch")
    return _encode_vectors(states, cfg)


def encode_commands(commands, cfg: CodingConfig):
    if len(commands) and len(commands[0]) != cfg.machine.cmd_dim:
        raise ValueError("command dimension mismatch")
    return _encode_vectors(commands, cfg)


def execute_local(coded_state_i, coded_command_i, cfg: CodingConfig):
    """What an honest node broadcasts: the transition on its coded slice."""
    return cfg.machine.eval_all(coded_state_i, coded_command_i)


def decode_round(g_values, cfg: CodingConfig) -> RoundResult:
    """Recover next states and outputs from noisy per-node results.

    ``g_values[i]`` is node i's broadcast vector or None if nothing usable
    arrived. Missing slots consume error budget here because under bounded
    delay an honest node's message cannot be absent; callers in the
    eventually-synchronous setting instead pass the first N - b arrivals
    and None elsewhere, which this same arithmetic accepts.
    """
    n, k = cfg.n_nodes, cfg.k_machines
    if len(g_values) != n:
        raise ValueError(f"need {n} result slots, got {len(g_values)}")
    g_values = tuple(None if g is None else tuple(g) for g in g_values)
    missing = sum(1 for g in g_values if g is None)
    budget = cfg.b - missing if cfg.setting == "sync" else cfg.b
    if budget < 0:
        return RoundResult(False, None, None, g_values, None,
                           violation="more silent nodes than fault budget")
    if 2 * budget > (n - missing) - cfg.degree_bound - 1:
        return RoundResult(False, None, None, g_values, None,
                           violation="too few results to decode safely")
    dim = cfg.flat_dim
    for g in g_values:
        if g is not None and len(g) != dim:
            return RoundResult(False, None, None, g_values, None,
                               violation="malformed result vector")
    polys: list[DensePoly] = []
    tau: frozenset[int] | None = None
    for j in range(dim):
        values = tuple(None if g is None else g[j] for g in g_values)
        cw = NoisyCodeword(cfg.field, cfg.domain.alphas, values,
                           cfg.degree_bound, budget)
        try:
            res = decode(cw)
        except DecodeFailure:
            return RoundResult(False, None, None, g_values, None,
                               violation="decode failure (fault budget "
                                         "exceeded)")
        polys.append(res.poly)
        tau = res.agreement if tau is None else tau & res.agreement
    per_machine = [multipoint_eval(p, list(cfg.domain.omegas))
                   for p in polys]
    sd = cfg.machine.state_dim
    next_states = tuple(
        tuple(per_machine[j][mk] for j in range(sd)) for mk in range(k))
    outputs = tuple(
        tuple(per_machine[j][mk] for j in range(sd, dim)) for mk in range(k))
    return RoundResult(True, next_states, outputs, g_values,
                       tau if tau is not None else frozenset())


def update_coded_states(decoded_states, cfg: CodingConfig):
    """Re-encode decoded next states; same map as the initial encoding."""
    return encode_states(decoded_states, cfg)


def client_decide(reports, b: int):
    """Pick the value reported identically by at least b+1 nodes.

    Safe when the deployment satisfies 2b+1 <= N (enforced at config
    time): at most b of the reports lie, so b+1 matching reports always
    include an honest one, and no wrong value can gather b+1 matches.
    """
    present = [tuple(r) for r in reports if r is not None]
    counts: dict[tuple, int] = {}
    for r in present:
        counts[r] = counts.get(r, 0) + 1
    if counts:
        best = max(counts.items(), key=lambda kv: kv[1])
        if best[1] >= b + 1:
            return best[0]
    raise DeliveryFailure("no value reached b+1 matching reports")


def interpolate_states(states, cfg: CodingConfig) -> list[DensePoly]:
    """Per-coordinate interpolants through (omega_k, S_k); mostly for tests."""
    from .poly import interpolate
    out = []
    for j in range(len(states[0])):
        pts = [(w, s[j]) for w, s in zip(cfg.domain.omegas, states)]
        out.append(interpolate(pts, cfg.field))
    return out
