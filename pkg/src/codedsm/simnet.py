"""Deterministic simulation of coded and replicated state machines under
Byzantine faults.

One process plays N nodes, a handful of clients, and the network. All
randomness flows from the experiment seed through named streams, so a
config and seed pin the entire event log byte for byte. Messages carry
unforgeable sender tags (the simulator simply never lets one node write
another's slot), and the channel runs in broadcast mode (everyone sees the
same value of every message) or point-to-point mode (a Byzantine sender
may equivocate).
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import random
from collections import deque
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .baseline import ReplicationConfig, run_replicated_round
from .csm import (
    CodingConfig,
    DeliveryFailure,
    RoundResult,
    _as_fraction,
    client_decide,
    decode_round,
    encode_commands,
    encode_states,
    execute_local,
    max_machines,
    update_coded_states,
)
from .field import (
    ConfigurationError,
    CounterBoard,
    OpCounter,
    charge,
    counting,
    parse_field,
    uncounted,
)
from .intermix import (
    Delegation,
    WorkerStrategy,
    delegated_decode,
    delegated_encode,
    delegated_update,
)
from .machine import MACHINES, make_machine

PROTOCOLS = ("csm", "full", "partial")
CHANNELS = ("broadcast", "p2p")
ADVERSARIES = ("none", "corrupt", "corrupt_random", "withhold", "delay",
               "equivocate", "false_audit", "dishonest_worker")
SETTINGS = ("sync", "psync")


# ---------------------------------------------------------------------------
# timing and adversary
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Timing:
    """Delivery discipline. In the partially synchronous mode messages may
    be delayed arbitrarily before the stabilization round ``gst`` and are
    delivered within ``delta`` rounds afterwards. Node logic never reads
    ``gst``; only the network scheduler does."""

    mode: str = "sync"
    delta: int = 1
    gst: int = 0

    def __post_init__(self):
        if self.mode not in SETTINGS:
            raise ConfigurationError(f"timing mode must be one of {SETTINGS}")
        if self.delta < 1 or self.gst < 0:
            raise ConfigurationError("bad timing parameters")

    @staticmethod
    def draw(mode: str, rng: random.Random, horizon: int) -> "Timing":
        if mode == "sync":
            return Timing("sync")
        gst = rng.randrange(0, max(1, horizon // 2) + 1)
        return Timing("psync", 1, gst)


@dataclass(frozen=True)
class AdversaryModel:
    """Which nodes are Byzantine and what they do with that freedom."""

    faulty: frozenset[int]
    strategy: str = "none"
    seed: int = 0

    def __post_init__(self):
        if self.strategy not in ADVERSARIES:
            raise ConfigurationError(
                f"adversary must be one of {ADVERSARIES}")

    def stream(self, *salt) -> random.Random:
        # string hashing is randomized per process, so derive the child
        # seed from a stable digest instead of hash()
        tag = ":".join(str(s) for s in (self.seed,) + salt)
        digest = hashlib.sha256(tag.encode()).digest()
        return random.Random(int.from_bytes(digest[:8], "big"))


# ---------------------------------------------------------------------------
# clients and consensus
# ---------------------------------------------------------------------------

class CommandPool:
    """Pending client commands, one queue per machine."""

    def __init__(self, k_machines: int):
        self.queues: list[deque] = [deque() for _ in range(k_machines)]
        self.submitted: list[tuple[int, int, tuple[int, ...]]] = []

    def submit(self, machine_k: int, client: int, command) -> None:
        command = tuple(command)
        self.queues[machine_k].append((client, command))
        self.submitted.append((machine_k, client, command))

    def pending(self, machine_k: int) -> int:
        return len(self.queues[machine_k])


def consensus_oracle(pool: CommandPool, noop_command, preference=None):
    """Agree on one command per machine.

    Acts as an ideal functionality: the chosen command is always one a
    client actually submitted (or the designated no-op when nothing is
    pending), and every honest node observes the same choice. The
    adversary's only freedom is ``preference(k, n_pending) -> index``,
    which picks among pending commands.
    """
    commands = []
    clients = []
    for k, q in enumerate(pool.queues):
        if not q:
            commands.append(tuple(noop_command))
            clients.append(-1)
            continue
        idx = 0
        if preference is not None:
            idx = preference(k, len(q)) % len(q)
        q.rotate(-idx)
        client, cmd = q.popleft()
        q.rotate(idx)
        commands.append(cmd)
        clients.append(client)
    return tuple(commands), tuple(clients)


# ---------------------------------------------------------------------------
# event log
# ---------------------------------------------------------------------------

class EventLog:
    """Append-only list of JSON-serializable events."""

    def __init__(self):
        self.events: list[dict] = []

    def append(self, type_: str, **fields) -> dict:
        ev = {"type": type_, **fields}
        self.events.append(ev)
        return ev

    def of(self, type_: str) -> list[dict]:
        return [e for e in self.events if e["type"] == type_]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(e, sort_keys=True) + "\n"
                       for e in self.events)

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_jsonl())

    @staticmethod
    def from_jsonl(text: str) -> "EventLog":
        log = EventLog()
        for line in text.splitlines():
            line = line.strip()
            if line:
                log.events.append(json.loads(line))
        return log


# ---------------------------------------------------------------------------
# experiment configuration
# ---------------------------------------------------------------------------

_BOOLS = {"true": True, "1": True, "yes": True,
          "false": False, "0": False, "no": False}


@dataclass(frozen=True)
class ExperimentConfig:
    protocol: str
    n_nodes: int
    k_machines: int | None = None
    degree: int | None = None
    machine: str | None = None
    field_spec: str = "prime:2147483647"
    fault_fraction: object = 0
    b: int | None = None
    setting: str = "sync"
    channel: str = "broadcast"
    adversary: str = "none"
    rounds: int = 10
    seed: int = 0
    delegate: bool = False
    eps: float = 1e-3
    poly_mode: str = "auto"

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise ConfigurationError(f"protocol must be one of {PROTOCOLS}")
        if self.channel not in CHANNELS:
            raise ConfigurationError(f"channel must be one of {CHANNELS}")
        if self.setting not in SETTINGS:
            raise ConfigurationError(f"setting must be one of {SETTINGS}")
        if self.adversary not in ADVERSARIES:
            raise ConfigurationError(
                f"adversary must be one of {ADVERSARIES}")
        if self.rounds < 1 or self.n_nodes < 1:
            raise ConfigurationError("need at least one round and one node")
        if self.delegate and self.channel != "broadcast":
            raise ConfigurationError(
                "delegated verification requires the broadcast channel")
        if self.machine is not None and self.machine not in MACHINES:
            raise ConfigurationError(f"unknown machine {self.machine!r}")
        object.__setattr__(self, "fault_fraction",
                           _as_fraction(self.fault_fraction))

    def machine_name(self) -> str:
        if self.machine is not None:
            return self.machine
        if self.degree is not None and self.degree >= 2:
            return "product"
        return "bank"

    # -- plain-text key=value form -------------------------------------

    _KEYS = ("protocol", "n", "k", "d", "machine", "field", "mu", "b",
             "setting", "channel", "adversary", "rounds", "seed",
             "delegate", "eps", "poly_mode")

    def to_text(self) -> str:
        vals = {
            "protocol": self.protocol, "n": self.n_nodes,
            "k": self.k_machines, "d": self.degree,
            "machine": self.machine, "field": self.field_spec,
            "mu": str(self.fault_fraction), "b": self.b,
            "setting": self.setting, "channel": self.channel,
            "adversary": self.adversary, "rounds": self.rounds,
            "seed": self.seed, "delegate": str(self.delegate).lower(),
            "eps": repr(self.eps), "poly_mode": self.poly_mode,
        }
        lines = [f"{k} = {vals[k]}" for k in self._KEYS
                 if vals[k] is not None]
        return "\n".join(lines) + "\n"

    @staticmethod
    def parse(text: str) -> "ExperimentConfig":
        kv = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(
                    f"line {lineno}: expected key = value, got {raw!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            kv[key] = val
        unknown = set(kv) - set(ExperimentConfig._KEYS)
        if unknown:
            raise ConfigurationError(
                f"unknown config keys: {sorted(unknown)}")
        if "protocol" not in kv or "n" not in kv:
            raise ConfigurationError("config needs protocol and n")

        def geti(key):
            return int(kv[key]) if key in kv else None

        return ExperimentConfig(
            protocol=kv["protocol"],
            n_nodes=int(kv["n"]),
            k_machines=geti("k"),
            degree=geti("d"),
            machine=kv.get("machine"),
            field_spec=kv.get("field", "prime:2147483647"),
            fault_fraction=Fraction(kv["mu"]) if "mu" in kv else 0,
            b=geti("b"),
            setting=kv.get("setting", "sync"),
            channel=kv.get("channel", "broadcast"),
            adversary=kv.get("adversary", "none"),
            rounds=geti("rounds") or 10,
            seed=geti("seed") or 0,
            delegate=_BOOLS[kv.get("delegate", "false").lower()],
            eps=float(kv.get("eps", "1e-3")),
            poly_mode=kv.get("poly_mode", "auto"),
        )

    @staticmethod
    def from_file(path) -> "ExperimentConfig":
        with open(path) as fh:
            return ExperimentConfig.parse(fh.read())


def set_channel_mode(config: ExperimentConfig,
                     mode: str) -> ExperimentConfig:
    """Fix the channel before round zero; validation happens in the
    config constructor (delegated verification refuses point-to-point)."""
    return dataclasses.replace(config, channel=mode)


# ---------------------------------------------------------------------------
# adversarial message handling
# ---------------------------------------------------------------------------

def _corrupt_vector(vec, fld, rng, random_values: bool):
    if random_values:
        return tuple(rng.randrange(fld.order) for _ in vec)
    return tuple(fld.add(v, rng.randrange(1, fld.order)) for v in vec)


def _faulty_result(strategy, honest_value, fld, rng, rnd, timing):
    """What one Byzantine node broadcasts in place of its honest result."""
    if strategy in ("none", "false_audit", "dishonest_worker"):
        return honest_value
    if strategy == "withhold":
        return None
    if strategy == "delay":
        if timing.mode == "psync" and rnd >= timing.gst:
            return honest_value  # still bound by delta after stabilization
        return None
    if strategy == "corrupt":
        return _corrupt_vector(honest_value, fld, rng, False)
    if strategy in ("corrupt_random", "equivocate"):
        # under a broadcast channel equivocation collapses to one value
        return _corrupt_vector(honest_value, fld, rng, True)
    raise ConfigurationError(f"unhandled strategy {strategy}")


def _psync_arrivals(values, faulty, b, rng):
    """First N-b results a node acts on under the timeout rule.

    Byzantine senders rush their messages; the scheduler (adversary
    before stabilization, arbitrary-but-fair after) picks which honest
    results fill the remaining slots. Honest results do all arrive, the
    node just stops waiting at N - b.
    """
    n = len(values)
    keep = n - b
    rushed = [i for i in range(n) if i in faulty and values[i] is not None]
    honest = [i for i in range(n) if i not in faulty
              and values[i] is not None]
    chosen = set(rushed[:keep])
    fill = rng.sample(honest, min(len(honest), keep - len(chosen)))
    chosen.update(fill)
    return tuple(values[i] if i in chosen else None for i in range(n))


# ---------------------------------------------------------------------------
# experiment driver
# ---------------------------------------------------------------------------

@dataclass
class ExperimentResult:
    config: ExperimentConfig
    log: EventLog
    violations: list[dict]
    board: CounterBoard
    rounds_run: int
    oracle_states: tuple
    k_machines: int
    b: int

    @property
    def ok(self) -> bool:
        return not self.violations


def _streams(seed: int):
    base = random.Random(seed)
    return [random.Random(base.randrange(2 ** 63)) for _ in range(4)]


def _derive_sizes(config: ExperimentConfig, machine):
    n = config.n_nodes
    frac = config.fault_fraction
    d = machine.total_degree()
    if config.degree is not None and config.degree != d:
        raise ConfigurationError(
            f"machine {machine!r} has degree {d}, config says "
            f"{config.degree}")
    b = config.b if config.b is not None else int(frac * n)
    if config.k_machines is not None:
        k = config.k_machines
    elif config.protocol == "csm":
        k = max_machines(n, Fraction(b, n), d, config.setting)
    else:
        k = 1
    return k, b, d


def _pick_faulty(n: int, b: int, rng: random.Random) -> frozenset[int]:
    if b == 0:
        return frozenset()
    return frozenset(rng.sample(range(n), b))


def _worker_strategy_map(adv: AdversaryModel, fld):
    if adv.strategy != "dishonest_worker":
        return None

    def for_node(node):
        if node not in adv.faulty:
            return None
        rng = adv.stream("worker", node)
        reply = rng.choice(("truthful", "consistent", "random", "silent"))
        delta = rng.randrange(1, fld.order)
        return WorkerStrategy(deltas={0: (delta, rng.randrange(64))},
                              reply=reply, seed=rng.randrange(2 ** 31))

    return for_node


def _auditor_strategy_map(adv: AdversaryModel):
    if adv.strategy != "false_audit":
        return None

    def for_node(node):
        return "false-alert" if node in adv.faulty else "honest"

    return for_node


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run one seeded experiment and return its log and violation list.

    Violations are judged against the four guarantees: every executed
    command was submitted (validity), honest nodes reconstruct identical
    values (consistency), reconstructed values match the fault-free
    trajectory (correctness), and every round delivers an output for every
    machine, after stabilization in the partially synchronous case
    (liveness).
    """
    fld = parse_field(config.field_spec)
    machine = make_machine(config.machine_name(), fld)
    k, b, d = _derive_sizes(config, machine)
    init_rng, cmd_rng, adv_seed_rng, beacon = _streams(config.seed)
    timing = Timing.draw(config.setting, init_rng, config.rounds)
    adversary = AdversaryModel(
        _pick_faulty(config.n_nodes, b, init_rng), config.adversary,
        adv_seed_rng.randrange(2 ** 63))
    log = EventLog()
    board = CounterBoard()
    log.append("header", protocol=config.protocol, n=config.n_nodes, k=k,
               d=d, field=config.field_spec, setting=config.setting,
               channel=config.channel, adversary=config.adversary,
               delegate=config.delegate, rounds=config.rounds,
               seed=config.seed, b=b,
               mu=str(config.fault_fraction),
               machine=config.machine_name(),
               timing={"mode": timing.mode, "delta": timing.delta,
                       "gst": timing.gst},
               faulty=sorted(adversary.faulty))
    if config.protocol == "csm":
        result = _run_csm(config, machine, k, b, timing, adversary, log,
                          board, init_rng, cmd_rng, beacon)
    else:
        result = _run_replicated(config, machine, k, b, timing, adversary,
                                 log, board, init_rng, cmd_rng)
    log.append("summary", rounds_run=result.rounds_run,
               violations=len(result.violations), ok=result.ok)
    return result


def _submit_round_commands(pool, machine, cmd_rng, rnd, log):
    for mk in range(len(pool.queues)):
        client = (rnd + mk) % max(1, len(pool.queues))
        cmd = machine.random_command(cmd_rng)
        pool.submit(mk, client, cmd)
        log.append("submit", round=rnd, machine=mk, client=client,
                   command=list(cmd))


def _deliver_outputs(decoded_outputs, truth_out, adversary, fld, rnd,
                     timing, n_nodes, b, log, violations):
    """Client-side acceptance of per-machine outputs from node reports."""
    delivered = []
    ok = True
    for mk in range(len(truth_out)):
        reports = []
        for i in range(n_nodes):
            if i in adversary.faulty:
                rng = adversary.stream("deliver", rnd, i)
                val = _faulty_result(adversary.strategy,
                                     decoded_outputs[mk], fld, rng, rnd,
                                     timing)
            else:
                val = decoded_outputs[mk]
            reports.append(val)
        try:
            got = client_decide(reports, b)
        except DeliveryFailure as exc:
            delivered.append(None)
            ok = False
            violations.append({"round": rnd, "clause": "liveness",
                               "detail": f"machine {mk}: {exc}"})
            continue
        delivered.append(list(got))
        if tuple(got) != tuple(truth_out[mk]):
            ok = False
            violations.append({"round": rnd, "clause": "correctness",
                               "detail": f"machine {mk}: delivered output "
                                         "differs from fault-free run"})
    log.append("deliver", round=rnd, delivered=delivered, ok=ok)


def _run_csm(config, machine, k, b, timing, adversary, log, board,
             init_rng, cmd_rng, beacon):
    coding = CodingConfig.make(machine, k, config.n_nodes, config.setting,
                               fault_fraction=config.fault_fraction, b=b)
    fld = coding.field
    n = coding.n_nodes
    pool = CommandPool(k)
    noop = (0,) * machine.cmd_dim
    states = tuple(machine.random_state(init_rng) for _ in range(k))
    log.append("init", states=[list(s) for s in states])
    with board.scope("net", "setup"):
        coded_states = encode_states(states, coding)
    dele = None
    if config.delegate:
        dele = Delegation(
            coding, eps=config.eps, beacon=beacon, board=board,
            mode=config.poly_mode,
            worker_strategy_for=_worker_strategy_map(adversary, fld),
            auditor_strategy_for=_auditor_strategy_map(adversary))
    violations: list[dict] = []
    rounds_run = 0
    for rnd in range(config.rounds):
        _submit_round_commands(pool, machine, cmd_rng, rnd, log)
        commands, clients = consensus_oracle(pool, noop)
        log.append("consensus", round=rnd,
                   commands=[list(c) for c in commands],
                   clients=list(clients))
        with uncounted():
            truth = [machine.eval_all(s, x)
                     for s, x in zip(states, commands)]
        sd = machine.state_dim
        truth_next = tuple(tuple(t[:sd]) for t in truth)
        truth_out = tuple(tuple(t[sd:]) for t in truth)

        # encode this round's commands
        if dele is not None:
            enc = delegated_encode(commands, dele, phase="rho")
            if not enc.accepted:
                violations.append({"round": rnd, "clause": "liveness",
                                   "detail": f"command encoding "
                                             f"unverifiable: {enc.reason}"})
                break
            coded_cmds = enc.value
        else:
            with board.scope("net", "rho"):
                coded_cmds = encode_commands(commands, coding)

        # local execution on every node
        with board.scope("net", "rho"):
            g_honest = [execute_local(coded_states[i], coded_cmds[i],
                                      coding) for i in range(n)]
        log.append("execute", round=rnd,
                   g=[list(v) for v in g_honest])

        # what the network delivers
        equivocating = (adversary.strategy == "equivocate"
                        and config.channel == "p2p")
        base_view = list(g_honest)
        if not equivocating:
            for i in sorted(adversary.faulty):
                rng = adversary.stream("result", rnd, i)
                base_view[i] = _faulty_result(adversary.strategy,
                                              g_honest[i], fld, rng, rnd,
                                              timing)
        if timing.mode == "psync":
            base_view = list(_psync_arrivals(
                base_view, adversary.faulty, b,
                adversary.stream("sched", rnd)))
        log.append("delivered", round=rnd,
                   g=[None if v is None else list(v) for v in base_view])

        # reconstruction
        if equivocating:
            result, extra = _decode_per_receiver(
                g_honest, coding, adversary, rnd, timing, b, board)
            violations.extend(extra)
        elif dele is not None:
            out = delegated_decode(base_view, dele)
            result = out.value
        else:
            probe = OpCounter()
            with counting(probe):
                result = decode_round(base_view, coding)
            with board.scope("net", "psi"):  # every node runs the decoder
                charge(adds=probe.adds * n, muls=probe.muls * n,
                       invs=probe.invs * n)
        log.append("decode", **result.record(rnd, commands))

        if not result.success:
            pre_stabilization = (timing.mode == "psync"
                                 and rnd < timing.gst)
            if not pre_stabilization:
                violations.append({"round": rnd, "clause": "liveness",
                                   "detail": result.violation or
                                   "round not decodable"})
            break
        if result.next_states != truth_next or result.outputs != truth_out:
            violations.append({"round": rnd, "clause": "correctness",
                               "detail": "reconstruction differs from "
                                         "fault-free trajectory"})
            break

        _deliver_outputs(result.outputs, truth_out, adversary, fld, rnd,
                         timing, n, b, log, violations)

        # state update
        if dele is not None:
            upd = delegated_update(result.next_states, dele)
            if not upd.accepted:
                violations.append({"round": rnd, "clause": "liveness",
                                   "detail": f"state update unverifiable: "
                                             f"{upd.reason}"})
                break
            coded_states = upd.value
        else:
            with board.scope("net", "chi"):
                coded_states = update_coded_states(result.next_states,
                                                   coding)
        states = truth_next
        rounds_run += 1
    return ExperimentResult(config, log, violations, board, rounds_run,
                            states, k, b)


def _decode_per_receiver(g_honest, coding, adversary, rnd, timing, b,
                         board):
    """Point-to-point equivocation: each honest receiver decodes its own
    view; reconstructions must nonetheless agree."""
    n = coding.n_nodes
    fld = coding.field
    violations = []
    outcomes = []
    for receiver in range(n):
        if receiver in adversary.faulty:
            continue
        view = list(g_honest)
        for i in sorted(adversary.faulty):
            rng = adversary.stream("equiv", rnd, i, receiver)
            view[i] = _corrupt_vector(g_honest[i], fld, rng, True)
        if timing.mode == "psync":
            view = list(_psync_arrivals(view, adversary.faulty, b,
                                        adversary.stream("sched", rnd,
                                                         receiver)))
        with board.scope("net", "psi"):
            outcomes.append(decode_round(view, coding))
    first = outcomes[0]
    for other in outcomes[1:]:
        same = (other.success == first.success
                and other.next_states == first.next_states
                and other.outputs == first.outputs)
        if not same:
            violations.append({"round": rnd, "clause": "consistency",
                               "detail": "honest receivers reconstructed "
                                         "different values"})
            break
    return first, violations


def _baseline_tamper(adversary, cfg, rnd, timing):
    fld = cfg.machine.field

    def tamper(i, report):
        if i not in adversary.faulty:
            return report
        strategy = adversary.strategy
        if strategy in ("none", "false_audit", "dishonest_worker"):
            return report
        if strategy == "withhold":
            return None
        if strategy == "delay":
            if timing.mode == "psync" and rnd >= timing.gst:
                return report
            return None
        rng = adversary.stream("report", rnd, i)
        rand_vals = strategy in ("corrupt_random", "equivocate")
        return {mk: _corrupt_vector(vec, fld, rng, rand_vals)
                for mk, vec in report.items()}

    return tamper


def _run_replicated(config, machine, k, b, timing, adversary, log, board,
                    init_rng, cmd_rng):
    cfg = ReplicationConfig(machine, config.protocol, config.n_nodes, k,
                            config.setting)
    pool = CommandPool(k)
    noop = (0,) * machine.cmd_dim
    states = tuple(machine.random_state(init_rng) for _ in range(k))
    log.append("init", states=[list(s) for s in states])
    violations: list[dict] = []
    rounds_run = 0
    for rnd in range(config.rounds):
        _submit_round_commands(pool, machine, cmd_rng, rnd, log)
        commands, clients = consensus_oracle(pool, noop)
        log.append("consensus", round=rnd,
                   commands=[list(c) for c in commands],
                   clients=list(clients))
        with uncounted():
            truth = [machine.eval_all(s, x)
                     for s, x in zip(states, commands)]
        sd = machine.state_dim
        truth_out = tuple(tuple(t[sd:]) for t in truth)
        tamper = _baseline_tamper(adversary, cfg, rnd, timing)
        with board.scope("net", "rho"):
            round_res = run_replicated_round(states, commands, cfg, tamper)
        log.append("round", **round_res.record(rnd, commands))
        pre_stabilization = (timing.mode == "psync" and rnd < timing.gst)
        for mk, output in enumerate(round_res.outputs):
            if output is None:
                if not pre_stabilization:
                    violations.append(
                        {"round": rnd, "clause": "liveness",
                         "detail": f"machine {mk}: no output delivered"})
            elif tuple(output) != truth_out[mk]:
                violations.append(
                    {"round": rnd, "clause": "correctness",
                     "detail": f"machine {mk}: delivered output differs "
                               "from fault-free run"})
        if violations:
            break
        states = round_res.next_states
        rounds_run += 1
    return ExperimentResult(config, log, violations, board, rounds_run,
                            states, k, b)
