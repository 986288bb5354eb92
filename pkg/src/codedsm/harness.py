"""Experiment runner: security, storage, and throughput metrics.

Three numbers summarize a protocol on a given deployment. Security is the
largest Byzantine head count the run tolerates, storage efficiency is how
many machine-states' worth of useful data one node-state's worth of
storage carries, and throughput is machines advanced per field operation
per node. The CLI drives seeded simulations and writes one CSV row per
run; a sweep mode searches for the actual breaking point instead of
quoting the design value.
"""

from __future__ import annotations

import argparse
import itertools
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .baseline import ReplicationConfig, run_replicated_round
from .csm import (
    CodingConfig,
    _as_fraction,
    decode_round,
    encode_commands,
    encode_states,
    execute_local,
    max_machines,
)
from .field import ConfigurationError, parse_field, uncounted
from .machine import make_machine
from .simnet import ExperimentConfig, ExperimentResult, run_experiment

CSV_SCHEMA = "codedsm.metrics.v1"
CSV_COLUMNS = ("protocol", "N", "K", "d", "fault_fraction", "setting",
               "beta", "gamma", "lambda", "ops_rho", "ops_psi", "ops_chi",
               "seed", "violations")


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MetricsRecord:
    protocol: str
    n_nodes: int
    k_machines: int
    degree: int
    fault_fraction: Fraction
    setting: str
    beta: int
    gamma: Fraction
    lam: float
    ops_rho: int
    ops_psi: int
    ops_chi: int
    seed: int
    violations: int
    valid: bool

    def row(self) -> tuple[str, ...]:
        return (self.protocol, str(self.n_nodes), str(self.k_machines),
                str(self.degree), str(self.fault_fraction), self.setting,
                str(self.beta), str(self.gamma), f"{self.lam:.10g}",
                str(self.ops_rho), str(self.ops_psi), str(self.ops_chi),
                str(self.seed), str(self.violations))


def design_tolerance(protocol: str, n_nodes: int, k_machines: int,
                     setting: str = "sync", b: int | None = None) -> int:
    """Fault count each protocol is built to mask on this deployment."""
    if protocol == "csm":
        if b is None:
            raise ValueError("coded deployments carry an explicit budget")
        return b
    group = n_nodes if protocol == "full" else n_nodes // k_machines
    return (group - 1) // (2 if setting == "sync" else 3)


def compute_metrics(result: ExperimentResult,
                    beta: int | None = None) -> MetricsRecord:
    """Reduce one finished run to its metric row.

    A run with flagged violations still yields a row (so sweeps can see
    what broke) but is marked invalid and its throughput is reported as 0.
    """
    cfg = result.config
    machine = make_machine(cfg.machine_name(), parse_field(cfg.field_spec))
    k, n = result.k_machines, cfg.n_nodes
    sd = machine.state_dim
    stored = sd * (k if cfg.protocol == "full" else 1)
    gamma = Fraction(k * sd, stored)
    if gamma > n:
        raise ConfigurationError(
            f"storage efficiency {gamma} exceeds node count {n}")
    ops = {ph: result.board.get(phase=ph).total()
           for ph in ("rho", "psi", "chi")}
    total = sum(ops.values())
    t = result.rounds_run
    lam = (k * n * t) / total if result.ok and t and total else 0.0
    if beta is None:
        beta = design_tolerance(cfg.protocol, n, k, cfg.setting, result.b)
    return MetricsRecord(cfg.protocol, n, k, machine.total_degree(),
                         cfg.fault_fraction, cfg.setting, beta, gamma, lam,
                         ops["rho"], ops["psi"], ops["chi"], cfg.seed,
                         len(result.violations), result.ok)


# ---------------------------------------------------------------------------
# security sweep
# ---------------------------------------------------------------------------

SWEEP_STRATEGIES = ("withhold", "corrupt", "collude")


@dataclass(frozen=True)
class SweepReport:
    beta: int
    witness: dict | None   # violating run at beta + 1, if one was found


def _sweep_rng(seed: int, *salt: int) -> random.Random:
    mix = seed
    for s in salt:
        mix = (mix * 1000003 + s + 1) & (2 ** 63 - 1)
    return random.Random(mix)


def _tampered(strategy: str, value, fld, rng, shared_delta):
    if strategy == "withhold":
        return None
    if strategy == "collude":
        return tuple(fld.add(v, d) for v, d in zip(value, shared_delta))
    return tuple(fld.add(v, rng.randrange(1, fld.order)) for v in value)


def _csm_violation(coding, states, commands, faulty, strategy, rng):
    fld = coding.field
    truth = [coding.machine.eval_all(s, x)
             for s, x in zip(states, commands)]
    sd = coding.machine.state_dim
    g = [execute_local(s, x, coding)
         for s, x in zip(encode_states(states, coding),
                         encode_commands(commands, coding))]
    shared = tuple(rng.randrange(1, fld.order) for _ in g[0])
    for i in faulty:
        g[i] = _tampered(strategy, g[i], fld, rng, shared)
    result = decode_round(g, coding)
    if not result.success:
        return "liveness"
    wrong = (result.next_states != tuple(tuple(t[:sd]) for t in truth)
             or result.outputs != tuple(tuple(t[sd:]) for t in truth))
    return "correctness" if wrong else None


def _replication_violation(cfg, states, commands, faulty, strategy, rng):
    fld = cfg.machine.field
    truth = [cfg.machine.eval_all(s, x)
             for s, x in zip(states, commands)]
    sd = cfg.machine.state_dim
    shared = {k: tuple(rng.randrange(1, fld.order) for _ in t)
              for k, t in enumerate(truth)}

    def tamper(i, report):
        if i not in faulty:
            return report
        if strategy == "withhold":
            return None
        return {k: _tampered(strategy, v, fld, rng, shared[k])
                for k, v in report.items()}

    result = run_replicated_round(states, commands, cfg, tamper)
    for k, out in enumerate(result.outputs):
        if out is None:
            return "liveness"
        if tuple(out) != tuple(truth[k][sd:]):
            return "correctness"
    return None


def sweep_security(protocol: str, n_nodes: int, k_machines: int = 1,
                   degree: int = 1, machine: str | None = None,
                   setting: str = "sync", seed: int = 0,
                   rounds: int = 2) -> SweepReport:
    """Find the largest fault count no cataloged attack breaks.

    Exhausts every corruption placement against each strategy in the
    catalog, growing the Byzantine set until a violation appears. The
    result is a lower-bound certificate: beta faults never broke the run,
    and the witness shows beta + 1 faults doing so.
    """
    if n_nodes > 20:
        raise ConfigurationError(
            "exhaustive placement search is limited to 20 nodes")
    fld = parse_field("prime:2147483647")
    name = machine or ("bank" if degree == 1 else "product")
    mach = make_machine(name, fld)
    if mach.total_degree() != degree:
        raise ConfigurationError(
            f"machine {name!r} has degree {mach.total_degree()}")

    if protocol == "csm":
        d_bound = degree * (k_machines - 1)
        slack = n_nodes - d_bound - 1
        b_design = slack // (2 if setting == "sync" else 3)
        if b_design < 0:
            raise ConfigurationError("no fault budget at this K and N")
        deployment = CodingConfig.make(mach, k_machines, n_nodes, setting,
                                       b=b_design)

        def violates(states, commands, faulty, strategy, rng):
            return _csm_violation(deployment, states, commands, faulty,
                                  strategy, rng)
    else:
        deployment = ReplicationConfig(mach, protocol, n_nodes, k_machines,
                                       setting)

        def violates(states, commands, faulty, strategy, rng):
            return _replication_violation(deployment, states, commands,
                                          faulty, strategy, rng)

    sample_rng = _sweep_rng(seed, 0)
    trials = [(tuple(mach.random_state(sample_rng)
                     for _ in range(k_machines)),
               tuple(mach.random_command(sample_rng)
                     for _ in range(k_machines)))
              for _ in range(rounds)]

    with uncounted():
        for b in range(n_nodes + 1):
            for placement in itertools.combinations(range(n_nodes), b):
                place_key = sum((i + 1) * 31 ** p
                                for p, i in enumerate(placement))
                for strategy in SWEEP_STRATEGIES:
                    for trial, (states, commands) in enumerate(trials):
                        rng = _sweep_rng(seed, b, place_key,
                                         SWEEP_STRATEGIES.index(strategy),
                                         trial)
                        clause = violates(states, commands, set(placement),
                                          strategy, rng)
                        if clause is not None:
                            witness = {"b": b, "placement": list(placement),
                                       "strategy": strategy,
                                       "clause": clause, "round": trial}
                            return SweepReport(b - 1, witness)
    return SweepReport(n_nodes, None)


# ---------------------------------------------------------------------------
# command line
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="codedsm",
        description="Run coded and replicated state machine experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="simulate and write metrics")
    which = run.add_mutually_exclusive_group()
    which.add_argument("--protocol", choices=("csm", "full", "partial"))
    which.add_argument("--compare", metavar="P1,P2,...",
                       help="comma-separated protocols, one CSV row each")
    run.add_argument("--n", type=int, help="number of nodes")
    run.add_argument("--k", type=int, help="number of machines")
    run.add_argument("--d", type=int, help="transition degree")
    run.add_argument("--machine", help="bundled machine name")
    run.add_argument("--field", default="prime:2147483647")
    run.add_argument("--mu", default=None,
                     help="fault fraction, e.g. 0.1 or 1/4")
    run.add_argument("--b", type=int, help="explicit fault budget")
    run.add_argument("--setting", choices=("sync", "psync"),
                     default="sync")
    run.add_argument("--channel", choices=("broadcast", "p2p"),
                     default="broadcast")
    run.add_argument("--adversary", default="none")
    run.add_argument("--rounds", type=int, default=10)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--delegate", action="store_true",
                     help="verified worker coding instead of local coding")
    run.add_argument("--eps", type=float, default=1e-3)
    run.add_argument("--poly-mode", choices=("auto", "naive", "fast"),
                     default="auto")
    run.add_argument("--sweep-beta", action="store_true",
                     help="search for the breaking fault count (N <= 20)")
    run.add_argument("--config", type=Path,
                     help="key=value experiment file; flags override")
    run.add_argument("--out", type=Path, required=True,
                     help="output directory for CSV and logs")
    return parser


_CONFIG_FIELDS = ("protocol", "n_nodes", "k_machines", "degree", "machine",
                  "field_spec", "fault_fraction", "b", "setting", "channel",
                  "adversary", "rounds", "seed", "delegate", "eps",
                  "poly_mode")

# flags whose absence is indistinguishable from their default; a config
# file's value wins unless the flag differs from that default
_DEFAULTED_FLAGS = {"field": ("field_spec", "prime:2147483647"),
                    "setting": ("setting", "sync"),
                    "channel": ("channel", "broadcast"),
                    "adversary": ("adversary", "none"),
                    "rounds": ("rounds", 10), "seed": ("seed", 0),
                    "delegate": ("delegate", False), "eps": ("eps", 1e-3),
                    "poly_mode": ("poly_mode", "auto")}


def _config_from_args(args, protocol: str) -> ExperimentConfig:
    if args.config is not None:
        base = ExperimentConfig.from_file(args.config)
        merged = {f: getattr(base, f) for f in _CONFIG_FIELDS}
    else:
        if args.n is None:
            raise ConfigurationError("--n is required without --config")
        merged = {f: None for f in _CONFIG_FIELDS}
        merged["n_nodes"] = args.n
    merged["protocol"] = protocol
    for flag, (fieldname, default) in _DEFAULTED_FLAGS.items():
        val = getattr(args, flag)
        if args.config is None or val != default:
            merged[fieldname] = val
    if merged.get("fault_fraction") is None:
        merged["fault_fraction"] = 0
    if args.n is not None:
        merged["n_nodes"] = args.n
    if args.k is not None:
        merged["k_machines"] = args.k
    if args.d is not None:
        merged["degree"] = args.d
    if args.machine is not None:
        merged["machine"] = args.machine
    if args.mu is not None:
        merged["fault_fraction"] = _as_fraction(Fraction(args.mu))
    if args.b is not None:
        merged["b"] = args.b
    return ExperimentConfig(**merged)


def _compare_k(cfg: ExperimentConfig, requested_k: int | None,
               machine_degree: int) -> int:
    """K per protocol in a comparison row: replication keeps the requested
    K, the coded run takes everything its capacity formula allows. With no
    request, replication matches the coded K so rows share a workload."""
    capacity = max_machines(cfg.n_nodes, cfg.fault_fraction,
                            machine_degree, cfg.setting)
    if cfg.protocol == "csm" or requested_k is None:
        return capacity
    return requested_k


def write_csv(path: Path, records: list[MetricsRecord]) -> None:
    lines = [f"# schema: {CSV_SCHEMA}", ",".join(CSV_COLUMNS)]
    lines += [",".join(r.row()) for r in records]
    path.write_text("\n".join(lines) + "\n")


def read_csv(path: Path) -> list[dict]:
    lines = [ln for ln in path.read_text().splitlines()
             if ln and not ln.startswith("#")]
    header = lines[0].split(",")
    return [dict(zip(header, ln.split(","))) for ln in lines[1:]]


def run_cli(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.protocol:
        protocols = [args.protocol]
    elif args.compare:
        protocols = [p.strip() for p in args.compare.split(",")]
    elif args.config is not None:
        try:
            protocols = [ExperimentConfig.from_file(args.config).protocol]
        except ConfigurationError as exc:
            parser.error(str(exc))
    else:
        parser.error("one of the arguments --protocol --compare is required")
    for p in protocols:
        if p not in ("csm", "full", "partial"):
            parser.error(f"unknown protocol {p!r}")

    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    records: list[MetricsRecord] = []
    failures = 0
    for protocol in protocols:
        try:
            cfg = _config_from_args(args, protocol)
            if args.compare is not None:
                machine = make_machine(cfg.machine_name(),
                                       parse_field(cfg.field_spec))
                k = _compare_k(cfg, args.k, machine.total_degree())
                fields = {f: getattr(cfg, f) for f in _CONFIG_FIELDS}
                fields["k_machines"] = k
                cfg = ExperimentConfig(**fields)
            result = run_experiment(cfg)
            beta = None
            if args.sweep_beta:
                report = sweep_security(
                    protocol, cfg.n_nodes, result.k_machines,
                    result.log.of("header")[0]["d"],
                    machine=cfg.machine_name(), setting=cfg.setting,
                    seed=cfg.seed)
                beta = report.beta
            rec = compute_metrics(result, beta=beta)
        except ConfigurationError as exc:
            parser.error(str(exc))
        records.append(rec)
        log_name = f"{protocol}_n{cfg.n_nodes}_seed{cfg.seed}.jsonl"
        result.log.write(out / log_name)
        status = "ok" if rec.valid else \
            f"VIOLATED ({rec.violations} flagged)"
        print(f"{protocol}: N={rec.n_nodes} K={rec.k_machines} "
              f"beta={rec.beta} gamma={rec.gamma} lambda={rec.lam:.6g} "
              f"[{status}] -> {out / log_name}")
        if not rec.valid:
            failures += 1
    write_csv(out / "metrics.csv", records)
    print(f"wrote {out / 'metrics.csv'} ({len(records)} rows)")
    return 3 if failures else 0


def main(argv=None) -> None:
    sys.exit(run_cli(argv))


if __name__ == "__main__":
    main()
