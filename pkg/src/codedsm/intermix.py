"""Interactively verified matrix-vector products, and coding delegated to
an untrusted worker.

One worker broadcasts a claimed product Y = AX. A small random committee of
auditors each recomputes the product; an auditor that disagrees runs a
halving dispute over the offending row's inner product. The resulting
transcript pins the worker to a single scalar equality that any bystander
("commoner") can check with one or two field operations against the public
matrix, so the cheap verdict is available to everyone without trusting the
auditor either.

The same machinery verifies the coded-state pipeline when its encoding and
decoding work is delegated: encoding claims are products with the public
coding matrix, and a decode claim (coefficients plus an agreement set) is
checked as two product claims against public Vandermonde tables.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from .csm import CodingConfig, RoundResult
from .field import (
    ConfigurationError,
    CounterBoard,
    Field,
    PrimeField,
    counting,
    uncounted,
)
from .poly import DensePoly, interpolate, multipoint_eval, np_matvec
from .rs import DecodeFailure, NoisyCodeword, decode


# ---------------------------------------------------------------------------
# committee election
# ---------------------------------------------------------------------------

def committee_size(eps: float, mu) -> int:
    """Smallest J with mu^J <= eps (at least 1 auditor always)."""
    if not 0 < eps < 1:
        raise ConfigurationError(f"eps must be in (0,1), got {eps}")
    mu = float(mu)
    if not 0 <= mu < 0.5:
        raise ConfigurationError(f"mu must be in [0, 1/2), got {mu}")
    if mu == 0:
        return 1
    j = max(1, math.ceil(math.log(eps) / math.log(mu)))
    # guard the ceil against float noise on exact powers
    while j > 1 and mu ** (j - 1) <= eps:
        j -= 1
    while mu ** j > eps:
        j += 1
    return j


@dataclass(frozen=True)
class AuditCommittee:
    members: tuple[int, ...]
    target_size: int
    seed: int | None = None


def elect_committee(n_nodes: int, mu, eps: float, beacon,
                    worker: int) -> AuditCommittee:
    """Draw J distinct auditors, never including the worker node.

    The draw is uniform without replacement from a seeded public beacon,
    which keeps the all-Byzantine-committee probability at mu^J <= eps
    under the mu-fraction fault model. When fewer than J candidates exist
    the whole remaining network serves, which can only strengthen the
    committee.
    """
    j = committee_size(eps, mu)
    if not 0 <= worker < n_nodes:
        raise ConfigurationError("worker index out of range")
    if n_nodes < 2:
        raise ConfigurationError("need at least one non-worker node")
    rng = beacon if isinstance(beacon, random.Random) else random.Random(beacon)
    pool = [i for i in range(n_nodes) if i != worker]
    members = tuple(sorted(rng.sample(pool, min(j, len(pool)))))
    seed = None if isinstance(beacon, random.Random) else int(beacon)
    return AuditCommittee(members, j, seed)


# ---------------------------------------------------------------------------
# products and public power tables
# ---------------------------------------------------------------------------

def matvec(fld: Field, matrix, vector) -> tuple[int, ...]:
    """Counted exact matrix-vector product."""
    if isinstance(fld, PrimeField):
        m = np.asarray(matrix, dtype=np.int64)
        v = np.asarray(vector, dtype=np.int64)
        if m.shape[1] != v.shape[0]:
            raise ValueError("dimension mismatch")
        return tuple(int(x) for x in np_matvec(m, v, fld.p))
    out = []
    for row in matrix:
        if len(row) != len(vector):
            raise ValueError("dimension mismatch")
        acc = 0
        for a, x in zip(row, vector):
            acc = fld.add(acc, fld.mul(a, x))
        out.append(acc)
    return tuple(out)


def _segment_product(fld: Field, row, vector, lo: int, hi: int) -> int:
    acc = 0
    for k in range(lo, hi):
        acc = fld.add(acc, fld.mul(row[k], vector[k]))
    return acc


@lru_cache(maxsize=256)
def power_rows(fld: Field, points: tuple[int, ...],
               ncols: int) -> tuple[tuple[int, ...], ...]:
    """Public table of point powers: row i is (1, p_i, p_i^2, ...)."""
    with uncounted():
        rows = []
        for x in points:
            row = [1]
            for _ in range(ncols - 1):
                row.append(fld.mul(row[-1], x))
            rows.append(tuple(row))
    return tuple(rows)


# ---------------------------------------------------------------------------
# worker
# ---------------------------------------------------------------------------

REPLY_POLICIES = ("truthful", "consistent", "random", "silent")


@dataclass(frozen=True)
class WorkerStrategy:
    """How a worker lies. ``deltas`` maps a row to (offset, anchor column):
    the claimed entry is truth+offset, and under the ``consistent`` reply
    policy the offset rides with whichever queried segment contains the
    anchor, so every sum check passes and only the final scalar differs.
    """

    deltas: dict[int, tuple[int, int]] = dc_field(default_factory=dict)
    reply: str = "truthful"
    seed: int = 0
    fail_claim: bool = False   # refuse to produce any claim at all

    def __post_init__(self):
        if self.reply not in REPLY_POLICIES:
            raise ConfigurationError(
                f"reply policy must be one of {REPLY_POLICIES}")

    @property
    def honest(self) -> bool:
        return not self.deltas and not self.fail_claim


HONEST = WorkerStrategy()


class Worker:
    """Holds the instance, broadcasts a claim, and answers range queries.

    ``claim_fn`` lets the honest computation run through a different route
    than a plain row-by-row product (the delegated coder interpolates and
    evaluates instead); the announced claim must still be a vector the
    audit can dispute against ``matrix`` and ``vector``.
    """

    def __init__(self, fld: Field, matrix, vector,
                 strategy: WorkerStrategy = HONEST, claim_fn=None,
                 board: CounterBoard | None = None, name: str = "worker",
                 phase: str = "audit"):
        self.field = fld
        self.matrix = tuple(tuple(r) for r in matrix)
        self.vector = tuple(vector)
        self.strategy = strategy
        self.claim_fn = claim_fn
        self.board = board
        self.name = name
        self.phase = phase
        self.reply_log: dict[tuple[int, int, int, int],
                             tuple[int, int] | None] = {}
        self._claim: tuple[int, ...] | None = None
        self._rng = random.Random(strategy.seed)

    def _scoped(self):
        if self.board is None:
            return counting(_scratch_counter())
        return self.board.scope(self.name, self.phase)

    def claim(self) -> tuple[int, ...]:
        if self._claim is None:
            with self._scoped():
                honest = (tuple(self.claim_fn()) if self.claim_fn is not None
                          else matvec(self.field, self.matrix, self.vector))
            out = list(honest)
            for row, (delta, _) in self.strategy.deltas.items():
                out[row] = self.field.add(out[row], delta)
            self._claim = tuple(out)
        return self._claim

    def answer(self, row: int, lo: int, mid: int,
               hi: int) -> tuple[int, int] | None:
        key = (row, lo, mid, hi)
        if key in self.reply_log:
            return self.reply_log[key]
        policy = self.strategy.reply
        if policy == "silent" and not self.strategy.honest:
            reply = None
        else:
            with self._scoped():
                left = _segment_product(self.field, self.matrix[row],
                                        self.vector, lo, mid)
                right = _segment_product(self.field, self.matrix[row],
                                         self.vector, mid, hi)
            if policy == "consistent" and row in self.strategy.deltas:
                delta, anchor = self.strategy.deltas[row]
                if lo <= anchor < mid:
                    left = self.field.add(left, delta)
                elif mid <= anchor < hi:
                    right = self.field.add(right, delta)
            elif policy == "random" and not self.strategy.honest:
                left = self._rng.randrange(self.field.order)
                right = self._rng.randrange(self.field.order)
            reply = (left, right)
        self.reply_log[key] = reply
        return reply


_SCRATCH = None


def _scratch_counter():
    # a throwaway sink so unscoped runs still exercise the counted paths
    from .field import OpCounter
    global _SCRATCH
    if _SCRATCH is None:
        _SCRATCH = OpCounter()
    return _SCRATCH


# ---------------------------------------------------------------------------
# audit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LevelRecord:
    lo: int
    mid: int
    hi: int
    parent_claim: int
    claim_left: int | None
    claim_right: int | None
    chosen: int | None  # 0 = left half, 1 = right half, None = stopped here


@dataclass(frozen=True)
class AuditTranscript:
    auditor: int
    claim: tuple[int, ...]
    row: int | None
    levels: tuple[LevelRecord, ...]
    alert: tuple | None  # ("sum", j) | ("scalar", col, claimed) |
    #                      ("nonresponsive", j)

    @property
    def accepted_by_auditor(self) -> bool:
        return self.alert is None and self.row is None

    @property
    def path(self) -> tuple[int, ...]:
        if self.row is None:
            return ()
        return (self.row,) + tuple(l.chosen for l in self.levels
                                   if l.chosen is not None)

    def to_json(self) -> str:
        return json.dumps({
            "auditor": self.auditor,
            "claim": list(self.claim),
            "row": self.row,
            "levels": [[l.lo, l.mid, l.hi, l.parent_claim,
                        l.claim_left, l.claim_right, l.chosen]
                       for l in self.levels],
            "alert": list(self.alert) if self.alert else None,
        })

    @staticmethod
    def from_json(text: str) -> "AuditTranscript":
        d = json.loads(text)
        levels = tuple(LevelRecord(*row) for row in d["levels"])
        alert = tuple(d["alert"]) if d["alert"] else None
        return AuditTranscript(d["auditor"], tuple(d["claim"]), d["row"],
                               levels, alert)


def audit(fld: Field, matrix, vector, worker: Worker, auditor: int = 0,
          expected=None) -> AuditTranscript:
    """Honest auditor: recompute the product and chase any disagreement.

    ``expected`` injects the auditor's own recomputation when it was
    produced by a faster equivalent route; by default the product is
    recomputed here, which is the cost the worst-case bound charges.
    """
    claim = worker.claim()
    if expected is None:
        expected = matvec(fld, matrix, vector)
    expected = tuple(expected)
    if len(claim) != len(expected):
        return AuditTranscript(auditor, claim, 0, (),
                               ("nonresponsive", 0))
    row = None
    for i, (c, t) in enumerate(zip(claim, expected)):
        if c != t:
            row = i
            break
    if row is None:
        return AuditTranscript(auditor, claim, None, (), None)
    lo, hi = 0, len(vector)
    parent = claim[row]
    levels: list[LevelRecord] = []
    while hi - lo > 1:
        mid = lo + (hi - lo) // 2
        reply = worker.answer(row, lo, mid, hi)
        if reply is None:
            levels.append(LevelRecord(lo, mid, hi, parent, None, None, None))
            return AuditTranscript(auditor, claim, row, tuple(levels),
                                   ("nonresponsive", len(levels) - 1))
        c1, c2 = reply
        if fld.add(c1, c2) != parent:
            levels.append(LevelRecord(lo, mid, hi, parent, c1, c2, None))
            return AuditTranscript(auditor, claim, row, tuple(levels),
                                   ("sum", len(levels) - 1))
        t1 = _segment_product(fld, matrix[row], vector, lo, mid)
        t2 = _segment_product(fld, matrix[row], vector, mid, hi)
        side = 0 if c1 != t1 else 1
        levels.append(LevelRecord(lo, mid, hi, parent, c1, c2, side))
        if side == 0:
            parent, hi = c1, mid
        else:
            parent, lo = c2, mid
    return AuditTranscript(auditor, claim, row, tuple(levels),
                           ("scalar", lo, parent))


# ---------------------------------------------------------------------------
# commoner verdict
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    accepted: bool          # does the worker's claim still stand?
    reason: str
    blamed: str | None      # "worker" | "auditor" | None
    comparisons: int = 0


def _chain_consistent(tr: AuditTranscript, reply_log) -> tuple[bool, int]:
    """Do the transcript's claims match the broadcast record? Comparisons
    only; messages are authenticated so a fabricated quote is detectable.
    """
    comps = 0
    parent = tr.claim[tr.row]
    for rec in tr.levels:
        comps += 1
        if rec.parent_claim != parent:
            return False, comps
        if reply_log is not None:
            logged = reply_log.get((tr.row, rec.lo, rec.mid, rec.hi), "?")
            comps += 1
            if logged == "?":
                return False, comps
            if logged is None:
                if rec.claim_left is not None or rec.claim_right is not None:
                    return False, comps
            elif logged != (rec.claim_left, rec.claim_right):
                return False, comps
        if rec.chosen == 0:
            parent = rec.claim_left
        elif rec.chosen == 1:
            parent = rec.claim_right
    return True, comps


def commoner_check(tr: AuditTranscript, matrix, vector, fld: Field,
                   reply_log=None) -> Verdict:
    """Settle one transcript with O(1) field arithmetic.

    Everything except the single flagged equality is comparisons against
    public broadcast data; the flagged equality costs one addition or one
    multiplication.
    """
    if tr.alert is None:
        return Verdict(True, "all-auditors-true", None, comparisons=0)
    if tr.row is None or not (0 <= tr.row < len(matrix)):
        return Verdict(True, "reject-transcript", "auditor", comparisons=1)
    ok, comps = _chain_consistent(tr, reply_log)
    if not ok:
        return Verdict(True, "auditor-alert-dismissed", "auditor",
                       comparisons=comps)
    kind = tr.alert[0]
    if kind == "nonresponsive":
        j = tr.alert[1]
        if (j == len(tr.levels) - 1 and tr.levels
                and tr.levels[j].claim_left is None):
            return Verdict(False, "worker-nonresponsive", "worker",
                           comparisons=comps)
        return Verdict(True, "reject-transcript", "auditor",
                       comparisons=comps)
    if kind == "sum":
        j = tr.alert[1]
        if j != len(tr.levels) - 1 or not tr.levels:
            return Verdict(True, "reject-transcript", "auditor",
                           comparisons=comps)
        rec = tr.levels[j]
        if rec.claim_left is None or rec.claim_right is None:
            return Verdict(True, "reject-transcript", "auditor",
                           comparisons=comps)
        lhs = fld.add(rec.claim_left, rec.claim_right)  # 1 field op
        comps += 1
        if lhs != rec.parent_claim:
            return Verdict(False, f"inconsistency-at-level-{j + 1}",
                           "worker", comparisons=comps)
        return Verdict(True, "auditor-alert-dismissed", "auditor",
                       comparisons=comps)
    if kind == "scalar":
        col, claimed = tr.alert[1], tr.alert[2]
        comps += 1
        if not (0 <= col < len(vector)):
            return Verdict(True, "reject-transcript", "auditor",
                           comparisons=comps)
        truth = fld.mul(matrix[tr.row][col], vector[col])  # 1 field op
        comps += 1
        if truth != claimed:
            return Verdict(False, "final-scalar-mismatch", "worker",
                           comparisons=comps)
        return Verdict(True, "auditor-alert-dismissed", "auditor",
                       comparisons=comps)
    return Verdict(True, "reject-transcript", "auditor", comparisons=comps)


# ---------------------------------------------------------------------------
# one full verification session
# ---------------------------------------------------------------------------

AUDITOR_STRATEGIES = ("honest", "silent", "false-alert")


@dataclass(frozen=True)
class SessionResult:
    accepted: bool
    value: tuple[int, ...] | None
    reason: str
    transcripts: tuple[AuditTranscript, ...]
    verdicts: tuple[Verdict, ...]
    comparisons: int
    dismissed_auditors: tuple[int, ...]


def _false_alert_transcript(fld, matrix, vector, worker, auditor):
    """A lying auditor quotes real broadcast replies but alerts anyway."""
    claim = worker.claim()
    row = 0
    lo, hi = 0, len(vector)
    if hi - lo == 1:
        return AuditTranscript(auditor, claim, row, (),
                               ("scalar", lo, claim[row]))
    mid = lo + (hi - lo) // 2
    reply = worker.answer(row, lo, mid, hi)
    if reply is None:
        levels = (LevelRecord(lo, mid, hi, claim[row], None, None, None),)
        return AuditTranscript(auditor, claim, row, levels,
                               ("nonresponsive", 0))
    c1, c2 = reply
    levels = (LevelRecord(lo, mid, hi, claim[row], c1, c2, None),)
    return AuditTranscript(auditor, claim, row, levels, ("sum", 0))


def run_session(fld: Field, matrix, vector, worker: Worker,
                committee: AuditCommittee, auditor_strategy=None,
                board: CounterBoard | None = None,
                channel: str = "broadcast",
                expected_fn=None, phase: str = "audit") -> SessionResult:
    """Broadcast a claim, audit it, and settle the verdict.

    ``auditor_strategy(node) -> str`` assigns each committee member one of
    the catalog behaviors. ``expected_fn()`` supplies an auditor's own
    recomputation route (counted in that auditor's scope) when the direct
    product is not the route being measured. ``phase`` names the protocol
    stage the verification work is accounted under.
    """
    if channel != "broadcast":
        raise ConfigurationError(
            "interactive verification requires the broadcast channel")
    board = board if board is not None else CounterBoard()
    if worker.board is None:
        worker.board = board
    strategy_of = auditor_strategy or (lambda node: "honest")
    claim = worker.claim()
    transcripts = []
    for node in committee.members:
        s = strategy_of(node)
        if s == "silent":
            continue
        with board.scope(f"auditor{node}", phase):
            if s == "honest":
                expected = expected_fn() if expected_fn is not None else None
                transcripts.append(
                    audit(fld, matrix, vector, worker, node, expected))
            elif s == "false-alert":
                transcripts.append(
                    _false_alert_transcript(fld, matrix, vector, worker,
                                            node))
            else:
                raise ConfigurationError(f"unknown auditor strategy {s!r}")
    verdicts = []
    comparisons = 0
    dismissed = []
    outcome = None
    for tr in transcripts:
        with board.scope("commoner", phase):
            v = commoner_check(tr, matrix, vector, fld, worker.reply_log)
        verdicts.append(v)
        comparisons += v.comparisons
        if v.blamed == "auditor":
            dismissed.append(tr.auditor)
        if not v.accepted and outcome is None:
            outcome = v.reason
    if outcome is not None:
        return SessionResult(False, None, outcome, tuple(transcripts),
                             tuple(verdicts), comparisons, tuple(dismissed))
    return SessionResult(True, claim, "all-auditors-true",
                         tuple(transcripts), tuple(verdicts), comparisons,
                         tuple(dismissed))


def intermix_cost(j_auditors: int, k_cols: int, n_nodes: int,
                  audits_conducted: int | None = None) -> int:
    """Worst-case field-operation budget for one verified product."""
    a = j_auditors if audits_conducted is None else audits_conducted
    c = 2 * n_nodes * k_cols
    lg = math.ceil(math.log2(k_cols)) if k_cols > 1 else 0
    return (a + 1) * c + 8 * a * k_cols + 3 * a * lg + n_nodes - j_auditors - 1


# ---------------------------------------------------------------------------
# delegated coding: one worker does the polynomial work, a committee checks
# ---------------------------------------------------------------------------

@dataclass
class Delegation:
    """Shared context for handing coding work to elected workers.

    ``worker_strategy_for`` and ``auditor_strategy_for`` map a node index
    to its behavior, so the same fault pattern drives both roles; nodes
    without an entry act honestly.
    """

    cfg: CodingConfig
    eps: float = 1e-3
    mu: object = None                    # committee sizing; None = cfg fraction
    beacon: random.Random | int = 0
    board: CounterBoard | None = None
    mode: str = "auto"
    channel: str = "broadcast"
    worker_strategy_for: object = None   # node -> WorkerStrategy | None
    auditor_strategy_for: object = None  # node -> str | None
    max_attempts: int | None = None

    def __post_init__(self):
        if not isinstance(self.beacon, random.Random):
            self.beacon = random.Random(self.beacon)
        if self.board is None:
            self.board = CounterBoard()
        if self.channel != "broadcast":
            raise ConfigurationError(
                "delegated coding requires the broadcast channel")

    @property
    def committee_mu(self):
        return self.cfg.fault_fraction if self.mu is None else self.mu

    def strategy(self, node: int) -> WorkerStrategy:
        if self.worker_strategy_for is None:
            return HONEST
        return self.worker_strategy_for(node) or HONEST

    def auditor_policy(self, node: int) -> str:
        if self.auditor_strategy_for is None:
            return "honest"
        return self.auditor_strategy_for(node) or "honest"


@dataclass(frozen=True)
class DelegationOutcome:
    accepted: bool
    value: object
    reason: str
    worker: int | None
    attempts: int
    comparisons: int
    rejected_workers: tuple[int, ...]


def _attempt_loop(dele: Delegation, task):
    """Elect workers until one's claim survives its committee.

    ``task(worker, strategy, committee) -> (ok, payload, reason, comps)``.
    A rejected worker is banned for the rest of the call, so the loop ends
    after at most N elections.
    """
    n = dele.cfg.n_nodes
    limit = dele.max_attempts if dele.max_attempts is not None else n
    banned: set[int] = set()
    rejected: list[int] = []
    comparisons = 0
    reason = "no eligible worker remained"
    for attempt in range(1, limit + 1):
        candidates = [i for i in range(n) if i not in banned]
        if not candidates:
            break
        w = dele.beacon.choice(candidates)
        committee = elect_committee(n, dele.committee_mu, dele.eps,
                                    dele.beacon, w)
        ok, payload, reason, comps = task(w, dele.strategy(w), committee)
        comparisons += comps
        if ok:
            return DelegationOutcome(True, payload, reason, w, attempt,
                                     comparisons, tuple(rejected))
        banned.add(w)
        rejected.append(w)
    return DelegationOutcome(False, None, reason, None, len(rejected),
                             comparisons, tuple(rejected))


def _coding_rows(cfg: CodingConfig) -> tuple[tuple[int, ...], ...]:
    with uncounted():
        rows = tuple(tuple(r) for r in cfg.domain.coeffs())
    return rows


def delegated_encode(vectors, dele: Delegation,
                     phase: str = "rho") -> DelegationOutcome:
    """Verified re-encoding: N-point claims about K interpolated vectors.

    The honest worker interpolates each coordinate through the K data
    points and evaluates at the N storage points; auditors redo exactly
    that, so the audited cost tracks the claimed computation instead of a
    quadratic fallback product.
    """
    cfg = dele.cfg
    k, n = cfg.k_machines, cfg.n_nodes
    if len(vectors) != k:
        raise ValueError(f"need {k} vectors, got {len(vectors)}")
    dim = len(vectors[0])
    rows = _coding_rows(cfg)
    omegas, alphas = list(cfg.domain.omegas), list(cfg.domain.alphas)

    def eval_route(col):
        poly = interpolate(zip(omegas, col), cfg.field, dele.mode)
        return tuple(multipoint_eval(poly, alphas, dele.mode))

    def task(w, strategy, committee):
        cols = [tuple(v[j] for v in vectors) for j in range(dim)]
        if strategy.fail_claim:
            return False, None, "worker-nonresponsive", 0
        per_node = [[0] * dim for _ in range(n)]
        comparisons = 0
        for j, col in enumerate(cols):
            worker = Worker(cfg.field, rows, col, strategy,
                            claim_fn=lambda c=col: eval_route(c),
                            board=dele.board, name=f"node{w}", phase=phase)
            res = run_session(cfg.field, rows, col, worker, committee,
                              auditor_strategy=dele.auditor_policy,
                              board=dele.board, channel=dele.channel,
                              expected_fn=lambda c=col: eval_route(c),
                              phase=phase)
            comparisons += res.comparisons
            if not res.accepted:
                return False, None, res.reason, comparisons
            for i, y in enumerate(res.value):
                per_node[i][j] = y
        coded = tuple(tuple(r) for r in per_node)
        return True, coded, "all-auditors-true", comparisons

    return _attempt_loop(dele, task)


def delegated_update(decoded_states, dele: Delegation) -> DelegationOutcome:
    return delegated_encode(decoded_states, dele, phase="chi")


# -- decode claims ----------------------------------------------------------

@dataclass(frozen=True)
class DecodeClaim:
    """What a decoding worker announces: an agreement set, the recovered
    coefficient vectors (one per flat coordinate, padded to the composite
    degree bound plus one), and the decoded per-machine evaluations."""

    tau: tuple[int, ...]
    coeffs: tuple[tuple[int, ...], ...]
    evals: tuple[tuple[int, ...], ...]   # K rows, flat_dim columns

    def to_json(self) -> str:
        return json.dumps({"tau": list(self.tau),
                           "coeffs": [list(c) for c in self.coeffs],
                           "evals": [list(e) for e in self.evals]})

    @staticmethod
    def from_json(text: str) -> "DecodeClaim":
        d = json.loads(text)
        return DecodeClaim(tuple(d["tau"]),
                           tuple(tuple(c) for c in d["coeffs"]),
                           tuple(tuple(e) for e in d["evals"]))


def _decode_budget(g_values, cfg: CodingConfig):
    """Public per-round facts: present slots, usable budget, or a violation."""
    n = cfg.n_nodes
    g_values = tuple(None if g is None else tuple(g) for g in g_values)
    missing = sum(1 for g in g_values if g is None)
    budget = cfg.b - missing if cfg.setting == "sync" else cfg.b
    if budget < 0:
        return g_values, None, None, "more silent nodes than fault budget"
    if 2 * budget > (n - missing) - cfg.degree_bound - 1:
        return g_values, None, None, "too few results to decode safely"
    for g in g_values:
        if g is not None and len(g) != cfg.flat_dim:
            return g_values, None, None, "malformed result vector"
    return g_values, n - missing, budget, None


def honest_decode_claim(g_values, cfg: CodingConfig, budget: int,
                        mode: str = "auto") -> DecodeClaim | None:
    """Decode every coordinate; None when any coordinate is undecodable."""
    dim = cfg.flat_dim
    polys = []
    tau = None
    for j in range(dim):
        values = tuple(None if g is None else g[j] for g in g_values)
        cw = NoisyCodeword(cfg.field, cfg.domain.alphas, values,
                           cfg.degree_bound, budget)
        try:
            res = decode(cw, mode)
        except DecodeFailure:
            return None
        polys.append(res.poly)
        tau = res.agreement if tau is None else tau & res.agreement
    width = cfg.degree_bound + 1
    coeffs = tuple(tuple(p.coeffs) + (0,) * (width - len(p.coeffs))
                   for p in polys)
    per = [multipoint_eval(p, list(cfg.domain.omegas), mode) for p in polys]
    evals = tuple(tuple(per[j][mk] for j in range(dim))
                  for mk in range(cfg.k_machines))
    return DecodeClaim(tuple(sorted(tau)), coeffs, evals)


def verify_decode_claim(g_values, claim: DecodeClaim, cfg: CodingConfig,
                        defender: int, committee_members, dele: Delegation,
                        reply: str = "truthful",
                        phase: str = "psi") -> tuple[bool, str, int]:
    """Check an announced decode against public data via audited products.

    Two claims per coordinate: the coefficients must reproduce the agreed
    broadcast values on tau (a Vandermonde product pinned to public data),
    and the announced machine evaluations must be the same coefficients
    evaluated at the data points. Any two claims passing the agreement
    floor share enough points to force identical polynomials, so a
    fabricated claim always trips one of the products.
    """
    cfg_f = cfg.field
    g_values, n_present, budget, violation = _decode_budget(g_values, cfg)
    if violation is not None:
        return False, violation, 0
    comparisons = 1
    present = frozenset(i for i, g in enumerate(g_values) if g is not None)
    if not set(claim.tau) <= present or len(set(claim.tau)) != len(claim.tau):
        return False, "agreement set not among present results", comparisons
    comparisons += 1
    if len(claim.tau) < n_present - budget:
        return False, "agreement set below decoding floor", comparisons
    width = cfg.degree_bound + 1
    dim = cfg.flat_dim
    comparisons += 1
    if (len(claim.coeffs) != dim
            or any(len(c) != width for c in claim.coeffs)
            or len(claim.evals) != cfg.k_machines
            or any(len(e) != dim for e in claim.evals)):
        return False, "malformed decode claim", comparisons
    alphas_tau = tuple(cfg.domain.alphas[i] for i in claim.tau)
    v_rows = power_rows(cfg_f, alphas_tau, width)
    o_rows = power_rows(cfg_f, tuple(cfg.domain.omegas), width)
    strategy = WorkerStrategy(reply=reply) if reply != "truthful" else HONEST
    for j in range(dim):
        b = claim.coeffs[j]
        agreed = tuple(g_values[i][j] for i in claim.tau)
        announced = tuple(claim.evals[mk][j] for mk in range(cfg.k_machines))
        poly = DensePoly(cfg_f, b)
        for rows, target, points in ((v_rows, agreed, list(alphas_tau)),
                                     (o_rows, announced,
                                      list(cfg.domain.omegas))):
            worker = Worker(cfg_f, rows, b, strategy,
                            claim_fn=lambda t=target: t,
                            board=dele.board, name=f"node{defender}",
                            phase=phase)
            res = run_session(
                cfg_f, rows, b, worker, committee_members,
                auditor_strategy=dele.auditor_policy, board=dele.board,
                channel=dele.channel,
                expected_fn=lambda p=poly, pts=points: tuple(
                    multipoint_eval(p, pts, dele.mode)),
                phase=phase)
            comparisons += res.comparisons
            if not res.accepted:
                return False, res.reason, comparisons
    return True, "all-auditors-true", comparisons


def _tampered_claim(claim: DecodeClaim, strategy: WorkerStrategy,
                    fld: Field) -> DecodeClaim:
    coeffs = [list(c) for c in claim.coeffs]
    for coord, (delta, anchor) in strategy.deltas.items():
        row = coeffs[coord % len(coeffs)]
        row[anchor % len(row)] = fld.add(row[anchor % len(row)], delta)
    return DecodeClaim(claim.tau, tuple(tuple(c) for c in coeffs),
                       claim.evals)


def _claim_to_round(claim: DecodeClaim, g_values,
                    cfg: CodingConfig) -> RoundResult:
    sd = cfg.machine.state_dim
    next_states = tuple(e[:sd] for e in claim.evals)
    outputs = tuple(e[sd:] for e in claim.evals)
    return RoundResult(True, next_states, outputs, tuple(g_values),
                       frozenset(claim.tau))


def delegated_decode(g_values, dele: Delegation) -> DelegationOutcome:
    """Round decoding done once by an elected worker, checked by audits.

    The outcome's value is the same round record direct decoding yields.
    A worker that announces a bogus claim, goes silent, or cries failure
    on a decodable round is unseated and a fresh worker elected; a round
    that genuinely cannot be decoded is reported as a violation once the
    committee concurs.
    """
    cfg = dele.cfg
    g_values, n_present, budget, violation = _decode_budget(g_values, cfg)
    if violation is not None:
        rr = RoundResult(False, None, None, g_values, None,
                         violation=violation)
        return DelegationOutcome(True, rr, violation, None, 0, 0, ())

    def task(w, strategy, committee):
        comparisons = 0
        if strategy.fail_claim and strategy.reply == "silent":
            return False, None, "worker-nonresponsive", comparisons
        with dele.board.scope(f"node{w}", "psi"):
            honest = honest_decode_claim(g_values, cfg, budget, dele.mode)
        announced = None if strategy.fail_claim else honest
        if announced is not None and strategy.deltas:
            announced = _tampered_claim(announced, strategy, cfg.field)
        if announced is None:
            # Claimed failure: the committee retries the decode itself and
            # any member that succeeds must defend its counterclaim.
            for node in committee.members:
                if dele.auditor_policy(node) != "honest":
                    continue
                with dele.board.scope(f"node{node}", "psi"):
                    counter = honest_decode_claim(g_values, cfg, budget,
                                                  dele.mode)
                if counter is None:
                    continue
                others = AuditCommittee(
                    tuple(m for m in committee.members if m != node),
                    committee.target_size, committee.seed)
                ok, _, comps = verify_decode_claim(
                    g_values, counter, cfg, node, others, dele)
                comparisons += comps
                if ok:
                    return False, None, "false failure claim", comparisons
            rr = RoundResult(False, None, None, g_values, None,
                             violation="decode failure (fault budget "
                                       "exceeded)")
            return True, rr, "decode-failure-concurred", comparisons
        ok, reason, comps = verify_decode_claim(
            g_values, announced, cfg, w, committee, dele,
            reply=strategy.reply)
        comparisons += comps
        if not ok:
            return False, None, reason, comparisons
        return True, _claim_to_round(announced, g_values, cfg), reason, \
            comparisons

    out = _attempt_loop(dele, task)
    if not out.accepted:
        rr = RoundResult(False, None, None, g_values, None,
                         violation=f"delegation failed: {out.reason}")
        return DelegationOutcome(False, rr, out.reason, None, out.attempts,
                                 out.comparisons, out.rejected_workers)
    return out
