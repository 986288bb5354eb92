"""Recovery of a bounded-degree polynomial from noisy evaluations.

Given values of an unknown polynomial of degree <= D at distinct points,
up to b of which are wrong and some of which may be missing, `decode`
returns the unique consistent polynomial together with its agreement set.
The core is the classic linear-algebra decoder: find Q and a monic error
locator E with Q(x_i) = g_i * E(x_i) for all received points, then read
off Q / E.  Unique recovery requires 2b <= n - D - 1 for n received
values; parameters violating that bound are rejected up front.

The agreement set tau lists the received positions where the recovered
polynomial matches the received value.  Any candidate reaching
|tau| >= (n + D + 1) / 2 is unique, which is what makes the set usable
as a third-party-checkable certificate of a claimed decoding.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .field import Field, charge
from .poly import DensePoly, interpolate


class DecodeFailure(Exception):
    """No polynomial of the required degree explains enough of the values."""


@dataclass(frozen=True)
class NoisyCodeword:
    """Received evaluations, possibly corrupted and possibly incomplete.

    ``values[i]`` is the value reported for ``points[i]``, or None when
    nothing was received for that position.  ``degree_bound`` is the
    maximum degree D of the encoded polynomial and ``budget`` the maximum
    number of wrong (not missing) values the decoder must tolerate.
    """

    field: Field
    points: tuple[int, ...]
    values: tuple[int | None, ...]
    degree_bound: int
    budget: int

    def __post_init__(self):
        if len(self.points) != len(self.values):
            raise ValueError("points and values must have equal length")
        if len(set(self.points)) != len(self.points):
            raise ValueError("evaluation points must be distinct")
        for x in self.points:
            self.field.check(x)
        for v in self.values:
            if v is not None:
                self.field.check(v)
        if self.degree_bound < 0:
            raise ValueError("degree bound must be nonnegative")
        if self.budget < 0:
            raise ValueError("error budget must be nonnegative")

    def present(self) -> list[int]:
        return [i for i, v in enumerate(self.values) if v is not None]


@dataclass(frozen=True)
class DecodeResult:
    poly: DensePoly
    agreement: frozenset[int]


@lru_cache(maxsize=512)
def _vander(p: int, pts: tuple[int, ...], ncols: int) -> np.ndarray:
    V = np.empty((len(pts), ncols), dtype=np.int64)
    V[:, 0] = 1
    col = np.array(pts, dtype=np.int64)
    for j in range(1, ncols):
        V[:, j] = V[:, j - 1] * col % p
    return V


def _eval_many(coeffs: list[int], pts: list[int], field: Field) -> list[int]:
    """Evaluate at many points; vectorized over prime fields."""
    if not coeffs:
        return [0] * len(pts)
    if field.kind == "prime":
        p = field.order
        V = _vander(p, tuple(pts), len(coeffs))
        c = np.array(coeffs, dtype=np.int64)
        out = (V * c[None, :] % p).sum(axis=1) % p
        charge(adds=len(pts) * (len(coeffs) - 1), muls=len(pts) * len(coeffs))
        return [int(v) for v in out]
    out = []
    for x in pts:
        acc = 0
        for c in reversed(coeffs):
            acc = field.add(field.mul(acc, x), c)
        out.append(acc)
    return out


def agreement_set(poly: DensePoly, cw: NoisyCodeword) -> frozenset[int]:
    """Positions of the codeword where poly matches the received value."""
    idx = cw.present()
    vals = _eval_many(list(poly.coeffs), [cw.points[i] for i in idx], cw.field)
    return frozenset(i for i, v in zip(idx, vals) if cw.values[i] == v)


def agreement_threshold(n: int, degree_bound: int) -> int:
    """Smallest agreement size certifying a unique degree-bounded polynomial.

    Two distinct polynomials of degree <= D can share at most D points, so
    a candidate matching at least (n + D + 1) / 2 of n received values is
    the only one that can do so.
    """
    return (n + degree_bound + 2) // 2  # ceil((n + D + 1) / 2)


# ---------------------------------------------------------------------------
# linear solving
# ---------------------------------------------------------------------------

def _solve_np(M: np.ndarray, rhs: np.ndarray, p: int):
    """Reduced-row-echelon solve of M x = rhs over F_p; None if inconsistent.

    Free variables are set to zero.  The pivot rule (first row with a
    nonzero entry) matches the generic-field path, so both give the same
    solution on the same input.
    """
    n, u = M.shape
    A = np.concatenate([M % p, rhs[:, None] % p], axis=1)
    row = 0
    pivots = []
    muls = adds = invs = 0
    for col in range(u):
        if row == n:
            break
        sub = A[row:, col]
        nz = np.nonzero(sub)[0]
        if nz.size == 0:
            continue
        sel = row + int(nz[0])
        if sel != row:
            A[[row, sel]] = A[[sel, row]]
        a = int(A[row, col])
        width = u + 1 - col
        if a != 1:
            inv = pow(a, -1, p)
            A[row, col:] = A[row, col:] * inv % p
            invs += 1
            muls += width
        others = np.nonzero(A[:, col])[0]
        others = others[others != row]
        if others.size:
            fac = A[others, col][:, None]
            A[others, col:] = (A[others, col:] - fac * A[row, col:][None, :]) % p
            muls += int(others.size) * width
            adds += int(others.size) * width
        pivots.append((row, col))
        row += 1
    charge(adds=adds, muls=muls, invs=invs)
    if row < n and np.any(A[row:, u]):
        return None
    x = np.zeros(u, dtype=np.int64)
    for r, c in pivots:
        x[c] = A[r, u]
    return x


def _solve_generic(M: list[list[int]], rhs: list[int], f: Field):
    n = len(M)
    u = len(M[0]) if n else 0
    A = [list(M[i]) + [rhs[i]] for i in range(n)]
    row = 0
    pivots = []
    for col in range(u):
        if row == n:
            break
        sel = next((r for r in range(row, n) if A[r][col] != 0), None)
        if sel is None:
            continue
        if sel != row:
            A[row], A[sel] = A[sel], A[row]
        a = A[row][col]
        if a != 1:
            inv = f.inv(a)
            A[row] = [f.mul(v, inv) for v in A[row]]
        for r in range(n):
            if r != row and A[r][col] != 0:
                fac = A[r][col]
                A[r] = [f.sub(v, f.mul(fac, w)) for v, w in zip(A[r], A[row])]
        pivots.append((row, col))
        row += 1
    for r in range(row, n):
        if A[r][u] != 0:
            return None
    x = [0] * u
    for r, c in pivots:
        x[c] = A[r][u]
    return x


def _bw_candidate(field, pts, vals, D, e):
    """Solve the decoder system at error budget e; None on inconsistency."""
    nq = D + e + 1
    if field.kind == "prime":
        p = field.order
        V = _vander(p, tuple(pts), max(nq, e + 1))
        g = np.array(vals, dtype=np.int64)
        M = np.concatenate([V[:, :nq], -(g[:, None]) * V[:, :e] % p], axis=1)
        rhs = g * V[:, e] % p
        charge(muls=len(pts) * (e + 1))
        x = _solve_np(M, rhs, p)
        if x is None:
            return None
        q = [int(c) for c in x[:nq]]
        eloc = [int(c) for c in x[nq:]] + [1]
    else:
        M = []
        rhs = []
        for x_i, g_i in zip(pts, vals):
            powers = [1]
            for _ in range(max(nq, e + 1) - 1):
                powers.append(field.mul(powers[-1], x_i))
            row = powers[:nq] + [field.neg(field.mul(g_i, powers[j]))
                                 for j in range(e)]
            M.append(row)
            rhs.append(field.mul(g_i, powers[e]))
        x = _solve_generic(M, rhs, field)
        if x is None:
            return None
        q = x[:nq]
        eloc = x[nq:] + [1]
    qp = DensePoly(field, q)
    ep = DensePoly(field, eloc)
    quo, rem = qp.divmod(ep)
    if not rem.is_zero():
        return None
    if quo.degree > D:
        return None
    return quo


def decode(cw: NoisyCodeword, mode: str = "auto") -> DecodeResult:
    """Recover the encoded polynomial from a noisy codeword.

    Raises ValueError when the (n, D, b) parameters cannot guarantee unique
    decoding, and DecodeFailure when no degree-bounded polynomial agrees
    with at least n - b of the received values. ``mode`` picks the
    polynomial arithmetic route for the interpolation step.
    """
    idx = cw.present()
    n = len(idx)
    D, b = cw.degree_bound, cw.budget
    field = cw.field
    if 2 * b > n - D - 1:
        raise ValueError(
            f"cannot decode degree {D} from {n} values with {b} errors: "
            f"2*{b} > {n}-{D}-1")
    pts = [cw.points[i] for i in idx]
    vals = [cw.values[i] for i in idx]
    need = n - b

    # optimistic path: interpolate the first D+1 values and hope the error
    # pattern missed them; the agreement check keeps this sound
    guess = interpolate(list(zip(pts[:D + 1], vals[:D + 1])), field, mode)
    tau = agreement_set(guess, cw)
    if len(tau) >= need:
        return DecodeResult(guess, tau)

    for e in range(b, 0, -1):
        cand = _bw_candidate(field, pts, vals, D, e)
        if cand is None:
            continue
        tau = agreement_set(cand, cw)
        if len(tau) >= need:
            return DecodeResult(cand, tau)
    raise DecodeFailure(
        f"no degree-{D} polynomial matches {need} of {n} received values")
