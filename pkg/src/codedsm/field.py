"""Exact finite-field arithmetic with ambient operation counting.

Two field kinds are supported: prime fields F_p (elements are integers
reduced mod p) and binary extension fields GF(2^m) (elements are bitmasks
of polynomials over F_2 reduced modulo a built-in irreducible polynomial).
Inversion uses the extended Euclidean algorithm in both kinds, so results
are exact and never probabilistic.

Every arithmetic call is charged to the currently active operation counter,
if any.  The simulation layer switches counters when it runs code on behalf
of a node, a worker, or an auditor, which is how per-role complexity is
measured without threading counter objects through every call site.
"""

from __future__ import annotations

import random
from contextlib import contextmanager
from dataclasses import dataclass


class ConfigurationError(ValueError):
    """Raised for invalid field/protocol configurations and mixed-field use."""


# ---------------------------------------------------------------------------
# operation counting
# ---------------------------------------------------------------------------

@dataclass
class OpCounter:
    """Tally of field operations charged to one accounting scope."""

    adds: int = 0
    muls: int = 0
    invs: int = 0

    def total(self) -> int:
        return self.adds + self.muls + self.invs

    def copy(self) -> "OpCounter":
        return OpCounter(self.adds, self.muls, self.invs)

    def reset(self) -> None:
        self.adds = self.muls = self.invs = 0

    def __iadd__(self, other: "OpCounter") -> "OpCounter":
        self.adds += other.adds
        self.muls += other.muls
        self.invs += other.invs
        return self

    def __add__(self, other: "OpCounter") -> "OpCounter":
        return OpCounter(self.adds + other.adds, self.muls + other.muls,
                         self.invs + other.invs)


_ACTIVE: OpCounter | None = None


@contextmanager
def counting(counter: OpCounter):
    """Make ``counter`` the active sink for field-operation charges."""
    global _ACTIVE
    prev = _ACTIVE
    _ACTIVE = counter
    try:
        yield counter
    finally:
        _ACTIVE = prev


def active_counter() -> OpCounter | None:
    return _ACTIVE


@contextmanager
def uncounted():
    """Suspend operation counting, e.g. while building public setup tables."""
    global _ACTIVE
    prev = _ACTIVE
    _ACTIVE = None
    try:
        yield
    finally:
        _ACTIVE = prev


def charge(adds: int = 0, muls: int = 0, invs: int = 0) -> None:
    """Bulk-charge operations to the active counter.

    Used by vectorized code paths that perform a known number of field
    operations without routing each one through a Field method.
    """
    c = _ACTIVE
    if c is not None:
        c.adds += adds
        c.muls += muls
        c.invs += invs


class CounterBoard:
    """Per-scope operation counters, keyed by (owner, phase).

    Owners are strings such as ``"node3"`` or ``"client0"``; phases name the
    protocol stage being accounted (``"rho"`` compute, ``"psi"`` decode,
    ``"chi"`` update, ``"audit"``, ...).
    """

    def __init__(self):
        self.counters: dict[tuple[str, str], OpCounter] = {}

    @contextmanager
    def scope(self, owner: str, phase: str = "work"):
        key = (owner, phase)
        counter = self.counters.get(key)
        if counter is None:
            counter = self.counters[key] = OpCounter()
        with counting(counter):
            yield counter

    def get(self, owner: str | None = None, phase: str | None = None) -> OpCounter:
        """Aggregate counters matching the given owner and/or phase."""
        agg = OpCounter()
        for (o, ph), c in self.counters.items():
            if owner is not None and o != owner:
                continue
            if phase is not None and ph != phase:
                continue
            agg += c
        return agg

    def reset(self) -> None:
        self.counters.clear()

    def snapshot(self) -> dict[tuple[str, str], OpCounter]:
        return {k: c.copy() for k, c in self.counters.items()}


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------

def _is_prime(n: int) -> bool:
    # deterministic Miller-Rabin; the witness set covers all n < 3.3e24
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """Abstract finite field.  Elements are canonical Python ints."""

    kind: str
    order: int
    char: int

    def add(self, a: int, b: int) -> int:
        raise NotImplementedError

    def sub(self, a: int, b: int) -> int:
        raise NotImplementedError

    def neg(self, a: int) -> int:
        raise NotImplementedError

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inv(self, a: int) -> int:
        raise NotImplementedError

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow_(self, a: int, e: int) -> int:
        """Square-and-multiply exponentiation (e may be negative)."""
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def contains(self, a: int) -> bool:
        return isinstance(a, int) and 0 <= a < self.order

    def check(self, a: int) -> int:
        if not self.contains(a):
            raise ConfigurationError(f"{a!r} is not a canonical element of {self}")
        return a

    def elem(self, value: int) -> "FieldElement":
        return FieldElement(self, self.check(value))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def rand(self, rng: random.Random) -> int:
        return rng.randrange(self.order)

    def rand_nonzero(self, rng: random.Random) -> int:
        return rng.randrange(1, self.order)

    def embed_bit(self, b: int) -> int:
        raise ConfigurationError("bit embedding requires a binary extension field")

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and self._key() == other._key()

    def _key(self) -> tuple:
        raise NotImplementedError

    def __hash__(self):
        return hash(self._key())

    def __repr__(self) -> str:  # pragma: no cover
        return f"{type(self).__name__}(order={self.order})"


class PrimeField(Field):
    """F_p for prime p."""

    kind = "prime"

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ConfigurationError(f"modulus {p} is not prime")
        self.p = p
        self.order = p
        self.char = p

    def add(self, a, b):
        c = _ACTIVE
        if c is not None:
            c.adds += 1
        return (a + b) % self.p

    def sub(self, a, b):
        c = _ACTIVE
        if c is not None:
            c.adds += 1
        return (a - b) % self.p

    def neg(self, a):
        c = _ACTIVE
        if c is not None:
            c.adds += 1
        return -a % self.p

    def mul(self, a, b):
        c = _ACTIVE
        if c is not None:
            c.muls += 1
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        c = _ACTIVE
        if c is not None:
            c.invs += 1
        # CPython's pow(a, -1, p) runs the extended Euclidean algorithm
        return pow(a, -1, self.p)

    def _key(self):
        return ("prime", self.p)

    def __repr__(self):
        return f"PrimeField({self.p})"


# Lowest-weight irreducible reduction polynomials over F_2, as bitmasks
# (trinomial where one exists for the degree, pentanomial otherwise).
REDUCTION_POLYS: dict[int, int] = {
    1: 0x3,            # x + 1
    2: 0x7,            # x^2 + x + 1
    3: 0xB,            # x^3 + x + 1
    4: 0x13,           # x^4 + x + 1
    5: 0x25,           # x^5 + x^2 + 1
    6: 0x43,           # x^6 + x + 1
    7: 0x83,           # x^7 + x + 1
    8: 0x187,          # x^8 + x^7 + x^2 + x + 1
    9: 0x203,          # x^9 + x + 1
    10: 0x409,         # x^10 + x^3 + 1
    11: 0x805,         # x^11 + x^2 + 1
    12: 0x1009,        # x^12 + x^3 + 1
    13: 0x2027,        # x^13 + x^5 + x^2 + x + 1
    14: 0x4021,        # x^14 + x^5 + 1
    15: 0x8003,        # x^15 + x + 1
    16: 0x10047,       # x^16 + x^6 + x^2 + x + 1
    17: 0x20009,       # x^17 + x^3 + 1
    18: 0x40009,       # x^18 + x^3 + 1
    19: 0x80027,       # x^19 + x^5 + x^2 + x + 1
    20: 0x100009,      # x^20 + x^3 + 1
    21: 0x200005,      # x^21 + x^2 + 1
    22: 0x400003,      # x^22 + x + 1
    23: 0x800021,      # x^23 + x^5 + 1
    24: 0x1000087,     # x^24 + x^7 + x^2 + x + 1
    25: 0x2000009,     # x^25 + x^3 + 1
    26: 0x4000047,     # x^26 + x^6 + x^2 + x + 1
    27: 0x8000027,     # x^27 + x^5 + x^2 + x + 1
    28: 0x10000003,    # x^28 + x + 1
    29: 0x20000005,    # x^29 + x^2 + 1
    30: 0x40000003,    # x^30 + x + 1
    31: 0x80000009,    # x^31 + x^3 + 1
    32: 0x100400007,   # x^32 + x^22 + x^2 + x + 1
}

_LOG_TABLE_MAX_M = 16


class BinaryField(Field):
    """GF(2^m) with elements stored as bitmasks of degree < m.

    Multiplication uses discrete log/antilog tables for m <= 16 and
    carry-less shift-and-add reduction above that.  Either way each call
    counts as a single field multiplication.
    """

    kind = "binary"

    def __init__(self, m: int, reduction: int | None = None):
        if m not in REDUCTION_POLYS:
            raise ConfigurationError(f"unsupported extension degree m={m}")
        self.m = m
        self.order = 1 << m
        self.char = 2
        self.reduction = REDUCTION_POLYS[m] if reduction is None else reduction
        if self.reduction.bit_length() != m + 1:
            raise ConfigurationError("reduction polynomial degree must equal m")
        # log/antilog tables are built lazily on first multiplication
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        self._tables_wanted = m <= _LOG_TABLE_MAX_M

    # raw carry-less multiply with reduction, independent of tables
    def _clmul(self, a: int, b: int) -> int:
        r = 0
        red = self.reduction
        m = self.m
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a >> m & 1:
                a ^= red
        return r

    def _build_tables(self) -> None:
        # find a multiplicative generator by trial
        n = self.order - 1
        fac = []
        q, d = n, 2
        while d * d <= q:
            if q % d == 0:
                fac.append(d)
                while q % d == 0:
                    q //= d
            d += 1
        if q > 1:
            fac.append(q)
        g = 2
        while True:
            if all(self._pow_raw(g, n // f) != 1 for f in fac):
                break
            g += 1
        exp = [1] * (2 * n)
        log = [0] * self.order
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self._clmul(x, g)
        for i in range(n, 2 * n):
            exp[i] = exp[i - n]
        self._exp, self._log = exp, log

    def _pow_raw(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._clmul(r, a)
            a = self._clmul(a, a)
            e >>= 1
        return r

    def add(self, a, b):
        c = _ACTIVE
        if c is not None:
            c.adds += 1
        return a ^ b

    sub = add  # characteristic 2

    def neg(self, a):
        return a

    def mul(self, a, b):
        c = _ACTIVE
        if c is not None:
            c.muls += 1
        if a == 0 or b == 0:
            return 0
        if self._exp is None:
            if not self._tables_wanted:
                return self._clmul(a, b)
            self._build_tables()
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        c = _ACTIVE
        if c is not None:
            c.invs += 1
        # extended Euclid over F_2[x]
        r0, r1 = self.reduction, a
        s0, s1 = 0, 1
        while r1 != 0:
            d = r0.bit_length() - r1.bit_length()
            if d < 0:
                r0, r1, s0, s1 = r1, r0, s1, s0
                continue
            r0 ^= r1 << d
            s0 ^= s1 << d
        # r0 is now gcd = 1 (reduction is irreducible), s1 pairs with r1=0
        assert r0 == 1
        return self._reduce(s0)

    def _reduce(self, a: int) -> int:
        red, m = self.reduction, self.m
        while a.bit_length() > m:
            a ^= red << (a.bit_length() - m - 1)
        return a

    def embed_bit(self, b: int) -> int:
        """Map a bit to its field embedding: 0 -> all-zero word, 1 -> 0...01."""
        if b not in (0, 1):
            raise ValueError(f"bit must be 0 or 1, got {b!r}")
        return b

    def _key(self):
        return ("binary", self.m, self.reduction)

    def __repr__(self):
        return f"BinaryField(m={self.m})"


class FieldElement:
    """A field element bound to its field, with operator support.

    Arithmetic between elements of different fields raises
    ConfigurationError rather than guessing a conversion.
    """

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value: int):
        self.field = field
        self.value = value

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ConfigurationError(
                    f"mixed-field operation: {self.field!r} vs {other.field!r}")
            return other.value
        if isinstance(other, int):
            return other % self.field.order if self.field.kind == "prime" \
                else self.field.check(other)
        return NotImplemented  # type: ignore

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.value, v))

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(v, self.value))

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.value, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.div(self.value, v))

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.div(v, self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow_(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FieldElement({self.value} in {self.field!r})"


# Convenient defaults used throughout the simulations and tests:
# a word-sized Mersenne prime field, a tiny prime field for worked examples,
# and a byte-sized binary field.
def default_prime_field() -> PrimeField:
    return PrimeField((1 << 31) - 1)


def f11() -> PrimeField:
    return PrimeField(11)


def gf256() -> BinaryField:
    return BinaryField(8)


def parse_field(spec: str) -> Field:
    """Parse a field description such as ``prime:11`` or ``binary:8``."""
    try:
        kind, _, param = spec.partition(":")
        if kind == "prime":
            return PrimeField(int(param))
        if kind == "binary":
            return BinaryField(int(param))
    except ConfigurationError:
        raise
    except ValueError:
        pass
    raise ConfigurationError(f"cannot parse field spec {spec!r}")
