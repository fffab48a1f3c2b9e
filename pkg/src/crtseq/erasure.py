"""Erasure-coded sessions over the collision channel.

Once the receiver knows who is active and at which offset, every collision
slot of a user is an erasure at a known codeword position, so a
maximum-distance-separable code across one period's packets recovers the
payload whenever the erasure count stays within the redundancy.

The code is systematic over a characteristic-2 field: a codeword is the
evaluation of the unique degree < D polynomial through the D information
symbols, taken at n fixed distinct field points (the field elements
0..n-1).  Any D unerased symbols re-interpolate the polynomial, which is
exactly the MDS property.  Field arithmetic uses fixed primitive
polynomials per order, documented below bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import CrtParams, Variant, generate_sequence, is_prime

__all__ = [
    "GF",
    "PRIMITIVE_POLYS",
    "code_dimension",
    "CodeSpec",
    "ErasureCode",
    "DecodeFailure",
    "session_roundtrip",
    "SessionReport",
]

# Primitive polynomial per field order, lowest-weight conventional choices;
# key 2^m maps to the polynomial's bit pattern (x^3 + x + 1 -> 0b1011).
PRIMITIVE_POLYS: dict[int, int] = {
    8: 0b1011,
    16: 0b10011,
    32: 0b100101,
    64: 0b1000011,
    128: 0b10001001,
    256: 0b100011101,
    512: 0b1000010001,
    1024: 0b10000001001,
    2048: 0b100000000101,
    4096: 0b1000001010011,
}


class GF:
    """Finite field of order 2^m via exp/log tables, elements as ints."""

    def __init__(self, order: int):
        if order not in PRIMITIVE_POLYS:
            raise ValueError(f"unsupported field order {order}")
        self.order = order
        poly = PRIMITIVE_POLYS[order]
        exp = np.zeros(2 * (order - 1), dtype=np.int64)
        log = np.zeros(order, dtype=np.int64)
        x = 1
        for i in range(order - 1):
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & order:
                x ^= poly
        if x != 1:
            raise ValueError(f"polynomial {poly:#b} is not primitive for order {order}")
        exp[order - 1 :] = exp[: order - 1]
        self._exp, self._log = exp, log

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return int(self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b


def code_dimension(p: int, k: int) -> int:
    """Per-period information dimension (k*p + k - p + 3) / 2.

    This is the guaranteed number of surviving packets per period when
    (p+1)/2 users are active with q = k*p + 1: each of the other
    (p+1)/2 - 1 users erases at most k + 1 of the q = k*p + 1 sent packets.
    Requires an odd prime p and k >= p.
    """
    if not is_prime(p) or p < 3:
        raise ValueError("p must be an odd prime")
    if k < p:
        raise ValueError(f"rate parameter k={k} must be at least p={p}")
    num = k * p + k - p + 3
    if num % 2 != 0:
        raise ValueError(f"dimension (kp+k-p+3)/2 is not an integer for p={p}, k={k}")
    return num // 2


def _field_order_for(n: int) -> int:
    order = 8
    while order < n:
        order *= 2
    if order not in PRIMITIVE_POLYS:
        raise ValueError(f"codeword length {n} exceeds supported field orders")
    return order


@dataclass(frozen=True)
class CodeSpec:
    """Shape of the per-period code: n symbols, dim of them information."""

    n: int
    dim: int
    field_order: int
    mds: bool = True

    def __post_init__(self) -> None:
        if not 1 <= self.dim <= self.n <= self.field_order:
            raise ValueError(f"need 1 <= dim <= n <= field order, got {self}")

    @classmethod
    def for_protocol(cls, p: int, k: int) -> "CodeSpec":
        """One codeword symbol per transmission opportunity in a period:
        n = k*p + 1 = q, field order the smallest supported power of two >= n."""
        n = k * p + 1
        return cls(n=n, dim=code_dimension(p, k), field_order=_field_order_for(n))

    @property
    def max_erasures(self) -> int:
        return self.n - self.dim


class DecodeFailure(Exception):
    """Too many erasures: recovery is impossible, not silently wrong."""


class ErasureCode:
    """Systematic MDS erasure code: first dim symbols are the information."""

    def __init__(self, spec: CodeSpec):
        self.spec = spec
        self.field = GF(spec.field_order)
        # Parity rows: evaluation of each Lagrange basis polynomial (through
        # the information points 0..dim-1) at the parity points dim..n-1.
        self._parity = [
            [self._lagrange_weight(i, x) for i in range(spec.dim)]
            for x in range(spec.dim, spec.n)
        ]

    def _lagrange_weight(self, i: int, x: int, points: list[int] | None = None) -> int:
        """Value at x of the basis polynomial that is 1 at points[i] and 0
        at the other interpolation points."""
        pts = points if points is not None else list(range(self.spec.dim))
        f = self.field
        num, den = 1, 1
        for j, pj in enumerate(pts):
            if j == i:
                continue
            num = f.mul(num, x ^ pj)
            den = f.mul(den, pts[i] ^ pj)
        return f.div(num, den)

    def encode(self, info) -> np.ndarray:
        info = np.asarray(info, dtype=np.int64)
        if info.shape != (self.spec.dim,):
            raise ValueError(f"expected {self.spec.dim} information symbols")
        if info.size and (info.min() < 0 or info.max() >= self.spec.field_order):
            raise ValueError("symbols outside the field")
        f = self.field
        word = np.zeros(self.spec.n, dtype=np.int64)
        word[: self.spec.dim] = info
        for r, row in enumerate(self._parity):
            acc = 0
            for coeff, sym in zip(row, info):
                acc ^= f.mul(coeff, int(sym))
            word[self.spec.dim + r] = acc
        return word

    def decode(self, received, erased) -> np.ndarray:
        """Recover the information symbols from a codeword with erasures.

        ``erased`` is a boolean mask over the n positions; erased entries of
        ``received`` are ignored.  Raises DecodeFailure when more than
        n - dim positions are erased.
        """
        received = np.asarray(received, dtype=np.int64)
        erased = np.asarray(erased, dtype=bool)
        if received.shape != (self.spec.n,) or erased.shape != (self.spec.n,):
            raise ValueError(f"expected {self.spec.n} symbols and an erasure mask")
        known = np.flatnonzero(~erased)
        if known.size < self.spec.dim:
            raise DecodeFailure(
                f"{int(erased.sum())} erasures exceed the budget of {self.spec.max_erasures}"
            )
        info = np.zeros(self.spec.dim, dtype=np.int64)
        missing = [i for i in range(self.spec.dim) if erased[i]]
        for i in range(self.spec.dim):
            if not erased[i]:
                info[i] = received[i]
        if missing:
            pts = [int(x) for x in known[: self.spec.dim]]
            vals = [int(received[x]) for x in pts]
            for x in missing:
                acc = 0
                for i, v in enumerate(vals):
                    acc ^= self.field.mul(self._lagrange_weight(i, x, pts), v)
                info[x] = acc
        return info


@dataclass(frozen=True)
class SessionReport:
    spec: CodeSpec
    recovered: dict[int, np.ndarray | None]
    recovered_ok: dict[int, bool]
    erasure_counts: dict[int, int]
    all_recovered: bool
    info_throughput: Fraction


def session_roundtrip(
    p: int,
    k: int,
    generators: tuple[int, ...],
    offsets: tuple[int, ...],
    payloads: dict[int, np.ndarray] | None = None,
    seed: int = 0,
) -> SessionReport:
    """End-to-end recovery over one period with q = k*p + 1.

    Each active user encodes dim information symbols into q = n packets and
    sends packet j at its j-th transmission opportunity; collisions erase
    packets at positions the receiver knows (offsets are known after
    synchronization).  With at most (p+1)/2 active users every user decodes,
    and the information throughput is exactly users * dim / (p*q).
    """
    q = k * p + 1
    params = CrtParams(p, q, Variant.MODIFIED)
    if len(generators) != len(offsets):
        raise ValueError("one offset per generator required")
    if len(set(generators)) != len(generators):
        raise ValueError("generators must be distinct")
    if not all(1 <= g < p for g in generators):
        raise ValueError("generators must lie in 1..p-1")
    if len(generators) > (p + 1) // 2:
        raise ValueError(f"at most (p+1)/2 = {(p + 1) // 2} active users are supported")

    spec = CodeSpec.for_protocol(p, k)
    code = ErasureCode(spec)
    rng = np.random.default_rng(seed)
    if payloads is None:
        payloads = {
            g: rng.integers(0, spec.field_order, size=spec.dim) for g in generators
        }

    L = params.L
    # j-th one of the schedule (in sequence order) carries codeword symbol j
    slot_lists = {}
    counts = np.zeros(L, dtype=np.int32)
    for g, tau in zip(generators, offsets):
        slots = (generate_sequence(g, params).support() + tau) % L
        slot_lists[g] = slots
        counts[slots] += 1

    recovered: dict[int, np.ndarray | None] = {}
    recovered_ok: dict[int, bool] = {}
    erasure_counts: dict[int, int] = {}
    for g in generators:
        word = code.encode(payloads[g])
        erased = counts[slot_lists[g]] >= 2
        erasure_counts[g] = int(erased.sum())
        try:
            out = code.decode(np.where(erased, 0, word), erased)
        except DecodeFailure:
            out = None
        recovered[g] = out
        recovered_ok[g] = out is not None and bool(np.array_equal(out, np.asarray(payloads[g])))

    all_ok = all(recovered_ok.values())
    throughput = Fraction(len(generators) * spec.dim, p * q)
    return SessionReport(spec, recovered, recovered_ok, erasure_counts, all_ok, throughput)
