"""Blind user identification and frame synchronization from channel activity.

The receiver sees only the per-slot activity symbol (idle / one sender /
collision).  A candidate sequence is *matched* at a start slot when every
one of its ones falls on a non-idle symbol in the following period.  The
detector keeps one boolean per potential user (generators 1..p-1; generator
0 is never assigned because its autocorrelation is too forgiving) and flips
it per the matching rule: an idle user that matches at t0 becomes active
with start t0; an active user is re-examined only at whole-period
boundaries of its own start and is dropped on the first failed match.

Identification is provably reliable when the period is long enough
relative to p^2 and at most (p+1)/2 users are simultaneously active;
outside those conditions the detector may mistake one user's delayed
transmissions for another user (a documented failure mode that the tests
reproduce).  The supporting machinery - the slot layout matrix, windowed
partial correlations, and the uncovered-ones witness - lives here too.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass

import numpy as np

from .channel import IDLE, ActivitySignal
from .core import (
    BinarySequence,
    CrtParams,
    GridPoint,
    Variant,
    characteristic_set,
    crt_map,
    generate_sequence,
)

__all__ = [
    "is_matched",
    "Activated",
    "Deactivated",
    "ActivityDetector",
    "run_detector",
    "GuaranteeLevel",
    "SyncGuarantee",
    "sync_guarantee",
    "slot_matrix",
    "partial_cross_correlation",
    "UncoveredOnes",
    "uncovered_ones",
]


def _codes(signal) -> np.ndarray:
    return signal.codes if isinstance(signal, ActivitySignal) else np.asarray(signal)


def is_matched(signal, seq: BinarySequence, t0: int) -> bool:
    """True iff every one of the sequence sees a non-idle symbol in the
    window [t0, t0 + L)."""
    codes = _codes(signal)
    L = len(seq)
    if t0 < 0 or t0 + L > codes.size:
        raise ValueError(f"window [{t0}, {t0 + L}) not covered by the signal")
    return bool(np.all(codes[t0 + seq.support()] != IDLE))


@dataclass(frozen=True)
class Activated:
    user: int
    start: int


@dataclass(frozen=True)
class Deactivated:
    user: int
    at: int  # period boundary whose window failed to match


class ActivityDetector:
    """Push one activity symbol per slot; decisions about start slot t0 are
    made once the window [t0, t0+L) is complete.

    Internally a ring of violation counters per user: an idle symbol at
    slot t rules out every start t0 = t - d where d is a one-position of
    the user's sequence.  A start with zero violations is matched.
    """

    def __init__(self, params: CrtParams, sequences: dict[int, BinarySequence] | None = None):
        self.params = params
        if sequences is None:
            sequences = {g: generate_sequence(g, params) for g in range(1, params.p)}
        self.user_ids = sorted(sequences)
        self._supports = {u: sequences[u].support() for u in self.user_ids}
        self._L = params.L
        self._viol = {u: np.zeros(self._L, dtype=np.int32) for u in self.user_ids}
        self._now = 0
        self.active: dict[int, bool] = {u: False for u in self.user_ids}
        self.start: dict[int, int | None] = {u: None for u in self.user_ids}

    @property
    def time(self) -> int:
        """Number of symbols consumed so far."""
        return self._now

    def push(self, symbol: int) -> list[Activated | Deactivated]:
        t = self._now
        self._now += 1
        if symbol == IDLE:
            for u in self.user_ids:
                t0s = t - self._supports[u]
                t0s = t0s[t0s >= 0]
                self._viol[u][t0s % self._L] += 1

        events: list[Activated | Deactivated] = []
        t0 = t - self._L + 1
        if t0 < 0:
            return events
        slot = t0 % self._L
        for u in self.user_ids:
            matched = self._viol[u][slot] == 0
            self._viol[u][slot] = 0  # slot is reused for t0 + L from now on
            if not self.active[u]:
                if matched:
                    self.active[u] = True
                    self.start[u] = t0
                    events.append(Activated(u, t0))
            elif (t0 - self.start[u]) % self._L == 0 and not matched:
                self.active[u] = False
                self.start[u] = None
                events.append(Deactivated(u, t0))
        return events

    def run(self, signal) -> list[Activated | Deactivated]:
        events: list[Activated | Deactivated] = []
        for symbol in _codes(signal):
            events.extend(self.push(int(symbol)))
        return events


def run_detector(signal, params: CrtParams) -> list[Activated | Deactivated]:
    """Batch equivalent of pushing the whole signal through a fresh
    ActivityDetector (same events, same order); vectorized matching."""
    codes = _codes(signal)
    L = params.L
    n_starts = codes.size - L + 1
    if n_starts <= 0:
        return []
    idle = (codes == IDLE).astype(np.int32)

    events: list[tuple[int, int, Activated | Deactivated]] = []
    for u in range(1, params.p):
        support = generate_sequence(u, params).support()
        viol = np.zeros(n_starts, dtype=np.int32)
        for d in support:
            viol += idle[d : d + n_starts]
        matched = viol == 0
        # replay the per-user state machine, jumping between decisions
        t0 = 0
        while t0 < n_starts:
            hits = np.flatnonzero(matched[t0:])
            if hits.size == 0:
                break
            start = t0 + int(hits[0])
            events.append((start, u, Activated(u, start)))
            t0 = start + L
            while t0 < n_starts and matched[t0]:
                t0 += L
            if t0 < n_starts:
                events.append((t0, u, Deactivated(u, t0)))
                t0 += 1
    events.sort(key=lambda item: (item[0], item[1]))
    return [ev for _, _, ev in events]


class GuaranteeLevel(enum.Enum):
    GENERAL = "general"            # q > 2p^2, any coprime q
    THREE_VALUED = "three-valued"  # q > p^2 suffices when q = +-1 mod p
    NONE = "none"


@dataclass(frozen=True)
class SyncGuarantee:
    level: GuaranteeLevel
    reason: str | None = None

    @property
    def guaranteed(self) -> bool:
        return self.level is not GuaranteeLevel.NONE


def sync_guarantee(p: int, q: int, active_count: int) -> SyncGuarantee:
    """Whether identification and synchronization are provably error-free
    for the given parameters and number of simultaneously active users."""
    if math.gcd(p, q) != 1:
        raise ValueError("p and q must be coprime")
    cap = (p + 1) // 2
    if q > 2 * p * p and active_count <= cap:
        return SyncGuarantee(GuaranteeLevel.GENERAL)
    if q > p * p and q % p in (1, p - 1) and active_count <= cap:
        return SyncGuarantee(GuaranteeLevel.THREE_VALUED)
    if active_count > cap:
        return SyncGuarantee(GuaranteeLevel.NONE, f"active users {active_count} > (p+1)/2 = {cap}")
    if q <= p * p:
        return SyncGuarantee(GuaranteeLevel.NONE, f"q = {q} <= p^2 = {p * p}")
    if q % p not in (1, p - 1):
        return SyncGuarantee(
            GuaranteeLevel.NONE, f"q = {q} <= 2p^2 = {2 * p * p} and q mod p not in {{1, p-1}}"
        )
    return SyncGuarantee(GuaranteeLevel.NONE, f"q = {q} <= 2p^2 = {2 * p * p}")


def slot_matrix(params: CrtParams) -> np.ndarray:
    """p x q matrix placing slot t at (t mod p, gamma*t mod q).

    Entries are a permutation of 0..pq-1; stepping one column to the right
    adds p (mod pq), so row 0 reads 0, p, 2p, ...  Requires the modified
    variant (the layout is what makes small slot indices occupy short
    horizontal runs).
    """
    if params.variant is not Variant.MODIFIED:
        raise ValueError("slot layout is defined for the modified variant only")
    ts = np.arange(params.L)
    mat = np.zeros((params.p, params.q), dtype=np.int64)
    mat[ts % params.p, (params.gamma * ts) % params.q] = ts
    return mat


@functools.lru_cache(maxsize=None)
def _char_points(g: int, params: CrtParams) -> frozenset[GridPoint]:
    return characteristic_set(g, params).points


@functools.lru_cache(maxsize=None)
def _prefix_window(params: CrtParams) -> frozenset[GridPoint]:
    """Grid image of the first p^2 slots."""
    return frozenset(crt_map(t, params) for t in range(params.p * params.p))


def partial_cross_correlation(
    g: int,
    h: int,
    shift: GridPoint | tuple[int, int],
    params: CrtParams,
    *,
    band: int | None = None,
) -> int:
    """Overlap of the supports of g and the shifted h, restricted to a
    window: the grid image of the first p^2 slots (band=None), or the p
    consecutive columns starting at ``band``.

    For distinct generators the count never exceeds 2 (for the prefix
    window this needs q > 2p^2).
    """
    if g == h:
        raise ValueError("generators must differ")
    if params.variant is not Variant.MODIFIED:
        raise ValueError("partial correlation windows assume the modified variant")
    p, q = params.p, params.q
    if band is not None and not 0 <= band <= q - p:
        raise ValueError(f"band start {band} outside 0..{q - p}")
    ig = _char_points(g, params)
    ih = _char_points(h, params)
    dr, dc = int(shift[0]) % p, int(shift[1]) % q
    prefix = _prefix_window(params) if band is None else None
    count = 0
    for pt in ig:
        if band is None:
            if pt not in prefix:
                continue
        elif not band <= pt.col < band + p:
            continue
        if GridPoint((pt.row - dr) % p, (pt.col - dc) % q) in ih:
            count += 1
    return count


@dataclass(frozen=True)
class UncoveredOnes:
    """Ones of a sequence left uncovered by its own acyclic shift, plus the
    witness window whose ones are all uncovered."""

    slots: frozenset[int]
    witness: str  # "prefix" (first p^2 slots) or "band"
    band: int | None = None


def uncovered_ones(g: int, tau: int, params: CrtParams) -> UncoveredOnes:
    """Ones of the generator-g sequence not covered by the sequence delayed
    acyclically by tau (1 <= tau < L).

    The uncovered set always swallows all ones of one verification window:
    either the first p^2 slots or some p-column band.  Which witness
    applies is reported; absence of any witness would disprove the
    detector's soundness argument, so it raises.
    """
    if params.variant is not Variant.MODIFIED:
        raise ValueError("uncovered-ones analysis assumes the modified variant")
    p, q, L = params.p, params.q, params.L
    if q <= 2 * p * p:
        raise ValueError("analysis requires q > 2p^2")
    if not 1 <= tau <= L - 1:
        raise ValueError(f"shift {tau} outside 1..{L - 1}")
    bits = generate_sequence(g, params).bits
    support = np.flatnonzero(bits)
    uncovered = {int(t) for t in support if t < tau or bits[t - tau] == 0}

    prefix_ones = {int(t) for t in support if t < p * p}
    if prefix_ones <= uncovered:
        return UncoveredOnes(frozenset(uncovered), "prefix")

    by_col: dict[int, list[int]] = {}
    for t in support:
        by_col.setdefault(int((params.gamma * int(t)) % q), []).append(int(t))
    for y in range(q - p + 1):
        band_ones = {t for c in range(y, y + p) for t in by_col.get(c, ())}
        if band_ones <= uncovered:
            return UncoveredOnes(frozenset(uncovered), "band", y)
    raise AssertionError(
        f"no witness window for g={g}, tau={tau}: uncovered-ones containment violated"
    )
