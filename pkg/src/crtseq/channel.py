"""Slot-synchronous collision channel without feedback.

A slot with exactly one transmitter delivers its packet; two or more
transmitters collide and everything in the slot is lost; senders never
learn what happened.  Users follow their zero-one schedule: a user with
delay offset tau transmits at slot t when its sequence has a one at
(t - tau) mod L, so the schedule starts at slot tau.  Session users run
the schedule afresh from each session's start slot.

Also hosts the worst-case throughput calculators for the q = k*p - 1
sequence family and the offset-sampling throughput experiment.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import CrtParams, Variant, generate_sequence, is_prime

__all__ = [
    "IDLE",
    "SUCCESS",
    "COLLISION",
    "ActivitySignal",
    "UserSpec",
    "Scenario",
    "ChannelTrace",
    "ThroughputReport",
    "simulate",
    "channel_activity",
    "construction_params",
    "throughput_lower_bound",
    "optimal_user_count",
    "peak_throughput_bound",
    "monte_carlo_throughput",
    "exhaustive_pair_throughput",
    "adversarial_min_throughput",
    "scenario_from_json",
    "scenario_to_json",
]

IDLE, SUCCESS, COLLISION = 0, 1, 2
_SYMBOLS = {IDLE: "0", SUCCESS: "1", COLLISION: "*"}
_CODES = {v: k for k, v in _SYMBOLS.items()}


class ActivitySignal:
    """Per-slot channel reduction: 0 idle, 1 lone sender, * collision."""

    def __init__(self, codes: np.ndarray):
        codes = np.asarray(codes, dtype=np.int8)
        if codes.ndim != 1 or codes.size and (codes.min() < 0 or codes.max() > 2):
            raise ValueError("activity codes must be 0, 1 or 2")
        self.codes = codes
        self.codes.flags.writeable = False

    @classmethod
    def from_string(cls, text: str) -> "ActivitySignal":
        return cls(np.array([_CODES[ch] for ch in text.strip()], dtype=np.int8))

    def __len__(self) -> int:
        return int(self.codes.size)

    def __getitem__(self, t: int) -> int:
        return int(self.codes[t])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ActivitySignal):
            return NotImplemented
        return len(self) == len(other) and bool(np.all(self.codes == other.codes))

    def __str__(self) -> str:
        return "".join(_SYMBOLS[int(c)] for c in self.codes)


@dataclass(frozen=True)
class UserSpec:
    """One transmitter: either permanently active with a delay offset, or
    active in explicit [start, end) sessions (schedule restarts per session).

    ``offset=None`` on a permanent user means "sample it from the scenario
    seed".  Sessions and offsets are mutually exclusive: a session's start
    slot is its phase.
    """

    user_id: int
    generator: int
    offset: int | None = None
    sessions: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self) -> None:
        if self.sessions is not None:
            object.__setattr__(self, "sessions", tuple((int(a), int(b)) for a, b in self.sessions))
            if self.offset is not None:
                raise ValueError(
                    f"user {self.user_id}: offset and sessions are mutually exclusive"
                )


@dataclass(frozen=True)
class Scenario:
    params: CrtParams
    users: tuple[UserSpec, ...]
    duration: int
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "users", tuple(self.users))
        if self.duration <= 0:
            raise ValueError("duration must be positive")
        L = self.params.L
        gens = [u.generator for u in self.users]
        if len(set(gens)) != len(gens):
            raise ValueError("users must have distinct generators")
        ids = [u.user_id for u in self.users]
        if len(set(ids)) != len(ids):
            raise ValueError("users must have distinct ids")
        for u in self.users:
            if not 0 <= u.generator < self.params.p:
                raise ValueError(f"user {u.user_id}: generator outside 0..p-1")
            if u.offset is not None and not 0 <= u.offset < L:
                raise ValueError(f"user {u.user_id}: offset outside 0..L-1")
            if u.sessions is not None:
                prev_end = None
                for a, b in u.sessions:
                    if a < 0 or b - a < L:
                        raise ValueError(
                            f"user {u.user_id}: session [{a},{b}) shorter than one period"
                        )
                    if prev_end is not None and a - prev_end < L:
                        raise ValueError(
                            f"user {u.user_id}: inter-session gap below one period"
                        )
                    prev_end = b

    def resolved_offsets(self) -> dict[int, int]:
        """Offsets per user id, sampling unspecified permanent offsets from
        the scenario seed (in user order, so the draw is reproducible)."""
        rng = np.random.default_rng(self.seed)
        out: dict[int, int] = {}
        for u in self.users:
            if u.sessions is not None:
                continue
            if u.offset is None:
                out[u.user_id] = int(rng.integers(0, self.params.L))
            else:
                out[u.user_id] = u.offset
        return out


@dataclass
class ChannelTrace:
    """Outcome of a simulation run.

    ``n_senders[t]`` is the number of simultaneous transmitters at slot t;
    ``sole_sender``/``sole_payload`` identify the delivered packet on
    success slots (-1 elsewhere); collision participants are kept per slot.
    """

    duration: int
    n_senders: np.ndarray
    sole_sender: np.ndarray
    sole_payload: np.ndarray
    collision_senders: dict[int, tuple[int, ...]]
    sent: dict[int, int]
    succeeded: dict[int, int]

    def outcome(self, t: int) -> tuple:
        n = int(self.n_senders[t])
        if n == 0:
            return ("idle",)
        if n == 1:
            return ("success", int(self.sole_sender[t]), int(self.sole_payload[t]))
        return ("collision", self.collision_senders[t])

    @property
    def total_successes(self) -> int:
        return int(np.count_nonzero(self.n_senders == 1))

    @property
    def system_throughput(self) -> Fraction:
        return Fraction(self.total_successes, self.duration)


def _transmission_slots(user: UserSpec, scenario: Scenario, offsets: dict[int, int]) -> np.ndarray:
    """Slots in [0, duration) where the user transmits, in packet order."""
    L = scenario.params.L
    support = generate_sequence(user.generator, scenario.params).support()
    slots: list[np.ndarray] = []
    if user.sessions is None:
        tau = offsets[user.user_id]
        start = tau - L  # cover slots in [0, tau) from the previous period
        for base in range(start, scenario.duration, L):
            s = base + support
            slots.append(s[(s >= 0) & (s < scenario.duration)])
    else:
        for a, b in user.sessions:
            end = min(b, scenario.duration)
            for base in range(a, end, L):
                s = base + support
                slots.append(s[s < end])
    return np.concatenate(slots) if slots else np.empty(0, dtype=np.int64)


def simulate(scenario: Scenario) -> ChannelTrace:
    """Run the collision rule over the scenario; deterministic given the
    scenario (the seed only feeds unspecified offsets)."""
    offsets = scenario.resolved_offsets()
    per_user = {u.user_id: _transmission_slots(u, scenario, offsets) for u in scenario.users}

    counts = np.zeros(scenario.duration, dtype=np.int32)
    for slots in per_user.values():
        counts[slots] += 1

    sole_sender = np.full(scenario.duration, -1, dtype=np.int64)
    sole_payload = np.full(scenario.duration, -1, dtype=np.int64)
    collisions: dict[int, list[int]] = {}
    sent: dict[int, int] = {}
    succeeded: dict[int, int] = {}
    for u in scenario.users:
        slots = per_user[u.user_id]
        ok = counts[slots] == 1
        sole_sender[slots[ok]] = u.user_id
        sole_payload[slots[ok]] = np.flatnonzero(ok)
        for t in slots[~ok]:
            collisions.setdefault(int(t), []).append(u.user_id)
        sent[u.user_id] = int(slots.size)
        succeeded[u.user_id] = int(ok.sum())

    return ChannelTrace(
        duration=scenario.duration,
        n_senders=counts,
        sole_sender=sole_sender,
        sole_payload=sole_payload,
        collision_senders={t: tuple(sorted(v)) for t, v in collisions.items()},
        sent=sent,
        succeeded=succeeded,
    )


def channel_activity(trace: ChannelTrace) -> ActivitySignal:
    return ActivitySignal(np.clip(trace.n_senders, 0, 2).astype(np.int8))


# --- worst-case bounds for the q = k*p - 1 family ---


def construction_params(p: int, k: int) -> CrtParams:
    """Parameters of the fixed-duty family: q = k*p - 1, period k*p^2 - p."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    return CrtParams(p, k * p - 1)


def throughput_lower_bound(p: int, k: int, m_users: int) -> Fraction:
    """Guaranteed system throughput with m_users active, any delay offsets.

    Each user keeps at least q - (m_users - 1)*(k + 1) of its q packet
    slots, since no other user can overlap it in more than k + 1 slots per
    period.  Clamped at zero.
    """
    if not is_prime(p):
        raise ValueError("p must be prime")
    if not 1 <= m_users <= p:
        raise ValueError(f"need 1 <= m_users <= p, got {m_users}")
    if k < 1:
        raise ValueError("k must be a positive integer")
    length = k * p * p - p
    per_period = m_users * (k * p - 1 - (m_users - 1) * (k + 1))
    return Fraction(max(0, per_period), length)


def optimal_user_count(p: int, k: int) -> tuple[Fraction, int]:
    """User count maximizing the worst-case bound: the exact maximizer
    k*(p+1) / (2*(k+1)) and its floor."""
    exact = Fraction(k * (p + 1), 2 * (k + 1))
    return exact, math.floor(exact)


def peak_throughput_bound(p: int, k: int) -> Fraction:
    """Worst-case system throughput bound at the best integer user count.

    Evaluates the completed-square form of the per-period guarantee at the
    floored optimum; flooring costs at most k + 1 successes per period.
    """
    length = k * p * p - p
    return Fraction((p + 1) ** 2, 4 * length) * Fraction(k * k, k + 1) - Fraction(k + 1, length)


# --- sampled and exhaustive throughput over delay offsets ---


@dataclass(frozen=True)
class ThroughputReport:
    """Summary of system throughput over a collection of offset choices."""

    trials: int
    minimum: float
    mean: float
    maximum: float


def _success_counts(offsets: np.ndarray, supports: list[np.ndarray], length: int) -> np.ndarray:
    """Slots with exactly one transmitter, per offset row.

    offsets has shape (n, M); row i assigns a delay to each of the M users.
    """
    n = offsets.shape[0]
    out = np.empty(n, dtype=np.int64)
    batch = max(1, (1 << 22) // (length or 1))
    for lo in range(0, n, batch):
        hi = min(n, lo + batch)
        chunk = offsets[lo:hi]
        b = chunk.shape[0]
        flat = []
        for u, support in enumerate(supports):
            pos = (support[None, :] + chunk[:, u, None]) % length
            flat.append(pos + (np.arange(b) * length)[:, None])
        counts = np.bincount(
            np.concatenate(flat, axis=1).ravel(), minlength=b * length
        ).reshape(b, length)
        out[lo:hi] = (counts == 1).sum(axis=1)
    return out


def monte_carlo_throughput(
    p: int,
    k: int,
    m_users: int,
    trials: int,
    seed: int,
    generators: tuple[int, ...] | None = None,
) -> ThroughputReport:
    """Sample delay offsets i.i.d. uniform over Z_L and measure one-period
    system throughput.  Defaults to generators 1..m_users."""
    params = construction_params(p, k)
    if generators is None:
        if m_users > p:
            raise ValueError("more users than available sequences")
        generators = tuple(range(1, m_users + 1)) if m_users < p else tuple(range(p))
    supports = [generate_sequence(g, params).support() for g in generators]
    rng = np.random.default_rng(seed)
    offsets = rng.integers(0, params.L, size=(trials, len(supports)))
    succ = _success_counts(offsets, supports, params.L)
    thr = succ / params.L
    return ThroughputReport(trials, float(thr.min()), float(thr.mean()), float(thr.max()))


def exhaustive_pair_throughput(p: int, k: int, generators: tuple[int, int]) -> ThroughputReport:
    """One-period throughput over all L^2 offset pairs of two users."""
    params = construction_params(p, k)
    supports = [generate_sequence(g, params).support() for g in generators]
    L = params.L
    grid = np.stack(np.meshgrid(np.arange(L), np.arange(L), indexing="ij"), axis=-1)
    offsets = grid.reshape(-1, 2)
    succ = _success_counts(offsets, supports, L)
    thr = succ / L
    return ThroughputReport(L * L, float(thr.min()), float(thr.mean()), float(thr.max()))


def adversarial_min_throughput(
    p: int,
    k: int,
    generators: tuple[int, ...],
    restarts: int = 20,
    seed: int = 0,
) -> float:
    """Search for a bad offset combination: random restarts plus greedy
    +-1 coordinate descent on the success count.  Returns the worst
    throughput found (an upper bound on the true worst case)."""
    params = construction_params(p, k)
    supports = [generate_sequence(g, params).support() for g in generators]
    L = params.L
    m = len(supports)
    rng = np.random.default_rng(seed)
    best = np.inf
    for _ in range(restarts):
        cur = rng.integers(0, L, size=m)
        cur_val = int(_success_counts(cur[None, :], supports, L)[0])
        while True:
            neigh = np.repeat(cur[None, :], 2 * m, axis=0)
            for u in range(m):
                neigh[2 * u, u] = (neigh[2 * u, u] + 1) % L
                neigh[2 * u + 1, u] = (neigh[2 * u + 1, u] - 1) % L
            vals = _success_counts(neigh, supports, L)
            j = int(vals.argmin())
            if vals[j] < cur_val:
                cur, cur_val = neigh[j], int(vals[j])
            else:
                break
        best = min(best, cur_val / L)
    return float(best)


# --- scenario file format ---


def scenario_from_json(obj: dict | str) -> Scenario:
    """Build a scenario from the JSON schema
    {p, q, variant, duration, seed, users:[{id, g, offset|null, sessions|null}]}.
    """
    if isinstance(obj, str):
        obj = json.loads(obj)
    params = CrtParams(int(obj["p"]), int(obj["q"]), Variant.parse(obj.get("variant", "std")))
    users = tuple(
        UserSpec(
            user_id=int(u["id"]),
            generator=int(u["g"]),
            offset=None if u.get("offset") is None else int(u["offset"]),
            sessions=None
            if u.get("sessions") is None
            else tuple((int(a), int(b)) for a, b in u["sessions"]),
        )
        for u in obj["users"]
    )
    return Scenario(params, users, int(obj["duration"]), int(obj.get("seed", 0)))


def scenario_to_json(sc: Scenario) -> dict:
    return {
        "p": sc.params.p,
        "q": sc.params.q,
        "variant": sc.params.variant.value,
        "duration": sc.duration,
        "seed": sc.seed,
        "users": [
            {
                "id": u.user_id,
                "g": u.generator,
                "offset": u.offset,
                "sessions": None if u.sessions is None else [list(s) for s in u.sessions],
            }
            for u in sc.users
        ],
    }
