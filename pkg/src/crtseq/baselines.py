"""Reference sequence families for uniformity comparisons.

Two classic low-correlation families serve as baselines: prime sequences
(period p^2, weight p, pairwise correlation at most 2) and their extended
variant obtained by padding p-1 zeros after every one (period p*(2p-1),
weight p, pairwise correlation at most 1).  Both families are 1-uniform,
which is the yardstick the residue-pair construction improves on.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import BinarySequence, is_prime

__all__ = ["BaselineFamily", "prime_sequences", "extended_prime_sequences"]


@dataclass(frozen=True)
class BaselineFamily:
    kind: str  # "prime" or "extended-prime"
    p: int
    sequences: tuple[BinarySequence, ...]

    @property
    def period(self) -> int:
        return len(self.sequences[0])


def prime_sequences(p: int) -> BaselineFamily:
    """p sequences of period p^2; sequence i has its ones at
    j*p + (i*j mod p) for j = 0..p-1."""
    if not is_prime(p):
        raise ValueError("p must be prime")
    seqs = tuple(
        BinarySequence.from_support([j * p + (i * j) % p for j in range(p)], p * p)
        for i in range(p)
    )
    return BaselineFamily("prime", p, seqs)


def extended_prime_sequences(p: int) -> BaselineFamily:
    """Prime sequences with p-1 zeros inserted after every one: each
    length-p block stretches to 2p-1, keeping one one per block."""
    if not is_prime(p):
        raise ValueError("p must be prime")
    width = 2 * p - 1
    seqs = tuple(
        BinarySequence.from_support([j * width + (i * j) % p for j in range(p)], p * width)
        for i in range(p)
    )
    return BaselineFamily("extended-prime", p, seqs)
