"""Set partitions of [k] and their input/output-axis decompositions.

Partitions index every linear-equivariant basis operator: a map from
l-tensors to m-tensors has one basis element per partition of [l+m].
Everything here is pure and deterministic; partitions are immutable and
hashable so they can key coefficient maps.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

MAX_GROUND_SET = 8  # bell(8) = 4140; larger enumerations rejected


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    """A partition of {1..k} in canonical form.

    Canonical form: elements inside a block ascend, blocks are sorted by
    their minimum element. This gives a total, reproducible iteration
    order for coefficient vectors and CSV columns.
    """

    blocks: tuple[tuple[int, ...], ...]
    k: int

    @staticmethod
    def of(blocks: Iterable[Iterable[int]], k: int | None = None) -> "Partition":
        canon = tuple(sorted((tuple(sorted(set(b))) for b in blocks), key=lambda b: b[0]))
        if not canon or any(len(b) == 0 for b in canon):
            raise PartitionError("blocks must be non-empty")
        elements = [x for b in canon for x in b]
        if len(elements) != len(set(elements)):
            raise PartitionError(f"blocks overlap: {canon}")
        size = max(elements)
        if sorted(elements) != list(range(1, size + 1)):
            raise PartitionError(f"blocks must cover {{1..k}} exactly: {canon}")
        if k is not None and k != size:
            raise PartitionError(f"ground-set size mismatch: got k={k}, blocks cover [{size}]")
        return Partition(canon, size)

    def __str__(self) -> str:
        return format_partition(self)

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self, element: int) -> int:
        """Index (0-based) of the block containing `element`."""
        for i, b in enumerate(self.blocks):
            if element in b:
                return i
        raise PartitionError(f"element {element} not in ground set [{self.k}]")


def bell(k: int) -> int:
    """Number of partitions of [k], via the Bell triangle."""
    if not 1 <= k <= MAX_GROUND_SET:
        raise PartitionError(f"k must be in [1, {MAX_GROUND_SET}], got {k}")
    row = [1]
    for _ in range(k - 1):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[-1]


@lru_cache(maxsize=None)
def enumerate_partitions(k: int) -> tuple[Partition, ...]:
    """All partitions of [k] in restricted-growth-string order.

    The order is deterministic and puts the all-in-one-block partition
    first (for k=2: {{1,2}} then {{1},{2}}, so the diagonal component of
    the 2-tensor partition norm comes first).
    """
    if not 1 <= k <= MAX_GROUND_SET:
        raise PartitionError(f"k must be in [1, {MAX_GROUND_SET}], got {k}")
    out: list[Partition] = []

    def rec(rgs: list[int], mx: int) -> None:
        if len(rgs) == k:
            nblocks = mx + 1
            blocks = [[] for _ in range(nblocks)]
            for pos, label in enumerate(rgs, start=1):
                blocks[label].append(pos)
            out.append(Partition.of(blocks))
            return
        for label in range(mx + 2):
            rgs.append(label)
            rec(rgs, max(mx, label))
            rgs.pop()

    rec([0], 0)
    assert len(out) == bell(k)
    return tuple(out)


def is_member(a: Sequence[int], gamma: Partition) -> bool:
    """Strict equivalence-pattern membership of an index tuple.

    True iff positions within each block of `gamma` carry equal values
    AND positions in different blocks carry distinct values. The strict
    convention makes the basis tensors indicator-disjoint: each index
    tuple activates exactly one partition.
    """
    if len(a) != gamma.k:
        raise PartitionError(f"index tuple length {len(a)} != ground set {gamma.k}")
    reps = []
    for block in gamma.blocks:
        v = a[block[0] - 1]
        for pos in block[1:]:
            if a[pos - 1] != v:
                return False
        reps.append(v)
    return len(set(reps)) == len(reps)


def induced_pattern(a: Sequence[int]) -> Partition:
    """The unique partition whose strict pattern the tuple satisfies."""
    groups: dict[int, list[int]] = {}
    for pos, v in enumerate(a, start=1):
        groups.setdefault(v, []).append(pos)
    return Partition.of(groups.values())


def is_finer(gamma: Partition, beta: Partition) -> bool:
    """True when gamma != beta and every block of beta is contained in
    some block of gamma.

    Caution: this reverses the standard lattice terminology — here the
    "finer" partition is the one with the *larger* blocks (e.g.
    {{1,2,3}} is finer than {{1,2},{3}}). The merge expansions in this
    module depend on that orientation.
    """
    if gamma.k != beta.k:
        raise PartitionError("ground-set mismatch")
    if gamma == beta:
        return False
    return all(any(set(bb) <= set(gb) for gb in gamma.blocks) for bb in beta.blocks)


@dataclass(frozen=True)
class IODecomposition:
    """Split of a partition of [l+m] by input/output axis membership.

    s1: blocks with input axes only; s2: blocks touching both ranges;
    s3: blocks with output axes only. pi1..pi4 are the derived axis sets
    of the four-step procedure (selection / reduction / alignment /
    replication).
    """

    s1: tuple[tuple[int, ...], ...]
    s2: tuple[tuple[int, ...], ...]
    s3: tuple[tuple[int, ...], ...]
    l: int
    m: int

    @property
    def pi1(self) -> tuple[tuple[int, ...], ...]:
        """Selection axes: the source partition restricted to [l]."""
        restricted = [tuple(x for x in b if x <= self.l) for b in self.s1 + self.s2]
        return tuple(sorted((b for b in restricted if b), key=lambda b: b[0]))

    @property
    def pi2(self) -> tuple[tuple[int, ...], ...]:
        """Reduction axes: input-only blocks (averaged over)."""
        return self.s1

    @property
    def pi3(self) -> tuple[tuple[int, ...], ...]:
        """Alignment axes: mixed blocks restricted to the output range."""
        restricted = [tuple(x for x in b if x > self.l) for b in self.s2]
        return tuple(sorted((b for b in restricted if b), key=lambda b: b[0]))

    @property
    def pi4(self) -> tuple[tuple[int, ...], ...]:
        """Replication axes: output-only blocks."""
        return self.s3


def split_io(gamma: Partition, l: int, m: int) -> IODecomposition:
    """Classify each block of a partition of [l+m] by axis range."""
    if gamma.k != l + m:
        raise PartitionError(f"partition of [{gamma.k}] does not match l+m={l + m}")
    s1, s2, s3 = [], [], []
    for b in gamma.blocks:
        has_in = any(x <= l for x in b)
        has_out = any(x > l for x in b)
        if has_in and has_out:
            s2.append(b)
        elif has_in:
            s1.append(b)
        else:
            s3.append(b)
    return IODecomposition(tuple(s1), tuple(s2), tuple(s3), l, m)


def format_partition(p: Partition) -> str:
    """Textual notation, e.g. "{{1,2},{3}}"."""
    return "{" + ",".join("{" + ",".join(str(x) for x in b) + "}" for b in p.blocks) + "}"


def parse_partition(text: str) -> Partition:
    """Inverse of format_partition (whitespace-tolerant)."""
    s = text.strip()
    if not (s.startswith("{") and s.endswith("}")):
        raise PartitionError(f"malformed partition notation: {text!r}")
    inner = s[1:-1]
    blocks = re.findall(r"\{([^{}]*)\}", inner)
    if not blocks:
        raise PartitionError(f"malformed partition notation: {text!r}")
    leftover = re.sub(r"\{[^{}]*\}", "", inner).replace(",", "").strip()
    if leftover:
        raise PartitionError(f"malformed partition notation: {text!r}")
    try:
        parsed = [[int(x) for x in b.split(",")] for b in blocks]
    except ValueError as exc:
        raise PartitionError(f"malformed partition notation: {text!r}") from exc
    return Partition.of(parsed)


@lru_cache(maxsize=None)
def merge_patterns(gamma: Partition) -> tuple[tuple[Partition, int], ...]:
    """Coarsenings of `gamma` (blocks merged) with Mobius coefficients.

    Used for inclusion-exclusion over the across-block distinctness
    constraint: [all block values distinct] =
    sum over merge patterns pi of mu(pi) * [values constant on cells],
    with mu(pi) = prod over cells (-1)^(|cell|-1) (|cell|-1)!.
    """
    nblocks = len(gamma.blocks)
    out = []
    for pattern in enumerate_partitions(nblocks):
        merged = Partition.of(
            tuple(sorted(x for i in cell for x in gamma.blocks[i - 1]))
            for cell in pattern.blocks
        )
        mu = 1
        for cell in pattern.blocks:
            r = len(cell)
            mu *= (-1) ** (r - 1) * math.factorial(r - 1)
        out.append((merged, mu))
    return tuple(out)
