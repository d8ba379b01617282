"""Set partitions of small vertex sets and their lattice operations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import NotSubset
from .graph import UnionFind


@dataclass(frozen=True)
class Partition:
    """Blocks are sorted tuples, ordered by their minimum element."""

    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]]) -> "Partition":
        bs = [tuple(sorted(set(b))) for b in blocks]
        bs = [b for b in bs if b]
        seen: set[int] = set()
        for b in bs:
            if seen.intersection(b):
                raise ValueError("blocks overlap")
            seen.update(b)
        return cls(tuple(sorted(bs)))

    @classmethod
    def singletons(cls, ground: Iterable[int]) -> "Partition":
        return cls(tuple((x,) for x in sorted(set(ground))))

    @classmethod
    def whole(cls, ground: Iterable[int]) -> "Partition":
        g = tuple(sorted(set(ground)))
        return cls((g,) if g else ())

    @property
    def ground(self) -> frozenset[int]:
        return frozenset(x for b in self.blocks for x in b)

    def __len__(self) -> int:
        return len(self.blocks)

    def block_index(self) -> dict[int, int]:
        return {x: i for i, b in enumerate(self.blocks) for x in b}

    def same_block(self, a: int, b: int) -> bool:
        idx = self.block_index()
        return idx[a] == idx[b]

    def join(self, other: "Partition") -> "Partition":
        return partition_join(self, other)

    def project(self, w: Iterable[int]) -> "Partition":
        return partition_project(self, w)

    def refines(self, other: "Partition") -> bool:
        """Every block of ``self`` lies inside a block of ``other``."""
        idx = other.block_index()
        return all(len({idx[x] for x in b}) == 1 for b in self.blocks)

    def __str__(self) -> str:
        return "{" + ", ".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


def partition_join(p1: Partition, p2: Partition) -> Partition:
    """Finest common coarsening; elements missing from one side act as singletons."""
    uf = UnionFind(sorted(p1.ground | p2.ground))
    for p in (p1, p2):
        for b in p.blocks:
            for x in b[1:]:
                uf.union(b[0], x)
    groups: dict[int, list[int]] = {}
    for x in uf.parent:
        groups.setdefault(uf.find(x), []).append(x)
    return Partition.of(groups.values())


def partition_project(p: Partition, w: Iterable[int]) -> Partition:
    w = set(w)
    if not w <= p.ground:
        raise NotSubset(f"{sorted(w - p.ground)} not in the ground set")
    return Partition.of([x for x in b if x in w] for b in p.blocks)


def enumerate_partitions(ground: Iterable[int]) -> Iterator[Partition]:
    """All partitions of ``ground`` in restricted-growth-string order."""
    items = sorted(set(ground))
    n = len(items)
    if n == 0:
        yield Partition(())
        return
    rgs = [0] * n

    def rec(i: int, top: int) -> Iterator[Partition]:
        if i == n:
            blocks: list[list[int]] = [[] for _ in range(top + 1)]
            for x, r in zip(items, rgs):
                blocks[r].append(x)
            yield Partition(tuple(tuple(b) for b in blocks))
            return
        for r in range(top + 2):
            rgs[i] = r
            yield from rec(i + 1, max(top, r))

    rgs[0] = 0
    yield from rec(1, 0)


def enumerate_coarsenings(p: Partition) -> Iterator[Partition]:
    """Partitions of ``p.ground`` that ``p`` refines."""
    for q in enumerate_partitions(range(len(p.blocks))):
        yield Partition.of([x for i in b for x in p.blocks[i]] for b in q.blocks)


def bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]
