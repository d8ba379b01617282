"""Non-crossing value sequences.

A sequence crosses when two distinct values interleave as ``a .. b .. a .. b``.
It is minimal when no value repeats three times in a row.  Any sequence
collapses to a minimal one by shortening each run to at most two copies,
and the collapse preserves (non-)crossing.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence


def is_noncrossing(seq: Sequence[int]) -> bool:
    """Direct check: restricted to any two values, at most three alternating runs."""
    values = sorted(set(seq))
    for a, b in itertools.combinations(values, 2):
        runs, last = 0, None
        for x in seq:
            if x == a or x == b:
                if x != last:
                    runs += 1
                    last = x
        if runs >= 4:
            return False
    return True


def is_minimal(seq: Sequence[int]) -> bool:
    return all(not (seq[i] == seq[i + 1] == seq[i + 2]) for i in range(len(seq) - 2))


def collapse(seq: Sequence[int]) -> tuple[int, ...]:
    """Minimal form: every run cut down to at most two copies."""
    out: list[int] = []
    for x in seq:
        if len(out) >= 2 and out[-1] == x and out[-2] == x:
            continue
        out.append(x)
    return tuple(out)


class _Extender:
    """Incremental non-crossing test for appending one value at a time.

    For each ordered pair of values we track how many alternating runs the
    prefix has when restricted to that pair; appending ``x`` only changes
    pairs involving ``x``.
    """

    def __init__(self, ell: int):
        self.ell = ell
        self.runs = [[0] * (ell + 1) for _ in range(ell + 1)]
        self.last = [[0] * (ell + 1) for _ in range(ell + 1)]

    def can_append(self, x: int) -> bool:
        for y in range(1, self.ell + 1):
            if y == x:
                continue
            a, b = min(x, y), max(x, y)
            if self.last[a][b] != x and self.runs[a][b] >= 3:
                return False
        return True

    def push(self, x: int) -> list[tuple[int, int, int, int]]:
        undo = []
        for y in range(1, self.ell + 1):
            if y == x:
                continue
            a, b = min(x, y), max(x, y)
            undo.append((a, b, self.runs[a][b], self.last[a][b]))
            if self.last[a][b] != x:
                self.runs[a][b] += 1
                self.last[a][b] = x
        return undo

    def pop(self, undo) -> None:
        for a, b, r, l in undo:
            self.runs[a][b] = r
            self.last[a][b] = l


def _minimal_sequences(ell: int, max_len: int, canonical: bool) -> Iterator[tuple[int, ...]]:
    """Depth-first walk of the prefix-closed family of minimal non-crossing sequences.

    Yields sequences over values ``1..ell`` (each one may be unused).  With
    ``canonical`` set, values first appear in increasing order.
    """
    ext = _Extender(ell)
    seq: list[int] = []

    def rec(top: int) -> Iterator[tuple[int, ...]]:
        yield tuple(seq)
        if len(seq) == max_len:
            return
        limit = min(ell, top + 1) if canonical else ell
        for x in range(1, limit + 1):
            if len(seq) >= 2 and seq[-1] == x and seq[-2] == x:
                continue
            if not ext.can_append(x):
                continue
            undo = ext.push(x)
            seq.append(x)
            yield from rec(max(top, x))
            seq.pop()
            ext.pop(undo)

    yield from rec(0)


def enumerate_minimal_noncrossing(ell: int, n: int | None = None, canonical: bool = False) -> list[tuple[int, ...]]:
    """Every minimal non-crossing sequence using exactly the values ``1..ell``.

    ``n`` caps the length (sequences longer than the target assignment can
    never expand to it).  The search itself is capped one above the proven
    length bound so an overlong sequence would show up rather than loop.
    """
    if ell < 1:
        raise ValueError("ell must be at least 1")
    cap = 4 * ell + 1 if n is None else min(n, 4 * ell + 1)
    return [s for s in _minimal_sequences(ell, cap, canonical) if len(set(s)) == ell]


def expand_minimal(seq: Sequence[int], n: int) -> Iterator[tuple[int, ...]]:
    """All length-``n`` sequences whose minimal form is ``seq``.

    Runs of length two in ``seq`` may stretch to any length of at least two.
    """
    runs: list[tuple[int, int]] = []
    for x in seq:
        if runs and runs[-1][0] == x:
            runs[-1] = (x, runs[-1][1] + 1)
        else:
            runs.append((x, 1))
    stretchable = [i for i, (_, c) in enumerate(runs) if c == 2]
    slack = n - len(seq)
    if slack < 0 or (slack > 0 and not stretchable):
        return
    for extra in _compositions(slack, len(stretchable)):
        lengths = [c for _, c in runs]
        for i, e in zip(stretchable, extra):
            lengths[i] += e
        yield tuple(x for (x, _), c in zip(runs, lengths) for _ in range(c))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for cut in itertools.combinations(range(total + parts - 1), parts - 1):
        prev, out = -1, []
        for c in cut + (total + parts - 1,):
            out.append(c - prev - 1)
            prev = c
        yield tuple(out)


def noncrossing_sequences(n: int, ell: int) -> Iterator[tuple[int, ...]]:
    """All non-crossing sequences of length ``n`` over values ``1..ell``.

    Built from minimal sequences on every value subset plus expansion.
    """
    if n == 0:
        yield ()
        return
    for m in range(1, min(ell, n) + 1):
        base = enumerate_minimal_noncrossing(m, n)
        for values in itertools.combinations(range(1, ell + 1), m):
            for s in base:
                relabelled = tuple(values[x - 1] for x in s)
                yield from expand_minimal(relabelled, n)


def max_minimal_length(ell: int) -> tuple[int, int]:
    """Longest minimal non-crossing sequence over at most ``ell`` values.

    Returns ``(length, count of canonical sequences explored)``.  The search
    depth allows one step past the proven bound.
    """
    best, count = 0, 0
    for s in _minimal_sequences(ell, 4 * ell + 1, canonical=True):
        count += 1
        best = max(best, len(s))
    return best, count


def brute_force_minimal(ell: int, max_len: int) -> Iterator[tuple[int, ...]]:
    """Generate-and-filter over all of ``[ell]^L`` for ``L <= max_len``."""
    for length in range(1, max_len + 1):
        for s in itertools.product(range(1, ell + 1), repeat=length):
            if len(set(s)) == ell and is_minimal(s) and is_noncrossing(s):
                yield s


def canonical_relabel(seq: Iterable[int]) -> tuple[int, ...]:
    names: dict[int, int] = {}
    out = []
    for x in seq:
        if x not in names:
            names[x] = len(names) + 1
        out.append(names[x])
    return tuple(out)
