"""Partitions of ``{1, ..., d}``: refinement order, join, invariance, and the
thickest partition whose block-wise symmetric group lies in a given group."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations


@dataclass(frozen=True)
class Partition:
    """Partition of ``{1, ..., d}`` with blocks stored sorted, ordered by
    their minimum element, so equal partitions compare equal."""

    d: int
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(set(b))) for b in self.blocks), key=lambda b: b[0] if b else 0))
        if any(not b for b in blocks):
            raise ValueError("empty block")
        seen = [x for b in blocks for x in b]
        if sorted(seen) != list(range(1, self.d + 1)):
            raise ValueError(f"blocks do not partition 1..{self.d}: {blocks}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def discrete(cls, d):
        return cls(d, tuple((i,) for i in range(1, d + 1)))

    @classmethod
    def full(cls, d):
        return cls(d, (tuple(range(1, d + 1)),))

    @classmethod
    def from_labels(cls, labels):
        """Blocks are the level sets of ``labels`` (one label per point 1..d)."""
        groups = {}
        for i, lab in enumerate(labels, start=1):
            groups.setdefault(lab, []).append(i)
        return cls(len(labels), tuple(groups.values()))

    def block_of(self, i):
        for b in self.blocks:
            if i in b:
                return b
        raise KeyError(i)

    def labels(self):
        """Block index (0-based) of each point 1..d."""
        out = [0] * self.d
        for k, b in enumerate(self.blocks):
            for i in b:
                out[i - 1] = k
        return out

    def sizes(self):
        return [len(b) for b in self.blocks]

    def to_list(self):
        return [list(b) for b in self.blocks]

    def __len__(self):
        return len(self.blocks)

    def __str__(self):
        return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


def _check_same(j1, j2):
    if j1.d != j2.d:
        raise ValueError(f"partition sizes differ: {j1.d} != {j2.d}")


def refines(j1, j2):
    """True iff every block of ``j1`` lies inside a block of ``j2``."""
    _check_same(j1, j2)
    lab = j2.labels()
    return all(len({lab[i - 1] for i in b}) == 1 for b in j1.blocks)


def join(j1, j2):
    """Finest partition coarser than both: connected components of the graph
    linking elements that share a block in either partition."""
    _check_same(j1, j2)
    parent = list(range(j1.d + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for part in (j1, j2):
        for b in part.blocks:
            for x in b[1:]:
                ra, rb = find(b[0]), find(x)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    return Partition.from_labels([find(i) for i in range(1, j1.d + 1)])


def invariant_under(J, sigma):
    """True iff ``sigma`` maps every block of ``J`` onto itself."""
    if sigma.degree != J.d:
        raise ValueError("degree mismatch")
    return all({sigma(i) for i in b} == set(b) for b in J.blocks)


def thickest_sym_partition(G):
    """The thickest partition ``J`` with ``Sym(J)`` contained in ``G``.

    Connected components of the graph with an edge ``(i, j)`` whenever the
    transposition ``(i j)`` lies in ``G``.  Transpositions in a group are
    closed under ``(i j)(j k)(i j) = (i k)``, so every transposition inside a
    component belongs to ``G``, and no coarser partition can work.
    """
    from .permgroup import Permutation

    d = G.degree
    labels = list(range(d))

    def find(x):
        while labels[x] != x:
            labels[x] = labels[labels[x]]
            x = labels[x]
        return x

    for i, j in combinations(range(1, d + 1), 2):
        if find(i - 1) == find(j - 1):
            continue
        if G.contains(Permutation.transposition(d, i, j)):
            a, b = find(i - 1), find(j - 1)
            labels[max(a, b)] = min(a, b)
    return Partition.from_labels([find(i) for i in range(d)])


def symmetric_order(J):
    """Order of the block-wise symmetric group of ``J``."""
    from math import factorial

    out = 1
    for b in J.blocks:
        out *= factorial(len(b))
    return out
