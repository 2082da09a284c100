"""Permutations and permutation groups.

Points are 1-based in every public interface.  Composition is right to
left: ``(a * b)(i) == a(b(i))``.  A *word* is a list of signed 1-based
generator indices read in traversal order, so the word ``[a, b]`` (first
``g_a``, then ``g_b``) evaluates to ``g_b * g_a``; ``-k`` stands for the
inverse of ``g_k``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import factorial, prod

from .partitions import Partition, invariant_under, symmetric_order, thickest_sym_partition

MAX_DEGREE = 64


class NotAMemberError(ValueError):
    pass


class WordBudgetError(RuntimeError):
    pass


class Permutation:
    """Bijection of ``{1, ..., d}`` given by its 1-based image list."""

    __slots__ = ("_img",)

    def __init__(self, images):
        img = tuple(int(v) - 1 for v in images)
        if sorted(img) != list(range(len(img))):
            raise ValueError(f"not a permutation: {list(images)}")
        if len(img) > MAX_DEGREE:
            raise ValueError(f"degree {len(img)} exceeds the cap {MAX_DEGREE}")
        self._img = img

    @classmethod
    def _from0(cls, img):
        p = cls.__new__(cls)
        p._img = tuple(img)
        return p

    @classmethod
    def identity(cls, d):
        return cls._from0(range(d))

    @classmethod
    def from_cycles(cls, d, *cycles):
        img = list(range(d))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a - 1] = b - 1
        if sorted(img) != list(range(d)):
            raise ValueError("cycles do not define a permutation")
        return cls._from0(img)

    @classmethod
    def transposition(cls, d, i, j):
        if i == j:
            raise ValueError("a transposition needs two distinct points")
        img = list(range(d))
        img[i - 1], img[j - 1] = j - 1, i - 1
        return cls._from0(img)

    @property
    def degree(self):
        return len(self._img)

    def __call__(self, i):
        return self._img[i - 1] + 1

    def images(self):
        """1-based image list."""
        return [v + 1 for v in self._img]

    def __mul__(self, other):
        return compose(self, other)

    def inverse(self):
        inv = [0] * len(self._img)
        for i, v in enumerate(self._img):
            inv[v] = i
        return Permutation._from0(inv)

    def __pow__(self, n):
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = Permutation.identity(self.degree)
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_identity(self):
        return all(i == v for i, v in enumerate(self._img))

    def is_transposition(self):
        moved = [i for i, v in enumerate(self._img) if i != v]
        return len(moved) == 2

    def support(self):
        return {i + 1 for i, v in enumerate(self._img) if i != v}

    def cycle_type(self):
        return sorted((len(c) for c in cycle_factorization(self).cycles), reverse=True)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self._img == other._img

    def __hash__(self):
        return hash(self._img)

    def __str__(self):
        cyc = cycle_factorization(self).cycles
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"

    def __repr__(self):
        return f"Permutation{self}[d={self.degree}]"


def compose(a, b):
    """``a * b``: apply ``b`` first, then ``a``."""
    if a.degree != b.degree:
        raise ValueError(f"degree mismatch: {a.degree} != {b.degree}")
    ai = a._img
    return Permutation._from0(ai[v] for v in b._img)


@dataclass(frozen=True)
class CycleFactorization:
    cycles: tuple

    @property
    def length(self):
        return len(self.cycles)


def cycle_factorization(sigma):
    """Disjoint cycles of length >= 2, each starting at its smallest point,
    ordered by that point."""
    seen = set()
    cycles = []
    for start in range(1, sigma.degree + 1):
        if start in seen or sigma(start) == start:
            continue
        cyc = [start]
        seen.add(start)
        j = sigma(start)
        while j != start:
            cyc.append(j)
            seen.add(j)
            j = sigma(j)
        cycles.append(tuple(cyc))
    return CycleFactorization(tuple(cycles))


class PermGroup:
    """Group generated by a list of permutations.

    The stabiliser chain (base, strong generators, transversals) is built on
    first use by the deterministic Schreier-Sims algorithm; afterwards the
    object is read-only.
    """

    def __init__(self, generators, degree=None):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise ValueError("degree required for an empty generator list")
            degree = gens[0].degree
        if any(g.degree != degree for g in gens):
            raise ValueError("generators of different degrees")
        self.degree = degree
        self.generators = gens
        self._chain = None

    # -- stabiliser chain --------------------------------------------------

    def _ensure_chain(self):
        if self._chain is None:
            self._chain = _schreier_sims(self.degree, [g._img for g in self.generators])
        return self._chain

    def order(self):
        base, _, trans = self._ensure_chain()
        return prod(len(t) for t in trans)

    def contains(self, sigma):
        if sigma.degree != self.degree:
            return False
        base, _, trans = self._ensure_chain()
        h, level = _strip(sigma._img, base, trans, 0)
        return level == len(base) and _is_id(h)

    __contains__ = contains

    def base(self):
        return list(b + 1 for b in self._ensure_chain()[0])

    def orbits(self):
        """Orbits of the natural action, as a Partition."""
        parent = list(range(self.degree))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.generators:
            for i, v in enumerate(g._img):
                a, b = find(i), find(v)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        return Partition.from_labels([find(i) for i in range(self.degree)])

    def is_transitive_on(self, block):
        orbit_lab = self.orbits().labels()
        return len({orbit_lab[i - 1] for i in block}) <= 1

    def elements(self):
        """All elements, by closure; intended for small groups and tests."""
        ident = tuple(range(self.degree))
        seen = {ident}
        frontier = [ident]
        gens = [g._img for g in self.generators]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = tuple(g[v] for v in x)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return [Permutation._from0(x) for x in seen]


def _is_id(img):
    return all(i == v for i, v in enumerate(img))


def _mul(a, b):
    """Tuple form of ``a * b`` (apply ``b`` first)."""
    return tuple(a[v] for v in b)


def _inv(a):
    out = [0] * len(a)
    for i, v in enumerate(a):
        out[v] = i
    return tuple(out)


def _orbit_transversal(point, gens, n):
    """Orbit of ``point`` with coset representatives ``u`` (``u(point) = x``)."""
    ident = tuple(range(n))
    trans = {point: ident}
    queue = deque([point])
    while queue:
        x = queue.popleft()
        ux = trans[x]
        for g in gens:
            y = g[x]
            if y not in trans:
                trans[y] = _mul(g, ux)
                queue.append(y)
    return trans


def _strip(g, base, trans, start):
    h = tuple(g)
    for level in range(start, len(base)):
        beta = h[base[level]]
        if beta not in trans[level]:
            return h, level
        h = _mul(_inv(trans[level][beta]), h)
    return h, len(base)


def _schreier_sims(n, gens):
    """Deterministic Schreier-Sims.  Returns ``(base, strong_gens_per_level,
    transversals)`` with points 0-based."""
    gens = [tuple(g) for g in gens if not _is_id(g)]
    base = []
    for g in gens:
        if all(g[b] == b for b in base):
            base.append(next(i for i, v in enumerate(g) if i != v))
    strong = [[g for g in gens if all(g[b] == b for b in base[:i])] for i in range(len(base))]
    trans = [_orbit_transversal(base[i], strong[i], n) for i in range(len(base))]

    i = len(base) - 1
    while i >= 0:
        restart = False
        for beta in sorted(trans[i]):
            u_beta = trans[i][beta]
            for x in strong[i]:
                xb = x[beta]
                sch = _mul(_inv(trans[i][xb]), _mul(x, u_beta))
                if _is_id(sch):
                    continue
                h, j = _strip(sch, base, trans, i + 1)
                if _is_id(h):
                    continue
                if j == len(base):
                    base.append(next(k for k, v in enumerate(h) if k != v))
                    strong.append([])
                    trans.append({base[-1]: tuple(range(n))})
                for level in range(i + 1, j + 1):
                    strong[level].append(h)
                    trans[level] = _orbit_transversal(base[level], strong[level], n)
                i = j
                restart = True
                break
            if restart:
                break
        if not restart:
            i -= 1
    return base, strong, trans


def generate(gens, degree=None):
    return PermGroup(gens, degree)


def evaluate_word(word, generators, degree=None):
    """Permutation obtained by following the word in traversal order."""
    d = degree if degree is not None else generators[0].degree
    out = Permutation.identity(d)
    for k in word:
        g = generators[abs(k) - 1]
        out = (g if k > 0 else g.inverse()) * out
    return out


def word_for(G, target, max_len=24, max_states=400000):
    """Shortest word (signed 1-based generator indices, traversal order)
    evaluating to ``target``.

    Bidirectional breadth-first search over the Cayley graph.  Letters are
    tried transpositions first, so among shortest words those built from
    transposition generators win.  Generators equal to the identity or to
    an earlier generator are skipped.
    """
    if target.degree != G.degree:
        raise ValueError("degree mismatch")
    if not G.contains(target):
        raise NotAMemberError("not a member")
    ident = Permutation.identity(G.degree)
    if target == ident:
        return []

    letters = []
    seen_perm = set()
    for k, g in enumerate(G.generators, start=1):
        if g.is_identity() or g in seen_perm:
            continue
        seen_perm.add(g)
        letters.append((k, g))
        inv = g.inverse()
        if inv != g:
            letters.append((-k, inv))
    letters.sort(key=lambda kg: (not kg[1].is_transposition(), kg[0] < 0, abs(kg[0])))
    for k, g in letters:
        if g == target and k > 0:
            return [k]

    # forward: value of prefix words; backward: y with target = val(suffix) * y
    fwd = {ident: []}
    bwd = {target: []}
    f_front, b_front = [ident], [target]
    inv_of = {k: g.inverse() for k, g in letters}
    length = 0
    while f_front and b_front:
        if len(fwd) + len(bwd) > max_states:
            break
        if length >= max_len:
            break
        grow_forward = len(f_front) <= len(b_front)
        if grow_forward:
            nxt = []
            for x in f_front:
                wx = fwd[x]
                for k, g in letters:
                    y = g * x
                    if y in fwd:
                        continue
                    fwd[y] = wx + [k]
                    nxt.append(y)
                    if y in bwd:
                        return fwd[y] + bwd[y]
            f_front = nxt
        else:
            nxt = []
            for y in b_front:
                wy = bwd[y]
                for k, g in letters:
                    z = inv_of[k] * y
                    if z in bwd:
                        continue
                    bwd[z] = [k] + wy
                    nxt.append(z)
                    if z in fwd:
                        return fwd[z] + bwd[z]
            b_front = nxt
        length += 1
    raise WordBudgetError("word length budget exceeded")


def is_product_of_symmetric(G, J):
    """True iff every generator preserves ``J`` and ``|G| = prod |I|!``."""
    if J.d != G.degree:
        raise ValueError("degree mismatch")
    if not all(invariant_under(J, g) for g in G.generators):
        return False
    return G.order() == symmetric_order(J)


# ---------------------------------------------------------------------------
# Checkers for the transposition-plus-one-permutation criterion
# ---------------------------------------------------------------------------


@dataclass
class CycleConditionReport:
    cycle: tuple
    partition: Partition
    invariant: bool
    single_cycle_per_block: bool
    acts_on_block_and_shorter: bool
    transitive_on_block: bool
    transposition_link: bool
    block: tuple

    @property
    def passed(self):
        return (self.invariant and self.single_cycle_per_block
                and self.acts_on_block_and_shorter and self.transitive_on_block)

    def to_dict(self):
        return {
            "cycle": list(self.cycle),
            "partition": self.partition.to_list(),
            "block": list(self.block),
            "invariant": self.invariant,
            "single_cycle_per_block": self.single_cycle_per_block,
            "nontrivial_and_shorter": self.acts_on_block_and_shorter,
            "transitive_on_block": self.transitive_on_block,
            "transposition_link": self.transposition_link,
            "passed": self.passed,
        }


@dataclass
class LemmaReport:
    sigma: Permutation
    cycles: list = field(default_factory=list)
    absorbed: bool = False
    conclusion_checked: bool = False
    conclusion_holds: bool | None = None
    group_order: int | None = None
    thickest_partition: Partition | None = None

    @property
    def passed(self):
        if self.absorbed:
            return True
        return all(c.passed for c in self.cycles)

    def to_dict(self):
        return {
            "sigma": self.sigma.images(),
            "absorbed_by_transpositions": self.absorbed,
            "cycles": [c.to_dict() for c in self.cycles],
            "conditions_hold": self.passed,
            "conclusion_checked": self.conclusion_checked,
            "conclusion_holds": self.conclusion_holds,
            "group_order": self.group_order,
            "thickest_partition": self.thickest_partition.to_list() if self.thickest_partition else None,
        }


def _validate_transpositions(transpositions):
    for t in transpositions:
        if not t.is_transposition():
            raise ValueError(f"{t!r} is not a transposition")


def check_lemma_conditions(transpositions, sigma, partitions):
    """Check the cycle conditions for ``H = <transpositions, sigma>``: each
    block meets at most one cycle, the cycle moves inside its block and is
    shorter than it, and ``H`` is transitive on that block.

    One partition per cycle of ``sigma`` (cycles ordered by smallest point).
    For cycle ``c_i`` the distinguished block is the block of ``J_i`` that
    contains the support of ``c_i``.  When every condition holds, the
    conclusion ``H = Sym(J_H)`` is checked by comparing orders.
    """
    _validate_transpositions(transpositions)
    d = sigma.degree
    cycles = cycle_factorization(sigma).cycles
    if len(partitions) != len(cycles):
        raise ValueError(f"expected {len(cycles)} partitions, got {len(partitions)}")
    H = PermGroup(list(transpositions) + [sigma], degree=d)
    report = LemmaReport(sigma=sigma)
    supports = [set(c) for c in cycles]
    for c, J in zip(cycles, partitions):
        if J.d != d:
            raise ValueError("partition degree mismatch")
        inv = invariant_under(J, sigma)
        single = all(sum(1 for sup in supports if sup & set(b)) <= 1 for b in J.blocks)
        containing = [b for b in J.blocks if set(c) & set(b)]
        block = containing[0] if containing else ()
        shorter = len(containing) == 1 and set(c) <= set(block) and len(c) < len(block)
        transitive = bool(block) and H.is_transitive_on(block)
        link = any(len(t.support() & set(c)) == 1 and t.support() <= set(block)
                   for t in transpositions)
        report.cycles.append(CycleConditionReport(
            cycle=c, partition=J, invariant=inv, single_cycle_per_block=single,
            acts_on_block_and_shorter=shorter, transitive_on_block=transitive,
            transposition_link=link, block=tuple(block)))
    report.group_order = H.order()
    if report.passed:
        JH = thickest_sym_partition(H)
        report.thickest_partition = JH
        report.conclusion_checked = True
        report.conclusion_holds = report.group_order == symmetric_order(JH)
    return report


@dataclass
class PropReport:
    lemma_reports: list
    group_order: int
    thickest_partition: Partition
    candidate: Partition | None = None
    candidate_invariant: bool | None = None
    candidate_transitive: bool | None = None
    candidate_is_thickest: bool | None = None
    order_matches: bool | None = None

    @property
    def conditions_hold(self):
        return all(r.passed for r in self.lemma_reports)

    @property
    def passed(self):
        if not self.conditions_hold:
            return False
        if any(r.conclusion_holds is False for r in self.lemma_reports):
            return False
        if self.candidate is not None:
            return bool(self.candidate_invariant and self.candidate_transitive
                        and self.candidate_is_thickest and self.order_matches)
        return self.group_order == symmetric_order(self.thickest_partition)

    def to_dict(self):
        return {
            "lemma_reports": [r.to_dict() for r in self.lemma_reports],
            "conditions_hold": self.conditions_hold,
            "group_order": self.group_order,
            "thickest_partition": self.thickest_partition.to_list(),
            "candidate": self.candidate.to_list() if self.candidate else None,
            "candidate_invariant": self.candidate_invariant,
            "candidate_transitive": self.candidate_transitive,
            "candidate_is_thickest": self.candidate_is_thickest,
            "order_matches": self.order_matches,
            "passed": self.passed,
        }


def check_prop_conditions(transpositions, sigmas, partition_families, candidate=None):
    """Apply the lemma checker to each ``H_i = <transpositions, sigma_i>``.

    A ``sigma_i`` already lying in the group generated by the transpositions
    is recorded as absorbed: that ``H_i`` is generated by transpositions, so
    it is the symmetric group of its orbit partition without further
    hypotheses, and its family may be ``None``.  With a ``candidate``
    partition, also checks that ``G`` preserves it, is transitive on each
    block, that it equals ``J_G``, and that ``|G| = prod |I_j|!``.
    """
    _validate_transpositions(transpositions)
    sigmas = list(sigmas)
    if len(partition_families) != len(sigmas):
        raise ValueError("one partition family per sigma is required")
    gens = list(transpositions) + sigmas
    if not gens:
        raise ValueError("empty generator set")
    d = gens[0].degree
    T = PermGroup(list(transpositions), degree=d)
    reports = []
    for sigma, fam in zip(sigmas, partition_families):
        if T.contains(sigma):
            reports.append(LemmaReport(sigma=sigma, absorbed=True))
            continue
        if fam is None:
            raise ValueError(f"partition family required for {sigma!r}")
        reports.append(check_lemma_conditions(transpositions, sigma, fam))
    G = PermGroup(gens, degree=d)
    JG = thickest_sym_partition(G)
    rep = PropReport(lemma_reports=reports, group_order=G.order(), thickest_partition=JG)
    if candidate is not None:
        rep.candidate = candidate
        rep.candidate_invariant = all(invariant_under(candidate, g) for g in gens)
        rep.candidate_transitive = all(G.is_transitive_on(b) for b in candidate.blocks)
        rep.candidate_is_thickest = candidate == JG
        rep.order_matches = G.order() == symmetric_order(candidate)
    return rep


def fixed_point_partitions(sigma, components):
    """Partition family for ``sigma`` built from its fixed points.

    For cycle ``c_i`` on component block ``I``: the distinguished block is
    ``supp(c_i)`` plus the fixed points of ``sigma`` in ``I``; each other
    cycle support is its own block; everything else is a singleton.  The
    blocks are unions of ``sigma``-orbits, so each partition is invariant.
    """
    d = sigma.degree
    cycles = cycle_factorization(sigma).cycles
    fixed = {i for i in range(1, d + 1) if sigma(i) == i}
    out = []
    for c in cycles:
        comp = set(components.block_of(c[0]))
        main = set(c) | (fixed & comp)
        blocks = [tuple(sorted(main))]
        used = set(main)
        for c2 in cycles:
            if c2 is not c:
                blocks.append(tuple(c2))
                used |= set(c2)
        blocks += [(i,) for i in range(1, d + 1) if i not in used]
        out.append(Partition(d, tuple(blocks)))
    return out


def symmetric_group_order(d):
    return factorial(d)
