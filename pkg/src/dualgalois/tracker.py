"""Numerical continuation of the intersection points along loops of lines.

Each of the ``d`` roots of ``G(r, s) = 0`` is carried along a polyline in
the ``s`` chart by an Euler predictor ``dr/ds = -G_s / G_r`` and a Newton
corrector.  Steps adapt: they grow after easy corrections and halve when
the corrector fails or when a root would move by a sizeable fraction of
its distance to the nearest other root (which is how path jumping starts).

Permutations follow the 1-based convention of :mod:`permgroup`: the root
that starts at index ``i`` ends at the start position of index ``sigma(i)``.
Following loop A and then loop B therefore gives ``sigma_B * sigma_A``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .pencil import component_label, concatenate, min_separation, polished_roots
from .permgroup import Permutation


class TrackingError(RuntimeError):
    pass


class NearCollisionError(TrackingError):
    pass


class MatchingError(TrackingError):
    pass


class LabelFlipError(TrackingError):
    pass


@dataclass(frozen=True)
class TrackOptions:
    newton_tol: float = 1e-10
    max_step: float = math.inf
    min_root_sep_factor: float = 1e3
    max_newton_iters: int = 20
    initial_step: float = 1e-2
    label_check_every: int = 16
    max_halvings: int = 60
    jump_fraction: float = 0.25
    corrector_fraction: float = 0.1

    def __post_init__(self):
        for name in ("newton_tol", "max_step", "min_root_sep_factor", "initial_step"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_newton_iters < 1 or self.label_check_every < 1:
            raise ValueError("iteration counts must be positive")


@dataclass
class TrackResult:
    permutation: Permutation
    end_roots: list
    step_count: int
    min_separation_seen: float


@dataclass
class StartFiber:
    """Roots at ``s0`` ordered so each component's sheets are contiguous,
    with their component labels."""

    s0: complex
    roots: list
    labels: list

    @property
    def separation(self):
        return min_separation(self.roots)


def start_fiber(family, s0):
    rs = polished_roots(family, s0)
    labs = [component_label(family, r, s0) for r in rs]
    order = sorted(range(len(rs)), key=lambda i: (labs[i], round(rs[i].real, 12), round(rs[i].imag, 12)))
    return StartFiber(s0=s0, roots=[rs[i] for i in order], labels=[labs[i] for i in order])


def _separations(rs):
    n = len(rs)
    out = [math.inf] * n
    for i in range(n):
        ri = rs[i]
        for j in range(i):
            dd = abs(ri - rs[j])
            if dd < out[i]:
                out[i] = dd
            if dd < out[j]:
                out[j] = dd
    return out


def _correct(family, rs, s, opts):
    """Newton at fixed ``s``; returns (roots, iterations) or None."""
    rs = list(rs)
    for it in range(1, opts.max_newton_iters + 1):
        vals = family.eval_all(rs, s)
        done = True
        for i, (g, gr, _, sc) in enumerate(vals):
            if gr == 0:
                return None
            dr = g / gr
            rs[i] = rs[i] - dr
            if abs(g) > opts.newton_tol * sc or abs(dr) > 1e-12 * (1 + abs(rs[i])):
                done = False
        if done:
            return rs, it
    vals = family.eval_all(rs, s)
    if all(abs(g) <= opts.newton_tol * sc for g, _, _, sc in vals):
        return rs, opts.max_newton_iters
    return None


def track_path(family, vertices, start, opts=TrackOptions()):
    """Continue the start roots along the closed polyline ``vertices``."""
    rs = list(start.roots)
    d = len(rs)
    labels = start.labels
    sep0 = start.separation
    min_seen = sep0
    steps = 0
    since_check = 0
    h = None
    verts = [complex(v) for v in vertices]
    for a, b in zip(verts[:-1], verts[1:]):
        seg = b - a
        length = abs(seg)
        if length == 0:
            continue
        u = seg / length
        pos = 0.0
        if h is None:
            h = min(opts.initial_step, length)
        while pos < length:
            step = min(h, length - pos, opts.max_step)
            s = a + pos * u
            s1 = a + (pos + step) * u if pos + step < length else b
            ds = s1 - s
            vals = family.eval_all(rs, s)
            seps = _separations(rs)
            pred = []
            ok = True
            for i, (g, gr, gs, _) in enumerate(vals):
                if gr == 0:
                    ok = False
                    break
                move = -gs / gr * ds
                if abs(move) > opts.jump_fraction * seps[i]:
                    ok = False
                    break
                pred.append(rs[i] + move)
            res = _correct(family, pred, s1, opts) if ok else None
            if res is not None:
                new, iters = res
                for i in range(d):
                    if abs(new[i] - pred[i]) > opts.corrector_fraction * seps[i]:
                        res = None
                        break
            if res is not None:
                nsep = min_separation(new) if d > 1 else math.inf
                floor = opts.min_root_sep_factor * opts.newton_tol * (1 + max(abs(r) for r in new))
                if nsep < floor:
                    res = None
            if res is None:
                h = step / 2
                if h < 1e-14 * (1 + abs(s)) or step <= length * 2.0 ** -opts.max_halvings and step < 1e-9:
                    raise NearCollisionError(
                        f"near-collision on path at s = {s:.6g}; loop clearance too small, try another seed")
                continue
            rs = new
            pos = pos + step if pos + step < length else length
            steps += 1
            min_seen = min(min_seen, nsep)
            if iters <= 3:
                h = step * 1.5
            since_check += 1
            if since_check >= opts.label_check_every and len(family.factors) > 1:
                since_check = 0
                _check_labels(family, rs, s1, labels)
    if len(family.factors) > 1:
        _check_labels(family, rs, verts[-1], labels)
    perm = match_roots(start.roots, rs, sep0)
    return TrackResult(permutation=perm, end_roots=rs, step_count=steps, min_separation_seen=min_seen)


def _check_labels(family, rs, s, labels):
    for i, r in enumerate(rs):
        res = family.factor_residuals(r, s)
        lab = min(range(len(res)), key=lambda k: res[k])
        if lab != labels[i]:
            raise LabelFlipError(f"component label of sheet {i + 1} flipped from {labels[i]} to {lab}")


def match_roots(start, end, sep0=None):
    """Permutation sending start index ``i`` to the start index nearest the
    tracked end of root ``i`` (global assignment; each match must be within
    a quarter of the minimal start separation)."""
    d = len(start)
    if sep0 is None:
        sep0 = min_separation(start)
    cost = np.abs(np.subtract.outer(np.array(end), np.array(start)))
    rows, cols = linear_sum_assignment(cost)
    images = [0] * d
    limit = 0.25 * sep0 if d > 1 else math.inf
    for i, j in zip(rows, cols):
        if cost[i, j] >= limit:
            raise MatchingError(f"matching failure: end root {i + 1} is {cost[i, j]:.3e} from its match")
        images[i] = j + 1
    return Permutation(images)


def thread_count(threads=None):
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("GALOIS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(4, os.cpu_count() or 1)


def monodromy_generators(family, loops, start, opts=TrackOptions(), threads=None):
    """One tracked permutation per loop, in loop order."""
    n = thread_count(threads)
    if n == 1 or len(loops) <= 1:
        return [track_path(family, L.vertices, start, opts) for L in loops]
    with ThreadPoolExecutor(max_workers=n) as pool:
        futures = [pool.submit(track_path, family, L.vertices, start, opts) for L in loops]
        return [f.result() for f in futures]


def validate_word(family, loops, word, expected, start, opts=TrackOptions()):
    """Track the concatenated loop of ``word`` once and compare with ``expected``."""
    if not word:
        return expected.is_identity(), Permutation.identity(len(start.roots))
    path = concatenate(loops, word)
    res = track_path(family, path, start, opts)
    return res.permutation == expected, res.permutation
