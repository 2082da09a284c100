"""Shared curves and cached pipeline runs for the test suite."""

import functools
from pathlib import Path

from dualgalois.curve import CurveSpec, xvars
from dualgalois.pipeline import PipelineOptions, run_pipeline

CURVE_DIR = Path(__file__).resolve().parent.parent / "curves"

x1, x2, x3 = xvars()

CURVES = {
    "conic": [x1 * x3 - x2 ** 2],
    "fermat_cubic": [x1 ** 3 + x2 ** 3 + x3 ** 3],
    "cuspidal_cubic": [x2 ** 2 * x3 - x1 ** 3],
    "nodal_cubic": [x2 ** 2 * x3 - x1 ** 2 * (x1 + x3)],
    "two_conics": [x1 ** 2 + x2 ** 2 - x3 ** 2, 4 * x1 ** 2 + x2 ** 2 - 3 * x3 ** 2 + x1 * x2],
    "conic_line": [x1 * x3 - x2 ** 2, x1 + 2 * x2 - 3 * x3],
}

# (degree, number of branch points, group order)
EXPECTED = {
    "conic": (2, 2, 2),
    "fermat_cubic": (3, 6, 6),
    "cuspidal_cubic": (3, 4, 6),
    "nodal_cubic": (3, 5, 6),
    "two_conics": (4, 8, 4),
    "conic_line": (3, 4, 2),
}


@functools.lru_cache(maxsize=None)
def curve(name):
    return CurveSpec(CURVES[name])


@functools.lru_cache(maxsize=None)
def report(name, seed=0):
    return run_pipeline(curve(name), seed=seed, opts=PipelineOptions(seed=seed, threads=1))


def closure(gens, d):
    """All elements of the group generated by ``gens``, as image tuples."""
    ident = tuple(range(1, d + 1))
    seen = {ident}
    todo = [ident]
    while todo:
        x = todo.pop()
        for g in gens:
            y = tuple(g(v) for v in x)
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


def all_set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in all_set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]
        yield [[first]] + part
