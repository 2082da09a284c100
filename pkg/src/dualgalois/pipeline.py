"""End-to-end computation of the monodromy group of the dualizing covering.

``run_pipeline`` chooses a pencil, finds and classifies the branch points,
tracks one petal loop per branch point, and checks that the generated group
is the product of the symmetric groups of the component blocks.  The
report keeps the numerical context (pencil family, loops, start fiber) so
that transposition certificates can be produced and re-tracked later.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import reduce

from . import localgeom as lg
from . import pencil as pc
from . import tracker as tr
from .partitions import Partition, thickest_sym_partition
from .permgroup import (
    PermGroup,
    Permutation,
    WordBudgetError,
    check_prop_conditions,
    fixed_point_partitions,
    is_product_of_symmetric,
    word_for,
)

SCHEMA_VERSION = "1.0"


class PipelineError(RuntimeError):
    """A stage failed; ``stage`` names it and ``hint`` suggests a remedy."""

    def __init__(self, stage, message, hint=""):
        self.stage = stage
        self.hint = hint
        text = f"[{stage}] {message}"
        if hint:
            text += f" (hint: {hint})"
        super().__init__(text)


class CertificateError(ValueError):
    pass


_HINTS = {
    "local": "raise the series order or try another seed",
    "pencil": "try another seed",
    "loops": "try another seed",
    "track": "try another seed or a tighter --tol",
}


@dataclass(frozen=True)
class PipelineOptions:
    seed: int = 0
    newton_tol: float = 1e-10
    samples: int = 48
    threads: int | None = None
    include_flexes: bool = True
    local_checks: bool = True

    def track_options(self):
        return tr.TrackOptions(newton_tol=self.newton_tol)

    def to_dict(self):
        return {"seed": self.seed, "newton_tol": self.newton_tol, "samples": self.samples,
                "include_flexes": self.include_flexes, "local_checks": self.local_checks}


@dataclass
class Generator:
    index: int
    branch_point: pc.BranchPoint
    permutation: Permutation
    steps: int

    @property
    def matches_expected(self):
        return self.permutation.cycle_type() == list(self.branch_point.expected_cycle_type)

    def to_dict(self):
        return {
            "index": self.index,
            "branch_point": self.branch_point.index,
            "kind": self.branch_point.kind,
            "permutation": self.permutation.images(),
            "cycle_type": self.permutation.cycle_type(),
            "expected_cycle_type": list(self.branch_point.expected_cycle_type),
            "matches_expected": self.matches_expected,
        }


@dataclass
class LocalRow:
    kind: str
    branch: lg.PuiseuxBranch
    degree_check: lg.LocalDegreeReport | None = None

    def to_dict(self):
        out = {"kind": self.kind}
        out.update(self.branch.to_dict())
        out["local_degree_check"] = None if self.degree_check is None else self.degree_check.to_dict()
        return out


@dataclass
class PipelineReport:
    curve: object
    options: PipelineOptions
    pencil: pc.PencilConfig
    loops: list
    start: tr.StartFiber
    generators: list
    group: PermGroup
    components: Partition
    theorem1_verdict: bool
    line_sheets_fixed: bool
    petal_product_identity: bool
    thickest_partition: Partition
    local_rows: list
    r_conditions: lg.RConditionReport
    prop_report: object
    timings: dict = field(default_factory=dict)

    @property
    def degree(self):
        return self.curve.degree

    @property
    def group_order(self):
        return self.group.order()

    @property
    def permutations(self):
        return [g.permutation for g in self.generators]

    @property
    def cycle_types_match(self):
        return all(g.matches_expected for g in self.generators)

    @property
    def sheet_components(self):
        return list(self.start.labels)

    def to_dict(self):
        """JSON-native dict; timings are left out so reports are reproducible."""
        return {
            "schema_version": SCHEMA_VERSION,
            "seed": self.options.seed,
            "options": self.options.to_dict(),
            "curve": self.curve.summary(),
            "pencil": self.pencil.to_dict(),
            "start_roots": [[z.real, z.imag] for z in self.start.roots],
            "sheet_components": self.sheet_components,
            "branch_points": [b.to_dict() for b in self.pencil.branch_points],
            "loops": [{"branch_point": L.target, "radius": L.radius, "vertices": L.to_list()}
                      for L in self.loops],
            "generators": [g.to_dict() for g in self.generators],
            "cycle_types_match": self.cycle_types_match,
            "group_order": self.group_order,
            "component_partition": self.components.to_list(),
            "thickest_partition": self.thickest_partition.to_list(),
            "theorem1_verdict": self.theorem1_verdict,
            "line_sheets_fixed": self.line_sheets_fixed,
            "petal_product_identity": self.petal_product_identity,
            "local_table": [row.to_dict() for row in self.local_rows],
            "conditions": {
                "branch_data": self.r_conditions.to_dict(),
                "group_criteria": self.prop_report.to_dict(),
            },
        }


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except PipelineError:
        raise
    except (RuntimeError, ValueError, ArithmeticError) as exc:
        raise PipelineError(name, str(exc), _HINTS.get(name, "")) from exc


def _local_rows(curve, local, opts):
    rows = []
    for P, branches in local:
        for br in branches:
            rows.append(LocalRow("singular", br))
    if opts.include_flexes:
        for i, P in lg.flex_points(curve, seed=opts.seed):
            for br in lg.branches_at(curve, P):
                if br.component == i:
                    rows.append(LocalRow("flex", br))
    if opts.local_checks:
        for row in rows:
            if row.branch.s is not None and (row.branch.r > 1 or row.kind == "flex"):
                row.degree_check = lg.local_degree_check(row.branch)
    return rows


def component_partition(curve, labels):
    """Sheets grouped by component (block order follows the sheet order)."""
    return Partition.from_labels(labels)


def run_pipeline(curve, seed=0, opts=None):
    if opts is None:
        opts = PipelineOptions(seed=seed)
    elif opts.seed != seed:
        opts = PipelineOptions(**{**opts.__dict__, "seed": seed})
    timings = {}
    t = time.perf_counter()

    local = _stage("local", pc._local_data, curve, opts.seed)
    rows = _stage("local", _local_rows, curve, local, opts)
    timings["local"] = time.perf_counter() - t

    t = time.perf_counter()
    pencil = _stage("pencil", pc.choose_pencil, curve, seed=opts.seed, local=local)
    fam = pencil.family
    loops = _stage("loops", pc.build_loops, pencil.branch_points, pencil.s0, samples=opts.samples)
    timings["pencil"] = time.perf_counter() - t

    t = time.perf_counter()
    start = _stage("track", tr.start_fiber, fam, pencil.s0)
    results = _stage("track", tr.monodromy_generators, fam, loops, start,
                     opts.track_options(), threads=opts.threads)
    timings["track"] = time.perf_counter() - t

    d = curve.degree
    by_index = {b.index: b for b in pencil.branch_points}
    gens = [Generator(index=k, branch_point=by_index[L.target], permutation=res.permutation,
                      steps=res.step_count)
            for k, (L, res) in enumerate(zip(loops, results), start=1)]
    perms = [g.permutation for g in gens]
    group = PermGroup(perms, degree=d)
    J = component_partition(curve, start.labels)
    line_sheets = [i + 1 for i, lab in enumerate(start.labels) if curve.is_line(lab)]
    line_fixed = all(p(i) == i for p in perms for i in line_sheets)
    verdict = is_product_of_symmetric(group, J)
    ident = Permutation.identity(d)
    product = reduce(lambda acc, p: p * acc, perms, ident)

    t = time.perf_counter()
    dt_perms = [g.permutation for g in gens if g.branch_point.kind == pc.DUAL_TANGENT]
    branches = [row.branch for row in rows if row.kind == "singular"]
    rcond = _stage("conditions", lg.check_R_conditions, curve, branches, dt_perms)
    transpositions = []
    sigmas = []
    for p in perms:
        if p.is_transposition():
            if p not in transpositions:
                transpositions.append(p)
        elif not p.is_identity() and p not in sigmas:
            sigmas.append(p)
    families = [fixed_point_partitions(s, J) for s in sigmas]
    prop = _stage("conditions", check_prop_conditions, transpositions, sigmas, families,
                  candidate=J) if perms else None
    timings["conditions"] = time.perf_counter() - t

    return PipelineReport(
        curve=curve, options=opts, pencil=pencil, loops=loops, start=start, generators=gens,
        group=group, components=J, theorem1_verdict=verdict, line_sheets_fixed=line_fixed,
        petal_product_identity=product.is_identity(), thickest_partition=thickest_sym_partition(group),
        local_rows=rows, r_conditions=rcond, prop_report=prop or _EmptyProp(d), timings=timings)


class _EmptyProp:
    """Stand-in when there are no generators (degree one)."""

    def __init__(self, d):
        self.d = d
        self.passed = True

    def to_dict(self):
        return {"lemma_reports": [], "conditions_hold": True, "group_order": 1,
                "thickest_partition": Partition.discrete(self.d).to_list(), "passed": True}


# ---------------------------------------------------------------------------
# transposition certificates
# ---------------------------------------------------------------------------


@dataclass
class MonodromyCertificate:
    i: int
    j: int
    component: int
    word: list
    path: list
    validated: bool
    permutation: Permutation

    def to_dict(self):
        return {
            "pair": [self.i, self.j],
            "component": self.component,
            "word": list(self.word),
            "path": [[complex(z).real, complex(z).imag] for z in self.path],
            "validated": self.validated,
            "permutation": self.permutation.images(),
        }


def transposition_certificate(report, i, j, max_len=24):
    """Loop of lines whose monodromy is the transposition ``(i j)``,
    found as a generator word and confirmed by tracking the whole loop."""
    d = report.degree
    if not (1 <= i <= d and 1 <= j <= d):
        raise CertificateError(f"sheet indices must lie in 1..{d}")
    if i == j:
        raise CertificateError("a transposition needs two distinct sheets")
    labels = report.start.labels
    if labels[i - 1] != labels[j - 1]:
        raise CertificateError(
            "no such transposition exists: the sheets lie on different components, "
            "and the monodromy group preserves components")
    comp = labels[i - 1]
    if report.curve.is_line(comp):
        raise CertificateError("line components carry a single sheet")
    target = Permutation.from_cycles(d, (i, j))
    try:
        word = word_for(report.group, target, max_len=max_len)
    except WordBudgetError as exc:
        raise CertificateError(str(exc)) from exc
    path = pc.concatenate(report.loops, word)
    opts = report.options.track_options()
    ok, got = tr.validate_word(report.pencil.family, report.loops, word, target, report.start, opts)
    return MonodromyCertificate(i=i, j=j, component=comp, word=word, path=list(path),
                                validated=ok, permutation=got)
