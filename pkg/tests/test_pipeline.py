import pytest

from dualgalois import pencil as pc
from dualgalois.partitions import Partition
from dualgalois.permgroup import Permutation
from dualgalois.pipeline import CertificateError, PipelineError, PipelineOptions, run_pipeline, transposition_certificate
from helpers import CURVES, EXPECTED, curve, report


@pytest.mark.parametrize("name", sorted(CURVES))
def test_verdicts_and_orders(name):
    rep = report(name)
    d, nb, order = EXPECTED[name]
    assert rep.degree == d
    assert len(rep.pencil.branch_points) == nb
    assert rep.group_order == order
    assert rep.theorem1_verdict
    assert rep.cycle_types_match
    assert rep.petal_product_identity
    assert rep.line_sheets_fixed


@pytest.mark.parametrize("name", sorted(CURVES))
def test_thickest_partition_is_component_partition(name):
    rep = report(name)
    assert rep.thickest_partition == rep.components
    assert rep.prop_report.passed


def test_component_partition_blocks():
    rep = report("two_conics")
    assert sorted(len(b) for b in rep.components.blocks) == [2, 2]
    assert rep.sheet_components == [0, 0, 1, 1]


def test_conic_line_fixes_line_sheet():
    rep = report("conic_line")
    (line_sheet,) = [i + 1 for i, lab in enumerate(rep.sheet_components) if rep.curve.is_line(lab)]
    assert all(p(line_sheet) == line_sheet for p in rep.permutations)
    others = [i for i in range(1, 4) if i != line_sheet]
    assert Permutation.from_cycles(3, tuple(others)) in rep.permutations


def test_r_conditions_reported():
    assert report("cuspidal_cubic").r_conditions.passed
    assert report("fermat_cubic").r_conditions.passed


def test_local_rows_for_cusp():
    rows = report("cuspidal_cubic").local_rows
    (cusp,) = [r for r in rows if r.kind == "singular"]
    assert (cusp.branch.r, cusp.branch.s) == (2, 3)
    assert cusp.degree_check.passed


def test_kinds_of_branch_points():
    kinds = sorted(b.kind for b in report("cuspidal_cubic").pencil.branch_points)
    assert kinds == [pc.DUAL_TANGENT] * 3 + [pc.MULTIPLE_BRANCH]
    kinds = sorted(b.kind for b in report("nodal_cubic").pencil.branch_points)
    assert kinds == [pc.DUAL_TANGENT] * 4 + [pc.SINGULAR_POINT]


def test_other_seed_same_group():
    rep = run_pipeline(curve("fermat_cubic"), seed=3, opts=PipelineOptions(threads=1))
    assert rep.options.seed == 3
    assert rep.group_order == 6 and rep.theorem1_verdict


def test_certificate_two_conics():
    rep = report("two_conics")
    for i, j in [(1, 2), (3, 4)]:
        cert = transposition_certificate(rep, i, j)
        assert cert.validated
        assert cert.permutation == Permutation.transposition(4, i, j)
        assert cert.path[0] == cert.path[-1]


def test_certificate_errors():
    rep = report("two_conics")
    with pytest.raises(CertificateError, match="distinct"):
        transposition_certificate(rep, 2, 2)
    with pytest.raises(CertificateError, match="different components"):
        transposition_certificate(rep, 1, 3)
    with pytest.raises(CertificateError):
        transposition_certificate(rep, 0, 5)
    line = report("conic_line")
    (ls,) = [i + 1 for i, lab in enumerate(line.sheet_components) if line.curve.is_line(lab)]
    with pytest.raises(CertificateError):
        transposition_certificate(line, ls, ls % 3 + 1)


def test_stage_errors_are_tagged(monkeypatch):
    def boom(*a, **k):
        raise ArithmeticError("no transversal line")
    monkeypatch.setattr(pc, "choose_pencil", boom)
    with pytest.raises(PipelineError, match=r"^\[pencil\] no transversal line \(hint: "):
        run_pipeline(curve("conic"), opts=PipelineOptions(threads=1))


def test_options_round_trip():
    opts = PipelineOptions(seed=4, samples=96)
    assert opts.to_dict()["samples"] == 96
    assert opts.track_options().newton_tol == opts.newton_tol


def test_partition_type():
    assert isinstance(report("conic").components, Partition)
