import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from foldedtoric import assembly as asm
from foldedtoric.folded import FoldedPolygon, euler_characteristic, validate_folded_polygon
from foldedtoric.lattice import AffineMapZ, apply_affine, random_affine
from foldedtoric.local_models import moment_cp2

UNIT = FoldedPolygon.from_corners([(0, 0), (1, 0), (0, 1)])
F = Fraction


def test_collapse_labels_on_unit_triangle():
    assert asm.collapse_label(UNIT, (F(1, 4), F(1, 4))).kind == asm.FREE
    edge = asm.collapse_label(UNIT, (F(1, 2), 0))
    assert edge.kind == asm.CIRCLE and edge.stabilizer == (0, 1)
    assert asm.collapse_label(UNIT, (F(1, 2), F(1, 2))).stabilizer == (1, 1)
    assert asm.collapse_label(UNIT, (0, 0)).kind == asm.FIXED
    with pytest.raises(asm.AssemblyError, match="not on B"):
        asm.collapse_label(UNIT, (2, 2))


def test_fold_label_matches_chart_direction():
    e = asm.build_cp2cp2_example()
    lab = asm.collapse_label(e.polygon, (0, F(1, 2)))
    assert lab.kind == asm.CIRCLE
    # A (0, 1) for the rotation chart is (-1, 0); labels are taken up to sign.
    assert lab.stabilizer == (1, 0)
    # the folded ray is vertical, so the edge rule agrees with the fold rule
    assert asm.edge_stabilizer((0, F(1, 2)), (0, 1)) == lab.stabilizer


def test_fold_stabilizer_for_a_shear_chart():
    chart = AffineMapZ(((1, 1), (0, 1)), (0, 0))
    # the folded ray runs along A e1 = (1, 0); its annihilator is (0, 1)
    assert asm.fold_stabilizer(chart) == (0, 1)
    assert asm.edge_stabilizer((0, 0), (1, 0)) == (0, 1)


def test_exact_winding_number():
    loop = [(F(0), F(0)), (F(1), F(0)), (F(0), F(1))]
    assert asm.winding_number(loop, (F(1, 4), F(1, 4))) == 1
    assert asm.winding_number(loop, (F(2), F(2))) == 0
    assert asm.winding_number(loop[::-1], (F(1, 4), F(1, 4))) == -1


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([(F(1, 2), F(0)), (F(1, 3), F(2, 3)), (F(0), F(1, 5)), (F(1, 5), F(1, 5)), (F(0), F(0))]))
def test_labels_transport_under_relabeling(seed, point):
    mu = random_affine(random.Random(seed))
    before = asm.collapse_label(UNIT, point)
    after = asm.collapse_label(UNIT.transform(mu), apply_affine(mu, point))
    assert after == asm.transport_label(before, mu)


def test_example_counts():
    e = asm.build_cp2cp2_example()
    assert len(e.charts) == 4 and len(e.overlaps) == 3
    assert euler_characteristic(e.polygon) == 4
    assert validate_folded_polygon(e.polygon).ok
    assert [c.kind for c in e.charts] == ["cp2", "cp2-scaled", "strip", "fold"]


def test_cp2_chart_matches_direct_coordinates():
    m_a = asm.build_cp2cp2_example().chart("M_A")
    p1, t1, p2, t2 = 0.3, 0.5, 0.4, 1.1
    x = np.real(m_a.to_native(np.array([[p1, t1, p2, t2]], complex)))[0]
    z1 = complex(x[0], x[1])
    z2 = complex(x[2], x[3])
    s = 1 - p1 - p2
    assert abs(z1 - math.sqrt(p1 / s) * complex(math.cos(t1), math.sin(t1))) < 1e-12
    assert abs(z2 - math.sqrt(p2 / s) * complex(math.cos(t2), math.sin(t2))) < 1e-12
    assert moment_cp2(z1, z2) == pytest.approx((p1, p2), abs=1e-12)


def test_overlap_examples_pass():
    e = asm.build_cp2cp2_example()
    outer = (asm.gt(1, 1, F(5, 8)), asm.lt(1, 1, F(3, 4)))
    rep = asm.verify_overlap(e.chart("M_A"), e.chart("M_D"), outer, 2000)
    assert rep.ok and rep.checked + rep.skipped == 2000
    inner = (asm.gt(0, 1, F(1, 4)), asm.lt(0, 1, F(3, 8)))
    rep = asm.verify_overlap(e.chart("M_C"), e.chart("M_D"), inner, 2000)
    assert rep.ok and rep.max_form_defect <= asm.FORM_TOL


def test_misscaled_control_fails_by_factor_two():
    rep = asm.misscaled_control(1000)
    assert not rep.ok
    assert rep.max_form_defect == pytest.approx(0.5, abs=1e-9)


def test_chart_with_wrong_region_is_flagged():
    e = asm.build_cp2cp2_example()
    # M_C's collapsed bottom edge is skipped, not compared
    region = (asm.gt(0, 1, 0), asm.lt(0, 1, F(1, 10**7)), asm.lt(1, 1, F(1, 2)), asm.lt(-1, 1, F(1, 2)))
    rep = asm.verify_overlap(e.chart("M_C"), e.chart("M_C"), region, 200)
    assert rep.skipped == 200 and not rep.ok and rep.notes


def test_sampling_is_deterministic():
    region = (asm.gt(0, 1, F(1, 4)), asm.lt(0, 1, F(3, 8)), asm.lt(1, 1, F(3, 4)), asm.lt(-1, 1, F(3, 4)))
    a = asm.sample_region(region, 500)
    b = asm.sample_region(region, 500)
    assert np.array_equal(a, b) and a.shape == (500, 4)
    assert np.all(asm.in_region(region, a[:, [0, 2]]))


def test_region_area_of_inner_strip():
    region = (asm.gt(0, 1, F(1, 4)), asm.lt(0, 1, F(3, 8)), asm.lt(1, 1, F(3, 4)), asm.lt(-1, 1, F(3, 4)))
    # trapezoid with parallel sides 1 and 3/4 and height 1/8
    assert asm.region_area(region) == pytest.approx((1 + 0.75) / 2 / 8)


def test_halfspace_description():
    assert asm.lt(1, 1, F(3, 4)).describe() == "p1 + p2 < 3/4"
    assert asm.le(-1, 0, 0).describe() == "p1 >= 0"


def test_patch_topology():
    rep = asm.patch_topology_report(asm.build_cp2cp2_example())
    names = [n for n, _, _ in rep.edges]
    dirs = [d for _, _, d in rep.edges]
    assert names == ["bottom-edge", "folded-ray"]
    assert dirs == [(0, 1), (1, 0)]
    assert rep.all_primitive and rep.unimodular and rep.standard_factors and rep.ok


def test_coverage():
    rep = asm.coverage_report(asm.build_cp2cp2_example(), 4000)
    assert rep.samples > 1000 and rep.ok


def test_verify_example_small():
    rep = asm.verify_example(samples=500)
    assert rep.ok
    assert len(rep.overlap_reports) == 7
    assert rep.lines()[-1] == "result: pass"


def test_halfspace_description_prefers_positive_bounds():
    assert asm.gt(-1, 1, F(5, 8)).describe() == "-p1 + p2 > 5/8"
    assert asm.gt(0, 1, 0).describe() == "p2 > 0"
    assert asm.lt(-1, 1, F(3, 4)).describe() == "-p1 + p2 < 3/4"
