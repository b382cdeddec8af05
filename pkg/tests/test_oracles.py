import pytest

from conftest import CORPUS, CUBE, DIAMOND, POLYGONS, POLYTOPES3D, SQUARE
from polygon_enum import canonical_form, reflexive_polygons
from skeleta.homology import build_complex, euler_characteristic, homology_q
from skeleta.oracles import Check, VerificationReport, bkk_euler, dk_curve_betti, verify
from skeleta.polytope import LatticePolytope, lattice_points


def test_dk_examples(big_triangle, small_triangle):
    assert dk_curve_betti(big_triangle) == (1, 10)
    assert dk_curve_betti(small_triangle) == (1, 4)
    assert dk_curve_betti(LatticePolytope(SQUARE)) == (1, 9)
    assert dk_curve_betti(LatticePolytope(DIAMOND)) == (1, 5)


def test_dk_rejects_other_dimensions(segment, octahedron):
    with pytest.raises(ValueError):
        dk_curve_betti(segment)
    with pytest.raises(ValueError):
        dk_curve_betti(octahedron)
    with pytest.raises(ValueError):
        dk_curve_betti(LatticePolytope(((0, 0), (1, 0), (0, 1))))


def test_bkk_examples(big_triangle, octahedron, segment):
    assert bkk_euler(big_triangle) == -9
    assert bkk_euler(octahedron) == 8
    assert bkk_euler(segment) == 2
    assert bkk_euler(LatticePolytope(CUBE)) == 48


def test_polygon_corpus_is_complete():
    classes = reflexive_polygons()
    assert len(classes) == 16
    keys = [canonical_form(d.polytope().vertices) for d in POLYGONS]
    assert len(set(keys)) == len(keys) == 16
    assert set(keys) == set(classes)


@pytest.mark.parametrize("doc", POLYGONS, ids=lambda d: d.name)
def test_polygon_betti_matches_curve_formula(doc):
    p = doc.polytope()
    _, boundary = lattice_points(p)
    betti = homology_q(build_complex(p)).betti
    assert betti == dk_curve_betti(p) == (1, boundary + 1)


@pytest.mark.parametrize("doc", CORPUS, ids=lambda d: d.name)
def test_verify_passes_on_corpus(doc):
    rep = verify(doc.polytope(), doc.name)
    assert rep.passed, rep.to_dict()
    names = [c.name for c in rep.checks]
    assert "euler_vs_volume" in names and "boundary_squared_zero" in names
    assert ("curve_betti" in names) == (doc.polytope().ambient_rank == 2)


@pytest.mark.parametrize("doc", POLYTOPES3D, ids=lambda d: d.name)
def test_euler_three_dimensional(doc):
    p = doc.polytope()
    assert euler_characteristic(build_complex(p)) == bkk_euler(p)


def test_verify_big_triangle(big_triangle):
    rep = verify(big_triangle, "triangle")
    assert rep.status == "pass"
    by_name = {c.name: c for c in rep.checks}
    assert by_name["curve_betti"].computed == [1, 10]
    assert by_name["euler_vs_volume"].computed == -9
    assert by_name["b0_equals_1"].expectation


def test_segment_has_no_b0_expectation(segment):
    rep = verify(segment)
    assert rep.passed
    assert "b0_equals_1" not in {c.name for c in rep.checks}


def test_failures_are_recorded_not_raised(big_triangle):
    c = build_complex(big_triangle)
    q = homology_q(c)
    q.euler = 0
    rep = verify(big_triangle, complex_=c, report_q=q)
    assert rep.status == "fail"
    assert [c.name for c in rep.checks if not c.passed] == ["euler_vs_volume"]


def test_expectation_does_not_fail_report():
    rep = VerificationReport("x", [Check("a", 1, 1, True), Check("b", 1, 2, False, expectation=True)])
    assert rep.passed
    rep.checks.append(Check("c", 0, 1, False))
    assert not rep.passed


def test_report_round_trip(octahedron):
    rep = verify(octahedron, "octahedron")
    again = VerificationReport.from_dict(rep.to_dict())
    assert again == rep
    assert again.to_dict()["status"] == "pass"
