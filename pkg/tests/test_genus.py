import pytest

from plumbdga.dga import check_d_squared
from plumbdga.genus import (build_ce_raw_genus, expected_commutator_product, genus_reduction,
                            reduce_graph_genus, relabel_images)
from plumbdga.plumbing import build_ce

from conftest import CORPUS


def test_raw_genus_one():
    P = build_ce_raw_genus(1)
    assert P.differential("tau1") == P.el("e1 - t1 x1,1 x1,4")
    assert P.differential("xi1,1") == P.el("x1,2 x1,3 - z1,2 x1,1")
    assert P.differential("xi1,4") == P.el("e1 - z1,1 x1,4")
    assert check_d_squared(P).ok


def test_raw_genus_two():
    P = build_ce_raw_genus(2)
    assert P.differential("tau1") == P.el("e1 - t1 x1,1")
    assert P.differential("xi1,1") == P.el("- z1,2 x1,1 + x1,2 x1,3 x1,4")
    assert P.differential("xi1,4") == P.el("e1 - x1,5 x1,8 z1,1 x1,4")
    assert P.differential("xi1,8") == P.el("e1 - z1,3 x1,8")
    assert len(P.free_generators()) == 17
    assert check_d_squared(P).ok


def test_commutator_products():
    P = build_ce_raw_genus(1)
    assert expected_commutator_product(P.alphabet, 1, 1) == P.el("z1,2^-1 z1,1 z1,2 z1,1^-1")
    Q = build_ce_raw_genus(2)
    assert expected_commutator_product(Q.alphabet, 1, 2) == Q.el(
        "z1,2^-1 z1,1 z1,2 z1,1^-1 z1,3 z1,4^-1 z1,3^-1 z1,4")


def test_relabeling_images():
    P = build_ce(CORPUS["genus2"])
    images = relabel_images(P.alphabet, 1, 2)
    assert images["z1,2"] == P.el("alpha1,1^-1")
    assert images["z1,1"] == P.el("beta1,1")
    assert images["z1,3"] == P.el("alpha1,2")
    assert images["z1,4"] == P.el("beta1,2^-1")


@pytest.mark.parametrize("g,autos,destabs", [(1, 7, 4), (2, 13, 8), (3, 19, 12), (4, 25, 16)])
def test_single_vertex_reduction(g, autos, destabs):
    res = genus_reduction(g)
    assert res.ok, res.report
    assert res.pipeline.automorphism_count == autos
    assert res.pipeline.destabilization_count == destabs
    assert all(s.d_squared for s in res.log)
    assert all(s.round_trip for s in res.log if s.kind == "automorphism")


def test_first_steps_of_genus_two_script():
    log = genus_reduction(2).log
    assert log[0].description == "x1,8 -> z1,3^-1 + z1,3^-1 x1,8"
    assert log[1].description == "x1,7 -> x1,7 + z1,4"


def test_reduced_matches_direct_model():
    res = genus_reduction(2)
    assert res.relabeled == build_ce(CORPUS["genus2"])


@pytest.mark.parametrize("name", ["genus1", "A2_genus11", "A2_loop_genus21", "C3_mixed"])
def test_graph_reduction(name):
    res = reduce_graph_genus(CORPUS[name])
    assert res.ok, res.report


def test_reduction_without_step_checks_agrees():
    assert genus_reduction(2, check_each_step=False).relabeled == genus_reduction(2).relabeled
