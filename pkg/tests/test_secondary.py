import pytest

from plumbdga.dga import check_d_squared, check_grading
from plumbdga.pipeline import Pipeline, PipelineError
from plumbdga.secondary import (CASE1_FORM, DEGREES, build_secondary_quad, run_destab_script)


@pytest.mark.parametrize("case", [1, 2, 3])
def test_quads_are_dgas(case):
    P = build_secondary_quad(case)
    assert check_d_squared(P).ok
    assert check_grading(P).ok
    assert {n: P.alphabet[n].degree for n in "pqrs"} == DEGREES


def test_unknown_case():
    with pytest.raises(ValueError):
        build_secondary_quad(4)


@pytest.mark.parametrize("case,autos", [(1, 3), (2, 6), (3, 5)])
def test_scripts_cancel_every_pair(case, autos):
    res = run_destab_script(case)
    assert res.pipeline.automorphism_count == autos
    assert res.pipeline.destabilization_count == 2
    assert not set("pqrs") & set(res.final.free_generators())
    assert all(s.d_squared for s in res.log)


@pytest.mark.parametrize("case", [2, 3])
def test_ambient_differentials_untouched(case):
    start = build_secondary_quad(case)
    end = run_destab_script(case).final
    for n in end.free_generators():
        assert str(end.differential(n)) == str(start.differential(n))


def test_case1_form_reached_from_case3():
    pipe = Pipeline(build_secondary_quad(3))
    pipe.substitute("p", "p - r zeta'")
    pipe.substitute("q", "q + s zeta'")
    pipe.expect(CASE1_FORM, "case 3")


def test_wrong_sign_is_caught_with_step_number():
    pipe = Pipeline(build_secondary_quad(3))
    pipe.substitute("p", "p + r zeta'")
    with pytest.raises(PipelineError) as err:
        pipe.expect(CASE1_FORM, "case 3")
    assert err.value.step == 1
    assert err.value.residue


def test_destabilizing_too_early_fails():
    pipe = Pipeline(build_secondary_quad(1))
    with pytest.raises(PipelineError) as err:
        pipe.destabilize("p", "q")
    assert err.value.step == 1


def test_step_records_serialize():
    res = run_destab_script(1)
    first = res.log[0].to_dict()
    assert first == {"index": 1, "kind": "automorphism", "description": res.log[0].description,
                     "d_squared": True, "round_trip": True}
    assert res.log[-1].to_dict()["kind"] == "destabilize"
