import pytest

from conftest import corpus_text
from germcodim import Options, Parametrization, ProblemInstance, parse_instance, run


def test_cusp_outcome():
    out = run(parse_instance(corpus_text("cusp.germ")))
    assert (out.exit_code, out.classification, out.record.get("ae_codim")) == (0, "singular-finite", 1)
    assert out.ci is not None and out.cotangent is not None


@pytest.mark.parametrize("stage, present, absent", [
    ("check", "delta", "m1"),
    ("invariants", "m1", "ae_codim"),
    ("codim", "ae_codim", "t1_xbar_minus_x_dim"),
    ("verify", "t1_xbar_minus_x_dim", None),
])
def test_stages_stop_where_asked(stage, present, absent):
    out = run(parse_instance(corpus_text("tacnode.germ")), stage)
    assert out.exit_code == 0
    assert present in out.record.values
    if absent:
        assert absent not in out.record.values


def test_classification_uses_invariants_not_coordinates():
    # a node written with curved branches
    phi = Parametrization.from_terms([[{1: 1}, {2: 1}], [{1: 1, 3: 2}, {1: 1}]])
    out = run(ProblemInstance(phi))
    assert out.classification == "ordinary-node"
    assert out.record.get("ae_codim") == 0
    assert run(ProblemInstance(Parametrization.monomial((1, 5, 7)))).classification == "smooth"


def test_unknown_stage():
    with pytest.raises(ValueError):
        run(parse_instance(corpus_text("cusp.germ")), "everything")


def test_small_ceiling_is_undetermined():
    out = run(parse_instance(corpus_text("perturbed46.germ"), Options(trunc_start=8, trunc_max=16)))
    assert out.exit_code == 3
    assert out.classification == "undetermined"


def test_non_complete_intersection_ideal_is_reported_not_applicable():
    text = corpus_text("monomial345.germ") + "ideal: g1 = x2^2 - x1 x3\nideal: g2 = x1^3 - x2 x3\nideal: g3 = x3^2 - x1^2 x2\n"
    out = run(parse_instance(text))
    assert out.exit_code == 0
    assert out.record.status["tjurina"] == "not-applicable"
    assert any("complete intersections" in d for d in out.diagnostics)


def test_wrong_ideal_is_exit_1():
    text = corpus_text("monomial345.germ") + "ideal: g1 = x2 - x1\nideal: g2 = x3\n"
    out = run(parse_instance(text))
    assert out.exit_code == 1
