import json
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from canonlab import corpus
from canonlab.curve import (
    INF,
    Subcurve,
    arithmetic_genus,
    check_valid,
    connected_splits,
    connectivity,
    curve_from_dict,
    curve_to_dict,
    decompose,
    dump_curve,
    load_curve,
    numerical_connectivity,
    parse_scalar,
    relabel,
    reparametrize,
    subsets,
    swap_branches,
    validate,
)
from canonlab.errors import (
    DanglingBranch,
    Disconnected,
    DuplicateBranch,
    EmptySide,
    InvalidCurve,
    TooManyComponents,
)

from conftest import make_curve


def test_minimal_gluing_valid():
    c = make_curve(["C1", "C2"], [("n1", "C1", Fraction(0), "C2", Fraction(0))])
    assert validate(c) == []
    assert arithmetic_genus(c) == 0


def test_disconnected():
    c = make_curve(["C1", "C2"], [])
    problems = validate(c)
    assert len(problems) == 1 and isinstance(problems[0], Disconnected)
    with pytest.raises(InvalidCurve):
        check_valid(c)


def test_duplicate_branch():
    c = make_curve(["C1"], [("n1", "C1", Fraction(0), "C1", Fraction(1)),
                            ("n2", "C1", Fraction(0), "C1", Fraction(2))])
    assert any(isinstance(p, DuplicateBranch) for p in validate(c))


def test_dangling_branch():
    c = make_curve(["C1"], [("n1", "C1", Fraction(0), "C9", Fraction(1))])
    assert any(isinstance(p, DanglingBranch) for p in validate(c))


def test_invalid_curve_reports_all():
    c = make_curve(["C1"], [("n1", "C1", Fraction(0), "C9", Fraction(1)),
                            ("n2", "C1", Fraction(0), "C1", Fraction(3))])
    with pytest.raises(InvalidCurve) as exc:
        check_valid(c)
    assert len(exc.value.violations) == 2


def test_scalars():
    assert parse_scalar("3/6") == Fraction(1, 2)
    assert parse_scalar("inf") is INF
    assert parse_scalar(4) == 4
    with pytest.raises(TypeError):
        parse_scalar(0.5)


@pytest.mark.parametrize("g", range(0, 9))
def test_binary_genus(g):
    c = corpus.binary(g)
    assert len(c.components) == 2 and len(c.nodes) == g + 1 and c.genus == g


def test_smooth_rational_genus():
    assert make_curve(["C"], []).genus == 0


def test_four_component_genus_formula():
    for genera in [(0, 0, 0, 0), (1, 0, 0, 0), (1, 1, 1, 1), (2, 0, 1, 0)]:
        assert corpus.four_component(genera).genus == sum(genera) + 3


def test_decompose_deltas():
    assert decompose(corpus.binary(3), ["C1"]).delta == 4
    assert decompose(corpus.four_component((1, 0, 0, 0)), ["X1"]).delta == 3
    ch = corpus.chain(3, 1)
    assert decompose(ch, ["C2"]).delta == 2
    with pytest.raises(EmptySide):
        decompose(ch, [])
    with pytest.raises(EmptySide):
        decompose(ch, ch.component_ids)


def test_connectivity_examples(two_node_curve):
    assert connectivity(corpus.binary(3))[0] == 4
    m, split = connectivity(two_node_curve)
    assert m == 2 and split.delta == 2
    assert connectivity(corpus.four_component((1, 0, 0, 0)))[0] == 3
    assert connectivity(make_curve(["C"], []))[0] == math.inf


def test_numerical_connectivity_examples(two_node_curve):
    assert numerical_connectivity(corpus.binary(3)) == 4
    assert numerical_connectivity(two_node_curve) == 2


@pytest.mark.parametrize("spec", corpus.default_corpus())
def test_numerical_equals_connectivity(spec):
    for c in corpus.generate(spec):
        assert numerical_connectivity(c) == connectivity(c)[0]


def test_enumeration_bound():
    c = corpus.random_stable(5, 10, seed=1)
    with pytest.raises(TooManyComponents):
        connectivity(c, bound=4)


def test_subsets_order_and_connected_splits():
    c = corpus.four_component((0, 0, 0, 0))
    sizes = [len(ids) for ids, _ in subsets(c)]
    assert sizes == sorted(sizes) and len(sizes) == 15
    splits = connected_splits(c)
    assert len(splits) == 14  # every proper subset of K4 and its complement are connected
    assert all(d.u_connected and d.v_connected for d in splits)


def test_subcurve_services():
    c = corpus.four_component((1, 0, 0, 0))
    Z = Subcurve(c, {"X2", "X3", "X4"})
    assert Z.genus == 1 and len(Z.internal_nodes) == 3 and len(Z.boundary_nodes) == 3
    assert Z.complement().components == ("X1",)
    assert Z.to_curve().genus == 1


def test_json_round_trip(tmp_path):
    c = corpus.four_component((1, 1, 0, 0), seed=3)
    path = tmp_path / "c.json"
    dump_curve(c, path)
    assert load_curve(path) == c
    assert curve_from_dict(json.loads(json.dumps(curve_to_dict(c)))).fingerprint() == c.fingerprint()


def test_auto_params_deterministic():
    data = {"seed": 5, "components": [{"id": "A"}, {"id": "B"}],
            "nodes": [{"a": {"comp": "A"}, "b": {"comp": "B"}} for _ in range(4)]}
    c1, c2 = curve_from_dict(data), curve_from_dict(data)
    assert c1 == c2 and validate(c1) == [] and c1.genus == 3


def test_infinity_params_round_trip():
    data = {"components": [{"id": "A"}, {"id": "B"}],
            "nodes": [{"a": {"comp": "A", "t": "inf"}, "b": {"comp": "B", "t": "1/2"}},
                      {"a": {"comp": "A", "t": 0}, "b": {"comp": "B", "t": "inf"}}]}
    c = check_valid(curve_from_dict(data))
    assert curve_to_dict(c)["nodes"][0]["a"]["t"] == "inf"


@given(st.integers(0, 4), st.sampled_from([(1, 0, 0, 1), (0, 1, 1, 0), (2, 1, 1, 1), (1, 3, 0, 1)]))
def test_genus_and_connectivity_invariant_under_transforms(seed, coeffs):
    c = corpus.four_component((1, 0, 0, 0), seed=seed)
    moved = check_valid(reparametrize(c, "X2", coeffs))
    assert moved.genus == c.genus
    assert connectivity(moved)[0] == connectivity(c)[0]
    renamed = check_valid(relabel(c, {"X1": "Z9", "X2": "A0"}))
    assert renamed.genus == c.genus and connectivity(renamed)[0] == 3
    swapped = check_valid(swap_branches(c, "p12"))
    assert swapped.genus == c.genus


@given(st.integers(0, 20))
def test_genus_additivity(seed):
    c = corpus.random_stable(4, 8, seed=seed)
    for d in connected_splits(c):
        assert c.genus == d.U.genus + d.V.genus + d.delta - 1
