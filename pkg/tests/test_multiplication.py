from fractions import Fraction

import pytest

from canonlab import corpus
from canonlab.curve import BranchPoint
from canonlab.errors import BundleMismatch, GenusTooSmall, NotAPencil, NotGloballyGenerated
from canonlab.geometry import simple_secant_search
from canonlab.multiplication import (
    bpf_pencil_check,
    franciosi_gate,
    k_normality,
    mult_map,
    power_report,
    quadric_count,
)
from canonlab.sections import BundleSpec, TwistDivisor, canonical_bundle, restrict_bundle, sections_basis

from conftest import make_curve


def test_mu_omega_binary_three():
    X = corpus.binary(3)
    w = sections_basis(canonical_bundle(X))
    mu = mult_map(w, w)
    assert (mu.domain_dim, mu.codomain_dim, mu.corank) == (9, 6, 0)
    assert mu.kernel_dim == 3  # the antisymmetric tensors


@pytest.mark.parametrize("g", [3, 4, 5, 6])
def test_quadric_count(g):
    w = sections_basis(canonical_bundle(corpus.binary(g)))
    assert quadric_count(w) == (g - 2) * (g - 3) // 2


def test_trivial_bundle_is_identity():
    X = corpus.binary(4)
    w = sections_basis(canonical_bundle(X, 2))
    O = sections_basis(BundleSpec(X.full(), 0))
    assert O.h0 == 1
    mu = mult_map(w, O)
    assert mu.rank == w.h0 and mu.kernel_dim == 0 and mu.corank == 0


def test_mismatched_supports():
    X = corpus.four_component((1, 0, 0, 0))
    a = sections_basis(restrict_bundle(X, ["X1", "X2"], 2))
    b = sections_basis(restrict_bundle(X, ["X1", "X3"], 2))
    with pytest.raises(BundleMismatch):
        mult_map(a, b)


def test_power_report_binary():
    rep = k_normality(corpus.binary(4), 4)
    assert rep.projectively_normal and rep.k_max == 4
    assert [s.target_h0 for s in rep.stages] == [4, 9, 15, 21]
    d = rep.to_dict()
    assert d["stages"][1]["mu_domain_dim"] == 16


def test_power_report_detects_failure(two_node_curve):
    # omega on a curve that is only 2-connected is not normally generated
    rep = k_normality(two_node_curve, 2)
    assert rep.corank(2) > 0 and not rep.k_normally_generated(2)


def test_genus_too_small():
    E = make_curve(["A", "B"], [("m", "A", Fraction(0), "B", Fraction(0)),
                                 ("n", "A", Fraction(1), "B", Fraction(1))])
    with pytest.raises(GenusTooSmall):
        k_normality(E, 2)


def _secant_pencil(X):
    w = sections_basis(canonical_bundle(X))
    found = simple_secant_search(X, 50, 0, w)
    assert found.found
    return w, sections_basis(w.bundle.with_twist(-found.candidate.divisor()))


def test_pencil_trick():
    X = corpus.binary(4)
    w, M = _secant_pencil(X)
    rep = bpf_pencil_check(w, M)
    assert rep.identity_holds and rep.kernel_dim == 1 and rep.holds
    w2 = sections_basis(canonical_bundle(X, 2))
    rep2 = bpf_pencil_check(w2, M)
    assert rep2.identity_holds and rep2.corank == 0


def test_pencil_errors():
    X = corpus.binary(4)
    w, M = _secant_pencil(X)
    with pytest.raises(NotAPencil):
        bpf_pencil_check(w, w)
    q = BranchPoint("C2", Fraction(1001, 13))
    with_base = sections_basis(M.bundle.with_twist(TwistDivisor(((q, 1),))))
    assert with_base.h0 == 2
    with pytest.raises(NotGloballyGenerated):
        bpf_pencil_check(w, with_base)


def test_gate():
    X = corpus.four_component((1, 0, 0, 0))
    gate = franciosi_gate(canonical_bundle(X))
    assert not gate.passed and set(gate.failing_subcurve) == set(X.component_ids)
    restricted = franciosi_gate(restrict_bundle(X, ["X2", "X3", "X4"], 1))
    assert restricted.passed and restricted.checked > 0
    assert franciosi_gate(canonical_bundle(X, 2)).passed


def test_graph_curves():
    from canonlab.curve import connectivity

    seen = set()
    for G in corpus.all_cubic_graphs(8):
        X = corpus.graph_curve(G)
        m, _ = connectivity(X)
        rep = k_normality(X, 3)
        seen.add(m)
        if m >= 3:
            assert rep.projectively_normal
        else:
            # the two-triangle graph on 8 vertices is only 2-connected
            assert rep.corank(2) > 0
    assert seen == {2, 3}
