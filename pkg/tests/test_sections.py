from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from canonlab import corpus
from canonlab.curve import INF, BranchPoint, Subcurve, mobius, reparametrize
from canonlab.errors import InvalidBundle, PoleAtPoint, TwistOnNode, ZeroSpace
from canonlab.geometry import sample_points
from canonlab.sections import (
    BundleSpec,
    TwistDivisor,
    basis_from_dict,
    bundle_from_dict,
    canonical_bundle,
    evaluate,
    global_generation_check,
    h1_by_duality,
    restrict_bundle,
    restriction_map,
    sections_basis,
)

from conftest import make_curve

CURVES = [corpus.binary(3), corpus.binary(5, seed=2), corpus.four_component((1, 0, 0, 0)),
          corpus.chain(2, 3, (1, 1)), corpus.random_stable(3, 7, seed=4)]


@pytest.mark.parametrize("curve", CURVES, ids=lambda c: c.name)
def test_omega_dimensions(curve):
    g = curve.genus
    b = sections_basis(canonical_bundle(curve))
    assert b.h0 == g and b.h1 == 1 and b.degree == 2 * g - 2
    for k in (2, 3):
        assert sections_basis(canonical_bundle(curve, k)).h0 == (2 * k - 1) * (g - 1)


def test_binary_three_h0():
    b = sections_basis(canonical_bundle(corpus.binary(3)))
    assert b.h0 == 3 and b.h1 == 1 and h1_by_duality(b.bundle) == 1


def test_restrict_bundle_degrees():
    X = corpus.binary(3)
    L = restrict_bundle(X, ["C1"], 1)
    assert L.degree == 2 and L.twist.degree == 4
    X4 = corpus.four_component((1, 0, 0, 0))
    L2 = restrict_bundle(X4, ["X2", "X3", "X4"], 2)
    assert L2.twist.degree == 2 * 3 and L2.k == 2


def test_twist_errors():
    X = corpus.binary(3)
    node_pt = X.nodes[0].branch_a
    with pytest.raises(TwistOnNode):
        restrict_bundle(X, ["C1"], 1, TwistDivisor(((node_pt, 1),)))
    with pytest.raises(InvalidBundle):
        BundleSpec(X.full(), 1, TwistDivisor(((node_pt, 1),)))
    with pytest.raises(InvalidBundle):
        BundleSpec(X.subcurve(["C1"]), 1, TwistDivisor(((BranchPoint("C2", Fraction(99)), 1),)))


def test_twist_divisor_algebra():
    p, q = BranchPoint("C1", Fraction(5)), BranchPoint("C2", INF)
    E = TwistDivisor(((p, 1), (q, 2), (p, 1)))
    assert E.degree == 4 and E.is_effective
    assert (E - E).entries == ()
    assert (-E).degree == -4 and not (-E).is_effective
    assert TwistDivisor.from_list(E.to_list()) == E
    assert E.scaled(3).degree == 12


@pytest.mark.parametrize("curve", CURVES[:3], ids=lambda c: c.name)
def test_omega_twisted_by_two_points(curve):
    pts = sample_points(curve, 2, seed=1, salt="t")
    b = sections_basis(canonical_bundle(curve).with_twist(TwistDivisor.from_points(pts)))
    assert b.h0 == curve.genus + 1 and b.h1 == 0


def test_restriction_examples():
    X = corpus.binary(3)
    assert restriction_map(X, X.component_ids, 1).rank == 3
    rho = restriction_map(X, ["C1"], 1)
    assert rho.rank == 3 and rho.codomain_dim == 3 and rho.is_surjective
    X4 = corpus.four_component((1, 0, 0, 0))
    rho2 = restriction_map(X4, ["X2", "X3", "X4"], 2)
    assert rho2.is_surjective


def test_residue_frame_value():
    # C1 carries nodes at t = 0 and t = 1; omega has the constant numerator c on C1
    X = make_curve(["C1", "C2"], [("m", "C1", Fraction(0), "C2", Fraction(0)),
                                   ("n", "C1", Fraction(1), "C2", Fraction(1))])
    b = sections_basis(canonical_bundle(X))
    assert b.h0 == 1
    s = b.section(0)
    c = Fraction(s.numerators["C1"][0])
    m = X.node_by_id["m"]
    assert evaluate(s, node=m, side="a") == -c  # c / (t - 1) at t = 0
    assert evaluate(s, node=X.node_by_id["n"], side="a") == c


def test_evaluate_errors_and_zero():
    X = corpus.binary(3)
    s = sections_basis(canonical_bundle(X)).section(0)
    br = X.nodes[0].branch_a
    with pytest.raises(PoleAtPoint):
        evaluate(s, point=(br.component_id, br.param))
    zero = sections_basis(canonical_bundle(X)).section(0).__class__(
        s.bundle, {cid: [0] * n for cid, (_, n) in s.bundle.layout.items()})
    assert evaluate(zero, point=("C1", "1/7")) == 0


def _residues_vanish(curve):
    b = sections_basis(canonical_bundle(curve))
    for s in b.sections:
        for cid in curve.component_ids:
            total = Fraction(0)
            for n in curve.nodes:
                for side, br in (("a", n.branch_a), ("b", n.branch_b)):
                    if br.component_id == cid:
                        total += evaluate(s, node=n, side=side)
            assert total == 0
        for n in curve.nodes:
            assert evaluate(s, node=n, side="a") + evaluate(s, node=n, side="b") == 0


@pytest.mark.parametrize("curve", CURVES, ids=lambda c: c.name)
def test_residue_theorem(curve):
    _residues_vanish(curve)


MOBIUS = st.sampled_from([(0, 1, 1, 0), (1, 1, 0, 1), (2, -1, 1, 1), (1, 0, 3, 1), (0, -1, 1, 2)])


@given(MOBIUS, st.sampled_from(["C1", "C2"]), st.integers(1, 3))
def test_mobius_invariance(coeffs, cid, k):
    X = corpus.binary(4, seed=3)
    pts = [BranchPoint("C1", Fraction(37)), BranchPoint("C2", Fraction(-29))]
    E = TwistDivisor(((pts[0], 1), (pts[1], 2)))
    Y = reparametrize(X, cid, coeffs)
    moved = TwistDivisor(tuple(
        (BranchPoint(p.component_id, mobius(p.param, *coeffs) if p.component_id == cid else p.param), m)
        for p, m in E.entries))
    for tw_x, tw_y in ((TwistDivisor(), TwistDivisor()), (E, moved), (-E, -moved)):
        hx = sections_basis(canonical_bundle(X, k).with_twist(tw_x)).h0
        hy = sections_basis(canonical_bundle(Y, k).with_twist(tw_y)).h0
        assert hx == hy
    _residues_vanish(Y)


def _random_bundle(draw_seed):
    import random

    rng = random.Random(draw_seed)
    curve = [corpus.binary(rng.randint(2, 5), seed=draw_seed), corpus.four_component((1, 0, 0, 0)),
             corpus.random_stable(3, 6, seed=draw_seed)][draw_seed % 3]
    ids = list(curve.component_ids)
    Z = Subcurve(curve, frozenset(ids[:rng.randint(1, len(ids))]))
    k = rng.randint(-1, 3)
    pts = sample_points(curve, rng.randint(0, 3), seed=draw_seed, salt="rr", component_ids=Z.components)
    twist = TwistDivisor(tuple((p, rng.choice([-2, -1, 1, 2])) for p in pts))
    return BundleSpec(Z, k, twist)


@given(st.integers(0, 10 ** 6))
def test_riemann_roch_by_duality(seed):
    L = _random_bundle(seed)
    b = sections_basis(L)
    assert b.h0 - h1_by_duality(L) == L.degree + 1 - L.Z.genus


def test_lone_component_degree_zero():
    X = make_curve(["C"], [])
    E = TwistDivisor.from_points([BranchPoint("C", Fraction(0)), BranchPoint("C", Fraction(1))])
    b = sections_basis(BundleSpec(X.full(), 1, E))
    assert b.h0 == 1 and global_generation_check(b).generated


def test_base_locus_of_omega_minus_point():
    X = corpus.binary(3)
    p = BranchPoint("C1", Fraction(7))
    b = sections_basis(canonical_bundle(X).with_twist(TwistDivisor(((p, -1),))))
    assert b.h0 == 2
    # the pencil of canonical sections through p is generated unless p is special
    locus = global_generation_check(b)
    full = sections_basis(canonical_bundle(X))
    assert global_generation_check(full).generated
    assert isinstance(locus.generated, bool)


def test_base_locus_detects_forced_zero():
    X = corpus.binary(3)
    p = BranchPoint("C1", Fraction(7))
    # omega(p) has a base point at p: every section comes from omega
    b = sections_basis(canonical_bundle(X).with_twist(TwistDivisor(((p, 1),))))
    assert b.h0 == 3
    locus = global_generation_check(b)
    assert not locus.generated
    assert ["7", 1] in locus.components["C1"]["special_points"]


def test_zero_space():
    X = corpus.binary(3)
    b = sections_basis(BundleSpec(X.subcurve(["C1"]), 1))
    assert b.h0 == 0
    with pytest.raises(ZeroSpace):
        global_generation_check(b)


def test_basis_json_round_trip():
    X = corpus.four_component((1, 0, 0, 0))
    b = sections_basis(restrict_bundle(X, ["X1", "X2"], 2))
    back = basis_from_dict(X, b.to_dict())
    assert back.vectors == b.vectors and back.bundle == b.bundle
    assert bundle_from_dict(X, b.bundle.to_dict()) == b.bundle


def test_coordinates_round_trip():
    X = corpus.binary(4)
    b = sections_basis(canonical_bundle(X, 2))
    v = [sum(c * x for c, x in zip((1, -2, 3), col)) for col in zip(*b.vectors[:3])]
    coords = b.coordinates(v)
    assert coords[:3] == [1, -2, 3] and not any(coords[3:])


@pytest.mark.parametrize("k", [2, 3])
def test_restrict_then_power_commutes(k):
    X = corpus.four_component((1, 0, 0, 0))
    Z = ["X2", "X3", "X4"]
    a = restrict_bundle(X, Z, k)
    b = restrict_bundle(X, Z, 1).power(k)
    assert a.degree == b.degree
    assert sections_basis(a).h0 == sections_basis(b).h0
