from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from canonlab import _poly, linalg
from canonlab.linalg import Echelon, LinearMap, nullspace, rank, rref

small = st.integers(-6, 6)


def matrices(max_rows=6, max_cols=6):
    return st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=1, max_size=max_rows))


def test_rank_basic():
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[1, 0], [0, 1], [1, 1]]) == 2
    assert rank([[0, 0, 0]]) == 0
    assert rank([]) == 0


def test_rank_fractions():
    rows = [[Fraction(1, 2), Fraction(1, 3)], [3, 2]]
    assert rank(rows) == 1


def test_primitive_rows():
    assert linalg.primitive([4, -6, 8]) == [2, -3, 4]
    assert linalg.integer_row([Fraction(1, 2), Fraction(1, 3)]) == [3, 2]


def test_echelon_contains():
    ech = Echelon(3)
    assert ech.add([1, 1, 0])
    assert ech.add([0, 1, 1])
    assert not ech.add([1, 2, 1])
    assert ech.contains([2, 3, 1])
    assert not ech.contains([0, 0, 1])
    assert ech.rank == 2


def test_rref_pivots():
    red, piv = rref([[2, 4, 2], [1, 2, 3]], 3)
    assert piv == [0, 2]


@given(matrices())
def test_rank_nullity(rows):
    n = len(rows[0])
    basis, free = nullspace(rows, n)
    assert rank(rows) + len(basis) == n
    for v in basis:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
        assert all(isinstance(x, int) for x in v)


@given(matrices())
def test_nullspace_free_columns(rows):
    n = len(rows[0])
    basis, free = nullspace(rows, n)
    for j, v in enumerate(basis):
        assert v[free[j]] != 0
        assert all(v[f] == 0 for i, f in enumerate(free) if i != j)


@given(matrices(), st.integers(-3, 3), st.integers(-3, 3))
def test_rank_invariant_under_row_ops(rows, a, b):
    if len(rows) >= 2:
        mixed = rows + [[a * x + b * y for x, y in zip(rows[0], rows[1])]]
        assert rank(mixed) == rank(rows)


def test_linear_map_dims():
    m = LinearMap(3, 2, [[1, 0], [0, 1], [1, 1]], "mu")
    assert m.rank == 2 and m.corank == 0 and m.kernel_dim == 1 and m.is_surjective
    assert m.matrix == [[1, 0, 1], [0, 1, 1]]
    assert m.summary()["provenance"] == "mu"


def test_modp_audit(monkeypatch):
    monkeypatch.setenv("CANONLAB_MODP", "1048583")
    linalg.MODP_AUDIT.reset()
    assert rank([[1, 2, 3], [2, 4, 7], [0, 0, 5]]) == 2
    s = linalg.MODP_AUDIT.summary()
    assert s["prime"] == 1048583 and s["checked"] == 1 and s["mismatches"] == 0


def test_modp_rejects_composite(monkeypatch):
    monkeypatch.setenv("CANONLAB_MODP", "1048584")
    with pytest.raises(ValueError):
        linalg.modp_prime()


def test_modp_unlucky_prime_recorded(monkeypatch):
    monkeypatch.setenv("CANONLAB_MODP", "7")
    linalg.MODP_AUDIT.reset()
    assert rank([[1, 0], [0, 7]]) == 2
    assert linalg.MODP_AUDIT.summary()["mismatches"] == 1


# ------------------------------------------------------------------ polynomials


def test_poly_gcd():
    a = _poly.mul([-1, 1], [-2, 1])  # (t-1)(t-2)
    b = _poly.mul([-1, 1], [3, 1])  # (t-1)(t+3)
    assert _poly.gcd(a, b) == [-1, 1]
    assert _poly.gcd([2, 4], [3]) == [1]
    assert _poly.gcd([], [2, 2]) == [1, 1]


@given(st.lists(small, min_size=1, max_size=4), st.lists(small, min_size=1, max_size=4),
       st.lists(small, min_size=1, max_size=3))
def test_poly_gcd_divides(p, q, common):
    common = _poly.trim(common)
    if not common:
        return
    a, b = _poly.mul(p, common), _poly.mul(q, common)
    if not _poly.trim(a) or not _poly.trim(b):
        return
    g = _poly.gcd(a, b)
    for f in (a, b):
        _, r = _poly.divmod_poly(f, g)
        assert not r
    _, r = _poly.divmod_poly(g, _poly.monic(common))
    assert not r


def test_root_multiplicity_and_taylor():
    p = _poly.mul(_poly.mul([-2, 1], [-2, 1]), [1, 1])
    assert _poly.root_multiplicity(p, Fraction(2)) == 2
    assert _poly.root_multiplicity(p, Fraction(0)) == 0
    assert _poly.taylor([1, 2, 3], 1, 3) == [6, 8, 3]


def test_binomial_series_negative_power():
    # (1 + x)^-2 = 1 - 2x + 3x^2 - 4x^3
    assert _poly.binomial_series(1, -2, 4) == [1, -2, 3, -4]
    assert _poly.series_mul([1, 1], [1, -1, 1, -1], 4) == [1, 0, 0, 0]
