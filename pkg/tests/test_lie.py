import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from equicoh import exactalg as ea
from equicoh.exactalg import Matrix
from equicoh.lie import (NotRegularError, TorusChart, centralizer_basis, chi, identity_group, is_regular,
                         kostant_point, principal_triple, shift, sym_power_rep, uniform_diagonalizer,
                         weyl_orbits)
from equicoh.symbolic import RationalFunction, Ring


def test_principal_triple_sl2():
    ctx = principal_triple(2)
    assert ctx.e.to_rows() == [[0, 1], [0, 0]]
    assert ctx.f.to_rows() == [[0, 0], [1, 0]]
    assert ctx.h == Matrix.diag([1, -1])


def test_principal_triple_sl3_f():
    assert principal_triple(3).f.to_rows() == [[0, 0, 0], [2, 0, 0], [0, 2, 0]]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_triple_brackets(n):
    ctx = principal_triple(n)
    assert ea.commutator(ctx.h, ctx.e) == 2 * ctx.e
    assert ea.commutator(ctx.h, ctx.f) == -2 * ctx.f
    assert ea.commutator(ctx.e, ctx.f) == ctx.h
    assert ctx.e == shift(n)
    assert ctx.h == Matrix.diag([n - 1 - 2 * i for i in range(n)])


def test_principal_triple_rejects_small_n():
    with pytest.raises(ValueError):
        principal_triple(1)


def test_centralizer_basis_sl3():
    sec = centralizer_basis(principal_triple(3))
    assert [b.to_rows() for b in sec.basis] == [[[0, 0, 0], [1, 0, 0], [0, 1, 0]],
                                                 [[0, 0, 0], [0, 0, 0], [1, 0, 0]]]
    r = Ring(["c2", "c3"])
    c2, c3 = r.gens()
    pt = kostant_point(sec, [c2, c3])
    assert pt.to_rows() == [[0, 1, 0], [c2, 0, 1], [c3, c2, 0]]


def test_centralizer_basis_sl2():
    sec = centralizer_basis(2)
    assert [b.to_rows() for b in sec.basis] == [[[0, 0], [1, 0]]]


def test_centralizer_basis_commutes_with_f():
    ctx = principal_triple(4)
    sec = centralizer_basis(ctx)
    assert len(sec.basis) == 3
    for b in sec.basis:
        assert ea.commutator(ctx.f, b).is_zero()


def test_chi_examples():
    r = Ring(["t"])
    t = r.gen("t")
    assert chi(Matrix.diag([t, -t])) == [t ** 2]
    assert chi(Matrix.zeros(3)) == [0, 0]
    # char poly of e + diag(1,0,-1) is x^3 - x; the section gives x^3 - 2 c2 x - c3
    assert chi(Matrix.diag([1, 0, -1])) == [Fraction(1, 2), 0]


def test_uniform_diagonalizer_b3():
    torus = TorusChart("sl", 3)
    r = Ring(["v1", "v2"])
    v1, v2 = r.gens()
    m = uniform_diagonalizer(torus.matrix([v1, v2]))
    one = RationalFunction(r.one)
    assert m[0, 1] == one / v1
    assert m[0, 2] == one / (v2 * (v2 - v1))
    assert m[1, 2] == one / (v2 - v1)
    assert m[0, 0] == one and m[1, 0] == RationalFunction(r.zero)


def test_uniform_diagonalizer_sl2():
    # m12 * (w22 - w11) = 1 forces m12 = -1/(2a) for w = diag(a, -a)
    m = uniform_diagonalizer(Matrix.diag([3, -3]))
    assert m.to_rows() == [[1, Fraction(-1, 6)], [0, 1]]
    assert uniform_diagonalizer(Matrix.diag([-3, 3])).to_rows() == [[1, Fraction(1, 6)], [0, 1]]


def test_uniform_diagonalizer_rejects_non_regular():
    with pytest.raises(NotRegularError) as err:
        uniform_diagonalizer(Matrix.diag([1, 1, -2]))
    assert err.value.roots == [(0, 1)]
    assert "e0-e1" in str(err.value)


def test_is_regular_examples():
    assert is_regular(shift(4))
    d = Matrix.diag([2, 1, 3, 7])
    assert is_regular(d - Matrix.identity(4) * Fraction(13, 4))
    jordan = Matrix.from_rows([[0, 1, 0, 0], [0, 0, 2, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    assert not is_regular(jordan)


def test_sym_power_examples():
    ctx = principal_triple(2)
    assert sym_power_rep(3, ctx.h) == Matrix.diag([3, 1, -1, -3])
    for n in range(1, 6):
        assert sym_power_rep(n, ctx.e) == shift(n + 1)
    rho = {k: sym_power_rep(4, getattr(ctx, k)) for k in "efh"}
    assert ea.commutator(rho["e"], rho["f"]) == sym_power_rep(4, ea.commutator(ctx.e, ctx.f))
    assert [rho["f"][k, k - 1] for k in range(1, 5)] == [k * (5 - k) for k in range(1, 5)]


def test_weyl_orbits_examples():
    flip = TorusChart("sl2", 5).weyl_group()
    assert weyl_orbits(list(range(5)), "projective", flip) == [[0, 4], [1, 3], [2]]
    s3 = TorusChart("sl", 3).weyl_group()
    assert weyl_orbits([0, 1, 2], "projective", s3) == [[0, 1, 2]]
    assert weyl_orbits([0, 1, 2], "projective", identity_group(3)) == [[0], [1], [2]]


# ----------------------------------------------------------------------------
# properties

@pytest.mark.parametrize("n", [2, 3, 4])
def test_chi_matches_char_poly_symbolically(n):
    torus = TorusChart("sl", n)
    r = Ring(torus.names)
    w = torus.matrix(r.gens())
    c = chi(w)
    sec = centralizer_basis(n)
    assert ea.char_poly(shift(n) + w) == ea.char_poly(kostant_point(sec, c))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_chi_is_weyl_invariant(n):
    torus = TorusChart("sl", n)
    r = Ring(torus.names)
    gens = r.gens()
    base = chi(torus.matrix(gens))
    for perm in itertools.permutations(range(n)):
        assert chi(torus.matrix(torus.permuted(perm, gens))) == base


regular_diag = st.lists(st.integers(-20, 20), min_size=3, max_size=4, unique=True)


@settings(max_examples=30, deadline=None)
@given(regular_diag)
def test_uniform_diagonalizer_conjugates(entries):
    n = len(entries)
    shift_ = Fraction(sum(entries), n)
    w = Matrix.diag([Fraction(x) - shift_ for x in entries])
    m = uniform_diagonalizer(w)
    assert m * w * ea.inverse(m) == shift(n) + w


@settings(max_examples=20, deadline=None)
@given(st.lists(st.fractions(min_value=-10, max_value=10, max_denominator=5), min_size=3, max_size=3))
def test_kostant_section_is_regular(cs):
    sec = centralizer_basis(4)
    assert is_regular(kostant_point(sec, cs))
