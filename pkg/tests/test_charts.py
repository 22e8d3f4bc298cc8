import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from equicoh import charts
from equicoh import exactalg as ea
from equicoh.exactalg import Matrix
from equicoh.lie import TorusChart, principal_triple, shift, uniform_diagonalizer
from equicoh.symbolic import Ring, buchberger, count_solutions_zero_dim, is_homogeneous, render

BUILTIN = [charts.projective(1), charts.projective(3), charts.grassmannian(2, 4), charts.grassmannian(2, 5),
           charts.flag(3), charts.flag(4), charts.bott_samelson((1, 2, 1), 3), charts.bott_samelson((1, 2), 3)]


def field_strings(chart, m):
    ring = Ring(chart.names)
    return [render(p, normalize=False) for p in charts.vector_field(chart, m, ring)]


def test_projective_field_of_e():
    assert field_strings(charts.projective(3), shift(4)) == ["-x1^2+x2", "-x1*x2+x3", "-x1*x3"]


def test_grassmannian_field_of_e():
    c = charts.grassmannian(2, 4)
    assert c.names == ("x1", "y1", "x2", "y2")
    assert field_strings(c, shift(4)) == ["-x1*y1+x2", "-y1^2-x1+y2", "-x1*y2", "-y1*y2-x2"]


def test_flag_field_of_e():
    assert field_strings(charts.flag(3), shift(3)) == ["-a^2+b", "-a*b", "a*c-c^2-b"]


def test_bott_samelson_field_uses_cartan_entries():
    # b_jk = alpha_{i_j}(h_{i_k}) for the word (1, 2, 1)
    c = charts.bott_samelson((1, 2, 1), 3)
    assert field_strings(c, shift(3)) == ["-x1^2", "x1*x2-x2^2", "-2*x1*x3+x2*x3-x3^2"]


def test_bott_samelson_rejects_non_borel_input():
    c = charts.bott_samelson((1, 2), 3)
    with pytest.raises(charts.ChartError):
        charts.vector_field(c, principal_triple(3).f, Ring(c.names))


@pytest.mark.parametrize("chart", BUILTIN, ids=lambda c: c.describe())
def test_zero_matrix_gives_zero_field(chart):
    ring = Ring(chart.names)
    assert all(p.is_zero() for p in charts.vector_field(chart, Matrix.zeros(chart.ambient), ring))


def test_dimension_mismatch():
    c = charts.projective(2)
    with pytest.raises(ea.ShapeError):
        charts.vector_field(c, shift(4), Ring(c.names))


def test_coordinate_weights_examples():
    for n in range(1, 6):
        assert charts.coordinate_weights(charts.projective(n)) == [2 * i for i in range(1, n + 1)]
    assert charts.coordinate_weights(charts.grassmannian(2, 4)) == [4, 2, 6, 4]
    assert charts.coordinate_weights(charts.bott_samelson((1, 2, 1, 2), 3)) == [2, 2, 2, 2]


def test_fixed_point_coordinates_p2():
    torus = TorusChart("sl", 3)
    v = [Fraction(3), Fraction(7)]
    g = uniform_diagonalizer(torus.matrix(v))
    c = charts.projective(2)
    assert [charts.fixed_point_coordinates(c, i, g)[0] for i in range(3)] == [0, 3, 7]
    assert charts.fixed_point_coordinates(c, 0, Matrix.identity(3)) == [0, 0]


def test_fixed_point_coordinates_outside_chart():
    c = charts.projective(2)
    with pytest.raises(charts.ChartError, match="vanishes"):
        charts.fixed_point_coordinates(c, 1, Matrix.identity(3))


def test_fixed_points_are_zeros_of_the_field():
    # every fixed point moved by M_w is a zero of e + w
    torus = TorusChart("sl", 4)
    vals = [Fraction(2), Fraction(-5), Fraction(9)]
    w = torus.matrix(vals)
    g = uniform_diagonalizer(w)
    for chart in (charts.grassmannian(2, 4), charts.flag(4), charts.projective(3)):
        ring = Ring(chart.names)
        field = charts.vector_field(chart, shift(4) + w, ring)
        for label in chart.labels():
            pt = dict(zip(chart.names, charts.fixed_point_coordinates(chart, label, g)))
            assert all(p.evaluate(pt) == 0 for p in field)


def test_chern_trace_examples():
    r = Ring(["x1", "x2", "w"])
    w = r.gen("w")
    m = shift(3) + Matrix.diag([w, w * 0, -w])
    assert charts.chern_trace(charts.projective(2), "tautological-sub", 1, m, r) == w + r.gen("x1")
    c = charts.grassmannian(2, 4)
    rg = Ring(c.names)
    assert charts.chern_trace(c, "tautological-sub", 1, shift(4), rg) == rg.gen("y1")
    assert charts.chern_trace(c, "tautological-sub", 2, Matrix.zeros(4), rg).is_zero()


def test_chern_trace_rejects_unsupported():
    c = charts.flag(3)
    with pytest.raises(charts.ChartError):
        charts.chern_trace(c, "tautological-sub", 1, shift(3), Ring(c.names))


def test_fixed_point_counts():
    assert charts.grassmannian(2, 4).fixed_point_count() == 6
    assert charts.flag(3).fixed_point_count() == 6
    assert charts.projective(1).fixed_point_count() == 2
    assert charts.bott_samelson((1, 2, 1), 3).fixed_point_count() == 8


# ----------------------------------------------------------------------------
# properties

@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_grassmannian_of_lines_matches_projective(n):
    m = Matrix.build(n + 1, n + 1, lambda i, j: (3 * i - 2 * j + i * j) % 7 - 3)
    m = m - Matrix.identity(n + 1) * Fraction(m.trace(), n + 1)
    assert field_strings(charts.grassmannian(1, n + 1), m) == field_strings(charts.projective(n), m)


@pytest.mark.parametrize("chart", BUILTIN, ids=lambda c: c.describe())
def test_field_homogeneous_of_weight_plus_two(chart):
    n = chart.ambient
    torus = TorusChart("sl", n)
    specs = charts.chart_varspecs(chart) + [(name, 2) for name in torus.names]
    ring = Ring(specs)
    w = torus.matrix([ring.gen(v) for v in torus.names])
    field = charts.vector_field(chart, shift(n) + w, ring)
    for spec, comp in zip(charts.chart_varspecs(chart), field):
        assert is_homogeneous(comp) == spec.weight + 2


def _traceless(n, entries, upper=False):
    m = Matrix.build(n, n, lambda i, j: 0 if upper and i > j else entries[i * n + j])
    return m - Matrix.identity(n) * Fraction(m.trace(), n)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=9, max_size=9),
       st.lists(st.integers(-4, 4), min_size=9, max_size=9), st.integers(-3, 3))
def test_field_is_linear_in_the_matrix(a, b, lam):
    m1, m2 = _traceless(3, a), _traceless(3, b)
    for chart in (charts.projective(2), charts.flag(3)):
        ring = Ring(chart.names)
        lhs = charts.vector_field(chart, m1 * lam + m2, ring)
        v1 = charts.vector_field(chart, m1, ring)
        v2 = charts.vector_field(chart, m2, ring)
        assert lhs == [p * lam + q for p, q in zip(v1, v2)]


def _linearization(chart, m):
    ring = Ring(chart.names)
    field = charts.vector_field(chart, m, ring)
    origin = {n: 0 for n in chart.names}
    d = chart.dimension
    return Matrix(d, d, [field[i].diff(n).evaluate(origin) for i in range(d) for n in chart.names])


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=9, max_size=9), st.lists(st.integers(-5, 5), min_size=9, max_size=9))
def test_flag_linearization_respects_brackets(a, b):
    chart = charts.flag(3)
    m1, m2 = _traceless(3, a, upper=True), _traceless(3, b, upper=True)
    lhs = _linearization(chart, ea.commutator(m1, m2))
    rhs = ea.commutator(_linearization(chart, m1), _linearization(chart, m2))
    assert lhs == rhs


@pytest.mark.parametrize("chart", BUILTIN, ids=lambda c: c.describe())
def test_e_has_a_single_zero(chart):
    ring = Ring(charts.chart_varspecs(chart))
    field = charts.vector_field(chart, shift(chart.ambient), ring)
    fc = count_solutions_zero_dim(buchberger(field, ring.order))
    assert fc.distinct == 1
    assert fc.multiplicity == chart.fixed_point_count()
    origin = {n: 0 for n in chart.names}
    assert all(p.evaluate(origin) == 0 for p in field)


def test_random_fixed_point_samples_are_deterministic():
    rng = random.Random(0)
    torus = TorusChart("sl", 3)
    pts = []
    for _ in range(2):
        vals = [Fraction(rng.randint(1, 9)), Fraction(rng.randint(10, 19))]
        g = uniform_diagonalizer(torus.matrix(vals))
        pts.append(charts.fixed_point_coordinates(charts.flag(3), (1, 0, 2), g))
    assert pts[0] != pts[1]
