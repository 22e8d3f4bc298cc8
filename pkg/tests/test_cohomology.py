import itertools
import random
from math import comb

import pytest

from equicoh import charts, cohomology
from equicoh.cohomology import (DimensionCertificateError, GKMGraph, GroupSpec, ScenarioError, build_zero_scheme,
                                component_table, components, equivariant_hilbert_series, fiber_check,
                                gkm_graph, gkm_ring_dims, intersection_locus_matches, localization_check,
                                ordinary_dims, presentation, random_regular_point, subalgebra_dims,
                                weyl_invariant_dims)
from equicoh.lie import identity_group
from equicoh.symbolic import HilbertSeries, render, standard_monomial_counts

CUTOFF = 12


def series(num, den):
    return HilbertSeries(tuple(num), tuple(den)).even_coefficients(CUTOFF)


def scheme(n, form, chart):
    return build_zero_scheme(GroupSpec(n, form), chart)


def expand(factors):
    out = factors[0]
    for f in factors[1:]:
        out = out * f
    return out


# ----------------------------------------------------------------------------
# construction and presentations

def test_group_spec_validation():
    with pytest.raises(ScenarioError):
        GroupSpec(3, "parabolic")
    with pytest.raises(ScenarioError):
        GroupSpec(3, "embedded_sl2_borel")
    assert GroupSpec(2, "embedded_sl2_kostant").base_kind == "reductive"
    assert GroupSpec(4, "point").base_kind == "point"


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_sl2_borel_projective_relation(n):
    z = scheme(2, "borel", charts.projective(n))
    rel, = presentation(z).relations
    x1, v = rel.ring.gen("x1"), rel.ring.gen("v")
    assert render(rel) == render(expand([x1 + 2 * k * v for k in range(n + 1)]))


def test_kostant_sl3_projective_relation():
    p = presentation(scheme(3, "kostant", charts.projective(2)))
    assert p.rendered() == ["x1^3-2*x1*c2-c3"]
    assert p.verified


def test_kostant_sl3_flag_relations():
    p = presentation(scheme(3, "kostant", charts.flag(3)))
    # a^3 - 2 c2 a + c3 after the basis involution c3 -> -c3
    assert p.rendered() == ["a^2-a*c+c^2-2*c2", "a^3-2*a*c2-c3"]
    assert p.substitutions == {"b": "a^2-c2"}


def test_embedded_kostant_p4_relation():
    p = presentation(scheme(2, "embedded_sl2_kostant", charts.projective(4)))
    rel, = p.relations
    x, t = rel.ring.gen("x1"), rel.ring.gen("t")
    assert render(rel) == render(x * (x ** 2 - 4 * t) * (x ** 2 - 16 * t))


def test_bott_samelson_relations():
    p = presentation(scheme(3, "borel", charts.bott_samelson((1, 2, 1), 3)))
    rels = p.relations
    ring = rels[0].ring
    x1, x2, x3, v1, v2 = (ring.gen(n) for n in ("x1", "x2", "x3", "v1", "v2"))
    # alpha_1(w) = -v1, alpha_2(w) = v1 - v2 for w = diag(0, v1, v2) - trace/3
    expected = [x1 ** 2 - v1 * x1,
                x2 ** 2 - x1 * x2 + (v1 - v2) * x2,
                x3 ** 2 + 2 * x1 * x3 - x2 * x3 - v1 * x3]
    assert sorted(render(r) for r in rels) == sorted(render(e) for e in expected)


def test_point_base_is_field_of_e():
    z = scheme(4, "point", charts.projective(3))
    assert z.base_names == []
    assert presentation(z).rendered() == ["x1^4"]


def test_generators_homogeneous_and_counted():
    z = scheme(3, "borel", charts.flag(3))
    assert len(z.generators) == z.chart.dimension
    for g, a in zip(z.generators, z.weights):
        assert z.ring.weighted_degree(next(iter(g.terms))) == a + 2


def test_dimension_certificate_rejects_non_ci(monkeypatch):
    # every built-in scenario is a complete intersection, so fake a wrong dimension
    monkeypatch.setattr(cohomology, "krull_dimension", lambda gb: 3)
    with pytest.raises(DimensionCertificateError, match="complete intersection|dimension"):
        scheme(3, "borel", charts.projective(2))


# ----------------------------------------------------------------------------
# Hilbert series and dual paths

def test_hilbert_examples():
    assert str(equivariant_hilbert_series(scheme(3, "borel", charts.projective(2)))) == "(1+t^2+t^4)/(1-t^2)^2"
    for n in (2, 3, 4):
        hs = equivariant_hilbert_series(scheme(2, "embedded_sl2_kostant", charts.projective(n)))
        assert hs.even_coefficients(CUTOFF) == series([1 if k % 2 == 0 else 0 for k in range(2 * n + 1)], [4])
    hs = equivariant_hilbert_series(scheme(4, "point", charts.projective(3)))
    assert hs.coefficients(10) == [1, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0]


DUAL_PATH = [
    (3, "borel", charts.projective(2)),
    (2, "embedded_sl2_borel", charts.grassmannian(2, 4)),
    (3, "borel", charts.flag(3)),
    (3, "borel", charts.bott_samelson((1, 2), 3)),
]


@pytest.mark.parametrize("n,form,chart", DUAL_PATH, ids=lambda x: getattr(x, "describe", lambda: str(x))())
def test_dual_path_identity(n, form, chart):
    z = scheme(n, form, chart)
    closed = equivariant_hilbert_series(z, CUTOFF).even_coefficients(CUTOFF)
    assert standard_monomial_counts(z.relation_gb, CUTOFF) == closed
    assert subalgebra_dims(components(z), cutoff=CUTOFF) == closed


def _gauss_binomial(n, k):
    # coefficients of the q-binomial, q = t^2
    def qint(m):
        return [1] * m

    def mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return out

    def div_exact(a, b):
        a = list(a)
        out = [0] * (len(a) - len(b) + 1)
        for i in range(len(out) - 1, -1, -1):
            out[i] = a[i + len(b) - 1] // b[-1]
            for j, y in enumerate(b):
                a[i + j] -= out[i] * y
        return out

    num, den = [1], [1]
    for i in range(k):
        num = mul(num, qint(n - i))
        den = mul(den, qint(i + 1))
    return div_exact(num, den)


def _pad(xs):
    return (list(xs) + [0] * (CUTOFF // 2 + 1))[:CUTOFF // 2 + 1]


@pytest.mark.parametrize("chart,betti", [
    (charts.projective(3), [1, 1, 1, 1]),
    (charts.grassmannian(2, 4), _gauss_binomial(4, 2)),
    (charts.flag(3), [1, 2, 2, 1]),
    (charts.bott_samelson((1, 2, 1), 3), [comb(3, k) for k in range(4)]),
], ids=lambda x: getattr(x, "describe", lambda: "betti")())
def test_base_zero_gives_betti_numbers(chart, betti):
    z = scheme(chart.ambient, "borel", chart)
    assert ordinary_dims(z, CUTOFF) == _pad(betti)


# ----------------------------------------------------------------------------
# fibers

@pytest.mark.parametrize("chart,count", [(charts.grassmannian(2, 4), 6), (charts.flag(3), 6),
                                         (charts.projective(3), 4)],
                         ids=lambda x: getattr(x, "describe", lambda: str(x))())
def test_fiber_counts_at_regular_points(chart, count):
    z = scheme(chart.ambient, "borel", chart)
    rng = random.Random(11)
    for _ in range(2):
        rep = fiber_check(z, random_regular_point(z, rng))
        assert rep.regular_semisimple and rep.passed
        assert rep.multiplicity == rep.distinct == count and rep.squarefree


def test_fiber_at_zero_is_one_thick_point():
    z = scheme(4, "borel", charts.projective(3))
    rep = fiber_check(z, {n: 0 for n in z.base_names})
    assert (rep.multiplicity, rep.distinct, rep.regular_semisimple) == (4, 1, False)
    assert rep.passed


# ----------------------------------------------------------------------------
# components

def test_gr24_components():
    atlas = components(scheme(2, "embedded_sl2_borel", charts.grassmannian(2, 4)))
    got = {lab: (row["x1"], row["y1"]) for lab, row in component_table(atlas)}
    # the opposite torus sign convention gives these with v -> -v
    assert sorted(got.values()) == sorted([("0", "0"), ("0", "-2*v"), ("-8*v^2", "-4*v"), ("0", "-4*v"),
                                           ("-12*v^2", "-6*v"), ("-24*v^2", "-8*v")])


def test_flag_components():
    atlas = components(scheme(3, "borel", charts.flag(3)))
    got = sorted((row["a"], row["c"]) for _, row in component_table(atlas))
    assert got == sorted([("0", "0"), ("v1", "0"), ("v1", "v2"), ("v2", "v2"), ("0", "-v1+v2"),
                          ("v2", "-v1+v2")])


def test_p2_components_and_substitution():
    z = scheme(3, "borel", charts.projective(2))
    atlas = components(z)
    assert [atlas.coordinate(lab, "x1") for lab in atlas.labels] == \
        [atlas.base_ring.zero, atlas.base_ring.gen("v1"), atlas.base_ring.gen("v2")]
    for lab in atlas.labels:
        images = dict(atlas.images[lab])
        for g in z.generators:
            assert g.subs(images, atlas.base_ring).is_zero()


@pytest.mark.parametrize("n", [2, 3])
def test_components_meet_over_gkm_edges(n):
    z = scheme(n + 1, "borel", charts.projective(n))
    atlas = components(z)
    graph = gkm_graph(z.chart, z.torus)
    assert len(graph.edges) == comb(n + 1, 2)
    for a, b, char in graph.edges:
        assert intersection_locus_matches(atlas, a, b, char)


# ----------------------------------------------------------------------------
# subalgebras, Weyl invariants, GKM

def test_schubert_divisor_subalgebra():
    atlas = components(scheme(4, "borel", charts.grassmannian(2, 4)))
    labels = [lab for lab in atlas.labels if lab != (2, 3)]
    assert subalgebra_dims(atlas, labels, CUTOFF) == series([1, 0, 1, 0, 2, 0, 1], [2, 2, 2])


def test_empty_subalgebra_is_zero_ring():
    atlas = components(scheme(3, "borel", charts.projective(2)))
    assert subalgebra_dims(atlas, [], 6) == [0, 0, 0, 0]


def test_discriminant_restriction():
    atlas = components(scheme(2, "embedded_sl2_borel", charts.projective(3)))
    got = weyl_invariant_dims(atlas, CUTOFF)
    assert got == series([1, 0, 1, 0, 1, 0, 1], [4])
    assert got[:4] == [1, 1, 2, 2]


@pytest.mark.parametrize("borel,kostant", [
    ((2, "embedded_sl2_borel"), (2, "embedded_sl2_kostant")),
    ((3, "borel"), (3, "kostant")),
])
def test_weyl_invariants_match_kostant(borel, kostant):
    chart = charts.projective(4 if borel[0] == 2 else 2)
    atlas = components(build_zero_scheme(GroupSpec(*borel), chart))
    zk = build_zero_scheme(GroupSpec(*kostant), chart)
    assert weyl_invariant_dims(atlas, CUTOFF) == equivariant_hilbert_series(zk, CUTOFF).even_coefficients(CUTOFF)


def test_trivial_weyl_group_gives_full_algebra():
    atlas = components(scheme(3, "borel", charts.projective(2)))
    assert weyl_invariant_dims(atlas, 8, group=identity_group(3)) == subalgebra_dims(atlas, cutoff=8)


def test_weyl_rejects_unstable_subset():
    atlas = components(scheme(3, "borel", charts.projective(2)))
    with pytest.raises(ScenarioError, match="Weyl-stable"):
        weyl_invariant_dims(atlas, 4, labels=[0, 1])


def test_gkm_graph_examples():
    z = scheme(3, "borel", charts.projective(2))
    g = gkm_graph(z.chart, z.torus)
    assert [(a, b) for a, b, _ in g.edges] == [(0, 1), (0, 2), (1, 2)]
    assert all(any(c) for _, _, c in g.edges)
    z = scheme(4, "borel", charts.grassmannian(2, 4))
    g = gkm_graph(z.chart, z.torus)
    assert (len(g.vertices), len(g.edges)) == (6, 12) and g.is_connected()
    z = scheme(2, "borel", charts.projective(1))
    assert len(gkm_graph(z.chart, z.torus).edges) == 1


def test_gkm_graph_rejects_bott_samelson():
    z = scheme(3, "borel", charts.bott_samelson((1, 2), 3))
    with pytest.raises(ScenarioError):
        gkm_graph(z.chart, z.torus)


def test_gkm_ring_dims_examples():
    z = scheme(3, "borel", charts.projective(2))
    assert gkm_ring_dims(gkm_graph(z.chart, z.torus), 8) == series([1, 0, 1, 0, 1], [2, 2])[:5]
    assert gkm_ring_dims(GKMGraph([0], [], ["v1", "v2"]), 6) == [1, 2, 3, 4]
    # rank-one torus: f1 - f2 divisible by v is automatic in positive degree
    z = scheme(2, "borel", charts.projective(1))
    assert gkm_ring_dims(gkm_graph(z.chart, z.torus), 6) == [1, 2, 2, 2]


@pytest.mark.parametrize("chart", [charts.projective(2), charts.projective(3), charts.flag(3)],
                         ids=lambda c: c.describe())
def test_gkm_matches_zero_scheme(chart):
    z = scheme(chart.ambient, "borel", chart)
    assert gkm_ring_dims(gkm_graph(z.chart, z.torus), CUTOFF) == subalgebra_dims(components(z), cutoff=CUTOFF)


# ----------------------------------------------------------------------------
# localization

@pytest.mark.parametrize("n,form,chart", [(3, "borel", charts.projective(2)),
                                          (4, "borel", charts.grassmannian(2, 4)),
                                          (2, "embedded_sl2_borel", charts.grassmannian(2, 4))],
                         ids=lambda x: getattr(x, "describe", lambda: str(x))())
def test_localization(n, form, chart):
    z = scheme(n, form, chart)
    rep = localization_check(z, components(z))
    assert rep.passed
    ranks = {1, chart.params[0] if chart.kind == "grassmannian" else 1}
    assert rep.checks == 5 * chart.fixed_point_count() * len(ranks)


def test_localization_rejects_flags():
    z = scheme(3, "borel", charts.flag(3))
    with pytest.raises(ScenarioError):
        localization_check(z, components(z))


def test_component_count_matches_fixed_points():
    for chart in (charts.projective(3), charts.grassmannian(2, 4), charts.flag(3),
                  charts.bott_samelson((1, 2, 1), 3)):
        atlas = components(scheme(chart.ambient, "borel", chart))
        assert len(atlas.labels) == chart.fixed_point_count()
        assert len({tuple(sorted(img.items())) for img in
                    ({k: render(v, False) for k, v in atlas.images[lab].items()} for lab in atlas.labels)}) \
            == chart.fixed_point_count()


def test_labels_are_canonical():
    assert charts.grassmannian(2, 4).labels() == list(itertools.combinations(range(4), 2))
