"""Golden-value and property checks for the built-in scenarios.

Each check returns a :class:`CriterionResult`; a check passes only if its
values match exactly and it finishes inside its time budget.  The CLI's
``verify-all`` and the test suite both run these.
"""

from __future__ import annotations

import itertools
import random
import re
import time
import traceback
from dataclasses import dataclass
from typing import Callable

from .charts import bott_samelson, cartan_entry, flag, grassmannian, projective
from .cohomology import (GroupSpec, build_zero_scheme, components, equivariant_hilbert_series,
                         fiber_check, gkm_graph, gkm_ring_dims, intersection_locus_matches,
                         localization_check, ordinary_dims, presentation, random_regular_point,
                         subalgebra_dims, weyl_invariant_dims)
from .lie import TorusChart, uniform_diagonalizer
from .symbolic import HilbertSeries, MultiPoly, RationalFunction, Ring, render

CUTOFF = 20


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    budget: float

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"[{verdict}] {self.number:2d}. {self.title} ({self.seconds:.2f}s / {self.budget:g}s) {self.detail}"


class _Fail(Exception):
    pass


def _expect(cond: bool, message: str) -> None:
    if not cond:
        raise _Fail(message)


def _flip(p: MultiPoly, signs: dict) -> MultiPoly:
    """Apply a variable sign involution such as v -> -v."""
    return p.subs({n: p.ring.gen(n) * s for n, s in signs.items() if n in p.ring.index})


def _chern_sign_involution(names) -> dict:
    """c_k -> (-1)^k c_k, induced by w -> -w on the Kostant section."""
    return {n: (-1) ** int(n[1:]) for n in names if re.fullmatch(r"c\d+", n)}


def _product(factors) -> MultiPoly:
    out = factors[0]
    for f in factors[1:]:
        out = out * f
    return out


# ----------------------------------------------------------------------------
# criteria

def c1_sl2_projective():
    rendered = []
    for n in range(1, 7):
        z = build_zero_scheme(GroupSpec(2, "borel"), projective(n))
        r = z.relation_ring
        x, v = r.gen("x1"), r.gen("v")
        expected = render(_product([x + v * (2 * k) for k in range(n + 1)]))
        got = presentation(z).rendered()
        _expect(got == [expected], f"P^{n}: got {got}, expected {expected}")
        rendered.append(got[0])
    return f"relations for n=1..6 match; n=2: {rendered[1]}"


def c2_sl2_kostant():
    for n, roots in ((4, (0, 2, 4)), (5, (1, 3, 5))):
        z = build_zero_scheme(GroupSpec(2, "embedded_sl2_kostant"), projective(n))
        r = z.relation_ring
        x, t = r.gen("x1"), r.gen("t")
        factors = [x * x - t * (k * k) for k in roots if k]
        if 0 in roots:
            factors.append(x)
        expected = render(_product(factors))
        p = presentation(z)
        _expect(p.verified, f"P^{n}: presentation not verified")
        _expect(p.rendered() == [expected], f"P^{n}: got {p.rendered()}, expected {expected}")
    return "P^4 and P^5 relations match"


def c3_sln_projective():
    for n in range(2, 5):
        z = build_zero_scheme(GroupSpec(n + 1, "borel"), projective(n))
        r = z.relation_ring
        x = r.gen("x1")
        vs = [r.gen(f"v{i}") for i in range(1, n + 1)]
        expected = render(_product([x] + [x - v for v in vs]))
        got = presentation(z).rendered()
        _expect(got == [expected], f"P^{n}: got {got}, expected {expected}")
        atlas = components(z)
        x1 = sorted(render(atlas.images[lab]["x1"], False) for lab in atlas.labels)
        want = sorted(["0"] + [f"v{i}" for i in range(1, n + 1)])
        _expect(x1 == want, f"P^{n}: x1 families {x1}, expected {want}")
        graph = gkm_graph(z.chart, z.torus)
        edges = {(a, b): ch for a, b, ch in graph.edges}
        for a, b in itertools.combinations(atlas.labels, 2):
            _expect((a, b) in edges, f"P^{n}: components {a},{b} meet but no GKM edge")
            _expect(intersection_locus_matches(atlas, a, b, edges[(a, b)]),
                    f"P^{n}: intersection of components {a},{b} is not the hyperplane {edges[(a, b)]}")
    return "n=2..4 relations, atlases and intersection hyperplanes match"


GR24_FAMILIES = {("0", "0"), ("0", "2*v"), ("-8*v^2", "4*v"), ("0", "4*v"), ("-12*v^2", "6*v"), ("-24*v^2", "8*v")}


def c4_gr24_sl2():
    z = build_zero_scheme(GroupSpec(2, "embedded_sl2_borel"), grassmannian(2, 4))
    r = z.relation_ring
    x1, y1, v = r.gen("x1"), r.gen("y1"), r.gen("v")
    expected = {render(x1 * (x1 + v * v * 24 - v * y1 * 8 + y1 * y1)),
                render((y1 - v * 4) * (x1 * 2 - v * y1 * 2 + y1 * y1))}
    p = presentation(z)
    flipped = {render(_flip(q, {"v": -1})) for q in p.relations}
    _expect(p.verified, "presentation not verified")
    _expect(flipped == expected, f"relations after v->-v: {sorted(flipped)}, expected {sorted(expected)}")
    atlas = components(z)
    fams = {(render(_flip(atlas.images[lab]["x1"], {"v": -1}), False),
             render(_flip(atlas.images[lab]["y1"], {"v": -1}), False)) for lab in atlas.labels}
    _expect(fams == GR24_FAMILIES, f"families after v->-v: {sorted(fams)}")
    return "pair and six families match after the involution v->-v"


F3_FAMILIES = {("0", "0"), ("v1", "0"), ("v1", "v2"), ("v2", "v2"), ("0", "-v1+v2"), ("v2", "-v1+v2")}


def c5_flag3():
    z = build_zero_scheme(GroupSpec(3, "borel"), flag(3))
    atlas = components(z)
    fams = {(render(atlas.images[lab]["a"], False), render(atlas.images[lab]["c"], False)) for lab in atlas.labels}
    _expect(fams == F3_FAMILIES, f"families {sorted(fams)}")
    zk = build_zero_scheme(GroupSpec(3, "kostant"), flag(3))
    p = presentation(zk)
    r = zk.relation_ring
    a, c, c2, c3 = (r.gen(n) for n in ("a", "c", "c2", "c3"))
    reference = {render(a ** 3 - c2 * a * 2 + c3), render(a * a - a * c + c * c - c2 * 2)}
    got = set(p.rendered())
    involution = _chern_sign_involution(r.names)
    flipped = {render(_flip(q, involution)) for q in p.relations}
    _expect(p.verified, "Kostant presentation not verified")
    _expect(got == reference or flipped == reference, f"Kostant relations {sorted(got)}")
    signs = "as printed" if got == reference else "after c3 -> -c3"
    return f"six families match; Kostant relations {sorted(got)} match {signs}"


def c6_kostant_p2():
    z = build_zero_scheme(GroupSpec(3, "kostant"), projective(2))
    r = z.relation_ring
    x, c2, c3 = r.gen("x1"), r.gen("c2"), r.gen("c3")
    expected = render(x ** 3 - c2 * x * 2 - c3)
    got = presentation(z).rendered()
    _expect(got == [expected], f"got {got}, expected {expected}")
    return f"relation {got[0]}"


def _a2_words(max_len: int = 4):
    for l in range(1, max_len + 1):
        yield from itertools.product((1, 2), repeat=l)


def c7_bott_samelson():
    for word in _a2_words():
        chart = bott_samelson(word, 3)
        z = build_zero_scheme(GroupSpec(3, "borel"), chart)
        r = z.relation_ring
        xs = [r.gen(n) for n in chart.names]
        torus = TorusChart("sl", 3)
        diag = torus.diagonal([r.gen("v1"), r.gen("v2")])
        expected = set()
        for j, ij in enumerate(word):
            q = xs[j] * xs[j] + xs[j] * (diag[ij - 1] - diag[ij])
            for k in range(j):
                q = q + xs[k] * xs[j] * cartan_entry(ij, word[k])
            expected.add(render(q))
        p = presentation(z)
        _expect(set(p.rendered()) == expected, f"word {word}: {p.rendered()}")
        l = len(word)
        hs = equivariant_hilbert_series(z)
        ratio = HilbertSeries(tuple(_binomial_row(l)), ())
        _expect(hs.numerator == ratio.numerator and hs.denominator_factors == (2, 2),
                f"word {word}: series {hs}")
        _expect(sum(hs.numerator) == 2 ** l, f"word {word}: rank {sum(hs.numerator)}")
    return "30 words: relations and (1+t^2)^l/(1-t^2)^2 match"


def _binomial_row(l: int) -> list[int]:
    row = [1]
    for _ in range(l):
        row = [a + b for a, b in zip(row + [0], [0] + row)]
    out = []
    for c in row:
        out.extend([c, 0])
    return out[:-1]


def c8_b3_diagonalizer():
    ring = Ring(["v1", "v2"])
    v1, v2 = ring.gen("v1"), ring.gen("v2")
    torus = TorusChart("sl", 3)
    m = uniform_diagonalizer(torus.matrix([v1, v2]))
    one = RationalFunction(ring.one)
    reference = [[one, RationalFunction(ring.one, v1), RationalFunction(ring.one, v2 * (v2 - v1))],
             [0, one, RationalFunction(ring.one, v2 - v1)],
             [0, 0, one]]
    for i in range(3):
        for j in range(3):
            _expect(m[i, j] == reference[i][j], f"entry ({i},{j}) = {m[i, j]}")
    return "M_w entries match"


def _criterion_scenarios():
    """(group, chart) pairs used in criteria 1-7."""
    out = [(GroupSpec(2, "borel"), projective(n)) for n in range(1, 7)]
    out += [(GroupSpec(2, "embedded_sl2_kostant"), projective(n)) for n in (4, 5)]
    out += [(GroupSpec(n + 1, "borel"), projective(n)) for n in range(2, 5)]
    out += [(GroupSpec(2, "embedded_sl2_borel"), grassmannian(2, 4))]
    out += [(GroupSpec(3, "borel"), flag(3)), (GroupSpec(3, "kostant"), flag(3)),
            (GroupSpec(3, "kostant"), projective(2))]
    out += [(GroupSpec(3, "borel"), bott_samelson(w, 3)) for w in _a2_words()]
    return out


def _borel_counterpart(group: GroupSpec) -> GroupSpec:
    return GroupSpec(group.n, "embedded_sl2_borel" if group.n == 2 else "borel")


def c9_dual_path():
    count = 0
    for group, chart in _criterion_scenarios():
        z = build_zero_scheme(group, chart)
        closed = equivariant_hilbert_series(z, CUTOFF).even_coefficients(CUTOFF)
        if group.base_kind == "solvable":
            dims = subalgebra_dims(components(z), cutoff=CUTOFF)
        else:
            zb = build_zero_scheme(_borel_counterpart(group), chart)
            dims = weyl_invariant_dims(components(zb), CUTOFF)
        _expect(dims == closed, f"{z.describe()}: closed {closed}, components {dims}")
        count += 1
    return f"{count} scenarios agree through degree {CUTOFF}"


def c10_fibers():
    rng = random.Random(2024)
    scenarios = [(GroupSpec(n + 1, "borel"), projective(n)) for n in range(1, 5)]
    scenarios += [(GroupSpec(2, "borel"), projective(n)) for n in range(1, 7)]
    scenarios += [(GroupSpec(4, "borel"), grassmannian(2, 4)), (GroupSpec(2, "embedded_sl2_borel"), grassmannian(2, 4)),
                  (GroupSpec(3, "borel"), flag(3)), (GroupSpec(3, "kostant"), flag(3))]
    scenarios += [(GroupSpec(3, "borel"), bott_samelson(w, 3)) for w in _a2_words()]
    checked = 0
    for group, chart in scenarios:
        z = build_zero_scheme(group, chart)
        for _ in range(5):
            rep = fiber_check(z, random_regular_point(z, rng))
            _expect(rep.passed, f"{z.describe()} at {rep.point}: {rep}")
            checked += 1
        rep0 = fiber_check(z, {n: 0 for n in z.base_names})
        betti = sum(ordinary_dims(z, 2 * chart.dimension))
        _expect(rep0.multiplicity == betti == chart.fixed_point_count() and rep0.distinct == 1,
                f"{z.describe()} at 0: {rep0}, Betti total {betti}")
        checked += 1
    return f"{checked} fibers over {len(scenarios)} scenarios"


def c11_gkm():
    for chart in (projective(2), flag(3)):
        z = build_zero_scheme(GroupSpec(3, "borel"), chart)
        g = gkm_graph(chart, z.torus)
        dims = gkm_ring_dims(g, CUTOFF)
        closed = equivariant_hilbert_series(z, CUTOFF).even_coefficients(CUTOFF)
        _expect(dims == closed, f"{chart.describe()}: GKM {dims}, zero scheme {closed}")
    return "P^2 and F_3 agree through degree 20"


def c12_weyl():
    pairs = [(GroupSpec(2, "embedded_sl2_borel"), GroupSpec(2, "embedded_sl2_kostant"), projective(4)),
             (GroupSpec(3, "borel"), GroupSpec(3, "kostant"), projective(2))]
    for gb, gk, chart in pairs:
        inv = weyl_invariant_dims(components(build_zero_scheme(gb, chart)), CUTOFF)
        dims = equivariant_hilbert_series(build_zero_scheme(gk, chart), CUTOFF).even_coefficients(CUTOFF)
        _expect(inv == dims, f"{chart.describe()}: invariants {inv}, Kostant {dims}")
    return "invariant dims equal Kostant dims"


def c13_singular():
    z = build_zero_scheme(GroupSpec(4, "borel"), grassmannian(2, 4))
    atlas = components(z)
    divisor = [lab for lab in atlas.labels if lab != (2, 3)]
    dims = subalgebra_dims(atlas, divisor, CUTOFF)
    want = HilbertSeries((1, 0, 1, 0, 2, 0, 1), (2, 2, 2)).even_coefficients(CUTOFF)
    _expect(dims == want, f"Schubert divisor {dims}, expected {want}")
    zb = build_zero_scheme(GroupSpec(2, "embedded_sl2_borel"), projective(3))
    disc = weyl_invariant_dims(components(zb), CUTOFF)
    want = HilbertSeries((1, 0, 1, 0, 1, 0, 1), (4,)).even_coefficients(CUTOFF)
    _expect(disc == want, f"discriminant {disc}, expected {want}")
    return "Schubert divisor and discriminant series match"


def c14_localization():
    total = 0
    for group, chart in ((GroupSpec(3, "borel"), projective(2)), (GroupSpec(4, "borel"), grassmannian(2, 4))):
        z = build_zero_scheme(group, chart)
        rep = localization_check(z, components(z))
        _expect(rep.passed, f"{chart.describe()}: {rep.failures[:3]}")
        total += rep.checks
    return f"{total} exact comparisons"


CRITERIA: list[tuple[int, str, float, Callable[[], str]]] = [
    (1, "sl2 Borel on P^n relations", 5, c1_sl2_projective),
    (2, "embedded SL2 Kostant on P^4, P^5", 5, c2_sl2_kostant),
    (3, "sl_{n+1} Borel on P^n atlas and GKM loci", 10, c3_sln_projective),
    (4, "embedded SL2 Borel on Gr(2,4)", 10, c4_gr24_sl2),
    (5, "flag F_3 families and Kostant relations", 10, c5_flag3),
    (6, "Kostant sl3 on P^2", 5, c6_kostant_p2),
    (7, "Bott-Samelson words in A_2", 10, c7_bott_samelson),
    (8, "B_3 uniform diagonalizer", 2, c8_b3_diagonalizer),
    (9, "dual-path Hilbert identity", 60, c9_dual_path),
    (10, "fiber counts", 30, c10_fibers),
    (11, "GKM comparison", 30, c11_gkm),
    (12, "Weyl invariance", 30, c12_weyl),
    (13, "singular restrictions", 30, c13_singular),
    (14, "localization", 10, c14_localization),
]


def run_criterion(number: int) -> CriterionResult:
    num, title, budget, fn = next(c for c in CRITERIA if c[0] == number)
    start = time.perf_counter()
    try:
        detail = fn()
        ok = True
    except _Fail as exc:
        detail, ok = str(exc), False
    except Exception as exc:  # a crash is a failed criterion, not a crashed suite
        detail = f"{type(exc).__name__}: {exc}\n{traceback.format_exc()}"
        ok = False
    elapsed = time.perf_counter() - start
    if ok and elapsed > budget:
        ok = False
        detail += " (over budget)"
    return CriterionResult(num, title, ok, detail, elapsed, budget)


def run_all(echo: Callable[[str], None] | None = None) -> list[CriterionResult]:
    results = []
    for num, *_ in CRITERIA:
        res = run_criterion(num)
        if echo:
            echo(res.line())
        results.append(res)
    return results
