"""Zero schemes of total vector fields and the cohomology computations built on them.

A scenario pairs a group form (Borel torus e + t, Kostant section, or the
point w = 0) with a chart.  The zero scheme of the resulting vector field is a
graded complete intersection whose coordinate ring is the equivariant
cohomology of the variety; everything here computes with that ring or with
the tuple algebra of its irreducible components.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import exactalg as ea
from .charts import (Chart, cartan_entry, chart_varspecs, chern_trace, coordinate_subspace_weights,
                     elementary_symmetric, fixed_point_coordinates, vector_field)
from .exactalg import Matrix
from .lie import (TorusChart, act_on_label, centralizer_basis, kostant_names, kostant_point,
                  is_regular, principal_triple, shift, sym_power_rep, uniform_diagonalizer)
from .symbolic import (DEFAULT_CUTOFF, DEFAULT_STEP_BUDGET, GroebnerBasis, HilbertSeries, MonomialOrder,
                       MultiPoly, Ring, VarSpec, buchberger, count_solutions_zero_dim, hilbert_series_ci,
                       is_homogeneous, krull_dimension, monomials_of_degree, primitive_integer,
                       render, standard_monomial_counts, triangular_substitution)

FORMS = ("borel", "kostant", "point", "embedded_sl2_borel", "embedded_sl2_kostant")


class ScenarioError(ValueError):
    """Raised for invalid group/variety combinations."""


class DimensionCertificateError(ValueError):
    """Raised when the zero scheme is not a complete intersection of the right dimension."""


class HilbertMismatchError(AssertionError):
    """Raised when the closed-form series disagrees with standard monomials."""


class InterpolationError(ValueError):
    """Raised when a component coordinate is not a polynomial of the expected degree."""


@dataclass(frozen=True)
class GroupSpec:
    """sl_n with a form; n = 2 forms act on larger spaces through symmetric powers."""

    n: int
    form: str

    def __post_init__(self):
        if self.form not in FORMS:
            raise ScenarioError(f"unknown group form {self.form!r}; expected one of {', '.join(FORMS)}")
        if self.n < 2:
            raise ScenarioError("sl_n needs n >= 2")
        if self.form.startswith("embedded_sl2") and self.n != 2:
            raise ScenarioError("embedded SL2 forms need n = 2")

    @property
    def base_kind(self) -> str:
        if self.form in ("borel", "embedded_sl2_borel"):
            return "solvable"
        if self.form in ("kostant", "embedded_sl2_kostant"):
            return "reductive"
        return "point"

    def describe(self) -> str:
        return f"sl{self.n} {self.form}"


# ----------------------------------------------------------------------------
# zero schemes

@dataclass
class ZeroScheme:
    group: GroupSpec
    chart: Chart
    weights: list[int]
    base_names: list[str]
    base_weights: list[int]
    torus: TorusChart | None
    ring: Ring
    matrix: Matrix
    generators: list[MultiPoly]
    relations: list[MultiPoly]
    substitutions: dict[str, MultiPoly]
    relation_ring: Ring
    relation_gb: GroebnerBasis
    budget: int = DEFAULT_STEP_BUDGET

    @property
    def base_kind(self) -> str:
        return self.group.base_kind

    @property
    def rank(self) -> int:
        return len(self.base_names)

    def base_ring(self) -> Ring:
        return Ring([VarSpec(n, w) for n, w in zip(self.base_names, self.base_weights)])

    def describe(self) -> str:
        return f"{self.group.describe()} on {self.chart.describe()}"

    def matrix_at(self, values: dict) -> Matrix:
        return self.matrix.map(lambda x: x.evaluate(values) if isinstance(x, MultiPoly) else x)

    def torus_diagonal(self, values: dict) -> list:
        return self.torus.diagonal([values[n] for n in self.base_names])


def _group_matrix(group: GroupSpec, chart: Chart, ring: Ring) -> tuple[Matrix, TorusChart | None, list, list]:
    """Symbolic matrix of the scenario, with torus chart and base variables."""
    N = chart.ambient
    sl2 = group.n == 2
    if not sl2 and group.n != N:
        raise ScenarioError(f"sl{group.n} acts on C^{group.n}, but {chart.describe()} needs {N}x{N} matrices")
    kind = group.base_kind
    if chart.kind == "bott_samelson" and kind == "reductive":
        raise ScenarioError("Bott-Samelson charts support only the Borel and point forms")
    if sl2:
        e2 = shift(2)
        if kind == "solvable":
            torus = TorusChart("sl2", N)
            v = ring.gen("v")
            m2 = e2 + principal_triple(2).h * v
            names, weights = ["v"], [2]
        elif kind == "reductive":
            torus = None
            t = ring.gen("t")
            m2 = e2 + centralizer_basis(2).basis[0] * t
            names, weights = ["t"], [4]
        else:
            torus, m2, names, weights = None, e2, [], []
        return sym_power_rep(N - 1, m2), torus, names, weights
    if kind == "solvable":
        torus = TorusChart("sl", N)
        m = shift(N) + torus.matrix([ring.gen(n) for n in torus.names])
        return m, torus, list(torus.names), [2] * (N - 1)
    if kind == "reductive":
        names = kostant_names(N)
        m = kostant_point(centralizer_basis(N), [ring.gen(n) for n in names])
        return m, None, names, [2 * k for k in range(2, N + 1)]
    return shift(N), None, [], []


def _base_specs(group: GroupSpec, chart: Chart) -> list[VarSpec]:
    N = chart.ambient
    kind = group.base_kind
    if kind == "point":
        return []
    if group.n == 2:
        return [VarSpec("v", 2)] if kind == "solvable" else [VarSpec("t", 4)]
    if kind == "solvable":
        return [VarSpec(f"v{i}", 2) for i in range(1, N)]
    return [VarSpec(n, 2 * k) for n, k in zip(kostant_names(N), range(2, N + 1))]


def build_zero_scheme(group: GroupSpec, chart: Chart, budget: int = DEFAULT_STEP_BUDGET) -> ZeroScheme:
    """Zero scheme of the total vector field, with homogeneity and dimension checked."""
    specs = chart_varspecs(chart)
    weights = [s.weight for s in specs]
    base = _base_specs(group, chart)
    ring = Ring(specs + base)
    m, torus, names, bweights = _group_matrix(group, chart, ring)
    gens = vector_field(chart, m, ring)
    for name, a, g in zip(chart.names, weights, gens):
        deg = is_homogeneous(g)
        if deg is None or (deg != "any" and deg != a + 2):
            raise DimensionCertificateError(
                f"component for {name} is not homogeneous of degree {a + 2}: {render(g, False)}")
    tri = triangular_substitution(gens, chart.names)
    rels = sorted((primitive_integer(r) for r in tri.relations),
                  key=lambda p: (is_homogeneous(p), tri.ring.order.key(p.leading_exp())))
    gb = buchberger(rels, tri.ring.order, budget) if rels else GroebnerBasis(tri.ring.order, [])
    dim = krull_dimension(gb)
    if dim != len(names):
        raise DimensionCertificateError(
            f"zero scheme has dimension {dim}, expected {len(names)} (not a complete intersection over the base)")
    return ZeroScheme(group, chart, weights, names, bweights, torus, ring, m, gens, rels,
                      tri.substitutions, tri.ring, gb, budget)


# ----------------------------------------------------------------------------
# presentations and Hilbert series

@dataclass
class Presentation:
    base_vars: list[tuple[str, int]]
    chart_vars: list[tuple[str, int]]
    substitutions: dict[str, str]
    relations: list[MultiPoly]
    verified: bool

    def rendered(self) -> list[str]:
        return [render(r) for r in self.relations]


def presentation(z: ZeroScheme, verify: bool = True) -> Presentation:
    """Relations after triangular substitution, checked to generate the input ideal."""
    base = set(z.base_names)
    chart_vars = [(n, w) for n, w in zip(z.relation_ring.names, z.relation_ring.weights) if n not in base]
    base_vars = list(zip(z.base_names, z.base_weights))
    ok = verify_presentation(z) if verify else False
    subs = {n: render(p, normalize=False) for n, p in z.substitutions.items()}
    return Presentation(base_vars, chart_vars, subs, list(z.relations), ok)


def verify_presentation(z: ZeroScheme) -> bool:
    """Mutual reduction: raw generators lie in (relations, substitutions) and conversely."""
    rr = z.relation_ring
    for g in z.generators:
        img = g.subs(z.substitutions, rr)
        if not z.relation_gb.contains(img):
            return False
    if not z.substitutions:
        gb_raw = buchberger(z.generators, z.ring.order, z.budget)
        return all(gb_raw.contains(z.ring.embed(r)) for r in z.relations)
    order = MonomialOrder(z.ring, z.substitutions)
    gb_raw = buchberger(z.generators, order, z.budget)
    for r in z.relations:
        if not gb_raw.contains(z.ring.embed(r)):
            return False
    for n, img in z.substitutions.items():
        if not gb_raw.contains(z.ring.gen(n) - z.ring.embed(img)):
            return False
    return True


def equivariant_hilbert_series(z: ZeroScheme, cutoff: int = DEFAULT_CUTOFF) -> HilbertSeries:
    """Closed complete-intersection series, cross-checked against standard monomials."""
    base = set(z.base_names)
    n_chart = sum(1 for n in z.relation_ring.names if n not in base)
    if len(z.relations) != n_chart:
        raise DimensionCertificateError(
            f"{len(z.relations)} relations for {n_chart} chart variables: not a complete intersection")
    degrees = [is_homogeneous(r) for r in z.relations]
    hs = hilbert_series_ci(z.relation_ring.weights, degrees)
    counts = standard_monomial_counts(z.relation_gb, cutoff)
    closed = hs.even_coefficients(cutoff)
    if counts != closed:
        raise HilbertMismatchError(f"closed form {closed} disagrees with standard monomials {counts}")
    return hs


def ordinary_dims(z: ZeroScheme, cutoff: int = DEFAULT_CUTOFF) -> list[int]:
    """Per-degree dims of the fiber over base = 0 (ordinary cohomology)."""
    chart_ring = z.relation_ring.drop(z.base_names)
    rels = [r.subs({n: 0 for n in z.base_names}, chart_ring) for r in z.relations]
    gb = buchberger(rels, chart_ring.order, z.budget)
    return standard_monomial_counts(gb, cutoff)


# ----------------------------------------------------------------------------
# fibers

@dataclass
class FiberReport:
    point: dict
    multiplicity: int
    distinct: int
    squarefree: bool
    expected: int
    regular_semisimple: bool
    passed: bool


def specialize(z: ZeroScheme, values: dict) -> GroebnerBasis:
    chart_ring = z.relation_ring.drop(z.base_names)
    rels = [r.subs({n: values[n] for n in z.base_names}, chart_ring) for r in z.relations]
    return buchberger(rels, chart_ring.order, z.budget)


def _is_regular_semisimple(m: Matrix) -> bool:
    cp = [ea.as_scalar(c) for c in reversed(ea.char_poly(m))]
    return ea.upoly_is_squarefree(cp)


def fiber_check(z: ZeroScheme, values: dict, expected: int | None = None) -> FiberReport:
    """Count the fiber over a base point.

    Over a regular semisimple point the fiber must be reduced with one point
    per fixed point; over other points only the length is predicted.
    """
    m = z.matrix_at(values)
    if not is_regular(m):
        raise ValueError(f"base point {values} gives a non-regular matrix")
    rs = _is_regular_semisimple(m)
    fc = count_solutions_zero_dim(specialize(z, values))
    exp = z.chart.fixed_point_count() if expected is None else expected
    if rs:
        passed = fc.multiplicity == fc.distinct == exp and fc.squarefree
    else:
        passed = fc.multiplicity == exp
    return FiberReport(dict(values), fc.multiplicity, fc.distinct, fc.squarefree, exp, rs, passed)


def random_regular_point(z: ZeroScheme, rng: random.Random, bound: int = 30) -> dict:
    """A random integral base point over which e + w is regular semisimple."""
    while True:
        vals = {n: Fraction(rng.randint(-bound, bound)) for n in z.base_names}
        if _is_regular_semisimple(z.matrix_at(vals)):
            return vals


# ----------------------------------------------------------------------------
# component atlases

@dataclass
class ComponentAtlas:
    chart: Chart
    base_ring: Ring
    torus: TorusChart | None
    labels: list
    images: dict  # label -> {chart var: MultiPoly over base_ring}
    weights: dict  # chart var -> weight

    def coordinate(self, label, name: str) -> MultiPoly:
        return self.images[label][name]


def _sample_regular(torus: TorusChart, rng: random.Random, bound: int = 40) -> list[Fraction]:
    while True:
        vals = [Fraction(rng.randint(-bound, bound)) for _ in torus.names]
        diag = torus.diagonal(vals)
        if len(set(diag)) == len(diag):
            return vals


class _Interpolator:
    """Homogeneous interpolation of a fixed degree from a fixed list of sample points.

    A unisolvent subset of the points is chosen once; every other point
    serves to verify the interpolant.
    """

    def __init__(self, points: Sequence[Sequence[Fraction]], ring: Ring, degree: int):
        self.ring = ring
        self.exps = monomials_of_degree(ring, degree)
        self.rows = [self._row(pt) for pt in points]
        chosen = []
        rank = 0
        for i, row in enumerate(self.rows):
            r = ea.rank([self.rows[j] for j in chosen] + [row])
            if r > rank:
                chosen.append(i)
                rank = r
            if rank == len(self.exps):
                break
        self.chosen = chosen
        self.complete = rank == len(self.exps)
        if self.complete:
            self.inv = ea.inverse(Matrix.from_rows([self.rows[j] for j in chosen]))

    def _row(self, pt) -> list[Fraction]:
        out = []
        for e in self.exps:
            t = Fraction(1)
            for x, k in zip(pt, e):
                if k:
                    t *= x ** k
            out.append(t)
        return out

    def __call__(self, values: Sequence[Fraction], what: str) -> MultiPoly:
        if not self.complete:
            raise InterpolationError(f"{what}: samples do not determine a polynomial of the expected degree")
        coeffs = ea.apply(self.inv, [values[j] for j in self.chosen])
        for row, val in zip(self.rows, values):
            if sum((a * c for a, c in zip(row, coeffs) if c), Fraction(0)) != val:
                raise InterpolationError(
                    f"{what}: coordinate is not a homogeneous polynomial of the expected degree")
        return MultiPoly(self.ring, {tuple(e): c for e, c in zip(self.exps, coeffs) if c})


def components(z: ZeroScheme, seed: int = 0) -> ComponentAtlas:
    """Parametrize every irreducible component over the Borel torus.

    Each fixed point label i gives the component w -> M_w zeta_i; its chart
    coordinates are interpolated from exact samples and verified by
    substitution into every generator.
    """
    if z.base_kind != "solvable":
        raise ScenarioError("components need a Borel (solvable) base")
    base_ring = Ring([VarSpec(n, 2) for n in z.base_names])
    weights = dict(zip(z.chart.names, z.weights))
    labels = z.chart.labels()
    if z.chart.kind == "bott_samelson":
        images = _bott_samelson_components(z, base_ring)
    else:
        rng = random.Random(seed)
        amax = max(z.weights)
        count = (amax // 2 + 1) ** z.rank
        points = [_sample_regular(z.torus, rng) for _ in range(count)]
        samples = {lab: [] for lab in labels}
        for pt in points:
            M = uniform_diagonalizer(z.torus.matrix(pt))
            for lab in labels:
                samples[lab].append(fixed_point_coordinates(z.chart, lab, M))
        interp = {a: _Interpolator(points, base_ring, a) for a in sorted(set(z.weights))}
        images = {}
        for lab in labels:
            img = {}
            for j, name in enumerate(z.chart.names):
                vals = [s[j] for s in samples[lab]]
                img[name] = interp[weights[name]](vals, f"label {lab}, coordinate {name}")
            images[lab] = img
    atlas = ComponentAtlas(z.chart, base_ring, z.torus, labels, images, weights)
    for lab in labels:
        mapping = dict(images[lab])
        for g in z.generators:
            if not g.subs(mapping, base_ring).is_zero():
                raise InterpolationError(f"component {lab} does not satisfy {render(g, False)}")
    return atlas


def _bott_samelson_components(z: ZeroScheme, base_ring: Ring) -> dict:
    """Solve x_j (x_j + sum_k b_jk x_k + alpha_{i_j}(w)) = 0 branch by branch."""
    word, _ = z.chart.params
    diag = z.torus.diagonal(base_ring.gens())
    images = {}
    for lab in z.chart.labels():
        xs = []
        for j, (ij, bit) in enumerate(zip(word, lab)):
            if bit == 0:
                xs.append(base_ring.zero)
                continue
            alpha = diag[ij - 1] - diag[ij]
            val = -alpha
            for k in range(j):
                b = cartan_entry(ij, word[k])
                if b:
                    val = val - xs[k] * b
            xs.append(val)
        images[lab] = dict(zip(z.chart.names, xs))
    return images


def component_table(atlas: ComponentAtlas) -> list[tuple]:
    """(label, {coordinate: rendered polynomial}) for reports."""
    return [(lab, {n: render(p, normalize=False) for n, p in atlas.images[lab].items()})
            for lab in atlas.labels]


# ----------------------------------------------------------------------------
# tuple algebras of components

class TupleAlgebra:
    """The algebra generated by base and chart variables restricted to components.

    An element is a tuple of homogeneous polynomials in the base variables,
    one per chosen component.  Degree-d pieces are spans of
    v_i * (degree d-2 piece) and images of chart monomials of degree d,
    which is the span of all ambient monomials of degree d.
    """

    def __init__(self, atlas: ComponentAtlas, labels: Sequence | None = None):
        self.atlas = atlas
        self.labels = list(atlas.labels if labels is None else labels)
        self.ring = atlas.base_ring
        self.r = self.ring.nvars
        names = list(atlas.chart.names)
        self.chart_ring = Ring([VarSpec(n, atlas.weights[n]) for n in names])
        self._image_cache: dict = {}

    def _monos(self, k: int):
        return monomials_of_degree(self.ring, 2 * k)

    def _chart_image(self, exp: tuple) -> list[MultiPoly]:
        if exp in self._image_cache:
            return self._image_cache[exp]
        if not any(exp):
            out = [self.ring.one for _ in self.labels]
        else:
            j = next(i for i, k in enumerate(exp) if k)
            prev = list(exp)
            prev[j] -= 1
            base = self._chart_image(tuple(prev))
            name = self.chart_ring.names[j]
            out = [b * self.atlas.images[lab][name] for b, lab in zip(base, self.labels)]
        self._image_cache[exp] = out
        return out

    def _vector(self, polys: Sequence[MultiPoly], k: int) -> list[Fraction]:
        monos = self._monos(k)
        index = {e: i for i, e in enumerate(monos)}
        vec = [Fraction(0)] * (len(monos) * len(self.labels))
        off = len(monos)
        for l, p in enumerate(polys):
            for e, c in p.terms.items():
                vec[l * off + index[e]] = c
        return vec

    def _shift_maps(self, k: int) -> list[np.ndarray]:
        """For each base variable, index map degree k-1 monomials -> degree k."""
        lo = self._monos(k - 1)
        hi = {e: i for i, e in enumerate(self._monos(k))}
        maps = []
        for i in range(self.r):
            maps.append(np.array([hi[e[:i] + (e[i] + 1,) + e[i + 1:]] for e in lo], dtype=np.int64))
        return maps

    def _make_space(self, ncols: int, engine: str, prime: int):
        if engine == "exact":
            return ea.ExactRowSpace(ncols)
        return ea.ModularRowSpace(ncols, prime)

    def bases(self, cutoff: int, engine: str = "auto", prime: int = ea.MODULAR_PRIMES[0]):
        """Yield (degree, row space) for even degrees up to the cutoff."""
        s = len(self.labels)
        if s == 0:
            for d in range(0, cutoff + 1, 2):
                yield d, None
            return
        if engine == "auto":
            widest = len(self._monos(cutoff // 2)) * s
            engine = "exact" if widest <= 60 else "modular"
        prev = None
        for d in range(0, cutoff + 1, 2):
            k = d // 2
            nk = len(self._monos(k))
            space = self._make_space(nk * s, engine, prime)
            blocks = []
            if prev is not None and prev.rank and self.r:
                nk1 = len(self._monos(k - 1))
                maps = self._shift_maps(k)
                dtype = prev.rows.dtype
                for mp in maps:
                    out = np.zeros((prev.rank, nk * s), dtype=dtype)
                    if dtype == object:
                        out[:] = Fraction(0)
                    for l in range(s):
                        out[:, l * nk + mp] = prev.rows[:, l * nk1:(l + 1) * nk1]
                    blocks.append(out)
            chart_monos = monomials_of_degree(self.chart_ring, d)
            rows = [space.convert(self._vector(self._chart_image(e), k)) for e in chart_monos]
            if rows:
                blocks.append(np.array(rows, dtype=rows[0].dtype))
            for b in blocks:
                space.add(b)
            prev = space
            yield d, space

    def dims(self, cutoff: int = DEFAULT_CUTOFF, engine: str = "auto") -> list[int]:
        return [0 if sp is None else sp.rank for _, sp in self.bases(cutoff, engine)]


def subalgebra_dims(atlas: ComponentAtlas, labels: Sequence | None = None,
                    cutoff: int = DEFAULT_CUTOFF, engine: str = "auto") -> list[int]:
    """Per even degree, dimension of the algebra of the chosen components."""
    return TupleAlgebra(atlas, labels).dims(cutoff, engine)


# ----------------------------------------------------------------------------
# Weyl invariants

def weyl_group_for(atlas: ComponentAtlas) -> list[tuple[int, ...]]:
    return atlas.torus.weyl_group()


def _inverse_perm(p: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def _substitution_matrix(ring: Ring, images: list[MultiPoly], k: int) -> np.ndarray:
    """Matrix sending degree-k coefficient vectors of f(v) to those of f(images)."""
    monos = monomials_of_degree(ring, 2 * k)
    index = {e: i for i, e in enumerate(monos)}
    out = np.zeros((len(monos), len(monos)), dtype=object)
    out[:] = Fraction(0)
    for a, e in enumerate(monos):
        p = ring.one
        for img, kk in zip(images, e):
            if kk:
                p = p * img ** kk
        for te, c in p.terms.items():
            out[a, index[te]] = c
    return out


def weyl_invariant_dims(atlas: ComponentAtlas, cutoff: int = DEFAULT_CUTOFF,
                        group: Sequence[Sequence[int]] | None = None,
                        labels: Sequence | None = None) -> list[int]:
    """Per even degree, dimension of W-invariants in the tuple algebra.

    sigma acts by (sigma F)_{sigma(i)}(u) = F_i(sigma^{-1} u), which realizes
    the action on (w, M_w zeta) pairs; invariants are the image of the
    averaging operator.  A label subset must be a union of orbits.
    """
    if atlas.torus is None:
        raise ScenarioError("Weyl action needs a torus")
    group = list(group) if group is not None else weyl_group_for(atlas)
    kind = atlas.chart.kind
    alg = TupleAlgebra(atlas, labels)
    labels = alg.labels
    lindex = {lab: i for i, lab in enumerate(labels)}
    for sigma in group:
        for lab in labels:
            if act_on_label(kind, sigma, lab) not in lindex:
                raise ScenarioError(f"label subset is not Weyl-stable: {lab} moves outside it")
    ring = atlas.base_ring
    gens = ring.gens()
    subs = []
    for sigma in group:
        inv = _inverse_perm(sigma)
        images = atlas.torus.permuted(inv, gens)
        perm_labels = [lindex[act_on_label(kind, sigma, lab)] for lab in labels]
        subs.append((perm_labels, images))
    s = len(labels)
    out = []
    for d, space in alg.bases(cutoff, engine="exact"):
        k = d // 2
        nk = len(monomials_of_degree(ring, d))
        if space is None or space.rank == 0:
            out.append(0)
            continue
        basis = space.rows
        avg = np.zeros_like(basis)
        avg[:] = Fraction(0)
        for perm_labels, images in subs:
            S = _substitution_matrix(ring, images, k)
            moved = np.zeros_like(basis)
            moved[:] = Fraction(0)
            for l in range(s):
                block = basis[:, l * nk:(l + 1) * nk].dot(S)
                t = perm_labels[l]
                moved[:, t * nk:(t + 1) * nk] = block
            avg = avg + moved
        inv_space = ea.ExactRowSpace(nk * s)
        inv_space.add(avg)
        out.append(inv_space.rank)
    return out


# ----------------------------------------------------------------------------
# GKM graphs

@dataclass
class GKMGraph:
    vertices: list
    edges: list  # (u, v, character as integer vector on torus coordinates)
    torus_names: list[str]

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = {v: set() for v in self.vertices}
        for a, b, _ in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for y in adj[stack.pop()]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.vertices)


def _character(torus: TorusChart, a: int, b: int) -> tuple[int, ...]:
    """eta_a - eta_b as an integer vector, scaled to coprime entries."""
    ring = Ring(torus.names)
    diag = torus.diagonal(ring.gens())
    diff = diag[a] - diag[b]
    vec = [diff.terms.get(tuple(1 if j == i else 0 for j in range(ring.nvars)), Fraction(0))
           for i in range(ring.nvars)]
    den = 1
    for x in vec:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def gkm_graph(chart: Chart, torus: TorusChart) -> GKMGraph:
    """Fixed points with edges along T-invariant curves and their characters."""
    if chart.kind not in ("projective", "grassmannian", "flag"):
        raise ScenarioError(f"no GKM graph for {chart.kind}")
    verts = chart.labels()
    edges = []
    if chart.kind == "projective":
        for i, j in itertools.combinations(verts, 2):
            edges.append((i, j, _character(torus, i, j)))
    elif chart.kind == "grassmannian":
        for S, T in itertools.combinations(verts, 2):
            a = set(S) - set(T)
            b = set(T) - set(S)
            if len(a) == 1:
                edges.append((S, T, _character(torus, a.pop(), b.pop())))
    else:
        for p, q in itertools.combinations(verts, 2):
            diff = [i for i in range(len(p)) if p[i] != q[i]]
            if len(diff) == 2 and p[diff[0]] == q[diff[1]] and p[diff[1]] == q[diff[0]]:
                edges.append((p, q, _character(torus, p[diff[0]], p[diff[1]])))
    return GKMGraph(verts, edges, list(torus.names))


def _restriction_matrix(r: int, k: int, char: Sequence[int]) -> np.ndarray:
    """Matrix restricting degree-k polynomials to the hyperplane char = 0."""
    ring = Ring([f"u{i}" for i in range(r)])
    gens = ring.gens()
    piv = next(i for i, c in enumerate(char) if c)
    images = list(gens)
    expr = ring.zero
    for i, c in enumerate(char):
        if i != piv and c:
            expr = expr + gens[i] * Fraction(-c, char[piv])
    images[piv] = expr
    return _substitution_matrix(ring, images, k)


def gkm_ring_dims(graph: GKMGraph, cutoff: int = DEFAULT_CUTOFF) -> list[int]:
    """Per even degree, dimension of tuples satisfying the edge congruences."""
    r = len(graph.torus_names)
    ring = Ring(graph.torus_names)
    s = len(graph.vertices)
    vindex = {v: i for i, v in enumerate(graph.vertices)}
    out = []
    for d in range(0, cutoff + 1, 2):
        k = d // 2
        nk = len(monomials_of_degree(ring, d))
        rows = []
        for a, b, char in graph.edges:
            R = _restriction_matrix(r, k, char)
            ia, ib = vindex[a], vindex[b]
            # constraint: restrict(f_a - f_b) = 0, one row per output monomial
            for col in range(nk):
                if not any(R[i, col] != 0 for i in range(nk)):
                    continue
                row = [Fraction(0)] * (nk * s)
                for i in range(nk):
                    c = R[i, col]
                    if c != 0:
                        row[ia * nk + i] += c
                        row[ib * nk + i] -= c
                rows.append(row)
        rk = ea.rank(rows) if rows else 0
        out.append(nk * s - rk)
    return out


# ----------------------------------------------------------------------------
# intersections and localization

def intersection_locus_matches(atlas: ComponentAtlas, a, b, char: Sequence[int]) -> bool:
    """True iff components a and b meet exactly over the hyperplane char = 0.

    The ideal of coordinate differences must contain the character and
    vanish identically on its hyperplane.
    """
    ring = atlas.base_ring
    diffs = [atlas.images[a][n] - atlas.images[b][n] for n in atlas.chart.names]
    lin = ring.zero
    for c, g in zip(char, ring.gens()):
        lin = lin + g * c
    gb = buchberger(diffs, ring.order)
    if not gb.contains(lin):
        return False
    piv = next(i for i, c in enumerate(char) if c)
    name = ring.names[piv]
    sol = (ring.gen(name) * char[piv] - lin) * Fraction(1, char[piv])
    return all(d.subs({name: sol}).is_zero() for d in diffs)


@dataclass
class LocalizationReport:
    checks: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def localization_check(z: ZeroScheme, atlas: ComponentAtlas, ks: Sequence[int] | None = None,
                       samples: int = 5, seed: int = 0) -> LocalizationReport:
    """Compare Chern traces on each component with localized fixed-point values."""
    if z.chart.kind not in ("projective", "grassmannian"):
        raise ScenarioError("localization needs a projective or grassmannian chart")
    rank = 1 if z.chart.kind == "projective" else z.chart.params[0]
    ks = sorted({1, rank}) if ks is None else list(ks)
    traces = {k: chern_trace(z.chart, "tautological-sub", k, z.matrix, z.ring) for k in ks}
    rng = random.Random(seed)
    report = LocalizationReport(0)
    for _ in range(samples):
        vals = _sample_regular(z.torus, rng)
        point = dict(zip(z.base_names, vals))
        diag = z.torus.diagonal(vals)
        for lab in atlas.labels:
            coords = {n: p.evaluate(point) for n, p in atlas.images[lab].items()}
            full = dict(point, **coords)
            for k in ks:
                lhs = traces[k].evaluate(full)
                rhs = elementary_symmetric(coordinate_subspace_weights(z.chart, lab, diag), k)
                report.checks += 1
                if lhs != rhs:
                    report.failures.append((lab, k, dict(point), lhs, rhs))
    return report
