"""sl_n data: principal triples, Kostant sections, tori, Weyl groups, diagonalizers."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import exactalg as ea
from .exactalg import Matrix
from .symbolic import MultiPoly, RationalFunction, Ring


class NotRegularError(ValueError):
    """Raised when a torus element has vanishing roots."""

    def __init__(self, message: str, roots: Sequence[tuple[int, int]] = ()):
        super().__init__(message)
        self.roots = list(roots)


def shift(n: int) -> Matrix:
    """Unit superdiagonal nilpotent of size n."""
    return Matrix.build(n, n, lambda i, j: 1 if j == i + 1 else 0)


@dataclass(frozen=True)
class SlContext:
    n: int
    e: Matrix
    f: Matrix
    h: Matrix
    torus_basis: tuple[Matrix, ...]
    roots: tuple[tuple[int, int], ...]
    weyl: tuple[tuple[int, ...], ...]


def principal_triple(n: int) -> SlContext:
    """The principal sl_2 triple of sl_n, with bracket identities checked."""
    if n < 2:
        raise ValueError(f"sl_n needs n >= 2, got {n}")
    e = shift(n)
    f = Matrix.build(n, n, lambda i, j: (j + 1) * (n - j - 1) if i == j + 1 else 0)
    h = Matrix.diag([n - 1 - 2 * i for i in range(n)])
    if ea.commutator(h, e) != 2 * e or ea.commutator(h, f) != -2 * f or ea.commutator(e, f) != h:
        raise AssertionError("principal triple fails the sl_2 relations")
    torus = tuple(Matrix.diag([1 if k == i else (-1 if k == i + 1 else 0) for k in range(n)])
                  for i in range(n - 1))
    roots = tuple((i, j) for i in range(n) for j in range(n) if i != j)
    weyl = tuple(itertools.permutations(range(n)))
    return SlContext(n, e, f, h, torus, roots, weyl)


def ad_operator(m: Matrix) -> Matrix:
    """Matrix of X -> mX - Xm on gl_n in the row-major basis E_ij."""
    n = m.rows
    size = n * n
    entries = [Fraction(0)] * (size * size)
    for i in range(n):
        for j in range(n):
            col = i * n + j  # image of E_ij
            for k in range(n):
                # m E_ij has column j equal to m[:, i]
                entries[(k * n + j) * size + col] += m[k, i]
                # E_ij m has row i equal to m[j, :]
                entries[(i * n + k) * size + col] -= m[j, k]
    return Matrix(size, size, entries)


def _vec_to_matrix(vec: Sequence, n: int) -> Matrix:
    return Matrix(n, n, vec)


def centralizer_dimension(m: Matrix) -> int:
    """Dimension of the centralizer of m inside gl_n."""
    return len(ea.kernel_basis(ad_operator(m)))


def is_regular(m: Matrix) -> bool:
    """True iff the centralizer of m in sl_n has dimension n - 1."""
    if not m.is_square():
        raise ea.ShapeError("is_regular needs a square matrix")
    if m.trace() != 0:
        raise ValueError("is_regular expects a traceless matrix")
    return centralizer_dimension(m) == m.rows


@dataclass(frozen=True)
class KostantSection:
    n: int
    basis: tuple[Matrix, ...]
    coordinate_degrees: tuple[int, ...]

    def point(self, coords: Sequence) -> Matrix:
        return kostant_point(self, coords)


def centralizer_basis(ctx: "SlContext | int") -> KostantSection:
    """Normalized ad_h weight basis b_1..b_{n-1} of the centralizer of f.

    b_k lives on the k-th subdiagonal and has entry (k+1, 1) equal to 1
    (1-indexed), which reproduces the section [[0,1,0],[c2,0,1],[c3,c2,0]].
    Accepts a principal triple context or just n.
    """
    return _centralizer_basis(ctx.n if isinstance(ctx, SlContext) else int(ctx))


@lru_cache(maxsize=None)
def _centralizer_basis(n: int) -> KostantSection:
    ctx = principal_triple(n)
    basis = []
    for k in range(1, n):
        positions = [(i + k, i) for i in range(n - k)]
        # ad_f restricted to matrices supported on the k-th subdiagonal
        cols = []
        for (a, b) in positions:
            x = Matrix.build(n, n, lambda i, j: 1 if (i, j) == (a, b) else 0)
            cols.append(list(ea.commutator(ctx.f, x).entries))
        op = Matrix(n * n, len(positions), [cols[c][r] for r in range(n * n) for c in range(len(positions))])
        ker = ea.kernel_basis(op)
        if len(ker) != 1:
            raise AssertionError(f"centralizer of f has weight space of dimension {len(ker)} at k={k}")
        vec = ker[0]
        scale = vec[0]  # coefficient at (k, 0), i.e. entry (k+1, 1)
        vals = {pos: c / scale for pos, c in zip(positions, vec)}
        b = Matrix.build(n, n, lambda i, j: vals.get((i, j), 0))
        if ea.commutator(ctx.f, b) != Matrix.zeros(n) or ea.commutator(ctx.h, b) != -2 * k * b:
            raise AssertionError("centralizer basis element fails its defining identities")
        basis.append(b)
    degrees = tuple(2 * k for k in range(2, n + 1))
    return KostantSection(n, tuple(basis), degrees)


def kostant_point(section: KostantSection, coords: Sequence) -> Matrix:
    """e + sum c_{k+1} b_k for coordinates (c_2, ..., c_n)."""
    n = section.n
    if len(coords) != n - 1:
        raise ValueError(f"expected {n - 1} Kostant coordinates, got {len(coords)}")
    m = shift(n)
    for c, b in zip(coords, section.basis):
        m = m + b * c
    return m


def kostant_names(n: int) -> list[str]:
    return ["t"] if n == 2 else [f"c{k}" for k in range(2, n + 1)]


@lru_cache(maxsize=None)
def _section_char_poly(n: int):
    ring = Ring([(f"c{k}", 2 * k) for k in range(2, n + 1)])
    sec = centralizer_basis(n)
    cp = ea.char_poly(kostant_point(sec, ring.gens()))
    return ring, [ring.const(c) if not isinstance(c, MultiPoly) else c for c in cp]


def chi(w: Matrix) -> list:
    """Kostant coordinates (c_2..c_n) of the section point conjugate to e + w.

    Equates characteristic-polynomial coefficients; coefficient k depends on
    c_k linearly (nonzero constant) and on lower coordinates only, so the
    system is solved by back substitution.  Works for rational or polynomial w.
    """
    n = w.rows
    ring, cp = _section_char_poly(n)
    target = ea.char_poly(shift(n) + w)
    if target[1] != 0:
        raise ValueError("chi expects a traceless torus element")
    solved: dict[str, object] = {}
    for k in range(2, n + 1):
        name = f"c{k}"
        coeff = cp[k]
        i = ring.index[name]
        lin = [(e, c) for e, c in coeff.terms.items() if e[i]]
        if len(lin) != 1 or lin[0][0][i] != 1 or sum(lin[0][0]) != 1:
            raise AssertionError("section characteristic polynomial is not triangular")
        lam = lin[0][1]
        rest = coeff - ring.gen(name) * lam
        rest_val = _evaluate_in(rest, solved)
        solved[name] = (target[k] - rest_val) * (1 / lam)
    return [solved[f"c{k}"] for k in range(2, n + 1)]


def _evaluate_in(p: MultiPoly, values: dict):
    """Evaluate p at values that are scalars or polynomials of a common ring."""
    polys = [v for v in values.values() if isinstance(v, MultiPoly)]
    if polys:
        target = polys[0].ring
        full = {n: values.get(n, 0) for n in p.ring.names}
        return p.subs(full, target)
    if not p.terms:
        return Fraction(0)
    return p.evaluate({n: values.get(n, 0) for n in p.ring.names})


# ----------------------------------------------------------------------------
# tori

class TorusChart:
    """Coordinates on a torus of diagonal matrices.

    ``kind`` is ``"sl"`` for (v_1..v_{n-1}) -> diag(0, v_1, ..) - trace/n, or
    ``"sl2"`` for v -> v * dρ(h) acting on a space of dimension ``size``.
    """

    def __init__(self, kind: str, size: int):
        if kind not in ("sl", "sl2"):
            raise ValueError(f"unknown torus kind {kind}")
        self.kind = kind
        self.size = size
        self.names = ["v"] if kind == "sl2" else [f"v{i}" for i in range(1, size)]

    @property
    def rank(self) -> int:
        return len(self.names)

    def diagonal(self, values: Sequence) -> list:
        """Diagonal entries for coordinate values (scalars or polynomials)."""
        n = self.size
        if self.kind == "sl2":
            (v,) = values
            return [v * (n - 1 - 2 * i) for i in range(n)]
        total = Fraction(0)
        for x in values:
            total = total + x
        shift_ = total * Fraction(-1, n)
        return [shift_] + [x + shift_ for x in values]

    def matrix(self, values: Sequence) -> Matrix:
        return Matrix.diag(self.diagonal(values))

    def coordinates(self, diagonal: Sequence) -> list:
        """Inverse of :meth:`diagonal`."""
        if self.kind == "sl2":
            return [diagonal[0] * Fraction(1, self.size - 1)]
        return [d - diagonal[0] for d in diagonal[1:]]

    def permuted(self, perm: Sequence[int], values: Sequence) -> list:
        """Coordinates of the torus element with entry perm[i] equal to entry i."""
        diag = self.diagonal(values)
        new = [None] * self.size
        for i, p in enumerate(perm):
            new[p] = diag[i]
        return self.coordinates(new)

    def weyl_group(self) -> list[tuple[int, ...]]:
        n = self.size
        if self.kind == "sl2":
            return [tuple(range(n)), tuple(range(n - 1, -1, -1))]
        return list(itertools.permutations(range(n)))


# ----------------------------------------------------------------------------
# uniform diagonalizer

def _diag_entries(w: Matrix) -> list:
    for i in range(w.rows):
        for j in range(w.cols):
            if i != j and w[i, j] != 0:
                raise ValueError("expected a diagonal torus element")
    return [w[i, i] for i in range(w.rows)]


def vanishing_roots(w: Matrix) -> list[tuple[int, int]]:
    d = _diag_entries(w)
    return [(i, j) for i in range(len(d)) for j in range(i + 1, len(d)) if d[i] - d[j] == 0]


def uniform_diagonalizer(w: Matrix) -> Matrix:
    """Unipotent upper-triangular M with M w = (e + w) M.

    The unknowns m_ij (i < j) satisfy m_ij (w_j - w_i) - m_{i+1,j} = [j = i+1];
    the system is solved over the fraction field for polynomial w or over Q.
    """
    n = w.rows
    d = _diag_entries(w)
    bad = vanishing_roots(w)
    if bad:
        raise NotRegularError("torus element is not regular; vanishing roots: "
                              + ", ".join(f"e{i}-e{j}" for i, j in bad), bad)
    unknowns = [(i, j) for i in range(n) for j in range(i + 1, n)]
    index = {u: k for k, u in enumerate(unknowns)}
    size = len(unknowns)
    symbolic = any(isinstance(x, MultiPoly) for x in d)
    rows = []
    rhs = []
    for (i, j) in unknowns:
        row = [Fraction(0)] * size
        row[index[(i, j)]] = d[j] - d[i]
        if i + 1 < j:
            row[index[(i + 1, j)]] = Fraction(-1)
            rhs.append(Fraction(0))
        else:
            rhs.append(Fraction(1))
        rows.append(row)
    if size == 0:
        return Matrix.identity(n)
    mat = Matrix(size, size, [x for r in rows for x in r])
    if symbolic:
        sol = ea.solve_linear_over_fraction_field(mat, rhs)
        one, zero = RationalFunction(d[0].ring.one), RationalFunction(d[0].ring.zero)
    else:
        sol = ea.solve_rational(mat, rhs)
        one, zero = Fraction(1), Fraction(0)
    vals = {u: s for u, s in zip(unknowns, sol)}
    m = Matrix(n, n, [one if i == j else vals.get((i, j), zero) for i in range(n) for j in range(n)])
    wd = Matrix(n, n, [(d[i] if i == j else 0) for i in range(n) for j in range(n)])
    if not (m * wd - (shift(n) + wd) * m).is_zero():
        raise AssertionError("uniform diagonalizer fails the conjugation identity")
    return m


# ----------------------------------------------------------------------------
# symmetric powers and Weyl orbits

def sym_power_rep(n: int, m: Matrix) -> Matrix:
    """Action of a traceless 2x2 matrix on the degree-n binomial symmetric power."""
    if m.shape != (2, 2):
        raise ea.ShapeError("sym_power_rep expects a 2x2 matrix")
    if m[0, 0] + m[1, 1] != 0:
        raise ValueError("sym_power_rep expects a traceless matrix")
    a, b, c = m[0, 0], m[0, 1], m[1, 0]
    size = n + 1

    def entry(i, j):
        out = Fraction(0)
        if i == j:
            out = out + a * (n - 2 * i)
        if j == i + 1:
            out = out + b
        if i == j + 1:
            out = out + c * (i * (n + 1 - i))
        return out

    return Matrix(size, size, [entry(i, j) for i in range(size) for j in range(size)])


def act_on_label(kind: str, perm: Sequence[int], label):
    """Image of a fixed-point label under a permutation of the coordinate axes."""
    if kind == "projective":
        return perm[label]
    if kind == "grassmannian":
        return tuple(sorted(perm[s] for s in label))
    if kind == "flag":
        return tuple(perm[s] for s in label)
    raise ValueError(f"no Weyl action on labels of kind {kind}")


def weyl_orbits(labels: Sequence, kind: str, group: Sequence[Sequence[int]]) -> list[list]:
    """Partition of labels into orbits, each orbit in label order."""
    order = {lab: k for k, lab in enumerate(labels)}
    seen = set()
    orbits = []
    for lab in labels:
        if lab in seen:
            continue
        orbit = {act_on_label(kind, g, lab) for g in group}
        orbit = sorted(orbit, key=lambda x: order[x])
        seen.update(orbit)
        orbits.append(orbit)
    return orbits


def identity_group(n: int) -> list[tuple[int, ...]]:
    return [tuple(range(n))]
