"""Affine charts of projective spaces, Grassmannians, flag and Bott-Samelson varieties.

Each chart is the open cell around the distinguished fixed point; the vector
field of a matrix m is written in the chart coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from . import exactalg as ea
from .exactalg import Matrix
from .lie import principal_triple
from .symbolic import MultiPoly, Ring, VarSpec


class ChartError(ValueError):
    """Raised for unsupported chart operations or points outside a chart."""


@dataclass(frozen=True)
class Chart:
    """Chart descriptor.

    ``kind`` is one of projective, grassmannian, flag, bott_samelson; ``params``
    holds (n,), (k, n), (n,) or (word, n) respectively, where for Bott-Samelson
    n is the size of the sl_n matrices and the word uses simple roots 1..n-1.
    """

    kind: str
    params: tuple
    names: tuple[str, ...] = field(default=())

    @property
    def ambient(self) -> int:
        """Size of the matrices acting on the chart."""
        if self.kind == "projective":
            return self.params[0] + 1
        if self.kind in ("grassmannian",):
            return self.params[1]
        if self.kind == "flag":
            return self.params[0]
        return self.params[1]

    @property
    def dimension(self) -> int:
        return len(self.names)

    def labels(self) -> list:
        """Fixed-point labels in canonical order; the first is the origin."""
        if self.kind == "projective":
            return list(range(self.params[0] + 1))
        if self.kind == "grassmannian":
            k, n = self.params
            return list(itertools.combinations(range(n), k))
        if self.kind == "flag":
            return list(itertools.permutations(range(self.params[0])))
        word = self.params[0]
        return list(itertools.product((0, 1), repeat=len(word)))

    def fixed_point_count(self) -> int:
        if self.kind == "projective":
            return self.params[0] + 1
        if self.kind == "grassmannian":
            return comb(self.params[1], self.params[0])
        if self.kind == "flag":
            return factorial(self.params[0])
        return 2 ** len(self.params[0])

    def describe(self) -> str:
        if self.kind == "projective":
            return f"projective({self.params[0]})"
        if self.kind == "grassmannian":
            return f"grassmannian({self.params[0]},{self.params[1]})"
        if self.kind == "flag":
            return f"flag({self.params[0]})"
        return f"bott_samelson({','.join(map(str, self.params[0]))}; sl{self.params[1]})"


def projective(n: int) -> Chart:
    if n < 1:
        raise ChartError("projective space needs n >= 1")
    return Chart("projective", (n,), tuple(f"x{i}" for i in range(1, n + 1)))


def _grass_names(k: int, n: int) -> tuple[str, ...]:
    rows = n - k
    if k == 1:
        return tuple(f"x{i}" for i in range(1, rows + 1))
    if k <= 3:
        letters = "xyz"[:k]
        return tuple(f"{letters[j]}{i}" for i in range(1, rows + 1) for j in range(k))
    return tuple(f"p{i}_{j}" for i in range(1, rows + 1) for j in range(1, k + 1))


def grassmannian(k: int, n: int) -> Chart:
    if not 0 < k < n:
        raise ChartError(f"grassmannian needs 0 < k < n, got k={k}, n={n}")
    return Chart("grassmannian", (k, n), _grass_names(k, n))


def _flag_positions(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i)]


def flag(n: int) -> Chart:
    if n < 2:
        raise ChartError("flag variety needs n >= 2")
    if n == 3:
        names = ("a", "b", "c")
    else:
        names = tuple(f"l{i + 1}{j + 1}" for i, j in _flag_positions(n))
    return Chart("flag", (n,), names)


def bott_samelson(word: Sequence[int], n: int) -> Chart:
    word = tuple(int(i) for i in word)
    if not word:
        raise ChartError("Bott-Samelson word must be nonempty")
    if any(not 1 <= i <= n - 1 for i in word):
        raise ChartError(f"word letters must lie in 1..{n - 1}")
    return Chart("bott_samelson", (word, n), tuple(f"x{j}" for j in range(1, len(word) + 1)))


def cartan_entry(i: int, j: int) -> int:
    """Type A Cartan matrix entry alpha_i(h_j)."""
    if i == j:
        return 2
    return -1 if abs(i - j) == 1 else 0


# ----------------------------------------------------------------------------
# vector fields

def _lift(x, ring: Ring) -> MultiPoly:
    if isinstance(x, MultiPoly):
        return x if x.ring == ring else ring.embed(x)
    return ring.const(x)


def vector_field(chart: Chart, m: Matrix, ring: Ring) -> list[MultiPoly]:
    """Components of the vector field of m, one per chart coordinate."""
    n = chart.ambient
    if m.shape != (n, n):
        raise ea.ShapeError(f"{chart.describe()} needs {n}x{n} matrices, got {m.rows}x{m.cols}")
    M = m.map(lambda x: _lift(x, ring))
    xs = [ring.gen(name) for name in chart.names]
    if chart.kind == "projective":
        z = [ring.one] + xs
        mz = ea.apply(M, z)
        return [mz[i] - xs[i - 1] * mz[0] for i in range(1, n)]
    if chart.kind == "grassmannian":
        k, _ = chart.params
        X = Matrix(n - k, k, xs)
        A = M.submatrix(range(k), range(k))
        B = M.submatrix(range(k), range(k, n))
        C = M.submatrix(range(k, n), range(k))
        D = M.submatrix(range(k, n), range(k, n))
        V = C + D * X - X * A - X * B * X
        return [_lift(x, ring) for x in V.entries]
    if chart.kind == "flag":
        pos = _flag_positions(n)
        vals = dict(zip(pos, xs))
        L = Matrix(n, n, [ring.one if i == j else vals.get((i, j), ring.zero) for i in range(n) for j in range(n)])
        Linv = _unipotent_inverse(L, ring)
        core = Linv * M * L
        lower = Matrix(n, n, [core[i, j] if i > j else ring.zero for i in range(n) for j in range(n)])
        V = L * lower
        # products skip zero entries, so re-lift scalars into the ring
        return [_lift(V[i, j], ring) for i, j in pos]
    if chart.kind == "bott_samelson":
        return _bott_samelson_field(chart, M, ring, xs)
    raise ChartError(f"unknown chart kind {chart.kind}")


def _unipotent_inverse(L: Matrix, ring: Ring) -> Matrix:
    n = L.rows
    ident = Matrix(n, n, [ring.one if i == j else ring.zero for i in range(n) for j in range(n)])
    N = L - ident
    acc = ident
    term = ident
    for _ in range(n - 1):
        term = term * (-N)
        acc = acc + term
    return acc


def torus_part(m: Matrix) -> tuple[object, list]:
    """Split m = lam*e + diag(w); raise if m has any other entries."""
    n = m.rows
    lam = m[0, 1] if n > 1 else 0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            x = m[i, j]
            if j == i + 1:
                if x != lam:
                    raise ChartError("Bott-Samelson charts only support m in C*e + torus")
            elif x != 0:
                raise ChartError("Bott-Samelson charts only support m in C*e + torus")
    return lam, [m[i, i] for i in range(n)]


def _bott_samelson_field(chart: Chart, M: Matrix, ring: Ring, xs: list[MultiPoly]) -> list[MultiPoly]:
    word, _ = chart.params
    lam, w = torus_part(M)
    out = []
    for j, ij in enumerate(word):
        alpha = w[ij - 1] - w[ij]
        quad = xs[j] * xs[j]
        for k in range(j):
            b = cartan_entry(ij, word[k])
            if b:
                quad = quad + xs[k] * xs[j] * b
        out.append(-(quad * lam) - alpha * xs[j])
    return out


def coordinate_weights(chart: Chart) -> list[int]:
    """The a_j with V_h = (-a_j x_j) for the principal h."""
    ring = Ring(chart.names)
    h = principal_triple(chart.ambient).h
    V = vector_field(chart, h, ring)
    out = []
    for name, comp in zip(chart.names, V):
        x = ring.gen(name)
        terms = comp.terms
        if len(terms) != 1:
            raise AssertionError(f"coordinate {name} is not an h-weight vector")
        (exp, c), = terms.items()
        if MultiPoly(ring, {exp: Fraction(1)}) != x or c >= 0:
            raise AssertionError(f"coordinate {name} is not an h-weight vector with positive weight")
        out.append(int(-c))
    return out


def chart_varspecs(chart: Chart) -> list[VarSpec]:
    return [VarSpec(n, a) for n, a in zip(chart.names, coordinate_weights(chart))]


# ----------------------------------------------------------------------------
# fixed points

def _solve_generic(A: Matrix, B: Matrix, what: str) -> Matrix:
    """X with A X = B by Gaussian elimination over a field, A square."""
    n = A.rows
    a = [A.row(i) + B.row(i) for i in range(n)]
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            raise ChartError(f"point outside the chart: {what} vanishes")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return Matrix(n, B.cols, [x for r in a for x in r[n:]])


def fixed_point_coordinates(chart: Chart, label, g: Matrix) -> list:
    """Chart coordinates of g applied to the coordinate fixed point ``label``."""
    n = chart.ambient
    if g.shape != (n, n):
        raise ea.ShapeError(f"expected a {n}x{n} matrix")
    if chart.kind == "projective":
        col = g.col(label)
        if col[0] == 0:
            raise ChartError(f"point outside the chart: entry (0,{label}) vanishes")
        return [x / col[0] for x in col[1:]]
    if chart.kind == "grassmannian":
        k, _ = chart.params
        frame = g.submatrix(range(n), list(label))
        top = frame.submatrix(range(k), range(k))
        bottom = frame.submatrix(range(k, n), range(k))
        what = f"minor (rows 0..{k - 1}, columns {list(label)})"
        # X = bottom * top^{-1}, i.e. top^T X^T = bottom^T
        Xt = _solve_generic(top.transpose(), bottom.transpose(), what)
        X = Xt.transpose()
        return list(X.entries)
    if chart.kind == "flag":
        A = g.submatrix(range(n), list(label))
        L = _lu_lower(A)
        return [L[i][j] for i, j in _flag_positions(n)]
    raise ChartError(f"fixed_point_coordinates does not support {chart.kind}")


def _lu_lower(A: Matrix) -> list[list]:
    """Lower unipotent factor of A = L U without pivoting."""
    n = A.rows
    U = A.to_rows()
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = U[c][c]
        if piv == 0:
            raise ChartError(f"point outside the chart: leading principal minor of order {c + 1} vanishes")
        for i in range(c + 1, n):
            f = U[i][c] / piv
            L[i][c] = f
            U[i] = [x - f * y for x, y in zip(U[i], U[c])]
    return L


def coordinate_subspace_weights(chart: Chart, label, diagonal: Sequence) -> list:
    """Torus weights on the tautological fiber at a fixed point."""
    if chart.kind == "projective":
        return [diagonal[label]]
    if chart.kind == "grassmannian":
        return [diagonal[s] for s in label]
    raise ChartError(f"no tautological bundle on {chart.kind}")


# ----------------------------------------------------------------------------
# Chern traces

def chern_trace(chart: Chart, bundle: str, k: int, m: Matrix, ring: Ring) -> MultiPoly:
    """k-th elementary symmetric function of the fiber action at a chart point.

    For the tautological sub-bundle the action on the fiber over [[I],[X]] is
    A + BX; on the quotient it is D - XB.
    """
    if chart.kind == "projective":
        kk, n = 1, chart.ambient
    elif chart.kind == "grassmannian":
        kk, n = chart.params
    else:
        raise ChartError(f"unsupported bundle/chart combination: {bundle} on {chart.kind}")
    if m.shape != (n, n):
        raise ea.ShapeError(f"expected a {n}x{n} matrix")
    M = m.map(lambda x: _lift(x, ring))
    X = Matrix(n - kk, kk, [ring.gen(nm) for nm in chart.names])
    A = M.submatrix(range(kk), range(kk))
    B = M.submatrix(range(kk), range(kk, n))
    D = M.submatrix(range(kk, n), range(kk, n))
    if bundle == "tautological-sub":
        F = A + B * X
    elif bundle == "tautological-quotient":
        F = D - X * B
    else:
        raise ChartError(f"unsupported bundle/chart combination: {bundle} on {chart.kind}")
    size = F.rows
    if not 0 <= k <= size:
        raise ChartError(f"k={k} exceeds the bundle rank {size}")
    cp = ea.char_poly(F)
    c = cp[k]
    c = _lift(c, ring)
    return c if k % 2 == 0 else -c


def elementary_symmetric(values: Sequence, k: int):
    total = Fraction(0)
    for combo in itertools.combinations(values, k):
        prod = Fraction(1)
        for x in combo:
            prod = prod * x
        total = total + prod
    return total
