"""Exact scalars, dense matrices and linear algebra over Q and polynomial rings.

Scalars are :class:`fractions.Fraction`.  Matrix entries may be any exact ring
element supporting ``+ - *`` and equality with ``0`` (Fractions, polynomials,
fraction-field elements).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

Scalar = Fraction


class ShapeError(ValueError):
    """Raised on incompatible matrix shapes."""


class SingularSystemError(ArithmeticError):
    """Raised when a linear system has a vanishing determinant."""

    def __init__(self, message: str, determinant=0):
        super().__init__(message)
        self.determinant = determinant


class NotSplitError(ValueError):
    """Raised when a characteristic polynomial does not split over Q."""


def as_scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def _is_zero(x) -> bool:
    return x == 0


class Matrix:
    """Immutable dense matrix stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(entries)
        if rows < 0 or cols < 0 or len(entries) != rows * cols:
            raise ShapeError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    # construction helpers
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ShapeError("ragged rows")
        conv = [_coerce(x) for r in rows for x in r]
        return cls(len(rows), ncols, conv)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, [Fraction(0)] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [Fraction(1 if i == j else 0) for i in range(n) for j in range(n)])

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        n = len(values)
        vals = [_coerce(v) for v in values]
        return cls(n, n, [vals[i] if i == j else Fraction(0) for i in range(n) for j in range(n)])

    @classmethod
    def build(cls, rows: int, cols: int, fn: Callable[[int, int], object]) -> "Matrix":
        return cls(rows, cols, [_coerce(fn(i, j)) for i in range(rows) for j in range(cols)])

    # access
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def col(self, j: int) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def map(self, fn: Callable) -> "Matrix":
        return Matrix(self.rows, self.cols, [fn(x) for x in self.entries])

    def trace(self):
        self._require_square("trace")
        total = Fraction(0)
        for i in range(self.rows):
            total = total + self[i, i]
        return total

    def is_zero(self) -> bool:
        return all(_is_zero(x) for x in self.entries)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(len(rows), len(cols), [self[i, j] for i in rows for j in cols])

    def _require_square(self, what: str) -> None:
        if self.rows != self.cols:
            raise ShapeError(f"{what} needs a square matrix, got {self.rows}x{self.cols}")

    # arithmetic
    def _check_same(self, other: "Matrix", op: str) -> None:
        if self.shape != other.shape:
            raise ShapeError(f"cannot {op} {self.rows}x{self.cols} and {other.rows}x{other.cols}")

    def __add__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same(other, "add")
        return Matrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same(other, "subtract")
        return Matrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [-a for a in self.entries])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ShapeError(
                    f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
            out = []
            ocols = [other.col(j) for j in range(other.cols)]
            for i in range(self.rows):
                r = self.row(i)
                for c in ocols:
                    acc = None
                    for a, b in zip(r, c):
                        if _is_zero(a) or _is_zero(b):
                            continue
                        acc = a * b if acc is None else acc + a * b
                    out.append(Fraction(0) if acc is None else acc)
            return Matrix(self.rows, other.cols, out)
        return Matrix(self.rows, self.cols, [a * other for a in self.entries])

    def __rmul__(self, scalar):
        return Matrix(self.rows, self.cols, [scalar * a for a in self.entries])

    def __pow__(self, k: int) -> "Matrix":
        self._require_square("power")
        result = Matrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(_is_zero(a - b) for a, b in zip(self.entries, other.entries))

    __hash__ = None

    def __repr__(self) -> str:
        return f"Matrix({self.to_rows()!r})"

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.to_rows()) + "]"


def _coerce(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return x


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return a * b - b * a


def apply(m: Matrix, vec: Sequence) -> list:
    if len(vec) != m.cols:
        raise ShapeError(f"cannot apply {m.rows}x{m.cols} matrix to vector of length {len(vec)}")
    out = []
    for i in range(m.rows):
        acc = Fraction(0)
        for a, b in zip(m.row(i), vec):
            if not (_is_zero(a) or _is_zero(b)):
                acc = acc + a * b
        out.append(acc)
    return out


# ----------------------------------------------------------------------------
# determinants and characteristic polynomials

def _exact_div(a, b):
    if isinstance(b, (int, Fraction)):
        return a / Fraction(b) if not isinstance(a, (int, Fraction)) else Fraction(a) / b
    if isinstance(a, (int, Fraction)):
        if a == 0:
            return a
        a = b.ring.const(a)
    return a.exact_div(b)


def det(m: Matrix):
    """Determinant by Bareiss fraction-free elimination (needs exact division)."""
    m._require_square("determinant")
    n = m.rows
    if n == 0:
        return Fraction(1)
    a = m.to_rows()
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if _is_zero(a[k][k]):
            swap = next((i for i in range(k + 1, n) if not _is_zero(a[i][k])), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = _exact_div(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev)
            a[i][k] = Fraction(0)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return d if sign == 1 else -d


def char_poly(m: Matrix) -> list:
    """Coefficients of det(xI - m), highest degree first (Berkowitz, division free)."""
    m._require_square("characteristic polynomial")
    n = m.rows
    if n == 0:
        return [Fraction(1)]
    vect = [Fraction(1), -m[0, 0]]
    for r in range(1, n):
        # m_r = [[S, C], [R, a]] with S the leading r x r block
        a = m[r, r]
        R = [m[r, j] for j in range(r)]
        C = [m[i, r] for i in range(r)]
        col = [Fraction(1), -a]
        cur = C
        for _ in range(r):
            col.append(-_dot(R, cur))
            cur = [_dot([m[i, j] for j in range(r)], cur) for i in range(r)]
        # multiply the (r+2)x(r+1) Toeplitz matrix with first column `col` by vect
        new = []
        for i in range(r + 2):
            acc = Fraction(0)
            for j in range(min(i, r) + 1):
                c, v = col[i - j], vect[j]
                if not (_is_zero(c) or _is_zero(v)):
                    acc = acc + c * v
            new.append(acc)
        vect = new
    return vect


def _dot(u: Sequence, v: Sequence):
    acc = Fraction(0)
    for a, b in zip(u, v):
        if not (_is_zero(a) or _is_zero(b)):
            acc = acc + a * b
    return acc


# ----------------------------------------------------------------------------
# rational linear algebra

def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for r in rows:
        r = [as_scalar(x) for x in r]
        den = 1
        for x in r:
            den = den * x.denominator // _gcd(den, x.denominator)
        out.append([int(x * den) for x in r])
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def echelon(rows: Sequence[Sequence]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free (Bareiss) row echelon form of a rational matrix.

    Returns the integer echelon rows and the pivot columns.  Pivoting takes the
    first nonzero entry in row-major scan order, so the output is reproducible.
    """
    a = _integer_rows(rows)
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, nrows):
            f = a[i][c]
            row_i = a[i]
            row_r = a[r]
            for j in range(c, ncols):
                row_i[j] = (row_i[j] * piv - f * row_r[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m: Matrix | Sequence[Sequence]) -> int:
    rows = m.to_rows() if isinstance(m, Matrix) else m
    if not rows:
        return 0
    return len(echelon(rows)[1])


def kernel_basis(m: Matrix) -> list[list[Fraction]]:
    """Basis of the right kernel, one vector per free column in increasing order."""
    if m.rows == 0:
        return [[Fraction(int(i == j)) for i in range(m.cols)] for j in range(m.cols)]
    ech, pivots = echelon(m.to_rows())
    # back-substitute into reduced form
    red = [[Fraction(x) for x in r] for r in ech]
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        piv = red[k][c]
        red[k] = [x / piv for x in red[k]]
        for i in range(k):
            f = red[i][c]
            if f != 0:
                red[i] = [x - f * y for x, y in zip(red[i], red[k])]
    free = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for fcol in free:
        vec = [Fraction(0)] * m.cols
        vec[fcol] = Fraction(1)
        for k, c in enumerate(pivots):
            vec[c] = -red[k][fcol]
        basis.append(vec)
    return basis


def _gauss_jordan(m: Matrix, extra: list[list[Fraction]]) -> list[list[Fraction]]:
    """Reduce [m | extra] to [I | m^{-1} extra]; returns the right block."""
    m._require_square("solve")
    n = m.rows
    aug = [[as_scalar(x) for x in m.row(i)] + extra[i] for i in range(n)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if p is None:
            raise SingularSystemError("matrix is singular", Fraction(0))
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        row = aug[c] = [x / piv if x else x for x in aug[c]]
        for i in range(n):
            f = aug[i][c]
            if i != c and f != 0:
                aug[i] = [x - f * y if y else x for x, y in zip(aug[i], row)]
    return [r[n:] for r in aug]


def inverse(m: Matrix) -> Matrix:
    """Inverse of a square rational matrix via reduced echelon form."""
    n = m.rows
    right = _gauss_jordan(m, [[Fraction(int(i == j)) for j in range(n)] for i in range(n)])
    return Matrix(n, n, [x for r in right for x in r])


def solve_rational(m: Matrix, rhs: Sequence) -> list[Fraction]:
    """Unique solution of a nonsingular square rational system."""
    if len(rhs) != m.rows:
        raise ShapeError("right-hand side has the wrong length")
    return [r[0] for r in _gauss_jordan(m, [[as_scalar(x)] for x in rhs])]


def solve_linear_over_fraction_field(m: Matrix, rhs: Sequence) -> list:
    """Solve ``m x = rhs`` over the fraction field of a polynomial ring.

    Uses Cramer's rule with Bareiss determinants; every entry is returned as a
    reduced :class:`~equicoh.symbolic.RationalFunction`.
    """
    from .symbolic import MultiPoly, RationalFunction

    m._require_square("linear solve")
    if len(rhs) != m.rows:
        raise ShapeError(f"right-hand side has length {len(rhs)}, expected {m.rows}")
    ring = next((x.ring for x in list(m.entries) + list(rhs) if isinstance(x, MultiPoly)), None)
    if ring is None:
        raise TypeError("solve_linear_over_fraction_field needs polynomial entries")

    def lift(x):
        return x if isinstance(x, MultiPoly) else ring.const(x)

    mm = m.map(lift)
    b = [lift(x) for x in rhs]
    d = det(mm)
    if d == 0:
        raise SingularSystemError("coefficient matrix is singular over the fraction field", d)
    out = []
    for j in range(m.cols):
        mj = Matrix(m.rows, m.cols, [b[i] if jj == j else mm[i, jj] for i in range(m.rows) for jj in range(m.cols)])
        out.append(RationalFunction(det(mj), d))
    return out


# ----------------------------------------------------------------------------
# univariate polynomials over Q, coefficient lists with lowest degree first

def upoly_trim(p: Sequence[Fraction]) -> list[Fraction]:
    p = [as_scalar(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def upoly_mul(a: Sequence, b: Sequence) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return upoly_trim(out)


def upoly_add(a: Sequence, b: Sequence) -> list[Fraction]:
    n = max(len(a), len(b))
    return upoly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def upoly_scale(a: Sequence, c) -> list[Fraction]:
    return upoly_trim([x * c for x in a])


def upoly_divmod(a: Sequence, b: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    a = upoly_trim(a)
    b = upoly_trim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] / lead
        q[shift] = c
        for i, y in enumerate(b):
            r[shift + i] -= c * y
        r = upoly_trim(r)
    return upoly_trim(q), r


def upoly_monic(a: Sequence) -> list[Fraction]:
    a = upoly_trim(a)
    return [x / a[-1] for x in a] if a else []


def upoly_gcd(a: Sequence, b: Sequence) -> list[Fraction]:
    a, b = upoly_trim(a), upoly_trim(b)
    while b:
        a, b = b, upoly_divmod(a, b)[1]
    return upoly_monic(a)


def upoly_xgcd(a: Sequence, b: Sequence) -> tuple[list, list, list]:
    """Return (g, s, t) with s*a + t*b = g monic."""
    r0, r1 = upoly_trim(a), upoly_trim(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = upoly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, upoly_add(s0, upoly_scale(upoly_mul(q, s1), -1))
        t0, t1 = t1, upoly_add(t0, upoly_scale(upoly_mul(q, t1), -1))
    lead = r0[-1]
    return upoly_scale(r0, 1 / lead), upoly_scale(s0, 1 / lead), upoly_scale(t0, 1 / lead)


def upoly_deriv(a: Sequence) -> list[Fraction]:
    return upoly_trim([i * a[i] for i in range(1, len(a))])


def upoly_is_squarefree(a: Sequence) -> bool:
    a = upoly_trim(a)
    if len(a) <= 2:
        return True
    return len(upoly_gcd(a, upoly_deriv(a))) == 1


def upoly_squarefree_part(a: Sequence) -> list[Fraction]:
    a = upoly_trim(a)
    if len(a) <= 2:
        return upoly_monic(a)
    g = upoly_gcd(a, upoly_deriv(a))
    return upoly_monic(upoly_divmod(a, g)[0])


def upoly_eval(a: Sequence, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_roots(a: Sequence) -> list[tuple[Fraction, int]]:
    """Rational roots with multiplicities, sorted increasingly."""
    a = upoly_trim(a)
    roots: list[tuple[Fraction, int]] = []
    if len(a) <= 1:
        return roots
    mult0 = 0
    while a and a[0] == 0:
        a = a[1:]
        mult0 += 1
    if mult0:
        roots.append((Fraction(0), mult0))
    ints = _integer_rows([a])[0]
    cands = set()
    for p in _divisors(ints[0]):
        for q in _divisors(ints[-1]):
            cands.add(Fraction(p, q))
            cands.add(Fraction(-p, q))
    for c in sorted(cands):
        m = 0
        while len(a) > 1 and upoly_eval(a, c) == 0:
            a = upoly_divmod(a, [-c, Fraction(1)])[0]
            m += 1
        if m:
            roots.append((c, m))
    return sorted(roots)


# ----------------------------------------------------------------------------
# additive Jordan decomposition

def _poly_of_matrix(p: Sequence, m: Matrix) -> Matrix:
    n = m.rows
    acc = Matrix.zeros(n)
    ident = Matrix.identity(n)
    for c in reversed(p):
        acc = acc * m + ident * c
    return acc


def jordan_additive(m: Matrix) -> tuple[Matrix, Matrix]:
    """Split a Q-split matrix as m = s + n with s semisimple and n nilpotent.

    The semisimple part is p(m) for the Chinese-remainder polynomial p with
    p = lambda mod (x - lambda)^mult for every eigenvalue lambda.
    """
    m._require_square("Jordan decomposition")
    size = m.rows
    cp = [as_scalar(c) for c in reversed(char_poly(m))]
    roots = rational_roots(cp)
    if sum(k for _, k in roots) != size:
        raise NotSplitError("characteristic polynomial is not Q-split; refusing to approximate")
    p: list[Fraction] = []
    modulus = [Fraction(1)]
    for lam, mult in roots:
        mod_i = [Fraction(1)]
        for _ in range(mult):
            mod_i = upoly_mul(mod_i, [-lam, Fraction(1)])
        # combine p mod modulus with lam mod mod_i
        g, s, t = upoly_xgcd(modulus, mod_i)
        diff = upoly_add([lam], upoly_scale(p, -1))
        corr = upoly_mul(upoly_mul(diff, s), modulus)
        modulus = upoly_mul(modulus, mod_i)
        p = upoly_divmod(upoly_add(p, corr), modulus)[1]
    s_part = _poly_of_matrix(p, m)
    n_part = m - s_part
    return s_part, n_part


# ----------------------------------------------------------------------------
# incremental row spaces, used for per-degree ranks of large evaluation matrices

# below 2^20 so that float64 dot products of length < 2^13 stay exact
MODULAR_PRIMES = (1048573, 1048571)


class ExactRowSpace:
    """Row space over Q kept in reduced echelon form (numpy object arrays)."""

    exact = True

    def __init__(self, ncols: int):
        import numpy as np

        self.ncols = ncols
        self.pivots: list[int] = []
        self.rows = np.zeros((0, ncols), dtype=object)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def convert(self, vec):
        import numpy as np

        return np.array([as_scalar(x) for x in vec], dtype=object)

    def add(self, block) -> None:
        import numpy as np

        for row in block:
            row = np.array(row, dtype=object)
            for k, c in enumerate(self.pivots):
                f = row[c]
                if f != 0:
                    row = row - f * self.rows[k]
            nz = next((j for j in range(self.ncols) if row[j] != 0), None)
            if nz is None:
                continue
            row = row * (1 / row[nz])
            if len(self.pivots):
                col = self.rows[:, nz].copy()
                self.rows = self.rows - np.outer(col, row)
            self.rows = np.vstack([self.rows, row[None, :]])
            self.pivots.append(nz)


class ModularRowSpace:
    """Row space over F_p kept in reduced echelon form.

    Candidate rows are reduced in blocks with float64 matrix products, which
    are exact because p < 2^20.  The rank is a lower bound for the rank over Q
    of any integer matrix reducing to the inserted rows.
    """

    exact = False

    def __init__(self, ncols: int, prime: int = MODULAR_PRIMES[0], block: int = 64):
        import numpy as np

        self.ncols = ncols
        self.p = prime
        self.block = block
        self.pivots: list[int] = []
        self.rows = np.zeros((0, ncols), dtype=np.float64)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def convert(self, vec):
        import numpy as np

        p = self.p
        out = np.empty(len(vec), dtype=np.float64)
        for i, x in enumerate(vec):
            x = as_scalar(x)
            out[i] = (x.numerator % p) * pow(x.denominator % p, p - 2, p) % p
        return out

    def add(self, block) -> None:
        import numpy as np

        block = np.asarray(block, dtype=np.float64)
        for start in range(0, block.shape[0], self.block):
            self._add_block(block[start:start + self.block])

    def _add_block(self, C) -> None:
        import numpy as np

        p = self.p
        C = np.mod(C, p)
        if self.pivots:
            C = np.mod(C - np.mod(C[:, self.pivots] @ self.rows, p), p)
        new_rows = []
        new_piv: list[int] = []
        for i in range(C.shape[0]):
            row = C[i]
            if new_piv:
                B = np.array(new_rows)
                row = np.mod(row - np.mod(row[new_piv] @ B, p), p)
            nz = np.flatnonzero(row)
            if nz.size == 0:
                continue
            c = int(nz[0])
            inv = pow(int(row[c]), p - 2, p)
            row = np.mod(row * inv, p)
            if new_rows:
                B = np.array(new_rows)
                B = np.mod(B - np.outer(B[:, c], row), p)
                new_rows = list(B)
            new_rows.append(row)
            new_piv.append(c)
        if not new_piv:
            return
        B = np.array(new_rows)
        if self.pivots:
            self.rows = np.mod(self.rows - np.mod(self.rows[:, new_piv] @ B, p), p)
        self.rows = np.vstack([self.rows, B])
        self.pivots.extend(new_piv)
