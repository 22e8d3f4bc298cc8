"""Sparse weighted-graded polynomials over Q, Groebner bases and Hilbert series."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd as igcd
from typing import Iterable, Mapping, Sequence

from . import exactalg as ea

DEFAULT_CUTOFF = 20
DEFAULT_STEP_BUDGET = 200_000


class RingMismatchError(ValueError):
    """Raised when combining polynomials from different rings."""


class HomogeneityError(ValueError):
    """Raised when a generator is not weighted-homogeneous."""


class ResourceBudgetError(RuntimeError):
    """Raised when a Groebner computation exceeds its step budget."""


class NotZeroDimensionalError(ValueError):
    """Raised when a specialized ideal has positive-dimensional solution set."""


@dataclass(frozen=True)
class VarSpec:
    name: str
    weight: int = 2

    def __post_init__(self):
        if self.weight <= 0:
            raise ValueError(f"variable {self.name} needs a positive weight, got {self.weight}")


class Ring:
    """Polynomial ring Q[x_1..x_n] with positive integer weights."""

    def __init__(self, variables: Iterable[VarSpec | tuple[str, int] | str]):
        specs = []
        for v in variables:
            if isinstance(v, VarSpec):
                specs.append(v)
            elif isinstance(v, str):
                specs.append(VarSpec(v, 2))
            else:
                specs.append(VarSpec(*v))
        self.vars: tuple[VarSpec, ...] = tuple(specs)
        self.names: tuple[str, ...] = tuple(v.name for v in specs)
        self.weights: tuple[int, ...] = tuple(v.weight for v in specs)
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        self.index = {n: i for i, n in enumerate(self.names)}
        self.nvars = len(specs)
        self.zero_exp = (0,) * self.nvars
        self._order = None

    def __eq__(self, other) -> bool:
        return isinstance(other, Ring) and self.vars == other.vars

    def __hash__(self) -> int:
        return hash(self.vars)

    def __repr__(self) -> str:
        return "Ring(" + ", ".join(f"{v.name}:{v.weight}" for v in self.vars) + ")"

    @property
    def order(self) -> "MonomialOrder":
        if self._order is None:
            self._order = MonomialOrder(self)
        return self._order

    def const(self, c) -> "MultiPoly":
        c = ea.as_scalar(c)
        return MultiPoly(self, {self.zero_exp: c} if c else {})

    @property
    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    @property
    def one(self) -> "MultiPoly":
        return self.const(1)

    def gen(self, name: str) -> "MultiPoly":
        i = self.index[name]
        exp = tuple(1 if j == i else 0 for j in range(self.nvars))
        return MultiPoly(self, {exp: Fraction(1)})

    def gens(self) -> list["MultiPoly"]:
        return [self.gen(n) for n in self.names]

    def monomial(self, exp: Sequence[int], coeff=1) -> "MultiPoly":
        c = ea.as_scalar(coeff)
        return MultiPoly(self, {tuple(exp): c} if c else {})

    def weighted_degree(self, exp: Sequence[int]) -> int:
        return sum(w * e for w, e in zip(self.weights, exp))

    def drop(self, names: Iterable[str]) -> "Ring":
        names = set(names)
        return Ring([v for v in self.vars if v.name not in names])

    def embed(self, p: "MultiPoly") -> "MultiPoly":
        """Map a polynomial from a ring whose variables all occur here."""
        if p.ring == self:
            return p
        idx = [self.index[n] for n in p.ring.names]
        terms = {}
        for exp, c in p.terms.items():
            new = [0] * self.nvars
            for i, e in zip(idx, exp):
                new[i] = e
            terms[tuple(new)] = c
        return MultiPoly(self, terms)


class MonomialOrder:
    """Weighted degrevlex, optionally refined into a block elimination order.

    With a front block S, monomials are compared first by the weighted degrevlex
    of their S-part and then by that of the remaining part, so every monomial
    involving S exceeds every monomial free of S.
    """

    def __init__(self, ring: Ring, front: Iterable[str] = ()):
        self.ring = ring
        self.front = tuple(n for n in ring.names if n in set(front))
        fidx = [ring.index[n] for n in self.front]
        ridx = [i for i in range(ring.nvars) if i not in fidx]
        self._blocks = [fidx, ridx] if fidx else [ridx]
        self._cache: dict = {}

    @property
    def kind(self) -> str:
        return "block-elimination" if self.front else "weighted-degrevlex"

    def key(self, exp: tuple) -> tuple:
        k = self._cache.get(exp)
        if k is None:
            w = self.ring.weights
            parts = []
            for block in self._blocks:
                parts.append(sum(w[i] * exp[i] for i in block))
                parts.extend(-exp[i] for i in reversed(block))
            k = tuple(parts)
            if len(self._cache) < 500_000:
                self._cache[exp] = k
        return k

    def __eq__(self, other) -> bool:
        return isinstance(other, MonomialOrder) and other.ring == self.ring and other.front == self.front

    def __hash__(self) -> int:
        return hash((self.ring, self.front))

    def __repr__(self) -> str:
        return f"MonomialOrder({self.kind}, front={list(self.front)})"


def _add_exp(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def _sub_exp(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm_exp(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


class MultiPoly:
    """Sparse polynomial: a map from exponent tuples to nonzero Fractions."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: Mapping[tuple, Fraction]):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c}

    # coercion helpers
    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        raise TypeError(f"cannot combine polynomial with {type(other).__name__}")

    def __add__(self, other):
        if not isinstance(other, (MultiPoly, int, Fraction)):
            return NotImplemented
        other = self._lift(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return MultiPoly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (MultiPoly, int, Fraction)):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = ea.as_scalar(other)
            if not c:
                return self.ring.zero
            return MultiPoly(self.ring, {e: v * c for e, v in self.terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        other = self._lift(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exp(e1, e2)
                terms[e] = terms.get(e, 0) + c1 * c2
        return MultiPoly(self.ring, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / ea.as_scalar(other))
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"MultiPoly({render(self, normalize=False)})"

    def __str__(self) -> str:
        return render(self, normalize=False)

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(e == self.ring.zero_exp for e in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get(self.ring.zero_exp, Fraction(0))

    def support(self) -> set[str]:
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(self.ring.names[i])
        return used

    def degree_in(self, name: str) -> int:
        i = self.ring.index[name]
        return max((e[i] for e in self.terms), default=-1)

    def leading_exp(self, order: MonomialOrder | None = None) -> tuple:
        order = order or self.ring.order
        return max(self.terms, key=order.key)

    def leading_coeff(self, order: MonomialOrder | None = None) -> Fraction:
        return self.terms[self.leading_exp(order)]

    def sorted_terms(self, order: MonomialOrder | None = None) -> list[tuple[tuple, Fraction]]:
        order = order or self.ring.order
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def monic(self, order: MonomialOrder | None = None) -> "MultiPoly":
        if not self.terms:
            return self
        return self * (1 / self.leading_coeff(order))

    def exact_div(self, other: "MultiPoly") -> "MultiPoly":
        """Exact quotient; raises ArithmeticError if ``other`` does not divide."""
        other = self._lift(other)
        if not other.terms:
            raise ZeroDivisionError("division by zero polynomial")
        order = self.ring.order
        lt_e = other.leading_exp(order)
        lt_c = other.terms[lt_e]
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            e = max(rem, key=order.key)
            if not _divides(lt_e, e):
                raise ArithmeticError("polynomial division is not exact")
            q_e = _sub_exp(e, lt_e)
            q_c = rem[e] / lt_c
            quot[q_e] = q_c
            for oe, oc in other.terms.items():
                t = _add_exp(oe, q_e)
                v = rem.get(t, 0) - q_c * oc
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return MultiPoly(self.ring, quot)

    # transformations
    def diff(self, name: str) -> "MultiPoly":
        i = self.ring.index[name]
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                terms[tuple(ne)] = c * e[i]
        return MultiPoly(self.ring, terms)

    def subs(self, mapping: Mapping[str, object], target: Ring | None = None) -> "MultiPoly":
        """Substitute variables by polynomials (or scalars) of the target ring.

        Variables not in ``mapping`` are sent to the same-named variable of
        ``target`` (default: this ring).
        """
        target = target or self.ring
        images = []
        for name in self.ring.names:
            if name in mapping:
                img = mapping[name]
                if isinstance(img, MultiPoly):
                    if img.ring != target:
                        img = target.embed(img)
                else:
                    img = target.const(img)
            else:
                if name not in target.index:
                    raise RingMismatchError(f"no image for variable {name} in {target}")
                img = target.gen(name)
            images.append(img)
        powers: dict = {}

        def power(i: int, k: int) -> MultiPoly:
            key = (i, k)
            if key not in powers:
                powers[key] = images[i] ** k
            return powers[key]

        acc: dict = {}
        for e, c in self.terms.items():
            term = target.const(c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
                    if not term.terms:
                        break
            for te, tc in term.terms.items():
                acc[te] = acc.get(te, 0) + tc
        return MultiPoly(target, acc)

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        vals = [ea.as_scalar(point[n]) if n in point else None for n in self.ring.names]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for v, k in zip(vals, e):
                if k:
                    if v is None:
                        raise KeyError("evaluate needs values for every variable in the support")
                    t *= v ** k
            total += t
        return total


def is_homogeneous(p: MultiPoly):
    """Common weighted degree of all terms, ``"any"`` for zero, else None."""
    if not p.terms:
        return "any"
    degs = {p.ring.weighted_degree(e) for e in p.terms}
    return degs.pop() if len(degs) == 1 else None


# ----------------------------------------------------------------------------
# canonical rendering

def primitive_integer(p: MultiPoly, order: MonomialOrder | None = None) -> MultiPoly:
    """Scale to coprime integer coefficients with positive leading coefficient."""
    if not p.terms:
        return p
    den = 1
    for c in p.terms.values():
        den = den * c.denominator // igcd(den, c.denominator)
    num = 0
    for c in p.terms.values():
        num = igcd(num, int(c * den))
    scale = Fraction(den, num)
    if p.leading_coeff(order) < 0:
        scale = -scale
    return p * scale


def render(p: MultiPoly, normalize: bool = True) -> str:
    """Expanded text: declared variable order, decreasing monomial order."""
    if normalize:
        p = primitive_integer(p)
    if not p.terms:
        return "0"
    out = []
    for k, (e, c) in enumerate(p.sorted_terms()):
        mono = "*".join(
            (n if k_ == 1 else f"{n}^{k_}") for n, k_ in zip(p.ring.names, e) if k_)
        sign = "-" if c < 0 else ("+" if k else "")
        a = abs(c)
        coef = str(a)
        if mono:
            text = mono if a == 1 else f"{coef}*{mono}"
        else:
            text = coef
        out.append(sign + text)
    return "".join(out)


# ----------------------------------------------------------------------------
# multivariate gcd and rational functions

def _content_in(p: MultiPoly, name: str) -> MultiPoly:
    g = None
    for c in _coeffs_in(p, name).values():
        g = c if g is None else poly_gcd(g, c)
        if g.is_constant():
            return p.ring.one
    return g if g is not None else p.ring.zero


def _coeffs_in(p: MultiPoly, name: str) -> dict[int, MultiPoly]:
    i = p.ring.index[name]
    buckets: dict[int, dict] = {}
    for e, c in p.terms.items():
        ne = e[:i] + (0,) + e[i + 1:]
        buckets.setdefault(e[i], {})[ne] = c
    return {k: MultiPoly(p.ring, t) for k, t in buckets.items()}


def _prem(a: MultiPoly, b: MultiPoly, name: str) -> MultiPoly:
    db = b.degree_in(name)
    lcb = _coeffs_in(b, name)[db]
    p_gen = a.ring.gen(name)
    r = a
    while r.terms and r.degree_in(name) >= db:
        dr = r.degree_in(name)
        lcr = _coeffs_in(r, name)[dr]
        r = r * lcb - lcr * (p_gen ** (dr - db)) * b
    return r


def _normalize_gcd(g: MultiPoly) -> MultiPoly:
    return primitive_integer(g)


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Greatest common divisor over Q (primitive integer, positive lead)."""
    if a.ring != b.ring:
        raise RingMismatchError(f"{a.ring} vs {b.ring}")
    if not a.terms:
        return _normalize_gcd(b)
    if not b.terms:
        return _normalize_gcd(a)
    used = a.support() | b.support()
    if not used:
        return a.ring.one
    name = next(n for n in a.ring.names if n in used)
    if b.degree_in(name) <= 0:
        return poly_gcd(_content_in(a, name), b) if a.degree_in(name) > 0 else poly_gcd(a, b)
    if a.degree_in(name) <= 0:
        return poly_gcd(a, _content_in(b, name))
    ca, cb = _content_in(a, name), _content_in(b, name)
    pa, pb = a.exact_div(ca), b.exact_div(cb)
    cont = poly_gcd(ca, cb)
    if pa.degree_in(name) < pb.degree_in(name):
        pa, pb = pb, pa
    while pb.terms and pb.degree_in(name) > 0:
        r = _prem(pa, pb, name)
        pa = pb
        pb = r.exact_div(_content_in(r, name)) if r.terms else r
    if pb.terms:
        g = a.ring.one
    else:
        g = pa.exact_div(_content_in(pa, name))
    return _normalize_gcd(cont * g)


class RationalFunction:
    """Reduced quotient num/den of polynomials; den primitive with positive lead."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        if den is None:
            den = num.ring.one
        if not den.terms:
            raise ZeroDivisionError("zero denominator")
        if not num.terms:
            self.num, self.den = num, num.ring.one
            return
        g = poly_gcd(num, den)
        num, den = num.exact_div(g), den.exact_div(g)
        scaled = primitive_integer(den)
        factor = scaled.leading_coeff() / den.leading_coeff()
        self.num = num * factor
        self.den = scaled

    @property
    def ring(self) -> Ring:
        return self.num.ring

    def _lift(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, MultiPoly):
            return RationalFunction(other)
        return RationalFunction(self.ring.const(other))

    def __add__(self, other):
        o = self._lift(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, MultiPoly, RationalFunction)):
            o = self._lift(other)
            return (self.num * o.den - o.num * self.den).is_zero()
        return NotImplemented

    __hash__ = None

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the point")
        return self.num.evaluate(point) / d

    def __repr__(self) -> str:
        return f"RationalFunction({self})"

    def __str__(self) -> str:
        n = render(self.num, normalize=False)
        if self.den == self.ring.one:
            return n
        return f"({n})/({render(self.den, normalize=False)})"


# ----------------------------------------------------------------------------
# Groebner bases

class GroebnerBasis:
    """Reduced, monic Groebner basis sorted by increasing leading monomial."""

    def __init__(self, order: MonomialOrder, generators: Sequence[MultiPoly]):
        self.order = order
        self.ring = order.ring
        self.generators: tuple[MultiPoly, ...] = tuple(generators)
        self._lead = [g.leading_exp(order) for g in self.generators]

    def leading_exps(self) -> list[tuple]:
        return list(self._lead)

    def is_unit(self) -> bool:
        return any(e == self.ring.zero_exp for e in self._lead)

    def reduce(self, p: MultiPoly) -> MultiPoly:
        return normal_form(p, self.generators, self.order)

    def contains(self, p: MultiPoly) -> bool:
        return self.reduce(p).is_zero()

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __eq__(self, other) -> bool:
        return (isinstance(other, GroebnerBasis) and self.order == other.order
                and list(self.generators) == list(other.generators))

    def __repr__(self) -> str:
        return "GroebnerBasis([" + ", ".join(render(g, False) for g in self.generators) + "])"


def normal_form(p: MultiPoly, divisors: Sequence[MultiPoly], order: MonomialOrder) -> MultiPoly:
    """Full reduction of ``p`` modulo ``divisors``."""
    divs = []
    for g in divisors:
        if g.terms:
            le = g.leading_exp(order)
            divs.append((le, g.terms[le], list(g.terms.items())))
    rem: dict = dict(p.terms)
    out: dict = {}
    key = order.key
    while rem:
        e = max(rem, key=key)
        c = rem[e]
        for le, lc, gterms in divs:
            if _divides(le, e):
                shift = _sub_exp(e, le)
                f = c / lc
                for ge, gc in gterms:
                    t = _add_exp(ge, shift)
                    v = rem.get(t, 0) - f * gc
                    if v:
                        rem[t] = v
                    else:
                        rem.pop(t, None)
                break
        else:
            out[e] = c
            del rem[e]
    return MultiPoly(p.ring, out)


def _spoly(f: MultiPoly, g: MultiPoly, order: MonomialOrder) -> MultiPoly:
    ef, eg = f.leading_exp(order), g.leading_exp(order)
    lcm = _lcm_exp(ef, eg)
    a = MultiPoly(f.ring, {_sub_exp(lcm, ef): 1 / f.terms[ef]})
    b = MultiPoly(g.ring, {_sub_exp(lcm, eg): 1 / g.terms[eg]})
    return a * f - b * g


def buchberger(gens: Sequence[MultiPoly], order: MonomialOrder | None = None,
               budget: int = DEFAULT_STEP_BUDGET) -> GroebnerBasis:
    """Reduced Groebner basis by Buchberger's algorithm.

    Pairs are chosen by the normal strategy (smallest lcm, ties by index);
    Buchberger's coprime and chain criteria skip useless pairs.  ``budget``
    bounds the number of processed pairs.
    """
    gens = [g for g in gens if g.terms]
    if not gens:
        ring = order.ring if order is not None else None
        return GroebnerBasis(order or MonomialOrder(ring or Ring([])), [])
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise RingMismatchError(f"{g.ring} vs {ring}")
    order = order or ring.order
    if order.ring != ring:
        raise RingMismatchError("monomial order belongs to a different ring")

    basis: list[MultiPoly] = []
    leads: list[tuple] = []
    pending: set[tuple[int, int]] = set()

    def add(h: MultiPoly) -> None:
        h = h.monic(order)
        basis.append(h)
        leads.append(h.leading_exp(order))
        k = len(basis) - 1
        for i in range(k):
            pending.add((i, k))

    # start from inter-reduced input to keep things small
    for g in sorted(gens, key=lambda q: order.key(q.leading_exp(order))):
        r = normal_form(g, basis, order)
        if r.terms:
            add(r)

    steps = 0
    while pending:
        i, j = min(pending, key=lambda ij: (order.key(_lcm_exp(leads[ij[0]], leads[ij[1]])), ij))
        pending.discard((i, j))
        steps += 1
        if steps > budget:
            raise ResourceBudgetError(f"Groebner step budget {budget} exceeded")
        li, lj = leads[i], leads[j]
        if all(min(a, b) == 0 for a, b in zip(li, lj)):
            continue
        lcm = _lcm_exp(li, lj)
        chain = False
        for k in range(len(basis)):
            if k in (i, j) or not _divides(leads[k], lcm):
                continue
            if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                chain = True
                break
        if chain:
            continue
        r = normal_form(_spoly(basis[i], basis[j], order), basis, order)
        if r.terms:
            add(r)
    return GroebnerBasis(order, _reduce_basis(basis, order))


def _reduce_basis(basis: Sequence[MultiPoly], order: MonomialOrder) -> list[MultiPoly]:
    leads = [g.leading_exp(order) for g in basis]
    keep = []
    for i, g in enumerate(basis):
        redundant = False
        for j, h in enumerate(basis):
            if i == j or not _divides(leads[j], leads[i]):
                continue
            if leads[j] != leads[i] or j < i:
                redundant = True
                break
        if not redundant:
            keep.append(g)
    out = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        out.append(normal_form(g, others, order).monic(order))
    out.sort(key=lambda g: order.key(g.leading_exp(order)))
    return out


def ideal_contains(gb: GroebnerBasis, polys: Iterable[MultiPoly]) -> bool:
    return all(gb.contains(p) for p in polys)


# ----------------------------------------------------------------------------
# triangular substitution and elimination

def _solvable_var(p: MultiPoly, candidates: Sequence[str]) -> str | None:
    """Variable x with p = c*x + (terms free of x), c a nonzero constant."""
    best = None
    ring = p.ring
    for name in candidates:
        i = ring.index[name]
        lin = [e for e in p.terms if e[i]]
        if len(lin) != 1:
            continue
        e = lin[0]
        if e[i] != 1 or any(k for j, k in enumerate(e) if j != i):
            continue
        w = ring.weights[i]
        if best is None or (w, i) >= (ring.weights[ring.index[best]], ring.index[best]):
            best = name
    return best


@dataclass
class TriangularResult:
    relations: list[MultiPoly]
    substitutions: dict[str, MultiPoly]
    ring: Ring


def triangular_substitution(gens: Sequence[MultiPoly], candidates: Iterable[str]) -> TriangularResult:
    """Eliminate variables that some generator determines linearly, to a fixed point.

    A generator ``c*x - g`` with ``g`` free of ``x`` lets us replace ``x`` by
    ``g/c`` everywhere.  Among admissible variables we prefer larger weight,
    then later declaration.  Returned relations and substitution images live
    in the ring of the remaining variables.
    """
    gens = [g for g in gens if g.terms]
    if not gens:
        return TriangularResult([], {}, gens[0].ring if gens else Ring([]))
    ring = gens[0].ring
    cands = [n for n in ring.names if n in set(candidates)]
    subs: dict[str, MultiPoly] = {}
    current = list(gens)
    changed = True
    while changed:
        changed = False
        for k, g in enumerate(current):
            name = _solvable_var(g, [c for c in cands if c not in subs])
            if name is None:
                continue
            i = ring.index[name]
            coeff = next(c for e, c in g.terms.items() if e[i])
            image = (ring.gen(name) * coeff - g) / coeff
            subs = {n: q.subs({name: image}) for n, q in subs.items()}
            subs[name] = image
            current = [q.subs({name: image}) for j, q in enumerate(current) if j != k]
            current = [q for q in current if q.terms]
            changed = True
            break
    sub_ring = ring.drop(subs)
    rels = [_restrict(q, sub_ring) for q in current]
    return TriangularResult(rels, {n: _restrict(q, sub_ring) for n, q in subs.items()}, sub_ring)


def _restrict(p: MultiPoly, sub: Ring) -> MultiPoly:
    idx = [p.ring.index[n] for n in sub.names]
    dropped = [i for i in range(p.ring.nvars) if i not in idx]
    terms = {}
    for e, c in p.terms.items():
        if any(e[i] for i in dropped):
            raise RingMismatchError("polynomial involves a dropped variable")
        terms[tuple(e[i] for i in idx)] = c
    return MultiPoly(sub, terms)


def eliminate(gens: Sequence[MultiPoly], drop_vars: Iterable[str],
              budget: int = DEFAULT_STEP_BUDGET) -> TriangularResult:
    """Generators of the elimination ideal in the variables outside ``drop_vars``."""
    gens = [g for g in gens if g.terms]
    drop = set(drop_vars)
    if not gens:
        return TriangularResult([], {}, Ring([]))
    tri = triangular_substitution(gens, drop)
    left = drop - set(tri.substitutions)
    if not left:
        return tri
    ring = tri.ring
    order = MonomialOrder(ring, left)
    gb = buchberger(tri.relations, order, budget)
    keep = ring.drop(left)
    rels = [_restrict(g, keep) for g in gb if not (g.support() & left)]
    return TriangularResult(rels, {}, keep)


# ----------------------------------------------------------------------------
# dimension, Hilbert series, standard monomials

def krull_dimension(gb: GroebnerBasis) -> int:
    """Largest set of variables containing no leading monomial support (-1 for the unit ideal)."""
    if gb.is_unit():
        return -1
    n = gb.ring.nvars
    supports = [frozenset(i for i, k in enumerate(e) if k) for e in gb.leading_exps()]
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            s = frozenset(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0


@dataclass(frozen=True)
class HilbertSeries:
    """numerator(t) / prod(1 - t^d) with integer numerator, index = exponent."""

    numerator: tuple[int, ...]
    denominator_factors: tuple[int, ...]

    def coefficients(self, up_to: int) -> list[int]:
        """Power-series coefficients for degrees 0..up_to."""
        series = [0] * (up_to + 1)
        for i, c in enumerate(self.numerator):
            if i <= up_to:
                series[i] = c
        for d in self.denominator_factors:
            for i in range(d, up_to + 1):
                series[i] += series[i - d]
        return series

    def even_coefficients(self, up_to: int) -> list[int]:
        return self.coefficients(up_to)[::2]

    def __str__(self) -> str:
        num = _render_t(self.numerator)
        groups = itertools.groupby(self.denominator_factors)
        den = "*".join(f"(1-t^{d})" + (f"^{k}" if k > 1 else "")
                       for d, k in ((d, len(list(g))) for d, g in groups))
        if not den:
            return num
        if "+" in num[1:] or "-" in num[1:]:
            num = f"({num})"
        if len(self.denominator_factors) > 1 and "*" in den:
            den = f"({den})"
        return f"{num}/{den}"


def _render_t(coeffs: Sequence[int]) -> str:
    parts = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        mono = "1" if i == 0 else ("t" if i == 1 else f"t^{i}")
        body = mono if abs(c) == 1 and i else (str(abs(c)) if i == 0 else f"{abs(c)}*{mono}")
        sign = "-" if c < 0 else ("+" if parts else "")
        parts.append(sign + body)
    return "".join(parts) or "0"


def _tpoly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def hilbert_series_ci(var_weights: Sequence[int], relation_degrees: Sequence[int]) -> HilbertSeries:
    """Closed form prod(1 - t^r) / prod(1 - t^w) for a regular sequence.

    Identical factors cancel; a leftover numerator factor (1 - t^a) absorbs a
    denominator factor (1 - t^b) with b | a, smallest b first.
    """
    den = sorted(var_weights)
    num = []
    for r in sorted(relation_degrees):
        if r in den:
            den.remove(r)
        else:
            num.append(r)
    poly = [1]
    for a in num:
        b = next((b for b in den if a % b == 0), None)
        if b is None:
            factor = [1] + [0] * (a - 1) + [-1]
        else:
            den.remove(b)
            factor = [1 if i % b == 0 else 0 for i in range(a - b + 1)]
        poly = _tpoly_mul(poly, factor)
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return HilbertSeries(tuple(poly), tuple(sorted(den)))


@lru_cache(maxsize=None)
def _monomials_of_degree(weights: tuple[int, ...], d: int) -> tuple[tuple[int, ...], ...]:
    if not weights:
        return ((),) if d == 0 else ()
    w0, rest = weights[0], weights[1:]
    out = []
    for k in range(d // w0 + 1):
        for tail in _monomials_of_degree(rest, d - k * w0):
            out.append((k,) + tail)
    return tuple(out)


def monomials_of_degree(ring: Ring, d: int) -> tuple[tuple[int, ...], ...]:
    return _monomials_of_degree(ring.weights, d)


def _check_homogeneous(gens: Iterable[MultiPoly]) -> None:
    for g in gens:
        if is_homogeneous(g) is None:
            raise HomogeneityError(f"generator is not weighted-homogeneous: {render(g, False)}")


def standard_monomial_counts(gb: GroebnerBasis, cutoff: int = DEFAULT_CUTOFF) -> list[int]:
    """Per even degree 0,2,..,cutoff: monomials not divisible by any leading monomial."""
    _check_homogeneous(gb.generators)
    leads = gb.leading_exps()
    counts = []
    for d in range(0, cutoff + 1, 2):
        n = 0
        for e in monomials_of_degree(gb.ring, d):
            if not any(_divides(le, e) for le in leads):
                n += 1
        counts.append(n)
    return counts


def standard_monomials(gb: GroebnerBasis, limit: int = 100_000) -> list[tuple]:
    """All standard monomials of a zero-dimensional ideal."""
    ring = gb.ring
    leads = gb.leading_exps()
    bounds = []
    for i in range(ring.nvars):
        pure = [le[i] for le in leads if le[i] and all(k == 0 for j, k in enumerate(le) if j != i)]
        if not pure:
            raise NotZeroDimensionalError(f"no pure power of {ring.names[i]} among leading terms")
        bounds.append(min(pure))
    out = []
    for e in itertools.product(*[range(b) for b in bounds]):
        if not any(_divides(le, e) for le in leads):
            out.append(tuple(e))
            if len(out) > limit:
                raise ResourceBudgetError("too many standard monomials")
    out.sort(key=gb.order.key)
    return out


@dataclass(frozen=True)
class FiberCount:
    multiplicity: int
    distinct: int
    squarefree: bool


def multiplication_matrix(gb: GroebnerBasis, p: MultiPoly, basis: Sequence[tuple]) -> ea.Matrix:
    """Matrix of multiplication by ``p`` on the quotient, columns = images."""
    index = {e: i for i, e in enumerate(basis)}
    n = len(basis)
    cols = []
    for e in basis:
        img = gb.reduce(p * gb.ring.monomial(e))
        col = [Fraction(0)] * n
        for te, c in img.terms.items():
            col[index[te]] = c
        cols.append(col)
    return ea.Matrix(n, n, [cols[j][i] for i in range(n) for j in range(n)])


def _distinct_from(gb: GroebnerBasis, form: MultiPoly, basis) -> tuple[int, bool]:
    cp = ea.char_poly(multiplication_matrix(gb, form, basis))
    low_first = list(reversed(cp))
    sf = ea.upoly_squarefree_part(low_first)
    return len(sf) - 1, ea.upoly_is_squarefree(low_first)


def count_solutions_zero_dim(gb: GroebnerBasis) -> FiberCount:
    """Point count of a zero-dimensional ideal with and without multiplicity.

    ``squarefree`` certifies reducedness: the characteristic polynomial of
    multiplication by some linear form is squarefree of full degree, so the
    quotient is a product of copies of Q-bar and both counts agree.  The
    distinct count takes the best of several deterministic linear forms.
    """
    if gb.is_unit():
        return FiberCount(0, 0, True)
    basis = standard_monomials(gb)
    ring = gb.ring
    mult = len(basis)
    best = 0
    sqfree = False
    # coordinate eliminants, then a few generic linear forms
    forms = [ring.gen(n) for n in ring.names]
    for base in (3, 7, 11, 19):
        forms.append(sum((ring.gen(n) * (base ** k) for k, n in enumerate(ring.names)), ring.zero))
    for f in forms:
        d, sf = _distinct_from(gb, f, basis)
        best = max(best, d)
        if sf and d == mult:
            sqfree = True
            break
    return FiberCount(mult, best, sqfree)
