"""The free graded-commutative algebra over a polynomial coefficient ring.

Coordinates have degree 0 and live inside the coefficients; every other
generator is tracked in a dense exponent tuple per monomial, with Koszul
signs absorbed into the coefficient.  Three per-monomial weights drive
all structural reasoning downstream:

  ghost_degree            sum of exponent * degree over all generators
  filtration_weight       same sum restricted to positive-degree generators
  positive_factor_count   plain exponent count of positive-degree generators

A monomial lies in F^p iff filtration_weight >= p and in I^(q) iff
positive_factor_count >= q; truncation at weight P is the computational
surrogate for the completed algebra.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .polynomial_engine import (
    BasePolynomial,
    ParseError,
    _Parser,
    _tokenize,
    poly_to_str,
)


def dual_name(coord: str) -> str:
    return coord + "s"


class GeneratorTable:
    """Coordinates, their degree(-1) duals, and paired ghost/antifield rows.

    pairs is a sequence of (antifield_name, antifield_degree <= -2,
    ghost_name); the ghost gets degree -antifield_degree - 1 >= 1.  The
    stored generator order is: all duals, all antifields, all ghosts.
    """

    __slots__ = ("coordinates", "pairs", "names", "degrees", "parities",
                 "index", "_positive_idx")

    def __init__(self, coordinates: Sequence[str], pairs: Sequence[tuple] = ()):
        self.coordinates = tuple(coordinates)
        if len(set(self.coordinates)) != len(self.coordinates):
            raise ValueError("duplicate coordinate names")
        names: list = []
        degrees: list = []
        for c in self.coordinates:
            names.append(dual_name(c))
            degrees.append(-1)
        anti = []
        ghosts = []
        for rec in pairs:
            aname, adeg, gname = rec
            if adeg > -2:
                raise ValueError(f"antifield degree must be <= -2, got {adeg}")
            anti.append((aname, adeg))
            ghosts.append((gname, -adeg - 1))
        for nm, d in anti + ghosts:
            names.append(nm)
            degrees.append(d)
        all_names = list(self.coordinates) + names
        if len(set(all_names)) != len(all_names):
            raise ValueError(f"name collision in generator table: {all_names}")
        self.pairs = tuple((a, d, g) for (a, d, g) in pairs)
        self.names = tuple(names)
        self.degrees = tuple(degrees)
        self.parities = tuple(d % 2 for d in degrees)
        self.index = {n: i for i, n in enumerate(names)}
        self._positive_idx = tuple(i for i, d in enumerate(degrees) if d > 0)

    @property
    def ncoords(self) -> int:
        return len(self.coordinates)

    def degree_of(self, name: str) -> int:
        return self.degrees[self.index[name]]

    def pairing_of(self, name: str) -> Optional[str]:
        for a, _d, g in self.pairs:
            if name == a:
                return g
            if name == g:
                return a
        return None

    def __eq__(self, other):
        return (isinstance(other, GeneratorTable)
                and self.coordinates == other.coordinates
                and self.pairs == other.pairs)

    def __hash__(self):
        return hash((self.coordinates, self.pairs))

    def __repr__(self):
        return f"GeneratorTable(coords={self.coordinates}, pairs={self.pairs})"

    # -- monomial-level grading ---------------------------------------

    def ghost_of(self, m: tuple) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    def weight_of(self, m: tuple) -> int:
        return sum(m[i] * self.degrees[i] for i in self._positive_idx)

    def count_of(self, m: tuple) -> int:
        return sum(m[i] for i in self._positive_idx)

    def unit_monomial(self) -> tuple:
        return (0,) * len(self.names)


def grading_data(m: tuple, table: GeneratorTable) -> tuple:
    """(ghost_degree, filtration_weight, positive_factor_count)."""
    if len(m) != len(table.names):
        raise ValueError("monomial incompatible with table")
    return table.ghost_of(m), table.weight_of(m), table.count_of(m)


class GradedPolynomial:
    """Finite sum of (coefficient in O_X) * (generator monomial)."""

    __slots__ = ("table", "terms", "_hash")

    def __init__(self, table: GeneratorTable, terms: Optional[dict] = None):
        self.table = table
        clean = {}
        if terms:
            parities = table.parities
            for m, c in terms.items():
                if not isinstance(c, BasePolynomial):
                    raise TypeError("coefficients must be BasePolynomial")
                m = tuple(m)
                if len(m) != len(parities):
                    raise ValueError("monomial incompatible with table")
                if any(p and e > 1 for p, e in zip(parities, m)):
                    raise ValueError("odd generator exponent exceeds 1")
                if not c.is_zero():
                    clean[m] = c
        self.terms = clean
        self._hash = None

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, table: GeneratorTable) -> "GradedPolynomial":
        return cls(table)

    @classmethod
    def from_scalar(cls, table: GeneratorTable, p) -> "GradedPolynomial":
        if isinstance(p, (int, Fraction)):
            p = BasePolynomial.const(table.coordinates, p)
        if p.vars != table.coordinates:
            raise ValueError("scalar has wrong variable list")
        if p.is_zero():
            return cls(table)
        return cls(table, {table.unit_monomial(): p})

    @classmethod
    def coordinate(cls, table: GeneratorTable, name: str) -> "GradedPolynomial":
        return cls.from_scalar(table, BasePolynomial.var(table.coordinates, name))

    @classmethod
    def generator(cls, table: GeneratorTable, name: str) -> "GradedPolynomial":
        i = table.index[name]
        m = [0] * len(table.names)
        m[i] = 1
        one = BasePolynomial.const(table.coordinates, 1)
        return cls(table, {tuple(m): one})

    @classmethod
    def monomial(cls, table: GeneratorTable, m: tuple, coeff) -> "GradedPolynomial":
        if isinstance(coeff, (int, Fraction)):
            coeff = BasePolynomial.const(table.coordinates, coeff)
        return cls(table, {tuple(m): coeff})

    # -- queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def ghost_degrees(self) -> set:
        return {self.table.ghost_of(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.ghost_degrees()) <= 1

    def ghost_degree(self) -> int:
        degs = self.ghost_degrees()
        if len(degs) != 1:
            raise ValueError(f"not ghost-homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def min_weight(self) -> Optional[int]:
        if not self.terms:
            return None
        return min(self.table.weight_of(m) for m in self.terms)

    def max_weight(self) -> Optional[int]:
        if not self.terms:
            return None
        return max(self.table.weight_of(m) for m in self.terms)

    def min_count(self) -> Optional[int]:
        if not self.terms:
            return None
        return min(self.table.count_of(m) for m in self.terms)

    def ghost_part(self, g: int) -> "GradedPolynomial":
        t = {m: c for m, c in self.terms.items() if self.table.ghost_of(m) == g}
        return GradedPolynomial(self.table, t)

    def scalar_part(self) -> BasePolynomial:
        """Coefficient of the empty monomial (the restriction to X)."""
        unit = self.table.unit_monomial()
        return self.terms.get(unit, BasePolynomial.zero(self.table.coordinates))

    # -- arithmetic ----------------------------------------------------

    def _check(self, other: "GradedPolynomial") -> None:
        if self.table != other.table:
            raise ValueError("generator table mismatch")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, BasePolynomial)):
            other = GradedPolynomial.from_scalar(self.table, other)
        self._check(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                t.pop(m, None)
            else:
                t[m] = s
        return GradedPolynomial(self.table, t)

    __radd__ = __add__

    def __neg__(self):
        return GradedPolynomial(self.table, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, BasePolynomial)):
            other = GradedPolynomial.from_scalar(self.table, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return GradedPolynomial(self.table,
                                    {m: co * c for m, co in self.terms.items()})
        if isinstance(other, BasePolynomial):
            return GradedPolynomial(self.table,
                                    {m: co * other for m, co in self.terms.items()})
        return multiply(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, BasePolynomial)):
            other = GradedPolynomial.from_scalar(self.table, other)
        if not isinstance(other, GradedPolynomial):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.table, frozenset(
                (m, c) for m, c in self.terms.items())))
        return self._hash

    def __str__(self):
        return graded_to_str(self)

    def __repr__(self):
        return f"GradedPolynomial({graded_to_str(self)!r})"


def _merge_sign(a: tuple, b: tuple, parities: tuple) -> int:
    """Koszul sign exponent for reordering (a-block)(b-block) to canonical."""
    total = 0
    n = len(a)
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + (a[i] if parities[i] else 0)
    for q in range(n):
        if parities[q] and b[q]:
            total += b[q] * suffix[q + 1]
    return total % 2


def multiply(a: GradedPolynomial, b: GradedPolynomial) -> GradedPolynomial:
    """Graded-commutative product with Koszul signs; odd squares vanish."""
    if a.table != b.table:
        raise ValueError("generator table mismatch")
    table = a.table
    parities = table.parities
    out: dict = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            bad = False
            for i, par in enumerate(parities):
                if par and ma[i] + mb[i] > 1:
                    bad = True
                    break
            if bad:
                continue
            m = tuple(x + y for x, y in zip(ma, mb))
            c = ca * cb
            if _merge_sign(ma, mb, parities):
                c = -c
            s = out.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
    return GradedPolynomial(table, out)


def gr_project(a: GradedPolynomial, p: int) -> GradedPolynomial:
    """Terms of filtration weight exactly p (canonical monomial lift)."""
    t = {m: c for m, c in a.terms.items() if a.table.weight_of(m) == p}
    return GradedPolynomial(a.table, t)


def truncate(a: GradedPolynomial, P: int) -> GradedPolynomial:
    """Drop terms of filtration weight > P."""
    if P < 0:
        raise ValueError("truncation weight must be >= 0")
    t = {m: c for m, c in a.terms.items() if a.table.weight_of(m) <= P}
    return GradedPolynomial(a.table, t)


def transport(a: GradedPolynomial, new_table: GeneratorTable) -> GradedPolynomial:
    """Re-express a over a table that contains all its generators.

    Both tables must share the coordinate list and list the common
    generators in the same relative order, so no sign bookkeeping is
    needed; violations raise rather than silently flipping signs.
    """
    old = a.table
    if old == new_table:
        return a
    if old.coordinates != new_table.coordinates:
        raise ValueError("coordinate mismatch")
    posmap = []
    for n in old.names:
        posmap.append(new_table.index.get(n))
    seen = [p for p in posmap if p is not None]
    if any(x >= y for x, y in zip(seen, seen[1:])):
        raise ValueError("generator order not preserved between tables")
    width = len(new_table.names)
    out = {}
    for m, c in a.terms.items():
        m2 = [0] * width
        for i, e in enumerate(m):
            if not e:
                continue
            p = posmap[i]
            if p is None:
                raise ValueError(f"generator {old.names[i]!r} missing from table")
            m2[p] = e
        out[tuple(m2)] = c
    return GradedPolynomial(new_table, out)


# -- derivations -------------------------------------------------------


def left_derivative(a: GradedPolynomial, name: str) -> GradedPolynomial:
    """Graded left partial derivative by a table generator."""
    table = a.table
    i = table.index[name]
    par = table.parities[i]
    parities = table.parities
    out: dict = {}
    for m, c in a.terms.items():
        e = m[i]
        if not e:
            continue
        m2 = list(m)
        m2[i] -= 1
        coeff = c * e
        if par:
            prefix = sum(m[j] for j in range(i) if parities[j]) % 2
            if prefix:
                coeff = -coeff
        m2 = tuple(m2)
        s = out.get(m2)
        s = coeff if s is None else s + coeff
        if s.is_zero():
            out.pop(m2, None)
        else:
            out[m2] = s
    return GradedPolynomial(table, out)


def right_derivative(a: GradedPolynomial, name: str) -> GradedPolynomial:
    """Graded right partial derivative by a table generator."""
    table = a.table
    i = table.index[name]
    par = table.parities[i]
    parities = table.parities
    out: dict = {}
    for m, c in a.terms.items():
        e = m[i]
        if not e:
            continue
        m2 = list(m)
        m2[i] -= 1
        coeff = c * e
        if par:
            suffix = sum(m[j] for j in range(i + 1, len(m)) if parities[j]) % 2
            if suffix:
                coeff = -coeff
        m2 = tuple(m2)
        s = out.get(m2)
        s = coeff if s is None else s + coeff
        if s.is_zero():
            out.pop(m2, None)
        else:
            out[m2] = s
    return GradedPolynomial(table, out)


def coordinate_derivative(a: GradedPolynomial, coord: str) -> GradedPolynomial:
    out = {}
    for m, c in a.terms.items():
        d = c.derivative(coord)
        if not d.is_zero():
            out[m] = d
    return GradedPolynomial(a.table, out)


def odd_derivation(table: GeneratorTable, images: dict):
    """Extend generator images (odd total degree shift) to a derivation.

    images maps generator names to GradedPolynomial values; unmapped
    generators and all coordinates are sent to zero.  D(a) = sum over g
    of images[g] * left_derivative(a, g).
    """
    items = [(name, img) for name, img in images.items() if not img.is_zero()]

    def apply(a: GradedPolynomial) -> GradedPolynomial:
        out = GradedPolynomial.zero(table)
        for name, img in items:
            d = left_derivative(a, name)
            if d.is_zero():
                continue
            out = out + multiply(img, d)
        return out

    return apply


# -- canonical strings -------------------------------------------------


def graded_to_str(a: GradedPolynomial) -> str:
    """Canonical form: `(coeff)*gen^k*...` terms joined by ` + `.

    Terms are ordered by (filtration weight, ghost degree, exponents).
    """
    if not a.terms:
        return "(0)"
    table = a.table

    def term_key(m):
        return (table.weight_of(m), table.ghost_of(m), m)

    parts = []
    for m in sorted(a.terms, key=term_key):
        c = a.terms[m]
        body = f"({poly_to_str(c)})"
        factors = [f"{n}^{e}" if e > 1 else n
                   for n, e in zip(table.names, m) if e]
        if factors:
            body += "*" + "*".join(factors)
        parts.append(body)
    return " + ".join(parts)


def parse_graded(text: str, table: GeneratorTable) -> GradedPolynomial:
    """Parse the canonical graded string form (tolerant of factor order)."""
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos]

    def take(kind=None):
        nonlocal pos
        t = toks[pos]
        if kind is not None and t[0] != kind:
            raise ParseError(f"expected {kind}, found {t[1]!r}", t[2])
        pos += 1
        return t

    def parse_factor() -> GradedPolynomial:
        nonlocal pos
        t = peek()
        if t[0] == "(":
            # scalar coefficient in parentheses
            take()
            sub = _Parser(toks, table.coordinates)
            sub.i = pos
            scalar = sub.expr()
            pos = sub.i
            take(")")
            return GradedPolynomial.from_scalar(table, scalar)
        if t[0] == "int":
            take()
            val = GradedPolynomial.from_scalar(table, int(t[1]))
            return val
        if t[0] == "name":
            take()
            name = t[1]
            if name in table.index:
                g = GradedPolynomial.generator(table, name)
            elif name in table.coordinates:
                g = GradedPolynomial.coordinate(table, name)
            else:
                raise ParseError(f"unknown name {name!r}", t[2])
            if peek()[0] == "^":
                take()
                e = int(take("int")[1])
                out = GradedPolynomial.from_scalar(table, 1)
                for _ in range(e):
                    out = multiply(out, g)
                return out
            return g
        raise ParseError(f"unexpected token {t[1]!r}", t[2])

    def parse_term() -> GradedPolynomial:
        out = parse_factor()
        while True:
            t = peek()
            if t[0] == "*":
                take()
                out = multiply(out, parse_factor())
            elif t[0] == "/":
                take()
                d = take("int")
                denom = int(d[1])
                if denom == 0:
                    raise ParseError("division by zero", d[2])
                out = out * Fraction(1, denom)
            else:
                return out

    result = GradedPolynomial.zero(table)
    sign = 1
    t = peek()
    if t[0] in ("+", "-"):
        take()
        sign = -1 if t[0] == "-" else 1
    result = result + parse_term() * sign
    while peek()[0] in ("+", "-"):
        op = take()[0]
        nxt = parse_term()
        result = result + nxt if op == "+" else result - nxt
    t = peek()
    if t[0] != "end":
        raise ParseError(f"trailing input {t[1]!r}", t[2])
    return result
