"""Cohomology of the classical BRST complex in low degrees.

Everything here is reduced to exact linear algebra over the rationals.
The Jacobian ring is presented by a Groebner basis, so its elements have
canonical normal forms and a degree-d slice has the standard monomials
as a basis.  Symmetries of the action enter through a finite
presentation: generators tau_i of the vector fields annihilating S0
modulo the trivial ones, relations among them with bivector
certificates, and structure functions for their commutators.  H^0 is
the algebra of invariants, H^1 is computed from the associated
one-cochain complex, and both are cross-checkable against the first
page of the weight spectral sequence of a master solution.

All reports are exact statements about a degree slice: membership
conditions hold on the nose, never merely up to the degree bound.
Dimensions need not be monotone in the bound, so every report carries a
stabilization flag comparing the bound against the next one.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .polynomial_engine import (
    BasePolynomial,
    GroebnerBasis,
    ModuleVector,
    ORDER_GREVLEX,
    groebner_basis,
    lift_membership,
    monomial_key,
    normal_form,
    nullspace,
    poly_to_str,
    rref,
    syzygy_basis,
)
from .graded_algebra import GradedPolynomial, gr_project, graded_to_str
from .antibracket import bracket

__all__ = [
    "CohomologyReport",
    "SymmetryPresentation",
    "apply_vector_field",
    "e2_page",
    "h0",
    "h0_bracket",
    "h1",
    "jacobian_ring",
    "koszul_syzygies",
    "standard_monomials",
    "symmetry_presentation",
]


# -- small polynomial utilities ----------------------------------------


def apply_vector_field(field: ModuleVector, f: BasePolynomial) -> BasePolynomial:
    """Apply sum_k field[k] * d/dx_k to f."""
    if field.vars != f.vars or field.rank != len(f.vars):
        raise ValueError("vector field does not match the polynomial's coordinates")
    out = BasePolynomial.zero(f.vars)
    for k, name in enumerate(f.vars):
        out = out + field[k] * f.derivative(name)
    return out


def _commutator(a: ModuleVector, b: ModuleVector) -> ModuleVector:
    vars = a.vars
    comps = []
    for k in range(len(vars)):
        acc = BasePolynomial.zero(vars)
        for l, name in enumerate(vars):
            acc = acc + a[l] * b[k].derivative(name) - b[l] * a[k].derivative(name)
        comps.append(acc)
    return ModuleVector(comps)


def _check_partials(partials: Sequence[BasePolynomial]) -> tuple:
    parts = list(partials)
    if not parts:
        raise ValueError("at least one partial derivative is required")
    vars = parts[0].vars
    for p in parts:
        if p.vars != vars:
            raise ValueError("partials use inconsistent coordinate lists")
    if len(parts) != len(vars):
        raise ValueError(f"expected {len(vars)} partials for coordinates {vars}")
    return parts, vars


def _pair_index(n: int) -> list:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def koszul_syzygies(partials: Sequence[BasePolynomial]) -> list:
    """The trivial syzygies p_j e_i - p_i e_j, ordered by (i, j), i < j."""
    parts, vars = _check_partials(partials)
    n = len(vars)
    out = []
    for i, j in _pair_index(n):
        comps = [BasePolynomial.zero(vars) for _ in range(n)]
        comps[i] = parts[j]
        comps[j] = -parts[i]
        out.append(ModuleVector(comps))
    return out


def _contract(partials: Sequence[BasePolynomial], bivector: dict) -> ModuleVector:
    """dS0 against a bivector sum c_ij d_i ^ d_j gives c_ij (p_i e_j - p_j e_i)."""
    vars = partials[0].vars
    comps = [BasePolynomial.zero(vars) for _ in range(len(vars))]
    for (i, j), c in bivector.items():
        comps[j] = comps[j] + partials[i] * c
        comps[i] = comps[i] - partials[j] * c
    return ModuleVector(comps)


def _monic(v: ModuleVector, order: str) -> ModuleVector:
    for c in v.components:
        if not c.is_zero():
            _e, lc = c.leading(order)
            return v * (Fraction(1) / lc)
    return v


def _vec_sort_key(v: ModuleVector, order: str):
    return (max(c.total_degree() for c in v.components),
            tuple(poly_to_str(c, order) for c in v.components))


# -- symmetry presentation ---------------------------------------------


class SymmetryPresentation:
    """Finite presentation of the symmetries of the action.

    tau lists generators of the annihilator of dS0 in the vector
    fields, pruned so that none lies in the module spanned by the
    Koszul syzygies and the earlier generators.  relations is an s x r
    matrix over the coordinate ring; each row kills the taus up to the
    contraction of dS0 with the matching entry of bivectors_v.  The
    commutator of two generators is recorded by structure_f (an
    antisymmetric r x r x r table) plus a bivector correction.
    """

    __slots__ = ("vars", "order", "partials", "tau", "relations",
                 "bivectors_v", "structure_f", "correction_g")

    def __init__(self, vars, order, partials, tau, relations, bivectors_v,
                 structure_f, correction_g):
        self.vars = tuple(vars)
        self.order = order
        self.partials = tuple(partials)
        self.tau = tuple(tau)
        self.relations = tuple(tuple(row) for row in relations)
        self.bivectors_v = tuple(dict(b) for b in bivectors_v)
        self.structure_f = tuple(tuple(tuple(row) for row in plane)
                                 for plane in structure_f)
        self.correction_g = tuple(tuple(dict(b) for b in row)
                                  for row in correction_g)
        self._verify()

    @property
    def r(self) -> int:
        return len(self.tau)

    @property
    def s(self) -> int:
        return len(self.relations)

    def _verify(self) -> None:
        r = self.r
        zero = ModuleVector([BasePolynomial.zero(self.vars)] * len(self.vars))
        for t in self.tau:
            acc = BasePolynomial.zero(self.vars)
            for k in range(len(self.vars)):
                acc = acc + t[k] * self.partials[k]
            assert acc.is_zero(), "presentation certificate failed: tau does not annihilate dS0"
        for a in range(self.s):
            acc = zero
            for j in range(r):
                acc = acc + self.tau[j] * self.relations[a][j]
            acc = acc + _contract(self.partials, self.bivectors_v[a])
            assert acc.is_zero(), (
                f"presentation certificate failed: relation {a} is not closed by its bivector")
        for i in range(r):
            for j in range(r):
                for k in range(r):
                    assert (self.structure_f[i][j][k] + self.structure_f[j][i][k]).is_zero(), (
                        "presentation certificate failed: structure functions not antisymmetric")
        for i in range(r):
            for j in range(i + 1, r):
                acc = _commutator(self.tau[i], self.tau[j])
                for k in range(r):
                    acc = acc - self.tau[k] * self.structure_f[i][j][k]
                acc = acc - _contract(self.partials, self.correction_g[i][j])
                assert acc.is_zero(), (
                    f"presentation certificate failed: commutator ({i},{j}) is not resolved")

    def __repr__(self):
        return f"SymmetryPresentation(r={self.r}, s={self.s}, vars={self.vars})"


def jacobian_ring(partials: Sequence[BasePolynomial],
                  order: str = ORDER_GREVLEX) -> GroebnerBasis:
    """Groebner basis of the ideal of the partials.

    Normal forms against the result are canonical representatives of
    the quotient ring.
    """
    parts, _vars = _check_partials(partials)
    return groebner_basis(parts, order)


def symmetry_presentation(partials: Sequence[BasePolynomial],
                          order: str = ORDER_GREVLEX) -> SymmetryPresentation:
    """Present the symmetries of the action by generators and relations.

    Generators are syzygies of the partials pruned modulo the Koszul
    syzygies and the generators kept so far, so the trivial rotations
    of a nondegenerate quadratic produce none.  Relations come from a
    syzygy computation over the kept generators together with the
    Koszul vectors; the Koszul coefficients of each relation are folded
    into a bivector certificate.  Structure functions are membership
    certificates for the pairwise commutators.  Every certificate is
    reverified exactly by the constructor.
    """
    parts, vars = _check_partials(partials)
    n = len(vars)
    kosz = koszul_syzygies(parts)
    kpairs = _pair_index(n)

    raw = syzygy_basis(parts, order)
    raw.sort(key=lambda v: _vec_sort_key(v, order))
    tau = []
    for v in raw:
        if v.is_zero():
            continue
        gens = kosz + tau
        if gens and lift_membership(v, gens, order) is not None:
            continue
        tau.append(_monic(v, order))
    r = len(tau)

    relations = []
    bivectors = []
    if r:
        second = syzygy_basis(tau + kosz, order)
        pure = [v for v in second if all(v[i].is_zero() for i in range(r))]
        cands = [v for v in second if not all(v[i].is_zero() for i in range(r))]
        cands.sort(key=lambda v: _vec_sort_key(v, order))
        kept = []
        for v in cands:
            gens = kept + pure
            if gens and lift_membership(v, gens, order) is not None:
                continue
            kept.append(_monic(v, order))
        for v in kept:
            relations.append([v[i] for i in range(r)])
            bv = {}
            for t, (i, j) in enumerate(kpairs):
                c = v[r + t]
                if not c.is_zero():
                    bv[(i, j)] = -c
            bivectors.append(bv)

    zero = BasePolynomial.zero(vars)
    structure = [[[zero for _ in range(r)] for _ in range(r)] for _ in range(r)]
    correction = [[{} for _ in range(r)] for _ in range(r)]
    if r:
        gens = tau + kosz
        for i in range(r):
            for j in range(i + 1, r):
                cert = lift_membership(_commutator(tau[i], tau[j]), gens, order)
                if cert is None:
                    raise AssertionError(
                        f"presentation certificate failed: commutator ({i},{j}) "
                        "has no expression over the generators")
                co = cert.coefficients
                for k in range(r):
                    structure[i][j][k] = co[k]
                    structure[j][i][k] = -co[k]
                bv = {}
                for t, (a, b) in enumerate(kpairs):
                    w = co[r + t]
                    if not w.is_zero():
                        bv[(a, b)] = -w
                correction[i][j] = bv
                correction[j][i] = {k: -c for k, c in bv.items()}

    return SymmetryPresentation(vars, order, parts, tau, relations, bivectors,
                                structure, correction)


# -- degree slices of the quotient ring --------------------------------


def _exponents_upto(n: int, D: int) -> list:
    out = []

    def rec(i, left, exp):
        if i == n:
            out.append(tuple(exp))
            return
        for k in range(left + 1):
            exp.append(k)
            rec(i + 1, left - k, exp)
            exp.pop()

    rec(0, D, [])
    return out


def standard_monomials(gb: GroebnerBasis, D: int) -> list:
    """Exponents of the monomials of degree <= D in normal form.

    Sorted descending in the basis order, so linear algebra over slices
    eliminates against high monomials first and representatives come
    out reduced toward low degree.
    """
    key = monomial_key(gb.order)
    std = []
    for e in _exponents_upto(len(gb.vars), D):
        m = BasePolynomial(gb.vars, {e: Fraction(1)})
        if normal_form(m, gb) == m:
            std.append(e)
    std.sort(key=key, reverse=True)
    return std


class CohomologyReport:
    """Exact basis of a cohomology group on a degree slice.

    dim counts basis elements; every element satisfies the defining
    conditions of its group exactly.  stable records whether the
    dimension at bound D agrees with the one at D + 1; an unstable
    report signals that the slice has not settled and says nothing
    about the group beyond the bound.
    """

    __slots__ = ("p", "bound", "dim", "basis", "stable")

    def __init__(self, p: int, bound: int, dim: int, basis, stable: bool):
        self.p = p
        self.bound = bound
        self.dim = dim
        self.basis = list(basis)
        self.stable = bool(stable)

    def to_json_obj(self) -> dict:
        out = []
        for b in self.basis:
            if isinstance(b, BasePolynomial):
                out.append(poly_to_str(b))
            elif isinstance(b, GradedPolynomial):
                out.append(graded_to_str(b))
            else:
                out.append([poly_to_str(c) for c in b])
        return {"p": self.p, "bound": self.bound, "dim": self.dim,
                "basis": out, "stable": self.stable}

    def __repr__(self):
        return (f"CohomologyReport(p={self.p}, bound={self.bound}, "
                f"dim={self.dim}, stable={self.stable})")


def _reduce_row(v: list, red: list, pivots: list) -> list:
    v = list(v)
    for row, pc in zip(red, pivots):
        if v[pc]:
            f = v[pc]
            v = [a - f * b for a, b in zip(v, row)]
    return v


# -- H^0: invariants ---------------------------------------------------


def _invariant_vectors(pres: SymmetryPresentation, gb: GroebnerBasis, D: int):
    std = standard_monomials(gb, D)
    nin = len(std)
    if pres.r == 0:
        ident = []
        for j in range(nin):
            v = [Fraction(0)] * nin
            v[j] = Fraction(1)
            ident.append(v)
        return std, ident
    rows = {}
    for j, e in enumerate(std):
        m = BasePolynomial(pres.vars, {e: Fraction(1)})
        for ti, t in enumerate(pres.tau):
            out = normal_form(apply_vector_field(t, m), gb)
            for ee, c in out.terms.items():
                rows.setdefault((ti, ee), [Fraction(0)] * nin)[j] = c
    ker = nullspace(list(rows.values()), nin)
    red, _piv = rref(ker)
    return std, red


def _vec_to_poly(vars, std, v) -> BasePolynomial:
    return BasePolynomial(vars, {std[j]: v[j] for j in range(len(std)) if v[j]})


def h0(partials: Sequence[BasePolynomial], D: int,
       order: str = ORDER_GREVLEX,
       presentation: Optional[SymmetryPresentation] = None) -> CohomologyReport:
    """Invariants of the quotient ring on the degree-<=D slice.

    Basis elements f are normal forms with normal_form(tau_i(f)) = 0
    for every generator; invariance under the full symmetry module
    follows because the Koszul fields move everything into the ideal.
    """
    if D < 0:
        raise ValueError("degree bound must be >= 0")
    parts, vars = _check_partials(partials)
    pres = presentation if presentation is not None else symmetry_presentation(parts, order)
    gb = jacobian_ring(parts, order)
    std, vecs = _invariant_vectors(pres, gb, D)
    _std1, vecs1 = _invariant_vectors(pres, gb, D + 1)
    basis = [_vec_to_poly(vars, std, v) for v in vecs]
    for b in basis:
        for t in pres.tau:
            if not normal_form(apply_vector_field(t, b), gb).is_zero():
                raise AssertionError("invariant candidate fails its defining condition")
    return CohomologyReport(0, D, len(basis), basis, len(vecs) == len(vecs1))


# -- H^1: the one-cochain complex --------------------------------------


def _degree_allowance(pres: SymmetryPresentation) -> int:
    """How far beyond the bound boundary inputs must range.

    Applying tau_i to a monomial shifts its degree by deg(c) - 1 per
    coefficient term c, so inputs up to D plus the worst negative shift
    are enough for every boundary that can land inside the slice.
    """
    allow = 0
    for t in pres.tau:
        mindeg = None
        for c in t.components:
            if c.is_zero():
                continue
            d = min(sum(e) for e in c.terms)
            mindeg = d if mindeg is None else min(mindeg, d)
        if mindeg is not None:
            allow = max(allow, 1 - mindeg)
    return max(0, allow)


def _boundary_space(pres: SymmetryPresentation, gb: GroebnerBasis, D: int):
    """RREF of the boundaries tau_i(f) that lie inside the slice.

    Inputs f range over standard monomials up to the allowance-extended
    bound; combinations whose images stick out of the slice are
    eliminated, so the span is the full boundary space intersected with
    the slice over that input range.
    """
    r = pres.r
    std = standard_monomials(gb, D)
    colmap = {}
    for i in range(r):
        for e in std:
            colmap[(i, e)] = len(colmap)
    nlow = len(colmap)
    ext = standard_monomials(gb, D + _degree_allowance(pres))
    cols = dict(colmap)
    vecs = []
    for e in ext:
        m = BasePolynomial(pres.vars, {e: Fraction(1)})
        entries = {}
        for i, t in enumerate(pres.tau):
            out = normal_form(apply_vector_field(t, m), gb)
            for ee, c in out.terms.items():
                cols.setdefault((i, ee), len(cols))
                entries[(i, ee)] = c
        vecs.append(entries)
    dense = []
    for entries in vecs:
        v = [Fraction(0)] * len(cols)
        for k, c in entries.items():
            v[cols[k]] = c
        dense.append(v)
    if len(cols) > nlow:
        high = list(range(nlow, len(cols)))
        hrows = [[v[i] for v in dense] for i in high]
        combos = nullspace(hrows, len(dense))
        inslice = []
        for co in combos:
            w = [sum(co[k] * dense[k][i] for k in range(len(dense)))
                 for i in range(nlow)]
            inslice.append(w)
    else:
        inslice = [v[:nlow] for v in dense]
    red, piv = rref(inslice)
    return std, colmap, red, piv


def _cocycle_vectors(pres: SymmetryPresentation, gb: GroebnerBasis, D: int, std, colmap):
    r = pres.r
    nin = len(colmap)
    rows = {}

    def add(cond, ee, col, c):
        row = rows.setdefault((cond, ee), [Fraction(0)] * nin)
        row[col] = row[col] + c

    for e in std:
        m = BasePolynomial(pres.vars, {e: Fraction(1)})
        nf_tau = [normal_form(apply_vector_field(t, m), gb) for t in pres.tau]
        for i in range(r):
            for j in range(i + 1, r):
                # condition (i,j): tau_i(g_j) - tau_j(g_i) - f_ij^k g_k = 0
                for ee, c in nf_tau[i].terms.items():
                    add(("c", i, j), ee, colmap[(j, e)], c)
                for ee, c in nf_tau[j].terms.items():
                    add(("c", i, j), ee, colmap[(i, e)], -c)
                for k in range(r):
                    fk = pres.structure_f[i][j][k]
                    if fk.is_zero():
                        continue
                    out = normal_form(fk * m, gb)
                    for ee, c in out.terms.items():
                        add(("c", i, j), ee, colmap[(k, e)], -c)
        for a in range(pres.s):
            for k in range(r):
                rk = pres.relations[a][k]
                if rk.is_zero():
                    continue
                out = normal_form(rk * m, gb)
                for ee, c in out.terms.items():
                    add(("r", a), ee, colmap[(k, e)], c)
    return nullspace(list(rows.values()), nin)


def _h1_check_exact(pres: SymmetryPresentation, gb: GroebnerBasis, gs) -> None:
    r = pres.r
    for i in range(r):
        for j in range(i + 1, r):
            acc = apply_vector_field(pres.tau[i], gs[j]) \
                - apply_vector_field(pres.tau[j], gs[i])
            for k in range(r):
                acc = acc - pres.structure_f[i][j][k] * gs[k]
            if not normal_form(acc, gb).is_zero():
                raise AssertionError("one-cocycle fails its commutator condition")
    for a in range(pres.s):
        acc = BasePolynomial.zero(pres.vars)
        for k in range(r):
            acc = acc + pres.relations[a][k] * gs[k]
        if not normal_form(acc, gb).is_zero():
            raise AssertionError("one-cocycle fails a relation condition")


def _h1_slice(pres: SymmetryPresentation, gb: GroebnerBasis, D: int):
    std, colmap, bred, bpiv = _boundary_space(pres, gb, D)
    Z = _cocycle_vectors(pres, gb, D, std, colmap)
    reduced = [_reduce_row(z, bred, bpiv) for z in Z]
    red, _piv = rref(reduced)
    reps = []
    for v in red:
        gs = []
        for i in range(pres.r):
            terms = {}
            for e in std:
                c = v[colmap[(i, e)]]
                if c:
                    terms[e] = c
            gs.append(BasePolynomial(pres.vars, terms))
        reps.append(tuple(gs))
    return reps


def h1(partials: Sequence[BasePolynomial], D: int,
       order: str = ORDER_GREVLEX,
       presentation: Optional[SymmetryPresentation] = None) -> CohomologyReport:
    """First cohomology of the symmetry action on the quotient ring.

    Cocycles are tuples (g_1, ..., g_r) over the degree-<=D slice with
    tau_i(g_j) - tau_j(g_i) - sum_k f_ij^k g_k = 0 and
    sum_k r_ak g_k = 0 in the quotient, both checked exactly.
    Boundaries are the tuples (tau_i(f)); their inputs range far enough
    beyond the bound that the boundary space is complete inside the
    slice.  Representatives are reduced against the boundaries.
    """
    if D < 0:
        raise ValueError("degree bound must be >= 0")
    parts, _vars = _check_partials(partials)
    pres = presentation if presentation is not None else symmetry_presentation(parts, order)
    gb = jacobian_ring(parts, order)
    if pres.r == 0:
        return CohomologyReport(1, D, 0, [], True)
    reps = _h1_slice(pres, gb, D)
    reps1 = _h1_slice(pres, gb, D + 1)
    for gs in reps:
        _h1_check_exact(pres, gb, gs)
    return CohomologyReport(1, D, len(reps), reps, len(reps) == len(reps1))


# -- the induced bracket H^0 x H^0 -> H^1 ------------------------------


def _hamiltonian_lift(pres: SymmetryPresentation, gb: GroebnerBasis, f: BasePolynomial):
    """For each tau_i, a field xi_i with tau_i(f) = xi_i(S0).

    Membership of tau_i(f) in the ideal of the partials is exactly
    invariance of f, so failure is reported as a bad input rather than
    an internal error.
    """
    lifts = []
    for i, t in enumerate(pres.tau):
        moved = apply_vector_field(t, f)
        cert = lift_membership(moved, list(pres.partials), pres.order)
        if cert is None:
            raise ValueError(
                f"h0_bracket input is not an exact invariant: generator {i} "
                "moves it off the ideal of the partials")
        lifts.append(cert.coefficients)
    return lifts


def _class_reduce(pres: SymmetryPresentation, gb: GroebnerBasis, gs, D: int):
    """Reduce a cocycle tuple against the boundary space of the slice."""
    std, colmap, bred, bpiv = _boundary_space(pres, gb, D)
    v = [Fraction(0)] * len(colmap)
    for i, g in enumerate(gs):
        for ee, c in g.terms.items():
            v[colmap[(i, ee)]] = c
    w = _reduce_row(v, bred, bpiv)
    out = []
    for i in range(pres.r):
        terms = {}
        for e in std:
            c = w[colmap[(i, e)]]
            if c:
                terms[e] = c
        out.append(BasePolynomial(pres.vars, terms))
    return out


def _raw_bracket(pres: SymmetryPresentation, gb: GroebnerBasis,
                 f: BasePolynomial, g: BasePolynomial):
    xi = _hamiltonian_lift(pres, gb, f)
    eta = _hamiltonian_lift(pres, gb, g)
    out = []
    for i in range(pres.r):
        out.append(normal_form(apply_vector_field(xi[i], g)
                               + apply_vector_field(eta[i], f), gb))
    return out


def h0_bracket(f: BasePolynomial, g: BasePolynomial,
               presentation: SymmetryPresentation) -> list:
    """Class of the induced bracket of two invariants.

    The value on tau_i is xi_i(g) + eta_i(f), where xi_i and eta_i are
    membership certificates for tau_i(f) and tau_i(g) against the
    partials.  The result is reduced against the boundary space, so
    equal classes come out as equal tuples.  Well-definedness is spot
    checked on every call by redoing the computation with the lift
    f + d_1 S0 and comparing reduced classes.
    """
    pres = presentation
    if pres.r == 0:
        return []
    gb = jacobian_ring(list(pres.partials), pres.order)
    raw = _raw_bracket(pres, gb, f, g)
    bound = max(0, max(p.total_degree() for p in raw))
    shifted = _raw_bracket(pres, gb, f + pres.partials[0], g)
    common = max(bound, max((p.total_degree() for p in shifted), default=-1), 0)
    left = _class_reduce(pres, gb, raw, common)
    right = _class_reduce(pres, gb, shifted, common)
    for a, b in zip(left, right):
        if a != b:
            raise AssertionError("bracket class depends on the chosen lift")
    return _class_reduce(pres, gb, raw, bound)


# -- first page of the weight spectral sequence ------------------------


def _ghost_monomials(table, p: int) -> list:
    """Monomials in the positive generators of total ghost degree p."""
    pos = [(i, d) for i, d in enumerate(table.degrees) if d > 0]
    out = []

    def rec(k, left, exp):
        if left == 0:
            m = [0] * len(table.names)
            for (i, _d), e in zip(pos, exp):
                m[i] = e
            out.append(tuple(m))
            return
        if k == len(pos):
            return
        i, d = pos[k]
        emax = left // d
        if table.parities[i]:
            emax = min(emax, 1)
        for e in range(emax + 1):
            rec(k + 1, left - e * d, exp + [e])

    if p == 0:
        return [table.unit_monomial()]
    if p < 0:
        return []
    rec(0, p, [])
    return sorted(out)


def _d1_decompose(S, table, gb, gm: tuple, coeff: BasePolynomial, p: int) -> dict:
    """Page differential of coeff * ghost monomial, as NF coefficients."""
    a = GradedPolynomial.monomial(table, gm, coeff)
    out = gr_project(bracket(S, a), p + 1)
    dec = {}
    for m, c in out.terms.items():
        nf = normal_form(c, gb)
        if not nf.is_zero():
            dec[m] = nf
    return dec


def _e2_slice(sol, gb, p: int, D: int):
    table = sol.resolution.table
    S = sol.S
    std = standard_monomials(gb, D)
    dom = [(gm, e) for gm in _ghost_monomials(table, p) for e in std]
    if not dom:
        return []
    cols = {}
    outs = []
    for gm, e in dom:
        dec = _d1_decompose(S, table, gb, gm,
                            BasePolynomial(table.coordinates, {e: Fraction(1)}), p)
        outs.append(dec)
        for tm, c in dec.items():
            for ee in c.terms:
                cols.setdefault((tm, ee), len(cols))
    rows = [[Fraction(0)] * len(dom) for _ in range(len(cols))]
    for j, dec in enumerate(outs):
        for tm, c in dec.items():
            for ee, cc in c.terms.items():
                rows[cols[(tm, ee)]][j] = cc
    ker = nullspace(rows, len(dom))

    # image of the previous column, restricted to the slice
    ext = standard_monomials(gb, D + 1)
    prev = [(gm, e) for gm in _ghost_monomials(table, p - 1) for e in ext]
    imvecs = []
    if prev:
        icols = {}
        for e in std:
            for gm in _ghost_monomials(table, p):
                icols[(gm, e)] = len(icols)
        nlow = len(icols)
        decs = []
        for gm, e in prev:
            dec = _d1_decompose(S, table, gb, gm,
                                BasePolynomial(table.coordinates, {e: Fraction(1)}), p - 1)
            decs.append(dec)
            for tm, c in dec.items():
                for ee in c.terms:
                    icols.setdefault((tm, ee), len(icols))
        dense = []
        for dec in decs:
            v = [Fraction(0)] * len(icols)
            for tm, c in dec.items():
                for ee, cc in c.terms.items():
                    v[icols[(tm, ee)]] = cc
            dense.append(v)
        if len(icols) > nlow:
            high = list(range(nlow, len(icols)))
            hrows = [[v[i] for v in dense] for i in high]
            combos = nullspace(hrows, len(dense))
            for co in combos:
                imvecs.append([sum(co[k] * dense[k][i] for k in range(len(dense)))
                               for i in range(nlow)])
        else:
            imvecs = [v[:nlow] for v in dense]
        # translate image coordinates into the kernel's domain coordinates
        dmap = {pair: idx for idx, pair in enumerate(dom)}
        remapped = []
        for v in imvecs:
            w = [Fraction(0)] * len(dom)
            for (gm, e), i in icols.items():
                if i < nlow:
                    w[dmap[(gm, e)]] = v[i]
            remapped.append(w)
        imvecs = remapped
    bred, bpiv = rref(imvecs)
    reduced = [_reduce_row(z, bred, bpiv) for z in ker]
    red, _piv = rref(reduced)
    reps = []
    for v in red:
        terms = {}
        for idx, (gm, e) in enumerate(dom):
            if v[idx]:
                terms.setdefault(gm, {})[e] = v[idx]
        gp = GradedPolynomial(table, {gm: BasePolynomial(table.coordinates, t)
                                      for gm, t in terms.items()})
        reps.append(gp)
    return reps


def e2_page(sol, p: int, D: int) -> CohomologyReport:
    """Column p of the first-page cohomology of a master solution.

    Cochains are quotient-ring coefficients on the weight-p ghost
    monomials; the differential is the weight-(p+1) projection of the
    antibracket with S, which singles out the linear layer of the
    solution without decomposing it symbolically.  The report gives
    ker/im on the degree-<=D slice; images are taken from inputs one
    degree beyond the bound, which covers every combination landing
    inside the slice.
    """
    if D < 0:
        raise ValueError("degree bound must be >= 0")
    if sol.order < p + 1:
        raise ValueError(
            f"solution is certified to order {sol.order}; column {p} needs "
            f"order at least {p + 1}")
    res = sol.resolution
    gb = groebner_basis(list(res.partials), res.order)
    reps = _e2_slice(sol, gb, p, D)
    reps1 = _e2_slice(sol, gb, p, D + 1)
    for rep in reps:
        out = gr_project(bracket(sol.S, rep), p + 1)
        for _m, c in out.terms.items():
            if not normal_form(c, gb).is_zero():
                raise AssertionError("page cocycle fails its defining condition")
    return CohomologyReport(p, D, len(reps), reps, len(reps) == len(reps1))
