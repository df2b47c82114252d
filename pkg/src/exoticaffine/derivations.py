"""Derivation calculus on polynomial rings and principal-relation quotients.

A derivation is stored by its generator images and extended by the Leibniz
rule.  Nilpotency is decided on generators up to a bound and recorded in a
tri-state certificate; everything downstream (degree functions, exponential
flows, graded derivations, truncated kernels and invariant candidates) insists
on a certificate rather than assuming local nilpotency.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .grading import (
    NEG_INF,
    GradedHypersurface,
    QuotientRing,
    WeightFunction,
    associated_graded_hypersurface,
    quasi_homogeneous_decompose,
    quotient_degree,
)
from .polyring import (
    DimensionMismatch,
    Polynomial,
    PolyError,
    VarSet,
    VarSetMismatch,
    jacobian_det,
)

DEFAULT_NILPOTENCY_BOUND = 64


class DerivationError(PolyError):
    pass


class NotWellDefinedOnQuotient(DerivationError):
    def __init__(self, residue: Polynomial):
        super().__init__(f"derivation does not kill the relation; residue {residue}")
        self.residue = residue


class NotCertifiedNilpotent(DerivationError):
    pass


class GradedNotWellDefined(DerivationError):
    def __init__(self, residue: Polynomial):
        super().__init__(f"graded derivation does not kill the graded relation; residue {residue}")
        self.residue = residue


@dataclass(frozen=True)
class Derivation:
    """Generator images of a derivation on C[vars] or on a quotient ring."""

    ring: VarSet | QuotientRing
    images: dict[str, Polynomial]

    @property
    def ambient(self) -> VarSet:
        return self.ring if isinstance(self.ring, VarSet) else self.ring.ambient

    @property
    def on_quotient(self) -> bool:
        return isinstance(self.ring, QuotientRing)

    def reduce(self, f: Polynomial) -> Polynomial:
        if self.on_quotient:
            return self.ring.canonical(f)
        return f


@dataclass(frozen=True)
class NilpotencyCertificate:
    """verdict: NilpotentOnGenerators | Inconclusive | Disproved."""

    verdict: str
    orders: dict[str, int] | None = None
    bound: int | None = None
    witness: str | None = None
    evidence: str | None = None

    @property
    def nilpotent(self) -> bool:
        return self.verdict == "NilpotentOnGenerators"


def make_derivation(ring: VarSet | QuotientRing, images: Mapping[str, Polynomial]) -> Derivation:
    """Validate coverage of the generators and, on quotients, well-definedness."""
    ambient = ring if isinstance(ring, VarSet) else ring.ambient
    missing = [n for n in ambient.names if n not in images]
    if missing:
        raise DerivationError(f"images missing for generators {missing}")
    imgs = {}
    for name in ambient.names:
        img = images[name]
        if img.varset != ambient:
            raise VarSetMismatch(f"image of {name} lives in the wrong ring")
        imgs[name] = img
    d = Derivation(ring, imgs)
    if isinstance(ring, QuotientRing):
        residue = ring.canonical(_apply_raw(d, ring.relation))
        if not residue.is_zero():
            raise NotWellDefinedOnQuotient(residue)
        imgs = {n: ring.canonical(p) for n, p in imgs.items()}
        d = Derivation(ring, imgs)
    return d


def _apply_raw(d: Derivation, f: Polynomial) -> Polynomial:
    out = Polynomial.zero(d.ambient)
    for name in d.ambient.names:
        img = d.images[name]
        if img.is_zero():
            continue
        pf = f.partial(name)
        if not pf.is_zero():
            out = out + pf * img
    return out


def apply(d: Derivation, f: Polynomial) -> Polynomial:
    """Leibniz extension of the generator images; canonical form on quotients."""
    if f.varset != d.ambient:
        raise VarSetMismatch("polynomial lives in a different ring than the derivation")
    return d.reduce(_apply_raw(d, d.reduce(f)))


def linear_derivation(matrix: Sequence[Sequence], vs: VarSet) -> Derivation:
    """x_i -> (B x)_i for a square rational matrix B."""
    n = len(vs)
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise DimensionMismatch(f"need a {n}x{n} matrix for variables {vs.names}")
    images = {}
    for i, name in enumerate(vs.names):
        img = Polynomial.zero(vs)
        for j, other in enumerate(vs.names):
            c = Fraction(matrix[i][j])
            if c:
                img = img + Polynomial.variable(vs, other).scale(c)
        images[name] = img
    return make_derivation(vs, images)


def jacobian_derivation(fs: Sequence[Polynomial]) -> Derivation:
    """delta(g) = det of the gradients of f_1..f_{n-1}, g, in that row order."""
    if not fs:
        raise DimensionMismatch("need n-1 polynomials")
    vs = fs[0].varset
    if len(fs) != len(vs) - 1:
        raise DimensionMismatch(
            f"need {len(vs) - 1} polynomials in {len(vs)} variables, got {len(fs)}"
        )
    images = {}
    for name in vs.names:
        images[name] = jacobian_det(list(fs) + [Polynomial.variable(vs, name)])
    return make_derivation(vs, images)


def nilpotency_test(d: Derivation, bound: int = DEFAULT_NILPOTENCY_BOUND) -> NilpotencyCertificate:
    """Iterate each generator orbit up to the bound.

    NilpotentOnGenerators with exact orders when every orbit dies; Disproved
    when some iterate is a nonzero scalar multiple of an earlier one (the
    orbit then provably never dies); Inconclusive otherwise.
    """
    orders: dict[str, int] = {}
    for name in d.ambient.names:
        seq = [d.reduce(Polynomial.variable(d.ambient, name))]
        order = None
        for k in range(1, bound + 2):
            nxt = apply(d, seq[-1])
            if nxt.is_zero():
                order = k - 1
                break
            prop = _proportional_to_earlier(nxt, seq)
            if prop is not None:
                i, c = prop
                return NilpotencyCertificate(
                    "Disproved",
                    witness=name,
                    evidence=f"delta^{k}({name}) = {c} * delta^{i}({name})",
                )
            seq.append(nxt)
            if k > bound:
                return NilpotencyCertificate("Inconclusive", bound=bound)
        if order is None:
            return NilpotencyCertificate("Inconclusive", bound=bound)
        orders[name] = order
    return NilpotencyCertificate("NilpotentOnGenerators", orders=orders)


def _proportional_to_earlier(p: Polynomial, seq: list[Polynomial]):
    for i, q in enumerate(seq):
        if q.is_zero() or len(q.terms) != len(p.terms):
            continue
        try:
            e0 = next(iter(p.terms))
        except StopIteration:
            continue
        if e0 not in q.terms:
            continue
        c = p.terms[e0] / q.terms[e0]
        if q.scale(c) == p:
            return i, c
    return None


def _require_nilpotent(cert: NilpotencyCertificate):
    if not cert.nilpotent:
        raise NotCertifiedNilpotent(f"certificate verdict is {cert.verdict}")


def partial_degree(d: Derivation, cert: NilpotencyCertificate, f: Polynomial):
    """deg_delta(f): the n with delta^{n+1} f = 0, delta^n f != 0; -inf at 0."""
    _require_nilpotent(cert)
    g = d.reduce(f)
    if g.is_zero():
        return NEG_INF
    # deg_delta of a monomial is bounded by the weighted exponent sum of orders
    limit = max(
        sum(e[i] * cert.orders[d.ambient.names[i]] for i in range(len(e)))
        for e in g.terms
    )
    n = 0
    while True:
        nxt = apply(d, g)
        if nxt.is_zero():
            return n
        g = nxt
        n += 1
        if n > limit + 1:
            raise DerivationError(
                "orbit exceeded the certified bound; certificate inconsistent"
            )


def exp_flow(
    d: Derivation,
    cert: NilpotencyCertificate,
    t: str | int | Fraction = "t",
) -> dict[str, Polynomial]:
    """exp(t*delta) on generators: finite sums sum_i t^i delta^i(v) / i!.

    With a string t the result lives in the ring extended by that (fresh)
    parameter; with a rational t it stays in the ambient ring.
    """
    _require_nilpotent(cert)
    ambient = d.ambient
    symbolic = isinstance(t, str)
    if symbolic:
        pname = ambient.fresh_name(t)
        target = ambient.extend([pname])
        tpoly = Polynomial.variable(target, pname)
    else:
        target = ambient
        tpoly = Polynomial.constant(target, Fraction(t))
    flow: dict[str, Polynomial] = {}
    for name in ambient.names:
        term = d.reduce(Polynomial.variable(ambient, name))
        acc = term.rename_into(target)
        i = 0
        fact = 1
        tpow = Polynomial.constant(target, 1)
        while True:
            term = apply(d, term)
            if term.is_zero():
                break
            i += 1
            fact *= i
            tpow = tpow * tpoly
            acc = acc + term.rename_into(target) * tpow.scale(Fraction(1, fact))
        flow[name] = acc
    return flow


def compose_flows(
    first: Mapping[str, Polynomial], second: Mapping[str, Polynomial]
) -> dict[str, Polynomial]:
    """Substitution composite: v -> second-images applied inside first(v)."""
    out = {}
    for name, img in first.items():
        images = dict(second)
        for extra in img.variables_used() - set(images):
            images[extra] = Polynomial.variable(next(iter(second.values())).varset, extra)
        out[name] = img.substitute(images)
    return out


@dataclass(frozen=True)
class GradedDerivation:
    """Homogeneous part of a filtered derivation on the graded hypersurface."""

    graded: GradedHypersurface
    images: dict[str, Polynomial]
    shift: int  # k0 = deg of the derivation

    def apply(self, fhat: Polynomial) -> Polynomial:
        out = Polynomial.zero(self.graded.ambient)
        for name in self.graded.ambient.names:
            img = self.images[name]
            if img.is_zero():
                continue
            pf = fhat.partial(name)
            if not pf.is_zero():
                out = out + pf * img
        return self.graded.canonical(out)


def graded_derivation(
    d: Derivation, w: WeightFunction
) -> GradedDerivation:
    """Associated graded derivation and its degree shift k0.

    k0 = max over generators of deg(delta v) - deg(v); each graded image is
    the degree-(deg v + k0) component of the canonical form of delta v.  The
    result is validated to annihilate the graded relation.
    """
    if not isinstance(d.ring, QuotientRing):
        raise DerivationError("graded derivations are computed on quotient rings here")
    q: QuotientRing = d.ring
    graded = associated_graded_hypersurface(q.relation, w, q.order)
    shifts = []
    degs = {}
    for name in d.ambient.names:
        gen = Polynomial.variable(d.ambient, name)
        degs[name] = quotient_degree(gen, q, w)
        img = d.images[name]
        if img.is_zero():
            continue
        shifts.append(quotient_degree(img, q, w) - degs[name])
    k0 = max(shifts) if shifts else 0
    images = {}
    for name in d.ambient.names:
        img = d.images[name]
        if img.is_zero():
            images[name] = Polynomial.zero(d.ambient)
            continue
        comps, _ = quasi_homogeneous_decompose(q.canonical(img), w)
        wanted = degs[name] + k0
        images[name] = comps.get(wanted, Polynomial.zero(d.ambient))
    gd = GradedDerivation(graded, images, int(k0))
    residue = gd.apply(graded.relation_top)
    if not residue.is_zero():
        raise GradedNotWellDefined(residue)
    return gd


def _canonical_monomials(d: Derivation, degree_bound: int) -> list[tuple[int, ...]]:
    """Monomials of total degree <= bound; on quotients only canonical ones."""
    names = d.ambient.names
    n = len(names)
    lm = None
    if d.on_quotient:
        lm = d.ring.relation.leading_monomial(d.ring.order)
    monos: list[tuple[int, ...]] = []

    def rec(prefix: list[int], remaining: int, pos: int):
        if pos == n:
            e = tuple(prefix)
            if lm is None or not all(a >= b for a, b in zip(e, lm)):
                monos.append(e)
            return
        for k in range(remaining + 1):
            rec(prefix + [k], remaining - k, pos + 1)

    rec([], degree_bound, 0)
    monos.sort()
    return monos


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    rows = [list(r) for r in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows[:r], pivots


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right nullspace in reduced echelon form (free var = 1)."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            v[pc] = -red[ri][fc]
        basis.append(v)
    return basis


def _vector_to_poly(vec, monos, vs) -> Polynomial:
    terms = {e: c for e, c in zip(monos, vec) if c != 0}
    p = Polynomial.from_terms(vs, terms)
    # scale to primitive integer coefficients, positive leading term
    if p.is_zero():
        return p
    denom = 1
    for c in p.terms.values():
        denom = denom * c.denominator // _igcd(denom, c.denominator)
    p = p.scale(denom)
    g = 0
    for c in p.terms.values():
        g = _igcd(g, abs(c.numerator))
    if g > 1:
        p = p.scale(Fraction(1, g))
    lead = p.terms[max(p.terms)]
    if lead < 0:
        p = -p
    return p


def _igcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def kernel_elements(
    d: Derivation, cert: NilpotencyCertificate, degree_bound: int
) -> list[Polynomial]:
    """Q-basis of {f : total degree <= bound, delta f = 0}, echelon-reduced.

    Exact linear algebra on the truncated monomial space (canonical-form
    monomials on quotients); every output is re-checked by apply.
    """
    _require_nilpotent(cert)
    monos = _canonical_monomials(d, degree_bound)
    vs = d.ambient
    images = [apply(d, Polynomial.monomial(vs, e)) for e in monos]
    out_monos = sorted({e for img in images for e in img.terms})
    index = {e: i for i, e in enumerate(out_monos)}
    rows = [[Fraction(0)] * len(monos) for _ in out_monos]
    for j, img in enumerate(images):
        for e, c in img.terms.items():
            rows[index[e]][j] = c
    basis_vecs = _nullspace(rows, len(monos))
    polys = [_vector_to_poly(v, monos, vs) for v in basis_vecs]
    polys = [p for p in polys if not p.is_zero()]
    for p in polys:
        if not apply(d, p).is_zero():
            raise DerivationError("kernel solve produced a non-kernel element")
    polys.sort(key=lambda p: sorted(p.terms))
    return polys


@dataclass(frozen=True)
class InvariantCandidates:
    """One-sided truncations of the Makar-Limanov and Derksen invariants.

    ml_basis spans the intersection of the given truncated kernels: a
    SUPERSET certificate for the truncated ML invariant (more derivations
    could only shrink it).  dk_generators collects the union of kernel bases:
    a generating set for a SUBALGEBRA of the Derksen invariant (more
    derivations could only enlarge it).
    """

    ml_basis: list[Polynomial]
    dk_generators: list[Polynomial]
    degree_bound: int
    ml_semantics: str = "upper bound: superset of the truncated ML invariant"
    dk_semantics: str = "lower bound: generators of a subalgebra of Dk"


def invariant_candidates(
    ds: Sequence[Derivation],
    certs: Sequence[NilpotencyCertificate],
    degree_bound: int,
) -> InvariantCandidates:
    if not ds:
        raise DerivationError("need at least one derivation")
    for cert in certs:
        _require_nilpotent(cert)
    base = ds[0]
    for d in ds[1:]:
        if d.ambient != base.ambient or d.on_quotient != base.on_quotient:
            raise VarSetMismatch("derivations act on different rings")
    monos = _canonical_monomials(base, degree_bound)
    vs = base.ambient
    all_rows: list[list[Fraction]] = []
    for d in ds:
        images = [apply(d, Polynomial.monomial(vs, e)) for e in monos]
        out_monos = sorted({e for img in images for e in img.terms})
        index = {e: i for i, e in enumerate(out_monos)}
        rows = [[Fraction(0)] * len(monos) for _ in out_monos]
        for j, img in enumerate(images):
            for e, c in img.terms.items():
                rows[index[e]][j] = c
        all_rows.extend(rows)
    ml_vecs = _nullspace(all_rows, len(monos))
    ml_basis = [p for p in (_vector_to_poly(v, monos, vs) for v in ml_vecs) if not p.is_zero()]
    ml_basis.sort(key=lambda p: sorted(p.terms))
    dk: list[Polynomial] = []
    for d, cert in zip(ds, certs):
        for p in kernel_elements(d, cert, degree_bound):
            if p not in dk:
                dk.append(p)
    return InvariantCandidates(ml_basis, dk, degree_bound)
