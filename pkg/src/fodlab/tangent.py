"""Trivial bundles, the tangent bundle functor, and its reverse counterpart.

A bundle is a first-block projection ``B + F -> B``. Pullbacks keep the
fiber and replace the base, so every construction stays inside this class.
"""
from __future__ import annotations

from dataclasses import dataclass

from .gen import GenParams, gen_dim, gen_polymap
from .lens import LensMor, rho
from .poly import (
    PolyMap,
    addition,
    identity,
    jacobian_action,
    map_compose,
    map_pair,
    map_zero,
    permutation,
    product_map,
    projection,
    select,
)
from .report import AxiomReport, SuiteRecorder
from .simple import MonoidInFibre, ObjectMismatch, SimpleObj, forward_section_D


@dataclass(frozen=True)
class TrivBundle:
    base: int
    fiber: int

    def __post_init__(self):
        if self.base < 0 or self.fiber < 0:
            raise ValueError("bundle dimensions must be nonnegative")

    @property
    def total(self) -> int:
        return self.base + self.fiber

    @property
    def proj(self) -> PolyMap:
        return projection([self.base, self.fiber], 0)

    def fiber_proj(self) -> PolyMap:
        return projection([self.base, self.fiber], 1)


@dataclass(frozen=True)
class BundleMor:
    src: TrivBundle
    dst: TrivBundle
    total: PolyMap
    base: PolyMap

    def __post_init__(self):
        if (self.total.dom, self.total.cod) != (self.src.total, self.dst.total):
            raise ObjectMismatch("total map has the wrong type")
        if (self.base.dom, self.base.cod) != (self.src.base, self.dst.base):
            raise ObjectMismatch("base map has the wrong type")
        if map_compose(self.dst.proj, self.total) != map_compose(self.base, self.src.proj):
            raise ObjectMismatch("bundle square does not commute")

    @property
    def is_vertical(self) -> bool:
        return self.src.base == self.dst.base and self.base == identity(self.src.base)

    def to_literal(self) -> str:
        return f"{{total: {self.total}, base: {self.base}}}"


def bundle_identity(b: TrivBundle) -> BundleMor:
    return BundleMor(b, b, identity(b.total), identity(b.base))


def bundle_compose(g: BundleMor, f: BundleMor) -> BundleMor:
    if f.dst != g.src:
        raise ObjectMismatch("cannot compose bundle maps")
    return BundleMor(f.src, g.dst, map_compose(g.total, f.total), map_compose(g.base, f.base))


def bundle_pullback(g: PolyMap, b: TrivBundle) -> tuple[TrivBundle, BundleMor]:
    """``g*b`` with its cartesian square ``g × id_F``."""
    if g.cod != b.base:
        raise ObjectMismatch(f"cannot pull back a bundle over {b.base} along a map into {g.cod}")
    pulled = TrivBundle(g.dom, b.fiber)
    return pulled, BundleMor(pulled, b, product_map(g, identity(b.fiber)), g)


def pullback_factor(lift: BundleMor, h: BundleMor, u: PolyMap) -> BundleMor:
    """The unique ``k`` over ``u`` with ``lift ∘ k = h``; needs ``lift.base ∘ u = h.base``."""
    if map_compose(lift.base, u) != h.base:
        raise ObjectMismatch("competitor does not factor through the base")
    total = map_pair(map_compose(u, h.src.proj), map_compose(h.dst.fiber_proj(), h.total))
    k = BundleMor(h.src, lift.src, total, u)
    if bundle_compose(lift, k) != h:
        raise ObjectMismatch("factorization failed")
    return k


def pullback_power(b: TrivBundle, n: int) -> tuple[TrivBundle, list[BundleMor]]:
    """``b ×_B ... ×_B b`` (n copies) with its n projections."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    p = TrivBundle(b.base, n * b.fiber)
    dims = [b.base] + [b.fiber] * n
    projs = [BundleMor(p, b, select(dims, 0, i + 1), identity(b.base)) for i in range(n)]
    return p, projs


# additive bundles ----------------------------------------------------------


@dataclass(frozen=True)
class AdditiveBundle:
    bundle: TrivBundle
    zero: PolyMap    # B -> B + F
    plus: PolyMap    # B + F + F -> B + F

    def __post_init__(self):
        b = self.bundle
        if (self.zero.dom, self.zero.cod) != (b.base, b.total):
            raise ObjectMismatch("zero has the wrong type")
        if (self.plus.dom, self.plus.cod) != (b.base + 2 * b.fiber, b.total):
            raise ObjectMismatch("plus has the wrong type")
        if self.vertical_failures():
            raise ObjectMismatch("zero and plus must lie over the identity")
        bad = self.fibre_monoid().law_failures()
        if bad:
            raise ObjectMismatch(f"fibre monoid fails {', '.join(bad)}")

    def vertical_failures(self) -> list[str]:
        b = self.bundle
        bad = []
        if map_compose(b.proj, self.zero) != identity(b.base):
            bad.append("zero")
        if map_compose(b.proj, self.plus) != projection([b.base, 2 * b.fiber], 0):
            bad.append("plus")
        return bad

    def fibre_monoid(self) -> MonoidInFibre:
        b = self.bundle
        fp = b.fiber_proj()
        return MonoidInFibre(b.base, b.fiber, map_compose(fp, self.zero), map_compose(fp, self.plus))


def tangent_section_T(A: int) -> AdditiveBundle:
    b = TrivBundle(A, A)
    zero = map_pair(identity(A), map_zero(A, A))
    plus = map_pair(projection([A, 2 * A], 0), map_compose(addition(A), projection([A, 2 * A], 1)))
    return AdditiveBundle(b, zero, plus)


def tangent_on_map(f: PolyMap) -> BundleMor:
    """``τf = ⟨f ∘ π₀, δf⟩`` read off the forward section."""
    d = forward_section_D(f)
    total = map_pair(map_compose(f, projection([f.dom, f.dom], 0)), d.fib)
    return BundleMor(TrivBundle(f.dom, f.dom), TrivBundle(f.cod, f.cod), total, f)


def tau(f: PolyMap) -> PolyMap:
    """The tangent functor on maps: the total part of the section's image."""
    return tangent_on_map(f).total


def tau_direct(f: PolyMap) -> PolyMap:
    """``τf`` from partial derivatives, without going through any section."""
    return map_pair(map_compose(f, projection([f.dom, f.dom], 0)), jacobian_action(f))


def tau_on_power(f: PolyMap, n: int) -> PolyMap:
    """``τf ×_f ... ×_f τf : (a, u₁..uₙ) ↦ (f(a), δf(a,u₁), ..., δf(a,uₙ))``."""
    A = f.dom
    dims = [A] * (n + 1)
    d = jacobian_action(f)
    return map_pair(map_compose(f, projection(dims, 0)),
                    *[map_compose(d, select(dims, 0, i + 1)) for i in range(n)], dom=(n + 1) * A)


# pullback preservation -----------------------------------------------------


def tangent_bundle_shuffle(A: int) -> PolyMap:
    """``τTA`` laid out as a bundle over ``τA``: ``(b, u, db, du) ↦ (b, db, u, du)``."""
    return permutation(list(range(A)) + [2 * A + i for i in range(A)]
                       + [A + i for i in range(A)] + [3 * A + i for i in range(A)])


def comparison_map(A: int, n: int) -> PolyMap:
    """``τ(TA ×_A ... ×_A TA) -> τTA ×_{τA} ... ×_{τA} τTA`` assembled from ``τ(qᵢ)``."""
    power, projs = pullback_power(TrivBundle(A, A), n)
    shuffle = tangent_bundle_shuffle(A)
    legs = [map_compose(shuffle, tau(q.total)) for q in projs]
    bases = {map_compose(projection([2 * A, 2 * A], 0), leg) for leg in legs}
    if len(bases) > 1:
        raise ObjectMismatch("legs disagree over the tangent of the base")
    dom = 2 * power.total
    if not legs:
        return identity(dom)
    base = map_compose(projection([2 * A, 2 * A], 0), legs[0])
    fibres = [map_compose(projection([2 * A, 2 * A], 1), leg) for leg in legs]
    return map_pair(base, *fibres, dom=dom)


def permutation_targets(f: PolyMap) -> list[int] | None:
    """If ``f`` is a coordinate permutation, the source index of each output."""
    if f.dom != f.cod:
        return None
    out = []
    for p in f.components:
        if len(p.terms) != 1:
            return None
        e, c = p.terms[0]
        if c != 1 or sum(e) != 1:
            return None
        out.append(e.index(1))
    return out if sorted(out) == list(range(f.dom)) else None


def invert_permutation(f: PolyMap) -> PolyMap:
    targets = permutation_targets(f)
    if targets is None:
        raise ValueError("not a coordinate permutation")
    inv = [0] * len(targets)
    for i, t in enumerate(targets):
        inv[t] = i
    return permutation(inv)


def pullback_preserved(A: int, n: int) -> tuple[bool, PolyMap, PolyMap]:
    c = comparison_map(A, n)
    inv = invert_permutation(c)
    ok = map_compose(c, inv) == identity(c.dom) and map_compose(inv, c) == identity(c.dom)
    return ok, c, inv


# the reverse tangent section -----------------------------------------------


def reverse_tangent_span(f: PolyMap) -> tuple[BundleMor, BundleMor]:
    """``TA ← f*TB → TB``: the vertical leg is fibrewise additive, the other cartesian."""
    TA, TB = tangent_section_T(f.dom), tangent_section_T(f.cod)
    pulled, cart = bundle_pullback(f, TB.bundle)
    A = f.dom
    vert = BundleMor(pulled, TA.bundle, map_pair(projection([A, f.cod], 0), rho(f)), identity(A))
    return cart, vert


def is_additive_bundle_map(m: BundleMor, src: MonoidInFibre, dst: MonoidInFibre) -> bool:
    """The fiber part preserves fibrewise zero and plus (for maps over the identity)."""
    from .simple import SPlusMor, SimpleMor, splus_check

    fib = map_compose(m.dst.fiber_proj(), m.total)
    sm = SimpleMor(SimpleObj(m.src.base, m.src.fiber), SimpleObj(m.dst.base, m.dst.fiber), m.base, fib)
    return splus_check(SPlusMor(sm, src, dst))


def reverse_tangent_section(f: PolyMap) -> LensMor:
    cart, vert = reverse_tangent_span(f)
    A = f.dom
    pulled_monoid = MonoidInFibre.standard(A, f.cod)
    if not is_additive_bundle_map(vert, pulled_monoid, MonoidInFibre.standard(A, A)):
        raise ObjectMismatch("vertical leg is not additive")
    fib = map_compose(vert.dst.fiber_proj(), vert.total)
    return LensMor(SimpleObj(A, A), SimpleObj(f.cod, f.cod), cart.base, fib)


# suite ---------------------------------------------------------------------

TANGENT_ANCHORS = {
    "functor": "τ(g∘f) = τg∘τf, τ(id) = id, τ = total part of T",
    "naturality-p": "p_B∘τf = f∘p_A",
    "naturality-0": "τf∘0_A = 0_B∘f",
    "naturality-+": "τf∘+_A = +_B∘(τf ×_f τf)",
    "additive-bundle": "0 and + lie over the identity and form a commutative monoid in each fibre",
    "pullback-powers": "τ(TA ×_A ... ×_A TA) ≅ τTA ×_{τA} ... ×_{τA} τTA for n = 2, 3",
}

TANGENT_DEFAULTS = GenParams(max_dim=3, max_degree=3, trials=100)


def tangent_axiom_suite(params: GenParams = TANGENT_DEFAULTS, suite: str = "tangent") -> AxiomReport:
    rec = SuiteRecorder(suite, TANGENT_ANCHORS)
    for A in range(params.max_dim + 1):
        T = tangent_section_T(A)
        rec.holds("additive-bundle", not T.vertical_failures() and not T.fibre_monoid().law_failures(),
                  [identity(A)], lhs=", ".join(T.vertical_failures() + T.fibre_monoid().law_failures()), rhs="none")
        for n in (2, 3):
            ok, c, inv = pullback_preserved(A, n)
            rec.holds("pullback-powers", ok, [identity(A)], lhs=c, rhs=inv)
    for t in range(params.trials):
        a, b, c = (gen_dim(params, t, s) for s in "abc")
        f = gen_polymap(params, t, a, b, "f")
        g = gen_polymap(params, t, b, c, "g")
        tf, tg = tau(f), tau(g)
        rec.check("functor", tau(map_compose(g, f)), map_compose(tg, tf), [f, g])
        rec.check("functor", tau(identity(a)), identity(2 * a), [identity(a)])
        rec.check("functor", tf, tau_direct(f), [f])

        TA, TB = tangent_section_T(a), tangent_section_T(b)
        rec.check("naturality-p", map_compose(TB.bundle.proj, tf), map_compose(f, TA.bundle.proj), [f])
        rec.check("naturality-0", map_compose(tf, TA.zero), map_compose(TB.zero, f), [f])
        rec.check("naturality-+", map_compose(tf, TA.plus), map_compose(TB.plus, tau_on_power(f, 2)), [f])
    return rec.report()

