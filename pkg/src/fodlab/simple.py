"""The simple fibration over the polynomial base and forward derivatives.

A morphism ``(A', A) -> (B', B)`` is a pair ``(f, f♭)`` with ``f : A -> B``
and ``f♭ : A × A' -> B'``; the fiber variables are the last ``A'``
coordinates of ``f♭``'s domain.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

from .gen import GenParams, gen_dim, gen_polymap
from .poly import (
    CompositionError,
    PolyMap,
    additive_in_block,
    addition,
    compose,
    diagonal,
    identity,
    jacobian_action,
    map_add,
    map_compose,
    map_pair,
    map_zero,
    product_map,
    projection,
    select,
    terminal,
)
from .report import AxiomReport, SuiteRecorder


class ObjectMismatch(ValueError):
    pass


@dataclass(frozen=True)
class SimpleObj:
    base: int
    fiber: int

    def __post_init__(self):
        if self.base < 0 or self.fiber < 0:
            raise ValueError("object dimensions must be nonnegative")

    def __str__(self):
        return f"({self.fiber} over {self.base})"


@dataclass(frozen=True)
class SimpleMor:
    src: SimpleObj
    dst: SimpleObj
    base: PolyMap
    fib: PolyMap

    def __post_init__(self):
        if (self.base.dom, self.base.cod) != (self.src.base, self.dst.base):
            raise ObjectMismatch(f"base map {self.base.dom}->{self.base.cod} does not fit {self.src} -> {self.dst}")
        if (self.fib.dom, self.fib.cod) != (self.src.base + self.src.fiber, self.dst.fiber):
            raise ObjectMismatch(f"fiber map {self.fib.dom}->{self.fib.cod} does not fit {self.src} -> {self.dst}")

    def to_literal(self) -> str:
        return f"{{base: {self.base}, fib: {self.fib}}}"


def simple_identity(obj: SimpleObj) -> SimpleMor:
    return SimpleMor(obj, obj, identity(obj.base), projection([obj.base, obj.fiber], 1))


def simple_compose(g: SimpleMor, f: SimpleMor) -> SimpleMor:
    """``h = g♭ ∘ (f × f♭) ∘ (Δ_A × id_{A'})``."""
    if f.dst != g.src:
        raise ObjectMismatch(f"cannot compose: {f.dst} != {g.src}")
    A, Ap = f.src.base, f.src.fiber
    spread = product_map(diagonal(A), identity(Ap))
    h = compose(g.fib, product_map(f.base, f.fib), spread)
    return SimpleMor(f.src, g.dst, map_compose(g.base, f.base), h)


class Kind(enum.Enum):
    CARTESIAN = "cartesian"
    VERTICAL = "vertical"
    NEITHER = "neither"
    BOTH = "both"


def is_cartesian(m: SimpleMor) -> bool:
    return m.src.fiber == m.dst.fiber and m.fib == projection([m.src.base, m.src.fiber], 1)


def is_vertical(m: SimpleMor) -> bool:
    return m.src.base == m.dst.base and m.base == identity(m.src.base)


def classify(m: SimpleMor) -> Kind:
    c, v = is_cartesian(m), is_vertical(m)
    if c and v:
        return Kind.BOTH
    if c:
        return Kind.CARTESIAN
    if v:
        return Kind.VERTICAL
    return Kind.NEITHER


def vertical_cartesian_factor(m: SimpleMor) -> tuple[SimpleMor, SimpleMor]:
    """``m = cartesian ∘ vertical`` through the reindexed object ``(B' over A)``."""
    mid = SimpleObj(m.src.base, m.dst.fiber)
    vertical = SimpleMor(m.src, mid, identity(m.src.base), m.fib)
    cartesian = SimpleMor(mid, m.dst, m.base, projection([mid.base, mid.fiber], 1))
    return vertical, cartesian


def reindex(f: PolyMap, obj: SimpleObj) -> tuple[SimpleObj, SimpleMor]:
    """Cartesian lift of ``f : A -> B`` at ``obj`` over ``B``."""
    if f.cod != obj.base:
        raise CompositionError(f"cannot reindex {obj} along a map into {f.cod}")
    pulled = SimpleObj(f.dom, obj.fiber)
    return pulled, SimpleMor(pulled, obj, f, projection([f.dom, obj.fiber], 1))


def factor_through_lift(h: SimpleMor, lift: SimpleMor, u: PolyMap) -> SimpleMor:
    """The unique ``k`` over ``u`` with ``lift ∘ k = h``, given ``lift.base ∘ u = h.base``.

    Composing with a cartesian lift leaves the fiber map unchanged, so the
    fiber part of ``k`` is forced to equal ``h.fib``.
    """
    if map_compose(lift.base, u) != h.base:
        raise ObjectMismatch("base map does not factor: lift.base ∘ u != h.base")
    k = SimpleMor(h.src, lift.src, u, h.fib)
    if simple_compose(lift, k) != h:
        raise ObjectMismatch("factorization failed")
    return k


def reindex_vertical(v: SimpleMor, f: PolyMap) -> SimpleMor:
    """Pull a vertical map over ``B`` back along ``f : A -> B``."""
    if not is_vertical(v):
        raise ObjectMismatch("only vertical maps can be reindexed")
    B = v.src.base
    if f.cod != B:
        raise CompositionError("reindexing map has the wrong codomain")
    src, _ = reindex(f, v.src)
    dst, _ = reindex(f, v.dst)
    fib = map_compose(v.fib, product_map(f, identity(v.src.fiber)))
    return SimpleMor(src, dst, identity(f.dom), fib)


# products ------------------------------------------------------------------


def simple_product(x: SimpleObj, y: SimpleObj) -> tuple[SimpleObj, SimpleMor, SimpleMor]:
    """Pointwise product ``(A'×B' over A×B)`` with its two projections."""
    prod = SimpleObj(x.base + y.base, x.fiber + y.fiber)
    dims = [x.base, y.base, x.fiber, y.fiber]
    p0 = SimpleMor(prod, x, projection([x.base, y.base], 0), projection(dims, 2))
    p1 = SimpleMor(prod, y, projection([x.base, y.base], 1), projection(dims, 3))
    return prod, p0, p1


def simple_pair(f: SimpleMor, g: SimpleMor) -> SimpleMor:
    if f.src != g.src:
        raise ObjectMismatch("pairing needs a common source")
    prod, _, _ = simple_product(f.dst, g.dst)
    return SimpleMor(f.src, prod, map_pair(f.base, g.base), map_pair(f.fib, g.fib))


def simple_product_mor(f: SimpleMor, g: SimpleMor) -> SimpleMor:
    """``f × g`` between pointwise products."""
    src, _, _ = simple_product(f.src, g.src)
    dst, _, _ = simple_product(f.dst, g.dst)
    dims = [f.src.base, g.src.base, f.src.fiber, g.src.fiber]
    fib = map_pair(map_compose(f.fib, select(dims, 0, 2)), map_compose(g.fib, select(dims, 1, 3)))
    return SimpleMor(src, dst, product_map(f.base, g.base), fib)


def fibred_product(x: SimpleObj, y: SimpleObj) -> SimpleObj:
    if x.base != y.base:
        raise ObjectMismatch("fibred product needs a common base")
    return SimpleObj(x.base, x.fiber + y.fiber)


def fibred_projections(x: SimpleObj, y: SimpleObj) -> tuple[SimpleMor, SimpleMor]:
    prod = fibred_product(x, y)
    dims = [x.base, x.fiber, y.fiber]
    return (
        SimpleMor(prod, x, identity(x.base), projection(dims, 1)),
        SimpleMor(prod, y, identity(x.base), projection(dims, 2)),
    )


# hom-monoid and the CLA restriction ----------------------------------------


def simple_add(f: SimpleMor, g: SimpleMor) -> SimpleMor:
    if (f.src, f.dst) != (g.src, g.dst):
        raise ObjectMismatch("sum of morphisms with different types")
    return SimpleMor(f.src, f.dst, map_add(f.base, g.base), map_add(f.fib, g.fib))


def simple_zero(src: SimpleObj, dst: SimpleObj) -> SimpleMor:
    return SimpleMor(src, dst, map_zero(src.base, dst.base), map_zero(src.base + src.fiber, dst.fiber))


def is_cla_morphism(m: SimpleMor) -> bool:
    """Fiber map additive in its second (fiber) argument, checked exactly."""
    return additive_in_block(m.fib, [m.src.base, m.src.fiber], 1)


# the forward section -------------------------------------------------------


def delta(f: PolyMap) -> PolyMap:
    """``δf(a, v) = Σ_j ∂f/∂x_j(a)·v_j``."""
    return jacobian_action(f)


def forward_section_D(f: PolyMap) -> SimpleMor:
    return SimpleMor(SimpleObj(f.dom, f.dom), SimpleObj(f.cod, f.cod), f, delta(f))


def corrupted_delta(f: PolyMap) -> PolyMap:
    """Mutant: the Jacobian is taken at the tangent vector instead of the base point.

    ``δ'f(a, v) = J_f(v)·v``; it forgets where ``f`` is evaluated, so the
    chain rule breaks for any nonlinear inner map.
    """
    m = f.dom
    d = jacobian_action(f)
    return map_compose(d, select([m, m], 1, 1))


# axiom suites --------------------------------------------------------------

CDC_ANCHORS = {
    "CDC.1": "δ(f+g) = δf + δg, δ0 = 0",
    "CDC.2": "δf∘⟨a,h+k⟩ = δf∘⟨a,h⟩ + δf∘⟨a,k⟩, δf∘⟨a,0⟩ = 0",
    "CDC.3": "δ(id) = π₁, δπ_A = π_A∘π₁, δπ_B = π_B∘π₁",
    "CDC.4": "δ⟨f,g⟩ = ⟨δf,δg⟩",
    "CDC.5": "δ(g∘f) = δg∘⟨f∘π₀, δf⟩",
}


@dataclass(frozen=True)
class DerivativeStructure:
    """An operator ``d(f, X, Y)`` on maps between structured objects.

    Objects are opaque to the suite; ``dim`` reads their dimension and
    ``product`` forms binary products. The plain CDC uses dimensions as
    objects; the induced derivative on trivialized objects uses
    trivializations.
    """

    deriv: Callable[[PolyMap, object, object], PolyMap]
    dim: Callable[[object], int]
    product: Callable[[object, object], object]


STANDARD = DerivativeStructure(lambda f, a, b: delta(f), lambda a: a, lambda a, b: a + b)


def structure_from(op: Callable[[PolyMap], PolyMap]) -> DerivativeStructure:
    return DerivativeStructure(lambda f, a, b: op(f), lambda a: a, lambda a, b: a + b)


def check_cdc_laws(rec: SuiteRecorder, ds: DerivativeStructure, A, B, C,
                   f: PolyMap, g: PolyMap, h: PolyMap) -> None:
    """One trial of CDC.1–5 with ``f, g : A -> B`` and ``h : B -> C``."""
    d, n = ds.deriv, ds.dim
    a, b = n(A), n(B)

    # CDC.1
    rec.check("CDC.1", d(map_add(f, g), A, B), map_add(d(f, A, B), d(g, A, B)), [f, g])
    rec.check("CDC.1", d(map_zero(a, b), A, B), map_zero(2 * a, b), [map_zero(a, b)])
    # CDC.2: as a polynomial identity in free (a, h, k)
    df = d(f, A, B)
    rec.holds("CDC.2", additive_in_block(df, [a, a], 1), [f], lhs=df, rhs="additive in the tangent block")
    # CDC.3
    rec.check("CDC.3", d(identity(a), A, A), projection([a, a], 1), [identity(a)])
    AB = ds.product(A, B)
    for i, obj in enumerate((A, B)):
        pi = projection([a, b], i)
        rec.check("CDC.3", d(pi, AB, obj), map_compose(pi, projection([a + b, a + b], 1)), [pi])
    # CDC.4
    BC = ds.product(B, C)
    k = map_compose(h, f)
    rec.check("CDC.4", d(map_pair(f, k), A, BC), map_pair(d(f, A, B), d(k, A, C)), [f, k])
    # CDC.5
    lhs = d(map_compose(h, f), A, C)
    rhs = map_compose(d(h, B, C), map_pair(map_compose(f, projection([a, a], 0)), df))
    rec.check("CDC.5", lhs, rhs, [f, h])


def cdc_axiom_suite(params: GenParams = GenParams(), delta_op: Callable[[PolyMap], PolyMap] | None = None,
                    suite: str = "cdc") -> AxiomReport:
    """CDC.1–5 as exact identities over ``params.trials`` seeded samples."""
    ds = STANDARD if delta_op is None else structure_from(delta_op)
    rec = SuiteRecorder(suite, CDC_ANCHORS)
    for t in range(params.trials):
        a, b, c = (gen_dim(params, t, s) for s in "abc")
        f = gen_polymap(params, t, a, b, "f")
        g = gen_polymap(params, t, a, b, "g")
        h = gen_polymap(params, t, b, c, "h")
        check_cdc_laws(rec, ds, a, b, c, f, g, h)
    return rec.report()


def d_functor_checks(f: PolyMap, g: PolyMap) -> dict[str, bool]:
    """Functoriality, product and CLA preservation of D on a composable pair ``g ∘ f``."""
    out = {}
    out["composition"] = forward_section_D(map_compose(g, f)) == simple_compose(forward_section_D(g), forward_section_D(f))
    out["identity"] = forward_section_D(identity(f.dom)) == simple_identity(SimpleObj(f.dom, f.dom))
    k = map_compose(g, f)
    out["pairing"] = forward_section_D(map_pair(f, k)) == simple_pair(forward_section_D(f), forward_section_D(k))
    prod, p0, p1 = simple_product(SimpleObj(f.dom, f.dom), SimpleObj(f.cod, f.cod))
    out["projections"] = (
        forward_section_D(projection([f.dom, f.cod], 0)) == p0
        and forward_section_D(projection([f.dom, f.cod], 1)) == p1
    )
    return out


# the additive simple fibration and generalised derivatives ----------------


class InstanceError(ValueError):
    """A proposed gCDC instance violates the monoid laws."""


@dataclass(frozen=True)
class MonoidInFibre:
    """A commutative monoid on ``(B' over B)``: ``zero : B -> B'``, ``plus : B×B'×B' -> B'``."""

    base: int
    fiber: int
    zero: PolyMap
    plus: PolyMap

    def __post_init__(self):
        B, F = self.base, self.fiber
        if (self.zero.dom, self.zero.cod) != (B, F) or (self.plus.dom, self.plus.cod) != (B + 2 * F, F):
            raise ObjectMismatch("monoid structure maps have the wrong types")

    @classmethod
    def standard(cls, base: int, fiber: int) -> "MonoidInFibre":
        return cls(base, fiber, map_zero(base, fiber),
                   map_compose(addition(fiber), select([base, fiber, fiber], 1, 2)))

    def law_failures(self) -> list[str]:
        B, F = self.base, self.fiber
        b3 = [B, F, F, F]
        pb, px, py, pz = (projection(b3, i) for i in range(4))
        plus = lambda dims_map, u, v: map_compose(self.plus, map_pair(dims_map, u, v))  # noqa: E731
        bad = []
        left = plus(pb, plus(pb, px, py), pz)
        right = plus(pb, px, plus(pb, py, pz))
        if left != right:
            bad.append("associativity")
        b2 = [B, F, F]
        qb, qx, qy = (projection(b2, i) for i in range(3))
        if map_compose(self.plus, map_pair(qb, qx, qy)) != map_compose(self.plus, map_pair(qb, qy, qx)):
            bad.append("commutativity")
        rb, rx = projection([B, F], 0), projection([B, F], 1)
        if map_compose(self.plus, map_pair(rb, map_compose(self.zero, rb), rx)) != rx:
            bad.append("unit")
        return bad


@dataclass(frozen=True)
class SPlusMor:
    mor: SimpleMor
    src_monoid: MonoidInFibre
    dst_monoid: MonoidInFibre

    def __post_init__(self):
        m = self.mor
        if (self.src_monoid.base, self.src_monoid.fiber) != (m.src.base, m.src.fiber):
            raise ObjectMismatch("source monoid does not sit over the source object")
        if (self.dst_monoid.base, self.dst_monoid.fiber) != (m.dst.base, m.dst.fiber):
            raise ObjectMismatch("target monoid does not sit over the target object")


def splus_squares(m: SPlusMor) -> list[tuple[str, PolyMap, PolyMap]]:
    """The two squares saying the fiber map preserves zero and plus."""
    f, fp = m.mor.base, m.mor.fib
    A, Ap = m.mor.src.base, m.mor.src.fiber
    za, pa = m.src_monoid.zero, m.src_monoid.plus
    zb, pb = m.dst_monoid.zero, m.dst_monoid.plus
    zero_sq = (
        "zero",
        map_compose(fp, map_pair(identity(A), za)),
        map_compose(zb, f),
    )
    dims = [A, Ap, Ap]
    p0 = projection(dims, 0)
    fp2 = map_pair(
        map_compose(f, p0),
        map_compose(fp, select(dims, 0, 1)),
        map_compose(fp, select(dims, 0, 2)),
    )
    plus_sq = (
        "plus",
        map_compose(fp, map_pair(p0, pa)),
        map_compose(pb, fp2),
    )
    return [zero_sq, plus_sq]


def splus_check(m: SPlusMor) -> bool:
    return all(lhs == rhs for _, lhs, rhs in splus_squares(m))


@dataclass(frozen=True)
class GcdcInstance:
    """Tangent objects ``λA``, a monoid on each in the base, and the section's fiber map."""

    name: str
    tangent_dim: Callable[[int], int]
    zero: Callable[[int], PolyMap]      # 0 -> λA
    plus: Callable[[int], PolyMap]      # λA × λA -> λA
    lam: Callable[[PolyMap], PolyMap]   # f : A -> B  ↦  λf : A × λA -> λB

    def fibre_monoid(self, A: int) -> MonoidInFibre:
        T = self.tangent_dim(A)
        return MonoidInFibre(
            A, T,
            map_compose(self.zero(A), terminal(A)),
            map_compose(self.plus(A), select([A, T, T], 1, 2)),
        )

    def validate(self, A: int) -> None:
        bad = self.fibre_monoid(A).law_failures()
        if bad:
            raise InstanceError(f"{self.name}: monoid on λ{A} fails {', '.join(bad)}")

    def section(self, f: PolyMap) -> SPlusMor:
        mor = SimpleMor(SimpleObj(f.dom, self.tangent_dim(f.dom)), SimpleObj(f.cod, self.tangent_dim(f.cod)),
                        f, self.lam(f))
        return SPlusMor(mor, self.fibre_monoid(f.dom), self.fibre_monoid(f.cod))


DEFAULT_GCDC = GcdcInstance(
    name="standard",
    tangent_dim=lambda A: A,
    zero=lambda A: map_zero(0, A),
    plus=lambda A: addition(A),
    lam=delta,
)

GCDC_ANCHORS = {
    "gCDC.1": "λ(+) = +∘π₁, λ(0) = 0∘π₁",
    "gCDC.2": "λf preserves the fibre monoids: λf∘⟨id,0⟩ = 0∘f, λf∘⟨π₀,+⟩ = +∘⟨f∘π₀, λf∘⟨π₀,π₁⟩, λf∘⟨π₀,π₂⟩⟩",
    "gCDC.3": "λ(id) = π₁, λ(π_A) = π_A∘π₁, λ(π_B) = π_B∘π₁, λ(!) = π₁",
    "gCDC.4": "λ⟨f,g⟩ = ⟨λf,λg⟩",
    "gCDC.5": "λ(g∘f) = λg∘⟨f∘π₀, λf⟩",
}


def gcdc_axiom_suite(params: GenParams = GenParams(), instance: GcdcInstance = DEFAULT_GCDC,
                     suite: str = "gcdc") -> AxiomReport:
    rec = SuiteRecorder(suite, GCDC_ANCHORS)
    lam, T = instance.lam, instance.tangent_dim
    for A in range(params.max_dim + 1):
        instance.validate(A)
    for t in range(params.trials):
        a, b, c = (gen_dim(params, t, s) for s in "abc")
        ta, tb = T(a), T(b)
        f = gen_polymap(params, t, a, b, "f")
        h = gen_polymap(params, t, b, c, "h")

        # gCDC.1: the derivative of the monoid on A is the monoid on λA, acting on tangents
        plus_a, zero_a = instance.plus(a), instance.zero(a)
        rec.check("gCDC.1", lam(plus_a),
                  map_compose(instance.plus(ta), projection([2 * a, T(2 * a)], 1)), [plus_a])
        rec.check("gCDC.1", lam(zero_a),
                  map_compose(instance.zero(ta), projection([0, T(0)], 1)), [zero_a])

        # gCDC.2
        for m, inputs in ((instance.section(f), [f]), (instance.section(h), [h])):
            for _, lhs, rhs in splus_squares(m):
                rec.check("gCDC.2", lhs, rhs, inputs)

        # gCDC.3
        rec.check("gCDC.3", lam(identity(a)), projection([a, ta], 1), [identity(a)])
        for i in (0, 1):
            pi = projection([a, b], i)
            rec.check("gCDC.3", lam(pi), map_compose(projection([ta, tb], i), projection([a + b, ta + tb], 1)), [pi])
        bang = terminal(b)
        rec.check("gCDC.3", lam(bang), map_compose(terminal(tb), projection([b, tb], 1)), [bang])

        # gCDC.4
        k = map_compose(h, f)
        rec.check("gCDC.4", lam(map_pair(f, k)), map_pair(lam(f), lam(k)), [f, k])

        # gCDC.5
        rec.check("gCDC.5", lam(map_compose(h, f)),
                  map_compose(lam(h), map_pair(map_compose(f, projection([a, ta], 0)), lam(f))), [f, h])
    return rec.report()
