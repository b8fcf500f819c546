"""Lenses of lenses, the functor Φ to the simple fibration, and forward derivatives from reverse ones."""
from __future__ import annotations

from dataclasses import dataclass, field

from .gen import GenParams, gen_dim, gen_polymap
from .lens import (
    LensMor,
    is_cla_lens,
    lens_add,
    lens_compose,
    lens_identity,
    lens_pair,
    lens_product,
    lens_zero,
    reverse_section_R,
    rho,
)
from .poly import PolyMap, compose, identity, map_pair, map_zero, permutation, product_map, projection
from .report import AxiomReport, SuiteRecorder
from .simple import ObjectMismatch, SimpleMor, SimpleObj, forward_section_D, is_cla_morphism, simple_compose


@dataclass(frozen=True)
class Lens2Obj:
    """An object of lenses over lenses: ``top`` sits over ``bottom``."""

    bottom: SimpleObj
    top: SimpleObj

    def __str__(self):
        return f"({self.top} over {self.bottom})"


def lens_obj_product(x: SimpleObj, y: SimpleObj) -> SimpleObj:
    return lens_product(x, y)[0]


@dataclass(frozen=True)
class Lens2Mor:
    """``outer : (A', A) -> (C', C)`` and ``inner : (A', A) × (D', D) -> (B', B)``.

    ``inner.fib`` has type ``A × D × B' -> A' × D'``.
    """

    src: Lens2Obj
    dst: Lens2Obj
    outer: LensMor
    inner: LensMor
    check_cla: bool = field(default=True, compare=False)

    def __post_init__(self):
        if (self.outer.src, self.outer.dst) != (self.src.bottom, self.dst.bottom):
            raise ObjectMismatch("outer lens does not fit the bottom objects")
        if (self.inner.src, self.inner.dst) != (lens_obj_product(self.src.bottom, self.dst.top), self.src.top):
            raise ObjectMismatch("inner lens does not fit (bottom × target top) -> source top")
        if self.check_cla and not (is_cla_lens(self.outer) and is_cla_lens(self.inner)):
            raise ObjectMismatch("component lenses must be additive in their second argument")


def lens2_identity(x: Lens2Obj) -> Lens2Mor:
    _, _, second = lens_product(x.bottom, x.top)
    return Lens2Mor(x, x, lens_identity(x.bottom), second)


def lens2_compose(m2: Lens2Mor, m1: Lens2Mor) -> Lens2Mor:
    """Lens composition with lenses as the base category.

    ``inner = m1.inner ∘ ⟨π_X, m2.inner ∘ ⟨m1.outer ∘ π_X, π_{Z'}⟩⟩``,
    all products and pairings taken among lenses.
    """
    if m1.dst != m2.src:
        raise ObjectMismatch("cannot compose: objects differ")
    X, Zt = m1.src.bottom, m2.dst.top
    _, px, pz = lens_product(X, Zt)
    pulled = lens_compose(m2.inner, lens_pair(lens_compose(m1.outer, px), pz))
    inner = lens_compose(m1.inner, lens_pair(px, pulled))
    return Lens2Mor(m1.src, m2.dst, lens_compose(m2.outer, m1.outer), inner)


def lens2_add(m: Lens2Mor, n: Lens2Mor) -> Lens2Mor:
    return Lens2Mor(m.src, m.dst, lens_add(m.outer, n.outer), lens_add(m.inner, n.inner))


def lens2_product(x: Lens2Obj, y: Lens2Obj) -> tuple[Lens2Obj, Lens2Mor, Lens2Mor]:
    prod = Lens2Obj(lens_obj_product(x.bottom, y.bottom), lens_obj_product(x.top, y.top))
    _, o0, o1 = lens_product(x.bottom, y.bottom)
    top_x = Lens2Obj(x.bottom, x.top)
    top_y = Lens2Obj(y.bottom, y.top)
    apex_x, _, sx = lens_product(prod.bottom, x.top)
    apex_y, _, sy = lens_product(prod.bottom, y.top)
    # ⟨π_top, 0⟩ and ⟨0, π_top⟩ into the product of the tops
    p0 = Lens2Mor(prod, top_x, o0, lens_pair(sx, lens_zero(apex_x, y.top)))
    p1 = Lens2Mor(prod, top_y, o1, lens_pair(lens_zero(apex_y, x.top), sy))
    return prod, p0, p1


def phi_obj(x: Lens2Obj) -> SimpleObj:
    """``(B' over A)``: the outer fiber over the base of the bottom object."""
    return SimpleObj(x.bottom.base, x.top.fiber)


def phi(m: Lens2Mor) -> SimpleMor:
    """``(f, π_{D'} ∘ g♯ ∘ ⟨π_A, 0_D, π_{B'}⟩)``."""
    A, Bp = m.src.bottom.base, m.src.top.fiber
    D, Ap, Dp = m.dst.top.base, m.src.bottom.fiber, m.dst.top.fiber
    insert = map_pair(projection([A, Bp], 0), map_zero(A + Bp, D), projection([A, Bp], 1))
    fib = compose(projection([Ap, Dp], 1), m.inner.fib, insert)
    return SimpleMor(phi_obj(m.src), phi_obj(m.dst), m.outer.base, fib)


def block_iso(x: SimpleObj, y: SimpleObj) -> PolyMap:
    """``(A, A) × (C', C')`` as the stationary object on ``A × C'``.

    With base blocks first and fiber blocks second the two coordinate
    layouts coincide, so the shuffle is the identity permutation.
    """
    prod = lens_obj_product(x, y)
    if prod.base != prod.fiber:
        raise ObjectMismatch("block isomorphism needs stationary factors")
    return permutation(list(range(prod.base)))


def lift_R(l: LensMor) -> Lens2Mor:
    """Apply the reverse section to both parts of a stationary-compatible lens."""
    A, Ap = l.src.base, l.src.fiber
    C, Cp = l.dst.base, l.dst.fiber
    src = Lens2Obj(SimpleObj(A, A), SimpleObj(Ap, Ap))
    dst = Lens2Obj(SimpleObj(C, C), SimpleObj(Cp, Cp))
    outer = reverse_section_R(l.base)
    iso = block_iso(SimpleObj(A, A), SimpleObj(Cp, Cp))
    inner_R = reverse_section_R(l.fib)
    apex = lens_obj_product(SimpleObj(A, A), SimpleObj(Cp, Cp))
    # transport across the shuffle (identity under the block convention)
    inner = LensMor(apex, inner_R.dst, inner_R.base @ iso, inner_R.fib @ product_map(iso, identity(Ap)))
    return Lens2Mor(src, dst, outer, inner)


def rdc_to_cdc(f: PolyMap) -> SimpleMor:
    """``Φ ∘ L(R) ∘ R`` applied to ``f``."""
    return phi(lift_R(reverse_section_R(f)))


def rdc_to_cdc_closed(f: PolyMap) -> SimpleMor:
    """``π_B ∘ ρ(ρf) ∘ ⟨π_A, 0_B, π_A⟩`` computed on plain maps."""
    A, B = f.dom, f.cod
    rr = rho(rho(f))  # (A × B) × A -> A × B
    insert = map_pair(projection([A, A], 0), map_zero(2 * A, B), projection([A, A], 1))
    fib = compose(projection([A, B], 1), rr, insert)
    return SimpleMor(SimpleObj(A, A), SimpleObj(B, B), f, fib)


RDC2CDC_ANCHORS = {
    "equivalence": "Φ(L(R)(Rf)) = π_B∘ρ(ρf)∘⟨π_A,0,π_B⟩ = (f, δf)",
    "cla": "the induced fibre map is additive in its tangent argument",
    "lift-functor": "L(R)(Rg∘Rf) = L(R)(Rg)∘L(R)(Rf)",
    "phi-functor": "Φ(n∘m) = Φn∘Φm",
}


def rdc2cdc_suite(params: GenParams = GenParams(), suite: str = "rdc2cdc") -> AxiomReport:
    rec = SuiteRecorder(suite, RDC2CDC_ANCHORS)
    for t in range(params.trials):
        a, b, c = (gen_dim(params, t, s) for s in "abc")
        f = gen_polymap(params, t, a, b, "f")
        pipeline = rdc_to_cdc(f)
        closed = rdc_to_cdc_closed(f)
        direct = forward_section_D(f)
        ok = pipeline == closed == direct
        rec.holds("equivalence", ok, [f], lhs=pipeline if pipeline != direct else closed, rhs=direct)
        rec.holds("cla", is_cla_morphism(pipeline), [f], lhs=pipeline, rhs="additive in the tangent block")
        g = gen_polymap(params, t, b, c, "g")
        m1, m2 = lift_R(reverse_section_R(f)), lift_R(reverse_section_R(g))
        both = lens2_compose(m2, m1)
        rec.check("lift-functor", lift_R(lens_compose(reverse_section_R(g), reverse_section_R(f))), both, [f, g])
        rec.check("phi-functor", phi(both), simple_compose(phi(m2), phi(m1)), [f, g])
    return rec.report()

