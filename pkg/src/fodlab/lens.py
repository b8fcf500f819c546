"""Lenses over the polynomial base and reverse derivatives.

A lens ``(A', A) -> (B', B)`` is a forward map ``f : A -> B`` with a
backward map ``f♯ : A × B' -> A'``. Lenses are the fibrewise opposite of the
simple fibration: each one is a span of a vertical leg and a cartesian leg,
and composition glues spans by reindexing.
"""
from __future__ import annotations

from dataclasses import dataclass

from .gen import GenParams, gen_dim, gen_polymap
from .poly import (
    Poly,
    PolyMap,
    additive_in_block,
    compose,
    identity,
    jacobian,
    jacobian_transpose_action,
    map_add,
    map_compose,
    map_pair,
    map_zero,
    projection,
    select,
    terminal,
)
from .report import AxiomReport, SuiteRecorder
from .simple import (
    ObjectMismatch,
    SimpleMor,
    SimpleObj,
    is_cartesian,
    is_vertical,
    reindex,
    reindex_vertical,
    simple_compose,
)


@dataclass(frozen=True)
class LensMor:
    src: SimpleObj
    dst: SimpleObj
    base: PolyMap
    fib: PolyMap

    def __post_init__(self):
        if (self.base.dom, self.base.cod) != (self.src.base, self.dst.base):
            raise ObjectMismatch(f"forward map {self.base.dom}->{self.base.cod} does not fit {self.src} -> {self.dst}")
        if (self.fib.dom, self.fib.cod) != (self.src.base + self.dst.fiber, self.src.fiber):
            raise ObjectMismatch(f"backward map {self.fib.dom}->{self.fib.cod} does not fit {self.src} -> {self.dst}")

    def to_literal(self) -> str:
        return f"{{base: {self.base}, fib: {self.fib}}}"


def lens_identity(obj: SimpleObj) -> LensMor:
    return LensMor(obj, obj, identity(obj.base), projection([obj.base, obj.fiber], 1))


def lens_compose(g: LensMor, f: LensMor) -> LensMor:
    """``(g ∘ f)♯(a, c') = f♯(a, g♯(f(a), c'))``."""
    if f.dst != g.src:
        raise ObjectMismatch(f"cannot compose: {f.dst} != {g.src}")
    A, Cp = f.src.base, g.dst.fiber
    pa = projection([A, Cp], 0)
    pc = projection([A, Cp], 1)
    pulled = map_compose(g.fib, map_pair(map_compose(f.base, pa), pc))
    fib = map_compose(f.fib, map_pair(pa, pulled))
    return LensMor(f.src, g.dst, map_compose(g.base, f.base), fib)


def lens_product(x: SimpleObj, y: SimpleObj) -> tuple[SimpleObj, LensMor, LensMor]:
    """Product with projections ``(⟨π_{A'}, 0⟩, π_A)`` and ``(⟨0, π_{B'}⟩, π_B)``."""
    prod = SimpleObj(x.base + y.base, x.fiber + y.fiber)
    bases = [x.base, y.base]
    n = x.base + y.base
    p0 = LensMor(prod, x, projection(bases, 0),
                 map_pair(projection([n, x.fiber], 1), map_zero(n + x.fiber, y.fiber)))
    p1 = LensMor(prod, y, projection(bases, 1),
                 map_pair(map_zero(n + y.fiber, x.fiber), projection([n, y.fiber], 1)))
    return prod, p0, p1


def lens_pair(f: LensMor, g: LensMor) -> LensMor:
    """Pairing sums the two backward passes."""
    if f.src != g.src:
        raise ObjectMismatch("pairing needs a common source")
    prod, _, _ = lens_product(f.dst, g.dst)
    dims = [f.src.base, f.dst.fiber, g.dst.fiber]
    fib = map_add(map_compose(f.fib, select(dims, 0, 1)), map_compose(g.fib, select(dims, 0, 2)))
    return LensMor(f.src, prod, map_pair(f.base, g.base), fib)


def lens_add(f: LensMor, g: LensMor) -> LensMor:
    if (f.src, f.dst) != (g.src, g.dst):
        raise ObjectMismatch("sum of lenses with different types")
    return LensMor(f.src, f.dst, map_add(f.base, g.base), map_add(f.fib, g.fib))


def lens_zero(src: SimpleObj, dst: SimpleObj) -> LensMor:
    return LensMor(src, dst, map_zero(src.base, dst.base), map_zero(src.base + dst.fiber, src.fiber))


def is_cla_lens(l: LensMor) -> bool:
    return additive_in_block(l.fib, [l.src.base, l.dst.fiber], 1)


# spans ---------------------------------------------------------------------


def span_of_lens(l: LensMor) -> tuple[SimpleMor, SimpleMor]:
    """``X ← f*Y → Y``: the cartesian leg to ``Y`` and the vertical leg to ``X``."""
    apex, cart = reindex(l.base, l.dst)
    vert = SimpleMor(apex, l.src, identity(l.src.base), l.fib)
    return cart, vert


def dual_of_simple(cart: SimpleMor, vert: SimpleMor) -> LensMor:
    if cart.src != vert.src:
        raise ObjectMismatch("span legs must share their apex")
    if not is_cartesian(cart):
        raise ObjectMismatch("the right leg of a span must be cartesian")
    if not is_vertical(vert):
        raise ObjectMismatch("the left leg of a span must be vertical")
    return LensMor(vert.dst, cart.dst, cart.base, vert.fib)


def compose_spans(g: tuple[SimpleMor, SimpleMor], f: tuple[SimpleMor, SimpleMor]) -> tuple[SimpleMor, SimpleMor]:
    """Glue ``X ← P → Y`` and ``Y ← Q → Z`` by pulling ``Q → Y`` back along ``P → Y``.

    The pullback of a vertical map along a cartesian one is its reindexing,
    so the new apex is ``Q`` reindexed along the base of ``P → Y``.
    """
    c1, v1 = f
    c2, v2 = g
    if c1.dst != v2.dst:
        raise ObjectMismatch("spans do not meet")
    pulled = reindex_vertical(v2, c1.base)
    if pulled.dst != c1.src:
        raise ObjectMismatch("pullback does not land on the apex")
    _, lift = reindex(c1.base, c2.src)
    return simple_compose(c2, lift), simple_compose(v1, pulled)


# the reverse section -------------------------------------------------------


def rho(f: PolyMap) -> PolyMap:
    """``ρf(a, w) = J_f(a)ᵀ·w``."""
    return jacobian_transpose_action(f)


def reverse_section_R(f: PolyMap) -> LensMor:
    return LensMor(SimpleObj(f.dom, f.dom), SimpleObj(f.cod, f.cod), f, rho(f))


def corrupted_rho(f: PolyMap) -> PolyMap:
    """Mutant: uses ``J`` where ``Jᵀ`` belongs, truncated or zero-padded to fit the type."""
    m, n = f.dom, f.cod
    J = jacobian(f)
    comps = []
    for j in range(m):
        acc = Poly.zero(m + n)
        if j < n:
            for i in range(min(m, n)):
                d = J[j][i]
                if not d.is_zero():
                    acc = acc + d.embed(m + n, 0) * Poly.var(m + n, m + i)
        comps.append(acc)
    return PolyMap(m + n, m, tuple(comps))


def r_functor_checks(f: PolyMap, g: PolyMap) -> dict[str, bool]:
    """Functor, product and CLA properties of R on ``f : A -> B``, ``g : B -> C``."""
    R = reverse_section_R
    A, B = f.dom, f.cod
    out = {}
    out["composition"] = R(map_compose(g, f)) == lens_compose(R(g), R(f))
    out["identity"] = R(identity(A)) == lens_identity(SimpleObj(A, A))
    h = map_compose(g, f)
    out["pairing"] = R(map_pair(f, h)) == lens_pair(R(f), R(h))
    _, p0, p1 = lens_product(SimpleObj(A, A), SimpleObj(B, B))
    out["projections"] = R(projection([A, B], 0)) == p0 and R(projection([A, B], 1)) == p1
    out["sum"] = R(map_add(f, f)) == lens_add(R(f), R(f))
    out["zero"] = R(map_zero(A, B)) == lens_zero(SimpleObj(A, A), SimpleObj(B, B))
    return out


RDC_ANCHORS = {
    "RDC.1": "ρ(f+g) = ρf + ρg, ρ0 = 0",
    "RDC.2": "ρf∘⟨a,w+w'⟩ = ρf∘⟨a,w⟩ + ρf∘⟨a,w'⟩, ρf∘⟨a,0⟩ = 0",
    "RDC.3": "ρ(id) = π₁, ρ(π_A) = ⟨π₂,0⟩, ρ(π_B) = ⟨0,π₂⟩, ρ(!) = 0",
    "RDC.4": "ρ⟨f,g⟩ = ρf∘⟨π_A,π_B⟩ + ρg∘⟨π_A,π_C⟩",
    "RDC.5": "ρ(g∘f) = ρf∘⟨π₀, ρg∘⟨f∘π₀, π₁⟩⟩",
}


def rdc_axiom_suite(params: GenParams = GenParams(), rho_op=None, suite: str = "rdc") -> AxiomReport:
    """RDC.1–5 as exact identities over ``params.trials`` seeded samples."""
    r = rho if rho_op is None else rho_op
    rec = SuiteRecorder(suite, RDC_ANCHORS)
    for t in range(params.trials):
        a, b, c = (gen_dim(params, t, s) for s in "abc")
        f = gen_polymap(params, t, a, b, "f")
        g = gen_polymap(params, t, a, b, "g")
        h = gen_polymap(params, t, b, c, "h")

        rf = r(f)
        rec.check("RDC.1", r(map_add(f, g)), map_add(rf, r(g)), [f, g])
        rec.check("RDC.1", r(map_zero(a, b)), map_zero(a + b, a), [map_zero(a, b)])

        rec.holds("RDC.2", additive_in_block(rf, [a, b], 1), [f], lhs=rf, rhs="additive in the cotangent block")

        rec.check("RDC.3", r(identity(a)), projection([a, a], 1), [identity(a)])
        pa, pb = projection([a, b], 0), projection([a, b], 1)
        rec.check("RDC.3", r(pa), map_pair(projection([a + b, a], 1), map_zero(a + b + a, b)), [pa])
        rec.check("RDC.3", r(pb), map_pair(map_zero(a + b + b, a), projection([a + b, b], 1)), [pb])
        rec.check("RDC.3", r(terminal(b)), map_zero(b, b), [terminal(b)])

        k = map_compose(h, f)
        dims = [a, b, c]
        rec.check("RDC.4", r(map_pair(f, k)),
                  map_add(map_compose(rf, select(dims, 0, 1)), map_compose(r(k), select(dims, 0, 2))), [f, k])

        pa0, pc1 = projection([a, c], 0), projection([a, c], 1)
        rhs = compose(rf, map_pair(pa0, map_compose(r(h), map_pair(map_compose(f, pa0), pc1))))
        rec.check("RDC.5", r(map_compose(h, f)), rhs, [f, h])
    return rec.report()
