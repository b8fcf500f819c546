from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from fodlab.lens import (
    LensMor,
    compose_spans,
    corrupted_rho,
    dual_of_simple,
    is_cla_lens,
    lens_add,
    lens_compose,
    lens_identity,
    lens_pair,
    lens_product,
    lens_zero,
    r_functor_checks,
    rdc_axiom_suite,
    reverse_section_R,
    rho,
    span_of_lens,
)
from fodlab.poly import Poly, PolyMap, Rational, dot, eval_point, identity, jacobian_action, map_compose, projection
from fodlab.simple import ObjectMismatch, SimpleMor, SimpleObj, simple_identity
from fodlab.syntax import parse_map
from strategies import composable, points, polymaps, polys

X2 = parse_map("[x0^2] : 1 -> 1")
X3 = parse_map("[x0^3] : 1 -> 1")


@st.composite
def lenses(draw, src: SimpleObj | None = None, dst: SimpleObj | None = None):
    dims = st.integers(0, 2)
    src = SimpleObj(draw(dims), draw(dims)) if src is None else src
    dst = SimpleObj(draw(dims), draw(dims)) if dst is None else dst
    base = draw(polymaps(src.base, dst.base, max_degree=2))
    fib = draw(polymaps(src.base + dst.fiber, src.fiber, max_degree=2))
    return LensMor(src, dst, base, fib)


@st.composite
def cla_lenses(draw, src: SimpleObj | None = None, dst: SimpleObj | None = None):
    """Backward passes linear in the cotangent: ``Σ_j c_j(a)·w_j``."""
    dims = st.integers(0, 2)
    src = SimpleObj(draw(dims), draw(dims)) if src is None else src
    dst = SimpleObj(draw(dims), draw(dims)) if dst is None else dst
    n = src.base + dst.fiber
    comps = []
    for _ in range(src.fiber):
        acc = Poly.zero(n)
        for j in range(dst.fiber):
            acc = acc + draw(polys(src.base, 2)).embed(n, 0) * Poly.var(n, src.base + j)
        comps.append(acc)
    base = draw(polymaps(src.base, dst.base, max_degree=2))
    return LensMor(src, dst, base, PolyMap(n, src.fiber, tuple(comps)))


@given(lenses())
def test_identity_laws(l):
    assert lens_compose(l, lens_identity(l.src)) == l
    assert lens_compose(lens_identity(l.dst), l) == l


@given(st.data())
def test_composition_is_associative(data):
    f = data.draw(lenses())
    g = data.draw(lenses(src=f.dst))
    h = data.draw(lenses(src=g.dst))
    assert lens_compose(h, lens_compose(g, f)) == lens_compose(lens_compose(h, g), f)


def test_composite_of_square_and_cube():
    f, g = reverse_section_R(X2), reverse_section_R(X3)
    assert f.fib == parse_map("[2*x0*x1] : 2 -> 1")
    assert g.fib == parse_map("[3*x0^2*x1] : 2 -> 1")
    # f♯(a, g♯(a², w)) = 2a · 3a⁴ · w, the transpose Jacobian of x⁶
    assert lens_compose(g, f).fib == parse_map("[6*x0^5*x1] : 2 -> 1")
    assert lens_compose(g, f) == reverse_section_R(parse_map("[x0^6] : 1 -> 1"))


def test_projection_lenses():
    _, p0, p1 = lens_product(SimpleObj(1, 2), SimpleObj(1, 3))
    # backward pass of the first projection: (a, b, w) ↦ (w, 0)
    assert p0.fib == parse_map("[x2; x3; 0; 0; 0] : 4 -> 5")
    assert p1.fib == parse_map("[0; 0; x2; x3; x4] : 5 -> 5")


@given(st.data())
def test_pairing_then_projection(data):
    f = data.draw(cla_lenses())
    g = data.draw(cla_lenses(src=f.src))
    _, p0, p1 = lens_product(f.dst, g.dst)
    pair = lens_pair(f, g)
    assert lens_compose(p0, pair) == f
    assert lens_compose(p1, pair) == g


def test_pairing_of_zero_lenses():
    src, a, b = SimpleObj(1, 2), SimpleObj(2, 1), SimpleObj(0, 3)
    prod, _, _ = lens_product(a, b)
    assert lens_pair(lens_zero(src, a), lens_zero(src, b)).fib == lens_zero(src, prod).fib


def test_spans():
    obj = SimpleObj(2, 1)
    cart, vert = span_of_lens(lens_identity(obj))
    assert cart == simple_identity(obj) == vert
    assert dual_of_simple(cart, vert) == lens_identity(obj)
    f = parse_map("[x0*x1] : 2 -> 1")
    c = SimpleMor(SimpleObj(2, 1), SimpleObj(1, 1), f, projection([2, 1], 1))
    v = SimpleMor(SimpleObj(2, 1), SimpleObj(2, 2), identity(2), parse_map("[x2*x0; x2] : 3 -> 2"))
    assert dual_of_simple(c, v) == LensMor(SimpleObj(2, 2), SimpleObj(1, 1), f, v.fib)


def test_dual_of_simple_checks_legs():
    neither = SimpleMor(SimpleObj(1, 1), SimpleObj(1, 1), X2, parse_map("[2*x0*x1] : 2 -> 1"))
    with pytest.raises(ObjectMismatch):
        dual_of_simple(neither, simple_identity(SimpleObj(1, 1)))
    with pytest.raises(ObjectMismatch):
        dual_of_simple(simple_identity(SimpleObj(1, 1)), neither)


@given(cla_lenses())
def test_generated_cla_lenses_are_cla(l):
    assert is_cla_lens(l)


@given(lenses())
def test_span_round_trip(l):
    assert dual_of_simple(*span_of_lens(l)) == l


@given(st.data())
def test_span_composition_matches_lens_composition(data):
    f = data.draw(lenses())
    g = data.draw(lenses(src=f.dst))
    glued = compose_spans(span_of_lens(g), span_of_lens(f))
    assert dual_of_simple(*glued) == lens_compose(g, f)


def test_reverse_section_examples():
    assert rho(identity(2)) == projection([2, 2], 1)
    pa = projection([2, 1], 0)
    assert rho(pa) == parse_map("[x3; x4; 0] : 5 -> 3")
    assert rho(parse_map("[x0*x1] : 2 -> 1")) == parse_map("[x1*x2; x0*x2] : 3 -> 2")


@given(st.data())
def test_transpose_identity(data):
    f = data.draw(polymaps())
    a, v, w = data.draw(points(f.dom)), data.draw(points(f.dom)), data.draw(points(f.cod))
    assert dot(eval_point(jacobian_action(f), a + v), w) == dot(v, eval_point(rho(f), a + w))


@given(composable(2, max_degree=3))
def test_reverse_section_is_a_functor(maps):
    f, g = maps
    assert all(r_functor_checks(f, g).values())


@given(polymaps())
def test_reverse_section_is_cla(f):
    assert is_cla_lens(reverse_section_R(f))


def test_hom_monoid_on_lenses():
    a, b = SimpleObj(1, 1), SimpleObj(1, 1)
    f = reverse_section_R(X2)
    assert lens_add(f, lens_zero(a, b)) == f


def test_rdc_suite_passes():
    report = rdc_axiom_suite()
    assert report.passed
    assert [r.law for r in report.laws] == ["RDC.1", "RDC.2", "RDC.3", "RDC.4", "RDC.5"]


def test_rdc5_square_and_cube():
    lhs = rho(map_compose(X3, X2))
    inner = map_compose(rho(X3), parse_map("[x0^2; x1] : 2 -> 2"))
    rhs = map_compose(rho(X2), parse_map("[x0; 3*x0^4*x1] : 2 -> 2"))
    assert inner == parse_map("[3*x0^4*x1] : 2 -> 1")
    assert lhs == rhs == parse_map("[6*x0^5*x1] : 2 -> 1")


def test_corrupted_rho_caught():
    report = rdc_axiom_suite(rho_op=corrupted_rho, suite="mutant")
    failing = {r.law for r in report.laws if not r.passed}
    assert failing & {"RDC.3", "RDC.4"}
    # on a non-square map the untransposed Jacobian gives the wrong backward pass
    f = parse_map("[x0*x1] : 2 -> 1")
    assert corrupted_rho(f) != rho(f)
    assert eval_point(corrupted_rho(f), [Rational(2), Rational(3), Rational(1)]) != (Rational(3), Rational(2))
