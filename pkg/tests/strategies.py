"""Hypothesis strategies and a sympy bridge used as an independent oracle."""
from __future__ import annotations

import sympy
from hypothesis import strategies as st

from fodlab.poly import Poly, PolyMap, Rational, normalize

coeffs = st.builds(Rational, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def polys(draw, arity: int, max_degree: int = 3, max_terms: int = 4):
    terms = []
    for _ in range(draw(st.integers(0, max_terms))):
        e = [draw(st.integers(0, max_degree)) for _ in range(arity)]
        while sum(e) > max_degree:
            e[e.index(max(e))] -= 1
        terms.append((e, draw(coeffs)))
    return normalize(terms, arity)


@st.composite
def polymaps(draw, dom: int | None = None, cod: int | None = None, max_dim: int = 3, max_degree: int = 3):
    dom = draw(st.integers(0, max_dim)) if dom is None else dom
    cod = draw(st.integers(0, max_dim)) if cod is None else cod
    return PolyMap(dom, cod, tuple(draw(polys(dom, max_degree)) for _ in range(cod)))


@st.composite
def composable(draw, n: int = 2, max_dim: int = 3, max_degree: int = 3):
    """``n`` maps ``f1 : d0 -> d1, f2 : d1 -> d2, ...``."""
    dims = [draw(st.integers(0, max_dim)) for _ in range(n + 1)]
    return [draw(polymaps(dims[i], dims[i + 1], max_degree=max_degree)) for i in range(n)]


def points(n: int):
    return st.lists(coeffs, min_size=n, max_size=n).map(tuple)


def xs(n: int):
    return sympy.symbols(f"x0:{n}") if n else ()


def to_sympy(p: Poly):
    v = xs(p.arity)
    return sum((sympy.Rational(int(c.numerator), int(c.denominator)) * sympy.prod([x ** k for x, k in zip(v, e)])
                for e, c in p.items()), sympy.Integer(0))


def from_sympy(expr, arity: int) -> Poly:
    expr = sympy.expand(expr)
    if expr == 0:
        return Poly.zero(arity)
    sp = sympy.Poly(expr, *xs(arity)) if arity else None
    if sp is None:
        q = sympy.Rational(expr)
        return Poly.const(0, Rational(int(q.p), int(q.q)))
    return normalize([(m, Rational(int(c.p), int(c.q))) for m, c in sp.terms()], arity)


def sympy_jacobian_action(f: PolyMap) -> PolyMap:
    """``(a, v) ↦ J(a)·v`` computed by sympy differentiation."""
    m = f.dom
    v = xs(2 * m)
    comps = []
    for p in f.components:
        e = to_sympy(p).subs(dict(zip(xs(m), v[:m])), simultaneous=True) if m else to_sympy(p)
        comps.append(from_sympy(sum((sympy.diff(e, v[j]) * v[m + j] for j in range(m)), sympy.Integer(0)), 2 * m))
    return PolyMap(2 * m, f.cod, tuple(comps))
