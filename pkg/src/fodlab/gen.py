"""Seeded random morphisms and the floating-point finite-difference oracle."""
from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Sequence

from .poly import Poly, PolyMap, Rational, eval_point, map_zero, normalize

# probabilities of the degenerate shapes, checked in this order
P_ZERO = 0.04
P_PROJECTION = 0.04
P_CONSTANT = 0.04


@dataclass(frozen=True)
class GenParams:
    max_dim: int = 4
    max_degree: int = 4
    max_terms: int = 6
    coeff_bound: int = 9
    seed: int = 0
    trials: int = 200

    def __post_init__(self):
        if self.max_dim < 0:
            raise ValueError("max_dim must be >= 0")
        if self.max_degree < 0 or self.max_terms < 1 or self.coeff_bound < 1 or self.trials < 0:
            raise ValueError("generator bounds out of range")

    def with_(self, **kw) -> "GenParams":
        return replace(self, **kw)


def rng_for(params: GenParams, trial: int, stream: str = "") -> random.Random:
    # string seeds hash through sha512, so this is stable across processes
    return random.Random(f"fodlab:{params.seed}:{trial}:{stream}")


def random_rational(rng: random.Random, bound: int, nonzero: bool = True) -> Rational:
    while True:
        num = rng.randint(-bound, bound)
        if num or not nonzero:
            return Rational(num, rng.randint(1, bound))


def random_poly(rng: random.Random, params: GenParams, arity: int, degree: int | None = None) -> Poly:
    if degree is None:
        degree = rng.randint(0, params.max_degree)
    nterms = rng.randint(1, params.max_terms)
    terms = []
    for _ in range(nterms):
        d = rng.randint(0, degree) if arity else 0
        e = [0] * arity
        for _ in range(d):
            e[rng.randrange(arity)] += 1
        terms.append((e, random_rational(rng, params.coeff_bound)))
    return normalize(terms, arity)


def gen_polymap(params: GenParams, trial: int, dom: int, cod: int, stream: str = "") -> PolyMap:
    """A deterministic random map ``dom -> cod`` for the given trial and stream."""
    if dom > params.max_dim or cod > params.max_dim:
        raise ValueError(f"dimensions {dom}->{cod} exceed max_dim {params.max_dim}")
    rng = rng_for(params, trial, f"map:{stream}:{dom}:{cod}")
    u = rng.random()
    if u < P_ZERO:
        return map_zero(dom, cod)
    u -= P_ZERO
    if u < P_PROJECTION and dom and cod and params.max_degree >= 1:
        return PolyMap(dom, cod, tuple(Poly.var(dom, rng.randrange(dom)) for _ in range(cod)))
    u -= P_PROJECTION
    if u < P_CONSTANT:
        return PolyMap(dom, cod, tuple(Poly.const(dom, random_rational(rng, params.coeff_bound)) for _ in range(cod)))
    degree = rng.randint(0, params.max_degree)
    return PolyMap(dom, cod, tuple(random_poly(rng, params, dom, degree) for _ in range(cod)))


def gen_dim(params: GenParams, trial: int, stream: str, low: int = 0) -> int:
    return rng_for(params, trial, f"dim:{stream}").randint(min(low, params.max_dim), params.max_dim)


def gen_point(params: GenParams, trial: int, n: int, stream: str = "") -> tuple[Rational, ...]:
    rng = rng_for(params, trial, f"point:{stream}")
    return tuple(random_rational(rng, params.coeff_bound, nonzero=False) for _ in range(n))


def gen_invertible_matrix(params: GenParams, trial: int, n: int, stream: str = "") -> list[list[Rational]]:
    """Random invertible rational matrix (rejection sampling on the determinant)."""
    from .linalg import det

    rng = rng_for(params, trial, f"matrix:{stream}")
    bound = min(params.coeff_bound, 4)
    while True:
        m = [[random_rational(rng, bound, nonzero=False) for _ in range(n)] for _ in range(n)]
        if det(m) != 0:
            return m


def is_projection_shape(f: PolyMap) -> bool:
    """Every component is a single variable with coefficient one."""
    return bool(f.components) and all(
        len(p.terms) == 1 and p.terms[0][1] == 1 and sum(p.terms[0][0]) == 1 for p in f.components
    )


def forward_difference_residual(f: PolyMap, point: Sequence, direction: Sequence, h) -> tuple:
    """``(f(p+hv) − f(p))/h − δf(p,v)`` in whatever number type the inputs carry."""
    from .poly import jacobian_action

    shifted = [a + h * b for a, b in zip(point, direction)]
    f1, f0 = eval_point(f, shifted), eval_point(f, point)
    d = eval_point(jacobian_action(f), list(point) + list(direction))
    return tuple((a - b) / h - c for a, b, c in zip(f1, f0, d))


def fd_error(f: PolyMap, point: Sequence[float], direction: Sequence[float], h: float) -> float:
    """``‖(f(p+hv) − f(p))/h − δf(p,v)‖∞`` in floating point."""
    p = [float(x) for x in point]
    v = [float(x) for x in direction]
    return max((abs(float(r)) for r in forward_difference_residual(f, p, v, float(h))), default=0.0)


def fd_check(f: PolyMap, point: Sequence[float], direction: Sequence[float], h: float = 1e-4, tol: float = 1e-3) -> bool:
    if h <= 0 or tol <= 0:
        raise ValueError("h and tol must be positive")
    return fd_error(f, point, direction, h) <= tol

