"""Linear objects and maps, differential objects, and the derivative they induce.

A trivialization of ``B`` is a vertical isomorphism ``TB -> B × B``. Here
it is always ``(b, v) ↦ (b, M·v)`` for a constant invertible rational
matrix ``M``; its inverse is exact and decidable.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .gen import GenParams, gen_dim, gen_invertible_matrix, gen_polymap
from .linalg import Matrix, det, identity_matrix, inverse
from .poly import (
    PolyMap,
    Rational,
    addition,
    compose,
    identity,
    is_additive,
    is_homogeneous_linear,
    map_compose,
    map_pair,
    map_zero,
    normalize,
    permutation,
    product_map,
    projection,
    select,
    terminal,
)
from .report import AxiomReport, SuiteRecorder
from .simple import (
    CDC_ANCHORS,
    DerivativeStructure,
    MonoidInFibre,
    ObjectMismatch,
    SimpleMor,
    SimpleObj,
    check_cdc_laws,
)
from .tangent import tau, tau_direct


class TrivializationError(ValueError):
    pass


def matrix_map(m: Matrix, n: int) -> PolyMap:
    """``v ↦ M·v`` on ``n`` coordinates."""
    return PolyMap(n, len(m), tuple(
        normalize([([int(j == k) for k in range(n)], row[j]) for j in range(n)], n) for row in m))


def linear_matrix(f: PolyMap) -> Matrix | None:
    """The constant matrix of a homogeneous linear map, else ``None``."""
    if not is_homogeneous_linear(f):
        return None
    rows = []
    for p in f.components:
        row = [Rational(0)] * f.dom
        for e, c in p.terms:
            row[e.index(1)] = c
        rows.append(row)
    return rows


def _fiberwise(n: int, m: Matrix) -> PolyMap:
    """``(b, v) ↦ (b, M·v)``."""
    return map_pair(projection([n, n], 0), map_compose(matrix_map(m, n), projection([n, n], 1)))


def fiber_matrix(fwd: PolyMap, n: int) -> Matrix | None:
    """``M`` when ``fwd = (b, v) ↦ (b, M·v)`` with ``M`` constant, else ``None``."""
    if (fwd.dom, fwd.cod) != (2 * n, 2 * n):
        return None
    if map_compose(projection([n, n], 0), fwd) != projection([n, n], 0):
        return None
    m = linear_matrix(map_compose(projection([n, n], 1), fwd))
    if m is None or any(x != 0 for row in m for x in row[:n]):
        return None
    return [row[n:] for row in m]


@dataclass(frozen=True)
class Trivialization:
    object: int
    fwd: PolyMap
    inv: PolyMap
    matrix: Matrix = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        n = self.object
        m = fiber_matrix(self.fwd, n)
        if m is None:
            raise TrivializationError("trivialization must have the shape (b, v) ↦ (b, M·v) with M constant")
        if fiber_matrix(self.inv, n) is None:
            raise TrivializationError("inverse must have the shape (b, w) ↦ (b, N·w)")
        if map_compose(self.fwd, self.inv) != identity(2 * n) or map_compose(self.inv, self.fwd) != identity(2 * n):
            raise TrivializationError("fwd and inv are not mutually inverse")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_matrix(cls, m: Matrix) -> "Trivialization":
        n = len(m)
        if any(len(row) != n for row in m):
            raise TrivializationError("trivialization matrix must be square")
        m = [[Rational(x) for x in row] for row in m]
        if det(m) == 0:
            raise TrivializationError("trivialization matrix is singular")
        return cls(n, _fiberwise(n, m), _fiberwise(n, inverse(m)))

    @classmethod
    def identity(cls, n: int) -> "Trivialization":
        return cls.from_matrix(identity_matrix(n))

    def to_literal(self) -> str:
        return "[" + "; ".join(" ".join(str(x) for x in row) for row in self.matrix) + "]"


# linear maps -----------------------------------------------------------------


def _check_arities(f: PolyMap, tA: Trivialization, tB: Trivialization) -> None:
    if (f.dom, f.cod) != (tA.object, tB.object):
        raise ObjectMismatch(f"map {f.dom}->{f.cod} does not fit trivializations on {tA.object} and {tB.object}")


def linear_square(f: PolyMap, tA: Trivialization, tB: Trivialization,
                  tf: PolyMap | None = None) -> tuple[PolyMap, PolyMap]:
    """The two legs ``tB ∘ τf`` and ``(f × f) ∘ tA`` of the linearity square."""
    _check_arities(f, tA, tB)
    tf = tau_direct(f) if tf is None else tf
    return map_compose(tB.fwd, tf), map_compose(product_map(f, f), tA.fwd)


def reduced_square(f: PolyMap, tA: Trivialization, tB: Trivialization,
                   tf: PolyMap | None = None) -> tuple[PolyMap, PolyMap]:
    """``π₂ ∘ tB ∘ τf`` against ``f ∘ π₂ ∘ tA``."""
    _check_arities(f, tA, tB)
    A, B = f.dom, f.cod
    tf = tau_direct(f) if tf is None else tf
    lhs = compose(projection([B, B], 1), tB.fwd, tf)
    rhs = compose(f, projection([A, A], 1), tA.fwd)
    return lhs, rhs


def is_linear_map(f: PolyMap, tA: Trivialization | None = None, tB: Trivialization | None = None) -> bool:
    """Decide the linearity square; the reduced square must give the same verdict."""
    tA = Trivialization.identity(f.dom) if tA is None else tA
    tB = Trivialization.identity(f.cod) if tB is None else tB
    tf = tau_direct(f)
    full_l, full_r = linear_square(f, tA, tB, tf)
    red_l, red_r = reduced_square(f, tA, tB, tf)
    full, reduced = full_l == full_r, red_l == red_r
    if full != reduced:
        raise AssertionError("full and reduced linearity squares disagree")
    return full


# differential objects -------------------------------------------------------


@dataclass(frozen=True)
class DifferentialObject:
    """``p̂ : B × B -> B`` with a commutative monoid ``(zero : 0 -> B, plus : B × B -> B)``.

    ``inverse`` optionally certifies that ``⟨p, p̂⟩`` is invertible when the
    cone is not a constant-matrix shear.
    """

    object: int
    phat: PolyMap
    zero: PolyMap
    plus: PolyMap
    inverse: PolyMap | None = None

    def __post_init__(self):
        n = self.object
        shapes = [(self.phat, 2 * n, n), (self.zero, 0, n), (self.plus, 2 * n, n)]
        if self.inverse is not None:
            shapes.append((self.inverse, 2 * n, 2 * n))
        if any((m.dom, m.cod) != (d, c) for m, d, c in shapes):
            raise ObjectMismatch("differential object maps have the wrong types")

    @classmethod
    def standard(cls, n: int) -> "DifferentialObject":
        return cls(n, projection([n, n], 1), map_zero(0, n), addition(n))

    def cone(self) -> PolyMap:
        n = self.object
        return map_pair(projection([n, n], 0), self.phat)

    def cone_inverse(self) -> PolyMap | None:
        n = self.object
        m = fiber_matrix(self.cone(), n)
        if m is not None and det(m) != 0:
            return _fiberwise(n, inverse(m))
        if self.inverse is not None:
            c = self.cone()
            if map_compose(c, self.inverse) == identity(2 * n) == map_compose(self.inverse, c):
                return self.inverse
        return None

    def monoid(self) -> MonoidInFibre:
        n = self.object
        return MonoidInFibre(0, n, self.zero, self.plus)

    def to_literal(self) -> str:
        return f"{{phat: {self.phat}, zero: {self.zero}, plus: {self.plus}}}"


DIFF_OBJECT_ANCHORS = {
    "product-cone": "⟨p, p̂⟩ : TB -> B × B is invertible",
    "tau-add-zero": "p̂ ∘ 0_TB = 0_B ∘ !",
    "tau-add-plus": "p̂ ∘ +_TB = +_B ∘ ⟨p̂ π₁, p̂ π₂⟩",
    "cmon-lin-zero": "p̂ ∘ T(0_B) = 0_B",
    "cmon-lin-plus": "p̂ ∘ T(+_B) = +_B ∘ (p̂ × p̂) ∘ (T(B×B) ≅ TB × TB)",
    "monoid": "(0_B, +_B) is a commutative monoid",
}


def tangent_product_shuffle(a: int, b: int) -> PolyMap:
    """``T(A × B) -> TA × TB``: ``(x, y, u, v) ↦ (x, u, y, v)``."""
    return permutation(list(range(a)) + [a + b + i for i in range(a)]
                       + [a + i for i in range(b)] + [2 * a + b + i for i in range(b)])


def check_differential_object(d: DifferentialObject, suite: str = "diff-object") -> AxiomReport:
    rec = SuiteRecorder(suite, DIFF_OBJECT_ANCHORS)
    n = d.object
    rec.holds("product-cone", d.cone_inverse() is not None, [d], lhs=d.cone(), rhs="an invertible map")

    zero_b = map_compose(d.zero, terminal(n))
    tb_zero = map_pair(identity(n), map_zero(n, n))
    rec.check("tau-add-zero", map_compose(d.phat, tb_zero), zero_b, [d])

    dims = [n, n, n]
    tb_plus = map_pair(projection(dims, 0), map_compose(addition(n), select(dims, 1, 2)))
    rhs = map_compose(d.plus, map_pair(map_compose(d.phat, select(dims, 0, 1)), map_compose(d.phat, select(dims, 0, 2))))
    rec.check("tau-add-plus", map_compose(d.phat, tb_plus), rhs, [d])

    rec.check("cmon-lin-zero", map_compose(d.phat, tau(d.zero)), d.zero, [d])

    lhs = map_compose(d.phat, tau(d.plus))
    rhs = compose(d.plus, product_map(d.phat, d.phat), tangent_product_shuffle(n, n))
    rec.check("cmon-lin-plus", lhs, rhs, [d])

    bad = d.monoid().law_failures()
    rec.holds("monoid", not bad, [d], lhs=", ".join(bad) or "ok", rhs="all monoid laws")
    return rec.report()


def diff_from_lin(t: Trivialization, zero: PolyMap | None = None, plus: PolyMap | None = None) -> DifferentialObject:
    """``p̂ := π₂ ∘ t`` with the given monoid (coordinatewise addition by default)."""
    n = t.object
    zero = map_zero(0, n) if zero is None else zero
    plus = addition(n) if plus is None else plus
    d = DifferentialObject(n, map_compose(projection([n, n], 1), t.fwd), zero, plus)
    bad = d.monoid().law_failures()
    if bad:
        raise TrivializationError(f"monoid laws fail: {', '.join(bad)}")
    return d


def lin_from_diff(d: DifferentialObject) -> Trivialization:
    """``t := ⟨p, p̂⟩`` with its inverse read off the product cone."""
    inv = d.cone_inverse()
    if inv is None:
        raise TrivializationError("⟨p, p̂⟩ is not invertible")
    return Trivialization(d.object, d.cone(), inv)


def is_diff_linear_map(f: PolyMap, dA: DifferentialObject, dB: DifferentialObject) -> bool:
    """``p̂_B' ∘ Tf = f ∘ p̂_B``, cross-checked against the linearity square."""
    if (f.dom, f.cod) != (dA.object, dB.object):
        raise ObjectMismatch("map does not fit the differential objects")
    verdict = map_compose(dB.phat, tau(f)) == map_compose(f, dA.phat)
    if verdict != is_linear_map(f, lin_from_diff(dA), lin_from_diff(dB)):
        raise AssertionError("differential-object and trivialization verdicts disagree")
    return verdict


def lin_product(t1: Trivialization, t2: Trivialization) -> Trivialization:
    """The trivialization of ``B₁ × B₂`` through ``T(B₁ × B₂) ≅ TB₁ × TB₂``."""
    a, b = t1.object, t2.object
    s = tangent_product_shuffle(a, b)
    s_inv = tangent_product_shuffle_inverse(a, b)
    if map_compose(s_inv, s) != identity(2 * (a + b)):
        raise AssertionError("shuffle does not cancel")
    # after the trivializations the layout is (x, u, y, v) again
    fwd = compose(s_inv, product_map(t1.fwd, t2.fwd), s)
    inv = compose(s_inv, product_map(t1.inv, t2.inv), s)
    return Trivialization(a + b, fwd, inv)


def tangent_product_shuffle_inverse(a: int, b: int) -> PolyMap:
    """``TA × TB -> T(A × B)``: ``(x, u, y, v) ↦ (x, y, u, v)``."""
    return permutation(list(range(a)) + [2 * a + i for i in range(b)]
                       + [a + i for i in range(a)] + [2 * a + b + i for i in range(b)])


# the induced derivative -------------------------------------------------------


def dT_derivative(f: PolyMap, tA: Trivialization, tB: Trivialization) -> SimpleMor:
    """``(f, π₂ ∘ tB ∘ τf ∘ tA⁻¹)``."""
    _check_arities(f, tA, tB)
    A, B = f.dom, f.cod
    fib = compose(projection([B, B], 1), tB.fwd, tau_direct(f), tA.inv)
    return SimpleMor(SimpleObj(A, A), SimpleObj(B, B), f, fib)


DT_STRUCTURE = DerivativeStructure(
    lambda f, tA, tB: dT_derivative(f, tA, tB).fib,
    lambda t: t.object,
    lin_product,
)

DT_DEFAULTS = GenParams(trials=100)


def random_trivialization(params: GenParams, trial: int, n: int, stream: str = "") -> Trivialization:
    return Trivialization.from_matrix(gen_invertible_matrix(params, trial, n, stream))


def dT_axiom_suite(params: GenParams = DT_DEFAULTS, suite: str = "dT") -> AxiomReport:
    """CDC.1–5 for the derivative induced by random constant-matrix trivializations."""
    rec = SuiteRecorder(suite, CDC_ANCHORS)
    for t in range(params.trials):
        a, b, c = (gen_dim(params, t, s) for s in "abc")
        tA, tB, tC = (random_trivialization(params, t, n, s) for n, s in ((a, "A"), (b, "B"), (c, "C")))
        f = gen_polymap(params, t, a, b, "f")
        g = gen_polymap(params, t, a, b, "g")
        h = gen_polymap(params, t, b, c, "h")
        check_cdc_laws(rec, DT_STRUCTURE, tA, tB, tC, f, g, h)
    return rec.report()


# exhaustive characterization ------------------------------------------------


def small_maps(n: int, degree: int = 2, coeffs=(-1, 0, 1)):
    """Every map ``n -> n`` whose components have degree ``<= degree`` and coefficients in ``coeffs``."""
    monos = [e for d in range(degree + 1) for e in _exponents(n, d)]
    comps = [normalize(list(zip(monos, cs)), n) for cs in itertools.product(coeffs, repeat=len(monos))]
    for choice in itertools.product(comps, repeat=n):
        yield PolyMap(n, n, choice)


def _exponents(n: int, d: int):
    if n == 0:
        if d == 0:
            yield ()
        return
    for k in range(d, -1, -1):
        for rest in _exponents(n - 1, d - k):
            yield (k,) + rest


@dataclass
class Characterization:
    maps: int = 0
    linear: int = 0
    disagreements: list[PolyMap] = field(default_factory=list)


def characterize(n: int, degree: int = 2, coeffs=(-1, 0, 1)) -> Characterization:
    """Compare linearity, additivity and homogeneity on every small map ``n -> n``."""
    out = Characterization()
    t = Trivialization.identity(n)
    for f in small_maps(n, degree, coeffs):
        verdicts = {is_linear_map(f, t, t), is_additive(f), is_homogeneous_linear(f)}
        out.maps += 1
        if len(verdicts) > 1:
            out.disagreements.append(f)
        elif True in verdicts:
            out.linear += 1
    return out


def failing_square(f: PolyMap, tA: Trivialization, tB: Trivialization) -> tuple[PolyMap, PolyMap] | None:
    lhs, rhs = linear_square(f, tA, tB)
    return None if lhs == rhs else (lhs, rhs)

