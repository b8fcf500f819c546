"""Exact multivariate polynomials over the rationals and the base category.

Objects of the base category are dimensions (natural numbers); a morphism
``m -> n`` is a :class:`PolyMap`, i.e. ``n`` polynomials in ``m`` variables.
Products are addition of dimensions with the left block first.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import accumulate
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

from gmpy2 import mpq

# exact rationals; mpq hashes and compares like the stdlib fraction type
Rational = mpq
_MPQ = type(mpq(0))
Exps = tuple[int, ...]


class ArityError(ValueError):
    """Exponent vectors, points or indices do not fit the declared arity."""


class CompositionError(ValueError):
    """Dimensions of morphisms do not line up."""


def as_rational(x) -> Rational:
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, (int, _RationalABC)):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(x)
    raise TypeError(f"not an exact rational: {x!r}")


def _order_key(exps: Exps):
    # graded lexicographic, highest first after reverse sort
    return (sum(exps), exps)


class Poly:
    """A polynomial in canonical form.

    Zero coefficients are never stored, so equality is equality of the
    monomial-to-coefficient maps. ``terms`` lists them in graded-lex order,
    highest first; the order is computed on demand.
    """

    __slots__ = ("arity", "_terms", "_hash", "_sorted")

    def __init__(self, arity: int, terms: dict[Exps, Rational] | None = None):
        # trusted constructor: ``terms`` must already be free of zeros
        self.arity = arity
        self._terms = terms if terms is not None else {}
        self._hash = None
        self._sorted = None

    @classmethod
    def _canon(cls, arity: int, acc: dict[Exps, Rational]) -> "Poly":
        return cls(arity, {k: c for k, c in acc.items() if c})

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls, arity: int) -> "Poly":
        return cls(arity, {})

    @classmethod
    def const(cls, arity: int, c) -> "Poly":
        c = as_rational(c)
        return cls(arity, {(0,) * arity: c} if c else {})

    @classmethod
    def var(cls, arity: int, i: int) -> "Poly":
        if not 0 <= i < arity:
            raise ArityError(f"variable x{i} out of range for arity {arity}")
        e = [0] * arity
        e[i] = 1
        return cls(arity, {tuple(e): Rational(1)})

    @property
    def terms(self) -> tuple[tuple[Exps, Rational], ...]:
        if self._sorted is None:
            self._sorted = tuple(sorted(self._terms.items(), key=lambda kv: _order_key(kv[0]), reverse=True))
        return self._sorted

    def items(self):
        return self.terms

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, variables: Iterable[int]) -> int:
        vs = list(variables)
        return max((sum(e[i] for i in vs) for e in self._terms), default=-1)

    def constant_term(self) -> Rational:
        return self._terms.get((0,) * self.arity, Rational(0))

    def variables(self) -> set[int]:
        return {i for e in self._terms for i, k in enumerate(e) if k}

    # equality ------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.arity == other.arity and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.arity, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        from .syntax import format_poly

        return f"Poly({self.arity}, {format_poly(self)!r})"

    # ring operations -----------------------------------------------------
    def _check(self, other: "Poly"):
        if self.arity != other.arity:
            raise ArityError(f"arity mismatch: {self.arity} vs {other.arity}")

    def __add__(self, other):
        if not isinstance(other, Poly):
            return self + Poly.const(self.arity, other)
        self._check(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, 0) + c
        return Poly._canon(self.arity, acc)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.arity, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = as_rational(other)
            if not c:
                return Poly.zero(self.arity)
            return Poly(self.arity, {k: v * c for k, v in self._terms.items()})
        self._check(other)
        return Poly._canon(self.arity, _mul(self._terms, other._terms))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = Poly.const(self.arity, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # calculus and substitution ------------------------------------------
    def partial(self, i: int) -> "Poly":
        if not 0 <= i < self.arity:
            raise ArityError(f"variable index {i} out of range for arity {self.arity}")
        acc: dict[Exps, Rational] = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                e2 = e[:i] + (k - 1,) + e[i + 1:]
                acc[e2] = c * k
        return Poly._canon(self.arity, acc)

    def embed(self, arity: int, offset: int = 0) -> "Poly":
        """Re-read the variables as ``x[offset] .. x[offset+arity0-1]`` of a larger arity."""
        if offset < 0 or offset + self.arity > arity:
            raise ArityError("embedding does not fit")
        pre, post = (0,) * offset, (0,) * (arity - offset - self.arity)
        return Poly(arity, {pre + e + post: c for e, c in self._terms.items()})

    def rename(self, arity: int, targets: Sequence[int]) -> "Poly":
        """Substitute ``x_i := x_{targets[i]}`` in a polynomial of the given arity."""
        acc: dict[Exps, Rational] = {}
        for e, c in self._terms.items():
            new = [0] * arity
            for i, k in enumerate(e):
                if k:
                    new[targets[i]] += k
            t = tuple(new)
            acc[t] = acc.get(t, 0) + c
        return Poly._canon(arity, acc)

    def substitute(self, polys: Sequence["Poly"], arity: int | None = None) -> "Poly":
        """Compose: replace ``x_i`` by ``polys[i]``."""
        if len(polys) != self.arity:
            raise CompositionError(f"need {self.arity} polynomials, got {len(polys)}")
        if arity is None:
            if not polys:
                raise CompositionError("target arity required for a nullary substitution")
            arity = polys[0].arity
        for p in polys:
            if p.arity != arity:
                raise ArityError("substituted polynomials must share an arity")
        targets = [_single_var(p) for p in polys]
        if all(t is not None for t in targets):
            return self.rename(arity, targets)
        return _substitute(self, tuple(polys), arity)

    def _substitute(self, polys: tuple["Poly", ...], arity: int) -> "Poly":
        if all(sum(e) <= 1 for e in self._terms):
            # affine: a linear combination of the substituted polynomials
            acc: dict[Exps, Rational] = {}
            for e, c in self._terms.items():
                if 1 in e:
                    src = polys[e.index(1)]._terms
                else:
                    src = {(0,) * arity: 1}
                for k, v in src.items():
                    acc[k] = acc.get(k, 0) + c * v
            return Poly._canon(arity, acc)
        powers: list[dict[int, dict]] = [{0: {(0,) * arity: Rational(1)}, 1: p._terms} for p in polys]

        def power(i: int, k: int) -> dict:
            cache = powers[i]
            if k not in cache:
                half = power(i, k // 2)
                sq = _mul(half, half)
                cache[k] = _mul(sq, cache[1]) if k % 2 else sq
            return cache[k]

        acc: dict[Exps, Rational] = {}
        for e, c in self._terms.items():
            prod: dict = {(0,) * arity: c}
            for i, k in enumerate(e):
                if k:
                    prod = _mul(prod, power(i, k))
                    if not prod:
                        break
            for k2, v in prod.items():
                acc[k2] = acc.get(k2, 0) + v
        return Poly._canon(arity, acc)

    def evaluate(self, point: Sequence):
        """Evaluate at a point; values may be any ring elements (rationals, floats, duals)."""
        if len(point) != self.arity:
            raise ArityError(f"point has length {len(point)}, expected {self.arity}")
        total = 0
        for e, c in self._terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * x**k
            total = term + total
        return total


# values are immutable, so substitution results can be shared freely
_substitute = Poly._substitute


def _mul(a: dict, b: dict) -> dict:
    acc: dict = {}
    get = acc.get
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple([x + y for x, y in zip(e1, e2)])
            acc[e] = get(e, 0) + c1 * c2
    return acc


def _single_var(p: Poly) -> int | None:
    if len(p._terms) != 1:
        return None
    (e, c), = p._terms.items()
    if c != 1 or sum(e) != 1:
        return None
    return e.index(1)


def normalize(raw_terms: Iterable[tuple[Sequence[int], object]], arity: int) -> Poly:
    """Build a canonical polynomial from an arbitrary list of (exponents, coefficient)."""
    acc: dict[Exps, Rational] = {}
    for exps, coeff in raw_terms:
        e = tuple(int(k) for k in exps)
        if len(e) != arity:
            raise ArityError(f"exponent vector {e} does not have length {arity}")
        if any(k < 0 for k in e):
            raise ArityError(f"negative exponent in {e}")
        acc[e] = acc.get(e, 0) + as_rational(coeff)
    return Poly._canon(arity, acc)


def partial(p: Poly, var_index: int) -> Poly:
    return p.partial(var_index)


# ---------------------------------------------------------------------------
# morphisms of the base category


@dataclass(frozen=True)
class PolyMap:
    dom: int
    cod: int
    components: tuple[Poly, ...]
    _identity: bool | None = field(default=None, init=False, compare=False, repr=False)

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if self.dom < 0 or self.cod < 0:
            raise ArityError("dimensions must be nonnegative")
        if len(comps) != self.cod:
            raise ArityError(f"{len(comps)} components for codomain {self.cod}")
        for p in comps:
            if p.arity != self.dom:
                raise ArityError(f"component of arity {p.arity} in a map from {self.dom}")

    @classmethod
    def of(cls, dom: int, components: Iterable[Poly]) -> "PolyMap":
        comps = tuple(components)
        return cls(dom, len(comps), comps)

    def __getitem__(self, i: int) -> Poly:
        return self.components[i]

    def __add__(self, other: "PolyMap") -> "PolyMap":
        return map_add(self, other)

    def __neg__(self) -> "PolyMap":
        return PolyMap(self.dom, self.cod, tuple(-p for p in self.components))

    def __sub__(self, other: "PolyMap") -> "PolyMap":
        return map_add(self, -other)

    def __matmul__(self, other: "PolyMap") -> "PolyMap":
        """``g @ f`` is ``g ∘ f``."""
        return map_compose(self, other)

    def __call__(self, *point):
        return eval_point(self, point)

    def is_identity(self) -> bool:
        if self._identity is None:
            object.__setattr__(self, "_identity", self.dom == self.cod and all(
                _single_var(p) == i for i, p in enumerate(self.components)))
        return self._identity

    def degree(self) -> int:
        return max((p.degree() for p in self.components), default=-1)

    def __str__(self):
        from .syntax import format_map

        return format_map(self)


def map_compose(g: PolyMap, f: PolyMap) -> PolyMap:
    """``g ∘ f``: substitute the components of ``f`` into those of ``g``."""
    if f.cod != g.dom:
        raise CompositionError(f"cannot compose {g.dom}->{g.cod} after {f.dom}->{f.cod}")
    if f.is_identity():
        return g
    if g.is_identity():
        return f
    comps = tuple(p.substitute(f.components, f.dom) for p in g.components)
    return PolyMap(f.dom, g.cod, comps)


def compose(*maps: PolyMap) -> PolyMap:
    """``compose(h, g, f) == h ∘ g ∘ f``."""
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = map_compose(m, out)
    return out


# structural maps depend only on dimensions and are immutable, so they are cached


@lru_cache(maxsize=None)
def identity(n: int) -> PolyMap:
    return PolyMap(n, n, tuple(Poly.var(n, i) for i in range(n)))


def _offsets(dims: Sequence[int]) -> list[int]:
    return [0, *accumulate(dims)]


def projection(dims: Sequence[int], block: int) -> PolyMap:
    """Projection from ``dims[0] + dims[1] + ...`` onto one block."""
    if not 0 <= block < len(dims):
        raise CompositionError(f"block {block} out of range for {list(dims)}")
    return _projection(tuple(dims), block)


@lru_cache(maxsize=4096)
def _projection(dims: tuple[int, ...], block: int) -> PolyMap:
    off = _offsets(dims)
    total = off[-1]
    return PolyMap(total, dims[block], tuple(Poly.var(total, off[block] + i) for i in range(dims[block])))


def select(dims: Sequence[int], *blocks: int) -> PolyMap:
    """Pairing of several block projections, in the order given."""
    return _select(tuple(dims), blocks)


@lru_cache(maxsize=4096)
def _select(dims: tuple[int, ...], blocks: tuple[int, ...]) -> PolyMap:
    off = _offsets(dims)
    total = off[-1]
    comps = [Poly.var(total, off[b] + i) for b in blocks for i in range(dims[b])]
    return PolyMap(total, len(comps), tuple(comps))


def permutation(targets: Sequence[int]) -> PolyMap:
    """The map whose i-th output is input coordinate ``targets[i]``."""
    n = len(targets)
    if sorted(targets) != list(range(n)):
        raise ValueError(f"not a permutation: {list(targets)}")
    return PolyMap(n, n, tuple(Poly.var(n, t) for t in targets))


def map_pair(*fs: PolyMap, dom: int | None = None) -> PolyMap:
    """Tupling ``⟨f, g, ...⟩``; all maps share a domain."""
    if dom is None:
        if not fs:
            raise CompositionError("empty pairing needs an explicit domain")
        dom = fs[0].dom
    for f in fs:
        if f.dom != dom:
            raise CompositionError(f"pairing maps with domains {dom} and {f.dom}")
    return PolyMap(dom, sum(f.cod for f in fs), tuple(p for f in fs for p in f.components))


def product_map(*fs: PolyMap) -> PolyMap:
    """``f × g × ...`` acting blockwise."""
    dom = sum(f.dom for f in fs)
    comps = []
    off = 0
    for f in fs:
        comps.extend(p.embed(dom, off) for p in f.components)
        off += f.dom
    return PolyMap(dom, len(comps), tuple(comps))


def terminal(m: int) -> PolyMap:
    return PolyMap(m, 0, ())


def diagonal(n: int) -> PolyMap:
    return map_pair(identity(n), identity(n), dom=n)


def constant_map(m: int, values: Sequence) -> PolyMap:
    return PolyMap(m, len(values), tuple(Poly.const(m, v) for v in values))


def map_add(f: PolyMap, g: PolyMap) -> PolyMap:
    if (f.dom, f.cod) != (g.dom, g.cod):
        raise CompositionError(f"cannot add {f.dom}->{f.cod} and {g.dom}->{g.cod}")
    return PolyMap(f.dom, f.cod, tuple(p + q for p, q in zip(f.components, g.components)))


@lru_cache(maxsize=4096)
def map_zero(m: int, n: int) -> PolyMap:
    return PolyMap(m, n, tuple(Poly.zero(m) for _ in range(n)))


def map_sum(maps: Iterable[PolyMap], dom: int, cod: int) -> PolyMap:
    out = map_zero(dom, cod)
    for f in maps:
        out = map_add(out, f)
    return out


@lru_cache(maxsize=1024)
def addition(n: int, copies: int = 2) -> PolyMap:
    """The chosen monoid: coordinatewise sum of ``copies`` blocks of size ``n``."""
    total = n * copies
    comps = []
    for i in range(n):
        acc = {}
        for j in range(copies):
            e = [0] * total
            e[j * n + i] = 1
            acc[tuple(e)] = Rational(1)
        comps.append(Poly._canon(total, acc))
    return PolyMap(total, n, tuple(comps))


def additive_in_block(f: PolyMap, dims: Sequence[int], block: int) -> bool:
    """Exact test that ``f`` preserves sums and zero in one block of its domain.

    Checks ``f(.., h+k, ..) = f(.., h, ..) + f(.., k, ..)`` and ``f(.., 0, ..) = 0``
    as polynomial identities, with the other blocks held fixed.
    """
    if sum(dims) != f.dom:
        raise CompositionError(f"blocks {list(dims)} do not cover domain {f.dom}")
    n = len(dims)
    wide = list(dims) + [dims[block]]
    # substitute block <- block + extra copy
    split_sum = map_pair(*[
        map_add(projection(wide, i), projection(wide, n)) if i == block else projection(wide, i)
        for i in range(n)
    ], dom=sum(wide))
    with_h = select(wide, *range(n))
    with_k = map_pair(
        *[projection(wide, n) if i == block else projection(wide, i) for i in range(n)], dom=sum(wide)
    )
    if map_compose(f, split_sum) != map_add(map_compose(f, with_h), map_compose(f, with_k)):
        return False
    narrow = [d for i, d in enumerate(dims) if i != block]
    parts, j = [], 0
    for i in range(n):
        if i == block:
            parts.append(map_zero(sum(narrow), dims[block]))
        else:
            parts.append(projection(narrow, j))
            j += 1
    inserted = map_pair(*parts, dom=sum(narrow))
    return map_compose(f, inserted) == map_zero(sum(narrow), f.cod)


def is_additive(f: PolyMap) -> bool:
    """``f ∘ (+) = (+) ∘ (f × f)`` and ``f ∘ 0 = 0``, checked exactly."""
    n = f.dom
    lhs = map_compose(f, addition(n))
    rhs = map_compose(addition(f.cod), product_map(f, f))
    if lhs != rhs:
        return False
    return map_compose(f, map_zero(0, n)) == map_zero(0, f.cod)


def is_homogeneous_linear(f: PolyMap) -> bool:
    """Every component is homogeneous of degree one (no constant term)."""
    return all(sum(e) == 1 for p in f.components for e in p._terms)


# ---------------------------------------------------------------------------
# evaluation and derivatives


def eval_point(f: PolyMap, point: Sequence) -> tuple:
    if len(point) != f.dom:
        raise ArityError(f"point of length {len(point)} for a map from {f.dom}")
    return tuple(p.evaluate(point) for p in f.components)


class Dual:
    """``a + b·ε`` with ``ε² = 0``."""

    __slots__ = ("re", "eps")

    def __init__(self, re, eps=0):
        self.re = re
        self.eps = eps

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.re + other.re, self.eps + other.eps)
        return Dual(self.re + other, self.eps)

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.re * other.re, self.re * other.eps + self.eps * other.re)
        return Dual(self.re * other, self.eps * other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Dual(1, 0)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, Dual) and (self.re, self.eps) == (other.re, other.eps)

    def __repr__(self):
        return f"Dual({self.re}, {self.eps})"


def eval_dual(f: PolyMap, point: Sequence, direction: Sequence) -> tuple[tuple, tuple]:
    """Evaluate ``f`` over dual numbers; returns ``(f(p), directional derivative)``."""
    if len(point) != f.dom or len(direction) != f.dom:
        raise ArityError("point and direction must match the domain")
    xs = [Dual(as_rational(p), as_rational(v)) for p, v in zip(point, direction)]
    out = []
    for p in f.components:
        y = p.evaluate(xs)
        out.append(y if isinstance(y, Dual) else Dual(as_rational(y), Rational(0)))
    return tuple(d.re for d in out), tuple(d.eps for d in out)


def jacobian(f: PolyMap) -> list[list[Poly]]:
    """``J[i][j] = ∂f_i/∂x_j``."""
    return [[p.partial(j) for j in range(f.dom)] for p in f.components]


def jacobian_action(f: PolyMap) -> PolyMap:
    """``(a, v) ↦ J_f(a)·v`` as a map ``dom + dom -> cod``."""
    m = f.dom
    comps = []
    for p in f.components:
        acc: dict[Exps, Rational] = {}
        for e, c in p._terms.items():
            for j, k in enumerate(e):
                if k:
                    t = e[:j] + (k - 1,) + e[j + 1:] + (0,) * j + (1,) + (0,) * (m - j - 1)
                    acc[t] = acc.get(t, 0) + c * k
        comps.append(Poly._canon(2 * m, acc))
    return PolyMap(2 * m, f.cod, tuple(comps))


def jacobian_transpose_action(f: PolyMap) -> PolyMap:
    """``(a, w) ↦ J_f(a)ᵀ·w`` as a map ``dom + cod -> dom``."""
    m, n = f.dom, f.cod
    accs: list[dict[Exps, Rational]] = [{} for _ in range(m)]
    for i, p in enumerate(f.components):
        tail = (0,) * i + (1,) + (0,) * (n - i - 1)
        for e, c in p._terms.items():
            for j, k in enumerate(e):
                if k:
                    t = e[:j] + (k - 1,) + e[j + 1:] + tail
                    accs[j][t] = accs[j].get(t, 0) + c * k
    return PolyMap(m + n, m, tuple(Poly._canon(m + n, acc) for acc in accs))


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Rational(0))
