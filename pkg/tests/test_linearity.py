from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from fodlab.gen import GenParams, gen_dim, gen_invertible_matrix, gen_polymap
from fodlab.linalg import identity_matrix, matmul
from fodlab.poly import Rational, addition, identity, is_additive, is_homogeneous_linear, map_pair, map_zero, projection
from fodlab.linearity import (
    DifferentialObject,
    Trivialization,
    TrivializationError,
    characterize,
    check_differential_object,
    dT_axiom_suite,
    dT_derivative,
    diff_from_lin,
    failing_square,
    is_diff_linear_map,
    is_linear_map,
    lin_from_diff,
    lin_product,
    linear_matrix,
    matrix_map,
    small_maps,
)
from fodlab.simple import ObjectMismatch, forward_section_D
from fodlab.syntax import parse_map
from strategies import polymaps

Q = Rational
X2 = parse_map("[x0^2] : 1 -> 1")


@st.composite
def invertible_matrices(draw, n: int):
    seed = draw(st.integers(0, 10_000))
    return gen_invertible_matrix(GenParams(seed=seed), 0, n)


@st.composite
def trivializations(draw, n: int | None = None):
    n = draw(st.integers(0, 3)) if n is None else n
    return Trivialization.from_matrix(draw(invertible_matrices(n)))


# trivializations -----------------------------------------------------------


def test_trivialization_validation():
    with pytest.raises(TrivializationError):
        Trivialization.from_matrix([[1, 2], [2, 4]])
    with pytest.raises(TrivializationError):
        Trivialization.from_matrix([[1, 2]])
    fwd = parse_map("[x0; x1 + x0] : 2 -> 2")
    with pytest.raises(TrivializationError):
        Trivialization(1, fwd, parse_map("[x0; x1 - x0] : 2 -> 2"))
    with pytest.raises(TrivializationError):
        Trivialization(1, parse_map("[x0; 2*x1] : 2 -> 2"), parse_map("[x0; x1] : 2 -> 2"))


def test_matrix_round_trip():
    m = [[Q(1), Q(2)], [Q(-1, 3), Q(0)]]
    assert linear_matrix(matrix_map(m, 2)) == m
    assert Trivialization.from_matrix(m).matrix == m


# linear maps -------------------------------------------------------------


def test_linear_map_examples():
    assert is_linear_map(parse_map("[3*x0] : 1 -> 1"))
    assert not is_linear_map(X2)
    for n in range(4):
        t = Trivialization.from_matrix(gen_invertible_matrix(GenParams(), n, n))
        assert is_linear_map(identity(n), t, t)


def test_linearity_depends_on_trivializations():
    f = parse_map("[3*x0] : 1 -> 1")
    two, one = Trivialization.from_matrix([[2]]), Trivialization.identity(1)
    assert not is_linear_map(f, two, one)
    assert is_linear_map(f, two, two)
    lhs, rhs = failing_square(f, two, one)
    assert lhs == parse_map("[3*x0; 3*x1] : 2 -> 2")
    assert rhs == parse_map("[3*x0; 6*x1] : 2 -> 2")
    assert failing_square(f, two, two) is None


def test_arity_mismatch():
    with pytest.raises(ObjectMismatch):
        is_linear_map(X2, Trivialization.identity(2), Trivialization.identity(1))


def test_characterization_on_lines():
    result = characterize(1)
    assert result.maps == 27
    assert result.linear == 3  # -x, 0, x
    assert result.disagreements == []


def test_small_map_enumeration_counts():
    assert sum(1 for _ in small_maps(1)) == 27
    assert sum(1 for _ in small_maps(2, degree=1, coeffs=(0, 1))) == 2 ** 6


@given(polymaps(max_degree=2))
def test_linear_iff_additive_iff_homogeneous(f):
    n, m = f.dom, f.cod
    verdict = is_linear_map(f, Trivialization.identity(n), Trivialization.identity(m))
    assert verdict == is_additive(f) == is_homogeneous_linear(f)


def _matrix_polynomial(m, cs):
    """``Σ cᵢ·Mⁱ``; these commute with ``M``, so they are linear under its trivialization."""
    n = len(m)
    out = [[Q(0)] * n for _ in range(n)]
    power = identity_matrix(n)
    for c in cs:
        out = [[x + c * y for x, y in zip(r1, r2)] for r1, r2 in zip(out, power)]
        power = matmul(power, m)
    return matrix_map(out, n)


@given(trivializations(), st.lists(st.integers(-3, 3), min_size=1, max_size=3),
       st.lists(st.integers(-3, 3), min_size=1, max_size=3))
def test_linear_maps_closed_under_composition(t, cf, cg):
    f, g = _matrix_polynomial(t.matrix, cf), _matrix_polynomial(t.matrix, cg)
    assert is_linear_map(f, t, t) and is_linear_map(g, t, t)
    assert is_linear_map(g @ f, t, t)


# differential objects ------------------------------------------------------


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_standard_differential_object(n):
    assert check_differential_object(DifferentialObject.standard(n)).passed


def test_tau_add_axioms_track_additivity_of_phat():
    additive = diff_from_lin(Trivialization.from_matrix([[2, 1], [0, 1]]))
    assert check_differential_object(additive).passed
    # invertible cone but p̂ not additive in the tangent: (b, v) ↦ v + b²
    bent = DifferentialObject(1, parse_map("[x1 + x0^2] : 2 -> 1"), map_zero(0, 1), addition(1),
                              inverse=parse_map("[x0; x1 - x0^2] : 2 -> 2"))
    report = check_differential_object(bent)
    assert report.law("product-cone").passed
    assert not report.law("tau-add-zero").passed
    assert not report.law("tau-add-plus").passed


def test_non_additive_plus_breaks_cmon_linearity():
    d = DifferentialObject(1, projection([1, 1], 1), map_zero(0, 1), parse_map("[x0 + x1 + x0*x1] : 2 -> 1"))
    report = check_differential_object(d)
    assert report.law("monoid").passed
    failed = report.law("cmon-lin-plus")
    assert not failed.passed
    # T(+)(b1, b2, u1, u2) has tangent u1 + u2 + b2·u1 + b1·u2; the other side only sees u1, u2
    assert failed.counterexample.lhs == "[x0*x3 + x1*x2 + x2 + x3] : 4 -> 1"
    assert failed.counterexample.rhs == "[x2*x3 + x2 + x3] : 4 -> 1"


def test_degenerate_cone_fails():
    d = DifferentialObject(1, map_zero(2, 1), map_zero(0, 1), addition(1))
    assert not check_differential_object(d).law("product-cone").passed
    with pytest.raises(TrivializationError):
        lin_from_diff(d)


def test_conversion_examples():
    assert diff_from_lin(Trivialization.identity(2)).phat == projection([2, 2], 1)
    t = Trivialization.from_matrix([[2]])
    d = diff_from_lin(t)
    assert d.phat == parse_map("[2*x1] : 2 -> 1")
    assert lin_from_diff(d) == t
    assert diff_from_lin(lin_from_diff(d)) == d


def test_diff_from_lin_rejects_bad_monoid():
    with pytest.raises(TrivializationError):
        diff_from_lin(Trivialization.identity(1), plus=projection([1, 1], 0))


@given(trivializations())
def test_round_trips(t):
    d = diff_from_lin(t)
    assert lin_from_diff(d) == t
    assert diff_from_lin(lin_from_diff(d)) == d
    assert check_differential_object(d).passed


def test_diff_linear_examples():
    std = DifferentialObject.standard(1)
    assert is_diff_linear_map(parse_map("[-5*x0] : 1 -> 1"), std, std)
    assert not is_diff_linear_map(X2, std, std)


@pytest.mark.parametrize("trial", range(100))
def test_diff_linear_agrees_with_linear(trial):
    params = GenParams(max_dim=3, max_degree=2, seed=7)
    a, b = gen_dim(params, trial, "a"), gen_dim(params, trial, "b")
    tA = Trivialization.from_matrix(gen_invertible_matrix(params, trial, a, "A"))
    tB = Trivialization.from_matrix(gen_invertible_matrix(params, trial, b, "B"))
    f = gen_polymap(params, trial, a, b, "f")
    assert is_diff_linear_map(f, diff_from_lin(tA), diff_from_lin(tB)) == is_linear_map(f, tA, tB)


# the induced derivative ----------------------------------------------------


@given(polymaps())
def test_dT_with_identity_trivializations_is_D(f):
    tA, tB = Trivialization.identity(f.dom), Trivialization.identity(f.cod)
    assert dT_derivative(f, tA, tB) == forward_section_D(f)


def test_dT_rescaled_identity():
    fib = dT_derivative(parse_map("[x0] : 1 -> 1"), Trivialization.from_matrix([[2]]), Trivialization.identity(1)).fib
    assert fib == parse_map("[1/2*x1] : 2 -> 1")


def test_dT_suite_passes():
    report = dT_axiom_suite()
    assert report.passed
    assert report.law("CDC.5").trials == 100


# products ------------------------------------------------------------------


def test_product_of_identities_is_identity():
    assert lin_product(Trivialization.identity(2), Trivialization.identity(1)) == Trivialization.identity(3)


@given(st.data())
def test_product_projections_are_linear(data):
    t1, t2 = data.draw(trivializations()), data.draw(trivializations())
    t = lin_product(t1, t2)
    a, b = t1.object, t2.object
    assert is_linear_map(projection([a, b], 0), t, t1)
    assert is_linear_map(projection([a, b], 1), t, t2)


@given(st.data())
def test_pairing_of_linear_maps_is_linear(data):
    t0, t1 = data.draw(trivializations()), data.draw(trivializations())
    p = lin_product(t0, t1)
    # projections out of a product are linear, so pairing them in any order is too
    a, b = t0.object, t1.object
    f = projection([a, b], 0)
    g = projection([a, b], 1)
    assert is_linear_map(map_pair(f, g), p, lin_product(t0, t1))
    assert is_linear_map(map_pair(g, f), p, lin_product(t1, t0))
