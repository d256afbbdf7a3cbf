import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial import Polynomial

from conelift import config
from conelift.errors import ConvergenceError, HyperbolicityDirectionError, NotRealRootedError
from conelift.numerics import (MultiPoly, cluster_roots, det_poly, feasible_point, max_support_point,
                               null_space, orth, poly_from_roots, poly_restrict, principal_minor_poly,
                               real_roots, smat, svec, sym_eig, sym_rank, triu_mat, triu_vec)


def rand_sym(rng, k, scale=1.0):
    A = rng.standard_normal((k, k)) * scale
    return (A + A.T) / 2


# ---------------------------------------------------------------- sym_eig

def test_sym_eig_diagonal():
    w, Q = sym_eig(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_allclose(w, [3, 2, 1])
    np.testing.assert_allclose(np.abs(Q), np.eye(3)[:, [0, 2, 1]])


def test_sym_eig_2x2():
    w, _ = sym_eig([[2.0, 1.0], [1.0, 2.0]])
    np.testing.assert_allclose(w, [3.0, 1.0], atol=1e-14)


def test_sym_eig_rejects_nonsymmetric():
    with pytest.raises(ValueError):
        sym_eig([[1.0, 2.0], [0.0, 1.0]])


def test_sym_eig_sweep_cap():
    rng = np.random.default_rng(3)
    with pytest.raises(ConvergenceError):
        sym_eig(rand_sym(rng, 8), max_sweeps=1)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), st.integers(0, 10_000))
def test_sym_eig_matches_lapack(k, seed):
    rng = np.random.default_rng(seed)
    X = rand_sym(rng, k, scale=10.0)
    w, Q = sym_eig(X)
    np.testing.assert_allclose(np.sort(w), np.linalg.eigvalsh(X), atol=1e-10 * max(1, np.abs(w).max()))
    np.testing.assert_allclose(Q.T @ Q, np.eye(k), atol=1e-12)
    np.testing.assert_allclose(Q @ np.diag(w) @ Q.T, X, atol=1e-10 * max(1, np.abs(X).max()))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(0, 10_000))
def test_sym_eig_conjugation_invariant(k, seed):
    rng = np.random.default_rng(seed)
    X = rand_sym(rng, k)
    U, _ = np.linalg.qr(rng.standard_normal((k, k)))
    np.testing.assert_allclose(sym_eig(U @ X @ U.T)[0], sym_eig(X)[0], atol=1e-11)


def test_sym_rank():
    v = np.array([1.0, 2.0, 2.0])
    assert sym_rank(np.outer(v, v)) == 1
    assert sym_rank(np.zeros((3, 3))) == 0
    assert sym_rank(np.eye(4)) == 4


# ---------------------------------------------------------------- svec / triu

def test_svec_is_isometry():
    rng = np.random.default_rng(0)
    X, Y = rand_sym(rng, 4), rand_sym(rng, 4)
    assert svec(X) @ svec(Y) == pytest.approx(np.trace(X @ Y))
    np.testing.assert_allclose(smat(svec(X)), X)
    np.testing.assert_allclose(triu_mat(triu_vec(X)), X)


def test_smat_rejects_non_triangular_length():
    with pytest.raises(ValueError):
        smat(np.zeros(5))


def test_orth_and_null_space():
    A = np.array([[1.0, 1.0, 0.0], [2.0, 2.0, 0.0]])
    assert orth(A).shape == (2, 1)
    N = null_space(A)
    assert N.shape == (3, 2)
    np.testing.assert_allclose(A @ N, 0, atol=1e-14)


# ---------------------------------------------------------------- real roots

def test_real_roots_simple():
    np.testing.assert_allclose(real_roots(Polynomial([-1, 0, 1])), [-1, 1], atol=1e-12)


def test_real_roots_multiple():
    np.testing.assert_allclose(real_roots(poly_from_roots([1, 1, 2])), [1, 1, 2], atol=1e-9)


def test_real_roots_complex_pair_rejected():
    with pytest.raises(NotRealRootedError) as exc:
        real_roots(Polynomial([1, 0, 1]))
    assert exc.value.n_missing == 2


def test_real_roots_edge_cases():
    assert real_roots(Polynomial([5.0])).size == 0
    with pytest.raises(ValueError):
        real_roots(Polynomial([0.0]))


def test_real_roots_accepts_coefficient_lists():
    # ascending coefficients of (t - 2)(t + 3)
    np.testing.assert_allclose(real_roots([-6, 1, 1]), [-3, 2], atol=1e-12)


@st.composite
def root_sets(draw):
    n_distinct = draw(st.integers(1, 5))
    centres = draw(st.lists(st.integers(-20, 20), min_size=n_distinct, max_size=n_distinct, unique=True))
    mults = draw(st.lists(st.integers(1, 3), min_size=n_distinct, max_size=n_distinct))
    roots = [c / 4 for c, m in zip(centres, mults) for _ in range(m)]
    if len(roots) > 10:
        roots = roots[:10]
    return sorted(roots)


@settings(max_examples=150, deadline=None)
@given(root_sets(), st.floats(0.25, 4.0))
def test_real_roots_round_trip(roots, lead):
    found = real_roots(poly_from_roots(roots, lead))
    np.testing.assert_allclose(found, roots, atol=1e-7 * max(1, max(abs(r) for r in roots)))


def test_cluster_roots():
    assert cluster_roots([1.0, 1.0 + 1e-12, 2.0]) == [(pytest.approx(1.0), 2), (2.0, 1)]


# ---------------------------------------------------------------- MultiPoly

def test_multipoly_arithmetic_exact():
    x, y = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    p = (x + y) ** 2 - x * x - 2 * x * y
    assert p == y * y
    assert (x - x).is_zero()
    assert p.is_homogeneous() and not (p + 1).is_homogeneous()
    assert (x * y + 3)([2.0, 5.0]) == 13.0


def test_multipoly_json_round_trip():
    p = det_poly(3)
    q = MultiPoly.from_json(p.to_json())
    assert q == p


def test_det_poly_evaluates_determinant():
    rng = np.random.default_rng(1)
    for k in (1, 2, 3, 4):
        X = rand_sym(rng, k)
        assert det_poly(k)(triu_vec(X)) == pytest.approx(np.linalg.det(X), abs=1e-12)


def test_principal_minor_poly_trace():
    X = np.diag([1.0, 2.0, 3.0])
    assert principal_minor_poly(3, 1)(triu_vec(X)) == pytest.approx(6.0)
    assert principal_minor_poly(3, 2)(triu_vec(X)) == pytest.approx(11.0)


def test_det_poly_range():
    with pytest.raises(ValueError):
        det_poly(5)


# ---------------------------------------------------------------- poly_restrict

def test_poly_restrict_matches_characteristic_polynomial():
    rng = np.random.default_rng(2)
    X = rand_sym(rng, 3)
    q = poly_restrict(det_poly(3), triu_vec(np.eye(3)), triu_vec(X))
    np.testing.assert_allclose(q.coef, np.poly(np.linalg.eigvalsh(X))[::-1], atol=1e-10)


def test_poly_restrict_product_convolves():
    rng = np.random.default_rng(5)
    x1, x2, x3 = (MultiPoly.variable(3, i) for i in range(3))
    p, q = x1 * x2 + x3 * x3, x1 + x2 + x3
    e = np.array([1.0, 1.0, 1.0])
    x = rng.standard_normal(3)
    lhs = poly_restrict(p * q, e, x).coef
    rhs = (poly_restrict(p, e, x) * poly_restrict(q, e, x)).coef
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.1, 10.0))
def test_poly_restrict_homogeneity(seed, lam):
    # p(t e - lam x) = lam^d p((t / lam) e - x)
    rng = np.random.default_rng(seed)
    p, e = det_poly(2), triu_vec(np.eye(2))
    x = rng.standard_normal(3)
    a = poly_restrict(p, e, lam * x)
    b = poly_restrict(p, e, x)
    scaled = b.coef * lam ** (2 - np.arange(3))
    np.testing.assert_allclose(a.coef, scaled, atol=1e-9 * max(1, lam ** 2))


def test_poly_restrict_bad_direction():
    x1 = MultiPoly.variable(1, 0)
    with pytest.raises(HyperbolicityDirectionError):
        poly_restrict(x1, [-1.0], [0.5])
    with pytest.raises(ValueError):
        poly_restrict(x1 + 1, [1.0], [0.5])


# ---------------------------------------------------------------- LPs

def test_feasible_point_planted():
    rng = np.random.default_rng(4)
    x0 = rng.standard_normal(4)
    A = rng.standard_normal((10, 4))
    b = A @ x0 - rng.uniform(0.1, 1.0, 10)
    x = feasible_point(A, b, strict_rows=range(10))
    assert x is not None and np.all(A @ x >= b)


def test_feasible_point_strictly_infeasible():
    assert feasible_point([[1.0], [-1.0]], [0.0, 0.0], strict_rows=[0, 1]) is None
    np.testing.assert_allclose(feasible_point([[1.0]], [0.0], strict_rows=[0]), [1.0])


def test_max_support_point():
    # x1 >= 0, x2 >= 0, -x1 >= 0: only the second row can be positive
    A = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]])
    x, pos = max_support_point(A)
    assert list(pos) == [False, True, False]
    assert np.all(A @ x >= -1e-9)


def test_config_override_is_scoped():
    before = config.current().tol
    with config.using(tol=1e-6):
        assert config.current().tol == 1e-6
    assert config.current().tol == before
    with pytest.raises(ValueError):
        config.set_config(config.current().replace(tol=0.0))
