import itertools
import json

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from conelift.cones import (PSD, DerivativePSD, EmptyFace, Exponential, Hyperbolicity, Orthant, OrthantFace,
                            Polyhedral, Product, SecondOrder, chain_length, chain_witness, cone_from_json,
                            cone_to_json, dual_member, face_chain_length, face_eq, face_from_json, face_join,
                            face_leq, face_to_json, implicit_equalities, lineality_basis, member, minimal_face,
                            point, project, project_dual, relint_member, subset_select)
from conelift.errors import BudgetExceeded, DualOracleUnavailable, NotInConeError
from conelift.numerics import MultiPoly, det_poly, svec, triu_vec


def psd_point(v):
    v = np.asarray(v, dtype=float)
    return svec(np.outer(v, v))


# ---------------------------------------------------------------- membership

def test_orthant_membership():
    K = Orthant(3)
    assert member(K, [1, 0, 2]) and not relint_member(K, [1, 0, 2])
    assert relint_member(K, [1, 1, 2])
    assert not member(K, [1, -1, 0])


def test_psd_membership_accepts_matrices():
    K = PSD(2)
    X = np.array([[1.0, 1.0], [1.0, 1.0]])
    assert member(K, X) and not relint_member(K, X)
    assert relint_member(K, np.eye(2))
    assert not member(K, np.diag([1.0, -1.0]))
    with pytest.raises(ValueError):
        point(K, np.eye(3))


def test_second_order_membership():
    K = SecondOrder(3)
    assert member(K, [5, 3, 4]) and not relint_member(K, [5, 3, 4])
    assert relint_member(K, [6, 3, 4])
    assert not member(K, [4, 3, 4])


def test_exponential_membership():
    K = Exponential()
    # y exp(x / y) = 1 <= 2
    assert member(K, [0, 2, 1]) and relint_member(K, [0, 2, 1])
    assert not member(K, [1, 2, 1])          # e > 2
    assert member(K, [-1, 0, 0])             # closure: y = 0, x <= 0, t >= 0
    assert not member(K, [0, 1, -1])


def test_polyhedral_membership_and_lineality():
    # x1 >= 0, x2 >= 0 in R^3; x3 is free
    K = Polyhedral([[1, 0, 0], [0, 1, 0]])
    assert member(K, [1, 0, -5]) and not relint_member(K, [1, 0, -5])
    assert relint_member(K, [1, 2, -5])
    np.testing.assert_allclose(np.abs(lineality_basis(K)), [[0], [0], [1]])


def test_polyhedral_implicit_equalities():
    # x1 >= 0 and -x1 >= 0 force x1 = 0
    K = Polyhedral([[1, 0], [-1, 0], [0, 1]])
    assert implicit_equalities(K) == frozenset({0, 1})
    assert relint_member(K, [0, 1])


def test_product_membership_is_conjunction():
    K = Product((Orthant(2), PSD(2)))
    assert member(K, np.r_[1, 0, svec(np.eye(2))])
    assert not member(K, np.r_[1, 0, svec(np.diag([1, -1]))])
    assert not member(K, np.r_[-1, 0, svec(np.eye(2))])


def test_dual_membership():
    assert dual_member(Orthant(2), [1, 0])
    assert dual_member(PSD(2), np.eye(2))
    # the dual of {x1 >= 0, x2 - x1 >= 0} is generated by (1, 0) and (-1, 1)
    K = Polyhedral([[1, 0], [-1, 1]])
    assert dual_member(K, [0, 1]) and dual_member(K, [-1, 1])
    assert not dual_member(K, [-1, 0])
    # exponential dual: (u, v, w) with u < 0 and -u exp(w / u - 1) <= v
    assert dual_member(Exponential(), [-1, 1, 0])
    assert not dual_member(Exponential(), [-1, 0.1, 0])
    with pytest.raises(DualOracleUnavailable):
        dual_member(Hyperbolicity(det_poly(2), triu_vec(np.eye(2))), [1, 0, 1])
    with pytest.raises(DualOracleUnavailable):
        dual_member(Polyhedral(np.eye(21)), np.ones(21))


def test_projection_is_idempotent_and_moreau():
    rng = np.random.default_rng(0)
    for K in (Orthant(3), SecondOrder(3), PSD(2), Polyhedral([[1, 0, 0], [1, 1, 0], [0, 1, 1]])):
        x = rng.standard_normal(K.dim)
        p = project(K, x)
        assert member(K, p, tol=1e-8)
        np.testing.assert_allclose(project(K, p), p, atol=1e-9)
        # x = P_K(x) - P_{K*}(-x)
        np.testing.assert_allclose(p - project_dual(K, -x), x, atol=1e-8)


# ---------------------------------------------------------------- faces

def test_minimal_face_examples():
    F = minimal_face(Orthant(4), [0, 3, 0, 1])
    assert F.support == frozenset({1, 3})
    v = np.array([1.0, 2.0, 2.0])
    G = minimal_face(PSD(3), np.outer(v, v))
    assert G.rank == 1
    np.testing.assert_allclose(np.abs(G.basis[:, 0]), v / 3)
    H = minimal_face(PSD(3), np.diag([1.0, 1.0, 0.0]))
    assert H.rank == 2 and abs(H.basis[2]).max() < 1e-12


def test_minimal_face_rejects_outside():
    with pytest.raises(NotInConeError):
        minimal_face(Orthant(2), [1, -1])


def test_soc_faces():
    K = SecondOrder(3)
    assert minimal_face(K, [0, 0, 0]).kind == "zero"
    assert minimal_face(K, [5, 3, 4]).kind == "ray"
    assert minimal_face(K, [6, 3, 4]).kind == "full"
    ray = minimal_face(K, [5, 3, 4])
    assert face_eq(K, ray, minimal_face(K, [10, 6, 8]))
    assert not face_leq(K, ray, minimal_face(K, [5, 4, 3]))


def test_face_join_examples():
    K = Orthant(3)
    F = face_join(K, minimal_face(K, [1, 1, 0]), minimal_face(K, [0, 1, 1]))
    assert F.support == frozenset({0, 1, 2})
    P = PSD(3)
    e1, e2 = np.eye(3)[0], np.eye(3)[1]
    J = face_join(P, minimal_face(P, psd_point(e1)), minimal_face(P, psd_point(e2)))
    assert face_eq(P, J, minimal_face(P, np.diag([1.0, 1.0, 0.0])))
    assert face_join(K, EmptyFace(), F) is F


def test_face_leq_examples():
    K = Orthant(3)
    assert face_leq(K, minimal_face(K, [1, 0, 0]), minimal_face(K, [1, 0, 1]))
    P = PSD(2)
    e1 = psd_point([1, 0])
    assert face_leq(P, minimal_face(P, e1), minimal_face(P, np.eye(2)))
    assert not face_leq(P, minimal_face(P, psd_point([1, 1])), minimal_face(P, e1))
    with pytest.raises(TypeError):
        face_leq(K, OrthantFace(frozenset(), np.zeros(3)), minimal_face(P, e1))


def cone_points():
    """Strategy for (cone, list of points) pairs with small-integer data."""
    ints = st.integers(-2, 2)

    def orthant(n):
        return st.lists(st.lists(st.integers(0, 2), min_size=n, max_size=n), min_size=3, max_size=3) \
            .map(lambda pts: (Orthant(n), [np.array(p, dtype=float) for p in pts]))

    def psd(k):
        vec = st.lists(ints, min_size=k, max_size=k)
        factor = st.lists(vec, min_size=0, max_size=2)
        return st.lists(factor, min_size=3, max_size=3).map(
            lambda fs: (PSD(k), [sum((psd_point(v) for v in f), np.zeros(k * (k + 1) // 2)) for f in fs]))

    def soc():
        def lift(v, on_boundary):
            v = np.array(v, dtype=float)
            r = np.linalg.norm(v)
            return np.r_[r if on_boundary else r + 1.0, v]
        pt = st.tuples(st.lists(ints, min_size=2, max_size=2), st.booleans()).map(lambda a: lift(*a))
        return st.lists(pt, min_size=3, max_size=3).map(lambda pts: (SecondOrder(3), pts))

    def polyhedral():
        A = np.array([[1, 0, 0], [0, 1, 0], [1, 1, -1], [0, 0, 1]], dtype=float)
        K = Polyhedral(A)
        gens = np.array([[1, 0, 0], [0, 1, 0], [1, 0, 1], [0, 1, 1], [0, 0, 0]], dtype=float)
        coeff = st.lists(st.integers(0, 2), min_size=5, max_size=5)
        return st.lists(coeff, min_size=3, max_size=3).map(
            lambda cs: (K, [np.array(c, dtype=float) @ gens for c in cs]))

    return st.one_of(orthant(3), orthant(5), psd(2), psd(3), soc(), polyhedral())


@settings(max_examples=120, deadline=None)
@given(cone_points(), st.floats(0.1, 50.0))
def test_minimal_face_scale_invariant(data, lam):
    K, pts = data
    x = pts[0]
    assert face_eq(K, minimal_face(K, x), minimal_face(K, lam * x))


@settings(max_examples=120, deadline=None)
@given(cone_points())
def test_face_join_matches_face_of_sum(data):
    K, (x, y, _) = data
    Fx, Fy = minimal_face(K, x), minimal_face(K, y)
    J = face_join(K, Fx, Fy)
    assert face_eq(K, J, minimal_face(K, x + y))
    assert face_eq(K, J, face_join(K, Fy, Fx))
    assert face_eq(K, face_join(K, Fx, Fx), Fx)
    assert face_leq(K, Fx, J) and face_leq(K, Fy, J)


@settings(max_examples=120, deadline=None)
@given(cone_points())
def test_face_leq_is_partial_order(data):
    K, pts = data
    F = [minimal_face(K, p) for p in pts]
    for a in F:
        assert face_leq(K, a, a)
    for a, b in itertools.permutations(F, 2):
        if face_leq(K, a, b) and face_leq(K, b, a):
            assert face_chain_length(K, a) == face_chain_length(K, b)
    for a, b, c in itertools.permutations(F, 3):
        if face_leq(K, a, b) and face_leq(K, b, c):
            assert face_leq(K, a, c)


@settings(max_examples=80, deadline=None)
@given(cone_points())
def test_strict_faces_have_shorter_chains(data):
    K, pts = data
    F = [minimal_face(K, p) for p in pts]
    for a, b in itertools.permutations(F, 2):
        if face_leq(K, a, b) and not face_leq(K, b, a):
            assert face_chain_length(K, a).value < face_chain_length(K, b).value
    top = minimal_face(K, sum(pts))
    assert face_chain_length(K, top).value <= chain_length(K).value


# ---------------------------------------------------------------- chain lengths

def test_chain_length_closed_forms():
    assert chain_length(PSD(3)) == (4, True)
    assert chain_length(SecondOrder(4)) == (3, True)
    assert chain_length(SecondOrder(1)) == (2, True)
    assert chain_length(Exponential()) == (4, False)
    assert chain_length(DerivativePSD(3, 0)) == (4, True)
    assert chain_length(DerivativePSD(3, 1)) == (3, False)
    assert chain_length(Product((Orthant(2), PSD(2)))) == (5, True)


def test_hyperbolicity_chain_bounds():
    p = det_poly(3)
    e = triu_vec(np.eye(3))
    assert chain_length(Hyperbolicity(p, e)) == (4, False)
    assert chain_length(Hyperbolicity(p, e, min_ray_rank=1)) == (4, False)
    assert chain_length(Hyperbolicity(p, e, min_ray_rank=2)) == (3, False)
    x = MultiPoly.variable(1, 0)
    assert chain_length(Hyperbolicity(x ** 3, [1.0])).value == 2


def test_polyhedral_chain_matches_closed_form():
    for n in range(1, 7):
        assert chain_length(Polyhedral(np.eye(n))) == (n + 1, True)


def test_polyhedral_chain_square_pyramid():
    # cone over a square: faces 0 < ray < 2-face < cone
    A = np.array([[1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]], dtype=float)
    assert chain_length(Polyhedral(A)) == (4, True)


def test_polyhedral_chain_with_lineality():
    K = Polyhedral([[1, 0, 0], [0, 1, 0]])
    assert chain_length(K) == (3, True)
    ch = chain_witness(K, 3)
    assert len(ch) == 3


def test_polyhedral_budget():
    with pytest.raises(BudgetExceeded):
        chain_length(Polyhedral(np.eye(11)))


def brute_product_chain(sizes):
    """Longest chain in the lattice of faces of a product of orthants, by enumeration."""
    faces = list(itertools.product(*[
        [frozenset(c) for r in range(n + 1) for c in itertools.combinations(range(n), r)] for n in sizes]))
    faces.sort(key=lambda f: sum(len(s) for s in f))
    best = {}
    for f in faces:
        below = [best[g] for g in best if g != f and all(a <= b for a, b in zip(g, f))]
        best[f] = 1 + max(below, default=0)
    return max(best.values())


def test_product_rule_against_enumeration():
    assert brute_product_chain((2, 3)) == 6
    assert chain_length(Product((Orthant(2), Orthant(3)))) == (6, True)
    assert brute_product_chain((1, 1, 2)) == chain_length(Product((Orthant(1), Orthant(1), Orthant(2)))).value


def test_chain_witness_examples():
    K = Orthant(3)
    ch = chain_witness(K, 4)
    assert [sorted(F.support) for F in ch] == [[], [0], [0, 1], [0, 1, 2]]
    P = PSD(4)
    ch = chain_witness(P, 5)
    assert [F.rank for F in ch] == [0, 1, 2, 3, 4]
    for lo, hi in zip(ch, ch[1:]):
        assert face_leq(P, lo, hi) and not face_leq(P, hi, lo)
    with pytest.raises(ValueError):
        chain_witness(PSD(2), 4)


def test_chain_witness_product():
    K = Product((Orthant(1), PSD(2)))
    ch = chain_witness(K, 4)
    dims = [sum(len(p.support) if isinstance(p, OrthantFace) else p.rank for p in F.parts) for F in ch]
    assert dims == [0, 1, 2, 3]


# ---------------------------------------------------------------- subset selection

def test_subset_select_examples():
    K = Orthant(3)
    assert subset_select(K, [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]) == [3]
    P = PSD(2)
    pts = [psd_point([1, 0]), psd_point([0, 1]), psd_point([1, 1])]
    I = subset_select(P, pts)
    assert len(I) <= 2
    assert minimal_face(P, sum(pts[i] for i in I)).rank == 2
    assert subset_select(K, [[1, 2, 3]]) == [0]
    assert subset_select(K, []) == []
    with pytest.raises(NotInConeError):
        subset_select(K, [[1, -1, 0]])


@settings(max_examples=100, deadline=None)
@given(cone_points())
def test_subset_select_preserves_face(data):
    K, pts = data
    total = minimal_face(K, sum(pts))
    I = subset_select(K, pts)
    part = sum((pts[i] for i in I), np.zeros(K.dim))
    assert face_eq(K, minimal_face(K, part), total)
    assert len(I) <= max(face_chain_length(K, total).value - 1, 0)
    # inclusion-minimal: dropping any index changes the face
    for i in I:
        rest = sum((pts[j] for j in I if j != i), np.zeros(K.dim))
        assert not face_eq(K, minimal_face(K, rest), total)


# ---------------------------------------------------------------- JSON

@pytest.mark.parametrize("K", [
    Orthant(3), SecondOrder(4), PSD(3), Exponential(), Polyhedral([[1.0, 2.0], [0.0, 1.0]]),
    Hyperbolicity(det_poly(2), triu_vec(np.eye(2)), 1), DerivativePSD(3, 1),
    Product((Orthant(1), PSD(2))),
])
def test_cone_json_round_trip(K):
    K2 = cone_from_json(json.loads(json.dumps(cone_to_json(K))))
    assert cone_to_json(K2) == cone_to_json(K)


def test_face_json_round_trip():
    K = Product((Orthant(2), PSD(2), SecondOrder(3)))
    x = np.r_[0, 1, psd_point([1, 1]), 5, 3, 4]
    F = minimal_face(K, x)
    G = face_from_json(K, json.loads(json.dumps(face_to_json(F))))
    assert face_eq(K, F, G)


def test_cone_from_json_errors():
    with pytest.raises(ValueError):
        cone_from_json({"kind": "torus"})
    with pytest.raises(ValueError):
        cone_from_json({"kind": "psd"})
    with pytest.raises(ValueError):
        Polyhedral([[1.0, 0.0]], lineality=[[1.0, 0.0]])
