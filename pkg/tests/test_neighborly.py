import itertools
import json
from math import comb, prod

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conelift.cones import Orthant
from conelift.errors import CertificateRejected
from conelift.neighborly import (NeighborlinessCertificate, custom_certificate, moment_certificate, moment_family,
                                 moment_ray, pointeval_certificate, pointeval_family, pointeval_ray,
                                 verify_neighborly)
from conelift.numerics import svec


# ---------------------------------------------------------------- building blocks

def test_moment_ray_examples():
    np.testing.assert_allclose(moment_ray(1, 1), 0.5 * np.ones((2, 2)))
    v = np.array([1.0, 2.0, 4.0])
    np.testing.assert_allclose(moment_ray(2, 2), np.outer(v, v) / 21)
    for k, i in itertools.product(range(1, 5), range(1, 20)):
        assert np.trace(moment_ray(k, i)) == pytest.approx(1.0)


def test_moment_ray_guards():
    with pytest.raises(ValueError):
        moment_ray(2, 51)
    with pytest.raises(ValueError):
        moment_ray(0, 1)
    with pytest.raises(OverflowError):
        moment_ray(10, 50)


def test_moment_certificate_examples():
    f = moment_certificate(2, {1, 2})
    np.testing.assert_array_equal(f, np.outer([2, -3, 1], [2, -3, 1]))
    v3 = np.array([1, 3, 9])
    assert v3 @ f @ v3 == 4.0
    assert np.array([1, 3]) @ moment_certificate(1, {3}) @ np.array([1, 3]) == 0.0
    with pytest.raises(ValueError):
        moment_certificate(2, {1})


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3), st.data())
def test_moment_pairing_is_squared_vanishing_polynomial(k, data):
    W = data.draw(st.sets(st.integers(1, 20), min_size=k, max_size=k))
    i = data.draw(st.integers(1, 20))
    F = moment_certificate(k, W).astype(np.int64)
    v = np.array([i ** a for a in range(k + 1)], dtype=np.int64)
    assert int(v @ F @ v) == prod(i - w for w in W) ** 2


def test_pointeval_certificate_examples():
    q = pointeval_certificate(1, {2})
    assert q(2) == 0.0 and q(3) == 1.0
    assert pointeval_certificate(2, {1, 4})(2) == 4.0
    q = pointeval_certificate(2, {3, 5})
    assert all(q(i) > 0 for i in range(1, 20) if i not in (3, 5))
    assert np.linalg.norm(pointeval_ray(2, 7)) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        pointeval_certificate(2, {1})


# ---------------------------------------------------------------- verification

def test_moment_family_passes_exactly():
    cert = moment_family(2, 10)
    assert len(cert.certs) == 45
    rep = verify_neighborly(cert)
    assert rep.passed and rep.exact and not rep.partial
    assert rep.checked == 45 * 10


def test_pointeval_family_passes():
    cert = pointeval_family(3, 8)
    assert len(cert.certs) == 56
    rep = verify_neighborly(cert)
    assert rep.passed and rep.exact


def test_tampered_certificate_is_reported():
    cert = moment_family(2, 6)
    W = frozenset({2, 5})
    cert.certs[W] = -cert.certs[W]
    rep = verify_neighborly(cert)
    assert not rep.passed
    kinds = {(tuple(v["W"]), v["kind"]) for v in rep.violations}
    assert ((2, 5), "dual-membership") in kinds
    assert ((2, 5), "not-positive") in kinds
    assert all(tuple(v["W"]) == (2, 5) for v in rep.violations)


def test_wrong_subset_certificate_is_reported():
    cert = moment_family(1, 4)
    cert.certs[frozenset({1})] = svec(moment_certificate(1, {2}))
    rep = verify_neighborly(cert)
    bad = {(v["label"], v["kind"]) for v in rep.violations}
    assert bad == {(1, "nonzero-on-W"), (2, "not-positive")}


def test_tampered_ray_is_rejected():
    cert = moment_family(1, 3)
    cert.rays[2] = cert.rays[3]
    with pytest.raises(CertificateRejected):
        verify_neighborly(cert)


def test_missing_certificates():
    cert = moment_family(2, 5)
    del cert.certs[frozenset({1, 2})]
    with pytest.raises(CertificateRejected):
        verify_neighborly(cert)
    rep = verify_neighborly(cert, allow_partial=True)
    assert rep.passed and rep.partial


def test_custom_two_point_family():
    cert = custom_certificate(1, {"a": [1.0, 0.0], "b": [0.0, 1.0]},
                              {frozenset({"a"}): [0.0, 1.0], frozenset({"b"}): [1.0, 0.0]})
    assert isinstance(cert.cone, Orthant)
    assert verify_neighborly(cert).passed
    cert.certs[frozenset({"a"})] = np.array([0.0, -1.0])
    assert not verify_neighborly(cert).passed


@settings(max_examples=50, deadline=None)
@given(st.floats(1e-3, 1e3), st.integers(0, 1000))
def test_custom_verdict_scale_invariant(lam, seed):
    rng = np.random.default_rng(seed)
    n = 4
    rays = {i: np.eye(n)[i] for i in range(n)}
    certs = {}
    for i, j in itertools.combinations(range(n), 2):
        f = rng.uniform(0.5, 2.0, n)
        f[[i, j]] = 0.0
        certs[frozenset({i, j})] = f
    if rng.random() < 0.5:
        certs[frozenset({0, 1})][2] = 0.0     # breaks positivity on label 2
    base = verify_neighborly(custom_certificate(2, rays, certs)).passed
    scaled = {W: lam * f for W, f in certs.items()}
    assert verify_neighborly(custom_certificate(2, rays, scaled)).passed == base


@pytest.mark.parametrize("family", ["moment", "pointeval"])
def test_verdict_stable_across_tolerance_decade(family):
    cert = moment_family(2, 8) if family == "moment" else pointeval_family(2, 8)
    verdicts = {verify_neighborly(cert, tol=t).passed for t in (1e-10, 1e-9, 1e-8)}
    assert verdicts == {True}
    W = frozenset({1, 2})
    cert.certs[W] = cert.certs[W] * -1.0
    verdicts = {verify_neighborly(cert, tol=t).passed for t in (1e-10, 1e-9, 1e-8)}
    assert verdicts == {False}


def test_exact_check_sees_tiny_positive_values():
    # labels far apart make normalized pairings tiny relative to |f| |v|; exactness keeps them positive
    rep = verify_neighborly(moment_family(3, 15))
    assert rep.passed and rep.exact and rep.checked == comb(15, 3) * 15


def test_certificate_json_round_trip():
    cert = moment_family(2, 5)
    back = NeighborlinessCertificate.from_json(json.loads(json.dumps(cert.to_json())))
    assert back.family == "psd-moment" and back.labels == cert.labels
    assert set(back.certs) == set(cert.certs)
    assert verify_neighborly(back).passed


def test_certificate_from_json_errors():
    with pytest.raises(ValueError):
        NeighborlinessCertificate.from_json({"k": 1})
    with pytest.raises(ValueError):
        NeighborlinessCertificate(1, "bogus", [1], {1: [1.0]}, {})
