"""Neighborliness certificates.

A cone is k-neighborly with respect to a set ``V`` of extreme rays when every
k-subset ``W`` of ``V`` is cut out by a dual functional ``f_W``: zero on
``W`` and strictly positive on the rest of ``V``.

Two explicit families are built here:

* ``psd-moment``: rays ``v_i v_i^T / |v_i|^2`` of the PSD cone of order
  ``k + 1`` with ``v_i = (1, i, ..., i^k)``, and ``f_W = c c^T`` where ``c``
  holds the coefficients of ``prod_{i in W} (t - i)``.  Then
  ``<f_W, v_i v_i^T> = p_W(i)^2`` with ``p_W = prod (t - i)``.
* ``point-eval``: normalized point evaluations ``(1, i, ..., i^{2d})`` of the
  dual of the nonnegative univariate polynomials of degree ``2d``, separated by
  ``q_W = prod_{i in W} (t - i)^2``.

Both are integer data, and their sign patterns are decided in exact integer
arithmetic regenerated from the integer labels.  User-supplied ``custom``
certificates are checked in floating point with the margin
``tol * max(1, |f| |v|)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numpy.polynomial import Polynomial

from . import config
from .cones import PSD, Orthant, cone_from_json, cone_to_json, dual_member
from .errors import CertificateRejected, UnsupportedConeError
from .numerics import smat, svec

FAMILIES = ("psd-moment", "point-eval", "custom")
_MAX_LABEL = 50


def _int_vector(i: int, deg: int) -> list[int]:
    if not 1 <= i <= _MAX_LABEL:
        raise ValueError(f"label {i} outside 1..{_MAX_LABEL}")
    if i ** deg >= 2 ** 53:
        raise OverflowError(f"{i}^{deg} exceeds double precision")
    return [i ** a for a in range(deg + 1)]


def _poly_coeffs(W) -> list[int]:
    """Integer coefficients (ascending) of ``prod_{i in W} (t - i)``."""
    c = [1]
    for i in sorted(W):
        nxt = [0] * (len(c) + 1)
        for a, ca in enumerate(c):
            nxt[a] -= i * ca
            nxt[a + 1] += ca
        c = nxt
    return c


def moment_ray(k: int, i: int) -> np.ndarray:
    """``v v^T / |v|^2`` with ``v = (1, i, ..., i^k)``, a unit-trace PSD matrix of order ``k + 1``."""
    if k < 1:
        raise ValueError("k must be positive")
    v = np.array(_int_vector(i, k), dtype=float)
    return np.outer(v, v) / (v @ v)


def moment_certificate(k: int, W) -> np.ndarray:
    """``c c^T`` for the coefficient vector ``c`` of ``prod_{i in W} (t - i)``."""
    W = sorted(set(int(i) for i in W))
    if len(W) != k:
        raise ValueError(f"need |W| = {k}, got {len(W)}")
    c = np.array(_poly_coeffs(W), dtype=float)
    if np.max(np.abs(c)) ** 2 >= 2 ** 53:
        raise OverflowError("certificate entries exceed double precision")
    return np.outer(c, c)


def pointeval_ray(d: int, i: int) -> np.ndarray:
    v = np.array(_int_vector(i, 2 * d), dtype=float)
    return v / np.linalg.norm(v)


def pointeval_certificate(d: int, W) -> Polynomial:
    """``q_W = prod_{i in W} (t - i)^2``, nonnegative and vanishing on ``W``."""
    W = sorted(set(int(i) for i in W))
    if len(W) != d:
        raise ValueError(f"need |W| = {d}, got {len(W)}")
    c = _poly_coeffs(W)
    q = [0] * (2 * len(c) - 1)
    for a, b in itertools.product(range(len(c)), repeat=2):
        q[a + b] += c[a] * c[b]
    return Polynomial(np.array(q, dtype=float))


@dataclass
class NeighborlinessCertificate:
    k: int
    family: str
    labels: list
    rays: dict                  # label -> ambient vector
    certs: dict                 # frozenset W -> ambient vector
    cone: object = None         # cone whose dual contains the certificates (custom family)
    partial: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if len(self.labels) < self.k:
            raise ValueError("need at least k rays")
        self.rays = {l: np.asarray(v, dtype=float).reshape(-1) for l, v in self.rays.items()}
        self.certs = {frozenset(W): np.asarray(f, dtype=float).reshape(-1) for W, f in self.certs.items()}

    def to_json(self):
        out = {"k": self.k, "family": self.family,
               "rays": [{"label": l, "vec": self.rays[l].tolist()} for l in self.labels],
               "certs": [{"W": sorted(W), "f": f.tolist()} for W, f in
                         sorted(self.certs.items(), key=lambda kv: sorted(kv[0]))]}
        if self.cone is not None:
            out["cone"] = cone_to_json(self.cone)
        if self.partial:
            out["partial"] = True
        return out

    @classmethod
    def from_json(cls, obj):
        try:
            rays = {r["label"]: r["vec"] for r in obj["rays"]}
            labels = [r["label"] for r in obj["rays"]]
            certs = {frozenset(c["W"]): c["f"] for c in obj["certs"]}
            cone = cone_from_json(obj["cone"]) if "cone" in obj else None
            return cls(int(obj["k"]), obj["family"], labels, rays, certs, cone, bool(obj.get("partial", False)))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed certificate bundle: {exc}") from exc


def moment_family(k: int, N: int) -> NeighborlinessCertificate:
    """All ``C(N, k)`` moment certificates on labels ``1..N``."""
    labels = list(range(1, N + 1))
    rays = {i: svec(moment_ray(k, i)) for i in labels}
    certs = {frozenset(W): svec(moment_certificate(k, W)) for W in itertools.combinations(labels, k)}
    return NeighborlinessCertificate(k, "psd-moment", labels, rays, certs, PSD(k + 1))


def pointeval_family(d: int, N: int) -> NeighborlinessCertificate:
    labels = list(range(1, N + 1))
    rays = {i: pointeval_ray(d, i) for i in labels}
    certs = {frozenset(W): pointeval_certificate(d, W).coef for W in itertools.combinations(labels, d)}
    return NeighborlinessCertificate(d, "point-eval", labels, rays, certs)


@dataclass
class NeighborlinessReport:
    passed: bool
    checked: int
    exact: bool
    partial: bool
    violations: list = field(default_factory=list)

    def to_json(self):
        return {"passed": self.passed, "checked": self.checked, "exact": self.exact,
                "partial": self.partial, "violations": self.violations}


def _exact_int(v, scale_tol=1e-9):
    """Entries of ``v`` as Python ints, or None when some entry is not integral."""
    r = np.round(v)
    if np.any(np.abs(v - r) > scale_tol * np.maximum(1.0, np.abs(v))):
        return None
    return [int(x) for x in r]


def _exact_vectors(cert, label):
    """Integer ray data regenerated from the label, checked against the stored vector."""
    if cert.family == "psd-moment":
        v = _int_vector(int(label), cert.k)
        stored = smat(cert.rays[label])
        expected = np.outer(v, v) / float(sum(a * a for a in v))
    else:
        v = _int_vector(int(label), 2 * cert.k)
        stored = cert.rays[label]
        expected = np.array(v, dtype=float) / np.linalg.norm(v)
    if stored.shape != expected.shape or np.max(np.abs(stored - expected)) > 1e-10:
        raise CertificateRejected(f"stored ray for label {label} does not match its label")
    return v


def _is_psd_rank_one(fi, k):
    """Whether an integer matrix is a nonnegative multiple of ``c c^T`` (hence PSD)."""
    n = k + 1
    F = [fi[a * n:(a + 1) * n] for a in range(n)]
    piv = next((a for a in range(n) if F[a][a] != 0), None)
    if piv is None:
        return all(x == 0 for x in fi)
    if F[piv][piv] < 0:
        return False
    # rank one with a positive pivot, checked exactly
    return all(F[a][b] * F[piv][piv] == F[a][piv] * F[piv][b] for a in range(n) for b in range(n)) and \
        all(F[a][a] >= 0 for a in range(n))


def _poly_nonneg(q, tol):
    """Numerical check that a univariate polynomial is nonnegative on the real line."""
    P = Polynomial(q).trim()
    if P.degree() <= 0:
        return bool(P.coef[0] >= -tol)
    if P.degree() % 2 or P.coef[-1] < 0:
        return False
    crit = P.deriv().roots()
    crit = crit[np.abs(crit.imag) <= 1e-7 * np.maximum(1, np.abs(crit))].real
    scale = max(1.0, float(np.max(np.abs(P.coef))))
    return bool(np.all(P(crit) >= -tol * scale * max(1.0, float(np.max(np.abs(crit), initial=1.0))) ** P.degree()))


def verify_neighborly(cert: NeighborlinessCertificate, tol=None, allow_partial=None) -> NeighborlinessReport:
    """Check the sign pattern and dual membership of every certificate.

    For ``psd-moment`` and ``point-eval`` bundles with integral certificates,
    inner products are computed exactly from the integer rays the labels
    determine, so zero means exactly zero.  Otherwise a value counts as zero
    when ``|<f, v>| <= tol * max(1, |f| |v|)`` and as positive when it exceeds
    that margin.  Missing certificates are an error unless the bundle is
    declared partial.
    """
    tol = config.resolve_tol(tol)
    partial = cert.partial if allow_partial is None else allow_partial
    expected = {frozenset(W) for W in itertools.combinations(cert.labels, cert.k)}
    missing = expected - set(cert.certs)
    if missing and not partial:
        raise CertificateRejected(f"{len(missing)} k-subsets have no certificate, e.g. {sorted(next(iter(missing)))}")
    extra = [W for W in cert.certs if W not in expected]
    violations = [{"W": sorted(W), "kind": "bad-subset"} for W in extra]
    exact_family = cert.family in ("psd-moment", "point-eval")
    ints = {}
    if exact_family:
        ints = {l: _exact_vectors(cert, l) for l in cert.labels}
    all_exact = exact_family
    checked = 0
    for W in sorted(set(cert.certs) & expected, key=sorted):
        f = cert.certs[W]
        fi = None
        if exact_family:
            F = smat(f).reshape(-1) if cert.family == "psd-moment" else f
            fi = _exact_int(F)
        if fi is None:
            all_exact = False
        ok_dual = _dual_ok(cert, f, fi, tol)
        if not ok_dual:
            violations.append({"W": sorted(W), "kind": "dual-membership"})
        for l in cert.labels:
            checked += 1
            if fi is not None:
                val = _exact_pair(cert, fi, ints[l])
                zero, pos = val == 0, val > 0
                shown = float(val)
            else:
                v = cert.rays[l]
                shown = float(f @ v)
                margin = tol * max(1.0, float(np.linalg.norm(f) * np.linalg.norm(v)))
                zero, pos = abs(shown) <= margin, shown > margin
            if l in W and not zero:
                violations.append({"W": sorted(W), "label": l, "kind": "nonzero-on-W", "value": shown})
            elif l not in W and not pos:
                violations.append({"W": sorted(W), "label": l, "kind": "not-positive", "value": shown})
    return NeighborlinessReport(not violations, checked, all_exact, bool(missing) or partial, violations)


def _exact_pair(cert, fi, v):
    """``<f, v v^T>`` (moment) or ``<f, v>`` (point-eval) as a Fraction, up to the positive ray norm."""
    if cert.family == "psd-moment":
        n = len(v)
        num = sum(fi[a * n + b] * v[a] * v[b] for a in range(n) for b in range(n))
        return Fraction(num, sum(a * a for a in v))
    return Fraction(sum(c * x for c, x in zip(fi, v)))


def _dual_ok(cert, f, fi, tol):
    if cert.family == "psd-moment":
        if fi is not None and _is_psd_rank_one(fi, cert.k):
            return True
        return dual_member(PSD(cert.k + 1), f, tol)
    if cert.family == "point-eval":
        return _poly_nonneg(np.array(fi if fi is not None else f, dtype=float), tol)
    if cert.cone is None:
        raise UnsupportedConeError("custom certificates need a cone to check dual membership")
    return dual_member(cert.cone, f, tol)


def custom_certificate(k, rays: dict, certs: dict, cone=None) -> NeighborlinessCertificate:
    """Wrap user data; ``cone`` defaults to the orthant of the ray dimension."""
    labels = list(rays)
    if cone is None:
        cone = Orthant(len(np.asarray(next(iter(rays.values()))).reshape(-1)))
    return NeighborlinessCertificate(k, "custom", labels, rays, certs, cone)


__all__ = ["NeighborlinessCertificate", "NeighborlinessReport", "moment_ray", "moment_certificate",
           "pointeval_ray", "pointeval_certificate", "moment_family", "pointeval_family",
           "verify_neighborly", "custom_certificate"]
