"""Hyperbolic polynomials, hyperbolic eigenvalues, and derivative relaxations of PSD.

A homogeneous polynomial ``p`` is hyperbolic with respect to ``e`` when
``p(e) > 0`` and ``t -> p(t e - x)`` has only real roots for every ``x``.
Those roots are the hyperbolic eigenvalues of ``x``, and the hyperbolicity cone
``Lambda_+(p, e)`` collects the points whose eigenvalues are all nonnegative.

Tolerances are scaled by the magnitude of the data: an eigenvalue counts as
zero when ``|lam| <= tol * max(1, max |lam|)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import config
from .errors import (CertificateRejected, HyperbolicityDirectionError, NotRealRootedError)
from .numerics import MultiPoly, as_sym, as_vector, poly_from_roots, poly_restrict, real_roots, sym_eig


@dataclass(frozen=True)
class HyperbolicSpectrum:
    eigenvalues: np.ndarray     # ascending, length deg p
    rank: int


@dataclass
class HyperbolicityReport:
    passed: bool
    samples: int
    seed: int
    witness: np.ndarray | None = None
    message: str = ""


def _zero_tol(lam, tol):
    return tol * max(1.0, float(np.max(np.abs(lam)))) if lam.size else tol


def hyperbolicity_check(p: MultiPoly, e, samples=None, seed=None, tol=None) -> HyperbolicityReport:
    """Look for a direction ``x`` where ``p(t e - x)`` fails to be real-rooted.

    Draws ``samples`` random unit vectors.  A pass is probabilistic evidence of
    hyperbolicity, not a proof; a fail returns the offending direction.
    """
    cfg = config.current()
    samples = cfg.hyp_samples if samples is None else int(samples)
    seed = cfg.seed if seed is None else int(seed)
    e = as_vector(e, p.nvars)
    if not p(e) > 0:
        raise HyperbolicityDirectionError(f"p(e) = {p(e)!r} is not positive")
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        x = rng.standard_normal(p.nvars)
        x /= np.linalg.norm(x)
        try:
            real_roots(poly_restrict(p, e, x), tol)
        except NotRealRootedError as exc:
            return HyperbolicityReport(False, samples, seed, x, str(exc))
    return HyperbolicityReport(True, samples, seed)


def hyp_eigenvalues(p: MultiPoly, e, x, tol=None) -> HyperbolicSpectrum:
    """Roots of ``t -> p(t e - x)``, ascending, with the hyperbolic rank."""
    tol = config.resolve_tol(tol)
    try:
        lam = real_roots(poly_restrict(p, e, x), tol)
    except NotRealRootedError as exc:
        raise NotRealRootedError(f"hyperbolicity violated at x: {exc}", exc.roots, exc.n_missing) from exc
    rank = int(np.sum(np.abs(lam) > _zero_tol(lam, tol)))
    return HyperbolicSpectrum(lam, rank)


def hyp_member(p, e, x, tol=None) -> bool:
    tol = config.resolve_tol(tol)
    lam = hyp_eigenvalues(p, e, x, tol).eigenvalues
    return bool(lam.size == 0 or lam[0] >= -_zero_tol(lam, tol))


def hyp_relint(p, e, x, tol=None) -> bool:
    tol = config.resolve_tol(tol)
    lam = hyp_eigenvalues(p, e, x, tol).eigenvalues
    return bool(lam.size == 0 or lam[0] > _zero_tol(lam, tol))


def hyp_rank(p, e, x, tol=None) -> int:
    return hyp_eigenvalues(p, e, x, tol).rank


# ---------------------------------------------------------------------------
# derivative relaxations of the PSD cone
# ---------------------------------------------------------------------------

def elementary_minor_sums(X) -> np.ndarray:
    """``[E_1(X), ..., E_k(X)]``, where ``E_j`` is the sum of the ``j x j`` principal minors.

    Computed as elementary symmetric functions of the eigenvalues, read off
    the characteristic polynomial ``prod (t - lam_i)``.
    """
    X = as_sym(X)
    k = X.shape[0]
    if k > 12:
        raise ValueError("elementary_minor_sums supports order at most 12")
    lam, _ = sym_eig(X)
    c = np.poly(lam)                    # highest degree first
    signs = (-1.0) ** np.arange(k + 1)
    return (signs * c)[1:]


def _check_order(k, l, X):
    if not 0 <= l <= k - 1:
        raise ValueError(f"derivative order l={l} out of range for k={k}")
    X = as_sym(X)
    if X.shape != (k, k):
        raise ValueError(f"expected a {k}x{k} matrix, got {X.shape}")
    return X


def derivative_member(k: int, l: int, X, tol=None) -> bool:
    """Membership in the ``l``-th derivative relaxation: ``E_1, ..., E_{k-l} >= 0``."""
    tol = config.resolve_tol(tol)
    X = _check_order(k, l, X)
    E = elementary_minor_sums(X)[: k - l]
    s = max(1.0, float(np.linalg.norm(X, 2)))
    bounds = tol * s ** np.arange(1, k - l + 1)
    return bool(np.all(E >= -bounds))


def derivative_eigenvalues(k: int, l: int, X) -> np.ndarray:
    """Hyperbolic eigenvalues of ``X`` for ``E_{k-l}`` with direction ``I``.

    ``E_{k-l}(t I - X)`` is proportional to the ``l``-th derivative of the
    characteristic polynomial of ``X``, so these are the roots of that derivative.
    """
    X = _check_order(k, l, X)
    lam, _ = sym_eig(X)
    if l == 0:
        return lam[::-1].copy()
    q = poly_from_roots(lam).deriv(l)
    return real_roots(q)


def derivative_rank(k: int, l: int, X, tol=None) -> int:
    tol = config.resolve_tol(tol)
    lam = derivative_eigenvalues(k, l, X)
    return int(np.sum(np.abs(lam) > _zero_tol(lam, tol)))


def derivative_face_embed(k: int, l: int, Y) -> np.ndarray:
    """Zero-pad an order ``k - l`` matrix to order ``k`` in the top-left block.

    For the padded matrix, ``E_j`` equals ``E_j(Y)`` for ``j <= k - l`` and
    vanishes above, so the padded matrix lies in the ``l``-th derivative cone
    exactly when ``Y`` is PSD.  The image of the PSD cone is a linear copy of
    it inside the derivative cone.  For ``l >= 1`` it is not a face: a
    positive definite ``Y`` pads to a point with ``E_{k-l} = det Y > 0``,
    which is interior.
    """
    if not 0 <= l <= k - 1:
        raise ValueError(f"derivative order l={l} out of range for k={k}")
    Y = as_sym(Y)
    if Y.shape != (k - l, k - l):
        raise ValueError(f"expected a {k - l}x{k - l} block, got {Y.shape}")
    out = np.zeros((k, k))
    out[: k - l, : k - l] = Y
    return out


# ---------------------------------------------------------------------------
# factor products
# ---------------------------------------------------------------------------

@dataclass
class FactorData:
    """``p = prod p_i^{m_i}`` with a common hyperbolicity direction ``e``."""
    factors: list
    e: np.ndarray
    p: MultiPoly | None = None
    _product: MultiPoly | None = field(default=None, repr=False)

    def __post_init__(self):
        self.factors = [(f, int(m)) for f, m in self.factors]
        if not self.factors:
            raise ValueError("FactorData needs at least one factor")
        n = self.factors[0][0].nvars
        if any(f.nvars != n for f, _ in self.factors):
            raise ValueError("factors live in different numbers of variables")
        if any(m < 1 for _, m in self.factors):
            raise ValueError("multiplicities must be positive")
        self.e = as_vector(self.e, n)

    @property
    def nvars(self):
        return self.factors[0][0].nvars

    def product(self) -> MultiPoly:
        if self._product is None:
            out = MultiPoly.constant(self.nvars, 1)
            for f, m in self.factors:
                out = out * f ** m
            self._product = out
        return self._product

    def validate(self, rtol=1e-8):
        for i, (f, _) in enumerate(self.factors):
            if not f(self.e) > 0:
                raise CertificateRejected(f"factor {i} is not positive at e")
        if self.p is not None and not self.product().allclose(self.p, rtol):
            raise CertificateRejected("product of factors does not reproduce p")

    def to_json(self):
        out = {"e": self.e.tolist(),
               "factors": [{"p": f.to_json(), "mult": m} for f, m in self.factors]}
        if self.p is not None:
            out["p"] = self.p.to_json()
        return out

    @classmethod
    def from_json(cls, obj):
        factors = [(MultiPoly.from_json(f["p"]), f.get("mult", 1)) for f in obj["factors"]]
        p = MultiPoly.from_json(obj["p"]) if "p" in obj else None
        fd = cls(factors, np.array(obj["e"], dtype=float), p)
        fd.validate()
        return fd


def factor_lift(fd: FactorData, samples=None, seed=None):
    """Lift of ``Lambda_+(p, e)`` through the product of the factor cones.

    The cone of a product is the intersection of the factor cones, so it is
    the image of ``K_1 x ... x K_n`` intersected with the diagonal
    ``{(x, ..., x)}`` under projection to the first block.
    """
    from .cones import Hyperbolicity, Product
    from .lifts import LiftDesc

    fd.validate()
    for i, (f, _) in enumerate(fd.factors):
        rep = hyperbolicity_check(f, fd.e, samples, seed)
        if not rep.passed:
            raise CertificateRejected(f"factor {i} failed the hyperbolicity check: {rep.message}")
    n = fd.nvars
    m = len(fd.factors)
    K = Product(tuple(Hyperbolicity(f, fd.e) for f, _ in fd.factors))
    L = np.vstack([np.eye(n)] * m) / np.sqrt(m)
    pi = np.hstack([np.eye(n)] + [np.zeros((n, n))] * (m - 1))
    witness = np.tile(fd.e, m)
    bounds = [f.degree + 1 for f, _ in fd.factors]
    return LiftDesc(pi, L, K, witness, {"factor_chain_bounds": bounds,
                                        "multiplicities": [mm for _, mm in fd.factors]})
