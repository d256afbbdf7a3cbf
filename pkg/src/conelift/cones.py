"""Closed convex cones, their faces, and face-lattice arithmetic.

Cone descriptors are small immutable objects.  Points of a cone are flat
vectors in the cone's ambient coordinates; :class:`PSD` and
:class:`DerivativePSD` points use the ``svec`` isometry (see
:mod:`conelift.numerics`), and also accept square matrices wherever a point is
expected.

Faces are represented per family:

=================  ===========================================
cone               face
=================  ===========================================
Orthant            :class:`OrthantFace` (support set)
PSD                :class:`PSDFace` (orthonormal column basis)
SecondOrder        :class:`SOCFace` (zero / boundary ray / full)
Polyhedral         :class:`PolyFace` (active inequality set)
Hyperbolicity      :class:`HypFace` (representative + hyperbolic rank)
Product            :class:`ProductFace` (tuple of faces)
=================  ===========================================

Every face also carries ``rep``, a point of its relative interior.  Index sets
are 0-based.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import nnls

from . import config, hyperbolic
from .errors import BudgetExceeded, DualOracleUnavailable, NotInConeError, UnsupportedConeError
from .numerics import (MultiPoly, as_vector, max_support_point, null_space, orth, smat, svec,
                       svec_dim, sym_eig)


# ---------------------------------------------------------------------------
# cone descriptors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Orthant:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("Orthant dimension must be positive")

    @property
    def dim(self):
        return self.n


@dataclass(frozen=True)
class SecondOrder:
    """``{(x0, x1..x_{dim-1}) : |(x1..)| <= x0}``; ``dim`` is the ambient dimension."""
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("SecondOrder dimension must be positive")


@dataclass(frozen=True)
class PSD:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("PSD order must be positive")

    @property
    def dim(self):
        return svec_dim(self.k)


@dataclass(frozen=True)
class Exponential:
    """Closure of ``{(x, t, y) : y > 0, y exp(x / y) <= t}``."""

    @property
    def dim(self):
        return 3


@dataclass(frozen=True, eq=False)
class Polyhedral:
    """``{x : A x >= 0}``.  ``lineality`` optionally supplies a basis of ``null(A)``."""
    A: np.ndarray
    lineality: np.ndarray | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        if A.shape[1] < 1:
            raise ValueError("Polyhedral cone needs at least one column")
        object.__setattr__(self, "A", A)
        norms = np.linalg.norm(A, axis=1)
        object.__setattr__(self, "_An", A / np.where(norms > 0, norms, 1.0)[:, None])
        lin = null_space(A)
        if self.lineality is not None:
            Lb = np.atleast_2d(np.asarray(self.lineality, dtype=float))
            if Lb.shape[0] != A.shape[1]:
                Lb = Lb.T
            if Lb.size and np.max(np.abs(A @ Lb)) > 1e-8 * (1 + np.max(np.abs(Lb))):
                raise ValueError("supplied lineality basis is not in the null space of A")
            if orth(Lb).shape[1] != lin.shape[1]:
                raise ValueError("supplied lineality basis does not span the lineality space")
        object.__setattr__(self, "lineality", lin)

    @property
    def dim(self):
        return self.A.shape[1]

    @property
    def n_rows(self):
        return self.A.shape[0]


@dataclass(frozen=True, eq=False)
class Hyperbolicity:
    """``Lambda_+(p, e)``.  ``min_ray_rank`` is a caller assertion used only by chain bounds."""
    p: MultiPoly
    e: np.ndarray
    min_ray_rank: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "e", as_vector(self.e, self.p.nvars))
        if not self.p.is_homogeneous():
            raise ValueError("hyperbolic polynomial must be homogeneous")

    @property
    def dim(self):
        return self.p.nvars

    @property
    def degree(self):
        return self.p.degree


@dataclass(frozen=True)
class DerivativePSD:
    """The ``l``-th Renegar derivative of the ``k x k`` PSD cone (``l = 0`` is PSD itself)."""
    k: int
    l: int

    def __post_init__(self):
        if self.k < 1 or not 0 <= self.l <= self.k - 1:
            raise ValueError("need k >= 1 and 0 <= l <= k - 1")

    @property
    def dim(self):
        return svec_dim(self.k)


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __post_init__(self):
        fs = tuple(self.factors)
        if not fs:
            raise ValueError("Product needs at least one factor")
        object.__setattr__(self, "factors", fs)

    @property
    def dim(self):
        return sum(f.dim for f in self.factors)

    @property
    def offsets(self):
        return np.cumsum([0] + [f.dim for f in self.factors])

    def split(self, x):
        off = self.offsets
        return [x[off[i]:off[i + 1]] for i in range(len(self.factors))]


ConeDesc = Orthant | SecondOrder | PSD | Exponential | Polyhedral | Hyperbolicity | DerivativePSD | Product


# ---------------------------------------------------------------------------
# faces
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EmptyFace:
    rep: None = None


@dataclass(frozen=True, eq=False)
class OrthantFace:
    support: frozenset
    rep: np.ndarray


@dataclass(frozen=True, eq=False)
class PSDFace:
    basis: np.ndarray
    rep: np.ndarray

    @property
    def rank(self):
        return self.basis.shape[1]


@dataclass(frozen=True, eq=False)
class SOCFace:
    kind: str                      # "zero" | "ray" | "full"
    rep: np.ndarray
    direction: np.ndarray | None = None


@dataclass(frozen=True, eq=False)
class PolyFace:
    active: frozenset
    rep: np.ndarray


@dataclass(frozen=True, eq=False)
class HypFace:
    rep: np.ndarray
    rank: int


@dataclass(frozen=True, eq=False)
class ProductFace:
    parts: tuple

    @property
    def rep(self):
        return np.concatenate([p.rep for p in self.parts])


class ChainLength(NamedTuple):
    value: int
    exact: bool


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def point(K, x) -> np.ndarray:
    """Coerce ``x`` to a flat point in the ambient coordinates of ``K``."""
    if isinstance(K, (PSD, DerivativePSD)):
        arr = np.asarray(x, dtype=float)
        if arr.ndim == 2:
            if arr.shape != (K.k, K.k):
                raise ValueError(f"expected a {K.k}x{K.k} matrix")
            return svec(0.5 * (arr + arr.T))
    return as_vector(x, K.dim)


def _scale(x):
    return max(1.0, float(np.max(np.abs(x)))) if np.size(x) else 1.0


def _soc_parts(x):
    return x[0], (np.linalg.norm(x[1:]) if x.size > 1 else 0.0)


def _exp_member(x, t, y, tol, scale):
    if y > tol * scale:
        with np.errstate(over="ignore"):
            val = y * np.exp(x / y)
        return bool(val <= t + tol * scale)
    if y < -tol * scale:
        return False
    return bool(x <= tol * scale and t >= -tol * scale)


def faces_exact(K) -> bool:
    """Whether face comparisons for ``K`` are exact (vs. perturbation heuristics)."""
    if isinstance(K, Product):
        return all(faces_exact(f) for f in K.factors)
    if isinstance(K, DerivativePSD):
        return K.l == 0
    return isinstance(K, (Orthant, SecondOrder, PSD, Polyhedral))


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------

def member(K, x, tol=None) -> bool:
    tol = config.resolve_tol(tol)
    x = point(K, x)
    s = _scale(x)
    if isinstance(K, Orthant):
        return bool(np.all(x >= -tol * s))
    if isinstance(K, SecondOrder):
        x0, r = _soc_parts(x)
        return bool(r <= x0 + tol * s)
    if isinstance(K, PSD):
        w, _ = sym_eig(smat(x))
        return bool(w[-1] >= -tol * max(1.0, abs(w[0])))
    if isinstance(K, Exponential):
        return _exp_member(x[0], x[1], x[2], tol, s)
    if isinstance(K, Polyhedral):
        return bool(np.all(K._An @ x >= -tol * s))
    if isinstance(K, Hyperbolicity):
        return hyperbolic.hyp_member(K.p, K.e, x, tol)
    if isinstance(K, DerivativePSD):
        return hyperbolic.derivative_member(K.k, K.l, smat(x), tol)
    if isinstance(K, Product):
        return all(member(f, xi, tol) for f, xi in zip(K.factors, K.split(x)))
    raise UnsupportedConeError(f"unknown cone {K!r}")


def relint_member(K, x, tol=None) -> bool:
    tol = config.resolve_tol(tol)
    x = point(K, x)
    s = _scale(x)
    if isinstance(K, Orthant):
        return bool(np.all(x > tol * s))
    if isinstance(K, SecondOrder):
        x0, r = _soc_parts(x)
        return bool(x0 - r > tol * s)
    if isinstance(K, PSD):
        w, _ = sym_eig(smat(x))
        return bool(w[-1] > tol * max(1.0, abs(w[0])))
    if isinstance(K, Exponential):
        xx, t, y = x
        if y <= tol * s or t <= tol * s:
            return False
        return bool(xx / y + math.log(y) < math.log(t) - tol)
    if isinstance(K, Polyhedral):
        eq = _poly_implicit(K)
        v = K._An @ x
        rest = np.array([i for i in range(K.n_rows) if i not in eq], dtype=int)
        ok_eq = all(abs(v[i]) <= tol * s for i in eq)
        return bool(ok_eq and (rest.size == 0 or np.all(v[rest] > tol * s)))
    if isinstance(K, Hyperbolicity):
        return hyperbolic.hyp_relint(K.p, K.e, x, tol)
    if isinstance(K, DerivativePSD):
        lam = hyperbolic.derivative_eigenvalues(K.k, K.l, smat(x))
        return bool(lam.size == 0 or lam[0] > tol * _scale(lam))
    if isinstance(K, Product):
        return all(relint_member(f, xi, tol) for f, xi in zip(K.factors, K.split(x)))
    raise UnsupportedConeError(f"unknown cone {K!r}")


def dual_member(K, y, tol=None) -> bool:
    """Membership in the dual cone ``K* = {f : <f, x> >= 0 for all x in K}``."""
    tol = config.resolve_tol(tol)
    y = point(K, y)
    if isinstance(K, (Orthant, SecondOrder, PSD)):
        return member(K, y, tol)
    if isinstance(K, Exponential):
        u, v, w = y                # dual coordinates paired with (x, t, y)
        s = _scale(y)
        if u < -tol * s:
            with np.errstate(over="ignore"):
                bound = -u * np.exp(w / u - 1.0)
            return bool(v >= bound - tol * s)
        if u > tol * s:
            return False
        return bool(v >= -tol * s and w >= -tol * s)
    if isinstance(K, Polyhedral):
        if K.n_rows > 20:
            raise DualOracleUnavailable("polyhedral dual oracle is limited to 20 rows")
        _, resid = nnls(K.A.T, y)
        return bool(resid <= tol * max(1.0, np.linalg.norm(y)) * 10)
    if isinstance(K, Product):
        return all(dual_member(f, yi, tol) for f, yi in zip(K.factors, K.split(y)))
    raise DualOracleUnavailable(f"dual oracle unavailable for {type(K).__name__}")


# ---------------------------------------------------------------------------
# projections
# ---------------------------------------------------------------------------

def _proj_soc(x):
    x0, r = _soc_parts(x)
    if r <= x0:
        return x.copy()
    if r <= -x0:
        return np.zeros_like(x)
    a = 0.5 * (x0 + r)
    out = np.empty_like(x)
    out[0] = a
    out[1:] = a * x[1:] / r
    return out


def _proj_psd(x):
    w, V = np.linalg.eigh(smat(x))
    return svec((V * np.maximum(w, 0.0)) @ V.T)


def _proj_polar_dual(K, y):
    lam, _ = nnls(K.A.T, y)
    return K.A.T @ lam


def project(K, x) -> np.ndarray:
    """Euclidean projection onto ``K``."""
    x = point(K, x)
    if isinstance(K, Orthant):
        return np.maximum(x, 0.0)
    if isinstance(K, SecondOrder):
        return _proj_soc(x)
    if isinstance(K, PSD):
        return _proj_psd(x)
    if isinstance(K, Polyhedral):
        # Moreau: x = P_K(x) + P_{K polar}(x), and K polar = -K*
        return x + _proj_polar_dual(K, -x)
    if isinstance(K, Product):
        return np.concatenate([project(f, xi) for f, xi in zip(K.factors, K.split(x))])
    raise UnsupportedConeError(f"no projection for {type(K).__name__}")


def project_dual(K, y) -> np.ndarray:
    """Euclidean projection onto ``K*``."""
    y = point(K, y)
    if isinstance(K, (Orthant, SecondOrder, PSD)):
        return project(K, y)
    if isinstance(K, Polyhedral):
        return _proj_polar_dual(K, y)
    if isinstance(K, Product):
        return np.concatenate([project_dual(f, yi) for f, yi in zip(K.factors, K.split(y))])
    raise DualOracleUnavailable(f"no dual projection for {type(K).__name__}")


# ---------------------------------------------------------------------------
# polyhedral face machinery
# ---------------------------------------------------------------------------

def _poly_closure(K, J):
    """Smallest face of a polyhedral cone on which every row in ``J`` is tight."""
    J = frozenset(J)
    cache = K._cache.setdefault("closure", {})
    if J not in cache:
        x, pos = max_support_point(K._An, sorted(J))
        active = frozenset(i for i in range(K.n_rows) if not pos[i]) | J
        cache[J] = (active, x)
    return cache[J]


def _poly_implicit(K):
    return _poly_closure(K, frozenset())[0]


def implicit_equalities(K) -> frozenset:
    """Rows of a polyhedral cone that vanish on the whole cone."""
    return _poly_implicit(K)


def _poly_chain(K, J):
    """Longest chain of faces inside the face with active set ``J``.

    Returns ``(length, faces)`` with faces listed top-down as (active, rep).
    Memoized recursion over the face lattice: children of a face are the
    closures of ``J + {j}`` for rows j not in ``J``.
    """
    memo = K._cache.setdefault("chain", {})
    if J in memo:
        return memo[J]
    rep = _poly_closure(K, J)[1] if J else _poly_closure(K, frozenset())[1]
    best = (1, [(J, rep)])
    seen = set()
    for j in range(K.n_rows):
        if j in J:
            continue
        child, crep = _poly_closure(K, J | {j})
        if child in seen or child == J:
            continue
        seen.add(child)
        length, path = _poly_chain(K, child)
        if length + 1 > best[0]:
            best = (length + 1, [(J, rep)] + path)
    memo[J] = best
    return best


# ---------------------------------------------------------------------------
# minimal faces, joins, order
# ---------------------------------------------------------------------------

def minimal_face(K, x, tol=None):
    """Smallest face of ``K`` containing ``x`` (``x`` lies in its relative interior)."""
    tol = config.resolve_tol(tol)
    x = point(K, x)
    if not member(K, x, tol):
        raise NotInConeError(f"point is not in {type(K).__name__}")
    s = _scale(x)
    if isinstance(K, Orthant):
        return OrthantFace(frozenset(int(i) for i in np.nonzero(x > tol * s)[0]), x)
    if isinstance(K, PSD):
        w, Q = sym_eig(smat(x))
        keep = w > tol * max(1.0, abs(w[0]))
        return PSDFace(Q[:, keep].copy(), x)
    if isinstance(K, SecondOrder):
        x0, r = _soc_parts(x)
        if x0 <= tol * s:
            return SOCFace("zero", x)
        if K.dim == 1 or x0 - r > tol * s:
            return SOCFace("full", x)
        v = x / np.linalg.norm(x)
        return SOCFace("ray", x, v)
    if isinstance(K, Polyhedral):
        v = K._An @ x
        return PolyFace(frozenset(int(i) for i in np.nonzero(v <= tol * s)[0]), x)
    if isinstance(K, Hyperbolicity):
        return HypFace(x, hyperbolic.hyp_rank(K.p, K.e, x, tol))
    if isinstance(K, DerivativePSD):
        if K.l == 0:
            return minimal_face(PSD(K.k), x, tol)
        return HypFace(x, hyperbolic.derivative_rank(K.k, K.l, smat(x), tol))
    if isinstance(K, Product):
        return ProductFace(tuple(minimal_face(f, xi, tol) for f, xi in zip(K.factors, K.split(x))))
    raise UnsupportedConeError(f"face classification unavailable for {type(K).__name__}")


def face_join(K, F1, F2, tol=None):
    """Smallest face containing both ``F1`` and ``F2``."""
    if isinstance(F1, EmptyFace):
        return F2
    if isinstance(F2, EmptyFace):
        return F1
    if isinstance(K, Product):
        return ProductFace(tuple(face_join(f, a, b, tol) for f, a, b in zip(K.factors, F1.parts, F2.parts)))
    if isinstance(K, Orthant):
        return OrthantFace(F1.support | F2.support, F1.rep + F2.rep)
    if isinstance(K, PSD):
        return PSDFace(orth(np.hstack([F1.basis, F2.basis])), F1.rep + F2.rep)
    if isinstance(K, Polyhedral):
        return PolyFace(F1.active & F2.active, F1.rep + F2.rep)
    return minimal_face(K, F1.rep + F2.rep, tol)


def _perturbation_leq(K, F1, F2, tol):
    # x in F(y) iff y - eps x stays in K for some eps > 0
    lam2 = _face_eigs(K, F2.rep)
    lam1 = _face_eigs(K, F1.rep)
    s2 = _scale(lam2)
    pos2 = lam2[lam2 > tol * s2]
    if pos2.size == 0:
        return F1.rank == 0
    big1 = max(float(np.max(np.abs(lam1))), 1e-300)
    eps = 0.5 * float(pos2.min()) / big1
    probe = F2.rep - eps * F1.rep
    lam = _face_eigs(K, probe)
    return bool(lam[0] >= -tol * max(1.0, s2))


def _face_eigs(K, x):
    if isinstance(K, Hyperbolicity):
        return hyperbolic.hyp_eigenvalues(K.p, K.e, x).eigenvalues
    return hyperbolic.derivative_eigenvalues(K.k, K.l, smat(x))


def face_leq(K, F1, F2, tol=None) -> bool:
    """``F1`` is contained in ``F2``."""
    tol = config.resolve_tol(tol)
    if isinstance(F1, EmptyFace):
        return True
    if isinstance(F2, EmptyFace):
        return False
    if isinstance(K, Product):
        if not (isinstance(F1, ProductFace) and isinstance(F2, ProductFace)):
            raise TypeError("product cone faces must be ProductFace")
        return all(face_leq(f, a, b, tol) for f, a, b in zip(K.factors, F1.parts, F2.parts))
    if type(F1) is not type(F2):
        raise TypeError(f"cannot compare {type(F1).__name__} with {type(F2).__name__}")
    if isinstance(F1, OrthantFace):
        return F1.support <= F2.support
    if isinstance(F1, PSDFace):
        if F1.rank > F2.rank:
            return False
        if F1.rank == 0:
            return True
        resid = F1.basis - F2.basis @ (F2.basis.T @ F1.basis)
        return bool(np.linalg.norm(resid, 2) <= config.current().face_tol)
    if isinstance(F1, SOCFace):
        if F1.kind == "zero" or F2.kind == "full":
            return True
        if F1.kind == "full" or F2.kind == "zero":
            return False
        return bool(np.linalg.norm(F1.direction - F2.direction) <= config.current().face_tol)
    if isinstance(F1, PolyFace):
        return F1.active >= F2.active
    if isinstance(F1, HypFace):
        if F1.rank > F2.rank:
            return False
        if F1.rank == 0:
            return True
        return _perturbation_leq(K, F1, F2, tol)
    raise TypeError(f"unknown face type {type(F1).__name__}")


def face_eq(K, F1, F2, tol=None) -> bool:
    return face_leq(K, F1, F2, tol) and face_leq(K, F2, F1, tol)


# ---------------------------------------------------------------------------
# chain lengths
# ---------------------------------------------------------------------------

def chain_length(K) -> ChainLength:
    """Length of the longest chain of nonempty faces, or an upper bound on it."""
    if isinstance(K, Orthant):
        return ChainLength(K.n + 1, True)
    if isinstance(K, PSD):
        return ChainLength(K.k + 1, True)
    if isinstance(K, SecondOrder):
        return ChainLength(2 if K.dim == 1 else 3, True)
    if isinstance(K, Exponential):
        return ChainLength(4, False)
    if isinstance(K, Polyhedral):
        if K.dim > 10:
            raise BudgetExceeded("polyhedral chain search is limited to ambient dimension 10")
        return ChainLength(_poly_chain(K, _poly_implicit(K))[0], True)
    if isinstance(K, Hyperbolicity):
        d = K.degree
        bound = min(d + 1, K.dim + 1)
        if K.min_ray_rank is not None and K.min_ray_rank >= 1:
            bound = min(bound, d - K.min_ray_rank + 2)
        return ChainLength(bound, False)
    if isinstance(K, DerivativePSD):
        if K.l == 0:
            return ChainLength(K.k + 1, True)
        return ChainLength(min(K.dim + 1, K.k - K.l + 1), False)
    if isinstance(K, Product):
        parts = [chain_length(f) for f in K.factors]
        return ChainLength(sum(p.value - 1 for p in parts) + 1, all(p.exact for p in parts))
    raise UnsupportedConeError(f"unknown cone {K!r}")


def face_chain_length(K, F) -> ChainLength:
    """Chain length of the face ``F`` viewed as a cone in its own right."""
    if isinstance(F, EmptyFace):
        raise ValueError("the empty face has no nonempty faces")
    if isinstance(K, Product):
        parts = [face_chain_length(f, p) for f, p in zip(K.factors, F.parts)]
        return ChainLength(sum(p.value - 1 for p in parts) + 1, all(p.exact for p in parts))
    if isinstance(F, OrthantFace):
        return ChainLength(len(F.support) + 1, True)
    if isinstance(F, PSDFace):
        return ChainLength(F.rank + 1, True)
    if isinstance(F, SOCFace):
        if F.kind == "zero":
            return ChainLength(1, True)
        if F.kind == "ray":
            return ChainLength(2, True)
        return chain_length(K)
    if isinstance(F, PolyFace):
        return ChainLength(_poly_chain(K, F.active)[0], True)
    if isinstance(F, HypFace):
        # hyperbolic rank strictly increases along chains
        return ChainLength(F.rank + 1, False)
    raise TypeError(f"unknown face type {type(F).__name__}")


def _bottom_up(K):
    """A maximal strict chain of faces of an exactly-handled cone, bottom first."""
    if isinstance(K, Orthant):
        out = []
        for r in range(K.n + 1):
            rep = np.zeros(K.n)
            rep[:r] = 1.0
            out.append(OrthantFace(frozenset(range(r)), rep))
        return out
    if isinstance(K, PSD):
        out = []
        for r in range(K.k + 1):
            B = np.eye(K.k)[:, :r]
            out.append(PSDFace(B, svec(B @ B.T)))
        return out
    if isinstance(K, DerivativePSD) and K.l == 0:
        return _bottom_up(PSD(K.k))
    if isinstance(K, SecondOrder):
        z = np.zeros(K.dim)
        full = z.copy()
        full[0] = 1.0
        if K.dim == 1:
            return [SOCFace("zero", z), SOCFace("full", full)]
        ray = z.copy()
        ray[0] = ray[1] = 1.0
        return [SOCFace("zero", z), SOCFace("ray", ray, ray / np.linalg.norm(ray)), SOCFace("full", full)]
    if isinstance(K, Polyhedral):
        _, path = _poly_chain(K, _poly_implicit(K))
        return [PolyFace(a, rep) for a, rep in reversed(path)]
    if isinstance(K, Product):
        chains = [_bottom_up(f) for f in K.factors]
        cur = [c[0] for c in chains]
        out = [ProductFace(tuple(cur))]
        for i, c in enumerate(chains):
            for F in c[1:]:
                cur[i] = F
                out.append(ProductFace(tuple(cur)))
        return out
    raise UnsupportedConeError(f"chain witnesses are not available for {type(K).__name__}")


def chain_witness(K, target: int):
    """A strict chain ``F_1 < ... < F_target`` of nonempty faces, bottom first."""
    ell = chain_length(K)
    if target < 1:
        raise ValueError("target must be positive")
    if target > ell.value:
        raise ValueError(f"target {target} exceeds the chain length {ell.value}")
    chain = _bottom_up(K)[:target]
    for lo, hi in zip(chain, chain[1:]):
        if not face_leq(K, lo, hi) or face_leq(K, hi, lo):
            raise ArithmeticError("constructed chain is not strict")
    return chain


# ---------------------------------------------------------------------------
# subset selection
# ---------------------------------------------------------------------------

def subset_select(K, points, tol=None) -> list[int]:
    """Small index set whose partial sum has the same minimal face as the full sum.

    Greedy removal to inclusion-minimality: indices are tried in ascending
    order and dropped whenever the face of the remaining sum is unchanged;
    passes repeat until nothing more can be dropped.  An inclusion-minimal set
    ``I`` satisfies ``|I| <= chain_length(F(sum)) - 1``.
    """
    tol = config.resolve_tol(tol)
    pts = [point(K, p) for p in points]
    for i, p in enumerate(pts):
        if not member(K, p, tol):
            raise NotInConeError(f"point {i} is not in the cone")
    if not pts:
        return []
    zero = np.zeros(K.dim)
    target = minimal_face(K, np.sum(pts, axis=0), tol)
    keep = list(range(len(pts)))
    changed = True
    while changed:
        changed = False
        for idx in list(keep):
            trial = [j for j in keep if j != idx]
            s = np.sum([pts[j] for j in trial], axis=0) if trial else zero
            if face_leq(K, target, minimal_face(K, s, tol), tol):
                keep = trial
                changed = True
    return keep


def lineality_basis(K) -> np.ndarray:
    if isinstance(K, Polyhedral):
        return K.lineality
    if isinstance(K, Product):
        blocks = [lineality_basis(f) for f in K.factors]
        n = K.dim
        cols = []
        off = K.offsets
        for i, B in enumerate(blocks):
            for c in B.T:
                v = np.zeros(n)
                v[off[i]:off[i + 1]] = c
                cols.append(v)
        return np.array(cols).T if cols else np.zeros((n, 0))
    if isinstance(K, (Orthant, SecondOrder, PSD, Exponential, DerivativePSD)):
        return np.zeros((K.dim, 0))
    raise UnsupportedConeError("lineality space unavailable for this cone")


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def cone_to_json(K):
    if isinstance(K, Orthant):
        return {"kind": "orthant", "n": K.n}
    if isinstance(K, SecondOrder):
        return {"kind": "soc", "dim": K.dim}
    if isinstance(K, PSD):
        return {"kind": "psd", "k": K.k}
    if isinstance(K, Exponential):
        return {"kind": "exp"}
    if isinstance(K, Polyhedral):
        return {"kind": "polyhedral", "A": K.A.tolist()}
    if isinstance(K, Hyperbolicity):
        out = {"kind": "hyperbolicity", "p": K.p.to_json(), "e": K.e.tolist()}
        if K.min_ray_rank is not None:
            out["min_ray_rank"] = K.min_ray_rank
        return out
    if isinstance(K, DerivativePSD):
        return {"kind": "derivative_psd", "k": K.k, "l": K.l}
    if isinstance(K, Product):
        return {"kind": "product", "factors": [cone_to_json(f) for f in K.factors]}
    raise UnsupportedConeError(f"unknown cone {K!r}")


def cone_from_json(obj):
    try:
        kind = obj["kind"]
        if kind == "orthant":
            return Orthant(int(obj["n"]))
        if kind == "soc":
            return SecondOrder(int(obj["dim"]))
        if kind == "psd":
            return PSD(int(obj["k"]))
        if kind == "exp":
            return Exponential()
        if kind == "polyhedral":
            return Polyhedral(np.array(obj["A"], dtype=float), obj.get("lineality"))
        if kind == "hyperbolicity":
            return Hyperbolicity(MultiPoly.from_json(obj["p"]), np.array(obj["e"], dtype=float),
                                 obj.get("min_ray_rank"))
        if kind == "derivative_psd":
            return DerivativePSD(int(obj["k"]), int(obj["l"]))
        if kind == "product":
            return Product(tuple(cone_from_json(f) for f in obj["factors"]))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed cone description: missing or bad field {exc}") from exc
    raise ValueError(f"unknown cone kind {obj.get('kind')!r}")


def face_to_json(F):
    if isinstance(F, EmptyFace):
        return {"kind": "empty"}
    if isinstance(F, ProductFace):
        return {"kind": "product", "parts": [face_to_json(p) for p in F.parts]}
    out = {"rep": np.asarray(F.rep).tolist()}
    if isinstance(F, OrthantFace):
        out.update(kind="orthant", support=sorted(F.support))
    elif isinstance(F, PSDFace):
        out.update(kind="psd", rank=F.rank, basis=F.basis.tolist())
    elif isinstance(F, SOCFace):
        out.update(kind="soc", type=F.kind)
    elif isinstance(F, PolyFace):
        out.update(kind="polyhedral", active=sorted(F.active))
    elif isinstance(F, HypFace):
        out.update(kind="hyperbolic", rank=F.rank)
    return out


def face_from_json(K, obj, tol=None):
    """Rebuild a face from its serialized representative point."""
    if obj["kind"] == "empty":
        return EmptyFace()
    if obj["kind"] == "product":
        return ProductFace(tuple(face_from_json(f, p, tol) for f, p in zip(K.factors, obj["parts"])))
    return minimal_face(K, np.array(obj["rep"], dtype=float), tol)
