"""Numerical primitives used by every other module.

Symmetric matrices are plain square ``ndarray`` objects (validated with
:func:`as_sym`); univariate polynomials are :class:`numpy.polynomial.Polynomial`
instances or ascending coefficient arrays; multivariate polynomials are
:class:`MultiPoly`.

Two vectorizations of a symmetric ``k x k`` matrix are used:

``svec``
    upper triangle, row-major, off-diagonal entries scaled by sqrt(2).  This is
    an isometry, so ``svec(X) @ svec(Y) == trace(X @ Y)``.  PSD cone points are
    stored this way.
``triu``
    upper triangle, row-major, no scaling.  These are the variables of the
    built-in determinant polynomial (:func:`det_poly`).
"""
from __future__ import annotations

import itertools
import math
from numbers import Number

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import chebyshev as cheb
from numpy.polynomial import polynomial as npoly
from scipy.optimize import linprog

from . import config
from .errors import ConvergenceError, HyperbolicityDirectionError, NotRealRootedError

SQRT2 = math.sqrt(2.0)


# ---------------------------------------------------------------------------
# vectors and symmetric matrices
# ---------------------------------------------------------------------------

def as_vector(x, dim=None) -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(-1)
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    if dim is not None and v.size != dim:
        raise ValueError(f"expected a vector of length {dim}, got {v.size}")
    return v


def as_sym(M, tol=None) -> np.ndarray:
    """Validate a square symmetric matrix and return a symmetrized float copy."""
    A = np.asarray(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    tol = config.resolve_tol(tol)
    if np.max(np.abs(A - A.T)) > tol * (1.0 + np.max(np.abs(A))):
        raise ValueError("matrix is not symmetric")
    return 0.5 * (A + A.T)


def svec_dim(k: int) -> int:
    return k * (k + 1) // 2


def order_from_svec_dim(n: int) -> int:
    k = int(round((math.sqrt(8 * n + 1) - 1) / 2))
    if svec_dim(k) != n:
        raise ValueError(f"{n} is not a triangular number")
    return k


def svec(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    iu = np.triu_indices(X.shape[0])
    w = np.where(iu[0] == iu[1], 1.0, SQRT2)
    return X[iu] * w


def smat(v) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(-1)
    k = order_from_svec_dim(v.size)
    iu = np.triu_indices(k)
    w = np.where(iu[0] == iu[1], 1.0, 1.0 / SQRT2)
    X = np.zeros((k, k))
    X[iu] = v * w
    return X + np.triu(X, 1).T


def triu_vec(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    return X[np.triu_indices(X.shape[0])].copy()


def triu_mat(v) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(-1)
    k = order_from_svec_dim(v.size)
    X = np.zeros((k, k))
    X[np.triu_indices(k)] = v
    return X + np.triu(X, 1).T


def orth(A, tol=None) -> np.ndarray:
    """Orthonormal basis for the column space of ``A`` (SVD with relative cutoff)."""
    A = np.asarray(A, dtype=float)
    if A.size == 0:
        return np.zeros((A.shape[0], 0))
    tol = config.resolve_tol(tol)
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((A.shape[0], 0))
    r = int(np.sum(s > tol * max(1.0, s[0])))
    return U[:, :r]


def null_space(A, tol=None) -> np.ndarray:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n)
    tol = config.resolve_tol(tol)
    _, s, Vt = np.linalg.svd(A)
    r = int(np.sum(s > tol * max(1.0, s[0] if s.size else 0.0)))
    return Vt[r:].T.copy()


# ---------------------------------------------------------------------------
# symmetric eigendecomposition (cyclic Jacobi)
# ---------------------------------------------------------------------------

def sym_eig(M, tol=None, max_sweeps=None):
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Returns ``(w, Q)`` with eigenvalues ``w`` in descending order and
    orthonormal eigenvectors in the columns of ``Q`` so that
    ``M ~= Q @ diag(w) @ Q.T``.  Intended for desk-scale problems (order <= 64).
    Raises :class:`ConvergenceError` if the off-diagonal mass has not been
    annihilated after ``max_sweeps`` sweeps.
    """
    cfg = config.current()
    tol = config.resolve_tol(tol)
    max_sweeps = cfg.eig_max_sweeps if max_sweeps is None else max_sweeps
    A = as_sym(M, tol=max(tol, 1e-12))
    n = A.shape[0]
    if n > 64:
        raise ValueError("sym_eig is limited to order <= 64")
    Q = np.eye(n)
    fro = np.linalg.norm(A)
    if fro == 0.0 or n == 1:
        return np.diag(A).copy(), Q
    eps = np.finfo(float).eps
    diag_mask = np.eye(n, dtype=bool)

    for sweep in range(max_sweeps):
        off = np.linalg.norm(A[~diag_mask])
        if off <= eps * fro:
            break
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                app, aqq = A[p, p], A[q, q]
                # negligible relative to both diagonal entries after a few sweeps
                if sweep > 3 and abs(apq) < eps * 1e-2 * min(abs(app), abs(aqq)):
                    A[p, q] = A[q, p] = 0.0
                    continue
                theta = (aqq - app) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                colp = A[:, p].copy()
                colq = A[:, q].copy()
                A[:, p] = c * colp - s * colq
                A[:, q] = s * colp + c * colq
                rowp = A[p, :].copy()
                rowq = A[q, :].copy()
                A[p, :] = c * rowp - s * rowq
                A[q, :] = s * rowp + c * rowq
                A[p, q] = A[q, p] = 0.0
                qp = Q[:, p].copy()
                qq = Q[:, q].copy()
                Q[:, p] = c * qp - s * qq
                Q[:, q] = s * qp + c * qq
                rotated = True
        if not rotated:
            break
    else:
        off = np.linalg.norm(A[~diag_mask])
        if off > tol * (1.0 + fro):
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {off:.3e})")

    w = np.diag(A).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], Q[:, order]


def sym_rank(X, tol=None) -> int:
    w, _ = sym_eig(X)
    tol = config.resolve_tol(tol)
    return int(np.sum(np.abs(w) > tol * max(1.0, np.max(np.abs(w)))))


# ---------------------------------------------------------------------------
# univariate real-rooted polynomials
# ---------------------------------------------------------------------------

def unipoly_coeffs(q) -> np.ndarray:
    """Ascending coefficients with exact trailing (leading-term) zeros removed."""
    if isinstance(q, Polynomial):
        c = np.asarray(q.coef, dtype=float)
    else:
        c = np.asarray(q, dtype=float).reshape(-1)
    if not np.all(np.isfinite(c)):
        raise ValueError("polynomial has non-finite coefficients")
    nz = np.nonzero(c)[0]
    if nz.size == 0:
        return np.zeros(0)
    return c[: nz[-1] + 1].copy()


def poly_from_roots(roots, lead=1.0) -> Polynomial:
    return Polynomial(npoly.polyfromroots(np.asarray(roots, dtype=float)) * lead)


def _normalized(c):
    m = np.max(np.abs(c))
    return c / m if m > 0 else c


def _trim_lead(c, rel=1e-13):
    c = np.asarray(c, dtype=float)
    if c.size == 0:
        return c
    m = np.max(np.abs(c))
    k = c.size
    while k > 1 and abs(c[k - 1]) <= rel * m:
        k -= 1
    return c[:k]


def _sturm_chain(c, gcd_tol):
    """Sturm sequence of ``c``; the last member is an approximate gcd(c, c')."""
    chain = [_normalized(c), _normalized(npoly.polyder(c))]
    while chain[-1].size > 1:
        _, r = npoly.polydiv(chain[-2], chain[-1])
        r = _trim_lead(r)
        if r.size == 0 or np.max(np.abs(r)) <= gcd_tol:
            break
        chain.append(-_normalized(r))
    return chain


def _sign_changes(chain, x):
    vals = [npoly.polyval(x, p) for p in chain]
    signs = [v > 0 for v in vals if v != 0.0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _fujiwara_scale(c):
    lead = c[-1]
    d = c.size - 1
    b = 0.0
    for j in range(1, d + 1):
        a = abs(c[d - j] / lead)
        if j == d:
            a /= 2.0
        if a > 0:
            b = max(b, a ** (1.0 / j))
    b *= 2.0
    if b == 0.0:
        return 1.0
    return 2.0 ** math.ceil(math.log2(b))


_SPLIT = 0.5 - 1.0 / (2.0 + math.pi * 97.0)


def _isolate(chain, lo, hi):
    """Intervals (a, b] each holding exactly one distinct root, plus clusters."""
    out = []
    stack = [(lo, hi, _sign_changes(chain, lo), _sign_changes(chain, hi))]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n <= 0:
            continue
        if n == 1:
            out.append((a, b, 1))
            continue
        if b - a < 1e-13:
            out.append((a, b, n))
            continue
        # off-centre split: dyadic midpoints often hit roots exactly
        m = a + _SPLIT * (b - a)
        if npoly.polyval(m, chain[0]) == 0.0:
            m = a + (1.0 - _SPLIT) * (b - a)
        vm = min(max(_sign_changes(chain, m), vb), va)
        stack.append((m, b, vm, vb))
        stack.append((a, m, va, vm))
    out.sort()
    return out


def _refine(s, chain, a, b):
    fa = npoly.polyval(a, s)
    fb = npoly.polyval(b, s)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    ds = npoly.polyder(s)
    if (fa > 0) != (fb > 0):
        for _ in range(200):
            m = 0.5 * (a + b)
            if m <= a or m >= b:
                break
            fm = npoly.polyval(m, s)
            if fm == 0.0:
                return m
            if (fm > 0) == (fa > 0):
                a, fa = m, fm
            else:
                b = m
        x = 0.5 * (a + b)
        # Newton polish, kept inside the bracket
        for _ in range(3):
            d = npoly.polyval(x, ds)
            if d == 0.0:
                break
            xn = x - npoly.polyval(x, s) / d
            if not (a - (b - a) <= xn <= b + (b - a)):
                break
            x = xn
        return x
    # noise hid the sign change; fall back to bisection on Sturm counts
    va = _sign_changes(chain, a)
    for _ in range(100):
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        if va - _sign_changes(chain, m) >= 1:
            b = m
        else:
            a = m
            va = _sign_changes(chain, m)
    return 0.5 * (a + b)


def _roots_scaled(u, gcd_tol, depth=0):
    """Real roots (with multiplicity) of a polynomial whose roots lie in [-1, 1]."""
    u = _trim_lead(u)
    d = u.size - 1
    if d <= 0:
        return []
    if d == 1:
        return [-u[0] / u[1]]
    chain = _sturm_chain(u, gcd_tol)
    g = chain[-1]
    if g.size > 1:
        # dividing out the gcd leaves a Sturm sequence without common zeros
        chain = [_normalized(npoly.polydiv(ci, g)[0]) for ci in chain]
    intervals = _isolate(chain, -2.0, 2.0)
    s = chain[0]
    distinct = []
    for a, b, n in intervals:
        if n == 1:
            distinct.append(_refine(s, chain, a, b))
        else:
            distinct.extend([0.5 * (a + b)] * n)
    roots = list(distinct)
    if g.size > 1 and distinct and depth < 64:
        sub = _roots_scaled(g, gcd_tol, depth + 1)
        d_arr = np.asarray(distinct)
        for r in sub:
            roots.append(d_arr[np.argmin(np.abs(d_arr - r))])
    return roots


def _residual(r, u):
    if r.size != u.size - 1:
        return math.inf
    return float(np.max(np.abs(npoly.polyfromroots(r) * u[-1] - u)))


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


_MAX_COMPOSITIONS = 20_000


def _best_multiplicities(r, u, d):
    """Reassign multiplicities to the distinct roots in ``r`` to best reproduce ``u``.

    The approximate gcd can lose degree when several multiple roots crowd
    together; the distinct roots are still right, so the multiplicity vector
    with the smallest reconstruction residual is chosen instead.
    """
    distinct = [c for c, _ in cluster_roots(r, tol=1e-6)] if r.size else []
    n = len(distinct)
    if n == 0 or n > d or math.comb(d - 1, n - 1) > _MAX_COMPOSITIONS:
        return r
    best, best_res = r, _residual(r, u)
    for mult in _compositions(d, n):
        cand = np.repeat(distinct, mult)
        res = _residual(cand, u)
        if res < best_res:
            best, best_res = cand, res
    return np.sort(best)


def _polish_multiple(r, u, steps=8, groups=None):
    """Gauss-Newton refinement of clustered roots with their multiplicities held fixed.

    Multiple roots are ill-conditioned as individual roots but well-conditioned
    as points on the manifold of polynomials with that multiplicity structure.
    """
    if r.size != u.size - 1:
        return r
    if groups is None:
        clusters = cluster_roots(r, tol=1e-6)
        if all(m == 1 for _, m in clusters):
            return r
        groups = (np.array([c for c, _ in clusters]), np.array([m for _, m in clusters]))
    z, mult = np.array(groups[0], dtype=float), np.array(groups[1])
    lead = u[-1]
    best, best_res = r, _residual(r, u)
    for _ in range(steps):
        f = npoly.polyfromroots(np.repeat(z, mult)) * lead - u
        J = np.empty((u.size, z.size))
        for i in range(z.size):
            m = mult.copy()
            m[i] -= 1
            J[:, i] = 0.0
            col = -mult[i] * lead * npoly.polyfromroots(np.repeat(z, m))
            J[:col.size, i] = col
        dz = np.linalg.lstsq(J, -f, rcond=None)[0]
        if not np.all(np.isfinite(dz)):
            break
        z = z + dz
        cand = np.sort(np.repeat(z, mult))
        res = _residual(cand, u)
        if res < best_res:
            best, best_res = cand, res
        if np.max(np.abs(dz)) <= 4 * np.finfo(float).eps * max(1.0, np.max(np.abs(z))):
            break
    return best



def _companion_structures(u):
    """Candidate root multisets from clustering companion eigenvalues at several widths.

    A root of multiplicity m splits into a ring of radius about eps**(1/m), so
    single-linkage clusters over a range of widths cover the plausible
    multiplicity structures.  Each candidate is polished with its structure held.
    """
    z = npoly.polyroots(u)
    z = z[np.argsort(z.real)]
    out, seen = [], set()
    for h in np.geomspace(1e-9, 1e-1, 17):
        groups = [[z[0]]]
        for w in z[1:]:
            if abs(w - groups[-1][-1]) <= h:
                groups[-1].append(w)
            else:
                groups.append([w])
        mult = tuple(len(g) for g in groups)
        if mult in seen:
            continue
        seen.add(mult)
        r = np.sort(np.repeat([np.mean(g).real for g in groups], mult))
        out.append(_polish_multiple(r, u, groups=(np.array([np.mean(g).real for g in groups]), np.array(mult))))
    return out


def _coarsest_structure(candidates, u):
    """Fewest distinct roots among candidates whose residual is at rounding level."""
    res = [_residual(r, u) for r in candidates]
    best = min(res)
    accept = max(1e-14, 100 * best)
    ok = [(np.unique(r).size, rr, i) for i, (r, rr) in enumerate(zip(candidates, res)) if rr <= accept]
    return candidates[min(ok)[2]]

def real_roots(q, tol=None) -> np.ndarray:
    """All roots of a real-rooted univariate polynomial, ascending, with multiplicity.

    Distinct roots are isolated by Sturm sequences and polished by bisection and
    Newton steps on the square-free part; multiplicities come from recursing on
    the approximate gcd of ``q`` and ``q'``.  When roots crowd together the
    multiplicity structure is re-chosen from clusterings of the companion
    eigenvalues: the coarsest structure that reproduces ``q`` to rounding
    level wins.  Near-multiple roots whose
    separation is below the gcd threshold (``Config.root_gcd_tol``, relative to
    the coefficient scale) are reported as a multiple root.

    A nonzero constant has no roots.  Raises :class:`ValueError` for the zero
    polynomial and :class:`NotRealRootedError` when fewer than ``deg q`` real
    roots are found or the reconstruction residual exceeds ``1e3 * tol``.
    """
    cfg = config.current()
    tol = config.resolve_tol(tol)
    c = unipoly_coeffs(q)
    if c.size == 0:
        raise ValueError("the zero polynomial has no finite root set")
    d = c.size - 1
    if d == 0:
        return np.zeros(0)
    # rounding-level coefficients would dominate after rescaling towards 0
    c = np.where(np.abs(c) <= 1e-14 * np.max(np.abs(c)), 0.0, c)
    scale = _fujiwara_scale(c)
    u = _normalized(c * scale ** np.arange(d + 1))
    r = np.sort(np.asarray(_roots_scaled(u, cfg.root_gcd_tol), dtype=float))
    if r.size != d or _residual(r, u) > 1e3 * tol:
        r = _best_multiplicities(r, u, d)
    r = _polish_multiple(r, u)
    if d > 1 and r.size == d and np.min(np.diff(r)) < 1e-3:
        # crowded or repeated roots: the gcd may have picked the wrong multiplicities
        r = _coarsest_structure([r] + _companion_structures(u), u)
    if r.size < d:
        raise NotRealRootedError(
            f"only {r.size} of {d} roots are real", roots=r * scale, n_missing=d - r.size)
    resid = _residual(r, u)
    if resid > 1e3 * tol:
        raise NotRealRootedError(
            f"root reconstruction residual {resid:.2e} exceeds tolerance", roots=r * scale)
    return r * scale


def cluster_roots(roots, tol=None):
    """Group sorted roots into ``(value, multiplicity)`` pairs.

    Roots within ``Config.root_cluster * tol * max(1, |root|)`` of the previous
    member of a cluster are merged.
    """
    tol = config.resolve_tol(tol)
    width = config.current().root_cluster * tol
    out = []
    for r in np.sort(np.asarray(roots, dtype=float)):
        if out and abs(r - out[-1][0]) <= width * max(1.0, abs(r)):
            v, m = out[-1]
            out[-1] = ((v * m + r) / (m + 1), m + 1)
        else:
            out.append((float(r), 1))
    return out


# ---------------------------------------------------------------------------
# multivariate polynomials
# ---------------------------------------------------------------------------

class MultiPoly:
    """Sparse polynomial in ``nvars`` variables.

    ``terms`` maps exponent tuples to coefficients (ints, Fractions or floats are
    all accepted; arithmetic on integer coefficients stays exact).
    """

    __slots__ = ("nvars", "terms", "_E", "_c")

    def __init__(self, nvars: int, terms=()):
        if nvars < 1:
            raise ValueError("nvars must be >= 1")
        self.nvars = int(nvars)
        acc = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for exps, coef in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.nvars or min(exps) < 0:
                raise ValueError(f"bad exponent vector {exps} for {self.nvars} variables")
            acc[exps] = acc.get(exps, 0) + coef
        self.terms = {e: c for e, c in acc.items() if c != 0}
        self._E = None
        self._c = None

    @classmethod
    def variable(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_zero(self):
        return not self.terms

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def _arrays(self):
        if self._E is None:
            keys = list(self.terms)
            self._E = np.array(keys, dtype=float).reshape(len(keys), self.nvars)
            self._c = np.array([float(self.terms[k]) for k in keys])
        return self._E, self._c

    def __call__(self, x):
        X = np.asarray(x, dtype=float)
        single = X.ndim == 1
        X = np.atleast_2d(X)
        if X.shape[1] != self.nvars:
            raise ValueError(f"expected points with {self.nvars} coordinates")
        E, c = self._arrays()
        if c.size == 0:
            out = np.zeros(X.shape[0])
        else:
            out = np.prod(X[:, None, :] ** E[None, :, :], axis=2) @ c
        return float(out[0]) if single else out

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable counts differ")
            return other
        if isinstance(other, Number):
            return MultiPoly.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly(self.nvars, list(self.terms.items()) + list(other.terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = MultiPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        return isinstance(other, MultiPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def allclose(self, other, rtol=1e-8) -> bool:
        keys = set(self.terms) | set(other.terms)
        scale = max([abs(float(c)) for c in self.terms.values()]
                    + [abs(float(c)) for c in other.terms.values()] + [0.0])
        return all(abs(float(self.terms.get(k, 0)) - float(other.terms.get(k, 0))) <= rtol * scale
                   for k in keys)

    def __repr__(self):
        return f"MultiPoly(nvars={self.nvars}, degree={self.degree}, nterms={len(self.terms)})"

    def to_json(self):
        return {"nvars": self.nvars,
                "terms": [{"exps": list(e), "coef": _json_number(c)}
                          for e, c in sorted(self.terms.items())]}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(int(obj["nvars"]), [(t["exps"], t["coef"]) for t in obj["terms"]])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed MultiPoly JSON: {exc}") from exc


def _json_number(c):
    if isinstance(c, (int, np.integer)):
        return int(c)
    f = float(c)
    return int(f) if f.is_integer() and abs(f) < 2 ** 53 else f


def _triu_index(k):
    idx = {}
    for n, (i, j) in enumerate(zip(*np.triu_indices(k))):
        idx[(int(i), int(j))] = n
        idx[(int(j), int(i))] = n
    return idx


def _minor_poly(k, rows):
    idx = _triu_index(k)
    nv = svec_dim(k)
    terms = {}
    for perm in itertools.permutations(rows):
        sign = _perm_sign([rows.index(p) for p in perm])
        e = [0] * nv
        for r, c in zip(rows, perm):
            e[idx[(r, c)]] += 1
        e = tuple(e)
        terms[e] = terms.get(e, 0) + sign
    return MultiPoly(nv, terms)


def _perm_sign(p):
    p = list(p)
    sign = 1
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def det_poly(k: int) -> MultiPoly:
    """Determinant of a symmetric ``k x k`` matrix in its ``triu`` variables (k <= 4)."""
    if not 1 <= k <= 4:
        raise ValueError("built-in determinant polynomial supports 1 <= k <= 4")
    return _minor_poly(k, list(range(k)))


def principal_minor_poly(k: int, j: int) -> MultiPoly:
    """Sum of the ``j x j`` principal minors of a symmetric ``k x k`` matrix."""
    if not 1 <= j <= k <= 4:
        raise ValueError("principal_minor_poly supports 1 <= j <= k <= 4")
    out = MultiPoly(svec_dim(k))
    for rows in itertools.combinations(range(k), j):
        out = out + _minor_poly(k, list(rows))
    return out


def poly_restrict(p: MultiPoly, e, x, tol=None) -> Polynomial:
    """The univariate polynomial ``t -> p(t e - x)``.

    Computed by sampling at ``deg p + 1`` Chebyshev points on
    ``[-|x| - 1, |x| + 1]`` and interpolating.  Its leading coefficient is
    ``p(e)``.
    """
    if not p.is_homogeneous():
        raise ValueError("poly_restrict needs a homogeneous polynomial")
    e = as_vector(e, p.nvars)
    x = as_vector(x, p.nvars)
    pe = p(e)
    if not pe > 0:
        raise HyperbolicityDirectionError(f"p(e) = {pe!r} is not positive")
    d = p.degree
    if d == 0:
        return Polynomial([pe])
    R = float(np.linalg.norm(x)) + 1.0
    nodes = np.cos(np.pi * (np.arange(d + 1) + 0.5) / (d + 1))
    vals = p(np.outer(nodes * R, e) - x[None, :])
    cc = cheb.chebfit(nodes, vals, d)
    c = cheb.cheb2poly(cc) / R ** np.arange(d + 1)
    return Polynomial(c)


# ---------------------------------------------------------------------------
# small LP-based feasibility
# ---------------------------------------------------------------------------

def feasible_point(A, b, strict_rows=(), slack=None):
    """Find ``x`` with ``A x >= b`` and the listed rows satisfied with margin.

    Solves ``max t`` subject to ``A_S x - t >= b_S``, ``A_R x >= b_R``,
    ``t <= 1`` with the HiGHS LP solver.  Returns ``x`` if the optimal margin is
    at least ``slack`` (default ``Config.feasibility_slack``), otherwise
    ``None``.  ``None`` means "infeasible or not detected at this slack"; no
    certificate of infeasibility is produced.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).reshape(-1)
    m, n = A.shape
    if b.size != m:
        raise ValueError(f"A has {m} rows but b has {b.size} entries")
    if n > 64:
        raise ValueError("feasible_point is limited to 64 columns")
    slack = config.current().feasibility_slack if slack is None else slack
    strict = np.zeros(m, dtype=bool)
    strict[list(strict_rows)] = True
    # variables: x (n, free), t (1); minimize -t
    G = np.hstack([-A, strict[:, None].astype(float)])
    h = -b
    cost = np.zeros(n + 1)
    cost[-1] = -1.0
    bounds = [(None, None)] * n + [(None, 1.0) if strict.any() else (0.0, 0.0)]
    res = linprog(cost, A_ub=G, b_ub=h, bounds=bounds, method="highs")
    if res.status != 0:
        return None
    x = res.x[:n]
    t = res.x[-1]
    if strict.any() and t < slack:
        return None
    lhs = A @ x
    scale = 1.0 + np.max(np.abs(x)) if n else 1.0
    if np.any(lhs < b - 1e-9 * scale) or (strict.any() and np.any(lhs[strict] - b[strict] < 0.5 * slack)):
        return None
    return x


def max_support_point(A, eq_rows=()):
    """Point of ``{x : A x >= 0, A_eq x = 0}`` with as many positive rows as possible.

    Maximizes ``sum_i min(a_i . x, 1)`` over the non-equality rows.  At an
    optimum every row that is positive somewhere on the set is positive, so the
    returned mask identifies the relative interior support exactly (up to the
    LP solver's tolerance).  Returns ``(x, positive_mask)``.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    m, n = A.shape
    eq = np.zeros(m, dtype=bool)
    eq[list(eq_rows)] = True
    rest = np.nonzero(~eq)[0]
    r = rest.size
    if r == 0:
        return np.zeros(n), np.zeros(m, dtype=bool)
    # variables x (n free), s (r in [0, 1]); maximize sum s
    cost = np.concatenate([np.zeros(n), -np.ones(r)])
    A_ub = np.hstack([-A[rest], np.eye(r)])
    b_ub = np.zeros(r)
    A_eq = np.hstack([A[eq], np.zeros((int(eq.sum()), r))]) if eq.any() else None
    b_eq = np.zeros(int(eq.sum())) if eq.any() else None
    bounds = [(None, None)] * n + [(0.0, 1.0)] * r
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if res.status != 0:
        raise ConvergenceError(f"support LP failed: {res.message}")
    x = res.x[:n]
    s = res.x[n:]
    pos = np.zeros(m, dtype=bool)
    pos[rest] = s > 1e-7
    return x, pos
