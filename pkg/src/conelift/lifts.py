"""Cone lifts ``C = pi(K & L)``: validation, properness, and factorizations.

A lift is described by a linear map ``pi`` (``n x d``), an orthonormal basis
``L`` (``d x r``) of a subspace of ``R^d``, and a cone ``K`` of dimension
``d``.  It is proper when ``L`` meets the relative interior of ``K``.

Proper lifts give factorizations of the pairing between ``C`` and its dual:
``pi^T y`` splits as ``a + w`` with ``a`` in ``K*`` and ``w`` orthogonal to
``L``, so ``<x, y> = sum_i <b_i(x), a_i(y)>`` for any preimage ``b(x)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import config
from .cones import (PSD, Exponential, Hyperbolicity, DerivativePSD, OrthantFace, Orthant,
                    PolyFace, Polyhedral, Product, PSDFace, SecondOrder, SOCFace, chain_length,
                    cone_from_json, cone_to_json, face_chain_length, faces_exact, implicit_equalities, member,
                    minimal_face, project, project_dual, relint_member)
from .errors import (CertificateRejected, DecompositionNotFound, DualOracleUnavailable,
                     SplittingFailed, UnsupportedConeError)
from .numerics import as_sym, feasible_point, max_support_point, null_space, orth, smat, svec, svec_dim


@dataclass
class LiftDesc:
    pi: np.ndarray
    L: np.ndarray
    K: object
    witness: np.ndarray | None = None
    annotations: dict = field(default_factory=dict)

    def __post_init__(self):
        self.pi = np.atleast_2d(np.asarray(self.pi, dtype=float))
        d = self.K.dim
        if self.pi.shape[1] != d:
            raise ValueError(f"pi has {self.pi.shape[1]} columns but K has dimension {d}")
        L = np.asarray(self.L, dtype=float).reshape(d, -1)
        if L.shape[1] and np.max(np.abs(L.T @ L - np.eye(L.shape[1]))) > 1e-8:
            raise ValueError("L must have orthonormal columns")
        self.L = L
        if self.witness is not None:
            self.witness = np.asarray(self.witness, dtype=float).reshape(-1)
            ok, why = _witness_ok(self, self.witness)
            if not ok:
                raise CertificateRejected(f"supplied witness rejected: {why}")

    @property
    def n(self):
        return self.pi.shape[0]

    @property
    def d(self):
        return self.pi.shape[1]

    def factors(self):
        return self.K.factors if isinstance(self.K, Product) else (self.K,)

    def to_json(self):
        out = {"pi": self.pi.tolist(), "L": self.L.tolist(), "K": cone_to_json(self.K)}
        if self.witness is not None:
            out["witness"] = self.witness.tolist()
        return out

    @classmethod
    def from_json(cls, obj):
        K = cone_from_json(obj["K"])
        L = np.array(obj["L"], dtype=float).reshape(K.dim, -1)
        w = obj.get("witness")
        return cls(np.array(obj["pi"], dtype=float), L, K, None if w is None else np.array(w, dtype=float))


def _in_span(L, z, tol=1e-8):
    return float(np.linalg.norm(z - L @ (L.T @ z))) <= tol * max(1.0, float(np.linalg.norm(z)))


def _witness_ok(lift, z):
    if z.size != lift.d:
        return False, "wrong dimension"
    if not _in_span(lift.L, z):
        return False, "not in the subspace L"
    if not relint_member(lift.K, z):
        return False, "not in the relative interior of K"
    return True, ""


# ---------------------------------------------------------------------------
# projections, batched over product factors
# ---------------------------------------------------------------------------

def _smat_batch(V, k):
    iu = np.triu_indices(k)
    w = np.where(iu[0] == iu[1], 1.0, 1.0 / np.sqrt(2.0))
    X = np.zeros((V.shape[0], k, k))
    X[:, iu[0], iu[1]] = V * w
    X[:, iu[1], iu[0]] = V * w
    return X


def _svec_batch(X, k):
    iu = np.triu_indices(k)
    w = np.where(iu[0] == iu[1], 1.0, np.sqrt(2.0))
    return X[:, iu[0], iu[1]] * w


def projector(K, dual=False):
    """Vectorized projection onto ``K`` (or ``K*``), grouping like factors."""
    factors = K.factors if isinstance(K, Product) else (K,)
    off = np.cumsum([0] + [f.dim for f in factors])
    groups = {}
    for i, f in enumerate(factors):
        if isinstance(f, Orthant):
            key = ("orthant",)
        elif isinstance(f, PSD):
            key = ("psd", f.k)
        else:
            key = ("other", i)
        groups.setdefault(key, []).append(i)
    plan = []
    for key, idx in groups.items():
        cols = np.concatenate([np.arange(off[i], off[i + 1]) for i in idx])
        if key[0] == "psd":
            cols = cols.reshape(len(idx), -1)
        plan.append((key, cols, factors[idx[0]]))

    def apply(x):
        out = np.empty_like(x)
        for key, cols, f in plan:
            if key[0] == "orthant":
                out[cols] = np.maximum(x[cols], 0.0)
            elif key[0] == "psd":
                w, V = np.linalg.eigh(_smat_batch(x[cols], key[1]))
                P = np.einsum("bij,bj,bkj->bik", V, np.maximum(w, 0.0), V)
                out[cols] = _svec_batch(P, key[1])
            else:
                out[cols] = project_dual(f, x[cols]) if dual else project(f, x[cols])
        return out

    return apply


# ---------------------------------------------------------------------------
# properness
# ---------------------------------------------------------------------------

@dataclass
class ProperResult:
    found: bool
    witness: np.ndarray | None
    exact: bool
    message: str = ""


def _polyhedral_rows(lift):
    """Rows ``M`` with ``K & L = {L c : M c >= 0}`` and the strict subset, or None."""
    rows, strict = [], []
    off = 0
    for f in lift.factors():
        B = lift.L[off:off + f.dim]
        if isinstance(f, Orthant):
            strict.extend(range(len(rows), len(rows) + f.dim))
            rows.extend(B)
        elif isinstance(f, Polyhedral):
            eq = implicit_equalities(f)
            M = f._An @ B
            strict.extend(len(rows) + i for i in range(f.n_rows) if i not in eq)
            rows.extend(M)
        else:
            return None
        off += f.dim
    return np.array(rows).reshape(-1, lift.L.shape[1]), strict


def _intersection_samples(lift, count, seed, iters=300):
    """Nonzero points of ``K & L`` from alternating projections at random starts."""
    rng = np.random.default_rng(seed)
    P = projector(lift.K)
    L = lift.L
    out = []
    for _ in range(count):
        z = L @ rng.standard_normal(L.shape[1])
        for _ in range(iters):
            z = L @ (L.T @ P(z))
        z = P(z)
        nz = np.linalg.norm(z)
        if nz > 1e-6 and _in_span(L, z, 1e-6) and member(lift.K, z, 1e-7):
            out.append(z / nz)
    return out


def check_proper(lift: LiftDesc, samples=64, seed=None) -> ProperResult:
    """Find a point of ``L`` in the relative interior of ``K``.

    A supplied witness is verified and returned.  Otherwise the search is an
    LP (exact) when every factor is an orthant or polyhedral cone, and a
    sampling heuristic over alternating projections for other factors, where
    "not found" is inconclusive.
    """
    seed = config.current().seed if seed is None else seed
    if lift.witness is not None:
        return ProperResult(True, lift.witness, True, "supplied witness verified")
    if lift.L.shape[1] == 0:
        return ProperResult(False, None, True, "L is the zero subspace")
    rows = _polyhedral_rows(lift)
    if rows is not None:
        M, strict = rows
        c = feasible_point(M, np.zeros(M.shape[0]), strict)
        if c is None:
            return ProperResult(False, None, True, "L misses the relative interior of K")
        z = lift.L @ c
        z /= np.linalg.norm(z)
        return ProperResult(True, z, True)
    try:
        pts = _intersection_samples(lift, samples, seed)
    except (UnsupportedConeError, DualOracleUnavailable) as exc:
        return ProperResult(False, None, False, f"no projection available: {exc}")
    if pts:
        z = np.sum(pts, axis=0)
        z = lift.L @ (lift.L.T @ z)
        if relint_member(lift.K, z, 1e-7):
            return ProperResult(True, z / np.linalg.norm(z), False)
    return ProperResult(False, None, False, "no relative interior point found (inconclusive)")


# ---------------------------------------------------------------------------
# properization
# ---------------------------------------------------------------------------

def _face_restriction(f, F):
    """Isometric embedding ``E`` of the span of face ``F`` and the restricted cone."""
    if isinstance(F, OrthantFace):
        S = sorted(F.support)
        return np.eye(f.dim)[:, S], (Orthant(len(S)) if S else None)
    if isinstance(F, PSDFace):
        U = F.basis
        r = U.shape[1]
        if r == 0:
            return np.zeros((f.dim, 0)), None
        cols = [svec(U @ smat(b) @ U.T) for b in np.eye(svec_dim(r))]
        return np.array(cols).T, PSD(r)
    if isinstance(F, SOCFace):
        if F.kind == "zero":
            return np.zeros((f.dim, 0)), None
        if F.kind == "ray":
            return F.direction[:, None], Orthant(1)
        return np.eye(f.dim), f
    if isinstance(F, PolyFace):
        E = null_space(f.A[sorted(F.active)]) if F.active else np.eye(f.dim)
        if E.shape[1] == 0:
            return E, None
        rest = [i for i in range(f.n_rows) if i not in F.active]
        A = f.A[rest] @ E if rest else np.zeros((0, E.shape[1]))
        return E, Polyhedral(A) if A.shape[0] else Polyhedral(np.zeros((1, E.shape[1])))
    raise UnsupportedConeError(f"cannot restrict {type(f).__name__} to a face")


def properize(lift: LiftDesc, samples=64, seed=None) -> LiftDesc:
    """Restrict ``K`` to the smallest product face containing ``K & L``.

    The returned lift describes the same set and is proper.  Annotations
    record per-factor chain lengths before and after, and flag results from
    the sampling heuristic as "face possibly not minimal".
    """
    seed = config.current().seed if seed is None else seed
    rows = _polyhedral_rows(lift)
    exact = rows is not None
    z = None
    if lift.witness is not None:
        z = lift.witness
    elif exact:
        M, _ = rows
        c, pos = max_support_point(M) if M.shape[0] else (np.zeros(lift.L.shape[1]), [])
        z = lift.L @ c
        if np.linalg.norm(z) < 1e-12:
            z = None
    else:
        pts = _intersection_samples(lift, samples, seed)
        if pts:
            z = lift.L @ (lift.L.T @ np.sum(pts, axis=0))
    if z is None:
        return LiftDesc(np.zeros((lift.n, 1)), np.zeros((1, 0)), Orthant(1),
                        annotations={"degenerate": True, "note": "K & L is {0}"})
    z = z / np.max(np.abs(z))
    if relint_member(lift.K, z, 1e-7):
        return LiftDesc(lift.pi, lift.L, lift.K, z, {"unchanged": True, "exact": exact})

    factors = lift.factors()
    F = minimal_face(lift.K, z, 1e-7)
    parts = F.parts if isinstance(lift.K, Product) else (F,)
    blocks, new_factors, before, after = [], [], [], []
    for f, Fi in zip(factors, parts):
        E, g = _face_restriction(f, Fi)
        blocks.append(E)
        before.append(chain_length(f).value)
        after.append(face_chain_length(f, Fi).value)
        if g is not None:
            new_factors.append(g)
    E = _block_diag(blocks)
    if not new_factors:
        return LiftDesc(np.zeros((lift.n, 1)), np.zeros((1, 0)), Orthant(1),
                        annotations={"degenerate": True, "note": "K & L is {0}"})
    K2 = Product(tuple(new_factors)) if isinstance(lift.K, Product) else new_factors[0]
    # preimage of L under E: solve L a = E b
    N = null_space(np.hstack([lift.L, -E]))
    L2 = orth(N[lift.L.shape[1]:])
    w2 = E.T @ z
    notes = {"exact": exact, "chain_before": before, "chain_after": after}
    if not exact or not faces_exact(lift.K):
        notes["warning"] = "face possibly not minimal"
    try:
        out = LiftDesc(lift.pi @ E, L2, K2, w2, notes)
    except CertificateRejected:
        notes["warning"] = "face possibly not minimal"
        out = LiftDesc(lift.pi @ E, L2, K2, None, notes)
    return out


def _block_diag(blocks):
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols))
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


# ---------------------------------------------------------------------------
# sample-based validation
# ---------------------------------------------------------------------------

@dataclass
class ValidationReport:
    preimage_ok: bool
    containment_ok: bool
    preimage_residuals: list
    preimage_failures: list
    containment_violations: list
    n_random_points: int

    @property
    def passed(self):
        return self.preimage_ok and self.containment_ok

    def to_json(self):
        return {"passed": self.passed,
                "preimage": {"ok": self.preimage_ok, "max_residual": max(self.preimage_residuals, default=0.0),
                             "failures": self.preimage_failures},
                "containment": {"ok": self.containment_ok, "points": self.n_random_points,
                                "violations": self.containment_violations}}


def random_lift_points(lift: LiftDesc, count, seed=None):
    """Points of ``K & L``: random moves from the witness, else projection samples."""
    seed = config.current().seed if seed is None else seed
    rng = np.random.default_rng(seed)
    if lift.witness is None:
        try:
            return _intersection_samples(lift, count, seed)
        except (UnsupportedConeError, DualOracleUnavailable):
            return []
    z0 = lift.witness
    out = []
    for _ in range(count):
        step = lift.L @ rng.standard_normal(lift.L.shape[1])
        step *= 4.0 * np.linalg.norm(z0) / max(np.linalg.norm(step), 1e-300)
        for _ in range(60):
            if member(lift.K, z0 + step):
                out.append(z0 + step)
                break
            step *= 0.5
    return out


def validate_lift(lift: LiftDesc, primal_samples, dual_samples, tol=None, n_random=50, seed=None):
    """Check ``pi(K & L)`` against samples of ``C`` and of its dual.

    Preimage direction: each ``(x, u)`` must have ``u`` in ``K & L`` and
    ``pi u = x``.  Containment direction: images of random points of ``K & L``
    (and of the supplied preimages) must satisfy ``<y, .> >= 0`` for each dual
    sample ``y``.  Both are evidence, not proofs.
    """
    tol = config.resolve_tol(tol)
    resid, pfail = [], []
    for i, (x, u) in enumerate(primal_samples):
        x = np.asarray(x, dtype=float).reshape(-1)
        u = np.asarray(u, dtype=float).reshape(-1)
        if x.size != lift.n or u.size != lift.d:
            raise ValueError(f"primal sample {i} has wrong dimensions")
        s = max(1.0, float(np.linalg.norm(x)), float(np.linalg.norm(u)))
        r = float(np.linalg.norm(lift.pi @ u - x))
        resid.append(r)
        why = []
        if r > tol * s * 10:
            why.append(f"pi(u) - x residual {r:.3e}")
        if not _in_span(lift.L, u, max(tol * 10, 1e-12)):
            why.append("u not in L")
        if not member(lift.K, u, tol):
            why.append("u not in K")
        if why:
            pfail.append({"index": i, "reasons": why})
    ys = []
    for j, y in enumerate(dual_samples):
        y = np.asarray(y, dtype=float).reshape(-1)
        if y.size != lift.n:
            raise ValueError(f"dual sample {j} has wrong dimension")
        ys.append(y)
    pts = random_lift_points(lift, n_random, seed) + [np.asarray(u, dtype=float) for _, u in primal_samples]
    viol = []
    for i, z in enumerate(pts):
        x = lift.pi @ z
        for j, y in enumerate(ys):
            v = float(y @ x)
            if v < -tol * max(1.0, np.linalg.norm(x) * np.linalg.norm(y)) * 10:
                viol.append({"point": i, "dual": j, "value": v})
    return ValidationReport(not pfail, not viol, resid, pfail, viol, len(pts))


def heuristic_preimage(lift: LiftDesc, x, iters=2000):
    """Least squares in ``L``, then alternate with projections onto ``K``.  May return None."""
    x = np.asarray(x, dtype=float).reshape(-1)
    A = lift.pi @ lift.L
    c, *_ = np.linalg.lstsq(A, x, rcond=None)
    u = lift.L @ c
    if member(lift.K, u) and np.linalg.norm(lift.pi @ u - x) <= 1e-8 * max(1.0, np.linalg.norm(x)):
        return u
    Ap = np.linalg.pinv(A)
    N = null_space(A)
    P = projector(lift.K)
    for _ in range(iters):
        v = P(u)
        c = lift.L.T @ v
        c = Ap @ x + N @ (N.T @ c)
        u = lift.L @ c
        if member(lift.K, u, 1e-9):
            return u
    return None


# ---------------------------------------------------------------------------
# factorization through a proper lift
# ---------------------------------------------------------------------------

@dataclass
class FactorizationData:
    """Per-factor tables ``b_i(s)`` in ``K_i`` and ``a_i(t)`` in ``K_i*``."""
    primal_labels: list
    dual_labels: list
    b: dict
    a: dict
    offsets: np.ndarray
    max_error: float = 0.0

    def terms(self, s, t):
        """``[<b_i(s), a_i(t)>]_i``."""
        bs, at = self.b[s], self.a[t]
        off = self.offsets
        return np.array([bs[off[i]:off[i + 1]] @ at[off[i]:off[i + 1]] for i in range(len(off) - 1)])

    def to_json(self):
        off = self.offsets
        split = lambda v: [v[off[i]:off[i + 1]].tolist() for i in range(len(off) - 1)]
        return {"primal": [{"label": _label_out(s), "b": split(self.b[s])} for s in self.primal_labels],
                "dual": [{"label": _label_out(t), "a": split(self.a[t])} for t in self.dual_labels],
                "max_error": self.max_error}

    @classmethod
    def from_json(cls, obj):
        """Rebuild from :meth:`to_json` output; list labels become frozensets."""
        try:
            prim = [(_label_in(r["label"]), r["b"]) for r in obj["primal"]]
            dual = [(_label_in(r["label"]), r["a"]) for r in obj["dual"]]
            blocks = prim[0][1] if prim else dual[0][1]
            off = np.cumsum([0] + [len(v) for v in blocks])
            b = {l: np.concatenate([np.asarray(v, dtype=float) for v in parts]) for l, parts in prim}
            a = {l: np.concatenate([np.asarray(v, dtype=float) for v in parts]) for l, parts in dual}
        except (KeyError, TypeError, IndexError) as exc:
            raise ValueError(f"malformed factorization tables: {exc}") from exc
        for l, v in itertools.chain(b.items(), a.items()):
            if v.size != off[-1]:
                raise ValueError(f"table entry {l!r} has the wrong block sizes")
        return cls([l for l, _ in prim], [l for l, _ in dual], b, a, off, float(obj.get("max_error", 0.0)))


def _label_out(l):
    return sorted(l) if isinstance(l, frozenset) else l


def _label_in(l):
    return frozenset(l) if isinstance(l, list) else l


def _dykstra_dual(lift, v, tol, max_iter):
    """``a`` in ``K*`` with ``a - v`` orthogonal to ``L``, by Dykstra's method."""
    P = projector(lift.K, dual=True)
    L = lift.L
    target = L.T @ v
    x = v.copy()
    p = np.zeros_like(v)
    q = np.zeros_like(v)
    scale = max(1.0, float(np.linalg.norm(v)))
    trace = []
    for it in range(1, max_iter + 1):
        y = P(x + p)
        p = x + p - y
        z = y + q
        x = z - L @ (L.T @ z - target)
        q = z - x
        if it % 10 == 0:
            a = P(x)
            r = float(np.linalg.norm(L.T @ a - target)) / scale
            if it % 1000 == 0 or r <= tol:
                trace.append((it, r))
            if r <= tol:
                return a, trace
    raise DecompositionNotFound(f"decomposition not found (tolerance {tol:g}) after {max_iter} iterations",
                                trace)


def factorize(lift: LiftDesc, primal_samples, dual_samples, tol=None) -> FactorizationData:
    """Factor ``<x, y>`` through a proper lift.

    ``primal_samples`` holds ``(label, x, preimage)`` triples and
    ``dual_samples`` holds ``(label, y)`` pairs.  For each ``y`` the vector
    ``pi^T y`` is split as ``a + w`` with ``a`` in ``K*`` and ``w`` orthogonal
    to ``L`` (Dykstra alternating projections), and ``b(x)`` is the preimage.
    """
    cfg = config.current()
    tol = cfg.dykstra_tol if tol is None else tol
    if any(isinstance(f, (Hyperbolicity, DerivativePSD, Exponential)) for f in lift.factors()):
        raise DualOracleUnavailable("factorize needs dual projections for every factor")
    proper = check_proper(lift)
    if not proper.found:
        raise CertificateRejected("lift is not known to be proper; run properize first")
    off = np.cumsum([0] + [f.dim for f in lift.factors()])
    b, a = {}, {}
    xs = {}
    for s, x, u in primal_samples:
        u = np.asarray(u, dtype=float).reshape(-1)
        if not member(lift.K, u) or not _in_span(lift.L, u):
            raise CertificateRejected(f"preimage for {s!r} is not in K & L")
        b[s] = u
        xs[s] = np.asarray(x, dtype=float).reshape(-1)
    ys = {}
    for t, y in dual_samples:
        y = np.asarray(y, dtype=float).reshape(-1)
        v = lift.pi.T @ y
        if np.linalg.norm(v - lift.L @ (lift.L.T @ v)) == 0.0 and lift.L.shape[1] == lift.d:
            # L is everything, so a = pi^T y must lie in K*
            a[t] = v
            if np.linalg.norm(projector(lift.K, dual=True)(v) - v) > tol * max(1.0, np.linalg.norm(v)):
                raise DecompositionNotFound(f"pi^T y for {t!r} is not in K*", [])
        else:
            a[t], _ = _dykstra_dual(lift, v, tol, cfg.dykstra_max_iter)
        ys[t] = y
    err = 0.0
    for (s, x), (t, y) in itertools.product(xs.items(), ys.items()):
        lhs = float(x @ y)
        rhs = float(b[s] @ a[t])
        scale = max(1.0, np.linalg.norm(b[s]) * np.linalg.norm(a[t]))
        err = max(err, abs(lhs - rhs) / scale)
    if err > 10 * tol:
        raise CertificateRejected(f"bilinear identity fails: relative error {err:.3e}")
    return FactorizationData(list(xs), list(ys), b, a, off, err)


# ---------------------------------------------------------------------------
# scaled diagonally dominant matrices
# ---------------------------------------------------------------------------

def sdd_pairs(n):
    return list(itertools.combinations(range(n), 2))


def sdd_decompose(X, tol=None) -> dict:
    """Split ``X`` into PSD ``2 x 2`` blocks, one per pair ``i < j``.

    Each diagonal entry ``X_ii`` is shared among the pairs ``(i, j)`` in
    proportion to ``|X_ij|`` (uniformly when row ``i`` has no off-diagonal
    mass).  This is a sufficient test: it succeeds on diagonally dominant
    matrices with nonnegative diagonal but may fail on other SDD matrices.
    """
    tol = config.resolve_tol(tol)
    X = as_sym(X)
    n = X.shape[0]
    if n < 2:
        raise ValueError("sdd_decompose needs order at least 2")
    W = np.abs(X - np.diag(np.diag(X)))
    rows = W.sum(axis=1)
    share = np.where(rows[:, None] > 0, W / np.where(rows > 0, rows, 1.0)[:, None], 1.0 / (n - 1))
    np.fill_diagonal(share, 0.0)
    D = np.diag(X)[:, None] * share
    s = max(1.0, float(np.max(np.abs(X))))
    out = {}
    bad = []
    for i, j in sdd_pairs(n):
        M = np.array([[D[i, j], X[i, j]], [X[i, j], D[j, i]]])
        if M[0, 0] < -tol * s or M[1, 1] < -tol * s or M[0, 0] * M[1, 1] - M[0, 1] ** 2 < -tol * s * s:
            bad.append((i, j))
        out[(i, j)] = M
    if bad:
        raise SplittingFailed(f"blocks {bad} are not PSD under proportional splitting")
    return out


def sdd_lift(n: int) -> LiftDesc:
    """The ``(PSD_2)^m`` lift of the ``n x n`` SDD cone, ``m = n (n - 1) / 2``.

    Points of ``C`` and ``K`` use ``svec`` coordinates; ``L`` is everything and
    ``pi`` adds up the embedded blocks.  The witness is the lift of ``I``.
    """
    if n < 2:
        raise ValueError("SDD lift needs order at least 2")
    pairs = sdd_pairs(n)
    dn = svec_dim(n)
    pi = np.zeros((dn, 3 * len(pairs)))
    for b, (i, j) in enumerate(pairs):
        for c, blk in enumerate(np.eye(3)):
            M = smat(blk)
            E = np.zeros((n, n))
            E[np.ix_([i, j], [i, j])] = M
            pi[:, 3 * b + c] = svec(E)
    K = Product(tuple(PSD(2) for _ in pairs))
    witness = sdd_preimage(np.eye(n))
    return LiftDesc(pi, np.eye(3 * len(pairs)), K, witness, {"pairs": pairs})


def sdd_preimage(X) -> np.ndarray:
    blocks = sdd_decompose(X)
    return np.concatenate([svec(blocks[p]) for p in sorted(blocks)])
