"""Ramsey bounds, colour tables, and the zero-pattern auditor.

A k-neighborly cone with ``N`` certified rays cannot have a lift through a
product of ``m`` cones whose chain lengths are all at most ``k + 1`` once
``N >= R_k(k + 1; (k + 1)^m)``.  The argument colours each k-subset ``T`` of
the rays by the chain lengths of the faces spanned by the lifted points and
finds a monochromatic ``(k + 1)``-set, which forces a zero that the
certificate says is positive.  :func:`audit` runs that argument on concrete
data, and :func:`min_factors_bound` turns the Ramsey bound into a lower bound
on ``m``.

Ramsey upper bound
------------------
``ramsey_upper(k, m, n)`` returns ``R^_k(m; n) >= R_k(m; n)``:

* ``R^_k(m; n) = m`` when ``m <= k`` (at most one k-subset).
* ``R^_1(m; n) = n (m - 1) + 1`` (pigeonhole).
* For ``k >= 2`` set ``t = R^_{k-1}(m - 1; n) + 1``, ``need_t = 1`` and, for
  ``j = t - 1, ..., 1``,
  ``need_j = n^C(j - 1, k - 2) * (need_{j+1} - 1) + 2``.  Then
  ``R^_k(m; n) = need_1``.

Why this is an upper bound: on a ground set of size ``need_1`` build a
sequence ``x_1, x_2, ...`` together with candidate sets ``S_0 ⊇ S_1 ⊇ ...``
(``S_0`` is everything).  Step ``j`` removes some ``x_j`` from ``S_{j-1}`` and
splits the rest by the colours of ``B + {y}`` over the ``C(j - 1, k - 2)``
(k-1)-subsets ``B`` of ``{x_1..x_j}`` that contain ``x_j``.  That gives at most
``n^C(j - 1, k - 2)`` classes, and ``S_j`` is the largest.  So
``|S_j| >= ceil((|S_{j-1}| - 1) / n^C(j - 1, k - 2))``, and
``|S_{j-1}| >= need_j`` implies ``|S_j| >= need_{j+1}``.  Hence ``t`` elements
get picked.  By construction the colour of a k-subset of ``x_1..x_t`` depends
only on its first ``k - 1`` elements.  Colour each (k-1)-subset of
``x_1..x_{t-1}`` by that common value.  Since ``t - 1 = R^_{k-1}(m - 1; n)``
there is a monochromatic ``(m - 1)``-set ``A``, and ``A + {x_t}`` is a
monochromatic m-set for the original colouring.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import config
from .cones import chain_length, face_chain_length, face_eq, faces_exact, minimal_face
from .errors import BudgetExceeded, HypothesisViolation

BRUTE_BUDGET = 2 ** 25
MAX_BITS = 4_000_000        # refuse exact bounds with more bits than this
MAX_STEPS = 2_000_000       # refuse recursions longer than this


def _check_params(k, m, n):
    for name, v in (("k", k), ("m", m), ("n", n)):
        if int(v) != v or v < 1:
            raise ValueError(f"{name} must be a positive integer, got {v!r}")
    return int(k), int(m), int(n)


def _ramsey(k, m, n, cap):
    """Recursion for ``R^_k(m; n)``; with ``cap`` set, saturates at ``cap + 1``."""
    if m <= k:
        return m
    if k == 1:
        v = n * (m - 1) + 1
        return v if cap is None else min(v, cap + 1)
    t = _ramsey(k - 1, m - 1, n, cap) + 1
    if cap is not None and t > cap:
        return cap + 1
    if t > MAX_STEPS:
        raise BudgetExceeded(f"recursion length {t} exceeds the step budget")
    if cap is None:
        bits = sum(math.comb(j - 1, k - 2) for j in range(1, t)) * math.log2(n)
        if bits > MAX_BITS:
            raise BudgetExceeded(f"bound has about {bits:.3g} bits; use a capped computation")
    need = 1
    for j in range(t - 1, 0, -1):
        e = math.comb(j - 1, k - 2)
        if cap is not None:
            # saturate before forming huge powers
            if need - 1 > 0 and e * math.log2(n) + math.log2(need - 1) > math.log2(cap + 1) + 1:
                return cap + 1
            need = n ** e * (need - 1) + 2
            if need > cap:
                return cap + 1
        else:
            need = n ** e * (need - 1) + 2
    return need


def ramsey_upper(k, m, n) -> int:
    """Exact big-integer value of the recursive upper bound ``R^_k(m; n)``."""
    k, m, n = _check_params(k, m, n)
    if k > 4:
        raise ValueError("ramsey_upper supports k <= 4")
    return _ramsey(k, m, n, None)


def ramsey_upper_capped(k, m, n, cap: int) -> int:
    """``min(R^_k(m; n), cap + 1)`` without forming numbers much larger than ``cap``."""
    k, m, n = _check_params(k, m, n)
    cap = int(cap)
    return min(_ramsey(k, m, n, cap), cap + 1)


@dataclass
class BruteResult:
    forced: bool
    size: int
    colorings_checked: int
    counterexample: dict | None = None


def ramsey_brute(k, m, n, size) -> BruteResult:
    """Decide by enumeration whether every n-colouring of the k-subsets of ``range(size)`` has a
    monochromatic m-set.  Returns a counterexample colouring when one exists."""
    k, m, n = _check_params(k, m, n)
    if k == 1:
        return _brute_points(m, n, size)
    edges = list(itertools.combinations(range(size), k))
    E = len(edges)
    total = n ** E
    if total > BRUTE_BUDGET:
        raise BudgetExceeded(f"{n}^{E} colourings exceed the enumeration budget of 2^25")
    index = {e: i for i, e in enumerate(edges)}
    groups = [[index[e] for e in itertools.combinations(W, k)] for W in itertools.combinations(range(size), m)]
    chunk = 1 << 16
    powers = n ** np.arange(E, dtype=np.int64)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        cols = (codes[:, None] // powers[None, :]) % n if E else np.zeros((codes.size, 0), dtype=np.int64)
        forced = np.zeros(codes.size, dtype=bool)
        for g in groups:
            if len(g) <= 1:
                forced[:] = True
                break
            sub = cols[:, g]
            forced |= np.all(sub == sub[:, :1], axis=1)
        if not forced.all():
            bad = int(np.argmin(forced))
            colouring = {edges[i]: int(cols[bad, i]) for i in range(E)}
            return BruteResult(False, size, start + bad + 1, colouring)
    return BruteResult(True, size, total)


def _brute_points(m, n, size):
    # colourings of single points are symmetric under relabeling, so sorted
    # colour sequences cover every case
    checked = 0
    for seq in itertools.combinations_with_replacement(range(n), size):
        checked += 1
        if checked > BRUTE_BUDGET:
            raise BudgetExceeded("point colourings exceed the enumeration budget of 2^25")
        counts = np.bincount(np.array(seq, dtype=int), minlength=n) if size else np.zeros(n, dtype=int)
        if counts.max(initial=0) < m:
            return BruteResult(False, size, checked, {(i,): c for i, c in enumerate(seq)})
    return BruteResult(True, size, checked)


def ramsey_number_brute(k, m, n, max_size=None) -> int:
    """Smallest size forced by :func:`ramsey_brute` (searching upward)."""
    size = 1
    while max_size is None or size <= max_size:
        if ramsey_brute(k, m, n, size).forced:
            return size
        size += 1
    raise BudgetExceeded(f"no forced size up to {max_size}")


# ---------------------------------------------------------------------------
# factor-count lower bound
# ---------------------------------------------------------------------------

_thresholds: dict[int, list] = {}


def _threshold(k, m, N):
    """``(value, exact)`` with ``value = R^_k(k+1; (k+1)^m)`` if exact, else a number above ``N``."""
    cache = _thresholds.setdefault(k, [])
    while len(cache) <= m:
        cache.append(None)
    hit = cache[m]
    if hit is not None and (hit[1] or hit[0] > N):
        return hit
    cap = max(N, 1 << 20)
    v = ramsey_upper_capped(k, k + 1, (k + 1) ** m, cap)
    cache[m] = (v, v <= cap)
    return cache[m]


def min_factors_bound(k: int, N: int) -> int:
    """Smallest factor count not ruled out for a k-neighborly family of ``N`` rays.

    Returns ``1 + max{m >= 0 : R^_k(k+1; (k+1)^m) <= N}``: any lift through
    ``K_1 x ... x K_m`` with every ``chain_length(K_i) <= k + 1`` needs at least
    this many factors.  Conservative because ``R^`` over-estimates ``R``.
    """
    if k < 1 or N < 1:
        raise ValueError("need k >= 1 and N >= 1")
    m = 0
    while _threshold(k, m, N)[0] <= N:
        m += 1
    return m


def min_factors_table(k: int, N_max: int) -> np.ndarray:
    """``min_factors_bound(k, N)`` for every ``N`` in ``0..N_max`` (entries below 1 are 0)."""
    thr = []
    m = 0
    while True:
        v, _ = _threshold(k, m, N_max)
        if v > N_max:
            break
        thr.append(v)
        m += 1
    out = np.searchsorted(np.array(thr), np.arange(N_max + 1), side="right")
    out[:1] = 0
    return out


# ---------------------------------------------------------------------------
# colour tables and the auditor
# ---------------------------------------------------------------------------

@dataclass
class ColorTable:
    S: list
    k: int
    colors: dict            # tuple T -> tuple of chain lengths
    faces: dict = field(default_factory=dict, repr=False)

    def to_json(self):
        return {"S": list(self.S), "k": self.k,
                "colors": [{"T": list(T), "color": list(c)} for T, c in self.colors.items()]}


def _split(fd, vec):
    off = fd.offsets
    return [vec[off[i]:off[i + 1]] for i in range(len(off) - 1)]


def _check_cones(fd, cones):
    if len(cones) != len(fd.offsets) - 1:
        raise ValueError("number of cones does not match the factorization blocks")
    for i, K in enumerate(cones):
        if K.dim != fd.offsets[i + 1] - fd.offsets[i]:
            raise ValueError(f"cone {i} has the wrong dimension for its block")


def color_table(S, fd, cones, k, tol=None) -> ColorTable:
    """Colour each k-subset ``T`` of ``S`` by ``(chain_length(F(b_{T,i})))_i``.

    ``b_{T,i}`` is the sum of ``b_i(t)`` over ``t`` in ``T``.  The zero point
    spans the face ``{0}``, whose chain length is 1, so colours lie in
    ``1..k+1`` when every ``chain_length(K_i) <= k + 1``.
    """
    _check_cones(fd, cones)
    S = list(S)
    b = {s: _split(fd, fd.b[s]) for s in S}
    colors, faces = {}, {}
    for T in itertools.combinations(S, k):
        col, fs = [], []
        for i, K in enumerate(cones):
            F = minimal_face(K, np.sum([b[t][i] for t in T], axis=0), tol)
            ell = face_chain_length(K, F)
            if not ell.exact:
                raise HypothesisViolation(f"face chain length of factor {i} is not exact")
            col.append(int(ell.value))
            fs.append(F)
        colors[T] = tuple(col)
        faces[T] = fs
    return ColorTable(S, k, colors, faces)


@dataclass
class AuditVerdict:
    verdict: str                 # "refuted" | "consistent" | "inconclusive"
    reason: str
    witness: dict | None = None
    monochromatic: int = 0
    table: ColorTable | None = field(default=None, repr=False)

    def to_json(self):
        out = {"verdict": self.verdict, "reason": self.reason, "monochromatic_sets": self.monochromatic}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _terms(fd, T, s):
    a = _split(fd, fd.a[frozenset(T)])
    b = _split(fd, fd.b[s])
    return [float(ai @ bi) for ai, bi in zip(a, b)], [(ai, bi) for ai, bi in zip(a, b)]


def _small(terms, pairs, tol):
    return all(abs(v) <= tol * max(1.0, float(np.linalg.norm(ai) * np.linalg.norm(bi)))
               for v, (ai, bi) in zip(terms, pairs))


def recheck_witness(cert, fd, witness, tol=None) -> bool:
    """Re-verify a forced-zero witness from raw inner products alone."""
    tol = config.resolve_tol(tol)
    T, s = tuple(witness["T"]), witness["s"]
    if s in T:
        return False
    terms, pairs = _terms(fd, T, s)
    if not _small(terms, pairs, tol):
        return False
    f = cert.certs[frozenset(T)]
    return float(f @ cert.rays[s]) > 0.0


def audit(cert, fd, cones, tol=None) -> AuditVerdict:
    """Run the monochromatic-subset argument on concrete certificate and factor tables.

    ``fd`` must hold ``b(s)`` for every label ``s`` of ``cert`` and ``a(T)``
    for every k-subset ``T`` (keyed by ``frozenset``).  A factor with exact
    chain length above ``k + 1`` is refused; factors whose chain lengths or
    face comparisons are not exact make the verdict inconclusive.  Steps: check the zero
    premise ``<a_i(T), b_i(t)> = 0`` for ``t`` in ``T``; colour the k-subsets;
    search all ``(k+1)``-subsets ``W`` for monochromatic ones; for each, check
    ``F(b_{T,i}) = F(b_{W,i})`` and look for the forced zero at
    ``s = W - T``.  A zero there contradicts the certificate, which requires a
    positive value.
    """
    tol = config.resolve_tol(tol)
    k = cert.k
    S = list(cert.labels)
    _check_cones(fd, cones)
    heuristic = []
    for i, K in enumerate(cones):
        ell = chain_length(K)
        if ell.exact and ell.value > k + 1:
            raise HypothesisViolation(f"factor {i}: chain length {ell.value} exceeds k+1 = {k + 1}")
        if not ell.exact or not faces_exact(K):
            heuristic.append(i)
    missing_b = [s for s in S if s not in fd.b]
    missing_a = [T for T in itertools.combinations(S, k) if frozenset(T) not in fd.a]
    if missing_b or missing_a:
        raise ValueError(f"incomplete tables: {len(missing_b)} primal and {len(missing_a)} dual entries missing")

    for T in itertools.combinations(S, k):
        for t in T:
            terms, pairs = _terms(fd, T, t)
            if not _small(terms, pairs, tol):
                return AuditVerdict("refuted", "zero premise fails: a term on W is nonzero",
                                    {"kind": "premise", "T": list(T), "t": t, "terms": terms})

    if heuristic:
        return AuditVerdict("inconclusive", f"factors {heuristic} have inexact chain lengths or heuristic faces")

    table = color_table(S, fd, cones, k, tol)
    b = {s: _split(fd, fd.b[s]) for s in S}
    mono = 0
    unresolved = None
    for W in itertools.combinations(S, k + 1):
        subs = list(itertools.combinations(W, k))
        if len({table.colors[T] for T in subs}) != 1:
            continue
        mono += 1
        FW = [minimal_face(K, np.sum([b[w][i] for w in W], axis=0), tol) for i, K in enumerate(cones)]
        for T in subs:
            s = next(w for w in W if w not in T)
            if not all(face_eq(K, table.faces[T][i], FW[i], tol) for i, K in enumerate(cones)):
                unresolved = unresolved or {"W": list(W), "T": list(T), "reason": "face equality failed"}
                continue
            terms, pairs = _terms(fd, T, s)
            witness = {"kind": "forced-zero", "W": list(W), "T": list(T), "s": s, "terms": terms,
                       "sum": float(sum(terms)),
                       "certified_value": float(cert.certs[frozenset(T)] @ cert.rays[s])}
            if _small(terms, pairs, tol) and recheck_witness(cert, fd, witness, tol):
                witness["rechecked"] = True
                return AuditVerdict("refuted", "monochromatic set forces a zero the certificate requires positive",
                                    witness, mono, table)
            unresolved = unresolved or {"W": list(W), "T": list(T), "s": s, "terms": terms,
                                        "reason": "forced zero not observed; tables may not be valid"}
    if unresolved is not None:
        return AuditVerdict("inconclusive", unresolved.pop("reason"), unresolved, mono, table)
    return AuditVerdict("consistent", "no monochromatic (k+1)-subset", None, mono, table)


def pigeonhole_bundle(size=5, seed=None):
    """Tables for ``k = 1`` through two ``Orthant(1)`` factors that satisfy the zero premise.

    With four colours and ``size > 4`` labels a monochromatic pair always
    exists, so :func:`audit` must refute the bundle.  Returns
    ``(cert, factorization, cones)``.
    """
    from .cones import Orthant
    from .lifts import FactorizationData
    from .neighborly import custom_certificate

    rng = np.random.default_rng(seed)
    labels = list(range(1, size + 1))
    b, a = {}, {}
    for s in labels:
        pattern = rng.integers(0, 2, size=2)
        b[s] = pattern * rng.uniform(0.5, 2.0, size=2)
        a[frozenset([s])] = (1 - pattern) * rng.uniform(0.5, 2.0, size=2)
    fd = FactorizationData(labels, [frozenset([s]) for s in labels], b, a, np.array([0, 1, 2]))
    eye = np.eye(size)
    rays = {s: eye[s - 1] for s in labels}
    certs = {frozenset([s]): np.ones(size) - eye[s - 1] for s in labels}
    cert = custom_certificate(1, rays, certs, Orthant(size))
    return cert, fd, [Orthant(1), Orthant(1)]


__all__ = ["ramsey_upper", "ramsey_upper_capped", "ramsey_brute", "ramsey_number_brute", "BruteResult",
           "min_factors_bound", "min_factors_table", "ColorTable", "color_table", "AuditVerdict",
           "audit", "recheck_witness", "pigeonhole_bundle"]
