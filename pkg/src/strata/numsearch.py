"""Floating-point search for candidate relations, and exact recovery.

The outer problem is over root configurations (one complex root per part, per
term); for fixed roots the best coefficients are the smallest right singular
vector of the matrix of per-term normalised forms. Random restarts are
screened in batch and the most promising are refined by a damped nonlinear
least-squares iteration on the stacked residual.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import mpmath
import numpy as np
from scipy.optimize import least_squares

from .exactalg import QQ, NumberField, exact_nullspace, quadratic_field
from .forms import FactoredForm, ProjRoot, expand
from .partitions import Partition
from .relations import SecantRelation, verify_relation

ACCEPT_TOL = 1e-10
SEPARATION = 1e-4
PENALTY_WEIGHT = 1e3
# a true relation survives a change of coordinates on P^1; a near-relation
# produced by roots crowding together does not, so the residual is re-measured
# in gauges that spread the configuration out
GAUGE_TOL = 1e-6
MAX_GAUGES = 120
_OMEGA = np.exp(2j * np.pi / 3)


@dataclass
class Candidate:
    mu: Partition
    length: int
    roots: list  # per term: list of complex, aligned with mu.parts
    coeffs: list  # complex, unit 2-norm
    residual: float  # ||sum c_i f_i||_2 with unit-norm forms and unit-norm c
    max_residual: float  # max-norm of the same summed vector, c scaled to max |c_i| = 1
    seed: int
    iterations: int
    restarts: int = 0
    separation: float = 0.0
    elapsed: float = 0.0
    gauge_residual: float = 0.0  # worst residual over the spreading gauges

    @property
    def score(self) -> float:
        return max(self.residual, self.gauge_residual)

    def to_json(self) -> dict:
        cplx = lambda z: None if z is None else [float(z.real), float(z.imag)]
        return {
            "mu": self.mu.to_json(),
            "length": self.length,
            "roots": [[cplx(z) for z in term] for term in self.roots],
            "coeffs": [cplx(c) for c in self.coeffs],
            "residual": self.residual,
            "max_residual": self.max_residual,
            "separation": self.separation,
            "gauge_residual": self.gauge_residual,
            "seed": self.seed,
            "iterations": self.iterations,
            "restarts": self.restarts,
            "elapsed": self.elapsed,
        }


@dataclass
class SearchResult:
    candidate: Candidate | None
    best: Candidate | None  # best seen, accepted or not
    accept_tol: float
    restarts: int
    report: dict = dc_field(default_factory=dict)


# --- numerics ----------------------------------------------------------------
#
# Root arrays have shape (..., m, r): term, part. A boolean ``mask`` of shape
# (m, r) marks roots pinned at infinity; their array entries are ignored.
# In Candidate.roots a pinned root is None.

def _forms_batch(roots: np.ndarray, mults: tuple, mask=None) -> np.ndarray:
    """Coefficients (index k holds x^k y^(d-k)) of prod (x - z_j y)^m_j, pinned roots giving y^m_j."""
    d = sum(mults)
    out = np.zeros(roots.shape[:-1] + (d + 1,), dtype=complex)
    out[..., 0] = 1.0
    for j, mult in enumerate(mults):
        z = roots[..., j][..., None]
        for _ in range(mult):
            nxt = -z * out
            nxt[..., 1:] += out[..., :-1]
            out = nxt if mask is None else np.where(mask[:, j][:, None], out, nxt)
    return out


def _normalised_matrix(roots: np.ndarray, mults: tuple, mask=None) -> np.ndarray:
    """Columns are unit-2-norm term coefficient vectors."""
    F = _forms_batch(roots, mults, mask)  # (..., m, d+1)
    F = F / np.linalg.norm(F, axis=-1, keepdims=True)
    return np.swapaxes(F, -1, -2)  # (..., d+1, m)


def best_coefficients(A: np.ndarray) -> tuple[np.ndarray, float]:
    """Unit vector minimising ``||A c||_2`` and that minimum."""
    _, s, vh = np.linalg.svd(A)
    c = vh[-1].conj()
    return c, float(np.linalg.norm(A @ c))


def _dist(u, v) -> float:
    if u is None or v is None:
        return 0.0 if u is v else np.inf
    return abs(u - v)


def _classes(mults: tuple) -> dict:
    classes = {}
    for j, v in enumerate(mults):
        classes.setdefault(v, []).append(j)
    return classes


def _tuple_distance(u, v, classes) -> float:
    # distance between root tuples as points of the stratum: roots of equal
    # multiplicity may be matched in any order
    total = 0.0
    for idx in classes.values():
        best = np.inf
        for perm in itertools.permutations(idx):
            best = min(best, max(_dist(u[a], v[b]) for a, b in zip(idx, perm)))
        total = max(total, best)
    return total


def _gaps(roots: list, mults: tuple) -> list:
    """Gaps between roots of one term and between root tuples of two terms."""
    gaps = [_dist(t[a], t[b]) for t in roots for a, b in itertools.combinations(range(len(t)), 2)]
    classes = _classes(mults)
    gaps += [_tuple_distance(u, v, classes) for u, v in itertools.combinations(roots, 2)]
    return gaps


def _separation(roots: list, mults: tuple) -> float:
    return min(_gaps(roots, mults), default=np.inf)


def _with_none(Z: np.ndarray, mask) -> list:
    return [[None if mask is not None and mask[i, j] else complex(Z[i, j]) for j in range(Z.shape[1])]
            for i in range(Z.shape[0])]


# --- gauges -----------------------------------------------------------------

def _hom(z) -> tuple:
    return (1.0 + 0j, 0j) if z is None else (complex(z), 1.0 + 0j)


def _cross_matrix(p1, p2, p3) -> np.ndarray:
    """Matrix of the map p1 -> 0, p2 -> inf, p3 -> 1 on homogeneous points (a, b) ~ a/b."""
    l1 = np.array([p1[1], -p1[0]])  # linear forms vanishing at p1, p2
    l2 = np.array([p2[1], -p2[0]])
    q = np.array(p3)
    return np.array([l1 * (l2 @ q), l2 * (l1 @ q)])


_TO_CIRCLE = np.linalg.inv(_cross_matrix(_hom(1.0), _hom(_OMEGA), _hom(_OMEGA**2)))


def _distinct_points(roots: list) -> list:
    flat = []
    for t in roots:
        for z in t:
            if all(_dist(z, w) > 1e-9 for w in flat):
                flat.append(z)
    return flat


def _homog_forms(a: np.ndarray, b: np.ndarray, mults: tuple) -> np.ndarray:
    """Unit-norm coefficient rows of prod (b x - a y)^m for roots (a:b), shape (m, r)."""
    F = np.zeros((a.shape[0], sum(mults) + 1), dtype=complex)
    F[:, 0] = 1.0
    for j, mult in enumerate(mults):
        for _ in range(mult):
            nxt = -a[:, j, None] * F
            nxt[:, 1:] += b[:, j, None] * F[:, :-1]
            F = nxt
    return F / np.linalg.norm(F, axis=1, keepdims=True)


def gauge_residual(roots: list, mults: tuple, max_gauges: int = MAX_GAUGES) -> float:
    """Largest smallest-singular-value over coordinate changes spreading the roots.

    Each gauge sends three distinct roots of the configuration to the cube
    roots of unity. ``roots`` is a list of per-term root lists, None for infinity.
    """
    H = np.array([[_hom(z) for z in t] for t in roots])  # (m, r, 2)
    worst = 0.0
    for triple in itertools.islice(itertools.combinations(_distinct_points(roots), 3), max_gauges):
        M = _TO_CIRCLE @ _cross_matrix(*map(_hom, triple))
        M = M / np.linalg.norm(M)
        moved = H @ M.T
        A = _homog_forms(moved[..., 0], moved[..., 1], mults).T
        worst = max(worst, float(np.linalg.svd(A, compute_uv=False)[-1]))
    return worst


# --- search -----------------------------------------------------------------

def _unpack(x: np.ndarray, free: np.ndarray, shape) -> np.ndarray:
    n = int(free.sum())
    Z = np.zeros(shape, dtype=complex)
    Z[free] = x[:n] + 1j * x[n:]
    return Z


def _pack(Z: np.ndarray, free: np.ndarray) -> np.ndarray:
    return np.concatenate([Z[free].real, Z[free].imag])


def _residual_vector(x, shape, free, mask, mults, pivot):
    Z = _unpack(x, free, shape)
    A = _normalised_matrix(Z, mults, mask)
    others = [j for j in range(shape[0]) if j != pivot]
    # least squares with c_pivot = 1: the projection of column pivot off the others
    sub = A[:, others]
    coef, *_ = np.linalg.lstsq(sub, -A[:, pivot], rcond=None)
    res = (A[:, pivot] + sub @ coef) / np.sqrt(1.0 + np.sum(np.abs(coef) ** 2))
    pen = [max(0.0, SEPARATION * 10 - g) for g in _gaps(_with_none(Z, mask), mults)]
    return np.concatenate([res.real, res.imag, PENALTY_WEIGHT * np.asarray(pen)])


def _finalise(Z, mask, mu, length, seed, iterations) -> Candidate:
    mults = mu.parts
    A = _normalised_matrix(Z, mults, mask)
    c, res = best_coefficients(A)
    cmax = c / np.max(np.abs(c))
    roots = _with_none(Z, mask)
    return Candidate(
        mu, length, roots, list(map(complex, c)), res,
        float(np.max(np.abs(A @ cmax))), seed, iterations, separation=float(_separation(roots, mults)),
        gauge_residual=gauge_residual(roots, mults),
    )


def _infinity_patterns(m: int, r: int) -> list:
    """Masks putting exactly one root of each term at infinity, terms unordered."""
    out = []
    for choice in itertools.combinations_with_replacement(range(r), m):
        mask = np.zeros((m, r), dtype=bool)
        mask[np.arange(m), choice] = True
        out.append(mask)
    return out


def search_relation(
    mu: Partition,
    length: int,
    budget: int = 2000,
    seed: int = 0,
    accept_tol: float = ACCEPT_TOL,
    refine: int = 24,
    max_nfev: int = 400,
    time_limit: float | None = None,
    pin_infinity: bool = False,
) -> SearchResult:
    """Look for ``length`` points of the stratum of ``mu`` that are linearly dependent.

    ``budget`` random root configurations are scored by the smallest singular
    value of their normalised form matrix; the best ``refine`` of them are
    polished by nonlinear least squares. Returns the best candidate, accepted
    only when its residual is below ``accept_tol``, stays below ``GAUGE_TOL``
    in every spreading gauge (see :func:`gauge_residual`), and its
    configuration keeps every root (and every term) at least ``SEPARATION``
    apart. The best candidate is ranked by the larger of the two residuals.

    With ``pin_infinity`` every term keeps one root at infinity, so all terms
    share the factor y; ``budget`` and ``refine`` then apply to each way of
    choosing which part goes there.
    """
    if length < 3:
        raise ValueError("a relation has at least three terms")
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    mults = mu.parts
    m, r = length, mu.r
    patterns = _infinity_patterns(m, r) if pin_infinity else [None]

    # each pattern keeps its own pool; refinement visits them round-robin
    per = refine
    pools = []
    chunk = 4096
    for pi, mask in enumerate(patterns):
        pool = []  # (score, roots)
        done = 0
        while done < budget:
            n = min(chunk, budget - done)
            Z = rng.standard_normal((n, m, r)) + 1j * rng.standard_normal((n, m, r))
            A = _normalised_matrix(Z, mults, mask)
            s = np.linalg.svd(A, compute_uv=False)[..., -1]
            keep = np.argsort(s, kind="stable")[:per]
            pool.extend((float(s[k]), Z[k]) for k in keep)
            pool.sort(key=lambda e: e[0])
            del pool[per:]
            done += n
        pools.append(pool)
    pool = [(pi, pools[pi][k][1]) for k in range(per) for pi in range(len(patterns)) if k < len(pools[pi])]

    best = None
    accepted = None
    evaluations = 0
    for pi, Z in pool:
        if time_limit is not None and time.perf_counter() - t0 > time_limit:
            break
        mask = patterns[pi]
        free = np.ones((m, r), dtype=bool) if mask is None else ~mask
        c, _ = best_coefficients(_normalised_matrix(Z, mults, mask))
        pivot = int(np.argmax(np.abs(c)))
        sol = least_squares(
            _residual_vector, _pack(Z, free), args=((m, r), free, mask, mults, pivot), method="trf",
            max_nfev=max_nfev, xtol=1e-15, ftol=1e-15, gtol=1e-15,
        )
        evaluations += sol.nfev
        cand = _finalise(_unpack(sol.x, free, (m, r)), mask, mu, length, seed, sol.nfev)
        if best is None or cand.score < best.score:
            best = cand
        if cand.residual < accept_tol and cand.gauge_residual < GAUGE_TOL and cand.separation >= SEPARATION:
            accepted = cand
            break
    elapsed = time.perf_counter() - t0
    for c in (best, accepted):
        if c is not None:
            c.restarts = budget * len(patterns)
            c.elapsed = elapsed
    report = {
        "restarts": budget * len(patterns),
        "refined": len(pool),
        "evaluations": evaluations,
        "pin_infinity": pin_infinity,
        "best_residual": None if best is None else best.residual,
        "best_gauge_residual": None if best is None else best.gauge_residual,
        "best_separation": None if best is None else best.separation,
        "elapsed": elapsed,
    }
    return SearchResult(accepted, best, accept_tol, budget * len(patterns), report)


# --- exact recovery ----------------------------------------------------------

def _mobius(p1, p2, p3):
    """The map sending p1 -> inf, p2 -> 0, p3 -> 1 (None is infinity)."""
    M = _cross_matrix(_hom(p2), _hom(p1), _hom(p3))

    def f(z):
        a, b = M @ np.array(_hom(z))
        scale = max(abs(a), abs(b))
        if abs(b) < 1e-12 * scale:
            return None
        return complex(a / b)
    return f


def _snap_rational(x: float, max_den: int, tol: float) -> Fraction | None:
    q = Fraction(x).limit_denominator(max_den)
    return q if abs(float(q) - x) < tol else None


def _snap_quadratic(z: complex, max_den: int, tol: float):
    """``(u, v, D)`` with ``z ~ u + v sqrt(D)``, ``D`` squarefree, or None."""
    if abs(z.imag) < tol:
        q = _snap_rational(z.real, max_den, tol)
        if q is not None:
            return q, Fraction(0), 1
    # z is a root of an integer quadratic p2 z^2 + p1 z + p0 (possibly complex conjugate pair)
    if abs(z.imag) < tol:
        with mpmath.workdps(30):
            poly = mpmath.findpoly(mpmath.mpf(z.real), 2, maxcoeff=max_den, tol=tol)
        if not poly or len(poly) != 3:
            return None
        p2, p1, p0 = (int(c) for c in poly)
    else:
        s = _snap_rational(2 * z.real, max_den, tol)  # trace
        n = _snap_rational(abs(z) ** 2, max_den, tol)  # norm
        if s is None or n is None:
            return None
        den = s.denominator * n.denominator // math.gcd(s.denominator, n.denominator)
        p2, p1, p0 = den, int(-s * den), int(n * den)
    disc = Fraction(p1 * p1 - 4 * p2 * p0)
    if disc == 0:
        return None
    core, scale = _squarefree_part(disc)
    # z = (-p1 + sign * scale * sqrt(core)) / (2 p2)
    u = Fraction(-p1, 2 * p2)
    v = Fraction(1, 2 * p2) * scale
    for sign in (1, -1):
        approx = complex(u) + sign * float(v) * np.sqrt(complex(core))
        if abs(approx - z) < max(tol, 1e-6) * (1 + abs(z)):
            return u, sign * v, core
    return None


def _squarefree_part(q: Fraction) -> tuple[int, Fraction]:
    """``q = scale**2 * core`` with ``core`` a squarefree integer."""
    num = q.numerator * q.denominator
    sign = -1 if num < 0 else 1
    num = abs(num)
    core, square = 1, 1
    p = 2
    n = num
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            square *= p
        p += 1
    core = sign * n
    return core, Fraction(square, q.denominator)


def exactify(candidate: Candidate, max_den: int = 1000, tol: float = 1e-7, max_gauges: int = 400):
    """Snap a numerical relation to an exact one, or return None.

    Tries normalisations sending three of the candidate's roots to
    ``inf, 0, 1``, snaps every root to a rational or a quadratic irrational
    sharing one field Q(sqrt D), rebuilds the forms exactly and solves for the
    coefficients with exact linear algebra. Only a relation that passes
    :func:`verify_relation` is returned.
    """
    mu = candidate.mu
    roots = [list(t) for t in candidate.roots]
    flat = _distinct_points(roots)
    tried = 0
    for z1, z2, z3 in itertools.permutations(flat, 3):
        tried += 1
        if tried > max_gauges:
            break
        f = _mobius(z1, z2, z3)
        moved = [[f(z) for z in t] for t in roots]
        rel = _exact_from_numeric(mu, moved, max_den, tol)
        if rel is not None:
            return rel
    return None


def _exact_from_numeric(mu, moved, max_den, tol):
    snapped = []
    cores = set()
    for t in moved:
        row = []
        for z in t:
            if z is None:
                row.append(None)
                continue
            if not np.isfinite(z) or abs(z) > 1e6:
                return None
            s = _snap_quadratic(complex(z), max_den, tol)
            if s is None:
                return None
            if s[1] != 0:
                cores.add(s[2])
            row.append(s)
        snapped.append(row)
    if len(cores) > 1:
        return None
    field = quadratic_field(cores.pop()) if cores else QQ
    forms = []
    for row in snapped:
        pairs = []
        for s, m in zip(row, mu.parts):
            if s is None:
                pairs.append((None, m))
            else:
                u, v, _ = s
                pairs.append((field(u) + (field.gen * v if v else 0), m))
        try:
            forms.append(FactoredForm.from_roots(pairs, field=field))
        except ValueError:
            return None
    if any(f.multiplicities() != mu.parts for f in forms):
        return None
    vecs = [expand(f).coeffs for f in forms]
    rows = [[v[k] for v in vecs] for k in range(mu.d + 1)]
    basis = exact_nullspace(rows, len(forms))
    if len(basis) != 1 or any(not c for c in basis[0]):
        return None
    rel = SecantRelation(field, mu, list(zip([field(c) for c in basis[0]], forms)), "numerical search, exactified")
    return rel if verify_relation(rel)[0] else None
