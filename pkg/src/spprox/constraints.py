"""Simple convex sets with exact projections, plus intersection oracles.

``dist_intersection`` projects onto a finite intersection with Dykstra's
alternating-projection scheme (plain alternating projections would only give
a feasible point, not the projection, and the distance report needs the
projection).  ``estimate_kappa`` probes the linear-regularity ratio
dist_X(x)^2 / E[dist_{X_S}(x)^2]; being sampled, it certifies a lower bound
on the regularity constant only.
"""

from __future__ import annotations

import math

import numpy as np

from .core import Array, RandomSource, as_vector, norm


class ConstraintSet:
    kind = "abstract"

    def __init__(self, dim: int):
        self.dim = dim

    def _check(self, x: Array) -> Array:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.dim,):
            raise ValueError(f"dimension mismatch: expected ({self.dim},), got {x.shape}")
        return x

    def project(self, x: Array) -> Array:
        raise NotImplementedError

    def distance(self, x: Array) -> float:
        """||x - project(x)||; subclasses override with cheaper closed forms."""
        x = self._check(x)
        return norm(x - self.project(x))

    def contains(self, x: Array, tol: float = 1e-12) -> bool:
        return self.distance(x) <= tol


class WholeSpace(ConstraintSet):
    kind = "whole-space"

    def project(self, x):
        return self._check(x).copy()

    def distance(self, x):
        self._check(x)
        return 0.0


class Halfspace(ConstraintSet):
    """{x : c'x <= d}."""

    kind = "halfspace"

    def __init__(self, c, d: float):
        c = as_vector(c)
        self._c_sq = float(np.dot(c, c))
        if self._c_sq == 0.0:
            raise ValueError("normal vector must be nonzero")
        super().__init__(c.shape[0])
        self.c = c
        self.d = float(d)
        self._c_nrm = float(np.sqrt(self._c_sq))

    def project(self, x):
        x = self._check(x)
        viol = float(np.dot(self.c, x)) - self.d
        if viol <= 0.0:
            return x.copy()
        return x - (viol / self._c_sq) * self.c

    def distance(self, x):
        x = self._check(x)
        return max(0.0, float(np.dot(self.c, x)) - self.d) / self._c_nrm


class Hyperplane(ConstraintSet):
    """{x : c'x = d}."""

    kind = "hyperplane"

    def __init__(self, c, d: float):
        c = as_vector(c)
        self._c_sq = float(np.dot(c, c))
        if self._c_sq == 0.0:
            raise ValueError("normal vector must be nonzero")
        super().__init__(c.shape[0])
        self.c = c
        self.d = float(d)
        self._c_nrm = float(np.sqrt(self._c_sq))

    def project(self, x):
        x = self._check(x)
        return x - ((float(np.dot(self.c, x)) - self.d) / self._c_sq) * self.c

    def distance(self, x):
        x = self._check(x)
        return abs(float(np.dot(self.c, x)) - self.d) / self._c_nrm


class Box(ConstraintSet):
    """{x : lo <= x <= hi} componentwise."""

    kind = "box"

    def __init__(self, lo, hi):
        lo = as_vector(lo)
        hi = as_vector(hi, lo.shape[0])
        if np.any(lo > hi):
            raise ValueError("box needs lo <= hi componentwise")
        super().__init__(lo.shape[0])
        self.lo = lo
        self.hi = hi

    def project(self, x):
        x = self._check(x)
        return np.clip(x, self.lo, self.hi)


class NonnegativeOrthant(ConstraintSet):
    """{x : x >= 0}."""

    kind = "nonneg-orthant"

    def __init__(self, dim: int):
        super().__init__(dim)

    def project(self, x):
        x = self._check(x)
        return np.maximum(x, 0.0)

    def distance(self, x):
        x = self._check(x)
        return norm(np.minimum(x, 0.0))


class DykstraError(RuntimeError):
    """Cycle cap reached; ``best`` carries the last iterate."""

    def __init__(self, message: str, best: Array):
        super().__init__(message)
        self.best = best


def _dykstra_generic(sets, x, tol, max_cycles):
    y = x.copy()
    incs = [np.zeros_like(x) for _ in sets]
    for _ in range(max_cycles):
        start = y
        for i, s in enumerate(sets):
            w = y + incs[i]
            y = s.project(w)
            incs[i] = w - y
        if norm(y - start) < tol:
            return y
    raise DykstraError(
        f"Dykstra did not converge within {max_cycles} cycles", best=y)


def _kkt_enumerate(C, d, nrm, x, pool, tol):
    """Certified projection by KKT checks over subsets of a small row pool.

    A verified certificate (nonnegative multipliers, tight working rows,
    global feasibility) identifies the unique projection, so the first hit
    is returned.
    """
    import itertools

    pool = sorted(set(int(i) for i in pool))
    if not pool or len(pool) > 12:
        return None
    dim = C.shape[1]
    for r in range(1, min(dim, len(pool)) + 1):
        for S in itertools.combinations(pool, r):
            Ca = C[list(S)]
            rhs = Ca @ x - d[list(S)]
            alpha, *_ = np.linalg.lstsq(Ca @ Ca.T, rhs, rcond=None)
            if np.any(alpha < -1e-12):
                continue
            z = x - Ca.T @ alpha
            if float((np.abs(Ca @ z - d[list(S)]) / nrm[list(S)]).max()) > tol:
                continue
            if float(((C @ z - d) / nrm).max()) > tol:
                continue
            return z
    return None


def _halfspace_polish(C, d, nrm, x, seed, max_pivots=300):
    """Certified projection onto {z : C z <= d} via a primal active set.

    Starting from the ``seed`` candidate rows, repeatedly solves the
    equality-constrained projection on the working rows, dropping rows with
    negative multipliers (or inconsistent working sets) and adding the most
    violated row.  Returns the projection only when the full KKT conditions
    hold (so the result is exact up to linear-solve roundoff), else None.
    """
    dim = C.shape[1]
    scale = (1.0 + float(np.abs(x).max(initial=0.0))
             + float(np.abs(d / nrm).max(initial=0.0)))
    tol = 1e-10 * scale
    active = list(dict.fromkeys(int(i) for i in seed))[:dim]
    seen = set()
    for _ in range(max_pivots):
        state = frozenset(active)
        if state in seen:
            return None  # pivot cycle (dependent rows); caller escalates
        seen.add(state)
        if not active:
            slack = (C @ x - d) / nrm
            worst = int(np.argmax(slack))
            if slack[worst] <= tol:
                return x.copy()
            active = [worst]
        Ca = C[active]
        rhs = Ca @ x - d[active]
        gram = Ca @ Ca.T
        try:
            alpha = np.linalg.solve(gram, rhs)
        except np.linalg.LinAlgError:
            alpha, *_ = np.linalg.lstsq(gram, rhs, rcond=None)
        if np.any(alpha < -1e-12):
            del active[int(np.argmin(alpha))]
            continue
        z = x - Ca.T @ alpha
        eq_res = np.abs(Ca @ z - d[active]) / nrm[active]
        if float(eq_res.max(initial=0.0)) > tol:
            # inconsistent working set (rank deficiency): drop worst row
            del active[int(np.argmax(eq_res))]
            continue
        slack = (C @ z - d) / nrm
        worst = int(np.argmax(slack))
        if slack[worst] <= tol:
            return z
        if worst in active:  # pragma: no cover - loop guard
            return None
        active.append(worst)
    return None


def _certify(C, d, nrm, x, support, tol):
    """KKT-check the candidate active ``support``; exact projection or None."""
    if len(support) == 0:
        if float(((C @ x - d) / nrm).max()) <= tol:
            return x.copy()
        return None
    Ca = C[support]
    rhs = Ca @ x - d[support]
    alpha, *_ = np.linalg.lstsq(Ca @ Ca.T, rhs, rcond=None)
    if np.any(alpha < -1e-12):
        return None
    z = x - Ca.T @ alpha
    if float((np.abs(Ca @ z - d[support]) / nrm[support]).max()) > tol:
        return None
    if float(((C @ z - d) / nrm).max()) > tol:
        return None
    return z


def _dual_rescue(C, d, nrm, x, lam0, tol, iters=4000):
    """Accelerated ascent on the projection dual with KKT certification.

    The dual of min ||z - x||^2/2 over {Cz <= d} is a nonnegativity-
    constrained quadratic in the multipliers; FISTA steps (warm-started from
    the Dykstra increments) locate the support, and a candidate is returned
    only once its KKT certificate verifies, so the result is exact.
    """
    G = C @ C.T
    r = C @ x - d
    # power iteration for the Lipschitz constant of the dual gradient
    v = np.ones(G.shape[0])
    for _ in range(30):
        w = G @ v
        nv = norm(w)
        if nv == 0.0:
            return None
        v = w / nv
    L = float(v @ (G @ v)) * 1.05 + 1e-12
    lam = np.maximum(lam0, 0.0)
    mom = lam.copy()
    t_acc = 1.0
    scale = float(np.abs(lam).max(initial=1.0)) + 1.0
    for k in range(1, iters + 1):
        grad = G @ mom - r
        lam_new = np.maximum(mom - grad / L, 0.0)
        t_new = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t_acc * t_acc))
        mom = lam_new + ((t_acc - 1.0) / t_new) * (lam_new - lam)
        lam, t_acc = lam_new, t_new
        if k % 50 == 0 or k == iters:
            support = np.nonzero(lam > 1e-10 * scale)[0]
            if len(support) <= C.shape[1] + 4:
                z = _certify(C, d, nrm, x, support, tol)
                if z is not None:
                    return z
    return None


def _dykstra_halfspaces(sets, x, tol, max_cycles):
    """Dykstra cycle for pure-halfspace families (scalar increments).

    For halfspaces the Dykstra increment of set i is lam_i * c_i with
    lam_i >= 0, so the cycle reduces to Hildreth's updates.  Periodically,
    and at the displacement stop, the currently active rows seed a primal
    active-set polish of the projection problem; a polished point is used
    only when its KKT certificate checks out, which both accelerates the
    slow tail and repairs displacement-criterion stalls on shallow-angle
    geometry.
    """
    C = np.stack([s.c for s in sets])
    d = np.array([s.d for s in sets])
    sq = np.einsum("ij,ij->i", C, C)
    nrm = np.sqrt(sq)
    y = x.copy()
    lam = np.zeros(len(sets))
    poll = 2
    cycles = 0

    def seed_rows():
        order = np.argsort(lam)[::-1]
        rows = [int(i) for i in order if lam[i] > 0.0]
        slack = np.abs(C @ y - d) / nrm
        near = np.nonzero(slack <= 1e-6 * (1.0 + float(np.abs(y).max())))[0]
        rows.extend(int(i) for i in near if lam[i] == 0.0)
        return rows

    while cycles < max_cycles:
        start = y.copy()
        for i in range(len(sets)):
            li = lam[i]
            g = (float(C[i] @ y) + li * sq[i] - d[i]) / sq[i]
            ln = g if g > 0.0 else 0.0
            if ln != li:
                y += (li - ln) * C[i]
                lam[i] = ln
        cycles += 1
        stalled = norm(y - start) < tol
        if stalled or cycles % poll == 0:
            z = _halfspace_polish(C, d, nrm, x, seed_rows())
            if z is None:
                z = _halfspace_polish(C, d, nrm, x, [])
            if z is not None:
                return z
            if stalled:
                scale = (1.0 + float(np.abs(x).max(initial=0.0))
                         + float(np.abs(d / nrm).max(initial=0.0)))
                z = _dual_rescue(C, d, nrm, x, lam, 1e-10 * scale)
                if z is None:
                    z = _kkt_enumerate(C, d, nrm, x, seed_rows(), 1e-10 * scale)
                return y if z is None else z
            poll = min(poll * 2, 256)
    raise DykstraError(
        f"Dykstra did not converge within {max_cycles} cycles", best=y)


def _dykstra(sets, x, tol, max_cycles):
    if all(isinstance(s, Halfspace) for s in sets):
        return _dykstra_halfspaces(sets, x, tol, max_cycles)
    return _dykstra_generic(sets, x, tol, max_cycles)


def project_intersection(sets, x, tol: float = 1e-10,
                         max_cycles: int = 100_000) -> Array:
    """Projection of x onto the intersection of ``sets`` via Dykstra.

    Cycles through the sets with Dykstra increments until the per-cycle
    displacement drops below ``tol``.  Raises DykstraError (carrying the best
    iterate) if ``max_cycles`` is exhausted.

    Large families go through an exact working-set reduction: the projection
    onto an intersection is the projection onto the subfamily active at the
    solution, so Dykstra runs on the violated sets and the working set grows
    until the result is feasible for every member.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    sets = list(sets)
    if not sets:
        raise ValueError("need at least one set")
    x = np.asarray(x, dtype=np.float64)
    if len(sets) == 1:
        return sets[0].project(x)
    dists = np.array([s.distance(x) for s in sets])
    if dists.max() == 0.0:
        return x.copy()
    if len(sets) <= 16:
        return _dykstra(sets, x, tol, max_cycles)
    # Seed the working set with the most violated members; the projection is
    # exact once the subfamily projection is feasible for every member.
    dim = x.shape[0]
    chunk = max(8, dim)
    order = np.argsort(dists)[::-1]
    working = [int(i) for i in order[:chunk] if dists[i] > 0.0]
    in_w = set(working)
    y = x.copy()
    for _ in range(200):
        y = _dykstra([sets[i] for i in working], x, tol, max_cycles)
        gaps = [(sets[i].distance(y), i) for i in range(len(sets))
                if i not in in_w]
        newly = sorted((g for g in gaps if g[0] > tol), reverse=True)
        if not newly:
            return y
        for _, i in newly[:max(4, dim // 2)]:
            working.append(i)
            in_w.add(i)
    return _dykstra(sets, x, tol, max_cycles)  # pragma: no cover


def dist_intersection(sets, x, tol: float = 1e-10,
                      max_cycles: int = 100_000) -> float:
    """Distance from x to the intersection of ``sets`` (nonempty assumed)."""
    x = np.asarray(x, dtype=np.float64)
    return norm(x - project_intersection(sets, x, tol=tol, max_cycles=max_cycles))


def estimate_kappa(problem, probes: int, rng: RandomSource,
                   center=None, radius: float | None = None,
                   dykstra_tol: float = 1e-10) -> float:
    """Empirical lower bound on the linear-regularity constant.

    Probe points are drawn uniformly on a sphere of radius
    ``2 max(1, ||center||)`` (overridable) around ``center``, which defaults
    to the known optimum or the origin and should be a feasible anchor of the
    iterate region.  Each probe contributes
    dist_X(x)^2 / E[dist_{X_S}(x)^2]; probes with denominator below 1e-14
    are skipped, and the maximum ratio is returned.
    """
    if probes < 1:
        raise ValueError("probes must be >= 1")
    if center is None:
        center = problem.x_star if problem.x_star is not None else np.zeros(problem.dim)
    center = as_vector(center, problem.dim)
    if radius is None:
        radius = 2.0 * max(1.0, norm(center))
    best = None
    for _ in range(probes):
        u = rng.normal(problem.dim)
        nu = norm(u)
        if nu == 0.0:
            continue
        x = center + (radius / nu) * u
        den = problem.mean_constraint_sq_distance(x)
        if den < 1e-14:
            continue
        num = dist_intersection(problem.constraints, x, tol=dykstra_tol) ** 2
        ratio = num / den
        if best is None or ratio > best:
            best = ratio
    if best is None:
        raise ValueError("all probes were degenerate (feasible or near-feasible)")
    return best
