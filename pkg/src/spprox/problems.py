"""Generators for the experiment families and returns-data ingestion.

Families
--------
constrained-ls        batched/elementary least squares with random halfspaces
                      and a planted ground truth (three constraints active).
random-ls-polyhedron  row-sampled least squares over a random polyhedron; the
                      reference optimum is computed, not planted.
feasibility           least-norm point of an intersection of halfspaces.
finite-sum            strongly convex quadratic components around random
                      centers (clean analysis instance).
markowitz             portfolio model built from a returns table.

Generated problems store their known optimum as the minimizer of the realized
finite-sum objective over the constraint intersection.  For constrained-ls
the planted ground truth differs from that minimizer at desk scale by the
statistical error of the sample; it is kept in ``meta["ground_truth"]``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .components import BatchLeastSquares, LinearResidualSquared, QuadraticNorm
from .constraints import Halfspace, NonnegativeOrthant, WholeSpace, Box, \
    project_intersection
from .core import Array, RandomSource, StochasticProblem, norm

SUBGRADIENT_CAVEAT = (
    "least-squares losses are Lipschitz only on bounded sets; convex-case "
    "certificates are interpreted over the observed iterate region")


class ReferenceSolveError(RuntimeError):
    """The deterministic inner solver failed to reach its tolerance."""


def _projected_gradient(M: Array, h: Array, constraints, x_init: Array,
                        tol: float = 1e-10, max_iter: int = 200_000,
                        dykstra_tol: float = 1e-12) -> Array:
    """Minimize x'Mx - 2h'x over the intersection by projected gradient."""
    eigs = np.linalg.eigvalsh(M)
    L = 2.0 * float(eigs[-1])
    if L <= 0:
        raise ReferenceSolveError("objective has no curvature")
    step = 1.0 / L
    x = project_intersection(constraints, x_init, tol=dykstra_tol)
    for _ in range(max_iter):
        g = 2.0 * (M @ x - h)
        x_new = project_intersection(constraints, x - step * g, tol=dykstra_tol)
        if norm(x_new - x) <= tol:
            return project_intersection(constraints, x_new, tol=dykstra_tol / 10)
        x = x_new
    raise ReferenceSolveError(
        f"projected gradient did not converge to {tol} in {max_iter} iterations")


def _refine_optimum(losses, constraints, dim, x_init, tol=1e-10):
    probe = StochasticProblem(losses, constraints, dim)
    quad = probe._quad
    if quad is None:
        raise ReferenceSolveError("reference solve needs a quadratic objective")
    return _projected_gradient(quad.M, quad.h, constraints, x_init, tol=tol)


def gen_constrained_ls(n: int = 20, m: int = 2000, seed: int = 0,
                       noise: float = 1.0, active: int = 3,
                       refine: bool = True) -> StochasticProblem:
    """Constrained least squares with planted structure.

    Feature rows are Gaussian with covariance spectrum {1, 1/2, ..., 1/n} in
    a random orthogonal basis; targets are noisy linear responses of a random
    ground truth.  Losses are m/n strongly convex batches of n consecutive
    rows plus the first m/2 rows as elementary residuals (p = m/2 + m/n
    components in total), and p random halfspaces constrain the estimator
    with ``active`` of them tight at the ground truth.

    The problem's known optimum is the minimizer of the realized finite sum
    over the polyhedron (deterministic projected-gradient solve); the planted
    point stays in ``meta["ground_truth"]``.  ``refine=False`` skips the
    solve and leaves the optimum unset (sampling diagnostics at large m).
    """
    if n < 2 or m < n:
        raise ValueError("need n >= 2 and m >= n")
    rng = RandomSource(seed)
    G = rng.normal((n, n))
    Q, R = np.linalg.qr(G)
    Q = Q * np.sign(np.diag(R))  # fix the QR sign convention
    lams = 1.0 / np.arange(1, n + 1, dtype=np.float64)
    H_sqrt = (Q * np.sqrt(lams)) @ Q.T
    x_gt = rng.normal(n)
    A = rng.normal((m, n)) @ H_sqrt
    b = A @ x_gt + noise * rng.normal(m)

    losses = [BatchLeastSquares(A[j * n:(j + 1) * n], b[j * n:(j + 1) * n])
              for j in range(m // n)]
    losses += [LinearResidualSquared(A[i], b[i]) for i in range(m // 2)]
    p = len(losses)

    C = rng.normal((p, n))
    for _ in range(100):
        v = np.zeros(p)
        v[active:] = 0.1 + 0.9 * rng.uniform(size=p - active)
        d = C @ x_gt + v
        if np.all(C @ x_gt <= d + 1e-12):
            break
    else:  # pragma: no cover
        raise RuntimeError("could not place the ground truth inside the polyhedron")
    constraints = [Halfspace(C[i], d[i]) for i in range(p)]

    x_star = _refine_optimum(losses, constraints, n, x_gt) if refine else None
    H = (Q * lams) @ Q.T
    return StochasticProblem(
        losses, constraints, n, coupling="independent", x_star=x_star,
        one_pass=m,
        meta={"family": "constrained-ls", "ground_truth": x_gt,
              "feature_cov": H, "noise": noise, "active": active, "m": m,
              "subgradient_caveat": SUBGRADIENT_CAVEAT})


def gen_random_ls_polyhedron(n: int = 20, m: int = 1000, seed: int = 0,
                             noise: float = 1.0) -> StochasticProblem:
    """Row-sampled least squares over a random polyhedron.

    No solution structure is imposed; the stored optimum is the minimizer of
    the realized objective, computed by a deterministic projected-gradient
    solve to 1e-10.
    """
    if n < 2 or m < n:
        raise ValueError("need n >= 2 and m >= n")
    rng = RandomSource(seed)
    A = rng.normal((m, n))
    z0 = rng.normal(n)
    b = A @ z0 + noise * rng.normal(m)
    C = rng.normal((m, n))
    anchor = 0.5 * rng.normal(n)
    d = C @ anchor + rng.uniform(0.1, 1.1, m)  # anchor strictly interior
    losses = [LinearResidualSquared(A[i], b[i]) for i in range(m)]
    constraints = [Halfspace(C[i], d[i]) for i in range(m)]
    x_star = _refine_optimum(losses, constraints, n, anchor)
    return StochasticProblem(
        losses, constraints, n, coupling="independent", x_star=x_star,
        one_pass=m,
        meta={"family": "random-ls-polyhedron", "noise": noise, "m": m,
              "subgradient_caveat": SUBGRADIENT_CAVEAT})


def gen_feasibility(n: int = 10, sets: int = 20, seed: int = 0,
                    lam: float = 1.0, interior=None,
                    margin: float = 0.1) -> StochasticProblem:
    """Least-norm convex feasibility: f = (lam/2)||x||^2 on every draw.

    Halfspaces are random but share the ``interior`` point (default origin)
    with slack at least ``margin``; the optimum is the projection of the
    origin onto the intersection.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    rng = RandomSource(seed)
    center = np.zeros(n) if interior is None else np.asarray(interior, float)
    constraints = []
    for _ in range(sets):
        c = rng.normal(n)
        d = float(c @ center) + rng.uniform(margin, margin + 1.0)
        constraints.append(Halfspace(c, d))
    x_star = project_intersection(constraints, np.zeros(n), tol=1e-13)
    return StochasticProblem(
        [QuadraticNorm(n, lam)], constraints, n, coupling="independent",
        x_star=x_star, one_pass=sets,
        meta={"family": "feasibility", "lam": lam})


def gen_finite_sum(n: int = 5, m: int = 8, seed: int = 0,
                   spread: float = 1.0,
                   box_halfwidth: float | None = None) -> StochasticProblem:
    """Strongly convex finite sum: f_i = (alpha_i^2/2)||x - c_i||^2.

    Every component carries positive curvature, so the contraction-based
    analysis applies with exact constants.  The optimum is the curvature-
    weighted mean of the centers, optionally boxed (the box is centered on
    the optimum, so it stays the optimum).  kappa = 1: there is a single
    constraint set.
    """
    rng = RandomSource(seed)
    alphas = rng.uniform(0.5, 1.5, m)
    centers = spread * rng.normal((m, n))
    losses = [BatchLeastSquares((a / math.sqrt(2.0)) * np.eye(n),
                                (a / math.sqrt(2.0)) * c)
              for a, c in zip(alphas, centers)]
    w = alphas ** 2
    x_star = (w[:, None] * centers).sum(axis=0) / w.sum()
    if box_halfwidth is None:
        constraints = [WholeSpace(n)]
    else:
        constraints = [Box(x_star - box_halfwidth, x_star + box_halfwidth)]
    return StochasticProblem(
        losses, constraints, n, coupling="independent", x_star=x_star,
        kappa=1.0, one_pass=m, meta={"family": "finite-sum"})


# -- returns data -------------------------------------------------------------

@dataclass
class ReturnsTable:
    """Per-period asset returns with column means."""

    assets: list
    returns: Array

    @property
    def periods(self) -> int:
        return self.returns.shape[0]

    @property
    def n_assets(self) -> int:
        return self.returns.shape[1]

    @property
    def a_av(self) -> Array:
        return self.returns.mean(axis=0)


def load_returns_csv(path) -> ReturnsTable:
    """Parse a comma-separated returns table.

    First row is the header; one leading date/index column is permitted and
    ignored when non-numeric.  Ragged rows, non-numeric cells, and tables
    with fewer than two rows are errors carrying the offending location.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    width = len(header)
    raw = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            raise ValueError(f"{path}: line {lineno}: expected {width} cells, "
                             f"got {len(row)}")
        raw.append([cell.strip() for cell in row])
    if len(raw) < 2:
        raise ValueError(f"{path}: need at least 2 data rows, got {len(raw)}")

    def numeric_column(j):
        for r in raw:
            try:
                float(r[j])
            except ValueError:
                return False
        return True

    start = 0
    if width >= 2 and not numeric_column(0):
        start = 1  # date/index column
    assets = header[start:]
    data = np.empty((len(raw), width - start))
    for i, r in enumerate(raw):
        for j in range(start, width):
            try:
                data[i, j - start] = float(r[j])
            except ValueError:
                raise ValueError(
                    f"{path}: line {i + 2}: non-numeric cell in column "
                    f"{header[j]!r}") from None
    return ReturnsTable(assets=assets, returns=data)


def synth_returns(periods: int = 1276, n: int = 25,
                  seed: int = 0) -> ReturnsTable:
    """Synthetic daily-return table with factor structure (offline stand-in)."""
    rng = RandomSource(seed)
    means = 0.0005 + 0.0004 * rng.normal(n)
    loadings = 0.6 * rng.normal((n, 3))
    factors = rng.normal((periods, 3))
    eps = rng.normal((periods, n))
    data = means + 0.01 * (factors @ loadings.T) + 0.006 * eps
    return ReturnsTable(assets=[f"A{i:02d}" for i in range(n)], returns=data)


class MeanSquaredTarget:
    """Held-out objective mean((a_i'x - b)^2) over the test rows."""

    def __init__(self, rows: Array, b: float):
        self.rows = rows
        self.b = float(b)

    def __call__(self, x: Array) -> float:
        r = self.rows @ x - self.b
        return float(np.dot(r, r) / len(r))


def build_markowitz(table: ReturnsTable, b_policy="mean", seed: int = 0,
                    train_frac: float = 0.9) -> StochasticProblem:
    """Portfolio model over a returns table.

    One squared-residual loss per training row with target return b
    (b = mean of the per-asset training means under the "mean" policy, or a
    float override); the constraint draw picks uniformly among the
    nonnegative orthant, the budget halfspace e'x <= 1, and the return
    halfspace a_av'x >= b, independently of the loss row.  Rows are split
    train/test by a seeded shuffle (floor(train_frac * T) training rows).
    """
    T = table.periods
    n = table.n_assets
    rng = RandomSource(seed)
    perm = rng.shuffle(T)
    n_train = int(math.floor(train_frac * T))
    if n_train < 1 or n_train >= T:
        raise ValueError("degenerate train/test split")
    train_idx = np.sort(perm[:n_train])
    test_idx = np.sort(perm[n_train:])
    train = table.returns[train_idx]
    test = table.returns[test_idx]
    a_av = train.mean(axis=0)
    b = float(np.mean(a_av)) if b_policy == "mean" else float(b_policy)
    losses = [LinearResidualSquared(row, b) for row in train]
    constraints = [NonnegativeOrthant(n),
                   Halfspace(np.ones(n), 1.0),
                   Halfspace(-a_av, -b)]
    return StochasticProblem(
        losses, constraints, n, coupling="independent",
        test_objective=MeanSquaredTarget(test, b), one_pass=n_train,
        meta={"family": "markowitz", "b": b, "assets": list(table.assets),
              "train_rows": int(n_train), "test_rows": int(T - n_train),
              "a_av": a_av, "subgradient_caveat": SUBGRADIENT_CAVEAT})


# -- family dispatch -----------------------------------------------------------

@dataclass
class GeneratorSpec:
    """Family selector plus knobs; unknown families are rejected at dispatch."""

    family: str
    n: int = 20
    m: int = 2000
    seed: int = 0
    noise: float = 1.0
    active: int = 3
    lam: float = 1.0
    sets: int = 20
    margin: float = 0.1
    spread: float = 1.0
    returns_csv: str | None = None
    periods: int = 1276
    split_seed: int = 0
    b_policy: object = "mean"
    train_frac: float = 0.9


def generate(spec: GeneratorSpec) -> StochasticProblem:
    fam = spec.family
    if fam == "constrained-ls":
        return gen_constrained_ls(n=spec.n, m=spec.m, seed=spec.seed,
                                  noise=spec.noise, active=spec.active)
    if fam == "random-ls-polyhedron":
        return gen_random_ls_polyhedron(n=spec.n, m=spec.m, seed=spec.seed,
                                        noise=spec.noise)
    if fam == "feasibility":
        return gen_feasibility(n=spec.n, sets=spec.sets, seed=spec.seed,
                               lam=spec.lam, margin=spec.margin)
    if fam == "finite-sum":
        return gen_finite_sum(n=spec.n, m=spec.m, seed=spec.seed,
                              spread=spec.spread)
    if fam == "markowitz":
        if spec.returns_csv:
            table = load_returns_csv(spec.returns_csv)
        else:
            table = synth_returns(periods=spec.periods, n=spec.n,
                                  seed=spec.seed)
        return build_markowitz(table, b_policy=spec.b_policy,
                               seed=spec.split_seed,
                               train_frac=spec.train_frac)
    raise ValueError(f"unknown problem family {fam!r}")
