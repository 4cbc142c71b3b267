"""Evaluators for the closed-form convergence guarantees.

Each evaluator is a direct transcription of one stated bound so that harness
plots can overlay predicted curves on empirical ones.  ``ProblemConstants``
holds every symbol the formulas need; the ``measure`` builder fills it from a
problem with a known optimum.

Two expected-squared-Lipschitz constants coexist deliberately:

* ``exp_lips_sq``  — gradient-Lipschitz constants (smooth strongly convex
  analysis); measurable from the components.
* ``exp_subgrad_sq`` — subgradient bound over the iterate region (convex
  Lipschitz analysis); least-squares losses are only locally Lipschitz, so
  this one is user-supplied.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .constraints import dist_intersection, estimate_kappa
from .core import Array, RandomSource, StochasticProblem, norm
from .schedules import StepsizeSchedule, phi


class MissingConstantError(ValueError):
    """A bound evaluator is missing required constants."""


@dataclass
class ProblemConstants:
    """The constants feeding the bound formulas.

    r0 = ||x0 - x*||, eta^2 = E[||grad f(x*;S)||^2], dist0 = dist_X(x0).
    """

    r0: float
    kappa: float
    exp_grad_sq_opt: float
    grad_norm_opt: float
    exp_lips_sq: float
    sigmas: Array
    dist0: float
    mu0: float
    sigma_weights: Array | None = None
    gamma: float | None = None
    exp_subgrad_sq: float | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kappa is not None and self.kappa < 1.0:
            raise ValueError("kappa must be >= 1")

    # -- derived aggregates ---------------------------------------------------

    def _weights(self) -> Array:
        if self.sigma_weights is not None:
            return self.sigma_weights
        n = len(self.sigmas)
        return np.full(n, 1.0 / n)

    def theta0_at(self, mu: float) -> float:
        """E[1/(1 + mu sigma)^2] over the component distribution."""
        if mu <= 0:
            raise ValueError("mu must be positive")
        s = np.asarray(self.sigmas, dtype=np.float64)
        return float(np.dot(self._weights(), 1.0 / (1.0 + mu * s) ** 2))

    @property
    def eta(self) -> float:
        return math.sqrt(self.exp_grad_sq_opt)

    def cal_a(self) -> float:
        """max{r0, mu0 eta / (1 - sqrt(theta0))}: the iterate-radius cap."""
        th0 = self.theta0_at(self.mu0)
        if th0 >= 1.0:
            raise ValueError("theta0 >= 1: no strong convexity in expectation")
        return max(self.r0, self.mu0 * self.eta / (1.0 - math.sqrt(th0)))

    def cal_b(self) -> float:
        """sqrt(2 eta^2) + A sqrt(2 E[L^2])."""
        return (math.sqrt(2.0 * self.exp_grad_sq_opt)
                + self.cal_a() * math.sqrt(2.0 * self.exp_lips_sq))

    def cal_d(self, gamma: float, kappa_power: int = 1) -> float:
        """The rate constant of the variable-stepsize analysis.

        ``kappa_power=2`` gives the restarted variant of the constant.  The
        leading term divides by log(kappa/(kappa-1)), which is singular at
        kappa = 1; there the term is taken as 0 when dist0 = 0 (the bound
        implicitly presumes kappa > 1) and an error otherwise.
        """
        A = self.cal_a()
        B = self.cal_b()
        kap = self.kappa
        kp = kap ** kappa_power
        if kap == 1.0:
            if self.dist0 == 0.0:
                lead = 0.0
            else:
                raise ValueError("kappa = 1 with dist_X(x0) > 0: "
                                 "log(kappa/(kappa-1)) term is singular")
        else:
            lead = ((self.dist0 + 2.0 * self.mu0 * kp * B)
                    / (self.mu0 * math.log(kap / (kap - 1.0))))
        return (4.0 * self.grad_norm_opt * (lead + 3.0 ** gamma * B * kp)
                + 2.0 * self.eta * math.sqrt(
                    2.0 * self.exp_grad_sq_opt + 2.0 * self.exp_lips_sq * A ** 2)
                + 2.0 * self.eta * A * math.sqrt(self.exp_lips_sq))

    @classmethod
    def measure(cls, problem: StochasticProblem, x0: Array, mu0: float,
                gamma: float | None = None, kappa: float | None = None,
                kappa_probes: int = 0, rng: RandomSource | None = None,
                dykstra_tol: float = 1e-10) -> "ProblemConstants":
        """Fill the constants from a problem with a known optimum.

        kappa resolution order: explicit argument, then ``problem.kappa``,
        then an empirical estimate with ``kappa_probes`` probes (requires
        ``rng``); otherwise an error.  The estimate is a lower bound and is
        reported as such in ``meta``.
        """
        if problem.x_star is None:
            raise MissingConstantError(
                "problem has no known optimum x*; refusing to guess constants")
        x0 = np.asarray(x0, dtype=np.float64)
        meta = {}
        if kappa is None:
            if problem.kappa is not None:
                kappa = problem.kappa
            elif kappa_probes > 0 and rng is not None:
                kappa = max(1.0, estimate_kappa(problem, kappa_probes, rng,
                                                dykstra_tol=dykstra_tol))
                meta["kappa_source"] = "empirical lower bound"
            else:
                raise MissingConstantError(
                    "no kappa available: pass kappa= or kappa_probes with rng")
        xs = problem.x_star
        return cls(
            r0=norm(x0 - xs),
            kappa=float(kappa),
            exp_grad_sq_opt=problem.exp_grad_norm_sq(xs),
            grad_norm_opt=norm(problem.mean_gradient(xs)),
            exp_lips_sq=problem.exp_lips_grad_sq(),
            sigmas=problem.sigma_values(),
            sigma_weights=problem._lweights(),
            dist0=dist_intersection(problem.constraints, x0, tol=dykstra_tol),
            mu0=float(mu0),
            gamma=gamma,
            exp_subgrad_sq=problem.exp_subgrad_sq,
            meta=meta)


def _require(c: ProblemConstants, names) -> None:
    missing = [n for n in names if getattr(c, n) is None]
    if missing:
        raise MissingConstantError(f"missing constants: {', '.join(missing)}")


def convex_bounds(c: ProblemConstants, k: int,
                  schedule: StepsizeSchedule) -> tuple[float, float, float]:
    """Convex-case certificates after k iterations of the averaged scheme.

    Returns (suboptimality upper bound, suboptimality lower bound,
    feasibility-squared upper bound) with mu1 = sum of the first k stepsizes,
    mu2 = sum of their squares, and R = mu0 kappa (r0^2 + E[L^2] mu2).
    Uses the user-supplied subgradient constant ``exp_subgrad_sq``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    _require(c, ("exp_subgrad_sq", "kappa", "r0"))
    L2 = c.exp_subgrad_sq
    s1, s2 = schedule.partial_sums(k)
    mu0 = schedule.at(0)
    R = mu0 * c.kappa * (c.r0 ** 2 + L2 * s2)
    ratio = s2 / s1
    upper = R / (2.0 * mu0 * c.kappa * s1)
    lower = (-c.kappa * L2 * (ratio + 2.0 * mu0)
             - math.sqrt(L2 * R / s1))
    feas_sq = (2.0 * c.kappa ** 2 * L2 * (ratio + 2.0 * mu0) ** 2
               + 2.0 * R / s1)
    return upper, lower, feas_sq


def constant_step_plan(epsilon: float,
                       c: ProblemConstants) -> tuple[float, int]:
    """Constant stepsize and iteration count guaranteeing epsilon accuracy.

    mu = eps / (E[L^2](3k + sqrt(2k))) and the smallest integer K with
    K >= E[L^2] r0^2 / eps^2 * max{1, (3k + sqrt(2k))^2}.  The plan's
    standing hypotheses r0 >= 1 and E[L^2] >= 2 are checked and warned about.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    _require(c, ("exp_subgrad_sq", "kappa", "r0"))
    L2 = c.exp_subgrad_sq
    if c.r0 < 1.0 or L2 < 2.0:
        warnings.warn("constant-step plan assumes r0 >= 1 and E[L^2] >= 2; "
                      "the returned pair may be conservative", stacklevel=2)
    factor = 3.0 * c.kappa + math.sqrt(2.0 * c.kappa)
    mu = epsilon / (L2 * factor)
    K = math.ceil(L2 * c.r0 ** 2 / epsilon ** 2 * max(1.0, factor ** 2))
    return mu, int(K)


def constant_step_envelope(c: ProblemConstants, mu: float,
                           k: int) -> tuple[float, float]:
    """Linear-convergence envelope for constant-stepsize runs.

    Returns (2 theta^k r0^2 + 2 mu^2 eta^2/(1-sqrt(theta))^2, noise radius
    mu eta/(1-sqrt(theta))) with theta = E[theta_S(mu)^2].
    """
    tb = c.theta0_at(mu)
    if tb >= 1.0:
        raise ValueError("E[theta_S^2(mu)] >= 1: envelope undefined")
    root = math.sqrt(tb)
    radius = mu * c.eta / (1.0 - root)
    value = 2.0 * tb ** k * c.r0 ** 2 + 2.0 * (mu * c.eta) ** 2 / (1.0 - root) ** 2
    return value, radius


def strongly_convex_bound(c: ProblemConstants, k: int, gamma: float) -> float:
    """Nonasymptotic bound on E[||x^k - x*||^2] for mu_k = mu0/k^gamma.

    gamma in (0,1) uses the phi-exponent form; gamma = 1 splits on theta0
    against 1/e.  Branch selection is exact; the three gamma = 1 expressions
    do not agree at the boundary.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0.0 < gamma <= 1.0:
        raise ValueError("gamma must lie in (0, 1]")
    th0 = c.theta0_at(c.mu0)
    if not 0.0 < th0 < 1.0:
        raise ValueError(f"theta0 = {th0} outside (0, 1)")
    r0sq = c.r0 ** 2
    mu0sq = c.mu0 ** 2
    if gamma < 1.0:
        D = c.cal_d(gamma, kappa_power=1)
        head = th0 ** phi(1.0 - gamma, k) * r0sq
        expo = phi(1.0 - gamma, k) - phi(1.0 - gamma, (k + 1) / 2.0)
        mid = D * th0 ** expo * mu0sq * (phi(1.0 - 2.0 * gamma, (k + 1) / 2.0) + 2.0)
        tail = D * mu0sq * 4.0 ** gamma / ((1.0 - th0) * k ** gamma)
        return head + mid + tail
    head = th0 ** phi(0.0, k) * r0sq
    lam = math.log(1.0 / th0)
    boundary = 1.0 / math.e
    if th0 < boundary:
        tail = 2.0 * mu0sq / (k * (lam - 1.0))
    elif th0 == boundary:
        tail = 2.0 * mu0sq * math.log(k) / k
    else:
        tail = (2.0 / k) ** lam * mu0sq / (1.0 - lam)
    return head + tail


def iteration_complexity(epsilon: float, gamma: float,
                         c: ProblemConstants, cap: int = 2 ** 62) -> int:
    """Smallest k with strongly_convex_bound(c, k, gamma) <= epsilon.

    Found by doubling into the monotone tail of the bound and bisecting the
    crossing.  Raises if the bound has not reached epsilon by ``cap``.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")

    def ok(k):
        return strongly_convex_bound(c, k, gamma) <= epsilon

    if ok(1):
        return 1
    hi = 2
    while not ok(hi):
        hi *= 2
        if hi > cap:
            raise ValueError(f"bound never reaches epsilon within {cap}")
    lo = hi // 2  # ok(lo) is False
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def rspp_plan(epsilon: float, gamma: float,
              c: ProblemConstants) -> tuple[int, float]:
    """Epoch count and total-iteration lower bound for the restarted scheme.

    T = ceil(max{ln(2 r0^2/eps)/ln(1/theta0), (2^(gamma+1) D_r C / eps)^(1/gamma)})
    (at least 1), with total inner iterations at least T^(1+gamma)/(1+gamma).
    The constant C's 1/(2(1-gamma) ln(1/sqrt(theta0))) term is derived for
    gamma < 1 only and is degenerate at gamma >= 1; it is dropped there.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    th0 = c.theta0_at(c.mu0)
    if not 0.0 < th0 < 1.0:
        raise ValueError(f"theta0 = {th0} outside (0, 1)")
    Dr = c.cal_d(gamma, kappa_power=2)
    mu1 = c.mu0  # mu_t = mu0/t^gamma at t = 1
    C = mu1 ** 2 / (1.0 - th0) ** 2
    if gamma < 1.0:
        C += 1.0 / (2.0 * (1.0 - gamma) * math.log(1.0 / math.sqrt(th0)))
    arg1 = math.log(2.0 * c.r0 ** 2 / epsilon) / math.log(1.0 / th0)
    arg2 = (2.0 ** (gamma + 1.0) * Dr * C / epsilon) ** (1.0 / gamma)
    T = max(1, math.ceil(max(arg1, arg2)))
    total = T ** (1.0 + gamma) / (1.0 + gamma)
    return T, total
