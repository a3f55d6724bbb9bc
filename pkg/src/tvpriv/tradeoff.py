"""Exact utility-privacy trade-offs under a total-variation leakage budget.

Given a source (p_Y, P_{X|Y}), a utility kind and a leakage budget eps,
the optimal release mechanism maximizes utility of U about Y subject to
T(X;U) <= eps.  For binary Y all three utilities admit closed forms; in
general the problem reduces to a linear program whose columns are the
sign-region extreme points of the data simplex:

    minimize    sum_i w_i phi(s_i)
    subject to  sum_i w_i f(s_i) <= eps     (privacy budget)
                sum_i w_i s_i     = p_Y     (marginal consistency)
                w >= 0

with phi the per-posterior cost of the chosen utility.  A basic optimal
solution has at most |Y|+1 nonzero weights, which is exactly the release
alphabet bound, and the mechanism is read off as p_U(u_i) = w_i,
p_{Y|u_i} = s_i.

Budgets are clamped to [0, T(X;Y)]: beyond T(X;Y) releasing Y itself is
feasible, so larger requests change nothing and are not errors.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import lp
from .leakage import avg_tv_leakage, mutual_information
from .probability import (Channel, JointSource, Mechanism, entropy,
                          marginal_x)
from .regions import SPointSet, build_linear_forms, enumerate_spoints

LOG2E = float(np.log2(np.e))
SUPPORT_TOL = 1e-9


class MissingYValues(ValueError):
    """Squared-error utility requires numeric y_values on the source."""


class NotBinary(ValueError):
    """Operation defined only for binary data alphabets."""


class EmptySupport(ValueError):
    """A weight vector with no mass cannot define a mechanism."""


class UtilityKind(str, enum.Enum):
    MUTUAL_INFORMATION = "mutual_information"
    MMSE = "mmse"
    ERROR_PROBABILITY = "error_probability"


def t_xy(src: JointSource) -> float:
    """T(X;Y): the leakage of releasing Y itself, and the useful budget cap."""
    p_x = marginal_x(src)
    return avg_tv_leakage(src.p_y, src.channel_x_given_y, p_x)


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


def mi_binary(p: float, delta_l1: float, eps: float) -> float:
    """Closed-form best I(Y;U) for binary Y under budget eps.

    ``delta_l1`` is the L1 distance between the two conditional columns
    of P_{X|Y}; zero means X is independent of Y and the budget is
    vacuous, so the full entropy H_b(p) is achievable.
    """
    h = binary_entropy(p)
    scale = p * (1 - p) * delta_l1
    if scale <= 0.0:
        return h
    return min(1.0, eps / scale) * h


def mmse_binary(p: float, delta_l1: float, eps: float,
                y1: float, y2: float) -> float:
    """Closed-form best MMSE for binary Y with values (y1, y2)."""
    if delta_l1 <= 0.0:
        return 0.0
    return max(0.0, p * (1 - p) - eps / delta_l1) * (y1 - y2) ** 2


def perr_binary(p: float, delta_l1: float, eps: float) -> float:
    """Closed-form best error probability for binary Y."""
    if delta_l1 <= 0.0:
        return 0.0
    return min(p, 1 - p) * max(0.0, 1.0 - eps / (p * (1 - p) * delta_l1))


@dataclass(frozen=True)
class TradeoffSolution:
    """One solved budget point: value, optimal mechanism, achieved leakage."""

    epsilon: float            # effective (clamped) budget
    epsilon_requested: float
    utility_value: float
    mechanism: Mechanism
    achieved_t: float
    spoints_used: SPointSet


@dataclass(frozen=True)
class TradeoffPoint:
    epsilon: float
    utility_value: float
    achieved_t: float


def _phi(kind: UtilityKind, spoints: SPointSet, src: JointSource) -> np.ndarray:
    """Per-posterior objective costs phi(s_i) for the reduced LP."""
    cols = spoints.as_matrix()
    if kind == UtilityKind.MUTUAL_INFORMATION:
        return np.array([entropy(cols[:, i]) for i in range(cols.shape[1])])
    if kind == UtilityKind.MMSE:
        yv = src.y_values
        mean = yv @ cols
        return yv ** 2 @ cols - mean ** 2
    if kind == UtilityKind.ERROR_PROBABILITY:
        return -cols.max(axis=0)
    raise ValueError(f"unknown utility kind {kind!r}")


def _value_from_lp(kind: UtilityKind, lp_value: float, h_y: float) -> float:
    if kind == UtilityKind.MUTUAL_INFORMATION:
        return h_y - lp_value
    if kind == UtilityKind.MMSE:
        return lp_value
    return 1.0 + lp_value


def _full_utility(kind: UtilityKind, src: JointSource) -> float:
    """Utility of releasing Y unchanged (the eps >= T(X;Y) endpoint)."""
    if kind == UtilityKind.MUTUAL_INFORMATION:
        return entropy(src.p_y)
    return 0.0


def mechanism_from_weights(weights: np.ndarray, spoints: SPointSet,
                           src: JointSource, kind: UtilityKind) -> Mechanism:
    """Assemble the release channel from optimal support weights.

    Support points become U symbols with p_U(u_i) = w_i and posterior
    p_{Y|u_i} = s_i, so p_{U|Y}(u_i|y) = w_i s_i(y) / p_Y(y).  Labels:
    the conditional mean of Y for squared error (which attains the MMSE
    lower bound with equality), the posterior mode index for error
    probability (ties to the lowest index), none for mutual information.
    """
    weights = np.asarray(weights, dtype=float)
    support = np.where(weights > SUPPORT_TOL)[0]
    if support.size == 0:
        raise EmptySupport("no weight exceeds the support tolerance")
    w = weights[support]
    w = w / w.sum()
    cols = spoints.as_matrix()[:, support]           # |Y| x |U|
    channel_u_given_y = (cols * w).T / src.p_y.probs  # |U| x |Y|
    # marginal consistency makes columns stochastic up to LP tolerance
    channel_u_given_y /= channel_u_given_y.sum(axis=0)

    labels = None
    if kind == UtilityKind.MMSE:
        labels = src.y_values @ cols
    elif kind == UtilityKind.ERROR_PROBABILITY:
        labels = np.argmax(cols, axis=0).astype(float)
    return Mechanism(Channel(channel_u_given_y), labels)


def solve_tradeoff(src: JointSource, kind: UtilityKind, eps: float,
                   spoints: SPointSet | None = None) -> TradeoffSolution:
    """Solve one budget point exactly; see the module docstring for the LP."""
    kind = UtilityKind(kind)
    if kind == UtilityKind.MMSE and src.y_values is None:
        raise MissingYValues("mmse utility needs y_values on the source")

    t_cap = t_xy(src)
    eps_eff = min(max(float(eps), 0.0), t_cap)

    if spoints is None:
        spoints = enumerate_spoints(src)

    if spoints.f_values.size == 0 or np.all(spoints.f_values <= 0):
        # X independent of Y (no retained forms): any release is free,
        # so release Y itself
        labels = None
        if kind == UtilityKind.MMSE:
            labels = src.y_values
        elif kind == UtilityKind.ERROR_PROBABILITY:
            labels = np.arange(src.n_y, dtype=float)
        mech = Mechanism.identity(src.n_y, labels)
        return TradeoffSolution(eps_eff, float(eps), _full_utility(kind, src),
                                mech, 0.0, spoints)

    problem = lp.LpProblem(
        c=_phi(kind, spoints, src),
        a_eq=spoints.as_matrix(),
        b_eq=src.p_y.probs,
        a_ub=spoints.f_values[None, :],
        b_ub=np.array([eps_eff]),
    )
    sol = lp.solve(problem)
    if sol.status != lp.OPTIMAL:
        raise RuntimeError(f"trade-off LP returned status {sol.status!r}")

    mech = mechanism_from_weights(sol.weights, spoints, src, kind)
    achieved = float(np.dot(sol.weights, spoints.f_values))
    value = _value_from_lp(kind, sol.value, entropy(src.p_y))
    return TradeoffSolution(eps_eff, float(eps), value, mech, achieved, spoints)


def sweep_curve(src: JointSource, kind: UtilityKind,
                grid_size: int) -> list[TradeoffPoint]:
    """Solve an even budget grid over [0, T(X;Y)] and return the curve.

    The support set is enumerated once and shared across grid points.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    kind = UtilityKind(kind)
    t_cap = t_xy(src)
    spoints = enumerate_spoints(src)
    points = []
    for j in range(grid_size):
        eps = t_cap * j / (grid_size - 1)
        sol = solve_tradeoff(src, kind, eps, spoints=spoints)
        points.append(TradeoffPoint(eps, sol.utility_value, sol.achieved_t))
    return points


def mi_tradeoff_bounds(src: JointSource, eps_mi: float):
    """Bounds on the trade-off when mutual information is the privacy
    measure, for binary Y.

    Returns ``(lower, upper_linear, upper_tv)`` for a budget
    I(X;U) <= eps_mi:

    * lower        = H(Y) eps_mi / I(X;Y)      (chord of the region)
    * upper_linear = eps_mi + H(Y|X)           (linear outer bound)
    * upper_tv     = the closed-form total-variation trade-off evaluated
      at the leakage level sqrt(eps_mi / (2 log2 e)), valid because that
      level of total variation is implied by the mutual-information
      budget; it beats the linear bound at small eps_mi.
    """
    if src.n_y != 2:
        raise NotBinary("mutual-information trade-off bounds need |Y| = 2")
    p = float(src.p_y.probs[0])
    cols = src.channel_x_given_y.matrix
    delta_l1 = float(np.abs(cols[:, 0] - cols[:, 1]).sum())
    h_y = entropy(src.p_y)
    i_xy = mutual_information(src.p_y, src.channel_x_given_y, marginal_x(src))
    lower = h_y if i_xy <= 1e-12 else h_y * eps_mi / i_xy
    upper_linear = eps_mi + (h_y - i_xy)
    upper_tv = mi_binary(p, delta_l1, float(np.sqrt(eps_mi / (2.0 * LOG2E))))
    return lower, upper_linear, upper_tv
