"""Sign-pattern regions of the privacy cost on the data simplex.

For a source (p_Y, P_{X|Y}) the per-release privacy cost of putting a
posterior x = p_{Y|u} on the simplex is

    f(x) = (1/2) * || P_{X|Y} (x - p_Y) ||_1,

a piecewise-affine convex function.  Fixing the sign of every term
r_i . (x - p_Y) partitions the simplex into at most 2^m polytopes on
which f is affine, and the optimal release mechanism only ever needs
posteriors drawn from the extreme points of those polytopes.  This
module enumerates the regions and their extreme points via basic
feasible solutions of the slack-augmented equality systems.

Enumeration cost is Theta(2^m * C(n+m, m+1)) and grows exponentially in
the number of secret symbols, so hard caps reject oversized inputs
instead of silently truncating.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import lp
from .probability import JointSource, Pmf

FORM_CAP = 20
Y_CAP = 10
DEDUP_TOL = 1e-9
RANK_TOL = 1e-10
ZERO_FORM_TOL = 1e-10


class TooManyForms(ValueError):
    """More sign terms than the enumeration cap allows."""


class DegenerateSystem(RuntimeError):
    """No independent basis found for a nonempty region (internal bug)."""


@dataclass(frozen=True)
class LinearForm:
    """One signed term of the cost: value(x) = coeffs . x + offset.

    Built from row r of P_{X|Y} as coeffs = r, offset = -r . p_Y, so the
    value is r . (x - p_Y).  ``row`` records the source row.
    """

    coeffs: np.ndarray
    offset: float
    row: int

    def value(self, x) -> float:
        return float(np.dot(self.coeffs, x) + self.offset)


def build_linear_forms(src: JointSource) -> list[LinearForm]:
    """One form per row of P_{X|Y}, dropping rows that vanish on the simplex.

    A row with equal entries gives r . (x - p_Y) = 0 for every simplex
    point; keeping it would double the region count without adding a
    constraint.  Dropped rows are recoverable from the surviving ``row``
    indices.
    """
    forms = []
    for i in range(src.n_x):
        r = src.channel_x_given_y.matrix[i]
        if r.max() - r.min() <= ZERO_FORM_TOL:
            continue
        forms.append(LinearForm(r.copy(), -float(np.dot(r, src.p_y.probs)), i))
    return forms


def f_value(forms: list[LinearForm], x) -> float:
    """The privacy cost (1/2) sum_i |form_i(x)| of a simplex point."""
    return 0.5 * sum(abs(f.value(x)) for f in forms)


@dataclass(frozen=True)
class Region:
    """One sign-pattern polytope {x in simplex : A_tilde x <= b_tilde}.

    ``sign_pattern`` has one entry per retained form; the cost restricted
    to the region is the affine function sum_i sign_i * form_i(x) / 2.
    Regions produced by ``enumerate_regions`` are certified nonempty.
    """

    sign_pattern: tuple[int, ...]
    a_tilde: np.ndarray
    b_tilde: np.ndarray

    @property
    def n_constraints(self) -> int:
        return self.a_tilde.shape[0]

    @property
    def dim(self) -> int:
        return self.a_tilde.shape[1]

    def contains(self, x, tol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=float)
        if np.any(x < -tol) or abs(x.sum() - 1.0) > tol:
            return False
        return bool(np.all(self.a_tilde @ x <= self.b_tilde + tol))

    def membership_slack(self, x) -> float:
        """Smallest slack over all constraints; negative means outside."""
        x = np.asarray(x, dtype=float)
        slacks = [float((self.b_tilde - self.a_tilde @ x).min()),
                  float(x.min()), -abs(float(x.sum()) - 1.0)]
        return min(slacks)


def _direction_groups(forms: list[LinearForm]) -> list[list[int]]:
    """Group forms whose coefficient vectors are positive multiples.

    Grouped forms always share a sign, so sign enumeration runs over one
    representative per group.  Probability rows are nonnegative, hence
    negative proportionality cannot occur; forms that merely coincide up
    to sign on the simplex (without proportional coefficients) stay
    distinct, preserving the full formal region presentation.
    """
    groups: list[list[int]] = []
    reps: list[np.ndarray] = []
    for idx, form in enumerate(forms):
        v = form.coeffs
        placed = False
        for g, rep in enumerate(reps):
            scale = np.dot(rep, v) / np.dot(rep, rep)
            if scale > 0 and np.max(np.abs(v - scale * rep)) <= 1e-12:
                groups[g].append(idx)
                placed = True
                break
        if not placed:
            groups.append([idx])
            reps.append(v)
    return groups


def enumerate_regions(forms: list[LinearForm], p_y: Pmf) -> list[Region]:
    """All nonempty sign-pattern regions, in lexicographic pattern order.

    Every pattern's region contains p_Y itself (all forms vanish there),
    but each region is still certified by a feasibility check so the
    nonemptiness invariant never rests on that argument alone.
    """
    m = len(forms)
    if m > FORM_CAP:
        raise TooManyForms(f"{m} retained forms exceed the cap of {FORM_CAP}")
    n = len(p_y)
    if n > Y_CAP:
        raise TooManyForms(f"|Y| = {n} exceeds the cap of {Y_CAP}")
    if not forms:
        a = np.zeros((0, n))
        return [Region((), a, np.zeros(0))]

    groups = _direction_groups(forms)
    ones = np.ones((1, n))
    regions = []
    for rep_signs in itertools.product((1, -1), repeat=len(groups)):
        signs = [0] * m
        for g, s in zip(groups, rep_signs):
            for idx in g:
                signs[idx] = s
        # sign * form(x) >= 0  <=>  -sign * coeffs . x <= sign * offset
        a_tilde = np.array([-s * f.coeffs for s, f in zip(signs, forms)])
        b_tilde = np.array([s * f.offset for s, f in zip(signs, forms)])
        prob = lp.LpProblem(c=np.zeros(n), a_eq=ones, b_eq=np.array([1.0]),
                            a_ub=a_tilde, b_ub=b_tilde)
        if lp.feasible(prob):
            regions.append(Region(tuple(signs), a_tilde, b_tilde))
    return regions


def region_extreme_points(region: Region) -> list[Pmf]:
    """Extreme points of a region via basic feasible solutions.

    Slack variables turn A x <= b into equalities; together with the
    simplex equality the augmented system A' x' = b', x' >= 0 has full
    row rank, and its basic feasible solutions (invertible column bases
    with nonnegative solution) project exactly onto the region vertices.
    """
    m, n = region.n_constraints, region.dim
    aug = np.zeros((m + 1, n + m))
    aug[:m, :n] = region.a_tilde
    aug[:m, n:] = np.eye(m)
    aug[m, :n] = 1.0
    rhs = np.concatenate([region.b_tilde, [1.0]])

    points: list[np.ndarray] = []
    found_basis = False
    for cols in itertools.combinations(range(n + m), m + 1):
        sub = aug[:, cols]
        if np.linalg.matrix_rank(sub, tol=RANK_TOL) < m + 1:
            continue
        found_basis = True
        sol = np.linalg.solve(sub, rhs)
        if sol.min() < -DEDUP_TOL:
            continue
        x = np.zeros(n + m)
        x[list(cols)] = sol
        point = np.clip(x[:n], 0.0, None)
        s = point.sum()
        if s <= 0:
            continue
        point = point / s
        if not any(np.max(np.abs(point - q)) <= DEDUP_TOL for q in points):
            points.append(point)
    if not found_basis:
        raise DegenerateSystem("no independent column basis in region system")
    return [Pmf(p) for p in points]


@dataclass(frozen=True)
class SPointSet:
    """The deduplicated union of all regions' extreme points.

    ``region_index[k]`` lists every region whose enumeration produced
    point k (first-seen coordinates win on near-duplicates), and
    ``f_values[k]`` caches the privacy cost at the point.
    """

    points: list[Pmf]
    f_values: np.ndarray
    region_index: list[list[int]]
    dropped_rows: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.points)

    def as_matrix(self) -> np.ndarray:
        """Points stacked as columns (|Y| x K), for LP assembly."""
        return np.array([p.probs for p in self.points]).T


def enumerate_spoints(src: JointSource,
                      forms: list[LinearForm] | None = None,
                      regions: list[Region] | None = None) -> SPointSet:
    """Build the sufficient support set for optimal release posteriors."""
    if forms is None:
        forms = build_linear_forms(src)
    if regions is None:
        regions = enumerate_regions(forms, src.p_y)
    kept_rows = {f.row for f in forms}
    dropped = tuple(i for i in range(src.n_x) if i not in kept_rows)

    points: list[Pmf] = []
    owners: list[list[int]] = []
    for r_idx, region in enumerate(regions):
        for pt in region_extreme_points(region):
            hit = None
            for k, q in enumerate(points):
                if np.max(np.abs(pt.probs - q.probs)) <= DEDUP_TOL:
                    hit = k
                    break
            if hit is None:
                points.append(pt)
                owners.append([r_idx])
            elif r_idx not in owners[hit]:
                owners[hit].append(r_idx)
    fvals = np.array([f_value(forms, p.probs) for p in points])
    return SPointSet(points, fvals, owners, dropped)
