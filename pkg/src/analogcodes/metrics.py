"""Structural metrics of a linear analog code.

All functions take a plain k x n generator matrix (or anything convertible);
fitted estimators expose theirs as ``generator_``.  The central objects are
the eigenvalues of G G^H: their mean is the encoding power gain, their
minimum is the minimum squared-distance expansion ratio, and their spread
decides whether the code attains the distance bound.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import linalg
from .validation import (
    RANK_RTOL,
    RankDeficientError,
    check_complex_matrix,
    check_count,
    check_seed,
    check_vector,
)

__all__ = [
    "MDS",
    "NOT_MDS",
    "SAMPLED_LIKELY_MDS",
    "MdsVerdict",
    "MetricsReport",
    "encoding_power_gain",
    "distance_ratio",
    "min_distance_ratio",
    "average_distance_ratio",
    "eigenvalue_spread",
    "is_mdre",
    "small_weight_witness",
    "is_mds",
    "metrics_report",
]

#: Default relative eigenvalue spread below which a code counts as MDRE.
MDRE_REL_TOL = 1e-8

#: Default singular-value ratio below which a k-column submatrix counts as singular.
MDS_COND_TOL = 1e-10

#: Exhaustive MDS scans are refused above this many subsets.
MDS_EXHAUSTIVE_LIMIT = 10**6


def encoding_power_gain(g) -> float:
    """trace(G G^H) / k: average codeword power per unit source power."""
    g = check_complex_matrix(g, "generator")
    return float(np.vdot(g, g).real) / g.shape[0]


def distance_ratio(g, u, u2) -> float:
    """Squared distance expansion ||G^H (u - u2)||^2 / ||u - u2||^2."""
    g = check_complex_matrix(g, "generator")
    u = check_vector(u, g.shape[0], "u")
    u2 = check_vector(u2, g.shape[0], "u2")
    d = u - u2
    dd = float(np.vdot(d, d).real)
    if dd == 0.0:
        raise ValueError("distance ratio is undefined for u = u2")
    v = d @ g.conj()
    return float(np.vdot(v, v).real) / dd


def min_distance_ratio(g) -> float:
    """Smallest eigenvalue of G G^H: the infimum of distance_ratio over all pairs."""
    g = check_complex_matrix(g, "generator")
    low = float(linalg.hermitian_eigenvalues(linalg.gram(g))[0])
    return max(low, 0.0)


def average_distance_ratio(g, trials=1000, seed=0) -> tuple[float, float]:
    """Monte Carlo mean of distance_ratio(u, 0) over standard complex Gaussian u.

    Returns (mean, half-width of the 95% confidence interval).  The exact
    expectation for a spherically symmetric source is the encoding power
    gain, which makes this an empirical cross-check of the trace formula.
    """
    g = check_complex_matrix(g, "generator")
    trials = check_count(trials, "trials")
    k = g.shape[0]
    rng = np.random.default_rng(check_seed(seed))
    u = (rng.standard_normal((trials, k)) + 1j * rng.standard_normal((trials, k))) / math.sqrt(2.0)
    v = u @ g.conj()
    num = np.sum(v.real**2 + v.imag**2, axis=1)
    den = np.sum(u.real**2 + u.imag**2, axis=1)
    ratios = num / den
    mean = float(np.mean(ratios))
    if trials < 2:
        return mean, 0.0
    half = 1.96 * float(np.std(ratios, ddof=1)) / math.sqrt(trials)
    return mean, half


def eigenvalue_spread(g) -> float:
    """(d_max - d_min) / d_max over the eigenvalues of G G^H."""
    g = check_complex_matrix(g, "generator")
    ev = linalg.hermitian_eigenvalues(linalg.gram(g))
    if ev[-1] <= 0.0:
        raise RankDeficientError("eigenvalue spread is undefined for a zero generator")
    return float((ev[-1] - ev[0]) / ev[-1])


def is_mdre(g, rel_tol=MDRE_REL_TOL) -> bool:
    """True iff all eigenvalues of G G^H agree to relative spread rel_tol.

    Codes with this property expand every source-pair distance by the same
    factor, which is exactly when the minimum distance ratio reaches its
    upper bound (the power gain).
    """
    rel_tol = float(rel_tol)
    if not 0.0 < rel_tol < 1.0:
        raise ValueError(f"rel_tol must be in (0, 1), got {rel_tol!r}")
    return eigenvalue_spread(g) <= rel_tol


def small_weight_witness(g, epsilon) -> tuple[np.ndarray, float]:
    """A source vector whose codeword has squared weight below epsilon.

    Takes u supported on the first nonzero row of G with amplitude half the
    bound sqrt(epsilon / ||row||^2), so the achieved weight is epsilon/4.
    Exists for every epsilon > 0: linear analog codes have no positive
    minimum codeword weight.
    """
    g = check_complex_matrix(g, "generator")
    epsilon = float(epsilon)
    if not epsilon > 0.0:
        raise ValueError(f"epsilon must be > 0, got {epsilon!r}")
    row_power = np.sum(g.real**2 + g.imag**2, axis=1)
    nonzero = np.flatnonzero(row_power > 0.0)
    if nonzero.size == 0:
        raise RankDeficientError("zero generator matrix has no nonzero row")
    i = int(nonzero[0])
    u = np.zeros(g.shape[0], dtype=np.complex128)
    u[i] = 0.5 * math.sqrt(epsilon / row_power[i])
    v = u @ g.conj()
    weight = float(np.vdot(v, v).real)
    return u, weight


MDS = "MDS"
NOT_MDS = "NotMDS"
SAMPLED_LIKELY_MDS = "SampledLikelyMDS"


class MdsVerdict(NamedTuple):
    """Outcome of an MDS scan.

    verdict: one of MDS / NotMDS / SampledLikelyMDS.
    worst_ratio: smallest (s_min / s_max) seen over the scanned submatrices.
    worst_subset: column subset attaining worst_ratio.
    subsets_checked: how many subsets were scanned.
    """

    verdict: str
    worst_ratio: float
    worst_subset: tuple[int, ...]
    subsets_checked: int


def _subset_ratio(g: np.ndarray, subset) -> float:
    s = linalg.singular_values(g[:, list(subset)])
    if s[-1] == 0.0:
        return 0.0
    return float(s[0] / s[-1])


def is_mds(g, mode="exhaustive", samples=1000, cond_tol=MDS_COND_TOL, seed=0) -> MdsVerdict:
    """Check whether every k received symbols determine the source.

    Equivalent to nonsingularity of every k-row submatrix of G^H, i.e. of
    every k-column submatrix of G; a subset counts as singular when its
    smallest singular value is at most cond_tol times its largest.
    Exhaustive mode scans all C(n, k) subsets (refused above 10^6);
    sampled mode scans ``samples`` seeded random subsets and can only ever
    report SampledLikelyMDS or NotMDS.
    """
    g = check_complex_matrix(g, "generator")
    k, n = g.shape
    if k > n:
        raise ValueError(f"MDS check requires k <= n, got k={k}, n={n}")
    cond_tol = float(cond_tol)
    if not 0.0 <= cond_tol < 1.0:
        raise ValueError(f"cond_tol must be in [0, 1), got {cond_tol!r}")
    if mode == "exhaustive":
        total = math.comb(n, k)
        if total > MDS_EXHAUSTIVE_LIMIT:
            raise ValueError(
                f"exhaustive scan of C({n},{k}) = {total} subsets exceeds "
                f"{MDS_EXHAUSTIVE_LIMIT}; use mode='sampled'"
            )
        subsets = itertools.combinations(range(n), k)
        pass_verdict = MDS
    elif mode == "sampled":
        samples = check_count(samples, "samples")
        rng = np.random.default_rng(check_seed(seed))
        subsets = (
            tuple(int(j) for j in np.sort(rng.choice(n, size=k, replace=False)))
            for _ in range(samples)
        )
        pass_verdict = SAMPLED_LIKELY_MDS
    else:
        raise ValueError(f"mode must be 'exhaustive' or 'sampled', got {mode!r}")

    worst = math.inf
    worst_subset: tuple[int, ...] = ()
    checked = 0
    for subset in subsets:
        checked += 1
        ratio = _subset_ratio(g, subset)
        if ratio < worst:
            worst = ratio
            worst_subset = tuple(subset)
        if ratio <= cond_tol:
            return MdsVerdict(NOT_MDS, ratio, tuple(subset), checked)
    return MdsVerdict(pass_verdict, worst, worst_subset, checked)


@dataclass(frozen=True)
class MetricsReport:
    """Structural summary of one generator matrix."""

    gamma: float
    eigenvalues: tuple[float, ...]
    min_distance_ratio: float
    mdre: bool
    mdre_relative_spread: float
    mds: str
    mds_worst_condition: float
    mse_lower_bound_per_sigma2: float
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        k = len(self.eigenvalues)
        if self.min_distance_ratio != self.eigenvalues[0]:
            raise ValueError("min_distance_ratio must equal the smallest eigenvalue")
        if self.min_distance_ratio > self.gamma + 1e-9:
            raise ValueError(
                f"minimum distance ratio {self.min_distance_ratio!r} exceeds "
                f"power gain {self.gamma!r}"
            )
        if abs(self.mse_lower_bound_per_sigma2 * self.gamma - k) > 1e-9:
            raise ValueError("mse_lower_bound_per_sigma2 * gamma must equal k")

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "eigenvalues": list(self.eigenvalues),
            "min_distance_ratio": self.min_distance_ratio,
            "mdre": self.mdre,
            "mdre_relative_spread": self.mdre_relative_spread,
            "mds": self.mds,
            "mds_worst_condition": self.mds_worst_condition,
            "mse_lower_bound_per_sigma2": self.mse_lower_bound_per_sigma2,
            "tolerances": dict(self.tolerances),
        }


def metrics_report(
    g,
    mdre_rel_tol=MDRE_REL_TOL,
    mds_mode="auto",
    mds_samples=1000,
    mds_cond_tol=MDS_COND_TOL,
    seed=0,
) -> MetricsReport:
    """Compute the full report for one generator.

    mds_mode='auto' scans exhaustively when C(n, k) <= 10^6 and falls back
    to sampling otherwise.
    """
    g = check_complex_matrix(g, "generator")
    k, n = g.shape
    ev = linalg.hermitian_eigenvalues(linalg.gram(g))
    ev = tuple(float(x) for x in ev)
    gamma = float(sum(ev)) / k
    if ev[-1] <= 0.0:
        raise RankDeficientError("zero generator has no defined metrics")
    spread = float((ev[-1] - ev[0]) / ev[-1])
    if mds_mode == "auto":
        mds_mode = "exhaustive" if k <= n and math.comb(n, k) <= MDS_EXHAUSTIVE_LIMIT else "sampled"
    verdict = is_mds(g, mode=mds_mode, samples=mds_samples, cond_tol=mds_cond_tol, seed=seed)
    low = max(ev[0], 0.0)
    return MetricsReport(
        gamma=gamma,
        eigenvalues=(low,) + ev[1:],
        min_distance_ratio=low,
        mdre=spread <= float(mdre_rel_tol),
        mdre_relative_spread=spread,
        mds=verdict.verdict,
        mds_worst_condition=verdict.worst_ratio,
        mse_lower_bound_per_sigma2=k / gamma,
        tolerances={"mdre_rel_tol": float(mdre_rel_tol), "mds_cond_tol": float(mds_cond_tol)},
    )
