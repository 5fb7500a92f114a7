"""Nonparametric comparison statistics for metric runs, plus MCC.

Everything here is two-sided and tie-aware.  The rank-sum test switches to
exact enumeration on small untied inputs and a tie-corrected normal
approximation with continuity correction otherwise; the rank correlation
uses the tie-corrected tau-b form with a normal approximation for its
p-value.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Sequence

from .corpus import AuditError


class DegenerateInputError(AuditError):
    """The statistic is undefined for this input (e.g. an all-tied run)."""


_EXACT_LIMIT = 12  # combined size at or below which the exact rank-sum law is enumerated


def _normal_sf(z: float) -> float:
    """Upper-tail probability of the standard normal."""
    return 0.5 * math.erfc(z / math.sqrt(2.0))


# Rational approximation for the standard normal quantile (Acklam's
# coefficients); absolute error below 1.2e-9 across (0, 1).
_ICDF_A = (
    -3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
    1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00,
)
_ICDF_B = (
    -5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
    6.680131188771972e01, -1.328068155288572e01,
)
_ICDF_C = (
    -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
    -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00,
)
_ICDF_D = (
    7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
    3.754408661907416e00,
)


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF on (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile argument must be in (0, 1), got {p!r}")
    a, b, c, d = _ICDF_A, _ICDF_B, _ICDF_C, _ICDF_D
    p_low = 0.02425
    if p < p_low:
        q = math.sqrt(-2.0 * math.log(p))
        return (
            ((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]
        ) / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
    if p <= 1.0 - p_low:
        q = p - 0.5
        r = q * q
        return (
            (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q
        ) / (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0)
    q = math.sqrt(-2.0 * math.log(1.0 - p))
    return -(
        ((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]
    ) / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)


def _midranks(values: Sequence[float]) -> list[float]:
    """Ranks 1..n with tied values sharing the average of their positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j + 2) / 2.0  # positions are 1-based
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def _exact_mwu_p(u_min: float, n1: int, n2: int) -> float:
    """Two-sided exact p for untied samples: 2 * P(U <= u_min), capped at 1.

    Enumerates the rank-sum distribution over all C(n1+n2, n1) equally
    likely rank assignments by dynamic programming.
    """
    total = n1 + n2
    max_u = n1 * n2
    # ways[k][u]: subsets of size k among ranks seen so far with U value u
    ways = [[0] * (max_u + 1) for _ in range(n1 + 1)]
    ways[0][0] = 1
    for rank_index in range(1, total + 1):
        for k in range(min(rank_index, n1), 0, -1):
            row = ways[k]
            prev = ways[k - 1]
            # picking this rank adds (rank_index - k) to U once the k-th
            # smallest pick; iterate downward so each rank is used once
            shift = rank_index - k
            for u in range(max_u - shift, -1, -1):
                if prev[u]:
                    row[u + shift] += prev[u]
    counts = ways[n1]
    total_ways = math.comb(total, n1)
    threshold = int(math.floor(u_min + 1e-9))
    below = sum(counts[: threshold + 1])
    p = 2.0 * below / total_ways
    return min(p, 1.0)


def mann_whitney_u(a: Sequence[float], b: Sequence[float]) -> tuple[float, float]:
    """Rank-sum test; returns (U for the first sample, two-sided p).

    Exact enumeration when the combined size is at most 12 and no value is
    tied; otherwise a normal approximation with midranks, tie-corrected
    variance and a 0.5 continuity correction.  Identical samples give
    U = n1*n2/2 and p = 1.
    """
    n1, n2 = len(a), len(b)
    if n1 == 0 or n2 == 0:
        raise DegenerateInputError("both samples must be non-empty")
    combined = list(a) + list(b)
    ranks = _midranks(combined)
    r1 = sum(ranks[:n1])
    u1 = r1 - n1 * (n1 + 1) / 2.0
    u2 = n1 * n2 - u1

    n = n1 + n2
    tie_sizes = [c for c in Counter(combined).values() if c > 1]
    if n <= _EXACT_LIMIT and not tie_sizes:
        return u1, _exact_mwu_p(min(u1, u2), n1, n2)

    mean = n1 * n2 / 2.0
    tie_term = sum(t**3 - t for t in tie_sizes)
    variance = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if variance <= 0.0:
        return u1, 1.0  # every value identical
    z = (abs(u1 - mean) - 0.5) / math.sqrt(variance)
    if z < 0.0:
        z = 0.0
    return u1, min(2.0 * _normal_sf(z), 1.0)


def kendall_tau(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Tie-corrected rank correlation (tau-b) and a two-sided p-value.

    The p-value uses the normal approximation on the concordance statistic
    with the usual tie-corrected variance.  Either sequence being entirely
    tied leaves tau undefined and raises DegenerateInputError.
    """
    if len(x) != len(y):
        raise ValueError("sequences must have equal length")
    n = len(x)
    if n < 2:
        raise DegenerateInputError("need at least two observations")

    concordant = discordant = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = (x[j] > x[i]) - (x[j] < x[i])
            dy = (y[j] > y[i]) - (y[j] < y[i])
            prod = dx * dy
            if prod > 0:
                concordant += 1
            elif prod < 0:
                discordant += 1

    n0 = n * (n - 1) // 2
    x_ties = [c for c in Counter(x).values() if c > 1]
    y_ties = [c for c in Counter(y).values() if c > 1]
    nx = sum(t * (t - 1) // 2 for t in x_ties)
    ny = sum(t * (t - 1) // 2 for t in y_ties)
    if n0 == nx or n0 == ny:
        raise DegenerateInputError("an all-tied sequence leaves tau undefined")

    s = concordant - discordant
    tau = s / math.sqrt((n0 - nx) * (n0 - ny))

    vt0 = n * (n - 1) * (2 * n + 5)
    vtx = sum(t * (t - 1) * (2 * t + 5) for t in x_ties)
    vty = sum(t * (t - 1) * (2 * t + 5) for t in y_ties)
    variance = (vt0 - vtx - vty) / 18.0
    sum_tx = sum(t * (t - 1) for t in x_ties)
    sum_ty = sum(t * (t - 1) for t in y_ties)
    variance += sum_tx * sum_ty / (2.0 * n * (n - 1))
    if n > 2:
        sum_tx2 = sum(t * (t - 1) * (t - 2) for t in x_ties)
        sum_ty2 = sum(t * (t - 1) * (t - 2) for t in y_ties)
        variance += sum_tx2 * sum_ty2 / (9.0 * n * (n - 1) * (n - 2))
    if variance <= 0.0:
        return tau, 1.0
    z = s / math.sqrt(variance)
    return tau, min(2.0 * _normal_sf(abs(z)), 1.0)


def mcc(tp: int, fp: int, tn: int, fn: int) -> float:
    """Matthews correlation from confusion counts; 0 when any margin is empty."""
    for name, v in (("tp", tp), ("fp", fp), ("tn", tn), ("fn", fn)):
        if not isinstance(v, int) or v < 0:
            raise ValueError(f"{name} must be a non-negative integer")
    if tp + fp + tn + fn == 0:
        raise DegenerateInputError("empty confusion table")
    denom_sq = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    if denom_sq == 0:
        return 0.0
    return (tp * tn - fp * fn) / math.sqrt(denom_sq)
