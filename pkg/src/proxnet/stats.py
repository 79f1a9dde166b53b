"""Correlation and analysis-of-variance with native p-values.

p-values route through a regularized incomplete beta evaluated by modified
Lentz continued fraction (tolerance 1e-12, at most 500 iterations); a power
series evaluation of the same function is kept alongside as a cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_TOL = 1e-12
_MAX_ITER = 500


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta, modified Lentz scheme."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _TOL:
            return h
    raise ArithmeticError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and 0 <= x <= 1."""
    if a <= 0 or b <= 0:
        raise ValueError("shape parameters must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def _betainc_series(a: float, b: float, x: float) -> float:
    """Power-series evaluation of I_x(a, b), used to cross-check the
    continued fraction. Same symmetry split, looser iteration cap."""
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    if x >= (a + 1.0) / (a + b + 2.0):
        return 1.0 - _betainc_series(b, a, 1.0 - x)
    ln_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(ln_front) / a
    term = 1.0
    total = 1.0
    for n in range(100000):
        term *= (a + b + n) * x / (a + 1.0 + n)
        total += term
        if abs(term) < abs(total) * 1e-16:
            return front * total
    raise ArithmeticError("series did not converge")


@dataclass(frozen=True)
class PearsonResult:
    r: float
    p: float
    n: int


def pearson(x, y) -> PearsonResult:
    """Pearson correlation with a two-sided p-value from the t transform
    t = r sqrt((n-2)/(1-r^2)) on n-2 degrees of freedom."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be equal-length 1-d sequences")
    n = len(x)
    if n < 3:
        raise ValueError("pearson needs at least 3 observations")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise ValueError("inputs must be finite")
    sx = x - x.mean()
    sy = y - y.mean()
    vx = float((sx * sx).sum())
    vy = float((sy * sy).sum())
    if vx == 0.0 or vy == 0.0:
        raise ValueError("zero-variance input")
    r = float((sx * sy).sum() / math.sqrt(vx * vy))
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        return PearsonResult(r=r, p=0.0, n=n)
    df = n - 2
    t2 = r * r * df / (1.0 - r * r)
    p = regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t2))
    return PearsonResult(r=r, p=p, n=n)


@dataclass(frozen=True)
class AnovaResult:
    f_stat: float
    p: float
    eta_squared: float
    degenerate: bool = False


def anova_oneway(groups) -> AnovaResult:
    """One-way fixed-effects analysis of variance over k groups.

    Returns F, its upper-tail p on (k-1, N-k) degrees of freedom, and the
    effect size eta^2 = SSB/SST. Zero within-group variance yields an
    infinite F flagged degenerate.
    """
    arrs = [np.asarray(grp, dtype=np.float64) for grp in groups]
    if len(arrs) < 2:
        raise ValueError("anova needs at least 2 groups")
    if any(len(a) < 2 for a in arrs):
        raise ValueError("every group needs at least 2 observations")
    if any(not np.isfinite(a).all() for a in arrs):
        raise ValueError("inputs must be finite")
    k = len(arrs)
    total = np.concatenate(arrs)
    n = len(total)
    gm = total.mean()
    ssb = float(sum(len(a) * (a.mean() - gm) ** 2 for a in arrs))
    ssw = float(sum(((a - a.mean()) ** 2).sum() for a in arrs))
    sst = ssb + ssw
    if sst == 0.0:
        raise ValueError("zero total variance")
    eta = ssb / sst
    if ssw == 0.0:
        return AnovaResult(f_stat=math.inf, p=0.0, eta_squared=eta, degenerate=True)
    d1 = k - 1
    d2 = n - k
    f = (ssb / d1) / (ssw / d2)
    p = regularized_incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f))
    return AnovaResult(f_stat=f, p=p, eta_squared=eta, degenerate=False)
