"""Temporal style drift: per-year metric series, moving-average smoothing and
a year-split significance scan.

The significance of each candidate split year is measured with Welch's
two-sample t-test (t CDF via the regularized incomplete beta function,
continued-fraction evaluation) and cross-checked by a seeded permutation test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import Corpus
from .errors import InsufficientDataError
from .features import stylistic_metrics

METRICS = ("ari", "lexical_richness", "avg_word_length", "avg_sentence_length")

_BETACF_TOL = 1e-12
_BETACF_MAX_ITER = 500


@dataclass(frozen=True)
class YearSeries:
    metric: str
    years: tuple[int, ...]
    means: tuple[float, ...]
    counts: tuple[int, ...]


@dataclass(frozen=True)
class DriftReport:
    metric: str
    raw: YearSeries
    smoothed: YearSeries
    split_years: tuple[int, ...]
    p_values: tuple[float, ...]  # Welch t-test, aligned with split_years
    p_values_perm: tuple[float, ...]
    best_split: int


# ---------------------------------------------------------------------------
# numerics: regularized incomplete beta and the Welch t-test


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (Lentz's method)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, _BETACF_MAX_ITER + 1):
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
        if abs(delta - 1.0) < _BETACF_TOL:
            break
    return h


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b), evaluated by continued fraction to 1e-12."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must be in [0, 1]")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    # use the symmetry that keeps the continued fraction convergent
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_sf_two_sided(t: float, df: float) -> float:
    """P(|T| >= t) for T ~ Student-t with df degrees of freedom."""
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    if math.isinf(t):
        return 0.0
    x = df / (df + t * t)
    return regularized_incomplete_beta(df / 2.0, 0.5, x)


def welch_t_test(a, b) -> tuple[float, float, float]:
    """Welch's two-sample t-test.

    Returns (t, df, two-sided p).  Two zero-variance groups with equal means
    give t=0, p=1; with distinct means, p=0.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if len(a) < 2 or len(b) < 2:
        raise InsufficientDataError("each group needs at least 2 values")
    ma, mb = a.mean(), b.mean()
    va, vb = a.var(ddof=1), b.var(ddof=1)
    na, nb = len(a), len(b)
    se2 = va / na + vb / nb
    if se2 == 0.0:
        if ma == mb:
            return 0.0, float(na + nb - 2), 1.0
        return math.inf, float(na + nb - 2), 0.0
    t = (ma - mb) / math.sqrt(se2)
    df = se2 * se2 / (
        (va / na) ** 2 / (na - 1) + (vb / nb) ** 2 / (nb - 1)
    )
    return float(t), float(df), student_t_sf_two_sided(abs(t), df)


def permutation_test(
    a, b, n_permutations: int = 10_000, seed: int = 0
) -> float:
    """Two-sided permutation p-value for the difference of group means.

    p = (1 + #{perm with |diff| >= |observed|}) / (n_permutations + 1), so the
    identity labeling is always counted.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    pooled = np.concatenate([a, b])
    na = len(a)
    observed = abs(a.mean() - b.mean())
    rng = np.random.default_rng(seed)
    hits = 0
    # vectorized: one permuted matrix, group means via slicing
    perms = np.argsort(rng.random((n_permutations, len(pooled))), axis=1)
    shuffled = pooled[perms]
    diffs = np.abs(
        shuffled[:, :na].mean(axis=1) - shuffled[:, na:].mean(axis=1)
    )
    hits = int((diffs >= observed - 1e-15).sum())
    return (1 + hits) / (n_permutations + 1)


# ---------------------------------------------------------------------------
# series and the split scan


def yearly_series(
    corpus: Corpus, metric: str, lemmatizer: dict[str, str] | None = None
) -> YearSeries:
    """Per-year arithmetic mean of a stylistic metric over documents."""
    _check_metric(metric)
    by_year: dict[int, list[float]] = {}
    for doc in corpus:
        value = getattr(stylistic_metrics(doc, lemmatizer), metric)
        by_year.setdefault(doc.year, []).append(value)
    years = tuple(sorted(by_year))
    return YearSeries(
        metric=metric,
        years=years,
        means=tuple(sum(by_year[y]) / len(by_year[y]) for y in years),
        counts=tuple(len(by_year[y]) for y in years),
    )


def moving_average(series: YearSeries, window: int) -> YearSeries:
    """Centered moving average over calendar years present in the series.

    Each present year is weighted equally; the window truncates at the series
    boundaries.  For even windows the extra year falls on the earlier side.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    before, after = window // 2, (window - 1) // 2
    means = []
    for y in series.years:
        vals = [
            m
            for yy, m in zip(series.years, series.means)
            if y - before <= yy <= y + after
        ]
        means.append(sum(vals) / len(vals))
    return YearSeries(
        metric=series.metric,
        years=series.years,
        means=tuple(means),
        counts=series.counts,
    )


def split_scan(
    corpus: Corpus,
    metric: str,
    min_side: int = 5,
    window: int = 10,
    n_permutations: int = 10_000,
    seed: int = 0,
    lemmatizer: dict[str, str] | None = None,
) -> DriftReport:
    """Scan every candidate split year, testing {year < y} vs {year >= y}.

    p-values come from Welch's t-test on per-document metric values, with a
    permutation test as a distribution-free cross-check.  best_split is the
    year with minimal t-test p (ties to the earliest year).
    """
    _check_metric(metric)
    values = []
    years = []
    for doc in corpus:
        values.append(getattr(stylistic_metrics(doc, lemmatizer), metric))
        years.append(doc.year)
    if len(values) < 2 * min_side:
        raise InsufficientDataError(
            f"need at least {2 * min_side} documents, got {len(values)}"
        )
    values = np.asarray(values)
    years_arr = np.asarray(years)

    split_years: list[int] = []
    p_t: list[float] = []
    p_perm: list[float] = []
    for y in range(min(years) + 1, max(years) + 1):
        before = values[years_arr < y]
        after = values[years_arr >= y]
        if len(before) < min_side or len(after) < min_side:
            continue
        _, _, p = welch_t_test(before, after)
        split_years.append(y)
        p_t.append(p)
        # per-split derived seed keeps results independent of scan order
        p_perm.append(
            permutation_test(before, after, n_permutations, seed=seed * 100_003 + y)
        )
    if not split_years:
        raise InsufficientDataError("no split year satisfies the min_side constraint")
    best = min(zip(p_t, split_years))[1]
    raw = yearly_series(corpus, metric, lemmatizer)
    return DriftReport(
        metric=metric,
        raw=raw,
        smoothed=moving_average(raw, window),
        split_years=tuple(split_years),
        p_values=tuple(p_t),
        p_values_perm=tuple(p_perm),
        best_split=best,
    )


def _check_metric(metric: str) -> None:
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")


def write_drift_csv(path: str | Path, report: DriftReport) -> None:
    """CSV: year,raw_mean,smoothed_mean,doc_count,p_value_t,p_value_perm.

    Years without an eligible split get empty p-value fields."""
    p_by_year = dict(zip(report.split_years, report.p_values))
    pp_by_year = dict(zip(report.split_years, report.p_values_perm))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("year,raw_mean,smoothed_mean,doc_count,p_value_t,p_value_perm\n")
        for y, raw, smooth, count in zip(
            report.raw.years, report.raw.means, report.smoothed.means, report.raw.counts
        ):
            pt = repr(p_by_year[y]) if y in p_by_year else ""
            pp = repr(pp_by_year[y]) if y in pp_by_year else ""
            fh.write(f"{y},{raw!r},{smooth!r},{count},{pt},{pp}\n")


def drift_svg(report: DriftReport, reference_year: int = 1990) -> str:
    """Static SVG line plot of raw and smoothed series with a vertical marker
    at the reference year."""
    width, height, pad = 640, 360, 50
    years = report.raw.years
    y0, y1 = years[0], years[-1]
    lo = min(min(report.raw.means), min(report.smoothed.means))
    hi = max(max(report.raw.means), max(report.smoothed.means))
    span = (hi - lo) or 1.0
    xr = (y1 - y0) or 1

    def px(year: float) -> float:
        return pad + (year - y0) / xr * (width - 2 * pad)

    def py(v: float) -> float:
        return height - pad - (v - lo) / span * (height - 2 * pad)

    def polyline(means, color: str) -> str:
        pts = " ".join(f"{px(y):.2f},{py(m):.2f}" for y, m in zip(years, means))
        return (
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            'stroke-width="1.5"/>'
        )

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{pad}" y="20" font-size="13" font-family="sans-serif">'
        f"{report.metric} over time</text>",
        polyline(report.raw.means, "#bbbbbb"),
        polyline(report.smoothed.means, "#1f77b4"),
    ]
    if y0 <= reference_year <= y1:
        x = px(reference_year)
        parts.append(
            f'<line x1="{x:.2f}" y1="{pad}" x2="{x:.2f}" y2="{height - pad}" '
            'stroke="#d62728" stroke-dasharray="4 3"/>'
        )
        parts.append(
            f'<text x="{x + 4:.2f}" y="{pad + 12}" font-size="11" '
            f'font-family="sans-serif" fill="#d62728">{reference_year}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)
