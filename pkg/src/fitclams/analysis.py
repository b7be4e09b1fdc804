"""Frequency regression: probability differences against standardized
log-frequencies of the critical verb and both subject forms.

The dependent variable is each simple-agreement pair's score difference
on the critical region; predictors are the natural-log counts, in the
scored model's training corpus, of the verb form, the grammatical
subject form, and the ungrammatical subject form, z-scored before the
fit. R-squared then measures how much of the model's preference is
explained by lexical frequency alone, and its correlation with accuracy
is tested across model configurations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as _sstats

from .benchgen import MinimalPair
from .scoring import PairResult

__all__ = [
    "RegressionRow",
    "RegressionFit",
    "CorrelationResult",
    "AnalysisError",
    "build_rows",
    "zscore",
    "fit_ols",
    "correlate_r2_accuracy",
]

PREDICTORS = ("verb", "subj_gram", "subj_ungram")


class AnalysisError(ValueError):
    pass


@dataclass(frozen=True)
class RegressionRow:
    pair_id: str
    delta_p: float
    logf_verb: float
    logf_subj_gram: float
    logf_subj_ungram: float


@dataclass(frozen=True)
class RegressionFit:
    intercept: float
    slopes: tuple[float, ...]          # aligned with PREDICTORS
    r_squared: float
    n: int
    standardization: dict[str, tuple[float, float]]  # predictor -> (mean, std)

    def to_json_dict(self) -> dict:
        coef = {"intercept": self.intercept}
        coef.update({name: s for name, s in zip(PREDICTORS, self.slopes)})
        return {
            "coef": coef,
            "r2": self.r_squared,
            "n": self.n,
            "standardization": {
                name: {"mean": m, "std": s}
                for name, (m, s) in self.standardization.items()
            },
        }


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    p_value: float
    points: tuple[tuple[float, float], ...]

    def to_json_dict(self) -> dict:
        return {
            "r": self.r,
            "p_value": self.p_value,
            "points": [{"r2": a, "accuracy": b} for a, b in self.points],
        }


def build_rows(results: list[PairResult], pairs: list[MinimalPair],
               freqs: dict[str, int],
               paradigm: str = "simple_agreement") -> list[RegressionRow]:
    """One row per scored pair of the given paradigm. Frequencies are
    surface-form counts in the corpus the scored model was trained on;
    a missing or zero count is an error since the benchmark guarantees
    attestation."""
    by_id = {p.pair_id: p for p in pairs}

    def logf(form: str, pair_id: str) -> float:
        count = freqs.get(form, 0)
        if count < 1:
            raise AnalysisError(
                f"pair {pair_id}: form {form!r} has no frequency in the "
                f"training corpus")
        return math.log(count)

    rows = []
    for r in results:
        if r.paradigm != paradigm:
            continue
        if r.region != "critical":
            raise AnalysisError(
                f"pair {r.pair_id}: regression rows need critical-region "
                f"scores, got {r.region!r}")
        pair = by_id.get(r.pair_id)
        if pair is None:
            raise AnalysisError(f"pair {r.pair_id} not in the benchmark")
        meta = pair.metadata
        rows.append(RegressionRow(
            pair_id=r.pair_id,
            delta_p=r.delta_p,
            logf_verb=logf(meta["verb_form"], r.pair_id),
            logf_subj_gram=logf(meta["subject_gram_form"], r.pair_id),
            logf_subj_ungram=logf(meta["subject_ungram_form"], r.pair_id),
        ))
    return rows


def zscore(column) -> np.ndarray:
    """Standardize with the population (n-denominator) deviation."""
    x = np.asarray(column, dtype=float)
    if x.size < 2:
        raise AnalysisError("zscore needs at least two values")
    std = float(x.std())
    if std == 0.0:
        raise AnalysisError("zero variance column; the lexicon is degenerate")
    return (x - x.mean()) / std


def fit_ols(rows: list[RegressionRow]) -> RegressionFit:
    """Least squares of delta_p on the three standardized log-frequency
    predictors, solved by numpy's SVD-backed lstsq."""
    n = len(rows)
    if n < len(PREDICTORS) + 2:
        raise AnalysisError(
            f"need more than {len(PREDICTORS) + 1} rows, got {n}")
    y = np.array([r.delta_p for r in rows], dtype=float)
    if np.all(y == y[0]):
        raise AnalysisError(
            "constant dependent variable; R-squared is undefined")
    raw = {
        "verb": np.array([r.logf_verb for r in rows], dtype=float),
        "subj_gram": np.array([r.logf_subj_gram for r in rows], dtype=float),
        "subj_ungram": np.array([r.logf_subj_ungram for r in rows], dtype=float),
    }
    standardization = {
        name: (float(col.mean()), float(col.std()))
        for name, col in raw.items()
    }
    X = np.column_stack([np.ones(n)] + [zscore(raw[name]) for name in PREDICTORS])
    if np.linalg.matrix_rank(X) < X.shape[1]:
        raise AnalysisError("design matrix is rank deficient")

    beta, _, _, _ = np.linalg.lstsq(X, y, rcond=None)
    residuals = y - X @ beta
    ss_res = float(residuals @ residuals)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    if ss_tot == 0.0:
        raise AnalysisError(
            "constant dependent variable; R-squared is undefined")
    return RegressionFit(
        intercept=float(beta[0]),
        slopes=tuple(float(b) for b in beta[1:]),
        r_squared=1.0 - ss_res / ss_tot,
        n=n,
        standardization=standardization,
    )


def correlate_r2_accuracy(points) -> CorrelationResult:
    """Pearson correlation between regression fit and benchmark accuracy
    across model configurations; two-sided p from the t distribution with
    n-2 degrees of freedom."""
    pts = tuple((float(a), float(b)) for a, b in points)
    if len(pts) < 3:
        raise AnalysisError("need at least three (r2, accuracy) points")
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise AnalysisError("zero variance in r2 or accuracy values")
    dx = x - x.mean()
    dy = y - y.mean()
    denom = math.sqrt(float(dx @ dx) * float(dy @ dy))
    if denom == 0.0:
        raise AnalysisError("zero variance in r2 or accuracy values")
    r = float(dx @ dy) / denom
    r = max(-1.0, min(1.0, r))
    n = len(pts)
    if abs(r) == 1.0:
        p_value = 0.0
    else:
        t = r * math.sqrt((n - 2) / (1.0 - r * r))
        p_value = float(2.0 * _sstats.t.sf(abs(t), df=n - 2))
    return CorrelationResult(r=r, p_value=p_value, points=pts)
