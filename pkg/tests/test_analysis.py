import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fitclams.analysis import (
    AnalysisError,
    RegressionRow,
    build_rows,
    correlate_r2_accuracy,
    fit_ols,
    zscore,
)
from fitclams.benchgen import MinimalPair
from fitclams.scoring import PairResult


# -- zscore ------------------------------------------------------------------

def test_zscore_two_points():
    assert list(zscore([1.0, 3.0])) == [-1.0, 1.0]


def test_zscore_hand_column():
    z = zscore([2.0, 4.0, 6.0, 8.0])
    assert abs(z.mean()) < 1e-12
    assert abs(z.std() - 1.0) < 1e-12


def test_zscore_rejects_constant():
    with pytest.raises(AnalysisError, match="variance"):
        zscore([5.0, 5.0, 5.0])


def test_zscore_rejects_short():
    with pytest.raises(AnalysisError):
        zscore([1.0])


@given(st.lists(st.floats(min_value=-1e6, max_value=1e6), min_size=3,
                max_size=60))
@settings(max_examples=150, deadline=None)
def test_zscore_moments_property(column):
    arr = np.asarray(column)
    if float(arr.std()) < 1e-9 * (1.0 + float(np.abs(arr).max())):
        return  # effectively constant; rejected by the variance guard
    z = zscore(column)
    assert abs(float(z.mean())) < 1e-9
    assert abs(float(z.std()) - 1.0) < 1e-9


# -- OLS ---------------------------------------------------------------------

def planted_rows(n=64, noise=0.0, seed=5):
    """Rows whose delta_p is an exact affine function of the standardized
    predictors; the independent construction the fit must recover."""
    rng = np.random.default_rng(seed)
    cols = [rng.uniform(0.5, 8.0, n) for _ in range(3)]

    def standardize(x):
        return (x - x.mean()) / x.std()

    z = [standardize(c) for c in cols]
    y = 2.0 + 0.5 * z[0] - 1.0 * z[1] + 0.0 * z[2]
    if noise:
        y = y + rng.normal(0.0, noise, n)
    return [
        RegressionRow(pair_id=str(i), delta_p=float(y[i]),
                      logf_verb=float(cols[0][i]),
                      logf_subj_gram=float(cols[1][i]),
                      logf_subj_ungram=float(cols[2][i]))
        for i in range(n)
    ]


def test_ols_recovers_planted_coefficients():
    fit = fit_ols(planted_rows())
    assert fit.intercept == pytest.approx(2.0, abs=1e-6)
    assert fit.slopes[0] == pytest.approx(0.5, abs=1e-6)
    assert fit.slopes[1] == pytest.approx(-1.0, abs=1e-6)
    assert fit.slopes[2] == pytest.approx(0.0, abs=1e-6)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-9)
    assert fit.n == 64


def test_ols_residual_orthogonality():
    rows = planted_rows(noise=0.3, seed=11)
    fit = fit_ols(rows)
    y = np.array([r.delta_p for r in rows])
    X = np.column_stack([
        np.ones(len(rows)),
        zscore([r.logf_verb for r in rows]),
        zscore([r.logf_subj_gram for r in rows]),
        zscore([r.logf_subj_ungram for r in rows]),
    ])
    beta = np.array([fit.intercept, *fit.slopes])
    resid = y - X @ beta
    normal_resid = np.linalg.norm(X.T @ resid) / np.linalg.norm(X.T @ y)
    assert normal_resid < 1e-8
    for j in range(X.shape[1]):
        denom = np.linalg.norm(X[:, j]) * np.linalg.norm(resid)
        if denom > 0:
            assert abs(X[:, j] @ resid) / denom < 1e-8


def test_ols_permutation_null():
    rng = random.Random(17)
    rows = planted_rows(n=200, seed=23)
    ys = [r.delta_p for r in rows]
    rng.shuffle(ys)
    shuffled = [
        RegressionRow(pair_id=r.pair_id, delta_p=y, logf_verb=r.logf_verb,
                      logf_subj_gram=r.logf_subj_gram,
                      logf_subj_ungram=r.logf_subj_ungram)
        for r, y in zip(rows, ys)
    ]
    assert fit_ols(shuffled).r_squared < 0.1


def test_ols_constant_target_errors():
    rows = planted_rows(n=16)
    flat = [RegressionRow(r.pair_id, 1.5, r.logf_verb, r.logf_subj_gram,
                          r.logf_subj_ungram) for r in rows]
    with pytest.raises(AnalysisError, match="constant"):
        fit_ols(flat)


def test_ols_rank_deficiency_errors():
    rng = np.random.default_rng(3)
    col = rng.uniform(1.0, 5.0, 32)
    rows = [
        RegressionRow(str(i), float(rng.normal()), float(col[i]),
                      float(col[i]), float(rng.uniform(1, 5)))
        for i in range(32)
    ]
    with pytest.raises(AnalysisError, match="rank"):
        fit_ols(rows)


def test_ols_needs_enough_rows():
    with pytest.raises(AnalysisError):
        fit_ols(planted_rows(n=4))


def test_noise_predictor_never_hurts_r2():
    """Dropping a predictor cannot raise R^2: compare the 3-predictor fit
    against a reduced 1-predictor fit computed independently."""
    rows = planted_rows(n=80, noise=0.5, seed=29)
    full = fit_ols(rows)
    y = np.array([r.delta_p for r in rows])
    X1 = np.column_stack([np.ones(len(rows)),
                          zscore([r.logf_verb for r in rows])])
    beta, *_ = np.linalg.lstsq(X1, y, rcond=None)
    resid = y - X1 @ beta
    r2_reduced = 1.0 - float(resid @ resid) / float(((y - y.mean()) ** 2).sum())
    assert full.r_squared >= r2_reduced - 1e-12


def test_r2_invariant_under_affine_predictor_rescaling():
    rows = planted_rows(n=60, noise=0.4, seed=41)
    base = fit_ols(rows)
    rescaled = [
        RegressionRow(r.pair_id, r.delta_p, 3.5 * r.logf_verb - 11.0,
                      r.logf_subj_gram, r.logf_subj_ungram)
        for r in rows
    ]
    other = fit_ols(rescaled)
    assert other.r_squared == pytest.approx(base.r_squared, abs=1e-12)
    # positive rescaling keeps slope signs; z-scoring absorbs the scale
    for a, b in zip(base.slopes, other.slopes):
        assert a == pytest.approx(b, abs=1e-9)
    flipped = [
        RegressionRow(r.pair_id, r.delta_p, -r.logf_verb, r.logf_subj_gram,
                      r.logf_subj_ungram)
        for r in rows
    ]
    neg = fit_ols(flipped)
    assert neg.slopes[0] == pytest.approx(-base.slopes[0], abs=1e-9)
    assert neg.r_squared == pytest.approx(base.r_squared, abs=1e-12)


def test_minimal_sample_orthogonality():
    # n = p + 2 well-conditioned rows still satisfy the normal equations
    rows = planted_rows(n=5, noise=0.2, seed=53)
    fit = fit_ols(rows)
    y = np.array([r.delta_p for r in rows])
    X = np.column_stack([
        np.ones(5),
        zscore([r.logf_verb for r in rows]),
        zscore([r.logf_subj_gram for r in rows]),
        zscore([r.logf_subj_ungram for r in rows]),
    ])
    resid = y - X @ np.array([fit.intercept, *fit.slopes])
    assert np.linalg.norm(X.T @ resid) / np.linalg.norm(X.T @ y) < 1e-8


def test_fit_serialization_shape():
    payload = fit_ols(planted_rows()).to_json_dict()
    assert set(payload["coef"]) == {"intercept", "verb", "subj_gram",
                                    "subj_ungram"}
    assert set(payload["standardization"]) == {"verb", "subj_gram",
                                               "subj_ungram"}


# -- row building ------------------------------------------------------------

def pair_with_meta(pair_id="p1"):
    return MinimalPair(
        pair_id=pair_id, paradigm="simple_agreement", lexicon_source="c",
        grammatical=("the", "resident", "awaits"),
        ungrammatical=("the", "residents", "awaits"),
        critical_start=2, critical_end=3,
        metadata={"verb_form": "awaits", "subject_gram_form": "resident",
                  "subject_ungram_form": "residents"},
    )


def result_for(pair_id="p1", paradigm="simple_agreement", region="critical"):
    return PairResult(pair_id=pair_id, delta_p=0.4, correct=True,
                      mode="causal", region=region, paradigm=paradigm)


def test_build_rows_reads_frequencies():
    freqs = {"awaits": 2, "resident": 6, "residents": 3}
    (row,) = build_rows([result_for()], [pair_with_meta()], freqs)
    assert row.logf_verb == pytest.approx(math.log(2))
    assert row.logf_subj_gram == pytest.approx(math.log(6))
    assert row.logf_subj_ungram == pytest.approx(math.log(3))


def test_build_rows_rejects_missing_frequency():
    with pytest.raises(AnalysisError, match="frequency"):
        build_rows([result_for()], [pair_with_meta()], {"awaits": 2})


def test_build_rows_filters_paradigm():
    rows = build_rows([result_for(paradigm="agreement_vp_coord")],
                      [pair_with_meta()], {})
    assert rows == []


def test_build_rows_requires_critical_region():
    freqs = {"awaits": 2, "resident": 6, "residents": 3}
    with pytest.raises(AnalysisError, match="critical"):
        build_rows([result_for(region="sequence")], [pair_with_meta()], freqs)


# -- correlation -------------------------------------------------------------

def test_perfect_anticorrelation():
    points = [(0.1, 0.9), (0.2, 0.8), (0.3, 0.7), (0.4, 0.6)]
    corr = correlate_r2_accuracy(points)
    assert corr.r == pytest.approx(-1.0)
    assert corr.p_value == pytest.approx(0.0)


def test_pearson_matches_direct_formula():
    points = [(0.12, 0.81), (0.35, 0.64), (0.50, 0.77), (0.22, 0.90),
              (0.41, 0.58)]
    corr = correlate_r2_accuracy(points)
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = math.sqrt(sum((x - mx) ** 2 for x in xs)
                    * sum((y - my) ** 2 for y in ys))
    assert corr.r == pytest.approx(num / den, abs=1e-12)


def test_pvalue_against_scipy_pearsonr():
    from scipy import stats

    points = [(0.1, 0.5), (0.2, 0.8), (0.3, 0.6), (0.4, 0.9), (0.5, 0.7),
              (0.6, 0.95)]
    corr = correlate_r2_accuracy(points)
    ref_r, ref_p = stats.pearsonr([p[0] for p in points],
                                  [p[1] for p in points])
    assert corr.r == pytest.approx(float(ref_r), abs=1e-12)
    assert corr.p_value == pytest.approx(float(ref_p), abs=1e-10)


def test_correlation_input_validation():
    with pytest.raises(AnalysisError):
        correlate_r2_accuracy([(0.1, 0.5), (0.2, 0.6)])
    with pytest.raises(AnalysisError, match="variance"):
        correlate_r2_accuracy([(0.1, 0.5), (0.1, 0.6), (0.1, 0.7)])
