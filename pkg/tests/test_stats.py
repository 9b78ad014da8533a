"""Estimator conventions: complex mean, pseudo-variance, the tagged summary
table, histograms and Gaussian fits.

Frozen oracle values used below (dt = 0.001, mu0 = 1/2, beta = 0):

* pure coin-toss stream: exact two-point computation gives mean (1+i)/2 and
  pseudo-variance 0 - ((1+i)/2)^2 = -i/2.
* pooled increment mean / mu0 -> b*(1+i)/(2 mu0) with bracket mean
  b = 1/2 + sqrt(2 dt/pi) - dt = 0.5242313...; a 200k-path brute-force run
  gave 0.52433 + 0.52414i.
* pooled pseudo-variance / mu0^2 -> -i b^2/(2 mu0^2) = -0.5496370i
  (the dt -> 0 limit is the structural -i/2); the same oracle run gave
  -0.5496380i.  Halving gives the reported-convention -0.2748i.
* Brownian temporal variance -> 1/2 - 1/3 = 1/6, confirmed by a 100k-path
  brute-force run (0.166892 +- 0.000473).
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sqrtwiener import (
    ComplexStat,
    FitError,
    SeedSpec,
    SqrtParams,
    SummaryStats,
    TimeGrid,
    build_histogram,
    complex_mean,
    complex_pseudo_variance,
    fit_gaussian_curve,
    gaussian_fit,
    integrate_sqrt,
    make_rng,
    phi_half,
    pooled_complex_mean,
    pooled_pseudo_variance,
    sample_wiener,
    sturges_bins,
    table1_statistics,
    wiener_ensemble,
)
from sqrtwiener.stats import TAG_INCREMENT_NORMALIZED, TAG_PAPER_REPORTED, TAG_PATH_TEMPORAL

DT = 0.001
BRACKET_MEAN = 0.5 + np.sqrt(2 * DT / np.pi) - DT  # E[1/2 + |dw| - dt]


@pytest.fixture(scope="module")
def protocol_ensembles():
    grid = TimeGrid(DT, 1000)
    wiener = wiener_ensemble(grid, 20000, master_seed=1)
    sqrt_ens = integrate_sqrt(grid, 20000, SqrtParams(), master_seed=1)
    return wiener, sqrt_ens


def test_complex_mean_basic():
    s = complex_mean([1.0, 1j])
    assert s.value == (0.5 + 0.5j)
    assert s.n == 2


def test_complex_mean_single_sample():
    s = complex_mean([2.0 - 1j])
    assert s.value == 2.0 - 1j
    assert s.stderr == 0j  # undefined for n = 1, reported as 0
    assert s.n == 1


def test_complex_mean_empty_rejected():
    with pytest.raises(ValueError):
        complex_mean([])


def test_phi_stream_mean_two_point_oracle():
    grid = TimeGrid(DT, 1000)
    rng = make_rng(SeedSpec(31, 0))
    phis = np.concatenate(
        [phi_half(sample_wiener(grid, rng)) for _ in range(1000)]
    )
    s = complex_mean(phis)
    assert abs(s.value.real - 0.5) < 3 * s.stderr.real
    assert abs(s.value.imag - 0.5) < 3 * s.stderr.imag
    # exact per-component std of the two-point distribution is 1/2
    assert s.stderr.real == pytest.approx(0.5 / np.sqrt(1e6), rel=0.01)


def test_pseudo_variance_real_pair():
    s = complex_pseudo_variance([1.0, -1.0])
    assert s.value == pytest.approx(2.0 + 0j)


def test_pseudo_variance_hand_computed_complex_pair():
    # z = [1, i]: mean (1+i)/2, (z - mean)^2 sums to -i
    s = complex_pseudo_variance([1.0, 1j])
    assert s.value == pytest.approx(-1j, abs=1e-15)


def test_pseudo_variance_needs_two_samples():
    with pytest.raises(ValueError):
        complex_pseudo_variance([1.0])


@given(
    st.lists(
        st.floats(min_value=-1e6, max_value=1e6, allow_nan=False), min_size=2, max_size=200
    )
)
@settings(max_examples=150, deadline=None)
def test_pseudo_variance_matches_ordinary_variance_on_reals(values):
    x = np.array(values)
    pv = complex_pseudo_variance(x).value
    assert pv.imag == pytest.approx(0.0, abs=1e-9)
    assert pv.real == pytest.approx(np.var(x, ddof=1), rel=1e-12, abs=1e-12)


def test_phi_stream_pseudo_variance_structure():
    # E[phi^2] = E[sgn] = 0, so pvar -> -(E[phi])^2 = -i/2
    grid = TimeGrid(DT, 1000)
    rng = make_rng(SeedSpec(32, 0))
    phis = np.concatenate([phi_half(sample_wiener(grid, rng)) for _ in range(1000)])
    s = complex_pseudo_variance(phis)
    tol_re = max(3 * s.stderr.real, 1e-3)
    tol_im = max(3 * s.stderr.imag, 1e-3)
    assert abs(s.value.real - 0.0) < tol_re
    assert abs(s.value.imag - (-0.5)) < tol_im


def test_pooled_stats_match_flat_estimators():
    rng = np.random.default_rng(5)
    rows = rng.normal(size=(40, 30)) + 1j * rng.normal(size=(40, 30))
    pm = pooled_complex_mean(rows)
    fm = complex_mean(rows.ravel())
    assert pm.value == pytest.approx(fm.value, rel=1e-12)
    ppv = pooled_pseudo_variance(rows)
    fpv = complex_pseudo_variance(rows.ravel())
    assert ppv.value == pytest.approx(fpv.value, rel=1e-10)


def test_pooled_stats_row_permutation_bit_exact():
    rng = np.random.default_rng(6)
    rows = rng.normal(size=(64, 16)) + 1j * rng.normal(size=(64, 16))
    perm = rng.permutation(64)
    a_m, b_m = pooled_complex_mean(rows), pooled_complex_mean(rows[perm])
    assert a_m.value == b_m.value and a_m.stderr == b_m.stderr
    a_v, b_v = pooled_pseudo_variance(rows), pooled_pseudo_variance(rows[perm])
    assert a_v.value == b_v.value and a_v.stderr == b_v.stderr


def test_summary_tag_policy():
    cs = ComplexStat(0j, 0j, 2)
    with pytest.raises(ValueError):
        SummaryStats(cs, cs, cs, "untagged")
    with pytest.raises(ValueError):
        ComplexStat(0j, complex(-1e-3, 0), 2)


def test_increment_pseudo_variance_normalization(protocol_ensembles):
    # frozen oracle: pooled pvar / mu0^2 = -i b^2 / (2 mu0^2) = -0.5496370i
    _, sqrt_ens = protocol_ensembles
    pv = pooled_pseudo_variance(sqrt_ens.increments).value / 0.5**2
    expected_im = -(BRACKET_MEAN**2) / (2 * 0.5**2)
    assert expected_im == pytest.approx(-0.5496370, abs=1e-6)
    assert pv.imag == pytest.approx(expected_im, abs=0.003)
    assert pv.real == pytest.approx(0.0, abs=5e-4)


def test_table1_brownian_row(protocol_ensembles):
    wiener, sqrt_ens = protocol_ensembles
    table = table1_statistics(wiener, sqrt_ens, SqrtParams())
    bro = table.by_tag("brownian", TAG_PAPER_REPORTED)
    # temporal mean ~ 0 with stderr ~ sqrt(1/3)/sqrt(M) ~ 0.004
    assert abs(bro.mean.value.real) < 3 * bro.mean.stderr.real
    assert bro.mean.stderr.real == pytest.approx(0.00408, rel=0.1)
    # temporal variance ~ 1/6, brute-force confirmed
    assert bro.pseudo_variance.value.real == pytest.approx(1 / 6, abs=0.005)
    assert bro.diffusion.value.real == pytest.approx(np.sqrt(1 / 6) / 2, abs=0.01)
    # the temporal estimator itself is also emitted under its own tag
    tmp = table.by_tag("brownian", TAG_PATH_TEMPORAL)
    assert tmp.mean.value == bro.mean.value
    inc = table.by_tag("brownian", TAG_INCREMENT_NORMALIZED)
    assert inc.diffusion.value.real == pytest.approx(0.5, rel=0.02)


def test_table1_square_root_row(protocol_ensembles):
    wiener, sqrt_ens = protocol_ensembles
    table = table1_statistics(wiener, sqrt_ens, SqrtParams())
    sq = table.by_tag("square_root", TAG_PAPER_REPORTED)
    # mean components carry the modulus term: b / (2 mu0) = 0.5242...
    expected = BRACKET_MEAN / (2 * 0.5)
    assert sq.mean.value.real == pytest.approx(expected, abs=0.002)
    assert sq.mean.value.imag == pytest.approx(expected, abs=0.002)
    # reported-convention variance: half the normalized pseudo-variance
    assert sq.pseudo_variance.value.imag == pytest.approx(-0.27482, abs=0.002)
    assert sq.pseudo_variance.value.real == pytest.approx(0.0, abs=5e-4)
    assert sq.diffusion.value == sq.pseudo_variance.value
    inc = table.by_tag("square_root", TAG_INCREMENT_NORMALIZED)
    assert inc.pseudo_variance.value.imag == pytest.approx(2 * sq.pseudo_variance.value.imag, rel=1e-12)


def test_table1_path_permutation_bit_exact(protocol_ensembles):
    from sqrtwiener import ComplexPathEnsemble, WienerEnsemble

    wiener, sqrt_ens = protocol_ensembles
    # permuting 2000-path slices keeps runtime small while exercising the
    # canonical reductions
    w_small = WienerEnsemble(wiener.grid, wiener.dw[:2000])
    s_small = ComplexPathEnsemble(
        sqrt_ens.grid, sqrt_ens.increments[:2000], sqrt_ens.values[:2000]
    )
    perm = np.random.default_rng(9).permutation(2000)
    w_perm = WienerEnsemble(wiener.grid, wiener.dw[:2000][perm])
    s_perm = ComplexPathEnsemble(
        sqrt_ens.grid, sqrt_ens.increments[:2000][perm], sqrt_ens.values[:2000][perm]
    )
    t1 = table1_statistics(w_small, s_small, SqrtParams())
    t2 = table1_statistics(w_perm, s_perm, SqrtParams())
    for row in ("brownian", "square_root"):
        for a, b in zip(getattr(t1, row), getattr(t2, row)):
            assert a.estimator_tag == b.estimator_tag
            for field in ("mean", "pseudo_variance", "diffusion"):
                sa, sb = getattr(a, field), getattr(b, field)
                assert sa.value == sb.value
                assert sa.stderr == sb.stderr


def test_table1_shape_mismatch_rejected(protocol_ensembles):
    from sqrtwiener import WienerEnsemble

    wiener, sqrt_ens = protocol_ensembles
    short = WienerEnsemble(wiener.grid, wiener.dw[:100])
    with pytest.raises(ValueError):
        table1_statistics(short, sqrt_ens, SqrtParams())


def test_histogram_basic():
    h = build_histogram([0.0, 1.0, 2.0, 3.0], n_bins=2)
    np.testing.assert_array_equal(h.counts, [2, 2])
    assert len(h.bin_edges) == 3


def test_histogram_density_normalization():
    rng = np.random.default_rng(3)
    h = build_histogram(rng.normal(size=5000), n_bins=40, normalization="density")
    assert (h.heights() * h.widths).sum() == pytest.approx(1.0, abs=1e-9)


def test_histogram_validation():
    with pytest.raises(ValueError):
        build_histogram([])
    with pytest.raises(ValueError):
        build_histogram([1.0], n_bins=0)
    with pytest.raises(ValueError):
        build_histogram([1.0], normalization="probability")


def test_sturges_default():
    h = build_histogram(np.arange(20000.0))
    assert len(h.counts) == sturges_bins(20000) == 16


def test_gaussian_fit_self_consistency():
    rng = np.random.default_rng(12)
    h = build_histogram(rng.normal(size=10**6), n_bins=60, normalization="density")
    fit = gaussian_fit(h)
    assert fit.center == pytest.approx(0.0, abs=0.01)
    assert fit.sigma == pytest.approx(1.0, abs=0.01)
    assert fit.r_squared > 0.999


def test_gaussian_fit_rejects_degenerate():
    h = build_histogram(np.full(100, 3.3), n_bins=5)
    with pytest.raises(FitError):
        gaussian_fit(h)


def test_fit_gaussian_curve_needs_points():
    with pytest.raises(FitError):
        fit_gaussian_curve([0, 1, 2], [1, 2, 1])


def test_brownian_path_means_are_normal(protocol_ensembles):
    # per-path temporal means of the Brownian ensemble fit a Gaussian
    wiener, _ = protocol_ensembles
    means = wiener.values()[:, 1:].mean(axis=1)
    h = build_histogram(means, normalization="density")
    fit = gaussian_fit(h)
    assert fit.r_squared > 0.99
    assert fit.center == pytest.approx(0.0, abs=0.02)
