from fractions import Fraction

import numpy as np
import pytest
from scipy import stats as sps

from lyndonrf.counting import atom_mass
from lyndonrf.stats import (ExactDistribution, LimitLaw, chi_square, chi_square_two_sample,
                            exact_r_distribution, ks_statistic, limit_cdf, limit_moment,
                            montecarlo_r, tail_check_runs)


def test_limit_moments():
    assert limit_moment(1, 2) == 0.75
    assert limit_moment(1, 3) == pytest.approx(2 / 3)
    moments = [limit_moment(k, 4) for k in range(1, 8)]
    assert moments == sorted(moments, reverse=True)
    with pytest.raises(ValueError):
        limit_moment(0)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_limit_cdf(q):
    assert limit_cdf(-0.1, q) == 0
    assert limit_cdf(1, q) == 1
    assert limit_cdf(0.5, q) == pytest.approx((q - 1) / (2 * q))
    # the jump at 1 is the atom
    assert 1 - limit_cdf(1 - 1e-12, q) == pytest.approx(1 / q)


@pytest.mark.parametrize("sample, d", [([0.5], 0.5), ([0.25, 0.75], 0.25), ([0.1, 0.2, 0.9], None)])
def test_ks_examples(sample, d):
    got = ks_statistic(sample)
    assert got == pytest.approx(sps.kstest(sample, "uniform").statistic)
    if d is not None:
        assert got == pytest.approx(d)


def test_ks_against_scipy_random():
    x = np.random.default_rng(0).beta(2, 3, 500)
    assert ks_statistic(x) == pytest.approx(sps.kstest(x, "uniform").statistic)
    law = LimitLaw(3)
    assert ks_statistic(x, np.vectorize(law.cdf)) == pytest.approx(
        sps.kstest(x, np.vectorize(law.cdf)).statistic)


def test_ks_empty():
    with pytest.raises(ValueError):
        ks_statistic([])


def test_chi_square():
    assert chi_square([3, 4, 5], [3, 4, 5]) == 0
    assert chi_square([2, 0], [1, 1]) == 2
    with pytest.raises(ValueError):
        chi_square([], [])
    with pytest.raises(ValueError):
        chi_square([1], [0])
    assert chi_square_two_sample([5, 5, 0], [5, 5, 0]) == 0


@pytest.mark.parametrize("n, support", [
    (2, {1: Fraction(1)}),
    (3, {1: Fraction(1, 2), 2: Fraction(1, 2)}),
    (4, {1: Fraction(1, 3), 3: Fraction(2, 3)}),
])
def test_exact_small(n, support):
    assert exact_r_distribution(n, 2).support == support


@pytest.mark.parametrize("n", range(3, 19))
def test_exact_atom_and_total(n):
    dist = exact_r_distribution(n, 2)
    assert dist.total == 1
    assert dist.atom == atom_mass(n, 2)


@pytest.mark.parametrize("n, q", [(6, 3), (5, 4)])
def test_exact_atom_larger_alphabets(n, q):
    assert exact_r_distribution(n, q).atom == atom_mass(n, q)


def test_exact_means_approach_three_quarters():
    means = {n: exact_r_distribution(n, 2).moment(1) for n in (10, 14, 18)}
    assert means == {10: Fraction(709, 990), 14: Fraction(11789, 16254),
                     18: Fraction(27311, 37368)}
    gaps = [abs(means[n] - Fraction(3, 4)) for n in (10, 14, 18)]
    assert gaps == sorted(gaps, reverse=True)


def test_exact_guard():
    with pytest.raises(ValueError, match="limit-check"):
        exact_r_distribution(30, 2)
    with pytest.raises(ValueError):
        exact_r_distribution(1, 2)


def test_exact_to_dict():
    d = ExactDistribution(3, 2, {1: Fraction(1, 2), 2: Fraction(1, 2)}).to_dict()
    assert d["support"] == {"1": "1/2", "2": "1/2"} and d["mean_r"] == 0.5


def _same(a, b):
    for k in a.samples:
        assert np.array_equal(a.samples[k], b.samples[k])
    da, db = a.to_dict(), b.to_dict()
    da.pop("workers"), db.pop("workers")
    assert da == db


def test_montecarlo_reproducible():
    a = montecarlo_r(300, 2, samples=700, seed=3)
    b = montecarlo_r(300, 2, samples=700, seed=3)
    _same(a, b)
    assert a.sample_count == 700
    assert montecarlo_r(300, 2, samples=700, seed=4).samples["R"].tolist() != a.samples["R"].tolist()


def test_montecarlo_independent_of_workers():
    _same(montecarlo_r(300, 3, samples=600, seed=5, workers=1),
          montecarlo_r(300, 3, samples=600, seed=5, workers=2))


def test_montecarlo_report_ranges():
    rep = montecarlo_r(500, 2, samples=1000, seed=6)
    assert 0 <= rep.atom_freq <= 1 and 0 <= rep.ks_continuous <= 1
    assert all(0 <= m <= 1 for m in rep.moments)
    assert rep.moments == sorted(rep.moments, reverse=True)
    # the block half of the dichotomy can fail at this size (runs just under
    # min_run inside the first block, tied short blocks); the atom half cannot
    atom = rep.samples["R"] == 499
    assert np.array_equal(atom, rep.samples["tail_lyndon"])
    rows = rep.per_sample_rows()
    assert len(rows) == 1000 and all(r[3] == (r[1] == 499) for r in rows)


def test_montecarlo_min_good_extends():
    rep = montecarlo_r(2000, 2, samples=256, seed=7, min_good=300)
    assert rep.good_count >= 300 and rep.sample_count % 256 == 0


@pytest.mark.slow
def test_atom_frequency_n20():
    rep = montecarlo_r(20, 2, samples=10 ** 6, seed=8, with_blocks=False)
    assert abs(rep.atom_freq - float(atom_mass(20, 2))) <= 0.005
    assert rep.dichotomy_violations == 0


def test_tails_n1000():
    rep = tail_check_runs(1000, 2, samples=10 ** 4, seed=9)
    assert rep.freq_max_a1_high <= 0.05
    # pilot gave 0.142, in line with exp(-n^eps/4) ~ 0.14 at this size
    assert rep.freq_max_a1_low <= 0.2
    assert abs(rep.mean_runs_ratio - 0.5) <= 0.01
