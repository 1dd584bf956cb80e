import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy.stats import binom

from pacstl.errors import InputError
from pacstl.reach import binomial_tail_inversion


def test_all_violations_gives_one():
    assert binomial_tail_inversion(40, 40, 1e-3) == 1.0


def test_zero_violations_closed_form():
    eps = binomial_tail_inversion(0, 1500, 1e-9)
    assert eps == pytest.approx(1.0 - 1e-9 ** (1.0 / 1500), abs=1e-9)
    assert eps == pytest.approx(0.013720, abs=1e-6)


@given(st.integers(1, 5000), st.floats(1e-12, 0.5))
def test_closed_form_for_zero_violations(M, beta):
    assert binomial_tail_inversion(0, M, beta) == pytest.approx(1.0 - beta ** (1.0 / M), abs=1e-9)


@given(st.integers(1, 3000), st.data(), st.floats(1e-10, 0.5))
def test_matches_scipy_binomial_cdf(M, data, beta):
    k = data.draw(st.integers(0, M - 1))
    eps = binomial_tail_inversion(k, M, beta)
    # eps is the boundary where the CDF crosses beta
    assert binom.cdf(k, M, max(eps - 1e-7, 0.0)) >= beta * (1 - 1e-6)
    assert binom.cdf(k, M, min(eps + 1e-7, 1.0)) <= beta * (1 + 1e-6) or eps + 1e-7 >= 1.0


@given(st.integers(2, 2000), st.data(), st.floats(1e-10, 0.5))
def test_monotone_in_k(M, data, beta):
    k = data.draw(st.integers(0, M - 2))
    assert binomial_tail_inversion(k, M, beta) <= binomial_tail_inversion(k + 1, M, beta) + 1e-12


@given(st.integers(1, 2000), st.data(), st.floats(1e-10, 0.4), st.floats(1.01, 2.0))
def test_non_increasing_in_beta(M, data, beta, factor):
    k = data.draw(st.integers(0, M))
    b2 = beta * factor
    assume(b2 < 1)
    assert binomial_tail_inversion(k, M, b2) <= binomial_tail_inversion(k, M, beta) + 1e-12


@pytest.mark.parametrize("k,M,beta", [(-1, 10, 0.1), (11, 10, 0.1), (0, 0, 0.1), (0, 10, 0.0), (0, 10, 1.0)])
def test_rejects_bad_arguments(k, M, beta):
    with pytest.raises(InputError):
        binomial_tail_inversion(k, M, beta)


def test_accuracy_is_upper_confidence_bound():
    # one-sided Clopper-Pearson upper limit at level 1 - beta
    from scipy.stats import beta as beta_dist

    k, M, b = 7, 1500, 1e-3
    cp = beta_dist.ppf(1 - b, k + 1, M - k)
    assert binomial_tail_inversion(k, M, b) == pytest.approx(cp, abs=1e-8)
    assert math.isfinite(cp)
