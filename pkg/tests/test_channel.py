import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from analogcodes import (
    DCTCode,
    DFTCode,
    NoiseModel,
    RandomCode,
    Reception,
    RepetitionCode,
    analytic_mse,
    awgn,
    encode,
    encoding_power_gain,
    erase,
    erasure_decode,
    is_mdre,
    ml_decode,
)
from analogcodes.validation import RankDeficientError

seeds = st.integers(min_value=0, max_value=2**32 - 1)


# ------------------------------------------------------------- noise model

def test_noise_model_validation():
    with pytest.raises(ValueError):
        NoiseModel(field="quaternion", sigma2=1.0)
    with pytest.raises(ValueError):
        NoiseModel(field="real", sigma2=0.0)
    with pytest.raises(ValueError):
        NoiseModel(field="real", sigma2=-1.0)
    with pytest.raises(ValueError):
        NoiseModel(field="real", sigma2=math.inf)
    NoiseModel(field="real", sigma2=0.5, seed=3)


@pytest.mark.parametrize("field", ["real", "complex"])
def test_noise_variance_matches_sigma2(field):
    noise = NoiseModel(field=field, sigma2=0.37)
    rng = np.random.default_rng(0)
    w = noise.sample(rng, 10**6)
    total_var = float(np.mean(w.real**2 + w.imag**2))
    assert abs(total_var - 0.37) < 0.01 * 0.37
    if field == "real":
        assert np.all(w.imag == 0)
    else:
        # circular symmetry: each part carries half the variance
        assert abs(np.mean(w.real**2) - 0.185) < 0.01
        assert abs(np.mean(w.imag**2) - 0.185) < 0.01


def test_reception_validation():
    Reception(r=np.zeros(4), erased=(1, 3))
    with pytest.raises(ValueError):
        Reception(r=np.zeros(4), erased=(1, 1))
    with pytest.raises(ValueError):
        Reception(r=np.zeros(4), erased=(4,))
    with pytest.raises(ValueError):
        Reception(r=np.zeros((2, 2)))
    rec = Reception(r=np.zeros(5), erased=(3, 0))
    assert rec.erased == (0, 3)
    assert list(rec.survivors) == [1, 2, 4]


# ------------------------------------------------------------------ encode

def test_encode_zero_maps_to_zero():
    g = DFTCode(n=6, k=3).fit().generator_
    assert np.all(encode(g, np.zeros(3)) == 0)


def test_encode_repetition_concatenates():
    g = RepetitionCode(k=2, t=2).fit().generator_
    np.testing.assert_array_equal(encode(g, [3.0, -1.0]), [3.0, -1.0, 3.0, -1.0])


def test_encode_unitary_preserves_norm():
    g = DCTCode(n=8, k=4).fit().generator_
    u = np.array([1.0, -2.0, 0.5, 3.0])
    v = encode(g, u)
    assert abs(np.linalg.norm(v) - np.linalg.norm(u)) < 1e-12


def test_encode_length_mismatch():
    g = DCTCode(n=8, k=4).fit().generator_
    with pytest.raises(ValueError):
        encode(g, np.ones(5))


# -------------------------------------------------------------------- awgn

def test_awgn_deterministic_per_seed_and_trial():
    g = DCTCode(n=8, k=4).fit().generator_
    v = encode(g, np.ones(4))
    noise = NoiseModel(field="complex", sigma2=0.1, seed=5)
    a = awgn(v, noise, trial=7)
    b = awgn(v, noise, trial=7)
    c = awgn(v, noise, trial=8)
    assert np.array_equal(a.r, b.r)
    assert not np.array_equal(a.r, c.r)
    assert a.erased == ()


def test_awgn_adds_noise_of_requested_power():
    v = np.zeros(500)
    noise = NoiseModel(field="real", sigma2=2.0, seed=1)
    recs = [awgn(v, noise, trial=t).r for t in range(200)]
    w = np.concatenate(recs)
    assert abs(np.mean(w.real**2) - 2.0) < 0.05


# --------------------------------------------------------------- ml decode

def test_ml_decode_noiseless_is_exact():
    for code in (DFTCode(n=8, k=4).fit(), RandomCode(k=3, n=7, seed=2).fit()):
        u = np.arange(code.k_) + 0.5
        v = encode(code.generator_, u)
        np.testing.assert_allclose(ml_decode(code.generator_, v), u, atol=1e-9)


def test_ml_decode_unitary_equals_matrix_application():
    code = DFTCode(n=8, k=4).fit()
    rng = np.random.default_rng(3)
    r = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    np.testing.assert_allclose(ml_decode(code.generator_, r), code.generator_ @ r, atol=1e-12)


def test_ml_decode_repetition_averages():
    g = RepetitionCode(k=2, t=2).fit().generator_
    r = np.array([1.0, 2.0, 3.0, 6.0])
    np.testing.assert_allclose(ml_decode(g, r), [2.0, 4.0], atol=1e-12)


def test_ml_decode_accepts_reception_and_estimator():
    code = DCTCode(n=6, k=2).fit()
    u = np.array([1.0, -1.0])
    rec = awgn(encode(code.generator_, u), NoiseModel(field="real", sigma2=1e-6, seed=0))
    est_a = ml_decode(code, rec)
    est_b = ml_decode(code.generator_, rec.r)
    np.testing.assert_allclose(est_a, est_b, atol=0)
    with pytest.raises(ValueError):
        ml_decode(code, Reception(r=np.zeros(6), erased=(1,)))


def test_ml_decode_rank_deficient_rejected():
    g = np.array([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(RankDeficientError):
        ml_decode(g, np.ones(2))


def test_ml_estimate_is_least_squares_optimum():
    rng = np.random.default_rng(4)
    for _ in range(100):
        g = rng.standard_normal((3, 6)) + 1j * rng.standard_normal((3, 6))
        r = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        est = ml_decode(g, r)
        best = np.linalg.norm(r - est @ g.conj()) ** 2
        for _ in range(100):
            delta = 1e-3 * (rng.standard_normal(3) + 1j * rng.standard_normal(3))
            other = np.linalg.norm(r - (est + delta) @ g.conj()) ** 2
            assert best <= other + 1e-12


# ----------------------------------------------------------------- erasure

def test_erase_marks_positions_with_nan():
    v = np.arange(5, dtype=float)
    rec = erase(v, (1, 3))
    assert rec.erased == (1, 3)
    assert np.isnan(rec.r[1]) and np.isnan(rec.r[3])
    assert rec.r[0] == 0.0 and rec.r[2] == 2.0 and rec.r[4] == 4.0


def test_erasure_decode_mds_code_recovers_from_any_four_losses():
    code = DCTCode(n=8, k=4).fit()
    u = np.array([0.3, -1.2, 2.0, 0.7])
    v = encode(code.generator_, u)
    for lost in itertools.combinations(range(8), 4):
        rec = erase(v, lost)
        np.testing.assert_allclose(erasure_decode(code.generator_, rec), u, atol=1e-9)


def test_erasure_decode_repetition_singular_pattern():
    code = RepetitionCode(k=2, t=2).fit()
    v = encode(code.generator_, [1.0, 2.0])
    with pytest.raises(RankDeficientError):
        erasure_decode(code.generator_, erase(v, (0, 2)))  # both copies of symbol 0
    # losing one copy of each symbol is fine
    rec = erase(v, (0, 1))
    np.testing.assert_allclose(erasure_decode(code.generator_, rec), [1.0, 2.0], atol=1e-12)


def test_erasure_decode_no_erasures_matches_ml():
    code = RandomCode(k=3, n=6, seed=9).fit()
    rng = np.random.default_rng(10)
    r = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    np.testing.assert_allclose(
        erasure_decode(code.generator_, Reception(r=r)),
        ml_decode(code.generator_, r),
        atol=1e-9,
    )


def test_erasure_decode_too_few_survivors():
    code = DCTCode(n=6, k=3).fit()
    v = encode(code.generator_, np.ones(3))
    with pytest.raises(RankDeficientError):
        erasure_decode(code.generator_, erase(v, (0, 1, 2, 3)))


# ------------------------------------------------------------ analytic MSE

def test_analytic_mse_unitary():
    g = DCTCode(n=60, k=30).fit().generator_
    assert abs(analytic_mse(g, 0.2) - 30 * 0.2) < 1e-9


def test_analytic_mse_repetition():
    g = RepetitionCode(k=4, t=2).fit().generator_
    assert abs(analytic_mse(g, 0.5) - 4 * 0.5 / 2) < 1e-12


def test_analytic_mse_diagonal_example():
    g = np.array([[1.0, 0.0, 0.0], [0.0, 2.0, 0.0]])
    assert abs(analytic_mse(g, 0.3) - 0.3 * (1.0 + 0.25)) < 1e-12


def test_analytic_mse_rank_deficient_rejected():
    with pytest.raises(RankDeficientError):
        analytic_mse(np.array([[1.0, 1.0], [1.0, 1.0]]), 0.1)


def test_analytic_mse_linear_in_sigma2():
    g = RandomCode(k=3, n=8, seed=4).fit().generator_
    assert abs(analytic_mse(g, 0.2) - 2 * analytic_mse(g, 0.1)) < 1e-12


@given(seeds)
def test_analytic_mse_floor(seed):
    g = RandomCode(k=4, n=9, seed=seed).fit().generator_
    k = 4
    floor = k * 1.0 / encoding_power_gain(g)
    value = analytic_mse(g, 1.0)
    assert value >= floor - 1e-9
    assert is_mdre(g) == (value - floor <= 1e-9 * floor)


def test_analytic_mse_floor_attained_by_mdre():
    for code in (DCTCode(n=12, k=5).fit(), RepetitionCode(k=6, t=3).fit()):
        g = code.generator_
        floor = code.k_ / encoding_power_gain(g)
        assert abs(analytic_mse(g, 1.0) - floor) < 1e-9


def test_error_distribution_is_source_independent():
    # decoding error equals B w: Monte Carlo MSE for a fixed random source
    # matches the all-zero source within confidence intervals
    code = RandomCode(k=3, n=6, seed=6).fit()
    rng = np.random.default_rng(13)
    u = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    v = encode(code.generator_, u)
    zeros = np.zeros(6, dtype=np.complex128)

    def mse(viewpoint_v, ref, noise_seed, trials=4000):
        noise = NoiseModel(field="complex", sigma2=0.4, seed=noise_seed)
        errs = []
        for t in range(trials):
            rec = awgn(viewpoint_v, noise, trial=t)
            est = ml_decode(code, rec)
            errs.append(float(np.linalg.norm(est - ref) ** 2))
        errs = np.asarray(errs)
        return errs.mean(), 1.96 * errs.std(ddof=1) / math.sqrt(trials)

    m1, h1 = mse(v, u, noise_seed=12)
    m0, h0 = mse(zeros, np.zeros(3), noise_seed=500)
    assert abs(m1 - m0) <= h1 + h0
    # and with a shared stream the errors coincide exactly: error = B w
    m1s, _ = mse(v, u, noise_seed=12, trials=200)
    m0s, _ = mse(zeros, np.zeros(3), noise_seed=12, trials=200)
    assert m1s == pytest.approx(m0s, rel=1e-12)
