import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from scipy.integrate import quad

from snips.quantfront import (
    MAX_GAIN,
    GainControl,
    QuantizerSpec,
    bussgang_constants,
    learn_gains,
    optimal_step,
    quantize_complex,
    quantize_real,
    quantizer_mse,
    quantizer_spec,
)

from conftest import crandn

# Brute-force oracle: 10^7 N(0,1) samples (seed 12345), Monte-Carlo MSE on a
# grid of step sizes. q=1 grid step 0.005, q=4 grid step 0.001.
BRUTE_FORCE_STEP = {1: (1.595, 0.005), 4: (0.335, 0.001)}


def _spec(q, delta):
    g, D = bussgang_constants(q, delta)
    return QuantizerSpec(q=q, delta=delta, gamma=g, dist_power=D)


def test_midrise_examples():
    s = _spec(2, 1.0)
    assert quantize_real(0.0, s) == 0.5
    assert quantize_real(1.3, s) == 1.5
    assert quantize_real(-0.2, s) == -0.5
    s4 = quantizer_spec(4)
    assert quantize_real(1e6, s4) == pytest.approx(7.5 * s4.delta)
    assert quantize_real(-1e6, s4) == pytest.approx(-7.5 * s4.delta)


def test_boundary_goes_to_saturation():
    s = _spec(3, 1.0)
    assert quantize_real(4.0, s) == 3.5
    assert quantize_real(-4.0, s) == -3.5


@pytest.mark.parametrize("q", [1, 4])
def test_optimal_step_matches_brute_force(q):
    ref, grid = BRUTE_FORCE_STEP[q]
    assert abs(optimal_step(q) - ref) <= grid


def test_one_bit_step_closed_form():
    # 1-bit optimum puts the levels at E|x| = sqrt(2/pi)
    assert optimal_step(1) == pytest.approx(2 * math.sqrt(2 / math.pi), abs=1e-7)


def test_step_and_mse_decrease_with_q():
    steps = [optimal_step(q) for q in range(1, 11)]
    mses = [quantizer_mse(q, optimal_step(q)) for q in range(1, 11)]
    assert all(a > b for a, b in zip(steps, steps[1:]))
    assert all(a > b for a, b in zip(mses, mses[1:]))


def test_optimal_step_is_a_minimum():
    for q in (2, 3, 5):
        d = optimal_step(q)
        m = quantizer_mse(q, d)
        assert m < quantizer_mse(q, d * 1.01) and m < quantizer_mse(q, d * 0.99)


def test_optimal_step_rejects_infinite():
    with pytest.raises(ValueError):
        optimal_step(math.inf)


@pytest.mark.parametrize("q", [1, 2, 3, 4, 6, 8])
def test_closed_form_moments_match_quadrature(q):
    d = optimal_step(q)
    s = _spec(q, d)
    pdf = lambda x: math.exp(-x * x / 2) / math.sqrt(2 * math.pi)
    edges = [k * d for k in range(2 ** (q - 1))] + [math.inf]
    eqx = 2 * sum(quad(lambda x: float(quantize_real(x, s)) * x * pdf(x), a + 1e-12, b)[0]
                  for a, b in zip(edges[:-1], edges[1:]))
    eqq = 2 * sum(quad(lambda x: float(quantize_real(x, s)) ** 2 * pdf(x), a + 1e-12, b)[0]
                  for a, b in zip(edges[:-1], edges[1:]))
    assert s.gamma == pytest.approx(eqx, abs=1e-8)
    assert s.dist_power == pytest.approx(eqq - eqx**2, abs=1e-8)


def test_one_bit_bussgang_values():
    s = quantizer_spec(1)
    assert s.gamma == pytest.approx(2 / math.pi, abs=1e-8)
    assert s.dist_power == pytest.approx(2 / math.pi - 4 / math.pi**2, abs=1e-8)
    assert s.mse() == pytest.approx(1 - 2 / math.pi, abs=1e-8)


def test_bussgang_one_bit_monte_carlo():
    x = np.random.default_rng(1).standard_normal(10**7)
    s = quantizer_spec(1)
    y = quantize_real(x, s)
    assert np.mean(y * x) == pytest.approx(s.gamma, abs=1.5e-3)


@pytest.mark.parametrize("q", [1, 3, 4, 8])
def test_distortion_uncorrelated_with_input(q):
    x = np.random.default_rng(q).standard_normal(10**7)
    s = quantizer_spec(q)
    d = quantize_real(x, s) - s.gamma * x
    assert abs(np.mean(d * x)) < 1e-3
    # standard error of the normalized correlation under dependence
    se = np.sqrt(np.mean(d**2 * x**2) / (np.var(d) * x.size))
    assert abs(np.corrcoef(d, x)[0, 1]) < 4 * se


def test_infinite_resolution():
    s = quantizer_spec(math.inf)
    assert s.infinite and s.gamma == 1.0 and s.dist_power == 0.0
    x = np.array([-3.3, 0.0, 1e-300, 7e8])
    np.testing.assert_array_equal(quantize_real(x, s), x)
    assert quantizer_spec(None) == s


def test_distortion_decreasing_and_trends():
    specs = [quantizer_spec(q) for q in range(1, 13)]
    D = [s.dist_power for s in specs]
    g = [s.gamma for s in specs]
    assert all(a > b > 0 for a, b in zip(D, D[1:]))
    assert all(0 < a < b < 1 for a, b in zip(g, g[1:]))
    assert 1 - g[-1] < 1e-5 and D[-1] < 1e-5


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 8), st.floats(-50, 50, allow_nan=False))
def test_quantizer_laws(q, x):
    s = quantizer_spec(q)
    y = float(quantize_real(x, s))
    alphabet = s.alphabet()
    assert np.min(np.abs(alphabet - y)) < 1e-12
    assert abs(y) <= s.saturation + 1e-15
    # idempotent on the alphabet
    assert float(quantize_real(y, s)) == pytest.approx(y, abs=1e-15)
    if abs(x) > s.delta * 2 ** (q - 1):
        assert abs(y) == pytest.approx(s.saturation)
    k = x / s.delta
    assume(abs(k - round(k)) > 1e-9)
    assert float(quantize_real(-x, s)) == -y


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 8), st.floats(-20, 20, allow_nan=False), st.floats(0, 5, allow_nan=False))
def test_quantizer_monotone(q, x, dx):
    s = quantizer_spec(q)
    assert quantize_real(x + dx, s) >= quantize_real(x, s)


def test_alphabet_shape():
    s = quantizer_spec(3)
    a = s.alphabet()
    assert len(a) == 8
    np.testing.assert_allclose(a, (np.arange(-4, 4) + 0.5) * s.delta)


def test_learn_gains_examples(rng):
    T = 50
    row = np.full(T, 1.0 + 1.0j)  # |y|^2 = 2 per slot
    G = learn_gains(row[None, :])
    assert G.gains[0] == pytest.approx(1.0)
    Y = crandn(rng, 6, T)
    g1 = learn_gains(Y).gains
    np.testing.assert_allclose(learn_gains(3.7 * Y).gains, g1 / 3.7)


def test_learn_gains_normalizes_variance(rng):
    # sigma is the per-real-dimension standard deviation
    sigma = np.array([0.1, 1.0, 30.0])
    Y = sigma[:, None] * (rng.standard_normal((3, 10_000)) + 1j * rng.standard_normal((3, 10_000)))
    g = learn_gains(Y).gains
    Z = g[:, None] * Y
    var = np.concatenate([Z.real, Z.imag], axis=1).var(axis=1)
    np.testing.assert_allclose(var, 1.0, rtol=0.02)
    np.testing.assert_allclose(g, 1 / sigma, rtol=0.02)


def test_learn_gains_zero_row_capped(rng):
    Y = crandn(rng, 3, 8)
    Y[1] = 0
    g = learn_gains(Y).gains
    assert g[1] == MAX_GAIN
    assert np.all(np.isfinite(g))
    with pytest.raises(ValueError):
        GainControl(np.array([1.0, 0.0]))


def test_quantize_complex_infinite_is_identity(rng):
    Y = crandn(rng, 4, 9)
    R = quantize_complex(Y, learn_gains(Y), quantizer_spec(math.inf))
    np.testing.assert_array_equal(R, Y)


def test_quantize_complex_real_input():
    s = quantizer_spec(4)
    Y = np.array([[0.3, -1.2, 2.0]], dtype=complex)
    R = quantize_complex(Y, GainControl(np.ones(1)), s)
    np.testing.assert_allclose(R.imag, s.delta / 2)
    np.testing.assert_allclose(R.real, quantize_real(Y.real, s))


def test_quantize_complex_alphabet_and_mse(rng):
    s = quantizer_spec(4)
    Y = crandn(rng, 8, 125_000) * np.sqrt(2)  # unit variance per real dimension
    G = GainControl(np.ones(8))
    R = quantize_complex(Y, G, s)
    assert np.mean(np.abs(R - Y) ** 2) == pytest.approx(2 * s.mse(), rel=0.05)
    g = np.array([0.5, 2.0])
    R2 = quantize_complex(Y[:2], GainControl(g), s)
    scaled = (R2 * g[:, None]).real
    assert np.all(np.min(np.abs(scaled[..., None] - s.alphabet()), axis=-1) < 1e-12)
    with pytest.raises(ValueError):
        quantize_complex(Y[:3], G, s)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.floats(1e-3, 1e3), st.integers(0, 2**32 - 1))
def test_gain_invariance(q, alpha, seed):
    rng = np.random.default_rng(seed)
    s = quantizer_spec(q)
    Yt = crandn(rng, 6, 16)
    Y = crandn(rng, 6, 5)
    a = quantize_complex(alpha * Y, learn_gains(alpha * Yt), s)
    b = alpha * quantize_complex(Y, learn_gains(Yt), s)
    np.testing.assert_allclose(a, b, rtol=1e-9, atol=0)
