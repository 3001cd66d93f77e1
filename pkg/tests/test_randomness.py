import numpy as np
import pytest

from castopt.randomness import (
    cauchy_step,
    derive_stream,
    gaussian_step,
    iround,
    uniform_symmetric,
)

M = 10**6


def test_stream_determinism():
    a = derive_stream(42, "run", 0).random(100)
    b = derive_stream(42, "run", 0).random(100)
    assert np.array_equal(a, b)


@pytest.mark.parametrize("other", [(42, "run", 1), (43, "run", 0), (42, "sweep", 0)])
def test_stream_independence(other):
    assert derive_stream(42, "run", 0).random() != derive_stream(*other).random()


def test_cauchy_zero_temperature():
    assert np.array_equal(cauchy_step(0.0, 3, derive_stream(0, "c")), np.zeros(3))


def test_cauchy_median_and_scale():
    rng = derive_stream(1, "cauchy")
    xi = cauchy_step(np.ones(M), 1, rng)[:, 0]
    assert abs(np.median(xi)) < 0.01
    xi = cauchy_step(np.full(M, 2.0), 1, rng)[:, 0]
    assert np.mean(np.abs(xi) <= 2.0) == pytest.approx(0.5, abs=0.002)


def test_cauchy_array_temperatures_scale_rows():
    rng = derive_stream(2, "cauchy")
    out = cauchy_step(np.array([0.0, 1.0, 0.0]), 4, rng)
    assert out.shape == (3, 4)
    assert np.all(out[[0, 2]] == 0.0)


def test_gaussian_moments():
    rng = derive_stream(3, "gauss")
    assert np.array_equal(gaussian_step(0.0, 2, rng), np.zeros(2))
    z = gaussian_step(np.full(M, 0.5), 1, rng)[:, 0]
    assert np.var(z) == pytest.approx(1.0, abs=0.01)
    z = gaussian_step(np.full(M, 2.0), 1, rng)[:, 0]
    assert abs(np.mean(z)) < 0.01


def test_negative_temperature_rejected():
    with pytest.raises(ValueError):
        cauchy_step(-1.0, 1, derive_stream(0, "x"))
    with pytest.raises(ValueError):
        gaussian_step(np.array([0.1, -0.1]), 1, derive_stream(0, "x"))


@pytest.mark.parametrize("sampler", [cauchy_step, gaussian_step])
def test_sign_symmetry(sampler):
    z = sampler(np.full(M, 0.3), 1, derive_stream(4, sampler.__name__))[:, 0]
    # sign is +-1 with variance 1, so 3 sigma is 3/sqrt(M)
    assert abs(np.mean(np.sign(z))) < 3 / np.sqrt(M)


def test_uniform_symmetric():
    rng = derive_stream(5, "u")
    assert uniform_symmetric(0.0, rng) == 0.0
    u = uniform_symmetric(0.3, rng, size=M)
    assert np.var(u) == pytest.approx(0.03, abs=0.001)
    u = uniform_symmetric(0.105, rng, size=10_000)
    assert np.all(np.abs(u) <= 0.105)


def test_iround_integers_and_zero():
    rng = derive_stream(6, "i")
    assert all(iround(3.0, rng) == 3 for _ in range(100))
    assert iround(0.0, rng) == 0
    with pytest.raises(ValueError):
        iround(-0.5, rng)


def test_iround_half_mean():
    rng = derive_stream(7, "i")
    draws = np.array([iround(2.5, rng) for _ in range(M)])
    assert set(np.unique(draws)) == {2, 3}
    assert draws.mean() == pytest.approx(2.5, abs=0.002)


@pytest.mark.parametrize("x", [0.1, 0.5, 0.9, 7.25])
def test_iround_unbiased(x):
    rng = derive_stream(8, "iround", int(x * 100))
    draws = np.fromiter((iround(x, rng) for _ in range(M)), dtype=np.int64, count=M)
    p = x - np.floor(x)
    sigma = np.sqrt(p * (1 - p) / M)
    assert abs(draws.mean() - x) < 3 * sigma


def test_replay_bit_exact():
    def sample(seed):
        rng = derive_stream(seed, "replay")
        return np.concatenate([
            cauchy_step(np.array([0.1, 0.2]), 3, rng).ravel(),
            gaussian_step(0.4, 3, rng),
            uniform_symmetric(0.2, rng, size=5),
            [iround(1.7, rng) for _ in range(5)],
        ])

    assert np.array_equal(sample(9), sample(9))
