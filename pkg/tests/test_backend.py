import numpy as np
import pytest

from heatvar import rng
from heatvar._backend import BACKEND, load_backend


def _both():
    try:
        compiled = load_backend("compiled")
    except ImportError:
        pytest.skip("compiled backend not built")
    return compiled, load_backend("python")


def test_active_backend_reported():
    assert BACKEND in ("compiled", "python")


def test_neumaier_sum_bit_identical():
    compiled, fallback = _both()
    gen = np.random.default_rng(3)
    for size in (0, 1, 7, 1000, 4096):
        a = gen.standard_normal(size) * 10.0 ** gen.integers(-8, 8)
        assert compiled.neumaier_sum(a) == fallback.neumaier_sum(a)


def test_neumaier_beats_naive_on_cancellation():
    compiled, _ = _both()
    a = np.array([1e16, 1.0, -1e16, 1.0])
    assert compiled.neumaier_sum(a) == 2.0


def test_abs_pow_sum_bit_identical_and_correct():
    compiled, fallback = _both()
    gen = np.random.default_rng(4)
    d = gen.standard_normal(2000) * 1e-3
    for p in (2, 4):
        c = compiled.abs_pow_sum(d, p)
        assert c == fallback.abs_pow_sum(d, p)
        assert c == pytest.approx(float(np.sum(np.abs(d) ** p)), rel=1e-12)
    with pytest.raises(ValueError):
        compiled.abs_pow_sum(d, 3)
    with pytest.raises(ValueError):
        fallback.abs_pow_sum(d, 3)


def test_ou_section_same_stream_and_near_identical_values():
    compiled, fallback = _both()
    kres, n = 37, 200
    gen = np.random.default_rng(9)
    hk = gen.standard_normal(kres) * 0.2
    lam = 0.1 * np.arange(1, kres + 1.0) ** 2
    decay = np.exp(-lam * 0.01)
    step_sd = 0.2 * np.sqrt((1 - decay**2) / (2 * lam))
    init_sd = 0.2 * np.sqrt(1 / (2 * lam))
    out_c = np.empty(n + 1)
    out_p = np.empty(n + 1)
    gc = rng.substream(11, rng.TAG_TIME_SECTION)
    gp = rng.substream(11, rng.TAG_TIME_SECTION)
    compiled.ou_section_fill(hk, decay, step_sd, init_sd, 0.01, n, gc, out_c)
    fallback.ou_section_fill(hk, decay, step_sd, init_sd, 0.01, n, gp, out_p)
    # identical stream consumption...
    assert gc.standard_normal() == gp.standard_normal()
    # ...and values equal up to dot-product reassociation
    np.testing.assert_allclose(out_c, out_p, rtol=0, atol=1e-12)
