import itertools

import numpy as np
import pytest

import swagger as sw


def test_builders_and_penalty():
    s = sw.one_sparse(4)
    assert s.dim == 4
    assert s.validate() == "ok"
    np.testing.assert_array_equal(s.dense(), np.ones((4, 4)) - np.eye(4))
    assert sw.penalty(s, np.array([0.0, 2.0, 0.0, 0.0])) == 0.0
    assert sw.penalty(s, np.array([1.0, 1.0, 0.0, 0.0])) == pytest.approx(2.0)

    local = sw.local_neighborhood(60, 4)
    assert local.dim == 60
    dense = local.dense()
    assert dense[0, 4] == 1.0 and dense[0, 5] == 0.0


def test_decomposition_matches_numpy():
    rng = np.random.default_rng(1)
    s = sw.random_structure(12, 0.5, 7)
    x = rng.standard_normal(12)
    d = sw.decompose(s, x)
    ax = np.abs(x)
    overlap = ax @ (np.ones((12, 12)) - s.dense() - np.eye(12)) @ ax
    assert d["l1sq"] == pytest.approx(ax.sum() ** 2)
    assert d["overlap"] == pytest.approx(overlap)
    assert sw.penalty(s, x) == pytest.approx(ax @ s.dense() @ ax)


def l1sq_objective(z, q, lam):
    return 0.5 * np.sum((z - q) ** 2) + 0.5 * lam * np.sum(np.abs(q)) ** 2


def test_prox_against_support_enumeration():
    rng = np.random.default_rng(2)
    for _ in range(50):
        z = rng.standard_normal(5) * 2
        lam = 0.7
        best = np.inf
        for r in range(1, 6):
            for support in itertools.combinations(range(5), r):
                idx = list(support)
                total = np.abs(z[idx]).sum() / (1 + r * lam)
                mag = np.abs(z[idx]) - lam * total
                if np.any(mag < 0):
                    continue
                q = np.zeros(5)
                q[idx] = np.sign(z[idx]) * mag
                best = min(best, l1sq_objective(z, q, lam))
        best = min(best, l1sq_objective(z, np.zeros(5), lam))
        assert l1sq_objective(z, sw.prox_l1sq(z, lam), lam) <= best + 1e-12


def test_constrained_solve_is_feasible():
    s = sw.block_group(3, 4)
    x = sw.generate_structured_x(s, 5)
    assert sw.penalty(s, x) == 0.0
    a, y, sigma = sw.synthesize_measurement(x, 6, n_obs=20)
    assert a.shape == (20, 12) and sigma > 0
    r = sw.solve(a, y, s, step_multiplier=0.3)
    assert r["status"] == "converged"
    assert sw.penalty(s, r["x"]) < 1e-8
    m = sw.metrics(x, r["x"])
    assert 0.0 <= m["jacard"] <= 1.0


def test_lntv_keeps_constant_signal():
    y = np.full(40, 0.3)
    r = sw.lntv_denoise_1d(y, 4, lambda_lntv=5.0, lambda_tv=0.5)
    np.testing.assert_allclose(r["x"], y, atol=1e-6)


def test_blur_preserves_constant_image():
    img = np.full((10, 12), 0.5)
    np.testing.assert_allclose(sw.blur(img, 1.0, 2), img, atol=1e-12)


def test_errors_carry_a_code():
    with pytest.raises(sw.SwaggerError) as info:
        sw.local_neighborhood(5, 9)
    assert info.value.code == "invalid-band"
    with pytest.raises(ValueError):
        sw.prox_l1sq(np.ones(3), -1.0)
