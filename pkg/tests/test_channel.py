import numpy as np
import pytest
from scipy import stats

from leobeam import (ArrayConfig, UserState, build_channel,
                     build_spacetime_channel, draw_users, friis_gain, gram,
                     steering_vector, temporal_steering, upa_steering)


def test_steering_zero_frequency():
    np.testing.assert_allclose(steering_vector(0.0, 4), np.full(4, 0.5))


@pytest.mark.parametrize("m", [2, 5, 16, 256])
def test_steering_dirichlet_null_at_one_over_m(m):
    inner = np.vdot(steering_vector(0.0, m), steering_vector(1.0 / m, m))
    assert abs(inner) < 1e-12


def test_steering_unit_norm():
    assert abs(np.linalg.norm(steering_vector(0.137, 256)) - 1.0) < 1e-12
    rng = np.random.default_rng(0)
    for _ in range(50):
        x = rng.uniform(-0.5, 0.5)
        m = int(rng.integers(1, 300))
        assert abs(np.linalg.norm(steering_vector(x, m)) - 1.0) < 1e-12


def test_steering_invalid_dimension():
    with pytest.raises(ValueError):
        steering_vector(0.1, 0)
    with pytest.raises(ValueError):
        temporal_steering(0.1, 0)


def test_upa_steering_zero_and_length():
    np.testing.assert_allclose(upa_steering(0, 0, 4, 4), np.full(16, 0.25))
    assert upa_steering(0.1, -0.2, 16, 16).shape == (256,)


def test_upa_inner_product_factorizes():
    # oracle: the Kronecker inner product equals the product of 1D inner products
    rng = np.random.default_rng(1)
    for _ in range(30):
        u1, u2 = rng.uniform(-0.5, 0.5, (2, 2))
        a1 = upa_steering(u1[0], u1[1], 16, 8)
        a2 = upa_steering(u2[0], u2[1], 16, 8)
        gx = np.vdot(steering_vector(u1[0], 16), steering_vector(u2[0], 16))
        gy = np.vdot(steering_vector(u1[1], 8), steering_vector(u2[1], 8))
        assert abs(np.vdot(a1, a2) - gx * gy) < 1e-12


def test_temporal_steering_values():
    np.testing.assert_allclose(temporal_steering(0.0, 3), np.full(3, 1 / np.sqrt(3)))
    np.testing.assert_allclose(temporal_steering(0.5, 2),
                               np.array([1.0, -1.0]) / np.sqrt(2), atol=1e-15)
    assert abs(np.linalg.norm(temporal_steering(0.31, 8)) - 1.0) < 1e-12


def test_friis_gain():
    assert friis_gain(1200.0, 1e9, 2.0) == pytest.approx(friis_gain(600.0, 1e9, 2.0) / 2)
    # hand arithmetic: 3e8 / (4 pi * 1.9925e9 * 6e5)
    assert friis_gain(600.0, 1.9925e9, 2.0) == pytest.approx(1.99692525836757e-08, rel=1e-12)
    assert friis_gain(123.0, 2e9, 0.0) == 1.0
    with pytest.raises(ValueError):
        friis_gain(0.0, 1e9)
    with pytest.raises(ValueError):
        friis_gain(-5.0, 1e9)


def test_draw_users_deterministic():
    a = draw_users(16, 60.0, 600.0, "square", seed=7)
    b = draw_users(16, 60.0, 600.0, "square", seed=7)
    assert a == b


def test_draw_users_mean_and_support():
    users = draw_users(10 ** 5, 60.0, 600.0, "square", seed=11)
    u_x = np.array([u.u_x for u in users])
    # uniform on [-0.05, 0.05]: mean 0 within 3 standard errors
    se = (0.1 / np.sqrt(12.0)) / np.sqrt(len(u_x))
    assert abs(u_x.mean()) < 3 * se
    narrow = draw_users(2000, 37.5, 600.0, "square", seed=2)
    ux = np.array([u.u_x for u in narrow])
    assert np.all(np.abs(ux) <= 0.03125)  # support is [-R/(2H), R/(2H)]
    assert ux.max() > 0.03125 * 0.99


def test_draw_users_marginals_ks():
    users = draw_users(10 ** 5, 60.0, 600.0, "square", seed=123)
    u_x = np.array([u.u_x for u in users])
    omega = np.array([u.omega for u in users])
    assert stats.kstest(u_x, stats.uniform(loc=-0.05, scale=0.1).cdf).pvalue > 0.01
    assert stats.kstest(omega, stats.uniform(loc=-0.5, scale=1.0).cdf).pvalue > 0.01


def test_draw_users_line_and_validation():
    users = draw_users(8, 30.0, 600.0, "line", seed=3)
    assert all(u.y_km == 0.0 and u.u_y == 0.0 for u in users)
    with pytest.raises(ValueError):
        draw_users(0, 60.0, 600.0, "square", seed=0)
    with pytest.raises(ValueError):
        draw_users(4, -1.0, 600.0, "square", seed=0)
    with pytest.raises(ValueError):
        draw_users(4, 60.0, 600.0, "hex", seed=0)


def test_user_state_validation():
    with pytest.raises(ValueError):
        UserState(u_x=0.0, u_y=0.0, omega=0.5)
    with pytest.raises(ValueError):
        UserState(u_x=0.0, u_y=0.0, omega=0.0, beta=0.0)


def _unit_users(freqs):
    return [UserState(u_x=ux, u_y=uy, omega=w) for ux, uy, w in freqs]


def test_build_channel_single_user():
    ch = build_channel(_unit_users([(0.0, 0.0, 0.0)]), ArrayConfig.ula(4))
    np.testing.assert_allclose(ch.entries[:, 0], np.ones(4))


def test_build_channel_gram_diagonal_and_null():
    users = _unit_users([(0.01 * i, 0.0, 0.0) for i in range(5)])
    g = gram(build_channel(users, ArrayConfig.ula(32)))
    np.testing.assert_allclose(np.diag(g.entries).real, np.ones(5), atol=1e-12)
    pair = _unit_users([(0.0, 0.0, 0.0), (1.0 / 32, 0.0, 0.0)])
    g2 = gram(build_channel(pair, ArrayConfig.ula(32)))
    assert abs(g2.entries[0, 1]) < 1e-12


def test_spacetime_degenerates_to_spatial():
    users = draw_users(6, 60.0, 600.0, "square", seed=5)
    arr = ArrayConfig.upa(8, 8)
    sp = build_channel(users, arr)
    st = build_spacetime_channel(users, arr, 1)
    assert np.array_equal(sp.entries, st.entries)


def test_spacetime_temporal_null():
    users = [UserState(u_x=0.07, u_y=0.0, omega=-0.25),
             UserState(u_x=0.07, u_y=0.0, omega=0.0)]  # same u, delta omega = 1/4
    g = gram(build_spacetime_channel(users, ArrayConfig.ula(16), 4))
    assert abs(g.entries[0, 1]) < 1e-12


def test_spacetime_column_block_structure():
    user = UserState(u_x=0.03, u_y=0.0, omega=0.21, beta=0.5 + 0.0j)
    arr = ArrayConfig.ula(8)
    l = 5
    col = build_spacetime_channel([user], arr, l).entries[:, 0]
    spatial = build_channel([user], arr).entries[:, 0]
    blocks = col.reshape(l, arr.m)
    for ell in range(l):
        # block ell carries the slow-time phase on top of the spatial column
        expected = np.exp(2j * np.pi * ell * user.omega) * spatial
        np.testing.assert_allclose(blocks[ell], expected, atol=1e-12)
    assert np.linalg.norm(col) == pytest.approx(np.sqrt(arr.m * l) * abs(user.beta))


def test_spacetime_gram_kronecker_on_grid():
    # 2 spatial x 2 Doppler grid: the stacked Gram is the Kronecker product of
    # the temporal and spatial Grams (Doppler-major user ordering)
    u_vals, w_vals = [0.0, 0.011], [-0.1, 0.3]
    users = [UserState(u_x=u, u_y=0.0, omega=w) for w in w_vals for u in u_vals]
    arr = ArrayConfig.ula(16)
    l = 4
    g = gram(build_spacetime_channel(users, arr, l)).entries
    a = np.column_stack([steering_vector(u, 16) for u in u_vals])
    b = np.column_stack([temporal_steering(w, l) for w in w_vals])
    expected = np.kron(b.conj().T @ b, a.conj().T @ a)
    np.testing.assert_allclose(g, expected, atol=1e-12)


def test_empty_user_list():
    with pytest.raises(ValueError):
        build_channel([], ArrayConfig.ula(4))
    with pytest.raises(ValueError):
        build_spacetime_channel([], ArrayConfig.ula(4), 2)


def test_array_config_validation():
    with pytest.raises(ValueError):
        ArrayConfig("ula", 4, 2)
    with pytest.raises(ValueError):
        ArrayConfig("upa", 0, 4)
    assert ArrayConfig.upa(16, 16).m == 256
