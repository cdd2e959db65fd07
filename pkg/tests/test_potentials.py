import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twobody_sn.grid import make_grid
from twobody_sn.potentials import (
    Couplings,
    KernelTable,
    convolve,
    kernel_eval,
    pair_potential_grid,
    residual_interaction,
    self_potential,
)

from conftest import gaussian

# frozen by hand: 1/sqrt(1 + 0.2^2) and -mu1*mu2 times it for mu1 = mu2 = 2
KERNEL_AT_ONE = 0.9805806756909202
PAIR_AT_ONE = -3.922322702763681


def test_kernel_closed_form():
    assert kernel_eval(1.0, 0.2) == pytest.approx(KERNEL_AT_ONE, abs=1e-15)
    assert kernel_eval(0.0, 0.2) == pytest.approx(5.0)
    # periodic wrapping folds r = L - 1 onto 1
    assert kernel_eval(39.0, 0.2, L=40.0) == pytest.approx(KERNEL_AT_ONE, abs=1e-12)


def test_pair_potential_value():
    g = make_grid(256, 32.0)  # dx = 1/8
    K = KernelTable.build(g, 0.2)
    V = pair_potential_grid(g, (2.0, 2.0), 1.0, K)
    assert V[100, 108] == pytest.approx(PAIR_AT_ONE, abs=1e-12)
    assert V[108, 100] == V[100, 108]
    assert np.allclose(V, V.T)


def _direct_convolution(rho, grid, eps):
    # O(N^2) sum over periodic minimum distances; independent of the FFT path
    x = grid.x
    out = np.zeros_like(x)
    for i in range(grid.N):
        r = x[i] - x
        r = r - grid.L * np.round(r / grid.L)
        out[i] = np.sum(rho / np.sqrt(r**2 + eps**2)) * grid.dx
    return out


@given(center=st.floats(-5, 5), sigma=st.floats(0.5, 2.0), mu=st.floats(0.5, 4.0))
def test_self_potential_matches_direct_sum(small_grid, small_kernel, center, sigma, mu):
    rho = np.abs(gaussian(small_grid.x, center, sigma)) ** 2
    got = self_potential(rho, small_kernel, mu)
    ref = mu * _direct_convolution(rho, small_grid, 0.2)
    assert np.max(np.abs(got - ref)) < 1e-10


def test_convolve_along_axis(small_grid, small_kernel):
    rng = np.random.default_rng(3)
    block = rng.random((5, small_grid.N))
    by_row = np.array([convolve(r, small_kernel) for r in block])
    assert np.allclose(convolve(block, small_kernel, axis=1), by_row, atol=1e-13)
    assert np.allclose(convolve(block.T, small_kernel, axis=0), by_row.T, atol=1e-13)


def test_kernel_matrix_is_circulant(small_kernel):
    M = small_kernel.matrix()
    assert np.allclose(M, M.T)
    assert np.allclose(M[3], np.roll(M[0], 3))


def test_negative_density_rejected(small_grid, small_kernel):
    rho = np.zeros(small_grid.N)
    rho[3] = -1e-6
    with pytest.raises(ValueError):
        self_potential(rho, small_kernel)


def test_couplings_validated():
    with pytest.raises(ValueError):
        Couplings(kappa=-1.0)
    with pytest.raises(ValueError):
        Couplings(gamma=float("nan"))


@given(c1=st.floats(-6, 0), c2=st.floats(0, 6))
def test_residual_interaction_has_zero_conditional_means(small_grid, small_kernel, c1, c2):
    g = small_grid
    rho1 = np.abs(gaussian(g.x, c1, 1.0)) ** 2
    rho2 = np.abs(gaussian(g.x, c2, 1.0)) ** 2
    V = pair_potential_grid(g, (1.0, 1.0), 1.0, small_kernel)
    res = residual_interaction(V, rho1, rho2, g.dx)
    # averaging V_res over either particle leaves nothing
    assert np.max(np.abs(res.V_res @ rho2 * g.dx)) < 1e-12
    assert np.max(np.abs(rho1 @ res.V_res * g.dx)) < 1e-12
    assert res.mean12 == pytest.approx(rho1 @ V @ rho2 * g.dx**2, rel=1e-12)


def test_fft_round_trip(base_grid):
    rng = np.random.default_rng(0)
    a = rng.normal(size=base_grid.N) + 1j * rng.normal(size=base_grid.N)
    assert np.max(np.abs(np.fft.ifft(np.fft.fft(a)) - a)) / np.max(np.abs(a)) < 1e-12


def test_self_potential_at_origin_two_ways(base_grid, base_kernel):
    rho = np.abs(gaussian(base_grid.x, 0.0, 1.0)) ** 2
    i0 = base_grid.N // 2
    direct = np.sum(rho / np.sqrt(base_grid.x**2 + 0.04)) * base_grid.dx
    assert abs(self_potential(rho, base_kernel)[i0] - direct) < 1e-10


@given(alpha=st.floats(0, 3), beta=st.floats(0, 3), ca=st.floats(-5, 5), cb=st.floats(-5, 5))
def test_self_potential_is_linear(small_grid, small_kernel, alpha, beta, ca, cb):
    ra = np.abs(gaussian(small_grid.x, ca, 1.0)) ** 2
    rb = np.abs(gaussian(small_grid.x, cb, 0.7)) ** 2
    lhs = self_potential(alpha * ra + beta * rb, small_kernel)
    rhs = alpha * self_potential(ra, small_kernel) + beta * self_potential(rb, small_kernel)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(np.max(np.abs(rhs)), 1e-300)


@given(c=st.floats(0, 6), sigma=st.floats(0.6, 2.0))
def test_self_potential_of_even_density_is_even(base_grid, base_kernel, c, sigma):
    x = base_grid.x
    rho = np.abs(gaussian(x, c, sigma)) ** 2 + np.abs(gaussian(x, -c, sigma)) ** 2
    # reflection x -> -x maps index j to N - j (index 0 sits at -L/2)
    phi = self_potential(rho, base_kernel)
    refl = np.roll(phi[::-1], 1)
    assert np.max(np.abs(phi - refl)) < 1e-12 * np.max(np.abs(phi))


def test_residual_variance_against_direct_quadrature(base_grid, base_kernel):
    g = base_grid
    rho1 = np.abs(gaussian(g.x, -3, 1.0)) ** 2
    rho2 = np.abs(gaussian(g.x, 3, 1.0)) ** 2
    V = pair_potential_grid(g, (1.0, 1.0), 1.0, base_kernel)
    got = residual_interaction(V, rho1, rho2, g.dx)
    # oracle: pair field from the closed-form kernel, explicit double sums
    r = np.subtract.outer(g.x, g.x)
    r = r - g.L * np.round(r / g.L)
    U = -1.0 / np.sqrt(r**2 + 0.04)
    m = np.sum(np.outer(rho1, rho2) * U) * g.dx**2
    c2 = np.array([np.sum(rho2 * U[i]) for i in range(g.N)]) * g.dx
    c1 = np.array([np.sum(rho1 * U[:, j]) for j in range(g.N)]) * g.dx
    vres = U - c2[:, None] - c1[None, :] + m
    ref = np.sum(np.outer(rho1, rho2) * vres**2) * g.dx**2
    val = np.sum(np.outer(rho1, rho2) * got.V_res**2) * g.dx**2
    assert ref > 0
    assert abs(val - ref) / ref < 1e-10
    assert abs(np.sum(np.outer(rho1, rho2) * got.V_res) * g.dx**2) < 1e-10
