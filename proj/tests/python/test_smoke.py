import math

import numpy as np

import mrwspec


def test_scalar_helpers():
    assert abs(mrwspec.mp_density(2.0, 1.0) - math.sqrt(4.0) / (4.0 * math.pi)) < 1e-12
    assert mrwspec.mp_density(5.0, 1.0) == 0.0
    assert abs(mrwspec.zeta(2.0, 0.25) - 1.75) < 1e-12
    assert abs(mrwspec.ln_plus_kernel(0.1, 0.25, 0.25, 0.01) - 2.5**0.25) < 1e-12
    assert abs(mrwspec.rho_eps(0.0, 0.01, 1.0) - (math.log(100.0) + 1.0)) < 1e-12


def test_sample_mrm_shape_and_determinism():
    m = mrwspec.sample_mrm(512, 0.25, 0.25, seed=7)
    assert m.shape == (512,)
    assert (m >= 0).all()
    assert 0.1 < m.sum() < 10.0
    again = mrwspec.sample_mrm(512, 0.25, 0.25, seed=7)
    assert (m == again).all()
    assert not (m == mrwspec.sample_mrm(512, 0.25, 0.25, seed=8)).all()


def test_simulate_eigenvalues():
    lam = mrwspec.simulate_eigenvalues(0.0, 0.25, 1.0, 128, seed=3)
    assert lam.shape == (128,)
    assert (lam >= 0).all()
    assert lam.max() < 8.0
    assert (np.diff(lam) >= 0).all()
    threaded = mrwspec.simulate_eigenvalues(0.0, 0.25, 1.0, 128, seed=3, threads=2)
    assert (lam == threaded).all()


def _white_noise_mu2(z):
    # root of K^2 - z K + 1 = 0 on the resolvent branch
    disc = (z * z - 4.0) ** 0.5
    roots = [(z + disc) / 2.0, (z - disc) / 2.0]
    good = [r for r in roots if z.imag * r.imag <= 0.0]
    return min(good, key=abs)


def test_solve_mu2():
    z = 2.5 - 0.5j
    mu2 = mrwspec.solve_mu2(z, 0.0, 0.25, grid=128, ensemble=1, sim_grid=512, tol=1e-9)
    assert abs(mu2 - _white_noise_mu2(z)) < 1e-6

    far = mrwspec.solve_mu2(100j, 0.25, 0.25, grid=64, ensemble=50, sim_grid=256)
    assert abs(100j * far - 1.0) < 1e-2
    assert far.imag <= 0.0


def test_solve_density():
    xs = [0.0, 0.5, 1.0, 1.5]
    values, converged = mrwspec.solve_density(
        0.0, 0.25, 1.0, xs, grid=64, ensemble=1, sim_grid=256
    )
    assert converged.all()
    semicircle = [math.sqrt(4.0 - x * x) / (2.0 * math.pi) for x in xs]
    assert np.allclose(values, semicircle, atol=0.02)
