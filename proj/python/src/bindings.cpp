#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mrwspec/density.hpp"
#include "mrwspec/field.hpp"
#include "mrwspec/mrm.hpp"
#include "mrwspec/solver.hpp"
#include "mrwspec/spectra.hpp"

namespace py = pybind11;
using namespace mrwspec;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

SolverConfig make_config(int grid, int ensemble, int sim_grid, double tol,
                         int max_iter, Seed seed) {
  SolverConfig c;
  c.k_grid = Grid(grid);
  c.ensemble_size = ensemble;
  c.sim_grid = sim_grid;
  c.tol = tol;
  c.max_iter = max_iter;
  c.master_seed = seed;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "covariance spectra of multifractal-volatility return matrices";

  m.def("mp_density", &mp_density, py::arg("x"), py::arg("q"),
        "limiting white-noise eigenvalue density at aspect ratio q");
  m.def("zeta", &zeta, py::arg("p"), py::arg("gamma2"),
        "moment scaling exponent of the multifractal measure");
  m.def("ln_plus_kernel", &ln_plus_kernel, py::arg("lag"), py::arg("gamma2"),
        py::arg("tau"), py::arg("min_lag") = 0.0,
        "power-law weight max(tau/max(|lag|, min_lag), 1)^gamma2");
  m.def("rho_eps", &rho_eps, py::arg("lag"), py::arg("eps"), py::arg("tau"),
        "regularized log correlation of the volatility field");

  m.def(
      "sample_mrm",
      [](int n, double gamma2, double tau, Seed seed) {
        return to_array(sample_mrm(Grid(n), gamma2, tau, seed).masses);
      },
      py::arg("n"), py::arg("gamma2"), py::arg("tau"), py::arg("seed"),
      "cell masses of one multifractal measure sample on n cells");

  m.def(
      "simulate_eigenvalues",
      [](double gamma2, double tau, double q, int n, Seed seed, int threads) {
        ModelParams p;
        p.gamma2 = gamma2;
        p.tau = tau;
        p.q = q;
        p.n = n;
        const ReturnsMatrix x = sample_returns(p, seed, threads);
        return to_array(covariance_spectrum(x).eigenvalues);
      },
      py::arg("gamma2"), py::arg("tau"), py::arg("q"), py::arg("n"),
      py::arg("seed") = 1, py::arg("threads") = 1,
      "ascending eigenvalues of one simulated covariance matrix");

  m.def(
      "solve_mu2",
      [](std::complex<double> z, double gamma2, double tau, double q, int grid,
         int ensemble, int sim_grid, double tol, int max_iter, Seed seed) {
        SolverConfig c = make_config(grid, ensemble, sim_grid, tol, max_iter, seed);
        c.z = z;
        ModelParams p;
        p.gamma2 = gamma2;
        p.tau = tau;
        p.q = q;
        return solve_k(c, p).mu2;
      },
      py::arg("z"), py::arg("gamma2"), py::arg("tau"), py::arg("q") = 1.0,
      py::arg("grid") = 256, py::arg("ensemble") = 2000,
      py::arg("sim_grid") = 4096, py::arg("tol") = 1e-6,
      py::arg("max_iter") = 500, py::arg("seed") = 1,
      "Stieltjes transform of the singular-value symmetrization at z");

  m.def(
      "solve_density",
      [](double gamma2, double tau, double q, std::vector<double> x_points,
         double eps_im, bool richardson, int grid, int ensemble, int sim_grid,
         double tol, int max_iter, Seed seed, int threads) {
        UpsilonJob job;
        job.base = make_config(grid, ensemble, sim_grid, tol, max_iter, seed);
        job.model.gamma2 = gamma2;
        job.model.tau = tau;
        job.model.q = q;
        job.eps_im = eps_im;
        job.richardson = richardson;
        job.threads = threads;
        const UpsilonResult r = solve_upsilon(job, x_points);
        py::array_t<char> conv(static_cast<py::ssize_t>(r.upsilon.converged.size()));
        std::copy(r.upsilon.converged.begin(), r.upsilon.converged.end(),
                  conv.mutable_data());
        return py::make_tuple(to_array(r.upsilon.values), conv);
      },
      py::arg("gamma2"), py::arg("tau"), py::arg("q"), py::arg("x_points"),
      py::arg("eps_im") = 0.01, py::arg("richardson") = false,
      py::arg("grid") = 256, py::arg("ensemble") = 2000,
      py::arg("sim_grid") = 4096, py::arg("tol") = 1e-6,
      py::arg("max_iter") = 500, py::arg("seed") = 1, py::arg("threads") = 1,
      "symmetrized singular-value density at the given x points");
}
