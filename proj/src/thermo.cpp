#include <cmath>

#include "ssk/cavity1d.hpp"
#include "ssk/errors.hpp"
#include "ssk/rng.hpp"
#include "ssk/rs_solver.hpp"
#include "ssk/simulator.hpp"

namespace ssk {

ThermoResult thermo_integrate_free_energy(const ExperimentConfig& config,
                                          const std::vector<double>& beta_grid, Execution exec) {
  const std::size_t points = beta_grid.size();
  if (points < 3 || points % 2 == 0)
    throw ConfigError("Simpson's rule needs an odd number (>= 3) of grid points");
  if (beta_grid.front() != 0.0) throw ConfigError("the beta grid must start at 0");
  const double spacing = beta_grid[1] - beta_grid[0];
  for (std::size_t i = 1; i < points; ++i) {
    if (!(std::abs(beta_grid[i] - beta_grid[i - 1] - spacing) <= 1e-12 * (1.0 + spacing)) ||
        !(spacing > 0.0))
      throw ConfigError("the beta grid must be uniform and increasing");
  }

  ThermoResult out;
  out.betas = beta_grid;
  const double xi_one = config.mixture.at_one();
  for (std::size_t i = 0; i < points; ++i) {
    const double beta = beta_grid[i];
    if (beta == 0.0) {
      // the integrand carries a factor beta
      out.xi_overlap.push_back({});
      out.integrand.push_back(0.0);
      out.integrand_stderr.push_back(0.0);
      continue;
    }
    ExperimentConfig run = config;
    run.beta = beta;
    run.seed = rng::derive_key(config.seed, 0x7E12, i);
    run.dump_every = 0;
    const auto result = run_experiment(run, exec);
    const auto& xi = result.estimates[kXiOverlap];
    out.xi_overlap.push_back(xi);
    out.integrand.push_back(beta * (xi_one - xi.mean));
    out.integrand_stderr.push_back(beta * xi.std_error);
  }

  double simpson = 0.0, trapezoid = 0.0, var = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const bool end = i == 0 || i == points - 1;
    const double ws = spacing / 3.0 * (end ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0));
    const double wt = spacing * (end ? 0.5 : 1.0);
    simpson += ws * out.integrand[i];
    trapezoid += wt * out.integrand[i];
    var += ws * ws * out.integrand_stderr[i] * out.integrand_stderr[i];
  }
  out.f_zero = field_free_energy(config.n, config.h);
  out.f_n = out.f_zero + simpson;
  out.f_n_stderr = std::sqrt(var);
  out.simpson_error = std::abs(simpson - trapezoid);
  out.grid_warning = out.simpson_error > out.f_n_stderr;
  out.f_rs = free_energy_rs(rs_point(config.mixture, beta_grid.back(), config.h));
  out.f_rs_zero = free_energy_rs(rs_point(config.mixture, 0.0, config.h));
  return out;
}

}  // namespace ssk
