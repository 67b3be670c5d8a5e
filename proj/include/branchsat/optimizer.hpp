#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace branchsat {

using ObjectiveFn = std::function<double(const std::vector<double>&)>;

struct LocalMinConfig {
  double value_tol = 1e-8;  // stop a sweep when f improves less than this
  double coord_tol = 1e-8;
  int max_sweeps = 100;
};

struct McmcConfig {
  int n_iter = 5;
  double step_size = 0.5;
  double temperature = 1.0;
  std::uint64_t seed = 0;
  bool literal_last_sample = false;  // return last accepted, not best seen
  LocalMinConfig local;
};

struct MinimizeResult {
  std::vector<double> x_star;
  double f_star = std::numeric_limits<double>::infinity();
  std::uint64_t evaluations = 0;
  int accepted_moves = 0;
  bool early_stopped = false;  // hit f == 0 and returned immediately
};

/// Derivative-free local minimization (direction-set method with
/// golden-section bracketing and parabolic line search). Non-finite
/// objective values are treated as +inf barriers.
MinimizeResult local_minimize(const ObjectiveFn& f, std::vector<double> x0,
                              const LocalMinConfig& cfg);

/// Random coordinate-wise displacement of magnitude `step_size`.
std::vector<double> propose_perturbation(const std::vector<double>& x,
                                         double step_size, std::mt19937_64& rng);

/// Basin-hopping: repeated perturbation plus local minimization with
/// Metropolis acceptance at the configured temperature. Stops as soon
/// as the objective reaches zero.
MinimizeResult mcmc_minimize(const ObjectiveFn& f, std::vector<double> x0,
                             const McmcConfig& cfg);

}  // namespace branchsat
