#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "branchsat/optimizer.hpp"

using namespace branchsat;

namespace {

double two_basin(double x) {
  // piecewise objective with zeros at -3, 1 and 2
  if (x <= 1.0) {
    double t = (x + 1.0) * (x + 1.0) - 4.0;
    return t * t;
  }
  double t = x * x - 4.0;
  return t * t;
}

}  // namespace

TEST_CASE("local minimization of smooth bowls") {
  auto quad = [](const std::vector<double>& x) {
    return (x[0] - 3.0) * (x[0] - 3.0);
  };
  MinimizeResult r = local_minimize(quad, {100.0}, {});
  CHECK(r.f_star < 1e-12);
  CHECK(r.x_star[0] == doctest::Approx(3.0).epsilon(1e-5));
  CHECK(r.evaluations > 0);

  auto bowl = [](const std::vector<double>& x) {
    return (x[0] - 1.0) * (x[0] - 1.0) + 4.0 * (x[1] + 2.0) * (x[1] + 2.0);
  };
  MinimizeResult r2 = local_minimize(bowl, {50.0, -70.0}, {});
  CHECK(r2.f_star < 1e-10);
  CHECK(r2.x_star[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r2.x_star[1] == doctest::Approx(-2.0).epsilon(1e-4));
}

TEST_CASE("correlated valley needs the evolving direction set") {
  // narrow quadratic valley along x = y
  auto valley = [](const std::vector<double>& x) {
    double u = x[0] - x[1];
    double v = x[0] + x[1] - 6.0;
    return 100.0 * u * u + v * v;
  };
  MinimizeResult r = local_minimize(valley, {10.0, -8.0}, {});
  CHECK(r.f_star < 1e-8);
  CHECK(r.x_star[0] == doctest::Approx(3.0).epsilon(1e-3));
  CHECK(r.x_star[1] == doctest::Approx(3.0).epsilon(1e-3));
}

TEST_CASE("quantized staircases do not stall the line search") {
  // piecewise-constant steps toward a wide zero valley, like a
  // high-word comparison
  auto stairs = [](const std::vector<double>& x) {
    double a = std::fabs(x[0]);
    if (a <= 1.0) return 0.0;
    return std::floor(std::log2(a) * 16.0) + 1.0;
  };
  MinimizeResult r = local_minimize(stairs, {3.56e7, 0.0}, {});
  CHECK(r.f_star == 0.0);
}

TEST_CASE("minimization rides a decreasing staircase to infinity") {
  auto climb = [](const std::vector<double>& x) {
    if (std::isinf(x[0])) return 0.0;
    double a = std::fabs(x[0]);
    return 4000.0 - std::floor(std::log2(a + 1.0)) + 1.0;
  };
  MinimizeResult r = local_minimize(climb, {17.0}, {});
  CHECK(r.f_star == 0.0);
}

TEST_CASE("non-finite starts are rejected, NaN values are barriers") {
  auto quad = [](const std::vector<double>& x) { return x[0] * x[0]; };
  CHECK_THROWS(local_minimize(quad, {std::nan("")}, {}));
  CHECK_THROWS(
      local_minimize(quad, {std::numeric_limits<double>::infinity()}, {}));

  // NaN region to the right; the minimizer must still settle the bowl
  auto guarded = [](const std::vector<double>& x) {
    if (x[0] > 10.0) return std::nan("");
    return (x[0] - 2.0) * (x[0] - 2.0);
  };
  MinimizeResult r = local_minimize(guarded, {9.0}, {});
  CHECK(r.f_star < 1e-10);
}

TEST_CASE("perturbations stay inside the configured step") {
  std::mt19937_64 rng(99);
  std::vector<double> x{1.0, -2.0, 3.0};
  for (int i = 0; i < 1000; ++i) {
    auto y = propose_perturbation(x, 0.5, rng);
    REQUIRE(y.size() == x.size());
    for (std::size_t j = 0; j < x.size(); ++j)
      CHECK(std::fabs(y[j] - x[j]) <= 0.5);
  }
}

TEST_CASE("basin hopping escapes a local basin") {
  // from x = 5 the local step lands in the x = 2 basin of the right
  // piece; from far left it must hop across the ridge at x = 1
  McmcConfig cfg;
  cfg.seed = 1234;
  auto f = [](const std::vector<double>& x) { return two_basin(x[0]); };
  int hits = 0;
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (int i = 0; i < 50; ++i) {
    cfg.seed = rng();
    MinimizeResult r = mcmc_minimize(f, {u(rng)}, cfg);
    if (r.f_star <= 1e-6) {
      double x = r.x_star[0];
      bool near = std::fabs(x + 3.0) <= 1e-3 || std::fabs(x - 1.0) <= 1e-3 ||
                  std::fabs(x - 2.0) <= 1e-3;
      if (near) ++hits;
    }
  }
  CHECK(hits >= 48);
}

TEST_CASE("same seed, same trajectory") {
  auto f = [](const std::vector<double>& x) { return two_basin(x[0]); };
  McmcConfig cfg;
  cfg.seed = 777;
  MinimizeResult a = mcmc_minimize(f, {6.5}, cfg);
  MinimizeResult b = mcmc_minimize(f, {6.5}, cfg);
  CHECK(a.f_star == b.f_star);
  CHECK(a.x_star == b.x_star);
  CHECK(a.evaluations == b.evaluations);
  CHECK(a.accepted_moves == b.accepted_moves);
}

TEST_CASE("zero objective stops the chain early") {
  std::uint64_t calls = 0;
  auto f = [&calls](const std::vector<double>& x) {
    ++calls;
    return std::fabs(x[0]) <= 1.0 ? 0.0 : x[0] * x[0];
  };
  McmcConfig cfg;
  cfg.seed = 5;
  MinimizeResult r = mcmc_minimize(f, {0.2}, cfg);
  CHECK(r.f_star == 0.0);
  CHECK(r.early_stopped);
}

TEST_CASE("best-seen beats the last sample unless asked otherwise") {
  auto f = [](const std::vector<double>& x) { return two_basin(x[0]); };
  McmcConfig best_cfg;
  best_cfg.seed = 31;
  MinimizeResult best = mcmc_minimize(f, {6.0}, best_cfg);

  McmcConfig literal_cfg = best_cfg;
  literal_cfg.literal_last_sample = true;
  MinimizeResult literal = mcmc_minimize(f, {6.0}, literal_cfg);
  CHECK(best.f_star <= literal.f_star);
}

TEST_CASE("result improves on the plain local minimum") {
  auto f = [](const std::vector<double>& x) { return two_basin(x[0]); };
  McmcConfig cfg;
  cfg.seed = 404;
  for (double x0 : {-7.0, -0.5, 4.0, 7.5}) {
    MinimizeResult local = local_minimize(f, {x0}, cfg.local);
    MinimizeResult global = mcmc_minimize(f, {x0}, cfg);
    CHECK(global.f_star <= local.f_star);
  }
}
