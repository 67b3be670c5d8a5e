#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "branchsat/instrument.hpp"
#include "branchsat/runtime.hpp"
#include "helpers.hpp"

using namespace branchsat;
using testutil::compile;

namespace {

constexpr double kEps = 0x1p-52;

std::shared_ptr<const TypedProgram> square_eq() {
  return testutil::compile_benchmark("square_eq.fpc", "foo");
}

}  // namespace

TEST_CASE("injections cover exactly the target functions") {
  auto tp = compile(R"(
double helper(double x) {
  if (x < 0) {
    return -x;
  }
  return x;
}
double f(double x) {
  if (helper(x) > 5) {
    return 1.0;
  }
  return 0.0;
}
)",
                    "f");
  auto only_f = instrument(tp, {"f"});
  CHECK(only_f->injections.size() == 1);
  CHECK(only_f->injections.count(1) == 1);  // helper's conditional is label 0

  auto both = instrument(tp, {"f", "helper"});
  CHECK(both->injections.size() == 2);

  // a non-target callee branches normally and leaves no events
  auto ip = instrument(tp, {"f"});
  ExecResult run = execute(*ip, {-3.0}, nullptr, kEps, {});
  CHECK(run.trace.branches_taken() == std::set<BranchId>{{1, false}});
}

TEST_CASE("instrument validates its targets") {
  auto tp = square_eq();
  CHECK_THROWS_AS(instrument(tp, {"foo", "nope"}), FrontendError);
  CHECK_THROWS_AS(instrument(tp, {"square"}), FrontendError);  // entry missing
}

TEST_CASE("instrumentation is transparent to program results") {
  auto tp = square_eq();
  auto ip = instrument(tp, {"foo"});
  CoverageState cov(*tp, {"foo"});
  cov.mark_covered({0, true});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-20, 20);
  for (int i = 0; i < 300; ++i) {
    double x = u(rng);
    ExecResult plain = execute(*ip, {x}, nullptr, kEps, {});
    ExecResult inst = execute(*ip, {x}, &cov, kEps, {});
    CHECK(plain.value == inst.value);
    CHECK(plain.trace.branches_taken() == inst.trace.branches_taken());
  }
}

TEST_CASE("the objective is non-negative everywhere") {
  auto tp = square_eq();
  auto ip = instrument(tp, {"foo"});
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  std::uniform_int_distribution<int> coin(0, 1);
  // random snapshots, random probes
  for (int s = 0; s < 20; ++s) {
    CoverageState cov(*tp, {"foo"});
    for (BranchId b : cov.universe())
      if (coin(rng)) cov.mark_covered(b);
    Objective obj = make_objective(ip, cov, kEps);
    for (int i = 0; i < 200; ++i) CHECK(obj({u(rng)}) >= 0.0);
  }
}

TEST_CASE("snapshot objectives evaluate per the published table") {
  auto tp = square_eq();
  auto ip = instrument(tp, {"foo"});

  // nothing explored: zero everywhere
  CoverageState none(*tp, {"foo"});
  Objective f0 = make_objective(ip, none, kEps);
  for (double x : {-10.0, 0.0, 1.1, 2.0, 500.0}) CHECK(f0({x}) == 0.0);

  // only the equality's false side explored
  CoverageState one(*tp, {"foo"});
  one.mark_infeasible({1, false});
  Objective f1 = make_objective(ip, one, kEps);
  CHECK(f1({0.0}) == 9.0);
  CHECK(f1({2.0}) == 0.0);

  // everything but the first conditional's false side
  CoverageState three(*tp, {"foo"});
  three.mark_covered({0, true});
  three.mark_covered({1, true});
  three.mark_covered({1, false});
  Objective f2 = make_objective(ip, three, kEps);
  CHECK(f2({1.1}) == 0.0);
  CHECK(f2({0.0}) == 1.0 + kEps);  // (x - 1)^2 + eps at x = 0

  // fully explored: the initial accumulator survives
  CoverageState all(*tp, {"foo"});
  for (BranchId b : all.universe()) all.mark_covered(b);
  Objective f3 = make_objective(ip, all, kEps);
  for (double x : {-10.0, 0.0, 1.1, 2.0, 500.0}) CHECK(f3({x}) == 1.0);
}

TEST_CASE("objective snapshots are immune to later coverage") {
  auto tp = square_eq();
  auto ip = instrument(tp, {"foo"});
  CoverageState cov(*tp, {"foo"});
  cov.mark_infeasible({1, false});
  Objective obj = make_objective(ip, cov, kEps);
  double before = obj({0.0});
  CHECK(before == 9.0);
  cov.mark_covered({1, true});
  cov.mark_covered({0, true});
  CHECK(obj({0.0}) == before);
}

TEST_CASE("objective bookkeeping") {
  auto tp = square_eq();
  auto ip = instrument(tp, {"foo"});
  Objective obj = make_objective(ip, CoverageState(*tp, {"foo"}), kEps);
  CHECK(obj.dimension() == 1);
  CHECK(obj.evaluations == 0);
  obj({1.0});
  obj({2.0});
  CHECK(obj.evaluations == 2);
  CHECK(obj.epsilon() == kEps);
}

TEST_CASE("aborting inputs score +inf") {
  auto tp = compile(R"(
double f(double x) {
  if (x > 0) {
    return 1.0 / (x - x);
  }
  return 0.0;
}
)",
                    "f");
  auto ip = instrument(tp, {"f"});
  Objective obj = make_objective(ip, CoverageState(*tp, {"f"}), kEps);
  CHECK(std::isinf(obj({5.0})));
  CHECK(obj({-5.0}) == 0.0);
}

TEST_CASE("rendered source shows the injected penalty updates") {
  auto tp = square_eq();
  auto ip = instrument(tp, {"foo"});
  std::string out = render_instrumented(*ip);
  CHECK(out.find("pen(") != std::string::npos);
  CHECK(out.find("foo") != std::string::npos);
  // one update per instrumented conditional
  std::size_t count = 0, pos = 0;
  while ((pos = out.find("pen(", pos)) != std::string::npos) {
    ++count;
    pos += 4;
  }
  CHECK(count == ip->injections.size());
}
