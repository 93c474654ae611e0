#include "fixtures.hpp"
#include "oracles.hpp"

#include "graphkirchhoff/error.hpp"
#include "graphkirchhoff/solver.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>

using namespace graphkirchhoff;
using fixtures::function;

namespace {

// c on P3 under the basic parameters: I(t e_{v1}) = t² + t⁵/25 − (t⁵/5) ln t
// maximised over t.
double p3_level() {
  const double t = oracle::bisect([](double s) { return 2.0 - s * s * s * std::log(s); }, 1.0, 4.0);
  return t * t + std::pow(t, 5) / 25 - std::pow(t, 5) / 5 * std::log(t);
}

SolveConfig quick(int seeds = 4) {
  SolveConfig cfg;
  cfg.seeds = seeds;
  return cfg;
}

}  // namespace

TEST_CASE("P3 ground level matches the one-dimensional closed form") {
  const WorkingGraph g = fixtures::build(fixtures::path(3));
  const auto pr = fixtures::basic(g);
  const auto res = minimize_ground(g, pr, quick());
  CHECK(std::abs(res.level - p3_level()) <= 1e-8);
  CHECK(res.level == doctest::Approx(oracle::golden_max([&](double t) {
          return energy(g, pr, (t * function(g, {{"v1", 1.0}})).eval()).total;
        }, 0.0, 4.0)).epsilon(1e-10));
  CHECK(res.residual_max <= 1e-8);
  CHECK(res.membership <= 1e-10);
  for (const auto& s : res.seeds) CHECK(s.converged);
}

TEST_CASE("increasing a raises the ground level") {
  const WorkingGraph g = fixtures::build(fixtures::path(5));
  auto pr = fixtures::kirchhoff(g);
  const double c1 = minimize_ground(g, pr, quick()).level;
  pr.a *= 2;
  const double c2 = minimize_ground(g, pr, quick()).level;
  CHECK(c2 > c1);
}

TEST_CASE("check_doubling") {
  CHECK(check_doubling(1.0, 2.5, 1e-8));
  CHECK_FALSE(check_doubling(1.0, 1.9, 1e-8));
  CHECK(check_doubling(1.0, 2.0 - 1e-9, 1e-8));
}

TEST_CASE("descent energies do not increase") {
  const WorkingGraph g = fixtures::build(fixtures::framed_grid(3));
  const auto pr = fixtures::kirchhoff(g);
  for (Target target : {Target::Nehari, Target::Nodal}) {
    for (int seed = 0; seed < 3; ++seed) {
      const Trajectory tr = descend(g, pr, SolveConfig{}, random_start(g, 9, seed, target), target);
      CHECK(tr.status == DescentStatus::Converged);
      const std::size_t armijo_steps = tr.energies.size() - (tr.polished ? 1 : 0);
      for (std::size_t k = 1; k < armijo_steps; ++k) CHECK(tr.energies[k] <= tr.energies[k - 1]);
      // The Newton polish is accepted only within 1e-6 relative of the last iterate.
      if (tr.polished && tr.energies.size() >= 2) {
        const double last = tr.energies[tr.energies.size() - 2];
        CHECK(tr.energies.back() <= last + 1e-6 * std::max(1.0, std::abs(last)));
      }
    }
  }
}

TEST_CASE("descent from a critical point stops immediately") {
  const WorkingGraph g = fixtures::build(fixtures::path(3));
  const auto pr = fixtures::basic(g);
  const auto start = scalar_project(g, pr, function(g, {{"v1", 1.0}}));
  const Eigen::VectorXd u = start.t0 * function(g, {{"v1", 1.0}});
  const Trajectory tr = descend(g, pr, SolveConfig{}, u, Target::Nehari);
  CHECK(tr.energies.size() == 1);
  CHECK(tr.iterations == 0);
  CHECK(tr.status == DescentStatus::Converged);
}

TEST_CASE("decoupled candidate bounds the nodal level by twice the one-vertex level") {
  const WorkingGraph g = fixtures::build(fixtures::path(5));
  const auto pr = fixtures::basic(g);
  const auto u = function(g, {{"v1", 1.0}, {"v3", -1.0}});
  const auto pp = pair_project(g, pr, u);
  const Eigen::VectorXd cand = pp.s0 * pos_part(u) + pp.t0 * neg_part(u);
  CHECK(energy(g, pr, cand).total == doctest::Approx(2 * p3_level()).epsilon(1e-10));
  CHECK(membership(g, pr, cand, Target::Nodal) <= 1e-10);
  const auto nodal = minimize_nodal(g, pr, quick(8));
  CHECK(nodal.level <= energy(g, pr, cand).total + 1e-8);
}

TEST_CASE("solve reports doubling on small fixtures") {
  for (const auto& fx : {fixtures::path(4), fixtures::cycle6(), fixtures::star5()}) {
    const WorkingGraph g = fixtures::build(fx);
    const auto report = solve(g, fixtures::basic(g), quick(), SolveMode::Both);
    CHECK(report.doubling_ok());
    CHECK(report.ground->residual_max <= 1e-8);
    CHECK(report.nodal->residual_max <= 1e-8);
    CHECK(report.ratio() >= 2.0 - 1e-8);
  }
}

TEST_CASE("results do not depend on the worker count") {
  const WorkingGraph g = fixtures::build(fixtures::cycle6());
  const auto pr = fixtures::kirchhoff(g);
  ::setenv("GRAPHKIRCHHOFF_THREADS", "1", 1);
  const auto one = solve(g, pr, quick(6), SolveMode::Both);
  ::setenv("GRAPHKIRCHHOFF_THREADS", "4", 1);
  const auto four = solve(g, pr, quick(6), SolveMode::Both);
  ::unsetenv("GRAPHKIRCHHOFF_THREADS");
  CHECK(one.c_level() == four.c_level());
  CHECK(one.m_level() == four.m_level());
  CHECK(one.ground->best_seed == four.ground->best_seed);
  CHECK(one.nodal->state == four.nodal->state);
}

TEST_CASE("nodal minimisation needs two interior vertices") {
  const WorkingGraph g = fixtures::build(fixtures::path(3));
  CHECK_THROWS_AS(minimize_nodal(g, fixtures::basic(g), quick()), ValidationError);
}

TEST_CASE("configuration is validated") {
  const WorkingGraph g = fixtures::build(fixtures::path(4));
  SolveConfig cfg;
  cfg.seeds = 0;
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg = SolveConfig{};
  cfg.shrink = 1.5;
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg = SolveConfig{};
  cfg.grad_tol = -1;
  CHECK_THROWS_AS(minimize_ground(g, fixtures::basic(g), cfg), ValidationError);
}

TEST_CASE("random nodal starts change sign") {
  const WorkingGraph g = fixtures::build(fixtures::framed_grid(4));
  for (int i = 0; i < 32; ++i) {
    const Eigen::VectorXd u = random_start(g, 0, i, Target::Nodal);
    CHECK(u.maxCoeff() > 0.0);
    CHECK(u.minCoeff() < 0.0);
  }
  CHECK(random_start(g, 1, 2, Target::Nehari) == random_start(g, 1, 2, Target::Nehari));
}
