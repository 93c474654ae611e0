#include "fixtures.hpp"

#include "graphkirchhoff/io.hpp"
#include "graphkirchhoff/verify.hpp"

#include <doctest.h>

#include <cmath>
#include <queue>
#include <random>
#include <set>

using namespace graphkirchhoff;

namespace {

bool connected(const WorkingGraph& g) {
  std::vector<bool> seen(static_cast<std::size_t>(g.size()), false);
  std::queue<Index> todo;
  todo.push(0);
  seen[0] = true;
  Index count = 1;
  while (!todo.empty()) {
    const Index x = todo.front();
    todo.pop();
    for (const auto& nb : g.neighbors(x)) {
      if (!seen[static_cast<std::size_t>(nb.index)]) {
        seen[static_cast<std::size_t>(nb.index)] = true;
        ++count;
        todo.push(nb.index);
      }
    }
  }
  return count == g.size();
}

}  // namespace

TEST_CASE("generated instances are valid and within their ranges") {
  std::mt19937_64 rng(41);
  for (int draw = 0; draw < 1000; ++draw) {
    const Instance inst = random_instance(rng, 3, 40);
    REQUIRE(validate(inst.graph, inst.domain).empty());
    const WorkingGraph g = inst.working();
    CHECK(validate_params(g, inst.params).empty());
    CHECK(g.size() >= 3);
    CHECK(g.size() <= 40);
    CHECK(g.interior_size() >= 1);
    CHECK(!g.boundary().empty());
    CHECK(connected(g));
    CHECK(inst.params.p > 4.0);
    CHECK(inst.params.p <= 9.0);
    CHECK(inst.params.r >= 1.0);
    CHECK(inst.params.r <= 6.0);
    CHECK(inst.params.power_exponent() > 1.0);
    CHECK(inst.params.power_exponent() <= inst.params.p);
    CHECK(g.mu().minCoeff() >= 0.1);
    CHECK(g.mu().maxCoeff() <= 4.0);
    for (const auto& e : inst.graph.edges) {
      CHECK(e.w >= 0.1);
      CHECK(e.w <= 4.0);
    }
    for (Index x : g.boundary()) CHECK(inst.u(x) == 0.0);
  }
}

TEST_CASE("generator is deterministic for a fixed seed") {
  std::mt19937_64 a(99), b(99);
  for (int i = 0; i < 20; ++i) CHECK(io::to_json(random_instance(a)) == io::to_json(random_instance(b)));
}

TEST_CASE("closed-form positivity and monotonicity checks") {
  CHECK(appendix1_check(2.0, 5, 1) == doctest::Approx(1 - 32 + 5 * 32 * std::log(2.0)).epsilon(1e-13));
  CHECK(appendix1_check(2.0, 5, 1) == doctest::Approx(79.90).epsilon(1e-4));
  CHECK(appendix1_check(0.5, 5, 2) == doctest::Approx(2 * (1 - 1.0 / 32) + 5.0 / 32 * std::log(0.25)).epsilon(1e-13));
  CHECK(appendix1_check(0.5, 5, 2) == doctest::Approx(1.72).epsilon(1e-3));
  CHECK(appendix1_check(1.0, 7, 3) == 0.0);
  CHECK(appendix2_check(2.0, 1.0, 2.0));
  CHECK(appendix2_check(0.5, 1.0, 2.0));
}

TEST_CASE("property: positivity and monotonicity hold on random samples") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> tau(0.01, 10.0), p(2.0, 12.0), r(1.0, 8.0), x(0.01, 10.0);
  for (int i = 0; i < 10000; ++i) {
    const double t = tau(rng);
    if (t != 1.0) CHECK(appendix1_check(t, p(rng), r(rng)) > 0.0);
    double x1 = x(rng), x2 = x(rng);
    if (x1 > x2) std::swap(x1, x2);
    const double base = tau(rng);
    if (x1 < x2 && base != 1.0) CHECK(appendix2_check(base, x1, x2));
  }
}

TEST_CASE("suite rejects a non-positive trial count") {
  CHECK_THROWS_AS(run_suite(0, 1), std::invalid_argument);
}

TEST_CASE("suite passes on a correct build") {
  const PropertyReport rep = run_suite(100, 42);
  CHECK(rep.failures() == 0);
  CHECK(rep.counterexamples.empty());
  CHECK(rep.trials == 100);
  std::set<std::string> names;
  for (const auto& c : rep.checks) {
    names.insert(c.name);
    CHECK(c.evaluations > 0);
  }
  for (const char* n : {"decomposition_energy", "master_inequality", "ray_inequality", "green_identity",
                        "gradient_finite_difference", "embedding", "pair_uniqueness", "appendix1_positive"})
    CHECK(names.count(n) == 1);
}

TEST_CASE("suite is deterministic") {
  const auto a = io::to_json(run_suite(10, 5));
  const auto b = io::to_json(run_suite(10, 5));
  auto strip = [](io::json j) {
    j.erase("elapsed_seconds");
    return j;
  };
  CHECK(strip(a) == strip(b));
}

namespace {

SuiteOptions flipped_cross_terms() {
  SuiteOptions opts;
  opts.projections = false;
  opts.cross_terms_override = [](const WorkingGraph& g, const Eigen::VectorXd& u) {
    auto ct = cross_terms(g, u);
    ct.mp = -ct.mp;
    ct.pm = -ct.pm;
    return ct;
  };
  return opts;
}

}  // namespace

TEST_CASE("a sign bug in the cross terms is caught with a counterexample") {
  const SuiteOptions opts = flipped_cross_terms();
  const PropertyReport rep = run_suite(30, 3, opts);
  CHECK(rep.check("decomposition_energy").failures > 0);
  CHECK(rep.failures() > 0);
  bool found = false;
  for (const auto& cx : rep.counterexamples) found = found || cx.check == "decomposition_energy";
  CHECK(found);
}

TEST_CASE("a serialised counterexample reproduces its violation") {
  const SuiteOptions opts = flipped_cross_terms();
  const PropertyReport rep = run_suite(30, 3, opts);
  REQUIRE(!rep.counterexamples.empty());
  CHECK(io::to_json(rep)["counterexamples"].size() == rep.counterexamples.size());
  for (const auto& cx : rep.counterexamples) {
    const Instance back = io::parse_instance(io::json::parse(io::to_json(cx.instance).dump()));
    const auto stats = run_checks(back, cx.check_seed, opts);
    bool matched = false;
    for (const auto& s : stats) {
      if (s.name == cx.check) {
        CHECK(s.failures > 0);
        CHECK(s.worst == cx.violation);
        matched = true;
      }
    }
    CHECK(matched);
  }
}
