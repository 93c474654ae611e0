#include "fixtures.hpp"
#include "oracles.hpp"

#include "graphkirchhoff/calculus.hpp"
#include "graphkirchhoff/verify.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace graphkirchhoff;
using fixtures::at;
using fixtures::function;

TEST_CASE("validate accepts the three-vertex path") {
  const auto [gr, dom] = fixtures::path(3);
  CHECK(validate(gr, dom).empty());
}

TEST_CASE("validate reports an interior neighbour outside the working set") {
  auto [gr, dom] = fixtures::path(3);
  dom.boundary = {"v0"};
  CHECK(validate(gr, dom).size() == 1);
}

TEST_CASE("validate reports a zero edge weight") {
  auto [gr, dom] = fixtures::path(3);
  gr.edges[0].w = 0.0;
  CHECK(validate(gr, dom).size() == 1);
}

TEST_CASE("validate reports a non-positive measure and overlapping interior/boundary") {
  auto [gr, dom] = fixtures::path(3);
  gr.vertices[1].mu = -1.0;
  CHECK(validate(gr, dom).size() == 1);
  auto [gr2, dom2] = fixtures::path(3);
  dom2.boundary.push_back("v1");
  CHECK_FALSE(validate(gr2, dom2).empty());
}

TEST_CASE("build rejects an invalid graph") {
  auto [gr, dom] = fixtures::path(3);
  gr.edges[0].w = 0.0;
  CHECK_THROWS(WorkingGraph::build(gr, dom));
}

TEST_CASE("edges between boundary vertices are allowed and inert") {
  auto [gr, dom] = fixtures::path(4);
  gr.edges.push_back({"v0", "v3", 2.0});
  CHECK(validate(gr, dom).empty());
  const WorkingGraph g = WorkingGraph::build(gr, dom);
  const auto u = function(g, {{"v1", 0.7}, {"v2", -0.3}});
  const WorkingGraph plain = fixtures::build(fixtures::path(4));
  const auto v = function(plain, {{"v1", 0.7}, {"v2", -0.3}});
  CHECK(dirichlet_form(g, u, u) == doctest::Approx(dirichlet_form(plain, v, v)).epsilon(1e-15));
}

TEST_CASE("P3 indicator: Laplacian, carré du champ, norm") {
  const WorkingGraph g = fixtures::build(fixtures::path(3));
  const auto u = function(g, {{"v1", 1.0}});
  const auto v1 = at(g, "v1");
  CHECK(laplacian(g, u)(v1) == -2.0);
  CHECK(gamma(g, u, u, v1) == 1.0);
  CHECK(gamma(g, u, Eigen::VectorXd::Zero(g.size()), v1) == 0.0);
  CHECK(integrate(g, gradient_sq(g, u), Over::Closure) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(sobolev_norm(g, u) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(integrate(g, u, Over::Interior) == 1.0);
  CHECK(lq_norm(g, u, 2.0) == doctest::Approx(1.0));
  CHECK(lq_norm(g, u, std::numeric_limits<double>::infinity()) == 1.0);
}

TEST_CASE("zero function gives zero Laplacian and norm") {
  const WorkingGraph g = fixtures::build(fixtures::cycle6());
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(g.size());
  CHECK(laplacian(g, z).cwiseAbs().maxCoeff() == 0.0);
  CHECK(sobolev_norm(g, z) == 0.0);
}

TEST_CASE("constant on an interior-only neighbourhood has zero Laplacian") {
  const WorkingGraph g = fixtures::build(fixtures::framed_grid(3));
  Eigen::VectorXd u = Eigen::VectorXd::Zero(g.size());
  for (Index x : g.interior()) u(x) = 2.5;
  CHECK(laplacian(g, u)(at(g, "g2_2")) == 0.0);
}

TEST_CASE("calculus rejects a function that is nonzero on the boundary") {
  const WorkingGraph g = fixtures::build(fixtures::path(3));
  Eigen::VectorXd u = Eigen::VectorXd::Zero(g.size());
  u(at(g, "v0")) = 1.0;
  CHECK_THROWS(laplacian(g, u));
  CHECK_THROWS(laplacian(g, Eigen::VectorXd::Zero(g.size() + 1)));
}

TEST_CASE("norm is absolutely homogeneous") {
  const WorkingGraph g = fixtures::build(fixtures::framed_grid(4));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(g.size());
    for (Index x : g.interior()) u(x) = n(rng);
    const double k = 3 * n(rng);
    const Eigen::VectorXd ku = k * u;
    CHECK(sobolev_norm(g, ku) == doctest::Approx(std::abs(k) * sobolev_norm(g, u)).epsilon(1e-13));
  }
}

TEST_CASE("stated embedding constants") {
  const WorkingGraph g = fixtures::build(fixtures::path(3));
  CHECK(embedding_constant(g, 2.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(embedding_constant(g, std::numeric_limits<double>::infinity()) == 1.0);
  const WorkingGraph g4 = fixtures::build(fixtures::path(3, 4.0));
  CHECK(embedding_constant(g4, 1.0) == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("stated embedding constant is violated by a heavy interior vertex") {
  auto [gr, dom] = fixtures::path(3);
  gr.vertices[1].mu = 4.0;
  const WorkingGraph g = WorkingGraph::build(gr, dom);
  const auto u = function(g, {{"v1", 1.0}});
  const double inf = std::numeric_limits<double>::infinity();
  // ‖u‖_∞ = 1 while K_∞‖u‖ = √2/2.
  CHECK(lq_norm(g, u, inf) == 1.0);
  CHECK(embedding_constant(g, inf) * sobolev_norm(g, u) == doctest::Approx(std::sqrt(2.0) / 2));
  CHECK(lq_norm(g, u, inf) > embedding_constant(g, inf) * sobolev_norm(g, u));
  CHECK(lq_norm(g, u, inf) <= poincare_embedding_constant(g, inf) * sobolev_norm(g, u));
}

TEST_CASE("Poincaré eigenvalue of the unit path matches 2 - 2cos(π/(n+1))") {
  for (int n : {1, 3, 7}) {
    const WorkingGraph g = fixtures::build(fixtures::path(n + 2));
    CHECK(poincare_eigenvalue(g) == doctest::Approx(2 - 2 * std::cos(M_PI / (n + 1))).epsilon(1e-12));
  }
}

TEST_CASE("positive and negative parts") {
  const WorkingGraph g = fixtures::build(fixtures::path(4));
  const auto u = function(g, {{"v1", 1.0}, {"v2", -1.0}});
  CHECK(pos_part(u) == function(g, {{"v1", 1.0}}));
  CHECK(neg_part(u) == function(g, {{"v2", -1.0}}));
  const auto w = function(g, {{"v1", 1.0}, {"v2", 2.0}});
  CHECK(neg_part(w).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cross terms on the opposite-sign and decoupled fixtures") {
  const WorkingGraph p4 = fixtures::build(fixtures::path(4));
  const auto ct = cross_terms(p4, function(p4, {{"v1", 1.0}, {"v2", -1.0}}));
  CHECK(ct.mp == -1.0);
  CHECK(ct.pm == -1.0);
  const WorkingGraph p5 = fixtures::build(fixtures::path(5));
  const auto ct5 = cross_terms(p5, function(p5, {{"v1", 1.0}, {"v2", 0.0}, {"v3", -1.0}}));
  CHECK(ct5.mp == 0.0);
  CHECK(ct5.pm == 0.0);
}

namespace {

Eigen::VectorXd random_interior(const WorkingGraph& g, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(g.size());
  for (Index x : g.interior()) u(x) = n(rng);
  return u;
}

}  // namespace

TEST_CASE("property: norm splits over sign parts with the cross terms") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = random_instance(rng, 3, 40);
    const WorkingGraph g = inst.working();
    const auto up = pos_part(inst.u), um = neg_part(inst.u);
    const double lhs = dirichlet_form(g, inst.u, inst.u);
    const double rhs = dirichlet_form(g, up, up) + dirichlet_form(g, um, um) - cross_terms(g, inst.u).sum();
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + std::abs(lhs)));
  }
}

TEST_CASE("property: parts recombine and have disjoint support") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance inst = random_instance(rng, 3, 40);
    const auto up = pos_part(inst.u), um = neg_part(inst.u);
    CHECK(up + um == inst.u);
    CHECK(up.cwiseProduct(um).cwiseAbs().maxCoeff() == 0.0);
    CHECK(up.minCoeff() >= 0.0);
    CHECK(um.maxCoeff() <= 0.0);
  }
}

TEST_CASE("property: Green's identity") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = random_instance(rng, 3, 40);
    const WorkingGraph g = inst.working();
    const Eigen::VectorXd phi = random_interior(g, rng);
    const Eigen::VectorXd lap_phi = laplacian(g, inst.u).cwiseProduct(phi);
    Eigen::VectorXd gam(g.size());
    for (Index x = 0; x < g.size(); ++x) gam(x) = gamma(g, inst.u, phi, x);
    const double lhs = integrate(g, lap_phi, Over::Interior);
    const double rhs = integrate(g, gam, Over::Closure);
    const double scale = std::abs(lhs) + std::abs(rhs);
    CHECK(std::abs(lhs + rhs) <= 1e-10 * (1 + scale));
  }
}

TEST_CASE("property: norm squared agrees with the edge-sum oracle") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance inst = random_instance(rng, 3, 40);
    const WorkingGraph g = inst.working();
    oracle::Values vals;
    for (Index x = 0; x < g.size(); ++x) vals[g.id(x)] = inst.u(x);
    const double n = sobolev_norm(g, inst.u);
    CHECK(n * n == doctest::Approx(oracle::norm2(inst.graph, vals)).epsilon(1e-12));
  }
}

TEST_CASE("property: the corrected embedding constant bounds every L^q norm") {
  std::mt19937_64 rng(15);
  const double qs[] = {1.0, 2.0, 4.0, std::numeric_limits<double>::infinity()};
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = random_instance(rng, 3, 40);
    const WorkingGraph g = inst.working();
    const double n = sobolev_norm(g, inst.u);
    for (double q : qs) CHECK(lq_norm(g, inst.u, q) <= poincare_embedding_constant(g, q) * n * (1 + 1e-12));
  }
}
