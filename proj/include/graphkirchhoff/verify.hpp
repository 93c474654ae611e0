#pragma once

// Randomized property suite: every identity and inequality satisfied by the
// energy, its derivative, the projections and two scalar facts is evaluated
// on random instances and its worst violation reported.

#include "graphkirchhoff/nehari.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace graphkirchhoff {

struct Instance {
  WeightedGraph graph;
  Domain domain;
  ModelParams params;  // Q and g indexed like WorkingGraph::build(graph, domain)
  Eigen::VectorXd u;   // same indexing, zero on the boundary

  WorkingGraph working() const { return WorkingGraph::build(graph, domain); }
};

// Connected random working graph with min_size..max_size vertices (clamped
// to [3, 64]), nonempty interior and boundary, μ and w in [0.1, 4], params
// inside their constraints (p ∈ (4, 9], r ∈ [1, 6], 1 < 2k/m ≤ p), Q and g in
// [0.1, 4], and u standard normal on the interior.
Instance random_instance(std::mt19937_64& rng, int min_size = 3, int max_size = 64);

// r(1 − τ^p) + p τ^p ln(τ^r), evaluated as r·(x eˣ − expm1(x)) with x = p ln τ
// so that it stays accurate near τ = 1 (where it is exactly 0).
// Throws std::invalid_argument unless τ > 0, p > 2, r ≥ 1.
double appendix1_check(double tau, double p, double r);

// (1 − base^{x1})/x1 > (1 − base^{x2})/x2.
// Throws std::invalid_argument unless 0 < x1 < x2, base > 0, base ≠ 1.
bool appendix2_check(double base, double x1, double x2);

struct CheckStat {
  std::string name;
  long evaluations = 0;
  long failures = 0;
  double worst = -std::numeric_limits<double>::infinity();  // largest normalized violation seen
  double threshold = 0.0;  // a failure is worst > threshold
  bool informational = false;  // reported, never fails the suite
};

struct Counterexample {
  std::string check;
  int trial = 0;
  std::uint64_t check_seed = 0;  // seeds the per-trial probes (directions, grids, samples)
  double violation = 0.0;
  Instance instance;
};

struct PropertyReport {
  std::vector<CheckStat> checks;
  std::vector<Counterexample> counterexamples;  // first failure per check
  std::uint64_t seed = 0;
  int trials = 0;
  std::chrono::duration<double> elapsed{};

  long failures() const;  // excluding informational checks
  const CheckStat& check(const std::string& name) const;
};

using CrossTermsFn = std::function<CrossTerms<double>(const WorkingGraph&, const Eigen::VectorXd&)>;

struct SuiteOptions {
  int min_size = 3;
  int max_size = 40;
  bool projections = true;
  // Replaces cross_terms() in the decomposition check (mutation testing).
  CrossTermsFn cross_terms_override;
};

// Runs every check on `trials` random instances. Trials run in parallel with
// streams derived from (seed, trial), so the report does not depend on the
// worker count. Throws std::invalid_argument if trials < 1.
PropertyReport run_suite(int trials, std::uint64_t seed, const SuiteOptions& opts = {});

// Re-evaluates every check on one instance with the probes seeded by
// check_seed; a stored counterexample reproduces its violation exactly.
std::vector<CheckStat> run_checks(const Instance& inst, std::uint64_t check_seed,
                                  const SuiteOptions& opts = {});

}  // namespace graphkirchhoff
