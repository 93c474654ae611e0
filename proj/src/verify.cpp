#include "graphkirchhoff/verify.hpp"

#include "graphkirchhoff/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>

namespace graphkirchhoff {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::mt19937_64 derived(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b)};
  return std::mt19937_64(seq);
}

}  // namespace

Instance random_instance(std::mt19937_64& rng, int min_size, int max_size) {
  min_size = std::clamp(min_size, 3, 64);
  max_size = std::clamp(max_size, min_size, 64);
  const int n = uniform_int(rng, min_size, max_size);
  auto name = [](int i) { return "x" + std::to_string(i); };

  Instance inst;
  for (int i = 0; i < n; ++i) inst.graph.vertices.push_back({name(i), uniform(rng, 0.1, 4.0)});
  std::set<std::pair<int, int>> seen;
  auto add_edge = [&](int i, int j) {
    if (i == j || !seen.insert({std::min(i, j), std::max(i, j)}).second) return;
    inst.graph.edges.push_back({name(i), name(j), uniform(rng, 0.1, 4.0)});
  };
  for (int i = 1; i < n; ++i) add_edge(i, uniform_int(rng, 0, i - 1));
  const int extra = uniform_int(rng, 0, n);
  for (int e = 0; e < extra; ++e) add_edge(uniform_int(rng, 0, n - 1), uniform_int(rng, 0, n - 1));

  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), rng);
  const int nb = uniform_int(rng, 1, std::max(1, n / 3));
  std::vector<bool> boundary(static_cast<std::size_t>(n), false);
  for (int k = 0; k < nb; ++k) boundary[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = true;
  std::vector<int> interior;
  for (int i = 0; i < n; ++i) {
    if (boundary[static_cast<std::size_t>(i)]) {
      inst.domain.boundary.push_back(name(i));
    } else {
      inst.domain.interior.push_back(name(i));
      interior.push_back(i);
    }
  }
  // Every boundary vertex needs an interior neighbour.
  for (int i = 0; i < n; ++i) {
    if (!boundary[static_cast<std::size_t>(i)]) continue;
    bool linked = false;
    for (const auto& [x, y] : seen) {
      const int other = x == i ? y : (y == i ? x : -1);
      if (other >= 0 && !boundary[static_cast<std::size_t>(other)]) linked = true;
    }
    if (!linked) add_edge(i, interior[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(interior.size()) - 1))]);
  }

  const WorkingGraph g = inst.working();
  ModelParams& prm = inst.params;
  prm.a = uniform(rng, 0.1, 4.0);
  prm.b = uniform(rng, 0.0, 4.0);
  prm.lambda = uniform(rng, 0.0, 4.0);
  prm.p = 9.0 - uniform(rng, 0.0, 5.0);
  prm.r = uniform(rng, 1.0, 6.0);
  prm.m_exp = uniform_int(rng, 1, 4);
  const int kmin = prm.m_exp / 2 + 1;
  const int kmax = static_cast<int>(std::floor(prm.p * prm.m_exp / 2.0));
  prm.k_exp = uniform_int(rng, kmin, std::max(kmin, kmax));
  prm.Q = Eigen::VectorXd::Zero(g.size());
  prm.g = Eigen::VectorXd::Zero(g.size());
  inst.u = Eigen::VectorXd::Zero(g.size());
  std::normal_distribution<double> normal;
  for (Index x : g.interior()) {
    prm.Q(x) = uniform(rng, 0.1, 4.0);
    prm.g(x) = uniform(rng, 0.1, 4.0);
    inst.u(x) = normal(rng);
  }
  return inst;
}

double appendix1_check(double tau, double p, double r) {
  if (!(tau > 0.0)) throw std::invalid_argument("appendix1_check needs tau > 0");
  if (!(p > 2.0)) throw std::invalid_argument("appendix1_check needs p > 2");
  if (!(r >= 1.0)) throw std::invalid_argument("appendix1_check needs r >= 1");
  const double x = p * std::log(tau);
  return r * (x * std::exp(x) - std::expm1(x));
}

bool appendix2_check(double base, double x1, double x2) {
  if (!(base > 0.0) || base == 1.0) throw std::invalid_argument("appendix2_check needs base > 0, base != 1");
  if (!(x1 > 0.0 && x1 < x2)) throw std::invalid_argument("appendix2_check needs 0 < x1 < x2");
  const double la = std::log(base);
  return -std::expm1(x1 * la) / x1 > -std::expm1(x2 * la) / x2;
}

long PropertyReport::failures() const {
  long n = 0;
  for (const auto& c : checks) {
    if (!c.informational) n += c.failures;
  }
  return n;
}

const CheckStat& PropertyReport::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no check named " + name);
}

namespace {

struct CheckDef {
  const char* name;
  double threshold;
  bool informational;
};

// Normalized violations: equalities report |value| / max(1, scale),
// inequalities −value / max(1, scale); the embedding checks report the ratio
// of the two sides minus one, the scalar facts a 0/1 indicator.
constexpr std::array kChecks = {
    CheckDef{"decomposition_energy", 1e-10, false},
    CheckDef{"decomposition_deriv_plus", 1e-10, false},
    CheckDef{"decomposition_deriv_minus", 1e-10, false},
    CheckDef{"master_inequality", 1e-10, false},
    CheckDef{"master_equality_at_1_1", 1e-10, false},
    CheckDef{"ray_inequality", 1e-10, false},
    CheckDef{"ray_equality_at_1", 1e-10, false},
    CheckDef{"green_identity", 1e-10, false},
    CheckDef{"gradient_finite_difference", 1e-6, false},
    CheckDef{"embedding", 0.0, false},
    CheckDef{"embedding_stated_constant", 0.0, true},
    CheckDef{"scalar_projection_membership", 1e-10, false},
    CheckDef{"scalar_projection_bracket", 0.0, false},
    CheckDef{"ray_maximality", 1e-10, false},
    CheckDef{"pair_projection_membership", 1e-10, false},
    CheckDef{"pair_maximality", 1e-10, false},
    CheckDef{"pair_uniqueness", 1e-9, false},
    CheckDef{"appendix1_positive", 0.0, false},
    CheckDef{"appendix1_zero_at_1", 0.0, false},
    CheckDef{"appendix2_decreasing", 0.0, false},
};

constexpr std::array kMasterGrid = {0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0};
constexpr std::array kEmbeddingExponents = {1.0, 2.0, 4.0, std::numeric_limits<double>::infinity()};

std::size_t index_of(const std::string& name) {
  for (std::size_t i = 0; i < kChecks.size(); ++i) {
    if (name == kChecks[i].name) return i;
  }
  throw std::logic_error("unknown check " + name);
}

class Recorder {
 public:
  Recorder() {
    for (const auto& def : kChecks) {
      CheckStat s;
      s.name = def.name;
      s.threshold = def.threshold;
      s.informational = def.informational;
      stats_.push_back(s);
    }
  }

  void record(const char* name, double violation, bool failed) {
    CheckStat& s = stats_[index_of(name)];
    ++s.evaluations;
    if (failed) ++s.failures;
    if (std::isnan(violation)) violation = std::numeric_limits<double>::infinity();
    s.worst = std::max(s.worst, violation);
  }

  void record(const char* name, double violation) {
    record(name, violation, !(violation <= stats_[index_of(name)].threshold));
  }

  void equality(const char* name, const Balance<double>& b) {
    record(name, std::abs(b.value) / std::max(1.0, b.scale));
  }

  void inequality(const char* name, const Balance<double>& b) {
    record(name, -b.value / std::max(1.0, b.scale));
  }

  std::vector<CheckStat> take() { return std::move(stats_); }

 private:
  std::vector<CheckStat> stats_;
};

double relative_gap(double x, double ref) { return std::abs(x - ref) / std::max(1.0, std::abs(ref)); }

void check_projections(const WorkingGraph& g, const ModelParams& prm, const Eigen::VectorXd& u,
                       Recorder& rec) {
  try {
    const ScalarProjection sp = scalar_project(g, prm, u);
    rec.record("scalar_projection_membership", sp.residual_f / std::max(1.0, sp.scale));
    rec.record("scalar_projection_bracket", sp.t_lo < sp.t0 && sp.t0 < sp.t_hi ? 0.0 : 1.0);
    const auto excess = ray_maximality_excess(g, prm, u, sp.t0);
    rec.record("ray_maximality", excess.value / std::max(1.0, excess.scale));
  } catch (const std::exception&) {
    rec.record("scalar_projection_membership", std::numeric_limits<double>::infinity());
  }

  if (!(u.maxCoeff() > 0.0 && u.minCoeff() < 0.0)) return;
  try {
    const PairProjection pp = pair_project(g, prm, u);
    rec.record("pair_projection_membership", std::max(pp.residual_G / std::max(1.0, pp.scale_G),
                                                      pp.residual_H / std::max(1.0, pp.scale_H)));
    const auto excess = pair_maximality_excess(g, prm, u, pp);
    rec.record("pair_maximality", excess.value / std::max(1.0, excess.scale));

    const double lo = std::min(pp.s0, pp.t0), hi = std::max(pp.s0, pp.t0);
    double worst = 0.0;
    for (int k = 0; k < 8; ++k) {
      PairProjectionOptions opts;
      opts.initial_box = std::pair{lo * std::ldexp(1.0, -(k + 1)), hi * std::ldexp(1.0, k + 1) * (1.0 + 0.37 * k)};
      const PairProjection other = pair_project(g, prm, u, opts);
      worst = std::max({worst, relative_gap(other.s0, pp.s0), relative_gap(other.t0, pp.t0)});
    }
    rec.record("pair_uniqueness", worst);
  } catch (const std::exception&) {
    rec.record("pair_projection_membership", std::numeric_limits<double>::infinity());
  }
}

}  // namespace

std::vector<CheckStat> run_checks(const Instance& inst, std::uint64_t check_seed, const SuiteOptions& opts) {
  const WorkingGraph g = inst.working();
  const ModelParams& prm = inst.params;
  const Eigen::VectorXd& u = inst.u;
  std::mt19937_64 rng = derived(check_seed, 0, 0);
  std::normal_distribution<double> normal;
  auto random_function = [&] {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(g.size());
    for (Index x : g.interior()) v(x) = normal(rng);
    return v;
  };
  Recorder rec;

  const CrossTerms<double> ct = opts.cross_terms_override ? opts.cross_terms_override(g, u) : cross_terms(g, u);
  const auto gaps = decomposition_gaps(g, prm, u, ct);
  rec.equality("decomposition_energy", gaps.energy);
  rec.equality("decomposition_deriv_plus", gaps.deriv_plus);
  rec.equality("decomposition_deriv_minus", gaps.deriv_minus);

  for (double s : kMasterGrid) {
    for (double t : kMasterGrid) rec.inequality("master_inequality", master_surplus(g, prm, u, s, t));
  }
  rec.equality("master_equality_at_1_1", master_surplus(g, prm, u, 1.0, 1.0));
  for (double t : kMasterGrid) rec.inequality("ray_inequality", ray_surplus(g, prm, u, t));
  rec.equality("ray_equality_at_1", ray_surplus(g, prm, u, 1.0));

  {
    const Eigen::VectorXd phi = random_function();
    const Eigen::VectorXd lap = laplacian(g, u);
    double lhs = 0.0, scale = 0.0;
    for (Index x : g.interior()) {
      const double term = g.mu()(x) * lap(x) * phi(x);
      lhs += term;
      scale += std::abs(term);
    }
    for (Index x = 0; x < g.size(); ++x) {
      const double term = g.mu()(x) * gamma(g, u, phi, x);
      lhs += term;
      scale += std::abs(term);
    }
    rec.record("green_identity", std::abs(lhs) / (1.0 + scale));
  }

  {
    using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
    const long double h = 1e-5L;
    const LVec ul = u.cast<long double>();
    for (int k = 0; k < 20; ++k) {
      Eigen::VectorXd v = random_function();
      v.normalize();
      const LVec vl = v.cast<long double>();
      const LVec up = ul + h * vl;
      const LVec um = ul - h * vl;
      const long double fd = (energy(g, prm, up).total - energy(g, prm, um).total) / (2.0L * h);
      const double an = gateaux(g, prm, u, v);
      rec.record("gradient_finite_difference",
                 static_cast<double>(std::abs(fd - an) / std::max(1.0L, std::abs(static_cast<long double>(an)))));
    }
  }

  {
    const double norm = sobolev_norm(g, u);
    for (double q : kEmbeddingExponents) {
      const double lhs = lq_norm(g, u, q);
      const double bound = poincare_embedding_constant(g, q) * norm;
      rec.record("embedding", lhs / bound - 1.0, lhs > bound);
      const double stated = embedding_constant(g, q) * norm;
      rec.record("embedding_stated_constant", lhs / stated - 1.0, lhs > stated);
    }
  }

  if (opts.projections) check_projections(g, prm, u, rec);

  for (int k = 0; k < 20; ++k) {
    double tau = std::exp(uniform(rng, -7.0, 7.0));
    if (tau == 1.0) tau = 2.0;
    const double p = uniform(rng, 2.0, 12.0) + 1e-9;
    const double r = uniform(rng, 1.0, 6.0);
    const double v = appendix1_check(tau, p, r);
    rec.record("appendix1_positive", v > 0.0 ? 0.0 : 1.0);
  }
  rec.record("appendix1_zero_at_1", appendix1_check(1.0, prm.p, prm.r) == 0.0 ? 0.0 : 1.0);
  for (int k = 0; k < 20; ++k) {
    double base = std::exp(uniform(rng, -3.0, 3.0));
    if (std::abs(std::log(base)) < 0.05) base = 2.0;
    const double x1 = std::exp(uniform(rng, -4.0, 2.0));
    const double x2 = x1 * (1.0 + std::exp(uniform(rng, -6.0, 1.0)));
    rec.record("appendix2_decreasing", appendix2_check(base, x1, x2) ? 0.0 : 1.0);
  }
  return rec.take();
}

PropertyReport run_suite(int trials, std::uint64_t seed, const SuiteOptions& opts) {
  if (trials < 1) throw std::invalid_argument("run_suite needs trials >= 1");
  const auto start = std::chrono::steady_clock::now();

  struct TrialOutcome {
    Instance instance;
    std::uint64_t check_seed = 0;
    std::vector<CheckStat> stats;
  };
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
  parallel_for(trials, [&](int i) {
    auto& o = outcomes[static_cast<std::size_t>(i)];
    std::mt19937_64 rng = derived(seed, static_cast<std::uint64_t>(i), 1);
    o.instance = random_instance(rng, opts.min_size, opts.max_size);
    o.check_seed = rng();
    o.stats = run_checks(o.instance, o.check_seed, opts);
  });

  PropertyReport report;
  report.seed = seed;
  report.trials = trials;
  for (const auto& def : kChecks) {
    CheckStat s;
    s.name = def.name;
    s.threshold = def.threshold;
    s.informational = def.informational;
    report.checks.push_back(s);
  }
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    const auto& o = outcomes[t];
    for (std::size_t c = 0; c < kChecks.size(); ++c) {
      const CheckStat& got = o.stats[c];
      CheckStat& agg = report.checks[c];
      agg.evaluations += got.evaluations;
      agg.failures += got.failures;
      agg.worst = std::max(agg.worst, got.worst);
      if (got.failures > 0 && !got.informational) {
        const bool first = std::none_of(report.counterexamples.begin(), report.counterexamples.end(),
                                        [&](const Counterexample& ce) { return ce.check == got.name; });
        if (first) {
          report.counterexamples.push_back({got.name, static_cast<int>(t), o.check_seed, got.worst, o.instance});
        }
      }
    }
  }
  report.elapsed = std::chrono::steady_clock::now() - start;
  return report;
}

}  // namespace graphkirchhoff
