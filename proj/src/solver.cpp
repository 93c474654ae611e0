#include "graphkirchhoff/solver.hpp"

#include "graphkirchhoff/error.hpp"
#include "graphkirchhoff/parallel.hpp"

#include <Eigen/LU>
#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace graphkirchhoff {

void validate_config(const SolveConfig& cfg) {
  std::vector<std::string> bad;
  if (cfg.seeds < 1) bad.emplace_back("seeds must be >= 1");
  if (!(cfg.step_init > 0.0)) bad.emplace_back("step_init must be > 0");
  if (!(cfg.armijo_c > 0.0 && cfg.armijo_c < 1.0)) bad.emplace_back("armijo_c must lie in (0, 1)");
  if (!(cfg.shrink > 0.0 && cfg.shrink < 1.0)) bad.emplace_back("shrink must lie in (0, 1)");
  if (!(cfg.grad_tol > 0.0)) bad.emplace_back("grad_tol must be > 0");
  if (!(cfg.proj_tol > 0.0)) bad.emplace_back("proj_tol must be > 0");
  if (cfg.max_iters < 1) bad.emplace_back("max_iters must be >= 1");
  if (!(cfg.newton_switch >= 0.0)) bad.emplace_back("newton_switch must be >= 0");
  if (!bad.empty()) {
    std::string msg = "invalid solver configuration:";
    for (const auto& s : bad) msg += "\n  - " + s;
    throw ValidationError(msg);
  }
}

std::string to_string(DescentStatus s) {
  switch (s) {
    case DescentStatus::Converged: return "converged";
    case DescentStatus::MaxIterations: return "max_iterations";
    case DescentStatus::Stalled: return "stalled";
    case DescentStatus::ProjectionFailed: return "projection_failed";
  }
  return "unknown";
}

double residual_max(const WorkingGraph& g, const ModelParams& params, const Eigen::VectorXd& u) {
  return residual(g, params, u).cwiseAbs().maxCoeff();
}

double membership(const WorkingGraph& g, const ModelParams& params, const Eigen::VectorXd& u,
                  Target target) {
  auto rel = [](const Balance<double>& b) { return std::abs(b.value) / std::max(1.0, b.scale); };
  if (target == Target::Nehari) return rel(f_ray(params, ray_moments(g, params, u), 1.0));
  const PairMoments mom = pair_moments(g, params, u);
  return std::max(rel(G_map(params, mom, 1.0, 1.0)), rel(H_map(params, mom, 1.0, 1.0)));
}

namespace {

bool both_signs(const Eigen::VectorXd& u) { return u.maxCoeff() > 0.0 && u.minCoeff() < 0.0; }

Eigen::VectorXd project(const WorkingGraph& g, const ModelParams& params, const Eigen::VectorXd& v,
                        Target target, double tol) {
  if (target == Target::Nehari) {
    ProjectionOptions opts;
    opts.tol = tol;
    return scalar_project(g, params, v, opts).t0 * v;
  }
  PairProjectionOptions opts;
  opts.tol = tol;
  const PairProjection pp = pair_project(g, params, v, opts);
  return pp.s0 * pos_part(v) + pp.t0 * neg_part(v);
}

double level_of(const WorkingGraph& g, const ModelParams& params, const Eigen::VectorXd& u) {
  return energy(g, params, u).total;
}

// Newton iteration on I'(u) = 0 in interior coordinates, followed by a
// re-projection. Returns false if the result is unusable.
bool newton_polish(const WorkingGraph& g, const ModelParams& params, const SolveConfig& cfg,
                   Target target, Eigen::VectorXd& u) {
  const double start_level = level_of(g, params, u);
  Eigen::VectorXd x = u;
  auto grad_interior = [&](const Eigen::VectorXd& v) { return g.restrict(gradient(g, params, v)); };
  Eigen::VectorXd gi = grad_interior(x);
  for (int it = 0; it < 60; ++it) {
    if (residual_max(g, params, x) <= 1e-3 * cfg.grad_tol) break;
    const Eigen::MatrixXd H = hessian(g, params, x);
    const Eigen::VectorXd delta = H.fullPivLu().solve(-gi);
    if (!delta.allFinite()) return false;
    double step = 1.0;
    bool moved = false;
    for (int k = 0; k < 40; ++k, step *= 0.5) {
      const Eigen::VectorXd trial = x + step * g.embed(delta);
      const Eigen::VectorXd gt = grad_interior(trial);
      if (gt.norm() < gi.norm()) {
        x = trial;
        gi = gt;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  if (target == Target::Nodal && !both_signs(x)) return false;
  if (target == Target::Nehari && x.cwiseAbs().maxCoeff() == 0.0) return false;
  try {
    x = project(g, params, x, target, cfg.proj_tol);
  } catch (const std::exception&) {
    return false;
  }
  if (residual_max(g, params, x) > cfg.grad_tol) return false;
  if (membership(g, params, x, target) > cfg.proj_tol) return false;
  const double new_level = level_of(g, params, x);
  if (new_level > start_level + 1e-6 * std::max(1.0, std::abs(start_level))) return false;
  u = x;
  return true;
}

}  // namespace

Trajectory descend(const WorkingGraph& g, const ModelParams& params, const SolveConfig& cfg,
                   const Eigen::VectorXd& u_start, Target target) {
  validate_config(cfg);
  check_function(g, u_start);
  if (target == Target::Nodal && !both_signs(u_start)) {
    throw ValidationError("nodal descent needs a start with both signs");
  }
  Trajectory out;
  Eigen::VectorXd u = project(g, params, u_start, target, cfg.proj_tol);
  double level = level_of(g, params, u);
  out.energies.push_back(level);

  const Eigen::LDLT<Eigen::MatrixXd> riesz(g.interior_stiffness());
  double newton_gate = cfg.newton_switch;

  for (int iter = 0;; ++iter) {
    out.iterations = iter;
    const double res = residual_max(g, params, u);
    if (res <= cfg.grad_tol) {
      out.status = DescentStatus::Converged;
      break;
    }
    if (res <= newton_gate) {
      if (newton_polish(g, params, cfg, target, u)) {
        level = level_of(g, params, u);
        out.energies.push_back(level);
        out.polished = true;
        out.status = DescentStatus::Converged;
        break;
      }
      newton_gate = 0.1 * res;
    }
    if (iter >= cfg.max_iters) {
      out.status = DescentStatus::MaxIterations;
      break;
    }

    const Eigen::VectorXd gi = g.restrict(gradient(g, params, u));
    const Eigen::VectorXd dir = g.embed(riesz.solve(gi));
    const double slope = gi.dot(g.restrict(dir));
    bool accepted = false;
    for (double step = cfg.step_init; step >= 1e-16; step *= cfg.shrink) {
      const Eigen::VectorXd v = u - step * dir;
      if (target == Target::Nodal && !both_signs(v)) continue;
      if (target == Target::Nehari && v.cwiseAbs().maxCoeff() == 0.0) continue;
      Eigen::VectorXd w;
      try {
        w = project(g, params, v, target, cfg.proj_tol);
      } catch (const ConvergenceError&) {
        continue;
      }
      const double trial = level_of(g, params, w);
      if (trial <= level - cfg.armijo_c * step * slope) {
        u = std::move(w);
        level = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (newton_gate < res && newton_polish(g, params, cfg, target, u)) {
        level = level_of(g, params, u);
        out.energies.push_back(level);
        out.polished = true;
        out.status = DescentStatus::Converged;
        break;
      }
      out.status = DescentStatus::Stalled;
      out.message = "step fell below 1e-16";
      break;
    }
    out.energies.push_back(level);
  }
  out.state = u;
  out.residual_max = residual_max(g, params, u);
  return out;
}

Eigen::VectorXd random_start(const WorkingGraph& g, std::uint64_t rng_seed, int index, Target target) {
  std::seed_seq seq{static_cast<std::uint32_t>(rng_seed), static_cast<std::uint32_t>(rng_seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(target)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  const Index n = g.interior_size();
  Eigen::VectorXd z(n);
  for (Index k = 0; k < n; ++k) z(k) = normal(rng);
  if (target == Target::Nodal) {
    std::vector<double> sorted(z.data(), z.data() + n);
    std::sort(sorted.begin(), sorted.end());
    const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    z.array() -= median;
    if (!(z.maxCoeff() > 0.0 && z.minCoeff() < 0.0)) {
      z.setZero();
      z(0) = 1.0;
      z(n - 1) = -1.0;
    }
  }
  return g.embed(z);
}

namespace {

LevelResult minimize(const WorkingGraph& g, const ModelParams& params, const SolveConfig& cfg,
                     Target target) {
  validate_config(cfg);
  require_valid(g, params);
  std::vector<SeedOutcome> seeds(static_cast<std::size_t>(cfg.seeds));
  parallel_for(cfg.seeds, [&](int i) {
    SeedOutcome& s = seeds[static_cast<std::size_t>(i)];
    s.index = i;
    try {
      const Trajectory tr = descend(g, params, cfg, random_start(g, cfg.rng_seed, i, target), target);
      s.state = tr.state;
      s.level = tr.energies.back();
      s.residual_max = tr.residual_max;
      s.membership = membership(g, params, tr.state, target);
      s.iterations = tr.iterations;
      s.polished = tr.polished;
      s.status = to_string(tr.status);
      s.converged = tr.status == DescentStatus::Converged && s.membership <= cfg.proj_tol &&
                    (target == Target::Nehari || both_signs(tr.state));
    } catch (const std::exception& e) {
      s.status = std::string("projection_failed: ") + e.what();
    }
  });

  LevelResult out;
  for (const auto& s : seeds) {
    if (!s.converged) continue;
    if (out.best_seed < 0 || s.level < out.level - 1e-12) {
      out.best_seed = s.index;
      out.level = s.level;
    }
  }
  out.seeds = std::move(seeds);
  if (out.best_seed < 0) {
    std::ostringstream os;
    os << "no seed converged for the " << (target == Target::Nehari ? "ground" : "nodal") << " level";
    for (const auto& s : out.seeds) os << "\n  seed " << s.index << ": " << s.status;
    throw ConvergenceError(os.str());
  }
  const SeedOutcome& best = out.seeds[static_cast<std::size_t>(out.best_seed)];
  out.state = best.state;
  out.residual_max = best.residual_max;
  out.membership = best.membership;
  return out;
}

}  // namespace

LevelResult minimize_ground(const WorkingGraph& g, const ModelParams& params, const SolveConfig& cfg) {
  return minimize(g, params, cfg, Target::Nehari);
}

LevelResult minimize_nodal(const WorkingGraph& g, const ModelParams& params, const SolveConfig& cfg) {
  if (g.interior_size() < 2) {
    throw ValidationError("interior too small: a sign-changing function needs at least 2 interior vertices");
  }
  return minimize(g, params, cfg, Target::Nodal);
}

bool check_doubling(double c_level, double m_level, double tol) { return m_level >= 2.0 * c_level - tol; }

bool SolveReport::doubling_ok() const {
  return ground && nodal && check_doubling(ground->level, nodal->level, doubling_tol);
}

SolveReport solve(const WorkingGraph& g, const ModelParams& params, const SolveConfig& cfg,
                  SolveMode mode) {
  SolveReport out;
  out.mode = mode;
  out.config = cfg;
  if (mode != SolveMode::Ground && g.interior_size() < 2) {
    throw ValidationError("interior too small: a sign-changing function needs at least 2 interior vertices");
  }
  if (mode != SolveMode::Nodal) out.ground = minimize_ground(g, params, cfg);
  if (mode != SolveMode::Ground) out.nodal = minimize_nodal(g, params, cfg);
  return out;
}

}  // namespace graphkirchhoff
