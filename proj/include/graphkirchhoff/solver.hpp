#pragma once

// Multi-start minimization of I over 𝒩 (level c) and over ℳ (level m).
//
// Each seed projects a random start, then runs projected descent: a step along
// the H¹ gradient (the Riesz representative of I'(u) for the Dirichlet inner
// product), re-projection, Armijo backtracking on the projected energy. Once
// the pointwise residual is small a Newton polish on I'(u) = 0 finishes the
// job; the polished point is re-projected and kept only if it stays in the
// right set without raising the energy.

#include "graphkirchhoff/nehari.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace graphkirchhoff {

struct SolveConfig {
  int seeds = 16;
  std::uint64_t rng_seed = 0;
  double step_init = 1.0;
  double armijo_c = 1e-4;
  double shrink = 0.5;
  double grad_tol = 1e-8;   // on max pointwise |residual|
  double proj_tol = 1e-10;  // membership in 𝒩 or ℳ
  int max_iters = 2000;
  double newton_switch = 1e-4;  // residual below which the Newton polish is tried
};

// Throws ValidationError listing every violated constraint.
void validate_config(const SolveConfig& cfg);

enum class Target { Nehari, Nodal };

enum class DescentStatus { Converged, MaxIterations, Stalled, ProjectionFailed };

std::string to_string(DescentStatus s);

struct Trajectory {
  std::vector<double> energies;  // I(u_k), one per accepted iterate
  Eigen::VectorXd state;         // last iterate
  DescentStatus status = DescentStatus::MaxIterations;
  int iterations = 0;
  bool polished = false;  // the Newton polish produced the final state
  double residual_max = 0.0;
  std::string message;
};

// Projected descent from u_start (which must be projectable for `target`).
// Throws ValidationError if u_start cannot be projected at all.
Trajectory descend(const WorkingGraph& g, const ModelParams& params, const SolveConfig& cfg,
                   const Eigen::VectorXd& u_start, Target target);

double residual_max(const WorkingGraph& g, const ModelParams& params, const Eigen::VectorXd& u);

// Relative membership residual: |⟨I'(u),u⟩| for 𝒩, max of |⟨I'(u),u±⟩| for ℳ,
// each divided by max(1, term magnitude).
double membership(const WorkingGraph& g, const ModelParams& params, const Eigen::VectorXd& u,
                  Target target);

struct SeedOutcome {
  int index = 0;
  bool converged = false;
  double level = 0.0;
  double residual_max = 0.0;
  double membership = 0.0;
  int iterations = 0;
  bool polished = false;
  std::string status;
  Eigen::VectorXd state;
};

struct LevelResult {
  double level = 0.0;
  Eigen::VectorXd state;
  double residual_max = 0.0;
  double membership = 0.0;
  int best_seed = -1;
  std::vector<SeedOutcome> seeds;
};

// Random start for seed `index`: standard normal on the interior; for ℳ the
// values are shifted by their median so that both signs occur.
Eigen::VectorXd random_start(const WorkingGraph& g, std::uint64_t rng_seed, int index, Target target);

// Best level over all seeds; lowest level wins, ties within 1e-12 go to the
// lowest seed index. Throws ConvergenceError if no seed converged.
LevelResult minimize_ground(const WorkingGraph& g, const ModelParams& params, const SolveConfig& cfg);

// Throws ValidationError if the interior has fewer than 2 vertices.
LevelResult minimize_nodal(const WorkingGraph& g, const ModelParams& params, const SolveConfig& cfg);

enum class SolveMode { Ground, Nodal, Both };

struct SolveReport {
  SolveMode mode = SolveMode::Both;
  SolveConfig config;
  std::optional<LevelResult> ground;
  std::optional<LevelResult> nodal;
  double doubling_tol = 1e-8;

  double c_level() const { return ground->level; }
  double m_level() const { return nodal->level; }
  double ratio() const { return m_level() / c_level(); }
  bool doubling_ok() const;
};

bool check_doubling(double c_level, double m_level, double tol);

SolveReport solve(const WorkingGraph& g, const ModelParams& params, const SolveConfig& cfg,
                  SolveMode mode);

}  // namespace graphkirchhoff
