#pragma once

// Projections onto the Nehari set 𝒩 = {u ≠ 0 : ⟨I'(u),u⟩ = 0} along rays
// t ↦ tu, and onto the nodal set ℳ = {u± ≠ 0 : ⟨I'(u),u±⟩ = 0} along the
// quadrant (s,t) ↦ su⁺ + tu⁻.
//
// Both work on a handful of precomputed integrals of u, so that evaluating
// f(t), G(s,t) and H(s,t) costs O(1) after an O(|E| + |V|) setup.

#include "graphkirchhoff/energy.hpp"

#include <optional>
#include <utility>

namespace graphkirchhoff {

// Integrals of a fixed function v that determine I and I' along t ↦ tv.
struct RayMoments {
  double norm2 = 0.0;    // ‖v‖²
  double power = 0.0;    // ∫ g |v|^{2k/m} dμ
  double quartic = 0.0;  // ∫ Q |v|^p dμ
  double log = 0.0;      // ∫ Q |v|^p ln|v|^r dμ
};

RayMoments ray_moments(const WorkingGraph& g, const ModelParams& params, const Eigen::VectorXd& u);

// f(t) = ⟨I'(tu), tu⟩ expanded as
//   a t²‖u‖² + b t⁴‖u‖⁴ + λ t^{2k/m} ∫g|u|^{2k/m} − t^p ∫Q|u|^p ln|u|^r − t^p ln(t^r) ∫Q|u|^p.
// `scale` is the sum of the absolute values of those terms.
Balance<double> f_ray(const ModelParams& params, const RayMoments& mom, double t);

// Throws std::invalid_argument if u = 0 or t <= 0.
double f_ray(const WorkingGraph& g, const ModelParams& params, const Eigen::VectorXd& u, double t);

struct ProjectionOptions {
  double tol = 1e-10;       // on |f|, |G|, |H|, relative to max(1, term magnitude)
  int max_iterations = 200;  // per bisection
};

struct ScalarProjection {
  double t0 = 1.0;
  double residual_f = 0.0;  // |f(t0)|
  double scale = 0.0;       // term magnitude of f at t0
  double t_lo = 0.0;
  double t_hi = 0.0;
  int iterations = 0;
};

// Unique t0 > 0 with t0·u ∈ 𝒩. Brackets the sign change of f by doubling or
// halving from t = 1, then bisects.
// Throws ValidationError if u = 0, ConvergenceError if no bracket is found
// within 2^±200 or the tolerance is not met.
ScalarProjection scalar_project(const WorkingGraph& g, const ModelParams& params,
                                const Eigen::VectorXd& u, const ProjectionOptions& opts = {});

// Integrals of u⁺ and u⁻ that determine G and H on the quadrant.
struct PairMoments {
  double norm2_plus = 0.0;   // ‖u⁺‖²
  double norm2_minus = 0.0;  // ‖u⁻‖²
  CrossTerms<double> cross;
  RayMoments plus;   // local integrals of u⁺ (norm2 unused)
  RayMoments minus;  // local integrals of u⁻ (norm2 unused)
};

PairMoments pair_moments(const WorkingGraph& g, const ModelParams& params, const Eigen::VectorXd& u);

// G(s,t) = ⟨I'(su⁺+tu⁻), su⁺⟩ and H(s,t) = ⟨I'(su⁺+tu⁻), tu⁻⟩ in expanded
// form, each with its term magnitude.
Balance<double> G_map(const ModelParams& params, const PairMoments& mom, double s, double t);
Balance<double> H_map(const ModelParams& params, const PairMoments& mom, double s, double t);

double G_map(const WorkingGraph& g, const ModelParams& params, const Eigen::VectorXd& u, double s,
             double t);
double H_map(const WorkingGraph& g, const ModelParams& params, const Eigen::VectorXd& u, double s,
             double t);

struct PairProjectionOptions : ProjectionOptions {
  // Starting box [alpha, beta]; derived from the scalar projections of u⁺
  // and u⁻ when absent. Each side is expanded dyadically until its corner
  // signs hold, within [2^-200, 2^200].
  std::optional<std::pair<double, double>> initial_box;
  int max_box_doublings = 400;
};

struct PairProjection {
  double s0 = 1.0;
  double t0 = 1.0;
  double residual_G = 0.0;
  double residual_H = 0.0;
  double scale_G = 0.0;
  double scale_H = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  int iterations = 0;  // outer bisection steps
};

// Unique (s0, t0) with s0u⁺ + t0u⁻ ∈ ℳ. Finds a box [α,β]² with
// G(α,α), H(α,α) > 0 and G(β,β), H(β,β) < 0, then solves G = H = 0 by nested
// bisection: s*(t) solves G(·,t) = 0 on [α,β] and the outer loop bisects
// t ↦ H(s*(t), t), whose endpoint signs are fixed by the box.
// Throws ValidationError if u⁺ = 0 or u⁻ = 0, ConvergenceError if no box is
// found or the tolerance is not met.
PairProjection pair_project(const WorkingGraph& g, const ModelParams& params,
                            const Eigen::VectorXd& u, const PairProjectionOptions& opts = {});

// max_i I(t_i u) − I(t0 u) over `points` equally spaced t_i in (0, 2 t0];
// nonpositive (up to roundoff) when t0 u ∈ 𝒩.
Balance<double> ray_maximality_excess(const WorkingGraph& g, const ModelParams& params,
                                      const Eigen::VectorXd& u, double t0, int points = 64);

// max over a points × points grid on [alpha, beta]² of I(su⁺+tu⁻) − I(s0u⁺+t0u⁻).
Balance<double> pair_maximality_excess(const WorkingGraph& g, const ModelParams& params,
                                       const Eigen::VectorXd& u, const PairProjection& proj,
                                       int points = 16);

}  // namespace graphkirchhoff
