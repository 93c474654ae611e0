#pragma once

// Discrete calculus on a weighted graph with Dirichlet boundary: the
// μ-Laplacian, the gradient form Γ, μ-weighted integrals and the norms of
// H¹,²₀ and L^q. All functions take closure-sized vectors (ordering of
// WorkingGraph) and are templated on the scalar type so that oracles can run
// in extended precision.

#include "graphkirchhoff/graph.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace graphkirchhoff {

template <typename Scalar>
using GraphFunction = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class Over { Interior, Closure };

// Δu(x) = (1/μ(x)) Σ_{y∼x} w_xy (u(y) − u(x)) for interior x. Boundary
// entries of the result are zero (Δu is not defined there).
template <typename Derived>
GraphFunction<typename Derived::Scalar> laplacian(const WorkingGraph& g,
                                                  const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  check_function(g, u);
  GraphFunction<Scalar> out = GraphFunction<Scalar>::Zero(g.size());
  for (Index x : g.interior()) {
    Scalar acc(0);
    for (const auto& [y, w] : g.neighbors(x)) acc += Scalar(w) * (u(y) - u(x));
    out(x) = acc / Scalar(g.mu()(x));
  }
  return out;
}

// Γ(u₁,u₂)(x) = (1/2μ(x)) Σ_{y∼x} w_xy (u₁(y)−u₁(x))(u₂(y)−u₂(x)).
template <typename D1, typename D2>
typename D1::Scalar gamma(const WorkingGraph& g, const Eigen::MatrixBase<D1>& u1,
                          const Eigen::MatrixBase<D2>& u2, Index x) {
  using Scalar = typename D1::Scalar;
  if (x < 0 || x >= g.size()) throw std::out_of_range("vertex index out of range");
  Scalar acc(0);
  for (const auto& [y, w] : g.neighbors(x)) acc += Scalar(w) * (u1(y) - u1(x)) * (u2(y) - u2(x));
  return acc / (Scalar(2) * Scalar(g.mu()(x)));
}

// |∇u|²(x) = Γ(u,u)(x) at every working vertex.
template <typename Derived>
GraphFunction<typename Derived::Scalar> gradient_sq(const WorkingGraph& g,
                                                    const Eigen::MatrixBase<Derived>& u) {
  check_function(g, u);
  GraphFunction<typename Derived::Scalar> out(g.size());
  for (Index x = 0; x < g.size(); ++x) out(x) = gamma(g, u, u, x);
  return out;
}

// Σ μ(x) f(x) over the interior or over interior ∪ boundary.
template <typename Derived>
typename Derived::Scalar integrate(const WorkingGraph& g, const Eigen::MatrixBase<Derived>& f,
                                   Over over) {
  using Scalar = typename Derived::Scalar;
  if (f.size() != g.size()) throw std::invalid_argument("integrand has wrong size");
  Scalar acc(0);
  for (Index x = 0; x < g.size(); ++x) {
    if (over == Over::Interior && !g.is_interior(x)) continue;
    acc += Scalar(g.mu()(x)) * f(x);
  }
  return acc;
}

// ∫ Γ(u,v) dμ over the closure, evaluated edge by edge:
// Σ_edges w (u_j − u_i)(v_j − v_i).
template <typename D1, typename D2>
typename D1::Scalar dirichlet_form(const WorkingGraph& g, const Eigen::MatrixBase<D1>& u,
                                   const Eigen::MatrixBase<D2>& v) {
  using Scalar = typename D1::Scalar;
  Scalar acc(0);
  for (const auto& e : g.edges()) acc += Scalar(e.w) * (u(e.j) - u(e.i)) * (v(e.j) - v(e.i));
  return acc;
}

// ‖u‖ = (∫ |∇u|² dμ)^{1/2} over the closure.
template <typename Derived>
typename Derived::Scalar sobolev_norm(const WorkingGraph& g, const Eigen::MatrixBase<Derived>& u) {
  using std::sqrt;
  return sqrt(integrate(g, gradient_sq(g, u), Over::Closure));
}

// (Σ_{x∈Ω} μ(x)|u(x)|^q)^{1/q}, or max_{x∈Ω} |u(x)| for q = ∞.
template <typename Derived>
typename Derived::Scalar lq_norm(const WorkingGraph& g, const Eigen::MatrixBase<Derived>& u,
                                 double q) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  using std::pow;
  if (!(q >= 1.0)) throw std::invalid_argument("L^q norm needs q >= 1");
  check_function(g, u);
  if (std::isinf(q)) {
    Scalar m(0);
    for (Index x : g.interior()) m = std::max<Scalar>(m, abs(u(x)));
    return m;
  }
  Scalar acc(0);
  for (Index x : g.interior()) acc += Scalar(g.mu()(x)) * pow(abs(u(x)), Scalar(q));
  return pow(acc, Scalar(1) / Scalar(q));
}

// K_q = (Σ μ(x))^{1/q} / μ_min^{1/2}, the sum over the working set and μ_min
// over the interior; the exponent 1/q vanishes for q = ∞.
//
// NOTE: this constant alone does not bound ‖·‖_{L^q} by ‖·‖ on every graph:
// a single interior vertex with μ = 4 joined to two boundary vertices by unit
// weights has ‖u‖_{L^∞} = 1 and K_∞‖u‖ = √2/2. See
// poincare_embedding_constant() for a bound that always holds.
double embedding_constant(const WorkingGraph& g, double q);

// Smallest eigenvalue λ₁ of L_Ω v = λ M_Ω v (interior stiffness against the
// interior measure), so that ∫_Ω u² dμ ≤ ‖u‖² / λ₁.
double poincare_eigenvalue(const WorkingGraph& g);

// K_q / √λ₁: ‖u‖_{L^q} ≤ (Σμ)^{1/q} ‖u‖_{L^∞} ≤ (Σμ)^{1/q} μ_min^{-1/2}
// ‖u‖_{L²} ≤ K_q λ₁^{-1/2} ‖u‖.
double poincare_embedding_constant(const WorkingGraph& g, double q);

template <typename Derived>
GraphFunction<typename Derived::Scalar> pos_part(const Eigen::MatrixBase<Derived>& u) {
  return u.cwiseMax(typename Derived::Scalar(0));
}

template <typename Derived>
GraphFunction<typename Derived::Scalar> neg_part(const Eigen::MatrixBase<Derived>& u) {
  return u.cwiseMin(typename Derived::Scalar(0));
}

// The two opposite-sign coupling sums
//   mp = Σ_{x: u(x)<0} Σ_{y∼x, u(y)>0} w_xy u⁻(x) u⁺(y)
//   pm = Σ_{x: u(x)>0} Σ_{y∼x, u(y)<0} w_xy u⁻(y) u⁺(x)
// Both are ≤ 0 and equal by edge symmetry; they are kept separate because
// the decomposition identities carry them as distinct terms.
template <typename Scalar>
struct CrossTerms {
  Scalar mp{0};
  Scalar pm{0};
  Scalar sum() const { return mp + pm; }
};

template <typename Derived>
CrossTerms<typename Derived::Scalar> cross_terms(const WorkingGraph& g,
                                                 const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  check_function(g, u);
  CrossTerms<Scalar> ct;
  for (Index x : g.interior()) {
    const Scalar ux = u(x);
    if (ux == Scalar(0)) continue;
    for (const auto& [y, w] : g.neighbors(x)) {
      const Scalar uy = u(y);
      if (ux < Scalar(0) && uy > Scalar(0)) ct.mp += Scalar(w) * ux * uy;
      if (ux > Scalar(0) && uy < Scalar(0)) ct.pm += Scalar(w) * uy * ux;
    }
  }
  return ct;
}

}  // namespace graphkirchhoff
