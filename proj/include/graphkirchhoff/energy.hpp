#pragma once

// The energy functional
//   I(u) = a/2 ‖u‖² + b/4 ‖u‖⁴ + (m/2k) ∫ λ g |u|^{2k/m} + (r/p²) ∫ Q |u|^p
//          − (1/p) ∫ Q |u|^p ln|u|^r,
// its Gateaux derivative, the pointwise residual of the Euler–Lagrange
// equation, and the decomposition identities and inequalities relating I(u)
// to its positive and negative parts.
//
// Conventions: u^{2k/m} is |u|^{2k/m} and u^{2k/m−1} is |u|^{2k/m−2} u; the
// log integrand is 0 wherever u(x) = 0.

#include "graphkirchhoff/calculus.hpp"
#include "graphkirchhoff/params.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <stdexcept>

namespace graphkirchhoff {

namespace detail {

// |v|^{q−2} v, zero at v = 0 (q > 1).
template <typename Scalar>
Scalar signed_power(Scalar v, Scalar q) {
  using std::abs;
  using std::pow;
  if (v == Scalar(0)) return Scalar(0);
  return pow(abs(v), q - Scalar(2)) * v;
}

// |v|^p ln|v|^r, zero at v = 0.
template <typename Scalar>
Scalar log_power(Scalar v, Scalar p, Scalar r) {
  using std::abs;
  using std::log;
  using std::pow;
  if (v == Scalar(0)) return Scalar(0);
  return pow(abs(v), p) * r * log(abs(v));
}

// |v|^{p−2} v ln|v|^r, zero at v = 0.
template <typename Scalar>
Scalar log_force(Scalar v, Scalar p, Scalar r) {
  using std::abs;
  using std::log;
  using std::pow;
  if (v == Scalar(0)) return Scalar(0);
  return pow(abs(v), p - Scalar(2)) * v * r * log(abs(v));
}

template <typename Scalar>
Scalar abs_sum(std::initializer_list<Scalar> terms) {
  using std::abs;
  Scalar acc(0);
  for (Scalar t : terms) acc += abs(t);
  return acc;
}

template <typename Scalar>
Scalar plain_sum(std::initializer_list<Scalar> terms) {
  Scalar acc(0);
  for (Scalar t : terms) acc += t;
  return acc;
}

}  // namespace detail

template <typename Scalar>
struct EnergyBreakdown {
  Scalar dirichlet{0};    // a/2 ‖u‖²
  Scalar kirchhoff{0};    // b/4 ‖u‖⁴
  Scalar potential{0};    // (m/2k) ∫ λ g |u|^{2k/m}
  Scalar log_quartic{0};  // (r/p²) ∫ Q |u|^p
  Scalar log_main{0};     // (1/p) ∫ Q |u|^p ln|u|^r
  Scalar total{0};
};

// A signed quantity that should vanish (identities) or be nonnegative
// (inequalities), together with the magnitude of the terms it was computed
// from so that roundoff can be judged relative to that magnitude.
template <typename Scalar>
struct Balance {
  Scalar value{0};
  Scalar scale{0};

  Scalar tolerance(Scalar rel) const { return rel * std::max<Scalar>(Scalar(1), scale); }
  bool holds_equality(Scalar rel) const {
    using std::abs;
    return abs(value) <= tolerance(rel);
  }
  bool holds_inequality(Scalar rel) const { return value >= -tolerance(rel); }
};

template <typename Derived>
EnergyBreakdown<typename Derived::Scalar> energy(const WorkingGraph& g, const ModelParams& params,
                                                 const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  using std::pow;
  check_function(g, u);
  const Scalar a(params.a), b(params.b), lambda(params.lambda), p(params.p), r(params.r);
  const Scalar q = Scalar(2 * params.k_exp) / Scalar(params.m_exp);

  const Scalar norm2 = dirichlet_form(g, u, u);
  Scalar pot(0), quartic(0), logm(0);
  for (Index x : g.interior()) {
    const Scalar mu(g.mu()(x));
    const Scalar ux = u(x);
    if (ux == Scalar(0)) continue;
    pot += mu * Scalar(params.g(x)) * pow(abs(ux), q);
    quartic += mu * Scalar(params.Q(x)) * pow(abs(ux), p);
    logm += mu * Scalar(params.Q(x)) * detail::log_power(ux, p, r);
  }

  EnergyBreakdown<Scalar> e;
  e.dirichlet = a / Scalar(2) * norm2;
  e.kirchhoff = b / Scalar(4) * norm2 * norm2;
  e.potential = lambda * pot / q;
  e.log_quartic = r / (p * p) * quartic;
  e.log_main = logm / p;
  e.total = e.dirichlet + e.kirchhoff + e.potential + e.log_quartic - e.log_main;
  return e;
}

// ⟨I'(u), v⟩.
template <typename D1, typename D2>
typename D1::Scalar gateaux(const WorkingGraph& g, const ModelParams& params,
                            const Eigen::MatrixBase<D1>& u, const Eigen::MatrixBase<D2>& v) {
  using Scalar = typename D1::Scalar;
  check_function(g, u);
  check_function(g, v);
  const Scalar a(params.a), b(params.b), lambda(params.lambda), p(params.p), r(params.r);
  const Scalar q = Scalar(2 * params.k_exp) / Scalar(params.m_exp);

  const Scalar duv = dirichlet_form(g, u, v);
  const Scalar norm2 = dirichlet_form(g, u, u);
  Scalar local(0);
  for (Index x : g.interior()) {
    const Scalar mu(g.mu()(x));
    local += mu * (lambda * Scalar(params.g(x)) * detail::signed_power(u(x), q) -
                   Scalar(params.Q(x)) * detail::log_force(u(x), p, r)) *
             v(x);
  }
  return a * duv + b * norm2 * duv + local;
}

// Pointwise residual of the equation at each interior vertex:
//   −(a + b‖u‖²)Δu(x) + λ g(x) |u|^{2k/m−2}u(x) − Q(x)|u|^{p−2}u(x) ln|u(x)|^r.
// Boundary entries are zero. residual(x)·μ(x) = ⟨I'(u), e_x⟩.
template <typename Derived>
GraphFunction<typename Derived::Scalar> residual(const WorkingGraph& g, const ModelParams& params,
                                                 const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  const Scalar a(params.a), b(params.b), lambda(params.lambda), p(params.p), r(params.r);
  const Scalar q = Scalar(2 * params.k_exp) / Scalar(params.m_exp);
  const GraphFunction<Scalar> lap = laplacian(g, u);
  const Scalar coeff = a + b * sobolev_norm(g, u) * sobolev_norm(g, u);
  GraphFunction<Scalar> out = GraphFunction<Scalar>::Zero(g.size());
  for (Index x : g.interior()) {
    out(x) = -coeff * lap(x) + lambda * Scalar(params.g(x)) * detail::signed_power(u(x), q) -
             Scalar(params.Q(x)) * detail::log_force(u(x), p, r);
  }
  return out;
}

// Coordinates of I'(u) against the vertex indicators: entry x is ⟨I'(u), e_x⟩
// for interior x, zero on the boundary.
template <typename Derived>
GraphFunction<typename Derived::Scalar> gradient(const WorkingGraph& g, const ModelParams& params,
                                                 const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  check_function(g, u);
  const Scalar a(params.a), b(params.b), lambda(params.lambda), p(params.p), r(params.r);
  const Scalar q = Scalar(2 * params.k_exp) / Scalar(params.m_exp);
  const Scalar coeff = a + b * dirichlet_form(g, u, u);
  GraphFunction<Scalar> out = GraphFunction<Scalar>::Zero(g.size());
  for (Index x : g.interior()) {
    Scalar stiff(0);
    for (const auto& [y, w] : g.neighbors(x)) stiff += Scalar(w) * (u(x) - u(y));
    out(x) = coeff * stiff +
             Scalar(g.mu()(x)) * (lambda * Scalar(params.g(x)) * detail::signed_power(u(x), q) -
                                  Scalar(params.Q(x)) * detail::log_force(u(x), p, r));
  }
  return out;
}

// Second derivative of I in interior coordinates (interior × interior).
// Where u(x) = 0 and 2k/m < 2 the potential's curvature is unbounded; that
// entry is left at zero.
Eigen::MatrixXd hessian(const WorkingGraph& g, const ModelParams& params, const Eigen::VectorXd& u);

template <typename Scalar>
struct DecompositionGaps {
  Balance<Scalar> energy;       // I(u) identity
  Balance<Scalar> deriv_plus;   // ⟨I'(u), u⁺⟩ identity
  Balance<Scalar> deriv_minus;  // ⟨I'(u), u⁻⟩ identity
};

// Differences between the left- and right-hand sides of the identities that
// express I(u), ⟨I'(u),u⁺⟩ and ⟨I'(u),u⁻⟩ through u⁺, u⁻, their norms and the
// cross terms. The cross terms are a parameter so that a deliberately wrong
// value can be injected.
template <typename Derived>
DecompositionGaps<typename Derived::Scalar> decomposition_gaps(
    const WorkingGraph& g, const ModelParams& params, const Eigen::MatrixBase<Derived>& u,
    const CrossTerms<typename Derived::Scalar>& ct) {
  using Scalar = typename Derived::Scalar;
  const Scalar a(params.a), b(params.b);
  const GraphFunction<Scalar> up = pos_part(u);
  const GraphFunction<Scalar> um = neg_part(u);
  const Scalar A = dirichlet_form(g, up, up);
  const Scalar B = dirichlet_form(g, um, um);
  const Scalar mp = ct.mp, pm = ct.pm;
  const Scalar h(0.5);

  DecompositionGaps<Scalar> out;
  {
    const Scalar lhs = energy(g, params, u).total;
    const Scalar ip = energy(g, params, up).total;
    const Scalar im = energy(g, params, um).total;
    const std::initializer_list<Scalar> rhs = {
        ip,
        im,
        -a * h * mp,
        -a * h * pm,
        b / Scalar(4) * mp * mp,
        b / Scalar(4) * pm * pm,
        b * h * A * B,
        b * h * mp * pm,
        -b * h * A * mp,
        -b * h * A * pm,
        -b * h * B * mp,
        -b * h * B * pm,
    };
    out.energy = {lhs - detail::plain_sum(rhs), std::abs(lhs) + detail::abs_sum(rhs)};
  }
  auto deriv = [&](const GraphFunction<Scalar>& part, Scalar same, Scalar other) {
    const Scalar lhs = gateaux(g, params, u, part);
    const Scalar self = gateaux(g, params, part, part);
    const std::initializer_list<Scalar> rhs = {
        self,
        -a * h * mp,
        -a * h * pm,
        b * h * mp * mp,
        b * h * pm * pm,
        b * A * B,
        b * pm * mp,
        -Scalar(1.5) * b * same * mp,
        -Scalar(1.5) * b * same * pm,
        -b * h * other * mp,
        -b * h * other * pm,
    };
    return Balance<Scalar>{lhs - detail::plain_sum(rhs), std::abs(lhs) + detail::abs_sum(rhs)};
  };
  out.deriv_plus = deriv(up, A, B);
  out.deriv_minus = deriv(um, B, A);
  return out;
}

template <typename Derived>
DecompositionGaps<typename Derived::Scalar> decomposition_gaps(const WorkingGraph& g,
                                                               const ModelParams& params,
                                                               const Eigen::MatrixBase<Derived>& u) {
  return decomposition_gaps(g, params, u, cross_terms(g, u));
}

// I(u) minus the full right-hand side of
//   I(u) ≥ I(su⁺+tu⁻) + (1−s^p)/p ⟨I'(u),u⁺⟩ + (1−t^p)/p ⟨I'(u),u⁻⟩
//          + a((1−s²)/2 − (1−s^p)/p)‖u⁺‖² + a((1−t²)/2 − (1−t^p)/p)‖u⁻‖²
//          + b((1−s⁴)/4 − (1−s^p)/p)‖u⁺‖⁴ + b((1−t⁴)/4 − (1−t^p)/p)‖u⁻‖⁴
//          + b(s²−t²)²/4 (‖u⁺‖²‖u⁻‖² + mp·pm) − a(s−t)²/4 (mp + pm)
//          + b(s²−t²)²/8 (mp² + pm²).
// Nonnegative for all u and s, t ≥ 0; zero at s = t = 1.
template <typename Derived>
Balance<typename Derived::Scalar> master_surplus(const WorkingGraph& g, const ModelParams& params,
                                                 const Eigen::MatrixBase<Derived>& u,
                                                 typename Derived::Scalar s,
                                                 typename Derived::Scalar t) {
  using Scalar = typename Derived::Scalar;
  using std::pow;
  if (!(s >= Scalar(0) && t >= Scalar(0))) throw std::invalid_argument("s and t must be >= 0");
  const Scalar a(params.a), b(params.b), p(params.p);
  const GraphFunction<Scalar> up = pos_part(u);
  const GraphFunction<Scalar> um = neg_part(u);
  const Scalar A = dirichlet_form(g, up, up);
  const Scalar B = dirichlet_form(g, um, um);
  const auto ct = cross_terms(g, u);
  const Scalar sig_s = (Scalar(1) - pow(s, p)) / p;
  const Scalar sig_t = (Scalar(1) - pow(t, p)) / p;
  const Scalar d2 = (s * s - t * t) * (s * s - t * t);
  const Scalar d1 = (s - t) * (s - t);

  const Scalar lhs = energy(g, params, u).total;
  const GraphFunction<Scalar> w = s * up + t * um;
  const std::initializer_list<Scalar> rhs = {
      energy(g, params, w).total,
      sig_s * gateaux(g, params, u, up),
      sig_t * gateaux(g, params, u, um),
      a * ((Scalar(1) - s * s) / Scalar(2) - sig_s) * A,
      a * ((Scalar(1) - t * t) / Scalar(2) - sig_t) * B,
      b * ((Scalar(1) - pow(s, 4)) / Scalar(4) - sig_s) * A * A,
      b * ((Scalar(1) - pow(t, 4)) / Scalar(4) - sig_t) * B * B,
      b * d2 / Scalar(4) * A * B,
      b * d2 / Scalar(4) * ct.mp * ct.pm,
      -a * d1 / Scalar(4) * ct.mp,
      -a * d1 / Scalar(4) * ct.pm,
      b * d2 / Scalar(8) * ct.mp * ct.mp,
      b * d2 / Scalar(8) * ct.pm * ct.pm,
  };
  return {lhs - detail::plain_sum(rhs), std::abs(lhs) + detail::abs_sum(rhs)};
}

// I(u) minus the right-hand side of
//   I(u) ≥ I(tu) + (1−t^p)/p ⟨I'(u),u⟩ + a((1−t²)/2 − (1−t^p)/p)‖u‖²
//          + b((1−t⁴)/4 − (1−t^p)/p)‖u‖⁴.
template <typename Derived>
Balance<typename Derived::Scalar> ray_surplus(const WorkingGraph& g, const ModelParams& params,
                                              const Eigen::MatrixBase<Derived>& u,
                                              typename Derived::Scalar t) {
  using Scalar = typename Derived::Scalar;
  using std::pow;
  if (!(t >= Scalar(0))) throw std::invalid_argument("t must be >= 0");
  const Scalar a(params.a), b(params.b), p(params.p);
  const Scalar n2 = dirichlet_form(g, u, u);
  const Scalar sig = (Scalar(1) - pow(t, p)) / p;
  const Scalar lhs = energy(g, params, u).total;
  const GraphFunction<Scalar> tu = t * u;
  const std::initializer_list<Scalar> rhs = {
      energy(g, params, tu).total,
      sig * gateaux(g, params, u, u),
      a * ((Scalar(1) - t * t) / Scalar(2) - sig) * n2,
      b * ((Scalar(1) - pow(t, 4)) / Scalar(4) - sig) * n2 * n2,
  };
  return {lhs - detail::plain_sum(rhs), std::abs(lhs) + detail::abs_sum(rhs)};
}

// |s|^{p−2} s ln|s|^r / |s|³, the nonlinearity divided by the cube of its
// argument. Throws for s = 0.
double nodal_ratio(double s, double p, double r);

}  // namespace graphkirchhoff
