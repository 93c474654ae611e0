#include "graphkirchhoff/nehari.hpp"

#include "graphkirchhoff/error.hpp"

#include <cmath>
#include <sstream>

namespace graphkirchhoff {

namespace {

RayMoments local_moments(const WorkingGraph& g, const ModelParams& params, const Eigen::VectorXd& v) {
  RayMoments m;
  const double q = params.power_exponent();
  for (Index x : g.interior()) {
    const double vx = v(x);
    if (vx == 0.0) continue;
    const double mu = g.mu()(x);
    const double av = std::abs(vx);
    m.power += mu * params.g(x) * std::pow(av, q);
    m.quartic += mu * params.Q(x) * std::pow(av, params.p);
    m.log += mu * params.Q(x) * detail::log_power(vx, params.p, params.r);
  }
  return m;
}

bool within(const Balance<double>& b, double tol) { return b.holds_equality(tol); }

// Bisections keep going past the requested tolerance down to this fraction
// of it (or to the precision floor), so that re-evaluating the residual at
// the returned point does not land back above tol through rounding.
constexpr double kTarget = 1e-3;

// Expanded ⟨I'(su⁺+tu⁻), su⁺⟩; H is the same expression with the roles of
// (s, u⁺) and (t, u⁻) exchanged.
Balance<double> pairing(const ModelParams& prm, double own, double other, double own_norm2,
                        double other_norm2, const RayMoments& own_local, const CrossTerms<double>& ct) {
  const double a = prm.a, b = prm.b, p = prm.p, r = prm.r, q = prm.power_exponent();
  const double C = ct.sum();
  const double st = own * other;
  const double own_p = std::pow(own, p);
  const std::initializer_list<double> terms = {
      a * own * own * own_norm2,
      b * std::pow(own, 4) * own_norm2 * own_norm2,
      -own_p * own_local.log,
      -own_p * r * std::log(own) * own_local.quartic,
      prm.lambda * std::pow(own, q) * own_local.power,
      -0.5 * a * st * C,
      0.5 * b * st * st * (ct.mp * ct.mp + ct.pm * ct.pm),
      b * st * st * own_norm2 * other_norm2,
      b * st * st * ct.mp * ct.pm,
      -1.5 * b * own * own * st * own_norm2 * C,
      -0.5 * b * other * other * st * other_norm2 * C,
  };
  return {detail::plain_sum(terms), detail::abs_sum(terms)};
}

}  // namespace

RayMoments ray_moments(const WorkingGraph& g, const ModelParams& params, const Eigen::VectorXd& u) {
  check_function(g, u);
  RayMoments m = local_moments(g, params, u);
  m.norm2 = dirichlet_form(g, u, u);
  return m;
}

Balance<double> f_ray(const ModelParams& params, const RayMoments& mom, double t) {
  const double a = params.a, b = params.b, p = params.p, r = params.r;
  const double tp = std::pow(t, p);
  const std::initializer_list<double> terms = {
      a * t * t * mom.norm2,
      b * std::pow(t, 4) * mom.norm2 * mom.norm2,
      params.lambda * std::pow(t, params.power_exponent()) * mom.power,
      -tp * mom.log,
      -tp * r * std::log(t) * mom.quartic,
  };
  return {detail::plain_sum(terms), detail::abs_sum(terms)};
}

double f_ray(const WorkingGraph& g, const ModelParams& params, const Eigen::VectorXd& u, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("f_ray needs t > 0");
  const RayMoments mom = ray_moments(g, params, u);
  if (mom.quartic == 0.0) throw std::invalid_argument("f_ray needs u != 0");
  return f_ray(params, mom, t).value;
}

ScalarProjection scalar_project(const WorkingGraph& g, const ModelParams& params,
                                const Eigen::VectorXd& u, const ProjectionOptions& opts) {
  const RayMoments mom = ray_moments(g, params, u);
  if (mom.quartic == 0.0) throw ValidationError("scalar projection needs u != 0");
  auto f = [&](double t) { return f_ray(params, mom, t); };

  ScalarProjection out;
  const auto f1 = f(1.0);
  if (within(f1, kTarget * opts.tol)) {
    out.t0 = 1.0;
    out.residual_f = std::abs(f1.value);
    out.scale = f1.scale;
    out.t_lo = 0.5;
    out.t_hi = 2.0;
    return out;
  }

  // For p close to 4 and b > 0 the root can sit far beyond 2^60.
  constexpr double kLimit = 0x1p200;
  auto diverged = [](const char* what) { throw ConvergenceError(std::string("scalar projection: ") + what); };
  double lo = 1.0, hi = 1.0;
  if (f1.value > 0.0) {
    hi = 2.0;
    for (auto fh = f(hi); fh.value > 0.0; fh = f(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > kLimit) diverged("no sign change of f below 2^200");
    }
  } else {
    lo = 0.5;
    for (auto fl = f(lo); fl.value < 0.0; fl = f(lo)) {
      lo *= 0.5;
      hi = 2.0 * lo;
      if (lo < 1.0 / kLimit) diverged("no sign change of f above 2^-200");
    }
  }
  if (!std::isfinite(f(lo).value) || !std::isfinite(f(hi).value)) diverged("f is not finite on the bracket");

  double best_t = lo;
  Balance<double> best = f(lo);
  for (int it = 0; it < opts.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const auto fm = f(mid);
    out.iterations = it + 1;
    if (std::abs(fm.value) < std::abs(best.value) || best_t == lo) {
      best = fm;
      best_t = mid;
    }
    if (within(fm, kTarget * opts.tol)) break;
    (fm.value > 0.0 ? lo : hi) = mid;
  }
  out.t0 = best_t;
  out.residual_f = std::abs(best.value);
  out.scale = best.scale;
  out.t_lo = lo;
  out.t_hi = hi;
  if (!within(best, opts.tol)) {
    std::ostringstream os;
    os << "scalar projection: |f(t0)| = " << out.residual_f << " above tolerance at t0 = " << out.t0;
    throw ConvergenceError(os.str());
  }
  if (!(out.t_lo < out.t0 && out.t0 < out.t_hi)) {
    out.t_lo = std::min(out.t_lo, out.t0 * 0.5);
    out.t_hi = std::max(out.t_hi, out.t0 * 2.0);
  }
  return out;
}

PairMoments pair_moments(const WorkingGraph& g, const ModelParams& params, const Eigen::VectorXd& u) {
  check_function(g, u);
  const Eigen::VectorXd up = pos_part(u);
  const Eigen::VectorXd um = neg_part(u);
  PairMoments m;
  m.norm2_plus = dirichlet_form(g, up, up);
  m.norm2_minus = dirichlet_form(g, um, um);
  m.cross = cross_terms(g, u);
  m.plus = local_moments(g, params, up);
  m.minus = local_moments(g, params, um);
  m.plus.norm2 = m.norm2_plus;
  m.minus.norm2 = m.norm2_minus;
  return m;
}

Balance<double> G_map(const ModelParams& params, const PairMoments& mom, double s, double t) {
  return pairing(params, s, t, mom.norm2_plus, mom.norm2_minus, mom.plus, mom.cross);
}

Balance<double> H_map(const ModelParams& params, const PairMoments& mom, double s, double t) {
  return pairing(params, t, s, mom.norm2_minus, mom.norm2_plus, mom.minus, mom.cross);
}

namespace {

PairMoments checked_pair_moments(const WorkingGraph& g, const ModelParams& params,
                                 const Eigen::VectorXd& u) {
  PairMoments mom = pair_moments(g, params, u);
  if (mom.plus.quartic == 0.0 || mom.minus.quartic == 0.0) {
    throw ValidationError("pair projection needs u⁺ != 0 and u⁻ != 0");
  }
  return mom;
}

}  // namespace

double G_map(const WorkingGraph& g, const ModelParams& params, const Eigen::VectorXd& u, double s,
             double t) {
  return G_map(params, checked_pair_moments(g, params, u), s, t).value;
}

double H_map(const WorkingGraph& g, const ModelParams& params, const Eigen::VectorXd& u, double s,
             double t) {
  return H_map(params, checked_pair_moments(g, params, u), s, t).value;
}

PairProjection pair_project(const WorkingGraph& g, const ModelParams& params,
                            const Eigen::VectorXd& u, const PairProjectionOptions& opts) {
  const PairMoments mom = checked_pair_moments(g, params, u);
  auto G = [&](double s, double t) { return G_map(params, mom, s, t); };
  auto H = [&](double s, double t) { return H_map(params, mom, s, t); };

  double alpha = 0.0, beta = 0.0;
  if (opts.initial_box) {
    std::tie(alpha, beta) = *opts.initial_box;
    if (!(alpha > 0.0 && alpha < beta)) throw std::invalid_argument("initial box needs 0 < alpha < beta");
  } else {
    const Eigen::VectorXd up = pos_part(u);
    const Eigen::VectorXd um = neg_part(u);
    const double tp = scalar_project(g, params, up, opts).t0;
    const double tm = scalar_project(g, params, um, opts).t0;
    alpha = 0x1p-4 * std::min(tp, tm);
    beta = 0x1p4 * std::max(tp, tm);
  }
  // (G3): the lower corner needs G, H > 0 and the upper corner G, H < 0.
  // Each side is widened on its own until its signs hold.
  auto low_ok = [&] { return G(alpha, alpha).value > 0.0 && H(alpha, alpha).value > 0.0; };
  auto high_ok = [&] { return G(beta, beta).value < 0.0 && H(beta, beta).value < 0.0; };
  constexpr double kLimit = 0x1p200;
  int doublings = 0;
  for (bool lo = low_ok(), hi = high_ok(); !(lo && hi); lo = low_ok(), hi = high_ok()) {
    if (++doublings > opts.max_box_doublings || alpha < 1.0 / kLimit || beta > kLimit) {
      std::ostringstream os;
      os << "pair projection: no sign box found; last box tried [" << alpha << ", " << beta << "]";
      throw ConvergenceError(os.str());
    }
    if (!lo) alpha *= 0.5;
    if (!hi) beta *= 2.0;
  }

  const double inner_tol = 1e-2 * kTarget * opts.tol;
  auto inner = [&](double t) {
    double lo = alpha, hi = beta;
    double best_s = 0.5 * (lo + hi);
    double best_abs = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opts.max_iterations; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const auto gm = G(mid, t);
      if (std::abs(gm.value) < best_abs) {
        best_abs = std::abs(gm.value);
        best_s = mid;
      }
      if (within(gm, inner_tol)) break;
      (gm.value > 0.0 ? lo : hi) = mid;
    }
    return best_s;
  };

  PairProjection out;
  out.alpha = alpha;
  out.beta = beta;
  double lo = alpha, hi = beta;
  double best_merit = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_iterations; ++it) {
    const double tm = 0.5 * (lo + hi);
    if (tm <= lo || tm >= hi) break;
    const double sm = inner(tm);
    const auto gv = G(sm, tm);
    const auto hv = H(sm, tm);
    out.iterations = it + 1;
    const double merit = std::max(std::abs(gv.value) / std::max(1.0, gv.scale),
                                  std::abs(hv.value) / std::max(1.0, hv.scale));
    if (merit < best_merit) {
      best_merit = merit;
      out.s0 = sm;
      out.t0 = tm;
      out.residual_G = std::abs(gv.value);
      out.residual_H = std::abs(hv.value);
      out.scale_G = gv.scale;
      out.scale_H = hv.scale;
    }
    if (within(gv, kTarget * opts.tol) && within(hv, kTarget * opts.tol)) break;
    (hv.value > 0.0 ? lo : hi) = tm;
  }
  if (!(best_merit <= opts.tol)) {
    std::ostringstream os;
    os << "pair projection: residuals |G| = " << out.residual_G << ", |H| = " << out.residual_H
       << " above tolerance at (" << out.s0 << ", " << out.t0 << ")";
    throw ConvergenceError(os.str());
  }
  return out;
}

Balance<double> ray_maximality_excess(const WorkingGraph& g, const ModelParams& params,
                                      const Eigen::VectorXd& u, double t0, int points) {
  const double at_root = energy(g, params, Eigen::VectorXd(t0 * u)).total;
  double worst = -std::numeric_limits<double>::infinity();
  double scale = std::abs(at_root);
  for (int i = 1; i <= points; ++i) {
    const double t = 2.0 * t0 * i / points;
    const double e = energy(g, params, Eigen::VectorXd(t * u)).total;
    worst = std::max(worst, e - at_root);
    scale = std::max(scale, std::abs(e) + std::abs(at_root));
  }
  return {worst, scale};
}

Balance<double> pair_maximality_excess(const WorkingGraph& g, const ModelParams& params,
                                       const Eigen::VectorXd& u, const PairProjection& proj,
                                       int points) {
  const Eigen::VectorXd up = pos_part(u);
  const Eigen::VectorXd um = neg_part(u);
  const double at_root = energy(g, params, Eigen::VectorXd(proj.s0 * up + proj.t0 * um)).total;
  double worst = -std::numeric_limits<double>::infinity();
  double scale = std::abs(at_root);
  const double step = (proj.beta - proj.alpha) / (points - 1);
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < points; ++j) {
      const double s = proj.alpha + step * i;
      const double t = proj.alpha + step * j;
      const double e = energy(g, params, Eigen::VectorXd(s * up + t * um)).total;
      worst = std::max(worst, e - at_root);
      scale = std::max(scale, std::abs(e) + std::abs(at_root));
    }
  }
  return {worst, scale};
}

}  // namespace graphkirchhoff
