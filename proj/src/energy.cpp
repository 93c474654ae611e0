#include "graphkirchhoff/energy.hpp"

namespace graphkirchhoff {

Eigen::MatrixXd hessian(const WorkingGraph& g, const ModelParams& params, const Eigen::VectorXd& u) {
  check_function(g, u);
  const Eigen::MatrixXd L = g.interior_stiffness();
  const Eigen::VectorXd ui = g.restrict(u);
  const Eigen::VectorXd Lu = L * ui;
  const double coeff = params.a + params.b * ui.dot(Lu);
  const double q = params.power_exponent();

  Eigen::MatrixXd H = coeff * L + 2.0 * params.b * Lu * Lu.transpose();
  for (Index k = 0; k < g.interior_size(); ++k) {
    const Index x = g.interior()[static_cast<std::size_t>(k)];
    const double v = ui(k);
    if (v == 0.0) continue;
    const double av = std::abs(v);
    const double pot = params.lambda * params.g(x) * (q - 1.0) * std::pow(av, q - 2.0);
    const double nonlin =
        params.Q(x) * params.r * std::pow(av, params.p - 2.0) * ((params.p - 1.0) * std::log(av) + 1.0);
    H(k, k) += g.mu()(x) * (pot - nonlin);
  }
  return H;
}

double nodal_ratio(double s, double p, double r) {
  if (s == 0.0) throw std::invalid_argument("nodal_ratio is undefined at s = 0");
  const double as = std::abs(s);
  return std::pow(as, p - 2.0) * s * r * std::log(as) / (as * as * as);
}

}  // namespace graphkirchhoff
