#include "graphkirchhoff/calculus.hpp"

#include <Eigen/Eigenvalues>

namespace graphkirchhoff {

double embedding_constant(const WorkingGraph& g, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("embedding constant needs q >= 1");
  const double total = g.mu().sum();
  double mu_min = std::numeric_limits<double>::infinity();
  for (Index x : g.interior()) mu_min = std::min(mu_min, g.mu()(x));
  const double exponent = std::isinf(q) ? 0.0 : 1.0 / q;
  return std::pow(total, exponent) / std::sqrt(mu_min);
}

double poincare_eigenvalue(const WorkingGraph& g) {
  const Eigen::MatrixXd L = g.interior_stiffness();
  Eigen::VectorXd m(g.interior_size());
  for (Index a = 0; a < g.interior_size(); ++a) m(a) = g.mu()(g.interior()[static_cast<std::size_t>(a)]);
  // Symmetric scaling M^{-1/2} L M^{-1/2} has the same spectrum.
  const Eigen::VectorXd s = m.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd scaled = s.asDiagonal() * L * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double poincare_embedding_constant(const WorkingGraph& g, double q) {
  return embedding_constant(g, q) / std::sqrt(poincare_eigenvalue(g));
}

}  // namespace graphkirchhoff
