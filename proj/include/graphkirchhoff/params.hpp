#pragma once

#include "graphkirchhoff/graph.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace graphkirchhoff {

// Coefficients of
//   −(a + b‖u‖²)Δu + λ g u^{2k/m−1} = Q |u|^{p−2} u ln|u|^r  in the interior,
//   u = 0 on the boundary.
// Q and g are closure-sized; only interior entries are read.
struct ModelParams {
  double a = 1.0;
  double b = 0.0;
  double lambda = 0.0;
  double p = 5.0;
  double r = 1.0;
  int k_exp = 1;
  int m_exp = 1;
  Eigen::VectorXd Q;
  Eigen::VectorXd g;

  // 2k/m, the exponent of the power-law potential.
  double power_exponent() const { return 2.0 * k_exp / m_exp; }

  // Constant Q and g on the interior of `graph`.
  static ModelParams uniform(const WorkingGraph& graph, double a, double b, double lambda, double p,
                             double r, int k_exp, int m_exp, double Q = 1.0, double g = 1.0);
};

std::vector<std::string> validate_params(const WorkingGraph& graph, const ModelParams& params);

// Throws ValidationError on any violation.
void require_valid(const WorkingGraph& graph, const ModelParams& params);

}  // namespace graphkirchhoff
