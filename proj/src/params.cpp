#include "graphkirchhoff/params.hpp"

#include "graphkirchhoff/error.hpp"

#include <cmath>
#include <sstream>

namespace graphkirchhoff {

ModelParams ModelParams::uniform(const WorkingGraph& graph, double a, double b, double lambda,
                                 double p, double r, int k_exp, int m_exp, double Q, double g) {
  ModelParams out;
  out.a = a;
  out.b = b;
  out.lambda = lambda;
  out.p = p;
  out.r = r;
  out.k_exp = k_exp;
  out.m_exp = m_exp;
  out.Q = Eigen::VectorXd::Zero(graph.size());
  out.g = Eigen::VectorXd::Zero(graph.size());
  for (Index x : graph.interior()) {
    out.Q(x) = Q;
    out.g(x) = g;
  }
  return out;
}

std::vector<std::string> validate_params(const WorkingGraph& graph, const ModelParams& params) {
  std::vector<std::string> out;
  auto bad = [&](const std::string& what, double value) {
    std::ostringstream os;
    os << what << " (got " << value << ")";
    out.push_back(os.str());
  };
  if (!(std::isfinite(params.a) && params.a > 0.0)) bad("a must be > 0", params.a);
  if (!(std::isfinite(params.b) && params.b >= 0.0)) bad("b must be >= 0", params.b);
  if (!(std::isfinite(params.lambda) && params.lambda >= 0.0)) bad("lambda must be >= 0", params.lambda);
  if (!(std::isfinite(params.p) && params.p > 4.0)) bad("p must be > 4", params.p);
  if (!(std::isfinite(params.r) && params.r >= 1.0)) bad("r must be >= 1", params.r);
  if (params.k_exp < 1) bad("k must be a positive integer", params.k_exp);
  if (params.m_exp < 1) bad("m must be a positive integer", params.m_exp);
  if (params.k_exp >= 1 && params.m_exp >= 1) {
    // 1 < 2k/m <= p, compared without division where possible.
    const double q = params.power_exponent();
    if (!(2 * params.k_exp > params.m_exp)) bad("2k/m must be > 1", q);
    if (!(q <= params.p)) bad("2k/m must be <= p", q);
  }
  for (const auto* field : {&params.Q, &params.g}) {
    const char* name = field == &params.Q ? "Q" : "g";
    if (field->size() != graph.size()) {
      out.push_back(std::string(name) + " must have one entry per working vertex");
      continue;
    }
    for (Index x : graph.interior()) {
      if (!(std::isfinite((*field)(x)) && (*field)(x) > 0.0)) {
        bad(std::string(name) + "('" + graph.id(x) + "') must be > 0", (*field)(x));
      }
    }
  }
  return out;
}

void require_valid(const WorkingGraph& graph, const ModelParams& params) {
  if (auto v = validate_params(graph, params); !v.empty()) {
    std::string msg = "invalid parameters:";
    for (const auto& s : v) msg += "\n  - " + s;
    throw ValidationError(msg);
  }
}

}  // namespace graphkirchhoff
