#pragma once

// Reference computations written directly from the defining formulas, on the
// raw graph description (no WorkingGraph, no library calculus). Tests compare
// the library against these.

#include "graphkirchhoff/graph.hpp"
#include "graphkirchhoff/params.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <string>

namespace oracle {

using Values = std::map<std::string, double>;

inline double value(const Values& u, const std::string& id) {
  auto it = u.find(id);
  return it == u.end() ? 0.0 : it->second;
}

// Σ over edges w (u(y) − u(x))².
inline double norm2(const graphkirchhoff::WeightedGraph& gr, const Values& u) {
  double acc = 0.0;
  for (const auto& e : gr.edges) {
    const double d = value(u, e.v) - value(u, e.u);
    acc += e.w * d * d;
  }
  return acc;
}

struct Scalars {
  double a, b, lambda, p, r, q;
  std::function<double(const std::string&)> Q, g;
};

// a/2‖u‖² + b/4‖u‖⁴ + (1/q)λΣμg|u|^q + (r/p²)ΣμQ|u|^p − (1/p)ΣμQ|u|^p r ln|u|.
inline double energy(const graphkirchhoff::WeightedGraph& gr, const graphkirchhoff::Domain& dom,
                     const Scalars& s, const Values& u) {
  const double n2 = norm2(gr, u);
  double local = 0.0;
  for (const auto& id : dom.interior) {
    double mu = 0.0;
    for (const auto& v : gr.vertices) {
      if (v.id == id) mu = v.mu;
    }
    const double x = std::abs(value(u, id));
    if (x == 0.0) continue;
    local += mu * (s.lambda * s.g(id) * std::pow(x, s.q) / s.q + s.Q(id) * s.r * std::pow(x, s.p) / (s.p * s.p) -
                   s.Q(id) * std::pow(x, s.p) * s.r * std::log(x) / s.p);
  }
  return s.a / 2 * n2 + s.b / 4 * n2 * n2 + local;
}

// Root of a continuous function with f(lo) > 0 > f(hi), by plain bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (f(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Maximum of a unimodal function on [lo, hi] by golden-section search.
inline double golden_max(const std::function<double(double)>& f, double lo, double hi) {
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 200; ++i) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return f(0.5 * (lo + hi));
}

}  // namespace oracle
