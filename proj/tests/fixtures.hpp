#pragma once

#include "graphkirchhoff/graph.hpp"
#include "graphkirchhoff/params.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace fixtures {

using graphkirchhoff::Domain;
using graphkirchhoff::WeightedGraph;
using graphkirchhoff::WorkingGraph;

inline std::string vid(int i) { return "v" + std::to_string(i); }

// Path v0 - v1 - ... - v{n-1}; endpoints are the boundary.
inline std::pair<WeightedGraph, Domain> path(int n, double mu = 1.0, double w = 1.0) {
  WeightedGraph gr;
  Domain dom;
  for (int i = 0; i < n; ++i) gr.vertices.push_back({vid(i), mu});
  for (int i = 0; i + 1 < n; ++i) gr.edges.push_back({vid(i), vid(i + 1), w});
  dom.boundary = {vid(0), vid(n - 1)};
  for (int i = 1; i + 1 < n; ++i) dom.interior.push_back(vid(i));
  return {gr, dom};
}

// Cycle v0 ... v5 with v0 and v3 on the boundary.
inline std::pair<WeightedGraph, Domain> cycle6() {
  WeightedGraph gr;
  Domain dom;
  for (int i = 0; i < 6; ++i) gr.vertices.push_back({vid(i), 1.0});
  for (int i = 0; i < 6; ++i) gr.edges.push_back({vid(i), vid((i + 1) % 6), 1.0});
  dom.boundary = {vid(0), vid(3)};
  dom.interior = {vid(1), vid(2), vid(4), vid(5)};
  return {gr, dom};
}

// Star with boundary centre c and five interior leaves.
inline std::pair<WeightedGraph, Domain> star5() {
  WeightedGraph gr;
  Domain dom;
  gr.vertices.push_back({"c", 1.0});
  dom.boundary = {"c"};
  for (int i = 1; i <= 5; ++i) {
    gr.vertices.push_back({vid(i), 1.0});
    gr.edges.push_back({"c", vid(i), 1.0});
    dom.interior.push_back(vid(i));
  }
  return {gr, dom};
}

// n × n interior grid with a boundary frame (corners of the frame omitted).
inline std::pair<WeightedGraph, Domain> framed_grid(int n) {
  WeightedGraph gr;
  Domain dom;
  auto name = [](int r, int c) { return "g" + std::to_string(r) + "_" + std::to_string(c); };
  auto corner = [n](int r, int c) { return (r == 0 || r == n + 1) && (c == 0 || c == n + 1); };
  for (int r = 0; r <= n + 1; ++r) {
    for (int c = 0; c <= n + 1; ++c) {
      if (corner(r, c)) continue;
      gr.vertices.push_back({name(r, c), 1.0});
      const bool inside = r >= 1 && r <= n && c >= 1 && c <= n;
      (inside ? dom.interior : dom.boundary).push_back(name(r, c));
    }
  }
  for (int r = 0; r <= n + 1; ++r) {
    for (int c = 0; c <= n + 1; ++c) {
      if (corner(r, c)) continue;
      const bool inside = r >= 1 && r <= n && c >= 1 && c <= n;
      if (c + 1 <= n + 1 && !corner(r, c + 1) && (inside || (r >= 1 && r <= n && c + 1 <= n)))
        gr.edges.push_back({name(r, c), name(r, c + 1), 1.0});
      if (r + 1 <= n + 1 && !corner(r + 1, c) && (inside || (c >= 1 && c <= n && r + 1 <= n)))
        gr.edges.push_back({name(r, c), name(r + 1, c), 1.0});
    }
  }
  return {gr, dom};
}

inline WorkingGraph build(const std::pair<WeightedGraph, Domain>& f) {
  return WorkingGraph::build(f.first, f.second);
}

// Closure-sized function from {id: value}; unlisted vertices are 0.
inline Eigen::VectorXd function(const WorkingGraph& g, const std::map<std::string, double>& values) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(g.size());
  for (const auto& [id, v] : values) u(*g.index_of(id)) = v;
  return u;
}

inline graphkirchhoff::Index at(const WorkingGraph& g, const std::string& id) { return *g.index_of(id); }

// a=1, b=0, λ=0, Q≡1, p=5, r=1.
inline graphkirchhoff::ModelParams basic(const WorkingGraph& g) {
  return graphkirchhoff::ModelParams::uniform(g, 1.0, 0.0, 0.0, 5.0, 1.0, 1, 1);
}

// a=1, b=0.5, λ=1, Q≡g≡1, p=5, r=1, k=2, m=1.
inline graphkirchhoff::ModelParams kirchhoff(const WorkingGraph& g) {
  return graphkirchhoff::ModelParams::uniform(g, 1.0, 0.5, 1.0, 5.0, 1.0, 2, 1);
}

}  // namespace fixtures
