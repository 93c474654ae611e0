#include "graphkirchhoff/graph.hpp"

#include "graphkirchhoff/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <utility>

namespace graphkirchhoff {

namespace {

std::string fmt_edge(const std::string& a, const std::string& b) {
  return "'" + a + "'-'" + b + "'";
}

std::pair<std::string, std::string> unordered_key(const std::string& a, const std::string& b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

std::vector<std::string> validate(const WeightedGraph& graph, const Domain& dom) {
  std::vector<std::string> out;

  std::map<std::string, double> mu;
  for (const auto& v : graph.vertices) {
    if (v.id.empty()) {
      out.push_back("vertex with empty id");
      continue;
    }
    if (!mu.emplace(v.id, v.mu).second) {
      out.push_back("duplicate vertex id '" + v.id + "'");
      continue;
    }
    if (!(std::isfinite(v.mu) && v.mu > 0.0)) {
      std::ostringstream os;
      os << "vertex '" << v.id << "' has non-positive measure " << v.mu;
      out.push_back(os.str());
    }
  }

  std::map<std::string, std::vector<std::string>> adj;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& e : graph.edges) {
    bool known = true;
    for (const auto* end : {&e.u, &e.v}) {
      if (!mu.count(*end)) {
        out.push_back("edge " + fmt_edge(e.u, e.v) + " references unknown vertex '" + *end + "'");
        known = false;
      }
    }
    if (!known) continue;
    if (e.u == e.v) {
      out.push_back("self-loop at '" + e.u + "'");
      continue;
    }
    if (!seen.insert(unordered_key(e.u, e.v)).second) {
      out.push_back("duplicate edge " + fmt_edge(e.u, e.v));
      continue;
    }
    if (!(std::isfinite(e.w) && e.w > 0.0)) {
      std::ostringstream os;
      os << "edge " << fmt_edge(e.u, e.v) << " has non-positive weight " << e.w;
      out.push_back(os.str());
    }
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }

  std::set<std::string> interior;
  std::set<std::string> boundary;
  if (dom.interior.empty()) out.push_back("interior is empty");
  for (const auto& id : dom.interior) {
    if (!mu.count(id)) out.push_back("interior vertex '" + id + "' is not a graph vertex");
    if (!interior.insert(id).second) out.push_back("interior vertex '" + id + "' listed twice");
  }
  for (const auto& id : dom.boundary) {
    if (!mu.count(id)) out.push_back("boundary vertex '" + id + "' is not a graph vertex");
    if (!boundary.insert(id).second) out.push_back("boundary vertex '" + id + "' listed twice");
    if (interior.count(id)) out.push_back("vertex '" + id + "' is both interior and boundary");
  }

  auto in_working = [&](const std::string& id) {
    return interior.count(id) != 0 || boundary.count(id) != 0;
  };
  for (const auto& id : interior) {
    for (const auto& nb : adj[id]) {
      if (!in_working(nb)) {
        out.push_back("interior vertex '" + id + "' has neighbor '" + nb +
                      "' outside interior ∪ boundary");
      }
    }
  }
  for (const auto& id : boundary) {
    if (interior.count(id)) continue;
    bool touches_interior = false;
    for (const auto& nb : adj[id]) {
      if (interior.count(nb)) touches_interior = true;
      if (!in_working(nb)) {
        out.push_back("boundary vertex '" + id + "' has edge to '" + nb +
                      "' outside the working set");
      }
    }
    if (!touches_interior) {
      out.push_back("boundary vertex '" + id + "' has no interior neighbor");
    }
  }
  return out;
}

WorkingGraph WorkingGraph::build(const WeightedGraph& graph, const Domain& dom) {
  if (auto violations = validate(graph, dom); !violations.empty()) {
    std::string msg = "invalid graph/domain:";
    for (const auto& v : violations) msg += "\n  - " + v;
    throw ValidationError(msg);
  }

  WorkingGraph g;
  std::set<std::string> interior(dom.interior.begin(), dom.interior.end());
  std::set<std::string> working = interior;
  working.insert(dom.boundary.begin(), dom.boundary.end());

  g.ids_.assign(working.begin(), working.end());
  const auto n = static_cast<Index>(g.ids_.size());
  for (Index i = 0; i < n; ++i) g.lookup_.emplace(g.ids_[static_cast<std::size_t>(i)], i);

  g.mu_.resize(n);
  for (const auto& v : graph.vertices) {
    if (auto it = g.lookup_.find(v.id); it != g.lookup_.end()) g.mu_(it->second) = v.mu;
  }
  g.interior_mask_.assign(static_cast<std::size_t>(n), false);
  for (Index i = 0; i < n; ++i) {
    if (interior.count(g.ids_[static_cast<std::size_t>(i)])) {
      g.interior_mask_[static_cast<std::size_t>(i)] = true;
      g.interior_.push_back(i);
    } else {
      g.boundary_.push_back(i);
    }
  }

  g.adjacency_.assign(static_cast<std::size_t>(n), {});
  for (const auto& e : graph.edges) {
    auto iu = g.lookup_.find(e.u);
    auto iv = g.lookup_.find(e.v);
    if (iu == g.lookup_.end() || iv == g.lookup_.end()) continue;
    Index i = std::min(iu->second, iv->second);
    Index j = std::max(iu->second, iv->second);
    g.edges_.push_back({i, j, e.w});
  }
  std::sort(g.edges_.begin(), g.edges_.end(), [](const WorkingEdge& x, const WorkingEdge& y) {
    return std::tie(x.i, x.j) < std::tie(y.i, y.j);
  });

  g.stiffness_ = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges_) {
    g.adjacency_[static_cast<std::size_t>(e.i)].push_back({e.j, e.w});
    g.adjacency_[static_cast<std::size_t>(e.j)].push_back({e.i, e.w});
    g.stiffness_(e.i, e.i) += e.w;
    g.stiffness_(e.j, e.j) += e.w;
    g.stiffness_(e.i, e.j) -= e.w;
    g.stiffness_(e.j, e.i) -= e.w;
  }
  for (auto& nbrs : g.adjacency_) {
    std::sort(nbrs.begin(), nbrs.end(),
              [](const Neighbor& x, const Neighbor& y) { return x.index < y.index; });
  }
  return g;
}

std::optional<Index> WorkingGraph::index_of(const std::string& id) const {
  if (auto it = lookup_.find(id); it != lookup_.end()) return it->second;
  return std::nullopt;
}

Eigen::MatrixXd WorkingGraph::interior_stiffness() const {
  const auto m = interior_size();
  Eigen::MatrixXd out(m, m);
  for (Index a = 0; a < m; ++a) {
    for (Index b = 0; b < m; ++b) {
      out(a, b) = stiffness_(interior_[static_cast<std::size_t>(a)],
                             interior_[static_cast<std::size_t>(b)]);
    }
  }
  return out;
}

Eigen::VectorXd WorkingGraph::embed(const Eigen::Ref<const Eigen::VectorXd>& interior_values) const {
  if (interior_values.size() != interior_size()) {
    throw std::invalid_argument("interior vector has wrong size");
  }
  Eigen::VectorXd u = Eigen::VectorXd::Zero(size());
  for (Index a = 0; a < interior_size(); ++a) {
    u(interior_[static_cast<std::size_t>(a)]) = interior_values(a);
  }
  return u;
}

Eigen::VectorXd WorkingGraph::restrict(const Eigen::Ref<const Eigen::VectorXd>& u) const {
  Eigen::VectorXd out(interior_size());
  for (Index a = 0; a < interior_size(); ++a) out(a) = u(interior_[static_cast<std::size_t>(a)]);
  return out;
}

WeightedGraph WorkingGraph::graph() const {
  WeightedGraph out;
  for (Index i = 0; i < size(); ++i) out.vertices.push_back({id(i), mu_(i)});
  for (const auto& e : edges_) out.edges.push_back({id(e.i), id(e.j), e.w});
  return out;
}

Domain WorkingGraph::domain() const {
  Domain out;
  for (Index i : interior_) out.interior.push_back(id(i));
  for (Index i : boundary_) out.boundary.push_back(id(i));
  return out;
}

}  // namespace graphkirchhoff
