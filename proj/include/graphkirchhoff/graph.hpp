#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace graphkirchhoff {

using Index = Eigen::Index;

struct Vertex {
  std::string id;
  double mu = 1.0;
};

struct Edge {
  std::string u;
  std::string v;
  double w = 1.0;
};

// Raw graph as ingested; nothing is checked until validate() or
// WorkingGraph::build().
struct WeightedGraph {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
};

// Partition of the working vertex set into the interior and the Dirichlet
// boundary.
struct Domain {
  std::vector<std::string> interior;
  std::vector<std::string> boundary;
};

// Returns one human-readable line per violated invariant; empty iff the pair
// describes a finite weighted graph with a well-formed Dirichlet domain.
std::vector<std::string> validate(const WeightedGraph& graph, const Domain& dom);

struct Neighbor {
  Index index;
  double w;
};

struct WorkingEdge {
  Index i;  // i < j
  Index j;
  double w;
};

// The induced subgraph on interior ∪ boundary, with vertices sorted by id.
// Every vertex-indexed vector in the library (functions, measures, fields)
// uses this ordering, so all sums are evaluated in a fixed order.
class WorkingGraph {
 public:
  // Throws ValidationError listing every violation reported by validate().
  static WorkingGraph build(const WeightedGraph& graph, const Domain& dom);

  Index size() const { return static_cast<Index>(ids_.size()); }
  Index interior_size() const { return static_cast<Index>(interior_.size()); }

  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& id(Index i) const { return ids_[static_cast<std::size_t>(i)]; }
  std::optional<Index> index_of(const std::string& id) const;

  const Eigen::VectorXd& mu() const { return mu_; }
  bool is_interior(Index i) const { return interior_mask_[static_cast<std::size_t>(i)]; }
  const std::vector<Index>& interior() const { return interior_; }
  const std::vector<Index>& boundary() const { return boundary_; }

  // Neighbors sorted by index.
  const std::vector<Neighbor>& neighbors(Index i) const {
    return adjacency_[static_cast<std::size_t>(i)];
  }
  const std::vector<WorkingEdge>& edges() const { return edges_; }

  // Dense weighted graph Laplacian over the working set, so that
  // u^T L v = Σ_edges w (u_j − u_i)(v_j − v_i).
  const Eigen::MatrixXd& stiffness() const { return stiffness_; }

  // Interior-block stiffness and measure, used by the Newton polish and the
  // Poincaré constant.
  Eigen::MatrixXd interior_stiffness() const;

  // Closure-sized vector from interior coordinates (boundary entries zero).
  Eigen::VectorXd embed(const Eigen::Ref<const Eigen::VectorXd>& interior_values) const;
  Eigen::VectorXd restrict(const Eigen::Ref<const Eigen::VectorXd>& u) const;

  // Reconstructs the input pair (sorted), used for serialization.
  WeightedGraph graph() const;
  Domain domain() const;

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, Index> lookup_;
  Eigen::VectorXd mu_;
  std::vector<bool> interior_mask_;
  std::vector<Index> interior_;
  std::vector<Index> boundary_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<WorkingEdge> edges_;
  Eigen::MatrixXd stiffness_;
};

// Throws std::invalid_argument unless u is a closure-sized vector that is
// zero on every boundary vertex.
template <typename Derived>
void check_function(const WorkingGraph& g, const Eigen::MatrixBase<Derived>& u) {
  if (u.cols() != 1 || u.rows() != g.size()) {
    throw std::invalid_argument("graph function has " + std::to_string(u.rows()) +
                                " entries, working graph has " + std::to_string(g.size()) +
                                " vertices");
  }
  for (Index b : g.boundary()) {
    if (u(b) != typename Derived::Scalar(0)) {
      throw std::invalid_argument("graph function is nonzero on boundary vertex '" + g.id(b) +
                                  "'");
    }
  }
}

}  // namespace graphkirchhoff
