#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dex/linalg.hpp"

namespace dex {

/// Undirected communication graph on nodes 0..l-1.
///
/// Self-loops and out-of-range indices are rejected at construction.
/// Connectivity is computed at construction and queried by consumers;
/// operations that require a connected graph (laplacian, spectral) throw
/// on a disconnected one, while problem validation merely reports it.
class Graph {
 public:
  Graph(int node_count, std::vector<std::pair<int, int>> edges);

  int node_count() const { return node_count_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  /// Neighbor lists, sorted ascending. Fixed iteration order keeps every
  /// neighbor-exchange bitwise deterministic.
  const std::vector<int>& neighbors(int i) const { return adj_[i]; }
  int degree(int i) const { return static_cast<int>(adj_[i].size()); }
  bool has_edge(int i, int j) const;
  bool connected() const { return connected_; }

 private:
  int node_count_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
  bool connected_;
};

struct SpectralInfo {
  double lambda_max = 0.0;
  double lambda_min_pos = 0.0;
};

struct MatrixStats {
  double sigma_max = 0.0;
  double sigma_min_pos = 0.0;
  double chi = 0.0;
};

/// A gossip matrix W together with its Kronecker lift W (x) I_d.
///
/// The base must satisfy: symmetric PSD, zero off-diagonal outside graph
/// edges, and kernel = span{1} (rank l-1). The lift is never materialized;
/// apply() mixes length-d blocks along graph edges only, which is the sole
/// inter-agent communication primitive of the simulator. block_dim may be 0
/// (degenerate lift over empty blocks); apply() is then a counted no-op.
class CommunicationMatrix {
 public:
  CommunicationMatrix(Graph graph, Matrix base, int block_dim);

  const Graph& graph() const { return graph_; }
  const Matrix& base() const { return base_; }
  int block_dim() const { return block_dim_; }

  /// (W (x) I_d) v. Block i of the result accumulates base(i,j) * block_j
  /// over j in {i} union neighbors(i), in ascending j.
  Vector apply(const Vector& v) const;
  void apply_into(const Vector& v, Vector& out) const;

  /// Number of base-matrix applications performed so far (instrumentation
  /// for communication audits).
  std::uint64_t apply_count() const { return apply_count_; }
  void reset_apply_count() { apply_count_ = 0; }

  /// Same base, different block dimension.
  CommunicationMatrix with_block_dim(int d) const;

 private:
  Graph graph_;
  Matrix base_;
  int block_dim_;
  // Per-row nonzero entries (col, value), ascending col, diagonal included.
  std::vector<std::vector<std::pair<int, double>>> rows_;
  mutable std::uint64_t apply_count_ = 0;
};

/// Unnormalized graph Laplacian: deg(i) on the diagonal, -1 across edges.
CommunicationMatrix laplacian(const Graph& graph, int block_dim = 1);

/// lambda_max and lambda_min^+ of the base matrix. By the Kronecker
/// identity these equal the lifted matrix's values for any block_dim.
/// Throws if more than one eigenvalue sits in the numerical kernel
/// (disconnected graph).
SpectralInfo spectral(const CommunicationMatrix& m);

/// sigma_max, sigma_min^+ and chi = sigma_max / sigma_min^+ of a dense
/// matrix. Throws on an all-zero matrix.
MatrixStats matrix_stats(const Matrix& a);

}  // namespace dex
