#include "dex/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dex {

namespace {
constexpr double kKernelRelTol = 1e-9;
}

Graph::Graph(int node_count, std::vector<std::pair<int, int>> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  if (node_count_ <= 0) {
    throw std::invalid_argument("Graph: node_count must be positive");
  }
  adj_.resize(node_count_);
  for (auto& [a, b] : edges_) {
    if (a == b) {
      throw std::invalid_argument("Graph: self-loop at node " + std::to_string(a));
    }
    if (a < 0 || b < 0 || a >= node_count_ || b >= node_count_) {
      throw std::invalid_argument("Graph: edge endpoint out of range");
    }
    if (a > b) std::swap(a, b);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const auto& [a, b] : edges_) {
    adj_[a].push_back(b);
    adj_[b].push_back(a);
  }
  for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());

  // BFS from node 0.
  std::vector<char> seen(node_count_, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : adj_[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  connected_ = (reached == node_count_);
}

bool Graph::has_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(adj_[i].begin(), adj_[i].end(), j);
}

CommunicationMatrix::CommunicationMatrix(Graph graph, Matrix base, int block_dim)
    : graph_(std::move(graph)), base_(std::move(base)), block_dim_(block_dim) {
  const int l = graph_.node_count();
  if (base_.rows() != l || base_.cols() != l) {
    throw std::invalid_argument("CommunicationMatrix: base must be l x l");
  }
  if (block_dim_ < 0) {
    throw std::invalid_argument("CommunicationMatrix: block_dim must be nonnegative");
  }
  if (!base_.isApprox(base_.transpose(), 1e-12)) {
    throw std::invalid_argument("CommunicationMatrix: base must be symmetric");
  }
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j < l; ++j) {
      if (i != j && base_(i, j) != 0.0 && !graph_.has_edge(i, j)) {
        throw std::invalid_argument(
            "CommunicationMatrix: nonzero entry off the graph edge set at (" +
            std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }

  Eigen::SelfAdjointEigenSolver<Matrix> es(base_, Eigen::EigenvaluesOnly);
  const Vector ev = es.eigenvalues();
  const double lmax = ev(l - 1);
  const double tol = kKernelRelTol * std::max(lmax, 1.0);
  if (ev(0) < -tol) {
    throw std::invalid_argument("CommunicationMatrix: base is not PSD");
  }
  int kernel_dim = 0;
  for (int i = 0; i < l; ++i) {
    if (ev(i) <= tol) ++kernel_dim;
  }
  const double ones_residual = (base_ * Vector::Ones(l)).norm();
  if (kernel_dim != 1 || ones_residual > tol * std::sqrt(double(l))) {
    throw std::invalid_argument(
        "CommunicationMatrix: kernel must be exactly span{1} (graph connected)");
  }

  rows_.resize(l);
  for (int i = 0; i < l; ++i) {
    if (base_(i, i) != 0.0) rows_[i].emplace_back(i, base_(i, i));
    for (int j : graph_.neighbors(i)) {
      if (base_(i, j) != 0.0) rows_[i].emplace_back(j, base_(i, j));
    }
    std::sort(rows_[i].begin(), rows_[i].end());
  }
}

Vector CommunicationMatrix::apply(const Vector& v) const {
  Vector out(v.size());
  apply_into(v, out);
  return out;
}

void CommunicationMatrix::apply_into(const Vector& v, Vector& out) const {
  const int l = graph_.node_count();
  const int d = block_dim_;
  if (v.size() != static_cast<Eigen::Index>(l) * d) {
    throw std::invalid_argument("lifted matvec: vector length must be l * block_dim");
  }
  out.resize(v.size());
  ++apply_count_;
  if (d == 0) return;
  for (int i = 0; i < l; ++i) {
    auto dst = out.segment(static_cast<Eigen::Index>(i) * d, d);
    dst.setZero();
    for (const auto& [j, w] : rows_[i]) {
      dst.noalias() += w * v.segment(static_cast<Eigen::Index>(j) * d, d);
    }
  }
}

CommunicationMatrix CommunicationMatrix::with_block_dim(int d) const {
  return CommunicationMatrix(graph_, base_, d);
}

CommunicationMatrix laplacian(const Graph& graph, int block_dim) {
  if (!graph.connected()) {
    throw std::invalid_argument("laplacian: graph must be connected");
  }
  const int l = graph.node_count();
  Matrix w = Matrix::Zero(l, l);
  for (int i = 0; i < l; ++i) w(i, i) = graph.degree(i);
  for (const auto& [a, b] : graph.edges()) {
    w(a, b) = -1.0;
    w(b, a) = -1.0;
  }
  return CommunicationMatrix(graph, std::move(w), block_dim);
}

SpectralInfo spectral(const CommunicationMatrix& m) {
  const int l = m.graph().node_count();
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.base(), Eigen::EigenvaluesOnly);
  const Vector ev = es.eigenvalues();
  const double lmax = ev(l - 1);
  const double tol = 1e-9 * std::max(lmax, 1.0);
  int kernel_dim = 0;
  double lmin_pos = 0.0;
  for (int i = 0; i < l; ++i) {
    if (ev(i) <= tol) {
      ++kernel_dim;
    } else if (lmin_pos == 0.0) {
      lmin_pos = ev(i);
    }
  }
  if (kernel_dim != 1) {
    throw std::runtime_error(
        "spectral: numerical kernel dimension " + std::to_string(kernel_dim) +
        " != 1 (disconnected graph?)");
  }
  return {lmax, lmin_pos};
}

MatrixStats matrix_stats(const Matrix& a) {
  if (a.size() == 0 || a.lpNorm<Eigen::Infinity>() == 0.0) {
    throw std::invalid_argument("matrix_stats: zero matrix has no positive singular values");
  }
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector sv = svd.singularValues();
  const double smax = sv(0);
  const double tol = 1e-12 * smax;
  double smin_pos = smax;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) smin_pos = sv(i);
  }
  return {smax, smin_pos, smax / smin_pos};
}

}  // namespace dex
