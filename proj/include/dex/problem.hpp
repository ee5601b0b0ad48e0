#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dex/graph.hpp"
#include "dex/linalg.hpp"

namespace dex {

/// Axis-aligned box prod_i [lower_i, upper_i]. Bounds must be finite.
struct BoxSet {
  Vector lower;
  Vector upper;

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const Vector& v, double tol = 0.0) const;
  Vector clip(const Vector& v) const;
  Vector midpoint() const { return 0.5 * (lower + upper); }

  /// Euclidean diameter ||upper - lower||.
  double diameter() const { return (upper - lower).norm(); }

  /// max_{v in box} ||v||, attained at the corner with the larger |bound|
  /// per coordinate.
  double max_norm() const;
};

/// f(v) = 0.5 v' Q v + q' v over the joint vector v = (x^k; x~).
struct QuadraticForm {
  Matrix Q;
  Vector q;

  double eval(const Vector& v) const { return 0.5 * v.dot(Q * v) + q.dot(v); }
  Vector grad(const Vector& v) const { return Q * v + q; }
};

/// A smooth convex objective f^k(x^k, x~) given as an (eval, grad) pair.
///
/// The built-in quadratic family keeps its (Q, q) payload accessible so
/// that constants and the centralized oracle can work with exact data.
/// Custom objectives may declare gradient-norm bounds over the box; these
/// are required by compute_constants when no quadratic payload exists.
class ObjectiveFn {
 public:
  using EvalFn = std::function<double(const Vector& xk, const Vector& xt)>;
  using GradFn =
      std::function<std::pair<Vector, Vector>(const Vector& xk, const Vector& xt)>;

  static ObjectiveFn quadratic(Matrix q_mat, Vector q_vec);
  static ObjectiveFn custom(EvalFn eval, GradFn grad,
                            double grad_x_bound = -1.0,
                            double grad_xt_bound = -1.0);

  double eval(const Vector& xk, const Vector& xt) const;
  /// (grad w.r.t. x^k, grad w.r.t. x~).
  std::pair<Vector, Vector> grad(const Vector& xk, const Vector& xt) const;

  const QuadraticForm* quadratic_form() const {
    return quad_ ? &*quad_ : nullptr;
  }
  double declared_grad_x_bound() const { return grad_x_bound_; }
  double declared_grad_xt_bound() const { return grad_xt_bound_; }

 private:
  ObjectiveFn() = default;
  EvalFn eval_;
  GradFn grad_;
  std::optional<QuadraticForm> quad_;
  double grad_x_bound_ = -1.0;
  double grad_xt_bound_ = -1.0;
};

/// Agent k's private data: objective slice, constraint slices, box.
struct LocalBlock {
  int dim = 0;             // n_k
  ObjectiveFn objective = ObjectiveFn::quadratic(Matrix::Zero(0, 0), Vector::Zero(0));
  Matrix A;                // m x n_k
  Vector b;                // m
  Matrix C;                // h x n_k
  Vector d;                // h
  BoxSet box;              // n_k coordinates
  double lipschitz = 0.0;  // L_k
};

/// Shared-variable data known to every agent.
struct SharedBlock {
  int dim = 0;  // n~
  Matrix Atil;  // m~ x n~
  Vector btil;  // m~
  Matrix Ctil;  // h~ x n~
  Vector dtil;  // h~
  BoxSet box;   // n~ coordinates

  int mtil() const { return static_cast<int>(btil.size()); }
  int htil() const { return static_cast<int>(dtil.size()); }
};

/// The full decentralized problem instance. Immutable by convention after
/// construction; safe to share across concurrent readers.
struct ProblemSpec {
  std::vector<LocalBlock> agents;
  SharedBlock shared;
  int m = 0;  // coupled equality rows
  int h = 0;  // coupled inequality rows
  Graph graph{1, {}};

  int agent_count() const { return static_cast<int>(agents.size()); }
  int total_local_dim() const;  // n = sum n_k
  int shared_dim() const { return shared.dim; }

  /// Offset of agent k's block inside the stacked private vector x.
  int x_offset(int k) const;

  /// True when every agent objective carries a quadratic payload.
  bool all_quadratic() const;
};

/// Report-based validation of every type invariant (dimensions, boxes,
/// graph connectivity, gradient consistency on sampled points). Empty
/// result iff the spec is valid.
std::vector<std::string> validate(const ProblemSpec& spec);

/// sum_k f^k(x^k, x~) for a stacked x of length n.
double centralized_objective(const ProblemSpec& spec, const Vector& x, const Vector& xt);

struct CoupledResiduals {
  Vector eq;           // sum_k (A^k x^k - b^k), length m
  Vector ineq;         // sum_k (C^k x^k - d^k), length h
  Vector shared_eq;    // Atil x~ - btil, length m~
  Vector shared_ineq;  // Ctil x~ - dtil, length h~
};

CoupledResiduals coupled_residuals(const ProblemSpec& spec, const Vector& x,
                                   const Vector& xt);

}  // namespace dex
