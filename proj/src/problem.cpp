#include "dex/problem.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace dex {

bool BoxSet::contains(const Vector& v, double tol) const {
  if (v.size() != lower.size()) return false;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) < lower(i) - tol || v(i) > upper(i) + tol) return false;
  }
  return true;
}

Vector BoxSet::clip(const Vector& v) const {
  return v.cwiseMax(lower).cwiseMin(upper);
}

double BoxSet::max_norm() const {
  double s = 0.0;
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    s += std::pow(std::max(std::abs(lower(i)), std::abs(upper(i))), 2);
  }
  return std::sqrt(s);
}

ObjectiveFn ObjectiveFn::quadratic(Matrix q_mat, Vector q_vec) {
  if (q_mat.rows() != q_mat.cols() || q_mat.rows() != q_vec.size()) {
    throw std::invalid_argument("quadratic objective: Q must be square and match q");
  }
  ObjectiveFn f;
  f.quad_ = QuadraticForm{std::move(q_mat), std::move(q_vec)};
  return f;
}

ObjectiveFn ObjectiveFn::custom(EvalFn eval, GradFn grad, double grad_x_bound,
                                double grad_xt_bound) {
  ObjectiveFn f;
  f.eval_ = std::move(eval);
  f.grad_ = std::move(grad);
  f.grad_x_bound_ = grad_x_bound;
  f.grad_xt_bound_ = grad_xt_bound;
  return f;
}

double ObjectiveFn::eval(const Vector& xk, const Vector& xt) const {
  if (quad_) {
    Vector v(xk.size() + xt.size());
    v << xk, xt;
    return quad_->eval(v);
  }
  return eval_(xk, xt);
}

std::pair<Vector, Vector> ObjectiveFn::grad(const Vector& xk, const Vector& xt) const {
  if (quad_) {
    Vector v(xk.size() + xt.size());
    v << xk, xt;
    Vector g = quad_->grad(v);
    return {g.head(xk.size()), g.tail(xt.size())};
  }
  return grad_(xk, xt);
}

int ProblemSpec::total_local_dim() const {
  int n = 0;
  for (const auto& a : agents) n += a.dim;
  return n;
}

int ProblemSpec::x_offset(int k) const {
  int off = 0;
  for (int i = 0; i < k; ++i) off += agents[i].dim;
  return off;
}

bool ProblemSpec::all_quadratic() const {
  for (const auto& a : agents) {
    if (a.objective.quadratic_form() == nullptr) return false;
  }
  return true;
}

namespace {

void check_box(const BoxSet& box, int dim, const std::string& who,
               std::vector<std::string>& out) {
  if (box.lower.size() != box.upper.size()) {
    out.push_back(who + ": box lower/upper lengths differ");
    return;
  }
  if (box.dim() != dim) {
    out.push_back(who + ": box length " + std::to_string(box.dim()) +
                  " != dim " + std::to_string(dim));
    return;
  }
  for (int i = 0; i < dim; ++i) {
    if (!std::isfinite(box.lower(i)) || !std::isfinite(box.upper(i))) {
      out.push_back(who + ": box bounds must be finite (coordinate " +
                    std::to_string(i) + ")");
    } else if (box.lower(i) > box.upper(i)) {
      out.push_back(who + ": box lower > upper at coordinate " + std::to_string(i));
    }
  }
}

// Gradient-vs-central-difference and midpoint-convexity spot checks on a
// few deterministic sample points inside the boxes.
void check_objective(const LocalBlock& agent, const BoxSet& shared_box, int k,
                     std::vector<std::string>& out) {
  std::mt19937_64 rng(0x5eed0000u + static_cast<unsigned>(k));
  std::uniform_real_distribution<double> u01(0.05, 0.95);
  const int nk = agent.dim;
  const int nt = shared_box.dim();
  auto sample = [&](const BoxSet& box) {
    Vector v(box.dim());
    for (int i = 0; i < box.dim(); ++i) {
      v(i) = box.lower(i) + u01(rng) * (box.upper(i) - box.lower(i));
    }
    return v;
  };
  const double fd_tol = 1e-4;
  for (int trial = 0; trial < 3; ++trial) {
    Vector xk = sample(agent.box);
    Vector xt = sample(shared_box);
    auto [gx, gxt] = agent.objective.grad(xk, xt);
    if (gx.size() != nk || gxt.size() != nt) {
      out.push_back("agent " + std::to_string(k) + ": gradient block lengths (" +
                    std::to_string(gx.size()) + "," + std::to_string(gxt.size()) +
                    ") do not match (n_k, n~)");
      return;
    }
    const double scale =
        std::max({1.0, xk.size() ? xk.cwiseAbs().maxCoeff() : 0.0,
                  xt.size() ? xt.cwiseAbs().maxCoeff() : 0.0});
    const double step = 1e-6 * scale;
    for (int i = 0; i < nk; ++i) {
      Vector xp = xk, xm = xk;
      xp(i) += step;
      xm(i) -= step;
      const double fd =
          (agent.objective.eval(xp, xt) - agent.objective.eval(xm, xt)) / (2 * step);
      if (std::abs(fd - gx(i)) > fd_tol * (1.0 + std::abs(fd))) {
        out.push_back("agent " + std::to_string(k) +
                      ": gradient disagrees with finite differences (x^k coordinate " +
                      std::to_string(i) + ")");
        return;
      }
    }
    for (int i = 0; i < nt; ++i) {
      Vector xp = xt, xm = xt;
      xp(i) += step;
      xm(i) -= step;
      const double fd =
          (agent.objective.eval(xk, xp) - agent.objective.eval(xk, xm)) / (2 * step);
      if (std::abs(fd - gxt(i)) > fd_tol * (1.0 + std::abs(fd))) {
        out.push_back("agent " + std::to_string(k) +
                      ": gradient disagrees with finite differences (x~ coordinate " +
                      std::to_string(i) + ")");
        return;
      }
    }
    // Midpoint convexity between two sampled points.
    Vector xk2 = sample(agent.box), xt2 = sample(shared_box);
    const double fa = agent.objective.eval(xk, xt);
    const double fb = agent.objective.eval(xk2, xt2);
    const double fm = agent.objective.eval(0.5 * (xk + xk2), 0.5 * (xt + xt2));
    if (fm > 0.5 * (fa + fb) + 1e-8 * (1.0 + std::abs(fa) + std::abs(fb))) {
      out.push_back("agent " + std::to_string(k) + ": midpoint convexity violated");
      return;
    }
  }
}

}  // namespace

std::vector<std::string> validate(const ProblemSpec& spec) {
  std::vector<std::string> out;
  const int l = spec.agent_count();
  if (l == 0) {
    out.push_back("spec: at least one agent required");
    return out;
  }
  if (spec.graph.node_count() != l) {
    out.push_back("graph: node count " + std::to_string(spec.graph.node_count()) +
                  " != agent count " + std::to_string(l));
  }
  if (!spec.graph.connected()) {
    out.push_back("graph: not connected");
  }
  for (int k = 0; k < l; ++k) {
    const auto& a = spec.agents[k];
    const std::string who = "agent " + std::to_string(k);
    if (a.dim <= 0) out.push_back(who + ": dim must be positive");
    if (a.A.rows() != spec.m || a.A.cols() != a.dim) {
      out.push_back(who + ": A is " + std::to_string(a.A.rows()) + "x" +
                    std::to_string(a.A.cols()) + ", expected " + std::to_string(spec.m) +
                    "x" + std::to_string(a.dim));
    }
    if (a.b.size() != spec.m) out.push_back(who + ": b length != m");
    if (a.C.rows() != spec.h || a.C.cols() != a.dim) {
      out.push_back(who + ": C is " + std::to_string(a.C.rows()) + "x" +
                    std::to_string(a.C.cols()) + ", expected " + std::to_string(spec.h) +
                    "x" + std::to_string(a.dim));
    }
    if (a.d.size() != spec.h) out.push_back(who + ": d length != h");
    if (a.lipschitz < 0) out.push_back(who + ": lipschitz must be nonnegative");
    check_box(a.box, a.dim, who + " box", out);
  }
  const auto& s = spec.shared;
  if (s.dim < 0) out.push_back("shared: dim must be nonnegative");
  if (s.Atil.rows() != s.btil.size() || (s.Atil.size() > 0 && s.Atil.cols() != s.dim)) {
    out.push_back("shared: Atil/btil dimensions inconsistent with n~");
  }
  if (s.Ctil.rows() != s.dtil.size() || (s.Ctil.size() > 0 && s.Ctil.cols() != s.dim)) {
    out.push_back("shared: Ctil/dtil dimensions inconsistent with n~");
  }
  check_box(s.box, s.dim, "shared box", out);

  // Gradient spot checks only make sense once the shapes line up.
  if (out.empty()) {
    for (int k = 0; k < l; ++k) {
      check_objective(spec.agents[k], s.box, k, out);
    }
  }
  return out;
}

double centralized_objective(const ProblemSpec& spec, const Vector& x, const Vector& xt) {
  if (x.size() != spec.total_local_dim() || xt.size() != spec.shared_dim()) {
    throw std::invalid_argument("centralized_objective: dimension mismatch");
  }
  double total = 0.0;
  int off = 0;
  for (const auto& a : spec.agents) {
    total += a.objective.eval(x.segment(off, a.dim), xt);
    off += a.dim;
  }
  return total;
}

CoupledResiduals coupled_residuals(const ProblemSpec& spec, const Vector& x,
                                   const Vector& xt) {
  if (x.size() != spec.total_local_dim() || xt.size() != spec.shared_dim()) {
    throw std::invalid_argument("coupled_residuals: dimension mismatch");
  }
  CoupledResiduals r;
  r.eq = Vector::Zero(spec.m);
  r.ineq = Vector::Zero(spec.h);
  int off = 0;
  for (const auto& a : spec.agents) {
    const auto xk = x.segment(off, a.dim);
    r.eq.noalias() += a.A * xk;
    r.eq -= a.b;
    r.ineq.noalias() += a.C * xk;
    r.ineq -= a.d;
    off += a.dim;
  }
  r.shared_eq = spec.shared.Atil * xt - spec.shared.btil;
  r.shared_ineq = spec.shared.Ctil * xt - spec.shared.dtil;
  return r;
}

}  // namespace dex
