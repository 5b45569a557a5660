#include "posinorm/lambert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace posinorm {

LambertSpec::LambertSpec(Partition partition_, Eigen::VectorXd u_, Eigen::VectorXd w_,
                         std::optional<double> support_threshold_)
    : partition(std::move(partition_)),
      u(std::move(u_)),
      w(std::move(w_)),
      support_threshold(support_threshold_) {
  const Eigen::Index n = partition.space()->size();
  if (u.size() != n || w.size() != n)
    throw std::invalid_argument("LambertSpec: u/w length mismatch");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(u(i) >= 0.0) || !(w(i) >= 0.0))
      throw std::invalid_argument("LambertSpec: u and w must be nonnegative");
  if (support_threshold && !(*support_threshold >= 0.0))
    throw std::invalid_argument("LambertSpec: support_threshold >= 0 required");
}

LambertMoments lambert_moments(const LambertSpec& spec) {
  LambertMoments mo;
  const Partition& p = spec.partition;
  mo.e_u = cond_exp(p, spec.u);
  mo.e_w = cond_exp(p, spec.w);
  mo.e_u2 = cond_exp(p, Eigen::VectorXd(spec.u.cwiseProduct(spec.u)));
  mo.e_w2 = cond_exp(p, Eigen::VectorXd(spec.w.cwiseProduct(spec.w)));
  mo.e_uw = cond_exp(p, Eigen::VectorXd(spec.u.cwiseProduct(spec.w)));

  auto thr = [&](const Eigen::VectorXd& f) {
    return spec.support_threshold ? *spec.support_threshold : default_support_threshold(f);
  };
  mo.p_set = support(mo.e_u, thr(mo.e_u));
  mo.q_set = support(mo.e_w, thr(mo.e_w));
  mo.r_set = support(mo.e_uw, thr(mo.e_uw));

  const Eigen::Index n = spec.space()->size();
  std::vector<char> in_p(static_cast<size_t>(n), 0), in_q(static_cast<size_t>(n), 0);
  for (Eigen::Index i : mo.p_set) in_p[static_cast<size_t>(i)] = 1;
  for (Eigen::Index i : mo.q_set) in_q[static_cast<size_t>(i)] = 1;
  mo.in_k.assign(static_cast<size_t>(n), 0);
  mo.multiplier = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (in_p[static_cast<size_t>(i)] && in_q[static_cast<size_t>(i)]) {
      mo.in_k[static_cast<size_t>(i)] = 1;
      mo.k_set.push_back(i);
      mo.multiplier(i) = 1.0 / (mo.e_u2(i) * mo.e_w2(i));
    }
  }
  return mo;
}

LinearOp build_lambert(const LambertSpec& spec) {
  const LinearOp e = expectation_matrix(spec.partition);
  const LinearOp mu = LinearOp::diagonal(spec.space(), spec.u);
  const LinearOp mw = LinearOp::diagonal(spec.space(), spec.w);
  return mw * e * mu;
}

LinearOp lambert_pinv(const LambertSpec& spec) {
  const LambertMoments mo = lambert_moments(spec);
  const LinearOp e = expectation_matrix(spec.partition);
  const LinearOp mu = LinearOp::diagonal(spec.space(), spec.u);
  const LinearOp mw = LinearOp::diagonal(spec.space(), spec.w);
  // T* = M_u E M_w; the multiplier kills atoms off K.
  return LinearOp::diagonal(spec.space(), mo.multiplier) * (mu * e * mw);
}

LinearOp lambert_cauchy_dual(const LambertSpec& spec) {
  const LambertMoments mo = lambert_moments(spec);
  return LinearOp::diagonal(spec.space(), mo.multiplier) * build_lambert(spec);
}

namespace {

struct ConditionParts {
  Eigen::VectorXd lhs;
  Eigen::VectorXd rhs;
  std::vector<Eigen::Index> k_set;
};

// On K all three moments of interest are positive except possibly E(uw).
// For 2n-4 < 0 the inequality is cleared to nonnegative exponents, which for
// n = 1 is exactly lambda^2 E(uw)^2 >= E(u^2) E(w^2).
ConditionParts dual_condition_parts(const LambertSpec& spec, long n) {
  if (n < 1) throw std::invalid_argument("dual condition: n >= 1 required");
  const LambertMoments mo = lambert_moments(spec);
  const Eigen::Index na = spec.space()->size();
  ConditionParts parts;
  parts.lhs = Eigen::VectorXd::Zero(na);
  parts.rhs = Eigen::VectorXd::Zero(na);
  parts.k_set = mo.k_set;
  for (Eigen::Index i : mo.k_set) {
    if (2 * n - 4 < 0) {
      parts.lhs(i) = mo.e_uw(i) * mo.e_uw(i);
      parts.rhs(i) = mo.e_u2(i) * mo.e_w2(i);
    } else {
      parts.lhs(i) = std::pow(mo.e_u2(i), double(2 * n - 3)) *
                     std::pow(mo.e_w2(i), double(2 * n - 3));
      parts.rhs(i) = (2 * n - 4 == 0) ? 1.0 : std::pow(mo.e_uw(i), double(2 * n - 4));
    }
  }
  return parts;
}

bool parts_hold(const ConditionParts& parts, double lambda_sq, double tol) {
  double mn = 0.0, mx = 0.0;
  bool first = true;
  for (Eigen::Index i : parts.k_set) {
    const double margin = lambda_sq * parts.lhs(i) - parts.rhs(i);
    mn = first ? margin : std::min(mn, margin);
    mx = first ? margin : std::max(mx, margin);
    first = false;
  }
  if (first) return true;  // empty K: nothing to check
  return mn >= -tol * std::max(1.0, mx);
}

double parts_threshold(const ConditionParts& parts) {
  double thr = 0.0;
  for (Eigen::Index i : parts.k_set) {
    if (parts.lhs(i) == 0.0) {
      if (parts.rhs(i) > 0.0) return std::numeric_limits<double>::infinity();
      continue;
    }
    thr = std::max(thr, parts.rhs(i) / parts.lhs(i));
  }
  return thr;
}

}  // namespace

bool dual_kq_np_condition(const LambertSpec& spec, long n, double lambda_sq, double tol) {
  if (!(lambda_sq > 0)) throw std::invalid_argument("dual_kq_np_condition: lambda_sq > 0");
  return parts_hold(dual_condition_parts(spec, n), lambda_sq, tol);
}

bool dual_posinormal_condition(const LambertSpec& spec, double lambda_sq, double tol) {
  return dual_kq_np_condition(spec, 1, lambda_sq, tol);
}

double dual_kq_np_threshold(const LambertSpec& spec, long n) {
  return parts_threshold(dual_condition_parts(spec, n));
}

double dual_posinormal_threshold(const LambertSpec& spec) {
  return dual_kq_np_threshold(spec, 1);
}

}  // namespace posinorm
