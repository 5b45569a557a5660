#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "posinorm/operator.hpp"
#include "posinorm/partition.hpp"

namespace posinorm {

/// Data for the conditional operator T f = w E(u f) with nonnegative u, w.
/// support_threshold is the absolute cutoff deciding where the conditional
/// moments count as nonzero; when absent, 1e-10 * max|.| is used per density.
struct LambertSpec {
  Partition partition;
  Eigen::VectorXd u;
  Eigen::VectorXd w;
  std::optional<double> support_threshold;

  LambertSpec(Partition partition_, Eigen::VectorXd u_, Eigen::VectorXd w_,
              std::optional<double> support_threshold_ = std::nullopt);

  const SpacePtr& space() const { return partition.space(); }
};

/// Block-constant conditional moments and the support sets they induce.
/// k_set is where both E(u) and E(w) are nonzero; the closed forms for the
/// pseudoinverse and Cauchy dual live there.
struct LambertMoments {
  Eigen::VectorXd e_u, e_w, e_u2, e_w2, e_uw;
  std::vector<Eigen::Index> p_set;  // support of E(u)
  std::vector<Eigen::Index> q_set;  // support of E(w)
  std::vector<Eigen::Index> k_set;  // p_set intersect q_set
  std::vector<Eigen::Index> r_set;  // support of E(uw)
  /// chi_K / (E(u^2) E(w^2)), zero off k_set.
  Eigen::VectorXd multiplier;
  std::vector<char> in_k;  // per-atom membership in k_set
};

LambertMoments lambert_moments(const LambertSpec& spec);

/// M_w E M_u as a matrix.
LinearOp build_lambert(const LambertSpec& spec);

/// Closed-form Moore-Penrose inverse M_{chi_K/(E(u^2)E(w^2))} T*.
LinearOp lambert_pinv(const LambertSpec& spec);

/// Closed-form Cauchy dual M_{chi_K/(E(u^2)E(w^2))} T.
LinearOp lambert_cauchy_dual(const LambertSpec& spec);

/// Pointwise condition on K deciding k-quasi n-power posinormality of the
/// Cauchy dual for every k >= 1 (and of its adjoint):
///   lambda^2 E(u^2)^{2n-3} E(w^2)^{2n-3} >= E(uw)^{2n-4}.
/// For n = 1 the inequality is evaluated in the cleared form
///   lambda^2 E(uw)^2 >= E(u^2) E(w^2).
bool dual_kq_np_condition(const LambertSpec& spec, long n, double lambda_sq,
                          double tol = kDefaultPsdTol);

/// The n = 1 case: lambda^2 E(uw)^2 >= E(u^2) E(w^2) on K. Blockwise
/// E(uw)^2 <= E(u^2) E(w^2) always (conditional Cauchy-Schwarz), so this can
/// only hold with lambda^2 >= 1, with equality demands exactly when u and w
/// are proportional on every K block. Diagnostic only; not enforced.
bool dual_posinormal_condition(const LambertSpec& spec, double lambda_sq,
                               double tol = kDefaultPsdTol);

/// Least lambda^2 satisfying the condition; 0 when K is empty, +infinity when
/// some K atom has E(uw) = 0 at n = 1.
double dual_kq_np_threshold(const LambertSpec& spec, long n);
double dual_posinormal_threshold(const LambertSpec& spec);

}  // namespace posinorm
