#pragma once

#include <Eigen/Core>

#include "posinorm/operator.hpp"
#include "posinorm/space.hpp"

namespace posinorm {

/// Data for W_T f = pi . (f o T); pi identically 1 gives the composition
/// operator C_T. The weight must be nonnegative.
struct WeightedCompositionSpec {
  PointMap map;
  Eigen::VectorXd weight;

  WeightedCompositionSpec(PointMap map_, Eigen::VectorXd weight_);
  static WeightedCompositionSpec unweighted(PointMap map_);

  const SpacePtr& space() const { return map.space(); }
  bool is_unweighted() const;
};

/// C_T as a matrix: row i has a single 1 in column T(i). Requires weight == 1.
LinearOp build_composition(const WeightedCompositionSpec& spec);

/// M_pi C_T.
LinearOp build_weighted_composition(const WeightedCompositionSpec& spec);

/// Orbit product pi_k = pi (pi o T) ... (pi o T^{k-1}); pi_0 is the constant 1.
Eigen::VectorXd pi_k(const WeightedCompositionSpec& spec, long k);

/// The four pointwise criteria below decide k-quasi n-power posinormality of
/// C_T / W_T and their adjoints on atomic spaces, provided T^j permutes the
/// atoms for every j <= max(k,n) (hard error otherwise). Each criterion is the
/// statement "lambda^2 * lhs(i) >= rhs(i) for every atom i" for the pair of
/// densities returned by criterion_parts; the verdict applies the same
/// tolerance rule as the direct PSD test, so the two routes agree.
enum class CriterionKind { kComposition, kCompositionAdjoint, kWeighted, kWeightedAdjoint };

struct CriterionParts {
  Eigen::VectorXd lhs;
  Eigen::VectorXd rhs;
};

CriterionParts criterion_parts(const WeightedCompositionSpec& spec, CriterionKind kind,
                               long k, long n);

/// Least lambda^2 satisfying the pointwise criterion; +infinity when an atom
/// has vanishing lhs but positive rhs, 0 when the criterion is vacuous.
double criterion_threshold(const CriterionParts& parts);

bool criterion_holds(const CriterionParts& parts, double lambda_sq,
                     double tol = kDefaultPsdTol);

bool ct_criterion(const WeightedCompositionSpec& spec, long k, long n, double lambda_sq,
                  double tol = kDefaultPsdTol);
bool ct_adjoint_criterion(const WeightedCompositionSpec& spec, long k, long n,
                          double lambda_sq, double tol = kDefaultPsdTol);
bool wt_criterion(const WeightedCompositionSpec& spec, long k, long n, double lambda_sq,
                  double tol = kDefaultPsdTol);
bool wt_adjoint_criterion(const WeightedCompositionSpec& spec, long k, long n,
                          double lambda_sq, double tol = kDefaultPsdTol);

}  // namespace posinorm
