#include "posinorm/composition.hpp"

#include <cmath>
#include <limits>

namespace posinorm {

WeightedCompositionSpec::WeightedCompositionSpec(PointMap map_, Eigen::VectorXd weight_)
    : map(std::move(map_)), weight(std::move(weight_)) {
  if (weight.size() != map.size())
    throw std::invalid_argument("WeightedCompositionSpec: weight length mismatch");
  for (Eigen::Index i = 0; i < weight.size(); ++i)
    if (!(weight(i) >= 0.0))
      throw std::invalid_argument("WeightedCompositionSpec: weight must be nonnegative");
}

WeightedCompositionSpec WeightedCompositionSpec::unweighted(PointMap map_) {
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(map_.size());
  return WeightedCompositionSpec(std::move(map_), std::move(ones));
}

bool WeightedCompositionSpec::is_unweighted() const {
  return (weight.array() == 1.0).all();
}

LinearOp build_composition(const WeightedCompositionSpec& spec) {
  if (!spec.is_unweighted())
    throw std::invalid_argument("build_composition: weight must be identically 1");
  const Eigen::Index n = spec.map.size();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, spec.map(i)) = 1.0;
  return LinearOp(spec.space(), std::move(m));
}

LinearOp build_weighted_composition(const WeightedCompositionSpec& spec) {
  const Eigen::Index n = spec.map.size();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, spec.map(i)) = spec.weight(i);
  return LinearOp(spec.space(), std::move(m));
}

Eigen::VectorXd pi_k(const WeightedCompositionSpec& spec, long k) {
  if (k < 0) throw std::invalid_argument("pi_k: k >= 0 required");
  const Eigen::Index n = spec.map.size();
  Eigen::VectorXd out = Eigen::VectorXd::Ones(n);
  std::vector<Eigen::Index> cur(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) cur[static_cast<size_t>(i)] = i;
  for (long q = 0; q < k; ++q) {
    for (Eigen::Index i = 0; i < n; ++i) {
      out(i) *= spec.weight(cur[static_cast<size_t>(i)]);
      cur[static_cast<size_t>(i)] = spec.map(cur[static_cast<size_t>(i)]);
    }
  }
  return out;
}

namespace {

void require_sigma_preserving(const PointMap& map, long k, long n) {
  const long jmax = std::max(k, n);
  for (long j = 1; j <= jmax; ++j)
    if (!is_sigma_preserving(map, j))
      throw std::invalid_argument(
          "criterion requires T^j to permute the atoms for all j <= max(k,n); failed at j = " +
          std::to_string(j));
}

Eigen::VectorXd pullback(const Eigen::VectorXd& f, const PointMap& t) {
  Eigen::VectorXd out(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) out(i) = f(t(i));
  return out;
}

}  // namespace

CriterionParts criterion_parts(const WeightedCompositionSpec& spec, CriterionKind kind,
                               long k, long n) {
  if (n < 1) throw std::invalid_argument("criterion_parts: n >= 1 required");
  if (k < 0) throw std::invalid_argument("criterion_parts: k >= 0 required");
  if ((kind == CriterionKind::kComposition || kind == CriterionKind::kCompositionAdjoint) &&
      !spec.is_unweighted())
    throw std::invalid_argument("composition criterion requires weight identically 1");
  require_sigma_preserving(spec.map, k, n);

  const Eigen::VectorXd hk = rn_derivative(spec.map, k);
  const Eigen::VectorXd hk1 = rn_derivative(spec.map, k + 1);
  const Eigen::VectorXd hn = rn_derivative(spec.map, n);

  CriterionParts parts;
  switch (kind) {
    case CriterionKind::kComposition: {
      // lambda^2 h_{k+1} >= h_k . (h_n o T^{n-k})
      const PointMap tnk = iterate_map_signed(spec.map, n - k);
      parts.lhs = hk1;
      parts.rhs = hk.cwiseProduct(pullback(hn, tnk));
      break;
    }
    case CriterionKind::kCompositionAdjoint: {
      // lambda^2 (h_{k+1} o T^{k+1}) >= (h_n . h_k) o T^k
      const PointMap tk1 = iterate_map(spec.map, k + 1);
      const PointMap tk = iterate_map(spec.map, k);
      parts.lhs = pullback(hk1, tk1);
      parts.rhs = pullback(Eigen::VectorXd(hn.cwiseProduct(hk)), tk);
      break;
    }
    case CriterionKind::kWeighted: {
      // lambda^2 h_{k+1} . (pi_{k+1}^2 o T^{-(k+1)})
      //   >= h_k . ((pi_k pi_n)^2 o T^{-k}) . (h_n o T^{n-k})
      const Eigen::VectorXd pk = pi_k(spec, k);
      const Eigen::VectorXd pk1 = pi_k(spec, k + 1);
      const Eigen::VectorXd pn = pi_k(spec, n);
      const PointMap tmk1 = iterate_map_signed(spec.map, -(k + 1));
      const PointMap tmk = iterate_map_signed(spec.map, -k);
      const PointMap tnk = iterate_map_signed(spec.map, n - k);
      parts.lhs = hk1.cwiseProduct(pullback(pk1, tmk1).cwiseAbs2());
      parts.rhs = hk.cwiseProduct(pullback(Eigen::VectorXd(pk.cwiseProduct(pn)), tmk).cwiseAbs2())
                      .cwiseProduct(pullback(hn, tnk));
      break;
    }
    case CriterionKind::kWeightedAdjoint: {
      // lambda^2 pi_{k+1}^2 . (h_{k+1} o T^{k+1})
      //   >= pi_k^2 . ((h_k h_n) o T^k) . (pi_n^2 o T^{k-n})
      const Eigen::VectorXd pk = pi_k(spec, k);
      const Eigen::VectorXd pk1 = pi_k(spec, k + 1);
      const Eigen::VectorXd pn = pi_k(spec, n);
      const PointMap tk1 = iterate_map(spec.map, k + 1);
      const PointMap tk = iterate_map(spec.map, k);
      const PointMap tkn = iterate_map_signed(spec.map, k - n);
      parts.lhs = pk1.cwiseAbs2().cwiseProduct(pullback(hk1, tk1));
      parts.rhs = pk.cwiseAbs2()
                      .cwiseProduct(pullback(Eigen::VectorXd(hk.cwiseProduct(hn)), tk))
                      .cwiseProduct(pullback(pn, tkn).cwiseAbs2());
      break;
    }
  }
  return parts;
}

double criterion_threshold(const CriterionParts& parts) {
  double thr = 0.0;
  for (Eigen::Index i = 0; i < parts.lhs.size(); ++i) {
    if (parts.lhs(i) == 0.0) {
      if (parts.rhs(i) > 0.0) return std::numeric_limits<double>::infinity();
      continue;
    }
    thr = std::max(thr, parts.rhs(i) / parts.lhs(i));
  }
  return thr;
}

bool criterion_holds(const CriterionParts& parts, double lambda_sq, double tol) {
  // Mirrors the PSD verdict rule: the criterion form is the diagonal of the
  // quadratic form, so min margin >= -tol * max(1, max margin).
  const Eigen::VectorXd margin = lambda_sq * parts.lhs - parts.rhs;
  return margin.minCoeff() >= -tol * std::max(1.0, margin.maxCoeff());
}

bool ct_criterion(const WeightedCompositionSpec& spec, long k, long n, double lambda_sq,
                  double tol) {
  return criterion_holds(criterion_parts(spec, CriterionKind::kComposition, k, n), lambda_sq,
                         tol);
}

bool ct_adjoint_criterion(const WeightedCompositionSpec& spec, long k, long n,
                          double lambda_sq, double tol) {
  return criterion_holds(criterion_parts(spec, CriterionKind::kCompositionAdjoint, k, n),
                         lambda_sq, tol);
}

bool wt_criterion(const WeightedCompositionSpec& spec, long k, long n, double lambda_sq,
                  double tol) {
  return criterion_holds(criterion_parts(spec, CriterionKind::kWeighted, k, n), lambda_sq, tol);
}

bool wt_adjoint_criterion(const WeightedCompositionSpec& spec, long k, long n,
                          double lambda_sq, double tol) {
  return criterion_holds(criterion_parts(spec, CriterionKind::kWeightedAdjoint, k, n),
                         lambda_sq, tol);
}

}  // namespace posinorm
