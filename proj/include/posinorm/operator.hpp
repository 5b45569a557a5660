#pragma once

#include <Eigen/Core>
#include <complex>
#include <optional>

#include "posinorm/space.hpp"

namespace posinorm {

inline constexpr double kDefaultPsdTol = 1e-9;
inline constexpr double kDefaultRankTol = 1e-10;

/// Dense operator on the functions-on-atoms of one space, domain = codomain.
/// The matrix acts on coordinate vectors, (Af)(i) = sum_j M(i,j) f(j); adjoints
/// are always taken in the mass-weighted inner product of the carrier space,
/// never the plain Euclidean one.
class LinearOp {
public:
  LinearOp(SpacePtr space, Eigen::MatrixXcd entries);

  static LinearOp identity(SpacePtr space);
  static LinearOp zero(SpacePtr space);
  static LinearOp diagonal(SpacePtr space, const Eigen::VectorXd& d);
  static LinearOp diagonal(SpacePtr space, const Eigen::VectorXcd& d);

  const SpacePtr& space() const { return space_; }
  const Eigen::MatrixXcd& matrix() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& f) const;
  LinearOp pow(long k) const;  // k >= 0

  /// Entrywise max |M - N| against another operator on the same space.
  double max_abs_diff(const LinearOp& other) const;
  double max_abs() const { return mat_.cwiseAbs().maxCoeff(); }

  /// Conjugation into the unweighted geometry, D M D^{-1} with D = diag(sqrt m).
  /// Weighted self-adjointness of M is plain Hermitian-ness of the result.
  Eigen::MatrixXcd unweighted() const;

  friend LinearOp operator*(const LinearOp& a, const LinearOp& b);
  friend LinearOp operator+(const LinearOp& a, const LinearOp& b);
  friend LinearOp operator-(const LinearOp& a, const LinearOp& b);
  friend LinearOp operator*(double s, const LinearOp& a);

private:
  SpacePtr space_;
  Eigen::MatrixXcd mat_;
};

/// Weighted adjoint: A*(i,j) = (m_j/m_i) conj(A(j,i)), the unique operator with
/// <Af,g> = <f,A*g> for the mass-weighted inner product.
LinearOp adjoint(const LinearOp& a);

/// Moore-Penrose pseudoinverse with the weighted adjoint in all four axioms.
/// Singular values below rank_tol * max singular value are treated as zero.
LinearOp pinv(const LinearOp& a, double rank_tol = kDefaultRankTol);

/// Cauchy dual A (A*A)^dagger. For invertible A*A this is A (A*A)^{-1}.
LinearOp cauchy_dual(const LinearOp& a, double rank_tol = kDefaultRankTol);

struct PsdVerdict {
  bool is_psd = false;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  /// Present when not PSD: coordinates of a vector with <Mv,v> < 0.
  std::optional<Eigen::VectorXcd> witness;
  /// The quadratic form at the witness, recomputed from the original operator.
  double witness_form_value = 0.0;
};

/// PSD test of a weighted-self-adjoint operator. The operator is conjugated to
/// the unweighted geometry, checked Hermitian up to tol * max(1, scale) (throws
/// otherwise: a construction bug upstream), symmetrized, and eigensolved.
/// Verdict: min_eig >= -tol * max(1, max_eig).
PsdVerdict is_psd(const LinearOp& m, double tol = kDefaultPsdTol);

/// Same test for a plain Hermitian matrix (identity-mass geometry).
PsdVerdict psd_verdict_hermitian(const Eigen::MatrixXcd& m, double tol = kDefaultPsdTol);

/// Least lambda^2 with lambda^2 P - Q >= 0 for the Hermitian PSD pencil (P, Q):
/// the largest generalized eigenvalue of (Q, P) on the range of P when
/// ker(P) is contained in ker(Q), +infinity otherwise.
double minimal_lambda_sq_pencil(const Eigen::MatrixXcd& p, const Eigen::MatrixXcd& q,
                                double rank_tol = kDefaultRankTol);

/// Least feasible lambda^2 in T^{*k}(lambda^2 T*T - T^n T^{*n}) T^k >= 0,
/// i.e. the pencil value for P = T^{*(k+1)}T^{k+1}, Q = T^{*k}T^nT^{*n}T^k.
double minimal_lambda_sq(const LinearOp& a, long k, long n,
                         double rank_tol = kDefaultRankTol);

/// The two pencil sides in unweighted coordinates, shared by the predicates.
struct FormPencil {
  Eigen::MatrixXcd p;  // conjugated T^{*(k+1)}T^{k+1}
  Eigen::MatrixXcd q;  // conjugated T^{*k}T^nT^{*n}T^k
};
FormPencil kq_np_pencil(const LinearOp& a, long k, long n);

}  // namespace posinorm
