#include "posinorm/operator.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace posinorm {

LinearOp::LinearOp(SpacePtr space, Eigen::MatrixXcd entries)
    : space_(std::move(space)), mat_(std::move(entries)) {
  if (!space_) throw std::invalid_argument("LinearOp: null space");
  if (mat_.rows() != mat_.cols() || mat_.rows() != space_->size())
    throw std::invalid_argument("LinearOp: matrix must be square of the space dimension");
}

LinearOp LinearOp::identity(SpacePtr space) {
  const Eigen::Index n = space->size();
  return LinearOp(std::move(space), Eigen::MatrixXcd::Identity(n, n));
}

LinearOp LinearOp::zero(SpacePtr space) {
  const Eigen::Index n = space->size();
  return LinearOp(std::move(space), Eigen::MatrixXcd::Zero(n, n));
}

LinearOp LinearOp::diagonal(SpacePtr space, const Eigen::VectorXd& d) {
  return diagonal(std::move(space), d.cast<std::complex<double>>().eval());
}

LinearOp LinearOp::diagonal(SpacePtr space, const Eigen::VectorXcd& d) {
  if (d.size() != space->size())
    throw std::invalid_argument("LinearOp::diagonal: length mismatch");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d.size(), d.size());
  m.diagonal() = d;
  return LinearOp(std::move(space), std::move(m));
}

Eigen::VectorXcd LinearOp::apply(const Eigen::VectorXcd& f) const {
  if (f.size() != dim()) throw std::invalid_argument("LinearOp::apply: dimension mismatch");
  return mat_ * f;
}

LinearOp LinearOp::pow(long k) const {
  if (k < 0) throw std::invalid_argument("LinearOp::pow: k >= 0 required");
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(dim(), dim());
  Eigen::MatrixXcd base = mat_;
  while (k > 0) {
    if (k & 1) r = r * base;
    base = base * base;
    k >>= 1;
  }
  return LinearOp(space_, std::move(r));
}

double LinearOp::max_abs_diff(const LinearOp& other) const {
  check_same_space(space_, other.space_, "LinearOp::max_abs_diff");
  return (mat_ - other.mat_).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd LinearOp::unweighted() const {
  const Eigen::VectorXd s = space_->masses().cwiseSqrt();
  return s.asDiagonal() * mat_ * s.cwiseInverse().asDiagonal();
}

LinearOp operator*(const LinearOp& a, const LinearOp& b) {
  check_same_space(a.space_, b.space_, "LinearOp::operator*");
  return LinearOp(a.space_, a.mat_ * b.mat_);
}

LinearOp operator+(const LinearOp& a, const LinearOp& b) {
  check_same_space(a.space_, b.space_, "LinearOp::operator+");
  return LinearOp(a.space_, a.mat_ + b.mat_);
}

LinearOp operator-(const LinearOp& a, const LinearOp& b) {
  check_same_space(a.space_, b.space_, "LinearOp::operator-");
  return LinearOp(a.space_, a.mat_ - b.mat_);
}

LinearOp operator*(double s, const LinearOp& a) { return LinearOp(a.space_, s * a.mat_); }

LinearOp adjoint(const LinearOp& a) {
  const Eigen::VectorXd& m = a.space()->masses();
  const Eigen::Index n = a.dim();
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = m(j) / m(i) * std::conj(a.matrix()(j, i));
  return LinearOp(a.space(), std::move(out));
}

namespace {

Eigen::MatrixXcd pinv_unweighted(const Eigen::MatrixXcd& b, double rank_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() == 0) return Eigen::MatrixXcd::Zero(b.cols(), b.rows());
  const double cut = rank_tol * sv(0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.cast<std::complex<double>>().asDiagonal() *
         svd.matrixU().adjoint();
}

}  // namespace

LinearOp pinv(const LinearOp& a, double rank_tol) {
  if (!(rank_tol > 0)) throw std::invalid_argument("pinv: rank_tol > 0 required");
  // Conjugating by diag(sqrt m) turns the weighted adjoint into the plain one,
  // so the unweighted pseudoinverse conjugated back satisfies all four axioms.
  const Eigen::VectorXd s = a.space()->masses().cwiseSqrt();
  Eigen::MatrixXcd bdag = pinv_unweighted(a.unweighted(), rank_tol);
  Eigen::MatrixXcd out = s.cwiseInverse().asDiagonal() * bdag * s.asDiagonal();
  return LinearOp(a.space(), std::move(out));
}

LinearOp cauchy_dual(const LinearOp& a, double rank_tol) {
  return a * pinv(adjoint(a) * a, rank_tol);
}

namespace {

PsdVerdict verdict_from_hermitian(const Eigen::MatrixXcd& herm, double tol,
                                  const Eigen::VectorXd* inv_sqrt_masses,
                                  const LinearOp* original) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  PsdVerdict v;
  v.min_eigenvalue = es.eigenvalues().minCoeff();
  v.max_eigenvalue = es.eigenvalues().maxCoeff();
  v.is_psd = v.min_eigenvalue >= -tol * std::max(1.0, v.max_eigenvalue);
  if (!v.is_psd) {
    Eigen::Index which = 0;
    es.eigenvalues().minCoeff(&which);
    Eigen::VectorXcd w = es.eigenvectors().col(which);
    if (inv_sqrt_masses) w = inv_sqrt_masses->asDiagonal() * w;
    v.witness = w;
    if (original)
      v.witness_form_value = weighted_inner(*original->space(), original->apply(w), w).real();
    else
      v.witness_form_value = (w.adjoint() * herm * w)(0, 0).real();
  }
  return v;
}

void require_hermitian(const Eigen::MatrixXcd& b, double tol, const char* where) {
  const double asym = (b - b.adjoint()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (asym > tol * scale)
    throw std::runtime_error(std::string(where) +
                             ": operator is not self-adjoint within tolerance (asymmetry " +
                             std::to_string(asym) + ")");
}

}  // namespace

PsdVerdict is_psd(const LinearOp& m, double tol) {
  Eigen::MatrixXcd b = m.unweighted();
  require_hermitian(b, tol, "is_psd");
  Eigen::MatrixXcd sym = 0.5 * (b + b.adjoint().eval());
  const Eigen::VectorXd inv_sqrt = m.space()->masses().cwiseSqrt().cwiseInverse();
  return verdict_from_hermitian(sym, tol, &inv_sqrt, &m);
}

PsdVerdict psd_verdict_hermitian(const Eigen::MatrixXcd& m, double tol) {
  require_hermitian(m, tol, "psd_verdict_hermitian");
  Eigen::MatrixXcd sym = 0.5 * (m + m.adjoint().eval());
  return verdict_from_hermitian(sym, tol, nullptr, nullptr);
}

double minimal_lambda_sq_pencil(const Eigen::MatrixXcd& p, const Eigen::MatrixXcd& q,
                                double rank_tol) {
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esp(0.5 * (p + p.adjoint().eval()));
  const Eigen::VectorXd ev = esp.eigenvalues();
  const double pmax = ev.size() ? ev.maxCoeff() : 0.0;
  const double qscale = std::max(1.0, q.cwiseAbs().maxCoeff());

  if (pmax <= rank_tol * qscale) {
    // P vanishes: feasible only if Q does too.
    return q.cwiseAbs().maxCoeff() <= rank_tol * std::max(1.0, qscale) ? 0.0 : inf;
  }

  const double cut = rank_tol * pmax;
  std::vector<Eigen::Index> range_idx, kernel_idx;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    (ev(i) > cut ? range_idx : kernel_idx).push_back(i);

  // Feasibility needs ker(P) inside ker(Q); Q is PSD so kernel energy decides.
  for (Eigen::Index i : kernel_idx) {
    const Eigen::VectorXcd v = esp.eigenvectors().col(i);
    const double energy = (v.adjoint() * q * v)(0, 0).real();
    if (energy > rank_tol * qscale) return inf;
  }

  Eigen::MatrixXcd w(p.rows(), static_cast<Eigen::Index>(range_idx.size()));
  for (size_t c = 0; c < range_idx.size(); ++c)
    w.col(static_cast<Eigen::Index>(c)) =
        esp.eigenvectors().col(range_idx[c]) / std::sqrt(ev(range_idx[c]));
  Eigen::MatrixXcd reduced = w.adjoint() * q * w;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esr(0.5 * (reduced + reduced.adjoint().eval()));
  return esr.eigenvalues().size() ? std::max(0.0, esr.eigenvalues().maxCoeff()) : 0.0;
}

FormPencil kq_np_pencil(const LinearOp& a, long k, long n) {
  if (n < 1) throw std::invalid_argument("kq_np_pencil: n >= 1 required");
  if (k < 0) throw std::invalid_argument("kq_np_pencil: k >= 0 required");
  const Eigen::MatrixXcd b = a.unweighted();
  Eigen::MatrixXcd bk = Eigen::MatrixXcd::Identity(b.rows(), b.cols());
  for (long i = 0; i < k; ++i) bk = bk * b;
  Eigen::MatrixXcd bk1 = bk * b;
  Eigen::MatrixXcd bn = Eigen::MatrixXcd::Identity(b.rows(), b.cols());
  for (long i = 0; i < n; ++i) bn = bn * b;
  FormPencil fp;
  fp.p = bk1.adjoint() * bk1;
  fp.q = bk.adjoint() * bn * bn.adjoint() * bk;
  return fp;
}

double minimal_lambda_sq(const LinearOp& a, long k, long n, double rank_tol) {
  const FormPencil fp = kq_np_pencil(a, k, n);
  return minimal_lambda_sq_pencil(fp.p, fp.q, rank_tol);
}

}  // namespace posinorm
