#include "posinorm/posinormal.hpp"

namespace posinorm {

PosinormalityReport is_kq_np_posinormal(const LinearOp& t, long k, long n, double lambda_sq,
                                        double tol, const std::string& operator_id) {
  if (n < 1) throw std::invalid_argument("is_kq_np_posinormal: n >= 1 required");
  if (k < 0) throw std::invalid_argument("is_kq_np_posinormal: k >= 0 required");
  if (!(lambda_sq > 0)) throw std::invalid_argument("is_kq_np_posinormal: lambda_sq > 0 required");

  const FormPencil fp = kq_np_pencil(t, k, n);
  const PsdVerdict v = psd_verdict_hermitian(lambda_sq * fp.p - fp.q, tol);

  PosinormalityReport r;
  r.operator_id = operator_id;
  r.k = k;
  r.n = n;
  r.lambda_sq = lambda_sq;
  r.verdict = v.is_psd;
  r.min_eigenvalue = v.min_eigenvalue;
  r.minimal_lambda_sq = minimal_lambda_sq_pencil(fp.p, fp.q);
  r.method = "direct-psd";
  return r;
}

PosinormalityReport is_posinormal(const LinearOp& t, double lambda_sq, double tol,
                                  const std::string& operator_id) {
  return is_kq_np_posinormal(t, 0, 1, lambda_sq, tol, operator_id);
}

PosinormalityReport is_n_power_posinormal(const LinearOp& t, long n, double lambda_sq,
                                          double tol, const std::string& operator_id) {
  return is_kq_np_posinormal(t, 0, n, lambda_sq, tol, operator_id);
}

}  // namespace posinorm
