#pragma once

#include <optional>
#include <string>

#include "posinorm/operator.hpp"

namespace posinorm {

struct PosinormalityReport {
  std::string operator_id;
  long k = 0;
  long n = 1;
  std::optional<double> lambda_sq;
  bool verdict = false;
  double minimal_lambda_sq = 0.0;  // +infinity when no lambda works
  double min_eigenvalue = 0.0;
  std::string method;
};

/// lambda^2 T*T - TT* >= 0 at the given scale (k = 0, n = 1 of the family).
PosinormalityReport is_posinormal(const LinearOp& t, double lambda_sq,
                                  double tol = kDefaultPsdTol,
                                  const std::string& operator_id = "");

/// lambda^2 T*T - T^n T^{*n} >= 0.
PosinormalityReport is_n_power_posinormal(const LinearOp& t, long n, double lambda_sq,
                                          double tol = kDefaultPsdTol,
                                          const std::string& operator_id = "");

/// T^{*k}(lambda^2 T*T - T^n T^{*n}) T^k >= 0. k = 0 is admitted and recovers
/// the two cases above.
PosinormalityReport is_kq_np_posinormal(const LinearOp& t, long k, long n, double lambda_sq,
                                        double tol = kDefaultPsdTol,
                                        const std::string& operator_id = "");

}  // namespace posinorm
