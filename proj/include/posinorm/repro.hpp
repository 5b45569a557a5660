#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "posinorm/json_io.hpp"

namespace posinorm::repro {

using io::Json;

/// Grid sizes and tolerances for the built-in reference scenarios. Moment
/// tolerances scale as max(1e-6, 2/N^2) with the midpoint-rule error, and a
/// claim checked at a coarser-than-default grid is flagged tolerance_adjusted.
struct ReproConfig {
  long involution_n = 100;
  long multiplication_n = 200;
  long rank_one_n = 10000;
  long rank_one_dense_n = 400;
  long tree_depth = 16;
  long tree_interior_depth = 9;
  std::uint64_t seed = 0;
  double psd_tol = kDefaultPsdTol;
  double rank_tol = kDefaultRankTol;
  std::vector<std::string> select;  // section names; empty runs all
};

/// Section names: involution-composition, identity-weighted-multiplication,
/// rank-one-conditional, two-branch-tree.
Json run_paper_examples(const ReproConfig& config);

struct OracleConfig {
  std::uint64_t seed = 0;
  int comp_trials = 400;
  int lambert_trials = 200;
  int tree_trials = 100;
  double psd_tol = kDefaultPsdTol;
  double rank_tol = kDefaultRankTol;
  /// Test hook: wraps every criterion verdict before comparison, so the
  /// harness itself can be checked to detect a corrupted criterion.
  std::function<bool(bool)> mutate_criterion;
};

/// Randomized cross-validation of the pointwise criteria against the direct
/// PSD route. Any disagreement fails the report.
Json run_oracle_check(const OracleConfig& config);

/// Smallest lambda^2 with feasible(lambda^2) true, located by doubling and
/// bisection; +infinity when infeasible up to lambda_cap. Past roughly
/// 1/epsilon the combined matrix lambda^2 P - Q can no longer resolve Q in
/// floating point, so callers probing "no lambda works" should cap well below
/// that.
double bisect_minimal_lambda_sq(const std::function<bool(double)>& feasible,
                                double lambda_cap = 1e30);

bool report_passed(const Json& report);

}  // namespace posinorm::repro
