#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "posinorm/operator.hpp"
#include "posinorm/posinormal.hpp"

namespace posinorm {

/// Finite truncation of a rooted directed tree with nonnegative edge weights.
/// weights(v) is the weight of the edge into v; the root entry is unused.
struct TreeTrunc {
  std::vector<std::string> vertices;
  Eigen::Index root = 0;
  std::vector<Eigen::Index> parent;  // -1 at the root
  Eigen::VectorXd weights;
  std::vector<long> depth;
  long max_depth = 0;

  TreeTrunc(std::vector<std::string> vertices_, Eigen::Index root_,
            std::vector<Eigen::Index> parent_, Eigen::VectorXd weights_);

  Eigen::Index size() const { return static_cast<Eigen::Index>(vertices.size()); }
  std::vector<Eigen::Index> children(Eigen::Index v) const;
  long max_branching() const;
};

/// Named recipe producing truncations of an infinite tree at any depth.
/// Truncating at depth D and restricting to depth D-1 matches truncating at
/// D-1 directly.
class TreeGenerator {
public:
  /// One root with two infinite branches; branch one has weight 1 then 2
  /// forever, branch two has weights 1, 1/2, then 1 forever.
  static TreeGenerator two_branch();
  /// Every vertex has `arity` children, every edge the same weight.
  static TreeGenerator uniform(int arity, double weight);
  /// Single path whose edge weight at depth d is d (an unbounded weight trend).
  static TreeGenerator depth_weighted_path();

  static TreeGenerator by_name(const std::string& name, int arity, double weight);

  TreeTrunc truncate(long depth) const;
  const std::string& name() const { return name_; }

private:
  TreeGenerator(std::string name, int arity, double weight);
  std::string name_;
  int arity_ = 1;
  double weight_ = 1.0;
};

/// The shift (Sf)(v) = mu_v f(par(v)) as an operator on the uniform-mass
/// space over the vertices (the standard orthonormal basis geometry).
LinearOp shift_matrix(const TreeTrunc& tree);

/// Checks the adjoint against the displayed action S* e_u = mu_u e_{par(u)}
/// (zero at the root) on every basis vector. Throws on mismatch beyond tol.
bool shift_adjoint_check(const TreeTrunc& tree, double tol = 1e-12);

struct BoundednessReport {
  double sup_weight = 0.0;
  long max_branching = 0;
  bool bounded = true;
  bool unbounded_trend = false;  // sup weight still growing with probe depth
  long probe_depth = 0;
  double sup_weight_half_depth = 0.0;
};

/// Probes a generator's truncation: sup |mu_v| and max branching. Only the
/// truncation is seen, so a growing sup between depth/2 and depth is reported
/// as an unbounded trend.
BoundednessReport boundedness_report(const TreeGenerator& gen, long probe_depth);

/// Interior-compressed k-quasi n-power posinormality test. The form
/// lambda^2 S^{*(k+1)}S^{k+1} - S^{*k}S^nS^{*n}S^k is built on the full
/// truncation and restricted to vectors supported at depth <= interior_depth,
/// so no power of a test vector reaches the cut boundary. Requires
/// interior_depth + k + n + 1 <= tree depth.
PosinormalityReport tree_kq_np_check(const TreeTrunc& tree, long k, long n, double lambda_sq,
                                     long interior_depth, double tol = kDefaultPsdTol,
                                     double rank_tol = kDefaultRankTol);

/// Least feasible lambda^2 of the interior-compressed form.
double tree_minimal_lambda_sq(const TreeTrunc& tree, long k, long n, long interior_depth,
                              double rank_tol = kDefaultRankTol);

/// Indices of vertices at depth <= interior_depth.
std::vector<Eigen::Index> interior_vertices(const TreeTrunc& tree, long interior_depth);

/// Tree-recursive applications of S and S*, independent of the matrix path.
Eigen::VectorXcd tree_shift_apply(const TreeTrunc& tree, const Eigen::VectorXcd& f);
Eigen::VectorXcd tree_shift_adjoint_apply(const TreeTrunc& tree, const Eigen::VectorXcd& f);

}  // namespace posinorm
