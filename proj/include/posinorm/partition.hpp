#pragma once

#include <Eigen/Core>
#include <vector>

#include "posinorm/operator.hpp"
#include "posinorm/space.hpp"

namespace posinorm {

/// A sigma-subalgebra of the atomic algebra, stored as a partition of the
/// atom indices into disjoint nonempty blocks covering the space.
class Partition {
public:
  Partition(SpacePtr space, std::vector<std::vector<Eigen::Index>> blocks);

  static Partition trivial(SpacePtr space);   // one block
  static Partition discrete(SpacePtr space);  // singletons

  const SpacePtr& space() const { return space_; }
  const std::vector<std::vector<Eigen::Index>>& blocks() const { return blocks_; }
  size_t block_count() const { return blocks_.size(); }
  size_t block_of(Eigen::Index atom) const { return block_of_[static_cast<size_t>(atom)]; }
  double block_mass(size_t b) const { return block_mass_[b]; }

private:
  SpacePtr space_;
  std::vector<std::vector<Eigen::Index>> blocks_;
  std::vector<size_t> block_of_;
  std::vector<double> block_mass_;
};

/// Conditional expectation onto the partition: constant on each block B with
/// value (sum_{i in B} f_i m_i) / mass(B). Complex input is handled
/// componentwise on real and imaginary parts.
Eigen::VectorXd cond_exp(const Partition& p, const Eigen::VectorXd& f);
Eigen::VectorXcd cond_exp(const Partition& p, const Eigen::VectorXcd& f);

/// Fibers of T^n: the atoms of T^{-n}(Sigma).
Partition partition_from_map(const PointMap& map, long n);

/// Indices with |f_i| > threshold.
std::vector<Eigen::Index> support(const Eigen::VectorXd& f, double threshold);

/// Numeric-zero cutoff used when no explicit threshold is given: 1e-10 * max|f|.
double default_support_threshold(const Eigen::VectorXd& f);

/// The block-averaging operator as a matrix, E(i,j) = m_j / mass(B) for i, j in
/// the same block. Self-adjoint and idempotent in the weighted geometry.
LinearOp expectation_matrix(const Partition& p);

}  // namespace posinorm
