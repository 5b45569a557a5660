#include "posinorm/partition.hpp"

#include <algorithm>
#include <cmath>

namespace posinorm {

Partition::Partition(SpacePtr space, std::vector<std::vector<Eigen::Index>> blocks)
    : space_(std::move(space)), blocks_(std::move(blocks)) {
  if (!space_) throw std::invalid_argument("Partition: null space");
  const size_t n = static_cast<size_t>(space_->size());
  block_of_.assign(n, SIZE_MAX);
  block_mass_.assign(blocks_.size(), 0.0);
  for (size_t b = 0; b < blocks_.size(); ++b) {
    if (blocks_[b].empty()) throw std::invalid_argument("Partition: empty block");
    for (Eigen::Index i : blocks_[b]) {
      if (i < 0 || static_cast<size_t>(i) >= n)
        throw std::invalid_argument("Partition: atom index out of range");
      if (block_of_[static_cast<size_t>(i)] != SIZE_MAX)
        throw std::invalid_argument("Partition: blocks overlap at atom " + std::to_string(i));
      block_of_[static_cast<size_t>(i)] = b;
      block_mass_[b] += space_->mass(i);
    }
  }
  for (size_t i = 0; i < n; ++i)
    if (block_of_[i] == SIZE_MAX)
      throw std::invalid_argument("Partition: atom " + std::to_string(i) + " not covered");
}

Partition Partition::trivial(SpacePtr space) {
  std::vector<Eigen::Index> all(static_cast<size_t>(space->size()));
  for (Eigen::Index i = 0; i < space->size(); ++i) all[static_cast<size_t>(i)] = i;
  return Partition(std::move(space), {std::move(all)});
}

Partition Partition::discrete(SpacePtr space) {
  std::vector<std::vector<Eigen::Index>> blocks;
  blocks.reserve(static_cast<size_t>(space->size()));
  for (Eigen::Index i = 0; i < space->size(); ++i) blocks.push_back({i});
  return Partition(std::move(space), std::move(blocks));
}

Eigen::VectorXd cond_exp(const Partition& p, const Eigen::VectorXd& f) {
  if (f.size() != p.space()->size()) throw std::invalid_argument("cond_exp: length mismatch");
  const auto& m = p.space()->masses();
  Eigen::VectorXd out(f.size());
  for (size_t b = 0; b < p.block_count(); ++b) {
    double acc = 0.0;
    for (Eigen::Index i : p.blocks()[b]) acc += f(i) * m(i);
    const double avg = acc / p.block_mass(b);
    for (Eigen::Index i : p.blocks()[b]) out(i) = avg;
  }
  return out;
}

Eigen::VectorXcd cond_exp(const Partition& p, const Eigen::VectorXcd& f) {
  Eigen::VectorXd re = cond_exp(p, Eigen::VectorXd(f.real()));
  Eigen::VectorXd im = cond_exp(p, Eigen::VectorXd(f.imag()));
  Eigen::VectorXcd out(f.size());
  out.real() = re;
  out.imag() = im;
  return out;
}

Partition partition_from_map(const PointMap& map, long n) {
  if (n < 1) throw std::invalid_argument("partition_from_map: n >= 1 required");
  const PointMap tn = iterate_map(map, n);
  std::vector<std::vector<Eigen::Index>> fibers(static_cast<size_t>(map.size()));
  for (Eigen::Index j = 0; j < map.size(); ++j)
    fibers[static_cast<size_t>(tn(j))].push_back(j);
  std::vector<std::vector<Eigen::Index>> blocks;
  for (auto& f : fibers)
    if (!f.empty()) blocks.push_back(std::move(f));
  return Partition(map.space(), std::move(blocks));
}

std::vector<Eigen::Index> support(const Eigen::VectorXd& f, double threshold) {
  if (threshold < 0) throw std::invalid_argument("support: threshold >= 0 required");
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < f.size(); ++i)
    if (std::abs(f(i)) > threshold) out.push_back(i);
  return out;
}

double default_support_threshold(const Eigen::VectorXd& f) {
  return f.size() ? 1e-10 * f.cwiseAbs().maxCoeff() : 0.0;
}

LinearOp expectation_matrix(const Partition& p) {
  const Eigen::Index n = p.space()->size();
  const auto& m = p.space()->masses();
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, n);
  for (size_t b = 0; b < p.block_count(); ++b) {
    const double mb = p.block_mass(b);
    for (Eigen::Index i : p.blocks()[b])
      for (Eigen::Index j : p.blocks()[b]) e(i, j) = m(j) / mb;
  }
  return LinearOp(p.space(), std::move(e));
}

}  // namespace posinorm
