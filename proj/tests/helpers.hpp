#pragma once

#include <random>
#include <string>
#include <vector>

#include "posinorm/composition.hpp"
#include "posinorm/lambert.hpp"
#include "posinorm/operator.hpp"
#include "posinorm/partition.hpp"
#include "posinorm/space.hpp"

namespace testutil {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double uniform(double a, double b) {
    return a + (b - a) * std::uniform_real_distribution<double>(0.0, 1.0)(eng);
  }
  long integer(long a, long b) {
    return a + static_cast<long>(eng() % static_cast<std::uint64_t>(b - a + 1));
  }
};

inline posinorm::SpacePtr random_space(Rng& rng, long lo = 3, long hi = 8) {
  const long n = rng.integer(lo, hi);
  std::vector<std::string> names;
  Eigen::VectorXd masses(n);
  for (long i = 0; i < n; ++i) {
    names.push_back("a" + std::to_string(i));
    masses(i) = rng.uniform(0.5, 2.0);
  }
  return posinorm::make_space(std::move(names), std::move(masses));
}

inline posinorm::PointMap random_permutation(Rng& rng, posinorm::SpacePtr sp) {
  std::vector<Eigen::Index> img(static_cast<size_t>(sp->size()));
  for (Eigen::Index i = 0; i < sp->size(); ++i) img[static_cast<size_t>(i)] = i;
  std::shuffle(img.begin(), img.end(), rng.eng);
  return posinorm::PointMap(std::move(sp), std::move(img));
}

inline posinorm::PointMap random_map(Rng& rng, posinorm::SpacePtr sp) {
  std::vector<Eigen::Index> img(static_cast<size_t>(sp->size()));
  for (auto& v : img) v = rng.integer(0, sp->size() - 1);
  return posinorm::PointMap(std::move(sp), std::move(img));
}

inline posinorm::Partition random_partition(Rng& rng, posinorm::SpacePtr sp,
                                            long max_blocks = 3) {
  const long nb = rng.integer(1, max_blocks);
  std::vector<std::vector<Eigen::Index>> blocks(static_cast<size_t>(nb));
  for (Eigen::Index i = 0; i < sp->size(); ++i)
    blocks[static_cast<size_t>(rng.integer(0, nb - 1))].push_back(i);
  std::vector<std::vector<Eigen::Index>> nonempty;
  for (auto& b : blocks)
    if (!b.empty()) nonempty.push_back(std::move(b));
  return posinorm::Partition(std::move(sp), std::move(nonempty));
}

inline Eigen::VectorXd random_density(Rng& rng, Eigen::Index n, double lo = 0.0,
                                      double hi = 2.0) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

inline Eigen::VectorXcd random_complex_vector(Rng& rng, Eigen::Index n) {
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v(i) = std::complex<double>(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return v;
}

inline posinorm::LinearOp random_operator(Rng& rng, posinorm::SpacePtr sp,
                                          bool rank_deficient = false) {
  const Eigen::Index n = sp->size();
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = std::complex<double>(rng.uniform(-1, 1), rng.uniform(-1, 1));
  if (rank_deficient && n >= 2) {
    m.col(n - 1) = m.col(0);  // collapse rank
    if (n >= 4) m.row(n - 2).setZero();
  }
  return posinorm::LinearOp(std::move(sp), std::move(m));
}

// <Af,g> == <f,A*g> probed on random vector pairs.
inline double adjoint_identity_residual(Rng& rng, const posinorm::LinearOp& a,
                                        const posinorm::LinearOp& astar, int trials = 20) {
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Eigen::VectorXcd f = random_complex_vector(rng, a.dim());
    const Eigen::VectorXcd g = random_complex_vector(rng, a.dim());
    const auto lhs = posinorm::weighted_inner(*a.space(), a.apply(f), g);
    const auto rhs = posinorm::weighted_inner(*a.space(), f, astar.apply(g));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace testutil
